pub mod corpus;
pub mod instances;
pub mod oracle;
pub mod stream;

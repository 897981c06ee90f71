pub mod dataset;
pub mod evaluate;
pub mod extract;
pub mod ledger;
pub mod registry;

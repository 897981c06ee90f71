//! Process exit codes. They are the only machine-readable failure channel.

use std::fmt::{Debug, Display};

/// Bad flags, unreadable config, or any failure without a dedicated code.
pub const USAGE: u8 = 1;
pub const BACKEND: u8 = 2;
pub const SINK: u8 = 3;
/// Input files that parse or validate badly.
pub const INVALID_INPUT: u8 = 4;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub error: anyhow::Error,
}

impl Failure {
    pub fn new(code: u8, error: impl Into<anyhow::Error>) -> Self {
        Failure { code, error: error.into() }
    }

    pub fn msg(code: u8, message: impl Display + Debug + Send + Sync + 'static) -> Self {
        Failure { code, error: anyhow::Error::msg(message) }
    }
}

pub type Outcome<T = ()> = Result<T, Failure>;

pub trait OrExit<T> {
    fn or_exit(self, code: u8) -> Outcome<T>;
}

impl<T, E: Into<anyhow::Error>> OrExit<T> for Result<T, E> {
    fn or_exit(self, code: u8) -> Outcome<T> {
        self.map_err(|e| Failure::new(code, e))
    }
}

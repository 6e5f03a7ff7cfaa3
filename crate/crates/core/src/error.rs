use core::fmt;

/// Errors raised by the core computations.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An [`ExperimentConfig`](crate::ExperimentConfig) field is out of range.
    Config(&'static str),
    /// A numeric parameter of a calibrator, oracle or engine is out of range.
    Parameter {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },
    /// An observation outside {0, 1}.
    NonBinary { index: usize, value: u8 },
    /// Inputs that violate an operation's preconditions.
    Contract(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Config(msg) => write!(f, "invalid configuration: {msg}"),
            Error::Parameter {
                name,
                value,
                expected,
            } => write!(f, "parameter {name} = {value} must be in {expected}"),
            Error::NonBinary { index, value } => {
                write!(f, "observation {index} is {value}, expected 0 or 1")
            }
            Error::Contract(msg) => write!(f, "contract violation: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

pub(crate) fn check_open_unit(name: &'static str, value: f64) -> crate::Result<()> {
    if value > 0.0 && value < 1.0 {
        Ok(())
    } else {
        Err(Error::Parameter {
            name,
            value,
            expected: "(0, 1)",
        })
    }
}

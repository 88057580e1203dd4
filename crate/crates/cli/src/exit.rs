use ffselect_core::Error;

pub const USAGE: u8 = 2;
pub const IO: u8 = 3;
pub const DATA: u8 = 4;
pub const NUMERICAL: u8 = 5;
pub const SELECTOR: u8 = 6;

/// Configuration problem detected by the CLI itself.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct UsageError(pub String);

pub fn core_code(e: &Error) -> u8 {
    match e {
        Error::Csv { source, .. } if source.is_io_error() => IO,
        Error::InvalidConfig(_) | Error::InvalidKernel(_) | Error::OrderOutOfRange { .. } => USAGE,
        Error::Io { .. } | Error::Json(_) => IO,
        Error::NonFinite { .. }
        | Error::ShapeMismatch(_)
        | Error::TooSmall { .. }
        | Error::DegenerateU
        | Error::MissingColumn(_)
        | Error::NonPositiveUForLog { .. }
        | Error::TooFewRows { .. }
        | Error::Parse { .. }
        | Error::Csv { .. } => DATA,
        Error::BandwidthTooSmall { .. }
        | Error::NotSymmetric { .. }
        | Error::NotPositiveSemidefinite { .. }
        | Error::NumericalFailure(_)
        | Error::CholeskyFailure => NUMERICAL,
        Error::BootstrapDegenerate { .. }
        | Error::ZeroLoadingColumn { .. }
        | Error::FoldTooSmall { .. }
        | Error::FailureBudget { .. } => SELECTOR,
    }
}

pub fn code_for(e: &anyhow::Error) -> u8 {
    if let Some(core) = e.downcast_ref::<Error>() {
        core_code(core)
    } else if e.downcast_ref::<UsageError>().is_some() {
        USAGE
    } else if e.downcast_ref::<std::io::Error>().is_some() {
        IO
    } else {
        1
    }
}

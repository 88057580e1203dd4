use std::path::PathBuf;
use std::str::FromStr;

use chrono::NaiveDate;
use clap::Args;
use ffselect_core::io::{ingest_csv, IngestSpec, IngestedPanel, ResponseColumns};
use ffselect_core::BandwidthRule;

/// Where the panel comes from and how it is prepared.
#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// CSV file with a header row.
    #[arg(long, short)]
    pub input: PathBuf,
    /// Column holding the exogenous variable U.
    #[arg(long)]
    pub u_column: String,
    /// Response columns (comma separated); default: every other column.
    #[arg(long, value_delimiter = ',')]
    pub responses: Vec<String>,
    /// ISO-8601 date column used for sorting and period filtering.
    #[arg(long)]
    pub date_column: Option<String>,
    /// First date kept (inclusive).
    #[arg(long, requires = "date_column")]
    pub date_start: Option<NaiveDate>,
    /// Last date kept (inclusive).
    #[arg(long, requires = "date_column")]
    pub date_end: Option<NaiveDate>,
    /// Use ln(U) instead of U.
    #[arg(long)]
    pub log_u: bool,
    /// Fail on missing values instead of dropping incomplete rows.
    #[arg(long)]
    pub keep_incomplete: bool,
}

impl InputArgs {
    pub fn spec(&self) -> IngestSpec {
        IngestSpec {
            path: self.input.clone(),
            u_column: self.u_column.clone(),
            response_columns: if self.responses.is_empty() {
                ResponseColumns::AllOthers
            } else {
                ResponseColumns::Named(self.responses.clone())
            },
            log_u: self.log_u,
            drop_incomplete: !self.keep_incomplete,
            date_column: self.date_column.clone(),
            date_start: self.date_start,
            date_end: self.date_end,
        }
    }

    pub fn ingest(&self) -> ffselect_core::Result<IngestedPanel> {
        ingest_csv(&self.spec())
    }
}

/// `rot`, `cv` or a positive number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandwidthArg(pub BandwidthRule);

impl FromStr for BandwidthArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "rot" | "rule-of-thumb" => Ok(Self(BandwidthRule::RuleOfThumb)),
            "cv" | "loocv" => Ok(Self(BandwidthRule::Loocv)),
            _ => match s.parse::<f64>() {
                Ok(h) if h > 0.0 && h.is_finite() => Ok(Self(BandwidthRule::Fixed(h))),
                _ => Err(format!(
                    "expected `rot`, `cv` or a positive number, got `{s}`"
                )),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bandwidth_argument_forms() {
        assert_eq!(
            "rot".parse::<BandwidthArg>().unwrap().0,
            BandwidthRule::RuleOfThumb
        );
        assert_eq!(
            "cv".parse::<BandwidthArg>().unwrap().0,
            BandwidthRule::Loocv
        );
        assert_eq!(
            "0.25".parse::<BandwidthArg>().unwrap().0,
            BandwidthRule::Fixed(0.25)
        );
        assert!("-1".parse::<BandwidthArg>().is_err());
        assert!("wide".parse::<BandwidthArg>().is_err());
    }
}

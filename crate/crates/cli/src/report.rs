use serde::Serialize;
use sphere_distal::distality::Verdict;
use sphere_distal::{Config, Error};

/// Exit statuses. Verdict commands use 0, 1 and 2 for Distal, NotDistal
/// and Inconclusive; other commands exit 0 on success.
pub mod exit {
    pub const OK: u8 = 0;
    pub const NOT_DISTAL: u8 = 1;
    pub const INCONCLUSIVE: u8 = 2;
    /// The input lies outside what the theory covers, or a hypothesis fails.
    pub const NOT_COVERED: u8 = 3;
    /// Malformed input: JSON, flags, dimensions, specifications.
    pub const PARSE: u8 = 64;
    pub const SINGULAR: u8 = 65;
    /// Translation that does not give a homeomorphism of the sphere.
    pub const TRANSLATION: u8 = 66;
    pub const INTERNAL: u8 = 70;
    /// Reading or writing files.
    pub const IO: u8 = 74;
}

pub fn verdict_code(v: Verdict) -> u8 {
    match v {
        Verdict::Distal => exit::OK,
        Verdict::NotDistal => exit::NOT_DISTAL,
        Verdict::Inconclusive => exit::INCONCLUSIVE,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Failure {
    #[serde(skip)]
    pub code: u8,
    pub kind: String,
    pub message: String,
}

impl Failure {
    pub fn parse(message: String) -> Self {
        Failure { code: exit::PARSE, kind: "ParseError".into(), message }
    }

    pub fn io(message: String) -> Self {
        Failure { code: exit::IO, kind: "IoError".into(), message }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::SingularMatrix { .. } => exit::SINGULAR,
            Error::DimensionMismatch { .. } | Error::NonFinite | Error::InvalidMatrix(_) | Error::InvalidSpec(_) => {
                exit::PARSE
            }
            Error::ZeroTranslation | Error::DegenerateMap | Error::NonInjective(_) | Error::InvalidTranslation(_) => {
                exit::TRANSLATION
            }
            Error::HypothesisNotMet(_)
            | Error::OutsideCoveredClasses(_)
            | Error::RealSpectrum
            | Error::NoPositiveRealEigenvalue
            | Error::NotOrthogonal(_)
            | Error::NotUnimodular(_)
            | Error::DimensionUnsupported(_) => exit::NOT_COVERED,
            Error::SpectrumCollision(_) => exit::INTERNAL,
        };
        let kind = format!("{e:?}");
        let kind = kind.split(['(', ' ', '{']).next().unwrap_or("Error").to_string();
        Failure { code, kind, message: e.to_string() }
    }
}

/// Everything needed to reproduce a run: the arguments, the effective
/// configuration, and the result. `wall_time_ms` is the only field that
/// differs between identical runs.
#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub config: Config,
    pub payload: serde_json::Value,
    pub wall_time_ms: f64,
    pub version: &'static str,
}

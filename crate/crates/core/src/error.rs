use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid metric parameters (lambda1 = {lambda1}, lambda2 = {lambda2}): {reason}")]
    InvalidMetric {
        lambda1: f64,
        lambda2: f64,
        reason: &'static str,
    },

    // numerics
    #[error("right-hand side returned a non-finite value at t = {t}")]
    NonFinite { t: f64 },
    #[error("step size underflow at t = {t} (h = {h:e})")]
    StepSizeUnderflow { t: f64, h: f64 },
    #[error("no sign change on bracket [{lo}, {hi}]: f(lo) = {flo}, f(hi) = {fhi}")]
    NoSignChange { lo: f64, hi: f64, flo: f64, fhi: f64 },
    #[error("adaptive quadrature did not converge on [{a}, {b}] (estimated error {estimate:e})")]
    NoConvergence { a: f64, b: f64, estimate: f64 },

    // weierstrass
    #[error("the zero-potential vanishes at g = {g}")]
    PotentialVanishes { g: num_complex::Complex64 },
    #[error("Gauss map is at a pole or not finite (g = {g})")]
    GaussMapAtPole { g: num_complex::Complex64 },
    #[error("induced metric degenerates (E = {e:e})")]
    DegenerateMetric { e: f64 },

    // helicoid
    #[error("helicoid parameter K = {k} must satisfy 0 < |K| < 1 - 1e-6")]
    InvalidK { k: f64 },
    #[error("no root found: {0}")]
    NoRoot(String),

    // catenoid
    #[error("(c, theta) = ({c}, {theta}) lies outside the admissible domain (|theta| < {theta_plus})")]
    OutsideOmega { c: f64, theta: f64, theta_plus: f64 },
    #[error("phi'^2 lost positivity ({0})")]
    PositivityViolated(String),
    #[error("could not bracket the period root for c = {c}")]
    BracketingFailed { c: f64 },
    #[error("period obstruction: |H(c, theta)| = {h:e} exceeds {tol:e}")]
    PeriodObstruction { h: f64, tol: f64 },
    #[error("need at least {min} samples, got {got}")]
    InsufficientSamples { min: usize, got: usize },

    // cli / io
    #[error("config error in `{field}`: {message}")]
    Config { field: String, message: String },
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }
}

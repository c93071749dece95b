use thiserror::Error;

/// Which part of a composite integration failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stage {
    Adaptive,
    PropagatingLeg,
    EvanescentLeg,
    FrequencyPanel,
    Matsubara,
}

impl std::fmt::Display for Stage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Stage::Adaptive => "adaptive",
            Stage::PropagatingLeg => "propagating leg",
            Stage::EvanescentLeg => "evanescent leg",
            Stage::FrequencyPanel => "frequency panel",
            Stage::Matsubara => "matsubara sum",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("frequency {omega:e} rad/s outside tabulated range [{min:e}, {max:e}]")]
    OutOfRange { omega: f64, min: f64, max: f64 },

    #[error("singular denominator in {what} at omega = {omega:e}, p = {p_re:e}{p_im:+e}i")]
    Singularity {
        what: &'static str,
        omega: f64,
        p_re: f64,
        p_im: f64,
    },

    #[error(
        "{stage} did not converge on [{a:e}, {b:e}]: value {value:e}, error {error:e} after {evaluations} evaluations"
    )]
    Convergence {
        stage: Stage,
        a: f64,
        b: f64,
        value: f64,
        error: f64,
        evaluations: usize,
    },

    #[error("model mismatch: {0}")]
    ModelMismatch(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("table error: {0}")]
    Table(String),
}

impl Error {
    /// Tags an adaptive convergence failure with the stage it surfaced
    /// through. Failures already tagged by an inner stage keep their tag.
    pub fn in_stage(self, stage: Stage) -> Self {
        match self {
            Error::Convergence {
                stage: Stage::Adaptive,
                a,
                b,
                value,
                error,
                evaluations,
                ..
            } => Error::Convergence {
                stage,
                a,
                b,
                value,
                error,
                evaluations,
            },
            other => other,
        }
    }

    pub fn is_convergence(&self) -> bool {
        matches!(self, Error::Convergence { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;

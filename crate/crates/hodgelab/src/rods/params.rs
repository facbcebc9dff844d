use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ParamError {
    #[error("epsilon must lie in (0, 1), got {0}")]
    Epsilon(f64),
    #[error("rod weight w must be positive, got {0}")]
    RodWeight(f64),
    #[error("coupling weight w01 must be positive, got {0}")]
    CouplingWeight(f64),
}

/// Parameters of the two-rod problem: overlap half-width `epsilon`, load
/// magnitude `r`, rod material coefficient `w`, coupling coefficient `w01`.
///
/// The load is `f = (r on (-1,-ε), -r on (ε,1))`, zero on the overlap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RodParams {
    pub epsilon: f64,
    pub r: f64,
    pub w: f64,
    pub w01: f64,
}

impl RodParams {
    pub fn new(epsilon: f64, r: f64, w: f64, w01: f64) -> Result<Self, ParamError> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(ParamError::Epsilon(epsilon));
        }
        if !(w > 0.0) {
            return Err(ParamError::RodWeight(w));
        }
        if !(w01 > 0.0) {
            return Err(ParamError::CouplingWeight(w01));
        }
        Ok(Self { epsilon, r, w, w01 })
    }

    /// Decay rate of the coupling boundary layer, `μ = sqrt(2 w01 / (w ε))`.
    pub fn mu(&self) -> f64 {
        (2.0 * self.w01 / (self.w * self.epsilon)).sqrt()
    }
}

use serde::{Deserialize, Serialize};

use super::DynamicsError;
use crate::spectral::Grid;

/// Operator-splitting scheme.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    /// Half linear, full nonlinear, half linear.
    #[default]
    Strang,
    /// Full linear, full nonlinear.
    Lie,
}

/// Parameters of `i∂ₜu − |∇|^α u = λ(|x|^{−γ} ∗ |u|²)u` on the periodic box.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub alpha: f64,
    pub gamma: f64,
    pub lambda: f64,
    pub n: usize,
    pub length: f64,
    pub dt: f64,
    pub t_end: f64,
    pub epsilon0: f64,
    pub scheme: Scheme,
    pub dealias: bool,
}

impl SimConfig {
    /// Coulomb configuration with the given box, order and horizon; the
    /// remaining fields take their defaults.
    pub fn new(n: usize, length: f64, alpha: f64, t_end: f64) -> Self {
        Self {
            alpha,
            gamma: 1.0,
            lambda: 1.0,
            n,
            length,
            dt: 0.01,
            t_end,
            epsilon0: 0.05,
            scheme: Scheme::Strang,
            dealias: true,
        }
    }

    pub fn validate(&self) -> Result<(), DynamicsError> {
        let bad = |name: &'static str, value: f64, range: &'static str| {
            Err(DynamicsError::InvalidParameter { name, value, range })
        };
        if !(self.alpha > 1.0 && self.alpha <= 2.0) {
            return bad("alpha", self.alpha, "(1, 2]");
        }
        if !(self.gamma > 0.0 && self.gamma < 3.0) {
            return bad("gamma", self.gamma, "(0, 3)");
        }
        // λ = 0 is accepted as the free-flow control run.
        if !self.lambda.is_finite() {
            return bad("lambda", self.lambda, "finite");
        }
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return bad("dt", self.dt, "(0, t_end)");
        }
        if !(self.t_end.is_finite() && self.t_end > 0.0) {
            return bad("t_end", self.t_end, "(0, ∞)");
        }
        if self.dt >= self.t_end {
            return bad("dt", self.dt, "(0, t_end)");
        }
        if !(self.epsilon0.is_finite() && self.epsilon0 > 0.0) {
            return bad("epsilon0", self.epsilon0, "(0, ∞)");
        }
        Grid::new(self.n, self.length)?;
        Ok(())
    }

    pub fn grid(&self) -> Result<Grid, DynamicsError> {
        Ok(Grid::new(self.n, self.length)?)
    }
}

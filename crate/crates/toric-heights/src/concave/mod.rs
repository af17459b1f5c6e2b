//! Concave calculus: exact piecewise-affine functions, sampled functions of
//! two variables, and the mixed integral operator.

pub mod grid;
pub(crate) mod hull3;
pub mod mixed;
pub mod pa;

pub use grid::GridConcave;
pub use mixed::{
    ConcaveFn, PerturbationCheck, mixed_integral, mixed_integral_exact, perturbation_constant,
    uniform_perturbation_bound,
};
pub use pa::{AffinePiece, LiftedPoint, PaConcave};

/// A number with an additive error bound: the true value lies in
/// `[value − error, value + error]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Estimate { value, error: 0.0 }
    }

    pub fn from_bounds(lo: f64, hi: f64) -> Self {
        Estimate { value: 0.5 * (lo + hi), error: 0.5 * (hi - lo).abs() }
    }

    pub fn lo(&self) -> f64 {
        self.value - self.error
    }

    pub fn hi(&self) -> f64 {
        self.value + self.error
    }

    /// True when `x` lies within the error bound widened by `slack`.
    pub fn contains(&self, x: f64, slack: f64) -> bool {
        (x - self.value).abs() <= self.error + slack
    }

    pub fn scale(&self, c: f64) -> Self {
        Estimate { value: self.value * c, error: self.error * c.abs() }
    }
}

impl core::ops::Add for Estimate {
    type Output = Estimate;
    fn add(self, o: Estimate) -> Estimate {
        Estimate { value: self.value + o.value, error: self.error + o.error }
    }
}

impl core::ops::Sub for Estimate {
    type Output = Estimate;
    fn sub(self, o: Estimate) -> Estimate {
        Estimate { value: self.value - o.value, error: self.error + o.error }
    }
}

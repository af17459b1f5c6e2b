//! Frozen reference values and pilot-run constants (`fixtures/pilot.json`).
//!
//! Oracles were computed independently of this code and frozen. Pilot
//! values record one run of the pipeline and serve as regressions only.

use serde::Deserialize;

#[derive(Clone, Debug, Deserialize, PartialEq)]
pub struct Oracle {
    pub value: f64,
    pub error: f64,
    pub provenance: String,
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
pub struct Oracles {
    /// `m(1 + x + y)`.
    pub mahler_line: Oracle,
    /// Limit of the cycle heights for `f = g = 1 + x + y` on `P¹ × P¹`.
    pub desk_limit: Oracle,
    /// Height of the cycle for `f = g = 1 + x + y`, `ω = (1, (ζ₅, ζ₅²))`.
    pub cycle_zeta5: Oracle,
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
pub struct Thresholds {
    pub convergence_tail: f64,
    pub rhs_error: f64,
    pub equidist: f64,
    pub ronkin_segment: f64,
    pub ronkin_line: f64,
    pub stability_epsilons: Vec<f64>,
    pub monomial_limit: f64,
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
pub struct PilotRow {
    #[serde(rename = "N")]
    pub n: u64,
    pub s: u64,
    pub lhs: f64,
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
pub struct Pilot {
    pub command: String,
    pub recorded: String,
    pub seed: u64,
    pub primes: String,
    pub budget: u64,
    pub resolution: u32,
    pub rhs: f64,
    pub rhs_error: f64,
    pub last_rows: Vec<PilotRow>,
    pub tail_max_abs_dev: f64,
    /// Agreement required when a row is recomputed.
    pub lhs_regression_tolerance: f64,
    pub wall_seconds: f64,
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
pub struct Fixtures {
    pub oracles: Oracles,
    pub thresholds: Thresholds,
    pub pilot: Pilot,
}

pub fn fixtures() -> Fixtures {
    serde_json::from_str(include_str!("../fixtures/pilot.json")).expect("fixtures/pilot.json is valid")
}

//! Torsion points of the torus 𝔾_mⁿ and their Galois orbits over ℚ.

use alloc::vec::Vec;

use num_integer::Integer;

use crate::{Error, Result};

/// The point `(ζ_N^{a_1}, …, ζ_N^{a_n})`, normalized so that `N` is its exact
/// order and `0 ≤ a_i < N`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorsionPoint {
    order: u64,
    exps: Vec<u64>,
}

impl TorsionPoint {
    pub fn new(order: u64, exps: &[i64]) -> Result<Self> {
        if order == 0 {
            return Err(Error::Invalid("torsion order must be positive".into()));
        }
        if exps.is_empty() {
            return Err(Error::Invalid("torsion point needs at least one coordinate".into()));
        }
        let reduced: Vec<u64> = exps.iter().map(|&a| a.rem_euclid(order as i64) as u64).collect();
        let g = reduced.iter().fold(order, |g, &a| g.gcd(&a));
        Ok(TorsionPoint { order: order / g, exps: reduced.into_iter().map(|a| a / g).collect() })
    }

    pub fn identity(n: usize) -> Self {
        TorsionPoint { order: 1, exps: alloc::vec![0; n] }
    }

    pub fn dim(&self) -> usize {
        self.exps.len()
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn exps(&self) -> &[u64] {
        &self.exps
    }

    pub fn is_identity(&self) -> bool {
        self.order == 1
    }

    /// `χ^m(t) = ζ_N^k`; returns `k mod N`.
    pub fn character(&self, m: &[i64]) -> u64 {
        let n = self.order as i128;
        let s: i128 = m.iter().zip(&self.exps).map(|(&x, &a)| x as i128 * a as i128).sum();
        s.rem_euclid(n) as u64
    }

    /// Exponents in a multiple `l` of the order.
    pub fn exps_in(&self, l: u64) -> Vec<u64> {
        assert_eq!(l % self.order, 0);
        self.exps.iter().map(|&a| a * (l / self.order)).collect()
    }

    /// Group product `s·t`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: other.dim() });
        }
        let l = self.order.lcm(&other.order);
        let a = self.exps_in(l);
        let b = other.exps_in(l);
        let e: Vec<i64> = a.iter().zip(&b).map(|(x, y)| ((x + y) % l) as i64).collect();
        Self::new(l, &e)
    }

    /// `t^k` (for a unit `k` this is the Galois conjugate `σ_k(t)`).
    pub fn pow(&self, k: u64) -> Self {
        let e: Vec<i64> = self.exps.iter().map(|&a| ((a as u128 * k as u128) % self.order as u128) as i64).collect();
        Self::new(self.order, &e).expect("valid point")
    }

    /// Membership in the subgroup `{x : χ^m(x) = 1}`.
    pub fn in_kernel(&self, m: &[i64]) -> bool {
        self.character(m) == 0
    }
}

/// Galois orbit of a torsion point over ℚ, indexed by `(ℤ/N)ˣ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaloisOrbit {
    base: TorsionPoint,
    units: Vec<u64>,
}

impl GaloisOrbit {
    pub fn new(base: &TorsionPoint) -> Self {
        let n = base.order;
        let units = (1..=n).filter(|&u| u.gcd(&n) == 1).map(|u| u % n).collect();
        GaloisOrbit { base: base.clone(), units }
    }

    pub fn base(&self) -> &TorsionPoint {
        &self.base
    }

    pub fn units(&self) -> &[u64] {
        &self.units
    }

    pub fn len(&self) -> usize {
        self.units.len()
    }

    pub fn is_empty(&self) -> bool {
        self.units.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = TorsionPoint> + '_ {
        self.units.iter().map(|&u| self.base.pow(u))
    }
}

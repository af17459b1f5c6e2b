//! Laurent polynomials with coefficients in a cyclotomic field.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::field::{Cyclotomic, CyclotomicField};
use super::torsion::TorsionPoint;
use crate::lattice::LatticePolytope;
use crate::num::{Q, q};
use crate::{Error, Result};

/// `f = Σ_m α_m χ^m` with `α_m ∈ ℚ(ζ_N)`; zero coefficients are never stored.
#[derive(Clone, Debug)]
pub struct LaurentPoly {
    dim: usize,
    field: Arc<CyclotomicField>,
    terms: BTreeMap<Vec<i64>, Cyclotomic>,
}

impl PartialEq for LaurentPoly {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.terms == other.terms
    }
}

impl Eq for LaurentPoly {}

impl LaurentPoly {
    pub fn zero(dim: usize, field: &Arc<CyclotomicField>) -> Self {
        LaurentPoly { dim, field: field.clone(), terms: BTreeMap::new() }
    }

    /// Polynomial over ℚ from `(exponent, coefficient)` pairs; repeated
    /// exponents are summed.
    pub fn from_rational(dim: usize, terms: &[(Vec<i64>, Q)]) -> Result<Self> {
        let field = CyclotomicField::new(1);
        let mut f = Self::zero(dim, &field);
        for (m, c) in terms {
            f.add_term(m, &Cyclotomic::from_rational(&field, c.clone()))?;
        }
        Ok(f)
    }

    /// Integer coefficients, e.g. `&[(&[0, 0], 1), (&[1, 0], 1), (&[0, 1], 1)]`
    /// for `1 + x + y`.
    pub fn from_ints(terms: &[(&[i64], i64)]) -> Result<Self> {
        let dim = terms.first().ok_or(Error::ZeroPolynomial)?.0.len();
        let v: Vec<(Vec<i64>, Q)> = terms.iter().map(|(m, c)| (m.to_vec(), q(*c))).collect();
        Self::from_rational(dim, &v)
    }

    pub fn monomial(field: &Arc<CyclotomicField>, m: &[i64], c: Cyclotomic) -> Result<Self> {
        let mut f = Self::zero(m.len(), field);
        f.add_term(m, &c)?;
        Ok(f)
    }

    /// Adds `c·χ^m`, lifting to a larger cyclotomic field if needed.
    pub fn add_term(&mut self, m: &[i64], c: &Cyclotomic) -> Result<()> {
        if m.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: m.len() });
        }
        let l = self.field.conductor().lcm(&c.conductor());
        if l != self.field.conductor() {
            *self = self.lift(&CyclotomicField::new(l));
        }
        let c = c.lift(&self.field);
        let entry = self.terms.entry(m.to_vec()).or_insert_with(|| Cyclotomic::zero(&self.field));
        *entry = entry.add(&c);
        if entry.is_zero() {
            self.terms.remove(m);
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    pub fn conductor(&self) -> u64 {
        self.field.conductor()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &Cyclotomic)> {
        self.terms.iter()
    }

    pub fn support(&self) -> Vec<Vec<i64>> {
        self.terms.keys().cloned().collect()
    }

    pub fn coefficient(&self, m: &[i64]) -> Option<&Cyclotomic> {
        self.terms.get(m)
    }

    /// Coefficients as rationals, if they all lie in ℚ.
    pub fn rational_terms(&self) -> Option<Vec<(Vec<i64>, Q)>> {
        self.terms.iter().map(|(m, c)| c.as_rational().map(|x| (m.clone(), x))).collect()
    }

    pub fn newton_polytope(&self) -> Result<LatticePolytope> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        LatticePolytope::from_points(self.dim, &self.support())
    }

    /// Image of all coefficients in a field whose conductor is a multiple.
    pub fn lift(&self, field: &Arc<CyclotomicField>) -> Self {
        LaurentPoly {
            dim: self.dim,
            field: field.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.lift(field))).collect(),
        }
    }

    /// `t*f = Σ_m α_m χ^m(t) χ^m`.
    pub fn twist(&self, t: &TorsionPoint) -> Result<Self> {
        if t.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: t.dim() });
        }
        if t.is_identity() {
            return Ok(self.clone());
        }
        let l = self.conductor().lcm(&t.order());
        let field = if l == self.conductor() { self.field.clone() } else { CyclotomicField::new(l) };
        let e = t.exps_in(l);
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let k: i128 = m.iter().zip(&e).map(|(&x, &a)| x as i128 * a as i128).sum();
            let k = k.rem_euclid(l as i128) as i64;
            terms.insert(m.clone(), c.lift(&field).mul_zeta(k));
        }
        Ok(LaurentPoly { dim: self.dim, field, terms })
    }

    /// Applies `σ_u` to every coefficient.
    pub fn galois(&self, u: u64) -> Self {
        LaurentPoly {
            dim: self.dim,
            field: self.field.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.galois(u))).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: other.dim });
        }
        let mut out = Self::zero(self.dim, &self.field);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let m: Vec<i64> = a.iter().zip(b).map(|(s, t)| s + t).collect();
                out.add_term(&m, &x.mul(y))?;
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Cyclotomic) -> Result<Self> {
        let mut out = Self::zero(self.dim, &self.field);
        for (m, x) in &self.terms {
            out.add_term(m, &x.mul(c))?;
        }
        Ok(out)
    }

    /// Multiplication by `χ^m`.
    pub fn shift(&self, m: &[i64]) -> Self {
        LaurentPoly {
            dim: self.dim,
            field: self.field.clone(),
            terms: self.terms.iter().map(|(a, c)| (a.iter().zip(m).map(|(x, y)| x + y).collect(), c.clone())).collect(),
        }
    }

    /// Monomial change of coordinates `m ↦ A·m` (the matrix is given by rows).
    pub fn transform(&self, a: &[Vec<i64>]) -> Result<Self> {
        if a.len() != self.dim || a.iter().any(|r| r.len() != self.dim) {
            return Err(Error::DimensionMismatch { expected: self.dim, got: a.len() });
        }
        let mut out = Self::zero(self.dim, &self.field);
        for (m, c) in &self.terms {
            let im: Vec<i64> = a.iter().map(|r| r.iter().zip(m).map(|(x, y)| x * y).sum()).collect();
            out.add_term(&im, c)?;
        }
        Ok(out)
    }

    /// Coefficients under the complex embedding `ζ ↦ e^{2πiu/N}`.
    pub fn embedded_terms(&self, u: u64) -> Vec<(Vec<i64>, Complex64)> {
        self.terms.iter().map(|(m, c)| (m.clone(), c.embed(u))).collect()
    }

    /// Value at a point of (ℂˣ)ⁿ under the embedding `u`.
    pub fn eval_complex(&self, u: u64, z: &[Complex64]) -> Complex64 {
        let mut s = Complex64::zero();
        for (m, c) in self.embedded_terms(u) {
            let mut t = c;
            for (zi, &e) in z.iter().zip(&m) {
                t *= zi.powi(e as i32);
            }
            s += t;
        }
        s
    }

    /// Constant polynomial `1` test.
    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.iter().all(|(m, c)| m.iter().all(|&x| x == 0) && c.is_one())
    }

    pub fn one(dim: usize) -> Self {
        let field = CyclotomicField::new(1);
        let mut f = Self::zero(dim, &field);
        f.terms.insert(alloc::vec![0; dim], Cyclotomic::from_rational(&field, Q::one()));
        f
    }

    /// Primes dividing a numerator or denominator of some coefficient (for
    /// rational coefficients), in increasing order.
    pub fn coefficient_primes(&self) -> Result<Vec<u64>> {
        let terms = self.rational_terms().ok_or(Error::NonRationalCoefficient)?;
        let mut ps = Vec::new();
        for (_, c) in terms {
            if c.is_zero() {
                continue;
            }
            ps.extend(crate::num::prime_factors_big(c.numer()));
            ps.extend(crate::num::prime_factors_big(c.denom()));
        }
        ps.sort_unstable();
        ps.dedup();
        Ok(ps)
    }
}

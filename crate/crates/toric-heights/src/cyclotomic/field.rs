//! Cyclotomic fields ℚ(ζ_N) = ℚ[t]/Φ_N(t) with dense exact coordinates.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::modp;
use crate::num::{Q, prime_factors_u64, to_f64};

/// The field ℚ(ζ_N); `modulus` is Φ_N, lowest degree first.
#[derive(Debug, PartialEq, Eq)]
pub struct CyclotomicField {
    n: u64,
    modulus: Vec<i64>,
}

fn mobius(n: u64) -> i32 {
    let fs = prime_factors_u64(n);
    let mut m = n;
    for &p in &fs {
        m /= p;
        if m % p == 0 {
            return 0;
        }
    }
    if fs.len() % 2 == 0 { 1 } else { -1 }
}

/// Φ_n = ∏_{d|n} (x^d − 1)^{μ(n/d)}, lowest degree first.
pub fn cyclotomic_polynomial(n: u64) -> Vec<i64> {
    assert!(n >= 1);
    let divisors: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
    let mut p = alloc::vec![1i64];
    for &d in &divisors {
        if mobius(n / d) == 1 {
            let mut out = alloc::vec![0i64; p.len() + d as usize];
            for (i, &c) in p.iter().enumerate() {
                out[i + d as usize] += c;
                out[i] -= c;
            }
            p = out;
        }
    }
    for &d in &divisors {
        if mobius(n / d) == -1 {
            // Exact division by x^d − 1: q_k = q_{k−d} − p_k read from the bottom.
            let d = d as usize;
            let qlen = p.len() - d;
            let mut qt = alloc::vec![0i64; qlen];
            for k in 0..qlen {
                qt[k] = -p[k] + if k >= d { qt[k - d] } else { 0 };
            }
            p = qt;
        }
    }
    p
}

impl CyclotomicField {
    pub fn new(n: u64) -> Arc<Self> {
        Arc::new(CyclotomicField { n, modulus: cyclotomic_polynomial(n) })
    }

    pub fn conductor(&self) -> u64 {
        self.n
    }

    /// `φ(N)`, the degree over ℚ.
    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn modulus(&self) -> &[i64] {
        &self.modulus
    }

    /// Reduces a rational polynomial modulo Φ_N.
    fn reduce(&self, mut c: Vec<Q>) -> Vec<Q> {
        let d = self.degree();
        while c.len() > d {
            let top = c.pop().unwrap();
            if top.is_zero() {
                continue;
            }
            let shift = c.len() - d;
            for (j, &m) in self.modulus[..d].iter().enumerate() {
                if m != 0 {
                    c[shift + j] -= &top * Q::from_integer(m.into());
                }
            }
        }
        c.resize(d, Q::zero());
        c
    }

    /// Units of ℤ/N in increasing order (the Galois group of ℚ(ζ_N)/ℚ).
    pub fn units(&self) -> Vec<u64> {
        (1..=self.n).filter(|&u| u.gcd(&self.n) == 1).map(|u| u % self.n).collect()
    }
}

/// An element of ℚ(ζ_N).
#[derive(Clone)]
pub struct Cyclotomic {
    field: Arc<CyclotomicField>,
    coeffs: Vec<Q>,
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        if self.field.n == other.field.n {
            return self.coeffs == other.coeffs;
        }
        let (a, b) = lift_pair(self, other);
        a.coeffs == b.coeffs
    }
}

impl Eq for Cyclotomic {}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclotomic(N={}, [", self.field.n)?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "])")
    }
}

/// Lifts two elements to the field of the lcm of their conductors.
pub fn lift_pair(a: &Cyclotomic, b: &Cyclotomic) -> (Cyclotomic, Cyclotomic) {
    if a.field.n == b.field.n {
        return (a.clone(), b.clone());
    }
    let l = a.field.n.lcm(&b.field.n);
    let field = if l == a.field.n {
        a.field.clone()
    } else if l == b.field.n {
        b.field.clone()
    } else {
        CyclotomicField::new(l)
    };
    (a.lift(&field), b.lift(&field))
}

impl Cyclotomic {
    pub fn from_rational(field: &Arc<CyclotomicField>, x: Q) -> Self {
        let mut coeffs = alloc::vec![Q::zero(); field.degree()];
        coeffs[0] = x;
        Cyclotomic { field: field.clone(), coeffs }
    }

    pub fn zero(field: &Arc<CyclotomicField>) -> Self {
        Self::from_rational(field, Q::zero())
    }

    pub fn one(field: &Arc<CyclotomicField>) -> Self {
        Self::from_rational(field, Q::one())
    }

    /// `c·ζ_N^k`.
    pub fn monomial(field: &Arc<CyclotomicField>, c: Q, k: i64) -> Self {
        let n = field.n as i64;
        let k = k.rem_euclid(n) as usize;
        let mut v = alloc::vec![Q::zero(); k + 1];
        v[k] = c;
        Cyclotomic { field: field.clone(), coeffs: field.reduce(v) }
    }

    /// Element from coordinates in the power basis `1, ζ, …` (any length).
    pub fn from_coeffs(field: &Arc<CyclotomicField>, c: Vec<Q>) -> Self {
        Cyclotomic { field: field.clone(), coeffs: field.reduce(c) }
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    pub fn conductor(&self) -> u64 {
        self.field.n
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().is_some_and(|x| x.is_one())
    }

    /// The rational value, if the element lies in ℚ.
    pub fn as_rational(&self) -> Option<Q> {
        self.coeffs[1..].iter().all(|c| c.is_zero()).then(|| self.coeffs[0].clone())
    }

    /// Image in ℚ(ζ_L) for a multiple `L` of the conductor.
    pub fn lift(&self, target: &Arc<CyclotomicField>) -> Self {
        assert_eq!(target.n % self.field.n, 0, "target conductor must be a multiple");
        if target.n == self.field.n {
            return self.clone();
        }
        let step = (target.n / self.field.n) as usize;
        let mut v = alloc::vec![Q::zero(); (self.coeffs.len().max(1) - 1) * step + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            v[k * step] = c.clone();
        }
        Cyclotomic { field: target.clone(), coeffs: target.reduce(v) }
    }

    /// The Galois automorphism `σ_u : ζ ↦ ζ^u` for `u` a unit mod N.
    pub fn galois(&self, u: u64) -> Self {
        let n = self.field.n;
        let mut v = alloc::vec![Q::zero(); n as usize];
        for (k, c) in self.coeffs.iter().enumerate() {
            let e = (k as u64 * u % n) as usize;
            v[e] += c;
        }
        Cyclotomic { field: self.field.clone(), coeffs: self.field.reduce(v) }
    }

    /// Complex embedding `ζ ↦ e^{2πiu/N}`.
    pub fn embed(&self, u: u64) -> Complex64 {
        let n = self.field.n;
        let mut s = Complex64::zero();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let ang = 2.0 * core::f64::consts::PI * ((k as u64 * u) % n) as f64 / n as f64;
            s += Complex64::from_polar(1.0, ang) * to_f64(c);
        }
        s
    }

    /// Image in 𝔽_q under `ζ ↦ root` (`None` if a denominator vanishes mod q).
    pub fn reduce_mod(&self, q: u64, root: u64) -> Option<u64> {
        let mut acc = 0u64;
        let mut pw = 1u64;
        for c in &self.coeffs {
            if !c.is_zero() {
                acc = modp::add_mod(acc, modp::mul_mod(modp::reduce(c, q)?, pw, q), q);
            }
            pw = modp::mul_mod(pw, root, q);
        }
        Some(acc)
    }

    /// Least common denominator of the coordinates.
    pub fn denominator(&self) -> num_bigint::BigInt {
        self.coeffs.iter().fold(num_bigint::BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = lift_pair(self, other);
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect();
        Cyclotomic { field: a.field, coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Cyclotomic { field: self.field.clone(), coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn scale(&self, x: &Q) -> Self {
        Cyclotomic { field: self.field.clone(), coeffs: self.coeffs.iter().map(|c| c * x).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = lift_pair(self, other);
        let d = a.coeffs.len();
        let mut v = alloc::vec![Q::zero(); 2 * d - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    v[i + j] += x * y;
                }
            }
        }
        Cyclotomic { coeffs: a.field.reduce(v), field: a.field }
    }

    /// Multiplication by `ζ^k`.
    pub fn mul_zeta(&self, k: i64) -> Self {
        self.mul(&Self::monomial(&self.field, Q::one(), k))
    }

    /// Norm down to ℚ: the product of all Galois conjugates.
    pub fn norm(&self) -> Q {
        let mut acc = Self::one(&self.field);
        for u in self.field.units() {
            acc = acc.mul(&self.galois(u));
        }
        acc.as_rational().expect("norm is rational")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::q;

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), alloc::vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(3), alloc::vec![1, 1, 1]);
        assert_eq!(cyclotomic_polynomial(4), alloc::vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6), alloc::vec![1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(12), alloc::vec![1, 0, -1, 0, 1]);
        let p105 = cyclotomic_polynomial(105);
        assert_eq!(p105.len() - 1, 48);
        assert_eq!(p105[7], -2);
    }

    #[test]
    fn arithmetic_and_galois() {
        let k = CyclotomicField::new(5);
        let z = Cyclotomic::monomial(&k, q(1), 1);
        let mut p = Cyclotomic::one(&k);
        for _ in 0..5 {
            p = p.mul(&z);
        }
        assert!(p.is_one());
        // 1 + ζ + … + ζ⁴ = 0.
        let mut s = Cyclotomic::zero(&k);
        for e in 0..5 {
            s = s.add(&Cyclotomic::monomial(&k, q(1), e));
        }
        assert!(s.is_zero());
        assert_eq!(z.galois(2), Cyclotomic::monomial(&k, q(1), 2));
        // N(1 − ζ₅) = 5.
        assert_eq!(Cyclotomic::one(&k).sub(&z).norm(), q(5));
    }

    #[test]
    fn lifting_between_conductors() {
        let k3 = CyclotomicField::new(3);
        let k6 = CyclotomicField::new(6);
        let w = Cyclotomic::monomial(&k3, q(1), 1);
        let z6 = Cyclotomic::monomial(&k6, q(1), 2);
        assert_eq!(w, z6);
        let k15 = CyclotomicField::new(15);
        let a = Cyclotomic::monomial(&CyclotomicField::new(5), q(1), 1);
        assert_eq!(a.mul(&w), Cyclotomic::monomial(&k15, q(1), 3 + 5));
        let e = w.embed(1);
        assert!((e.re + 0.5).abs() < 1e-15 && (e.im - 0.75f64.sqrt()).abs() < 1e-15);
    }
}

//! Exact rational helpers shared by the geometric and arithmetic modules.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
#[allow(unused_imports)]
use num_traits::Float;

/// Exact rational scalar used throughout the exact paths.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn qvec(v: &[i64]) -> Vec<Q> {
    v.iter().map(|&x| q(x)).collect()
}

/// Exact conversion of a finite float (every finite `f64` is a dyadic rational).
pub fn from_f64(x: f64) -> Q {
    assert!(x.is_finite(), "non-finite value {x}");
    Q::from_float(x).expect("finite float")
}

pub fn to_f64(x: &Q) -> f64 {
    if let Some(v) = x.to_f64() {
        return v;
    }
    // Fall back to logarithmic scaling for huge numerators/denominators.
    let n = ln_abs_int(x.numer()) - ln_abs_int(x.denom());
    let s = if x.is_negative() { -1.0 } else { 1.0 };
    s * n.exp()
}

/// Natural log of |n| for a nonzero big integer, without overflow.
pub fn ln_abs_int(n: &BigInt) -> f64 {
    assert!(!n.is_zero(), "log of zero");
    let bits = n.bits();
    if bits < 1000 {
        return n.abs().to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    let top: BigInt = n.abs() >> shift as usize;
    top.to_f64().unwrap().ln() + shift as f64 * core::f64::consts::LN_2
}

/// p-adic valuation of a nonzero integer.
pub fn ord_p_int(n: &BigInt, p: u64) -> i64 {
    assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut k = 0;
    loop {
        let (qq, r) = n.div_rem(&p);
        if !r.is_zero() {
            return k;
        }
        n = qq;
        k += 1;
    }
}

/// p-adic valuation of a nonzero rational.
pub fn ord_p(x: &Q, p: u64) -> i64 {
    ord_p_int(x.numer(), p) - ord_p_int(x.denom(), p)
}

/// Scales a nonzero rational vector to the primitive integer vector on the
/// same ray. Returns the integer vector and the positive factor used.
pub fn primitive_ray(v: &[Q]) -> (Vec<BigInt>, Q) {
    let mut l = BigInt::one();
    for x in v {
        l = l.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Q::from_integer(l.clone())).to_integer()).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    assert!(!g.is_zero(), "zero vector has no primitive ray");
    let out = ints.iter().map(|x| x / &g).collect();
    (out, Q::new(l, g))
}

/// Prime factors (distinct, ascending) of a positive integer.
pub fn prime_factors_u64(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Distinct primes dividing a nonzero big integer. Trial division only, so
/// meant for the small coefficients of input polynomials.
pub fn prime_factors_big(n: &BigInt) -> Vec<u64> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut d = 2u64;
    loop {
        let dd = BigInt::from(d);
        if &dd * &dd > n {
            break;
        }
        let (qq, r) = n.div_rem(&dd);
        if r.is_zero() {
            out.push(d);
            n = qq;
            while (&n % &dd).is_zero() {
                n /= &dd;
            }
        }
        d += if d == 2 { 1 } else { 2 };
        if d > 10_000_000 {
            break;
        }
    }
    if n > BigInt::one() {
        out.push(n.to_u64().expect("prime factor beyond trial-division range"));
    }
    out
}

pub fn euler_phi(n: u64) -> u64 {
    let mut r = n;
    for p in prime_factors_u64(n) {
        r = r / p * (p - 1);
    }
    r
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn is_prime_u64(n: u64) -> bool {
    crate::cyclotomic::modp::is_prime(n)
}

/// Lexicographic comparison of rational vectors.
pub(crate) fn lex_cmp(a: &[Q], b: &[Q]) -> core::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.cmp(y) {
            core::cmp::Ordering::Equal => continue,
            o => return o,
        }
    }
    a.len().cmp(&b.len())
}

pub(crate) fn dot(a: &[Q], b: &[Q]) -> Q {
    let mut s = Q::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            s += x * y;
        }
    }
    s
}

pub(crate) fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

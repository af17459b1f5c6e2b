//! Word-size modular arithmetic: primality, roots of unity modulo primes,
//! dense polynomials over 𝔽_q, Chinese remaindering and rational
//! reconstruction.

use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::num::{Q, prime_factors_u64};

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[inline]
pub fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    let s = a + b;
    if s >= m { s - m } else { s }
}

#[inline]
pub fn sub_mod(a: u64, b: u64, m: u64) -> u64 {
    if a >= b { a - b } else { a + m - b }
}

pub fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    r
}

/// Inverse modulo a prime.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    assert!(a % p != 0, "inverse of zero");
    pow_mod(a, p - 2, p)
}

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Smallest generator of 𝔽_p^×.
pub fn primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let fs = prime_factors_u64(p - 1);
    (2..p).find(|&g| fs.iter().all(|&f| pow_mod(g, (p - 1) / f, p) != 1)).expect("prime modulus")
}

/// A primitive `n`-th root of unity modulo a prime `q ≡ 1 (mod n)`.
pub fn root_of_unity(n: u64, q: u64) -> u64 {
    assert_eq!((q - 1) % n, 0);
    pow_mod(primitive_root(q), (q - 1) / n, q)
}

/// Primes `q ≡ 1 (mod n)` below 2⁶², largest first, skipping `avoid`.
pub struct SplitPrimes {
    n: u64,
    next: u64,
}

impl SplitPrimes {
    pub fn new(n: u64) -> Self {
        let top = (1u64 << 62) / n * n + 1;
        SplitPrimes { n, next: if top >= 1u64 << 62 { top - n } else { top } }
    }
}

impl Iterator for SplitPrimes {
    type Item = u64;
    fn next(&mut self) -> Option<u64> {
        while self.next > self.n {
            let c = self.next;
            self.next -= self.n;
            if is_prime(c) {
                return Some(c);
            }
        }
        None
    }
}

/// Reduction of a rational modulo `q` (`None` if `q` divides the denominator).
pub fn reduce(x: &Q, q: u64) -> Option<u64> {
    let qb = BigInt::from(q);
    let n = x.numer().mod_floor(&qb);
    let d = x.denom().mod_floor(&qb);
    let d: u64 = d.try_into().ok()?;
    if d == 0 {
        return None;
    }
    let n: u64 = n.try_into().expect("reduced residue");
    Some(mul_mod(n, inv_mod(d, q), q))
}

/// Dense polynomial over 𝔽_q, lowest degree first, trimmed.
pub fn trim(p: &mut Vec<u64>) {
    while p.last() == Some(&0) {
        p.pop();
    }
}

pub fn poly_eval(p: &[u64], x: u64, q: u64) -> u64 {
    p.iter().rev().fold(0, |acc, &c| add_mod(mul_mod(acc, x, q), c, q))
}

pub fn poly_mul(a: &[u64], b: &[u64], q: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = alloc::vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = add_mod(out[i + j], mul_mod(x, y, q), q);
        }
    }
    trim(&mut out);
    out
}

/// Remainder of `a` modulo a nonzero `b`.
pub fn poly_rem(a: &[u64], b: &[u64], q: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let inv = inv_mod(b[db], q);
    while r.len() > db {
        let c = mul_mod(*r.last().unwrap(), inv, q);
        let shift = r.len() - 1 - db;
        for (j, &y) in b.iter().enumerate() {
            r[shift + j] = sub_mod(r[shift + j], mul_mod(c, y, q), q);
        }
        trim(&mut r);
    }
    r
}

/// Monic gcd over 𝔽_q.
pub fn poly_gcd(a: &[u64], b: &[u64], q: u64) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = poly_rem(&a, &b, q);
        a = b;
        b = r;
    }
    if let Some(&l) = a.last() {
        let inv = inv_mod(l, q);
        for c in a.iter_mut() {
            *c = mul_mod(*c, inv, q);
        }
    }
    a
}

/// Interpolates the polynomial of degree `< xs.len()` through the points.
pub fn interpolate(xs: &[u64], ys: &[u64], q: u64) -> Vec<u64> {
    let n = xs.len();
    // Newton divided differences.
    let mut coef = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            let num = sub_mod(coef[i], coef[i - 1], q);
            let den = sub_mod(xs[i], xs[i - j], q);
            coef[i] = mul_mod(num, inv_mod(den, q), q);
        }
    }
    let mut out = alloc::vec![0u64; n];
    for i in (0..n).rev() {
        // out = out·(x − xs[i]) + coef[i]
        let mut next = alloc::vec![0u64; n];
        for k in 0..n {
            if out[k] == 0 {
                continue;
            }
            if k + 1 < n {
                next[k + 1] = add_mod(next[k + 1], out[k], q);
            }
            next[k] = sub_mod(next[k], mul_mod(out[k], xs[i], q), q);
        }
        next[0] = add_mod(next[0], coef[i], q);
        out = next;
    }
    trim(&mut out);
    out
}

/// Determinant over 𝔽_q by Gaussian elimination.
pub fn det_mod(mut m: Vec<Vec<u64>>, q: u64) -> u64 {
    let n = m.len();
    let mut det = 1u64;
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| m[r][c] != 0) else {
            return 0;
        };
        if p != c {
            m.swap(p, c);
            det = sub_mod(0, det, q);
        }
        det = mul_mod(det, m[c][c], q);
        let inv = inv_mod(m[c][c], q);
        for r in c + 1..n {
            if m[r][c] == 0 {
                continue;
            }
            let f = mul_mod(m[r][c], inv, q);
            for k in c..n {
                let t = mul_mod(f, m[c][k], q);
                m[r][k] = sub_mod(m[r][k], t, q);
            }
        }
    }
    det
}

/// Incremental Chinese remaindering of integer residues.
#[derive(Clone, Debug)]
pub struct Crt {
    pub modulus: BigUint,
    pub residues: Vec<BigUint>,
}

impl Crt {
    pub fn new(len: usize) -> Self {
        Crt { modulus: BigUint::one(), residues: alloc::vec![BigUint::zero(); len] }
    }

    pub fn add(&mut self, q: u64, rs: &[u64]) {
        assert_eq!(rs.len(), self.residues.len());
        let m_mod_q = (&self.modulus % q).try_into().unwrap_or(0u64);
        let inv = inv_mod(m_mod_q, q);
        for (x, &r) in self.residues.iter_mut().zip(rs) {
            let x_mod_q: u64 = (&*x % q).try_into().unwrap();
            let t = mul_mod(sub_mod(r, x_mod_q, q), inv, q);
            *x += &self.modulus * t;
        }
        self.modulus *= q;
    }

    /// Symmetric integer lift of each residue.
    pub fn symmetric(&self) -> Vec<BigInt> {
        let half = &self.modulus >> 1;
        self.residues
            .iter()
            .map(|x| {
                if x > &half {
                    BigInt::from(x.clone()) - BigInt::from(self.modulus.clone())
                } else {
                    BigInt::from(x.clone())
                }
            })
            .collect()
    }
}

/// Rational reconstruction: `n/d ≡ a (mod m)` with `|n|, d ≤ √(m/2)`.
pub fn rational_reconstruct(a: &BigUint, m: &BigUint) -> Option<Q> {
    let bound = (m >> 1u32).sqrt();
    let (mut r0, mut r1) = (BigInt::from(m.clone()), BigInt::from(a.clone()));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while BigInt::from(bound.clone()) < r1 {
        let qt = &r0 / &r1;
        let r2 = &r0 - &qt * &r1;
        let t2 = &t0 - &qt * &t1;
        r0 = r1;
        r1 = r2;
        t0 = t1;
        t1 = t2;
    }
    if t1.is_zero() || t1.abs() > BigInt::from(bound) {
        return None;
    }
    let x = Q::new(r1, t1);
    if x.denom().gcd(&BigInt::from(m.clone())).is_one() { Some(x) } else { None }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_and_roots() {
        assert!(is_prime(2) && is_prime(97) && is_prime((1u64 << 61) - 1));
        assert!(!is_prime(1) && !is_prime(91) && !is_prime(3215031751));
        let q = SplitPrimes::new(15).next().unwrap();
        assert_eq!(q % 15, 1);
        let w = root_of_unity(15, q);
        assert_eq!(pow_mod(w, 15, q), 1);
        assert_ne!(pow_mod(w, 5, q), 1);
        assert_ne!(pow_mod(w, 3, q), 1);
    }

    #[test]
    fn interpolation_and_gcd() {
        let q = 1_000_000_007;
        let p = alloc::vec![3, 0, 5, 7];
        let xs: Vec<u64> = (1..=4).collect();
        let ys: Vec<u64> = xs.iter().map(|&x| poly_eval(&p, x, q)).collect();
        assert_eq!(interpolate(&xs, &ys, q), p);
        // (x − 1)(x − 2) and (x − 1)(x − 3) share x − 1.
        let a = poly_mul(&[q - 1, 1], &[q - 2, 1], q);
        let b = poly_mul(&[q - 1, 1], &[q - 3, 1], q);
        assert_eq!(poly_gcd(&a, &b, q), alloc::vec![q - 1, 1]);
    }

    #[test]
    fn crt_and_reconstruction() {
        let x = Q::new(BigInt::from(-22), BigInt::from(7));
        let mut crt = Crt::new(1);
        for q in [1_000_000_007u64, 998_244_353] {
            crt.add(q, &[reduce(&x, q).unwrap()]);
        }
        assert_eq!(rational_reconstruct(&crt.residues[0], &crt.modulus), Some(x));
        let mut crt = Crt::new(1);
        crt.add(1_000_000_007, &[1_000_000_007 - 5]);
        assert_eq!(crt.symmetric()[0], BigInt::from(-5));
    }
}

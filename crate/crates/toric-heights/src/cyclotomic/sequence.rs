//! Sequences of torsion points `ω_ℓ = (1, (ζ_N, ζ_N^s))` with `N` running over
//! increasing primes.
//!
//! With a fixed exponent `s` every point lies on the subgroup `y = x^s`, so
//! such a sequence is not strict. The seeded rule picks `s` per `N` so that
//! the lattice `{(a, b) : a + s·b ≡ 0 (mod N)}` of characters vanishing at
//! `(ζ_N, ζ_N^s)` has no short vectors; any fixed nonzero character is then
//! nontrivial on all but finitely many terms.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use rand_chacha::ChaCha8Rng;
use rand_chacha::rand_core::{RngCore, SeedableRng};

use super::torsion::TorsionPoint;
use crate::num::is_prime_u64;
use crate::{Error, Result};

/// Minimal length of the shortest character vanishing at a seeded point, as
/// a fraction of `√N`.
pub const SHORT_VECTOR_RATIO: f64 = 0.8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExponentRule {
    /// The same `s` for every `N` (reduced mod `N`); not strict.
    Fixed(i64),
    /// `s` drawn per `N` from a seeded stream, subject to the short-vector
    /// filter. Each term depends only on the seed and `N`.
    Seeded(u64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SequenceKind {
    /// Consecutive primes starting at `start` (at least 5), optionally
    /// stopping after `end`.
    Primes { start: u64, end: Option<u64>, rule: ExponentRule },
    /// Explicit `(N, s)` pairs, `N` strictly increasing.
    Explicit(Vec<(u64, i64)>),
}

/// One term `ω = (1, (ζ_N, ζ_N^s))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceTerm {
    pub order: u64,
    pub s: u64,
    pub omega: (TorsionPoint, TorsionPoint),
}

impl SequenceTerm {
    pub fn new(order: u64, s: i64) -> Result<Self> {
        if order < 5 {
            return Err(Error::Invalid(alloc::format!("order {order} leaves no admissible exponent")));
        }
        let s = s.rem_euclid(order as i64) as u64;
        if s <= 1 || s == order - 1 || crate::num::gcd_u64(s, order) != 1 {
            return Err(Error::Invalid(alloc::format!("exponent {s} is not admissible mod {order}")));
        }
        let t = TorsionPoint::new(order, &[1, s as i64])?;
        Ok(SequenceTerm { order, s, omega: (TorsionPoint::identity(2), t) })
    }
}

/// Length of the shortest nonzero `(a, b)` with `a + s·b ≡ 0 (mod n)`.
pub fn shortest_character(n: u64, s: u64) -> f64 {
    // Lagrange–Gauss reduction of the basis (n, 0), (−s, 1).
    let mut u = (n as i128, 0i128);
    let mut v = (-(s as i128), 1i128);
    let norm = |w: (i128, i128)| w.0 * w.0 + w.1 * w.1;
    if norm(u) < norm(v) {
        core::mem::swap(&mut u, &mut v);
    }
    loop {
        let dot = u.0 * v.0 + u.1 * v.1;
        let nv = norm(v);
        let k = (2 * dot + nv).div_euclid(2 * nv);
        u = (u.0 - k * v.0, u.1 - k * v.1);
        if norm(u) >= nv {
            return (nv as f64).sqrt();
        }
        core::mem::swap(&mut u, &mut v);
    }
}

fn seeded_exponent(n: u64, seed: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ n.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let target = SHORT_VECTOR_RATIO * (n as f64).sqrt();
    let mut best = (0.0, 2);
    for _ in 0..4096 {
        let s = 2 + rng.next_u64() % (n - 3);
        if crate::num::gcd_u64(s, n) != 1 {
            continue;
        }
        let len = shortest_character(n, s);
        if len >= target {
            return s;
        }
        if len > best.0 {
            best = (len, s);
        }
    }
    best.1
}

/// The first `length` terms of a sequence of the given kind.
pub fn quasi_strict_sequence(kind: &SequenceKind, length: usize) -> Result<Vec<SequenceTerm>> {
    match kind {
        SequenceKind::Explicit(pairs) => {
            if pairs.windows(2).any(|w| w[0].0 >= w[1].0) {
                return Err(Error::Invalid("orders must increase strictly".into()));
            }
            pairs.iter().take(length).map(|&(n, s)| SequenceTerm::new(n, s)).collect()
        }
        SequenceKind::Primes { start, end, rule } => {
            let mut out = Vec::new();
            let mut n = (*start).max(5);
            while out.len() < length && end.is_none_or(|e| n <= e) {
                if is_prime_u64(n) {
                    let s = match rule {
                        ExponentRule::Fixed(s) => *s,
                        ExponentRule::Seeded(seed) => seeded_exponent(n, *seed) as i64,
                    };
                    out.push(SequenceTerm::new(n, s)?);
                }
                n += 1;
            }
            Ok(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_rule_reproduces_first_term() {
        let kind = SequenceKind::Primes { start: 5, end: None, rule: ExponentRule::Fixed(2) };
        let seq = quasi_strict_sequence(&kind, 1).unwrap();
        assert_eq!(seq[0].omega.0, TorsionPoint::identity(2));
        assert_eq!(seq[0].omega.1, TorsionPoint::new(5, &[1, 2]).unwrap());
    }

    #[test]
    fn seeded_terms_avoid_small_subgroups() {
        let kind = SequenceKind::Primes { start: 101, end: Some(401), rule: ExponentRule::Seeded(7) };
        let seq = quasi_strict_sequence(&kind, 1000).unwrap();
        assert_eq!(seq.len(), 54);
        for w in seq.windows(2) {
            assert!(w[0].order < w[1].order);
        }
        for t in &seq {
            assert!(shortest_character(t.order, t.s) >= SHORT_VECTOR_RATIO * (t.order as f64).sqrt());
            // The subgroup x = 1 never contains the point.
            assert!(!t.omega.1.in_kernel(&[1, 0]));
        }
        // Reproducible per order, independent of where the run starts.
        let late = quasi_strict_sequence(
            &SequenceKind::Primes { start: 397, end: Some(401), rule: ExponentRule::Seeded(7) },
            10,
        )
        .unwrap();
        assert_eq!(late[0], seq[seq.len() - 2]);
    }

    #[test]
    fn shortest_vectors() {
        // s = 2: (−2, 1) is in the lattice.
        assert!((shortest_character(101, 2) - 5f64.sqrt()).abs() < 1e-12);
        assert!(shortest_character(101, 10) <= 11.0);
    }
}

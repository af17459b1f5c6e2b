//! The mixed integral operator
//! `MI(f_0,…,f_n) = Σ_{∅≠J⊆{0..n}} (−1)^{n+1−|J|} ∫_{⊕_J Q_j} ⊞_J f_j`
//! and its stability under uniform perturbation.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use super::Estimate;
use super::grid::GridConcave;
use super::pa::PaConcave;
use crate::lattice::{LatticePolytope, minkowski_sum, normalized_volume};
use crate::num::{Q, q, to_f64};
use crate::{Error, Result};

/// A concave function accepted by [`mixed_integral`].
#[derive(Clone, Debug)]
pub enum ConcaveFn {
    Pa(PaConcave),
    Grid(GridConcave),
}

impl ConcaveFn {
    pub fn dim(&self) -> usize {
        match self {
            ConcaveFn::Pa(f) => f.dim(),
            ConcaveFn::Grid(g) => g.domain().ambient_dim(),
        }
    }

    pub fn domain(&self) -> Option<LatticePolytope> {
        match self {
            ConcaveFn::Pa(f) => f.domain(),
            ConcaveFn::Grid(g) => Some(g.domain().clone()),
        }
    }

    pub fn as_pa(&self) -> Option<&PaConcave> {
        match self {
            ConcaveFn::Pa(f) => Some(f),
            ConcaveFn::Grid(_) => None,
        }
    }
}

impl From<PaConcave> for ConcaveFn {
    fn from(f: PaConcave) -> Self {
        ConcaveFn::Pa(f)
    }
}

impl From<GridConcave> for ConcaveFn {
    fn from(g: GridConcave) -> Self {
        ConcaveFn::Grid(g)
    }
}

fn check_arity(dims: impl Iterator<Item = usize>, count: usize) -> Result<usize> {
    let dims: Vec<usize> = dims.collect();
    let n = *dims.first().ok_or(Error::Empty("mixed integral of nothing"))?;
    if count != n + 1 {
        return Err(Error::Arity { expected: n + 1, got: count });
    }
    if let Some(&d) = dims.iter().find(|&&d| d != n) {
        return Err(Error::DimensionMismatch { expected: n, got: d });
    }
    Ok(n)
}

fn sign(n: usize, mask: u32) -> i32 {
    if (n + 1 - mask.count_ones() as usize) % 2 == 0 { 1 } else { -1 }
}

/// Runs the inclusion–exclusion with sums built incrementally over subsets
/// (each `⊞_J` reuses `⊞_{J∖{min J}}`), in fixed mask order.
fn inclusion_exclusion<T, I>(
    slots: &[T],
    conv: impl Fn(&T, &T) -> Result<T>,
    mut integrate: impl FnMut(&T) -> Result<I>,
    mut acc: impl FnMut(i32, I),
) -> Result<()>
where
    T: Clone,
{
    let n1 = slots.len();
    let mut sums: BTreeMap<u32, T> = BTreeMap::new();
    let full = (1u32 << n1) - 1;
    for mask in 1u32..=full {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        let s = if rest == 0 { slots[low].clone() } else { conv(&sums[&rest], &slots[low])? };
        acc(sign(n1 - 1, mask), integrate(&s)?);
        if mask != full {
            sums.insert(mask, s);
        }
    }
    Ok(())
}

/// Exact mixed integral of PA functions on polytopes.
pub fn mixed_integral_exact(fs: &[&PaConcave]) -> Result<Q> {
    check_arity(fs.iter().map(|f| f.dim()), fs.len())?;
    let slots: Vec<PaConcave> = fs.iter().map(|f| (*f).clone()).collect();
    let mut total = Q::zero();
    inclusion_exclusion(&slots, |a, b| a.sup_convolution(b), |s| s.integrate(), |sg, v| {
        if sg > 0 { total += v } else { total -= v }
    })?;
    Ok(total)
}

/// Mixed integral of PA or grid functions. With only PA inputs the value is
/// exact (error 0, up to the final rounding); otherwise every slot is put on
/// the common grid and the result brackets the true value by evaluating the
/// operator on the lower and on the upper samples.
pub fn mixed_integral(fs: &[&ConcaveFn]) -> Result<Estimate> {
    let n = check_arity(fs.iter().map(|f| f.dim()), fs.len())?;
    if let Some(pas) = fs.iter().map(|f| f.as_pa()).collect::<Option<Vec<_>>>() {
        return Ok(Estimate::exact(to_f64(&mixed_integral_exact(&pas)?)));
    }
    if let Some(e) = point_slot(fs, n)? {
        return Ok(e);
    }
    if n != 2 {
        return Err(Error::Unsupported("grid mixed integrals are implemented in dimension 2".into()));
    }
    let mut r: Option<u32> = None;
    for f in fs {
        if let ConcaveFn::Grid(g) = f {
            match r {
                None => r = Some(g.resolution()),
                Some(x) if x != g.resolution() => return Err(Error::Invalid("grid resolutions differ".into())),
                _ => {}
            }
        }
    }
    let r = r.expect("at least one grid slot");
    let slots: Vec<GridConcave> = fs
        .iter()
        .map(|f| match f {
            ConcaveFn::Grid(g) => Ok(g.clone()),
            ConcaveFn::Pa(p) => GridConcave::from_pa(p, r),
        })
        .collect::<Result<_>>()?;
    let (mut lo, mut hi, mut mag) = (0.0f64, 0.0f64, 0.0f64);
    inclusion_exclusion(&slots, |a, b| a.sup_convolution(b), |s| Ok(s.integral_bounds()), |sg, (a, b)| {
        let s = sg as f64;
        lo += s * a;
        hi += s * b;
        mag += a.abs() + b.abs();
    })?;
    // Floating-point allowance for the hull volumes and the alternating sum.
    let round = 1e-11 * (mag + 1.0);
    Ok(Estimate::from_bounds(lo.min(hi) - round, hi.max(lo) + round))
}

/// A slot `ι_{m} + c` on a single point contributes `c·MV(other domains)`:
/// in the inclusion–exclusion every integral with the point appears twice
/// with opposite signs, once shifted by `c`.
fn point_slot(fs: &[&ConcaveFn], n: usize) -> Result<Option<Estimate>> {
    let Some(i) = fs.iter().position(|f| f.domain().is_some_and(|d| d.is_point())) else {
        return Ok(None);
    };
    let m: Vec<Q> = fs[i].domain().unwrap().rational_vertices().remove(0);
    let (lo, hi) = match fs[i] {
        ConcaveFn::Pa(p) => {
            let v = p.evaluate_f64(&m)?;
            (v, v)
        }
        ConcaveFn::Grid(g) => g.value_at(&m).ok_or(Error::Invalid("point slot off the grid".into()))?,
    };
    let others: Vec<LatticePolytope> = fs
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != i)
        .map(|(_, f)| f.domain().ok_or(Error::Unbounded))
        .collect::<Result<_>>()?;
    let refs: Vec<&LatticePolytope> = others.iter().collect();
    let mv = if n == 0 { 1.0 } else { to_f64(&crate::lattice::mixed_volume(&refs)?) };
    let round = 1e-15 * (lo.abs() + hi.abs()) * mv;
    Ok(Some(Estimate::from_bounds(lo * mv - round, hi * mv + round)))
}

/// `C = (n+1)·Σ_{∅≠J} vol(⊕_J Q_j)`: if every slot moves by at most `ε` in
/// sup-norm, the mixed integral moves by at most `C·ε`.
pub fn perturbation_constant(domains: &[&LatticePolytope]) -> Result<Q> {
    let n = check_arity(domains.iter().map(|d| d.ambient_dim()), domains.len())?;
    let slots: Vec<LatticePolytope> = domains.iter().map(|d| (*d).clone()).collect();
    let mut total = Q::zero();
    inclusion_exclusion(&slots, minkowski_sum, |p| Ok(normalized_volume(p)), |_, v| total += v)?;
    Ok(total * q(n as i64 + 1))
}

/// Outcome of a perturbation check.
#[derive(Clone, Debug)]
pub struct PerturbationCheck {
    pub difference: Q,
    pub constant: Q,
    /// `constant · ε`.
    pub bound: Q,
    pub holds: bool,
}

/// Compares `MI(perturbed)` with `MI(original)` against `C·ε`. The caller
/// asserts that each perturbed slot is within `ε` of the original one in
/// sup-norm on a common domain.
pub fn uniform_perturbation_bound(
    original: &[&PaConcave],
    perturbed: &[&PaConcave],
    eps: &Q,
) -> Result<PerturbationCheck> {
    if original.len() != perturbed.len() {
        return Err(Error::Arity { expected: original.len(), got: perturbed.len() });
    }
    let domains: Vec<LatticePolytope> = original
        .iter()
        .map(|f| f.domain().ok_or(Error::Unsupported("perturbation bound needs lattice polytope domains".into())))
        .collect::<Result<_>>()?;
    for (f, d) in perturbed.iter().zip(&domains) {
        if f.domain().as_ref() != Some(d) {
            return Err(Error::Invalid("perturbed slot has a different domain".into()));
        }
    }
    let refs: Vec<&LatticePolytope> = domains.iter().collect();
    let constant = perturbation_constant(&refs)?;
    let difference = (mixed_integral_exact(perturbed)? - mixed_integral_exact(original)?).abs();
    let bound = &constant * eps;
    let holds = difference <= bound;
    Ok(PerturbationCheck { difference, constant, bound, holds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::mixed_volume;
    use crate::num::qf;

    #[test]
    fn zero_functions_have_zero_mixed_integral() {
        let sq = LatticePolytope::cube(2, 1);
        let t = LatticePolytope::unit_simplex(2);
        let f = [PaConcave::zero_on(&sq), PaConcave::zero_on(&t), PaConcave::zero_on(&sq)];
        let refs: Vec<&PaConcave> = f.iter().collect();
        assert_eq!(mixed_integral_exact(&refs).unwrap(), q(0));
    }

    #[test]
    fn constant_slot_gives_mixed_volume() {
        let sq = LatticePolytope::cube(2, 1);
        let t = LatticePolytope::unit_simplex(2);
        let c = qf(3, 7);
        let f0 = PaConcave::constant_on(&sq, c.clone());
        let f1 = PaConcave::zero_on(&t);
        let f2 = PaConcave::zero_on(&sq);
        let mi = mixed_integral_exact(&[&f0, &f1, &f2]).unwrap();
        assert_eq!(mi, c * mixed_volume(&[&t, &sq]).unwrap());
    }

    #[test]
    fn tent_against_full_interval() {
        // MI(min(x,1−x), 0_[0,1]) on ℝ¹ equals the maximum 1/2 of the tent.
        let seg = LatticePolytope::cube(1, 1);
        let tent = PaConcave::lifted(1, alloc::vec![(alloc::vec![q(0)], q(0)), (alloc::vec![qf(1, 2)], qf(1, 2)), (alloc::vec![q(1)], q(0))])
            .unwrap();
        let z = PaConcave::zero_on(&seg);
        assert_eq!(mixed_integral_exact(&[&tent, &z]).unwrap(), qf(1, 2));
        let pt = PaConcave::zero_on(&LatticePolytope::point(&[0]));
        assert_eq!(mixed_integral_exact(&[&tent, &pt]).unwrap(), q(0));
    }

    #[test]
    fn grid_path_matches_exact_on_grid_data() {
        let sq = LatticePolytope::cube(2, 1);
        let t = LatticePolytope::unit_simplex(2);
        let f = PaConcave::lifted(
            2,
            alloc::vec![
                (crate::num::qvec(&[0, 0]), q(0)),
                (crate::num::qvec(&[1, 0]), q(1)),
                (crate::num::qvec(&[0, 1]), qf(1, 2)),
            ],
        )
        .unwrap();
        let exact = mixed_integral_exact(&[&PaConcave::zero_on(&sq), &f, &PaConcave::zero_on(&t)]).unwrap();
        let g = ConcaveFn::Grid(GridConcave::from_pa(&f, 4).unwrap());
        let est = mixed_integral(&[&ConcaveFn::Pa(PaConcave::zero_on(&sq)), &g, &ConcaveFn::Pa(PaConcave::zero_on(&t))])
            .unwrap();
        assert!(est.contains(to_f64(&exact), 1e-12), "{est:?} vs {exact}");
    }
}

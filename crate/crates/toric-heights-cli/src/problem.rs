//! Problem files: polynomials and metrized divisors in JSON.
//!
//! ```json
//! {
//!   "f": { "terms": [[[0, 0], "1"], [[1, 0], "1"], [[0, 1], "1"]] },
//!   "g": { "terms": [[[0, 0], "1"], [[1, 0], "1"], [[0, 1], "1"]] },
//!   "divisors": [{ "kind": "canonical", "vertices": [[0, 0], [1, 0], [0, 1], [1, 1]] }]
//! }
//! ```
//!
//! Coefficients are rationals written as strings (`"3"`, `"-2/5"`).

use std::path::Path;

use anyhow::{Context, Result, anyhow, bail};
use serde::{Deserialize, Serialize};
use toric_heights::cyclotomic::LaurentPoly;
use toric_heights::heights::{ArchOptions, MetrizedToricDivisor};
use toric_heights::lattice::LatticePolytope;
use toric_heights::num::Q;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PolySpec {
    pub terms: Vec<(Vec<i64>, String)>,
}

impl PolySpec {
    pub fn build(&self) -> Result<LaurentPoly> {
        let dim = self.terms.first().ok_or_else(|| anyhow!("polynomial with no terms"))?.0.len();
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                if m.len() != dim {
                    bail!("exponent {m:?} has the wrong length (expected {dim})");
                }
                let c: Q = c.trim().parse().map_err(|e| anyhow!("bad coefficient {c:?}: {e}"))?;
                Ok((m.clone(), c))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(LaurentPoly::from_rational(dim, &terms)?)
    }

    pub fn from_ints(terms: &[(&[i64], i64)]) -> Self {
        PolySpec { terms: terms.iter().map(|(m, c)| (m.to_vec(), c.to_string())).collect() }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DivisorSpec {
    /// Canonical metric on the convex hull of the given lattice points.
    Canonical { vertices: Vec<Vec<i64>> },
    /// Ronkin metric of a polynomial.
    Ronkin { polynomial: PolySpec },
}

impl DivisorSpec {
    pub fn build(&self, arch: &ArchOptions) -> Result<MetrizedToricDivisor> {
        match self {
            DivisorSpec::Canonical { vertices } => {
                let dim = vertices.first().ok_or_else(|| anyhow!("polytope with no vertices"))?.len();
                Ok(MetrizedToricDivisor::canonical(LatticePolytope::from_points(dim, vertices)?))
            }
            DivisorSpec::Ronkin { polynomial } => Ok(MetrizedToricDivisor::ronkin(&polynomial.build()?, arch)?),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Problem {
    pub f: PolySpec,
    #[serde(default)]
    pub g: Option<PolySpec>,
    /// Polynomial for the equidistribution demo; `f` when absent.
    #[serde(default)]
    pub h: Option<PolySpec>,
    /// Divisors for `predict`; canonical unit cubes when absent.
    #[serde(default)]
    pub divisors: Option<Vec<DivisorSpec>>,
}

impl Problem {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    /// `f = g = 1 + x + y`.
    pub fn line_pair() -> Self {
        let line = PolySpec::from_ints(&[(&[0, 0], 1), (&[1, 0], 1), (&[0, 1], 1)]);
        Problem { f: line.clone(), g: Some(line), h: None, divisors: None }
    }

    pub fn polynomials(&self) -> Result<Vec<LaurentPoly>> {
        let mut out = vec![self.f.build()?];
        if let Some(g) = &self.g {
            out.push(g.build()?);
        }
        Ok(out)
    }

    /// The pair `(f, g)`; both are required.
    pub fn pair(&self) -> Result<(LaurentPoly, LaurentPoly)> {
        let g = self.g.as_ref().ok_or_else(|| anyhow!("this command needs both f and g"))?;
        Ok((self.f.build()?, g.build()?))
    }

    pub fn probe(&self) -> Result<LaurentPoly> {
        self.h.as_ref().unwrap_or(&self.f).build()
    }

    /// The divisors, defaulting to `n + 1 − k` canonical unit cubes.
    pub fn divisors(&self, arch: &ArchOptions) -> Result<Vec<MetrizedToricDivisor>> {
        if let Some(ds) = &self.divisors {
            return ds.iter().map(|d| d.build(arch)).collect();
        }
        let fs = self.polynomials()?;
        let n = fs[0].dim();
        let k = fs.len();
        if k > n {
            bail!("{k} polynomials in dimension {n}");
        }
        Ok((0..=n - k).map(|_| MetrizedToricDivisor::canonical(LatticePolytope::cube(n, 1))).collect())
    }
}

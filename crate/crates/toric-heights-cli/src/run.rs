//! Experiments behind the subcommands, returning serializable rows.

use std::time::Instant;

use anyhow::Result;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use toric_heights::concave::Estimate;
use toric_heights::cyclotomic::{TorsionPoint, torus_solution_count};
use toric_heights::heights::{degree_prediction, limit_height};
use toric_heights::lattice::LatticePolytope;
use toric_heights::num::to_f64;
use toric_heights::ronkin::Place;
use toric_heights::verify::{self, RowStatus};

use crate::config::ExperimentConfig;
use crate::problem::Problem;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PlaceTerm {
    pub place: String,
    pub value: f64,
    pub error: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PredictReport {
    pub places: Vec<PlaceTerm>,
    pub total: f64,
    pub error: f64,
    /// Mixed volume of the divisor polytopes and Newton polytopes.
    pub degree: String,
    pub wall_ms: u128,
}

fn place_name(p: &Place) -> String {
    match p {
        Place::Archimedean => "inf".into(),
        Place::Prime(p) => p.to_string(),
    }
}

pub fn predict(problem: &Problem, config: &ExperimentConfig) -> Result<PredictReport> {
    let start = Instant::now();
    let arch = config.arch();
    let fs = problem.polynomials()?;
    let ds = problem.divisors(&arch)?;
    let frefs: Vec<_> = fs.iter().collect();
    let drefs: Vec<_> = ds.iter().collect();
    let report = limit_height(&frefs, &drefs, &arch)?;
    // The degree uses every divisor but the first.
    let polys: Vec<&LatticePolytope> = ds.iter().skip(1).map(|d| d.polytope()).collect();
    let degree = degree_prediction(&frefs, &polys)?;
    Ok(PredictReport {
        places: report
            .contributions
            .iter()
            .map(|(p, e)| PlaceTerm { place: place_name(p), value: e.value, error: e.error })
            .collect(),
        total: report.total.value,
        error: report.total.error,
        degree: degree.to_string(),
        wall_ms: start.elapsed().as_millis(),
    })
}

/// A convergence row as written to CSV.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CsvRow {
    #[serde(rename = "N")]
    pub n: u64,
    pub s: u64,
    pub lhs: Option<f64>,
    pub rhs: f64,
    pub abs_dev: Option<f64>,
    pub degree: Option<usize>,
    pub status: String,
    pub wall_ms: u128,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ConvergenceSummary {
    pub rows: usize,
    pub failed_rows: usize,
    pub rhs: f64,
    pub rhs_error: f64,
    pub expected_degree: usize,
    pub degrees_match: bool,
    /// Largest `|LHS − RHS|` over the last three rows.
    pub tail_max_abs_dev: Option<f64>,
    pub rhs_wall_ms: u128,
    pub wall_ms: u128,
}

pub fn convergence(problem: &Problem, config: &ExperimentConfig) -> Result<(Vec<CsvRow>, ConvergenceSummary)> {
    let start = Instant::now();
    let (f, g) = problem.pair()?;
    let terms = config.sequence()?;
    let rhs = verify::desk_rhs(&f, &g, &config.arch())?.total;
    let rhs_wall_ms = start.elapsed().as_millis();
    let expected = verify::expected_degree(&f, &g)?;
    let rows: Vec<CsvRow> = terms
        .par_iter()
        .map(|t| {
            let s = Instant::now();
            let r = verify::convergence_row(&f, &g, t, rhs, expected);
            CsvRow {
                n: r.order,
                s: r.s,
                lhs: r.lhs.map(|e| e.value),
                rhs: rhs.value,
                abs_dev: r.abs_dev,
                degree: r.degree,
                status: r.status.label(),
                wall_ms: s.elapsed().as_millis(),
            }
        })
        .collect();
    let summary = summarize(&rows, rhs, expected, rhs_wall_ms, start.elapsed().as_millis());
    Ok((rows, summary))
}

fn summarize(rows: &[CsvRow], rhs: Estimate, expected: usize, rhs_wall_ms: u128, wall_ms: u128) -> ConvergenceSummary {
    let ok = RowStatus::Ok.label();
    let tail: Vec<f64> = rows.iter().rev().take(3).filter_map(|r| r.abs_dev).collect();
    ConvergenceSummary {
        rows: rows.len(),
        failed_rows: rows.iter().filter(|r| r.status != ok).count(),
        rhs: rhs.value,
        rhs_error: rhs.error,
        expected_degree: expected,
        degrees_match: rows.iter().filter(|r| r.lhs.is_some()).all(|r| r.degree == Some(expected)),
        tail_max_abs_dev: (tail.len() == 3.min(rows.len()) && !tail.is_empty())
            .then(|| tail.iter().cloned().fold(0.0, f64::max)),
        rhs_wall_ms,
        wall_ms,
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct TailCsvRow {
    #[serde(rename = "N")]
    pub n: u64,
    pub s: u64,
    pub value: f64,
    pub bound: f64,
    pub within_bound: bool,
    /// Good primes with a nonzero term, as `p:coefficient` (value = coefficient · log p).
    pub nonzero_terms: String,
    pub good_primes: usize,
    pub bad_primes: usize,
}

pub fn tail(problem: &Problem, config: &ExperimentConfig, prime_bound: u64) -> Result<Vec<TailCsvRow>> {
    let (f, g) = problem.pair()?;
    let terms = config.sequence()?;
    let d0 = LatticePolytope::cube(2, 1);
    let rows: Vec<Result<TailCsvRow>> = terms
        .par_iter()
        .map(|t| {
            let r = verify::adelic_tail(&f, &g, std::slice::from_ref(t), prime_bound, &d0)?.remove(0);
            let nonzero: Vec<String> = r
                .terms
                .iter()
                .filter(|x| x.index_valuation > 0)
                .map(|x| format!("{}:{}", x.prime, x.log_coefficient()))
                .collect();
            Ok(TailCsvRow {
                n: r.order,
                s: r.s,
                value: r.value,
                bound: r.bound,
                within_bound: r.within_bound,
                nonzero_terms: nonzero.join(" "),
                good_primes: r.terms.len(),
                bad_primes: r.skipped.len(),
            })
        })
        .collect();
    rows.into_iter().collect()
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct EquidistCsvRow {
    #[serde(rename = "N")]
    pub n: u64,
    pub s: u64,
    pub average: f64,
    pub mahler: f64,
    pub mahler_error: f64,
    pub deviation: f64,
    pub flagged: bool,
}

pub fn equidist(problem: &Problem, config: &ExperimentConfig) -> Result<Vec<EquidistCsvRow>> {
    let h = problem.probe()?;
    let rows = match h.dim() {
        1 => verify::equidistribution_demo_1d(&h, &config.orders()?)?,
        _ => {
            let terms = config.sequence()?;
            let m = verify::mahler_measure_laurent(&h)?;
            terms
                .par_iter()
                .map(|t| {
                    let (average, flagged) = verify::orbit_average(&h, &t.omega.1)?;
                    let deviation = if h.is_monomial() { 0.0 } else { average - m.value };
                    Ok(verify::EquidistRow { order: t.order, s: t.s, average, mahler: m, deviation, flagged })
                })
                .collect::<Result<Vec<_>>>()?
        }
    };
    Ok(rows
        .into_iter()
        .map(|r| EquidistCsvRow {
            n: r.order,
            s: r.s,
            average: r.average,
            mahler: r.mahler.value,
            mahler_error: r.mahler.error,
            deviation: r.deviation,
            flagged: r.flagged,
        })
        .collect())
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct DegreeReport {
    pub mixed_volume: String,
    /// Torus solutions of the untwisted pair and of one twisted pair.
    pub torus_solutions: Option<usize>,
    pub twisted_torus_solutions: Option<usize>,
    pub twist_order: u64,
}

pub fn degree(problem: &Problem, config: &ExperimentConfig) -> Result<DegreeReport> {
    let (f, g) = problem.pair()?;
    let mv = degree_prediction(&[&f, &g], &[])?;
    let t = TorsionPoint::new(config.orders()?.first().copied().unwrap_or(5), &[1, 2])?;
    let twisted = g.twist(&t)?;
    Ok(DegreeReport {
        mixed_volume: mv.to_string(),
        torus_solutions: torus_solution_count(&f, &g).ok(),
        twisted_torus_solutions: torus_solution_count(&f, &twisted).ok(),
        twist_order: t.order(),
    })
}

/// Serializes rows as CSV.
pub fn to_csv<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

/// Mixed volume as a float, for summaries.
pub fn degree_value(r: &DegreeReport) -> f64 {
    r.mixed_volume.parse::<toric_heights::num::Q>().map(|q| to_f64(&q)).unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::PrimeRange;
    use crate::problem::PolySpec;

    fn small() -> ExperimentConfig {
        let mut c = ExperimentConfig::new(PrimeRange { start: 11, end: 31 }, 7);
        c.resolution = 16;
        c.budget = 2000;
        c
    }

    #[test]
    fn csv_header_is_fixed() {
        let rows = vec![CsvRow {
            n: 11,
            s: 3,
            lhs: None,
            rhs: 0.5,
            abs_dev: None,
            degree: None,
            status: "error: x".into(),
            wall_ms: 1,
        }];
        let text = to_csv(&rows).unwrap();
        assert_eq!(text.lines().next().unwrap(), "N,s,lhs,rhs,abs_dev,degree,status,wall_ms");
    }

    #[test]
    fn small_convergence_run() {
        let (rows, summary) = convergence(&Problem::line_pair(), &small()).unwrap();
        assert_eq!(rows.len(), 7);
        assert!(rows.windows(2).all(|w| w[0].n < w[1].n));
        assert_eq!(summary.failed_rows, 0);
        assert!(summary.degrees_match);
        assert_eq!(summary.expected_degree, 1);
    }

    #[test]
    fn constant_input_fails_every_row() {
        let p = Problem {
            f: PolySpec::from_ints(&[(&[0, 0], 1)]),
            ..Problem::line_pair()
        };
        let (rows, summary) = convergence(&p, &small()).unwrap();
        assert_eq!(summary.failed_rows, rows.len());
        assert_eq!(summary.rhs, 0.0);
        assert!(summary.tail_max_abs_dev.is_none());
    }

    #[test]
    fn other_subcommands() {
        let c = small();
        let p = Problem::line_pair();
        let t = tail(&p, &c, 30).unwrap();
        assert!(t.iter().all(|r| r.within_bound && r.value == 0.0));
        let d = degree(&p, &c).unwrap();
        assert_eq!(d.mixed_volume, "1");
        assert_eq!(d.twisted_torus_solutions, Some(1));
        assert_eq!(degree_value(&d), 1.0);
        let pr = predict(&Problem { g: None, ..p.clone() }, &c).unwrap();
        assert_eq!(pr.places[0].place, "inf");
        // Hypersurface height of 1 + x + y for the canonical unit squares.
        assert!(pr.total > 0.0);
        let e = equidist(&Problem { h: Some(PolySpec::from_ints(&[(&[1], 1), (&[0], -2)])), ..p }, &c).unwrap();
        assert!(e.iter().all(|r| r.deviation > 0.0 && !r.flagged));
    }
}

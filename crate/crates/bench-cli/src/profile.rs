//! Performance profiles and geometric-mean summaries over results tables.
//!
//! For an objective value `v(a, i)` of algorithm `a` on instance `i`, the
//! profile of `a` at factor `tau` is the fraction of instances with
//! `v(a, i) <= tau * min_a' v(a', i)`. Cells that ran out of time never count
//! as solved.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use fairorient::Error;

use crate::error::{BenchError, Result};
use crate::table::{Row, Status};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    Time,
    Max,
    SumSq,
}

impl Objective {
    pub fn name(self) -> &'static str {
        match self {
            Objective::Time => "time",
            Objective::Max => "max",
            Objective::SumSq => "sumsq",
        }
    }

    pub fn column(self) -> &'static str {
        match self {
            Objective::Time => "time_ns",
            Objective::Max => "max_out",
            Objective::SumSq => "sum_sq",
        }
    }

    /// `None` for cells that did not finish.
    pub fn value(self, row: &Row) -> Option<f64> {
        if row.status != Status::Ok {
            return None;
        }
        match self {
            Objective::Time => row.time_ns.map(|v| v as f64),
            Objective::Max => row.max_out.map(f64::from),
            Objective::SumSq => row.sum_sq.map(|v| v as f64),
        }
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Objective {
    type Err = Error;

    fn from_str(s: &str) -> fairorient::Result<Self> {
        [Objective::Time, Objective::Max, Objective::SumSq]
            .into_iter()
            .find(|o| o.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown objective `{s}`")))
    }
}

/// Algorithm -> instance -> value.
type Grid = BTreeMap<String, BTreeMap<String, Option<f64>>>;

/// Groups rows by algorithm and requires every algorithm to cover the same
/// instances exactly once.
fn grid(rows: &[Row], objective: Objective) -> Result<Grid> {
    let mut g: Grid = BTreeMap::new();
    for r in rows {
        let (alg, inst) = (r.algorithm(), r.instance_key());
        let cells = g.entry(alg.clone()).or_default();
        if cells.insert(inst.clone(), objective.value(r)).is_some() {
            return Err(BenchError::Table(format!(
                "`{alg}` has more than one row for instance `{inst}`"
            )));
        }
    }
    let mut algs = g.iter();
    if let Some((first, expected)) = algs.next() {
        for (alg, cells) in algs {
            let missing = expected.keys().find(|k| !cells.contains_key(*k));
            let extra = cells.keys().find(|k| !expected.contains_key(*k));
            if let Some(inst) = missing {
                return Err(BenchError::Table(format!(
                    "instance sets differ: `{inst}` has a row for `{first}` but not for `{alg}`"
                )));
            }
            if let Some(inst) = extra {
                return Err(BenchError::Table(format!(
                    "instance sets differ: `{inst}` has a row for `{alg}` but not for `{first}`"
                )));
            }
        }
    }
    Ok(g)
}

/// `v / best`, where two zeros compare as equal.
fn ratio(v: f64, best: f64) -> f64 {
    if v == best {
        1.0
    } else if best == 0.0 {
        f64::INFINITY
    } else {
        v / best
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    pub taus: Vec<f64>,
    /// One curve per algorithm, aligned with `taus`.
    pub curves: Vec<(String, Vec<f64>)>,
    pub instances: usize,
}

/// A profile on `steps` geometrically spaced factors from 1 to `tau_max`.
/// Without `tau_max` the grid ends at the largest finite ratio observed,
/// so every curve that solves all instances reaches 1 at the last point.
pub fn profile(
    rows: &[Row],
    objective: Objective,
    steps: usize,
    tau_max: Option<f64>,
) -> Result<Profile> {
    if steps == 0 {
        return Err(BenchError::Table(
            "the factor grid needs at least one step".into(),
        ));
    }
    if let Some(t) = tau_max {
        if !(t >= 1.0 && t.is_finite()) {
            return Err(BenchError::Table(format!(
                "tau-max must be at least 1, got {t}"
            )));
        }
    }
    let g = grid(rows, objective)?;
    let instances: Vec<&String> = g.values().next().map_or(Vec::new(), |c| c.keys().collect());
    let best: BTreeMap<&String, Option<f64>> = instances
        .iter()
        .map(|&i| {
            let b = g
                .values()
                .filter_map(|c| c[i])
                .fold(None, |acc: Option<f64>, v| {
                    Some(acc.map_or(v, |a| a.min(v)))
                });
            (i, b)
        })
        .collect();
    let ratios: Vec<(String, Vec<f64>)> = g
        .iter()
        .map(|(alg, cells)| {
            let rs = instances
                .iter()
                .filter_map(|&i| Some(ratio(cells[i]?, best[i]?)))
                .collect();
            (alg.clone(), rs)
        })
        .collect();
    let observed = ratios
        .iter()
        .flat_map(|(_, rs)| rs.iter().copied())
        .filter(|r| r.is_finite())
        .fold(1.0f64, f64::max);
    let top = tau_max.unwrap_or(observed);
    let taus: Vec<f64> = (0..steps)
        .map(|k| {
            if k + 1 == steps {
                top
            } else {
                top.powf(k as f64 / (steps - 1).max(1) as f64)
            }
        })
        .collect();
    let total = instances.len();
    let curves = ratios
        .into_iter()
        .map(|(alg, rs)| {
            let curve = taus
                .iter()
                .map(|&tau| {
                    if total == 0 {
                        0.0
                    } else {
                        rs.iter().filter(|&&r| r <= tau).count() as f64 / total as f64
                    }
                })
                .collect();
            (alg, curve)
        })
        .collect();
    Ok(Profile {
        taus,
        curves,
        instances: total,
    })
}

/// Long format: `algorithm,tau,fraction`.
pub fn write_profile<W: Write>(out: W, p: &Profile) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let err = |e| BenchError::csv("output", e);
    w.write_record(["algorithm", "tau", "fraction"])
        .map_err(err)?;
    for (alg, curve) in &p.curves {
        for (tau, frac) in p.taus.iter().zip(curve) {
            w.write_record([alg.as_str(), &format!("{tau:.6}"), &format!("{frac:.6}")])
                .map_err(err)?;
        }
    }
    w.flush().map_err(|e| BenchError::io("output", e))
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeoRow {
    pub algorithm: String,
    pub geomean: f64,
    /// Geometric mean divided by the smallest one.
    pub relative: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeoSummary {
    pub rows: Vec<GeoRow>,
    /// Instances every algorithm finished with a positive value.
    pub instances: usize,
    pub skipped: usize,
}

/// Geometric mean per algorithm over the instances that every algorithm
/// finished with a positive value, normalised to the best algorithm.
pub fn geomean(rows: &[Row], objective: Objective) -> Result<GeoSummary> {
    let g = grid(rows, objective)?;
    let instances: Vec<&String> = g.values().next().map_or(Vec::new(), |c| c.keys().collect());
    let usable: Vec<&String> = instances
        .iter()
        .copied()
        .filter(|i| g.values().all(|c| c[*i].is_some_and(|v| v > 0.0)))
        .collect();
    if usable.is_empty() {
        return Err(BenchError::Table(
            "no instance was finished by every algorithm with a positive value".into(),
        ));
    }
    let means: Vec<(String, f64)> = g
        .iter()
        .map(|(alg, cells)| {
            let log_sum: f64 = usable.iter().map(|i| cells[*i].unwrap().ln()).sum();
            (alg.clone(), (log_sum / usable.len() as f64).exp())
        })
        .collect();
    let best = means.iter().map(|m| m.1).fold(f64::INFINITY, f64::min);
    Ok(GeoSummary {
        rows: means
            .into_iter()
            .map(|(algorithm, geomean)| GeoRow {
                algorithm,
                geomean,
                relative: geomean / best,
            })
            .collect(),
        instances: usable.len(),
        skipped: instances.len() - usable.len(),
    })
}

/// `algorithm,instances,geomean,relative`.
pub fn write_geomean<W: Write>(out: W, s: &GeoSummary) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let err = |e| BenchError::csv("output", e);
    w.write_record(["algorithm", "instances", "geomean", "relative"])
        .map_err(err)?;
    for r in &s.rows {
        w.write_record([
            r.algorithm.as_str(),
            &s.instances.to_string(),
            &format!("{:.6}", r.geomean),
            &format!("{:.6}", r.relative),
        ])
        .map_err(err)?;
    }
    w.flush().map_err(|e| BenchError::io("output", e))
}

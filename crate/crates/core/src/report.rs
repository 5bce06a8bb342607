//! JSON documents for results. Rationals are written as exact `"p/q"`
//! strings, edges and vertices by their ids, and fields keep a fixed order.

use serde::Serialize;

use crate::ergopt::{BalanceReport, CriticalSubgraph, Method, MinMeanResult};
use crate::numeric::{format_rational, Rational};
use crate::subaction::{BoundEstimate, CorollaryReport, PointRow, SubcohomologyReport};
use crate::systems::input::{point_doc, PointDoc};
use crate::systems::{FiniteSystem, SymbolicPoint};

fn exact(q: &Rational) -> String {
    format_rational(q)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MinMeanDoc {
    pub fbar: String,
    pub witness_cycle: Vec<String>,
    pub method: Method,
}

impl MinMeanDoc {
    pub fn new(system: &FiniteSystem, result: &MinMeanResult) -> Self {
        Self {
            fbar: exact(&result.fbar),
            witness_cycle: system.edge_ids(&result.witness_cycle),
            method: result.method,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PotentialDoc {
    pub vertex: String,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriticalDoc {
    pub fbar: String,
    pub edges: Vec<String>,
    pub vertices: Vec<String>,
    pub potentials: Vec<PotentialDoc>,
}

impl CriticalDoc {
    pub fn new(system: &FiniteSystem, critical: &CriticalSubgraph) -> Self {
        Self {
            fbar: exact(&critical.fbar),
            edges: system.edge_ids(&critical.edges),
            vertices: critical.vertices.iter().map(|&v| system.vertices()[v].clone()).collect(),
            potentials: critical
                .potentials
                .iter()
                .enumerate()
                .map(|(v, phi)| PotentialDoc {
                    vertex: system.vertices()[v].clone(),
                    value: exact(phi),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BalanceDoc {
    pub min_integral: String,
    pub max_integral: String,
    pub balanced: bool,
    pub gap: String,
    pub min_witness: Vec<String>,
    pub max_witness: Vec<String>,
}

impl BalanceDoc {
    pub fn new(system: &FiniteSystem, report: &BalanceReport) -> Self {
        Self {
            min_integral: exact(&report.min_integral),
            max_integral: exact(&report.max_integral),
            balanced: report.balanced,
            gap: exact(&report.gap()),
            min_witness: system.edge_ids(&report.min_witness),
            max_witness: system.edge_ids(&report.max_witness),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MorrisDoc {
    pub pass: bool,
    pub fbar: String,
    pub point: PointDoc,
    pub checked_n: u64,
}

impl MorrisDoc {
    pub fn new(system: &FiniteSystem, fbar: &Rational, point: &SymbolicPoint, pass: bool, checked_n: u64) -> Self {
        Self {
            pass,
            fbar: exact(fbar),
            point: point_doc(system, point),
            checked_n,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WitnessDoc {
    pub point_id: usize,
    pub point: String,
    pub defect: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SubcohomologyDoc {
    pub pass: bool,
    pub min_defect: Option<String>,
    pub witnesses: Vec<WitnessDoc>,
    pub unbounded: Vec<usize>,
    pub sample_size: usize,
}

impl SubcohomologyDoc {
    pub fn new(system: &FiniteSystem, rows: &[PointRow], report: &SubcohomologyReport) -> Self {
        let witnesses = report
            .witnesses
            .iter()
            .map(|&i| WitnessDoc {
                point_id: i,
                point: rows[i].point.describe(system),
                defect: rows[i].outcome.as_ref().map(|(_, d)| exact(&d.value)).unwrap_or_default(),
            })
            .collect();
        Self {
            pass: report.pass,
            min_defect: report.min_defect.as_ref().map(exact),
            witnesses,
            unbounded: report.unbounded.clone(),
            sample_size: report.sample_size,
        }
    }
}

/// One CSV row of a transfer-function sweep.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SubactionCsvRow {
    pub point_id: usize,
    pub u: String,
    pub u_plus: String,
    pub defect: String,
    pub exactness: String,
    pub attained_n: String,
}

impl SubactionCsvRow {
    pub fn new(point_id: usize, row: &PointRow) -> Self {
        match &row.outcome {
            Ok((u, d)) => Self {
                point_id,
                u: exact(&u.value),
                u_plus: exact(&u.positive_part()),
                defect: exact(&d.value),
                exactness: "exact".into(),
                attained_n: u.attained_n.to_string(),
            },
            Err(_) => Self {
                point_id,
                u: "inf".into(),
                u_plus: "inf".into(),
                defect: String::new(),
                exactness: "unbounded".into(),
                attained_n: String::new(),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ViolationDoc {
    pub point: String,
    pub n: u64,
    pub sum: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorollaryDoc {
    pub pass: bool,
    #[serde(rename = "C")]
    pub c: String,
    pub c_argmax_point: Option<String>,
    pub unbounded: Vec<usize>,
    pub horizon: u64,
    pub max_cycle_len: usize,
    pub checked_points: usize,
    pub checked_cycles: usize,
    pub witnesses: Vec<ViolationDoc>,
    pub off_mean_cycles: Vec<Vec<String>>,
}

impl CorollaryDoc {
    pub fn new(system: &FiniteSystem, sample: &[SymbolicPoint], estimate: &BoundEstimate, report: &CorollaryReport) -> Self {
        Self {
            pass: report.pass && estimate.is_finite(),
            c: exact(&report.c),
            c_argmax_point: estimate.argmax.map(|i| sample[i].describe(system)),
            unbounded: estimate.unbounded.clone(),
            horizon: report.horizon,
            max_cycle_len: report.max_cycle_len,
            checked_points: report.checked_points,
            checked_cycles: report.checked_cycles,
            witnesses: report
                .violations
                .iter()
                .map(|v| ViolationDoc {
                    point: v.point.describe(system),
                    n: v.n,
                    sum: exact(&v.sum),
                })
                .collect(),
            off_mean_cycles: report.off_mean_cycles.iter().map(|c| system.edge_ids(c)).collect(),
        }
    }
}

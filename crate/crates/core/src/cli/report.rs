//! Serializable report shapes and their text summaries.

use std::fmt::Write as _;

use serde::Serialize;

use super::document::{scalars_to_json, split_to_json, subspace_to_json, FieldJson, ScalarRows, SplitJson};
use crate::modstruct::{DecisionMethod, IrreducibilityStatus, IrreducibilityVerdict};
use crate::oracle::OracleReport;
use crate::pair::{
    DimensionProfile, OrderingPair, PairAnalysisReport, SplitRoute, SplitViolation, TridiagonalStatus,
};
use crate::spectral::EigenStructure;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EigenJson {
    pub eigenvalues: Vec<String>,
    pub algebraic_multiplicities: Vec<usize>,
    pub geometric_multiplicities: Vec<usize>,
    pub diagonalizable: bool,
}

impl EigenJson {
    fn new(e: &EigenStructure) -> Self {
        EigenJson {
            eigenvalues: scalars_to_json(&e.eigenvalues),
            algebraic_multiplicities: e.algebraic_multiplicities.clone(),
            geometric_multiplicities: e.geometric_multiplicities(),
            diagonalizable: e.diagonalizable,
        }
    }
}

/// An ordering pair written as the two eigenvalue sequences.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrderingJson {
    pub theta: Vec<String>,
    pub theta_star: Vec<String>,
}

impl OrderingJson {
    fn new(o: &OrderingPair, ea: &EigenStructure, eb: &EigenStructure) -> Self {
        let seq = |e: &EigenStructure, ord: &[usize]| ord.iter().map(|&k| e.eigenvalues[k].to_string()).collect();
        OrderingJson { theta: seq(ea, &o.order_a), theta_star: seq(eb, &o.order_astar) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IrreducibilityJson {
    pub status: IrreducibilityStatus,
    pub method: DecisionMethod,
    pub witness: Option<ScalarRows>,
}

impl IrreducibilityJson {
    fn new(v: &IrreducibilityVerdict) -> Self {
        IrreducibilityJson {
            status: v.status,
            method: v.method,
            witness: v.witness.as_ref().map(subspace_to_json),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ViolationJson {
    #[serde(flatten)]
    pub violation: SplitViolation,
    pub message: String,
}

pub fn violations_json(vs: &[SplitViolation]) -> Vec<ViolationJson> {
    vs.iter()
        .map(|v| ViolationJson { violation: v.clone(), message: v.to_string() })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SplitReportJson {
    pub route: SplitRoute,
    pub valid: bool,
    pub split: SplitJson,
    pub violations: Vec<ViolationJson>,
    pub dimension_profile: Option<DimensionProfile>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TridiagonalJson {
    pub status: TridiagonalStatus,
    pub orderings: Vec<OrderingJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AnalyzeReport {
    pub field: FieldJson,
    pub n: usize,
    #[serde(rename = "eigen_A")]
    pub eigen_a: EigenJson,
    #[serde(rename = "eigen_Astar")]
    pub eigen_astar: EigenJson,
    pub d: usize,
    pub delta: usize,
    pub d_equals_delta: bool,
    pub is_hessenberg_pair: bool,
    pub hessenberg_orderings: Vec<OrderingJson>,
    pub irreducible: IrreducibilityJson,
    pub splits: Vec<SplitReportJson>,
    pub tridiagonal: TridiagonalJson,
}

impl AnalyzeReport {
    pub fn new(r: &PairAnalysisReport) -> Self {
        let (ea, eb) = (&r.eigen_a, &r.eigen_astar);
        AnalyzeReport {
            field: FieldJson::from_spec(ea.transform.spec()),
            n: ea.n(),
            eigen_a: EigenJson::new(ea),
            eigen_astar: EigenJson::new(eb),
            d: r.d(),
            delta: r.delta(),
            d_equals_delta: r.d() == r.delta(),
            is_hessenberg_pair: r.is_hessenberg_pair(),
            hessenberg_orderings: r.hessenberg_orderings.iter().map(|o| OrderingJson::new(o, ea, eb)).collect(),
            irreducible: IrreducibilityJson::new(&r.irreducibility),
            splits: r
                .splits
                .iter()
                .map(|s| SplitReportJson {
                    route: s.route,
                    valid: s.is_valid(),
                    split: split_to_json(&s.split),
                    violations: violations_json(&s.violations),
                    dimension_profile: s.profile.clone(),
                })
                .collect(),
            tridiagonal: TridiagonalJson {
                status: r.tridiagonal.status,
                orderings: r.tridiagonal.orderings.iter().map(|o| OrderingJson::new(o, ea, eb)).collect(),
            },
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let field = match self.field {
            FieldJson::Q => "Q".to_string(),
            FieldJson::GF { p } => format!("GF({p})"),
        };
        let _ = writeln!(s, "field {field}, n = {}", self.n);
        for (name, e) in [("A", &self.eigen_a), ("A*", &self.eigen_astar)] {
            let _ = writeln!(
                s,
                "{name}: eigenvalues [{}], multiplicities {:?}, {}",
                e.eigenvalues.join(", "),
                e.algebraic_multiplicities,
                if e.diagonalizable { "diagonalizable" } else { "not diagonalizable" }
            );
        }
        let _ = writeln!(s, "d = {}, delta = {}", self.d, self.delta);
        let _ = writeln!(s, "irreducible: {:?} ({:?})", self.irreducible.status, self.irreducible.method);
        let _ = writeln!(s, "Hessenberg orderings: {}", self.hessenberg_orderings.len());
        for o in &self.hessenberg_orderings {
            let _ = writeln!(s, "  theta = ({}), theta* = ({})", o.theta.join(", "), o.theta_star.join(", "));
        }
        let valid = self.splits.iter().filter(|x| x.valid).count();
        let _ = writeln!(s, "split decompositions: {valid} valid of {}", self.splits.len());
        let _ = writeln!(
            s,
            "tridiagonal: {:?} ({} three-term orderings)",
            self.tridiagonal.status,
            self.tridiagonal.orderings.len()
        );
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckSplitReport {
    pub valid: bool,
    pub violations: Vec<ViolationJson>,
    /// The split given by the intersection formula for the candidate's
    /// eigenvalue orderings, when those orderings exist.
    pub formula_split: Option<SplitJson>,
    /// Whether the candidate equals `formula_split`.
    pub matches_formula: Option<bool>,
}

impl CheckSplitReport {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "split decomposition: {}", if self.valid { "valid" } else { "invalid" });
        for v in &self.violations {
            let _ = writeln!(s, "  {}", v.message);
        }
        match self.matches_formula {
            Some(m) => {
                let _ = writeln!(s, "matches intersection formula: {}", if m { "yes" } else { "no" });
            }
            None => {
                let _ = writeln!(s, "intersection formula: not applicable");
            }
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleJson {
    #[serde(flatten)]
    pub report: OracleReport,
    pub tridiagonal: TridiagonalStatus,
    pub all_agree: bool,
}

impl OracleJson {
    pub fn to_text(&self) -> String {
        let r = &self.report;
        let mut s = String::new();
        let _ = writeln!(
            s,
            "ordering search: {} ({} orderings)",
            if r.orderings_agree { "agrees" } else { "DISAGREES" },
            r.orderings_found
        );
        let irr = match r.irreducibility_agrees {
            Some(true) => "agrees",
            Some(false) => "DISAGREES",
            None => "oracle out of reach",
        };
        let _ = writeln!(s, "irreducibility: {irr} (fast path {:?})", r.fast_irreducibility);
        let _ = writeln!(s, "tridiagonal: {:?}", self.tridiagonal);
        s
    }
}

//! Report values shared by the JSON and text renderers.

use std::fmt::Write as _;

use num_bigint::BigInt;
use serde::{Serialize, Serializer};

/// An exact integer: a JSON number when it fits in an `i64`, a decimal
/// string otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Int(pub BigInt);

impl Serialize for Int {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match i64::try_from(&self.0) {
            Ok(v) => s.serialize_i64(v),
            Err(_) => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl std::fmt::Display for Int {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

/// A method's result, or the reason it was not run to completion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Computed {
    Value(Int),
    Skipped(String),
}

impl Computed {
    pub fn value(&self) -> Option<&BigInt> {
        match self {
            Computed::Value(v) => Some(&v.0),
            Computed::Skipped(_) => None,
        }
    }
}

impl std::fmt::Display for Computed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Computed::Value(v) => v.fmt(f),
            Computed::Skipped(why) => f.write_str(why),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GraphSummary {
    pub vertices: usize,
    pub edges: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassRow {
    pub permutation: Vec<usize>,
    pub even: u64,
    pub odd: u64,
    pub class_value: Int,
    /// Absent when the graph is too large for the full permutation table.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elementary_product: Option<Int>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub agrees: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub vertex: usize,
    pub kind: &'static str,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComputeReport {
    pub graph: GraphSummary,
    pub method: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ps_determinant: Option<Computed>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ps_leibniz: Option<Computed>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ps_circuits: Option<Computed>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub circuits: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub even: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub odd: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classes: Option<Vec<ClassRow>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reduction: Option<Vec<TraceStep>>,
    pub agreement: bool,
}

impl ComputeReport {
    /// True iff every method that produced a value produced the same one.
    pub fn values_agree(&self) -> bool {
        let values: Vec<&BigInt> = [&self.ps_determinant, &self.ps_leibniz, &self.ps_circuits]
            .into_iter()
            .flatten()
            .filter_map(Computed::value)
            .collect();
        let classes_ok = self
            .classes
            .iter()
            .flatten()
            .all(|row| row.agrees != Some(false));
        values.windows(2).all(|w| w[0] == w[1]) && classes_ok
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "graph: {} vertices, {} edges",
            self.graph.vertices, self.graph.edges
        );
        let _ = writeln!(out, "method: {}", self.method);
        for (label, v) in [
            ("determinant", &self.ps_determinant),
            ("leibniz", &self.ps_leibniz),
            ("circuits", &self.ps_circuits),
        ] {
            if let Some(v) = v {
                let _ = writeln!(out, "PS via {label}: {v}");
            }
        }
        if let Some(n) = self.circuits {
            let _ = writeln!(out, "circuits: {n}");
        }
        if let (Some(even), Some(odd)) = (self.even, self.odd) {
            let _ = writeln!(out, "families: {even} even, {odd} odd ({even} - {odd})");
        }
        if let Some(rows) = &self.classes {
            let _ = writeln!(out, "classes by induced permutation:");
            for row in rows {
                let _ = write!(
                    out,
                    "  {:?}: {} even, {} odd, value {}",
                    row.permutation, row.even, row.odd, row.class_value
                );
                if let Some(p) = &row.elementary_product {
                    let _ = write!(out, ", elementary product {p}");
                }
                let _ = writeln!(out);
            }
        }
        if let Some(steps) = &self.reduction {
            render_steps(&mut out, steps);
        }
        let _ = writeln!(out, "agreement: {}", self.agreement);
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyEntry {
    pub parity: &'static str,
    pub circuits: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyClass {
    pub permutation: Vec<usize>,
    pub even: u64,
    pub odd: u64,
    pub value: Int,
    pub families: Vec<FamilyEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyListing {
    pub total: usize,
    pub even: u64,
    pub odd: u64,
    pub classes: Vec<FamilyClass>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CircuitsReport {
    pub graph: GraphSummary,
    pub circuits: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub families: Option<FamilyListing>,
}

impl CircuitsReport {
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "graph: {} vertices, {} edges",
            self.graph.vertices, self.graph.edges
        );
        let _ = writeln!(out, "circuits: {}", self.circuits.len());
        for c in &self.circuits {
            let _ = writeln!(out, "  {c}");
        }
        if let Some(f) = &self.families {
            let _ = writeln!(
                out,
                "vertex-disjoint families: {} ({} even, {} odd)",
                f.total, f.even, f.odd
            );
            for class in &f.classes {
                let _ = writeln!(
                    out,
                    "  permutation {:?}: {} even, {} odd, value {}",
                    class.permutation, class.even, class.odd, class.value
                );
                for family in &class.families {
                    let body = if family.circuits.is_empty() {
                        "{}".to_string()
                    } else {
                        format!("{{ {} }}", family.circuits.join(", "))
                    };
                    let _ = writeln!(out, "    {:<4} {body}", family.parity);
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FuzzCaseFailure {
    pub index: u64,
    pub seed: u64,
    pub vertices: usize,
    pub edges: usize,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FuzzReport {
    pub max_vertices: usize,
    pub max_edges: usize,
    pub cases: u64,
    pub seed: u64,
    pub passed: usize,
    pub failed: usize,
    pub failures: Vec<FuzzCaseFailure>,
}

impl FuzzReport {
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "fuzz: {} cases, max {} vertices, max {} edges, seed {}",
            self.cases, self.max_vertices, self.max_edges, self.seed
        );
        let _ = writeln!(out, "passed: {}, failed: {}", self.passed, self.failed);
        for f in &self.failures {
            let _ = writeln!(
                out,
                "  case {} (seed {}, {} vertices, {} edges):",
                f.index, f.seed, f.vertices, f.edges
            );
            for msg in &f.failures {
                let _ = writeln!(out, "    {msg}");
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReduceReport {
    pub graph: GraphSummary,
    pub steps: Vec<TraceStep>,
    pub reduced: GraphSummary,
    pub reduced_graph: String,
    pub ps_before: Int,
    pub ps_after: Int,
    pub preserved: bool,
}

impl ReduceReport {
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "graph: {} vertices, {} edges",
            self.graph.vertices, self.graph.edges
        );
        render_steps(&mut out, &self.steps);
        let _ = writeln!(
            out,
            "reduced: {} vertices, {} edges",
            self.reduced.vertices, self.reduced.edges
        );
        let _ = writeln!(
            out,
            "PS before: {}, after: {}",
            self.ps_before, self.ps_after
        );
        let _ = writeln!(out, "reduced graph:");
        out.push_str(&self.reduced_graph);
        out
    }
}

fn render_steps(out: &mut String, steps: &[TraceStep]) {
    let _ = writeln!(out, "eliminated: {}", steps.len());
    for s in steps {
        let _ = writeln!(out, "  vertex {} ({})", s.vertex, s.kind);
    }
}

use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use num_bigint::BigInt;
use psnum_core::check::{run_fuzz, FuzzConfig, Methods};
use psnum_core::{
    enumerate_circuits, group_by_induced_permutation, ps_via_determinant, reduce_to_closure,
    signed_family_count, vertex_disjoint_families, Caps, Error, Multigraph, Permutation,
    ReductionTrace,
};
use serde::Serialize;

use crate::report::*;
use crate::Method;

pub const EXIT_OK: u8 = 0;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_CAP: u8 = 3;
pub const EXIT_DISAGREE: u8 = 4;

/// Exit code plus an optional message for stderr.
#[derive(Debug)]
pub struct Outcome {
    pub code: u8,
    pub message: Option<String>,
}

impl Outcome {
    fn ok() -> Self {
        Outcome {
            code: EXIT_OK,
            message: None,
        }
    }

    pub fn input(message: String) -> Self {
        Outcome {
            code: EXIT_INPUT,
            message: Some(message),
        }
    }

    fn from_error(e: &Error) -> Self {
        let code = match e {
            Error::ResourceLimit { .. } => EXIT_CAP,
            Error::Parse { .. } | Error::Domain(_) => EXIT_INPUT,
        };
        Outcome {
            code,
            message: Some(e.to_string()),
        }
    }
}

type CmdResult = Result<Outcome, Outcome>;

fn load(path: &Path) -> Result<Multigraph, Outcome> {
    let file = File::open(path)
        .map_err(|e| Outcome::input(format!("cannot read {}: {e}", path.display())))?;
    Multigraph::parse(BufReader::new(file))
        .map_err(|e| Outcome::input(format!("{}: {e}", path.display())))
}

fn emit<T: Serialize>(report: &T, json: bool, text: impl FnOnce(&T) -> String) {
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(report).expect("reports always serialize")
        );
    } else {
        print!("{}", text(report));
    }
}

fn summary(g: &Multigraph) -> GraphSummary {
    GraphSummary {
        vertices: g.vertex_count(),
        edges: g.edge_count(),
    }
}

fn value(v: BigInt) -> Computed {
    Computed::Value(Int(v))
}

fn trace_steps(trace: &ReductionTrace) -> Vec<TraceStep> {
    trace
        .steps
        .iter()
        .map(|s| TraceStep {
            vertex: s.vertex,
            kind: s.kind.as_str(),
        })
        .collect()
}

pub fn compute(
    input: &Path,
    method: Method,
    caps: &Caps,
    with_classes: bool,
    with_reduction: bool,
    json: bool,
) -> CmdResult {
    let g = load(input)?;
    let mut first_error: Option<Error> = None;
    let mut note = |e: Error| {
        let skipped = Computed::Skipped(if e.is_resource_limit() {
            "skipped(cap)".to_string()
        } else {
            format!("skipped({e})")
        });
        first_error.get_or_insert(e);
        skipped
    };

    let wants = |m: Method| method == m || method == Method::All;
    let ps_determinant = wants(Method::Det).then(|| value(ps_via_determinant(&g)));

    let ps_leibniz = if method == Method::Leibniz {
        Some(
            g.adjacency_matrix()
                .identity_minus()
                .leibniz_determinant(caps.factorial_limit)
                .map_or_else(&mut note, value),
        )
    } else if method == Method::All {
        // too large for the n! expansion is not an error when other methods run
        Some(
            g.adjacency_matrix()
                .identity_minus()
                .leibniz_determinant(caps.factorial_limit)
                .map_or_else(|_| Computed::Skipped("skipped(limit)".into()), value),
        )
    } else {
        None
    };

    let mut circuit_count = None;
    let mut parity = None;
    let ps_circuits = wants(Method::Circuits).then(|| {
        let counted = enumerate_circuits(&g, caps.circuits).and_then(|circuits| {
            circuit_count = Some(circuits.len());
            signed_family_count(&g, &circuits, caps.nodes)
        });
        match counted {
            Ok(count) => {
                parity = Some((count.even, count.odd));
                value(count.value())
            }
            Err(e) => note(e),
        }
    });

    let classes = if with_classes {
        match class_rows(&g, caps) {
            Ok(rows) => Some(rows),
            Err(e) => {
                note(e);
                None
            }
        }
    } else {
        None
    };

    let reduction = with_reduction.then(|| trace_steps(&reduce_to_closure(&g)));

    let mut report = ComputeReport {
        graph: summary(&g),
        method: method.name(),
        ps_determinant,
        ps_leibniz,
        ps_circuits,
        circuits: circuit_count,
        even: parity.map(|p| p.0),
        odd: parity.map(|p| p.1),
        classes,
        reduction,
        agreement: false,
    };
    report.agreement = report.values_agree();
    emit(&report, json, ComputeReport::render_text);

    if !report.agreement {
        return Err(Outcome {
            code: EXIT_DISAGREE,
            message: Some("methods disagree".into()),
        });
    }
    match first_error {
        Some(e) => Err(Outcome::from_error(&e)),
        None => Ok(Outcome::ok()),
    }
}

fn class_rows(g: &Multigraph, caps: &Caps) -> Result<Vec<ClassRow>, Error> {
    let circuits = enumerate_circuits(g, caps.circuits)?;
    let classes = group_by_induced_permutation(g, &circuits, caps.nodes)?;
    let matrix = g.adjacency_matrix().identity_minus();
    let small = g.vertex_count() <= caps.factorial_limit;

    let row = |p: &Permutation, count: psnum_core::SignedCount| -> Result<ClassRow, Error> {
        let product = if small {
            Some(matrix.signed_elementary_product(p)?)
        } else {
            None
        };
        Ok(ClassRow {
            permutation: p.images().to_vec(),
            even: count.even,
            odd: count.odd,
            class_value: Int(count.value()),
            agrees: product.as_ref().map(|x| *x == count.value()),
            elementary_product: product.map(Int),
        })
    };

    if small {
        // every permutation, empty classes included
        Permutation::all(g.vertex_count())
            .map(|p| {
                let count = classes.get(&p).copied().unwrap_or_default();
                row(&p, count)
            })
            .collect()
    } else {
        classes.iter().map(|(p, c)| row(p, *c)).collect()
    }
}

pub fn circuits(input: &Path, with_families: bool, caps: &Caps, json: bool) -> CmdResult {
    let g = load(input)?;
    let circuits = enumerate_circuits(&g, caps.circuits).map_err(|e| Outcome::from_error(&e))?;

    let families = if with_families {
        let all = vertex_disjoint_families(&g, &circuits, caps.nodes)
            .map_err(|e| Outcome::from_error(&e))?;
        let mut classes: Vec<FamilyClass> = Vec::new();
        let mut grouped: std::collections::BTreeMap<Permutation, Vec<FamilyEntry>> =
            std::collections::BTreeMap::new();
        let (mut even, mut odd) = (0, 0);
        for family in &all {
            if family.is_even() {
                even += 1;
            } else {
                odd += 1;
            }
            grouped
                .entry(family.induced().clone())
                .or_default()
                .push(FamilyEntry {
                    parity: if family.is_even() { "even" } else { "odd" },
                    circuits: family.display(),
                });
        }
        for (p, entries) in grouped {
            let e = entries.iter().filter(|f| f.parity == "even").count() as u64;
            let o = entries.len() as u64 - e;
            classes.push(FamilyClass {
                permutation: p.images().to_vec(),
                even: e,
                odd: o,
                value: Int(BigInt::from(e) - BigInt::from(o)),
                families: entries,
            });
        }
        Some(FamilyListing {
            total: all.len(),
            even,
            odd,
            classes,
        })
    } else {
        None
    };

    let report = CircuitsReport {
        graph: summary(&g),
        circuits: circuits.iter().map(|c| c.display()).collect(),
        families,
    };
    emit(&report, json, CircuitsReport::render_text);
    Ok(Outcome::ok())
}

pub fn fuzz(
    max_vertices: usize,
    max_edges: usize,
    cases: u64,
    seed: u64,
    caps: &Caps,
    json: bool,
) -> CmdResult {
    let config = FuzzConfig {
        max_vertices,
        max_edges,
        cases,
        seed,
    };
    let summary = run_fuzz(&config, caps, &Methods::default());
    let failures: Vec<FuzzCaseFailure> = summary
        .failed()
        .map(|c| FuzzCaseFailure {
            index: c.index,
            seed: c.seed,
            vertices: c.vertices,
            edges: c.edges,
            failures: c.failures.iter().map(ToString::to_string).collect(),
        })
        .collect();
    let report = FuzzReport {
        max_vertices,
        max_edges,
        cases,
        seed,
        passed: summary.passed(),
        failed: failures.len(),
        failures,
    };
    emit(&report, json, FuzzReport::render_text);
    if report.failed == 0 {
        Ok(Outcome::ok())
    } else {
        Err(Outcome {
            code: EXIT_DISAGREE,
            message: Some(format!("{} of {} cases failed", report.failed, cases)),
        })
    }
}

pub fn reduce(input: &Path, json: bool) -> CmdResult {
    let g = load(input)?;
    let trace = reduce_to_closure(&g);
    let before = ps_via_determinant(&g);
    let after = ps_via_determinant(&trace.reduced);
    let report = ReduceReport {
        graph: summary(&g),
        steps: trace_steps(&trace),
        reduced: summary(&trace.reduced),
        reduced_graph: trace.reduced.to_text(),
        preserved: before == after,
        ps_before: Int(before),
        ps_after: Int(after),
    };
    emit(&report, json, ReduceReport::render_text);
    if report.preserved {
        Ok(Outcome::ok())
    } else {
        Err(Outcome {
            code: EXIT_DISAGREE,
            message: Some("elimination changed the value".into()),
        })
    }
}

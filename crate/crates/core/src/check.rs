//! Randomized cross-checking of every route to the Parry-Sullivan number.
//!
//! Each case draws a seeded random multigraph and checks that
//!
//! * the Bareiss determinant, the signed circuit-family count and (for small
//!   graphs) the Leibniz expansion agree,
//! * each permutation's elementary product equals its family-class count,
//! * source/sink elimination keeps the number and the circuit list,
//! * `det(I - A) = det(I - A^T)`.

use std::fmt;

use num_bigint::BigInt;

use crate::circuits::{ps_via_circuits, verify_class_products};
use crate::error::Error;
use crate::flow::reduce_to_closure;
use crate::linear::ps_via_determinant;
use crate::multigraph::Multigraph;
use crate::par::*;
use crate::Caps;

/// Graphs above this many vertices skip the per-permutation class check.
pub const CLASS_CHECK_MAX_VERTICES: usize = 5;

/// The two primary computations, swappable so the harness can be tested
/// against a deliberately broken implementation.
#[derive(Clone, Copy)]
pub struct Methods {
    pub determinant: fn(&Multigraph) -> BigInt,
    pub circuits: fn(&Multigraph, &Caps) -> crate::Result<BigInt>,
}

impl Default for Methods {
    fn default() -> Self {
        Methods {
            determinant: ps_via_determinant,
            circuits: ps_via_circuits,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckFailure {
    MethodsDisagree {
        determinant: BigInt,
        circuits: BigInt,
        leibniz: Option<BigInt>,
    },
    ClassMismatch {
        permutation: String,
        class_value: BigInt,
        elementary_product: BigInt,
    },
    ReductionChangedValue {
        before: BigInt,
        after: BigInt,
    },
    ReductionChangedCircuits,
    TransposeMismatch {
        direct: BigInt,
        transposed: BigInt,
    },
    Limit(Error),
}

impl fmt::Display for CheckFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckFailure::MethodsDisagree {
                determinant,
                circuits,
                leibniz,
            } => {
                write!(f, "methods disagree: determinant {determinant}, circuits {circuits}")?;
                if let Some(l) = leibniz {
                    write!(f, ", leibniz {l}")?;
                }
                Ok(())
            }
            CheckFailure::ClassMismatch {
                permutation,
                class_value,
                elementary_product,
            } => write!(
                f,
                "permutation {permutation}: class count {class_value} != elementary product {elementary_product}"
            ),
            CheckFailure::ReductionChangedValue { before, after } => {
                write!(f, "reduction changed the value from {before} to {after}")
            }
            CheckFailure::ReductionChangedCircuits => {
                write!(f, "reduction changed the circuit list")
            }
            CheckFailure::TransposeMismatch { direct, transposed } => {
                write!(f, "det(I - A) = {direct} but det(I - A^T) = {transposed}")
            }
            CheckFailure::Limit(e) => write!(f, "{e}"),
        }
    }
}

/// Runs every check on one graph; an empty result means all passed.
pub fn check_graph(g: &Multigraph, caps: &Caps, methods: &Methods) -> Vec<CheckFailure> {
    let mut failures = Vec::new();
    let det = (methods.determinant)(g);

    let circuits = match (methods.circuits)(g, caps) {
        Ok(v) => v,
        Err(e) => return vec![CheckFailure::Limit(e)],
    };
    let i_minus_a = g.adjacency_matrix().identity_minus();
    let leibniz = (g.vertex_count() <= caps.factorial_limit)
        .then(|| i_minus_a.leibniz_determinant(caps.factorial_limit).ok())
        .flatten();
    if det != circuits || leibniz.as_ref().is_some_and(|l| *l != det) {
        failures.push(CheckFailure::MethodsDisagree {
            determinant: det.clone(),
            circuits,
            leibniz,
        });
    }

    if g.vertex_count() <= CLASS_CHECK_MAX_VERTICES.min(caps.factorial_limit) {
        match verify_class_products(g, caps) {
            Ok(rows) => failures.extend(rows.into_iter().filter(|r| !r.agrees()).map(|r| {
                CheckFailure::ClassMismatch {
                    permutation: r.permutation.to_string(),
                    class_value: r.class_count.value(),
                    elementary_product: r.elementary_product,
                }
            })),
            Err(e) => failures.push(CheckFailure::Limit(e)),
        }
    }

    let trace = reduce_to_closure(g);
    for after in [
        (methods.determinant)(&trace.reduced),
        match (methods.circuits)(&trace.reduced, caps) {
            Ok(v) => v,
            Err(e) => return vec![CheckFailure::Limit(e)],
        },
    ] {
        if after != det {
            failures.push(CheckFailure::ReductionChangedValue {
                before: det.clone(),
                after,
            });
        }
    }
    match trace.preserves_circuits(g, caps.circuits) {
        Ok(true) => {}
        Ok(false) => failures.push(CheckFailure::ReductionChangedCircuits),
        Err(e) => failures.push(CheckFailure::Limit(e)),
    }

    let transposed = i_minus_a.transpose().determinant();
    if transposed != det {
        failures.push(CheckFailure::TransposeMismatch {
            direct: det,
            transposed,
        });
    }
    failures
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FuzzConfig {
    pub max_vertices: usize,
    pub max_edges: usize,
    pub cases: u64,
    pub seed: u64,
}

impl FuzzConfig {
    /// Seed of case `index`; `Multigraph::random(max_vertices, max_edges,
    /// case_seed(index))` reproduces the case's graph.
    pub fn case_seed(&self, index: u64) -> u64 {
        self.seed.wrapping_add(index)
    }

    pub fn graph(&self, index: u64) -> Multigraph {
        Multigraph::random(self.max_vertices, self.max_edges, self.case_seed(index))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseOutcome {
    pub index: u64,
    pub seed: u64,
    pub vertices: usize,
    pub edges: usize,
    pub value: BigInt,
    pub failures: Vec<CheckFailure>,
}

impl CaseOutcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FuzzSummary {
    pub config: FuzzConfig,
    /// Sorted by case index.
    pub cases: Vec<CaseOutcome>,
}

impl FuzzSummary {
    pub fn passed(&self) -> usize {
        self.cases.iter().filter(|c| c.passed()).count()
    }

    pub fn failed(&self) -> impl Iterator<Item = &CaseOutcome> {
        self.cases.iter().filter(|c| !c.passed())
    }

    pub fn all_passed(&self) -> bool {
        self.cases.iter().all(CaseOutcome::passed)
    }
}

/// Runs `config.cases` independent cases, possibly in parallel.
pub fn run_fuzz(config: &FuzzConfig, caps: &Caps, methods: &Methods) -> FuzzSummary {
    let cases: Vec<CaseOutcome> = (0..config.cases)
        .into_par_iter()
        .map(|index| {
            let g = config.graph(index);
            CaseOutcome {
                index,
                seed: config.case_seed(index),
                vertices: g.vertex_count(),
                edges: g.edge_count(),
                value: (methods.determinant)(&g),
                failures: check_graph(&g, caps, methods),
            }
        })
        .collect();
    FuzzSummary {
        config: *config,
        cases,
    }
}

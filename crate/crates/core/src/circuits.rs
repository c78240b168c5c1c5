//! Directed circuits, vertex-disjoint circuit families and their signed count.
//!
//! A circuit is a set of edges that can be laid out as a directed cycle whose
//! edges have pairwise distinct sources. Parallel edges give distinct
//! circuits and a loop is a circuit of size one.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign};
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::linear::Permutation;
use crate::multigraph::{EdgeId, Multigraph, VertexId};
use crate::par::*;
use crate::vertex_set::VertexSet;
use crate::Caps;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Circuit {
    /// Edges in cycle order, starting with the edge leaving the smallest vertex.
    cycle: Vec<EdgeId>,
    /// `vertices[i]` is the source of `cycle[i]`.
    vertices: Vec<VertexId>,
    edge_ids: Vec<EdgeId>,
}

impl Circuit {
    /// Arranges an edge set into its cycle, or explains why it is not a circuit.
    pub fn from_edge_set(g: &Multigraph, ids: &[EdgeId]) -> Result<Circuit> {
        if ids.is_empty() {
            return Err(Error::domain("a circuit needs at least one edge"));
        }
        let mut by_source: BTreeMap<VertexId, EdgeId> = BTreeMap::new();
        for &id in ids {
            if id >= g.edge_count() {
                return Err(Error::domain(format!("edge {id} does not exist")));
            }
            if by_source.insert(g.edge(id).source, id).is_some() {
                return Err(Error::domain(format!(
                    "two edges leave vertex {}",
                    g.edge(id).source
                )));
            }
        }
        let (&start, &first) = by_source.iter().next().unwrap();
        let mut cycle = vec![first];
        let mut at = g.edge(first).target;
        while at != start {
            let Some(&next) = by_source.get(&at) else {
                return Err(Error::domain(format!("no edge continues from vertex {at}")));
            };
            if cycle.len() == ids.len() {
                return Err(Error::domain("edges do not close into a single cycle"));
            }
            cycle.push(next);
            at = g.edge(next).target;
        }
        if cycle.len() != ids.len() {
            return Err(Error::domain("edges do not close into a single cycle"));
        }
        Ok(Circuit::from_cycle(g, cycle))
    }

    /// `cycle` must already start at its smallest source vertex.
    fn from_cycle(g: &Multigraph, cycle: Vec<EdgeId>) -> Circuit {
        let vertices: Vec<VertexId> = cycle.iter().map(|&e| g.edge(e).source).collect();
        debug_assert_eq!(vertices.iter().min(), vertices.first());
        let mut edge_ids = cycle.clone();
        edge_ids.sort_unstable();
        Circuit {
            cycle,
            vertices,
            edge_ids,
        }
    }

    pub fn len(&self) -> usize {
        self.cycle.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycle.is_empty()
    }

    pub fn cycle_order(&self) -> &[EdgeId] {
        &self.cycle
    }

    /// Sorted edge ids; this is the circuit's identity.
    pub fn edge_ids(&self) -> &[EdgeId] {
        &self.edge_ids
    }

    /// Source vertices in cycle order.
    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn min_vertex(&self) -> VertexId {
        self.vertices[0]
    }

    pub fn vertex_set(&self, vertex_count: usize) -> VertexSet {
        VertexSet::from_iter_with_capacity(vertex_count, self.vertices.iter().copied())
    }

    /// `(v0 -e0-> v1 -e1-> ... -> v0)`
    pub fn display(&self) -> String {
        let mut out = String::from("(");
        for (v, e) in self.vertices.iter().zip(&self.cycle) {
            out.push_str(&format!("{v} -e{e}-> "));
        }
        out.push_str(&format!("{})", self.vertices[0]));
        out
    }

    fn sort_key(&self) -> (VertexId, usize, &[EdgeId]) {
        (self.min_vertex(), self.len(), &self.edge_ids)
    }
}

impl Ord for Circuit {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl PartialOrd for Circuit {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display())
    }
}

/// Every circuit of `g`, each exactly once, sorted by
/// `(min vertex, length, edge ids)`.
///
/// This is Johnson's elementary-cycle search run over edges instead of
/// neighbour vertices. Within each strongly connected component it repeatedly
/// takes the subgraph on the vertices `>= s`, picks the least vertex lying on
/// a cycle there, and emits every circuit through it, blocking vertices that
/// cannot currently reach it. Every round emits at least one circuit.
pub fn enumerate_circuits(g: &Multigraph, cap: usize) -> Result<Vec<Circuit>> {
    let mut search = JohnsonSearch::new(g, cap);
    let all: Vec<VertexId> = (0..g.vertex_count()).collect();
    for component in search.components(&all) {
        let mut rest = component;
        while let Some(piece) = search
            .components(&rest)
            .into_iter()
            .filter(|c| search.is_cyclic(c))
            .min_by_key(|c| c[0])
        {
            let start = piece[0];
            search.search_from(start, &piece)?;
            rest.retain(|&v| v > start);
        }
    }
    let mut found = search.found;
    found.sort();
    Ok(found)
}

struct JohnsonSearch<'g> {
    g: &'g Multigraph,
    out: Vec<Vec<EdgeId>>,
    cap: usize,
    /// `mark[v] == generation` iff `v` is in the vertex set currently in use.
    mark: Vec<u64>,
    generation: u64,
    blocked: Vec<bool>,
    blocked_by: Vec<Vec<VertexId>>,
    path: Vec<EdgeId>,
    found: Vec<Circuit>,
    // Tarjan scratch
    index: Vec<usize>,
    lowlink: Vec<usize>,
    on_stack: Vec<bool>,
}

const UNVISITED: usize = usize::MAX;

impl<'g> JohnsonSearch<'g> {
    fn new(g: &'g Multigraph, cap: usize) -> Self {
        let n = g.vertex_count();
        JohnsonSearch {
            g,
            out: g.out_edges(),
            cap,
            mark: vec![0; n],
            generation: 0,
            blocked: vec![false; n],
            blocked_by: vec![Vec::new(); n],
            path: Vec::new(),
            found: Vec::new(),
            index: vec![UNVISITED; n],
            lowlink: vec![0; n],
            on_stack: vec![false; n],
        }
    }

    fn select(&mut self, vertices: &[VertexId]) {
        self.generation += 1;
        for &v in vertices {
            self.mark[v] = self.generation;
        }
    }

    fn selected(&self, v: VertexId) -> bool {
        self.mark[v] == self.generation
    }

    /// A component carries a circuit iff it has two vertices or a loop.
    fn is_cyclic(&self, component: &[VertexId]) -> bool {
        component.len() > 1
            || self.out[component[0]]
                .iter()
                .any(|&e| self.g.edge(e).target == component[0])
    }

    /// Strongly connected components of the subgraph induced by `vertices`,
    /// each sorted ascending. Iterative Tarjan.
    fn components(&mut self, vertices: &[VertexId]) -> Vec<Vec<VertexId>> {
        self.select(vertices);
        for &v in vertices {
            self.index[v] = UNVISITED;
            self.on_stack[v] = false;
        }
        let mut counter = 0;
        let mut stack = Vec::new();
        let mut result = Vec::new();
        // (vertex, next out-edge position)
        let mut calls: Vec<(VertexId, usize)> = Vec::new();

        for &root in vertices {
            if self.index[root] != UNVISITED {
                continue;
            }
            calls.push((root, 0));
            self.index[root] = counter;
            self.lowlink[root] = counter;
            counter += 1;
            stack.push(root);
            self.on_stack[root] = true;

            while let Some(&mut (v, ref mut pos)) = calls.last_mut() {
                if let Some(&e) = self.out[v].get(*pos) {
                    *pos += 1;
                    let w = self.g.edge(e).target;
                    if !self.selected(w) {
                        continue;
                    }
                    if self.index[w] == UNVISITED {
                        self.index[w] = counter;
                        self.lowlink[w] = counter;
                        counter += 1;
                        stack.push(w);
                        self.on_stack[w] = true;
                        calls.push((w, 0));
                    } else if self.on_stack[w] {
                        self.lowlink[v] = self.lowlink[v].min(self.index[w]);
                    }
                    continue;
                }
                calls.pop();
                if let Some(&(parent, _)) = calls.last() {
                    self.lowlink[parent] = self.lowlink[parent].min(self.lowlink[v]);
                }
                if self.lowlink[v] == self.index[v] {
                    let mut component = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack holds the root");
                        self.on_stack[w] = false;
                        component.push(w);
                        if w == v {
                            break;
                        }
                    }
                    component.sort_unstable();
                    result.push(component);
                }
            }
        }
        result
    }

    /// Emits every circuit through `start` inside `component`, whose least
    /// vertex is `start`.
    fn search_from(&mut self, start: VertexId, component: &[VertexId]) -> Result<()> {
        self.select(component);
        for &v in component {
            self.blocked[v] = false;
            self.blocked_by[v].clear();
        }
        self.visit(start)
    }

    /// Johnson's CIRCUIT procedure with an explicit stack, so path length is
    /// not bounded by the thread's stack size.
    fn visit(&mut self, s: VertexId) -> Result<()> {
        struct Frame {
            vertex: VertexId,
            next: usize,
            closed: bool,
        }
        let mut frames = vec![Frame {
            vertex: s,
            next: 0,
            closed: false,
        }];
        self.blocked[s] = true;

        while let Some(top) = frames.last_mut() {
            let v = top.vertex;
            if let Some(&e) = self.out[v].get(top.next) {
                top.next += 1;
                let w = self.g.edge(e).target;
                if !self.selected(w) {
                    continue;
                }
                if w == s {
                    self.path.push(e);
                    self.emit()?;
                    self.path.pop();
                    top.closed = true;
                } else if !self.blocked[w] {
                    self.path.push(e);
                    self.blocked[w] = true;
                    frames.push(Frame {
                        vertex: w,
                        next: 0,
                        closed: false,
                    });
                }
                continue;
            }

            let closed = top.closed;
            frames.pop();
            if closed {
                self.unblock(v);
            } else {
                for i in 0..self.out[v].len() {
                    let w = self.g.edge(self.out[v][i]).target;
                    if self.selected(w) && !self.blocked_by[w].contains(&v) {
                        self.blocked_by[w].push(v);
                    }
                }
            }
            if let Some(parent) = frames.last_mut() {
                self.path.pop();
                parent.closed |= closed;
            }
        }
        Ok(())
    }

    fn unblock(&mut self, v: VertexId) {
        let mut pending = vec![v];
        while let Some(u) = pending.pop() {
            self.blocked[u] = false;
            while let Some(w) = self.blocked_by[u].pop() {
                if self.blocked[w] {
                    pending.push(w);
                }
            }
        }
    }

    fn emit(&mut self) -> Result<()> {
        if self.found.len() == self.cap {
            return Err(Error::ResourceLimit {
                what: "circuit enumeration",
                cap: self.cap as u64,
            });
        }
        self.found
            .push(Circuit::from_cycle(self.g, self.path.clone()));
        Ok(())
    }
}

/// Circuits as nodes, joined when they share a vertex. Its independent sets
/// are exactly the vertex-disjoint circuit families.
#[derive(Debug, Clone)]
pub struct ConflictGraph {
    vertex_count: usize,
    masks: Vec<VertexSet>,
    min_vertex: Vec<VertexId>,
}

impl ConflictGraph {
    pub fn new(g: &Multigraph, circuits: &[Circuit]) -> Self {
        let n = g.vertex_count();
        ConflictGraph {
            vertex_count: n,
            masks: circuits.iter().map(|c| c.vertex_set(n)).collect(),
            min_vertex: circuits.iter().map(Circuit::min_vertex).collect(),
        }
    }

    pub fn node_count(&self) -> usize {
        self.masks.len()
    }

    pub fn conflicts(&self, a: usize, b: usize) -> bool {
        a != b && !self.masks[a].is_disjoint(&self.masks[b])
    }

    pub fn neighbors(&self, a: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.node_count()).filter(move |&b| self.conflicts(a, b))
    }

    /// True when some vertex lies on two or more circuits.
    pub fn has_conflicts(&self) -> bool {
        let mut seen = VertexSet::with_capacity(self.vertex_count);
        for mask in &self.masks {
            if !seen.is_disjoint(mask) {
                return true;
            }
            seen.union_with(mask);
        }
        false
    }

    /// Independent sets as ascending index lists, visited once each.
    ///
    /// The walk is split into one task per circuit: the empty family, then for
    /// each circuit `c` every family whose smallest-vertex member is `c`.
    /// Tasks may run in parallel; results come back in task order. `tick` is
    /// consulted once per family.
    fn fold_families<T, I, V>(&self, budget: &NodeBudget, init: I, visit: V) -> Result<Vec<T>>
    where
        T: Send,
        I: Fn() -> T + Sync,
        V: Fn(&mut T, &[usize]) + Sync,
    {
        let n = self.vertex_count;
        let mut by_min = vec![Vec::new(); n];
        for (i, &v) in self.min_vertex.iter().enumerate() {
            by_min[v].push(i);
        }

        let mut empty = init();
        budget.tick()?;
        visit(&mut empty, &[]);

        let rest: Vec<Result<T>> = (0..self.node_count())
            .into_par_iter()
            .map(|first| {
                let mut acc = init();
                let mut used = self.masks[first].clone();
                let mut chosen = vec![first];
                let walk = Walk {
                    graph: self,
                    by_min: &by_min,
                    budget,
                    visit: &visit,
                };
                walk.descend(self.min_vertex[first] + 1, &mut used, &mut chosen, &mut acc)?;
                Ok(acc)
            })
            .collect();

        let mut out = Vec::with_capacity(rest.len() + 1);
        out.push(empty);
        for r in rest {
            out.push(r?);
        }
        Ok(out)
    }
}

struct Walk<'a, V> {
    graph: &'a ConflictGraph,
    by_min: &'a [Vec<usize>],
    budget: &'a NodeBudget,
    visit: &'a V,
}

impl<V> Walk<'_, V> {
    /// Visits `chosen` and every extension of it by circuits whose smallest
    /// vertex is at least `from` and which avoid `used`.
    fn descend<T>(
        &self,
        from: VertexId,
        used: &mut VertexSet,
        chosen: &mut Vec<usize>,
        acc: &mut T,
    ) -> Result<()>
    where
        V: Fn(&mut T, &[usize]),
    {
        let n = self.graph.vertex_count;
        // (vertex, position in by_min[vertex]) per level
        let mut cursors = vec![(from, 0usize)];
        self.budget.tick()?;
        (self.visit)(acc, chosen);

        while let Some(cursor) = cursors.last_mut() {
            let mut next = None;
            while cursor.0 < n {
                let (v, k) = *cursor;
                if used.contains(v) || k >= self.by_min[v].len() {
                    *cursor = (v + 1, 0);
                    continue;
                }
                cursor.1 += 1;
                let c = self.by_min[v][k];
                if self.graph.masks[c].is_disjoint(used) {
                    next = Some((v, c));
                    break;
                }
            }

            match next {
                Some((v, c)) => {
                    used.union_with(&self.graph.masks[c]);
                    chosen.push(c);
                    self.budget.tick()?;
                    (self.visit)(acc, chosen);
                    cursors.push((v + 1, 0));
                }
                None => {
                    cursors.pop();
                    if !cursors.is_empty() {
                        let c = chosen.pop().expect("one chosen circuit per level");
                        used.remove_all(&self.graph.masks[c]);
                    }
                }
            }
        }
        Ok(())
    }
}

/// Shared visit counter for a (possibly parallel) backtracking walk.
struct NodeBudget {
    cap: u64,
    what: &'static str,
    spent: AtomicU64,
}

impl NodeBudget {
    fn new(cap: u64, what: &'static str) -> Self {
        NodeBudget {
            cap,
            what,
            spent: AtomicU64::new(0),
        }
    }

    fn tick(&self) -> Result<()> {
        if self.spent.fetch_add(1, AtomicOrdering::Relaxed) >= self.cap {
            return Err(Error::ResourceLimit {
                what: self.what,
                cap: self.cap,
            });
        }
        Ok(())
    }
}

/// Number of even-sized and odd-sized families; `value = even - odd`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct SignedCount {
    pub even: u64,
    pub odd: u64,
}

impl SignedCount {
    pub fn value(&self) -> BigInt {
        BigInt::from(self.even) - BigInt::from(self.odd)
    }

    pub fn total(&self) -> u64 {
        self.even + self.odd
    }

    pub fn record(&mut self, family_size: usize) {
        if family_size.is_multiple_of(2) {
            self.even += 1;
        } else {
            self.odd += 1;
        }
    }
}

impl Add for SignedCount {
    type Output = SignedCount;
    fn add(self, rhs: SignedCount) -> SignedCount {
        SignedCount {
            even: self.even + rhs.even,
            odd: self.odd + rhs.odd,
        }
    }
}

impl AddAssign for SignedCount {
    fn add_assign(&mut self, rhs: SignedCount) {
        *self = *self + rhs;
    }
}

impl std::iter::Sum for SignedCount {
    fn sum<I: Iterator<Item = SignedCount>>(iter: I) -> Self {
        iter.fold(SignedCount::default(), Add::add)
    }
}

/// Counts every vertex-disjoint family of `circuits` (the empty family
/// included, as even) without materializing them.
///
/// `circuits` should be the full output of [`enumerate_circuits`] for `g`.
/// Fails once more than `node_cap` families have been visited.
pub fn signed_family_count(
    g: &Multigraph,
    circuits: &[Circuit],
    node_cap: u64,
) -> Result<SignedCount> {
    let conflicts = ConflictGraph::new(g, circuits);
    let budget = NodeBudget::new(node_cap, "backtracking nodes");
    let parts = conflicts.fold_families(&budget, SignedCount::default, |acc, family| {
        acc.record(family.len())
    })?;
    Ok(parts.into_iter().sum())
}

/// Number of even-sized minus odd-sized vertex-disjoint circuit families.
pub fn ps_via_circuits(g: &Multigraph, caps: &Caps) -> Result<BigInt> {
    let circuits = enumerate_circuits(g, caps.circuits)?;
    Ok(signed_family_count(g, &circuits, caps.nodes)?.value())
}

/// `p(v) = r(e)` when some family edge `e` leaves `v`, otherwise `p(v) = v`.
pub fn induced_permutation(g: &Multigraph, family: &[Circuit]) -> Result<Permutation> {
    let n = g.vertex_count();
    let mut images: Vec<usize> = (0..n).collect();
    let mut covered = vec![false; n];
    for circuit in family {
        for &e in circuit.cycle_order() {
            if e >= g.edge_count() {
                return Err(Error::domain(format!("edge {e} does not exist")));
            }
            let edge = g.edge(e);
            if std::mem::replace(&mut covered[edge.source], true) {
                return Err(Error::domain(format!(
                    "circuits in the family share vertex {}",
                    edge.source
                )));
            }
            images[edge.source] = edge.target;
        }
    }
    Permutation::new(images)
}

/// A set of pairwise vertex-disjoint circuits with its induced permutation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexDisjointFamily {
    circuits: Vec<Circuit>,
    induced: Permutation,
}

impl VertexDisjointFamily {
    pub fn new(g: &Multigraph, mut circuits: Vec<Circuit>) -> Result<Self> {
        circuits.sort();
        if circuits.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::domain("a circuit appears twice in the family"));
        }
        let induced = induced_permutation(g, &circuits)?;
        Ok(VertexDisjointFamily { circuits, induced })
    }

    pub fn circuits(&self) -> &[Circuit] {
        &self.circuits
    }

    pub fn induced(&self) -> &Permutation {
        &self.induced
    }

    pub fn len(&self) -> usize {
        self.circuits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.circuits.is_empty()
    }

    pub fn is_even(&self) -> bool {
        self.len().is_multiple_of(2)
    }

    /// Sorted circuit renderings.
    pub fn display(&self) -> Vec<String> {
        self.circuits.iter().map(Circuit::display).collect()
    }
}

/// Every vertex-disjoint family, ordered by size and then by the positions of
/// its members in `circuits`. Fails past `family_cap` families.
pub fn vertex_disjoint_families(
    g: &Multigraph,
    circuits: &[Circuit],
    family_cap: u64,
) -> Result<Vec<VertexDisjointFamily>> {
    let conflicts = ConflictGraph::new(g, circuits);
    let budget = NodeBudget::new(family_cap, "vertex-disjoint families");
    let parts = conflicts.fold_families(&budget, Vec::new, |acc: &mut Vec<Vec<usize>>, f| {
        acc.push(f.to_vec())
    })?;
    let mut index_lists: Vec<Vec<usize>> = parts.into_iter().flatten().collect();
    index_lists.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    index_lists
        .into_iter()
        .map(|ix| {
            VertexDisjointFamily::new(g, ix.into_iter().map(|i| circuits[i].clone()).collect())
        })
        .collect()
}

/// Splits all vertex-disjoint families by induced permutation and counts each
/// class. Permutations no family induces are absent.
pub fn group_by_induced_permutation(
    g: &Multigraph,
    circuits: &[Circuit],
    node_cap: u64,
) -> Result<BTreeMap<Permutation, SignedCount>> {
    let n = g.vertex_count();
    let moves: Vec<Vec<(VertexId, VertexId)>> = circuits
        .iter()
        .map(|c| {
            c.cycle_order()
                .iter()
                .map(|&e| (g.edge(e).source, g.edge(e).target))
                .collect()
        })
        .collect();
    let conflicts = ConflictGraph::new(g, circuits);
    let budget = NodeBudget::new(node_cap, "backtracking nodes");
    let parts = conflicts.fold_families(
        &budget,
        BTreeMap::new,
        |acc: &mut BTreeMap<Permutation, SignedCount>, family| {
            let mut images: Vec<usize> = (0..n).collect();
            for &c in family {
                for &(s, t) in &moves[c] {
                    images[s] = t;
                }
            }
            acc.entry(Permutation::from_images_unchecked(images))
                .or_default()
                .record(family.len());
        },
    )?;
    let mut merged = BTreeMap::new();
    for part in parts {
        for (p, count) in part {
            *merged.entry(p).or_insert_with(SignedCount::default) += count;
        }
    }
    Ok(merged)
}

/// One permutation's comparison between the determinant term and the
/// circuit-family count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassCheck {
    pub permutation: Permutation,
    pub class_count: SignedCount,
    pub elementary_product: BigInt,
}

impl ClassCheck {
    pub fn agrees(&self) -> bool {
        self.class_count.value() == self.elementary_product
    }
}

/// For every `p` in `S_n`, pairs the signed elementary product of `I - A`
/// at `p` with the signed count of families inducing `p`.
pub fn verify_class_products(g: &Multigraph, caps: &Caps) -> Result<Vec<ClassCheck>> {
    let n = g.vertex_count();
    if n > caps.factorial_limit {
        return Err(Error::ResourceLimit {
            what: "permutation-table vertex count",
            cap: caps.factorial_limit as u64,
        });
    }
    let circuits = enumerate_circuits(g, caps.circuits)?;
    let mut classes = group_by_induced_permutation(g, &circuits, caps.nodes)?;
    let m = g.adjacency_matrix().identity_minus();
    Permutation::all(n)
        .map(|p| {
            let elementary_product = m.signed_elementary_product(&p)?;
            let class_count = classes.remove(&p).unwrap_or_default();
            Ok(ClassCheck {
                permutation: p,
                class_count,
                elementary_product,
            })
        })
        .collect()
}

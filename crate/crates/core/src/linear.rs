//! Exact integer matrices and permutations.
//!
//! Everything here works over arbitrary-precision integers; nothing rounds.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::multigraph::Multigraph;
use crate::par::*;

/// Largest order the Leibniz expansion accepts unless told otherwise.
pub const DEFAULT_FACTORIAL_LIMIT: usize = 8;

/// Square matrix of big integers, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    order: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(order: usize) -> Self {
        IntMatrix {
            order,
            entries: vec![BigInt::zero(); order * order],
        }
    }

    pub fn identity(order: usize) -> Self {
        Self::from_fn(order, |i, j| {
            if i == j {
                BigInt::one()
            } else {
                BigInt::zero()
            }
        })
    }

    pub fn from_fn(order: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut entries = Vec::with_capacity(order * order);
        for i in 0..order {
            for j in 0..order {
                entries.push(f(i, j));
            }
        }
        IntMatrix { order, entries }
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let order = rows.len();
        if let Some(bad) = rows.iter().position(|r| r.len() != order) {
            return Err(Error::domain(format!(
                "row {bad} has {} entries, expected {order}",
                rows[bad].len()
            )));
        }
        Ok(IntMatrix {
            order,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, row: usize, col: usize) -> &BigInt {
        &self.entries[row * self.order + col]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[BigInt]> {
        // chunks() panics on a zero chunk size
        self.entries.chunks(self.order.max(1))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.order, |i, j| self.get(j, i).clone())
    }

    /// `I - self`.
    pub fn identity_minus(&self) -> Self {
        Self::from_fn(self.order, |i, j| {
            let delta = if i == j {
                BigInt::one()
            } else {
                BigInt::zero()
            };
            delta - self.get(i, j)
        })
    }

    /// Deletes row `v` and column `v`.
    pub fn without(&self, v: usize) -> Self {
        let keep: Vec<usize> = (0..self.order).filter(|&i| i != v).collect();
        Self::from_fn(keep.len(), |i, j| self.get(keep[i], keep[j]).clone())
    }

    /// Simultaneous row and column permutation: entry `(i, j)` of the result
    /// is entry `(p(i), p(j))` of `self`.
    pub fn permuted(&self, p: &Permutation) -> Result<Self> {
        check_degree(self, p)?;
        Ok(Self::from_fn(self.order, |i, j| {
            self.get(p.apply(i), p.apply(j)).clone()
        }))
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    ///
    /// Every division performed is exact, so intermediate values stay
    /// integral. The empty matrix has determinant 1.
    pub fn determinant(&self) -> BigInt {
        let n = self.order;
        if n == 0 {
            return BigInt::one();
        }
        let mut m: Vec<Vec<BigInt>> = self.rows().map(|r| r.to_vec()).collect();
        let mut negate = false;
        let mut prev_pivot = BigInt::one();

        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                    Some(i) => {
                        m.swap(k, i);
                        negate = !negate;
                    }
                    None => return BigInt::zero(),
                }
            }
            let (top, bottom) = m.split_at_mut(k + 1);
            let pivot_row = &top[k];
            let pivot = &pivot_row[k];
            for row in bottom.iter_mut() {
                let factor = row[k].clone();
                for j in k + 1..n {
                    let updated = &row[j] * pivot - &factor * &pivot_row[j];
                    row[j] = updated / &prev_pivot;
                }
                row[k] = BigInt::zero();
            }
            prev_pivot = pivot.clone();
        }

        let det = m[n - 1][n - 1].clone();
        if negate {
            -det
        } else {
            det
        }
    }

    /// `sgn(p) * prod_i M[i][p(i)]`: one term of the Leibniz expansion.
    pub fn signed_elementary_product(&self, p: &Permutation) -> Result<BigInt> {
        check_degree(self, p)?;
        let mut product = BigInt::one();
        for (i, &j) in p.images().iter().enumerate() {
            let entry = self.get(i, j);
            if entry.is_zero() {
                return Ok(BigInt::zero());
            }
            product *= entry;
        }
        Ok(match p.sign() {
            Sign::Positive => product,
            Sign::Negative => -product,
        })
    }

    /// Determinant as the sum of all signed elementary products. Used as an
    /// independent check on [`IntMatrix::determinant`]; refuses orders above
    /// `limit` since the work grows as `n!`.
    pub fn leibniz_determinant(&self, limit: usize) -> Result<BigInt> {
        let n = self.order;
        if n > limit {
            return Err(Error::ResourceLimit {
                what: "Leibniz expansion order",
                cap: limit as u64,
            });
        }
        if n == 0 {
            return Ok(BigInt::one());
        }
        // one task per value of p(0)
        let partials: Vec<BigInt> = (0..n)
            .into_par_iter()
            .map(|first| {
                let mut sum = BigInt::zero();
                for p in Permutation::all(n).starting_with(first) {
                    sum += self
                        .signed_elementary_product(&p)
                        .expect("degree matches by construction");
                }
                sum
            })
            .collect();
        Ok(partials.into_iter().sum())
    }
}

impl fmt::Display for IntMatrix {
    /// One row per line, entries separated by single spaces.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.order == 0 {
            return Ok(());
        }
        for row in self.rows() {
            let line: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

fn check_degree(m: &IntMatrix, p: &Permutation) -> Result<()> {
    if m.order() != p.degree() {
        return Err(Error::domain(format!(
            "permutation of degree {} applied to a matrix of order {}",
            p.degree(),
            m.order()
        )));
    }
    Ok(())
}

/// `det(I - A)` for the adjacency matrix `A` of `g`.
pub fn ps_via_determinant(g: &Multigraph) -> BigInt {
    g.adjacency_matrix().identity_minus().determinant()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn from_parity(odd: bool) -> Self {
        if odd {
            Sign::Negative
        } else {
            Sign::Positive
        }
    }

    pub fn to_i32(self) -> i32 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }
}

/// A bijection on `0..n`, stored as its image list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &x in &images {
            if x >= images.len() || std::mem::replace(&mut seen[x], true) {
                return Err(Error::domain(format!("{images:?} is not a permutation")));
            }
        }
        Ok(Permutation { images })
    }

    pub(crate) fn from_images_unchecked(images: Vec<usize>) -> Self {
        debug_assert!(Permutation::new(images.clone()).is_ok());
        Permutation { images }
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// Disjoint cycles of length at least two, plus the fixed points.
    ///
    /// Each cycle starts at its smallest element and cycles are sorted by
    /// that element.
    pub fn cycle_decomposition(&self) -> CycleDecomposition {
        let n = self.degree();
        let mut visited = vec![false; n];
        let mut cycles = Vec::new();
        let mut fixed_points = Vec::new();
        for start in 0..n {
            if visited[start] {
                continue;
            }
            if self.images[start] == start {
                visited[start] = true;
                fixed_points.push(start);
                continue;
            }
            // scanning in increasing order, so `start` is the cycle minimum
            let mut cycle = Vec::new();
            let mut x = start;
            while !visited[x] {
                visited[x] = true;
                cycle.push(x);
                x = self.images[x];
            }
            cycles.push(cycle);
        }
        CycleDecomposition {
            degree: n,
            cycles,
            fixed_points,
        }
    }

    /// Sign from the cycle structure: a permutation of `n` points with `m`
    /// nontrivial cycles and `k` fixed points is a product of `n - (m + k)`
    /// transpositions.
    pub fn sign(&self) -> Sign {
        Sign::from_parity(self.cycle_decomposition().transposition_count() % 2 == 1)
    }

    /// Sign from the parity of the number of inversions.
    pub fn inversion_sign(&self) -> Sign {
        let mut inversions = 0usize;
        for i in 0..self.images.len() {
            for j in i + 1..self.images.len() {
                if self.images[i] > self.images[j] {
                    inversions += 1;
                }
            }
        }
        Sign::from_parity(inversions % 2 == 1)
    }

    /// All of `S_n` in lexicographic order of image lists.
    pub fn all(n: usize) -> Permutations {
        Permutations {
            next: Some((0..n).collect()),
            first: None,
        }
    }
}

impl fmt::Display for Permutation {
    /// `[p(0), p(1), ...]`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, x) in self.images.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "]")
    }
}

/// Lexicographic walk over `S_n`.
#[derive(Debug, Clone)]
pub struct Permutations {
    next: Option<Vec<usize>>,
    first: Option<usize>,
}

impl Permutations {
    /// Restricts the walk to permutations with `p(0) == first`.
    pub fn starting_with(self, first: usize) -> Permutations {
        let next = self.next.and_then(|v| {
            let n = v.len();
            (first < n).then(|| {
                std::iter::once(first)
                    .chain((0..n).filter(|&x| x != first))
                    .collect()
            })
        });
        Permutations {
            next,
            first: Some(first),
        }
    }
}

impl Iterator for Permutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        if next_lexicographic(&mut succ) && self.first.is_none_or(|f| succ[0] == f) {
            self.next = Some(succ);
        }
        Some(Permutation { images: current })
    }
}

fn next_lexicographic(v: &mut [usize]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let Some(i) = (0..n - 1).rev().find(|&i| v[i] < v[i + 1]) else {
        return false;
    };
    let j = (i + 1..n).rev().find(|&j| v[j] > v[i]).unwrap();
    v.swap(i, j);
    v[i + 1..].reverse();
    true
}

/// Disjoint-cycle form of a permutation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleDecomposition {
    degree: usize,
    pub cycles: Vec<Vec<usize>>,
    pub fixed_points: Vec<usize>,
}

impl CycleDecomposition {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn cycle_count(&self) -> usize {
        self.cycles.len()
    }

    pub fn fixed_point_count(&self) -> usize {
        self.fixed_points.len()
    }

    /// `n - (m + k)`.
    pub fn transposition_count(&self) -> usize {
        self.degree - (self.cycle_count() + self.fixed_point_count())
    }
}

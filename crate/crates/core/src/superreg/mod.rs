//! Trivial minors, superregularity and the weight property.
//!
//! A term of a determinant is trivial when one of its factors is zero, and a
//! minor is trivial when all of its terms are. Whether a term is trivial only
//! depends on the zero pattern, so triviality of a minor is decided on a
//! [`SupportPattern`]: the minor is nontrivial exactly when the bipartite
//! graph of its nonzero cells has a perfect matching. A matrix is
//! superregular when every nontrivial minor is nonzero.

mod matching;

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use itertools::Itertools;
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactla::{weight, ExactMatrix, IndexSet, LinalgError};
use crate::gf::FieldElement;
use crate::rng::SplitMix64;

pub use matching::maximum_matching;

/// Default cap on determinant evaluations.
pub const DEFAULT_MINOR_BUDGET: u64 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SuperregError {
    #[error("budget of {0} evaluations exceeded")]
    BudgetExceeded(u64),
    #[error("index {index} out of bounds for dimension {bound}")]
    IndexOutOfBounds { index: usize, bound: usize },
    #[error("minor address needs equal, nonempty row and column sets")]
    BadAddress,
    #[error("pattern is {rows}x{cols}, expected a square pattern")]
    NonSquarePattern { rows: usize, cols: usize },
    #[error("the full minor is trivial")]
    TrivialFullMinor,
    #[error("no unused nonzero column left in row {row}")]
    OrderingStalled { row: usize },
    #[error("matrix has {rows} rows and {cols} columns; need rows >= cols")]
    BadShape { rows: usize, cols: usize },
    #[error("pattern grid has {found} cells, expected {expected}")]
    PatternSize { expected: usize, found: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Zero/nonzero grid of a matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SupportPattern {
    rows: usize,
    cols: usize,
    nonzero: Vec<bool>,
}

impl SupportPattern {
    pub fn new(rows: usize, cols: usize, nonzero: Vec<bool>) -> Result<Self, SuperregError> {
        if nonzero.len() != rows * cols {
            return Err(SuperregError::PatternSize {
                expected: rows * cols,
                found: nonzero.len(),
            });
        }
        Ok(SupportPattern {
            rows,
            cols,
            nonzero,
        })
    }

    pub fn from_rows(grid: &[Vec<bool>]) -> Result<Self, SuperregError> {
        let rows = grid.len();
        let cols = grid.first().map_or(0, Vec::len);
        if let Some(bad) = grid.iter().find(|r| r.len() != cols) {
            return Err(SuperregError::PatternSize {
                expected: cols,
                found: bad.len(),
            });
        }
        SupportPattern::new(rows, cols, grid.concat())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.nonzero[i * self.cols + j]
    }

    pub fn to_rows(&self) -> Vec<Vec<bool>> {
        self.nonzero
            .chunks(self.cols.max(1))
            .map(<[bool]>::to_vec)
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let mut nonzero = Vec::with_capacity(self.nonzero.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                nonzero.push(self.get(i, j));
            }
        }
        SupportPattern {
            rows: self.cols,
            cols: self.rows,
            nonzero,
        }
    }

    /// Pattern with columns taken in the given order.
    pub fn permute_columns(&self, order: &[usize]) -> Self {
        let mut nonzero = Vec::with_capacity(self.rows * order.len());
        for i in 0..self.rows {
            for &j in order {
                nonzero.push(self.get(i, j));
            }
        }
        SupportPattern {
            rows: self.rows,
            cols: order.len(),
            nonzero,
        }
    }

    /// Maximum number of nonzero cells with no two in a row or column.
    pub fn structural_rank(&self) -> usize {
        let rows: Vec<usize> = (0..self.rows).collect();
        let cols: Vec<usize> = (0..self.cols).collect();
        maximum_matching(&rows, &cols, |i, j| self.get(i, j))
    }

    fn restricted_has_perfect_matching(&self, rows: &[usize], cols: &[usize]) -> bool {
        if rows.len() <= 64 && cols.len() <= 64 {
            return perfect_matching_bits(self, rows, cols);
        }
        maximum_matching(rows, cols, |i, j| self.get(i, j)) == rows.len()
    }
}

fn perfect_matching_bits(p: &SupportPattern, rows: &[usize], cols: &[usize]) -> bool {
    // rows with their nonzero columns as bitmasks over positions in `cols`
    let mut adj = [0u64; 64];
    for (ri, &r) in rows.iter().enumerate() {
        let mut mask = 0u64;
        for (ci, &c) in cols.iter().enumerate() {
            if p.get(r, c) {
                mask |= 1 << ci;
            }
        }
        if mask == 0 {
            return false;
        }
        adj[ri] = mask;
    }
    let mut col_match = [u8::MAX; 64];
    for r in 0..rows.len() {
        let mut visited = 0u64;
        if !augment_bits(r, &adj, &mut col_match, &mut visited) {
            return false;
        }
    }
    true
}

fn augment_bits(r: usize, adj: &[u64; 64], col_match: &mut [u8; 64], visited: &mut u64) -> bool {
    let mut free = adj[r] & !*visited;
    while free != 0 {
        let c = free.trailing_zeros() as usize;
        free &= free - 1;
        *visited |= 1 << c;
        let m = col_match[c];
        if m == u8::MAX || augment_bits(m as usize, adj, col_match, visited) {
            col_match[c] = r as u8;
            return true;
        }
        free &= !*visited;
    }
    false
}

/// Row and column sets of a square submatrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MinorAddress {
    pub rows: IndexSet,
    pub cols: IndexSet,
}

impl MinorAddress {
    pub fn new(rows: IndexSet, cols: IndexSet) -> Result<Self, SuperregError> {
        if rows.len() != cols.len() || rows.is_empty() {
            return Err(SuperregError::BadAddress);
        }
        Ok(MinorAddress { rows, cols })
    }

    pub fn order(&self) -> usize {
        self.rows.len()
    }

    fn from_slices(rows: &[usize], cols: &[usize]) -> Self {
        MinorAddress {
            rows: IndexSet::new(rows.to_vec()).expect("combinations are increasing"),
            cols: IndexSet::new(cols.to_vec()).expect("combinations are increasing"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuperregReport {
    pub is_superregular: bool,
    /// A nontrivial minor with zero determinant, present iff the matrix is
    /// not superregular.
    pub witness: Option<MinorAddress>,
    /// Determinant evaluations performed.
    pub minors_checked: u64,
    /// Minors skipped because they are trivial.
    pub trivial_skipped: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CheckMode {
    /// Sequential; the witness is the first zero nontrivial minor by order,
    /// then row set, then column set (both lexicographic).
    #[default]
    Deterministic,
    /// Work split across the rayon pool. The verdict matches the
    /// deterministic mode; the witness and counters may differ.
    Parallel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuperregOptions {
    pub mode: CheckMode,
    pub budget: u64,
}

impl Default for SuperregOptions {
    fn default() -> Self {
        SuperregOptions {
            mode: CheckMode::Deterministic,
            budget: DEFAULT_MINOR_BUDGET,
        }
    }
}

pub fn pattern_of(m: &ExactMatrix) -> SupportPattern {
    SupportPattern {
        rows: m.rows(),
        cols: m.cols(),
        nonzero: m.entries().iter().map(|e| !e.is_zero()).collect(),
    }
}

/// True iff every Leibniz term of the addressed minor has a zero factor.
pub fn is_trivial_minor(p: &SupportPattern, m: &MinorAddress) -> Result<bool, SuperregError> {
    for (set, bound) in [(&m.rows, p.rows), (&m.cols, p.cols)] {
        if let Some(&index) = set.as_slice().last() {
            if index >= bound {
                return Err(SuperregError::IndexOutOfBounds { index, bound });
            }
        }
    }
    Ok(!p.restricted_has_perfect_matching(m.rows.as_slice(), m.cols.as_slice()))
}

/// Decides superregularity by checking every nontrivial minor.
pub fn is_superregular(
    m: &ExactMatrix,
    opts: &SuperregOptions,
) -> Result<SuperregReport, SuperregError> {
    let pattern = pattern_of(m);
    match opts.mode {
        CheckMode::Deterministic => superregular_sequential(m, &pattern, opts.budget),
        CheckMode::Parallel => superregular_parallel(m, &pattern, opts.budget),
    }
}

fn superregular_sequential(
    m: &ExactMatrix,
    pattern: &SupportPattern,
    budget: u64,
) -> Result<SuperregReport, SuperregError> {
    let mut checked = 0u64;
    let mut skipped = 0u64;
    for order in 1..=m.rows().min(m.cols()) {
        for rows in (0..m.rows()).combinations(order) {
            for cols in (0..m.cols()).combinations(order) {
                if !pattern.restricted_has_perfect_matching(&rows, &cols) {
                    skipped += 1;
                    continue;
                }
                if checked == budget {
                    return Err(SuperregError::BudgetExceeded(budget));
                }
                checked += 1;
                if m.minor_det(&rows, &cols).is_zero() {
                    return Ok(SuperregReport {
                        is_superregular: false,
                        witness: Some(MinorAddress::from_slices(&rows, &cols)),
                        minors_checked: checked,
                        trivial_skipped: skipped,
                    });
                }
            }
        }
    }
    Ok(SuperregReport {
        is_superregular: true,
        witness: None,
        minors_checked: checked,
        trivial_skipped: skipped,
    })
}

fn superregular_parallel(
    m: &ExactMatrix,
    pattern: &SupportPattern,
    budget: u64,
) -> Result<SuperregReport, SuperregError> {
    let checked = AtomicU64::new(0);
    let skipped = AtomicU64::new(0);
    let over_budget = AtomicBool::new(false);
    for order in 1..=m.rows().min(m.cols()) {
        let row_sets: Vec<Vec<usize>> = (0..m.rows()).combinations(order).collect();
        let witness = row_sets.par_iter().find_map_any(|rows| {
            for cols in (0..m.cols()).combinations(order) {
                if over_budget.load(Ordering::Relaxed) {
                    return None;
                }
                if !pattern.restricted_has_perfect_matching(rows, &cols) {
                    skipped.fetch_add(1, Ordering::Relaxed);
                    continue;
                }
                if checked.fetch_add(1, Ordering::Relaxed) >= budget {
                    over_budget.store(true, Ordering::Relaxed);
                    return None;
                }
                if m.minor_det(rows, &cols).is_zero() {
                    return Some(MinorAddress::from_slices(rows, &cols));
                }
            }
            None
        });
        if witness.is_none() && over_budget.load(Ordering::Relaxed) {
            return Err(SuperregError::BudgetExceeded(budget));
        }
        if let Some(w) = witness {
            return Ok(SuperregReport {
                is_superregular: false,
                witness: Some(w),
                minors_checked: checked.load(Ordering::Relaxed).min(budget),
                trivial_skipped: skipped.load(Ordering::Relaxed),
            });
        }
    }
    Ok(SuperregReport {
        is_superregular: true,
        witness: None,
        minors_checked: checked.load(Ordering::Relaxed),
        trivial_skipped: skipped.load(Ordering::Relaxed),
    })
}

/// Greedy column ordering that puts a nonzero on every antidiagonal cell.
///
/// Walking rows from the bottom up, row `m - j` (0-based) takes the smallest
/// column not used so far whose cell is nonzero. Returns 0-based column
/// indices `i_1, ..., i_m`; the reordered pattern has a nonzero at
/// `(m - j, j - 1)` for every `j`.
///
/// Nontriviality of the full minor is checked first. The greedy step can
/// still get stuck on patterns without the zero-propagation structure
/// (a zero whose column below or row to the left is not all zero); that is
/// reported as [`SuperregError::OrderingStalled`].
pub fn antidiagonal_ordering(p: &SupportPattern) -> Result<Vec<usize>, SuperregError> {
    if p.rows != p.cols {
        return Err(SuperregError::NonSquarePattern {
            rows: p.rows,
            cols: p.cols,
        });
    }
    let m = p.rows;
    if p.structural_rank() < m {
        return Err(SuperregError::TrivialFullMinor);
    }
    let mut used = vec![false; m];
    let mut order = Vec::with_capacity(m);
    for row in (0..m).rev() {
        let col = (0..m)
            .find(|&c| !used[c] && p.get(row, c))
            .ok_or(SuperregError::OrderingStalled { row })?;
        used[col] = true;
        order.push(col);
    }
    Ok(order)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WeightCheckOptions {
    /// Maximum number of coefficient vectors to try.
    pub budget: u64,
    /// Seed for sampling when the space exceeds the budget.
    pub seed: u64,
}

impl Default for WeightCheckOptions {
    fn default() -> Self {
        WeightCheckOptions {
            budget: 1_000_000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightCheck {
    pub holds: bool,
    /// The bound `a - b + 1` that every `B u` was tested against.
    pub bound: usize,
    pub counterexample: Option<Vec<FieldElement>>,
    /// Whether every all-nonzero `u` (up to scaling) was tried.
    pub exhaustive: bool,
    pub vectors_checked: u64,
}

/// Tests `wt(B u) >= a - b + 1` for coefficient vectors `u` with every entry
/// nonzero.
///
/// `u` is normalized to `u[0] = 1` (scaling `u` scales `B u`), so the
/// exhaustive space has `(q-1)^(b-1)` vectors. When that exceeds the budget,
/// `budget` vectors are sampled with [`SplitMix64`] instead and the result is
/// flagged as not exhaustive. `B` is not required to be superregular.
pub fn check_weight_theorem(
    b: &ExactMatrix,
    opts: &WeightCheckOptions,
) -> Result<WeightCheck, SuperregError> {
    let (rows, cols) = (b.rows(), b.cols());
    if rows < cols || cols == 0 {
        return Err(SuperregError::BadShape { rows, cols });
    }
    let f = b.field();
    let bound = rows - cols + 1;
    let space = f
        .size()
        .map(|q| BigUint::from(q - 1).pow(cols as u32 - 1))
        .and_then(|s| s.to_u64())
        .filter(|&s| s <= opts.budget);
    let mut checked = 0u64;
    let mut test = |u: &[FieldElement]| -> Result<bool, SuperregError> {
        checked += 1;
        Ok(weight(&b.mat_vec(u)?) >= bound)
    };
    let mut u = vec![f.one(); cols];
    let counterexample = if let Some(space) = space {
        let q = f.size().unwrap();
        let mut digits = vec![1u64; cols];
        let mut found = None;
        for _ in 0..space {
            for (slot, &d) in u.iter_mut().zip(&digits).skip(1) {
                *slot = f.element_from_index(d).map_err(LinalgError::from)?;
            }
            if !test(&u)? {
                found = Some(u.clone());
                break;
            }
            // odometer over indices 1..q for positions 1..cols
            for d in digits.iter_mut().skip(1) {
                *d += 1;
                if *d < q {
                    break;
                }
                *d = 1;
            }
        }
        found
    } else {
        let mut rng = SplitMix64::new(opts.seed);
        let mut found = None;
        for _ in 0..opts.budget {
            for slot in u.iter_mut().skip(1) {
                *slot = rng.nonzero_element(f);
            }
            if !test(&u)? {
                found = Some(u.clone());
                break;
            }
        }
        found
    };
    Ok(WeightCheck {
        holds: counterexample.is_none(),
        bound,
        counterexample,
        exhaustive: space.is_some(),
        vectors_checked: checked,
    })
}

//! Alpha-power superregular matrices and optimal code generators.
//!
//! An [`ExponentPattern`] records, per cell, either nothing (a zero entry) or
//! the exponent `β` of a nonzero entry `α^β`. A pattern whose zeros propagate
//! (every zero has only zeros below it or only zeros to its left) and whose
//! exponents at least double along rows and down columns realizes a
//! superregular matrix over any `GF(p^N)` with `N` above every term exponent.
//!
//! The generator of an optimal code has `G_i` entries `α^(2^(n i + r + s - 2))`
//! (1-based `r`, `s`), except that a column with Forney index `ν` is zero in
//! every `G_i` with `i > ν`. Optimality is certified by checking that all
//! coefficients up to each column's degree are nonzero, that the sliding
//! matrix `𝒢(ε_0)` is superregular and by exhibiting a codeword whose weight
//! equals the bound.

use itertools::Itertools;
use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::convcode::{CodeError, CodeSpec, PolyMatrix};
use crate::exactla::{ExactMatrix, IndexSet};
use crate::gf::{factor, Field, FieldDescriptor, GfError, DEFAULT_FACTOR_BOUND};
use crate::rng::SplitMix64;
use crate::superreg::{
    is_superregular, SuperregError, SuperregOptions, SuperregReport, SupportPattern,
};

/// Largest extension degree [`auto_field`] will try.
pub const DEFAULT_MAX_AUTO_DEGREE: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructError {
    #[error("pattern grid has {found} cells, expected {expected}")]
    PatternSize { expected: usize, found: usize },
    #[error("exponent at ({0}, {1}) is zero; exponents must be positive")]
    ZeroExponent(usize, usize),
    #[error("pattern is {rows}x{cols}, expected a square pattern")]
    NonSquarePattern { rows: usize, cols: usize },
    #[error("permutation is not a bijection on 0..{0}")]
    BadPermutation(usize),
    #[error("the antidiagonal term is trivial")]
    TrivialAntidiagonal,
    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),
    #[error("budget of {0} evaluations exceeded")]
    BudgetExceeded(u64),
    #[error("no GF(2^N) with verifiable primitive element for {from} <= N <= {cap}")]
    NoVerifiableField { from: String, cap: usize },
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Superreg(SuperregError),
    #[error(transparent)]
    Field(#[from] GfError),
}

impl From<SuperregError> for ConstructError {
    fn from(e: SuperregError) -> Self {
        match e {
            SuperregError::BudgetExceeded(b) => ConstructError::BudgetExceeded(b),
            other => ConstructError::Superreg(other),
        }
    }
}

/// Grid of `None` (zero) or `Some(β)` for an entry `α^β`, `β > 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExponentPattern {
    rows: usize,
    cols: usize,
    cells: Vec<Option<BigUint>>,
}

impl ExponentPattern {
    pub fn new(
        rows: usize,
        cols: usize,
        cells: Vec<Option<BigUint>>,
    ) -> Result<Self, ConstructError> {
        if cells.len() != rows * cols {
            return Err(ConstructError::PatternSize {
                expected: rows * cols,
                found: cells.len(),
            });
        }
        if let Some(pos) = cells
            .iter()
            .position(|c| c.as_ref().is_some_and(Zero::is_zero))
        {
            return Err(ConstructError::ZeroExponent(pos / cols, pos % cols));
        }
        Ok(ExponentPattern { rows, cols, cells })
    }

    pub fn from_rows(grid: Vec<Vec<Option<BigUint>>>) -> Result<Self, ConstructError> {
        let rows = grid.len();
        let cols = grid.first().map_or(0, Vec::len);
        if let Some(bad) = grid.iter().find(|r| r.len() != cols) {
            return Err(ConstructError::PatternSize {
                expected: cols,
                found: bad.len(),
            });
        }
        ExponentPattern::new(rows, cols, grid.concat())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Option<&BigUint> {
        self.cells[i * self.cols + j].as_ref()
    }

    pub fn to_rows(&self) -> Vec<Vec<Option<BigUint>>> {
        self.cells
            .chunks(self.cols.max(1))
            .map(<[_]>::to_vec)
            .collect()
    }

    pub fn support(&self) -> SupportPattern {
        SupportPattern::new(
            self.rows,
            self.cols,
            self.cells.iter().map(Option::is_some).collect(),
        )
        .expect("same shape")
    }

    /// The matrix with entries `α^β` and zeros.
    pub fn realize(&self, field: &Field) -> ExactMatrix {
        ExactMatrix::from_fn(field, self.rows, self.cols, |i, j| match self.get(i, j) {
            Some(b) => field.alpha_pow(b),
            None => field.zero(),
        })
    }

    /// Pattern with columns taken in the given order.
    pub fn permute_columns(&self, order: &[usize]) -> Self {
        let mut cells = Vec::with_capacity(self.rows * order.len());
        for i in 0..self.rows {
            for &j in order {
                cells.push(self.get(i, j).cloned());
            }
        }
        ExponentPattern {
            rows: self.rows,
            cols: order.len(),
            cells,
        }
    }
}

/// Exponent patterns of `G_0, ..., G_{ν_ℓ}` for the optimal generator.
pub fn exponent_pattern(spec: &CodeSpec) -> Vec<ExponentPattern> {
    let (n, k) = (spec.n(), spec.k());
    let col_degree = column_index_degrees(spec);
    (0..=spec.nu_max())
        .map(|i| {
            let mut cells = Vec::with_capacity(n * k);
            for r in 1..=n {
                for s in 1..=k {
                    cells.push(if i > col_degree[s - 1] {
                        None
                    } else {
                        Some(BigUint::one() << (n * i + r + s - 2))
                    });
                }
            }
            ExponentPattern {
                rows: n,
                cols: k,
                cells,
            }
        })
        .collect()
}

/// Forney index of every column, in the nondecreasing order of the spec.
fn column_index_degrees(spec: &CodeSpec) -> Vec<usize> {
    spec.indices()
        .iter()
        .zip(spec.mults())
        .flat_map(|(&nu, &m)| std::iter::repeat_n(nu, m))
        .collect()
}

/// Pattern of `𝒢(ε)` assembled from coefficient patterns with the same
/// block layout as [`PolyMatrix::sliding_matrix`].
pub fn sliding_exponent_pattern(blocks: &[ExponentPattern], epsilon: usize) -> ExponentPattern {
    let (n, k) = (blocks[0].rows, blocks[0].cols);
    let m = blocks.len() - 1;
    let rows = n * (m + epsilon + 1);
    let cols = k * (epsilon + 1);
    let mut cells = Vec::with_capacity(rows * cols);
    for i in 0..rows {
        for j in 0..cols {
            let (r, c) = (i / n, j / k);
            cells.push(match (r + c).checked_sub(epsilon) {
                Some(d) if d <= m => blocks[d].get(i % n, j % k).cloned(),
                _ => None,
            });
        }
    }
    ExponentPattern { rows, cols, cells }
}

/// Which structural condition a cell pair breaks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    /// 2: zero propagation, 3: row doubling, 4: column doubling.
    pub condition: u8,
    pub cell: (usize, usize),
    pub other: (usize, usize),
}

/// First violated condition in row-major order of `cell`, if any.
///
/// * 2: a zero at `(i, l)` with a nonzero somewhere below and a nonzero
///   somewhere to the left; `other` is the first nonzero below.
/// * 3: nonzeros `(i, l)`, `(i, l')` with `l < l'` and `2β(i,l) > β(i,l')`.
/// * 4: nonzeros `(i, l)`, `(i', l)` with `i < i'` and `2β(i,l) > β(i',l)`.
pub fn validate_theorem2(p: &ExponentPattern) -> Option<Violation> {
    for i in 0..p.rows {
        for l in 0..p.cols {
            let Some(beta) = p.get(i, l) else {
                let below = (i + 1..p.rows).find(|&r| p.get(r, l).is_some());
                let left = (0..l).any(|c| p.get(i, c).is_some());
                if let (Some(r), true) = (below, left) {
                    return Some(Violation {
                        condition: 2,
                        cell: (i, l),
                        other: (r, l),
                    });
                }
                continue;
            };
            let twice = beta << 1u32;
            for c in l + 1..p.cols {
                if p.get(i, c).is_some_and(|b| twice > *b) {
                    return Some(Violation {
                        condition: 3,
                        cell: (i, l),
                        other: (i, c),
                    });
                }
            }
            for r in i + 1..p.rows {
                if p.get(r, l).is_some_and(|b| twice > *b) {
                    return Some(Violation {
                        condition: 4,
                        cell: (i, l),
                        other: (r, l),
                    });
                }
            }
        }
    }
    None
}

/// `1 + Σ_rows max β` (0 for an all-zero row). Every term of every minor
/// picks at most one cell per row, so no term exponent reaches this value.
pub fn n_lower_bound(p: &ExponentPattern) -> BigUint {
    let mut total = BigUint::one();
    for i in 0..p.rows {
        if let Some(m) = (0..p.cols).filter_map(|j| p.get(i, j)).max() {
            total += m;
        }
    }
    total
}

fn check_permutation(p: &ExponentPattern, sigma: &[usize]) -> Result<(), ConstructError> {
    if p.rows != p.cols {
        return Err(ConstructError::NonSquarePattern {
            rows: p.rows,
            cols: p.cols,
        });
    }
    let mut seen = vec![false; p.rows];
    if sigma.len() != p.rows {
        return Err(ConstructError::BadPermutation(p.rows));
    }
    for &s in sigma {
        if s >= p.rows || std::mem::replace(&mut seen[s], true) {
            return Err(ConstructError::BadPermutation(p.rows));
        }
    }
    Ok(())
}

/// Exponent `Σ_l β(l, σ(l))` of the term for `σ` (0-based, row `l` to
/// column `σ[l]`), or `None` when the term is trivial.
pub fn term_exponent(
    p: &ExponentPattern,
    sigma: &[usize],
) -> Result<Option<BigUint>, ConstructError> {
    check_permutation(p, sigma)?;
    Ok(term_exponent_unchecked(p, sigma))
}

fn term_exponent_unchecked(p: &ExponentPattern, sigma: &[usize]) -> Option<BigUint> {
    let mut total = BigUint::zero();
    for (l, &s) in sigma.iter().enumerate() {
        total += p.get(l, s)?;
    }
    Some(total)
}

/// Sets `S_l = { i <= l : σ(l) >= m - i + 1 }` in 1-based terms, returned
/// 0-based: `S[l]` holds the rows `i <= l` with `σ[l] >= m - 1 - i`.
pub fn s_sets(p: &ExponentPattern, sigma: &[usize]) -> Result<Vec<Vec<usize>>, ConstructError> {
    check_permutation(p, sigma)?;
    let m = p.rows;
    Ok((0..m)
        .map(|l| (0..=l).filter(|&i| sigma[l] + i + 1 >= m).collect())
        .collect())
}

/// For each `l` with `S_l` nonempty: the sum of the antidiagonal exponents
/// `β(i, m-1-i)` over `i ∈ S_l`, paired with `β(l, σ(l))`.
pub fn s_set_comparisons(
    p: &ExponentPattern,
    sigma: &[usize],
) -> Result<Vec<Option<(BigUint, BigUint)>>, ConstructError> {
    let sets = s_sets(p, sigma)?;
    let m = p.rows;
    Ok(sets
        .iter()
        .enumerate()
        .map(|(l, set)| {
            if set.is_empty() {
                return None;
            }
            let lhs = set
                .iter()
                .map(|&i| p.get(i, m - 1 - i).cloned().unwrap_or_default())
                .sum();
            let rhs = p.get(l, sigma[l]).cloned().unwrap_or_default();
            Some((lhs, rhs))
        })
        .collect())
}

/// Whether the antidiagonal term has a strictly smaller exponent than every
/// other nontrivial term (all permutations enumerated).
pub fn antidiagonal_term_is_strict_minimum(p: &ExponentPattern) -> Result<bool, ConstructError> {
    let m = p.rows;
    let anti: Vec<usize> = (0..m).rev().collect();
    let base = term_exponent(p, &anti)?.ok_or(ConstructError::TrivialAntidiagonal)?;
    Ok((0..m)
        .permutations(m)
        .all(|sigma| sigma == anti || term_exponent_unchecked(p, &sigma).is_none_or(|e| e > base)))
}

/// The generator with `G_i` realized from [`exponent_pattern`].
pub fn build_generator(spec: &CodeSpec, field: &Field) -> Result<PolyMatrix, ConstructError> {
    let coeffs = exponent_pattern(spec)
        .iter()
        .map(|p| p.realize(field))
        .collect();
    Ok(PolyMatrix::new(field, coeffs)?)
}

/// Certification outcome for a generator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub spec: CodeSpec,
    pub field: FieldDescriptor,
    pub epsilon0: usize,
    pub optimal_bound: usize,
    /// `1 + Σ row maxima` of the `𝒢(ε_0)` exponent pattern, in decimal.
    pub n_lower_bound: String,
    /// Whether the field degree reaches `n_lower_bound`. Superregularity is
    /// checked directly either way.
    pub field_meets_bound: bool,
    pub column_reduced: bool,
    pub superreg_report: SuperregReport,
    pub achieved_weight: Option<usize>,
    /// Constant message `u_0` of the exhibited codeword, as element text.
    pub achieving_message: Option<Vec<String>>,
    pub certified_distance: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CertifyOptions {
    pub superreg: SuperregOptions,
}

/// Builds the generator over `field` and certifies it.
pub fn certify_optimal(
    spec: &CodeSpec,
    field: &Field,
    opts: &CertifyOptions,
) -> Result<Certificate, ConstructError> {
    let g = build_generator(spec, field)?;
    certify_generator(spec, &g, opts)
}

/// Certifies an arbitrary generator against `spec`.
///
/// Fails with [`ConstructError::HypothesisFailed`] when the column degrees
/// differ from the spec, when some entry of a column with index `ν` is zero
/// in a `G_i` with `i <= ν`, or when `G` is not column reduced.
pub fn certify_generator(
    spec: &CodeSpec,
    g: &PolyMatrix,
    opts: &CertifyOptions,
) -> Result<Certificate, ConstructError> {
    if (g.n(), g.k()) != (spec.n(), spec.k()) {
        return Err(ConstructError::HypothesisFailed(format!(
            "generator is {}x{}, spec needs {}x{}",
            g.n(),
            g.k(),
            spec.n(),
            spec.k()
        )));
    }
    let expected = column_index_degrees(spec);
    let degrees = g.column_degrees()?.degrees;
    if degrees != expected {
        return Err(ConstructError::HypothesisFailed(format!(
            "column degrees {degrees:?} differ from {expected:?}"
        )));
    }
    for (s, &nu) in expected.iter().enumerate() {
        for i in 0..=nu {
            if let Some(r) = (0..g.n()).find(|&r| g.coeffs()[i].get(r, s).is_zero()) {
                return Err(ConstructError::HypothesisFailed(format!(
                    "entry ({r}, {s}) of G_{i} is zero"
                )));
            }
        }
    }
    if !g.is_column_reduced()? {
        return Err(ConstructError::HypothesisFailed(
            "generator is not column reduced".into(),
        ));
    }
    let field = g.field();
    let epsilon0 = spec.epsilon0();
    let bound = spec.optimal_bound();
    let lower = n_lower_bound(&sliding_exponent_pattern(&exponent_pattern(spec), epsilon0));
    let report = is_superregular(&g.sliding_matrix(epsilon0), &opts.superreg)?;
    let achieving = achieving_message(spec, g, bound)?;
    let certified_distance = (report.is_superregular && achieving.is_some()).then_some(bound);
    Ok(Certificate {
        spec: spec.clone(),
        field: field.descriptor(),
        epsilon0,
        optimal_bound: bound,
        field_meets_bound: BigUint::from(field.degree()) >= lower,
        n_lower_bound: lower.to_string(),
        column_reduced: true,
        superreg_report: report,
        achieved_weight: achieving.as_ref().map(|_| bound),
        achieving_message: achieving.map(|u| u.iter().map(|e| field.format_element(e)).collect()),
        certified_distance,
    })
}

/// Constant message supported on the first `m_1` columns whose codeword has
/// weight `target`. For `t = 1..=m_1` columns and each choice of `t - 1`
/// rows of the stacked `G_0..G_{ν_1}` restricted to those columns, a kernel
/// vector of that `(t-1) x t` block zeros those rows.
fn achieving_message(
    spec: &CodeSpec,
    g: &PolyMatrix,
    target: usize,
) -> Result<Option<Vec<crate::gf::FieldElement>>, ConstructError> {
    let f = g.field();
    let (n, k) = (g.n(), g.k());
    let stacked_rows = n * (spec.nu_min() + 1);
    for t in 1..=spec.mults()[0] {
        for cols in (0..spec.mults()[0]).combinations(t) {
            let block = ExactMatrix::from_fn(f, stacked_rows, t, |i, j| {
                g.coeffs()[i / n].get(i % n, cols[j]).clone()
            });
            for rows in (0..stacked_rows).combinations(t - 1) {
                let u_t = if t == 1 {
                    vec![f.one()]
                } else {
                    let sub = block
                        .submatrix(
                            &IndexSet::new(rows).expect("increasing"),
                            &IndexSet::range(t),
                        )
                        .map_err(CodeError::from)?;
                    match sub.kernel_vector() {
                        Some(u) => u,
                        None => continue,
                    }
                };
                let mut u = vec![f.zero(); k];
                for (&c, e) in cols.iter().zip(u_t) {
                    u[c] = e;
                }
                if g.encode(&[u.clone()])?.weight() == target {
                    return Ok(Some(u));
                }
            }
        }
    }
    Ok(None)
}

/// Smallest `GF(2^N)` with `N >= bound`, `N <= cap`, whose group order
/// `2^N - 1` factors within the default trial-division bound.
pub fn auto_field(bound: &BigUint, cap: usize) -> Result<Field, ConstructError> {
    let err = || ConstructError::NoVerifiableField {
        from: bound.to_string(),
        cap,
    };
    let start = usize::try_from(bound).map_err(|_| err())?.max(1);
    for degree in start..=cap {
        let order = (BigUint::one() << degree) - 1u32;
        if factor::distinct_prime_factors(&order, DEFAULT_FACTOR_BOUND).is_some() {
            return Ok(Field::new(2, degree)?);
        }
    }
    Err(err())
}

/// The `𝒢(ε_0)` row-maxima bound for a spec.
pub fn spec_lower_bound(spec: &CodeSpec) -> BigUint {
    n_lower_bound(&sliding_exponent_pattern(
        &exponent_pattern(spec),
        spec.epsilon0(),
    ))
}

/// A generator found by [`search_superregular`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchHit {
    pub generator: PolyMatrix,
    /// 0-based index of the successful trial.
    pub trial: u64,
}

/// Random nonzero fillings of the given coefficient supports, tested for a
/// superregular `𝒢(ε)`.
///
/// Trial `t` draws from `SplitMix64::stream(seed, t)`, filling the nonzero
/// cells of `G_0, G_1, ...` in row-major order. Trials run in parallel
/// batches; the hit with the lowest trial index is returned, so the result
/// depends only on the inputs.
pub fn search_superregular(
    supports: &[SupportPattern],
    epsilon: usize,
    field: &Field,
    trials: u64,
    seed: u64,
) -> Result<Option<SearchHit>, ConstructError> {
    const BATCH: u64 = 1024;
    let opts = SuperregOptions::default();
    let attempt = |t: u64| -> Result<Option<PolyMatrix>, ConstructError> {
        let mut rng = SplitMix64::stream(seed, t);
        let coeffs = supports
            .iter()
            .map(|s| {
                let cells = (0..s.rows() * s.cols())
                    .map(|c| {
                        if s.get(c / s.cols(), c % s.cols()) {
                            rng.nonzero_element(field)
                        } else {
                            field.zero()
                        }
                    })
                    .collect();
                ExactMatrix::new(field, s.rows(), s.cols(), cells)
            })
            .collect::<Result<Vec<_>, _>>()
            .map_err(CodeError::from)?;
        let g = PolyMatrix::trimmed(field, coeffs)?;
        let report = is_superregular(&g.sliding_matrix(epsilon), &opts)?;
        Ok(report.is_superregular.then_some(g))
    };
    let mut start = 0;
    while start < trials {
        let end = (start + BATCH).min(trials);
        let found = (start..end)
            .into_par_iter()
            .map(|t| attempt(t).map(|g| g.map(|g| (t, g))))
            .find_first(|r| !matches!(r, Ok(None)));
        match found {
            Some(Ok(Some((trial, generator)))) => return Ok(Some(SearchHit { generator, trial })),
            Some(Err(e)) => return Err(e),
            _ => start = end,
        }
    }
    Ok(None)
}

/// [`search_superregular`] on the supports of the optimal generator for
/// `spec` at depth `ε_0`.
pub fn search_code(
    spec: &CodeSpec,
    field: &Field,
    trials: u64,
    seed: u64,
) -> Result<Option<SearchHit>, ConstructError> {
    let supports: Vec<SupportPattern> = exponent_pattern(spec)
        .iter()
        .map(ExponentPattern::support)
        .collect();
    search_superregular(&supports, spec.epsilon0(), field, trials, seed)
}

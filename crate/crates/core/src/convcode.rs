//! Polynomial generator matrices and convolutional code parameters.
//!
//! A generator `G(z) = G_0 + G_1 z + ... + G_m z^m` is stored as its list of
//! constant `n x k` coefficient matrices. Messages and codewords are lists of
//! coefficient vectors, lowest degree first.

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactla::{weight, ExactMatrix, LinalgError};
use crate::gf::{Field, FieldElement, GfError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeError {
    #[error("generator has no coefficient matrices")]
    NoCoefficients,
    #[error("coefficient {index} is {rows}x{cols}, expected {n}x{k}")]
    ShapeMismatch {
        index: usize,
        rows: usize,
        cols: usize,
        n: usize,
        k: usize,
    },
    #[error("highest coefficient matrix G_{0} is zero")]
    TrailingZero(usize),
    #[error("column {0} of the generator is identically zero")]
    ZeroColumn(usize),
    #[error("generator is not column reduced")]
    NotColumnReduced,
    #[error("invalid code parameters: {0}")]
    InvalidSpec(String),
    #[error("search space of {space} messages exceeds budget {budget}")]
    BudgetExceeded { space: String, budget: u64 },
    #[error("message coefficient {index} has length {found}, expected {expected}")]
    MessageLength {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

impl From<GfError> for CodeError {
    fn from(e: GfError) -> Self {
        CodeError::Linalg(e.into())
    }
}

/// Rate `k/n`, distinct Forney indices and their multiplicities.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawCodeSpec", into = "RawCodeSpec")]
pub struct CodeSpec {
    n: usize,
    k: usize,
    indices: Vec<usize>,
    mults: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct RawCodeSpec {
    n: usize,
    k: usize,
    indices: Vec<usize>,
    mults: Vec<usize>,
}

impl TryFrom<RawCodeSpec> for CodeSpec {
    type Error = CodeError;

    fn try_from(r: RawCodeSpec) -> Result<Self, CodeError> {
        CodeSpec::new(r.n, r.k, r.indices, r.mults)
    }
}

impl From<CodeSpec> for RawCodeSpec {
    fn from(s: CodeSpec) -> Self {
        RawCodeSpec {
            n: s.n,
            k: s.k,
            indices: s.indices,
            mults: s.mults,
        }
    }
}

impl CodeSpec {
    pub fn new(
        n: usize,
        k: usize,
        indices: Vec<usize>,
        mults: Vec<usize>,
    ) -> Result<Self, CodeError> {
        let invalid = |msg: &str| Err(CodeError::InvalidSpec(msg.to_string()));
        if k == 0 || k >= n {
            return invalid("need 0 < k < n");
        }
        if indices.is_empty() || indices.len() != mults.len() {
            return invalid("indices and multiplicities must be nonempty and of equal length");
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return invalid("indices must be strictly increasing");
        }
        if mults.contains(&0) {
            return invalid("multiplicities must be positive");
        }
        if mults.iter().sum::<usize>() != k {
            return invalid("multiplicities must sum to k");
        }
        Ok(CodeSpec {
            n,
            k,
            indices,
            mults,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn mults(&self) -> &[usize] {
        &self.mults
    }

    /// Smallest Forney index `ν_1`.
    pub fn nu_min(&self) -> usize {
        self.indices[0]
    }

    /// Largest Forney index `ν_ℓ`.
    pub fn nu_max(&self) -> usize {
        *self.indices.last().unwrap()
    }

    /// `δ = Σ ν_j m_j`.
    pub fn degree(&self) -> usize {
        self.indices
            .iter()
            .zip(&self.mults)
            .map(|(v, m)| v * m)
            .sum()
    }

    pub fn optimal_bound(&self) -> usize {
        optimal_bound(self.n, self.indices[0], self.mults[0])
    }

    pub fn epsilon0(&self) -> usize {
        epsilon0(self.n, self.k, self.indices[0], self.mults[0])
    }
}

/// `(n-k)(⌊δ/k⌋+1) + δ + 1`.
pub fn generalized_singleton(n: usize, k: usize, delta: usize) -> usize {
    (n - k) * (delta / k + 1) + delta + 1
}

/// `n(ν_1+1) - m_1 + 1`.
pub fn optimal_bound(n: usize, nu1: usize, m1: usize) -> usize {
    n * (nu1 + 1) + 1 - m1
}

/// `⌈(n(ν_1+1) - m_1)/(n-k)⌉ - 1`.
pub fn epsilon0(n: usize, k: usize, nu1: usize, m1: usize) -> usize {
    (n * (nu1 + 1) - m1).div_ceil(n - k) - 1
}

/// Whether the indices form the compact profile for `δ`: `ξ = k(⌊δ/k⌋+1) - δ`
/// indices equal to `⌊δ/k⌋` and the remaining `k - ξ` equal to `⌊δ/k⌋ + 1`.
pub fn is_mds_profile(spec: &CodeSpec) -> bool {
    let (k, delta) = (spec.k, spec.degree());
    let low = delta / k;
    let xi = k * (low + 1) - delta;
    let mut expected: Vec<(usize, usize)> = vec![(low, xi)];
    if xi < k {
        expected.push((low + 1, k - xi));
    }
    let actual: Vec<(usize, usize)> = spec
        .indices
        .iter()
        .copied()
        .zip(spec.mults.iter().copied())
        .collect();
    actual == expected
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnDegrees {
    pub degrees: Vec<usize>,
    /// Largest column degree.
    pub memory: usize,
    /// Sum of the column degrees.
    pub total_memory: usize,
}

/// `G(z)` as coefficient matrices `G_0, ..., G_m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    n: usize,
    k: usize,
    coeffs: Vec<ExactMatrix>,
    field: Field,
}

impl PolyMatrix {
    pub fn new(field: &Field, coeffs: Vec<ExactMatrix>) -> Result<Self, CodeError> {
        let first = coeffs.first().ok_or(CodeError::NoCoefficients)?;
        let (n, k) = (first.rows(), first.cols());
        for (index, c) in coeffs.iter().enumerate() {
            if c.rows() != n || c.cols() != k {
                return Err(CodeError::ShapeMismatch {
                    index,
                    rows: c.rows(),
                    cols: c.cols(),
                    n,
                    k,
                });
            }
            if c.field() != field {
                return Err(GfError::MixedFields.into());
            }
        }
        let m = coeffs.len() - 1;
        if m > 0 && coeffs[m].is_zero() {
            return Err(CodeError::TrailingZero(m));
        }
        Ok(PolyMatrix {
            n,
            k,
            coeffs,
            field: field.clone(),
        })
    }

    /// Drops trailing zero coefficients before validating.
    pub fn trimmed(field: &Field, mut coeffs: Vec<ExactMatrix>) -> Result<Self, CodeError> {
        while coeffs.len() > 1 && coeffs.last().is_some_and(ExactMatrix::is_zero) {
            coeffs.pop();
        }
        PolyMatrix::new(field, coeffs)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[ExactMatrix] {
        &self.coeffs
    }

    /// Largest degree `m` of any entry.
    pub fn max_degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    fn entry_degree(&self, i: usize, j: usize) -> Option<usize> {
        (0..self.coeffs.len())
            .rev()
            .find(|&d| !self.coeffs[d].get(i, j).is_zero())
    }

    fn column_degree(&self, j: usize) -> Result<usize, CodeError> {
        (0..self.n)
            .filter_map(|i| self.entry_degree(i, j))
            .max()
            .ok_or(CodeError::ZeroColumn(j))
    }

    pub fn column_degrees(&self) -> Result<ColumnDegrees, CodeError> {
        let degrees = (0..self.k)
            .map(|j| self.column_degree(j))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ColumnDegrees {
            memory: degrees.iter().copied().max().unwrap_or(0),
            total_memory: degrees.iter().sum(),
            degrees,
        })
    }

    /// Column `j` of `G^hc` is the coefficient of `z^{ν_j}` in column `j`.
    pub fn highest_coeff_matrix(&self) -> Result<ExactMatrix, CodeError> {
        let degrees = self.column_degrees()?.degrees;
        Ok(ExactMatrix::from_fn(&self.field, self.n, self.k, |i, j| {
            self.coeffs[degrees[j]].get(i, j).clone()
        }))
    }

    pub fn is_column_reduced(&self) -> Result<bool, CodeError> {
        Ok(self.highest_coeff_matrix()?.rank() == self.k)
    }

    /// Distinct column degrees with multiplicities.
    pub fn forney_profile(&self) -> Result<CodeSpec, CodeError> {
        if !self.is_column_reduced()? {
            return Err(CodeError::NotColumnReduced);
        }
        let mut degrees = self.column_degrees()?.degrees;
        degrees.sort_unstable();
        let mut indices: Vec<usize> = Vec::new();
        let mut mults: Vec<usize> = Vec::new();
        for d in degrees {
            if indices.last() == Some(&d) {
                *mults.last_mut().unwrap() += 1;
            } else {
                indices.push(d);
                mults.push(1);
            }
        }
        CodeSpec::new(self.n, self.k, indices, mults)
    }

    /// `G(z) T` for a constant `k x k` matrix `T`.
    pub fn mul_right(&self, t: &ExactMatrix) -> Result<PolyMatrix, CodeError> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.mul(t))
            .collect::<Result<Vec<_>, _>>()?;
        PolyMatrix::trimmed(&self.field, coeffs)
    }

    /// The block matrix `𝒢(ε)` of shape `n(m+ε+1) x k(ε+1)`.
    ///
    /// Block `(r, c)` is `G_{r-(ε-c)}` when that index lies in `0..=m`, zero
    /// otherwise. The leftmost block column multiplies `u_ε` and the rightmost
    /// `u_0`, so `𝒢(ε) (u_ε, ..., u_0)` stacks `v_0, ..., v_{m+ε}`.
    pub fn sliding_matrix(&self, epsilon: usize) -> ExactMatrix {
        let m = self.max_degree();
        let (n, k) = (self.n, self.k);
        ExactMatrix::from_fn(
            &self.field,
            n * (m + epsilon + 1),
            k * (epsilon + 1),
            |i, j| {
                let (r, c) = (i / n, j / k);
                match (r + c).checked_sub(epsilon) {
                    Some(d) if d <= m => self.coeffs[d].get(i % n, j % k).clone(),
                    _ => self.field.zero(),
                }
            },
        )
    }

    /// `v(z) = G(z) u(z)` for `u` given as coefficient vectors `u_0, u_1, ...`.
    pub fn encode(&self, u: &[Vec<FieldElement>]) -> Result<Codeword, CodeError> {
        for (index, c) in u.iter().enumerate() {
            if c.len() != self.k {
                return Err(CodeError::MessageLength {
                    index,
                    expected: self.k,
                    found: c.len(),
                });
            }
            if c.iter().any(|e| !self.field.contains(e)) {
                return Err(GfError::MixedFields.into());
            }
        }
        let f = &self.field;
        let mut v = Vec::new();
        if !u.is_empty() {
            for t in 0..u.len() + self.max_degree() {
                let mut acc = vec![f.zero(); self.n];
                for (i, g) in self.coeffs.iter().enumerate() {
                    let Some(ut) = t.checked_sub(i).and_then(|d| u.get(d)) else {
                        continue;
                    };
                    for (a, p) in acc.iter_mut().zip(g.mat_vec(ut)?) {
                        *a = f.add(a, &p);
                    }
                }
                v.push(acc);
            }
        }
        while v
            .last()
            .is_some_and(|c| c.iter().all(FieldElement::is_zero))
        {
            v.pop();
        }
        Ok(Codeword { coeffs: v })
    }

    /// Minimum weight of `G(z) u(z)` over nonzero messages of degree at most
    /// `max_degree`.
    ///
    /// Messages are normalized so that the first nonzero coordinate of
    /// `(u_0, u_1, ...)` is one; scaling a message scales its codeword and
    /// keeps its weight. The search requires `q^{k(E+1)} <= budget`. The
    /// value is an upper bound on the code distance; ties are broken by the
    /// first message in enumeration order, independent of thread count.
    pub fn distance_up_to(&self, max_degree: usize, budget: u64) -> Result<Distance, CodeError> {
        self.column_degrees()?;
        let f = &self.field;
        let len = self.k * (max_degree + 1);
        let space = f
            .size()
            .map(|q| BigUint::from(q).pow(len as u32))
            .filter(|s| *s <= BigUint::from(budget));
        if space.is_none() {
            let space = match f.size() {
                Some(q) => BigUint::from(q).pow(len as u32).to_string(),
                None => format!("{}^{}", f.group_order() + 1u32, len),
            };
            return Err(CodeError::BudgetExceeded { space, budget });
        }
        // columns of 𝒢(E) reordered so coordinate d*k + j is entry j of u_d
        let s = self.sliding_matrix(max_degree);
        let columns: Vec<Vec<FieldElement>> = (0..len)
            .map(|c| {
                let (d, j) = (c / self.k, c % self.k);
                let col = (max_degree - d) * self.k + j;
                (0..s.rows()).map(|i| s.get(i, col).clone()).collect()
            })
            .collect();
        let best = match TableArith::new(f) {
            Some(t) => {
                let cols: Vec<Vec<u16>> = columns
                    .iter()
                    .map(|c| c.iter().map(|e| t.index(f, e)).collect())
                    .collect();
                search_min(&t, &cols)
                    .map(|(w, m)| (w, m.into_iter().map(|d| t.elements[d].clone()).collect()))
            }
            None => {
                let g = FieldArith::new(f);
                search_min(&g, &columns).map(|(w, m)| {
                    (
                        w,
                        m.into_iter()
                            .map(|d| g.elements[d].clone())
                            .collect::<Vec<_>>(),
                    )
                })
            }
        };
        let (value, flat) = best.expect("at least one nonzero message");
        let message = flat.chunks(self.k).map(<[FieldElement]>::to_vec).collect();
        Ok(Distance {
            value,
            exhaustive: true,
            message,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Distance {
    pub value: usize,
    /// True when every normalized message up to the degree was tried.
    pub exhaustive: bool,
    /// A message `u_0, ..., u_E` whose codeword has weight `value`.
    pub message: Vec<Vec<FieldElement>>,
}

/// Codeword coefficients `v_0, v_1, ...` without trailing zero vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Codeword {
    pub coeffs: Vec<Vec<FieldElement>>,
}

impl Codeword {
    /// Sum of the Hamming weights of the coefficient vectors.
    pub fn weight(&self) -> usize {
        self.coeffs.iter().map(|c| weight(c)).sum()
    }
}

/// Field arithmetic over element indices `0..q`, with index 1 the unit.
trait Arith: Sync {
    type E: Clone + Send + Sync + PartialEq;
    fn size(&self) -> usize;
    fn el(&self, index: usize) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
}

/// Log/antilog tables for fields with at most 1024 elements.
struct TableArith {
    q: usize,
    add: Vec<u16>,
    neg: Vec<u16>,
    log: Vec<u16>,
    exp: Vec<u16>,
    elements: Vec<FieldElement>,
}

impl TableArith {
    fn new(f: &Field) -> Option<Self> {
        let q = f.size().filter(|&q| q <= 1024)? as usize;
        let elements: Vec<FieldElement> = f.elements().collect();
        let idx = |e: &FieldElement| f.index_of(e).unwrap() as u16;
        let mut add = vec![0u16; q * q];
        for a in 0..q {
            for b in 0..q {
                add[a * q + b] = idx(&f.add(&elements[a], &elements[b]));
            }
        }
        let neg = elements.iter().map(|e| idx(&f.neg(e))).collect();
        let mut exp = vec![0u16; q - 1];
        let mut log = vec![0u16; q];
        let mut x = f.one();
        for (i, slot) in exp.iter_mut().enumerate() {
            *slot = idx(&x);
            if i > 0 && *slot == 1 {
                return None; // alpha is not primitive
            }
            log[*slot as usize] = i as u16;
            x = f.mul(&x, &f.alpha());
        }
        Some(TableArith {
            q,
            add,
            neg,
            log,
            exp,
            elements,
        })
    }

    fn index(&self, f: &Field, e: &FieldElement) -> u16 {
        f.index_of(e).unwrap() as u16
    }
}

impl Arith for TableArith {
    type E = u16;

    fn size(&self) -> usize {
        self.q
    }

    fn el(&self, index: usize) -> u16 {
        index as u16
    }

    fn is_zero(&self, a: &u16) -> bool {
        *a == 0
    }

    fn add(&self, a: &u16, b: &u16) -> u16 {
        self.add[*a as usize * self.q + *b as usize]
    }

    fn sub(&self, a: &u16, b: &u16) -> u16 {
        self.add(a, &self.neg[*b as usize])
    }

    fn mul(&self, a: &u16, b: &u16) -> u16 {
        if *a == 0 || *b == 0 {
            return 0;
        }
        let s = self.log[*a as usize] as usize + self.log[*b as usize] as usize;
        self.exp[s % (self.q - 1)]
    }
}

struct FieldArith<'a> {
    field: &'a Field,
    elements: Vec<FieldElement>,
}

impl<'a> FieldArith<'a> {
    fn new(field: &'a Field) -> Self {
        FieldArith {
            field,
            elements: field.elements().collect(),
        }
    }
}

impl Arith for FieldArith<'_> {
    type E = FieldElement;

    fn size(&self) -> usize {
        self.elements.len()
    }

    fn el(&self, index: usize) -> FieldElement {
        self.elements[index].clone()
    }

    fn is_zero(&self, a: &FieldElement) -> bool {
        a.is_zero()
    }

    fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.field.add(a, b)
    }

    fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.field.sub(a, b)
    }

    fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.field.mul(a, b)
    }
}

/// Minimum weight of `Σ x_c col_c` over normalized nonzero `x`, returned with
/// the minimizing digit vector. Work is split by the position of the leading
/// one and the digit following it; each split runs an odometer that updates
/// the product incrementally.
fn search_min<A: Arith>(a: &A, cols: &[Vec<A::E>]) -> Option<(usize, Vec<usize>)> {
    let len = cols.len();
    let q = a.size();
    let jobs: Vec<(usize, Option<usize>)> = (0..len)
        .flat_map(|lead| {
            let splits: Vec<Option<usize>> = if lead + 1 < len {
                (0..q).map(Some).collect()
            } else {
                vec![None]
            };
            splits.into_iter().map(move |s| (lead, s))
        })
        .collect();
    jobs.par_iter()
        .enumerate()
        .map(|(job, &(lead, split))| {
            let mut digits = vec![0usize; len];
            let mut v: Vec<A::E> = vec![a.el(0); cols.first().map_or(0, Vec::len)];
            let apply = |v: &mut Vec<A::E>, c: usize, from: usize, to: usize| {
                let delta = a.sub(&a.el(to), &a.el(from));
                for (x, g) in v.iter_mut().zip(&cols[c]) {
                    *x = a.add(x, &a.mul(&delta, g));
                }
            };
            digits[lead] = 1;
            apply(&mut v, lead, 0, 1);
            let first_free = match split {
                Some(s) => {
                    digits[lead + 1] = s;
                    apply(&mut v, lead + 1, 0, s);
                    lead + 2
                }
                None => lead + 1,
            };
            let mut best = (usize::MAX, 0u64, Vec::new());
            let mut step = 0u64;
            loop {
                let w = v.iter().filter(|x| !a.is_zero(x)).count();
                if w < best.0 {
                    best = (w, step, digits.clone());
                }
                step += 1;
                let mut c = len;
                loop {
                    if c == first_free {
                        return (best.0, job, best.1, best.2);
                    }
                    c -= 1;
                    let old = digits[c];
                    if old + 1 < q {
                        digits[c] = old + 1;
                        apply(&mut v, c, old, old + 1);
                        break;
                    }
                    digits[c] = 0;
                    apply(&mut v, c, old, 0);
                }
            }
        })
        .min_by(|x, y| (x.0, x.1, x.2).cmp(&(y.0, y.1, y.2)))
        .map(|(w, _, _, digits)| (w, digits))
}

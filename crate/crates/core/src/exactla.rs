//! Exact dense linear algebra over a [`Field`].

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf::{Field, FieldElement, GfError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NonSquare { rows: usize, cols: usize },
    #[error("index {index} out of bounds for dimension {bound}")]
    IndexOutOfBounds { index: usize, bound: usize },
    #[error("index set is not strictly increasing")]
    UnsortedIndexSet,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Field(#[from] GfError),
}

/// Strictly increasing list of 0-based indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct IndexSet(Vec<usize>);

impl IndexSet {
    pub fn new(indices: Vec<usize>) -> Result<Self, LinalgError> {
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(LinalgError::UnsortedIndexSet);
        }
        Ok(IndexSet(indices))
    }

    /// `{0, 1, ..., n-1}`.
    pub fn range(n: usize) -> Self {
        IndexSet((0..n).collect())
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn check_bound(&self, bound: usize) -> Result<(), LinalgError> {
        match self.0.last() {
            Some(&index) if index >= bound => Err(LinalgError::IndexOutOfBounds { index, bound }),
            _ => Ok(()),
        }
    }
}

impl TryFrom<Vec<usize>> for IndexSet {
    type Error = LinalgError;

    fn try_from(v: Vec<usize>) -> Result<Self, Self::Error> {
        IndexSet::new(v)
    }
}

impl From<IndexSet> for Vec<usize> {
    fn from(s: IndexSet) -> Self {
        s.0
    }
}

/// Dense row-major matrix over a finite field.
#[derive(Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<FieldElement>,
    field: Field,
}

impl std::fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(
            f,
            "ExactMatrix {}x{} over {:?}",
            self.rows, self.cols, self.field
        )?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| self.field.format_element(self.get(i, j)))
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl ExactMatrix {
    pub fn new(
        field: &Field,
        rows: usize,
        cols: usize,
        entries: Vec<FieldElement>,
    ) -> Result<Self, LinalgError> {
        if entries.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch {
                expected: rows * cols,
                found: entries.len(),
            });
        }
        if entries.iter().any(|e| !field.contains(e)) {
            return Err(GfError::MixedFields.into());
        }
        Ok(ExactMatrix {
            rows,
            cols,
            entries,
            field: field.clone(),
        })
    }

    pub fn from_rows(field: &Field, rows: Vec<Vec<FieldElement>>) -> Result<Self, LinalgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|row| row.len() != c) {
            return Err(LinalgError::DimensionMismatch {
                expected: c,
                found: bad.len(),
            });
        }
        ExactMatrix::new(field, r, c, rows.into_iter().flatten().collect())
    }

    pub fn from_fn(
        field: &Field,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> FieldElement,
    ) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        ExactMatrix::new(field, rows, cols, entries).expect("entries from the matrix field")
    }

    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Self {
        ExactMatrix::from_fn(field, rows, cols, |_, _| field.zero())
    }

    pub fn identity(field: &Field, n: usize) -> Self {
        ExactMatrix::from_fn(
            field,
            n,
            n,
            |i, j| {
                if i == j {
                    field.one()
                } else {
                    field.zero()
                }
            },
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn get(&self, i: usize, j: usize) -> &FieldElement {
        &self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[FieldElement] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[FieldElement] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(FieldElement::is_zero)
    }

    pub fn transpose(&self) -> Self {
        ExactMatrix::from_fn(&self.field, self.cols, self.rows, |i, j| {
            self.get(j, i).clone()
        })
    }

    /// Copy with a single entry replaced.
    pub fn with_entry(&self, i: usize, j: usize, value: FieldElement) -> Result<Self, LinalgError> {
        if i >= self.rows {
            return Err(LinalgError::IndexOutOfBounds {
                index: i,
                bound: self.rows,
            });
        }
        if j >= self.cols {
            return Err(LinalgError::IndexOutOfBounds {
                index: j,
                bound: self.cols,
            });
        }
        if !self.field.contains(&value) {
            return Err(GfError::MixedFields.into());
        }
        let mut out = self.clone();
        out.entries[i * self.cols + j] = value;
        Ok(out)
    }

    pub fn submatrix(&self, rows: &IndexSet, cols: &IndexSet) -> Result<Self, LinalgError> {
        rows.check_bound(self.rows)?;
        cols.check_bound(self.cols)?;
        Ok(ExactMatrix::from_fn(
            &self.field,
            rows.len(),
            cols.len(),
            |i, j| self.get(rows.as_slice()[i], cols.as_slice()[j]).clone(),
        ))
    }

    /// Determinant by Gaussian elimination.
    pub fn det(&self) -> Result<FieldElement, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(det_in_place(&self.field, self.entries.clone(), self.rows))
    }

    /// Determinant of the minor on `rows` x `cols`; both slices must be in
    /// bounds and of equal length.
    pub fn minor_det(&self, rows: &[usize], cols: &[usize]) -> FieldElement {
        debug_assert_eq!(rows.len(), cols.len());
        let mut scratch = Vec::with_capacity(rows.len() * cols.len());
        for &i in rows {
            for &j in cols {
                scratch.push(self.get(i, j).clone());
            }
        }
        det_in_place(&self.field, scratch, rows.len())
    }

    pub fn rank(&self) -> usize {
        let mut a = self.entries.clone();
        row_echelon(&self.field, &mut a, self.rows, self.cols).len()
    }

    pub fn mat_vec(&self, v: &[FieldElement]) -> Result<Vec<FieldElement>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        if v.iter().any(|e| !self.field.contains(e)) {
            return Err(GfError::MixedFields.into());
        }
        let f = &self.field;
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(f.zero(), |acc, (a, b)| f.add(&acc, &f.mul(a, b)))
            })
            .collect())
    }

    pub fn mul(&self, other: &ExactMatrix) -> Result<ExactMatrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        if self.field != other.field {
            return Err(GfError::MixedFields.into());
        }
        let f = &self.field;
        Ok(ExactMatrix::from_fn(f, self.rows, other.cols, |i, j| {
            (0..self.cols).fold(f.zero(), |acc, t| {
                f.add(&acc, &f.mul(self.get(i, t), other.get(t, j)))
            })
        }))
    }

    /// A nonzero vector `x` with `self · x = 0`, if the columns are dependent.
    pub fn kernel_vector(&self) -> Option<Vec<FieldElement>> {
        let f = &self.field;
        let mut a = self.entries.clone();
        let pivots = row_echelon(f, &mut a, self.rows, self.cols);
        let free = (0..self.cols).find(|c| !pivots.contains(c))?;
        // reduced form: back-substitute with x[free] = 1, other free vars 0
        let mut x = vec![f.zero(); self.cols];
        x[free] = f.one();
        for (r, &pc) in pivots.iter().enumerate().rev() {
            let mut acc = f.zero();
            for c in pc + 1..self.cols {
                acc = f.add(&acc, &f.mul(&a[r * self.cols + c], &x[c]));
            }
            let pivot_inv = f.inv(&a[r * self.cols + pc]).expect("pivot is nonzero");
            x[pc] = f.neg(&f.mul(&acc, &pivot_inv));
        }
        Some(x)
    }
}

/// Row-reduces `a` in place; returns the pivot column of each nonzero row.
fn row_echelon(f: &Field, a: &mut [FieldElement], rows: usize, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !a[i * cols + c].is_zero()) else {
            continue;
        };
        if pr != r {
            for j in 0..cols {
                a.swap(pr * cols + j, r * cols + j);
            }
        }
        let pivot_inv = f.inv(&a[r * cols + c]).expect("pivot is nonzero");
        for i in r + 1..rows {
            if a[i * cols + c].is_zero() {
                continue;
            }
            let factor = f.mul(&a[i * cols + c], &pivot_inv);
            for j in c..cols {
                if a[r * cols + j].is_zero() {
                    continue;
                }
                let t = f.mul(&factor, &a[r * cols + j]);
                a[i * cols + j] = f.sub(&a[i * cols + j], &t);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Determinant of an `n`x`n` row-major matrix, consuming the scratch buffer.
/// Pivots on the first nonzero entry of each column; swaps flip the sign.
fn det_in_place(f: &Field, mut a: Vec<FieldElement>, n: usize) -> FieldElement {
    let mut det = f.one();
    let mut negate = false;
    for c in 0..n {
        let Some(pr) = (c..n).find(|&i| !a[i * n + c].is_zero()) else {
            return f.zero();
        };
        if pr != c {
            for j in c..n {
                a.swap(pr * n + j, c * n + j);
            }
            negate = !negate;
        }
        det = f.mul(&det, &a[c * n + c]);
        if c + 1 == n {
            break;
        }
        let pivot_inv = f.inv(&a[c * n + c]).expect("pivot is nonzero");
        for i in c + 1..n {
            if a[i * n + c].is_zero() {
                continue;
            }
            let factor = f.mul(&a[i * n + c], &pivot_inv);
            for j in c + 1..n {
                if a[c * n + j].is_zero() {
                    continue;
                }
                let t = f.mul(&factor, &a[c * n + j]);
                a[i * n + j] = f.sub(&a[i * n + j], &t);
            }
        }
    }
    if negate {
        f.neg(&det)
    } else {
        det
    }
}

/// Number of nonzero entries.
pub fn weight(v: &[FieldElement]) -> usize {
    v.iter().filter(|e| !e.is_zero()).count()
}

#[cfg(test)]
mod test {
    use super::*;

    fn gf(p: u64, n: usize) -> Field {
        Field::new(p, n).unwrap()
    }

    #[test]
    fn identity_determinant_and_rank() {
        let f = gf(3, 1);
        let i3 = ExactMatrix::identity(&f, 3);
        assert_eq!(i3.det().unwrap(), f.one());
        assert_eq!(i3.rank(), 3);
        assert_eq!(ExactMatrix::zeros(&f, 3, 4).rank(), 0);
    }

    #[test]
    fn equal_rows_have_zero_determinant() {
        let f = gf(5, 1);
        let r = vec![f.from_u64(1), f.from_u64(2), f.from_u64(3)];
        let m = ExactMatrix::from_rows(&f, vec![r.clone(), vec![f.from_u64(4); 3], r]).unwrap();
        assert!(m.det().unwrap().is_zero());
    }

    #[test]
    fn gf4_two_by_two_determinant() {
        // [[a,1],[1,a]] has det a^2 - 1 = a^2 + 1 = a (since a^2 = a + 1)
        let f = gf(2, 2);
        let a = f.alpha();
        let m =
            ExactMatrix::from_rows(&f, vec![vec![a.clone(), f.one()], vec![f.one(), a.clone()]])
                .unwrap();
        assert_eq!(m.det().unwrap(), a);
    }

    #[test]
    fn all_ones_rank_one() {
        let f = gf(2, 1);
        let m = ExactMatrix::from_fn(&f, 2, 2, |_, _| f.one());
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn non_square_det_rejected() {
        let f = gf(2, 1);
        assert_eq!(
            ExactMatrix::zeros(&f, 2, 3).det().unwrap_err(),
            LinalgError::NonSquare { rows: 2, cols: 3 }
        );
    }

    #[test]
    fn weights() {
        let f = gf(2, 2);
        assert_eq!(weight(&vec![f.zero(); 5]), 0);
        assert_eq!(weight(&[f.one(), f.zero(), f.alpha()]), 2);
    }

    #[test]
    fn principal_submatrix_of_identity() {
        let f = gf(2, 1);
        let i3 = ExactMatrix::identity(&f, 3);
        let s = IndexSet::new(vec![0, 2]).unwrap();
        assert_eq!(i3.submatrix(&s, &s).unwrap(), ExactMatrix::identity(&f, 2));
        let bad = IndexSet::new(vec![1, 3]).unwrap();
        assert_eq!(
            i3.submatrix(&s, &bad).unwrap_err(),
            LinalgError::IndexOutOfBounds { index: 3, bound: 3 }
        );
    }

    #[test]
    fn index_sets_must_increase() {
        assert_eq!(
            IndexSet::new(vec![2, 1]).unwrap_err(),
            LinalgError::UnsortedIndexSet
        );
        assert_eq!(
            IndexSet::new(vec![1, 1]).unwrap_err(),
            LinalgError::UnsortedIndexSet
        );
        assert!(IndexSet::new(vec![]).unwrap().is_empty());
    }

    #[test]
    fn mat_vec_dimension_check() {
        let f = gf(3, 1);
        let m = ExactMatrix::identity(&f, 2);
        assert!(matches!(
            m.mat_vec(&[f.one()]),
            Err(LinalgError::DimensionMismatch {
                expected: 2,
                found: 1
            })
        ));
        let v = vec![f.from_u64(2), f.one()];
        assert_eq!(m.mat_vec(&v).unwrap(), v);
    }

    #[test]
    fn kernel_vector_of_dependent_columns() {
        let f = gf(3, 1);
        let m = ExactMatrix::from_rows(
            &f,
            vec![
                vec![f.from_u64(1), f.from_u64(2), f.from_u64(0)],
                vec![f.from_u64(2), f.from_u64(1), f.from_u64(1)],
            ],
        )
        .unwrap();
        let x = m.kernel_vector().unwrap();
        assert!(weight(&x) > 0);
        assert_eq!(weight(&m.mat_vec(&x).unwrap()), 0);
        assert_eq!(ExactMatrix::identity(&f, 3).kernel_vector(), None);
    }
}

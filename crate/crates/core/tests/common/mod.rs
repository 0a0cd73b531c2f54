//! Independent oracles shared by the integration tests and the acceptance
//! suite. Everything here works from definitions (Leibniz expansion, full
//! enumeration) and does not call the library's elimination or matching code.

#![allow(dead_code)]

use itertools::Itertools;
use optcode::exactla::ExactMatrix;
use optcode::gf::{Field, FieldElement};
use optcode::rng::SplitMix64;

/// Parity of a permutation by counting inversions.
pub fn is_odd(sigma: &[usize]) -> bool {
    let mut inversions = 0;
    for i in 0..sigma.len() {
        for j in i + 1..sigma.len() {
            if sigma[i] > sigma[j] {
                inversions += 1;
            }
        }
    }
    inversions % 2 == 1
}

/// Determinant of the submatrix by the Leibniz formula.
pub fn leibniz_minor(m: &ExactMatrix, rows: &[usize], cols: &[usize]) -> FieldElement {
    let f = m.field();
    let order = rows.len();
    let mut acc = f.zero();
    for sigma in (0..order).permutations(order) {
        let mut term = f.one();
        for (i, &s) in sigma.iter().enumerate() {
            term = f.mul(&term, m.get(rows[i], cols[s]));
        }
        acc = if is_odd(&sigma) {
            f.sub(&acc, &term)
        } else {
            f.add(&acc, &term)
        };
    }
    acc
}

pub fn leibniz_det(m: &ExactMatrix) -> FieldElement {
    let idx: Vec<usize> = (0..m.rows()).collect();
    leibniz_minor(m, &idx, &idx)
}

/// Whether every Leibniz term of the grid hits a zero cell.
pub fn brute_trivial(grid: &[Vec<bool>]) -> bool {
    let m = grid.len();
    !(0..m)
        .permutations(m)
        .any(|sigma| sigma.iter().enumerate().all(|(i, &s)| grid[i][s]))
}

/// Superregularity from the definition: every minor with a term free of
/// zeros must have a nonzero Leibniz determinant.
pub fn brute_superregular(m: &ExactMatrix) -> bool {
    for order in 1..=m.rows().min(m.cols()) {
        for rows in (0..m.rows()).combinations(order) {
            for cols in (0..m.cols()).combinations(order) {
                let grid: Vec<Vec<bool>> = rows
                    .iter()
                    .map(|&r| cols.iter().map(|&c| !m.get(r, c).is_zero()).collect())
                    .collect();
                if !brute_trivial(&grid) && leibniz_minor(m, &rows, &cols).is_zero() {
                    return false;
                }
            }
        }
    }
    true
}

/// Matrix with independent uniform entries (zero included).
pub fn random_matrix(f: &Field, rows: usize, cols: usize, rng: &mut SplitMix64) -> ExactMatrix {
    let q = f.size().expect("small field");
    ExactMatrix::from_fn(f, rows, cols, |_, _| {
        f.element_from_index(rng.below(q)).unwrap()
    })
}

/// Matrix whose entries are zero with probability `zero_pct` percent and
/// uniform nonzero otherwise.
pub fn random_sparse_matrix(
    f: &Field,
    rows: usize,
    cols: usize,
    zero_pct: u64,
    rng: &mut SplitMix64,
) -> ExactMatrix {
    ExactMatrix::from_fn(f, rows, cols, |_, _| {
        if rng.below(100) < zero_pct {
            f.zero()
        } else {
            rng.nonzero_element(f)
        }
    })
}

/// Polynomial product `Σ_i G_i z^i · Σ_j u_j z^j` computed entrywise.
pub fn poly_product(
    f: &Field,
    g: &[ExactMatrix],
    u: &[Vec<FieldElement>],
) -> Vec<Vec<FieldElement>> {
    let n = g[0].rows();
    let len = g.len() + u.len() - 1;
    let mut v = vec![vec![f.zero(); n]; len];
    for (i, gi) in g.iter().enumerate() {
        for (j, uj) in u.iter().enumerate() {
            for (r, out) in v[i + j].iter_mut().enumerate() {
                for (c, ujc) in uj.iter().enumerate() {
                    *out = f.add(out, &f.mul(gi.get(r, c), ujc));
                }
            }
        }
    }
    v
}

fn exponent_grid(rows: &[&[Option<u32>]]) -> optcode::construct::ExponentPattern {
    use num_bigint::BigUint;
    let grid = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|c| c.map(|e| BigUint::from(1u32) << e))
                .collect()
        })
        .collect();
    optcode::construct::ExponentPattern::from_rows(grid).unwrap()
}

/// The 6x6 matrix `E` with entries `α^(2^e)`; `None` marks a zero.
pub fn example_two() -> optcode::construct::ExponentPattern {
    exponent_grid(&[
        &[None, None, Some(2), Some(3), Some(4), Some(5)],
        &[Some(0), Some(1), Some(3), Some(4), Some(5), Some(6)],
        &[Some(1), Some(2), Some(4), Some(5), Some(6), Some(7)],
        &[Some(2), None, Some(5), Some(6), Some(7), Some(8)],
        &[None, None, Some(6), Some(7), None, Some(9)],
        &[None, None, Some(7), Some(8), None, None],
    ])
}

/// The 7x7 matrix `A` with entries `α^(2^e)`; `None` marks a zero.
pub fn example_three() -> optcode::construct::ExponentPattern {
    exponent_grid(&[
        &[None, None, None, Some(3), Some(4), Some(12), Some(13)],
        &[None, None, None, Some(6), Some(7), Some(15), Some(16)],
        &[None, Some(0), Some(1), Some(9), Some(10), Some(18), None],
        &[None, Some(3), Some(4), Some(12), Some(13), Some(21), None],
        &[None, Some(6), Some(7), Some(15), Some(16), Some(24), None],
        &[Some(1), Some(9), Some(10), Some(18), None, None, None],
        &[Some(4), Some(12), Some(13), Some(21), None, None, None],
    ])
}

/// The permutation `σ = (6, 7, 5, 3, 2, 4, 1)` used with [`example_three`],
/// 0-based.
pub const EXAMPLE_THREE_SIGMA: [usize; 7] = [5, 6, 4, 2, 1, 3, 0];

/// Every code spec with `n <= max_n`, `k < n` and indices drawn from
/// `0..=max_index`.
pub fn all_specs(max_n: usize, max_index: usize) -> Vec<optcode::convcode::CodeSpec> {
    let mut out = Vec::new();
    for n in 2..=max_n {
        for k in 1..n {
            for l in 1..=k.min(max_index + 1) {
                for indices in (0..=max_index).combinations(l) {
                    for mults in compositions(k, l) {
                        out.push(
                            optcode::convcode::CodeSpec::new(n, k, indices.clone(), mults).unwrap(),
                        );
                    }
                }
            }
        }
    }
    out
}

/// Ordered ways to write `total` as `parts` positive integers.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    (1..=total - (parts - 1))
        .flat_map(|first| {
            compositions(total - first, parts - 1)
                .into_iter()
                .map(move |mut rest| {
                    rest.insert(0, first);
                    rest
                })
        })
        .collect()
}

/// Random pattern satisfying the zero-propagation and doubling conditions.
///
/// Row `i` gets a prefix of `a_i` zeros and column `j` a suffix of `b_j`
/// zeros; every such zero has only zeros to its left or only zeros below.
/// Exponents are assigned in row-major order as at least twice the nearest
/// nonzero exponent to the left and above, plus a random slack of 0 or 1.
pub fn random_valid_pattern(
    rows: usize,
    cols: usize,
    rng: &mut SplitMix64,
) -> optcode::construct::ExponentPattern {
    use num_bigint::BigUint;
    let prefix: Vec<usize> = (0..rows)
        .map(|_| (rng.below(cols as u64 + 1) / 2) as usize)
        .collect();
    let suffix: Vec<usize> = (0..cols)
        .map(|_| (rng.below(rows as u64 + 1) / 2) as usize)
        .collect();
    let mut cells: Vec<Option<BigUint>> = vec![None; rows * cols];
    for i in 0..rows {
        for j in 0..cols {
            if j < prefix[i] || i + suffix[j] >= rows {
                continue;
            }
            let left = (0..j).rev().find_map(|c| cells[i * cols + c].clone());
            let above = (0..i).rev().find_map(|r| cells[r * cols + j].clone());
            let floor = [left, above]
                .into_iter()
                .flatten()
                .map(|b| b << 1u32)
                .max()
                .unwrap_or_else(|| BigUint::from(1u32));
            cells[i * cols + j] = Some(floor + rng.below(2));
        }
    }
    optcode::construct::ExponentPattern::new(rows, cols, cells).unwrap()
}

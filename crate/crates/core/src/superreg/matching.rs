//! Maximum bipartite matching by augmenting paths (Kuhn's algorithm).
//!
//! Rows are the left side, columns the right side; an edge is a structurally
//! nonzero cell.

/// Size of a maximum matching between `rows` and `cols` through cells for
/// which `edge(row, col)` holds; `edge` receives the slice values, not their
/// positions.
pub fn maximum_matching(
    rows: &[usize],
    cols: &[usize],
    edge: impl Fn(usize, usize) -> bool,
) -> usize {
    let adj: Vec<Vec<usize>> = rows
        .iter()
        .map(|&r| {
            cols.iter()
                .enumerate()
                .filter(|&(_, &c)| edge(r, c))
                .map(|(j, _)| j)
                .collect()
        })
        .collect();
    let mut col_match: Vec<Option<usize>> = vec![None; cols.len()];
    let mut size = 0;
    for r in 0..rows.len() {
        let mut visited = vec![false; cols.len()];
        if augment(r, &adj, &mut col_match, &mut visited) {
            size += 1;
        }
    }
    size
}

fn augment(
    r: usize,
    adj: &[Vec<usize>],
    col_match: &mut [Option<usize>],
    visited: &mut [bool],
) -> bool {
    for &c in &adj[r] {
        if visited[c] {
            continue;
        }
        visited[c] = true;
        match col_match[c] {
            None => {
                col_match[c] = Some(r);
                return true;
            }
            Some(other) => {
                if augment(other, adj, col_match, visited) {
                    col_match[c] = Some(r);
                    return true;
                }
            }
        }
    }
    false
}

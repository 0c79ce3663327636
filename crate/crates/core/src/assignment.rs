//! Minimum-cost one-to-one assignment (Jonker-Volgenant style Hungarian).
//!
//! `solve` finds the exact optimum for dense square or wide matrices in
//! O(n^2 m). `solve_with_skips` wraps it for the partial-assignment setting
//! used by the matchers: every row/column may instead pay its skip cost.

use ndarray::Array2;

/// Sentinel for pairings that must never be chosen. Real costs have to stay
/// well below this.
pub const FORBIDDEN: f64 = 1e12;

/// An optimal assignment: `pairs[k] = (row, col)` and the summed cost.
#[derive(Debug, Clone, PartialEq)]
pub struct Assignment {
    pub pairs: Vec<(usize, usize)>,
    pub total_cost: f64,
}

/// Solves the min-cost complete assignment of rows to columns.
///
/// Requires `rows <= cols`; every row is assigned to a distinct column.
/// Results are exact for finite inputs (potentials-based shortest augmenting
/// paths, no floating-point thresholds involved in optimality).
pub fn solve(cost: &Array2<f64>) -> Assignment {
    let (n, m) = (cost.nrows(), cost.ncols());
    assert!(n <= m, "assignment needs rows <= cols, got {n}x{m}");
    if n == 0 {
        return Assignment {
            pairs: Vec::new(),
            total_cost: 0.0,
        };
    }
    // 1-indexed potentials; p[j] = row matched to column j (0 = none).
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; m + 1];
    let mut p = vec![0usize; m + 1];
    let mut way = vec![0usize; m + 1];

    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![f64::INFINITY; m + 1];
        let mut used = vec![false; m + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=m {
                if used[j] {
                    continue;
                }
                let cur = cost[(i0 - 1, j - 1)] - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=m {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut pairs = Vec::with_capacity(n);
    let mut total = 0.0;
    for j in 1..=m {
        if p[j] != 0 {
            pairs.push((p[j] - 1, j - 1));
            total += cost[(p[j] - 1, j - 1)];
        }
    }
    pairs.sort_unstable();
    Assignment {
        pairs,
        total_cost: total,
    }
}

/// One-to-one assignment where rows and columns may stay unassigned.
///
/// Pairing row `i` with column `j` costs `cost[(i, j)]`; leaving row `i`
/// unassigned costs `row_skip[i]`, and column `j` unassigned `col_skip[j]`.
/// Entries at or above [`FORBIDDEN`] are never paired. Returns the real
/// (row, col) pairs of the optimal solution.
pub fn solve_with_skips(
    cost: &Array2<f64>,
    row_skip: &[f64],
    col_skip: &[f64],
) -> Vec<(usize, usize)> {
    let (n, m) = (cost.nrows(), cost.ncols());
    assert_eq!(row_skip.len(), n);
    assert_eq!(col_skip.len(), m);
    if n == 0 && m == 0 {
        return Vec::new();
    }
    let size = n + m;
    let mut padded = Array2::from_elem((size, size), FORBIDDEN);
    for i in 0..n {
        for j in 0..m {
            padded[(i, j)] = cost[(i, j)];
        }
        padded[(i, m + i)] = row_skip[i];
    }
    for j in 0..m {
        padded[(n + j, j)] = col_skip[j];
    }
    for j in 0..m {
        for i in 0..n {
            padded[(n + j, m + i)] = 0.0;
        }
    }
    solve(&padded)
        .pairs
        .into_iter()
        .filter(|&(i, j)| i < n && j < m)
        .collect()
}

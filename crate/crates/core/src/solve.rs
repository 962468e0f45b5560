//! Exact Gaussian elimination over rationals for small dense systems.

use crate::ratio::{rational, Rational};

/// Outcome of solving `A·x = b` exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solution {
    Unique(Vec<Rational>),
    /// No solution; `row` is the 0-based index of an original equation that
    /// reduces to `0 = nonzero`.
    Inconsistent { row: usize },
    Underdetermined,
}

/// Solve an m×n system with exact rational arithmetic.
///
/// Rows may exceed unknowns; consistency of the redundant equations is
/// checked rather than assumed.
pub fn solve_exact(a: &[Vec<Rational>], b: &[Rational]) -> Solution {
    let m = a.len();
    assert_eq!(m, b.len(), "matrix and rhs row counts differ");
    let n = if m == 0 { 0 } else { a[0].len() };

    // Augmented rows tagged with their original index.
    let mut rows: Vec<(Vec<Rational>, Rational, usize)> = a
        .iter()
        .zip(b)
        .enumerate()
        .map(|(i, (row, rhs))| {
            assert_eq!(row.len(), n, "ragged matrix");
            (row.clone(), *rhs, i)
        })
        .collect();

    let zero = rational(0, 1);
    let mut pivot_row = 0;
    let mut pivot_cols = Vec::new();
    for col in 0..n {
        let Some(found) = (pivot_row..m).find(|r| rows[*r].0[col] != zero) else {
            continue;
        };
        rows.swap(pivot_row, found);
        let (pivot_coeffs, pivot_rhs) = (rows[pivot_row].0.clone(), rows[pivot_row].1);
        let p = pivot_coeffs[col];
        for (r, row) in rows.iter_mut().enumerate() {
            if r == pivot_row || row.0[col] == zero {
                continue;
            }
            let factor = row.0[col] / p;
            for (x, px) in row.0.iter_mut().zip(&pivot_coeffs) {
                *x -= factor * *px;
            }
            row.1 -= factor * pivot_rhs;
        }
        pivot_cols.push((pivot_row, col));
        pivot_row += 1;
        if pivot_row == m {
            break;
        }
    }

    // Any remaining row must be identically zero.
    for row in &rows[pivot_row..] {
        if row.1 != zero {
            return Solution::Inconsistent { row: row.2 };
        }
    }
    if pivot_cols.len() < n {
        return Solution::Underdetermined;
    }

    let mut x = vec![zero; n];
    for (r, col) in pivot_cols {
        x[col] = rows[r].1 / rows[r].0[col];
    }
    Solution::Unique(x)
}

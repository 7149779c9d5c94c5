//! Exact linear solving over the rationals (dense Gaussian elimination).

use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::Q;

pub struct LinearSolution {
    pub particular: Vec<Q>,
    pub nullspace: Vec<Vec<Q>>,
}

/// Solves `A x = b`; returns `None` when inconsistent. The nullspace basis
/// spans all homogeneous solutions.
pub fn solve(mut a: Vec<Vec<Q>>, mut b: Vec<Q>) -> Option<LinearSolution> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; cols];
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(row, p);
        b.swap(row, p);
        let inv = a[row][col].recip();
        for c in col..cols {
            a[row][c] = &a[row][c] * &inv;
        }
        b[row] = &b[row] * &inv;
        for r in 0..rows {
            if r == row || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for c in col..cols {
                let t = &a[row][c] * &factor;
                a[r][c] = &a[r][c] - t;
            }
            let t = &b[row] * &factor;
            b[r] = &b[r] - t;
        }
        pivot_of_col[col] = Some(row);
        row += 1;
        if row == rows {
            break;
        }
    }
    // Any leftover nonzero rhs makes the system inconsistent.
    for r in row..rows {
        if !b[r].is_zero() {
            return None;
        }
    }
    let mut particular = vec![Q::zero(); cols];
    for (col, piv) in pivot_of_col.iter().enumerate() {
        if let Some(r) = piv {
            particular[col] = b[*r].clone();
        }
    }
    let mut nullspace = Vec::new();
    for free in 0..cols {
        if pivot_of_col[free].is_some() {
            continue;
        }
        let mut v = vec![Q::zero(); cols];
        v[free] = Q::from_integer(1.into());
        for (col, piv) in pivot_of_col.iter().enumerate() {
            if let Some(r) = piv {
                v[col] = -a[*r][free].clone();
            }
        }
        nullspace.push(v);
    }
    Some(LinearSolution {
        particular,
        nullspace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qi;

    #[test]
    fn solve_with_nullspace() {
        // x + y = 2 has a one-dimensional solution family.
        let sol = solve(vec![vec![qi(1), qi(1)]], vec![qi(2)]).unwrap();
        assert_eq!(&sol.particular[0] + &sol.particular[1], qi(2));
        assert_eq!(sol.nullspace.len(), 1);
        assert_eq!(&sol.nullspace[0][0] + &sol.nullspace[0][1], qi(0));
        // Inconsistent system.
        assert!(solve(vec![vec![qi(0), qi(0)]], vec![qi(1)]).is_none());
    }
}

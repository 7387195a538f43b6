//! Exact dense linear algebra over rationals.

use num_traits::{One, Zero};

use crate::scalar::Rational;

/// Determinant by Gaussian elimination with exact pivoting.
pub fn determinant(mut rows: Vec<Vec<Rational>>) -> Rational {
    let n = rows.len();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !rows[r][col].is_zero()) else {
            return Rational::zero();
        };
        if pivot != col {
            rows.swap(pivot, col);
            det = -det;
        }
        let pivot_row = rows[col].clone();
        det *= &pivot_row[col];
        for row in rows[col + 1..].iter_mut() {
            if row[col].is_zero() {
                continue;
            }
            let factor = &row[col] / &pivot_row[col];
            for (x, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *x -= &factor * p;
            }
        }
    }
    det
}

#[derive(Debug, Clone, PartialEq)]
pub enum Solution {
    Unique(Vec<Rational>),
    /// Consistent but underdetermined; carries the basic solution with every
    /// free variable set to zero.
    Many(Vec<Rational>),
    Inconsistent,
}

/// Solves `a x = b` by reduction to row echelon form.
pub fn solve(a: &[Vec<Rational>], b: &[Rational]) -> Solution {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = Rational::one() / &m[r][c];
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let factor = row[c].clone();
                for (x, p) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                    *x -= &factor * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    if m[r..].iter().any(|row| !row[cols].is_zero()) {
        return Solution::Inconsistent;
    }
    let mut x = vec![Rational::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = m[i][cols].clone();
    }
    if pivots.len() == cols {
        Solution::Unique(x)
    } else {
        Solution::Many(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    fn mat(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter()
            .map(|r| r.iter().map(|&v| int(v)).collect())
            .collect()
    }

    #[test]
    fn determinants() {
        assert_eq!(determinant(mat(&[&[2, 0], &[0, 3]])), int(6));
        assert_eq!(determinant(mat(&[&[0, 1], &[1, 0]])), int(-1));
        assert_eq!(determinant(mat(&[&[1, 2], &[2, 4]])), int(0));
        assert_eq!(
            determinant(mat(&[&[2, -3, 1], &[2, 0, -1], &[1, 4, 5]])),
            int(49)
        );
        assert_eq!(determinant(vec![]), int(1));
    }

    #[test]
    fn solves() {
        let a = mat(&[&[1, 1], &[1, -1]]);
        assert_eq!(
            solve(&a, &[int(1), int(0)]),
            Solution::Unique(vec![ratio(1, 2), ratio(1, 2)])
        );
        let a = mat(&[&[1, 1], &[2, 2]]);
        assert_eq!(
            solve(&a, &[int(1), int(2)]),
            Solution::Many(vec![int(1), int(0)])
        );
        assert_eq!(solve(&a, &[int(1), int(3)]), Solution::Inconsistent);
        let tall = mat(&[&[1], &[2], &[3]]);
        assert_eq!(
            solve(&tall, &[int(2), int(4), int(6)]),
            Solution::Unique(vec![int(2)])
        );
        assert_eq!(
            solve(&tall, &[int(2), int(4), int(7)]),
            Solution::Inconsistent
        );
    }
}

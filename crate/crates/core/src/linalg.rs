//! Exact Gaussian elimination over the rationals.

use num_rational::BigRational;
use num_traits::Zero;

#[derive(Debug, PartialEq, Eq)]
pub(crate) enum Solution {
    Unique(Vec<BigRational>),
    Inconsistent,
    Underdetermined,
}

/// Solve `Σ_c x_c · columns[c] = rhs`.
#[allow(clippy::needless_range_loop)]
pub(crate) fn solve_columns(columns: &[Vec<BigRational>], rhs: &[BigRational]) -> Solution {
    let n = columns.len();
    let m = rhs.len();
    debug_assert!(columns.iter().all(|c| c.len() == m));
    let mut rows: Vec<Vec<BigRational>> = (0..m)
        .map(|i| {
            let mut row: Vec<BigRational> = columns.iter().map(|c| c[i].clone()).collect();
            row.push(rhs[i].clone());
            row
        })
        .collect();

    let mut pivots = Vec::with_capacity(n);
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..m).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for v in rows[r][c..].iter_mut() {
            *v *= &inv;
        }
        for i in 0..m {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for t in c..=n {
                    let delta = &f * &rows[r][t];
                    rows[i][t] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m {
            break;
        }
    }
    if rows[r..].iter().any(|row| !row[n].is_zero()) {
        return Solution::Inconsistent;
    }
    if pivots.len() < n {
        return Solution::Underdetermined;
    }
    Solution::Unique(rows[..n].iter().map(|row| row[n].clone()).collect())
}

/// Rank of the matrix with the given columns.
#[cfg(test)]
#[allow(clippy::needless_range_loop)]
pub(crate) fn rank(columns: &[Vec<BigRational>]) -> usize {
    let m = columns.first().map_or(0, Vec::len);
    let mut rows: Vec<Vec<BigRational>> = (0..m)
        .map(|i| columns.iter().map(|c| c[i].clone()).collect())
        .collect();
    let mut r = 0;
    for c in 0..columns.len() {
        let Some(p) = (r..m).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        for i in r + 1..m {
            if !rows[i][c].is_zero() {
                let f = &rows[i][c] / &rows[r][c];
                for t in c..columns.len() {
                    let delta = &f * &rows[r][t];
                    rows[i][t] -= delta;
                }
            }
        }
        r += 1;
        if r == m {
            break;
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn col(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| rat(x, 1)).collect()
    }

    #[test]
    fn unique_and_inconsistent() {
        let cols = [col(&[1, 1, -1]), col(&[0, 1, 1])];
        assert_eq!(
            solve_columns(&cols, &col(&[2, 5, 1])),
            Solution::Unique(vec![rat(2, 1), rat(3, 1)])
        );
        assert_eq!(
            solve_columns(&cols, &col(&[1, 0, 0])),
            Solution::Inconsistent
        );
        let dep = [col(&[1, 2]), col(&[2, 4])];
        assert_eq!(
            solve_columns(&dep, &col(&[1, 2])),
            Solution::Underdetermined
        );
        assert_eq!(rank(&dep), 1);
        assert_eq!(rank(&cols), 2);
    }
}

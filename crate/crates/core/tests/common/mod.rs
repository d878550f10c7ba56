//! Independent exact oracles: textbook Gaussian elimination over rationals,
//! built only from the system's public entry accessors.

#![allow(dead_code)]

use hcp_core::PolytopeSystem;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// Rank of the listed columns of an exact system.
pub fn column_rank(sys: &PolytopeSystem, cols: &[usize]) -> usize {
    let mut a: Vec<Vec<BigRational>> = (0..sys.rows())
        .map(|r| cols.iter().map(|&c| sys.exact_entry(r, c).unwrap()).collect())
        .collect();
    let (rows, width) = (a.len(), cols.len());
    let mut rank = 0;
    for c in 0..width {
        let Some(p) = (rank..rows).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for r in 0..rows {
            if r != rank && !a[r][c].is_zero() {
                let f = &a[r][c] / &a[rank][c];
                for k in c..width {
                    let d = &f * &a[rank][k];
                    a[r][k] -= d;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// `Some(x)` if the square basis matrix is nonsingular, with `A_B x = b`.
pub fn solve(sys: &PolytopeSystem, cols: &[usize]) -> Option<Vec<BigRational>> {
    let m = sys.rows();
    assert_eq!(cols.len(), m);
    let mut a: Vec<Vec<BigRational>> = (0..m)
        .map(|r| {
            let mut row: Vec<BigRational> = cols.iter().map(|&c| sys.exact_entry(r, c).unwrap()).collect();
            row.push(sys.exact_rhs(r).unwrap());
            row
        })
        .collect();
    for c in 0..m {
        let p = (c..m).find(|&r| !a[r][c].is_zero())?;
        a.swap(c, p);
        let piv = a[c][c].clone();
        for k in c..=m {
            a[c][k] = &a[c][k] / &piv;
        }
        for r in 0..m {
            if r != c && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                for k in c..=m {
                    let d = &f * &a[c][k];
                    a[r][k] -= d;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[m].clone()).collect())
}

/// B1 and B2: nonsingular with a nonnegative solution.
pub fn feasible(sys: &PolytopeSystem, cols: &[usize]) -> bool {
    solve(sys, cols).is_some_and(|x| x.iter().all(|v| !v.is_negative()))
}

/// Exact `β^k` for `β = p/q`.
pub fn beta_pow(p: u64, q: u64, k: u32) -> BigRational {
    let b = BigRational::new(p.into(), q.into());
    (0..k).fold(BigRational::from_integer(1.into()), |acc, _| acc * &b)
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut idx: Option<Vec<usize>> = (k <= n).then(|| (0..k).collect());
    std::iter::from_fn(move || {
        let cur = idx.clone()?;
        let mut next = cur.clone();
        let mut i = k;
        loop {
            if i == 0 {
                idx = None;
                break;
            }
            i -= 1;
            if next[i] < n - k + i {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                idx = Some(next);
                break;
            }
        }
        Some(cur)
    })
}

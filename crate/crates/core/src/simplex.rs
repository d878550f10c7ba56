//! Dense-tableau phase-1 simplex used to find a starting basis.

use crate::basis::BasisError;
use crate::linalg;
use crate::scalar::Scalar;

fn magnitude<T: Scalar>(v: &T) -> f64 {
    v.to_f64().abs()
}

/// Run phase 1 on `A x = b, x >= 0` (`b >= 0`) with one artificial per row.
///
/// Entering and leaving choices follow Bland's rule under the variable order
/// `priority` (a permutation of the structural columns; artificials rank last).
/// Returns the structural columns of a feasible basis, in row order.
pub(crate) fn phase_one<T: Scalar>(
    a: &[Vec<T>],
    b: &[T],
    priority: &[usize],
    tol: f64,
) -> Result<Vec<usize>, BasisError> {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let width = n + m + 1;
    let rhs = n + m;
    let mut rank = vec![0usize; n + m];
    for (k, &c) in priority.iter().enumerate() {
        rank[c] = k;
    }
    for k in 0..m {
        rank[n + k] = n + k;
    }

    let mut t: Vec<Vec<T>> = Vec::with_capacity(m);
    for r in 0..m {
        let mut row = Vec::with_capacity(width);
        let flip = b[r] < T::zero();
        for v in &a[r] {
            row.push(if flip { -v.clone() } else { v.clone() });
        }
        for k in 0..m {
            row.push(if k == r { T::one() } else { T::zero() });
        }
        row.push(if flip { -b[r].clone() } else { b[r].clone() });
        t.push(row);
    }
    // Reduced costs of the auxiliary objective (sum of artificials).
    let mut cost = vec![T::zero(); width];
    for row in &t {
        for j in 0..n {
            cost[j] = cost[j].clone() - row[j].clone();
        }
        cost[rhs] = cost[rhs].clone() - row[rhs].clone();
    }
    let mut basic: Vec<usize> = (n..n + m).collect();
    let mut is_basic = vec![false; n + m];
    for c in n..n + m {
        is_basic[c] = true;
    }
    let neg_tol = |v: &T| *v < T::zero() && !v.is_negligible(tol);

    loop {
        let entering = (0..n)
            .filter(|&j| !is_basic[j] && neg_tol(&cost[j]))
            .min_by_key(|&j| rank[j]);
        let Some(e) = entering else { break };
        let mut leave: Option<(usize, T)> = None;
        for r in 0..m {
            let d = &t[r][e];
            if !(*d > T::zero()) || d.is_negligible(tol) {
                continue;
            }
            let ratio = t[r][rhs].clone() / d.clone();
            leave = match leave {
                None => Some((r, ratio)),
                Some((lr, lv)) => {
                    let diff = ratio.clone() - lv.clone();
                    if diff.is_negligible(tol) {
                        if rank[basic[r]] < rank[basic[lr]] {
                            Some((r, ratio))
                        } else {
                            Some((lr, lv))
                        }
                    } else if ratio < lv {
                        Some((r, ratio))
                    } else {
                        Some((lr, lv))
                    }
                }
            };
        }
        let Some((r, _)) = leave else {
            return Err(BasisError::Numerical("phase-1 objective unbounded".into()));
        };
        pivot(&mut t, &mut cost, r, e);
        is_basic[basic[r]] = false;
        is_basic[e] = true;
        basic[r] = e;
    }

    // The auxiliary objective value is -cost[rhs].
    let residual = -cost[rhs].clone();
    if !residual.is_negligible(tol * (m as f64).max(1.0)) && residual > T::zero() {
        return Err(BasisError::Infeasible);
    }

    // Drive remaining (zero-valued) artificials out of the basis.
    for r in 0..m {
        if basic[r] < n {
            continue;
        }
        let mut best: Option<usize> = None;
        for j in 0..n {
            if is_basic[j] || t[r][j].is_negligible(tol) {
                continue;
            }
            best = match best {
                None => Some(j),
                Some(k) => {
                    let (mj, mk) = (magnitude(&t[r][j]), magnitude(&t[r][k]));
                    if mj > mk || (mj == mk && rank[j] < rank[k]) {
                        Some(j)
                    } else {
                        Some(k)
                    }
                }
            };
        }
        let Some(e) = best else {
            return Err(BasisError::RankDeficient);
        };
        pivot(&mut t, &mut cost, r, e);
        is_basic[basic[r]] = false;
        is_basic[e] = true;
        basic[r] = e;
    }
    Ok(basic)
}

fn pivot<T: Scalar>(t: &mut [Vec<T>], cost: &mut [T], r: usize, e: usize) {
    let width = t[r].len();
    let p = t[r][e].clone();
    for j in 0..width {
        if !t[r][j].is_zero() {
            t[r][j] = t[r][j].clone() / p.clone();
        }
    }
    let prow = t[r].clone();
    for (i, row) in t.iter_mut().enumerate() {
        if i == r || row[e].is_zero() {
            continue;
        }
        let f = row[e].clone();
        for j in 0..width {
            if !prow[j].is_zero() {
                row[j] = row[j].clone() - f.clone() * prow[j].clone();
            }
        }
    }
    if !cost[e].is_zero() {
        let f = cost[e].clone();
        for j in 0..width {
            if !prow[j].is_zero() {
                cost[j] = cost[j].clone() - f.clone() * prow[j].clone();
            }
        }
    }
}

/// Revised phase 1 for float systems given by sparse columns.
///
/// Keeps an explicit basis inverse that is rebuilt from scratch every few
/// pivots, and uses a two-pass ratio test that prefers large pivots among
/// near-ties (smallest priority rank breaks the remaining ties).
pub(crate) fn phase_one_float(
    columns: &[Vec<(usize, f64)>],
    b: &[f64],
    priority: &[usize],
    tol: f64,
) -> Result<Vec<usize>, BasisError> {
    const PIVOT_MIN: f64 = 1e-9;
    const REFRESH: usize = 32;
    let m = b.len();
    let n = columns.len();
    let mut rank = vec![0usize; n + m];
    for (k, &c) in priority.iter().enumerate() {
        rank[c] = k;
    }
    for k in 0..m {
        rank[n + k] = n + k;
    }
    let sign: Vec<f64> = b.iter().map(|&v| if v < 0.0 { -1.0 } else { 1.0 }).collect();
    let column = |c: usize, out: &mut [f64]| {
        out.iter_mut().for_each(|v| *v = 0.0);
        if c < n {
            for &(r, v) in &columns[c] {
                out[r] = v;
            }
        } else {
            out[c - n] = sign[c - n];
        }
    };
    let mut basic: Vec<usize> = (n..n + m).collect();
    let mut is_basic = vec![false; n + m];
    basic.iter().for_each(|&c| is_basic[c] = true);
    let mut binv = vec![0.0; m * m];
    let mut x = vec![0.0; m];
    let mut scratch = vec![0.0; m];

    let refresh = |basic: &[usize], binv: &mut Vec<f64>, x: &mut Vec<f64>, scratch: &mut [f64]| {
        let mut a = vec![0.0; m * m];
        for (k, &c) in basic.iter().enumerate() {
            column(c, scratch);
            for r in 0..m {
                a[r * m + k] = scratch[r];
            }
        }
        let inv = linalg::invert(a, m, 1e-12)
            .ok_or_else(|| BasisError::Numerical("phase-1 basis became singular".into()))?;
        for i in 0..m {
            x[i] = (0..m).map(|r| inv[i * m + r] * b[r]).sum();
        }
        *binv = inv;
        Ok::<(), BasisError>(())
    };
    let pivot = |r: usize, d: &[f64], binv: &mut [f64], x: &mut [f64]| {
        let dr = d[r];
        let theta = x[r] / dr;
        for j in 0..m {
            binv[r * m + j] /= dr;
        }
        for i in 0..m {
            if i == r || d[i] == 0.0 {
                continue;
            }
            for j in 0..m {
                binv[i * m + j] -= d[i] * binv[r * m + j];
            }
            x[i] -= theta * d[i];
        }
        x[r] = theta;
    };
    let direction = |c: usize, binv: &[f64], d: &mut [f64], scratch: &mut [f64]| {
        column(c, scratch);
        for i in 0..m {
            d[i] = (0..m).map(|r| binv[i * m + r] * scratch[r]).sum();
        }
    };

    refresh(&basic, &mut binv, &mut x, &mut scratch)?;
    let mut d = vec![0.0; m];
    let mut iterations = 0usize;
    let cap = 50 * (n + m);
    loop {
        if iterations.is_multiple_of(REFRESH) {
            refresh(&basic, &mut binv, &mut x, &mut scratch)?;
        }
        iterations += 1;
        if iterations > cap {
            return Err(BasisError::Numerical("phase-1 iteration limit".into()));
        }
        // Duals of the auxiliary objective (sum of artificials).
        let mut y = vec![0.0; m];
        for (k, &c) in basic.iter().enumerate() {
            if c >= n {
                for r in 0..m {
                    y[r] += binv[k * m + r];
                }
            }
        }
        let entering = (0..n)
            .filter(|&j| !is_basic[j])
            .filter(|&j| columns[j].iter().map(|&(r, v)| y[r] * v).sum::<f64>() > tol)
            .min_by_key(|&j| rank[j]);
        let Some(e) = entering else { break };
        direction(e, &binv, &mut d, &mut scratch);
        let mut bound = f64::INFINITY;
        for i in 0..m {
            if d[i] > PIVOT_MIN {
                bound = bound.min((x[i].max(0.0) + tol) / d[i]);
            }
        }
        if !bound.is_finite() {
            return Err(BasisError::Numerical("phase-1 objective unbounded".into()));
        }
        let candidates: Vec<usize> = (0..m)
            .filter(|&i| d[i] > PIVOT_MIN && x[i].max(0.0) / d[i] <= bound)
            .collect();
        let dmax = candidates.iter().map(|&i| d[i]).fold(0.0, f64::max);
        let r = candidates
            .into_iter()
            .filter(|&i| d[i] >= 0.1 * dmax)
            .min_by_key(|&i| rank[basic[i]])
            .expect("the largest pivot is a candidate");
        x[r] = x[r].max(0.0);
        pivot(r, &d, &mut binv, &mut x);
        is_basic[basic[r]] = false;
        is_basic[e] = true;
        basic[r] = e;
    }

    refresh(&basic, &mut binv, &mut x, &mut scratch)?;
    let residual: f64 = basic
        .iter()
        .zip(&x)
        .filter(|&(&c, _)| c >= n)
        .map(|(_, &v)| v)
        .sum();
    if residual > tol * (m as f64).max(1.0) {
        return Err(BasisError::Infeasible);
    }
    // Drive the remaining (zero-valued) artificials out.
    let mut row = vec![0.0; n];
    for r in 0..m {
        if basic[r] < n {
            continue;
        }
        for (j, col) in columns.iter().enumerate() {
            row[j] = if is_basic[j] {
                0.0
            } else {
                col.iter().map(|&(i, v)| binv[r * m + i] * v).sum()
            };
        }
        let best = (0..n)
            .filter(|&j| row[j].abs() > 1e-7)
            .max_by(|&j, &k| row[j].abs().total_cmp(&row[k].abs()).then(rank[k].cmp(&rank[j])));
        let Some(e) = best else {
            return Err(BasisError::RankDeficient);
        };
        direction(e, &binv, &mut d, &mut scratch);
        x[r] = 0.0;
        pivot(r, &d, &mut binv, &mut x);
        is_basic[basic[r]] = false;
        is_basic[e] = true;
        basic[r] = e;
    }
    Ok(basic)
}

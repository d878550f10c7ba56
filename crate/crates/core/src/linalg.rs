//! Small dense kernels: fraction-free elimination over the integers and
//! partial-pivoting LU over `f64`.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// Solution of an integer system `M y = c` as `y_k = num_k / det`.
#[derive(Clone, Debug, PartialEq)]
pub(crate) enum IntSolution<T> {
    Singular,
    Solved { num: Vec<T>, det: T },
}

impl IntSolution<i128> {
    pub(crate) fn widen(self) -> IntSolution<BigInt> {
        match self {
            IntSolution::Singular => IntSolution::Singular,
            IntSolution::Solved { num, det } => IntSolution::Solved {
                num: num.into_iter().map(BigInt::from).collect(),
                det: BigInt::from(det),
            },
        }
    }
}

/// Bareiss elimination on the augmented `m × (m+1)` row-major matrix, with
/// checked `i128` arithmetic. `None` signals overflow.
pub(crate) fn bareiss_i128(aug: &mut [i128], m: usize) -> Option<IntSolution<i128>> {
    let w = m + 1;
    let mut prev: i128 = 1;
    for k in 0..m {
        let p = match (k..m).find(|&r| aug[r * w + k] != 0) {
            Some(p) => p,
            None => return Some(IntSolution::Singular),
        };
        if p != k {
            for j in k..w {
                aug.swap(k * w + j, p * w + j);
            }
        }
        let akk = aug[k * w + k];
        for i in k + 1..m {
            let aik = aug[i * w + k];
            for j in k + 1..w {
                let akj = aug[k * w + j];
                let aij = aug[i * w + j];
                let t = akk.checked_mul(aij)?.checked_sub(aik.checked_mul(akj)?)?;
                aug[i * w + j] = t / prev;
            }
            aug[i * w + k] = 0;
        }
        prev = akk;
    }
    let det = prev;
    let mut num = vec![0i128; m];
    for k in (0..m).rev() {
        let mut acc = det.checked_mul(aug[k * w + m])?;
        for j in k + 1..m {
            acc = acc.checked_sub(aug[k * w + j].checked_mul(num[j])?)?;
        }
        num[k] = acc / aug[k * w + k];
    }
    Some(IntSolution::Solved { num, det })
}

/// Arbitrary-precision twin of [`bareiss_i128`].
pub(crate) fn bareiss_big(mut aug: Vec<BigInt>, m: usize) -> IntSolution<BigInt> {
    let w = m + 1;
    let mut prev = BigInt::from(1);
    for k in 0..m {
        let p = match (k..m).find(|&r| !aug[r * w + k].is_zero()) {
            Some(p) => p,
            None => return IntSolution::Singular,
        };
        if p != k {
            for j in k..w {
                aug.swap(k * w + j, p * w + j);
            }
        }
        for i in k + 1..m {
            if aug[i * w + k].is_zero() {
                // Row is unaffected apart from the scaling by akk / prev.
                for j in k + 1..w {
                    let t = &aug[k * w + k] * &aug[i * w + j];
                    aug[i * w + j] = t / &prev;
                }
                continue;
            }
            for j in k + 1..w {
                let t = &aug[k * w + k] * &aug[i * w + j] - &aug[i * w + k] * &aug[k * w + j];
                aug[i * w + j] = t / &prev;
            }
            aug[i * w + k] = BigInt::zero();
        }
        prev = aug[k * w + k].clone();
    }
    let det = prev;
    let mut num = vec![BigInt::zero(); m];
    for k in (0..m).rev() {
        let mut acc = &det * &aug[k * w + m];
        for j in k + 1..m {
            acc -= &aug[k * w + j] * &num[j];
        }
        num[k] = acc / &aug[k * w + k];
    }
    IntSolution::Solved { num, det }
}

/// Sign test on a solved integer system: every `num_k / det >= 0`.
pub(crate) fn nonnegative<T: Signed>(num: &[T], det: &T) -> bool {
    if det.is_negative() {
        num.iter().all(|v| !v.is_positive())
    } else {
        num.iter().all(|v| !v.is_negative())
    }
}

/// Solve `A x = b` for a dense `m × m` row-major `a` by LU with partial
/// pivoting. `None` when some pivot falls below `pivot_tol` in magnitude.
pub fn lu_solve(mut a: Vec<f64>, mut b: Vec<f64>, m: usize, pivot_tol: f64) -> Option<Vec<f64>> {
    for k in 0..m {
        let p = (k..m)
            .max_by(|&r, &s| a[r * m + k].abs().total_cmp(&a[s * m + k].abs()))
            .unwrap();
        if a[p * m + k].abs() < pivot_tol {
            return None;
        }
        if p != k {
            for j in 0..m {
                a.swap(k * m + j, p * m + j);
            }
            b.swap(k, p);
        }
        let akk = a[k * m + k];
        for i in k + 1..m {
            let f = a[i * m + k] / akk;
            if f == 0.0 {
                continue;
            }
            for j in k + 1..m {
                a[i * m + j] -= f * a[k * m + j];
            }
            b[i] -= f * b[k];
        }
    }
    for k in (0..m).rev() {
        let mut acc = b[k];
        for j in k + 1..m {
            acc -= a[k * m + j] * b[j];
        }
        b[k] = acc / a[k * m + k];
    }
    Some(b)
}

/// Inverse of a dense `m × m` matrix by Gauss–Jordan with partial pivoting.
pub fn invert(mut a: Vec<f64>, m: usize, pivot_tol: f64) -> Option<Vec<f64>> {
    let mut inv = vec![0.0; m * m];
    for i in 0..m {
        inv[i * m + i] = 1.0;
    }
    for k in 0..m {
        let p = (k..m)
            .max_by(|&r, &s| a[r * m + k].abs().total_cmp(&a[s * m + k].abs()))
            .unwrap();
        if a[p * m + k].abs() < pivot_tol {
            return None;
        }
        if p != k {
            for j in 0..m {
                a.swap(k * m + j, p * m + j);
                inv.swap(k * m + j, p * m + j);
            }
        }
        let akk = a[k * m + k];
        for j in 0..m {
            a[k * m + j] /= akk;
            inv[k * m + j] /= akk;
        }
        for i in 0..m {
            if i == k {
                continue;
            }
            let f = a[i * m + k];
            if f == 0.0 {
                continue;
            }
            for j in 0..m {
                a[i * m + j] -= f * a[k * m + j];
                inv[i * m + j] -= f * inv[k * m + j];
            }
        }
    }
    Some(inv)
}

/// Numerical rank of a dense `rows × cols` row-major matrix.
pub fn rank(mut a: Vec<f64>, rows: usize, cols: usize, tol: f64) -> usize {
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let p = (r..rows)
            .max_by(|&x, &y| a[x * cols + c].abs().total_cmp(&a[y * cols + c].abs()))
            .unwrap();
        if a[p * cols + c].abs() < tol {
            continue;
        }
        for j in 0..cols {
            a.swap(r * cols + j, p * cols + j);
        }
        for i in r + 1..rows {
            let f = a[i * cols + c] / a[r * cols + c];
            for j in c..cols {
                a[i * cols + j] -= f * a[r * cols + j];
            }
        }
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bareiss_matches_cramer() {
        // [[2,1],[1,3]] y = [3,5]  ->  y = (4/5, 7/5), det 5.
        let mut aug = vec![2, 1, 3, 1, 3, 5];
        let sol = bareiss_i128(&mut aug, 2).unwrap();
        let IntSolution::Solved { num, det } = sol else { panic!() };
        assert_eq!(det, 5);
        assert_eq!(num, vec![4, 7]);
        let big = bareiss_big(vec![2, 1, 3, 1, 3, 5].into_iter().map(BigInt::from).collect(), 2);
        assert_eq!(big, IntSolution::Solved { num: vec![4.into(), 7.into()], det: 5.into() });
    }

    #[test]
    fn bareiss_row_swap_and_singular() {
        let mut aug = vec![0, 1, 2, 1, 0, 3];
        let IntSolution::Solved { num, det } = bareiss_i128(&mut aug, 2).unwrap() else { panic!() };
        assert_eq!(
            (num[0] as f64 / det as f64, num[1] as f64 / det as f64),
            (3.0, 2.0)
        );
        let mut sing = vec![1, 2, 1, 2, 4, 2];
        assert_eq!(bareiss_i128(&mut sing, 2), Some(IntSolution::Singular));
    }

    #[test]
    fn bareiss_overflow_is_reported() {
        let big = i128::MAX / 2;
        let mut aug = vec![big, 3, 1, 5, big, 1];
        assert_eq!(bareiss_i128(&mut aug, 2), None);
    }

    #[test]
    fn float_kernels() {
        let a = vec![4.0, 1.0, 2.0, 3.0];
        let x = lu_solve(a.clone(), vec![1.0, 2.0], 2, 1e-12).unwrap();
        assert!((4.0 * x[0] + x[1] - 1.0).abs() < 1e-12);
        assert!((2.0 * x[0] + 3.0 * x[1] - 2.0).abs() < 1e-12);
        let inv = invert(a, 2, 1e-12).unwrap();
        assert!((inv[0] - 0.3).abs() < 1e-12 && (inv[1] + 0.1).abs() < 1e-12);
        assert!(lu_solve(vec![1.0, 2.0, 2.0, 4.0], vec![1.0, 1.0], 2, 1e-10).is_none());
        assert_eq!(rank(vec![1.0, 2.0, 3.0, 2.0, 4.0, 6.0], 2, 3, 1e-10), 1);
        assert!(nonnegative(&[-1i128, 0], &-3));
        assert!(!nonnegative(&[1i128, 0], &-3));
    }
}

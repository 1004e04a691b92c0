//! Small dense linear algebra used by the face enumeration.

use crate::scalar::Real;

/// Solves `a x = b` by Gaussian elimination with partial pivoting.
///
/// `a` is row-major `n x n`. Returns `None` when a pivot falls below
/// `pivot_tol` times the largest entry of `a`.
pub fn solve_dense<T: Real>(a: &[T], b: &[T], pivot_tol: T) -> Option<Vec<T>> {
    let n = b.len();
    debug_assert_eq!(a.len(), n * n);
    let mut m = a.to_vec();
    let mut rhs = b.to_vec();
    let scale = m.iter().fold(T::zero(), |acc, v| acc.max(v.abs()));
    if scale == T::zero() {
        return None;
    }
    let threshold = pivot_tol * scale;
    for col in 0..n {
        let (pivot_row, pivot_abs) = (col..n)
            .map(|r| (r, m[r * n + col].abs()))
            .fold((col, T::lit(-1.0)), |best, cur| if cur.1 > best.1 { cur } else { best });
        if pivot_abs <= threshold {
            return None;
        }
        if pivot_row != col {
            for j in 0..n {
                m.swap(col * n + j, pivot_row * n + j);
            }
            rhs.swap(col, pivot_row);
        }
        let pivot = m[col * n + col];
        for r in col + 1..n {
            let factor = m[r * n + col] / pivot;
            if factor == T::zero() {
                continue;
            }
            for j in col..n {
                m[r * n + j] = m[r * n + j] - factor * m[col * n + j];
            }
            rhs[r] = rhs[r] - factor * rhs[col];
        }
    }
    let mut x = vec![T::zero(); n];
    for r in (0..n).rev() {
        let tail: T = (r + 1..n).map(|j| m[r * n + j] * x[j]).sum();
        x[r] = (rhs[r] - tail) / m[r * n + r];
    }
    Some(x)
}

/// `x^T m x` for row-major square `m`.
pub fn quadratic_form<T: Real>(m: &[T], x: &[T]) -> T {
    let n = x.len();
    (0..n)
        .map(|i| {
            let row: T = (0..n).map(|j| m[i * n + j] * x[j]).sum();
            x[i] * row
        })
        .sum()
}

/// Euclidean projection onto the probability simplex `{x >= 0, sum x = 1}`.
pub fn project_to_simplex<T: Real>(v: &[T]) -> Vec<T> {
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    let mut cumulative = T::zero();
    let mut theta = T::zero();
    for (i, &u) in sorted.iter().enumerate() {
        cumulative = cumulative + u;
        let t = (cumulative - T::one()) / T::of_usize(i + 1);
        if u - t > T::zero() {
            theta = t;
        }
    }
    v.iter().map(|&x| (x - theta).max(T::zero())).collect()
}

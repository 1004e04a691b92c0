//! Dual-cone geometry on `Z_5`: the extremal points of the `mu(0) = 1` slice
//! of POS' ∩ PDF', the bound satisfied by correlation measures, and the
//! decomposability threshold along the family `(1, a, 1, 1, a)`.

use serde::Serialize;

use crate::cones::decompose::{decompose_with, DecomposeOptions};
use crate::error::{Error, Result};
use crate::group::{Density, LatticePotential};
use crate::scalar::{cos_turn, Real};

/// Vertices `(mu(1), mu(2))` of the symmetric slice polytope.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexSet<T> {
    pub vertices: Vec<(T, T)>,
}

/// Even measure `(1, mu1, mu2, mu2, mu1)` on `Z_5`.
pub fn slice_measure_z5<T: Real>(mu1: T, mu2: T) -> Result<LatticePotential<T>> {
    LatticePotential::cyclic(vec![T::one(), mu1, mu2, mu2, mu1])
}

/// Enumerates the vertices of
/// `{mu1 >= 0, mu2 >= 0, 1 + 2 mu1 cos(2 pi k/5) + 2 mu2 cos(4 pi k/5) >= 0, k = 1, 2}`
/// by intersecting constraint lines pairwise and keeping the feasible points.
pub fn dual_vertices_z5<T: Real>() -> VertexSet<T> {
    let two = T::lit(2.0);
    // a mu1 + b mu2 + c >= 0
    let mut rows: Vec<[T; 3]> = vec![
        [T::one(), T::zero(), T::zero()],
        [T::zero(), T::one(), T::zero()],
    ];
    for k in 1..=2 {
        rows.push([
            two * cos_turn::<T>(k, 1, 5),
            two * cos_turn::<T>(k, 2, 5),
            T::one(),
        ]);
    }
    let tol = T::decision_tol();
    let feasible = |x: T, y: T| rows.iter().all(|r| r[0] * x + r[1] * y + r[2] >= -tol);
    let active = |x: T, y: T| {
        rows.iter()
            .filter(|r| (r[0] * x + r[1] * y + r[2]).abs() <= tol)
            .count()
    };
    let mut vertices: Vec<(T, T)> = Vec::new();
    for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            let (a, b) = (rows[i], rows[j]);
            let det = a[0] * b[1] - a[1] * b[0];
            if det.abs() <= T::lit(T::PIVOT_TOL) {
                continue;
            }
            let x = (-a[2] * b[1] + a[1] * b[2]) / det;
            let y = (-a[0] * b[2] + a[2] * b[0]) / det;
            if !feasible(x, y) || active(x, y) < 2 {
                continue;
            }
            if vertices
                .iter()
                .all(|&(u, v)| (u - x).abs() > tol || (v - y).abs() > tol)
            {
                vertices.push((x + T::zero(), y + T::zero()));
            }
        }
    }
    vertices.sort_by(|p, q| {
        p.0.partial_cmp(&q.0)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(p.1.partial_cmp(&q.1).unwrap_or(std::cmp::Ordering::Equal))
    });
    VertexSet { vertices }
}

/// `mu(1) <= (sum_n mu(n)) / 4 + tol`, with the sum over every stored value of `mu`
/// (all of `Z_5` for cyclic correlations, the full support for line correlations).
///
/// When `rho` is given it must satisfy `sum_n mu(n) = (sum_m rho(m))^2`; a
/// mismatch also yields `false`.
pub fn stb_dual_bound<T: Real>(mu: &LatticePotential<T>, rho: Option<&Density<T>>, tol: T) -> bool {
    let total = mu.sum();
    let bound = mu.value(1) <= total / T::lit(4.0) + tol;
    let mass = match rho {
        None => true,
        Some(r) => {
            let s = r.total();
            let sq = s * s;
            (total - sq).abs() <= T::decision_tol() * T::one().max(sq)
        }
    };
    bound && mass
}

/// `(1, a, 1, 1, a)` on `Z_5`: the chain potential with `V(+-1)` raised to `a`.
pub fn threshold_family_z5<T: Real>(a: T) -> LatticePotential<T> {
    LatticePotential::cyclic(vec![T::one(), a, T::one(), T::one(), a]).expect("even by construction")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    pub a: f64,
    pub feasible: bool,
    pub certificate_norm: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdScan<T> {
    pub threshold: T,
    pub rows: Vec<ScanRow>,
}

pub fn threshold_scan<T: Real>(lo: T, hi: T, tol: T) -> Result<ThresholdScan<T>> {
    threshold_scan_with(threshold_family_z5::<T>, lo, hi, tol)
}

/// Bisects on decomposability of `family(a)` over `[lo, hi]`.
pub fn threshold_scan_with<T: Real>(
    family: impl Fn(T) -> LatticePotential<T>,
    lo: T,
    hi: T,
    tol: T,
) -> Result<ThresholdScan<T>> {
    if !(lo < hi) || !(tol > T::zero()) {
        return Err(Error::Invalid("threshold scan needs lo < hi and tol > 0".into()));
    }
    let opts = DecomposeOptions::default();
    let mut rows = Vec::new();
    let mut probe = |a: T| -> Result<bool> {
        let cert = decompose_with(&family(a), &opts)?;
        rows.push(ScanRow {
            a: a.as_f64(),
            feasible: cert.is_decomposition(),
            certificate_norm: cert.norm().as_f64(),
        });
        Ok(cert.is_decomposition())
    };
    let (mut a, mut b) = (lo, hi);
    let fa = probe(a)?;
    let fb = probe(b)?;
    if fa == fb {
        return Err(Error::NoSignChange {
            lo: lo.as_f64(),
            hi: hi.as_f64(),
        });
    }
    while b - a > tol {
        let mid = (a + b) / T::lit(2.0);
        if probe(mid)? == fa {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(ThresholdScan {
        threshold: (a + b) / T::lit(2.0),
        rows,
    })
}

//! Membership tests for the cones of positive (POS), positive definite (PDF)
//! and stable (STB) kernels, the POS+PDF decomposition problem, and the
//! dual-cone geometry on `Z_5`.

mod copositive;
mod decompose;
mod dual;

pub use copositive::{
    check_copositive, form_matrix, CopositivityOptions, CopositivityVerdict, FaceRecord,
    MAX_ENUMERATION_DIM,
};
pub use decompose::{
    decompose, decompose_with, Certificate, DecomposeOptions, DecompositionCertificate,
    SeparatingCertificate, MAX_DECOMPOSE_MODULUS,
};
pub use dual::{
    dual_vertices_z5, slice_measure_z5, stb_dual_bound, threshold_family_z5, threshold_scan,
    threshold_scan_with, ScanRow, ThresholdScan, VertexSet,
};

use crate::error::Result;
use crate::group::{dft, LatticePotential};
use crate::scalar::Real;

/// Nowhere negative, up to `tol`.
pub fn check_pos<T: Real>(p: &LatticePotential<T>, tol: T) -> bool {
    p.min_value() >= -tol
}

/// Nonnegative spectrum on `Z_n`, up to `tol`. Line kernels are rejected.
pub fn check_pdf<T: Real>(p: &LatticePotential<T>, tol: T) -> Result<bool> {
    Ok(dft(p)?.min() >= -tol)
}

/// `sum_m p(m) mu(m)` over the union of both supports.
pub fn pairing<T: Real>(p: &LatticePotential<T>, mu: &LatticePotential<T>) -> T {
    match (p.modulus(), mu.modulus()) {
        (Some(n), Some(m)) if n == m => (0..n as i64).map(|k| p.value(k) * mu.value(k)).sum(),
        _ => {
            let reach = |q: &LatticePotential<T>| q.iter().map(|(k, _)| k.abs()).max().unwrap_or(0);
            let r = reach(p).max(reach(mu));
            (-r..=r).map(|k| p.value(k) * mu.value(k)).sum()
        }
    }
}

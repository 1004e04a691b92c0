//! POS+PDF decomposition on `Z_n` as a linear feasibility problem.
//!
//! Find an even `f >= 0` with `(p - f)^ >= 0`. When no such `f` exists the
//! Farkas multipliers `lambda >= 0` of the spectral rows combine cosine rows
//! into a measure `mu = sum_k lambda_k cos(2 pi k . / n)` that is positive,
//! positive definite and pairs negatively with `p`.

use crate::cones::{check_pdf, check_pos, pairing};
use crate::error::{Error, Result};
use crate::group::{dft, Domain, LatticePotential};
use crate::lp::{Constraint, LinearProgram, LpOptions, LpOutcome, Relation};
use crate::scalar::{cos_turn, Real};

pub const MAX_DECOMPOSE_MODULUS: usize = 64;

#[derive(Debug, Clone, Copy)]
pub struct DecomposeOptions {
    pub tol: f64,
    pub lp: LpOptions,
}

impl Default for DecomposeOptions {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            lp: LpOptions::default(),
        }
    }
}

/// `p = f + g` with `f` positive and `g = p - f` positive definite.
#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionCertificate<T> {
    pub kernel: LatticePotential<T>,
    pub positive_part: LatticePotential<T>,
    pub tol: T,
}

impl<T: Real> DecompositionCertificate<T> {
    pub fn definite_part(&self) -> LatticePotential<T> {
        self.kernel
            .sub(&self.positive_part)
            .expect("parts share the kernel's domain")
    }

    /// Re-checks every inequality from raw values.
    pub fn validate(&self) -> Result<()> {
        if !check_pos(&self.positive_part, self.tol) {
            return Err(Error::Inconsistent(format!(
                "positive part has minimum {}",
                self.positive_part.min_value()
            )));
        }
        let g = self.definite_part();
        if !check_pdf(&g, self.tol)? {
            return Err(Error::Inconsistent(format!(
                "definite part has spectral minimum {}",
                dft(&g)?.min()
            )));
        }
        let eps = T::lit(64.0) * T::epsilon();
        for k in 0..self.kernel.values().len() as i64 {
            let recon = self.positive_part.value(k) + g.value(k);
            let v = self.kernel.value(k);
            if (recon - v).abs() > eps * T::one().max(v.abs()) {
                return Err(Error::Inconsistent(format!("f + g differs from p at {k}")));
            }
        }
        Ok(())
    }
}

/// Positive, positive definite `mu` (normalized to `mu(0) = 1`) with `<p, mu> < 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeparatingCertificate<T> {
    pub kernel: LatticePotential<T>,
    pub measure: LatticePotential<T>,
    pub pairing: T,
    pub tol: T,
}

impl<T: Real> SeparatingCertificate<T> {
    pub fn validate(&self) -> Result<()> {
        if !check_pos(&self.measure, self.tol) {
            return Err(Error::Inconsistent("separating measure not positive".into()));
        }
        if !check_pdf(&self.measure, self.tol)? {
            return Err(Error::Inconsistent(
                "separating measure not positive definite".into(),
            ));
        }
        let recomputed = pairing(&self.kernel, &self.measure);
        if !(recomputed < -self.tol) {
            return Err(Error::Inconsistent(format!(
                "pairing {recomputed} is not below -tol"
            )));
        }
        let eps = T::lit(64.0) * T::epsilon() * T::of_usize(self.measure.values().len());
        if (recomputed - self.pairing).abs() > eps {
            return Err(Error::Inconsistent("stored pairing differs".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Certificate<T> {
    Decomposition(DecompositionCertificate<T>),
    Separating(SeparatingCertificate<T>),
}

impl<T: Real> Certificate<T> {
    pub fn is_decomposition(&self) -> bool {
        matches!(self, Certificate::Decomposition(_))
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Certificate::Decomposition(c) => c.validate(),
            Certificate::Separating(c) => c.validate(),
        }
    }

    /// Max-norm of the certificate vector (`f` or `mu`).
    pub fn norm(&self) -> T {
        let v = match self {
            Certificate::Decomposition(c) => c.positive_part.values(),
            Certificate::Separating(c) => c.measure.values(),
        };
        v.iter().fold(T::zero(), |a, x| a.max(x.abs()))
    }
}

pub fn decompose<T: Real>(p: &LatticePotential<T>) -> Result<Certificate<T>> {
    decompose_with(p, &DecomposeOptions::default())
}

fn cosine_matrix<T: Real>(n: usize) -> Vec<Vec<T>> {
    (0..n)
        .map(|k| (0..n).map(|m| cos_turn::<T>(k, m, n)).collect())
        .collect()
}

/// `mu(m) = sum_k lambda_k cos(2 pi k m / n)`, symmetrized and scaled to `mu(0) = 1`.
fn measure_from_multipliers<T: Real>(lambda: &[T], cosines: &[Vec<T>]) -> Result<LatticePotential<T>> {
    let n = lambda.len();
    let raw: Vec<T> = (0..n)
        .map(|m| lambda.iter().zip(cosines).map(|(&l, row)| l * row[m]).sum())
        .collect();
    let even: Vec<T> = (0..n)
        .map(|m| (raw[m] + raw[(n - m) % n]) / T::lit(2.0))
        .collect();
    let head = even[0];
    if !(head > T::zero()) {
        return Err(Error::Unresolved("Farkas combination has mu(0) <= 0".into()));
    }
    LatticePotential::cyclic(even.into_iter().map(|v| v / head).collect())
}

fn separator<T: Real>(
    p: &LatticePotential<T>,
    measure: LatticePotential<T>,
    tol: T,
) -> SeparatingCertificate<T> {
    let pairing = pairing(p, &measure);
    SeparatingCertificate {
        kernel: p.clone(),
        measure,
        pairing,
        tol,
    }
}

/// Among normalized separators, the one minimizing `<p, mu>`: a vertex of the
/// `mu(0) = 1` slice of POS' ∩ PDF'.
fn deepest_separator<T: Real>(
    spectrum: &[T],
    cosines: &[Vec<T>],
    opts: &DecomposeOptions,
) -> Result<Option<LatticePotential<T>>> {
    let n = spectrum.len();
    let mut lp = LinearProgram::new(n, spectrum.to_vec());
    for m in 0..n {
        lp.add(Constraint::new(
            cosines.iter().map(|row| row[m]).collect(),
            Relation::Ge,
            T::zero(),
        ));
    }
    lp.add(Constraint::new(vec![T::one(); n], Relation::Eq, T::one()));
    match lp.solve(opts.lp)? {
        LpOutcome::Optimal { x, .. } => {
            Ok(Some(measure_from_multipliers(&x, cosines)?))
        }
        _ => Ok(None),
    }
}

pub fn decompose_with<T: Real>(
    p: &LatticePotential<T>,
    opts: &DecomposeOptions,
) -> Result<Certificate<T>> {
    let Domain::Cyclic { n } = p.domain() else {
        return Err(Error::NeedsCyclic);
    };
    if n > MAX_DECOMPOSE_MODULUS {
        return Err(Error::TooLarge {
            dim: n,
            limit: MAX_DECOMPOSE_MODULUS,
        });
    }
    let tol = T::lit(opts.tol);
    let spectrum = dft(p)?.coefficients().to_vec();
    let cosines = cosine_matrix::<T>(n);

    // minimal-mass positive part: min sum f  s.t.  sum_m f(m) cos(2 pi k m / n) <= p^(k)
    let mut lp = LinearProgram::new(n, vec![T::one(); n]);
    for (k, row) in cosines.iter().enumerate() {
        lp.add(Constraint::new(row.clone(), Relation::Le, spectrum[k]));
    }
    match lp.solve(opts.lp)? {
        LpOutcome::Optimal { x, .. } => {
            // entries at rounding level are solver noise
            let scale = spectrum.iter().fold(T::one(), |a, v| a.max(v.abs()));
            let noise = T::lit(64.0) * T::epsilon() * scale;
            let even: Vec<T> = (0..n)
                .map(|m| (x[m] + x[(n - m) % n]) / T::lit(2.0))
                .map(|v| if v <= noise { T::zero() } else { v })
                .collect();
            let cert = DecompositionCertificate {
                kernel: p.clone(),
                positive_part: LatticePotential::cyclic(even)?,
                tol,
            };
            cert.validate()
                .map_err(|e| Error::Unresolved(format!("decomposition failed validation: {e}")))?;
            Ok(Certificate::Decomposition(cert))
        }
        LpOutcome::Unbounded => Err(Error::Inconsistent(
            "objective bounded below by zero reported unbounded".into(),
        )),
        LpOutcome::Infeasible { farkas, .. } => {
            // rows are `<=`, so y <= 0 and lambda = -y >= 0
            let lambda: Vec<T> = farkas.iter().map(|&y| (-y).max(T::zero())).collect();
            let farkas_cert =
                separator(p, measure_from_multipliers(&lambda, &cosines)?, tol);
            farkas_cert.validate().map_err(|e| {
                Error::Unresolved(format!("Farkas separator failed validation: {e}"))
            })?;
            if let Some(mu) = deepest_separator(&spectrum, &cosines, opts)? {
                let deep = separator(p, mu, tol);
                if deep.validate().is_ok() && deep.pairing <= farkas_cert.pairing {
                    return Ok(Certificate::Separating(deep));
                }
            }
            Ok(Certificate::Separating(farkas_cert))
        }
    }
}

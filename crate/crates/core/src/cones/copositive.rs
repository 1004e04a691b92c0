//! Exact copositivity test of circulant and windowed Toeplitz forms by
//! enumeration of simplex faces, cross-checked by a seeded projected-gradient
//! search.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::group::{Density, Domain, LatticePotential};
use crate::linalg::{project_to_simplex, quadratic_form, solve_dense};
use crate::scalar::Real;

/// Largest form dimension accepted by the face enumeration (2^16 faces).
pub const MAX_ENUMERATION_DIM: usize = 16;

#[derive(Debug, Clone, Copy)]
pub struct CopositivityOptions {
    pub tol: f64,
    pub seed: u64,
    pub restarts: usize,
    pub iterations: usize,
}

impl Default for CopositivityOptions {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            seed: 0x5eed,
            restarts: 64,
            iterations: 400,
        }
    }
}

/// KKT point of `x^T M x` in the relative interior of the face spanned by `support`.
#[derive(Debug, Clone, PartialEq)]
pub struct FaceRecord<T> {
    pub support: Vec<usize>,
    pub critical_value: T,
    /// Attains the overall minimum (all tied faces are flagged).
    pub minimal: bool,
}

#[derive(Debug, Clone)]
pub struct CopositivityVerdict<T> {
    pub copositive: bool,
    /// Minimum of the form over the standard simplex.
    pub minimum: T,
    /// Present iff not copositive; its energy is strictly negative.
    pub witness: Option<Density<T>>,
    pub faces: Vec<FaceRecord<T>>,
    /// Best value found by the randomized cross-check.
    pub cross_check_minimum: T,
    pub seed: u64,
    pub tol: T,
}

impl<T: Real> CopositivityVerdict<T> {
    /// Re-evaluates the record against the raw kernel.
    pub fn validate(&self, p: &LatticePotential<T>, window: Option<usize>) -> Result<()> {
        let (m, dim) = form_matrix(p, window)?;
        if let Some(w) = &self.witness {
            let e = quadratic_form(&m, w.weights());
            if self.copositive || !(e < T::zero()) {
                return Err(Error::Inconsistent(format!("witness energy {e} not negative")));
            }
        } else if !self.copositive {
            return Err(Error::Inconsistent("missing witness".into()));
        }
        for face in &self.faces {
            if face.support.iter().any(|&i| i >= dim) {
                return Err(Error::Inconsistent("face index out of range".into()));
            }
            if self.copositive && face.critical_value < -self.tol {
                return Err(Error::Inconsistent(format!(
                    "face {:?} has value {}",
                    face.support, face.critical_value
                )));
            }
        }
        Ok(())
    }
}

/// Row-major matrix of the quadratic form `E(rho) = sum_{m,n} rho(m) p(m-n) rho(n)`.
///
/// Cyclic kernels give the `n x n` circulant; line kernels need a `window` and
/// give the `N x N` Toeplitz section.
pub fn form_matrix<T: Real>(p: &LatticePotential<T>, window: Option<usize>) -> Result<(Vec<T>, usize)> {
    let dim = match (p.domain(), window) {
        (Domain::Cyclic { n }, None) => n,
        (Domain::Cyclic { .. }, Some(_)) => {
            return Err(Error::Invalid("window applies to line kernels only".into()))
        }
        (Domain::Line { .. }, Some(w)) if w >= 1 => w,
        (Domain::Line { .. }, _) => {
            return Err(Error::Invalid("line kernel needs a window N >= 1".into()))
        }
    };
    let m = (0..dim * dim)
        .map(|ij| {
            let (i, j) = ((ij / dim) as i64, (ij % dim) as i64);
            p.value(i - j)
        })
        .collect();
    Ok((m, dim))
}

struct FacePoint<T> {
    support: Vec<usize>,
    x: Vec<T>,
    value: T,
}

/// Interior KKT point on one face: `M_S x = lambda 1`, `1^T x = 1`, `x > 0`.
fn face_point<T: Real>(m: &[T], dim: usize, mask: u32) -> Option<FacePoint<T>> {
    let support: Vec<usize> = (0..dim).filter(|&i| mask & (1 << i) != 0).collect();
    let k = support.len();
    let size = k + 1;
    let mut a = vec![T::zero(); size * size];
    for (r, &i) in support.iter().enumerate() {
        for (c, &j) in support.iter().enumerate() {
            a[r * size + c] = m[i * dim + j];
        }
        a[r * size + k] = -T::one();
        a[k * size + r] = T::one();
    }
    let mut rhs = vec![T::zero(); size];
    rhs[k] = T::one();
    let sol = solve_dense(&a, &rhs, T::lit(T::PIVOT_TOL))?;
    if sol[..k].iter().any(|&v| !(v > T::zero())) {
        return None;
    }
    let mut x = vec![T::zero(); dim];
    for (r, &i) in support.iter().enumerate() {
        x[i] = sol[r];
    }
    let value = quadratic_form(m, &x);
    Some(FacePoint { support, x, value })
}

fn projected_gradient_minimum<T: Real>(m: &[T], dim: usize, opts: &CopositivityOptions) -> T {
    let lipschitz = (0..dim)
        .map(|i| (0..dim).map(|j| m[i * dim + j].abs()).sum::<T>())
        .fold(T::zero(), T::max);
    let step = if lipschitz > T::zero() {
        T::one() / (T::lit(2.0) * lipschitz)
    } else {
        T::one()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut best = T::infinity();
    for restart in 0..opts.restarts.max(dim) {
        let mut x: Vec<T> = if restart < dim {
            (0..dim).map(|i| if i == restart { T::one() } else { T::zero() }).collect()
        } else {
            let raw: Vec<f64> = (0..dim).map(|_| -rng.gen::<f64>().max(1e-300).ln()).collect();
            let s: f64 = raw.iter().sum();
            raw.iter().map(|&r| T::lit(r / s)).collect()
        };
        if restart < dim {
            // nudge off the vertex so the gradient can act
            for v in x.iter_mut() {
                *v = *v * T::lit(0.9) + T::lit(0.1 / dim as f64);
            }
        }
        best = best.min(quadratic_form(m, &x));
        for _ in 0..opts.iterations {
            let grad: Vec<T> = (0..dim)
                .map(|i| T::lit(2.0) * (0..dim).map(|j| m[i * dim + j] * x[j]).sum::<T>())
                .collect();
            let moved: Vec<T> = x.iter().zip(&grad).map(|(&a, &g)| a - step * g).collect();
            x = project_to_simplex(&moved);
        }
        best = best.min(quadratic_form(m, &x));
    }
    best
}

/// Decides `rho^T M rho >= 0` for all `rho >= 0`.
pub fn check_copositive<T: Real>(
    p: &LatticePotential<T>,
    window: Option<usize>,
    opts: &CopositivityOptions,
) -> Result<CopositivityVerdict<T>> {
    let (m, dim) = form_matrix(p, window)?;
    if dim > MAX_ENUMERATION_DIM {
        return Err(Error::TooLarge {
            dim,
            limit: MAX_ENUMERATION_DIM,
        });
    }
    let tol = T::lit(opts.tol);
    let points: Vec<FacePoint<T>> = (1u32..(1u32 << dim))
        .into_par_iter()
        .filter_map(|mask| face_point(&m, dim, mask))
        .collect();
    let (min_idx, minimum) = points
        .iter()
        .enumerate()
        .map(|(i, f)| (i, f.value))
        .fold((0, T::infinity()), |b, c| if c.1 < b.1 { c } else { b });
    // singletons always yield a point, so `points` is nonempty
    let tie = tol * T::one().max(minimum.abs());
    let faces = points
        .iter()
        .map(|f| FaceRecord {
            support: f.support.clone(),
            critical_value: f.value,
            minimal: f.value <= minimum + tie,
        })
        .collect();
    let cross = projected_gradient_minimum(&m, dim, opts);
    if cross < minimum - tie {
        return Err(Error::Inconsistent(format!(
            "projected gradient found {cross} below face minimum {minimum}"
        )));
    }
    let copositive = minimum >= -tol;
    let witness = if copositive {
        None
    } else {
        let x = points[min_idx].x.clone();
        Some(match p.domain() {
            Domain::Cyclic { .. } => Density::cyclic(x)?,
            Domain::Line { .. } => Density::line(x)?,
        })
    };
    Ok(CopositivityVerdict {
        copositive,
        minimum,
        witness,
        faces,
        cross_check_minimum: cross,
        seed: opts.seed,
        tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn negative_delta_has_delta_witness() {
        let p = LatticePotential::<f64>::cyclic(vec![-1.0, 0.0, 0.0]).unwrap();
        let v = check_copositive(&p, None, &CopositivityOptions::default()).unwrap();
        assert!(!v.copositive);
        let w = v.witness.as_ref().unwrap();
        assert!(w.weights().iter().all(|&x| x == 0.0 || x == 1.0));
        assert!((v.minimum + 1.0).abs() < 1e-14);
        v.validate(&p, None).unwrap();
    }

    #[test]
    fn oversize_rejected() {
        let p = LatticePotential::<f64>::delta_cyclic(17).unwrap();
        assert!(matches!(
            check_copositive(&p, None, &CopositivityOptions::default()),
            Err(Error::TooLarge { dim: 17, .. })
        ));
        let l = LatticePotential::line(vec![1.0]).unwrap();
        assert!(check_copositive(&l, None, &CopositivityOptions::default()).is_err());
        assert!(check_copositive(&l, Some(17), &CopositivityOptions::default()).is_err());
    }

    #[test]
    fn indefinite_but_copositive_form() {
        // p = (1, -1/2, -1/2) on Z_3: PSD and copositive with zero minimum
        let p = LatticePotential::<f64>::cyclic(vec![1.0, -0.5, -0.5]).unwrap();
        let v = check_copositive(&p, None, &CopositivityOptions::default()).unwrap();
        assert!(v.copositive);
        assert!(v.minimum.abs() < 1e-12);
        let full = v.faces.iter().find(|f| f.support.len() == 3).unwrap();
        assert!(full.minimal);
    }

    #[test]
    fn windowed_form_is_toeplitz() {
        let l = LatticePotential::line(vec![0.5, -1.0, 2.0, -1.0, 0.5]).unwrap();
        let (m, dim) = form_matrix(&l, Some(4)).unwrap();
        assert_eq!(dim, 4);
        assert_eq!(m[0], 2.0);
        assert_eq!(m[1], -1.0);
        assert_eq!(m[2], 0.5);
        assert_eq!(m[3], 0.0);
        assert_eq!(m[4 + 0], -1.0);
    }
}

//! Rotation-invariant construction in the plane.
//!
//! Starting from `W` (bump of half-width 1/4, so `W` vanishes for `|x| >= 5/2`):
//!
//! * `W1 = h * W * h` with the damped comb `h = sum_n e^{-eps |n|} delta(. - 5n)`,
//! * `W_r(u) = W1(|u|) / |u|` (the angular mean of `W1(u_1) delta(u_2)`, up to a constant),
//! * `W2 = g * W_r * g` with a radial bump `g` supported on `[0, 1/4)`.
//!
//! Writing `G = g * g` (supported on `[0, 1/2)`) and integrating in polar
//! coordinates about the origin, the `1/|u|` singularity cancels against the
//! area element:
//!
//! `W2(r) = ∫ W1(rho) ∫_0^{2 pi} G(|r e_1 - rho e_theta|) dtheta drho`.
//!
//! All routines here are `f64`: they exist to reproduce a numerical sketch,
//! not as reusable generic kernels.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::continuum::{autocorr_f, BumpFunction, ContinuumPotential};
use crate::error::{Error, Result};
use crate::quadrature::{Estimate, GaussLegendre};
use crate::scalar::golden_conjugate;

pub const COMB_SPACING: f64 = 5.0;
/// Support radius of `g`.
pub const G_RADIUS: f64 = 0.25;
/// Relative cutoff for comb weights and for series terms.
pub const TRUNCATION: f64 = 1e-10;

/// The damped comb `h`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CombParams {
    pub eps: f64,
    /// Last comb period kept in the pairing series.
    pub nu_max: usize,
}

impl CombParams {
    /// `nu_max` is the last period whose weight in `W1` is at least `TRUNCATION` of the central one.
    pub fn new(eps: f64) -> Result<Self> {
        if !(eps > 0.0) || !eps.is_finite() {
            return Err(Error::Invalid(format!("comb damping must be positive, got {eps}")));
        }
        let mut comb = Self { eps, nu_max: 0 };
        let c0 = comb.weight(0);
        let mut nu = 1;
        while comb.weight(nu) >= TRUNCATION * c0 {
            nu += 1;
        }
        comb.nu_max = nu as usize;
        Ok(comb)
    }

    /// Weight of the copy of `W` at `5s` in `W1`:
    /// `sum_{j + k = s} e^{-eps(|j| + |k|)} = e^{-eps|s|} (|s| + 1 + 2q/(1-q))`, `q = e^{-2 eps}`.
    pub fn weight(&self, s: i64) -> f64 {
        let q = (-2.0 * self.eps).exp();
        let a = s.unsigned_abs() as f64;
        (-self.eps * a).exp() * (a + 1.0 + 2.0 * q / (1.0 - q))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SingularityMode {
    /// Polar coordinates about the origin; the Jacobian absorbs `1/|u|`.
    PolarCentered,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub radial_order: usize,
    pub angular_order: usize,
    /// Extra uniform subdivisions of every smooth radial piece.
    pub subdivisions: usize,
    pub mode: SingularityMode,
    /// Largest accepted error estimate relative to the value.
    pub rel_tol: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            radial_order: 24,
            angular_order: 24,
            subdivisions: 1,
            mode: SingularityMode::PolarCentered,
            rel_tol: 1e-3,
        }
    }
}

impl QuadratureSpec {
    fn validate(&self) -> Result<()> {
        if self.radial_order < 8 || self.angular_order < 8 {
            return Err(Error::Invalid("quadrature orders must be >= 8".into()));
        }
        if self.subdivisions == 0 {
            return Err(Error::Invalid("subdivisions must be >= 1".into()));
        }
        Ok(())
    }

    fn halved(&self) -> Self {
        Self {
            radial_order: self.radial_order / 2,
            angular_order: self.angular_order / 2,
            ..*self
        }
    }
}

/// Which terms of the pairing series use full quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SeriesMode {
    /// Quadrature for `nu <= 1`, the asymptotic surrogate beyond.
    AsymptoticTail,
    FullQuadrature,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanPoint {
    pub eps: f64,
    pub s: f64,
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanResult {
    pub points: Vec<ScanPoint>,
    /// Least-squares slope of `S` against `log(1/eps)`; `None` for fewer than two points.
    pub slope: Option<f64>,
    /// Root mean square residual of that fit.
    pub residual: Option<f64>,
}

struct Rules {
    radial: GaussLegendre<f64>,
    angular: GaussLegendre<f64>,
    subdivisions: usize,
}

impl Rules {
    fn new(spec: &QuadratureSpec) -> Self {
        Self {
            radial: GaussLegendre::new(spec.radial_order),
            angular: GaussLegendre::new(spec.angular_order),
            subdivisions: spec.subdivisions,
        }
    }

    /// Sums the radial rule over the pieces between sorted `breaks`.
    fn radial_between(&self, breaks: &[f64], f: impl Fn(f64) -> f64) -> f64 {
        let mut total = 0.0;
        for w in breaks.windows(2) {
            let (a, b) = (w[0], w[1]);
            if !(b > a) {
                continue;
            }
            let h = (b - a) / self.subdivisions as f64;
            for i in 0..self.subdivisions {
                let lo = a + h * i as f64;
                total += self.radial.integrate(lo, lo + h, &f);
            }
        }
        total
    }

    /// `∫_0^{2 pi} profile(|d e_1 - s e_phi|) dphi` for a profile vanishing beyond `radius`.
    fn ring(&self, d: f64, s: f64, radius: f64, profile: &impl Fn(f64) -> f64) -> f64 {
        if d == 0.0 || s == 0.0 {
            let r = d.max(s);
            return if r < radius { std::f64::consts::TAU * profile(r) } else { 0.0 };
        }
        if (d - s).abs() >= radius {
            return 0.0;
        }
        let upper = if d + s <= radius {
            std::f64::consts::PI
        } else {
            let c = (d * d + s * s - radius * radius) / (2.0 * d * s);
            c.clamp(-1.0, 1.0).acos()
        };
        let dist = |phi: f64| (d * d + s * s - 2.0 * d * s * phi.cos()).max(0.0).sqrt();
        2.0 * self.angular.integrate(0.0, upper, |phi| profile(dist(phi)))
    }
}

/// Radius-`radius` regime changes of `ring(d, s, ...)` as a function of `s`, within `[lo, hi]`.
fn ring_breaks(d: f64, radius: f64, lo: f64, hi: f64, extra: &[f64]) -> Vec<f64> {
    let mut b = vec![lo, hi];
    for c in [radius - d, d - radius, d + radius] {
        if c > lo && c < hi {
            b.push(c);
        }
    }
    b.extend(extra.iter().copied().filter(|&c| c > lo && c < hi));
    b.sort_by(|x, y| x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal));
    b.dedup_by(|x, y| (*x - *y).abs() < 1e-14);
    b
}

/// Numerical model of the planar potential for one quadrature specification.
pub struct PlaneModel {
    spec: QuadratureSpec,
    w: ContinuumPotential<f64>,
    g: BumpFunction<f64>,
    rules: Rules,
    coarse: Rules,
    asymptotic_constant: f64,
}

impl PlaneModel {
    pub fn new(spec: QuadratureSpec) -> Result<Self> {
        spec.validate()?;
        let w = ContinuumPotential::chain(BumpFunction::cosine_with_half_width(0.25));
        let g = BumpFunction::cosine_with_half_width(G_RADIUS);
        let rules = Rules::new(&spec);
        let coarse = Rules::new(&spec.halved());
        let mut model = Self {
            spec,
            w,
            g,
            rules,
            coarse,
            asymptotic_constant: 0.0,
        };
        model.asymptotic_constant = model.compute_asymptotic_constant();
        Ok(model)
    }

    pub fn spec(&self) -> &QuadratureSpec {
        &self.spec
    }

    /// The line potential built with the quarter-width bump.
    pub fn line_potential(&self) -> &ContinuumPotential<f64> {
        &self.w
    }

    /// Radial profile of `g`.
    pub fn g(&self, s: f64) -> f64 {
        self.g.eval(s)
    }

    /// `G(d) = ∫ g(|z|) g(|d e_1 - z|) d^2 z`.
    fn big_g(&self, rules: &Rules, d: f64) -> f64 {
        let breaks = ring_breaks(d, G_RADIUS, 0.0, G_RADIUS, &[]);
        let g = |s: f64| self.g.eval(s);
        rules.radial_between(&breaks, |s| s * g(s) * rules.ring(d, s, G_RADIUS, &g))
    }

    pub fn eval_g_autocorr(&self, d: f64) -> f64 {
        self.big_g(&self.rules, d)
    }

    /// `K = ∫∫ A(u_1) G(|u|) d^2 u`: the amplitude of `W2(r) ~ K c_nu V(n) / r`.
    fn compute_asymptotic_constant(&self) -> f64 {
        let reach = 2.0 * G_RADIUS;
        let f = self.w.bump();
        self.rules.radial_between(&[0.0, reach], |rho| {
            let big_g = self.big_g(&self.rules, rho);
            let angular = 2.0
                * self
                    .rules
                    .angular
                    .integrate(0.0, std::f64::consts::PI, |th| autocorr_f(f, rho * th.cos()));
            rho * big_g * angular
        })
    }

    pub fn asymptotic_constant(&self) -> f64 {
        self.asymptotic_constant
    }

    /// Leading slope of the normalized `S` against `log(1/eps)`: the tail
    /// `2 sum_nu sum_n K V(n) mu(n) c_nu / (c_0 5 nu)` grows like `(2K/5)(2 - sqrt 5) log(1/eps)`.
    pub fn predicted_slope(&self) -> f64 {
        2.0 * self.asymptotic_constant / COMB_SPACING * (2.0 - 5f64.sqrt())
    }

    fn w2_with(&self, rules: &Rules, r: f64, comb: &CombParams) -> f64 {
        let reach = 2.0 * G_RADIUS;
        let lo = (r - reach).max(0.0);
        let hi = r + reach;
        // W1 has kinks at half-integers
        let first = (lo - 0.5).ceil() as i64;
        let last = (hi - 0.5).floor() as i64;
        let halves: Vec<f64> = (first..=last).map(|k| k as f64 + 0.5).collect();
        let breaks = ring_breaks(r, reach, lo, hi, &halves);
        let profile = |d: f64| self.big_g(rules, d);
        rules.radial_between(&breaks, |rho| {
            let w1 = eval_w1_with(&self.w, rho, comb);
            if w1 == 0.0 {
                0.0
            } else {
                w1 * rules.ring(r, rho, reach, &profile)
            }
        })
    }

    /// `W2(r)` by polar quadrature; the error estimate is the change from half the orders.
    pub fn eval_w2(&self, r: f64, comb: &CombParams) -> Result<Estimate<f64>> {
        if !(r >= 0.0) {
            return Err(Error::Invalid(format!("radius must be >= 0, got {r}")));
        }
        let value = self.w2_with(&self.rules, r, comb);
        let rough = self.w2_with(&self.coarse, r, comb);
        let error = (value - rough).abs();
        if error > self.spec.rel_tol * value.abs().max(1e-300) && error > 1e-14 {
            return Err(Error::Quadrature {
                estimate: error,
                tol: self.spec.rel_tol * value.abs(),
            });
        }
        Ok(Estimate { value, error })
    }

    /// `K c_nu V(n) / r` for `r = 5 nu + n`; the error is the `(1/2r)^2` curvature correction scale.
    pub fn asymptotic_w2(&self, nu: i64, n: i64, comb: &CombParams) -> Estimate<f64> {
        let r = (COMB_SPACING as i64 * nu + n).abs() as f64;
        let v = self.w.lattice().value(n);
        let value = self.asymptotic_constant * comb.weight(nu) * v / r;
        let error = value.abs() * (2.0 * G_RADIUS / r).powi(2);
        Estimate { value, error }
    }

    /// `∫ W2 mu_D = W2(0) + 2 W2(1) mu(1) + 2 sum_{nu >= 1} sum_{|n| <= 2} W2(|5 nu + n|) mu(n)`.
    pub fn pairing_series(&self, comb: &CombParams, mode: SeriesMode) -> Result<Estimate<f64>> {
        let gamma = golden_conjugate::<f64>();
        let mu = |n: i64| match n.abs() {
            0 => 1.0,
            1 => gamma,
            _ => 0.0,
        };
        let mut jobs: Vec<(f64, i64, i64)> = vec![(1.0, 0, 0), (2.0 * gamma, 0, 1)];
        for nu in 1..=comb.nu_max as i64 {
            for n in -2..=2 {
                if mu(n) != 0.0 {
                    jobs.push((2.0 * mu(n), nu, n));
                }
            }
        }
        let terms: Vec<Estimate<f64>> = jobs
            .par_iter()
            .map(|&(coef, nu, n)| {
                let est = if nu <= 1 || mode == SeriesMode::FullQuadrature {
                    let r = (COMB_SPACING as i64 * nu + n).abs() as f64;
                    self.eval_w2(r, comb)?
                } else {
                    self.asymptotic_w2(nu, n, comb)
                };
                Ok(Estimate {
                    value: coef * est.value,
                    error: coef.abs() * est.error,
                })
            })
            .collect::<Result<_>>()?;
        let mut kept = terms;
        kept.sort_by(|a, b| {
            a.value
                .abs()
                .partial_cmp(&b.value.abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        Ok(kept.iter().fold(
            Estimate {
                value: 0.0,
                error: 0.0,
            },
            |acc, t| Estimate {
                value: acc.value + t.value,
                error: acc.error + t.error,
            },
        ))
    }

    /// Pairing series for each `eps` (strictly decreasing) and its fit against `log(1/eps)`.
    ///
    /// Each `S` is divided by the central comb weight `c_0 ~ 1/eps`, so the potential is
    /// compared at a fixed scale (`W1 = W` near the origin). A positive rescaling changes
    /// neither stability nor decomposability.
    pub fn pairing_scan(&self, eps: &[f64], mode: SeriesMode) -> Result<ScanResult> {
        if eps.is_empty() {
            return Err(Error::Invalid("empty eps list".into()));
        }
        if eps.windows(2).any(|w| !(w[1] < w[0])) {
            return Err(Error::Invalid("eps values must be strictly decreasing".into()));
        }
        let points = eps
            .iter()
            .map(|&e| {
                let comb = CombParams::new(e)?;
                let s = self.pairing_series(&comb, mode)?;
                let c0 = comb.weight(0);
                Ok(ScanPoint {
                    eps: e,
                    s: s.value / c0,
                    error: s.error / c0,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let (slope, residual) = fit_log_slope(&points);
        Ok(ScanResult {
            points,
            slope,
            residual,
        })
    }
}

fn fit_log_slope(points: &[ScanPoint]) -> (Option<f64>, Option<f64>) {
    if points.len() < 2 {
        return (None, None);
    }
    let xs: Vec<f64> = points.iter().map(|p| (1.0 / p.eps).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.s).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    (Some(slope), Some((rss / n).sqrt()))
}

fn eval_w1_with(w: &ContinuumPotential<f64>, x: f64, comb: &CombParams) -> f64 {
    let s = (x / COMB_SPACING).round() as i64;
    comb.weight(s) * w.eval(x - COMB_SPACING * s as f64)
}

/// `W1(x) = sum_{j,k} e^{-eps(|j|+|k|)} W(x - 5j - 5k)`; copies of `W` never overlap,
/// so only the nearest one contributes.
pub fn eval_w1(w: &ContinuumPotential<f64>, x: f64, comb: &CombParams) -> f64 {
    eval_w1_with(w, x, comb)
}

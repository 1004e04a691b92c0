//! The chain potential smoothed onto the real line:
//! `W(x) = sum_n V(n) A(n - x)` with `A(t) = ∫ f(y) f(y + t) dy` for a
//! positive continuous bump `f` supported on `(-h, h)`.

use serde::{Deserialize, Serialize};

use crate::chain::{make_mu, make_v};
use crate::error::{Error, Result};
use crate::group::{Domain, LatticePotential};
use crate::quadrature::{integrate_between, GaussLegendre};
use crate::scalar::Real;

const RULE_ORDER: usize = 32;

#[derive(Debug, Clone, PartialEq)]
pub enum BumpKind<T> {
    /// `f(y) = cos(pi y / (2h))`.
    Cosine,
    /// Piecewise linear through `values` on a uniform grid over `[-h, h]`.
    Tabulated { values: Vec<T> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct BumpFunction<T> {
    kind: BumpKind<T>,
    half_width: T,
}

impl<T: Real> BumpFunction<T> {
    /// `cos(pi y)` on `(-1/2, 1/2)`.
    pub fn cosine() -> Self {
        Self::cosine_with_half_width(T::lit(0.5))
    }

    pub fn cosine_with_half_width(half_width: T) -> Self {
        assert!(half_width > T::zero(), "bump half-width must be positive");
        Self {
            kind: BumpKind::Cosine,
            half_width,
        }
    }

    /// Interior grid values must be positive; the endpoint values may be zero.
    pub fn tabulated(values: Vec<T>, half_width: T) -> Result<Self> {
        if values.len() < 3 {
            return Err(Error::Invalid("tabulated bump needs at least 3 grid values".into()));
        }
        if !(half_width > T::zero()) {
            return Err(Error::Invalid("bump half-width must be positive".into()));
        }
        let last = values.len() - 1;
        for (i, &v) in values.iter().enumerate() {
            let interior = i != 0 && i != last;
            if !v.is_finite() || v < T::zero() || (interior && v == T::zero()) {
                return Err(Error::Invalid(format!("bump value {v} at grid index {i}")));
            }
        }
        Ok(Self {
            kind: BumpKind::Tabulated { values },
            half_width,
        })
    }

    pub fn kind(&self) -> &BumpKind<T> {
        &self.kind
    }

    pub fn half_width(&self) -> T {
        self.half_width
    }

    pub fn eval(&self, y: T) -> T {
        let h = self.half_width;
        if y.abs() >= h {
            return T::zero();
        }
        match &self.kind {
            BumpKind::Cosine => (T::FRAC_PI_2() * y / h).cos(),
            BumpKind::Tabulated { values } => {
                let cells = T::of_usize(values.len() - 1);
                let pos = (y + h) / (T::lit(2.0) * h) * cells;
                let i = pos.floor().to_usize().unwrap_or(0).min(values.len() - 2);
                let frac = pos - T::of_usize(i);
                values[i] * (T::one() - frac) + values[i + 1] * frac
            }
        }
    }

    /// Points where `f` is not smooth.
    fn kinks(&self) -> Vec<T> {
        let h = self.half_width;
        match &self.kind {
            BumpKind::Cosine => vec![-h, h],
            BumpKind::Tabulated { values } => {
                let cells = values.len() - 1;
                (0..=cells)
                    .map(|i| -h + T::lit(2.0) * h * T::of_usize(i) / T::of_usize(cells))
                    .collect()
            }
        }
    }
}

fn sorted_unique<T: Real>(mut v: Vec<T>) -> Vec<T> {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    v.dedup_by(|a, b| (*a - *b).abs() <= T::epsilon() * T::lit(16.0) * T::one().max(a.abs()));
    v
}

/// `A(t) = ∫ f(y) f(y + t) dy`; zero for `|t| >= 2h`.
///
/// Closed form for the cosine bump; otherwise Gauss–Legendre between the
/// kinks of both factors, which is exact for piecewise linear tables.
pub fn autocorr_f<T: Real>(f: &BumpFunction<T>, t: T) -> T {
    let h = f.half_width();
    let t = t.abs();
    if t >= T::lit(2.0) * h {
        return T::zero();
    }
    match f.kind() {
        BumpKind::Cosine => {
            let a = T::FRAC_PI_2() / h;
            ((T::lit(2.0) * h - t) * (a * t).cos() + (a * t).sin() / a) / T::lit(2.0)
        }
        BumpKind::Tabulated { .. } => {
            let rule = GaussLegendre::new(8);
            let mut breaks: Vec<T> = f.kinks();
            breaks.extend(f.kinks().into_iter().map(|k| k - t));
            let breaks: Vec<T> = sorted_unique(breaks)
                .into_iter()
                .filter(|&b| b >= -h && b <= h - t)
                .collect();
            integrate_between(&rule, &breaks, |y| f.eval(y) * f.eval(y + t))
        }
    }
}

/// `W` built from a line kernel and a bump.
#[derive(Debug, Clone, PartialEq)]
pub struct ContinuumPotential<T> {
    lattice: LatticePotential<T>,
    bump: BumpFunction<T>,
}

impl<T: Real> ContinuumPotential<T> {
    pub fn new(lattice: LatticePotential<T>, bump: BumpFunction<T>) -> Result<Self> {
        match lattice.domain() {
            Domain::Line { .. } => Ok(Self { lattice, bump }),
            Domain::Cyclic { .. } => Err(Error::NeedsLine),
        }
    }

    /// The smoothed chain potential with the given bump.
    pub fn chain(bump: BumpFunction<T>) -> Self {
        Self::new(make_v(), bump).expect("V is a line kernel")
    }

    pub fn lattice(&self) -> &LatticePotential<T> {
        &self.lattice
    }

    pub fn bump(&self) -> &BumpFunction<T> {
        &self.bump
    }

    pub fn autocorr(&self, t: T) -> T {
        autocorr_f(&self.bump, t)
    }

    /// `W(x) = 0` for `|x|` at or beyond this radius.
    pub fn support_radius(&self) -> T {
        let r = match self.lattice.domain() {
            Domain::Line { halfwidth } => halfwidth,
            Domain::Cyclic { .. } => unreachable!(),
        };
        T::of_usize(r) + T::lit(2.0) * self.bump.half_width()
    }

    pub fn eval(&self, x: T) -> T {
        if x.abs() >= self.support_radius() {
            return T::zero();
        }
        self.lattice
            .iter()
            .filter(|(_, v)| *v != T::zero())
            .map(|(n, v)| v * self.autocorr(T::of_i64(n) - x))
            .sum()
    }

    /// `A` sampled at `points` equispaced nodes over `[-2h, 2h]`.
    pub fn tabulate_autocorr(&self, points: usize) -> Vec<(T, T)> {
        let reach = T::lit(2.0) * self.bump.half_width();
        let points = points.max(2);
        (0..points)
            .map(|i| {
                let t = -reach + T::lit(2.0) * reach * T::of_usize(i) / T::of_usize(points - 1);
                (t, self.autocorr(t))
            })
            .collect()
    }

    /// `(x, W(x))` on `from, from + step, ...` up to `to` inclusive.
    pub fn sample(&self, from: T, to: T, step: T) -> Result<Vec<(T, T)>> {
        if !(step > T::zero()) || !(to >= from) {
            return Err(Error::Invalid("grid needs step > 0 and to >= from".into()));
        }
        let count = ((to - from) / step + T::lit(1e-9)).floor().to_usize().unwrap_or(0);
        Ok((0..=count)
            .map(|i| {
                let x = from + step * T::of_usize(i);
                (x, self.eval(x))
            })
            .collect())
    }
}

/// Finite sum of weighted point masses on the line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomicMeasure<T> {
    points: Vec<T>,
    weights: Vec<T>,
}

impl<T: Real> AtomicMeasure<T> {
    pub fn new(points: Vec<T>, weights: Vec<T>) -> Result<Self> {
        if points.len() != weights.len() {
            return Err(Error::Invalid(format!(
                "{} points but {} weights",
                points.len(),
                weights.len()
            )));
        }
        if points.iter().any(|p| !p.is_finite()) {
            return Err(Error::Invalid("non-finite atom position".into()));
        }
        if let Some(i) = weights.iter().position(|&w| !(w > T::zero()) || !w.is_finite()) {
            return Err(Error::Invalid(format!("atom weight at {i} must be positive")));
        }
        Ok(Self { points, weights })
    }

    /// Unit atoms at the given positions.
    pub fn unit(points: Vec<T>) -> Result<Self> {
        let w = vec![T::one(); points.len()];
        Self::new(points, w)
    }

    pub fn points(&self) -> &[T] {
        &self.points
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn iter(&self) -> impl Iterator<Item = (T, T)> + '_ {
        self.points.iter().copied().zip(self.weights.iter().copied())
    }
}

/// Both evaluations of `E = ∫∫ rho(x) W(x - y) rho(y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomicEnergy<T> {
    /// `sum_{i,j} w_i w_j W(x_i - x_j)`.
    pub double_sum: T,
    /// `sum_n V(n) ∫ rho_f(x + n) rho_f(x) dx` with `rho_f = sum_j w_j f(. - x_j)`.
    pub smoothed: T,
}

impl<T: Real> AtomicEnergy<T> {
    pub fn value(&self) -> T {
        self.double_sum
    }
}

pub const ENERGY_PATH_TOL: f64 = 1e-6;

/// Energy of an atomic measure, computed along two independent routes that must agree.
pub fn energy_atomic<T: Real>(rho: &AtomicMeasure<T>, w: &ContinuumPotential<T>) -> Result<AtomicEnergy<T>> {
    let double_sum: T = rho
        .iter()
        .map(|(xi, wi)| rho.iter().map(|(xj, wj)| wi * wj * w.eval(xi - xj)).sum::<T>())
        .sum();
    let smoothed = smoothed_energy(rho, w);
    let gap = (double_sum - smoothed).abs();
    if gap > T::lit(ENERGY_PATH_TOL) * T::one().max(double_sum.abs()) {
        return Err(Error::Inconsistent(format!(
            "energy paths disagree: double sum {double_sum}, smoothed {smoothed}"
        )));
    }
    Ok(AtomicEnergy {
        double_sum,
        smoothed,
    })
}

fn smoothed_energy<T: Real>(rho: &AtomicMeasure<T>, w: &ContinuumPotential<T>) -> T {
    if rho.points().is_empty() {
        return T::zero();
    }
    let f = w.bump();
    let rho_f = |x: T| -> T { rho.iter().map(|(xj, wj)| wj * f.eval(x - xj)).sum() };
    let kinks = f.kinks();
    let rule = GaussLegendre::new(RULE_ORDER);
    w.lattice()
        .iter()
        .filter(|(_, v)| *v != T::zero())
        .map(|(n, v)| {
            let shift = T::of_i64(n);
            let mut breaks = Vec::with_capacity(rho.points().len() * kinks.len() * 2);
            for &xj in rho.points() {
                for &k in &kinks {
                    breaks.push(xj + k);
                    breaks.push(xj + k - shift);
                }
            }
            let breaks = sorted_unique(breaks);
            v * integrate_between(&rule, &breaks, |x| rho_f(x + shift) * rho_f(x))
        })
        .sum()
}

/// `∫ W mu_D = sum_{|m| <= 5P+2} mu(m) W(m)` for the golden measure placed on the integers.
pub fn pair_mu_d<T: Real>(w: &ContinuumPotential<T>, periods: usize) -> T {
    let mu = make_mu::<T>(periods);
    let off = mu.offset();
    mu.weights()
        .iter()
        .enumerate()
        .filter(|(_, &m)| m != T::zero())
        .map(|(i, &m)| m * w.eval(T::of_i64(off + i as i64)))
        .sum()
}

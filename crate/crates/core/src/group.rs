//! Harmonic analysis on the cyclic group `Z_n` and on finitely supported
//! sequences over `Z`: cosine transforms, convolution, autocorrelation and
//! folding of line sequences onto a cycle.
//!
//! The forward transform is unnormalized, `p^(k) = sum_m p(m) e^{-2 pi i k m / n}`,
//! and computed naively in `O(n^2)`. For even kernels the imaginary part
//! vanishes, so a [`Spectrum`] stores real coefficients only. A continuous
//! transform of a periodic measure differs from these coefficients by the
//! factor `2 pi / n` in front of each delta.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{cos_turn, sin_turn, Real};

/// Where a kernel lives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Domain {
    /// `Z_n`, values indexed `0..n`.
    Cyclic { n: usize },
    /// `Z` with values on `-halfwidth..=halfwidth`, zero elsewhere.
    Line { halfwidth: usize },
}

/// Even real kernel on `Z_n` (circulant) or on `Z` with finite support (Toeplitz).
#[derive(Debug, Clone, PartialEq)]
pub struct LatticePotential<T> {
    domain: Domain,
    values: Vec<T>,
}

fn check_finite<T: Real>(values: &[T]) -> Result<()> {
    match values.iter().position(|v| !v.is_finite()) {
        Some(i) => Err(Error::Invalid(format!("non-finite value at position {i}"))),
        None => Ok(()),
    }
}

/// Checks `values[i] ~ values[mirror(i)]` and replaces both by their mean.
fn symmetrize<T: Real>(values: &mut [T], mirror: impl Fn(usize) -> usize) -> Result<()> {
    let tol = T::lit(T::SYMMETRY_TOL);
    for i in 0..values.len() {
        let j = mirror(i);
        if j <= i {
            continue;
        }
        let (a, b) = (values[i], values[j]);
        let scale = T::one().max(a.abs()).max(b.abs());
        let asym = (a - b).abs();
        if asym > tol * scale {
            return Err(Error::NotEven {
                index: i,
                asymmetry: asym.as_f64(),
            });
        }
        let mean = (a + b) / T::lit(2.0);
        values[i] = mean;
        values[j] = mean;
    }
    Ok(())
}

impl<T: Real> LatticePotential<T> {
    /// Kernel on `Z_n` with `values[k] = p(k)`. Requires `n >= 2` and `p(k) = p(n-k)`.
    pub fn cyclic(values: Vec<T>) -> Result<Self> {
        let n = values.len();
        if n < 2 {
            return Err(Error::Invalid(format!("cyclic modulus must be >= 2, got {n}")));
        }
        check_finite(&values)?;
        let mut values = values;
        symmetrize(&mut values, |i| (n - i) % n)?;
        Ok(Self {
            domain: Domain::Cyclic { n },
            values,
        })
    }

    /// Kernel on `Z` given by its `2r+1` central values `p(-r), ..., p(r)`.
    pub fn line(values: Vec<T>) -> Result<Self> {
        let len = values.len();
        if len % 2 == 0 {
            return Err(Error::Invalid(format!(
                "line kernel needs an odd number of centered values, got {len}"
            )));
        }
        check_finite(&values)?;
        let mut values = values;
        symmetrize(&mut values, |i| len - 1 - i)?;
        Ok(Self {
            domain: Domain::Line {
                halfwidth: len / 2,
            },
            values,
        })
    }

    /// Line kernel from its values at `0, 1, ..., r` (mirrored to negative indices).
    pub fn line_from_half(half: &[T]) -> Result<Self> {
        if half.is_empty() {
            return Err(Error::Invalid("empty half kernel".into()));
        }
        let mut values: Vec<T> = half.iter().rev().copied().collect();
        values.extend_from_slice(&half[1..]);
        Self::line(values)
    }

    /// Unit mass at the origin.
    pub fn delta_cyclic(n: usize) -> Result<Self> {
        let mut v = vec![T::zero(); n];
        if let Some(first) = v.first_mut() {
            *first = T::one();
        }
        Self::cyclic(v)
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    /// Raw storage: `p(0..n)` for cyclic, `p(-r..=r)` for line.
    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn modulus(&self) -> Option<usize> {
        match self.domain {
            Domain::Cyclic { n } => Some(n),
            Domain::Line { .. } => None,
        }
    }

    /// Value at group element `k` (reduced modulo `n`, or zero outside the line support).
    pub fn value(&self, k: i64) -> T {
        match self.domain {
            Domain::Cyclic { n } => self.values[k.rem_euclid(n as i64) as usize],
            Domain::Line { halfwidth } => {
                let r = halfwidth as i64;
                if k.abs() > r {
                    T::zero()
                } else {
                    self.values[(k + r) as usize]
                }
            }
        }
    }

    /// Iterates `(k, p(k))` over the stored support.
    pub fn iter(&self) -> impl Iterator<Item = (i64, T)> + '_ {
        let shift = match self.domain {
            Domain::Cyclic { .. } => 0,
            Domain::Line { halfwidth } => halfwidth as i64,
        };
        self.values
            .iter()
            .enumerate()
            .map(move |(i, &v)| (i as i64 - shift, v))
    }

    pub fn min_value(&self) -> T {
        self.values.iter().copied().fold(T::infinity(), T::min)
    }

    pub fn sum(&self) -> T {
        self.values.iter().copied().sum()
    }

    /// Pointwise map keeping the domain; the result is re-checked for evenness.
    pub fn map(&self, f: impl Fn(T) -> T) -> Result<Self> {
        let values = self.values.iter().map(|&v| f(v)).collect();
        match self.domain {
            Domain::Cyclic { .. } => Self::cyclic(values),
            Domain::Line { .. } => Self::line(values),
        }
    }

    /// `self - other` on a common cyclic domain.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.domain != other.domain {
            return Err(Error::DomainMismatch(format!(
                "{:?} vs {:?}",
                self.domain, other.domain
            )));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| a - b)
            .collect();
        match self.domain {
            Domain::Cyclic { .. } => Self::cyclic(values),
            Domain::Line { .. } => Self::line(values),
        }
    }
}

/// Where the weights of a density sit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Support {
    Cyclic { n: usize },
    /// `weights[i]` sits at lattice site `offset + i`.
    Line { offset: i64 },
}

/// Nonnegative finitely supported weight function.
#[derive(Debug, Clone, PartialEq)]
pub struct Density<T> {
    support: Support,
    weights: Vec<T>,
}

fn check_nonnegative<T: Real>(weights: &[T]) -> Result<()> {
    check_finite(weights)?;
    match weights.iter().position(|&w| w < T::zero()) {
        Some(index) => Err(Error::NegativeWeight {
            index,
            value: weights[index].as_f64(),
        }),
        None => Ok(()),
    }
}

impl<T: Real> Density<T> {
    pub fn cyclic(weights: Vec<T>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Invalid("cyclic density needs n >= 1 weights".into()));
        }
        check_nonnegative(&weights)?;
        Ok(Self {
            support: Support::Cyclic { n: weights.len() },
            weights,
        })
    }

    /// Line density with `weights[0]` at site 0.
    pub fn line(weights: Vec<T>) -> Result<Self> {
        Self::line_at(0, weights)
    }

    pub fn line_at(offset: i64, weights: Vec<T>) -> Result<Self> {
        check_nonnegative(&weights)?;
        Ok(Self {
            support: Support::Line { offset },
            weights,
        })
    }

    pub fn support(&self) -> Support {
        self.support
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    /// First occupied site of a line density (the cyclic origin otherwise).
    pub fn offset(&self) -> i64 {
        match self.support {
            Support::Cyclic { .. } => 0,
            Support::Line { offset } => offset,
        }
    }

    pub fn weight(&self, site: i64) -> T {
        match self.support {
            Support::Cyclic { n } => self.weights[site.rem_euclid(n as i64) as usize],
            Support::Line { offset } => {
                let i = site - offset;
                if i < 0 || i >= self.weights.len() as i64 {
                    T::zero()
                } else {
                    self.weights[i as usize]
                }
            }
        }
    }

    pub fn total(&self) -> T {
        self.weights.iter().copied().sum()
    }

    /// Whether `rho(m) = rho(-m)` holds to the symmetry tolerance.
    pub fn is_even(&self) -> bool {
        let tol = T::lit(T::SYMMETRY_TOL);
        match self.support {
            Support::Cyclic { n } => (0..n).all(|m| {
                let (a, b) = (self.weights[m], self.weights[(n - m) % n]);
                (a - b).abs() <= tol * T::one().max(a.abs())
            }),
            Support::Line { offset } => {
                let lo = offset.min(-(offset + self.weights.len() as i64 - 1));
                let hi = -lo;
                (lo..=hi).all(|m| {
                    let (a, b) = (self.weight(m), self.weight(-m));
                    (a - b).abs() <= tol * T::one().max(a.abs())
                })
            }
        }
    }

    /// Real part of the transform on `Z_n` and a flag telling whether the input was even
    /// (in which case the imaginary part vanishes and nothing was discarded).
    pub fn dft(&self) -> Result<(Spectrum<T>, bool)> {
        match self.support {
            Support::Cyclic { .. } => Ok((
                Spectrum::new(cosine_transform(&self.weights)),
                self.is_even(),
            )),
            Support::Line { .. } => Err(Error::NeedsCyclic),
        }
    }

    /// `|rho^(k)|^2` on `Z_n`, using both the cosine and sine parts.
    pub fn power_spectrum(&self) -> Result<Vec<T>> {
        let Support::Cyclic { n } = self.support else {
            return Err(Error::NeedsCyclic);
        };
        Ok((0..n)
            .map(|k| {
                let (mut re, mut im) = (T::zero(), T::zero());
                for (m, &w) in self.weights.iter().enumerate() {
                    re = re + w * cos_turn::<T>(k, m, n);
                    im = im - w * sin_turn::<T>(k, m, n);
                }
                re * re + im * im
            })
            .collect())
    }

    /// Folds onto `Z_n`: `out(k) = sum_j rho(k + j n)`.
    pub fn wrap(&self, n: usize) -> Result<Density<T>> {
        match self.support {
            Support::Cyclic { .. } => Err(Error::NeedsLine),
            Support::Line { offset } => {
                if n == 0 {
                    return Err(Error::Invalid("wrap modulus must be positive".into()));
                }
                let mut out = vec![T::zero(); n];
                for (i, &w) in self.weights.iter().enumerate() {
                    let k = (offset + i as i64).rem_euclid(n as i64) as usize;
                    out[k] = out[k] + w;
                }
                Density::cyclic(out)
            }
        }
    }

    /// Views an even density as a kernel (used when a measure is paired against a potential).
    pub fn to_potential(&self) -> Result<LatticePotential<T>> {
        match self.support {
            Support::Cyclic { .. } => LatticePotential::cyclic(self.weights.clone()),
            Support::Line { offset } => {
                let end = offset + self.weights.len() as i64 - 1;
                let r = offset.abs().max(end.abs());
                LatticePotential::line((-r..=r).map(|m| self.weight(m)).collect())
            }
        }
    }
}

/// Real transform coefficients of an even kernel on `Z_n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum<T> {
    coefficients: Vec<T>,
}

impl<T: Real> Spectrum<T> {
    pub fn new(coefficients: Vec<T>) -> Self {
        Self { coefficients }
    }

    pub fn modulus(&self) -> usize {
        self.coefficients.len()
    }

    pub fn coefficients(&self) -> &[T] {
        &self.coefficients
    }

    pub fn min(&self) -> T {
        self.coefficients
            .iter()
            .copied()
            .fold(T::infinity(), T::min)
    }

    /// Inverse transform back to an even kernel.
    pub fn inverse(&self) -> Result<LatticePotential<T>> {
        LatticePotential::cyclic(inverse_cosine_transform(&self.coefficients))
    }
}

/// `c_k = sum_m v_m cos(2 pi k m / n)`.
pub fn cosine_transform<T: Real>(values: &[T]) -> Vec<T> {
    let n = values.len();
    (0..n)
        .map(|k| {
            values
                .iter()
                .enumerate()
                .map(|(m, &v)| v * cos_turn::<T>(k, m, n))
                .sum()
        })
        .collect()
}

/// Inverse of [`cosine_transform`] for even sequences: `v_m = (1/n) sum_k c_k cos(2 pi k m / n)`.
pub fn inverse_cosine_transform<T: Real>(coefficients: &[T]) -> Vec<T> {
    let n = coefficients.len();
    let scale = T::one() / T::of_usize(n.max(1));
    (0..n)
        .map(|m| {
            scale
                * coefficients
                    .iter()
                    .enumerate()
                    .map(|(k, &c)| c * cos_turn::<T>(k, m, n))
                    .sum::<T>()
        })
        .collect()
}

/// Transform of an even cyclic kernel.
pub fn dft<T: Real>(p: &LatticePotential<T>) -> Result<Spectrum<T>> {
    match p.domain() {
        Domain::Cyclic { .. } => Ok(Spectrum::new(cosine_transform(p.values()))),
        Domain::Line { .. } => Err(Error::NeedsCyclic),
    }
}

pub fn inverse_dft<T: Real>(s: &Spectrum<T>) -> Result<LatticePotential<T>> {
    s.inverse()
}

/// Correlation measure `mu(k) = sum_m rho(m) rho(m + k)`.
///
/// On the line the output half-width equals the support width `len - 1`.
pub fn autocorrelate<T: Real>(rho: &Density<T>) -> LatticePotential<T> {
    let w = rho.weights();
    match rho.support() {
        Support::Cyclic { n } => {
            let values = (0..n)
                .map(|k| {
                    let k = k.min(n - k);
                    (0..n).map(|m| w[m] * w[(m + k) % n]).sum()
                })
                .collect();
            LatticePotential::cyclic(values).expect("autocorrelation is even")
        }
        Support::Line { .. } => {
            let len = w.len().max(1);
            let half: Vec<T> = (0..len)
                .map(|k| (0..w.len().saturating_sub(k)).map(|m| w[m] * w[m + k]).sum())
                .collect();
            LatticePotential::line_from_half(&half).expect("autocorrelation is even")
        }
    }
}

/// Cyclic convolution of two length-`n` sequences.
pub fn cyclic_convolution<T: Real>(a: &[T], b: &[T]) -> Result<Vec<T>> {
    if a.len() != b.len() {
        return Err(Error::DomainMismatch(format!(
            "Z_{} vs Z_{}",
            a.len(),
            b.len()
        )));
    }
    let n = a.len();
    Ok((0..n)
        .map(|k| (0..n).map(|m| a[m] * b[(k + n - m) % n]).sum())
        .collect())
}

/// Full linear convolution; the output starts at the sum of the input offsets.
pub fn line_convolution<T: Real>(a: &[T], b: &[T]) -> Vec<T> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![T::zero(); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = out[i + j] + x * y;
        }
    }
    out
}

/// Convolution of two kernels on the same domain.
pub fn convolve<T: Real>(
    a: &LatticePotential<T>,
    b: &LatticePotential<T>,
) -> Result<LatticePotential<T>> {
    match (a.domain(), b.domain()) {
        (Domain::Cyclic { n }, Domain::Cyclic { n: m }) if n == m => {
            LatticePotential::cyclic(cyclic_convolution(a.values(), b.values())?)
        }
        (Domain::Line { .. }, Domain::Line { .. }) => {
            LatticePotential::line(line_convolution(a.values(), b.values()))
        }
        (x, y) => Err(Error::DomainMismatch(format!("{x:?} vs {y:?}"))),
    }
}

/// Convolution of two densities on the same domain.
pub fn convolve_densities<T: Real>(a: &Density<T>, b: &Density<T>) -> Result<Density<T>> {
    match (a.support(), b.support()) {
        (Support::Cyclic { n }, Support::Cyclic { n: m }) if n == m => {
            Density::cyclic(cyclic_convolution(a.weights(), b.weights())?)
        }
        (Support::Line { offset: oa }, Support::Line { offset: ob }) => {
            Density::line_at(oa + ob, line_convolution(a.weights(), b.weights()))
        }
        (x, y) => Err(Error::DomainMismatch(format!("{x:?} vs {y:?}"))),
    }
}

/// Folds a line kernel onto `Z_n`: `out(k) = sum_j p(k + j n)`.
pub fn wrap<T: Real>(p: &LatticePotential<T>, n: usize) -> Result<LatticePotential<T>> {
    let Domain::Line { halfwidth } = p.domain() else {
        return Err(Error::NeedsLine);
    };
    if n < 2 {
        return Err(Error::Invalid(format!("wrap modulus must be >= 2, got {n}")));
    }
    let r = halfwidth as i64;
    let mut out = vec![T::zero(); n];
    for (i, &v) in p.values().iter().enumerate() {
        let k = (i as i64 - r).rem_euclid(n as i64) as usize;
        out[k] = out[k] + v;
    }
    LatticePotential::cyclic(out)
}

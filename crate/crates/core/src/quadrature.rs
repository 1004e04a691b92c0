//! Gauss–Legendre rules and a bisection-refined integrator built on them.

use crate::scalar::Real;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre<T> {
    nodes: Vec<T>,
    weights: Vec<T>,
}

impl<T: Real> GaussLegendre<T> {
    /// Roots of `P_n` by Newton iteration from the Tricomi initial guesses.
    pub fn new(order: usize) -> Self {
        assert!(order >= 1, "quadrature order must be positive");
        let n = order;
        let mut nodes = vec![T::zero(); n];
        let mut weights = vec![T::zero(); n];
        let two = T::lit(2.0);
        for i in 0..(n + 1) / 2 {
            let mut x = (T::PI() * (T::of_usize(i) + T::lit(0.75)) / (T::of_usize(n) + T::lit(0.5))).cos();
            let mut dp = T::one();
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x = x - dx;
                if dx.abs() <= T::epsilon() * T::lit(4.0) {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != T::zero() {
                dp = d;
            }
            let w = two / ((T::one() - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn integrate(&self, a: T, b: T, mut f: impl FnMut(T) -> T) -> T {
        let half = (b - a) / T::lit(2.0);
        let mid = (a + b) / T::lit(2.0);
        let s: T = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(mid + half * x))
            .sum();
        s * half
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre<T: Real>(n: usize, x: T) -> (T, T) {
    let (mut p0, mut p1) = (T::one(), x);
    if n == 0 {
        return (p0, T::zero());
    }
    for k in 2..=n {
        let k = T::of_usize(k);
        let p2 = ((T::lit(2.0) * k - T::one()) * x * p1 - (k - T::one()) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let nn = T::of_usize(n);
    let d = nn * (x * p1 - p0) / (x * x - T::one());
    (p1, d)
}

/// Integral value with an error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<T> {
    pub value: T,
    pub error: T,
}

/// Integrates over `[a, b]`, cut into unit-length pieces, each compared against
/// its two halves and bisected further while the difference exceeds its share of `tol`.
pub fn integrate_refined<T: Real>(
    rule: &GaussLegendre<T>,
    a: T,
    b: T,
    tol: T,
    max_depth: usize,
    f: &impl Fn(T) -> T,
) -> Estimate<T> {
    if !(b > a) {
        return Estimate {
            value: T::zero(),
            error: T::zero(),
        };
    }
    let pieces = (b - a).ceil().to_usize().unwrap_or(1).max(1);
    let h = (b - a) / T::of_usize(pieces);
    let share = tol / T::of_usize(pieces);
    let mut out = Estimate {
        value: T::zero(),
        error: T::zero(),
    };
    for i in 0..pieces {
        let lo = a + h * T::of_usize(i);
        let hi = if i + 1 == pieces { b } else { lo + h };
        let whole = rule.integrate(lo, hi, f);
        let e = refine(rule, lo, hi, whole, share, max_depth, f);
        out.value = out.value + e.value;
        out.error = out.error + e.error;
    }
    out
}

fn refine<T: Real>(
    rule: &GaussLegendre<T>,
    a: T,
    b: T,
    whole: T,
    tol: T,
    depth: usize,
    f: &impl Fn(T) -> T,
) -> Estimate<T> {
    let mid = (a + b) / T::lit(2.0);
    let left = rule.integrate(a, mid, f);
    let right = rule.integrate(mid, b, f);
    let split = left + right;
    let error = (split - whole).abs();
    if error <= tol || depth == 0 {
        return Estimate { value: split, error };
    }
    let half = tol / T::lit(2.0);
    let l = refine(rule, a, mid, left, half, depth - 1, f);
    let r = refine(rule, mid, b, right, half, depth - 1, f);
    Estimate {
        value: l.value + r.value,
        error: l.error + r.error,
    }
}

/// Sums a fixed rule over the consecutive intervals between sorted `breaks`.
pub fn integrate_between<T: Real>(rule: &GaussLegendre<T>, breaks: &[T], f: impl Fn(T) -> T) -> T {
    breaks
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| rule.integrate(w[0], w[1], &f))
        .sum()
}

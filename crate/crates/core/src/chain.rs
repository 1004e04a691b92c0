//! The chain potential `V` on `Z`, the golden measure `mu`, lattice energies
//! and the cutting certificate that proves `E(rho) >= 0` for every
//! nonnegative finitely supported `rho`.
//!
//! A cut between sites `c` and `c + 1` removes the interaction across it,
//! `2[-rho(c) rho(c+1) + rho(c-1) rho(c+1) + rho(c) rho(c+2)]`. It is taken
//! only where that loss is provably nonnegative: with `n = c - 1` when
//! `rho(n) >= rho(n+1)`, or with `n = c + 2` when `rho(n-1) <= rho(n)`.
//! Repeating this leaves pieces of at most three sites whose energy is the
//! square `(rho(n-1) - rho(n) + rho(n+1))^2`.

use serde::ser::{Serialize, SerializeSeq, SerializeStruct, Serializer};

use crate::error::{Error, Result};
use crate::group::{Density, LatticePotential, Support};
use crate::scalar::{golden_conjugate, Real};

/// `V(0) = V(+-2) = 1`, `V(+-1) = -1`, zero elsewhere.
pub fn make_v<T: Real>() -> LatticePotential<T> {
    let (one, neg) = (T::one(), -T::one());
    LatticePotential::line(vec![one, neg, one, neg, one]).expect("even by construction")
}

/// The measure `mu(5j) = 1`, `mu(5j +- 1) = gamma`, `mu(5j +- 2) = 0` on `[-5P-2, 5P+2]`.
pub fn make_mu<T: Real>(periods: usize) -> Density<T> {
    let g = golden_conjugate::<T>();
    let reach = 5 * periods as i64 + 2;
    let weights = (-reach..=reach)
        .map(|m| match m.rem_euclid(5) {
            0 => T::one(),
            1 | 4 => g,
            _ => T::zero(),
        })
        .collect();
    Density::line_at(-reach, weights).expect("nonnegative by construction")
}

/// `E(rho) = sum_m sum_n rho(m) p(m - n) rho(n)`, self-energies included.
pub fn energy<T: Real>(rho: &Density<T>, p: &LatticePotential<T>) -> T {
    let w = rho.weights();
    let off = rho.offset();
    let mut e = T::zero();
    for (i, &a) in w.iter().enumerate() {
        if a == T::zero() {
            continue;
        }
        for (j, &b) in w.iter().enumerate() {
            if b != T::zero() {
                e = e + a * p.value((off + i as i64) - (off + j as i64)) * b;
            }
        }
    }
    e
}

/// `sum_n V(n) mu(n)`.
pub fn pairing<T: Real>(v: &LatticePotential<T>, mu: &Density<T>) -> T {
    v.iter().map(|(k, val)| val * mu.weight(k)).sum()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cut<T> {
    /// The cut separates site `position` from `position + 1`.
    pub position: i64,
    pub loss: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Piece<T> {
    pub start: i64,
    pub weights: Vec<T>,
    pub center: i64,
    /// `rho(center - 1) - rho(center) + rho(center + 1)` with zero padding.
    pub root: T,
    pub energy: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CutCertificate<T> {
    pub cuts: Vec<Cut<T>>,
    pub pieces: Vec<Piece<T>>,
    /// `E(rho)` computed directly from the double sum.
    pub total: T,
}

impl<T: Real> CutCertificate<T> {
    pub fn loss_sum(&self) -> T {
        self.cuts.iter().map(|c| c.loss).sum()
    }

    pub fn piece_sum(&self) -> T {
        self.pieces.iter().map(|p| p.energy).sum()
    }

    /// Checks every invariant against the raw density.
    pub fn validate(&self, rho: &Density<T>, tol: T) -> Result<()> {
        let bad = |msg: String| Err(Error::Inconsistent(msg));
        if let Some(c) = self.cuts.iter().find(|c| c.loss < -tol) {
            return bad(format!("cut at {} has loss {}", c.position, c.loss));
        }
        let mut next_site: Option<i64> = None;
        for piece in &self.pieces {
            let len = piece.weights.len();
            if len == 0 || len > 3 {
                return bad(format!("piece at {} spans {len} sites", piece.start));
            }
            if let Some(s) = next_site {
                if piece.start != s {
                    return bad(format!("pieces not contiguous at {}", piece.start));
                }
            }
            next_site = Some(piece.start + len as i64);
            for (i, &w) in piece.weights.iter().enumerate() {
                if w != rho.weight(piece.start + i as i64) {
                    return bad(format!("piece weight mismatch at {}", piece.start + i as i64));
                }
            }
            if len == 3 && !(piece.weights[0] <= piece.weights[1] && piece.weights[1] >= piece.weights[2]) {
                return bad(format!("piece at {} not unimodal", piece.start));
            }
            let sq = piece.root * piece.root;
            let scale = T::one().max(sq);
            if (piece.energy - sq).abs() > T::lit(1e-12) * scale || piece.energy < T::zero() {
                return bad(format!("piece energy {} is not the square {sq}", piece.energy));
            }
        }
        let e = energy(rho, &make_v());
        if (e - self.total).abs() > tol * T::one().max(e.abs()) {
            return bad(format!("stored total {} differs from E = {e}", self.total));
        }
        let sum = self.loss_sum() + self.piece_sum();
        if (sum - e).abs() > tol * T::one().max(e.abs()) {
            return bad(format!("losses + squares = {sum} but E = {e}"));
        }
        Ok(())
    }
}

impl<T: Real + Serialize> Serialize for CutCertificate<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        struct Cuts<'a, T>(&'a [Cut<T>]);
        struct Pieces<'a, T>(&'a [Piece<T>]);
        impl<T: Real + Serialize> Serialize for Cuts<'_, T> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut seq = s.serialize_seq(Some(self.0.len()))?;
                for c in self.0 {
                    seq.serialize_element(&(c.position, c.loss))?;
                }
                seq.end()
            }
        }
        impl<T: Real + Serialize> Serialize for Pieces<'_, T> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut seq = s.serialize_seq(Some(self.0.len()))?;
                for p in self.0 {
                    seq.serialize_element(&(p.center, p.root, p.energy))?;
                }
                seq.end()
            }
        }
        let mut st = s.serialize_struct("CutCertificate", 3)?;
        st.serialize_field("cuts", &Cuts(&self.cuts))?;
        st.serialize_field("pieces", &Pieces(&self.pieces))?;
        st.serialize_field("total", &self.total)?;
        st.end()
    }
}

fn is_chain_potential<T: Real>(v: &LatticePotential<T>) -> bool {
    let reference = make_v::<T>();
    let reach = v.iter().map(|(k, _)| k.abs()).max().unwrap_or(0).max(2);
    v.modulus().is_none()
        && (-reach..=reach).all(|k| (v.value(k) - reference.value(k)).abs() <= T::lit(T::SYMMETRY_TOL))
}

/// Cross energy removed by cutting `[l, r]` between `c` and `c + 1`.
fn cut_loss<T: Real>(w: impl Fn(i64) -> T, c: i64) -> T {
    T::lit(2.0) * (-w(c) * w(c + 1) + w(c - 1) * w(c + 1) + w(c) * w(c + 2))
}

fn needs_cut<T: Real>(w: &impl Fn(i64) -> T, l: i64, r: i64) -> bool {
    let len = r - l + 1;
    len > 3 || (len == 3 && !(w(l) <= w(l + 1) && w(l + 1) >= w(r)))
}

/// Leftmost admissible cut inside `[l, r]`.
fn find_cut<T: Real>(w: &impl Fn(i64) -> T, l: i64, r: i64) -> Option<i64> {
    (l..r).find(|&c| {
        let right_rule = c - 1 >= l && w(c - 1) >= w(c);
        let left_rule = c + 2 <= r && w(c + 1) <= w(c + 2);
        right_rule || left_rule
    })
}

fn make_piece<T: Real>(rho: &Density<T>, l: i64, r: i64) -> Piece<T> {
    let weights: Vec<T> = (l..=r).map(|s| rho.weight(s)).collect();
    let center = match weights.len() {
        3 => l + 1,
        2 if weights[1] > weights[0] => l + 1,
        _ => l,
    };
    let w = |s: i64| if s < l || s > r { T::zero() } else { rho.weight(s) };
    let root = w(center - 1) - w(center) + w(center + 1);
    Piece {
        start: l,
        weights,
        center,
        root,
        energy: root * root,
    }
}

/// Executable stability proof for the chain potential `V`.
///
/// Cuts are taken leftmost first and the scan restarts after each cut; each
/// cut splits an interval into two nonempty parts, so the loop terminates.
pub fn cut_certificate<T: Real>(rho: &Density<T>, v: &LatticePotential<T>) -> Result<CutCertificate<T>> {
    if !matches!(rho.support(), Support::Line { .. }) {
        return Err(Error::NeedsLine);
    }
    if !is_chain_potential(v) {
        return Err(Error::NotChainPotential);
    }
    let total = energy(rho, v);
    let w = rho.weights();
    let first = w.iter().position(|&x| x > T::zero());
    let Some(first) = first else {
        return Ok(CutCertificate {
            cuts: Vec::new(),
            pieces: Vec::new(),
            total,
        });
    };
    let last = w.iter().rposition(|&x| x > T::zero()).expect("nonempty");
    let off = rho.offset();
    let mut intervals = vec![(off + first as i64, off + last as i64)];
    let mut cuts = Vec::new();
    loop {
        let Some(idx) = intervals.iter().position(|&(l, r)| {
            let restricted = |s: i64| if s < l || s > r { T::zero() } else { rho.weight(s) };
            needs_cut(&restricted, l, r)
        }) else {
            break;
        };
        let (l, r) = intervals[idx];
        let restricted = |s: i64| if s < l || s > r { T::zero() } else { rho.weight(s) };
        let c = find_cut(&restricted, l, r)
            .ok_or_else(|| Error::Inconsistent(format!("no admissible cut in [{l}, {r}]")))?;
        cuts.push(Cut {
            position: c,
            loss: cut_loss(restricted, c),
        });
        intervals.splice(idx..=idx, [(l, c), (c + 1, r)]);
    }
    let pieces = intervals
        .into_iter()
        .map(|(l, r)| make_piece(rho, l, r))
        .collect();
    Ok(CutCertificate {
        cuts,
        pieces,
        total,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::wrap;

    fn d(w: &[f64]) -> Density<f64> {
        Density::line(w.to_vec()).unwrap()
    }

    #[test]
    fn v_values() {
        let v = make_v::<f64>();
        assert_eq!(v.value(0), 1.0);
        assert_eq!(v.value(1), -1.0);
        assert_eq!(v.value(-1), -1.0);
        assert_eq!(v.value(2), 1.0);
        assert_eq!(v.value(-2), 1.0);
        assert_eq!(v.value(3), 0.0);
        assert_eq!(v.value(-3), 0.0);
        assert_eq!(wrap(&v, 5).unwrap().values(), &[1.0, -1.0, 1.0, 1.0, -1.0]);
    }

    #[test]
    fn mu_slices() {
        let g = golden_conjugate::<f64>();
        let m0 = make_mu::<f64>(0);
        assert_eq!(m0.offset(), -2);
        assert_eq!(m0.weights(), &[0.0, g, 1.0, g, 0.0]);
        let m1 = make_mu::<f64>(1);
        assert!(m1.weights().iter().all(|&x| x >= 0.0));
        let folded = m1.wrap(5).unwrap();
        let expect = [3.0, 3.0 * g, 0.0, 0.0, 3.0 * g];
        for (a, b) in folded.weights().iter().zip(expect) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn energy_examples() {
        let v = make_v::<f64>();
        assert_eq!(energy(&d(&[1.0]), &v), 1.0);
        assert_eq!(energy(&d(&[1.0, 1.0, 1.0]), &v), 1.0);
        assert_eq!(energy(&d(&[1.0, 2.0, 1.0]), &v), 0.0);
    }

    #[test]
    fn pairing_examples() {
        let v = make_v::<f64>();
        assert!((pairing(&v, &make_mu(0)) - (2.0 - 5f64.sqrt())).abs() < 1e-12);
        assert_eq!(pairing(&v, &d(&[1.0])), 1.0);
    }

    #[test]
    fn delta_has_single_piece() {
        let rho = d(&[1.0]);
        let c = cut_certificate(&rho, &make_v()).unwrap();
        assert!(c.cuts.is_empty());
        assert_eq!(c.pieces.len(), 1);
        assert_eq!(c.pieces[0].energy, 1.0);
        c.validate(&rho, 1e-9).unwrap();
    }

    #[test]
    fn valley_piece_is_cut() {
        let rho = d(&[3.0, 1.0, 2.0]);
        let c = cut_certificate(&rho, &make_v()).unwrap();
        assert_eq!(c.cuts.len(), 1);
        // leftmost admissible: rho(1) <= rho(2) allows cutting site 0 off
        assert_eq!(c.cuts[0].position, 0);
        assert_eq!(c.cuts[0].loss, 6.0);
        assert_eq!(c.total, 16.0);
        assert_eq!(c.total, energy(&rho, &make_v()));
        c.validate(&rho, 1e-9).unwrap();
    }

    #[test]
    fn other_kernels_rejected() {
        let rho = d(&[1.0]);
        let w = LatticePotential::line(vec![1.0, 0.5, 1.0]).unwrap();
        assert_eq!(cut_certificate(&rho, &w), Err(Error::NotChainPotential));
        let c = LatticePotential::cyclic(vec![1.0, -1.0, 1.0, 1.0, -1.0]).unwrap();
        assert_eq!(cut_certificate(&rho, &c), Err(Error::NotChainPotential));
    }

    #[test]
    fn empty_and_zero_densities() {
        let rho = d(&[0.0, 0.0]);
        let c = cut_certificate(&rho, &make_v()).unwrap();
        assert!(c.pieces.is_empty() && c.total == 0.0);
        c.validate(&rho, 1e-9).unwrap();
    }

    #[test]
    fn json_shape() {
        let rho = d(&[3.0, 1.0, 2.0]);
        let c = cut_certificate(&rho, &make_v()).unwrap();
        let j = serde_json::to_value(&c).unwrap();
        assert_eq!(j["cuts"][0][0], 0);
        assert_eq!(j["pieces"].as_array().unwrap().len(), 2);
        assert_eq!(j["total"], 16.0);
    }
}

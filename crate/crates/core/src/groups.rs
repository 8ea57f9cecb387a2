//! The groups O(n), SO(n) and Sp(n) in their defining representation, and
//! their tensor power actions on `(R^n)^{⊗k}`.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `‖gᵀg − I‖` bound for O(n) and SO(n).
pub const ORTHOGONAL_TOL: f64 = 1e-12;
/// `|det g − 1|` bound for SO(n).
pub const DETERMINANT_TOL: f64 = 1e-10;
/// `‖gᵀΩg − Ω‖` bound for Sp(n).
pub const SYMPLECTIC_TOL: f64 = 1e-8;

/// Scale applied to the random symmetric matrix before exponentiating into Sp(n).
const SYMPLECTIC_SAMPLE_SCALE: f64 = 0.1;
const EXPM_TOL: f64 = 1e-13;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GroupKind {
    O,
    SO,
    Sp,
}

impl GroupKind {
    /// Rejects `n = 0`, and odd `n` for Sp.
    pub fn check_dimension(self, n: usize) -> Result<()> {
        if n == 0 {
            return Err(Error::ZeroDimension);
        }
        if self == GroupKind::Sp && n % 2 == 1 {
            return Err(Error::OddSymplecticDimension(n));
        }
        Ok(())
    }
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GroupKind::O => "O",
            GroupKind::SO => "SO",
            GroupKind::Sp => "Sp",
        })
    }
}

impl FromStr for GroupKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "o" => Ok(GroupKind::O),
            "so" => Ok(GroupKind::SO),
            "sp" => Ok(GroupKind::Sp),
            _ => Err(Error::UnknownGroup(s.to_string())),
        }
    }
}

/// Block-diagonal skew form with 2x2 blocks `[[0, 1], [-1, 0]]`, so that
/// `⟨e_a, e_a'⟩ = +1` in the ordered symplectic basis.
pub fn symplectic_form(n: usize) -> DMatrix<f64> {
    let mut omega = DMatrix::zeros(n, n);
    for a in (0..n.saturating_sub(1)).step_by(2) {
        omega[(a, a + 1)] = 1.0;
        omega[(a + 1, a)] = -1.0;
    }
    omega
}

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |acc, v| acc.max(v.abs()))
}

/// A matrix known to lie in one of the three groups.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupElement {
    group: GroupKind,
    mat: DMatrix<f64>,
}

impl GroupElement {
    /// Wraps `mat` after checking the group's defining relations.
    pub fn new(group: GroupKind, mat: DMatrix<f64>) -> Result<Self> {
        assert!(mat.is_square(), "group elements are square matrices");
        group.check_dimension(mat.nrows())?;
        let element = Self { group, mat };
        let residual = element.membership_residual();
        let tol = match group {
            GroupKind::O | GroupKind::SO => ORTHOGONAL_TOL,
            GroupKind::Sp => SYMPLECTIC_TOL,
        };
        let det_ok = group != GroupKind::SO || (element.mat.determinant() - 1.0).abs() <= DETERMINANT_TOL;
        if residual > tol || !det_ok {
            return Err(Error::NotInGroup {
                group: group.to_string(),
                residual,
            });
        }
        Ok(element)
    }

    pub fn group(&self) -> GroupKind {
        self.group
    }

    pub fn n(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.mat
    }

    /// Largest entry of `gᵀg − I` (O, SO) or `gᵀΩg − Ω` (Sp).
    pub fn membership_residual(&self) -> f64 {
        let n = self.n();
        match self.group {
            GroupKind::O | GroupKind::SO => max_abs(&(self.mat.transpose() * &self.mat - DMatrix::identity(n, n))),
            GroupKind::Sp => {
                let omega = symplectic_form(n);
                max_abs(&(self.mat.transpose() * &omega * &self.mat - omega))
            }
        }
    }
}

/// An element of the Lie algebra of one of the groups.
#[derive(Clone, Debug, PartialEq)]
pub struct LieGenerator {
    pub group: GroupKind,
    pub mat: DMatrix<f64>,
}

impl LieGenerator {
    pub fn n(&self) -> usize {
        self.mat.nrows()
    }
}

/// Samples a group element from a seeded generator.
pub fn sample(group: GroupKind, n: usize, seed: u64) -> Result<GroupElement> {
    sample_with(group, n, &mut ChaCha8Rng::seed_from_u64(seed))
}

fn gaussian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |_, _| rng.sample(StandardNormal))
}

/// Samples a group element.
///
/// O(n) is Haar distributed: the Q factor of a Gaussian matrix with the signs
/// of R's diagonal folded in. SO(n) flips the first column of that when the
/// determinant is negative. Sp(n) is non-compact; elements are
/// `exp(Ω S)` for a Gaussian symmetric `S` scaled by 0.1.
pub fn sample_with<R: Rng + ?Sized>(group: GroupKind, n: usize, rng: &mut R) -> Result<GroupElement> {
    group.check_dimension(n)?;
    let mat = match group {
        GroupKind::O | GroupKind::SO => {
            let qr = gaussian(n, rng).qr();
            let r = qr.r();
            let mut q = qr.q();
            for j in 0..n {
                if r[(j, j)] < 0.0 {
                    q.column_mut(j).neg_mut();
                }
            }
            if group == GroupKind::SO && q.determinant() < 0.0 {
                q.column_mut(0).neg_mut();
            }
            q
        }
        GroupKind::Sp => {
            let a = gaussian(n, rng);
            let s = (&a + a.transpose()) * (0.5 * SYMPLECTIC_SAMPLE_SCALE);
            expm(&(symplectic_form(n) * s))
        }
    };
    GroupElement::new(group, mat)
}

/// A basis of the Lie algebra.
///
/// O(n), SO(n): `E_ab − E_ba` for `a < b`. Sp(n): `Ω S` for the elementary
/// symmetric matrices `S` (`E_aa`, and `E_ab + E_ba` for `a < b`).
pub fn lie_basis(group: GroupKind, n: usize) -> Result<Vec<LieGenerator>> {
    group.check_dimension(n)?;
    let mut out = Vec::new();
    match group {
        GroupKind::O | GroupKind::SO => {
            for a in 0..n {
                for b in a + 1..n {
                    let mut x = DMatrix::zeros(n, n);
                    x[(a, b)] = 1.0;
                    x[(b, a)] = -1.0;
                    out.push(LieGenerator { group, mat: x });
                }
            }
        }
        GroupKind::Sp => {
            let omega = symplectic_form(n);
            for a in 0..n {
                for b in a..n {
                    let mut s = DMatrix::zeros(n, n);
                    s[(a, b)] = 1.0;
                    s[(b, a)] = 1.0;
                    out.push(LieGenerator { group, mat: &omega * s });
                }
            }
        }
    }
    Ok(out)
}

/// One representative of each non-identity connected component.
pub fn component_reps(group: GroupKind, n: usize) -> Vec<GroupElement> {
    match group {
        GroupKind::O if n >= 1 => {
            let mut r = DMatrix::identity(n, n);
            r[(0, 0)] = -1.0;
            vec![GroupElement { group, mat: r }]
        }
        _ => Vec::new(),
    }
}

/// Matrix exponential by scaling and squaring around a truncated Taylor series.
pub fn expm(a: &DMatrix<f64>) -> DMatrix<f64> {
    assert!(a.is_square());
    let n = a.nrows();
    let norm = a
        .column_iter()
        .map(|c| c.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max);
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let scaled = a / 2f64.powi(squarings);

    let mut sum = DMatrix::identity(n, n);
    let mut term = DMatrix::identity(n, n);
    for j in 1..=40 {
        term = &term * &scaled / j as f64;
        sum += &term;
        if max_abs(&term) <= EXPM_TOL * max_abs(&sum) {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// Applies one matrix per tensor mode. `modes[t] = (dim, Some(m))` acts on
/// mode `t` with the `dim x dim` matrix `m`; `None` leaves that mode alone.
/// The first mode is the most significant in the flattened layout.
pub fn apply_modes(modes: &[(usize, Option<&DMatrix<f64>>)], x: &[f64]) -> Result<Vec<f64>> {
    let total: usize = modes.iter().map(|(d, _)| d).product();
    if x.len() != total {
        return Err(Error::LengthMismatch {
            expected: total,
            got: x.len(),
        });
    }
    let mut current = x.to_vec();
    let mut scratch = vec![0.0; total];
    let mut outer = 1;
    for &(dim, mat) in modes {
        let inner = total / (outer * dim);
        if let Some(m) = mat {
            assert_eq!(m.shape(), (dim, dim), "mode matrix has the wrong size");
            for o in 0..outer {
                let base = o * dim * inner;
                for a in 0..dim {
                    let out = &mut scratch[base + a * inner..base + (a + 1) * inner];
                    out.fill(0.0);
                    for b in 0..dim {
                        let coeff = m[(a, b)];
                        if coeff == 0.0 {
                            continue;
                        }
                        let src = &current[base + b * inner..base + (b + 1) * inner];
                        for (y, v) in out.iter_mut().zip(src) {
                            *y += coeff * v;
                        }
                    }
                }
            }
            std::mem::swap(&mut current, &mut scratch);
        }
        outer *= dim;
    }
    Ok(current)
}

/// `g^{⊗k} x` for `x` of length `n^k`, one mode at a time.
pub fn tensor_power_apply(g: &DMatrix<f64>, k: usize, x: &[f64]) -> Result<Vec<f64>> {
    let n = g.nrows();
    let modes = vec![(n, Some(g)); k];
    apply_modes(&modes, x)
}

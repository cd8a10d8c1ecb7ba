//! Change of generator systems at the homology level.
//!
//! A [`CurveSystem`] is an ordered basis `(x_1..x_k, y_1..y_k)` of `H_1(T(k))` whose Gram matrix
//! is `±J` (`x_i . y_i = ±1`, every other basis pairing zero). The transition matrix from a
//! system `(α, β)` to a system `(θ, γ)` is stored in the block layout
//!
//! ```text
//! H = [ θᵀ·β   -θᵀ·α ]
//!     [ γᵀ·β   -γᵀ·α ]
//! ```
//!
//! so that `(θ; γ) = H (α; β)` whenever `(α, β)` is positively oriented.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::{IntMatrix, MatrixError};
use crate::surface_group::{pairing, HomologyClass, Orientation, SurfaceError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BasisError {
    #[error("curve system is not symplectic: {0}")]
    NotSymplectic(String),
    #[error("gluing map does not reverse the intersection form: {0}")]
    NotReversing(String),
    #[error("expected {expected} classes, got {got}")]
    WrongCount { expected: usize, got: usize },
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// Basis `(x_1..x_k, y_1..y_k)` with Gram matrix `s·J`, `s = orientation.sign()`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveSystem {
    alpha: Vec<HomologyClass>,
    beta: Vec<HomologyClass>,
    orientation: Orientation,
}

impl CurveSystem {
    /// The canonical `(a, b)` system.
    pub fn canonical(genus: usize) -> Self {
        CurveSystem {
            alpha: (1..=genus).map(|i| HomologyClass::a(genus, i)).collect(),
            beta: (1..=genus).map(|i| HomologyClass::b(genus, i)).collect(),
            orientation: Orientation::Standard,
        }
    }

    /// Checks the Gram matrix and records whether it is `+J` or `-J`.
    pub fn new(alpha: Vec<HomologyClass>, beta: Vec<HomologyClass>) -> Result<Self, BasisError> {
        let k = alpha.len();
        if beta.len() != k {
            return Err(BasisError::WrongCount { expected: k, got: beta.len() });
        }
        if let Some(bad) = alpha.iter().chain(&beta).find(|c| c.genus() != k) {
            return Err(SurfaceError::GenusMismatch { left: k, right: bad.genus() }.into());
        }
        let stack: Vec<&HomologyClass> = alpha.iter().chain(&beta).collect();
        let gram = IntMatrix::try_from_fn(2 * k, 2 * k, |i, j| pairing(stack[i], stack[j]))?;
        let orientation = if gram == symplectic_form(k) {
            Orientation::Standard
        } else if gram == symplectic_form(k).neg() {
            Orientation::Reversed
        } else {
            return Err(BasisError::NotSymplectic(format!("Gram matrix {gram:?}")));
        };
        Ok(CurveSystem { alpha, beta, orientation })
    }

    pub fn genus(&self) -> usize {
        self.alpha.len()
    }

    pub fn alpha(&self) -> &[HomologyClass] {
        &self.alpha
    }

    pub fn beta(&self) -> &[HomologyClass] {
        &self.beta
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    /// `(x_1..x_k, y_1..y_k)`.
    pub fn stack(&self) -> Vec<&HomologyClass> {
        self.alpha.iter().chain(&self.beta).collect()
    }

    /// Coordinates of `t` in this basis: `[s(t·y_j)]_j ++ [-s(t·x_j)]_j`.
    pub fn coordinates(&self, t: &HomologyClass) -> Result<Vec<i64>, BasisError> {
        let s = self.orientation.sign();
        let mut row = Vec::with_capacity(2 * self.genus());
        for y in &self.beta {
            row.push(s * pairing(t, y)?);
        }
        for x in &self.alpha {
            row.push(-s * pairing(t, x)?);
        }
        Ok(row)
    }

    /// `sum_l c_l e_l` for the stacked basis `e`.
    pub fn combine(&self, coeffs: &[i64]) -> Result<HomologyClass, BasisError> {
        let k = self.genus();
        let mut acc = HomologyClass::zero(k);
        for (c, e) in coeffs.iter().zip(self.stack()) {
            acc = acc.checked_add(&e.checked_scale(*c)?)?;
        }
        Ok(acc)
    }
}

/// `J = [[0, E], [-E, 0]]`, the Gram matrix of the canonical system.
pub fn symplectic_form(k: usize) -> IntMatrix {
    IntMatrix::from_fn(2 * k, 2 * k, |i, j| {
        if j == i + k {
            1
        } else if i == j + k {
            -1
        } else {
            0
        }
    })
}

/// The `2k x 2k` coefficient matrix expressing one system in terms of another.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TransitionMatrix {
    h: IntMatrix,
}

impl TransitionMatrix {
    pub fn from_matrix(h: IntMatrix) -> Result<Self, BasisError> {
        if !h.is_square() || h.rows() % 2 != 0 {
            return Err(MatrixError::Dimension(format!("{}x{} is not 2k x 2k", h.rows(), h.cols())).into());
        }
        Ok(TransitionMatrix { h })
    }

    pub fn identity(genus: usize) -> Self {
        TransitionMatrix { h: IntMatrix::identity(2 * genus) }
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.h
    }

    pub fn genus(&self) -> usize {
        self.h.rows() / 2
    }

    /// Top-left block `θᵀ·β`.
    pub fn theta_beta(&self) -> IntMatrix {
        let k = self.genus();
        self.h.block(0, 0, k, k)
    }

    /// Top-right block `-θᵀ·α`.
    pub fn neg_theta_alpha(&self) -> IntMatrix {
        let k = self.genus();
        self.h.block(0, k, k, k)
    }

    /// Bottom-left block `γᵀ·β`.
    pub fn gamma_beta(&self) -> IntMatrix {
        let k = self.genus();
        self.h.block(k, 0, k, k)
    }

    /// Bottom-right block `-γᵀ·α`.
    pub fn neg_gamma_alpha(&self) -> IntMatrix {
        let k = self.genus();
        self.h.block(k, k, k, k)
    }

    pub fn determinant(&self) -> Result<i64, BasisError> {
        Ok(self.h.determinant()?)
    }

    /// Both diagonal blocks vanish.
    pub fn is_block_antidiagonal(&self) -> bool {
        self.theta_beta().is_zero() && self.neg_gamma_alpha().is_zero()
    }

    /// `(σ, ε)` when the matrix is block antidiagonal with a signed permutation in `-θᵀ·α`.
    pub fn certificate_form(&self) -> Option<SignedPermutation> {
        if !self.is_block_antidiagonal() {
            return None;
        }
        SignedPermutation::from_matrix(&self.neg_theta_alpha())
    }
}

/// Expresses `to` in the basis `from`: row `r` is the coordinate vector of the `r`-th class of
/// `to`. For a positively oriented `from` this is the block layout
/// `[θᵀ·β, -θᵀ·α; γᵀ·β, -γᵀ·α]`.
pub fn transition_matrix(from: &CurveSystem, to: &CurveSystem) -> Result<TransitionMatrix, BasisError> {
    if from.genus() != to.genus() {
        return Err(SurfaceError::GenusMismatch { left: from.genus(), right: to.genus() }.into());
    }
    let k = from.genus();
    let mut rows = Vec::with_capacity(2 * k);
    for t in to.stack() {
        let row = from.coordinates(t)?;
        debug_assert_eq!(&from.combine(&row)?, t);
        rows.push(row);
    }
    Ok(TransitionMatrix { h: IntMatrix::from_rows(rows)? })
}

/// `θᵀ·β` and `-θᵀ·α` for a `θ` family given without its duals.
pub fn theta_blocks(from: &CurveSystem, theta: &[HomologyClass]) -> Result<(IntMatrix, IntMatrix), BasisError> {
    let k = from.genus();
    if theta.len() != k {
        return Err(BasisError::WrongCount { expected: k, got: theta.len() });
    }
    let tb = IntMatrix::try_from_fn(k, k, |i, j| pairing(&theta[i], &from.beta[j]))?;
    let ta = IntMatrix::try_from_fn(k, k, |i, j| pairing(&theta[i], &from.alpha[j]).map(|x| -x))?;
    Ok((tb, ta))
}

/// Whether `h * h_inv` is the identity.
pub fn verify_inverse_pair(h: &TransitionMatrix, h_inv: &TransitionMatrix) -> Result<bool, BasisError> {
    if h.matrix().rows() != h_inv.matrix().rows() {
        return Err(MatrixError::Dimension(format!(
            "{} vs {}",
            h.matrix().rows(),
            h_inv.matrix().rows()
        ))
        .into());
    }
    Ok(h.matrix().checked_mul(h_inv.matrix())?.is_identity())
}

/// A permutation `σ` of `0..k` with signs: `M[i][σ(i)] = ε_i`, zero elsewhere.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SignedPermutation {
    pub sigma: Vec<usize>,
    pub signs: Vec<i64>,
}

impl SignedPermutation {
    /// Direct scan: each row has exactly one nonzero entry, equal to ±1, and every column is hit
    /// once.
    pub fn from_matrix(m: &IntMatrix) -> Option<SignedPermutation> {
        if !m.is_square() {
            return None;
        }
        let k = m.rows();
        let mut hit = vec![false; k];
        let mut sigma = Vec::with_capacity(k);
        let mut signs = Vec::with_capacity(k);
        for i in 0..k {
            let mut nonzero = m.row(i).iter().enumerate().filter(|(_, &x)| x != 0);
            let (j, &x) = nonzero.next()?;
            if nonzero.next().is_some() || x.abs() != 1 || hit[j] {
                return None;
            }
            hit[j] = true;
            sigma.push(j);
            signs.push(x);
        }
        Some(SignedPermutation { sigma, signs })
    }

    pub fn identity(k: usize) -> Self {
        SignedPermutation { sigma: (0..k).collect(), signs: vec![1; k] }
    }
}

/// Action of an orientation-reversing surface diffeomorphism on homology, given by the images of
/// `a_1..a_k, b_1..b_k` in that order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GluingMap {
    images: Vec<HomologyClass>,
}

impl GluingMap {
    pub fn new(images: Vec<HomologyClass>) -> Result<Self, BasisError> {
        if images.len() % 2 != 0 {
            return Err(BasisError::WrongCount { expected: images.len() + 1, got: images.len() });
        }
        let k = images.len() / 2;
        if let Some(bad) = images.iter().find(|c| c.genus() != k) {
            return Err(SurfaceError::GenusMismatch { left: k, right: bad.genus() }.into());
        }
        let j = symplectic_form(k);
        for r in 0..2 * k {
            for c in 0..2 * k {
                let got = pairing(&images[r], &images[c])?;
                if got != -j[(r, c)] {
                    return Err(BasisError::NotReversing(format!(
                        "pairing of images {r} and {c} is {got}, expected {}",
                        -j[(r, c)]
                    )));
                }
            }
        }
        Ok(GluingMap { images })
    }

    pub fn genus(&self) -> usize {
        self.images.len() / 2
    }

    pub fn images(&self) -> &[HomologyClass] {
        &self.images
    }

    /// `h_*(u)`.
    pub fn apply(&self, u: &HomologyClass) -> Result<HomologyClass, BasisError> {
        let k = self.genus();
        if u.genus() != k {
            return Err(SurfaceError::GenusMismatch { left: k, right: u.genus() }.into());
        }
        let mut acc = HomologyClass::zero(k);
        for (c, img) in u.coords().iter().zip(&self.images) {
            acc = acc.checked_add(&img.checked_scale(*c)?)?;
        }
        Ok(acc)
    }

    /// `(θ, γ) = (h(a), h(b))`, a negatively oriented system.
    pub fn theta_gamma(&self) -> Result<CurveSystem, BasisError> {
        let k = self.genus();
        CurveSystem::new(self.images[..k].to_vec(), self.images[k..].to_vec())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hc(m: &[i64], n: &[i64]) -> HomologyClass {
        HomologyClass::new(m.to_vec(), n.to_vec()).unwrap()
    }

    // Expected blocks evaluated entry-by-entry with the bilinear-form definition.
    fn oracle_blocks(from: &CurveSystem, to: &CurveSystem) -> IntMatrix {
        let k = from.genus();
        let to_stack = to.stack();
        IntMatrix::from_fn(2 * k, 2 * k, |r, c| {
            let t = to_stack[r];
            if c < k {
                expand(t, &from.beta()[c])
            } else {
                -expand(t, &from.alpha()[c - k])
            }
        })
    }

    fn expand(u: &HomologyClass, v: &HomologyClass) -> i64 {
        let k = u.genus();
        let mut total = 0;
        // basis pairings: a_i.b_j = δ_ij, b_i.a_j = -δ_ij, a.a = b.b = 0
        for i in 0..k {
            for j in 0..k {
                let d = i64::from(i == j);
                total += u.m[i] * v.n[j] * d - u.n[i] * v.m[j] * d;
            }
        }
        total
    }

    #[test]
    fn identity_transition() {
        let c = CurveSystem::canonical(3);
        assert_eq!(transition_matrix(&c, &c).unwrap(), TransitionMatrix::identity(3));
    }

    #[test]
    fn swap_transition_blocks() {
        let k = 2;
        let c = CurveSystem::canonical(k);
        let theta: Vec<_> = c.beta().to_vec();
        let gamma: Vec<_> = c.alpha().iter().map(|x| x.neg()).collect();
        let to = CurveSystem::new(theta, gamma).unwrap();
        let h = transition_matrix(&c, &to).unwrap();
        assert_eq!(h.matrix(), &oracle_blocks(&c, &to));
        assert!(h.theta_beta().is_zero());
        assert_eq!(h.neg_theta_alpha(), IntMatrix::identity(k));
        assert_eq!(h.gamma_beta(), IntMatrix::identity(k).neg());
        assert!(h.neg_gamma_alpha().is_zero());
        assert!(h.is_block_antidiagonal());
        assert_eq!(h.certificate_form(), Some(SignedPermutation::identity(k)));
    }

    #[test]
    fn orientation_reversed_swap() {
        // θ = β, γ = α has Gram -J
        let c = CurveSystem::canonical(1);
        let to = CurveSystem::new(c.beta().to_vec(), c.alpha().to_vec()).unwrap();
        assert_eq!(to.orientation(), Orientation::Reversed);
        let h = transition_matrix(&c, &to).unwrap();
        assert_eq!(h.matrix(), &oracle_blocks(&c, &to));
        assert_eq!(h.determinant().unwrap().abs(), 1);
        let back = transition_matrix(&to, &c).unwrap();
        assert!(verify_inverse_pair(&h, &back).unwrap());
    }

    #[test]
    fn genus_one_determinant() {
        let c = CurveSystem::canonical(1);
        let to = CurveSystem::new(vec![hc(&[0], &[1])], vec![hc(&[-1], &[0])]).unwrap();
        let h = transition_matrix(&c, &to).unwrap();
        assert_eq!(h.determinant().unwrap().abs(), 1);
    }

    #[test]
    fn non_symplectic_rejected() {
        let err = CurveSystem::new(vec![hc(&[2], &[0])], vec![hc(&[0], &[1])]).unwrap_err();
        assert!(matches!(err, BasisError::NotSymplectic(_)));
    }

    #[test]
    fn inverse_pair_checks() {
        let e = TransitionMatrix::identity(2);
        assert!(verify_inverse_pair(&e, &e).unwrap());

        let c = CurveSystem::canonical(1);
        let to = CurveSystem::new(vec![hc(&[2], &[1])], vec![hc(&[1], &[1])]).unwrap();
        let h = transition_matrix(&c, &to).unwrap();
        let h_inv = transition_matrix(&to, &c).unwrap();
        assert!(verify_inverse_pair(&h, &h_inv).unwrap());
        // h = [[2,1],[1,1]], so h*h = [[5,3],[3,2]]
        assert!(!verify_inverse_pair(&h, &h).unwrap());
        assert!(verify_inverse_pair(&h, &TransitionMatrix::identity(2)).is_err());
    }

    #[test]
    fn identity_is_not_antidiagonal() {
        assert!(!TransitionMatrix::identity(2).is_block_antidiagonal());
        assert_eq!(TransitionMatrix::identity(2).certificate_form(), None);
    }

    #[test]
    fn dense_symplectic_is_not_antidiagonal() {
        let c = CurveSystem::canonical(1);
        let to = CurveSystem::new(vec![hc(&[2], &[1])], vec![hc(&[1], &[1])]).unwrap();
        assert!(!transition_matrix(&c, &to).unwrap().is_block_antidiagonal());
    }

    #[test]
    fn signed_permutation_examples() {
        // θ1 = β2, θ2 = -β1: -θᵀ·α = [[0,1],[-1,0]]
        let c = CurveSystem::canonical(2);
        let theta = vec![HomologyClass::b(2, 2), HomologyClass::b(2, 1).neg()];
        let (tb, nta) = theta_blocks(&c, &theta).unwrap();
        assert!(tb.is_zero());
        let sp = SignedPermutation::from_matrix(&nta).unwrap();
        assert_eq!(sp.sigma, vec![1, 0]);
        assert_eq!(sp.signs, vec![1, -1]);

        let bad = IntMatrix::from_rows(vec![vec![1, 1], vec![0, 1]]).unwrap();
        assert_eq!(SignedPermutation::from_matrix(&bad), None);
        let doubled = IntMatrix::from_rows(vec![vec![1, 0], vec![1, 0]]).unwrap();
        assert_eq!(SignedPermutation::from_matrix(&doubled), None);
    }

    #[test]
    fn gluing_map_reverses_pairing() {
        // h(a) = b, h(b) = a
        let g = GluingMap::new(vec![HomologyClass::b(1, 1), HomologyClass::a(1, 1)]).unwrap();
        let u = hc(&[2], &[1]);
        let v = hc(&[1], &[1]);
        assert_eq!(
            pairing(&g.apply(&u).unwrap(), &g.apply(&v).unwrap()).unwrap(),
            -pairing(&u, &v).unwrap()
        );
        let sys = g.theta_gamma().unwrap();
        assert_eq!(sys.orientation(), Orientation::Reversed);
        // the identity preserves orientation
        let err = GluingMap::new(vec![HomologyClass::a(1, 1), HomologyClass::b(1, 1)]).unwrap_err();
        assert!(matches!(err, BasisError::NotReversing(_)));
    }
}

//! Riemann form `H = B + iΩ` on `V = Cʳ` from a rational alternating form on
//! a Q-lattice (up to isogeny) and the images of its basis in `V`.
//!
//! Convention: `Ω` is extended R-bilinearly through the real period matrix,
//! `B(v, w) = Ω(iv, w)`, and `H(v, w) = B(v, w) + iΩ(v, w)` must be Hermitian
//! and positive definite. No sign is flipped anywhere.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{rat_to_f64, Rational};
use crate::linalg::{hermitian_defect, posdef_check, PosDef};
use crate::matrix::{CMatrix, Matrix};

#[derive(Clone, Debug)]
pub struct RiemannForm {
    /// `H(e_a, e_b)` on the standard complex basis of `V`.
    pub hermitian: CMatrix,
    /// Condition number of the real period matrix.
    pub period_condition: f64,
    /// `max |Ω(Jv, Jw) − Ω(v, w)|` over basis pairs.
    pub j_defect: f64,
    pub hermitian_defect: f64,
    pub posdef: PosDef,
}

impl RiemannForm {
    pub fn is_positive(&self, tol: f64) -> bool {
        self.posdef.is_posdef && self.j_defect <= tol && self.hermitian_defect <= tol
    }
}

/// Real `2r × 2r` period matrix: column `p` is `(Re v_p; Im v_p)`.
pub fn period_matrix(images: &[Vec<Complex64>]) -> CMatrix {
    let r = images.first().map_or(0, Vec::len);
    Matrix::from_fn(2 * r, images.len(), |i, p| {
        let v = images[p][i % r];
        Complex64::new(if i < r { v.re } else { v.im }, 0.0)
    })
}

pub fn riemann_form(images: &[Vec<Complex64>], omega: &Matrix<Rational>, tol: f64) -> Result<RiemannForm> {
    let r = images.first().map_or(0, Vec::len);
    if images.len() != 2 * r || omega.rows() != 2 * r || omega.cols() != 2 * r {
        return Err(Error::BadShape(format!(
            "need 2r = {} images and a {0}x{0} form, got {} images",
            2 * r,
            images.len()
        )));
    }
    let pi = period_matrix(images);
    let pi_inv = pi
        .inverse()?
        .ok_or_else(|| Error::RiemannCheckFailed("period matrix is singular".into()))?;
    let period_condition = pi.norm1() * pi_inv.norm1();
    if !period_condition.is_finite() || period_condition * tol > 1.0 {
        return Err(Error::RiemannCheckFailed(format!(
            "period matrix is numerically singular (condition {period_condition:e})"
        )));
    }
    let omega_q = omega.map(|x| Complex64::new(rat_to_f64(x), 0.0));
    // Ω_V(Πa, Πb) = aᵗ Ω_Q b  ⇒  Ω_V = Π⁻ᵗ Ω_Q Π⁻¹.
    let omega_v = pi_inv.transpose().mul(&omega_q)?.mul(&pi_inv)?;
    let n2 = 2 * r;
    // Complex structure on (Re; Im): i·(x + iy) = −y + ix.
    let j = Matrix::from_fn(n2, n2, |a, b| {
        if a < r && b == a + r {
            Complex64::new(-1.0, 0.0)
        } else if a >= r && b + r == a {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let j_omega_j = j.transpose().mul(&omega_v)?.mul(&j)?;
    let scale = omega_v.max_abs().max(1.0);
    let j_defect = j_omega_j.max_abs_diff(&omega_v) / scale;
    // B(u, w) = Ω_V(Ju, w) = uᵗ Jᵗ Ω_V w
    let b = j.transpose().mul(&omega_v)?;
    let hermitian = Matrix::from_fn(r, r, |a, c| Complex64::new(b.get(a, c).re, omega_v.get(a, c).re));
    let hdefect = hermitian_defect(&hermitian) / scale;
    let posdef = if hdefect <= tol {
        posdef_check(&hermitian, tol)?
    } else {
        PosDef {
            is_posdef: false,
            min_pivot: f64::NAN,
        }
    };
    Ok(RiemannForm {
        hermitian,
        period_condition,
        j_defect,
        hermitian_defect: hdefect,
        posdef,
    })
}

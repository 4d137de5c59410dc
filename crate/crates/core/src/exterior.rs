//! Exterior powers: compound matrices, `λᵏ` of exact sequences and
//! Hermitian forms, and `λᵏ` of a triple of signature `(1, r−1)`.

use std::fmt;

use itertools::Itertools;
use num_complex::Complex64;
use num_integer::binomial;

use crate::correspondence::{ker_alpha_basis, normalize_triple, TripleE};
use crate::error::{Error, Result};
use crate::field::{FieldContext, KElement};
use crate::linalg::{kernel_basis, rank};
use crate::matrix::{determinant, CMatrix, Complexes, KMatrix, Matrix, Scalars};

/// A basis monomial `l_{i_1} ∧ … ∧ l_{i_k}`, indices 0-based and increasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WedgeIndex(Vec<usize>);

impl WedgeIndex {
    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.0.iter().map(|i| i + 1).collect()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }
}

impl fmt::Display for WedgeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.one_based().iter().map(|i| format!("l{i}")).collect();
        write!(f, "{}", parts.join("^"))
    }
}

/// All `C(r, k)` monomials in lexicographic order.
pub fn wedge_basis(r: usize, k: usize) -> Result<Vec<WedgeIndex>> {
    if k == 0 || k > r {
        return Err(Error::BadK { k, max: r });
    }
    Ok((0..r).combinations(k).map(WedgeIndex).collect())
}

/// `k`-th compound: entry `(S, T)` is the minor on rows `S`, columns `T`.
pub fn compound<S: Scalars>(f: &S, m: &Matrix<S::Elem>, k: usize) -> Result<Matrix<S::Elem>>
where
    S::Elem: Clone,
{
    let max = m.rows().min(m.cols());
    if k == 0 || k > max {
        return Err(Error::BadK { k, max });
    }
    let rows = wedge_basis(m.rows(), k)?;
    let cols = wedge_basis(m.cols(), k)?;
    let mut data = Vec::with_capacity(rows.len() * cols.len());
    for s in &rows {
        for t in &cols {
            data.push(determinant(f, &m.submatrix(s.indices(), t.indices()))?);
        }
    }
    let mut it = data.into_iter();
    Ok(Matrix::from_fn(rows.len(), cols.len(), |_, _| it.next().expect("sized")))
}

pub fn compound_k(m: &KMatrix, k: usize) -> Result<KMatrix> {
    Ok(KMatrix::new(*m.ctx(), compound(m.ctx(), m.inner(), k)?))
}

pub fn compound_c(m: &CMatrix, k: usize) -> Result<CMatrix> {
    compound(&Complexes, m, k)
}

/// `0 → B₁ → B₂ → C → 0` with `B₂ = C^total_dim`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactSeq {
    pub total_dim: usize,
    /// Columns span `B₁`.
    pub kernel: CMatrix,
    pub quotient_map: CMatrix,
}

/// Rows spanning the annihilator of the columns of `kernel`.
pub fn cokernel_map(kernel: &CMatrix, tol: f64) -> CMatrix {
    kernel_basis(&kernel.transpose(), tol).transpose()
}

impl ExactSeq {
    pub fn new(kernel: CMatrix, quotient_map: CMatrix, tol: f64) -> Result<Self> {
        let seq = ExactSeq {
            total_dim: kernel.rows(),
            kernel,
            quotient_map,
        };
        if seq.quotient_map.cols() != seq.total_dim {
            return Err(Error::BadShape(format!(
                "quotient map has {} columns, expected {}",
                seq.quotient_map.cols(),
                seq.total_dim
            )));
        }
        if !seq.is_exact(tol) {
            return Err(Error::BadShape("sequence is not exact".into()));
        }
        Ok(seq)
    }

    pub fn from_kernel(kernel: CMatrix, tol: f64) -> Result<Self> {
        let q = cokernel_map(&kernel, tol);
        ExactSeq::new(kernel, q, tol)
    }

    /// The sequence `0 → Ker α → L ⊗ C → Cⁿ → 0` of a normalized triple.
    pub fn of_triple(e: &TripleE, tol: f64) -> Result<Self> {
        ExactSeq::new(ker_alpha_basis(e, tol)?, e.alpha().clone(), tol)
    }

    pub fn quotient_dim(&self) -> usize {
        self.quotient_map.rows()
    }

    pub fn is_exact(&self, tol: f64) -> bool {
        let Ok(prod) = self.quotient_map.mul(&self.kernel) else {
            return false;
        };
        let scale = self.quotient_map.max_abs().max(1.0) * self.kernel.max_abs().max(1.0);
        prod.max_abs() <= tol * scale
            && rank(&self.kernel, tol) == self.kernel.cols()
            && rank(&self.quotient_map, tol) + self.kernel.cols() == self.total_dim
    }
}

/// `0 → λᵏB₁ → λᵏB₂ → C_k → 0`.
pub fn exterior_sequence(seq: &ExactSeq, k: usize, tol: f64) -> Result<ExactSeq> {
    if k == 0 || k > seq.total_dim {
        return Err(Error::BadK { k, max: seq.total_dim });
    }
    let dim = binomial(seq.total_dim, k);
    let kernel = if k > seq.kernel.cols() {
        CMatrix::zeros(dim, 0)
    } else {
        compound_c(&seq.kernel, k)?
    };
    ExactSeq::from_kernel(kernel, tol)
}

/// `λᵏ(G)`: the Gram matrix of `H(l_S, l_T) = det G[S, T]`.
pub fn exterior_hermitian(g: &KMatrix, k: usize) -> Result<KMatrix> {
    if !g.is_hermitian() {
        return Err(Error::NotHermitian("exterior power of a non-hermitian form".into()));
    }
    let c = compound_k(g, k)?;
    assert!(c.is_hermitian(), "compound of a hermitian matrix is hermitian");
    Ok(c)
}

/// Wedge monomials containing `l_1` first, then the rest, each lexicographic.
pub fn positive_first_order(r: usize, k: usize) -> Result<Vec<usize>> {
    let basis = wedge_basis(r, k)?;
    let (with, without): (Vec<usize>, Vec<usize>) = (0..basis.len()).partition(|&i| basis[i].contains(0));
    Ok(with.into_iter().chain(without).collect())
}

/// Presentation of an `n = r−1` triple with gram `E_{r−1,1}` as an `n = 1`
/// triple: `−H` in the basis `(x_r, x_1, …, x_{r−1})`, `α` the functional
/// `H(·, λ)` normalized to `[1 | z̄ᵗ]`.
pub fn dual_flip(e: &TripleE, tol: f64) -> Result<TripleE> {
    let (n, r) = (e.n(), e.r());
    let ctx = *e.ctx();
    if n + 1 != r || e.gram() != &KMatrix::signature_matrix(ctx, n, 1) {
        return Err(Error::WrongSignatureN { n, r });
    }
    let z = e.normalized_z(tol)?;
    let alpha = Matrix::from_fn(1, r, |_, j| if j == 0 { Complex64::new(1.0, 0.0) } else { z.get(j - 1, 0).conj() });
    TripleE::new(1, r, KMatrix::signature_matrix(ctx, 1, n), alpha)
}

/// `λᵏ` of a triple with `n = 1`: gram `(−1)^{k−1}λᵏ(H_L)` in the
/// positive-first wedge order and `α_k` the normalized quotient map of
/// `λᵏ` of its sequence.
pub fn exterior_variety(e: &TripleE, k: usize, tol: f64) -> Result<TripleE> {
    let (n, r) = (e.n(), e.r());
    let base = if n == 1 {
        e.clone()
    } else if n + 1 == r {
        dual_flip(e, tol)?
    } else {
        return Err(Error::WrongSignatureN { n, r });
    };
    if k == 0 || k >= r {
        return Err(Error::BadK { k, max: r - 1 });
    }
    let (base, _) = normalize_triple(&base, tol)?;
    let ctx: FieldContext = *base.ctx();
    let perm = positive_first_order(r, k)?;
    let r2 = perm.len();
    let n2 = binomial(r - 1, k - 1);
    let sign = KElement::from_int(if k % 2 == 1 { 1 } else { -1 });
    let gram = exterior_hermitian(base.gram(), k)?.scaled(&sign).permuted(&perm);
    debug_assert_eq!(gram, KMatrix::signature_matrix(ctx, n2, r2 - n2));
    let seq = exterior_sequence(&ExactSeq::of_triple(&base, tol)?, k, tol)?;
    let all: Vec<usize> = (0..seq.kernel.cols()).collect();
    let kernel = seq.kernel.submatrix(&perm, &all);
    let quotient = cokernel_map(&kernel, tol);
    let left_idx: Vec<usize> = (0..n2).collect();
    let left = quotient.submatrix(&(0..quotient.rows()).collect::<Vec<_>>(), &left_idx);
    if left.rows() != n2 {
        return Err(Error::BadShape(format!("quotient has dimension {}, expected {n2}", left.rows())));
    }
    let left_inv = left.inverse()?.ok_or(Error::SingularLeadingBlock)?;
    let right_idx: Vec<usize> = (n2..r2).collect();
    let z = left_inv.mul(&quotient.submatrix(&left_idx, &right_idx))?;
    let alpha = Matrix::from_fn(n2, r2, |i, j| match j.checked_sub(n2) {
        Some(c) => *z.get(i, c),
        None if i == j => Complex64::new(1.0, 0.0),
        None => Complex64::new(0.0, 0.0),
    });
    TripleE::new(n2, r2, gram, alpha)
}

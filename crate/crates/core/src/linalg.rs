//! Hermitian forms over `K` and the numerical checks used on `C`.
//!
//! Gram convention: `G[i][j] = H(x_i, x_j)` with `H` linear in the first
//! argument and conjugate-linear in the second, so `H(u, v) = uᵗ·G·v̄` on
//! coordinate columns.

use num_complex::Complex64;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::field::{rat_sqrt, rat_to_string, KElement, Rational};
use crate::matrix::{CMatrix, KMatrix, Matrix};

/// Default numerical tolerance for positivity and rank decisions.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Matrices that have a conjugate transpose.
pub trait ConjTranspose {
    fn conj_transpose(&self) -> Self;
}

impl ConjTranspose for KMatrix {
    fn conj_transpose(&self) -> Self {
        self.adjoint()
    }
}

impl ConjTranspose for CMatrix {
    fn conj_transpose(&self) -> Self {
        self.adjoint()
    }
}

pub fn conj_transpose<M: ConjTranspose>(m: &M) -> M {
    m.conj_transpose()
}

/// Inertia of a Hermitian form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub struct Signature {
    pub plus: usize,
    pub minus: usize,
    pub null: usize,
}

impl Signature {
    pub fn new(plus: usize, minus: usize, null: usize) -> Self {
        Signature { plus, minus, null }
    }

    pub fn dim(&self) -> usize {
        self.plus + self.minus + self.null
    }
}

/// Result of an exact congruence diagonalization: `P*·G·P = diag(d)`.
#[derive(Clone, Debug)]
pub struct Congruence {
    pub diagonal: Vec<Rational>,
    pub transform: KMatrix,
}

fn ensure_hermitian(g: &KMatrix) -> Result<()> {
    if g.rows() != g.cols() {
        return Err(Error::BadShape(format!(
            "gram matrix is {}x{}, expected square",
            g.rows(),
            g.cols()
        )));
    }
    for i in 0..g.rows() {
        for j in i..g.cols() {
            if g.get(i, j) != &g.get(j, i).conj() {
                return Err(Error::NotHermitian(format!("entry ({i}, {j})")));
            }
        }
    }
    Ok(())
}

/// Diagonalizes a Hermitian K-matrix by congruence, exactly.
///
/// Pivots on a non-zero diagonal entry when there is one. When the remaining
/// block has zero diagonal but a non-zero entry `g_ij`, the basis vector
/// `x_i` is replaced by `x_i + k·x_j` with `k ∈ {1, √−Δ}`; the new diagonal
/// entry is `Tr(k·g_ji)`, which is non-zero for one of the two choices.
pub fn congruence_diagonalize(g: &KMatrix) -> Result<Congruence> {
    ensure_hermitian(g)?;
    let ctx = *g.ctx();
    let n = g.rows();
    let mut a = g.inner().clone();
    let mut p = KMatrix::identity(ctx, n).into_inner();

    // col_t += c·col_s on `a` and `p`, then row_t += c̄·row_s on `a`.
    let add_multiple = |a: &mut Matrix<KElement>, p: &mut Matrix<KElement>, t: usize, s: usize, c: &KElement| {
        for i in 0..n {
            let v = a.get(i, t) + &ctx.mul(c, a.get(i, s));
            a.set(i, t, v);
            let v = p.get(i, t) + &ctx.mul(c, p.get(i, s));
            p.set(i, t, v);
        }
        let cb = c.conj();
        for j in 0..n {
            let v = a.get(t, j) + &ctx.mul(&cb, a.get(s, j));
            a.set(t, j, v);
        }
    };

    let mut diagonal = Vec::with_capacity(n);
    for piv in 0..n {
        let mut found = (piv..n).find(|&i| !a.get(i, i).is_zero());
        if found.is_none() {
            let pair = (piv..n)
                .flat_map(|i| (piv..n).map(move |j| (i, j)))
                .find(|&(i, j)| i != j && !a.get(i, j).is_zero());
            let Some((i, j)) = pair else {
                break;
            };
            let gji = a.get(j, i).clone();
            let k = if !gji.trace().is_zero() {
                KElement::one()
            } else {
                KElement::sqrt_neg_delta()
            };
            debug_assert!(!ctx.mul(&k, &gji).trace().is_zero());
            add_multiple(&mut a, &mut p, i, j, &k);
            found = Some(i);
        }
        let i = found.expect("pivot");
        a.swap_rows(i, piv);
        a.swap_cols(i, piv);
        p.swap_cols(i, piv);
        let d = a.get(piv, piv).clone();
        debug_assert!(d.is_rational());
        let dinv = ctx.inv(&d)?;
        for t in piv + 1..n {
            if a.get(piv, t).is_zero() {
                continue;
            }
            let c = -&ctx.mul(a.get(piv, t), &dinv);
            add_multiple(&mut a, &mut p, t, piv, &c);
        }
        diagonal.push(d.a);
    }
    diagonal.resize(n, Rational::zero());
    Ok(Congruence {
        diagonal,
        transform: KMatrix::new(ctx, p),
    })
}

/// Exact signature of a Hermitian K-matrix (Sylvester inertia).
pub fn hermitian_signature_exact(g: &KMatrix) -> Result<Signature> {
    let c = congruence_diagonalize(g)?;
    let plus = c.diagonal.iter().filter(|d| d.is_positive()).count();
    let minus = c.diagonal.iter().filter(|d| d.is_negative()).count();
    Ok(Signature::new(plus, minus, c.diagonal.len() - plus - minus))
}

/// Outcome of a positivity test.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PosDef {
    pub is_posdef: bool,
    /// Smallest pivot seen; `+∞` for an empty matrix.
    pub min_pivot: f64,
}

/// Largest entrywise deviation from Hermitian symmetry.
pub fn hermitian_defect(m: &CMatrix) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..m.rows() {
        for j in i..m.cols() {
            worst = worst.max((m.get(i, j) - m.get(j, i).conj()).norm());
        }
    }
    worst
}

/// Positivity via Cholesky with diagonal pivoting: at each step the largest
/// remaining diagonal entry is eliminated, and the matrix is positive definite
/// iff every pivot exceeds `tol`.
pub fn posdef_check(m: &CMatrix, tol: f64) -> Result<PosDef> {
    if !m.is_square() {
        return Err(Error::BadShape(format!("{}x{} matrix is not square", m.rows(), m.cols())));
    }
    let defect = hermitian_defect(m);
    if defect > tol {
        return Err(Error::NotHermitian(format!("{defect:e}")));
    }
    let n = m.rows();
    let mut a = m.clone();
    let mut remaining: Vec<usize> = (0..n).collect();
    let mut min_pivot = f64::INFINITY;
    while !remaining.is_empty() {
        let (pos, &p) = remaining
            .iter()
            .enumerate()
            .max_by(|x, y| a.get(*x.1, *x.1).re.total_cmp(&a.get(*y.1, *y.1).re))
            .expect("non-empty");
        let pivot = a.get(p, p).re;
        min_pivot = min_pivot.min(pivot);
        if pivot <= tol {
            return Ok(PosDef {
                is_posdef: false,
                min_pivot,
            });
        }
        remaining.swap_remove(pos);
        for &i in &remaining {
            let f = a.get(i, p) / pivot;
            for &j in &remaining {
                let v = a.get(i, j) - f * a.get(p, j);
                a.set(i, j, v);
            }
        }
    }
    Ok(PosDef {
        is_posdef: true,
        min_pivot,
    })
}

/// Reduced row echelon form with partial pivoting; returns the reduced matrix
/// and the pivot columns.
pub fn rref(m: &CMatrix, tol: f64) -> (CMatrix, Vec<usize>) {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..a.cols() {
        if row == a.rows() {
            break;
        }
        let (p, mag) = (row..a.rows())
            .map(|i| (i, a.get(i, col).norm()))
            .fold((row, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if mag <= tol {
            for i in row..a.rows() {
                a.set(i, col, Complex64::zero());
            }
            continue;
        }
        a.swap_rows(p, row);
        let inv = a.get(row, col).inv();
        for j in 0..a.cols() {
            let v = a.get(row, j) * inv;
            a.set(row, j, v);
        }
        for i in 0..a.rows() {
            if i == row {
                continue;
            }
            let f = *a.get(i, col);
            if f == Complex64::zero() {
                continue;
            }
            for j in 0..a.cols() {
                let v = a.get(i, j) - f * a.get(row, j);
                a.set(i, j, v);
            }
        }
        pivots.push(col);
        row += 1;
    }
    (a, pivots)
}

pub fn rank(m: &CMatrix, tol: f64) -> usize {
    rref(m, tol).1.len()
}

/// Basis of the right kernel: one column per free column of the reduced
/// echelon form, in increasing index order.
pub fn kernel_basis(m: &CMatrix, tol: f64) -> CMatrix {
    let (r, pivots) = rref(m, tol);
    let free: Vec<usize> = (0..m.cols()).filter(|c| !pivots.contains(c)).collect();
    Matrix::from_fn(m.cols(), free.len(), |i, k| {
        let f = free[k];
        if i == f {
            Complex64::new(1.0, 0.0)
        } else if let Some(row) = pivots.iter().position(|&pc| pc == i) {
            -r.get(row, f)
        } else {
            Complex64::zero()
        }
    })
}

/// Returns `P` with `P*·G·P = E_{n,r−n}`.
///
/// Only the square-scaling case is handled: after exact diagonalization each
/// diagonal entry must have a rational square as absolute value.
pub fn gram_normalize(g: &KMatrix, n: usize) -> Result<KMatrix> {
    let r = g.rows();
    let ctx = *g.ctx();
    if n > r {
        return Err(Error::BadShape(format!("n = {n} exceeds dimension {r}")));
    }
    if *g == KMatrix::signature_matrix(ctx, n, r - n) {
        return Ok(KMatrix::identity(ctx, r));
    }
    let cong = congruence_diagonalize(g)?;
    let plus = cong.diagonal.iter().filter(|d| d.is_positive()).count();
    let minus = cong.diagonal.iter().filter(|d| d.is_negative()).count();
    if plus != n || minus != r - n {
        return Err(Error::WrongSignature {
            expected_plus: n,
            expected_minus: r - n,
            plus,
            minus,
            null: r - plus - minus,
        });
    }
    let mut scales = Vec::with_capacity(r);
    for d in &cong.diagonal {
        let root = rat_sqrt(&d.abs()).ok_or_else(|| {
            Error::NotNormalizable(format!("|{}| is not a rational square", rat_to_string(d)))
        })?;
        scales.push(Rational::from_integer(1.into()) / root);
    }
    let mut order: Vec<usize> = (0..r).filter(|&i| cong.diagonal[i].is_positive()).collect();
    order.extend((0..r).filter(|&i| cong.diagonal[i].is_negative()));
    let p = &cong.transform;
    Ok(KMatrix::from_fn(ctx, r, r, |i, j| {
        let src = order[j];
        p.get(i, src).scale(&scales[src])
    }))
}

/// Gram matrix `H(b_i, b_j)` of the columns of `basis` under the complex
/// Hermitian matrix `g`: `basisᵗ · g · conj(basis)`.
pub fn restricted_gram(g: &CMatrix, basis: &CMatrix) -> Result<CMatrix> {
    basis.transpose().mul(g)?.mul(&basis.conj())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{rat, FieldContext};
    use proptest::prelude::*;

    fn ctx(d: i64) -> FieldContext {
        FieldContext::new(d).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn conj_transpose_examples() {
        let k = ctx(3);
        assert_eq!(conj_transpose(&KMatrix::identity(k, 3)), KMatrix::identity(k, 3));
        let t = KMatrix::signature_matrix(k, 1, 1).scaled(&KElement::sqrt_neg_delta());
        assert_eq!(conj_transpose(&t), t.scaled(&KElement::from_int(-1)));
        let m = CMatrix::try_from_rows(vec![vec![c(0.0, 1.0), c(0.0, 0.0)], vec![c(2.0, 0.0), c(0.0, 0.0)]]).unwrap();
        let expected =
            CMatrix::try_from_rows(vec![vec![c(0.0, -1.0), c(2.0, 0.0)], vec![c(0.0, 0.0), c(0.0, 0.0)]]).unwrap();
        assert_eq!(conj_transpose(&m), expected);
    }

    #[test]
    fn signature_examples() {
        for (n, m) in [(1, 1), (2, 3), (0, 2), (4, 0)] {
            let g = KMatrix::signature_matrix(ctx(7), n, m);
            assert_eq!(hermitian_signature_exact(&g).unwrap(), Signature::new(n, m, 0));
        }
        let hyperbolic = KMatrix::from_ratios(ctx(2), &[&[(0, 1), (1, 1)], &[(1, 1), (0, 1)]]);
        assert_eq!(hermitian_signature_exact(&hyperbolic).unwrap(), Signature::new(1, 1, 0));
        assert_eq!(
            hermitian_signature_exact(&KMatrix::zeros(ctx(1), 3, 3)).unwrap(),
            Signature::new(0, 0, 3)
        );
    }

    #[test]
    fn signature_with_purely_imaginary_off_diagonal() {
        // [[0, √−Δ], [−√−Δ, 0]] has zero trace off the diagonal; the √−Δ shift is needed.
        let k = ctx(5);
        let s = KElement::sqrt_neg_delta();
        let g = KMatrix::from_rows(k, vec![vec![KElement::zero(), s.clone()], vec![-&s, KElement::zero()]]).unwrap();
        assert_eq!(hermitian_signature_exact(&g).unwrap(), Signature::new(1, 1, 0));
    }

    #[test]
    fn non_hermitian_is_rejected() {
        let g = KMatrix::from_ratios(ctx(1), &[&[(1, 1), (2, 1)], &[(3, 1), (1, 1)]]);
        assert!(matches!(hermitian_signature_exact(&g), Err(Error::NotHermitian(_))));
        let s = KMatrix::identity(ctx(1), 2).scaled(&KElement::sqrt_neg_delta());
        assert!(matches!(hermitian_signature_exact(&s), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn posdef_examples() {
        let r = posdef_check(&CMatrix::eye(3), 1e-9).unwrap();
        assert_eq!(r, PosDef { is_posdef: true, min_pivot: 1.0 });
        let r = posdef_check(&CMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]]), 1e-9).unwrap();
        assert_eq!(r, PosDef { is_posdef: false, min_pivot: -1.0 });
        let r = posdef_check(&CMatrix::from_real_rows(&[&[0.75]]), 1e-9).unwrap();
        assert_eq!(r, PosDef { is_posdef: true, min_pivot: 0.75 });
        let asym = CMatrix::from_real_rows(&[&[1.0, 0.5], &[0.0, 1.0]]);
        assert!(matches!(posdef_check(&asym, 1e-9), Err(Error::NotHermitian(_))));
        let empty = posdef_check(&CMatrix::zeros(0, 0), 1e-9).unwrap();
        assert!(empty.is_posdef && empty.min_pivot.is_infinite());
    }

    #[test]
    fn posdef_agrees_with_leading_minors_on_indefinite_case() {
        // [[1, 2], [2, 1]] has eigenvalues 3 and −1.
        let m = CMatrix::from_real_rows(&[&[1.0, 2.0], &[2.0, 1.0]]);
        assert!(!posdef_check(&m, 1e-9).unwrap().is_posdef);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel_basis(&CMatrix::eye(3), 1e-9).cols(), 0);
        let k = kernel_basis(&CMatrix::from_real_rows(&[&[1.0, 0.5]]), 1e-9);
        assert_eq!(k.cols(), 1);
        assert_eq!(*k.get(0, 0), c(-0.5, 0.0));
        assert_eq!(*k.get(1, 0), c(1.0, 0.0));
        // [E_2 | z] gives the columns (−z_{·i}; e_i).
        let z = [[c(0.1, 0.2), c(-0.3, 0.0)], [c(0.0, 0.4), c(0.2, -0.1)]];
        let m = Matrix::from_fn(2, 4, |i, j| {
            if j < 2 {
                if i == j {
                    c(1.0, 0.0)
                } else {
                    c(0.0, 0.0)
                }
            } else {
                z[i][j - 2]
            }
        });
        let k = kernel_basis(&m, 1e-9);
        for i in 0..2 {
            for (row, zr) in z.iter().enumerate() {
                assert_eq!(*k.get(row, i), -zr[i]);
            }
            for row in 2..4 {
                assert_eq!(*k.get(row, i), if row - 2 == i { c(1.0, 0.0) } else { c(0.0, 0.0) });
            }
        }
    }

    #[test]
    fn gram_normalize_examples() {
        let k = ctx(1);
        let e = KMatrix::signature_matrix(k, 2, 1);
        assert_eq!(gram_normalize(&e, 2).unwrap(), KMatrix::identity(k, 3));
        let g = KMatrix::from_ratios(k, &[&[(4, 1), (0, 1)], &[(0, 1), (-9, 1)]]);
        let p = gram_normalize(&g, 1).unwrap();
        assert_eq!(p, KMatrix::from_ratios(k, &[&[(1, 2), (0, 1)], &[(0, 1), (1, 3)]]));
        let g = KMatrix::from_ratios(k, &[&[(2, 1), (0, 1)], &[(0, 1), (-1, 1)]]);
        assert!(matches!(gram_normalize(&g, 1), Err(Error::NotNormalizable(_))));
        assert!(matches!(
            gram_normalize(&KMatrix::signature_matrix(k, 1, 1), 2),
            Err(Error::WrongSignature { .. })
        ));
    }

    #[test]
    fn gram_normalize_reorders_negative_first_input() {
        let k = ctx(3);
        let g = KMatrix::from_ratios(k, &[&[(-1, 4), (0, 1)], &[(0, 1), (9, 1)]]);
        let p = gram_normalize(&g, 1).unwrap();
        assert_eq!(p.adjoint().mul(&g).unwrap().mul(&p).unwrap(), KMatrix::signature_matrix(k, 1, 1));
    }

    fn arb_k_entry() -> impl Strategy<Value = KElement> {
        (-6i64..6, 1i64..4, -6i64..6, 1i64..4).prop_map(|(p, q, s, t)| KElement::from_ratios(p, q, s, t))
    }

    fn arb_hermitian(r: usize) -> impl Strategy<Value = Vec<KElement>> {
        prop::collection::vec(arb_k_entry(), r * r)
    }

    fn hermitian_from(k: FieldContext, r: usize, raw: &[KElement]) -> KMatrix {
        KMatrix::from_fn(k, r, r, |i, j| match i.cmp(&j) {
            std::cmp::Ordering::Less => raw[i * r + j].clone(),
            std::cmp::Ordering::Equal => KElement::from_rational(raw[i * r + j].a.clone()),
            std::cmp::Ordering::Greater => raw[j * r + i].conj(),
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn sylvester_law_of_inertia(
            r in 1usize..=5,
            raw in arb_hermitian(5),
            praw in prop::collection::vec(arb_k_entry(), 25),
            d in prop::sample::select(vec![1i64, 2, 3, 7]),
        ) {
            let k = ctx(d);
            let g = hermitian_from(k, r, &raw);
            let p = KMatrix::from_fn(k, r, r, |i, j| praw[i * 5 + j].clone());
            prop_assume!(!p.determinant().unwrap().is_zero());
            let s1 = hermitian_signature_exact(&g).unwrap();
            let s2 = hermitian_signature_exact(&p.adjoint().mul(&g).unwrap().mul(&p).unwrap()).unwrap();
            prop_assert_eq!(s1, s2);
            prop_assert_eq!(s1.dim(), r);
        }

        #[test]
        fn congruence_transform_is_exact(
            r in 1usize..=4,
            raw in arb_hermitian(4),
            d in prop::sample::select(vec![1i64, 2, 3, 7]),
        ) {
            let k = ctx(d);
            let g = hermitian_from(k, r, &raw);
            let cong = congruence_diagonalize(&g).unwrap();
            let p = &cong.transform;
            prop_assert!(!p.determinant().unwrap().is_zero());
            let diag: Vec<KElement> = cong.diagonal.iter().cloned().map(KElement::from_rational).collect();
            prop_assert_eq!(p.adjoint().mul(&g).unwrap().mul(p).unwrap(), KMatrix::diagonal(k, &diag));
        }

        #[test]
        fn gram_normalize_postcondition(
            n in 1usize..=3, m in 1usize..=2,
            scales in prop::collection::vec(1i64..6, 5),
            praw in prop::collection::vec(arb_k_entry(), 25),
        ) {
            let k = ctx(2);
            let r = n + m;
            let diag: Vec<KElement> = (0..r)
                .map(|i| {
                    let s = scales[i] * scales[i];
                    KElement::from_int(if i < n { s } else { -s })
                })
                .collect();
            let p0 = KMatrix::from_fn(k, r, r, |i, j| praw[i * 5 + j].clone());
            prop_assume!(!p0.determinant().unwrap().is_zero());
            // G = Q*·D·Q is congruent to a square-scaled diagonal but its own
            // diagonalization may land on non-squares; only check when it returns.
            let g = p0.adjoint().mul(&KMatrix::diagonal(k, &diag)).unwrap().mul(&p0).unwrap();
            if let Ok(p) = gram_normalize(&g, n) {
                prop_assert_eq!(p.adjoint().mul(&g).unwrap().mul(&p).unwrap(), KMatrix::signature_matrix(k, n, m));
            }
            let d = KMatrix::diagonal(k, &diag);
            let p = gram_normalize(&d, n).unwrap();
            prop_assert_eq!(p.adjoint().mul(&d).unwrap().mul(&p).unwrap(), KMatrix::signature_matrix(k, n, m));
        }

        #[test]
        fn posdef_implies_positive_leading_minors(
            r in 1usize..=4,
            raw in prop::collection::vec(-1.0f64..1.0, 32),
            shift in 0.0f64..3.0,
        ) {
            // B·B* − shift·E is Hermitian, sometimes definite, sometimes not.
            let b = Matrix::from_fn(r, r, |i, j| Complex64::new(raw[2 * (i * 4 + j)], raw[2 * (i * 4 + j) + 1]));
            let m = b.mul(&b.adjoint()).unwrap().sub(&CMatrix::eye(r).scaled(Complex64::new(shift, 0.0))).unwrap();
            let res = posdef_check(&m, 1e-9).unwrap();
            if res.is_posdef {
                for k in 1..=r {
                    let idx: Vec<usize> = (0..k).collect();
                    let d = crate::matrix::determinant(&crate::matrix::Complexes, &m.submatrix(&idx, &idx)).unwrap();
                    prop_assert!(d.re > 0.0);
                }
            }
        }

        #[test]
        fn kernel_columns_are_annihilated(
            rows in 1usize..=4, cols in 1usize..=6,
            raw in prop::collection::vec(-1.0f64..1.0, 48),
            dup in any::<bool>(),
        ) {
            let mut m = Matrix::from_fn(rows, cols, |i, j| Complex64::new(raw[2 * (i * 6 + j)], raw[2 * (i * 6 + j) + 1]));
            if dup && rows > 1 {
                for j in 0..cols {
                    let v = *m.get(0, j);
                    m.set(rows - 1, j, v * 2.0);
                }
            }
            let tol = 1e-9;
            let k = kernel_basis(&m, tol);
            prop_assert_eq!(rank(&m, tol) + k.cols(), cols);
            if k.cols() > 0 {
                prop_assert!(m.mul(&k).unwrap().max_abs() < 10.0 * tol);
            }
        }
    }

    #[test]
    fn rational_helpers_in_gram_normalize() {
        // diag(1/4, −1) → P = diag(2, 1)
        let k = ctx(1);
        let g = KMatrix::diagonal(k, &[KElement::from_rational(rat(1, 4)), KElement::from_int(-1)]);
        let p = gram_normalize(&g, 1).unwrap();
        assert_eq!(p, KMatrix::diagonal(k, &[KElement::from_int(2), KElement::one()]));
    }
}

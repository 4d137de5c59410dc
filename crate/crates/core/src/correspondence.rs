//! Abelian varieties `(A, ι, H)` given by a Siegel point (type B) and
//! triples `(L, H_L, α)` (type E), with the maps between them.
//!
//! `L` is modelled by its K-basis `x_1, …, x_r`; its Q-basis is
//! `(x_1, …, x_r, √−Δ·x_1, …, √−Δ·x_r)`. Everything is up to isogeny.

use num_complex::Complex64;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{trace_dual_solve, FieldContext, KElement, Rational};
use crate::linalg::{
    gram_normalize, hermitian_signature_exact, kernel_basis, posdef_check, rank, restricted_gram,
    PosDef, Signature,
};
use crate::matrix::{determinant, CMatrix, KMatrix, Matrix};
use crate::riemann::{riemann_form, RiemannForm};
use crate::siegel::{siegel_contains, t_matrix, SiegelPoint};

/// Multiplier and K-basis index of the Q-basis vector `p`.
pub fn q_basis_element(r: usize, p: usize) -> (KElement, usize) {
    if p < r {
        (KElement::one(), p)
    } else {
        (KElement::sqrt_neg_delta(), p - r)
    }
}

/// The alternating form `Ω` on the Q-structure of `L`, as a `2r × 2r`
/// rational matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct OmegaForm {
    r: usize,
    matrix: Matrix<Rational>,
}

impl OmegaForm {
    pub fn from_matrix(matrix: Matrix<Rational>) -> Result<Self> {
        if !matrix.is_square() || !matrix.rows().is_multiple_of(2) {
            return Err(Error::BadShape(format!(
                "omega must be 2r x 2r, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        Ok(OmegaForm {
            r: matrix.rows() / 2,
            matrix,
        })
    }

    /// `Ω(k_p·x_i, k_q·x_j) = Tr(k_p·t_ij·k̄_q)` on the Q-basis.
    pub fn from_t(t: &KMatrix) -> Self {
        let ctx = *t.ctx();
        let r = t.rows();
        let matrix = Matrix::from_fn(2 * r, 2 * r, |p, q| {
            let (kp, i) = q_basis_element(r, p);
            let (kq, j) = q_basis_element(r, q);
            ctx.mul(&ctx.mul(&kp, t.get(i, j)), &kq.conj()).trace()
        });
        OmegaForm { r, matrix }
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn matrix(&self) -> &Matrix<Rational> {
        &self.matrix
    }

    pub fn get(&self, p: usize, q: usize) -> &Rational {
        self.matrix.get(p, q)
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        OmegaForm {
            r: self.r,
            matrix: self.matrix.map(|x| x * c),
        }
    }

    pub fn is_alternating(&self) -> bool {
        let n = self.matrix.rows();
        (0..n).all(|p| {
            self.matrix.get(p, p).is_zero() && (p + 1..n).all(|q| *self.matrix.get(p, q) == -self.matrix.get(q, p).clone())
        })
    }

    /// Exact determinant, computed over `Q ⊂ K`.
    pub fn determinant(&self) -> Rational {
        let ctx = FieldContext::new(1).expect("1 is square-free");
        let m = self.matrix.map(|x| KElement::from_rational(x.clone()));
        determinant(&ctx, &m).expect("square").a
    }
}

/// `Tr(k1·t_ij·k̄2) = Ω(k1*x_i, k2*x_j)`.
pub fn omega_pair(v: &VarietyB, k1: &KElement, i: usize, k2: &KElement, j: usize) -> Rational {
    let ctx = &v.ctx;
    ctx.mul(&ctx.mul(k1, v.t.get(i, j)), &k2.conj()).trace()
}

/// Type-B datum: the variety `A_z` of a Siegel point.
#[derive(Clone, Debug)]
pub struct VarietyB {
    ctx: FieldContext,
    n: usize,
    r: usize,
    z: SiegelPoint,
    t: KMatrix,
    y: CMatrix,
    omega: OmegaForm,
}

impl VarietyB {
    pub fn ctx(&self) -> &FieldContext {
        &self.ctx
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn r(&self) -> usize {
        self.r
    }
    pub fn z(&self) -> &SiegelPoint {
        &self.z
    }
    pub fn t(&self) -> &KMatrix {
        &self.t
    }
    /// `x_* = Y·e_*` with `Y = [[E_n, z], [zᵗ, E_{r−n}]]`.
    pub fn y(&self) -> &CMatrix {
        &self.y
    }
    pub fn omega(&self) -> &OmegaForm {
        &self.omega
    }

    /// `β(l)` for `l = Σ l_j·x_j`, in `e_*` coordinates.
    pub fn beta(&self, l: &[KElement]) -> Vec<Complex64> {
        let mut out = vec![Complex64::zero(); self.r];
        for (j, k) in l.iter().enumerate() {
            let row: Vec<Complex64> = (0..self.r).map(|c| *self.y.get(j, c)).collect();
            for (o, x) in out.iter_mut().zip(star_act(self, k, &row)) {
                *o += x;
            }
        }
        out
    }

    /// Images in `V` of the Q-basis of `L`.
    pub fn lattice_images(&self) -> Vec<Vec<Complex64>> {
        (0..2 * self.r)
            .map(|p| {
                let (k, j) = q_basis_element(self.r, p);
                let mut l = vec![KElement::zero(); self.r];
                l[j] = k;
                self.beta(&l)
            })
            .collect()
    }

    pub fn riemann_form(&self, tol: f64) -> Result<RiemannForm> {
        riemann_form(&self.lattice_images(), self.omega.matrix(), tol)
    }
}

/// The K-*-action on `V`: `k` on `V⁺ = span(e_1..e_n)`, `k̄` on `V⁻`.
pub fn star_act(v: &VarietyB, k: &KElement, x: &[Complex64]) -> Vec<Complex64> {
    star_act_split(&v.ctx, v.n, k, x)
}

fn star_act_split(ctx: &FieldContext, n: usize, k: &KElement, x: &[Complex64]) -> Vec<Complex64> {
    let kc = ctx.embed(k);
    x.iter()
        .enumerate()
        .map(|(i, v)| if i < n { kc * v } else { kc.conj() * v })
        .collect()
}

/// `Y = [[E_n, z], [zᵗ, E_m]]`.
pub fn y_matrix(z: &CMatrix) -> CMatrix {
    let (n, m) = (z.rows(), z.cols());
    Matrix::from_fn(n + m, n + m, |i, j| match (i < n, j < n) {
        (true, true) | (false, false) => {
            if i == j {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::zero()
            }
        }
        (true, false) => *z.get(i, j - n),
        (false, true) => *z.get(j, i - n),
    })
}

pub fn variety_build(ctx: FieldContext, n: usize, r: usize, z: &CMatrix, tol: f64) -> Result<VarietyB> {
    if n == 0 || n >= r {
        return Err(Error::BadShape(format!("need 1 <= n < r, got n = {n}, r = {r}")));
    }
    if z.rows() != n || z.cols() != r - n {
        return Err(Error::BadShape(format!(
            "z must be {n}x{}, got {}x{}",
            r - n,
            z.rows(),
            z.cols()
        )));
    }
    let point = SiegelPoint::new(z.clone(), tol)?;
    let t = t_matrix(ctx, n, r - n);
    debug_assert_eq!(t.adjoint(), t.scaled(&KElement::from_int(-1)));
    let omega = OmegaForm::from_t(&t);
    Ok(VarietyB {
        ctx,
        n,
        r,
        y: y_matrix(z),
        z: point,
        t,
        omega,
    })
}

/// The Hermitian K-form attached to `T` with `Tr(√−Δ·H) = Ω`: `H = T·(√−Δ)⁻¹`.
pub fn associated_hermitian(t: &KMatrix) -> Result<KMatrix> {
    let ctx = *t.ctx();
    Ok(t.scaled(&ctx.inv(&KElement::sqrt_neg_delta())?))
}

/// Properties (a) `T̄ᵗ = −T` and (b) signature `(n, r−n)`, exactly.
pub fn t_properties(v: &VarietyB) -> Result<(bool, Signature)> {
    let skew = v.t.adjoint() == v.t.scaled(&KElement::from_int(-1));
    let sig = hermitian_signature_exact(&associated_hermitian(&v.t)?)?;
    Ok((skew, sig))
}

/// Recovers `H_L` from `Ω` through `Tr(√−Δ·H_L(l1, l2)) = Ω(β(l1), β(l2))`.
pub fn h_from_omega(omega: &OmegaForm, ctx: &FieldContext) -> Result<KMatrix> {
    let r = omega.r();
    let sqrt = KElement::sqrt_neg_delta();
    let mut entries = Vec::with_capacity(r * r);
    for i in 0..r {
        for j in 0..r {
            // γ(k) = Ω(k*x_i, x_j) on k ∈ {1, √−Δ}.
            let k0 = trace_dual_solve(omega.get(i, j), omega.get(r + i, j), ctx);
            entries.push(ctx.div(&k0, &sqrt)?);
        }
    }
    let h = KMatrix::from_fn(*ctx, r, r, |i, j| entries[i * r + j].clone());
    if !h.is_hermitian() {
        return Err(Error::InconsistentOmega("recovered H_L is not hermitian".into()));
    }
    let rebuilt = OmegaForm::from_t(&h.scaled(&sqrt));
    if let Some((p, q)) = (0..2 * r)
        .flat_map(|p| (0..2 * r).map(move |q| (p, q)))
        .find(|&(p, q)| rebuilt.get(p, q) != omega.get(p, q))
    {
        return Err(Error::InconsistentOmega(format!(
            "entry ({p}, {q}) is not Tr(√−Δ·H_L) of the recovered form"
        )));
    }
    Ok(h)
}

/// Type-E datum `(L, H_L, α)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TripleE {
    ctx: FieldContext,
    n: usize,
    r: usize,
    gram: KMatrix,
    alpha: CMatrix,
}

impl TripleE {
    pub fn new(n: usize, r: usize, gram: KMatrix, alpha: CMatrix) -> Result<Self> {
        if n == 0 || n >= r {
            return Err(Error::BadShape(format!("need 1 <= n < r, got n = {n}, r = {r}")));
        }
        if gram.rows() != r || gram.cols() != r {
            return Err(Error::BadShape(format!("gram must be {r}x{r}, got {}x{}", gram.rows(), gram.cols())));
        }
        if alpha.rows() != n || alpha.cols() != r {
            return Err(Error::BadShape(format!(
                "alpha must be {n}x{r}, got {}x{}",
                alpha.rows(),
                alpha.cols()
            )));
        }
        Ok(TripleE {
            ctx: *gram.ctx(),
            n,
            r,
            gram,
            alpha,
        })
    }

    pub fn ctx(&self) -> &FieldContext {
        &self.ctx
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn r(&self) -> usize {
        self.r
    }
    pub fn gram(&self) -> &KMatrix {
        &self.gram
    }
    pub fn alpha(&self) -> &CMatrix {
        &self.alpha
    }

    fn idx(a: usize, b: usize) -> Vec<usize> {
        (a..b).collect()
    }

    /// Right block of a normalized `α = [E_n | z]`.
    pub fn normalized_z(&self, tol: f64) -> Result<CMatrix> {
        let left = self.alpha.submatrix(&Self::idx(0, self.n), &Self::idx(0, self.n));
        let dev = left.max_abs_diff(&CMatrix::eye(self.n));
        if dev > tol {
            return Err(Error::NotNormalized(format!("left block deviates from E_n by {dev:e}")));
        }
        Ok(self.alpha.submatrix(&Self::idx(0, self.n), &Self::idx(self.n, self.r)))
    }

    fn is_standard_gram(&self) -> bool {
        self.gram == KMatrix::signature_matrix(self.ctx, self.n, self.r - self.n)
    }
}

/// The construction `α(l ⊗ w) = w·π₊(β(l))` and `H_L` from `Ω`.
pub fn b_to_e(v: &VarietyB) -> Result<TripleE> {
    let gram = h_from_omega(&v.omega, &v.ctx)?;
    let alpha = Matrix::from_fn(v.n, v.r, |i, j| *v.y.get(j, i));
    TripleE::new(v.n, v.r, gram, alpha)
}

/// Columns `λ_i = x_{n+i} − Σ_k z_{ki}·x_k` spanning `Ker α`.
pub fn ker_alpha_basis(e: &TripleE, tol: f64) -> Result<CMatrix> {
    let z = e.normalized_z(tol)?;
    Ok(lambda_basis(&z))
}

fn lambda_basis(z: &CMatrix) -> CMatrix {
    let (n, m) = (z.rows(), z.cols());
    Matrix::from_fn(n + m, m, |row, i| {
        if row < n {
            -z.get(row, i)
        } else if row - n == i {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::zero()
        }
    })
}

/// Columns `μ_i = x_i − Σ_k z̄_{ik}·x_{n+k}`.
fn mu_basis(z: &CMatrix) -> CMatrix {
    let (n, m) = (z.rows(), z.cols());
    Matrix::from_fn(n + m, n, |row, i| {
        if row < n {
            if row == i {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::zero()
            }
        } else {
            -z.get(i, row - n).conj()
        }
    })
}

fn require_standard(e: &TripleE) -> Result<()> {
    if !e.is_standard_gram() {
        return Err(Error::NotNormalized("gram is not E_{n,r-n}".into()));
    }
    Ok(())
}

/// `H_{L,C}(λ_i, λ_j)`, checked against `zᵗz̄ − E_{r−n}`.
pub fn ker_gram(e: &TripleE, tol: f64) -> Result<CMatrix> {
    require_standard(e)?;
    let z = e.normalized_z(tol)?;
    let lam = lambda_basis(&z);
    let g = restricted_gram(&e.gram.embed(), &lam)?;
    let formula = z.transpose().mul(&z.conj())?.sub(&CMatrix::eye(z.cols()))?;
    let dev = g.max_abs_diff(&formula);
    if dev >= 1e-12 {
        return Err(Error::KernelGramMismatch(dev));
    }
    Ok(g)
}

/// Builds the `μ` columns and returns `max |H_{L,C}(λ_i, μ_j)|`.
pub fn mu_basis_orthogonality(e: &TripleE, tol: f64) -> Result<(CMatrix, f64)> {
    require_standard(e)?;
    let z = e.normalized_z(tol)?;
    let lam = lambda_basis(&z);
    let mu = mu_basis(&z);
    let pairing = lam.transpose().mul(&e.gram.embed())?.mul(&mu.conj())?;
    let both = lam.hstack(&mu)?;
    if rank(&both, tol) != e.r {
        return Err(Error::BadShape("λ and μ do not span L ⊗ C".into()));
    }
    Ok((mu, pairing.max_abs()))
}

/// One named pass/fail entry of a validation report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn push(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.to_string(),
            passed,
            detail: detail.into(),
        });
        self.passed = self.checks.iter().all(|c| c.passed);
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn passed(&self, name: &str) -> bool {
        self.check(name).is_some_and(|c| c.passed)
    }

    pub fn extend(&mut self, other: ValidationReport) {
        for c in other.checks {
            self.push(&c.name, c.passed, c.detail);
        }
    }
}

/// `−H_{L,C}` restricted to the numerical kernel of `α`.
pub fn kernel_positivity(e: &TripleE, tol: f64) -> Result<PosDef> {
    let k = kernel_basis(&e.alpha, tol);
    let g = restricted_gram(&e.gram.embed(), &k)?;
    posdef_check(&g.scaled(Complex64::new(-1.0, 0.0)), tol)
}

/// Conditions of a type-E triple, each reported separately.
pub fn validate_triple(e: &TripleE, tol: f64) -> ValidationReport {
    let mut rep = ValidationReport {
        passed: true,
        checks: Vec::new(),
    };
    let hermitian = e.gram.is_hermitian();
    rep.push("hermitian", hermitian, if hermitian { "gram = conj(gram)^t exactly" } else { "gram is not hermitian" });
    match hermitian_signature_exact(&e.gram) {
        Ok(s) => rep.push(
            "signature",
            s == Signature::new(e.n, e.r - e.n, 0),
            format!("({}, {}, {}), expected ({}, {}, 0)", s.plus, s.minus, s.null, e.n, e.r - e.n),
        ),
        Err(err) => rep.push("signature", false, err.to_string()),
    }
    match gram_normalize(&e.gram, e.n) {
        Ok(_) => rep.push(
            "normalizable",
            true,
            if e.is_standard_gram() { "gram is E_{n,r-n}" } else { "square-scaling basis found" },
        ),
        Err(err) => rep.push("normalizable", false, err.to_string()),
    }
    let rk = rank(&e.alpha, tol);
    rep.push("surjective", rk == e.n, format!("rank {rk}, expected {}", e.n));
    match kernel_positivity(e, tol) {
        Ok(p) => rep.push("kernel_posdef", p.is_posdef, format!("min pivot {}", fmt_pivot(p.min_pivot))),
        Err(err) => rep.push("kernel_posdef", false, err.to_string()),
    }
    rep
}

pub(crate) fn fmt_pivot(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.6e}")
    } else {
        format!("{x}")
    }
}

/// Element `𝔦(w)` of the conjugate space of a complex vector space, stored
/// by the coordinates of `w`; scalars act through their conjugates.
#[derive(Clone, Debug, PartialEq)]
pub struct ConjVector(Vec<Complex64>);

impl ConjVector {
    pub fn wrap(w: Vec<Complex64>) -> Self {
        ConjVector(w)
    }

    /// The underlying `w`.
    pub fn unwrap(&self) -> &[Complex64] {
        &self.0
    }

    /// `s·𝔦(w) = 𝔦(s̄·w)`.
    pub fn scale(&self, s: Complex64) -> Self {
        ConjVector(self.0.iter().map(|x| s.conj() * x).collect())
    }

    /// C-linear coordinates of `𝔦(w)` in the basis `𝔦(b_1), 𝔦(b_2), …`.
    pub fn coordinates(&self) -> Vec<Complex64> {
        self.0.iter().map(|x| x.conj()).collect()
    }
}

/// Everything the inverse construction produced, for reporting.
#[derive(Clone, Debug)]
pub struct Reconstruction {
    pub variety: VarietyB,
    /// Change of K-basis to a basis with gram `E_{n,r−n}` (columns).
    pub basis_change: KMatrix,
    /// `α` in the new bases, `[E_n | z]`.
    pub alpha: CMatrix,
    /// Images in `V = Cⁿ ⊕ 𝔦(Ker α)` of the Q-basis of `L`.
    pub lattice_images: Vec<Vec<Complex64>>,
    pub star_defect: f64,
    pub membership: PosDef,
    pub riemann: RiemannForm,
}

/// Inverse construction: recovers `A_z` from a triple.
pub fn e_to_b(e: &TripleE, tol: f64) -> Result<VarietyB> {
    Ok(e_to_b_detailed(e, tol)?.variety)
}

/// Rewrites a triple in a K-basis with gram `E_{n,r−n}` and composes `α`
/// with the inverse of its left block, so `α = [E_n | z]`. Returns the
/// normalized triple and the basis change (columns).
pub fn normalize_triple(e: &TripleE, tol: f64) -> Result<(TripleE, KMatrix)> {
    let (n, r) = (e.n, e.r);
    // Columns of conj(P) where P*GP = E.
    let q = gram_normalize(&e.gram, n)?.conj();
    let alpha1 = e.alpha.mul(&q.embed())?;
    let left_idx: Vec<usize> = (0..n).collect();
    let left = alpha1.submatrix(&left_idx, &left_idx);
    let left_inv = left.inverse()?.ok_or(Error::SingularLeadingBlock)?;
    let cond = left.norm1() * left_inv.norm1();
    if !cond.is_finite() || cond * tol > 1.0 {
        return Err(Error::SingularLeadingBlock);
    }
    let alpha2 = left_inv.mul(&alpha1)?;
    let gram = KMatrix::signature_matrix(e.ctx, n, r - n);
    Ok((TripleE::new(n, r, gram, alpha2)?, q))
}

pub fn e_to_b_detailed(e: &TripleE, tol: f64) -> Result<Reconstruction> {
    let (n, r, ctx) = (e.n, e.r, e.ctx);
    // (i)
    let (normal, q) = normalize_triple(e, tol)?;
    let alpha2 = normal.alpha;
    let left_idx: Vec<usize> = (0..n).collect();
    let right_idx: Vec<usize> = (n..r).collect();
    let z = alpha2.submatrix(&left_idx, &right_idx);
    // (ii)
    let membership = siegel_contains(&z, tol)?;
    if !membership.is_posdef {
        return Err(Error::NotInDomain(membership.min_pivot));
    }
    // (iii) l ↦ (α(l), 𝔦∘π_α(l)) with π_α along the H-orthogonal complement.
    let gram_c = KMatrix::signature_matrix(ctx, n, r - n).embed();
    let lam = lambda_basis(&z);
    let lam_gram = restricted_gram(&gram_c, &lam)?;
    let solver = lam_gram
        .transpose()
        .inverse()?
        .ok_or_else(|| Error::RiemannCheckFailed("kernel gram is singular".into()))?;
    let embed_l = |u: &[Complex64]| -> Result<Vec<Complex64>> {
        let col = Matrix::from_fn(r, 1, |i, _| u[i]);
        let a = alpha2.mul(&col)?;
        // h_i = H(u, λ_i); π_α(u) = Σ c_i λ_i with Gᵗc = h.
        let h = col.transpose().mul(&gram_c)?.mul(&lam.conj())?.transpose();
        let c = solver.mul(&h)?;
        let conj_part = ConjVector::wrap(c.column(0)).coordinates();
        Ok(a.column(0).into_iter().chain(conj_part).collect())
    };
    let mut images = Vec::with_capacity(2 * r);
    for pidx in 0..2 * r {
        let (k, j) = q_basis_element(r, pidx);
        let kc = ctx.embed(&k);
        let u: Vec<Complex64> = (0..r).map(|i| if i == j { kc } else { Complex64::zero() }).collect();
        images.push(embed_l(&u)?);
    }
    let sqrt = KElement::sqrt_neg_delta();
    let mut star_defect: f64 = 0.0;
    for j in 0..r {
        let acted = star_act_split(&ctx, n, &sqrt, &images[j]);
        for (a, b) in acted.iter().zip(&images[r + j]) {
            star_defect = star_defect.max((a - b).norm());
        }
    }
    if star_defect > tol {
        return Err(Error::RiemannCheckFailed(format!(
            "K-*-action on the image deviates by {star_defect:e}"
        )));
    }
    // Ω on the image by Tr(√−Δ·H_L(l1, l2)) with H_L = E_{n,r−n} in the new basis.
    let omega = OmegaForm::from_t(&t_matrix(ctx, n, r - n));
    let riemann = riemann_form(&images, omega.matrix(), tol)?;
    if !riemann.is_positive(tol) {
        return Err(Error::RiemannCheckFailed(format!(
            "H = B + iΩ not positive hermitian (min pivot {}, hermitian defect {:e}, J defect {:e})",
            fmt_pivot(riemann.posdef.min_pivot),
            riemann.hermitian_defect,
            riemann.j_defect
        )));
    }
    // (iv)
    let variety = variety_build(ctx, n, r, &z, tol)?;
    Ok(Reconstruction {
        variety,
        basis_change: q,
        alpha: alpha2,
        lattice_images: images,
        star_defect,
        membership,
        riemann,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{rat, rat_int, Embedding};
    use crate::linalg::DEFAULT_TOL;
    use crate::siegel::siegel_sample;

    fn ctx(d: i64) -> FieldContext {
        FieldContext::new(d).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn var(d: i64, n: usize, r: usize, z: CMatrix) -> VarietyB {
        variety_build(ctx(d), n, r, &z, DEFAULT_TOL).unwrap()
    }

    #[test]
    fn build_example_delta_one() {
        let v = var(1, 1, 2, CMatrix::zeros(1, 1));
        let s = KElement::sqrt_neg_delta();
        assert_eq!(v.t(), &KMatrix::diagonal(ctx(1), &[s.clone(), -&s]));
        let om = v.omega();
        assert!(om.get(0, 0).is_zero() && om.get(1, 1).is_zero());
        // Ω(√−Δ*x_1, x_1) = Tr(√−1·√−1) = −2
        assert_eq!(om.get(2, 0), &rat_int(-2));
        assert_eq!(omega_pair(&v, &s, 0, &KElement::one(), 0), rat_int(-2));
    }

    #[test]
    fn t_properties_hold() {
        for d in [1, 3, 7] {
            for (n, r) in [(1, 2), (2, 5), (3, 4)] {
                let v = var(d, n, r, CMatrix::zeros(n, r - n));
                let (skew, sig) = t_properties(&v).unwrap();
                assert!(skew);
                assert_eq!(sig, Signature::new(n, r - n, 0));
            }
        }
    }

    #[test]
    fn associated_form_is_it_scaled_under_default_embedding() {
        // With √−Δ ↦ −i√Δ, T/√−Δ embeds to iT/√Δ.
        let k = ctx(3);
        let t = t_matrix(k, 1, 2);
        let h = associated_hermitian(&t).unwrap().embed();
        let it = t.embed().scaled(c(0.0, 1.0 / 3f64.sqrt()));
        assert!(h.max_abs_diff(&it) < 1e-15);
    }

    #[test]
    fn omega_pair_examples() {
        let v = var(3, 1, 2, CMatrix::zeros(1, 1));
        let s = KElement::sqrt_neg_delta();
        let one = KElement::one();
        assert_eq!(omega_pair(&v, &one, 0, &one, 0), rat_int(0));
        assert_eq!(omega_pair(&v, &s, 0, &one, 0), rat_int(-6));
        assert_eq!(omega_pair(&v, &one, 1, &s, 1), rat_int(-6));
    }

    #[test]
    fn omega_is_alternating_and_nondegenerate() {
        for (n, r) in [(1, 2), (2, 3), (1, 4)] {
            let v = var(2, n, r, CMatrix::zeros(n, r - n));
            assert!(v.omega().is_alternating());
            assert!(!v.omega().determinant().is_zero());
        }
    }

    #[test]
    fn h_from_omega_examples() {
        let k = ctx(7);
        let v = var(7, 2, 3, CMatrix::zeros(2, 1));
        let e = KMatrix::signature_matrix(k, 2, 1);
        assert_eq!(h_from_omega(v.omega(), &k).unwrap(), e);
        let doubled = v.omega().scaled(&rat_int(2));
        assert_eq!(h_from_omega(&doubled, &k).unwrap(), e.scaled(&KElement::from_int(2)));
        let mut m = v.omega().matrix().clone();
        let bumped = m.get(0, 1) + rat(1, 1);
        m.set(0, 1, bumped);
        let bad = OmegaForm::from_matrix(m).unwrap();
        assert!(matches!(h_from_omega(&bad, &k), Err(Error::InconsistentOmega(_))));
    }

    #[test]
    fn inconsistent_omega_in_untested_quadrant() {
        // Perturb an entry Ω(x_i, √−Δ·x_j) that the trace-dual step never reads.
        let k = ctx(2);
        let v = var(2, 1, 2, CMatrix::zeros(1, 1));
        let mut m = v.omega().matrix().clone();
        let bumped = m.get(0, 3) + rat(1, 2);
        m.set(0, 3, bumped);
        assert!(matches!(h_from_omega(&OmegaForm::from_matrix(m).unwrap(), &k), Err(Error::InconsistentOmega(_))));
    }

    #[test]
    fn b_to_e_examples() {
        let e = b_to_e(&var(1, 1, 2, CMatrix::zeros(1, 1))).unwrap();
        assert_eq!(e.gram(), &KMatrix::signature_matrix(ctx(1), 1, 1));
        assert_eq!(e.alpha(), &CMatrix::from_real_rows(&[&[1.0, 0.0]]));
        let e = b_to_e(&var(2, 1, 2, CMatrix::from_real_rows(&[&[0.5]]))).unwrap();
        assert_eq!(e.alpha(), &CMatrix::from_real_rows(&[&[1.0, 0.5]]));
    }

    #[test]
    fn kernel_basis_examples() {
        let e = b_to_e(&var(1, 2, 4, CMatrix::zeros(2, 2))).unwrap();
        let lam = ker_alpha_basis(&e, DEFAULT_TOL).unwrap();
        assert_eq!(lam, Matrix::from_fn(4, 2, |i, j| if i == j + 2 { c(1.0, 0.0) } else { c(0.0, 0.0) }));
        let e = b_to_e(&var(1, 1, 2, CMatrix::from_real_rows(&[&[0.5]]))).unwrap();
        let lam = ker_alpha_basis(&e, DEFAULT_TOL).unwrap();
        assert_eq!(lam.column(0), vec![c(-0.5, 0.0), c(1.0, 0.0)]);
        let z = siegel_sample(2, 3, 5).unwrap();
        let e = b_to_e(&var(3, 2, 5, z.z().clone())).unwrap();
        let lam = ker_alpha_basis(&e, DEFAULT_TOL).unwrap();
        assert!(e.alpha().mul(&lam).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn not_normalized_alpha_is_rejected() {
        let k = ctx(1);
        let e = TripleE::new(1, 2, KMatrix::signature_matrix(k, 1, 1), CMatrix::from_real_rows(&[&[2.0, 1.0]])).unwrap();
        assert!(matches!(ker_alpha_basis(&e, DEFAULT_TOL), Err(Error::NotNormalized(_))));
    }

    #[test]
    fn ker_gram_examples() {
        let e = b_to_e(&var(1, 1, 3, CMatrix::zeros(1, 2))).unwrap();
        assert_eq!(ker_gram(&e, DEFAULT_TOL).unwrap(), CMatrix::from_real_rows(&[&[-1.0, 0.0], &[0.0, -1.0]]));
        let e = b_to_e(&var(1, 1, 2, CMatrix::from_real_rows(&[&[0.5]]))).unwrap();
        assert!(ker_gram(&e, DEFAULT_TOL).unwrap().max_abs_diff(&CMatrix::from_real_rows(&[&[-0.75]])) < 1e-15);
        let e = b_to_e(&var(1, 1, 3, CMatrix::from_real_rows(&[&[0.5, 0.5]]))).unwrap();
        let expected = CMatrix::from_real_rows(&[&[-0.75, 0.25], &[0.25, -0.75]]);
        assert!(ker_gram(&e, DEFAULT_TOL).unwrap().max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn mu_examples() {
        let e = b_to_e(&var(1, 2, 3, CMatrix::zeros(2, 1))).unwrap();
        let (mu, pairing) = mu_basis_orthogonality(&e, DEFAULT_TOL).unwrap();
        assert_eq!(pairing, 0.0);
        assert_eq!(mu, Matrix::from_fn(3, 2, |i, j| if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) }));
        let e = b_to_e(&var(1, 1, 2, CMatrix::from_real_rows(&[&[0.5]]))).unwrap();
        let (mu, pairing) = mu_basis_orthogonality(&e, DEFAULT_TOL).unwrap();
        assert_eq!(mu.column(0), vec![c(1.0, 0.0), c(-0.5, 0.0)]);
        assert_eq!(pairing, 0.0);
        for seed in 0..10 {
            let z = siegel_sample(2, 2, seed).unwrap();
            let e = b_to_e(&var(1, 2, 4, z.z().clone())).unwrap();
            assert!(mu_basis_orthogonality(&e, DEFAULT_TOL).unwrap().1 < 1e-12);
        }
    }

    #[test]
    fn validate_examples() {
        let z = siegel_sample(2, 1, 9).unwrap();
        let rep = validate_triple(&b_to_e(&var(3, 2, 3, z.z().clone())).unwrap(), DEFAULT_TOL);
        assert!(rep.passed, "{rep:?}");
        let k = ctx(1);
        let outside = TripleE::new(1, 2, KMatrix::signature_matrix(k, 1, 1), CMatrix::from_real_rows(&[&[1.0, 1.5]])).unwrap();
        let rep = validate_triple(&outside, DEFAULT_TOL);
        assert!(!rep.passed("kernel_posdef"));
        assert!(rep.passed("signature") && rep.passed("surjective"));
        let zero_row = TripleE::new(
            2,
            3,
            KMatrix::signature_matrix(k, 2, 1),
            CMatrix::from_real_rows(&[&[1.0, 0.0, 0.1], &[0.0, 0.0, 0.0]]),
        )
        .unwrap();
        assert!(!validate_triple(&zero_row, DEFAULT_TOL).passed("surjective"));
        let indefinite = KMatrix::signature_matrix(k, 2, 0);
        let rep = validate_triple(
            &TripleE::new(1, 2, indefinite, CMatrix::from_real_rows(&[&[1.0, 0.0]])).unwrap(),
            DEFAULT_TOL,
        );
        assert!(!rep.passed("signature"));
    }

    #[test]
    fn e_to_b_examples() {
        let k = ctx(1);
        let e = TripleE::new(1, 2, KMatrix::signature_matrix(k, 1, 1), CMatrix::from_real_rows(&[&[2.0, 1.0]])).unwrap();
        let v = e_to_b(&e, DEFAULT_TOL).unwrap();
        assert!((v.z().z().get(0, 0) - c(0.5, 0.0)).norm() < 1e-15);
        let e = TripleE::new(1, 2, KMatrix::signature_matrix(k, 1, 1), CMatrix::from_real_rows(&[&[1.0, 2.0]])).unwrap();
        assert!(matches!(e_to_b(&e, DEFAULT_TOL), Err(Error::NotInDomain(_))));
    }

    #[test]
    fn e_to_b_with_non_standard_gram() {
        // gram = diag(4, −9): normalized basis x_1/2, x_2/3, so α' = [α_1/2, α_2/3].
        let k = ctx(2);
        let g = KMatrix::from_ratios(k, &[&[(4, 1), (0, 1)], &[(0, 1), (-9, 1)]]);
        let e = TripleE::new(1, 2, g, CMatrix::from_real_rows(&[&[1.0, 0.9]])).unwrap();
        let v = e_to_b(&e, DEFAULT_TOL).unwrap();
        // z = (0.9/3) / (1/2) = 0.6
        assert!((v.z().z().get(0, 0) - c(0.6, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn round_trip_and_riemann() {
        for seed in 0..20u64 {
            let (n, m) = (1 + (seed % 2) as usize, 1 + (seed % 3) as usize);
            let z = siegel_sample(n, m, seed).unwrap();
            let v = var([1, 2, 3, 7][(seed % 4) as usize], n, n + m, z.z().clone());
            let rec = e_to_b_detailed(&b_to_e(&v).unwrap(), DEFAULT_TOL).unwrap();
            assert!(rec.variety.z().z().max_abs_diff(z.z()) < 1e-9);
            assert!(rec.riemann.is_positive(DEFAULT_TOL));
            assert!(v.riemann_form(DEFAULT_TOL).unwrap().is_positive(DEFAULT_TOL));
        }
    }

    #[test]
    fn riemann_form_flips_under_the_other_embedding() {
        let z = siegel_sample(1, 2, 4).unwrap();
        let k = FieldContext::with_embedding(3, Embedding::PositiveImaginary).unwrap();
        let v = variety_build(k, 1, 3, z.z(), DEFAULT_TOL).unwrap();
        let rf = v.riemann_form(DEFAULT_TOL).unwrap();
        assert!(!rf.posdef.is_posdef);
        let neg = rf.hermitian.scaled(c(-1.0, 0.0));
        assert!(posdef_check(&neg, DEFAULT_TOL).unwrap().is_posdef);
        let e = b_to_e(&v).unwrap();
        assert!(matches!(e_to_b(&e, DEFAULT_TOL), Err(Error::RiemannCheckFailed(_))));
        // Membership and kernel positivity do not see the embedding.
        assert!(validate_triple(&e, DEFAULT_TOL).passed);
    }

    #[test]
    fn star_act_examples() {
        let k = FieldContext::with_embedding(5, Embedding::PositiveImaginary).unwrap();
        let v = variety_build(k, 1, 3, &CMatrix::zeros(1, 2), DEFAULT_TOL).unwrap();
        let x = vec![c(1.0, 2.0), c(-1.0, 0.5), c(0.0, 3.0)];
        let q = KElement::from_ratios(3, 2, 0, 1);
        let out = star_act(&v, &q, &x);
        assert!(out.iter().zip(&x).all(|(a, b)| (a - b * 1.5).norm() < 1e-15));
        let s = KElement::sqrt_neg_delta();
        let e1 = star_act(&v, &s, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert!((e1[0] - c(0.0, 5f64.sqrt())).norm() < 1e-15);
        let er = star_act(&v, &s, &[c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        assert!((er[2] - c(0.0, -5f64.sqrt())).norm() < 1e-15);
    }

    #[test]
    fn compatibility_with_omega() {
        let k = ctx(7);
        let z = siegel_sample(2, 1, 1).unwrap();
        let v = var(7, 2, 3, z.z().clone());
        let h = b_to_e(&v).unwrap().gram().clone();
        let ks = [KElement::from_ratios(1, 2, 3, 1), KElement::from_ratios(-2, 3, 1, 5), KElement::one()];
        let s = KElement::sqrt_neg_delta();
        for k1 in &ks {
            for k2 in &ks {
                for i in 0..3 {
                    for j in 0..3 {
                        let hl = k.mul(&k.mul(k1, h.get(i, j)), &k2.conj());
                        assert_eq!(k.mul(&s, &hl).trace(), omega_pair(&v, k1, i, k2, j));
                    }
                }
            }
        }
    }

    #[test]
    fn beta_is_star_linear() {
        let k = ctx(3);
        let z = siegel_sample(1, 2, 8).unwrap();
        let v = var(3, 1, 3, z.z().clone());
        let l = vec![KElement::from_ratios(1, 2, 1, 3), KElement::from_int(2), KElement::from_ratios(0, 1, -1, 1)];
        let kk = KElement::from_ratios(-1, 4, 2, 1);
        let kl: Vec<KElement> = l.iter().map(|x| k.mul(&kk, x)).collect();
        let lhs = v.beta(&kl);
        let rhs = star_act(&v, &kk, &v.beta(&l));
        assert!(lhs.iter().zip(&rhs).all(|(a, b)| (a - b).norm() < 1e-12));
    }

    #[test]
    fn conj_vector_conjugates_scalars() {
        let w = vec![c(1.0, 2.0), c(0.0, -1.0)];
        let s = c(0.3, -0.7);
        let scaled: Vec<Complex64> = w.iter().map(|x| s * x).collect();
        assert_eq!(ConjVector::wrap(scaled.clone()), ConjVector::wrap(w.clone()).scale(s.conj()));
        let lhs = ConjVector::wrap(scaled).coordinates();
        let rhs: Vec<Complex64> = ConjVector::wrap(w).coordinates().iter().map(|x| s.conj() * x).collect();
        assert_eq!(lhs, rhs);
    }
}

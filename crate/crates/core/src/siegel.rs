//! The bounded domain `H³_{n,m} = { z ∈ M_{n,m}(C) : E_n − z·z̄ᵗ > 0 }` and
//! the action of `GU(n, m)(K)` on it by `z ↦ (Az + B)(Cz + D)⁻¹`.

use num_complex::Complex64;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{rat, rat_to_string, FieldContext, KElement, Rational};
use crate::linalg::{posdef_check, PosDef};
use crate::matrix::{CMatrix, KMatrix, Matrix};

/// A point of `H³_{n,m}`.
#[derive(Clone, Debug, PartialEq)]
pub struct SiegelPoint {
    n: usize,
    m: usize,
    z: CMatrix,
}

impl SiegelPoint {
    /// Checked constructor: fails with `NotInDomain` outside the domain.
    pub fn new(z: CMatrix, tol: f64) -> Result<Self> {
        let p = siegel_contains(&z, tol)?;
        if !p.is_posdef {
            return Err(Error::NotInDomain(p.min_pivot));
        }
        Ok(Self::new_unchecked(z))
    }

    /// No membership check; for probing points outside the domain.
    pub fn new_unchecked(z: CMatrix) -> Self {
        SiegelPoint {
            n: z.rows(),
            m: z.cols(),
            z,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn z(&self) -> &CMatrix {
        &self.z
    }

    pub fn into_matrix(self) -> CMatrix {
        self.z
    }
}

/// `E_n − z·z̄ᵗ`.
pub fn defect_plus(z: &CMatrix) -> CMatrix {
    let zz = z.mul(&z.adjoint()).expect("shapes agree");
    CMatrix::eye(z.rows()).sub(&zz).expect("shapes agree")
}

/// `E_m − zᵗ·z̄`, the form seen on `Ker α`.
pub fn defect_minus(z: &CMatrix) -> CMatrix {
    let zz = z.transpose().mul(&z.conj()).expect("shapes agree");
    CMatrix::eye(z.cols()).sub(&zz).expect("shapes agree")
}

/// Membership test; boundary points (pivot ≤ tol) are outside.
pub fn siegel_contains(z: &CMatrix, tol: f64) -> Result<PosDef> {
    if z.rows() == 0 || z.cols() == 0 {
        return Err(Error::BadShape(format!("z must be n x m with n, m >= 1, got {}x{}", z.rows(), z.cols())));
    }
    posdef_check(&defect_plus(z), tol)
}

/// Largest singular value by power iteration on `M*M`.
pub fn largest_singular_value(m: &CMatrix) -> f64 {
    let cols = m.cols();
    if cols == 0 || m.rows() == 0 {
        return 0.0;
    }
    let gram = m.adjoint().mul(m).expect("shapes agree");
    let mut v = Matrix::filled(cols, 1, Complex64::new(1.0, 0.0));
    let mut lambda = 0.0;
    for _ in 0..500 {
        let w = gram.mul(&v).expect("shapes agree");
        let norm = w.entries().iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return 0.0;
        }
        let next = w.scaled(Complex64::new(1.0 / norm, 0.0));
        let converged = (norm - lambda).abs() <= 1e-15 * norm;
        lambda = norm;
        v = next;
        if converged {
            break;
        }
    }
    lambda.sqrt()
}

/// Deterministic sample of `H³_{n,m}`: a matrix with entries uniform in the
/// unit square, shrunk by `c/(s+1)` where `s` is its largest singular value
/// and `c` is uniform in `(0, 1)`.
pub fn siegel_sample(n: usize, m: usize, seed: u64) -> Result<SiegelPoint> {
    if n == 0 || m == 0 {
        return Err(Error::BadShape(format!("n and m must be positive, got n = {n}, m = {m}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let raw = Matrix::from_fn(n, m, |_, _| Complex64::new(rng.gen::<f64>(), rng.gen::<f64>()));
    let s = largest_singular_value(&raw);
    let mut c: f64 = rng.gen();
    while c == 0.0 {
        c = rng.gen();
    }
    let z = raw.scaled(Complex64::new(c / (s + 1.0), 0.0));
    Ok(SiegelPoint::new_unchecked(z))
}

/// A validated similitude `γ` of the form `iT`, with multiplier `μ > 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct GUElement {
    gamma: KMatrix,
    n: usize,
    m: usize,
    multiplier: Rational,
}

impl GUElement {
    pub fn gamma(&self) -> &KMatrix {
        &self.gamma
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn multiplier(&self) -> &Rational {
        &self.multiplier
    }

    pub fn ctx(&self) -> &FieldContext {
        self.gamma.ctx()
    }

    /// Product `γ₁γ₂`, again a similitude.
    pub fn compose(&self, other: &GUElement) -> Result<GUElement> {
        let g = self.gamma.mul(&other.gamma)?;
        gu_validate(&g, self.n, self.m, self.ctx())
    }

    /// `(A, B, C, D)` after embedding into the complex numbers.
    pub fn blocks(&self) -> (CMatrix, CMatrix, CMatrix, CMatrix) {
        let g = self.gamma.embed();
        let n = self.n;
        let r = self.n + self.m;
        let idx = |a: usize, b: usize| (a..b).collect::<Vec<_>>();
        (
            g.submatrix(&idx(0, n), &idx(0, n)),
            g.submatrix(&idx(0, n), &idx(n, r)),
            g.submatrix(&idx(n, r), &idx(0, n)),
            g.submatrix(&idx(n, r), &idx(n, r)),
        )
    }
}

/// The matrix `T = √−Δ·E_{n,m}`.
pub fn t_matrix(ctx: FieldContext, n: usize, m: usize) -> KMatrix {
    KMatrix::signature_matrix(ctx, n, m).scaled(&KElement::sqrt_neg_delta())
}

/// Checks `γ̄ᵗ·T·γ = μ·T` exactly with `μ ∈ Q`, `μ > 0`.
pub fn gu_validate(gamma: &KMatrix, n: usize, m: usize, ctx: &FieldContext) -> Result<GUElement> {
    ctx.ensure_same(gamma.ctx())?;
    let r = n + m;
    if n == 0 || m == 0 || gamma.rows() != r || gamma.cols() != r {
        return Err(Error::BadShape(format!(
            "gamma is {}x{}, expected {r}x{r} with n = {n}, m = {m} positive",
            gamma.rows(),
            gamma.cols()
        )));
    }
    let t = t_matrix(*ctx, n, m);
    let lhs = gamma.adjoint().mul(&t)?.mul(gamma)?;
    // T[0][0] = √−Δ, so μ = lhs[0][0] / √−Δ.
    let mu = ctx.div(lhs.get(0, 0), &KElement::sqrt_neg_delta())?;
    if !mu.is_rational() {
        return Err(Error::NotSimilitude(format!("γ*Tγ[0][0] / √−Δ = {mu} is not rational")));
    }
    if lhs != t.scaled(&mu) {
        return Err(Error::NotSimilitude("γ*Tγ is not a multiple of T".into()));
    }
    if mu.a <= Rational::zero() {
        return Err(Error::NonPositiveMultiplier(rat_to_string(&mu.a)));
    }
    Ok(GUElement {
        gamma: gamma.clone(),
        n,
        m,
        multiplier: mu.a,
    })
}

/// `γ(z) = (Az + B)(Cz + D)⁻¹`, rechecked for membership.
pub fn gu_act(g: &GUElement, z: &SiegelPoint, tol: f64) -> Result<SiegelPoint> {
    if z.n() != g.n || z.m() != g.m {
        return Err(Error::BadShape(format!(
            "point is {}x{}, element acts on {}x{}",
            z.n(),
            z.m(),
            g.n,
            g.m
        )));
    }
    let (a, b, c, d) = g.blocks();
    let num = a.mul(z.z())?.add(&b)?;
    let den = c.mul(z.z())?.add(&d)?;
    let inv = den.inverse()?.ok_or(Error::SingularDenominator(f64::INFINITY))?;
    let cond = den.norm1() * inv.norm1();
    if !cond.is_finite() || cond * tol > 1.0 {
        return Err(Error::SingularDenominator(cond));
    }
    let w = num.mul(&inv)?;
    let p = siegel_contains(&w, tol)?;
    if !p.is_posdef {
        return Err(Error::LeftDomain(p.min_pivot));
    }
    Ok(SiegelPoint::new_unchecked(w))
}

fn random_small_rational(rng: &mut ChaCha8Rng) -> Rational {
    let p = rng.gen_range(1..=4i64);
    let q = rng.gen_range(1..=4i64);
    rat(p, q)
}

/// Random element of `GU(n, m)(K)` built as a product of a few exact
/// generators: unit-norm diagonal scalings, hyperbolic rotations mixing a
/// positive and a negative coordinate, rational rotations inside one sign
/// block and a rational scalar.
pub fn gu_random(ctx: FieldContext, n: usize, m: usize, seed: u64, factors: usize) -> Result<GUElement> {
    let r = n + m;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = KMatrix::identity(ctx, r);
    for _ in 0..factors {
        let mut f = KMatrix::identity(ctx, r).into_inner();
        match rng.gen_range(0..4u8) {
            0 => {
                // u / ū has norm 1 for any u ≠ 0.
                let i = rng.gen_range(0..r);
                let u = KElement::new(random_small_rational(&mut rng), random_small_rational(&mut rng));
                f.set(i, i, ctx.div(&u, &u.conj())?);
            }
            1 => {
                // [[a, b], [b, a]] with a² − b² = 1: a = (t² + 1)/2t, b = (t² − 1)/2t.
                let p = rng.gen_range(0..n);
                let q = n + rng.gen_range(0..m);
                let t = random_small_rational(&mut rng);
                let two_t = &t + &t;
                let a = (&t * &t + rat(1, 1)) / &two_t;
                let b = (&t * &t - rat(1, 1)) / &two_t;
                let u = KElement::new(random_small_rational(&mut rng), random_small_rational(&mut rng));
                let phase = ctx.div(&u, &u.conj())?;
                f.set(p, p, KElement::from_rational(a.clone()));
                f.set(q, q, KElement::from_rational(a));
                f.set(p, q, phase.scale(&b));
                f.set(q, p, phase.conj().scale(&b));
            }
            2 => {
                // rotation in a block of size ≥ 2: c = (1 − t²)/(1 + t²), s = 2t/(1 + t²).
                let (lo, size) = if rng.gen::<bool>() { (0, n) } else { (n, m) };
                if size < 2 {
                    continue;
                }
                let i = lo + rng.gen_range(0..size);
                let mut j = lo + rng.gen_range(0..size - 1);
                if j >= i {
                    j += 1;
                }
                let t = random_small_rational(&mut rng);
                let den = rat(1, 1) + &t * &t;
                let c = (rat(1, 1) - &t * &t) / &den;
                let s = (&t + &t) / &den;
                f.set(i, i, KElement::from_rational(c.clone()));
                f.set(j, j, KElement::from_rational(c));
                f.set(i, j, KElement::from_rational(-s.clone()));
                f.set(j, i, KElement::from_rational(s));
            }
            _ => {
                let s = KElement::from_rational(random_small_rational(&mut rng));
                for i in 0..r {
                    f.set(i, i, s.clone());
                }
            }
        }
        g = g.mul(&KMatrix::new(ctx, f))?;
    }
    gu_validate(&g, n, m, &ctx)
}

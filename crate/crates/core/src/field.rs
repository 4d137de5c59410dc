//! Exact arithmetic in an imaginary quadratic field `K = Q(√−Δ)`.
//!
//! Elements are stored as pairs of reduced rationals `a + b√−Δ`. The
//! discriminant is not stored in the element; it lives in a
//! [`FieldContext`] that every multiplicative operation takes explicitly.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational; always reduced with a positive denominator.
pub type Rational = BigRational;

pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn rat_int(p: i64) -> Rational {
    Rational::from_integer(BigInt::from(p))
}

pub fn rat_to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Formats a rational as `p/q`, or `p` when the denominator is one.
pub fn rat_to_string(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn rat_from_str(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(Rational::new(p, q))
        }
        None => Some(Rational::from_integer(s.parse().ok()?)),
    }
}

/// Exact square root of a non-negative rational, if it exists.
pub fn rat_sqrt(x: &Rational) -> Option<Rational> {
    if x.is_negative() {
        return None;
    }
    let p = x.numer().sqrt();
    let q = x.denom().sqrt();
    if &(&p * &p) == x.numer() && &(&q * &q) == x.denom() {
        Some(Rational::new(p, q))
    } else {
        None
    }
}

/// Which complex root `√−Δ` is sent to.
///
/// The default sends `√−Δ` to `−i√Δ`, the choice under which `iT` with
/// `T = √−Δ·E_{n,r−n}` has signature `(n, r−n)` and the Riemann form
/// `H = B + iΩ` of the constructed varieties is positive.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Embedding {
    #[default]
    NegativeImaginary,
    PositiveImaginary,
}

impl Embedding {
    pub fn sign(self) -> f64 {
        match self {
            Embedding::NegativeImaginary => -1.0,
            Embedding::PositiveImaginary => 1.0,
        }
    }

    pub fn swapped(self) -> Self {
        match self {
            Embedding::NegativeImaginary => Embedding::PositiveImaginary,
            Embedding::PositiveImaginary => Embedding::NegativeImaginary,
        }
    }
}

/// The field `K = Q(√−Δ)` together with its chosen complex embedding.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldContext {
    delta: u64,
    embedding: Embedding,
}

impl FieldContext {
    pub fn new(delta: i64) -> Result<Self> {
        Self::with_embedding(delta, Embedding::default())
    }

    pub fn with_embedding(delta: i64, embedding: Embedding) -> Result<Self> {
        if delta < 1 || !is_square_free(delta as u64) {
            return Err(Error::InvalidDelta(delta));
        }
        Ok(FieldContext {
            delta: delta as u64,
            embedding,
        })
    }

    pub fn delta(&self) -> u64 {
        self.delta
    }

    pub fn embedding(&self) -> Embedding {
        self.embedding
    }

    /// Same field, other embedding.
    pub fn swapped(&self) -> Self {
        FieldContext {
            delta: self.delta,
            embedding: self.embedding.swapped(),
        }
    }

    pub fn ensure_same(&self, other: &FieldContext) -> Result<()> {
        if self != other {
            return Err(Error::MixedDelta {
                left: self.delta,
                right: other.delta,
            });
        }
        Ok(())
    }

    fn delta_rat(&self) -> Rational {
        Rational::from_integer(BigInt::from(self.delta))
    }

    pub fn mul(&self, x: &KElement, y: &KElement) -> KElement {
        // (a + b√−Δ)(c + d√−Δ) = (ac − Δbd) + (ad + bc)√−Δ
        let a = &x.a * &y.a - self.delta_rat() * &x.b * &y.b;
        let b = &x.a * &y.b + &x.b * &y.a;
        KElement { a, b }
    }

    pub fn norm(&self, x: &KElement) -> Rational {
        &x.a * &x.a + self.delta_rat() * &x.b * &x.b
    }

    pub fn inv(&self, x: &KElement) -> Result<KElement> {
        if x.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm(x);
        Ok(KElement {
            a: &x.a / &n,
            b: -(&x.b / &n),
        })
    }

    pub fn div(&self, x: &KElement, y: &KElement) -> Result<KElement> {
        Ok(self.mul(x, &self.inv(y)?))
    }

    /// The image of `x` in the complex numbers under the context's embedding.
    pub fn embed(&self, x: &KElement) -> Complex64 {
        let s = (self.delta as f64).sqrt() * self.embedding.sign();
        Complex64::new(rat_to_f64(&x.a), rat_to_f64(&x.b) * s)
    }

    /// The embedded value of `√−Δ` (`±i√Δ`).
    pub fn embed_sqrt(&self) -> Complex64 {
        self.embed(&KElement::sqrt_neg_delta())
    }
}

fn is_square_free(n: u64) -> bool {
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p * p) {
            return false;
        }
        p += 1;
    }
    true
}

/// An element `a + b√−Δ` of `K`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KElement {
    pub a: Rational,
    pub b: Rational,
}

impl KElement {
    pub fn new(a: Rational, b: Rational) -> Self {
        KElement { a, b }
    }

    pub fn from_rational(a: Rational) -> Self {
        KElement { a, b: Rational::zero() }
    }

    pub fn from_int(a: i64) -> Self {
        Self::from_rational(rat_int(a))
    }

    /// `p1/q1 + (p2/q2)√−Δ`.
    pub fn from_ratios(p1: i64, q1: i64, p2: i64, q2: i64) -> Self {
        KElement {
            a: rat(p1, q1),
            b: rat(p2, q2),
        }
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// The generator `√−Δ`.
    pub fn sqrt_neg_delta() -> Self {
        KElement {
            a: Rational::zero(),
            b: Rational::one(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn conj(&self) -> Self {
        KElement {
            a: self.a.clone(),
            b: -self.b.clone(),
        }
    }

    /// `Tr_{K/Q}(a + b√−Δ) = 2a`.
    pub fn trace(&self) -> Rational {
        &self.a + &self.a
    }

    pub fn scale(&self, q: &Rational) -> Self {
        KElement {
            a: &self.a * q,
            b: &self.b * q,
        }
    }
}

impl Add for &KElement {
    type Output = KElement;
    fn add(self, rhs: &KElement) -> KElement {
        KElement {
            a: &self.a + &rhs.a,
            b: &self.b + &rhs.b,
        }
    }
}

impl Sub for &KElement {
    type Output = KElement;
    fn sub(self, rhs: &KElement) -> KElement {
        KElement {
            a: &self.a - &rhs.a,
            b: &self.b - &rhs.b,
        }
    }
}

impl Neg for &KElement {
    type Output = KElement;
    fn neg(self) -> KElement {
        KElement {
            a: -self.a.clone(),
            b: -self.b.clone(),
        }
    }
}

impl fmt::Display for KElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + ({})√−Δ", rat_to_string(&self.a), rat_to_string(&self.b))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn k_arith(x: &KElement, y: &KElement, op: KOp, ctx: &FieldContext) -> Result<KElement> {
    Ok(match op {
        KOp::Add => x + y,
        KOp::Sub => x - y,
        KOp::Mul => ctx.mul(x, y),
        KOp::Div => ctx.div(x, y)?,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaloisData {
    pub conj: KElement,
    pub trace: Rational,
    pub norm: Rational,
}

pub fn k_galois_data(x: &KElement, ctx: &FieldContext) -> GaloisData {
    GaloisData {
        conj: x.conj(),
        trace: x.trace(),
        norm: ctx.norm(x),
    }
}

pub fn k_embed(x: &KElement, ctx: &FieldContext) -> Complex64 {
    ctx.embed(x)
}

/// The unique `k0` with `Tr(k0·k) = γ(k)` for the Q-linear form `γ` given by
/// its values on the basis `{1, √−Δ}`.
///
/// `Tr(k0) = 2a0` and `Tr(k0·√−Δ) = −2Δ·b0`.
pub fn trace_dual_solve(gamma_at_1: &Rational, gamma_at_sqrt: &Rational, ctx: &FieldContext) -> KElement {
    let two = rat_int(2);
    let two_delta = rat_int(2 * ctx.delta as i64);
    KElement {
        a: gamma_at_1 / &two,
        b: -(gamma_at_sqrt / &two_delta),
    }
}

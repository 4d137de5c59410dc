//! Dense matrices over `K` (exact) and over `C` (double precision).

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{FieldContext, KElement, Rational};

/// Scalar operations needed by the generic matrix routines.
pub trait Scalars {
    type Elem: Clone + PartialEq + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn conj(&self, a: &Self::Elem) -> Self::Elem;
    /// Pivot-selection score; zero exactly when the element is zero.
    fn magnitude(&self, a: &Self::Elem) -> f64;
}

impl Scalars for FieldContext {
    type Elem = KElement;

    fn zero(&self) -> KElement {
        KElement::zero()
    }
    fn one(&self) -> KElement {
        KElement::one()
    }
    fn add(&self, a: &KElement, b: &KElement) -> KElement {
        a + b
    }
    fn sub(&self, a: &KElement, b: &KElement) -> KElement {
        a - b
    }
    fn mul(&self, a: &KElement, b: &KElement) -> KElement {
        FieldContext::mul(self, a, b)
    }
    fn neg(&self, a: &KElement) -> KElement {
        -a
    }
    fn inv(&self, a: &KElement) -> Option<KElement> {
        FieldContext::inv(self, a).ok()
    }
    fn conj(&self, a: &KElement) -> KElement {
        a.conj()
    }
    fn magnitude(&self, a: &KElement) -> f64 {
        // Exact elimination only needs a non-zero pivot; prefer small heights.
        if a.is_zero() {
            0.0
        } else {
            1.0 / (1.0 + (a.a.denom().bits() + a.b.denom().bits()) as f64)
        }
    }
}

/// Double-precision complex scalars.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Complexes;

impl Scalars for Complexes {
    type Elem = Complex64;

    fn zero(&self) -> Complex64 {
        Complex64::new(0.0, 0.0)
    }
    fn one(&self) -> Complex64 {
        Complex64::new(1.0, 0.0)
    }
    fn add(&self, a: &Complex64, b: &Complex64) -> Complex64 {
        a + b
    }
    fn sub(&self, a: &Complex64, b: &Complex64) -> Complex64 {
        a - b
    }
    fn mul(&self, a: &Complex64, b: &Complex64) -> Complex64 {
        a * b
    }
    fn neg(&self, a: &Complex64) -> Complex64 {
        -a
    }
    fn inv(&self, a: &Complex64) -> Option<Complex64> {
        if a.norm() == 0.0 {
            None
        } else {
            Some(a.inv())
        }
    }
    fn conj(&self, a: &Complex64) -> Complex64 {
        a.conj()
    }
    fn magnitude(&self, a: &Complex64) -> f64 {
        a.norm()
    }
}

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Clone> Matrix<T> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn filled(rows: usize, cols: usize, v: T) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![v; rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != ncols) {
            return Err(Error::BadShape(format!(
                "row {i} has {} entries, expected {ncols}",
                r.len()
            )));
        }
        Ok(Matrix {
            rows: nrows,
            cols: ncols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        self.data.chunks(self.cols.max(1)).take(self.rows).map(<[T]>::to_vec).collect()
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn map<U: Clone>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Matrix::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn from_columns(rows: usize, cols: &[Vec<T>]) -> Self
    where
        T: Default,
    {
        Matrix::from_fn(rows, cols.len(), |i, j| cols[j].get(i).cloned().unwrap_or_default())
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// Concatenates `[self | other]`.
    pub fn hstack(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows {
            return Err(Error::BadShape(format!(
                "cannot stack {} rows beside {} rows",
                self.rows, other.rows
            )));
        }
        Ok(Matrix::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                other.get(i, j - self.cols).clone()
            }
        }))
    }
}

pub fn identity<S: Scalars>(f: &S, n: usize) -> Matrix<S::Elem> {
    Matrix::from_fn(n, n, |i, j| if i == j { f.one() } else { f.zero() })
}

pub fn zeros<S: Scalars>(f: &S, rows: usize, cols: usize) -> Matrix<S::Elem> {
    Matrix::filled(rows, cols, f.zero())
}

pub fn mat_mul<S: Scalars>(f: &S, a: &Matrix<S::Elem>, b: &Matrix<S::Elem>) -> Result<Matrix<S::Elem>> {
    if a.cols != b.rows {
        return Err(Error::BadShape(format!(
            "cannot multiply {}x{} by {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    Ok(Matrix::from_fn(a.rows, b.cols, |i, j| {
        let mut acc = f.zero();
        for k in 0..a.cols {
            acc = f.add(&acc, &f.mul(a.get(i, k), b.get(k, j)));
        }
        acc
    }))
}

pub fn mat_add<S: Scalars>(f: &S, a: &Matrix<S::Elem>, b: &Matrix<S::Elem>) -> Result<Matrix<S::Elem>> {
    if a.rows != b.rows || a.cols != b.cols {
        return Err(Error::BadShape("cannot add matrices of different shapes".into()));
    }
    Ok(Matrix::from_fn(a.rows, a.cols, |i, j| f.add(a.get(i, j), b.get(i, j))))
}

pub fn mat_sub<S: Scalars>(f: &S, a: &Matrix<S::Elem>, b: &Matrix<S::Elem>) -> Result<Matrix<S::Elem>> {
    if a.rows != b.rows || a.cols != b.cols {
        return Err(Error::BadShape("cannot subtract matrices of different shapes".into()));
    }
    Ok(Matrix::from_fn(a.rows, a.cols, |i, j| f.sub(a.get(i, j), b.get(i, j))))
}

pub fn scale<S: Scalars>(f: &S, c: &S::Elem, a: &Matrix<S::Elem>) -> Matrix<S::Elem> {
    a.map(|x| f.mul(c, x))
}

pub fn conj_transpose<S: Scalars>(f: &S, a: &Matrix<S::Elem>) -> Matrix<S::Elem> {
    Matrix::from_fn(a.cols, a.rows, |i, j| f.conj(a.get(j, i)))
}

pub fn conjugate<S: Scalars>(f: &S, a: &Matrix<S::Elem>) -> Matrix<S::Elem> {
    a.map(|x| f.conj(x))
}

/// Determinant by Gaussian elimination with magnitude pivoting.
pub fn determinant<S: Scalars>(f: &S, a: &Matrix<S::Elem>) -> Result<S::Elem> {
    if !a.is_square() {
        return Err(Error::BadShape(format!("determinant of a {}x{} matrix", a.rows, a.cols)));
    }
    let n = a.rows;
    let mut m = a.clone();
    let mut det = f.one();
    for c in 0..n {
        let (p, mag) = (c..n)
            .map(|i| (i, f.magnitude(m.get(i, c))))
            .fold((c, 0.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if mag == 0.0 {
            return Ok(f.zero());
        }
        if p != c {
            m.swap_rows(p, c);
            det = f.neg(&det);
        }
        let pivot = m.get(c, c).clone();
        det = f.mul(&det, &pivot);
        let pinv = f.inv(&pivot).expect("non-zero pivot");
        for i in c + 1..n {
            let factor = f.mul(m.get(i, c), &pinv);
            if f.magnitude(&factor) == 0.0 {
                continue;
            }
            for j in c..n {
                let v = f.sub(m.get(i, j), &f.mul(&factor, m.get(c, j)));
                m.set(i, j, v);
            }
        }
    }
    Ok(det)
}

/// Inverse by Gauss-Jordan elimination; `None` when singular.
pub fn inverse<S: Scalars>(f: &S, a: &Matrix<S::Elem>) -> Result<Option<Matrix<S::Elem>>> {
    if !a.is_square() {
        return Err(Error::BadShape(format!("inverse of a {}x{} matrix", a.rows, a.cols)));
    }
    let n = a.rows;
    let mut m = a.hstack(&identity(f, n))?;
    for c in 0..n {
        let (p, mag) = (c..n)
            .map(|i| (i, f.magnitude(m.get(i, c))))
            .fold((c, 0.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if mag == 0.0 {
            return Ok(None);
        }
        m.swap_rows(p, c);
        let pinv = f.inv(m.get(c, c)).expect("non-zero pivot");
        for j in 0..2 * n {
            let v = f.mul(m.get(c, j), &pinv);
            m.set(c, j, v);
        }
        for i in 0..n {
            if i == c {
                continue;
            }
            let factor = m.get(i, c).clone();
            if f.magnitude(&factor) == 0.0 {
                continue;
            }
            for j in 0..2 * n {
                let v = f.sub(m.get(i, j), &f.mul(&factor, m.get(c, j)));
                m.set(i, j, v);
            }
        }
    }
    Ok(Some(Matrix::from_fn(n, n, |i, j| m.get(i, j + n).clone())))
}

/// Complex matrix with finite double-precision entries.
pub type CMatrix = Matrix<Complex64>;

impl CMatrix {
    /// Builds a complex matrix, rejecting non-finite entries.
    pub fn try_from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let m = Matrix::from_rows(rows)?;
        if let Some(pos) = m.data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::BadShape(format!(
                "entry ({}, {}) is not finite",
                pos / m.cols,
                pos % m.cols
            )));
        }
        Ok(m)
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        Matrix::from_fn(rows.len(), rows.first().map_or(0, |r| r.len()), |i, j| {
            Complex64::new(rows[i][j], 0.0)
        })
    }

    pub fn eye(n: usize) -> Self {
        identity(&Complexes, n)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        zeros(&Complexes, rows, cols)
    }

    pub fn adjoint(&self) -> Self {
        conj_transpose(&Complexes, self)
    }

    pub fn conj(&self) -> Self {
        conjugate(&Complexes, self)
    }

    pub fn mul(&self, other: &CMatrix) -> Result<CMatrix> {
        mat_mul(&Complexes, self, other)
    }

    pub fn add(&self, other: &CMatrix) -> Result<CMatrix> {
        mat_add(&Complexes, self, other)
    }

    pub fn sub(&self, other: &CMatrix) -> Result<CMatrix> {
        mat_sub(&Complexes, self, other)
    }

    pub fn scaled(&self, c: Complex64) -> CMatrix {
        self.map(|x| x * c)
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn inverse(&self) -> Result<Option<CMatrix>> {
        inverse(&Complexes, self)
    }

    /// Matrix 1-norm (maximum absolute column sum).
    pub fn norm1(&self) -> f64 {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self.get(i, j).norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }
}

/// Matrix over `K` tagged with the field it lives in.
#[derive(Clone, Debug, PartialEq)]
pub struct KMatrix {
    ctx: FieldContext,
    inner: Matrix<KElement>,
}

impl KMatrix {
    pub fn new(ctx: FieldContext, inner: Matrix<KElement>) -> Self {
        KMatrix { ctx, inner }
    }

    pub fn from_rows(ctx: FieldContext, rows: Vec<Vec<KElement>>) -> Result<Self> {
        Ok(KMatrix {
            ctx,
            inner: Matrix::from_rows(rows)?,
        })
    }

    pub fn from_fn(ctx: FieldContext, rows: usize, cols: usize, f: impl FnMut(usize, usize) -> KElement) -> Self {
        KMatrix {
            ctx,
            inner: Matrix::from_fn(rows, cols, f),
        }
    }

    /// Rational matrix given by integer numerator/denominator pairs.
    pub fn from_ratios(ctx: FieldContext, rows: &[&[(i64, i64)]]) -> Self {
        KMatrix::from_fn(ctx, rows.len(), rows.first().map_or(0, |r| r.len()), |i, j| {
            let (p, q) = rows[i][j];
            KElement::from_ratios(p, q, 0, 1)
        })
    }

    pub fn identity(ctx: FieldContext, n: usize) -> Self {
        KMatrix {
            ctx,
            inner: identity(&ctx, n),
        }
    }

    pub fn zeros(ctx: FieldContext, rows: usize, cols: usize) -> Self {
        KMatrix {
            ctx,
            inner: zeros(&ctx, rows, cols),
        }
    }

    /// Diagonal sign matrix `E_{n,m} = diag(E_n, −E_m)`.
    pub fn signature_matrix(ctx: FieldContext, n: usize, m: usize) -> Self {
        KMatrix::from_fn(ctx, n + m, n + m, |i, j| match (i == j, i < n) {
            (false, _) => KElement::zero(),
            (true, true) => KElement::one(),
            (true, false) => KElement::from_int(-1),
        })
    }

    pub fn diagonal(ctx: FieldContext, diag: &[KElement]) -> Self {
        KMatrix::from_fn(ctx, diag.len(), diag.len(), |i, j| {
            if i == j {
                diag[i].clone()
            } else {
                KElement::zero()
            }
        })
    }

    pub fn ctx(&self) -> &FieldContext {
        &self.ctx
    }

    pub fn inner(&self) -> &Matrix<KElement> {
        &self.inner
    }

    pub fn into_inner(self) -> Matrix<KElement> {
        self.inner
    }

    pub fn rows(&self) -> usize {
        self.inner.rows()
    }

    pub fn cols(&self) -> usize {
        self.inner.cols()
    }

    pub fn get(&self, i: usize, j: usize) -> &KElement {
        self.inner.get(i, j)
    }

    pub fn adjoint(&self) -> Self {
        KMatrix {
            ctx: self.ctx,
            inner: conj_transpose(&self.ctx, &self.inner),
        }
    }

    pub fn conj(&self) -> Self {
        KMatrix {
            ctx: self.ctx,
            inner: conjugate(&self.ctx, &self.inner),
        }
    }

    pub fn transpose(&self) -> Self {
        KMatrix {
            ctx: self.ctx,
            inner: self.inner.transpose(),
        }
    }

    pub fn mul(&self, other: &KMatrix) -> Result<KMatrix> {
        self.ctx.ensure_same(&other.ctx)?;
        Ok(KMatrix {
            ctx: self.ctx,
            inner: mat_mul(&self.ctx, &self.inner, &other.inner)?,
        })
    }

    pub fn add(&self, other: &KMatrix) -> Result<KMatrix> {
        self.ctx.ensure_same(&other.ctx)?;
        Ok(KMatrix {
            ctx: self.ctx,
            inner: mat_add(&self.ctx, &self.inner, &other.inner)?,
        })
    }

    pub fn scaled(&self, c: &KElement) -> KMatrix {
        KMatrix {
            ctx: self.ctx,
            inner: scale(&self.ctx, c, &self.inner),
        }
    }

    pub fn scaled_rational(&self, q: &Rational) -> KMatrix {
        KMatrix {
            ctx: self.ctx,
            inner: self.inner.map(|x| x.scale(q)),
        }
    }

    pub fn determinant(&self) -> Result<KElement> {
        determinant(&self.ctx, &self.inner)
    }

    pub fn inverse(&self) -> Result<Option<KMatrix>> {
        Ok(inverse(&self.ctx, &self.inner)?.map(|inner| KMatrix { ctx: self.ctx, inner }))
    }

    pub fn is_hermitian(&self) -> bool {
        self.inner.is_square() && self.adjoint() == *self
    }

    /// Entrywise image under the context's embedding.
    pub fn embed(&self) -> CMatrix {
        self.inner.map(|x| self.ctx.embed(x))
    }

    /// Permutes rows and columns simultaneously: entry `(i, j)` of the result
    /// is entry `(perm[i], perm[j])` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> KMatrix {
        KMatrix {
            ctx: self.ctx,
            inner: self.inner.submatrix(perm, perm),
        }
    }
}

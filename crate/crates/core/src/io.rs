//! JSON file formats. Rationals travel as `"p/q"` strings, doubles with
//! shortest round-trip formatting.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::correspondence::{TripleE, VarietyB};
use crate::error::{Error, Result};
use crate::field::{rat_from_str, rat_to_string, FieldContext, KElement, Rational};
use crate::matrix::{CMatrix, KMatrix, Matrix};
use crate::siegel::{gu_validate, GUElement, SiegelPoint};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WireComplex {
    pub re: f64,
    pub im: f64,
}

/// A rational written as `"p/q"`; plain JSON integers are accepted on input.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WireRational {
    Text(String),
    Int(i64),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WireK {
    pub a: WireRational,
    pub b: WireRational,
}

pub type WireCMatrix = Vec<Vec<WireComplex>>;
pub type WireKMatrix = Vec<Vec<WireK>>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SiegelFile {
    pub n: usize,
    pub m: usize,
    pub z: WireCMatrix,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GuFile {
    pub gamma: WireKMatrix,
    pub delta: i64,
    pub n: usize,
    pub m: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VarietyFile {
    pub delta: i64,
    pub n: usize,
    pub r: usize,
    pub z: WireCMatrix,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TripleFile {
    pub delta: i64,
    pub n: usize,
    pub r: usize,
    pub gram: WireKMatrix,
    pub alpha: WireCMatrix,
}

pub fn rational_to_wire(x: &Rational) -> WireRational {
    WireRational::Text(rat_to_string(x))
}

pub fn rational_from_wire(w: &WireRational, field: &str) -> Result<Rational> {
    match w {
        WireRational::Int(i) => Ok(Rational::from_integer((*i).into())),
        WireRational::Text(s) => {
            rat_from_str(s).ok_or_else(|| Error::Parse(format!("{field}: '{s}' is not a rational p/q")))
        }
    }
}

pub fn kelement_to_wire(x: &KElement) -> WireK {
    WireK {
        a: rational_to_wire(&x.a),
        b: rational_to_wire(&x.b),
    }
}

pub fn kelement_from_wire(w: &WireK, field: &str) -> Result<KElement> {
    Ok(KElement::new(
        rational_from_wire(&w.a, &format!("{field}.a"))?,
        rational_from_wire(&w.b, &format!("{field}.b"))?,
    ))
}

pub fn cmatrix_to_wire(m: &CMatrix) -> WireCMatrix {
    m.to_rows()
        .into_iter()
        .map(|row| row.into_iter().map(|c| WireComplex { re: c.re, im: c.im }).collect())
        .collect()
}

fn check_rect<T>(rows: &[Vec<T>], field: &str) -> Result<(usize, usize)> {
    let cols = rows.first().map_or(0, Vec::len);
    if let Some(i) = rows.iter().position(|r| r.len() != cols) {
        return Err(Error::BadShape(format!(
            "{field}: row {i} has {} entries, row 0 has {cols}",
            rows[i].len()
        )));
    }
    Ok((rows.len(), cols))
}

fn expect_shape(field: &str, got: (usize, usize), want: (usize, usize)) -> Result<()> {
    if got != want {
        return Err(Error::BadShape(format!(
            "{field}: expected {}x{}, got {}x{}",
            want.0, want.1, got.0, got.1
        )));
    }
    Ok(())
}

pub fn cmatrix_from_wire(w: &WireCMatrix, field: &str) -> Result<CMatrix> {
    check_rect(w, field)?;
    CMatrix::try_from_rows(
        w.iter()
            .map(|row| row.iter().map(|c| Complex64::new(c.re, c.im)).collect())
            .collect(),
    )
    .map_err(|e| match e {
        Error::BadShape(m) => Error::BadShape(format!("{field}: {m}")),
        other => other,
    })
}

pub fn kmatrix_to_wire(m: &KMatrix) -> WireKMatrix {
    m.inner()
        .to_rows()
        .iter()
        .map(|row| row.iter().map(kelement_to_wire).collect())
        .collect()
}

pub fn kmatrix_from_wire(w: &WireKMatrix, ctx: FieldContext, field: &str) -> Result<KMatrix> {
    check_rect(w, field)?;
    let rows = w
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, x)| kelement_from_wire(x, &format!("{field}[{i}][{j}]")))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    KMatrix::from_rows(ctx, rows)
}

pub fn parse_json<'a, T: Deserialize<'a>>(text: &'a str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("{what}: {e}")))
}

pub fn to_json<T: Serialize>(x: &T) -> String {
    serde_json::to_string_pretty(x).expect("plain data serializes")
}

impl SiegelFile {
    pub fn from_point(p: &SiegelPoint) -> Self {
        SiegelFile {
            n: p.n(),
            m: p.m(),
            z: cmatrix_to_wire(p.z()),
        }
    }

    /// The matrix `z`, shape-checked against `n` and `m`; membership is not checked.
    pub fn matrix(&self) -> Result<CMatrix> {
        let z = cmatrix_from_wire(&self.z, "z")?;
        expect_shape("z", (z.rows(), z.cols()), (self.n, self.m))?;
        Ok(z)
    }
}

impl GuFile {
    pub fn from_element(g: &GUElement) -> Self {
        GuFile {
            gamma: kmatrix_to_wire(g.gamma()),
            delta: g.ctx().delta() as i64,
            n: g.n(),
            m: g.m(),
        }
    }

    pub fn element(&self) -> Result<GUElement> {
        let ctx = FieldContext::new(self.delta)?;
        let gamma = kmatrix_from_wire(&self.gamma, ctx, "gamma")?;
        let r = self.n + self.m;
        expect_shape("gamma", (gamma.rows(), gamma.cols()), (r, r))?;
        gu_validate(&gamma, self.n, self.m, &ctx)
    }
}

impl VarietyFile {
    pub fn from_variety(v: &VarietyB) -> Self {
        VarietyFile {
            delta: v.ctx().delta() as i64,
            n: v.n(),
            r: v.r(),
            z: cmatrix_to_wire(v.z().z()),
        }
    }

    pub fn matrix(&self) -> Result<CMatrix> {
        if self.n == 0 || self.n >= self.r {
            return Err(Error::BadShape(format!("n, r: need 1 <= n < r, got n = {}, r = {}", self.n, self.r)));
        }
        let z = cmatrix_from_wire(&self.z, "z")?;
        expect_shape("z", (z.rows(), z.cols()), (self.n, self.r - self.n))?;
        Ok(z)
    }

    pub fn ctx(&self) -> Result<FieldContext> {
        FieldContext::new(self.delta)
    }
}

impl TripleFile {
    pub fn from_triple(e: &TripleE) -> Self {
        TripleFile {
            delta: e.ctx().delta() as i64,
            n: e.n(),
            r: e.r(),
            gram: kmatrix_to_wire(e.gram()),
            alpha: cmatrix_to_wire(e.alpha()),
        }
    }

    pub fn triple(&self) -> Result<TripleE> {
        let ctx = FieldContext::new(self.delta)?;
        if self.n == 0 || self.n >= self.r {
            return Err(Error::BadShape(format!("n, r: need 1 <= n < r, got n = {}, r = {}", self.n, self.r)));
        }
        let gram = kmatrix_from_wire(&self.gram, ctx, "gram")?;
        expect_shape("gram", (gram.rows(), gram.cols()), (self.r, self.r))?;
        let alpha = cmatrix_from_wire(&self.alpha, "alpha")?;
        expect_shape("alpha", (alpha.rows(), alpha.cols()), (self.n, self.r))?;
        TripleE::new(self.n, self.r, gram, alpha)
    }
}

/// A bare `z` matrix or a Siegel point object.
pub fn parse_z(text: &str) -> Result<CMatrix> {
    let value: serde_json::Value = parse_json(text, "z-file")?;
    if value.is_array() {
        let w: WireCMatrix = serde_json::from_value(value).map_err(|e| Error::Parse(format!("z: {e}")))?;
        return cmatrix_from_wire(&w, "z");
    }
    let f: SiegelFile = serde_json::from_value(value).map_err(|e| Error::Parse(format!("z-file: {e}")))?;
    f.matrix()
}

pub fn rational_matrix_to_wire(m: &Matrix<Rational>) -> Vec<Vec<WireRational>> {
    m.to_rows()
        .iter()
        .map(|row| row.iter().map(rational_to_wire).collect())
        .collect()
}

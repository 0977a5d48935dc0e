use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense square complex matrix with value semantics.
///
/// Entries are always finite; constructors reject NaN and infinities.
#[derive(Clone, PartialEq)]
pub struct CMatrix {
    inner: DMatrix<Complex64>,
}

/// Complex scalar shorthand.
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { inner: DMatrix::zeros(n, n) }
    }

    pub fn identity(n: usize) -> Self {
        Self { inner: DMatrix::identity(n, n) }
    }

    /// Wraps a nalgebra matrix, checking shape and finiteness.
    pub fn from_dmatrix(inner: DMatrix<Complex64>) -> Result<Self> {
        if inner.nrows() != inner.ncols() {
            return Err(Error::InvalidMatrix(format!("not square: {}x{}", inner.nrows(), inner.ncols())));
        }
        if inner.nrows() == 0 {
            return Err(Error::InvalidMatrix("dimension must be positive".into()));
        }
        if inner.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidMatrix("non-finite entry".into()));
        }
        Ok(Self { inner })
    }

    pub(crate) fn from_dmatrix_unchecked(inner: DMatrix<Complex64>) -> Self {
        debug_assert_eq!(inner.nrows(), inner.ncols());
        Self { inner }
    }

    pub fn from_fn(n: usize, f: impl FnMut(usize, usize) -> Complex64) -> Self {
        Self { inner: DMatrix::from_fn(n, n, f) }
    }

    /// Builds from row-major real and imaginary parts.
    pub fn from_parts(re: &[Vec<f64>], im: Option<&[Vec<f64>]>) -> Result<Self> {
        let n = re.len();
        if n == 0 {
            return Err(Error::InvalidMatrix("dimension must be positive".into()));
        }
        if let Some(row) = re.iter().find(|r| r.len() != n) {
            return Err(Error::InvalidMatrix(format!("not square: row of length {} in {n}-row matrix", row.len())));
        }
        if let Some(im) = im {
            if im.len() != n || im.iter().any(|r| r.len() != n) {
                return Err(Error::InvalidMatrix("imaginary part shape differs from real part".into()));
            }
        }
        let inner = DMatrix::from_fn(n, n, |i, j| c64(re[i][j], im.map_or(0.0, |im| im[i][j])));
        Self::from_dmatrix(inner)
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::from_parts(rows, None)
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidMatrix("not square".into()));
        }
        Self::from_dmatrix(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    pub fn diag(values: &[Complex64]) -> Self {
        let n = values.len();
        Self::from_fn(n, |i, j| if i == j { values[i] } else { Complex64::new(0.0, 0.0) })
    }

    pub fn diag_real(values: &[f64]) -> Self {
        let n = values.len();
        Self::from_fn(n, |i, j| if i == j { c64(values[i], 0.0) } else { c64(0.0, 0.0) })
    }

    pub fn n(&self) -> usize {
        self.inner.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.inner[(i, j)]
    }

    pub fn as_dmatrix(&self) -> &DMatrix<Complex64> {
        &self.inner
    }

    pub fn into_dmatrix(self) -> DMatrix<Complex64> {
        self.inner
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self { inner: self.inner.adjoint() }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self { inner: &self.inner * c }
    }

    pub fn scale_real(&self, c: f64) -> Self {
        self.scale(c64(c, 0.0))
    }

    pub fn trace(&self) -> Complex64 {
        self.inner.trace()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.inner.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entry modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        self.inner.iter().zip(other.inner.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// Frobenius norm of `A - A*`, scaled by one half.
    pub fn hermitian_defect(&self) -> f64 {
        0.5 * (&self.inner - self.inner.adjoint()).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `(A + A*) / 2`.
    pub fn symmetrized(&self) -> Self {
        Self { inner: (&self.inner + self.inner.adjoint()) * c64(0.5, 0.0) }
    }

    /// Frobenius norm of `A A* - A* A`.
    pub fn normality_defect(&self) -> f64 {
        let a = &self.inner;
        let adj = a.adjoint();
        (a * &adj - &adj * a).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.inner.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::identity(self.n());
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// `<A x, x>` for a vector `x`.
    pub fn quadratic_form(&self, x: &nalgebra::DVector<Complex64>) -> Complex64 {
        x.dotc(&(&self.inner * x))
    }

    pub fn to_json(&self) -> MatrixJson {
        MatrixJson::from(self)
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CMatrix(n={}) [", self.n())?;
        for i in 0..self.n() {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.n() {
                let z = self.get(i, j);
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{:.6}{:+.6}i", z.re, z.im)?;
            }
        }
        write!(f, "]")
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&CMatrix> for &CMatrix {
            type Output = CMatrix;
            fn $method(self, rhs: &CMatrix) -> CMatrix {
                assert_eq!(self.n(), rhs.n(), "dimension mismatch");
                CMatrix { inner: &self.inner $op &rhs.inner }
            }
        }
        impl $trait<CMatrix> for CMatrix {
            type Output = CMatrix;
            fn $method(self, rhs: CMatrix) -> CMatrix {
                &self $op &rhs
            }
        }
        impl $trait<&CMatrix> for CMatrix {
            type Output = CMatrix;
            fn $method(self, rhs: &CMatrix) -> CMatrix {
                &self $op rhs
            }
        }
        impl $trait<CMatrix> for &CMatrix {
            type Output = CMatrix;
            fn $method(self, rhs: CMatrix) -> CMatrix {
                self $op &rhs
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);

impl Neg for &CMatrix {
    type Output = CMatrix;
    fn neg(self) -> CMatrix {
        CMatrix { inner: -&self.inner }
    }
}

impl Neg for CMatrix {
    type Output = CMatrix;
    fn neg(self) -> CMatrix {
        -&self
    }
}

/// Wire form `{"n": .., "re": [[..]], "im": [[..]]}`; `im` may be omitted.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub n: usize,
    pub re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
}

impl From<&CMatrix> for MatrixJson {
    fn from(m: &CMatrix) -> Self {
        let n = m.n();
        let re = (0..n).map(|i| (0..n).map(|j| m.get(i, j).re).collect()).collect();
        let im = (0..n).map(|i| (0..n).map(|j| m.get(i, j).im).collect()).collect();
        MatrixJson { n, re, im: Some(im) }
    }
}

impl TryFrom<MatrixJson> for CMatrix {
    type Error = Error;

    fn try_from(j: MatrixJson) -> Result<Self> {
        if j.re.len() != j.n {
            return Err(Error::InvalidMatrix(format!("declared n = {} but {} rows given", j.n, j.re.len())));
        }
        CMatrix::from_parts(&j.re, j.im.as_deref())
    }
}

impl Serialize for CMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for CMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = MatrixJson::deserialize(d)?;
        CMatrix::try_from(j).map_err(serde::de::Error::custom)
    }
}

/// Parses matrix JSON text. NaN/Inf cannot appear in valid JSON, and
/// non-square payloads are rejected.
pub fn parse_matrix_json(text: &str) -> Result<CMatrix> {
    let j: MatrixJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    CMatrix::try_from(j)
}

pub fn matrix_to_json(m: &CMatrix) -> String {
    serde_json::to_string(&MatrixJson::from(m)).expect("matrix serialization is infallible")
}

use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Serialize};

use super::rat::Rat;
use crate::error::{Error, Result};

/// 2×2 integer matrix, row-major.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IntMat2(pub [[i64; 2]; 2]);

impl IntMat2 {
    pub const IDENTITY: IntMat2 = IntMat2([[1, 0], [0, 1]]);
    pub const ZERO: IntMat2 = IntMat2([[0, 0], [0, 0]]);

    pub const fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        IntMat2([[a, b], [c, d]])
    }

    pub const fn diag(a: i64, d: i64) -> Self {
        IntMat2([[a, 0], [0, d]])
    }

    /// Matrix with the given columns.
    pub const fn from_cols(c0: (i64, i64), c1: (i64, i64)) -> Self {
        IntMat2([[c0.0, c1.0], [c0.1, c1.1]])
    }

    pub fn col(&self, j: usize) -> (i64, i64) {
        (self.0[0][j], self.0[1][j])
    }

    pub fn det(&self) -> i64 {
        let m = &self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn trace(&self) -> i64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn is_unimodular(&self) -> bool {
        matches!(self.det(), 1 | -1)
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::IDENTITY
    }

    pub fn is_upper_triangular(&self) -> bool {
        self.0[1][0] == 0
    }

    pub fn transpose(&self) -> Self {
        let m = &self.0;
        IntMat2([[m[0][0], m[1][0]], [m[0][1], m[1][1]]])
    }

    /// Inverse of a unimodular matrix; `None` otherwise.
    pub fn inverse(&self) -> Option<Self> {
        let d = self.det();
        if d != 1 && d != -1 {
            return None;
        }
        let m = &self.0;
        Some(IntMat2([[d * m[1][1], -d * m[0][1]], [-d * m[1][0], d * m[0][0]]]))
    }

    pub fn neg(&self) -> Self {
        let m = &self.0;
        IntMat2([[-m[0][0], -m[0][1]], [-m[1][0], -m[1][1]]])
    }

    pub fn checked_mul(&self, rhs: &IntMat2) -> Option<IntMat2> {
        let (a, b) = (&self.0, &rhs.0);
        let e = |i: usize, j: usize| {
            a[i][0].checked_mul(b[0][j])?.checked_add(a[i][1].checked_mul(b[1][j])?)
        };
        Some(IntMat2([[e(0, 0)?, e(0, 1)?], [e(1, 0)?, e(1, 1)?]]))
    }

    pub fn pow(&self, k: u32) -> IntMat2 {
        (0..k).fold(IntMat2::IDENTITY, |acc, _| acc * *self)
    }

    pub fn apply(&self, v: &[Rat; 2]) -> [Rat; 2] {
        let m = &self.0;
        [&v[0] * m[0][0] + &v[1] * m[0][1], &v[0] * m[1][0] + &v[1] * m[1][1]]
    }

    pub fn apply_int(&self, v: (i64, i64)) -> (i64, i64) {
        let m = &self.0;
        (m[0][0] * v.0 + m[0][1] * v.1, m[1][0] * v.0 + m[1][1] * v.1)
    }

    pub fn to_rat(&self) -> RatMat2 {
        let m = &self.0;
        RatMat2([
            [Rat::int(m[0][0]), Rat::int(m[0][1])],
            [Rat::int(m[1][0]), Rat::int(m[1][1])],
        ])
    }
}

impl Mul for IntMat2 {
    type Output = IntMat2;
    fn mul(self, rhs: IntMat2) -> IntMat2 {
        self.checked_mul(&rhs).expect("integer overflow in 2x2 product")
    }
}

impl fmt::Debug for IntMat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = &self.0;
        write!(f, "({},{};{},{})", m[0][0], m[0][1], m[1][0], m[1][1])
    }
}

impl fmt::Display for IntMat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// 2×2 rational matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RatMat2(pub [[Rat; 2]; 2]);

impl RatMat2 {
    pub fn new(a: Rat, b: Rat, c: Rat, d: Rat) -> Self {
        RatMat2([[a, b], [c, d]])
    }

    pub fn identity() -> Self {
        IntMat2::IDENTITY.to_rat()
    }

    pub fn from_cols(c0: [Rat; 2], c1: [Rat; 2]) -> Self {
        let [a, c] = c0;
        let [b, d] = c1;
        RatMat2([[a, b], [c, d]])
    }

    pub fn col(&self, j: usize) -> [Rat; 2] {
        [self.0[0][j].clone(), self.0[1][j].clone()]
    }

    pub fn det(&self) -> Rat {
        let m = &self.0;
        &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0]
    }

    pub fn inverse(&self) -> Result<Self> {
        let d = self.det();
        if d.is_zero() {
            return Err(Error::SingularInput);
        }
        let m = &self.0;
        Ok(RatMat2([
            [&m[1][1] / &d, -(&m[0][1] / &d)],
            [-(&m[1][0] / &d), &m[0][0] / &d],
        ]))
    }

    pub fn mul(&self, rhs: &RatMat2) -> RatMat2 {
        let (a, b) = (&self.0, &rhs.0);
        let e = |i: usize, j: usize| &a[i][0] * &b[0][j] + &a[i][1] * &b[1][j];
        RatMat2([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]])
    }

    pub fn apply(&self, v: &[Rat; 2]) -> [Rat; 2] {
        let m = &self.0;
        [&m[0][0] * &v[0] + &m[0][1] * &v[1], &m[1][0] * &v[0] + &m[1][1] * &v[1]]
    }

    /// The integer matrix with these entries, if every entry is an integer.
    pub fn to_int(&self) -> Option<IntMat2> {
        let m = &self.0;
        Some(IntMat2([
            [m[0][0].to_i64()?, m[0][1].to_i64()?],
            [m[1][0].to_i64()?, m[1][1].to_i64()?],
        ]))
    }
}

impl From<IntMat2> for RatMat2 {
    fn from(m: IntMat2) -> Self {
        m.to_rat()
    }
}

impl fmt::Debug for RatMat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = &self.0;
        write!(f, "({},{};{},{})", m[0][0], m[0][1], m[1][0], m[1][1])
    }
}

/// Dense rational matrix of arbitrary shape, row-major.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<Rat>>", into = "Vec<Vec<Rat>>")]
pub struct RatMatrix {
    rows: Vec<Vec<Rat>>,
}

impl RatMatrix {
    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Result<Self> {
        if let Some(first) = rows.first() {
            let n = first.len();
            if let Some(bad) = rows.iter().find(|r| r.len() != n) {
                return Err(Error::DimensionMismatch { expected: n, got: bad.len() });
            }
        }
        Ok(RatMatrix { rows })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        RatMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| Rat::int(v)).collect()).collect())
            .expect("ragged integer rows")
    }

    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        RatMatrix { rows: vec![vec![Rat::zero(); ncols]; nrows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.rows[i][i] = Rat::one();
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    pub fn is_square(&self) -> bool {
        self.nrows() == self.ncols()
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.rows[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        self.rows[i][j] = v;
    }

    pub fn rows(&self) -> &[Vec<Rat>] {
        &self.rows
    }

    pub fn transpose(&self) -> Self {
        let (r, c) = (self.nrows(), self.ncols());
        let mut t = Self::zeros(c, r);
        for i in 0..r {
            for j in 0..c {
                t.rows[j][i] = self.rows[i][j].clone();
            }
        }
        t
    }

    pub fn mul(&self, rhs: &RatMatrix) -> Result<RatMatrix> {
        if self.ncols() != rhs.nrows() {
            return Err(Error::DimensionMismatch { expected: self.ncols(), got: rhs.nrows() });
        }
        let (r, k, c) = (self.nrows(), self.ncols(), rhs.ncols());
        let mut out = Self::zeros(r, c);
        for i in 0..r {
            for j in 0..c {
                out.rows[i][j] = (0..k).map(|t| &self.rows[i][t] * &rhs.rows[t][j]).sum();
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Result<Vec<Rat>> {
        if self.ncols() != v.len() {
            return Err(Error::DimensionMismatch { expected: self.ncols(), got: v.len() });
        }
        Ok(self.rows.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect())
    }

    /// Determinant by fraction-exact Gaussian elimination.
    pub fn det(&self) -> Result<Rat> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch { expected: self.nrows(), got: self.ncols() });
        }
        let n = self.nrows();
        let mut a = self.rows.clone();
        let mut det = Rat::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
                return Ok(Rat::zero());
            };
            if p != col {
                a.swap(p, col);
                det = -det;
            }
            let pivot = a[col][col].clone();
            det *= &pivot;
            for r in col + 1..n {
                if a[r][col].is_zero() {
                    continue;
                }
                let f = &a[r][col] / &pivot;
                for c in col..n {
                    let delta = &f * &a[col][c];
                    a[r][c] -= &delta;
                }
            }
        }
        Ok(det)
    }

    /// Determinant of the submatrix picked out by `rows` and `cols`.
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> Rat {
        let sub = RatMatrix {
            rows: rows.iter().map(|&i| cols.iter().map(|&j| self.rows[i][j].clone()).collect()).collect(),
        };
        sub.det().expect("minor of matching index sets")
    }

    pub fn inverse(&self) -> Result<RatMatrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch { expected: self.nrows(), got: self.ncols() });
        }
        let n = self.nrows();
        let mut a: Vec<Vec<Rat>> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let mut r = row.clone();
                r.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
                r
            })
            .collect();
        for col in 0..n {
            let p = (col..n).find(|&r| !a[r][col].is_zero()).ok_or(Error::SingularInput)?;
            a.swap(p, col);
            let inv = a[col][col].recip();
            for c in 0..2 * n {
                a[col][c] *= &inv;
            }
            for r in 0..n {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let f = a[r][col].clone();
                for c in 0..2 * n {
                    let delta = &f * &a[col][c];
                    a[r][c] -= &delta;
                }
            }
        }
        Ok(RatMatrix { rows: a.into_iter().map(|r| r[n..].to_vec()).collect() })
    }

    /// True when every entry is an integer.
    pub fn is_integral(&self) -> bool {
        self.rows.iter().flatten().all(Rat::is_integer)
    }

    /// The square block with rows `r0..r0+k` and columns `c0..c0+k`.
    pub fn block(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> RatMatrix {
        RatMatrix {
            rows: self.rows[r0..r0 + nr].iter().map(|r| r[c0..c0 + nc].to_vec()).collect(),
        }
    }
}

impl TryFrom<Vec<Vec<Rat>>> for RatMatrix {
    type Error = Error;
    fn try_from(rows: Vec<Vec<Rat>>) -> Result<Self> {
        RatMatrix::from_rows(rows)
    }
}

impl From<RatMatrix> for Vec<Vec<Rat>> {
    fn from(m: RatMatrix) -> Self {
        m.rows
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            for (j, v) in row.iter().enumerate() {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{v}")?;
            }
        }
        f.write_str("]")
    }
}

/// Affine map `p ↦ J·p + c` of Qⁿ.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct AffineMap {
    pub linear: RatMatrix,
    pub translation: Vec<Rat>,
}

impl AffineMap {
    pub fn new(linear: RatMatrix, translation: Vec<Rat>) -> Result<Self> {
        if !linear.is_square() {
            return Err(Error::DimensionMismatch { expected: linear.nrows(), got: linear.ncols() });
        }
        if linear.nrows() != translation.len() {
            return Err(Error::DimensionMismatch { expected: linear.nrows(), got: translation.len() });
        }
        Ok(AffineMap { linear, translation })
    }

    pub fn identity(n: usize) -> Self {
        AffineMap { linear: RatMatrix::identity(n), translation: vec![Rat::zero(); n] }
    }

    pub fn dim(&self) -> usize {
        self.translation.len()
    }

    pub fn apply(&self, p: &[Rat]) -> Result<Vec<Rat>> {
        let mut out = self.linear.mul_vec(p)?;
        for (o, c) in out.iter_mut().zip(&self.translation) {
            *o += c;
        }
        Ok(out)
    }

    /// `self ∘ other`, i.e. apply `other` first.
    pub fn compose(&self, other: &AffineMap) -> Result<AffineMap> {
        let linear = self.linear.mul(&other.linear)?;
        let translation = self.apply(&other.translation)?;
        Ok(AffineMap { linear, translation })
    }

    pub fn inverse(&self) -> Result<AffineMap> {
        let inv = self.linear.inverse()?;
        let t = inv.mul_vec(&self.translation)?;
        Ok(AffineMap { linear: inv, translation: t.into_iter().map(|v| -v).collect() })
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.dim())
    }
}

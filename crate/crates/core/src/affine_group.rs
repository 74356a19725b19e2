//! The group `GL2(Z) ⋉ Q²` of integral affine transformations of the plane.
//!
//! An element `(A, b)` acts by `p ↦ A·p + b`; the product is composition,
//! `(A₁, b₁)(A₂, b₂) = (A₁A₂, A₁b₂ + b₁)`.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_linear::{IntMat2, Rat, RatMat2};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Preserving,
    Reversing,
}

impl Orientation {
    pub fn sign(self) -> i64 {
        match self {
            Orientation::Preserving => 1,
            Orientation::Reversing => -1,
        }
    }
}

/// Element `(A, b)` with `A ∈ GL2(Z)` and `b ∈ Q²`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "AffineRecord")]
pub struct IntAffine2 {
    linear: IntMat2,
    translation: [Rat; 2],
}

#[derive(Deserialize)]
struct AffineRecord {
    linear: IntMat2,
    translation: [Rat; 2],
}

impl TryFrom<AffineRecord> for IntAffine2 {
    type Error = Error;
    fn try_from(r: AffineRecord) -> Result<Self> {
        IntAffine2::new(r.linear, r.translation)
    }
}

impl IntAffine2 {
    pub fn new(linear: IntMat2, translation: [Rat; 2]) -> Result<Self> {
        if !linear.is_unimodular() {
            return Err(Error::InvalidParameters(format!(
                "linear part {linear} has determinant {}, expected ±1",
                linear.det()
            )));
        }
        Ok(IntAffine2 { linear, translation })
    }

    /// Shorthand for tests and fixed constructions; panics unless `det = ±1`.
    pub fn from_parts(linear: IntMat2, tx: Rat, ty: Rat) -> Self {
        Self::new(linear, [tx, ty]).expect("unimodular linear part")
    }

    pub fn identity() -> Self {
        IntAffine2 { linear: IntMat2::IDENTITY, translation: [Rat::zero(), Rat::zero()] }
    }

    pub fn translation_by(tx: Rat, ty: Rat) -> Self {
        IntAffine2 { linear: IntMat2::IDENTITY, translation: [tx, ty] }
    }

    pub fn linear_only(linear: IntMat2) -> Result<Self> {
        Self::new(linear, [Rat::zero(), Rat::zero()])
    }

    pub fn linear(&self) -> IntMat2 {
        self.linear
    }

    pub fn translation(&self) -> &[Rat; 2] {
        &self.translation
    }

    pub fn is_identity(&self) -> bool {
        self.linear.is_identity() && self.translation.iter().all(Rat::is_zero)
    }

    pub fn is_translation(&self) -> bool {
        self.linear.is_identity()
    }

    pub fn compose(&self, other: &IntAffine2) -> IntAffine2 {
        let t = self.linear.apply(&other.translation);
        IntAffine2 {
            linear: self.linear * other.linear,
            translation: [&t[0] + &self.translation[0], &t[1] + &self.translation[1]],
        }
    }

    pub fn inverse(&self) -> IntAffine2 {
        let inv = self.linear.inverse().expect("unimodular");
        let t = inv.apply(&self.translation);
        IntAffine2 { linear: inv, translation: [-&t[0], -&t[1]] }
    }

    /// `self^k` for any integer `k`, by repeated squaring.
    pub fn pow(&self, k: i64) -> IntAffine2 {
        let mut base = if k < 0 { self.inverse() } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = IntAffine2::identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&base);
            }
            base = base.compose(&base);
            e >>= 1;
        }
        acc
    }

    /// `f · self · f⁻¹`.
    pub fn conjugated_by(&self, f: &IntAffine2) -> IntAffine2 {
        f.compose(self).compose(&f.inverse())
    }

    pub fn apply(&self, p: &[Rat; 2]) -> [Rat; 2] {
        let t = self.linear.apply(p);
        [&t[0] + &self.translation[0], &t[1] + &self.translation[1]]
    }

    pub fn orientation(&self) -> Orientation {
        orientation(self)
    }

    pub fn to_witness(&self) -> RealAffine2Witness {
        RealAffine2Witness { linear: self.linear.to_rat(), translation: self.translation.clone() }
    }
}

impl fmt::Debug for IntAffine2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, ({}, {}))", self.linear, self.translation[0], self.translation[1])
    }
}

impl fmt::Display for IntAffine2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Affine map of the plane with an invertible rational linear part.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RealAffine2Witness {
    pub linear: RatMat2,
    pub translation: [Rat; 2],
}

impl RealAffine2Witness {
    pub fn new(linear: RatMat2, translation: [Rat; 2]) -> Result<Self> {
        if linear.det().is_zero() {
            return Err(Error::SingularInput);
        }
        Ok(RealAffine2Witness { linear, translation })
    }

    pub fn identity() -> Self {
        IntAffine2::identity().to_witness()
    }

    pub fn compose(&self, other: &RealAffine2Witness) -> RealAffine2Witness {
        let t = self.linear.apply(&other.translation);
        RealAffine2Witness {
            linear: self.linear.mul(&other.linear),
            translation: [&t[0] + &self.translation[0], &t[1] + &self.translation[1]],
        }
    }

    pub fn inverse(&self) -> RealAffine2Witness {
        let inv = self.linear.inverse().expect("witness linear part is invertible");
        let t = inv.apply(&self.translation);
        RealAffine2Witness { linear: inv, translation: [-&t[0], -&t[1]] }
    }

    pub fn apply(&self, p: &[Rat; 2]) -> [Rat; 2] {
        let t = self.linear.apply(p);
        [&t[0] + &self.translation[0], &t[1] + &self.translation[1]]
    }

    /// The same map as an element of `GL2(Z) ⋉ Q²`, when its linear part is.
    pub fn to_int(&self) -> Option<IntAffine2> {
        IntAffine2::new(self.linear.to_int()?, self.translation.clone()).ok()
    }
}

impl From<IntAffine2> for RealAffine2Witness {
    fn from(g: IntAffine2) -> Self {
        g.to_witness()
    }
}

impl fmt::Debug for RealAffine2Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, ({}, {}))", self.linear, self.translation[0], self.translation[1])
    }
}

pub fn compose(g1: &IntAffine2, g2: &IntAffine2) -> IntAffine2 {
    g1.compose(g2)
}

pub fn inverse(g: &IntAffine2) -> IntAffine2 {
    g.inverse()
}

/// `f · e · f⁻¹` for a rational affine `f`.
pub fn conjugate(f: &RealAffine2Witness, e: &IntAffine2) -> RealAffine2Witness {
    f.compose(&e.to_witness()).compose(&f.inverse())
}

/// Closed form of `f·e·f⁻¹` for `f = ((σ₁, λ; 0, σ₂), (z₁, z₂))` and
/// `e = ((1, m; 0, σ), (x, y))`.
pub fn conjugate_upper_triangular(f: &IntAffine2, e: &IntAffine2) -> Result<IntAffine2> {
    let [[s1, lam], [f10, s2]] = f.linear().0;
    let [[e00, m], [e10, sigma]] = e.linear().0;
    if f10 != 0 || e10 != 0 || e00 != 1 {
        return Err(Error::ShapeMismatch("expected upper-triangular f and e with e[0][0] = 1".into()));
    }
    let [x, y] = e.translation();
    let z2 = &f.translation()[1];
    let top = (sigma - 1) * s2 * lam + s1 * s2 * m;
    let t0 = x * s1 + y * lam + z2 * ((1 - sigma) * s2 * lam) - z2 * (s1 * s2 * m);
    let t1 = z2 * (1 - sigma) + y * s2;
    IntAffine2::new(IntMat2::new(1, top, 0, sigma), [t0, t1])
}

/// `aᵏbˡ` for `a = ((1, n; 0, 1), (p, q))` and `b = ((1, δ; 0, −1), (r, 0))`.
pub fn klein_word(a: &IntAffine2, b: &IntAffine2, k: i64, l: i64) -> Result<IntAffine2> {
    let [[a00, n], [a10, a11]] = a.linear().0;
    let [[b00, delta], [b10, b11]] = b.linear().0;
    if (a00, a10, a11) != (1, 0, 1) {
        return Err(Error::ShapeMismatch(format!("a = {a:?} is not of the form ((1,n;0,1), v)")));
    }
    if (b00, b10, b11) != (1, 0, -1) || !b.translation()[1].is_zero() {
        return Err(Error::ShapeMismatch(format!("b = {b:?} is not of the form ((1,δ;0,-1), (y,0))")));
    }
    let [p, q] = a.translation();
    let r = &b.translation()[0];
    let sign_l = if l.rem_euclid(2) == 0 { 1 } else { -1 };
    let odd_l = i64::from(l.rem_euclid(2) == 1);
    let top = odd_l * delta + sign_l * k * n;
    let t0 = p * k + q * (k * (k - 1) / 2 * n) + r * l;
    let t1 = q * k;
    IntAffine2::new(IntMat2::new(1, top, 0, sign_l), [t0, t1])
}

/// True when `p ↦ A·p + b` fixes some point of Q²; the identity counts as
/// having fixed points.
pub fn has_fixed_point(g: &IntAffine2) -> bool {
    // (A − E)·p = −b
    let [[a, b], [c, d]] = g.linear().0;
    let (a, d) = (a - 1, d - 1);
    let [t0, t1] = g.translation();
    let (r0, r1) = (-t0, -t1);
    let det = a * d - b * c;
    if det != 0 {
        return true;
    }
    // rank ≤ 1: consistent iff the right-hand side lies in the column space
    if a == 0 && b == 0 && c == 0 && d == 0 {
        return r0.is_zero() && r1.is_zero();
    }
    // rank one: consistent iff the augmented matrix still has rank one
    &r1 * a == &r0 * c && &r1 * b == &r0 * d
}

pub fn orientation(g: &IntAffine2) -> Orientation {
    if g.linear().det() == 1 {
        Orientation::Preserving
    } else {
        Orientation::Reversing
    }
}

/// A unimodular matrix whose first column is `v`.
///
/// The second column `(−t, s)` uses the solution of `s·v₁ + t·v₂ = 1` with
/// `s` reduced into `[0, |v₂|)`.
pub fn primitive_extend(v: (i64, i64)) -> Result<IntMat2> {
    let (v1, v2) = v;
    let g = v1.gcd(&v2);
    if g != 1 {
        return Err(Error::NotPrimitive(v1, v2));
    }
    let (s, t) = if v2 == 0 {
        (v1, 0)
    } else {
        let ext = v1.extended_gcd(&v2);
        let s = ext.x.rem_euclid(v2.abs());
        (s, (1 - v1 * s) / v2)
    };
    let m = IntMat2::new(v1, -t, v2, s);
    debug_assert_eq!(m.det(), 1);
    Ok(m)
}

/// Integral coordinate change bringing one element into normal position.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EigenNormal {
    /// Columns are the new basis vectors.
    pub basis: IntMat2,
    /// `f` with `f·g·f⁻¹` in normal position; its linear part is `basis⁻¹`.
    pub conjugator: IntAffine2,
    /// `((1, n; 0, 1), (0, y))` with `n ≥ 1`, `y ≥ 0`, or
    /// `((1, δ; 0, −1), (x, 0))` with `δ ∈ {0, 1}`, `x ≥ 0`.
    pub normal: IntAffine2,
}

impl EigenNormal {
    pub fn linear(&self) -> IntMat2 {
        self.normal.linear()
    }
}

/// Primitive integer vector spanning the kernel of a rank-one integer matrix,
/// first nonzero coordinate positive.
pub(crate) fn primitive_kernel(m: IntMat2) -> Option<(i64, i64)> {
    let [[a, b], [c, d]] = m.0;
    if m.det() != 0 || m == IntMat2::ZERO {
        return None;
    }
    let (p, q) = if a != 0 || b != 0 { (a, b) } else { (c, d) };
    let (mut v1, mut v2) = (-q, p);
    let g = v1.gcd(&v2);
    v1 /= g;
    v2 /= g;
    if v1 < 0 || (v1 == 0 && v2 < 0) {
        v1 = -v1;
        v2 = -v2;
    }
    Some((v1, v2))
}

/// Conjugates a non-translation element with eigenvalue 1 into normal position.
///
/// The eigenvector of eigenvalue 1 becomes `e₁`; a preserving part is made
/// `((1, n; 0, 1))` with `n ≥ 1` by flipping `e₁` if needed, a reversing part
/// `((1, δ; 0, −1))` with `δ ∈ {0, 1}` by shearing `e₂ ↦ e₂ − ⌊c/2⌋e₁`. The origin
/// is then moved to clear one translation coordinate and `−E` makes the other
/// nonnegative. Each choice is forced except for the eigenvector sign, which is
/// fixed by [`primitive_kernel`] and [`primitive_extend`], so the output is
/// deterministic.
pub fn eigen_normalize(g: &IntAffine2) -> Result<EigenNormal> {
    let a = g.linear();
    if a.is_identity() {
        return Err(Error::ShapeMismatch("translations have no normal position".into()));
    }
    let a_minus_e = IntMat2::new(a.0[0][0] - 1, a.0[0][1], a.0[1][0], a.0[1][1] - 1);
    let v = primitive_kernel(a_minus_e).ok_or(Error::NoUnitEigenvalue)?;
    let mut basis = primitive_extend(v)?;
    let tri = basis.inverse().expect("unimodular") * a * basis;
    let c = tri.0[0][1];
    if tri.0[1][1] == 1 {
        if c < 0 {
            basis = basis * IntMat2::diag(-1, 1);
        }
    } else {
        let k = -c.div_euclid(2);
        basis = basis * IntMat2::new(1, k, 0, 1);
    }
    let lin = IntAffine2::linear_only(basis.inverse().expect("unimodular"))?;
    let h = g.conjugated_by(&lin);
    let [[_, top], [_, sign]] = h.linear().0;
    let [b0, b1] = h.translation().clone();
    // conjugating by the translation by o turns b into b − (A − E)·o
    let o = if sign == 1 {
        [Rat::zero(), &b0 / top]
    } else {
        [Rat::zero(), -(&b1 / 2)]
    };
    let shift = IntAffine2::translation_by(o[0].clone(), o[1].clone());
    let mut conj = shift.compose(&lin);
    let mut normal = g.conjugated_by(&conj);
    let key = if sign == 1 { &normal.translation()[1] } else { &normal.translation()[0] };
    if key.is_negative() {
        conj = IntAffine2::linear_only(IntMat2::diag(-1, -1))?.compose(&conj);
        normal = g.conjugated_by(&conj);
    }
    let basis = conj.linear().inverse().expect("unimodular");
    Ok(EigenNormal { basis, conjugator: conj, normal })
}

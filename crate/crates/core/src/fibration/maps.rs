use serde::{Deserialize, Serialize};

use crate::affine_group::IntAffine2;
use crate::error::{Error, Result};
use crate::exact_linear::{AffineMap, IntMat2, PolyForm, Rat, RatMatrix};

/// Coordinates of the four-dimensional total space.
pub const VARS_4: [&str; 4] = ["x", "y", "alpha", "beta"];
/// Coordinates of the six-dimensional total space.
pub const VARS_6: [&str; 6] = ["x", "y", "z", "alpha", "beta", "gamma"];

#[derive(Serialize, Deserialize)]
struct Record {
    dimension: usize,
    linear: RatMatrix,
    translation: Vec<Rat>,
}

/// Invertible affine map of the total space `Q^{2k}` (base coordinates
/// first, then the fibre coordinates), `k ∈ {2, 3}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Record", into = "Record")]
pub struct SymplecticAffine {
    map: AffineMap,
}

impl TryFrom<Record> for SymplecticAffine {
    type Error = Error;

    fn try_from(r: Record) -> Result<Self> {
        let s = SymplecticAffine::new(AffineMap::new(r.linear, r.translation)?)?;
        if s.dimension() != r.dimension {
            return Err(Error::DimensionMismatch { expected: r.dimension, got: s.dimension() });
        }
        Ok(s)
    }
}

impl From<SymplecticAffine> for Record {
    fn from(s: SymplecticAffine) -> Self {
        Record { dimension: s.dimension(), linear: s.map.linear, translation: s.map.translation }
    }
}

impl SymplecticAffine {
    pub fn new(map: AffineMap) -> Result<Self> {
        let n = map.dim();
        if n != 4 && n != 6 {
            return Err(Error::DimensionMismatch { expected: 4, got: n });
        }
        if map.linear.det()?.is_zero() {
            return Err(Error::SingularInput);
        }
        Ok(SymplecticAffine { map })
    }

    /// Builds a map from one row per output coordinate: the coefficients of
    /// every input coordinate followed by the constant term.
    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Result<Self> {
        let n = rows.len();
        let mut linear = Vec::with_capacity(n);
        let mut translation = Vec::with_capacity(n);
        for mut r in rows {
            if r.len() != n + 1 {
                return Err(Error::DimensionMismatch { expected: n + 1, got: r.len() });
            }
            translation.push(r.pop().expect("nonempty row"));
            linear.push(r);
        }
        Self::new(AffineMap::new(RatMatrix::from_rows(linear)?, translation)?)
    }

    /// Unit translation along fibre coordinate `i` (0-based).
    pub fn fibre_translation(dimension: usize, i: usize) -> Self {
        let mut map = AffineMap::identity(dimension);
        map.translation[dimension / 2 + i] = Rat::one();
        SymplecticAffine { map }
    }

    /// Cotangent lift `(p, ξ) ↦ (A·p + b, A^{-T}·ξ)` of a base element.
    pub fn cotangent_lift(g: &IntAffine2) -> Self {
        let a = g.linear();
        let inv_t = a.inverse().expect("unimodular").transpose();
        let mut linear = RatMatrix::zeros(4, 4);
        for i in 0..2 {
            for j in 0..2 {
                linear.set(i, j, Rat::int(a.0[i][j]));
                linear.set(i + 2, j + 2, Rat::int(inv_t.0[i][j]));
            }
        }
        let [tx, ty] = g.translation().clone();
        SymplecticAffine { map: AffineMap { linear, translation: vec![tx, ty, Rat::zero(), Rat::zero()] } }
    }

    pub fn map(&self) -> &AffineMap {
        &self.map
    }

    pub fn dimension(&self) -> usize {
        self.map.dim()
    }

    pub fn base_dimension(&self) -> usize {
        self.dimension() / 2
    }

    pub fn variables(&self) -> &'static [&'static str] {
        if self.dimension() == 4 {
            &VARS_4
        } else {
            &VARS_6
        }
    }

    /// Coefficient of input coordinate `input` in output coordinate `output`.
    pub fn coef(&self, output: usize, input: usize) -> &Rat {
        self.map.linear.get(output, input)
    }

    pub fn constant(&self, output: usize) -> &Rat {
        &self.map.translation[output]
    }

    pub(crate) fn set_coef(&mut self, output: usize, input: usize, v: Rat) {
        self.map.linear.set(output, input, v);
    }

    pub fn apply(&self, p: &[Rat]) -> Result<Vec<Rat>> {
        self.map.apply(p)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &SymplecticAffine) -> Result<SymplecticAffine> {
        Ok(SymplecticAffine { map: self.map.compose(&other.map)? })
    }

    pub fn inverse(&self) -> SymplecticAffine {
        SymplecticAffine { map: self.map.inverse().expect("maps are invertible by construction") }
    }

    pub fn pullback(&self, form: &PolyForm) -> Result<PolyForm> {
        form.pullback(&self.map)
    }

    /// Base coordinates of the image do not depend on the fibre coordinates.
    pub fn is_fibre_preserving(&self) -> bool {
        let k = self.base_dimension();
        (0..k).all(|i| (k..2 * k).all(|j| self.coef(i, j).is_zero()))
    }

    /// Action on the base plane, when the map is fibre preserving with an
    /// integral unimodular base block.
    pub fn base_action(&self) -> Option<IntAffine2> {
        if self.dimension() != 4 || !self.is_fibre_preserving() {
            return None;
        }
        let mut a = [[0i64; 2]; 2];
        for (i, row) in a.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = self.coef(i, j).to_i64()?;
            }
        }
        IntAffine2::new(IntMat2(a), [self.constant(0).clone(), self.constant(1).clone()]).ok()
    }

    /// The fibre-to-fibre block.
    pub fn fibre_block(&self) -> RatMatrix {
        let k = self.base_dimension();
        self.map.linear.block(k, k, k, k)
    }

    /// Whether the fibre-to-fibre block is an integral matrix of determinant `±1`.
    pub fn fibre_block_unimodular(&self) -> bool {
        let b = self.fibre_block();
        b.is_integral() && b.det().map(|d| d.abs() == Rat::one()).unwrap_or(false)
    }

    /// The base part is the identity and the fibre block is the identity.
    pub fn is_vertical_shear(&self) -> bool {
        let k = self.base_dimension();
        let id = RatMatrix::identity(2 * k);
        (0..2 * k).all(|i| {
            (0..2 * k).all(|j| if i >= k && j < k { true } else { self.coef(i, j) == id.get(i, j) })
        }) && (0..k).all(|i| self.constant(i).is_zero())
    }

    /// The fibre translation vector when the map is a translation purely in
    /// the fibre coordinates.
    pub fn fibre_translation_vector(&self) -> Option<Vec<Rat>> {
        let k = self.base_dimension();
        let pure = self.is_vertical_shear() && (k..2 * k).all(|i| (0..k).all(|j| self.coef(i, j).is_zero()));
        pure.then(|| self.map.translation[k..].to_vec())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(v: i64) -> Rat {
        Rat::int(v)
    }

    #[test]
    fn cotangent_lift_is_symplectic() {
        let g = IntAffine2::from_parts(IntMat2::new(1, 2, 0, -1), Rat::new(1, 2), Rat::zero());
        let s = SymplecticAffine::cotangent_lift(&g);
        let mut w = PolyForm::zero(&VARS_4, 2).unwrap();
        w.add_constant(&["alpha", "x"], Rat::one()).unwrap();
        w.add_constant(&["beta", "y"], Rat::one()).unwrap();
        assert_eq!(s.pullback(&w).unwrap(), w);
        assert_eq!(s.base_action(), Some(g));
        assert!(s.fibre_block_unimodular());
    }

    #[test]
    fn rows_and_json() {
        let s = SymplecticAffine::from_rows(vec![
            vec![r(1), r(1), r(0), r(0), r(0)],
            vec![r(0), r(1), r(0), r(0), r(1)],
            vec![r(-1), r(0), r(1), r(0), r(0)],
            vec![r(1), r(0), r(-1), r(1), r(0)],
        ])
        .unwrap();
        assert!(s.is_fibre_preserving());
        let json = serde_json::to_string(&s).unwrap();
        let back: SymplecticAffine = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
        assert!(SymplecticAffine::from_rows(vec![vec![r(1), r(0)]; 2]).is_err());
        let t = SymplecticAffine::fibre_translation(4, 1);
        assert_eq!(t.fibre_translation_vector(), Some(vec![r(0), r(1)]));
        assert_eq!(s.fibre_translation_vector(), None);
    }
}

use serde::{Deserialize, Serialize};

use super::klein_word::KleinWord;
use super::nf::LatticeNF;
use crate::affine_group::RealAffine2Witness;
use crate::error::{Error, Result};
use crate::exact_linear::{IntMat2, Rat};

/// Affine automorphisms of a Klein-bottle lattice.
///
/// Every automorphism is `f = ((ε₂, μ; 0, ε₁), (z₁, k·y/2))` with
/// `μ = (−ε₁δ + ε₁kn + ε₂δ)/2`, and it sends the standard pair `(a, b)` to
/// `(a^{ε₁}, aᵏb^{ε₂})`. The parameters are constrained by
///
/// 1. `μ ∈ Z`;
/// 2. `n ≠ 0 ⇒ ε₂ = 1`;
/// 3. `n` odd `⇒ k` even;
/// 4. `δ ≠ 0 ⇒ ε₁ = ε₂`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KleinAutomorphismFamily {
    pub n: i64,
    pub delta: i64,
    pub x: Rat,
    pub y: Rat,
}

impl KleinAutomorphismFamily {
    pub fn new(nf: &LatticeNF) -> Result<Self> {
        match nf {
            LatticeNF::K2 { m, delta, x, y } => {
                nf.validate()?;
                Ok(KleinAutomorphismFamily { n: *m, delta: *delta, x: x.clone(), y: y.clone() })
            }
            other => Err(Error::ShapeMismatch(format!("{other} is not a Klein-bottle lattice"))),
        }
    }

    pub fn description(&self) -> String {
        let mut parts = vec![format!(
            "f = ((ε₂, μ; 0, ε₁), (z₁, k·{}/2)), μ = (−ε₁·{d} + ε₁·k·{n} + ε₂·{d})/2 ∈ Z, z₁ ∈ Q",
            self.y,
            d = self.delta,
            n = self.n
        )];
        if self.n != 0 {
            parts.push("ε₂ = 1".into());
        }
        if self.n % 2 != 0 {
            parts.push("k even".into());
        }
        if self.delta != 0 {
            parts.push("ε₁ = ε₂".into());
        }
        parts.join("; ")
    }

    /// `μ`, or the violated constraint.
    pub fn shear(&self, eps1: i64, eps2: i64, k: i64) -> Result<i64> {
        let violation = |item: u8, detail: String| Err(Error::ConstraintViolation { item, detail });
        if eps1.abs() != 1 || eps2.abs() != 1 {
            return violation(1, format!("signs must be ±1, got ε₁ = {eps1}, ε₂ = {eps2}"));
        }
        if self.n != 0 && eps2 != 1 {
            return violation(2, format!("n = {} ≠ 0 forces ε₂ = 1", self.n));
        }
        if self.n % 2 != 0 && k % 2 != 0 {
            return violation(3, format!("n = {} is odd, so k = {k} must be even", self.n));
        }
        if self.delta != 0 && eps1 != eps2 {
            return violation(4, "δ ≠ 0 forces ε₁ = ε₂".into());
        }
        let twice = -eps1 * self.delta + eps1 * k * self.n + eps2 * self.delta;
        if twice % 2 != 0 {
            return violation(1, format!("μ = {twice}/2 is not an integer"));
        }
        Ok(twice / 2)
    }

    /// The automorphism with the given parameters.
    pub fn sample(&self, eps1: i64, eps2: i64, k: i64, z1: Rat) -> Result<RealAffine2Witness> {
        let mu = self.shear(eps1, eps2, k)?;
        let lin = IntMat2::new(eps2, mu, 0, eps1).to_rat();
        RealAffine2Witness::new(lin, [z1, &self.y * &Rat::new(k, 2)])
    }

    /// Images of `a` and `b` in the standard pair.
    pub fn images(eps1: i64, eps2: i64, k: i64) -> (KleinWord, KleinWord) {
        (KleinWord::new(eps1, 0), KleinWord::new(k, 0).mul(KleinWord::new(0, eps2)))
    }
}

pub fn klein_automorphism_family(nf: &LatticeNF) -> Result<KleinAutomorphismFamily> {
    KleinAutomorphismFamily::new(nf)
}

use serde::{Deserialize, Serialize};

use super::nf::LatticeNF;
use crate::affine_group::primitive_extend;
use crate::exact_linear::{rational_gcd, rational_snf, IntMat2, Rat, RatMat2};

/// Evidence accompanying a positive isomorphism answer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IsoWitness {
    /// `C·M₁·D = M₂` for the column matrices of two translation tori.
    DoubleCoset { c: IntMat2, d: IntMat2 },
    /// `C·(u₁, v₁) = (u₂, v₂)` for two translation cylinders.
    Basis { c: IntMat2 },
    /// The normal forms coincide.
    Identical,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsoResult {
    pub isomorphic: bool,
    pub witness: Option<IsoWitness>,
}

impl IsoResult {
    fn no() -> Self {
        IsoResult { isomorphic: false, witness: None }
    }

    fn yes(w: IsoWitness) -> Self {
        IsoResult { isomorphic: true, witness: Some(w) }
    }
}

/// Checks a witness against the two normal forms exactly.
pub fn witness_holds(nf1: &LatticeNF, nf2: &LatticeNF, w: &IsoWitness) -> bool {
    match (w, nf1, nf2) {
        (IsoWitness::DoubleCoset { c, d }, LatticeNF::T2uvwz { .. }, LatticeNF::T2uvwz { .. }) => {
            c.is_unimodular()
                && d.is_unimodular()
                && c.to_rat().mul(&nf1.column_matrix()).mul(&d.to_rat()) == nf2.column_matrix()
        }
        (IsoWitness::Basis { c }, LatticeNF::C2uv { u: u1, v: v1 }, LatticeNF::C2uv { u: u2, v: v2 }) => {
            c.is_unimodular() && c.apply(&[u1.clone(), v1.clone()]) == [u2.clone(), v2.clone()]
        }
        (IsoWitness::Identical, a, b) => a == b,
        _ => false,
    }
}

/// Primitive integer direction of a nonzero rational vector, and its scale.
fn primitive_direction(u: &Rat, v: &Rat) -> ((i64, i64), Rat) {
    let g = rational_gcd([u, v]).expect("nonzero cylinder translation");
    let a = (u / &g).to_i64().expect("integral after dividing by the gcd");
    let b = (v / &g).to_i64().expect("integral after dividing by the gcd");
    ((a, b), g)
}

/// Decides whether two normal forms describe isomorphic lattices.
pub fn is_isomorphic(nf1: &LatticeNF, nf2: &LatticeNF) -> IsoResult {
    if nf1.series() != nf2.series() {
        return IsoResult::no();
    }
    match (nf1, nf2) {
        (LatticeNF::T2uvwz { .. }, LatticeNF::T2uvwz { .. }) => {
            let (Ok(s1), Ok(s2)) = (rational_snf(&nf1.column_matrix()), rational_snf(&nf2.column_matrix())) else {
                return IsoResult::no();
            };
            if s1.diag != s2.diag {
                return IsoResult::no();
            }
            // C₁M₁D₁ = Δ = C₂M₂D₂  ⇒  (C₂⁻¹C₁)·M₁·(D₁D₂⁻¹) = M₂
            let c = s2.c.inverse().expect("unimodular") * s1.c;
            let d = s1.d * s2.d.inverse().expect("unimodular");
            IsoResult::yes(IsoWitness::DoubleCoset { c, d })
        }
        (LatticeNF::C2uv { u: u1, v: v1 }, LatticeNF::C2uv { u: u2, v: v2 }) => {
            let (p1, g1) = primitive_direction(u1, v1);
            let (p2, g2) = primitive_direction(u2, v2);
            if g1 != g2 {
                return IsoResult::no();
            }
            let e1 = primitive_extend(p1).expect("primitive");
            let e2 = primitive_extend(p2).expect("primitive");
            IsoResult::yes(IsoWitness::Basis { c: e2 * e1.inverse().expect("unimodular") })
        }
        (a, b) if a == b => IsoResult::yes(IsoWitness::Identical),
        _ => IsoResult::no(),
    }
}

/// Invariant of the translation-torus class: the rational Smith diagonal.
pub fn torus_invariant(m: &RatMat2) -> Option<[Rat; 2]> {
    rational_snf(m).ok().map(|s| s.diag)
}

//! Lagrangian fibrations over surfaces as exact gluing data on `R⁴`:
//! construction, verification, classification and enumeration.
//!
//! A fibration is stored as a form on the total space together with named
//! affine maps: `s1`, `s2` (and `s3`) translate the fibre by unit vectors,
//! the remaining maps glue the fibres over opposite sides of the base
//! fundamental domain.

mod build;
mod classify;
mod enumerate;
mod maps;
mod verify;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::exact_linear::{PolyForm, Rat};
use crate::lattice_classifier::LatticeNF;

pub use build::{
    build_fibration, build_klein_fibration, build_noncompact, build_t3_example, build_torus_fibration,
    build_torus_translation_fibration, fundamental_domain, standard_form,
};
pub use classify::{classify, ClassificationTriple};
pub use enumerate::{enumerate_fibrations, Enumeration};
pub use maps::{SymplecticAffine, VARS_4, VARS_6};
pub use verify::{
    verify, with_half_integer_shift, with_one_chart_twisting, CheckResult, VerifyReport, CHECK_BASE_LATTICE,
    CHECK_FIBRE_LATTICE, CHECK_FIBRE_PRESERVING, CHECK_RELATION, CHECK_SYMPLECTIC,
};

/// Gluing data of a fibration together with the parameters it was built from.
///
/// `lattice` is absent for the six-dimensional example over `T³`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FibrationSpec {
    pub lattice: Option<LatticeNF>,
    pub obstruction: (i64, i64),
    pub twisting: Rat,
    pub maps: BTreeMap<String, SymplecticAffine>,
    pub form: PolyForm,
    /// Vertices `O, O + e₁, O + e₂, O + e₁ + e₂` of the base fundamental domain.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub domain: Vec<[Rat; 2]>,
}

impl FibrationSpec {
    pub fn map(&self, name: &str) -> Option<&SymplecticAffine> {
        self.maps.get(name)
    }

    pub fn dimension(&self) -> usize {
        self.form.nvars()
    }
}

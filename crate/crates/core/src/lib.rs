//! Exact classification of rank-2 integral affine lattices on surfaces and of
//! the Lagrangian torus fibrations that live over them.
//!
//! The crate is organised bottom-up:
//!
//! * [`exact_linear`]: rationals, small integer/rational matrices, Smith normal
//!   form and affine-coefficient differential forms.
//! * [`affine_group`]: the group `GL2(Z) ⋉ Q²` of integral affine maps.
//! * [`lattice_classifier`]: Klein-bottle word calculus, detection of the base
//!   surface, reduction of a presentation to a normal form, and the lattice
//!   isomorphism decision.
//! * [`cohomology`]: primary obstruction groups and twisting moduli.
//! * [`fibration`]: explicit gluing data, verification, classification and
//!   enumeration of fibrations.
//!
//! Everything is exact; no floating point enters any decision.

pub mod affine_group;
pub mod cohomology;
pub mod error;
pub mod exact_linear;
pub mod fibration;
pub mod lattice_classifier;

pub use affine_group::{IntAffine2, Orientation, RealAffine2Witness};
pub use cohomology::{ObstructionGroup, TwistingModuli};
pub use error::{Error, Result};
pub use exact_linear::{AffineMap, IntMat2, PolyForm, Rat, RatMat2, RatMatrix, SnfResult};
pub use fibration::{ClassificationTriple, FibrationSpec, SymplecticAffine};
pub use lattice_classifier::{KleinWord, LatticeNF, NormalizationCertificate, Series, Surface};

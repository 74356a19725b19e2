//! Klein-bottle word calculus, base-surface detection, reduction to normal
//! form and the lattice isomorphism decision.

mod automorphism;
mod freeness;
mod isomorphism;
mod klein_word;
mod nf;
mod normalize;

pub use automorphism::{klein_automorphism_family, KleinAutomorphismFamily};
pub use freeness::{check_free_bounded, for_each_word, Freeness, DEFAULT_WORD_LENGTH};
pub use isomorphism::{is_isomorphic, torus_invariant, witness_holds, IsoResult, IsoWitness};
pub use klein_word::{is_standard_pair, klein_normal_form, parse_letters, KleinWord, Letter};
pub use nf::{LatticeNF, Series, Surface};
pub use normalize::{
    base_surface, base_surface_bounded, evaluate_word, normalize, normalize_bounded, NormalizationCertificate,
};

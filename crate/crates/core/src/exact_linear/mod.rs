//! Exact scalars, small matrices, Smith normal form and affine-coefficient
//! differential forms.

mod forms;
mod matrix;
mod rat;
mod snf;

pub use forms::{AffineCoef, PolyForm, MAX_VARIABLES};
pub use matrix::{AffineMap, IntMat2, RatMat2, RatMatrix};
pub use rat::{rational_gcd, Rat};
pub use snf::{rational_snf, snf, RationalSnf, SnfResult};

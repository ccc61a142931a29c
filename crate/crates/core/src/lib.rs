//! Exact certificates of freeness for subgroups of split matrix groups.
//!
//! Given elements `γ_1, …, γ_r` of `SL_n`, split `SO_{2k+1}` or split `G_2`
//! (7-dimensional representation) over the rationals, this crate finds a
//! conjugator `h`, checks the ping-pong non-incidence condition for the
//! conjugates `η_i = h⁻¹ γ_i h`, and verifies word by word that the
//! generators `g_i = η_i τ η_i⁻¹` act on projective space over `Q((t))`
//! without relations. `τ` is a diagonal torus element `diag(t^{k_0}, …, t^{k_n})`
//! with strictly increasing exponents.
//!
//! Arithmetic is generic over [`Ring`]/[`Field`]; the aliases below fix the
//! exact rational instantiation used by the certifier.

pub mod certificate;
pub mod certifier;
pub mod error;
pub mod groups;
pub mod json;
pub mod laurent;
pub mod matrix;
pub mod projective;
pub mod rep_span;
pub mod scalar;
pub mod words;

pub use error::{Error, Result};
pub use laurent::{Laurent, Valuation};
pub use matrix::Matrix;
pub use scalar::{Field, Ring};

/// Arbitrary-precision rational numbers, always in lowest terms.
pub type Rational = num_rational::BigRational;
/// Laurent polynomials in `t` with rational coefficients.
pub type LaurentPoly = Laurent<Rational>;
pub type MatrixQ = Matrix<Rational>;
pub type MatrixL = Matrix<LaurentPoly>;
pub type ProjPointL = projective::ProjPoint<Rational>;
pub type ProjPointC = projective::ResiduePoint<Rational>;
pub type CovectorQ = projective::Covector<Rational>;

//! Penalty Hamiltonians for Boolean logic on diagonal (Ising-type) qubit
//! systems: polynomial algebra, gadget catalogue and synthesis, circuit
//! compilation, k-local reduction and exhaustive spectrum checks.

pub mod circuit;
pub mod error;
pub mod gadget;
pub mod kmap;
mod lp;
pub mod model_file;
pub mod polynomial;
pub mod reduction;
pub mod scalar;
pub mod spectrum;
pub mod synthesis;

pub use error::{Error, Result};
pub use num_rational::{BigRational, Rational64};
pub use polynomial::{Assignment, BooleanPoly, Convention, Monomial, SpinModel, SpinPoly, ENUMERATION_CAP};
pub use scalar::Scalar;

/// Default exact scalar.
pub type Rational = Rational64;

pub type BoolPoly = BooleanPoly<Rational>;
pub type SpinPolyQ = SpinPoly<Rational>;
pub type IsingModel = SpinModel<Rational>;
pub type BoolPolyF64 = BooleanPoly<f64>;
pub type SpinPolyF64 = SpinPoly<f64>;
pub type IsingModelF64 = SpinModel<f64>;
pub type Spectrum = spectrum::SpectrumReport<Rational>;

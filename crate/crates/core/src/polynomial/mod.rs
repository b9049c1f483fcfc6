//! Exact multilinear pseudo-Boolean polynomials and their spin (Ising) forms.

mod assignment;
mod boolean;
mod monomial;
mod spin;
mod text;

pub use assignment::{bit_of, ket_label, Assignment};
pub use boolean::{BooleanPoly, ENUMERATION_CAP};
pub use monomial::Monomial;
pub use spin::{bool_to_spin, spin_to_bool, Convention, SpinModel, SpinPoly};
pub use text::{parse_bool_poly, parse_spin_poly};

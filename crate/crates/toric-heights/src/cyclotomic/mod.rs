//! Exact arithmetic over cyclotomic fields: Laurent polynomials, torsion
//! points, resultants, Galois norms and Mahler measures.

pub mod field;
pub mod laurent;
pub mod mahler;
pub mod modp;
pub mod resultant;
pub mod sequence;
pub mod torsion;
pub mod upsilon;

pub use field::{Cyclotomic, CyclotomicField, cyclotomic_polynomial};
pub use laurent::LaurentPoly;
pub use resultant::{Axis, CycPoly, Elimination, galois_norm_poly, resultant_eliminate, torus_solution_count};
pub use sequence::{ExponentRule, SequenceKind, SequenceTerm, quasi_strict_sequence};
pub use torsion::{GaloisOrbit, TorsionPoint};
pub use upsilon::upsilon_test;

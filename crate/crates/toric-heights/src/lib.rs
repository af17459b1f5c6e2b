//! Convex-analytic height predictions for torsion-twisted intersections on
//! toric varieties, and the exact arithmetic needed to check them.
//!
//! The crate is `no_std` (it needs `alloc`). Layout:
//!
//! - [`lattice`]: exact lattice polytopes, volumes and mixed volumes.
//! - [`concave`]: piecewise-affine concave functions, Legendre duality,
//!   sup-convolution, integrals and the mixed integral operator, plus a grid
//!   carrier for numeric concave functions.
//! - [`cyclotomic`]: cyclotomic fields, Laurent polynomials, torsion points,
//!   resultants, Galois norms and Mahler measures.
//! - [`ronkin`]: Ronkin functions at every place and their Legendre duals.
//! - [`heights`]: adelic sums of mixed integrals (torus, hypersurface and
//!   limit heights) and degree predictions.
//! - [`verify`]: exact heights of twisted 0-cycles and the experiments that
//!   compare them with the predictions.
//!
//! Sign conventions: the Ronkin function is
//! `ρ_{f,v}(u) = −(average of log|f|_v over the fiber of val_v at u)` with
//! `val_v = (−log|t_1|_v, …)`, so it is concave, and the Legendre dual is
//! `f^∨(x) = inf_u (⟨u,x⟩ − f(u))`. The classical (convex) Ronkin function is
//! `−ρ(−u)`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod concave;
pub mod cyclotomic;
mod error;
pub mod heights;
mod hull;
pub mod lattice;
mod linalg;
pub mod num;
pub mod ronkin;
pub mod verify;

pub use error::{Error, Result};

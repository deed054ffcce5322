//! Finite-dimensional generalized fusion frames and their tensor products.
//!
//! A g-fusion system on `ℂⁿ` is a list of triples `(V_i, Λ_i, v_i)`: a
//! subspace, an operator into a local space `ℂ^{d_i}` and a positive weight.
//! This crate builds such systems, computes their analysis, synthesis and
//! frame operators, optimal bounds, canonical duals and pair operators, forms
//! tensor products of two systems, and checks numerically the identities
//! relating a product to its factors.
//!
//! ```
//! use gfusion::frame::{GFusionSystem, FrameKind, DEFAULT_CLASS_TOL};
//! use gfusion::linalg::real_matrix;
//! use gfusion::subspace::ClosedSubspace;
//!
//! // e1 with weight 2 and e2 with weight 1: S = diag(4, 1)
//! let sys = GFusionSystem::from_parts(2, [
//!     (ClosedSubspace::coordinate(2, &[0]), real_matrix(1, 2, &[1.0, 0.0]), 2.0),
//!     (ClosedSubspace::coordinate(2, &[1]), real_matrix(1, 2, &[0.0, 1.0]), 1.0),
//! ]).unwrap();
//! let bounds = sys.optimal_bounds(DEFAULT_CLASS_TOL);
//! assert!((bounds.lower - 1.0).abs() < 1e-12 && (bounds.upper - 4.0).abs() < 1e-12);
//! assert_eq!(bounds.kind, FrameKind::Frame);
//! ```
//!
//! The guide in `book/` walks through the concepts; its code listings are
//! compiled and run as doc-tests of this crate.

pub mod cli;
pub mod error;
pub mod frame;
pub mod io;
pub mod linalg;
pub mod random;
pub mod report;
pub mod subspace;
pub mod tensor;

pub use error::{Error, Result};
pub use frame::{
    pair_frame_operator, CoefficientFamily, FrameBounds, FrameKind, GFusionComponent, GFusionSystem,
};
pub use linalg::{ComplexMatrix, ComplexVector, Tolerance};
pub use subspace::ClosedSubspace;
pub use tensor::{tensor_system, verify_tensor_identities, ElementBudget, TensorSystem};

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/introduction.md")]
mod book_introduction {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/subspaces.md")]
mod book_subspaces {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/frames.md")]
mod book_frames {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/duals.md")]
mod book_duals {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/tensor.md")]
mod book_tensor {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/verification.md")]
mod book_verification {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
mod book_cli {}

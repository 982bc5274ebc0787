//! Numerical engine for hypersurfaces immersed in warped products
//! `I x_f M^n` and the gradient almost Yamabe soliton equation
//! `Hess h = (scal - lambda) g` with the height function `h` as potential.
//!
//! Layout:
//!
//! - [`expr`] / [`jet`]: expression language and exact order-2 jets.
//! - [`ambient`]: the warped product, its Levi-Civita connection and curvature.
//! - [`hypersurface`]: tangent frame, normal, shape operator, height and angle.
//! - [`intrinsic`]: Ricci and scalar curvature of the induced metric.
//! - [`soliton`]: Hessian of the height, soliton function, identity checks.
//! - [`rotational`]: constant-angle rotational hypersurfaces in `R x_f R^n`.
//! - [`catalogue`]: named example immersions.

// `!(x > y)` comparisons are deliberate: they reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod ambient;
pub mod catalogue;
pub mod error;
pub mod expr;
pub mod grid;
pub mod hypersurface;
pub mod intrinsic;
pub mod jet;
mod linalg;
#[cfg(feature = "oracles")]
pub mod oracles;
pub mod quadrature;
pub mod rotational;
pub mod soliton;

pub use ambient::{AmbientPoint, Fiber, Interval, SpaceFormReport, WarpedProduct};
pub use error::{DomainError, DomainReason, Error, ExprError, Result};
pub use expr::{eval_jet2, parse, Context, Expression, ScalarFn};
pub use grid::ChartGrid;
pub use hypersurface::{flip_orientation, CatalogueTag, ChartBox, Immersion, ShapeData};
pub use intrinsic::CurvaturePackage;
pub use jet::Jet2;
pub use soliton::{Classification, SolitonReport, Verdict};

//! Lyapunov coefficients of Hopf equilibria by projection onto the critical
//! eigenspace, with the Watt centrifugal governor as the worked model.
//!
//! The pieces, bottom-up:
//!
//! - [`jet`] and [`multilinear`]: order 2..=7 derivatives of any
//!   [`multilinear::SmoothModel`] through complex Taylor jets and polarization.
//! - [`linalg`]: small dense complex LU, the bordered solve for singular
//!   resolvents and the critical eigen-triple.
//! - [`watt`]: the governor field, its equilibrium, Jacobian, critical
//!   surface and closed-form multilinear forms.
//! - [`hopf`]: the `h_jk` chains, `G21`, `G32`, `G43` and `l1`, `l2`, `l3`.
//! - [`atlas`]: closed-form `l1`, `l2` on the critical surface, zero curves,
//!   the codimension-three point and its transversality.
//! - [`sim`]: Dormand-Prince integration, Poincare-section cycle detection and
//!   the coexistence search.

pub mod error;
pub mod jet;
pub mod linalg;
pub mod multilinear;
pub mod watt;
pub mod hopf;
pub mod atlas;
pub mod sim;
pub mod output;
pub mod verify;

pub use error::{Error, Result};
pub use hopf::{certify, certify_watt, HopfCertificate, HopfFrame};
pub use linalg::{ComplexMatrix, ComplexVec};
pub use multilinear::{FormSource, SmoothModel};
pub use watt::{Params, WattModel};

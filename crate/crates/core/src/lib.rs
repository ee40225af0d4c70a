//! A finite-dimensional laboratory for factorable weak operator-valued
//! frames: construction, classification, duals, dilation, similarity,
//! group- and group-like-generated frames, and perturbation stability.

pub mod error;
pub mod numkernel;
pub mod frame;
pub mod duality;
pub mod dilation;
pub mod group;
pub mod grouplike;
pub mod perturb;
pub mod io;
pub mod cli;

pub use error::{OvfError, Precondition, Result};
pub use frame::{FrameReport, OperatorOnb, WeakOvf};
pub use numkernel::{Op, Tolerance, C64};

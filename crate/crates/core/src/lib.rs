//! Structural, actuator, and grasp models for soft grippers built on
//! torsion-resistant strain-limiting layers (TR-SLLs) and handed shearing
//! auxetic (HSA) actuators.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the command
//! line front end, and report emission live in the `trsll` companion crate.
//!
//! Layout:
//! - [`material`], [`section`], [`model`], [`geometry`]: materials, thin
//!   sections, the space-frame model type, and the parametric SLL builders.
//! - [`frame`]: linear-elastic 3D frame solver (12-DOF Euler-Bernoulli beams).
//! - [`sll`]: torsional / bending stiffness extraction, triangle-count sweeps,
//!   and material calibration against a stiffness table.
//! - [`hsa`]: HSA force/torque grids, bilinear surfaces, c_tau curves.
//! - [`grasp`]: slip / twist / shear payload model and pull-test prediction.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod error;
pub mod frame;
pub mod geometry;
pub mod grasp;
pub mod hsa;
pub mod material;
pub mod math;
pub mod model;
pub mod section;
pub mod sll;
pub mod units;

pub use error::{Error, Result};
pub use frame::{assemble, linearity_check, solve, AssembledSystem, SolveResult};
pub use geometry::{build_flat_frame, build_trsll_frame, FlatSllDesign, TrsllDesign};
pub use material::{derive_shear_modulus, Material};
pub use model::{Constraint, Dof, DofMask, Element, FrameModel, NodalLoad};
pub use section::SectionProps;

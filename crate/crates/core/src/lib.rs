//! Link diagrams of divides.
//!
//! A divide is a system of immersed curves in the unit disk. This crate
//! validates divides exactly, draws the link diagram of the associated
//! divide link by reflecting the divide below the disk and joining the two
//! copies with vertical strings, and computes invariants of the result.

pub mod divide;
pub mod dsl;
pub mod calibration;
pub mod diagram;
pub mod generators;
pub mod geometry;
pub mod invariants;
pub mod render;

pub use divide::{Branch, BranchKind, Divide, DivideError};
pub use geometry::{Point2, Rational};

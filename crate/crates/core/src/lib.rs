//! Foothold reachability checks for legged robots.

// `!(x > 0.0)` style guards also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod domain;
pub mod bench;
pub mod error;
pub mod grid;
pub mod io;
pub mod leg;
pub mod planner;
pub mod pose;
pub mod reach;
pub mod robot;
pub mod scaling;
pub mod scene;
pub mod sdf;
pub mod surface;
pub mod swing;
pub mod terrain;

pub use error::{Error, Result};

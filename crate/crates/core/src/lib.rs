//! Exact construction and verification of extended formulations for
//! T-join and T-cut polyhedra: radial-cone lifts, Balas unions, dual
//! (Martin) extensions, flow-based T-join formulations, radial-cone
//! pipelines, and face factorizations, all over exact rational arithmetic
//! with replayable LP certificates.

pub mod dd;
pub mod error;
pub mod ext;
pub mod graph;
pub mod json;
pub mod lp;
pub mod num;
pub mod par;
pub mod poly;
pub mod report;
pub mod verify;

pub use error::{Error, Result};
pub use num::Rat;

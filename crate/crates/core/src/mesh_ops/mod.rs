//! Mesh infrastructure: audits, boundaries, orientation, hole closing,
//! smoothing and OBJ output.

pub mod audit;
pub mod boundary;
pub mod orient;
pub mod holes;
pub mod smooth;
pub mod obj;
pub mod stats;

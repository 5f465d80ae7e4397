//! Surfacing of dense 3D ribbon-stroke drawings into manifold triangle meshes.

pub mod cli;
pub mod config;
pub mod consolidate;
pub mod error;
pub mod eval;
pub mod geom;
pub mod io;
pub mod matcher;
pub mod mesher;
pub mod mesh;
pub mod mesh_ops;
pub mod pipeline;
pub mod scoring;
pub mod stroke;
pub mod synth;

pub use config::Config;
pub use error::{Error, Result};

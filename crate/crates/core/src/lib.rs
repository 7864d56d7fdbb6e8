//! Tangent-groupoid numerics for G-connections on flat tori: holonomy,
//! q-connections, groupoid convolution kernels and strict deformation
//! quantization checks at desk scale.

pub mod error;
pub mod field;
pub mod gauge;
pub mod graph;
pub mod grid;
pub mod groupoid;
pub mod holonomy;
pub mod qconn;
pub mod sdq;
pub mod stats;
pub mod surjectivity;
pub mod group;
pub mod linalg;
pub mod op_rep;
pub mod projlim;
pub mod torus;
pub mod xcli;

pub use error::{Error, Result};

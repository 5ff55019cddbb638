//! Bumping toolkit for weighted-homogeneous model domains in `C^3`.

pub mod assembler;
pub mod cli_io;
pub mod conebump;
pub mod exceptional;
pub mod frame;
pub mod fsbump;
pub mod jet;
pub mod levi;
pub mod pipeline;
pub mod polyalg;
pub mod sampling;
pub mod smooth;
pub mod verifier;

pub mod calibration;
pub mod cli;
pub mod decomp;
pub mod deltasym;
pub mod error;
pub mod forms;
pub mod lcrit;
pub mod numerics;
pub mod oscint;
pub mod voronoi;
pub mod windows;

pub use error::{Error, Result};

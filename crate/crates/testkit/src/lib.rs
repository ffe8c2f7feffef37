//! Reference computations for tests. Nothing here calls into the library
//! under test; inputs and outputs are plain arrays.

pub mod clip;
pub mod contour;
pub mod hidden;
pub mod rotation;

pub type Mat = [[f64; 3]; 3];

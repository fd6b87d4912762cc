pub mod channels;
pub mod coherent;
pub mod entropy;
pub mod error;
pub mod fock;
pub mod linalg;
pub mod majopt;
pub mod quadrature;
pub mod sampling;
pub mod su2;

pub use error::{Error, Result};
pub use su2::{DensityMatrix, PureState, SphereDirection, SpinLabel};

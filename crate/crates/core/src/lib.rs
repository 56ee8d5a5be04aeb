pub mod barneswall;
pub mod beyond;
pub mod cyclo;
pub mod error;
pub mod io;
pub mod linalg;
pub mod qmat;
pub mod stab;
pub mod synth;
pub mod zlattice;

pub use cyclo::{CycNum, Rational};
pub use error::{Error, Result};

pub mod cpmaps;
pub mod dilation;
pub mod error;
pub mod gruss;
pub mod json;
pub mod linalg;
pub mod norms;
pub mod orbit;
pub mod rng;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, C64};
pub use rng::SplitMix64;

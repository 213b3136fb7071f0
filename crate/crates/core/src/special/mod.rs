pub mod constants;
pub mod hermite;
pub mod quadrature;

pub use constants::*;
pub use hermite::*;
pub use quadrature::*;

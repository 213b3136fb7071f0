pub mod hermite;
pub mod integrals;
pub mod path;
pub mod rosenblatt;
pub mod volterra;

pub use hermite::*;
pub use integrals::*;
pub use path::*;
pub use rosenblatt::*;
pub use volterra::{partial1_kh, volterra_constant, volterra_kernel};

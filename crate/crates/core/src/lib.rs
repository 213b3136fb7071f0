pub mod error;
pub mod gaussian;
pub mod rng;
pub mod special;
pub mod spec;

pub use error::{Error, Result};
pub use rng::{derive_stream, RngStream};
pub use spec::HermiteSpec;
pub mod chaos;
pub mod process;
pub mod stats;
pub mod info;
pub mod io;
pub mod verify;

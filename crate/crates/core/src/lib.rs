//! The non-local quartic oscillator `H = √(−d²/dx²) + x⁴`: fourth-order Airy functions,
//! its spectrum, eigenfunctions and heat trace, and a brute-force discretization to check them.

pub mod airy4;
pub mod cli;
pub mod dd;
pub mod eigenfunctions;
pub mod error;
pub mod fresnel;
pub mod heat;
pub mod oracle;
pub mod quad;
pub mod scaled;
pub mod spectrum;
pub mod verify;

pub use error::{Error, Result};
pub use scaled::ScaledReal;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub mod cli;
pub mod cohomology;
pub mod error;
pub mod fp;
pub mod group;
pub mod magnus;
pub mod massey;
pub mod multsys;
pub mod pairing;
pub mod rep;
pub mod verifier;

pub use error::{Error, Result};

pub mod chebyshev;
pub mod error;
pub mod landau;
pub mod linalg;
pub mod mp;
pub mod orthopoly;
pub mod region;
pub mod special;
pub mod weight;

pub use error::{Error, Result};

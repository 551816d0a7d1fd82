pub mod error;
pub mod eulerbernoulli;
pub mod exactnum;
pub mod fgraded;
pub mod molien;
pub mod powersum;
pub mod series;
pub mod triangles;

pub use error::{Error, Result};

//! Khovanov homology of links, computed by scanning a diagram one crossing
//! at a time in Bar-Natan's category of dotted cobordisms and simplifying
//! with delooping and Gaussian elimination after every step.

pub mod cobcat;
pub mod complex;
pub mod corpus;
pub mod error;
pub mod homology;
pub mod oracle;
pub mod planar;
pub mod ring;
pub mod scan;
pub mod verify;

pub use error::{Error, Result};

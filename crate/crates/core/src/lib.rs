pub mod charpoly;
pub mod constructions;
pub mod conway;
pub mod error;
pub mod formula_one;
mod fp_poly;
pub mod harness;
pub mod json;
pub mod matrix;
pub mod newton;
pub mod rng;
pub mod sigma_modules;
pub mod smith;
pub mod witt_ring;

pub use error::{Error, Result};
pub use matrix::Matrix;
pub use newton::{CutoffBounds, NewtonPolygon};
pub use sigma_modules::DieudonneModule;
pub use witt_ring::{RingParams, Valuation, WittElem, WittRing};

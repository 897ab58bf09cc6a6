//! Exact rational polyhedra, regular complexes and integer piecewise affine
//! retractions of the unit cube.

pub mod arith;
pub mod collapse;
pub mod complex;
pub mod desingularize;
pub mod error;
pub mod geometry;
pub mod io;
pub mod linalg;
pub mod projectivity;
pub mod regularity;
pub mod synthesis;
pub mod zmap;

pub use arith::{HomogeneousVector, Point, Rational};
pub use complex::{RationalComplex, Simplex};
pub use error::{Error, Result};

//! Prime tensor ideals of pointwise finite-dimensional representations of
//! type-A quivers, computed exactly on finite windows.

pub mod barcode;
pub mod boolean;
pub mod field;
pub mod io;
pub mod linalg;
pub mod quiver;
pub mod report;
pub mod spectrum;
pub mod subset;
pub mod unbounded;
pub mod verify;
pub mod witness;

pub use barcode::{Barcode, BarcodeError, Interval};
pub use field::{Field, FieldKind, Gf, Gf2, Gf5, Rational};
pub use linalg::{LinalgError, Matrix};
pub use quiver::{Dir, IntervalSet, Morphism, QuiverError, QuiverWindow, Representation};
pub use subset::{Universe, VertexSet};

//! Background mesh, Q_p Gauss-Lobatto elements and DoF numbering.

mod basis;
mod dofmap;
mod mesh;

pub use basis::{ElementBasis, ShapeValues};
pub(crate) use dofmap::combine;
pub use dofmap::{evaluate_field, evaluate_in_cell, interpolate, DofMap, FieldSample};
pub use mesh::{Axis, BackgroundMesh, CellBox, CellSide, Face};

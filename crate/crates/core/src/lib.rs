//! Compact floor-plans for plane triangulations.
//!
//! The pipeline picks an orderly spanning tree with few leaves, draws it as
//! a visibility drawing, stretches nodes downward until every non-tree edge
//! is realized by horizontal visibility, and finally grows one-row branches
//! so that the drawing becomes a gapless partition of a rectangle into
//! I-, L- and T-shaped modules.
//!
//! ```
//! use floorplan_core::{instances, layout, validator};
//!
//! let g = instances::random_triangulation(40, 7, 10).unwrap();
//! let plan = layout::floorplan(&g).unwrap();
//! assert!(plan.height() <= 39);
//! assert!(validator::validate(&plan, &g, None).pass());
//! ```

#![no_std]

extern crate alloc;

pub mod instances;
pub mod layout;
pub mod ost;
pub mod plane_graph;
pub mod validator;

#[cfg(feature = "oracles")]
pub mod oracle;

pub use plane_graph::{GraphError, Node, PlaneTriangulation};

//! Text formats: the `.cx` document format and Graphviz export.

pub mod cx;
pub mod dot;

pub use cx::{parse_cx, write_cx, CxDocument, MapEntry, ParseError};
pub use dot::{complex_to_dot, correspondence_to_dot, hasse_to_dot, lattice_to_dot, map_to_dot};

//! Exact construction of the cyclotomic SRG(4096,234,2,14), its 9-class
//! translation scheme over GF(4096), and a checked replay of the argument
//! that the graph has no coclique meeting the ratio bound 352.
//!
//! Arithmetic is exact throughout: integers for character sums and
//! intersection numbers, rationals for idempotents and parametric families.

pub mod cache;
pub mod certify;
pub mod delsarte;
pub mod exec;
pub mod ffield;
pub mod io;
pub mod projgeom;
pub mod rational;
pub mod scheme;
pub mod search;

//! Cyclic generalised voltage graph calculus: dart multigraphs, cyclic
//! covers, the 25 cubic quotient templates, enumeration, and the desk-scale
//! vertex-transitivity census.

pub mod analysis;
pub mod census;
pub mod dartgraph;
pub mod enumeration;
pub mod error;
pub mod families;
pub mod formats;
pub mod iso;
pub mod named;
pub mod testgen;
pub mod voltage;

pub use error::{CcvError, Result};

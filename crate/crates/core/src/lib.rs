pub mod design;
pub mod equilibrium;
pub mod error;
pub mod generators;
pub mod graph;
pub mod io;
pub mod linalg;
pub mod poa;

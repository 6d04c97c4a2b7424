//! Total dual integrality for semidefinite programs at desk scale: lifted SDP
//! formulations of stable-set and cut problems, a small dense SDP solver,
//! integrality certificates and TDI audits.

pub mod corpus;
pub mod error;
pub mod exact;
pub mod formulations;
pub mod graph;
pub mod integrality;
pub mod io;
pub mod oracles;
pub mod sdp;
pub mod symmat;
pub mod tdi;

pub use error::{Error, Result};
pub use graph::{Bipartition, Graph, SubsetMask, WeightVec};
pub use symmat::SymMatrix;

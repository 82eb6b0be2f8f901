//! Alternative polarization of Borel fixed ideals, its explicit minimal free
//! resolution, and the machinery that certifies it.

pub mod borel;
pub mod complex;
pub mod corpus;
pub mod error;
pub mod homology;
pub mod ideal;
pub mod io;
pub mod lattice;
pub mod linalg;
pub mod monomial;
pub mod morse;
pub mod polarize;
pub mod poset;
pub mod resolution;

pub use error::{Error, Result};
pub use ideal::MonomialIdeal;
pub use monomial::{Monomial, MultiDegree, RingSpec, Var};

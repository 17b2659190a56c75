//! Unequal-parameter Hecke algebras of Coxeter groups of rank at most 3:
//! Kazhdan–Lusztig bases, structure constants, the a-function, and the cell
//! decomposition of hyperbolic rank-3 groups.

pub mod afun;
pub mod cells;
pub mod coxeter;
pub mod error;
pub mod hecke;
pub mod laurent;
pub mod params;
pub mod quotient;

pub use coxeter::{Bond, CoxeterSystem, ElemId, Element, GenSet, Side, WeightFunction};
pub use error::{Error, Result};
pub use hecke::{HeckeAlgebra, HeckeElt, KLTable};
pub use laurent::{Degree, Int, LaurentPoly};

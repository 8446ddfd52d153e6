//! Exact computation in locally Garside categories presented by finite
//! germs: axiom verification, greedy normal forms, lcm/gcd lattices, Garside
//! structure synthesis, Coxeter and ribbon instantiation, conjugacy
//! categories and decomposition posets.

pub mod category;
pub mod conjugacy;
pub mod coxeter;
pub mod decomposition;
pub mod garside;
pub mod germ;
pub mod germfile;
pub mod ribbon;

pub use category::{Morphism, RawPath};
pub use germ::{ElemId, GermTable, ObjectId};
pub use germfile::GermFile;

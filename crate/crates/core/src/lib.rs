//! Exact Koszul homology, minimal resolutions and Poincaré series of quotients of
//! polynomial rings.

pub mod conditions;
pub mod error;
pub mod corpus;
pub mod field;
pub mod groebner;
pub mod koszul;
pub mod linalg;
pub mod parse;
pub mod poly;
pub mod quotient;
pub mod report;
pub mod resolution;
pub mod series;
pub mod stretched;

pub use error::{Error, Result};
pub use field::{Field, FieldElement, Rational};
pub use groebner::{buchberger, GroebnerBasis};
pub use koszul::{Bidegree, HomologyAlgebra, Koszul, KoszulElement};
pub use parse::{parse_ring, RingDefinition};
pub use poly::{Monomial, MonomialOrder, Polynomial};
pub use quotient::{QuotientRing, RElem};

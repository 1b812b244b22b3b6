//! Combinatorics of right-angled hyperbolic polytopes dual to the Gosset
//! polytopes, the manifolds they cover, and algebraic fibrations of those
//! manifolds certified through ascending and descending links.

pub mod complex;
pub mod error;
pub mod fibration;
pub mod gosset;
pub mod manifold;
pub mod octonion;
pub mod par;
pub mod reproduce;
pub mod vset;

pub use error::{Error, Result};

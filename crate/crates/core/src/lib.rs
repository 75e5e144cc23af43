//! Combinatorial decision procedures for the simplicity of C*-algebras of
//! finite labelled spaces and of one-sided subshifts.

pub mod error;
pub mod gpd;
pub mod invsemi;
pub mod lspace;
pub mod paction;
pub mod setalg;
pub mod shift;
pub mod simp;
pub mod tight;

pub use error::{Error, Result};

//! Cotorsion pairs, hearts and their mutation over bound quiver algebras,
//! computed with exact linear algebra over a prime field.

pub mod algebra;
pub mod approx;
pub mod commands;
pub mod context;
pub mod cotorsion;
pub mod diamond;
pub mod endo;
pub mod error;
pub mod fixtures;
pub mod heart;
pub mod mutation;
pub mod homology;
pub mod linalg;
pub mod morita;
pub mod phi;
pub mod poly;
pub mod problem;
pub mod quotient;
pub mod rep;
pub mod report;

pub use error::{Error, Result};

//! Numerical evidence for Baker omitted values of entire maps
//! `f(z) = c·E^k(z) + P(z)` and the dynamics of the related families
//! `f_λ`, `F_λ`, `f_{2,β}` and `h_λ`.

pub mod bov;
pub mod cli;
pub mod dynamics;
pub mod error;
pub mod geom;
pub mod lambert;
pub mod map;
pub mod newton;
pub mod parse;
pub mod poly;
pub mod report;
pub mod safe;
pub mod singular;
pub mod suites;

pub use error::{Error, Result};
pub use map::{EntireMap, MapSpec, ReferenceExp};
pub use poly::Poly;
pub use safe::SafeValue;

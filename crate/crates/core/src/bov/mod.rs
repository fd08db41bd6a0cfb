//! Window-relative evidence for the Baker omitted value: component censuses
//! of sub- and superlevel sets of `|f|`, growth along unbounded curves,
//! pointwise lower bounds, polynomial injectivity, and preimage counts.

pub mod bounds;
pub mod census;
pub mod curve;
pub mod evidence;
pub mod injectivity;
pub mod mask;
pub mod preimage;

pub use bounds::{case_bound_check, sample_case_points, BoundCase, CaseBoundOutcome};
pub use census::{component_census, Component, ComponentCensus, FrameContact, Polarity};
pub use curve::{curve_growth, CurveGrowth, CurveKind, CurveSpec};
pub use evidence::{bov_evidence, BovEvidence, WindowCensus};
pub use injectivity::{injectivity_falsifier, InjectivityResult, Sector, COLLIDE_TOL};
pub use mask::{superlevel_mask, GridMask};
pub use preimage::{preimage_count, preimages, PreimageCensus};

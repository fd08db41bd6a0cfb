//! Orbits, basin rasters, and the checks for the `f_λ`, `h_λ`, `F_λ` and
//! `f_{2,β}` families.

pub mod example41;
pub mod example42;
pub mod example43;
pub mod grid;
pub mod orbit;

pub use example41::example41_check;
pub use example42::{
    h_real_line_checks, semiconjugacy_residual, translation_residuals, verdict_agreement,
    VerdictAgreement,
};
pub use example43::{wandering_tracker, WanderingTrace};
pub use grid::{
    classify_grid, decode_label, encode_index, GridClassification, LABEL_ESCAPED, LABEL_UNDECIDED,
};
pub use orbit::{
    fixed_point_multiplier, iterate, OrbitResult, Verdict, CONV_TOL, DEFAULT_MAX_ITER,
    ESCAPE_RADIUS,
};

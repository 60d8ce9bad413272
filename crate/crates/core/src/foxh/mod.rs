//! Fox H-functions by Mellin–Barnes contour quadrature.
//!
//! An H-function is described by [`FoxHParams`]: one [`VariableBlock`] of
//! gamma factors per contour variable, optional [`JointFactor`]s coupling the
//! variables through `Σ w_i s_i`, and positive arguments `z_i`. The value is
//!
//! ```text
//! (2πi)^{-N} ∫_{c_1 - i∞}^{c_1 + i∞} … Π_i K_i(s_i) Π_j J_j(s) Π_i z_i^{-s_i} ds
//! ```
//!
//! computed on straight vertical lines chosen by [`validate_contour`].

mod contour;
mod eval;
mod params;
mod residue;

pub use contour::{validate_contour, validate_contour_at, validate_contour_batch, ContourOptions, ContourSpec};
pub use eval::{eval_foxh, eval_foxh_1v, eval_foxh_batch, eval_foxh_nv, EvalOptions, Evaluation};
pub use params::{FoxHParams, GammaFactor, JointFactor, KernelTerm, Location, Side, VariableBlock};
pub use residue::{dominant_poles, leading_residue, pole_expansion, DominantPole};

use thiserror::Error;

/// Default cap on the number of contour variables evaluated by quadrature.
pub const DEFAULT_MAX_DIMENSION: usize = 3;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FoxHError {
    #[error("malformed parameters: {0}")]
    Malformed(String),
    #[error("arguments must be positive and finite, got {0}")]
    NonPositiveArgument(f64),
    #[error("no valid contour for variable {variable}: {reason}")]
    NoValidContour { variable: usize, reason: String },
    #[error("quadrature did not converge: value {value:e}, error estimate {error:e}")]
    ConvergenceError { value: f64, error: f64 },
    #[error("{dimension} contour variables exceed the quadrature cap of {max}")]
    DimensionError { dimension: usize, max: usize },
    #[error("degenerate pole in variable {variable}: {reason}")]
    DegeneratePole { variable: usize, reason: String },
}

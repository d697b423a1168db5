//! Per-subject maximum-likelihood estimation.
//!
//! The objective is the negative log-likelihood of the observed choices
//! plus an L1 penalty on the enabled attraction weights. Bounds are enforced
//! by returning a large finite penalty, so the simplex never needs to know
//! about them. Each fit starts from the best point of a small fixed grid.

mod fit;
mod grid;
mod objective;
mod simplex;

pub use fit::{cross_validate, fit_subject, fit_trials, training_set, FitOptions, FitResult};
pub use grid::{
    exhaustive_search, grid_axes, grid_search, grid_search_init, ALPHA_GRID, DELTA_GRID,
    GAMMA_GRID, LAMBDA_GRID, NONNEG_C_GRID, PHI_GRID, SCALE_GRID, SIGNED_C_GRID,
};
pub use objective::{regularized_nll, ObjectiveSpec, ParamLayout, PROB_FLOOR};
pub use simplex::{initial_step, nelder_mead_minimize, Minimum, SimplexConfig};

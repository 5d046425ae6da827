//! The three data-generating processes: stochastic volatility, SV-DSGE and
//! the seasonal-break generator. Each emits (states, observations) pairs for
//! training and evaluation and is deterministic given an [`RngStream`].
//!
//! [`RngStream`]: crate::core::RngStream

mod dsge;
mod seasonal;
mod sv;

pub use dsge::{
    build_structural_system, dsge_draw_prior, dsge_draw_structural, dsge_draw_sv_process,
    dsge_observe, dsge_presimulate, dsge_simulate, log_prior_structural, log_prior_sv_process,
    solve_structural, CacheEntry, DsgeParams, DsgeSimOutput, DsgeSolutionCache, StructuralParams,
    SvProcessParams, DSGE_OBS_NAMES, DSGE_SHOCK_NAMES, DSGE_STATE_NAMES,
};
pub use seasonal::{seasonal_generate_batch, BreakTrigger, SeasonalConfig, SeasonalSample};
pub use sv::{sv_draw_prior, sv_simulate, SvParams, SV_PRIOR_STD};

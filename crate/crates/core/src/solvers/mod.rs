//! Closed-form per-slot solvers and distribution-aware reference optimizers.

mod baselines;
mod projection;
mod waterfill;

pub use baselines::{
    cdi_optimal_policy, empirical_policy, ergodic_constant_covariance, AscentOptions, CdiPolicy,
    ConstantPolicy, EmpiricalMode, EmpiricalPolicy, CDI_MAX_BISECTIONS, CDI_MAX_EXPANSIONS,
    CDI_POWER_TOL,
};
pub use projection::{psd_cap_project, psd_cap_project_full, CapProjection};
pub use waterfill::{penalized_objective, waterfill_penalized, WaterfillResult};

//! Pure-frequency witnesses and solver experiments on the dependence of
//! the flow on ε², including complex ε.

mod continuity;
mod gap;
mod holomorphy;
mod horizon;
mod illposed;
mod inflation;
mod uniform;

pub use continuity::{
    continuity_experiment, gronwall_rate, large_epsilon_limit, solve_n1, ContinuityRow, ContinuityTable,
    EpsilonExperiment, Horizon,
};
pub use gap::{symbol_gap, symbol_gap_bound, symbol_gap_direct};
pub use holomorphy::{holomorphy_order, holomorphy_residual, in_omega, HolomorphyOrder};
pub use horizon::{infinite_horizon_discontinuity, taylor_constant, HorizonCase, HorizonReport, HorizonRow};
pub use illposed::{
    illposedness_threshold, illposedness_witness, pure_frequency_residual, witness_k_n, IllposednessWitness,
};
pub use inflation::{inflation_solver_check, norm_inflation_table, InflationRow, InflationTable};
pub use uniform::{uniform_failure_solver_check, uniform_failure_witness, UniformFailureRow};

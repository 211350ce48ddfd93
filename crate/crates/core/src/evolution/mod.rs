//! Velocity assembly for the graph and contour systems, time stepping and runs.

mod branch;
mod run;
mod stepping;
mod velocity;

pub use branch::{
    extract_charts, sqg_branch_velocity, Ball, BranchVelocity, Chart, ChartVelocity, Charts,
};
pub use run::{
    diagnose, run_simulation, simulate, DiagnosticSettings, Record, RunSettings, RunStatus,
    Series, Snapshot,
};
pub use stepping::{
    rk4, rk4_with_first_stage, spectral_filter, step, velocity, State, StepSettings, DEFAULT_CFL,
    FILTER_THRESHOLD,
};
pub use velocity::{
    muskat_contour_velocity, muskat_graph_velocity, muskat_velocity, sqg_contour_velocity,
    sqg_curve_velocity, sqg_graph_velocity, sqg_multiphase_velocity,
};

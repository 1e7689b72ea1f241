//! Independent brute-force checks of the closed forms.

pub mod battery;
pub mod finite_diff;
pub mod fixed_point;
pub mod grid_ri;
pub mod grid_search;
pub mod monte_carlo;
pub mod report;

pub use battery::{run_battery, BatteryConfig, Scope};
pub use finite_diff::{finite_difference, try_finite_difference};
pub use fixed_point::{best_response, best_response_fixed_points};
pub use grid_ri::{solve_grid_ri, GridRIProblem, GridRISolution};
pub use monte_carlo::monte_carlo_moments;
pub use report::{OracleReport, TolKind};

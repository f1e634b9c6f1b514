//! Convergence benchmark: transport along an SE(3) (or SO(3)) geodesic by
//! integrating the reduced transport equation with RK2 or RK4, or by the pole
//! ladder, compared against a fine RK4 reference.

pub mod config;
pub mod csv_io;
pub mod error;
pub mod fit;
pub mod run;

pub use config::{geometric_grid, BenchConfig, GroupChoice, SchemeTag};
pub use csv_io::{read_csv, write_csv};
pub use error::{BenchError, Result};
pub use fit::fit_slope;
pub use run::{non_monotone_points, run_convergence, ConvergenceRecord, TransportProblem};

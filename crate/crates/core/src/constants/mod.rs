//! Discrete Hardy and Poincaré constants, the chained estimate through the
//! completed domain, the localized criterion and refinement tables.

mod chain;
mod estimate;
mod localized;
mod operator;
mod refine;
mod solver;

pub use chain::{box_cutoff, hardy_via_bullet, test_battery, BulletChainReport, ChainOptions, ChainTerm};
pub use estimate::{hardy_constant, poincare_constant, HardyReport, Method, PoincareReport};
pub use localized::{localized_from_spec, localized_hardy, LocalizedReport, RegionChecks};
pub use operator::{pcg, CgOutcome, Csr, Ic0, RayleighProblem, NOT_FREE};
pub use refine::{refine_and_compare, richardson, ConvergenceRow, ConvergenceTable, Task};
pub use solver::{ascent, canonical, inverse_iteration, Maximizer, SolverOptions};

//! Variable fixing for 0/1 set-covering problems.
//!
//! The LP relaxation `min { w'z : Az >= e, z >= 0 }` is solved through its
//! dual with a primal simplex started at `u = 0`. Every iterate of that solve
//! is a dual-feasible point, and each one certifies `z_j = 0` for the columns
//! whose reduced cost exceeds the gap between an upper bound and the iterate's
//! dual value. Using only the final iterate is reduced-cost fixing (RCF);
//! using the whole path is dual-path fixing (DPF); solving one LP per column
//! for the best certificate is strong fixing (SF). Dominated-row elimination
//! (DRE) then cleans up the rows that fixing makes redundant.

pub mod dre;
pub mod error;
pub mod exec;
pub mod fixing;
pub mod harness;
pub mod instance;
pub mod oracle;
pub mod orlib;
pub mod pipeline;
pub mod simplex;
pub mod sls;
pub mod strong;
pub mod tiny;

pub use error::{Error, Result};
pub use exec::Execution;
pub use fixing::{FixSet, Strategy};
pub use instance::{restrict, ReducedInstance, ScpInstance};
pub use pipeline::{run_procedure, Procedure, ProcedureResult};
pub use simplex::{DualIterate, Pricing, SolveResult, SolveStatus, SolverConfig};

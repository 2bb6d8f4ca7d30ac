//! Strong fixing.
//!
//! For each column `j` the LP
//!
//! ```text
//! zj = w_j + max { u'(e - A_j) : u'A <= w', u >= 0 }
//! ```
//!
//! equals the cheapest fractional cover with `z_j >= 1`. When `zj` exceeds
//! the upper bound, no cover within the bound uses `j`. All these LPs share
//! one feasible region, so each solve restarts from the previous basis, and
//! each optimal `u` is also a dual-feasible point usable for reduced-cost
//! fixing on every other column.

use crate::error::{Error, Result};
use crate::exec::{map_range, Execution};
use crate::fixing::{fix_from_dual, FixSet, Strategy, FIX_EPS};
use crate::instance::ScpInstance;
use crate::simplex::{objective_tol, solve_with_objective, Basis, SolveResult, SolveStatus, SolverConfig};

#[derive(Debug, Clone)]
pub struct SfConfig {
    pub solver: SolverConfig,
    /// Screen every column with each LP's optimal dual as well.
    pub cross_certificates: bool,
    /// Parallel mode solves every LP from the slack basis and merges the
    /// results in column order.
    pub exec: Execution,
}

impl Default for SfConfig {
    fn default() -> Self {
        SfConfig {
            solver: SolverConfig::default(),
            cross_certificates: true,
            exec: Execution::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SfValue {
    pub col: usize,
    pub value: f64,
    pub exceeded: bool,
}

#[derive(Debug, Clone, Default)]
pub struct SfReport {
    pub fix_set: FixSet,
    /// One entry per column whose LP was evaluated, ascending.
    pub per_column: Vec<SfValue>,
    pub lp_solves: usize,
    /// Columns already fixed by a cross-certificate when their turn came.
    pub skipped: Vec<usize>,
    /// Total simplex pivots across all LPs.
    pub pivots: usize,
}

/// Columns per parallel work unit.
const SF_CHUNK: usize = 32;

fn objective_for(inst: &ScpInstance, col: usize) -> Vec<f64> {
    let mut obj = vec![1.0; inst.n_rows()];
    for &i in inst.col(col) {
        obj[i] = 0.0;
    }
    obj
}

fn solve_column(inst: &ScpInstance, col: usize, cfg: &SolverConfig, warm: Option<&Basis>) -> Result<SolveResult> {
    let res = solve_with_objective(inst, &objective_for(inst, col), cfg, warm, None)?;
    if res.status != SolveStatus::Optimal {
        return Err(Error::NotOptimal);
    }
    Ok(res)
}

/// Folds one column's LP into the report, in column order.
fn absorb(inst: &ScpInstance, ub: f64, cross: bool, col: usize, res: &SolveResult, rep: &mut SfReport) -> Result<()> {
    let it = &res.final_iterate;
    // the LP's optimal u is dual feasible, so its value bounds the optimum
    if ub < it.zeta - objective_tol(it.zeta) {
        return Err(Error::InvalidBound { ub, zeta: it.zeta });
    }
    let value = inst.cost(col) + res.objective;
    let exceeded = value > ub + FIX_EPS;
    rep.lp_solves += 1;
    rep.pivots += res.iterations;
    rep.per_column.push(SfValue { col, value, exceeded });
    if exceeded {
        rep.fix_set.fix_zero(col, Strategy::Sf, col);
    }
    if cross {
        let mut it = it.clone();
        it.iter_index = col;
        fix_from_dual(inst, &it, ub, Strategy::SfCross, &mut rep.fix_set)?;
    }
    Ok(())
}

pub fn strong_fix(inst: &ScpInstance, ub: f64, cfg: &SfConfig) -> Result<SfReport> {
    let n = inst.n_cols();
    let mut rep = SfReport::default();
    if cfg.exec.is_parallel() {
        // fixed-size chunks, warm-started inside each, so the result does not
        // depend on the thread count
        let chunks = map_range(n.div_ceil(SF_CHUNK), cfg.exec, |c| {
            let mut basis: Option<Basis> = None;
            (c * SF_CHUNK..((c + 1) * SF_CHUNK).min(n))
                .map(|j| {
                    let res = solve_column(inst, j, &cfg.solver, basis.as_ref())?;
                    basis = Some(res.basis.clone());
                    Ok(res)
                })
                .collect::<Vec<Result<SolveResult>>>()
        });
        for (j, res) in chunks.into_iter().flatten().enumerate() {
            if rep.fix_set.is_fixed(j) {
                rep.skipped.push(j);
                continue;
            }
            absorb(inst, ub, cfg.cross_certificates, j, &res?, &mut rep)?;
        }
    } else {
        let mut basis: Option<Basis> = None;
        for j in 0..n {
            if rep.fix_set.is_fixed(j) {
                rep.skipped.push(j);
                continue;
            }
            let res = solve_column(inst, j, &cfg.solver, basis.as_ref())?;
            absorb(inst, ub, cfg.cross_certificates, j, &res, &mut rep)?;
            basis = Some(res.basis);
        }
    }
    log::debug!(
        "strong fixing: {} LPs, {} pivots, {} fixed",
        rep.lp_solves,
        rep.pivots,
        rep.fix_set.len()
    );
    Ok(rep)
}

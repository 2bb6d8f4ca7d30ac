//! The five reduction procedures and the suite runner.
//!
//! | procedure     | fixing                         | rounds                  |
//! |---------------|--------------------------------|-------------------------|
//! | `RCF+DRE`     | optimal dual of one LP         | one                     |
//! | `DPF+DRE`     | every iterate of one LP        | one                     |
//! | `I(RCF+DRE)`  | as `RCF+DRE`                   | until a round fixes nothing |
//! | `I(DPF+DRE)`  | as `DPF+DRE`                   | until a round fixes nothing |
//! | `SF+DRE`      | strong fixing                  | one                     |
//!
//! Row elimination runs after a round only when the round fixed something.
//! Each round works on the current reduced instance with the bound net of the
//! cost already committed to columns fixed at one.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use crate::dre::dre_fixpoint_from;
use crate::error::{Error, Result};
use crate::exec::{map_slice, Execution};
use crate::fixing::{rcf, DpfListener, FixSet, TracePoint};
use crate::instance::{ReducedInstance, ScpInstance};
use crate::orlib::UbTable;
use crate::simplex::{solve, DualIterate, SolveStatus, SolverConfig};
use crate::strong::{strong_fix, SfConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Procedure {
    RcfDre,
    DpfDre,
    IterRcfDre,
    IterDpfDre,
    SfDre,
}

impl Procedure {
    pub const ALL: [Procedure; 5] = [
        Procedure::RcfDre,
        Procedure::DpfDre,
        Procedure::IterRcfDre,
        Procedure::IterDpfDre,
        Procedure::SfDre,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Procedure::RcfDre => "RCF+DRE",
            Procedure::DpfDre => "DPF+DRE",
            Procedure::IterRcfDre => "I(RCF+DRE)",
            Procedure::IterDpfDre => "I(DPF+DRE)",
            Procedure::SfDre => "SF+DRE",
        }
    }

    /// Command-line spelling.
    pub fn short(self) -> &'static str {
        match self {
            Procedure::RcfDre => "rcf",
            Procedure::DpfDre => "dpf",
            Procedure::IterRcfDre => "irc",
            Procedure::IterDpfDre => "idpf",
            Procedure::SfDre => "sf",
        }
    }

    pub fn is_iterative(self) -> bool {
        matches!(self, Procedure::IterRcfDre | Procedure::IterDpfDre)
    }

    fn uses_path(self) -> bool {
        matches!(self, Procedure::DpfDre | Procedure::IterDpfDre)
    }
}

impl fmt::Display for Procedure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Procedure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Procedure::ALL
            .into_iter()
            .find(|p| p.short().eq_ignore_ascii_case(s) || p.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidParams(format!("unknown procedure `{s}`")))
    }
}

#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub solver: SolverConfig,
    /// Passed to strong fixing.
    pub cross_certificates: bool,
    /// Execution mode inside one procedure (strong fixing, row dominance).
    pub exec: Execution,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            solver: SolverConfig::default(),
            cross_certificates: true,
            exec: Execution::default(),
        }
    }
}

/// One simplex iteration of a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    /// 1-based round.
    pub outer: usize,
    pub iteration: usize,
    /// Dual value on the round's reduced instance.
    pub zeta: f64,
    /// Columns fixed so far in the whole run, by any rule.
    pub fixed: usize,
    /// Share of the round's initial dual gap still open.
    pub gap_pct: f64,
    /// Cost committed to columns fixed at one before this round.
    pub offset: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RoundStats {
    pub outer: usize,
    pub n_start: usize,
    pub m_start: usize,
    /// Bound used for fixing, net of the offset.
    pub ub: f64,
    /// LP value reached in this round (strong fixing: the first LP's value).
    pub lp_value: f64,
    pub pivots: usize,
    pub fixed_by_lp: usize,
    pub fixed_by_dre: usize,
    pub rows_dominated: usize,
    pub fixed_empty: usize,
}

#[derive(Debug, Clone)]
pub struct ProcedureResult {
    pub procedure: Procedure,
    pub n0: usize,
    pub m0: usize,
    pub reduced: ReducedInstance,
    pub outer_iterations: usize,
    pub trace: Vec<TraceRow>,
    pub rounds: Vec<RoundStats>,
    pub wall_time: Duration,
}

impl ProcedureResult {
    pub fn n_final(&self) -> usize {
        self.reduced.instance().n_cols()
    }

    pub fn m_final(&self) -> usize {
        self.reduced.instance().n_rows()
    }

    pub fn fixed0(&self) -> usize {
        self.reduced.fixed_to_zero().len()
    }

    pub fn fixed1(&self) -> usize {
        self.reduced.fixed_to_one().len()
    }

    /// Percentage of the original columns no longer free.
    pub fn pct_reduction(&self) -> f64 {
        if self.n0 == 0 {
            0.0
        } else {
            100.0 * (self.n0 - self.n_final()) as f64 / self.n0 as f64
        }
    }

    /// Columns fixed by the LP-based rule (RCF, DPF or SF) over all rounds.
    pub fn fixed_by_lp(&self) -> usize {
        self.rounds.iter().map(|r| r.fixed_by_lp).sum()
    }
}

struct Round {
    fixes: FixSet,
    points: Vec<TracePoint>,
    lp_value: f64,
    pivots: usize,
}

fn lp_round(inst: &ScpInstance, ub: f64, path: bool, cfg: &SolverConfig) -> Result<Round> {
    if path {
        let mut l = DpfListener::new(inst, ub);
        let res = solve(inst, cfg, &mut l)?;
        if res.status != SolveStatus::Optimal {
            return Err(Error::NotOptimal);
        }
        let (fixes, points) = l.into_parts();
        return Ok(Round {
            fixes,
            points,
            lp_value: res.final_iterate.zeta,
            pivots: res.iterations,
        });
    }
    let mut points = Vec::new();
    let res = solve(inst, cfg, &mut |it: DualIterate| {
        points.push(TracePoint {
            iteration: it.iter_index,
            zeta: it.zeta,
            fixed: 0,
        });
        Ok(())
    })?;
    let fixes = rcf(inst, &res, ub)?;
    if let Some(last) = points.last_mut() {
        last.fixed = fixes.len();
    }
    Ok(Round {
        fixes,
        points,
        lp_value: res.final_iterate.zeta,
        pivots: res.iterations,
    })
}

fn sf_round(inst: &ScpInstance, ub: f64, cfg: &PipelineConfig) -> Result<Round> {
    let sf = SfConfig {
        solver: cfg.solver.clone(),
        cross_certificates: cfg.cross_certificates,
        exec: cfg.exec,
    };
    let rep = strong_fix(inst, ub, &sf)?;
    Ok(Round {
        // every cover uses some column, so the smallest value bounds the optimum
        lp_value: rep.per_column.iter().map(|v| v.value).reduce(f64::min).unwrap_or(0.0),
        pivots: rep.pivots,
        fixes: rep.fix_set,
        points: Vec::new(),
    })
}

fn gap_pct(zeta: f64, first: f64, last: f64) -> f64 {
    let span = last - first;
    if span <= 0.0 {
        0.0
    } else {
        (100.0 * (last - zeta) / span).clamp(0.0, 100.0)
    }
}

/// Runs one procedure on `inst` with upper bound `ub`.
pub fn run_procedure(inst: &ScpInstance, ub: f64, procedure: Procedure, cfg: &PipelineConfig) -> Result<ProcedureResult> {
    let started = Instant::now();
    let mut cur = ReducedInstance::identity(inst.clone());
    let mut trace = Vec::new();
    let mut rounds = Vec::new();
    loop {
        let outer = rounds.len() + 1;
        let local_ub = ub - cur.cost_offset();
        let sub = cur.instance();
        let round = if procedure == Procedure::SfDre {
            sf_round(sub, local_ub, cfg)?
        } else {
            lp_round(sub, local_ub, procedure.uses_path(), &cfg.solver)?
        };
        let base = cur.n_fixed();
        let (first, last) = match (round.points.first(), round.points.last()) {
            (Some(a), Some(b)) => (a.zeta, b.zeta),
            _ => (0.0, 0.0),
        };
        trace.extend(round.points.iter().map(|p| TraceRow {
            outer,
            iteration: p.iteration,
            zeta: p.zeta,
            fixed: base + p.fixed,
            gap_pct: gap_pct(p.zeta, first, last),
            offset: cur.cost_offset(),
        }));
        let mut stats = RoundStats {
            outer,
            n_start: sub.n_cols(),
            m_start: sub.n_rows(),
            ub: local_ub,
            lp_value: round.lp_value,
            pivots: round.pivots,
            fixed_by_lp: round.fixes.len(),
            ..RoundStats::default()
        };
        if !round.fixes.is_empty() {
            let fixed = cur.restrict(&round.fixes.zero_list(), &round.fixes.one_list(), &[])?;
            let (after_dre, dre) = dre_fixpoint_from(fixed, cfg.exec)?;
            let cleaned = after_dre.drop_empty_columns()?;
            stats.fixed_by_dre = dre.cols_fixed;
            stats.rows_dominated = dre.rows_dominated;
            stats.fixed_empty = cleaned.n_fixed() - after_dre.n_fixed();
            cur = cleaned;
        }
        log::debug!(
            "{procedure} round {outer}: n {} -> {}, m {} -> {}",
            stats.n_start,
            cur.instance().n_cols(),
            stats.m_start,
            cur.instance().n_rows()
        );
        let done = !procedure.is_iterative() || round.fixes.is_empty() || cur.instance().n_rows() == 0;
        rounds.push(stats);
        if done {
            break;
        }
    }
    let reduced = cur.drop_empty_columns()?;
    Ok(ProcedureResult {
        procedure,
        n0: inst.n_cols(),
        m0: inst.n_rows(),
        reduced,
        outer_iterations: rounds.len(),
        trace,
        rounds,
        wall_time: started.elapsed(),
    })
}

#[derive(Debug, Clone)]
pub struct NamedInstance {
    pub name: String,
    pub instance: ScpInstance,
}

/// Groups instance names into benchmark sets: `scp41` and `scp410` belong
/// to set `4`, `scpa3` to `a`, `scpnre1` to `nre`, and `sls500_3` to
/// `sls500`.
pub fn set_of(name: &str) -> String {
    if let Some((head, _)) = name.rsplit_once('_') {
        return head.to_string();
    }
    let rest = name.strip_prefix("scp").unwrap_or(name);
    match rest.chars().next() {
        Some(c) if c.is_ascii_digit() => c.to_string(),
        _ => {
            let letters: String = rest.chars().take_while(|c| c.is_ascii_alphabetic()).collect();
            if letters.is_empty() {
                rest.to_string()
            } else {
                letters
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct SuiteRow {
    pub instance: String,
    pub ub: f64,
    pub result: ProcedureResult,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SetAverage {
    pub set: String,
    pub procedure: Procedure,
    pub instances: usize,
    pub pct_reduction: f64,
}

#[derive(Debug, Clone, Default)]
pub struct Suite {
    /// Instance-major, procedures in the requested order.
    pub rows: Vec<SuiteRow>,
    pub averages: Vec<SetAverage>,
}

/// Runs every procedure on every instance, fanning out over the cross
/// product with `exec`.
pub fn run_suite(
    instances: &[NamedInstance],
    ubs: &UbTable,
    procedures: &[Procedure],
    cfg: &PipelineConfig,
    exec: Execution,
) -> Result<Suite> {
    let mut jobs = Vec::new();
    for (k, named) in instances.iter().enumerate() {
        let ub = ubs.get(&named.name).ok_or_else(|| Error::MissingUb(named.name.clone()))?;
        jobs.extend(procedures.iter().map(|&p| (k, ub, p)));
    }
    let results = map_slice(&jobs, exec, |&(k, ub, p)| run_procedure(&instances[k].instance, ub, p, cfg));
    let mut rows = Vec::with_capacity(jobs.len());
    for (&(k, ub, _), res) in jobs.iter().zip(results) {
        rows.push(SuiteRow {
            instance: instances[k].name.clone(),
            ub,
            result: res?,
        });
    }
    let averages = set_averages(&rows);
    Ok(Suite { rows, averages })
}

/// Average percentage of columns removed, per (set, procedure), sorted by
/// set name then procedure.
pub fn set_averages(rows: &[SuiteRow]) -> Vec<SetAverage> {
    let mut acc: std::collections::BTreeMap<(String, Procedure), (usize, f64)> = Default::default();
    for r in rows {
        let e = acc.entry((set_of(&r.instance), r.result.procedure)).or_default();
        e.0 += 1;
        e.1 += r.result.pct_reduction();
    }
    acc.into_iter()
        .map(|((set, procedure), (count, total))| SetAverage {
            set,
            procedure,
            instances: count,
            pct_reduction: total / count as f64,
        })
        .collect()
}

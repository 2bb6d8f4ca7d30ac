//! Revised primal simplex on the covering dual
//!
//! ```text
//! max  c'u   s.t.  u'A <= w',  u >= 0
//! ```
//!
//! started from the all-slack basis (`u = 0`, feasible because `w > 0`). With
//! `c = e` this is the dual of the LP relaxation; other objectives over the
//! same region are used by strong fixing.
//!
//! A basis is a set of basic dual variables `K` and an equally large set of
//! tight constraints `R`; every other slack is basic. Only the `|K| x |K|`
//! working basis `A[K, R]'` is factorized, so the dense inverse is bounded by
//! `min(m, n)` rather than by the `n` constraints of the dual.
//!
//! Every iterate visited is dual feasible. A registered [`IterateSink`]
//! receives a snapshot of each one, starting with iteration 0.

mod inverse;

use crate::error::{Error, Result};
use crate::instance::ScpInstance;
use inverse::DenseInverse;

const NONE: usize = usize::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pricing {
    /// Largest reduced cost, lowest index on ties.
    Dantzig,
    /// Lowest improving index; cannot cycle.
    Bland,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub feas_tol: f64,
    pub opt_tol: f64,
    pub pivot_tol: f64,
    pub pricing: Pricing,
    /// Consecutive degenerate pivots after which Bland's rule takes over for
    /// the rest of the solve. `None` means `max(50, 10 m)`.
    pub bland_after: Option<usize>,
    pub max_iters: usize,
    pub refactor_every: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            feas_tol: 1e-7,
            opt_tol: 1e-9,
            pivot_tol: 1e-10,
            pricing: Pricing::Dantzig,
            bland_after: None,
            max_iters: 500_000,
            refactor_every: 100,
        }
    }
}

/// Tolerance on dual objective comparisons, relative to the value.
pub fn objective_tol(zeta: f64) -> f64 {
    1e-6 * (1.0 + zeta.abs())
}

/// A dual-feasible point: `u`, its value `zeta = sum(u)` and the dual slacks
/// `w_j - u'A_j`, which are the reduced costs of the covering LP.
#[derive(Debug, Clone, PartialEq)]
pub struct DualIterate {
    pub iter_index: usize,
    pub u: Vec<f64>,
    pub zeta: f64,
    pub reduced_costs: Vec<f64>,
}

impl DualIterate {
    /// Evaluates an arbitrary dual vector. Feasibility is not checked.
    pub fn from_dual(inst: &ScpInstance, u: Vec<f64>, iter_index: usize) -> Self {
        assert_eq!(u.len(), inst.n_rows(), "dual vector length");
        let reduced_costs = (0..inst.n_cols())
            .map(|j| inst.cost(j) - inst.col(j).iter().map(|&i| u[i]).sum::<f64>())
            .collect();
        DualIterate {
            iter_index,
            zeta: u.iter().sum(),
            u,
            reduced_costs,
        }
    }

    /// Largest violation of `u >= 0` and `u'A <= w`.
    pub fn infeasibility(&self) -> f64 {
        self.u
            .iter()
            .chain(&self.reduced_costs)
            .fold(0.0f64, |acc, &v| acc.max(-v))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    IterationLimit,
}

/// Basic dual variables and tight constraints, enough to restart a solve over
/// the same region.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Basis {
    pub basic_rows: Vec<usize>,
    pub tight_cols: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    pub status: SolveStatus,
    pub final_iterate: DualIterate,
    /// Pivots performed.
    pub iterations: usize,
    pub basis: Basis,
    /// Value of the solve's own objective at the final iterate.
    pub objective: f64,
}

/// Receives every dual-feasible iterate of a solve, by value.
pub trait IterateSink {
    fn accept(&mut self, iterate: DualIterate) -> Result<()>;
}

impl<F: FnMut(DualIterate) -> Result<()>> IterateSink for F {
    fn accept(&mut self, iterate: DualIterate) -> Result<()> {
        self(iterate)
    }
}

/// Maximizes `sum(u)` from the slack basis, streaming every iterate.
pub fn solve(inst: &ScpInstance, cfg: &SolverConfig, sink: &mut dyn IterateSink) -> Result<SolveResult> {
    let obj = vec![1.0; inst.n_rows()];
    Engine::new(inst, &obj, cfg).run(None, Some(sink))
}

/// Maximizes `obj'u` over the dual region, optionally from a basis of an
/// earlier solve over the same region.
pub fn solve_with_objective(
    inst: &ScpInstance,
    obj: &[f64],
    cfg: &SolverConfig,
    warm: Option<&Basis>,
    sink: Option<&mut dyn IterateSink>,
) -> Result<SolveResult> {
    assert_eq!(obj.len(), inst.n_rows(), "objective length");
    Engine::new(inst, obj, cfg).run(warm, sink)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Var {
    Dual(usize),
    Slack(usize),
}

impl Var {
    fn index(self, m: usize) -> usize {
        match self {
            Var::Dual(i) => i,
            Var::Slack(j) => m + j,
        }
    }
}

struct Engine<'a> {
    inst: &'a ScpInstance,
    obj: &'a [f64],
    cfg: &'a SolverConfig,
    basic: Vec<usize>,
    tight: Vec<usize>,
    basic_pos: Vec<usize>,
    tight_pos: Vec<usize>,
    inv: DenseInverse,
    u: Vec<f64>,
    slack: Vec<f64>,
    iterations: usize,
    since_refactor: usize,
    degenerate_run: usize,
    bland: bool,
    row_acc: Vec<f64>,
    dslack: Vec<f64>,
    touched: Vec<usize>,
}

impl<'a> Engine<'a> {
    fn new(inst: &'a ScpInstance, obj: &'a [f64], cfg: &'a SolverConfig) -> Self {
        let (m, n) = (inst.n_rows(), inst.n_cols());
        Engine {
            inst,
            obj,
            cfg,
            basic: Vec::new(),
            tight: Vec::new(),
            basic_pos: vec![NONE; m],
            tight_pos: vec![NONE; n],
            inv: DenseInverse::default(),
            u: vec![0.0; m],
            slack: inst.costs().to_vec(),
            iterations: 0,
            since_refactor: 0,
            degenerate_run: 0,
            bland: cfg.pricing == Pricing::Bland,
            row_acc: vec![0.0; m],
            dslack: vec![0.0; n],
            touched: Vec::new(),
        }
    }

    fn m(&self) -> usize {
        self.inst.n_rows()
    }

    fn bland_threshold(&self) -> usize {
        self.cfg.bland_after.unwrap_or_else(|| (10 * self.m()).max(50))
    }

    fn snapshot(&self) -> DualIterate {
        DualIterate {
            iter_index: self.iterations,
            u: self.u.clone(),
            zeta: self.u.iter().sum(),
            reduced_costs: self.slack.clone(),
        }
    }

    fn objective(&self) -> f64 {
        self.obj.iter().zip(&self.u).map(|(c, u)| c * u).sum()
    }

    fn run(mut self, warm: Option<&Basis>, mut sink: Option<&mut dyn IterateSink>) -> Result<SolveResult> {
        if let Some(basis) = warm {
            if self.load_basis(basis).is_err() {
                log::warn!("warm-start basis rejected, starting from the slack basis");
                self = Engine::new(self.inst, self.obj, self.cfg);
            }
        }
        if let Some(s) = sink.as_mut() {
            s.accept(self.snapshot())?;
        }
        let status = loop {
            if self.iterations >= self.cfg.max_iters {
                break SolveStatus::IterationLimit;
            }
            let Some(entering) = self.price() else {
                break SolveStatus::Optimal;
            };
            self.pivot(entering)?;
            if let Some(s) = sink.as_mut() {
                s.accept(self.snapshot())?;
            }
        };
        Ok(SolveResult {
            status,
            final_iterate: self.snapshot(),
            iterations: self.iterations,
            objective: self.objective(),
            basis: Basis {
                basic_rows: self.basic.clone(),
                tight_cols: self.tight.clone(),
            },
        })
    }

    fn load_basis(&mut self, basis: &Basis) -> Result<()> {
        let (m, n) = (self.m(), self.inst.n_cols());
        if basis.basic_rows.len() != basis.tight_cols.len()
            || basis.basic_rows.iter().any(|&i| i >= m)
            || basis.tight_cols.iter().any(|&j| j >= n)
        {
            return Err(Error::NumericalBreakdown { iteration: 0 });
        }
        self.basic = basis.basic_rows.clone();
        self.tight = basis.tight_cols.clone();
        for (c, &i) in self.basic.iter().enumerate() {
            self.basic_pos[i] = c;
        }
        for (r, &j) in self.tight.iter().enumerate() {
            self.tight_pos[j] = r;
        }
        self.refactor()?;
        let tol = self.cfg.feas_tol;
        if self.u.iter().chain(&self.slack).any(|&v| v < -tol) {
            return Err(Error::NumericalBreakdown { iteration: 0 });
        }
        Ok(())
    }

    /// Rebuilds the inverse from scratch and recomputes all primal values.
    fn refactor(&mut self) -> Result<()> {
        let w: Vec<Vec<f64>> = self
            .tight
            .iter()
            .map(|&j| {
                self.basic
                    .iter()
                    .map(|&i| if self.inst.covers(j, i) { 1.0 } else { 0.0 })
                    .collect()
            })
            .collect();
        self.inv = DenseInverse::factor(&w, self.cfg.pivot_tol).ok_or(Error::NumericalBreakdown {
            iteration: self.iterations,
        })?;
        let rhs: Vec<f64> = self.tight.iter().map(|&j| self.inst.cost(j)).collect();
        let ub = self.inv.mul(&rhs);
        self.u.iter_mut().for_each(|v| *v = 0.0);
        for (&i, v) in self.basic.iter().zip(ub) {
            self.u[i] = v;
        }
        for j in 0..self.inst.n_cols() {
            self.slack[j] = if self.tight_pos[j] != NONE {
                0.0
            } else {
                self.inst.cost(j) - self.inst.col(j).iter().map(|&i| self.u[i]).sum::<f64>()
            };
        }
        self.since_refactor = 0;
        Ok(())
    }

    /// Chooses an improving nonbasic variable, or `None` at optimality.
    fn price(&mut self) -> Option<Var> {
        let m = self.m();
        let obj_basic: Vec<f64> = self.basic.iter().map(|&i| self.obj[i]).collect();
        let y = self.inv.tmul(&obj_basic);
        self.row_acc.iter_mut().for_each(|v| *v = 0.0);
        for (r, &j) in self.tight.iter().enumerate() {
            if y[r] != 0.0 {
                for &i in self.inst.col(j) {
                    self.row_acc[i] += y[r];
                }
            }
        }
        let tol = self.cfg.opt_tol;
        let mut best: Option<(f64, Var)> = None;
        let mut consider = |d: f64, var: Var| {
            if d <= tol {
                return false;
            }
            match best {
                Some((bd, _)) if d <= bd => {}
                _ => best = Some((d, var)),
            }
            true
        };
        // candidates are visited in index order: duals first, then slacks
        for i in 0..m {
            if self.basic_pos[i] == NONE && consider(self.obj[i] - self.row_acc[i], Var::Dual(i)) && self.bland {
                return Some(Var::Dual(i));
            }
        }
        if self.bland {
            let mut first: Option<Var> = None;
            for (r, &j) in self.tight.iter().enumerate() {
                if -y[r] > tol && first.is_none_or(|v| Var::Slack(j).index(m) < v.index(m)) {
                    first = Some(Var::Slack(j));
                }
            }
            return first;
        }
        for (r, &j) in self.tight.iter().enumerate() {
            consider(-y[r], Var::Slack(j));
        }
        // equal reduced costs keep the earlier (lower-index) candidate, except
        // among slacks whose positions are unordered; settle those by index
        if let Some((bd, Var::Slack(_))) = best {
            let j = self
                .tight
                .iter()
                .enumerate()
                .filter(|&(r, _)| -y[r] == bd)
                .map(|(_, &j)| j)
                .min()
                .expect("best slack is tight");
            return Some(Var::Slack(j));
        }
        best.map(|(_, v)| v)
    }

    fn pivot(&mut self, entering: Var) -> Result<()> {
        let m = self.m();
        let k = self.basic.len();
        // column of the entering variable in the working basis, and the
        // resulting change of the basic duals per unit step
        let (h, du): (Option<Vec<f64>>, Vec<f64>) = match entering {
            Var::Dual(q) => {
                let mut h = vec![0.0; k];
                for &j in self.inst.row(q) {
                    if self.tight_pos[j] != NONE {
                        h[self.tight_pos[j]] = 1.0;
                    }
                }
                let d = self.inv.mul(&h);
                (Some(h), d.into_iter().map(|v| -v).collect())
            }
            Var::Slack(p) => {
                let col = self.inv.column(self.tight_pos[p]);
                (None, col.into_iter().map(|v| -v).collect())
            }
        };

        // change of the basic slacks
        for &j in &self.touched {
            self.dslack[j] = 0.0;
        }
        self.touched.clear();
        let mut changes: Vec<(usize, f64)> = self
            .basic
            .iter()
            .zip(&du)
            .filter(|(_, &d)| d != 0.0)
            .map(|(&i, &d)| (i, d))
            .collect();
        if let Var::Dual(q) = entering {
            changes.push((q, 1.0));
        }
        for &(i, d) in &changes {
            for &j in self.inst.row(i) {
                if self.tight_pos[j] == NONE {
                    if self.dslack[j] == 0.0 {
                        self.touched.push(j);
                    }
                    self.dslack[j] -= d;
                }
            }
        }
        self.touched.sort_unstable();
        self.touched.dedup();

        // ratio test over basic duals and basic slacks
        let ptol = self.cfg.pivot_tol;
        let mut cands: Vec<(f64, f64, Var)> = Vec::new();
        for (c, &i) in self.basic.iter().enumerate() {
            if du[c] < -ptol {
                cands.push((self.u[i].max(0.0) / -du[c], -du[c], Var::Dual(i)));
            }
        }
        for &j in &self.touched {
            let d = self.dslack[j];
            if d < -ptol {
                cands.push((self.slack[j].max(0.0) / -d, -d, Var::Slack(j)));
            }
        }
        let Some(theta) = cands.iter().map(|c| c.0).min_by(f64::total_cmp) else {
            return Err(Error::Unbounded {
                var: entering.index(m),
            });
        };
        let tie = 1e-12 * (1.0 + theta);
        let leaving = cands
            .iter()
            .filter(|c| c.0 <= theta + tie)
            .min_by(|a, b| {
                if self.bland {
                    a.2.index(m).cmp(&b.2.index(m))
                } else {
                    b.1.total_cmp(&a.1).then(a.2.index(m).cmp(&b.2.index(m)))
                }
            })
            .copied()
            .expect("non-empty candidate set");
        let t = leaving.0;

        // move along the edge
        for (c, &i) in self.basic.iter().enumerate() {
            self.u[i] += t * du[c];
        }
        for &j in &self.touched {
            self.slack[j] += t * self.dslack[j];
        }
        match entering {
            Var::Dual(q) => self.u[q] = t,
            Var::Slack(p) => self.slack[p] = t,
        }
        match leaving.2 {
            Var::Dual(l) => self.u[l] = 0.0,
            Var::Slack(l) => self.slack[l] = 0.0,
        }

        self.update_basis(entering, leaving.2, h, &du)?;

        self.iterations += 1;
        self.since_refactor += 1;
        if t <= 1e-12 {
            self.degenerate_run += 1;
            if !self.bland && self.degenerate_run >= self.bland_threshold() {
                log::debug!("switching to Bland's rule after {} degenerate pivots", self.degenerate_run);
                self.bland = true;
            }
        } else {
            self.degenerate_run = 0;
        }
        if self.since_refactor >= self.cfg.refactor_every {
            self.refactor()?;
        }
        Ok(())
    }

    fn update_basis(&mut self, entering: Var, leaving: Var, h: Option<Vec<f64>>, du: &[f64]) -> Result<()> {
        let breakdown = Error::NumericalBreakdown {
            iteration: self.iterations,
        };
        match (entering, leaving) {
            (Var::Dual(q), Var::Dual(l)) => {
                let c = self.basic_pos[l];
                let d: Vec<f64> = du.iter().map(|v| -v).collect();
                if d[c].abs() < self.cfg.pivot_tol {
                    return Err(breakdown);
                }
                self.inv.replace_column(c, &d);
                self.basic[c] = q;
                self.basic_pos[q] = c;
                self.basic_pos[l] = NONE;
            }
            (Var::Slack(p), Var::Slack(l)) => {
                let r = self.tight_pos[p];
                let g: Vec<f64> = self
                    .basic
                    .iter()
                    .map(|&i| if self.inst.covers(l, i) { 1.0 } else { 0.0 })
                    .collect();
                self.inv.replace_row(r, &g).ok_or(breakdown)?;
                self.tight[r] = l;
                self.tight_pos[l] = r;
                self.tight_pos[p] = NONE;
            }
            (Var::Dual(q), Var::Slack(l)) => {
                let h = h.expect("dual entering has a column");
                let g: Vec<f64> = self
                    .basic
                    .iter()
                    .map(|&i| if self.inst.covers(l, i) { 1.0 } else { 0.0 })
                    .collect();
                let corner = if self.inst.covers(l, q) { 1.0 } else { 0.0 };
                self.inv.grow(&h, &g, corner).ok_or(breakdown)?;
                self.basic_pos[q] = self.basic.len();
                self.basic.push(q);
                self.tight_pos[l] = self.tight.len();
                self.tight.push(l);
            }
            (Var::Slack(p), Var::Dual(l)) => {
                let c = self.basic_pos[l];
                let r = self.tight_pos[p];
                self.inv.shrink(c, r).ok_or(breakdown)?;
                self.basic.swap_remove(c);
                if c < self.basic.len() {
                    self.basic_pos[self.basic[c]] = c;
                }
                self.basic_pos[l] = NONE;
                self.tight.swap_remove(r);
                if r < self.tight.len() {
                    self.tight_pos[self.tight[r]] = r;
                }
                self.tight_pos[p] = NONE;
            }
        }
        Ok(())
    }
}

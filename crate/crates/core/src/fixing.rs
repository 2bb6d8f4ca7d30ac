//! Reduced-cost fixing from dual-feasible solutions.
//!
//! For any `u` feasible for the covering dual, with value `zeta = u'e` and
//! reduced costs `wbar = w - u'A`, every cover cheaper than or equal to `ub`
//! satisfies `wbar_j z_j <= ub - zeta`. A column whose reduced cost exceeds
//! that gap can therefore be fixed to zero. RCF applies this to the optimal
//! dual only; DPF applies it to every iterate of the simplex path.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::instance::ScpInstance;
use crate::simplex::{objective_tol, DualIterate, IterateSink, SolveResult, SolveStatus};

/// Margin by which a reduced cost must exceed the gap before a column is
/// fixed. Rounding errs toward leaving the column free.
pub const FIX_EPS: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Strategy {
    Rcf,
    Dpf,
    /// Strong fixing on the column's own restricted LP.
    Sf,
    /// Strong fixing through another column's LP dual.
    SfCross,
    /// Singleton-row fixing during row elimination.
    Dre,
    /// Column left without any row to cover.
    EmptyColumn,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Provenance {
    pub strategy: Strategy,
    /// Simplex iteration (or LP index for strong fixing) that fixed the column.
    pub iterate: usize,
}

/// Fixing decisions in the column numbering of one instance.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FixSet {
    to_zero: BTreeSet<usize>,
    to_one: BTreeSet<usize>,
    provenance: BTreeMap<usize, Provenance>,
}

impl FixSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn to_zero(&self) -> &BTreeSet<usize> {
        &self.to_zero
    }

    pub fn to_one(&self) -> &BTreeSet<usize> {
        &self.to_one
    }

    pub fn provenance(&self, col: usize) -> Option<Provenance> {
        self.provenance.get(&col).copied()
    }

    pub fn is_fixed(&self, col: usize) -> bool {
        self.provenance.contains_key(&col)
    }

    pub fn len(&self) -> usize {
        self.provenance.len()
    }

    pub fn is_empty(&self) -> bool {
        self.provenance.is_empty()
    }

    /// Records `col` at zero. Returns false if it was already fixed.
    pub fn fix_zero(&mut self, col: usize, strategy: Strategy, iterate: usize) -> bool {
        if self.is_fixed(col) {
            return false;
        }
        self.to_zero.insert(col);
        self.provenance.insert(col, Provenance { strategy, iterate });
        true
    }

    /// Records `col` at one. Returns false if it was already fixed.
    pub fn fix_one(&mut self, col: usize, strategy: Strategy, iterate: usize) -> bool {
        if self.is_fixed(col) {
            return false;
        }
        self.to_one.insert(col);
        self.provenance.insert(col, Provenance { strategy, iterate });
        true
    }

    /// Adds the entries of `other` not already present; earlier entries win.
    pub fn merge(&mut self, other: &FixSet) -> Result<()> {
        for (&col, p) in &other.provenance {
            let one = other.to_one.contains(&col);
            match self.provenance.get(&col) {
                Some(_) if self.to_one.contains(&col) != one => {
                    return Err(Error::OverlappingFixings { col });
                }
                Some(_) => {}
                None if one => {
                    self.fix_one(col, p.strategy, p.iterate);
                }
                None => {
                    self.fix_zero(col, p.strategy, p.iterate);
                }
            }
        }
        Ok(())
    }

    /// Columns fixed to zero, ascending.
    pub fn zero_list(&self) -> Vec<usize> {
        self.to_zero.iter().copied().collect()
    }

    pub fn one_list(&self) -> Vec<usize> {
        self.to_one.iter().copied().collect()
    }
}

/// Whether `wbar` clears the gap `ub - zeta` by more than [`FIX_EPS`].
pub fn exceeds_gap(wbar: f64, ub: f64, zeta: f64) -> bool {
    wbar > FIX_EPS && wbar - (ub - zeta) > FIX_EPS
}

/// Fixes to zero every free column certified by the dual solution `it`.
/// Returns the number of columns newly fixed.
///
/// `ub` must be an upper bound on the optimum of `inst`, net of any cost
/// already paid for columns fixed to one.
pub fn fix_from_dual(
    inst: &ScpInstance,
    it: &DualIterate,
    ub: f64,
    strategy: Strategy,
    acc: &mut FixSet,
) -> Result<usize> {
    if ub < it.zeta - objective_tol(it.zeta) {
        return Err(Error::InvalidBound { ub, zeta: it.zeta });
    }
    debug_assert_eq!(it.reduced_costs.len(), inst.n_cols());
    let mut added = 0;
    for (j, &wbar) in it.reduced_costs.iter().enumerate() {
        if !acc.is_fixed(j) && exceeds_gap(wbar, ub, it.zeta) && acc.fix_zero(j, strategy, it.iter_index) {
            added += 1;
        }
    }
    Ok(added)
}

/// Reduced-cost fixing from the optimal dual of a finished solve.
pub fn rcf(inst: &ScpInstance, result: &SolveResult, ub: f64) -> Result<FixSet> {
    if result.status != SolveStatus::Optimal {
        return Err(Error::NotOptimal);
    }
    let mut fs = FixSet::new();
    fix_from_dual(inst, &result.final_iterate, ub, Strategy::Rcf, &mut fs)?;
    Ok(fs)
}

/// One point of a fixing trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracePoint {
    pub iteration: usize,
    pub zeta: f64,
    /// Columns fixed so far during this solve.
    pub fixed: usize,
}

/// Iterate sink that applies the fixing rule to every simplex iterate.
#[derive(Debug, Clone)]
pub struct DpfListener<'a> {
    inst: &'a ScpInstance,
    ub: f64,
    fixes: FixSet,
    trace: Vec<TracePoint>,
}

impl<'a> DpfListener<'a> {
    pub fn new(inst: &'a ScpInstance, ub: f64) -> Self {
        DpfListener {
            inst,
            ub,
            fixes: FixSet::new(),
            trace: Vec::new(),
        }
    }

    pub fn fixes(&self) -> &FixSet {
        &self.fixes
    }

    pub fn trace(&self) -> &[TracePoint] {
        &self.trace
    }

    pub fn into_parts(self) -> (FixSet, Vec<TracePoint>) {
        (self.fixes, self.trace)
    }
}

impl IterateSink for DpfListener<'_> {
    fn accept(&mut self, iterate: DualIterate) -> Result<()> {
        fix_from_dual(self.inst, &iterate, self.ub, Strategy::Dpf, &mut self.fixes)?;
        self.trace.push(TracePoint {
            iteration: iterate.iter_index,
            zeta: iterate.zeta,
            fixed: self.fixes.len(),
        });
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use super::Strategy;
    use crate::instance::fixtures::*;
    use crate::oracle::{self, FixBound};
    use crate::simplex::{solve, Pricing, SolverConfig};
    use crate::tiny::random_tiny;
    use proptest::prelude::*;

    fn it(inst: &ScpInstance, u: &[f64]) -> DualIterate {
        DualIterate::from_dual(inst, u.to_vec(), 0)
    }

    fn zeros(fs: &FixSet) -> Vec<usize> {
        fs.zero_list()
    }

    #[test]
    fn single_iterate_examples() {
        let t1 = t1();
        let mut fs = FixSet::new();
        let d = it(&t1, &[0.0, 1.0]);
        assert_eq!(d.reduced_costs, vec![1.0, 0.0, 2.0]);
        assert_eq!(fix_from_dual(&t1, &d, 1.0, Strategy::Rcf, &mut fs).unwrap(), 2);
        assert_eq!(zeros(&fs), vec![0, 2]);

        let mut fs = FixSet::new();
        let d = it(&t1, &[1.0, 0.0]);
        assert_eq!(d.reduced_costs, vec![0.0, 0.0, 3.0]);
        fix_from_dual(&t1, &d, 1.0, Strategy::Rcf, &mut fs).unwrap();
        assert_eq!(zeros(&fs), vec![2]);

        let mut fs = FixSet::new();
        fix_from_dual(&t1, &it(&t1, &[0.0, 0.0]), 1.0, Strategy::Rcf, &mut fs).unwrap();
        assert_eq!(zeros(&fs), vec![2]);
        assert!(fs.to_one().is_empty());
    }

    #[test]
    fn invalid_bound_is_rejected() {
        let t1 = t1();
        let mut fs = FixSet::new();
        let err = fix_from_dual(&t1, &it(&t1, &[1.0, 0.0]), 0.5, Strategy::Dpf, &mut fs);
        assert!(matches!(err, Err(Error::InvalidBound { .. })));
        assert!(fs.is_empty());
    }

    #[test]
    fn ties_do_not_fix() {
        // gap ub - zeta = 2 equals wbar_3 = 2 exactly
        let t1 = t1();
        let mut fs = FixSet::new();
        fix_from_dual(&t1, &it(&t1, &[0.0, 1.0]), 3.0, Strategy::Rcf, &mut fs).unwrap();
        assert!(fs.is_empty());
    }

    #[test]
    fn rcf_needs_an_optimal_solve() {
        let inst = identity2();
        let res = solve(&inst, &SolverConfig::default(), &mut |_: DualIterate| Ok(())).unwrap();
        assert!(rcf(&inst, &res, 2.0).unwrap().is_empty());

        let cfg = SolverConfig {
            max_iters: 1,
            ..SolverConfig::default()
        };
        let res = solve(&inst, &cfg, &mut |_: DualIterate| Ok(())).unwrap();
        assert!(matches!(rcf(&inst, &res, 2.0), Err(Error::NotOptimal)));
    }

    #[test]
    fn rcf_on_t1_matches_its_final_dual() {
        let t1 = t1();
        let res = solve(&t1, &SolverConfig::default(), &mut |_: DualIterate| Ok(())).unwrap();
        let fs = rcf(&t1, &res, 1.0).unwrap();
        let want = if res.final_iterate.u == [0.0, 1.0] {
            vec![0, 2]
        } else {
            vec![2]
        };
        assert_eq!(zeros(&fs), want);
    }

    #[test]
    fn dpf_unions_the_stream() {
        let t1 = t1();
        let mut l = DpfListener::new(&t1, 1.0);
        for (k, u) in [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]].iter().enumerate() {
            l.accept(DualIterate::from_dual(&t1, u.to_vec(), k)).unwrap();
        }
        assert_eq!(zeros(l.fixes()), vec![0, 2]);
        assert_eq!(l.fixes().provenance(2).unwrap().iterate, 0);
        assert_eq!(l.fixes().provenance(0).unwrap().iterate, 2);
        let fixed: Vec<usize> = l.trace().iter().map(|p| p.fixed).collect();
        assert_eq!(fixed, vec![1, 1, 2]);
    }

    #[test]
    fn dpf_on_single_column_fixes_nothing() {
        let inst = single(5.0);
        let mut l = DpfListener::new(&inst, 5.0);
        let res = solve(&inst, &SolverConfig::default(), &mut l).unwrap();
        assert_eq!(res.final_iterate.u, vec![5.0]);
        assert_eq!(l.trace().len(), 2);
        assert!(l.fixes().is_empty());
    }

    #[test]
    fn merge_keeps_first_provenance_and_rejects_conflicts() {
        let mut a = FixSet::new();
        a.fix_zero(1, Strategy::Dpf, 3);
        let mut b = FixSet::new();
        b.fix_zero(1, Strategy::Rcf, 9);
        b.fix_one(4, Strategy::Dre, 0);
        a.merge(&b).unwrap();
        assert_eq!(a.provenance(1).unwrap().strategy, Strategy::Dpf);
        assert_eq!(a.one_list(), vec![4]);
        let mut c = FixSet::new();
        c.fix_zero(4, Strategy::Sf, 0);
        assert!(matches!(a.merge(&c), Err(Error::OverlappingFixings { col: 4 })));
    }

    /// Runs one solve with a DPF listener; returns (RCF set, DPF set).
    fn rcf_and_dpf(inst: &ScpInstance, ub: f64, pricing: Pricing) -> (FixSet, FixSet) {
        let cfg = SolverConfig {
            pricing,
            ..SolverConfig::default()
        };
        let mut l = DpfListener::new(inst, ub);
        let res = solve(inst, &cfg, &mut l).unwrap();
        (rcf(inst, &res, ub).unwrap(), l.fixes().clone())
    }

    #[test]
    fn soundness_against_exhaustive_search() {
        for seed in 0..400 {
            let inst = random_tiny(seed, 6, 12, 12);
            let (opt, _) = oracle::exact_optimum(&inst).unwrap();
            for ub in [opt, opt + 1.0, opt + 3.0] {
                for pricing in [Pricing::Dantzig, Pricing::Bland] {
                    let (r, d) = rcf_and_dpf(&inst, ub, pricing);
                    assert!(r.to_zero().is_subset(d.to_zero()), "seed {seed}");
                    for &j in d.to_zero() {
                        assert!(
                            oracle::fix_validity(&inst, j, FixBound::Zero, ub).unwrap(),
                            "seed {seed}: column {j} is in an optimal cover"
                        );
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn idempotent_and_monotone(seed in any::<u64>(), raw in proptest::collection::vec(0.0f64..4.0, 6)) {
            let inst = random_tiny(seed, 6, 9, 10);
            // scale an arbitrary nonnegative point into the dual region
            let mut u: Vec<f64> = raw[..inst.n_rows()].to_vec();
            let worst = (0..inst.n_cols())
                .map(|j| inst.col(j).iter().map(|&i| u[i]).sum::<f64>() / inst.cost(j))
                .fold(0.0, f64::max);
            if worst > 1.0 {
                u.iter_mut().for_each(|x| *x /= worst);
            }
            let d = DualIterate::from_dual(&inst, u, 0);
            let ub_hi = d.zeta + 5.0;
            let ub_lo = d.zeta + 1.0;
            let mut hi = FixSet::new();
            fix_from_dual(&inst, &d, ub_hi, Strategy::Dpf, &mut hi).unwrap();
            let once = hi.clone();
            prop_assert_eq!(fix_from_dual(&inst, &d, ub_hi, Strategy::Dpf, &mut hi).unwrap(), 0);
            prop_assert_eq!(&hi, &once);
            let mut lo = FixSet::new();
            fix_from_dual(&inst, &d, ub_lo, Strategy::Dpf, &mut lo).unwrap();
            prop_assert!(hi.to_zero().is_subset(lo.to_zero()));
        }
    }
}

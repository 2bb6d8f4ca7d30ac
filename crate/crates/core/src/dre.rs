//! Dominated-row elimination.
//!
//! Row `k` dominates row `i` when every column covering `k` also covers `i`;
//! any cover satisfying `k` then satisfies `i`, so `i` can go. A row covered
//! by a single column forces that column to one, which in turn removes every
//! row the column covers. The two steps alternate until neither applies.

use crate::error::Result;
use crate::exec::{map_range, Execution};
use crate::instance::{ReducedInstance, ScpInstance};

/// Summary of one fixpoint run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DreStats {
    pub sweeps: usize,
    pub rows_dominated: usize,
    pub cols_fixed: usize,
}

fn is_subset(small: &[usize], big: &[usize]) -> bool {
    let mut it = big.iter();
    small.iter().all(|x| it.any(|y| y == x))
}

/// Rows dominated by some other row, ascending. Of several identical rows
/// the lowest index survives.
pub fn dominated_rows(inst: &ScpInstance) -> Vec<usize> {
    dominated_rows_with(inst, Execution::default())
}

/// [`dominated_rows`] with an explicit execution mode.
///
/// Row `i` is deleted iff some row preceding it in (support size, index)
/// order has a support contained in its own. Every such row is itself either
/// kept or deleted because of an earlier kept row, so the deleted set is the
/// same as a sequential sweep would produce, and each row can be tested
/// independently.
pub fn dominated_rows_with(inst: &ScpInstance, exec: Execution) -> Vec<usize> {
    let rows = inst.rows();
    // rows bucketed by their smallest column: a subset of row i must have its
    // smallest column inside row i
    let mut by_first = vec![Vec::new(); inst.n_cols()];
    for (k, row) in rows.iter().enumerate() {
        by_first[row[0]].push(k);
    }
    let flags = map_range(rows.len(), exec, |i| {
        let row = &rows[i];
        row.iter().any(|&c| {
            by_first[c].iter().any(|&k| {
                k != i
                    && (rows[k].len(), k) < (row.len(), i)
                    && is_subset(&rows[k], row)
            })
        })
    });
    flags
        .into_iter()
        .enumerate()
        .filter_map(|(i, d)| d.then_some(i))
        .collect()
}

/// Rows covered by exactly one column, with that column. Each column appears
/// once, paired with its lowest such row.
pub fn singleton_rows(inst: &ScpInstance) -> Vec<(usize, usize)> {
    let mut seen = vec![false; inst.n_cols()];
    let mut out = Vec::new();
    for (i, row) in inst.rows().iter().enumerate() {
        if let [j] = row[..] {
            if !seen[j] {
                seen[j] = true;
                out.push((i, j));
            }
        }
    }
    out
}

/// Alternates dominance and singleton steps until the instance stops
/// changing. Columns left covering nothing stay in the result.
pub fn dre_fixpoint(inst: &ScpInstance) -> Result<ReducedInstance> {
    dre_fixpoint_from(ReducedInstance::identity(inst.clone()), Execution::default()).map(|(r, _)| r)
}

/// Runs the fixpoint on top of an existing reduction.
pub fn dre_fixpoint_from(start: ReducedInstance, exec: Execution) -> Result<(ReducedInstance, DreStats)> {
    let mut cur = start;
    let mut stats = DreStats::default();
    loop {
        stats.sweeps += 1;
        let mut changed = false;
        let dom = dominated_rows_with(cur.instance(), exec);
        if !dom.is_empty() {
            stats.rows_dominated += dom.len();
            cur = cur.restrict(&[], &[], &dom)?;
            changed = true;
        }
        let single: Vec<usize> = singleton_rows(cur.instance()).into_iter().map(|(_, j)| j).collect();
        if !single.is_empty() {
            stats.cols_fixed += single.len();
            cur = cur.restrict(&[], &single, &[])?;
            changed = true;
        }
        if !changed {
            return Ok((cur, stats));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::fixtures::*;
    use crate::oracle;
    use crate::tiny::random_tiny;

    fn inst(rows: Vec<Vec<usize>>, n: usize) -> ScpInstance {
        ScpInstance::new(vec![1.0; n], rows).unwrap()
    }

    #[test]
    fn dominance_examples() {
        assert_eq!(dominated_rows(&inst(vec![vec![0, 1], vec![0, 1, 2]], 3)), vec![1]);
        assert_eq!(dominated_rows(&inst(vec![vec![0, 1, 2], vec![0, 1]], 3)), vec![0]);
        assert!(dominated_rows(&inst(vec![vec![0], vec![1]], 2)).is_empty());
        assert_eq!(dominated_rows(&inst(vec![vec![0, 1], vec![0, 1]], 2)), vec![1]);
        assert_eq!(
            dominated_rows(&inst(vec![vec![1, 2], vec![1, 2], vec![1, 2]], 3)),
            vec![1, 2]
        );
        assert!(dominated_rows(&t1()).is_empty());
    }

    #[test]
    fn singleton_examples() {
        assert_eq!(singleton_rows(&t2()), vec![(0, 0)]);
        assert!(singleton_rows(&t1()).is_empty());
        assert_eq!(singleton_rows(&identity2()), vec![(0, 0), (1, 1)]);
        assert_eq!(singleton_rows(&inst(vec![vec![1], vec![1]], 2)), vec![(0, 1)]);
    }

    #[test]
    fn fixpoint_examples() {
        let r = dre_fixpoint(&t2()).unwrap();
        assert_eq!(r.instance().n_rows(), 1);
        assert_eq!(r.row_map(), &[2]);
        assert_eq!(r.col_map(), &[1, 2]);
        assert_eq!(r.fixed_to_one().iter().copied().collect::<Vec<_>>(), vec![0]);
        assert_eq!(r.cost_offset(), 2.0);

        let r = dre_fixpoint(&t1()).unwrap();
        assert_eq!(r, ReducedInstance::identity(t1()));

        let r = dre_fixpoint(&identity2()).unwrap();
        assert!(r.is_empty());
        assert_eq!(r.cost_offset(), 2.0);
    }

    #[test]
    fn modes_agree_on_generated_rows() {
        for seed in 0..50 {
            let i = random_tiny(seed, 40, 12, 5);
            assert_eq!(
                dominated_rows_with(&i, Execution::Sequential),
                dominated_rows_with(&i, Execution::Parallel)
            );
        }
    }

    /// Sequential reference sweep straight from the definition.
    fn naive_dominated(inst: &ScpInstance) -> Vec<usize> {
        let m = inst.n_rows();
        let mut alive = vec![true; m];
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by_key(|&i| (inst.row(i).len(), i));
        for (p, &i) in order.iter().enumerate() {
            let dominated = order[..p].iter().any(|&k| {
                alive[k] && inst.row(k).iter().all(|c| inst.row(i).contains(c))
            });
            if dominated {
                alive[i] = false;
            }
        }
        (0..m).filter(|&i| !alive[i]).collect()
    }

    #[test]
    fn properties_on_random_instances() {
        for seed in 0..500 {
            let i = random_tiny(seed, 8, 10, 9);
            assert_eq!(dominated_rows(&i), naive_dominated(&i), "seed {seed}");

            let (opt, _) = oracle::exact_optimum(&i).unwrap();
            let r = dre_fixpoint(&i).unwrap();
            let (sub, _) = oracle::exact_optimum(r.instance()).unwrap();
            assert!((opt - sub - r.cost_offset()).abs() < 1e-9, "seed {seed}");

            // fixpoint is reached and stable
            assert!(dominated_rows(r.instance()).is_empty());
            assert!(singleton_rows(r.instance()).is_empty());
            let again = dre_fixpoint(r.instance()).unwrap();
            assert_eq!(again, ReducedInstance::identity(r.instance().clone()));

            // every column fixed to one is in every feasible cover
            for &j in r.fixed_to_one() {
                for mask in 0u32..1 << i.n_cols() {
                    let chosen: Vec<usize> = (0..i.n_cols()).filter(|b| mask >> b & 1 == 1).collect();
                    if i.is_cover(&chosen) {
                        assert!(mask >> j & 1 == 1, "seed {seed}: column {j}");
                    }
                }
            }
        }
    }
}

use crate::instance::ScpInstance;

/// Chvátal's greedy cover followed by removal of redundant columns.
///
/// Each step takes the column with the lowest cost per newly covered row,
/// breaking ties by lowest index. The clean-up pass then drops selected
/// columns, most expensive first, whose rows are all covered elsewhere.
pub fn greedy_ub(inst: &ScpInstance) -> (f64, Vec<usize>) {
    let (m, n) = (inst.n_rows(), inst.n_cols());
    let mut uncovered_in = (0..n).map(|j| inst.col(j).len()).collect::<Vec<_>>();
    let mut covered = vec![false; m];
    let mut left = m;
    let mut chosen = Vec::new();
    while left > 0 {
        let mut best: Option<usize> = None;
        for j in 0..n {
            let k = uncovered_in[j];
            if k == 0 {
                continue;
            }
            // cost_j / k_j < cost_b / k_b without division
            let better = match best {
                None => true,
                Some(b) => inst.cost(j) * (uncovered_in[b] as f64) < inst.cost(b) * k as f64,
            };
            if better {
                best = Some(j);
            }
        }
        let j = best.expect("every row has a column");
        chosen.push(j);
        for &i in inst.col(j) {
            if !covered[i] {
                covered[i] = true;
                left -= 1;
                for &c in inst.row(i) {
                    uncovered_in[c] -= 1;
                }
            }
        }
    }

    let mut times = vec![0usize; m];
    for &j in &chosen {
        for &i in inst.col(j) {
            times[i] += 1;
        }
    }
    let mut order = chosen.clone();
    order.sort_by(|&a, &b| inst.cost(b).total_cmp(&inst.cost(a)).then(b.cmp(&a)));
    let mut keep = vec![false; n];
    for &j in &chosen {
        keep[j] = true;
    }
    for j in order {
        if inst.col(j).iter().all(|&i| times[i] > 1) {
            keep[j] = false;
            for &i in inst.col(j) {
                times[i] -= 1;
            }
        }
    }
    let cover: Vec<usize> = (0..n).filter(|&j| keep[j]).collect();
    (inst.cover_cost(&cover), cover)
}

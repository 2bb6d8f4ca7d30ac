//! Brute-force ground truth for small instances: exact covers by enumeration
//! and LP optima by vertex enumeration. Nothing here shares code with the
//! simplex solver or the fixing rules it is used to check.

use crate::error::{Error, Result};
use crate::instance::ScpInstance;

pub const MAX_EXACT_COLS: usize = 20;
pub const MAX_LP_ROWS: usize = 6;
pub const MAX_LP_COLS: usize = 8;
pub const MAX_SF_COLS: usize = 8;
pub const MAX_SF_ROWS: usize = 12;

const VALUE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FixBound {
    Zero,
    One,
}

fn row_masks(inst: &ScpInstance) -> Vec<u32> {
    inst.rows()
        .iter()
        .map(|row| row.iter().fold(0u32, |acc, &j| acc | 1 << j))
        .collect()
}

fn mask_cost(inst: &ScpInstance, mask: u32) -> f64 {
    (0..inst.n_cols())
        .filter(|j| mask >> j & 1 == 1)
        .map(|j| inst.cost(j))
        .sum()
}

/// All feasible covers with their costs, as column bitmasks.
fn covers(inst: &ScpInstance) -> Result<Vec<(u32, f64)>> {
    if inst.n_cols() > MAX_EXACT_COLS {
        return Err(Error::TooLarge {
            what: "column count",
            limit: MAX_EXACT_COLS,
        });
    }
    let rows = row_masks(inst);
    Ok((0u32..1 << inst.n_cols())
        .filter(|&mask| rows.iter().all(|&r| r & mask != 0))
        .map(|mask| (mask, mask_cost(inst, mask)))
        .collect())
}

/// Optimal value and the lowest-mask optimal cover.
pub fn exact_optimum(inst: &ScpInstance) -> Result<(f64, Vec<usize>)> {
    let all = covers(inst)?;
    let (mask, value) = all
        .iter()
        .copied()
        .reduce(|best, cur| if cur.1 < best.1 { cur } else { best })
        .ok_or(Error::Infeasible)?;
    let cover = (0..inst.n_cols()).filter(|j| mask >> j & 1 == 1).collect();
    Ok((value, cover))
}

/// Whether fixing column `col` at `bound` keeps every optimal cover: for
/// [`FixBound::Zero`] no optimal cover uses `col`, for [`FixBound::One`] all
/// of them do. `ub` must not be below the optimum.
pub fn fix_validity(inst: &ScpInstance, col: usize, bound: FixBound, ub: f64) -> Result<bool> {
    let all = covers(inst)?;
    let opt = all
        .iter()
        .map(|c| c.1)
        .reduce(f64::min)
        .ok_or(Error::Infeasible)?;
    if ub < opt - VALUE_TOL {
        return Err(Error::InvalidBound { ub, zeta: opt });
    }
    let mut optimal = all.iter().filter(|c| c.1 <= opt + VALUE_TOL).map(|c| c.0);
    Ok(match bound {
        FixBound::Zero => optimal.all(|mask| mask >> col & 1 == 0),
        FixBound::One => optimal.all(|mask| mask >> col & 1 == 1),
    })
}

/// Solves a square system by Gaussian elimination; `None` if singular.
fn solve_square(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let k = b.len();
    for col in 0..k {
        let piv = (col..k).max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))?;
        if a[piv][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..k {
            let f = a[r][col] / a[col][col];
            if f != 0.0 {
                for c in col..k {
                    a[r][c] -= f * a[col][c];
                }
                b[r] -= f * b[col];
            }
        }
    }
    let mut x = vec![0.0; k];
    for r in (0..k).rev() {
        let s: f64 = (r + 1..k).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    Some(x)
}

/// Calls `f` on every `k`-subset of `0..n` in lexicographic order.
fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for t in i + 1..k {
            idx[t] = idx[t - 1] + 1;
        }
    }
}

/// `a'x <= b` rows of a polyhedron.
struct Polyhedron {
    a: Vec<Vec<f64>>,
    b: Vec<f64>,
}

impl Polyhedron {
    /// Optimizes `c'x` (maximizing when `maximize`) over the vertices.
    fn best_vertex(&self, dim: usize, c: &[f64], maximize: bool) -> Option<f64> {
        let mut best: Option<f64> = None;
        for_each_subset(self.a.len(), dim, |active| {
            let a = active.iter().map(|&r| self.a[r].clone()).collect();
            let b = active.iter().map(|&r| self.b[r]).collect();
            let Some(x) = solve_square(a, b) else { return };
            let feasible = self.a.iter().zip(&self.b).all(|(row, &rhs)| {
                row.iter().zip(&x).map(|(p, q)| p * q).sum::<f64>() <= rhs + 1e-9
            });
            if feasible {
                let v: f64 = c.iter().zip(&x).map(|(p, q)| p * q).sum();
                best = Some(match best {
                    None => v,
                    Some(bv) if maximize => bv.max(v),
                    Some(bv) => bv.min(v),
                });
            }
        });
        best
    }
}

/// Optimal value of the LP relaxation, computed on the dual
/// `max { sum(u) : u'A <= w, u >= 0 }` by enumerating its vertices.
pub fn lp_optimum(inst: &ScpInstance) -> Result<f64> {
    let (m, n) = (inst.n_rows(), inst.n_cols());
    if m > MAX_LP_ROWS || n > MAX_LP_COLS {
        return Err(Error::TooLarge {
            what: "LP oracle instance",
            limit: MAX_LP_ROWS.max(MAX_LP_COLS),
        });
    }
    if m == 0 {
        return Ok(0.0);
    }
    let mut poly = Polyhedron {
        a: Vec::new(),
        b: Vec::new(),
    };
    for j in 0..n {
        poly.a.push((0..m).map(|i| if inst.covers(j, i) { 1.0 } else { 0.0 }).collect());
        poly.b.push(inst.cost(j));
    }
    for i in 0..m {
        poly.a.push((0..m).map(|r| if r == i { -1.0 } else { 0.0 }).collect());
        poly.b.push(0.0);
    }
    poly.best_vertex(m, &vec![1.0; m], true)
        .ok_or(Error::Infeasible)
}

/// Strong-fixing value of column `col`:
/// `min { w'z : Az >= e, z >= 0, z_col >= 1 }`, by vertex enumeration of the
/// primal polyhedron.
pub fn sf_oracle_value(inst: &ScpInstance, col: usize) -> Result<f64> {
    let (m, n) = (inst.n_rows(), inst.n_cols());
    if n > MAX_SF_COLS || m > MAX_SF_ROWS {
        return Err(Error::TooLarge {
            what: "strong-fixing oracle instance",
            limit: MAX_SF_COLS,
        });
    }
    let mut poly = Polyhedron {
        a: Vec::new(),
        b: Vec::new(),
    };
    // -A z <= -e
    for i in 0..m {
        poly.a.push((0..n).map(|j| if inst.covers(j, i) { -1.0 } else { 0.0 }).collect());
        poly.b.push(-1.0);
    }
    // -z <= 0, and -z_col <= -1
    for j in 0..n {
        poly.a.push((0..n).map(|t| if t == j { -1.0 } else { 0.0 }).collect());
        poly.b.push(if j == col { -1.0 } else { 0.0 });
    }
    poly.best_vertex(n, inst.costs(), false).ok_or(Error::Infeasible)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::fixtures::*;
    use crate::tiny::random_tiny;

    #[test]
    fn exact_values() {
        assert_eq!(exact_optimum(&t1()).unwrap(), (1.0, vec![1]));
        let (v, cover) = exact_optimum(&t2()).unwrap();
        assert_eq!(v, 3.0);
        assert!(cover == vec![0, 2] || cover == vec![0, 1]);
        assert_eq!(exact_optimum(&identity2()).unwrap(), (2.0, vec![0, 1]));
        let empty = ScpInstance::new(vec![4.0], vec![]).unwrap();
        assert_eq!(exact_optimum(&empty).unwrap(), (0.0, vec![]));
    }

    #[test]
    fn lp_values() {
        assert!((lp_optimum(&t1()).unwrap() - 1.0).abs() < 1e-12);
        assert!((lp_optimum(&identity2()).unwrap() - 2.0).abs() < 1e-12);
        assert!((lp_optimum(&single(5.0)).unwrap() - 5.0).abs() < 1e-12);
    }

    #[test]
    fn fix_validity_examples() {
        assert!(fix_validity(&t1(), 2, FixBound::Zero, 1.0).unwrap());
        assert!(!fix_validity(&t1(), 1, FixBound::Zero, 1.0).unwrap());
        assert!(fix_validity(&t2(), 0, FixBound::One, 3.0).unwrap());
        assert!(matches!(
            fix_validity(&t1(), 0, FixBound::Zero, 0.5),
            Err(Error::InvalidBound { .. })
        ));
    }

    #[test]
    fn sf_values_for_t1() {
        let vals: Vec<f64> = (0..3).map(|j| sf_oracle_value(&t1(), j).unwrap()).collect();
        for (v, want) in vals.iter().zip([2.0, 1.0, 4.0]) {
            assert!((v - want).abs() < 1e-12, "{vals:?}");
        }
        assert!((sf_oracle_value(&single(5.0), 0).unwrap() - 5.0).abs() < 1e-12);
    }

    #[test]
    fn size_caps() {
        let wide = ScpInstance::new(vec![1.0; 21], vec![(0..21).collect()]).unwrap();
        assert!(matches!(exact_optimum(&wide), Err(Error::TooLarge { .. })));
        assert!(matches!(lp_optimum(&wide), Err(Error::TooLarge { .. })));
        assert!(matches!(sf_oracle_value(&wide, 0), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn lp_bound_below_integer_optimum() {
        for seed in 0..200 {
            let inst = random_tiny(seed, 6, 8, 10);
            let lp = lp_optimum(&inst).unwrap();
            let (ip, cover) = exact_optimum(&inst).unwrap();
            assert!(lp <= ip + 1e-9, "seed {seed}: lp {lp} > ip {ip}");
            assert!(inst.is_cover(&cover));
            // the restricted LP for a column of an optimal cover never exceeds it
            for &j in &cover {
                assert!(sf_oracle_value(&inst, j).unwrap() <= ip + 1e-9);
            }
        }
    }
}

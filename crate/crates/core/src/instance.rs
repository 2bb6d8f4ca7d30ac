//! Set-covering instances and the sub-instances left behind by fixing.
//!
//! An instance is `min { w'z : Az >= e, z in {0,1}^n }` with a sparse 0/1
//! matrix `A` kept both row-major and column-major. Indices are 0-based
//! everywhere in memory; the file formats shift them to 1-based.

use std::collections::BTreeSet;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ScpInstance {
    costs: Vec<f64>,
    rows: Vec<Vec<usize>>,
    cols: Vec<Vec<usize>>,
    integral: bool,
}

impl ScpInstance {
    /// Builds and validates an instance from costs and per-row column lists.
    ///
    /// Row lists may arrive unsorted; they are sorted here. Rows with no
    /// column make the instance infeasible and are rejected.
    pub fn new(costs: Vec<f64>, rows: Vec<Vec<usize>>) -> Result<Self> {
        validate(costs, rows)
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.costs.len()
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn cost(&self, col: usize) -> f64 {
        self.costs[col]
    }

    pub fn costs(&self) -> &[f64] {
        &self.costs
    }

    /// Columns covering row `row`, strictly increasing.
    pub fn row(&self, row: usize) -> &[usize] {
        &self.rows[row]
    }

    /// Rows covered by column `col`, strictly increasing.
    pub fn col(&self, col: usize) -> &[usize] {
        &self.cols[col]
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn cols(&self) -> &[Vec<usize>] {
        &self.cols
    }

    /// True when every cost is an integer, which is the case for the
    /// OR-Library data and for generated instances.
    pub fn has_integral_costs(&self) -> bool {
        self.integral
    }

    pub fn covers(&self, col: usize, row: usize) -> bool {
        self.cols[col].binary_search(&row).is_ok()
    }

    /// Whether the chosen columns cover every row.
    pub fn is_cover(&self, chosen: &[usize]) -> bool {
        let mut hit = vec![false; self.n_rows()];
        for &j in chosen {
            for &i in &self.cols[j] {
                hit[i] = true;
            }
        }
        hit.into_iter().all(|h| h)
    }

    pub fn cover_cost(&self, chosen: &[usize]) -> f64 {
        chosen.iter().map(|&j| self.costs[j]).sum()
    }

    /// Columns that cover no row at all.
    pub fn empty_columns(&self) -> Vec<usize> {
        (0..self.n_cols()).filter(|&j| self.cols[j].is_empty()).collect()
    }
}

/// Checks raw instance data and assembles the two sparse views.
pub fn validate(costs: Vec<f64>, mut rows: Vec<Vec<usize>>) -> Result<ScpInstance> {
    let n = costs.len();
    for (col, &cost) in costs.iter().enumerate() {
        // NaN fails this comparison as well
        if !(cost > 0.0) || !cost.is_finite() {
            return Err(Error::NonPositiveCost { col, cost });
        }
    }
    let mut cols = vec![Vec::new(); n];
    for (i, row) in rows.iter_mut().enumerate() {
        if row.is_empty() {
            return Err(Error::EmptyRow { row: i });
        }
        row.sort_unstable();
        for w in row.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateIndex { row: i, col: w[0] });
            }
        }
        if let Some(&last) = row.last() {
            if last >= n {
                return Err(Error::IndexOutOfRange { index: last, limit: n });
            }
        }
        for &j in row.iter() {
            cols[j].push(i);
        }
    }
    let integral = costs.iter().all(|c| c.fract() == 0.0);
    Ok(ScpInstance {
        costs,
        rows,
        cols,
        integral,
    })
}

/// A sub-instance produced by fixing columns and deleting rows, together with
/// the bookkeeping needed to translate results back to the original instance.
///
/// `col_map` and `row_map` send local indices to original (0-based) indices;
/// fixed sets are stored in original indices.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedInstance {
    instance: ScpInstance,
    col_map: Vec<usize>,
    row_map: Vec<usize>,
    fixed_to_one: BTreeSet<usize>,
    fixed_to_zero: BTreeSet<usize>,
    cost_offset: f64,
}

impl ReducedInstance {
    pub fn identity(instance: ScpInstance) -> Self {
        let col_map = (0..instance.n_cols()).collect();
        let row_map = (0..instance.n_rows()).collect();
        ReducedInstance {
            instance,
            col_map,
            row_map,
            fixed_to_one: BTreeSet::new(),
            fixed_to_zero: BTreeSet::new(),
            cost_offset: 0.0,
        }
    }

    pub fn instance(&self) -> &ScpInstance {
        &self.instance
    }

    pub fn into_instance(self) -> ScpInstance {
        self.instance
    }

    pub fn col_map(&self) -> &[usize] {
        &self.col_map
    }

    pub fn row_map(&self) -> &[usize] {
        &self.row_map
    }

    pub fn fixed_to_one(&self) -> &BTreeSet<usize> {
        &self.fixed_to_one
    }

    pub fn fixed_to_zero(&self) -> &BTreeSet<usize> {
        &self.fixed_to_zero
    }

    /// Sum of the original costs of every column fixed to one.
    pub fn cost_offset(&self) -> f64 {
        self.cost_offset
    }

    pub fn n_fixed(&self) -> usize {
        self.fixed_to_one.len() + self.fixed_to_zero.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instance.n_rows() == 0 && self.instance.n_cols() == 0
    }

    /// Applies a further reduction, with index sets given in this reduced
    /// instance's local numbering, and composes the bookkeeping.
    pub fn restrict(
        &self,
        drop_cols_to_zero: &[usize],
        fix_cols_to_one: &[usize],
        drop_rows: &[usize],
    ) -> Result<ReducedInstance> {
        let step = restrict(&self.instance, drop_cols_to_zero, fix_cols_to_one, drop_rows)?;
        Ok(self.compose(step))
    }

    /// Fixes every column that covers no surviving row to zero.
    pub fn drop_empty_columns(&self) -> Result<ReducedInstance> {
        let empty = self.instance.empty_columns();
        if empty.is_empty() {
            return Ok(self.clone());
        }
        self.restrict(&empty, &[], &[])
    }

    /// Composes `inner`, a reduction of `self.instance()`, onto `self`.
    pub fn compose(&self, inner: ReducedInstance) -> ReducedInstance {
        let outer_col = |j: usize| self.col_map[j];
        let mut fixed_to_one = self.fixed_to_one.clone();
        fixed_to_one.extend(inner.fixed_to_one.iter().map(|&j| outer_col(j)));
        let mut fixed_to_zero = self.fixed_to_zero.clone();
        fixed_to_zero.extend(inner.fixed_to_zero.iter().map(|&j| outer_col(j)));
        ReducedInstance {
            col_map: inner.col_map.iter().map(|&j| outer_col(j)).collect(),
            row_map: inner.row_map.iter().map(|&i| self.row_map[i]).collect(),
            instance: inner.instance,
            fixed_to_one,
            fixed_to_zero,
            cost_offset: self.cost_offset + inner.cost_offset,
        }
    }
}

/// Removes columns fixed to zero, columns fixed to one together with every
/// row they cover, and the listed rows.
///
/// Fails with [`Error::InfeasibleReduction`] when a surviving row loses all of
/// its columns, which means the fixing was unsound (usually an invalid bound).
/// When the columns fixed to one cover everything, the result has no rows but
/// keeps its remaining columns.
pub fn restrict(
    inst: &ScpInstance,
    drop_cols_to_zero: &[usize],
    fix_cols_to_one: &[usize],
    drop_rows: &[usize],
) -> Result<ReducedInstance> {
    let n = inst.n_cols();
    let m = inst.n_rows();
    let mut col_state = vec![0u8; n]; // 0 free, 1 to zero, 2 to one
    for &j in drop_cols_to_zero {
        if j >= n {
            return Err(Error::IndexOutOfRange { index: j, limit: n });
        }
        col_state[j] = 1;
    }
    for &j in fix_cols_to_one {
        if j >= n {
            return Err(Error::IndexOutOfRange { index: j, limit: n });
        }
        if col_state[j] == 1 {
            return Err(Error::OverlappingFixings { col: j });
        }
        col_state[j] = 2;
    }
    let mut row_alive = vec![true; m];
    for &i in drop_rows {
        if i >= m {
            return Err(Error::IndexOutOfRange { index: i, limit: m });
        }
        row_alive[i] = false;
    }
    let mut fixed_to_one = BTreeSet::new();
    let mut fixed_to_zero = BTreeSet::new();
    let mut cost_offset = 0.0;
    for j in 0..n {
        match col_state[j] {
            1 => {
                fixed_to_zero.insert(j);
            }
            2 => {
                fixed_to_one.insert(j);
                cost_offset += inst.cost(j);
                for &i in inst.col(j) {
                    row_alive[i] = false;
                }
            }
            _ => {}
        }
    }

    let col_map: Vec<usize> = (0..n).filter(|&j| col_state[j] == 0).collect();
    let mut new_index = vec![usize::MAX; n];
    for (local, &j) in col_map.iter().enumerate() {
        new_index[j] = local;
    }
    let row_map: Vec<usize> = (0..m).filter(|&i| row_alive[i]).collect();
    let mut rows = Vec::with_capacity(row_map.len());
    for &i in &row_map {
        let row: Vec<usize> = inst
            .row(i)
            .iter()
            .filter(|&&j| col_state[j] == 0)
            .map(|&j| new_index[j])
            .collect();
        if row.is_empty() {
            return Err(Error::InfeasibleReduction { row: i });
        }
        rows.push(row);
    }
    let costs = col_map.iter().map(|&j| inst.cost(j)).collect();
    let instance = validate(costs, rows)?;
    Ok(ReducedInstance {
        instance,
        col_map,
        row_map,
        fixed_to_one,
        fixed_to_zero,
        cost_offset,
    })
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::ScpInstance;

    /// Two rows, three columns: rows {1,2} and {2,3}, costs (1,1,3).
    pub fn t1() -> ScpInstance {
        ScpInstance::new(vec![1.0, 1.0, 3.0], vec![vec![0, 1], vec![1, 2]]).unwrap()
    }

    /// Rows {1}, {1,2}, {2,3}, costs (2,1,1).
    pub fn t2() -> ScpInstance {
        ScpInstance::new(vec![2.0, 1.0, 1.0], vec![vec![0], vec![0, 1], vec![1, 2]]).unwrap()
    }

    pub fn identity2() -> ScpInstance {
        ScpInstance::new(vec![1.0, 1.0], vec![vec![0], vec![1]]).unwrap()
    }

    pub fn single(cost: f64) -> ScpInstance {
        ScpInstance::new(vec![cost], vec![vec![0]]).unwrap()
    }
}

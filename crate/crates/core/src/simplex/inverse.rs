//! Explicit inverse of the working basis.
//!
//! The working basis `W` has one row per tight dual constraint (a column of
//! `A`) and one column per basic dual variable (a row of `A`). Its inverse is
//! stored row-major with rows indexed by basic-variable position and columns
//! by tight-constraint position, so `u_basic = inv * w_tight`.

#[derive(Debug, Clone, Default)]
pub(crate) struct DenseInverse {
    rows: Vec<Vec<f64>>,
}

impl DenseInverse {
    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    #[cfg(test)]
    pub fn get(&self, c: usize, r: usize) -> f64 {
        self.rows[c][r]
    }

    /// `inv * h`.
    pub fn mul(&self, h: &[f64]) -> Vec<f64> {
        self.rows
            .iter()
            .map(|row| row.iter().zip(h).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `inv' * c`.
    pub fn tmul(&self, c: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.dim()];
        for (row, &cc) in self.rows.iter().zip(c) {
            if cc != 0.0 {
                for (yy, a) in y.iter_mut().zip(row) {
                    *yy += cc * a;
                }
            }
        }
        y
    }

    pub fn column(&self, r: usize) -> Vec<f64> {
        self.rows.iter().map(|row| row[r]).collect()
    }

    /// Replaces the basic variable at position `c`; `d = inv * h` where `h`
    /// is the entering variable's column in the working basis.
    pub fn replace_column(&mut self, c: usize, d: &[f64]) {
        let pivot = d[c];
        let pivot_row: Vec<f64> = self.rows[c].iter().map(|a| a / pivot).collect();
        for (k, row) in self.rows.iter_mut().enumerate() {
            if k == c {
                row.copy_from_slice(&pivot_row);
            } else if d[k] != 0.0 {
                for (a, p) in row.iter_mut().zip(&pivot_row) {
                    *a -= d[k] * p;
                }
            }
        }
    }

    /// Replaces the tight constraint at position `r` by one whose
    /// coefficients over the basic variables are `g`.
    pub fn replace_row(&mut self, r: usize, g: &[f64]) -> Option<()> {
        let col = self.column(r);
        let denom: f64 = g.iter().zip(&col).map(|(a, b)| a * b).sum();
        if denom == 0.0 {
            return None;
        }
        let mut z = self.tmul(g);
        z[r] -= 1.0;
        for (row, &cc) in self.rows.iter_mut().zip(&col) {
            if cc != 0.0 {
                let f = cc / denom;
                for (a, zz) in row.iter_mut().zip(&z) {
                    *a -= f * zz;
                }
            }
        }
        Some(())
    }

    /// Borders the basis with a new basic variable (column `h` over the
    /// current tight constraints) and a new tight constraint (row `g` over the
    /// current basic variables) meeting in `corner`.
    pub fn grow(&mut self, h: &[f64], g: &[f64], corner: f64) -> Option<()> {
        let d = self.mul(h);
        let b = self.tmul(g);
        let sigma = corner - g.iter().zip(&d).map(|(a, x)| a * x).sum::<f64>();
        if sigma == 0.0 {
            return None;
        }
        for (row, &dc) in self.rows.iter_mut().zip(&d) {
            for (a, &bb) in row.iter_mut().zip(&b) {
                *a += dc * bb / sigma;
            }
            row.push(-dc / sigma);
        }
        let mut last: Vec<f64> = b.iter().map(|bb| -bb / sigma).collect();
        last.push(1.0 / sigma);
        self.rows.push(last);
        Some(())
    }

    /// Drops basic position `c` and tight position `r`. The last position of
    /// each kind moves into the freed slot, mirroring `Vec::swap_remove`.
    pub fn shrink(&mut self, c: usize, r: usize) -> Option<()> {
        let pivot = self.rows[c][r];
        if pivot == 0.0 {
            return None;
        }
        let prow = self.rows[c].clone();
        for (k, row) in self.rows.iter_mut().enumerate() {
            if k != c {
                let f = row[r] / pivot;
                if f != 0.0 {
                    for (a, p) in row.iter_mut().zip(&prow) {
                        *a -= f * p;
                    }
                }
            }
        }
        self.rows.swap_remove(c);
        for row in &mut self.rows {
            row.swap_remove(r);
        }
        Some(())
    }

    /// Inverts `w` (row-major, square) by Gauss-Jordan elimination with
    /// partial pivoting, returning `None` when a pivot falls below `tol`.
    pub fn factor(w: &[Vec<f64>], tol: f64) -> Option<Self> {
        let k = w.len();
        // augmented [W | I], inverted in place
        let mut a: Vec<Vec<f64>> = w
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let mut r = row.clone();
                r.extend((0..k).map(|j| if i == j { 1.0 } else { 0.0 }));
                r
            })
            .collect();
        for col in 0..k {
            let piv = (col..k).max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))?;
            if a[piv][col].abs() < tol {
                return None;
            }
            a.swap(col, piv);
            let p = a[col][col];
            for v in a[col].iter_mut() {
                *v /= p;
            }
            let pivot_row = a[col].clone();
            for (i, row) in a.iter_mut().enumerate() {
                if i != col && row[col] != 0.0 {
                    let f = row[col];
                    for (v, pv) in row.iter_mut().zip(&pivot_row) {
                        *v -= f * pv;
                    }
                }
            }
        }
        // right half is W^-1: rows by basic position, columns by tight position
        let winv: Vec<Vec<f64>> = a.into_iter().map(|row| row[k..].to_vec()).collect();
        Some(DenseInverse { rows: winv })
    }
}

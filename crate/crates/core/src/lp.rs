//! Dense two-phase primal simplex for small-row, many-column programs.
//!
//! Solves `max c.x  s.t.  A_eq x = b_eq,  A_le x <= b_le,  x >= 0`.
//! Pivoting is deterministic: Dantzig pricing with lowest-index ties, falling
//! back to Bland's rule after a run of degenerate pivots. The final basic
//! solution and duals are recomputed from the original data by Gaussian
//! elimination on the basis matrix.

const PRICE_TOL: f64 = 1e-11;
const PIVOT_TOL: f64 = 1e-11;
const FEAS_TOL: f64 = 1e-10;
const DEGENERATE_SWITCH: usize = 50;
const MAX_PIVOTS: usize = 100_000;

#[derive(Clone, Debug, Default)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub eq_rows: Vec<Vec<f64>>,
    pub eq_rhs: Vec<f64>,
    pub le_rows: Vec<Vec<f64>>,
    pub le_rhs: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct LpSolution {
    pub value: f64,
    pub x: Vec<f64>,
    /// Structural columns in the final basis, ascending.
    pub basic: Vec<usize>,
    pub duals_eq: Vec<f64>,
    pub duals_le: Vec<f64>,
}

#[derive(Clone, Debug)]
pub enum LpOutcome {
    Optimal(LpSolution),
    Infeasible,
    Unbounded,
}

struct Tableau {
    t: Vec<Vec<f64>>,
    rhs: Vec<f64>,
    basis: Vec<usize>,
    active: Vec<bool>,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.t[row][col];
        for v in self.t[row].iter_mut() {
            *v /= p;
        }
        self.rhs[row] /= p;
        self.t[row][col] = 1.0;
        let pivot_row = self.t[row].clone();
        let pivot_rhs = self.rhs[row];
        for i in 0..self.t.len() {
            if i == row {
                continue;
            }
            let f = self.t[i][col];
            if f == 0.0 {
                continue;
            }
            for (v, &pv) in self.t[i].iter_mut().zip(&pivot_row) {
                *v -= f * pv;
            }
            self.t[i][col] = 0.0;
            self.rhs[i] -= f * pivot_rhs;
            if self.rhs[i].abs() < 1e-15 {
                self.rhs[i] = 0.0;
            }
        }
        self.basis[row] = col;
    }

    /// Runs primal simplex on `cost` over columns where `allowed` holds.
    /// Returns false when unbounded.
    fn optimize(&mut self, cost: &[f64], allowed: &dyn Fn(usize) -> bool) -> bool {
        let ncols = cost.len();
        let mut degenerate_run = 0usize;
        let mut is_basic = vec![false; ncols];
        for (i, &b) in self.basis.iter().enumerate() {
            if self.active[i] {
                is_basic[b] = true;
            }
        }
        for _ in 0..MAX_PIVOTS {
            let rows: Vec<usize> = (0..self.t.len()).filter(|&i| self.active[i]).collect();
            let cb: Vec<f64> = rows.iter().map(|&i| cost[self.basis[i]]).collect();
            let bland = degenerate_run >= DEGENERATE_SWITCH;
            let mut entering = None;
            let mut best = PRICE_TOL;
            for j in 0..ncols {
                if is_basic[j] || !allowed(j) {
                    continue;
                }
                let mut d = cost[j];
                for (k, &i) in rows.iter().enumerate() {
                    d -= cb[k] * self.t[i][j];
                }
                if d > best {
                    entering = Some(j);
                    if bland {
                        break;
                    }
                    best = d;
                }
            }
            let Some(e) = entering else {
                return true;
            };
            let mut leave: Option<(usize, f64)> = None;
            for &i in &rows {
                let a = self.t[i][e];
                if a > PIVOT_TOL {
                    let ratio = self.rhs[i].max(0.0) / a;
                    leave = match leave {
                        None => Some((i, ratio)),
                        Some((li, lr)) => {
                            if ratio < lr - 1e-14
                                || (ratio <= lr + 1e-14 && self.basis[i] < self.basis[li])
                            {
                                Some((i, ratio))
                            } else {
                                Some((li, lr))
                            }
                        }
                    }
                }
            }
            let Some((r, ratio)) = leave else {
                return false;
            };
            degenerate_run = if ratio <= 1e-14 { degenerate_run + 1 } else { 0 };
            is_basic[self.basis[r]] = false;
            is_basic[e] = true;
            self.pivot(r, e);
        }
        true
    }
}

/// Solves `m x = rhs` by Gaussian elimination with partial pivoting.
fn solve_dense(mut m: Vec<Vec<f64>>, mut rhs: Vec<f64>) -> Option<Vec<f64>> {
    let n = rhs.len();
    for c in 0..n {
        let p = (c..n).max_by(|&a, &b| m[a][c].abs().total_cmp(&m[b][c].abs()))?;
        if m[p][c].abs() < 1e-14 {
            return None;
        }
        m.swap(c, p);
        rhs.swap(c, p);
        for r in c + 1..n {
            let f = m[r][c] / m[c][c];
            if f != 0.0 {
                for k in c..n {
                    m[r][k] -= f * m[c][k];
                }
                rhs[r] -= f * rhs[c];
            }
        }
    }
    let mut x = vec![0.0; n];
    for c in (0..n).rev() {
        let s: f64 = (c + 1..n).map(|k| m[c][k] * x[k]).sum();
        x[c] = (rhs[c] - s) / m[c][c];
    }
    Some(x)
}

impl LinearProgram {
    pub fn n_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn solve(&self) -> LpOutcome {
        let n = self.n_vars();
        let m_eq = self.eq_rows.len();
        let m_le = self.le_rows.len();
        let m = m_eq + m_le;
        // columns: structural | slacks (one per le row) | artificials (one per row)
        let n_slack = m_le;
        let art0 = n + n_slack;
        let ncols = art0 + m;
        // original (sign-normalized) rows over structural + slack columns
        let mut orig: Vec<Vec<f64>> = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        let mut sign = Vec::with_capacity(m);
        for (row, &b) in self.eq_rows.iter().zip(&self.eq_rhs) {
            let s = if b < 0.0 { -1.0 } else { 1.0 };
            let mut r: Vec<f64> = row.iter().map(|v| v * s).collect();
            r.resize(n + n_slack, 0.0);
            orig.push(r);
            rhs.push(b * s);
            sign.push(s);
        }
        for (k, (row, &b)) in self.le_rows.iter().zip(&self.le_rhs).enumerate() {
            let s = if b < 0.0 { -1.0 } else { 1.0 };
            let mut r: Vec<f64> = row.iter().map(|v| v * s).collect();
            r.resize(n + n_slack, 0.0);
            r[n + k] = s;
            orig.push(r);
            rhs.push(b * s);
            sign.push(s);
        }
        let mut t = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        for (i, r) in orig.iter().enumerate() {
            let mut row = r.clone();
            row.resize(ncols, 0.0);
            let slack_basic = i >= m_eq && sign[i] > 0.0;
            if slack_basic {
                basis.push(n + (i - m_eq));
            } else {
                row[art0 + i] = 1.0;
                basis.push(art0 + i);
            }
            t.push(row);
        }
        let mut tab = Tableau { t, rhs: rhs.clone(), basis, active: vec![true; m] };

        // phase 1
        let needs_phase1 = tab.basis.iter().any(|&b| b >= art0);
        if needs_phase1 {
            let mut cost1 = vec![0.0; ncols];
            for c in cost1.iter_mut().skip(art0) {
                *c = -1.0;
            }
            tab.optimize(&cost1, &|_| true);
            let infeas: f64 = (0..m)
                .filter(|&i| tab.basis[i] >= art0)
                .map(|i| tab.rhs[i])
                .sum();
            if infeas > FEAS_TOL {
                return LpOutcome::Infeasible;
            }
            // drive zero-level artificials out of the basis
            for i in 0..m {
                if tab.basis[i] < art0 {
                    continue;
                }
                let col = (0..art0).find(|&j| tab.t[i][j].abs() > 1e-9 && !tab.basis.contains(&j));
                match col {
                    Some(j) => tab.pivot(i, j),
                    None => tab.active[i] = false,
                }
            }
        }

        // phase 2
        let mut cost2 = vec![0.0; ncols];
        cost2[..n].copy_from_slice(&self.objective);
        if !tab.optimize(&cost2, &|j| j < art0) {
            return LpOutcome::Unbounded;
        }

        // refine the basic solution and duals from the original data
        let rows: Vec<usize> = (0..m).filter(|&i| tab.active[i]).collect();
        let basic_cols: Vec<usize> = rows.iter().map(|&i| tab.basis[i]).collect();
        let bmat: Vec<Vec<f64>> = rows
            .iter()
            .map(|&i| basic_cols.iter().map(|&c| orig[i][c]).collect())
            .collect();
        let b_rhs: Vec<f64> = rows.iter().map(|&i| rhs[i]).collect();
        let xb = solve_dense(bmat.clone(), b_rhs).unwrap_or_else(|| {
            rows.iter().map(|&i| tab.rhs[i]).collect()
        });
        let mut x = vec![0.0; n];
        let mut basic = Vec::new();
        for (&c, &v) in basic_cols.iter().zip(&xb) {
            if c < n {
                x[c] = v.max(0.0);
                basic.push(c);
            }
        }
        basic.sort_unstable();
        let bt: Vec<Vec<f64>> = (0..rows.len())
            .map(|r| (0..rows.len()).map(|c| bmat[c][r]).collect())
            .collect();
        let cb: Vec<f64> = basic_cols.iter().map(|&c| cost2[c]).collect();
        let y = solve_dense(bt, cb).unwrap_or_else(|| vec![0.0; rows.len()]);
        let mut duals = vec![0.0; m];
        for (&i, &yi) in rows.iter().zip(&y) {
            duals[i] = yi * sign[i];
        }
        let value = x.iter().zip(&self.objective).map(|(a, b)| a * b).sum();
        LpOutcome::Optimal(LpSolution {
            value,
            x,
            basic,
            duals_le: duals.split_off(m_eq),
            duals_eq: duals,
        })
    }
}

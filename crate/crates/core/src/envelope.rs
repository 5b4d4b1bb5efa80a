//! Constrained upper concave envelopes on a probability simplex.
//!
//! An auxiliary-variable bound of the form `sum_u P(u) f(P(.|u))` with the
//! barycenter constraint `sum_u P(u) P(.|u) = P` is an LP in the weights once
//! the posteriors are restricted to a finite atom set. Atoms come from a
//! regular simplex grid (nested under doubling of the resolution), plus the
//! vertices and the base PMF itself. Optional column generation then adds
//! atoms that maximize the LP reduced cost by local search.

use crate::error::{Error, Result};
use crate::lp::{LinearProgram, LpOutcome, LpSolution};

/// Per-posterior score and linear-constraint coefficients.
pub trait AtomFunctional: Sync {
    /// Dimension of the posterior simplex.
    fn dim(&self) -> usize;

    /// Number of inequality constraints `sum_g w_g c_k(g) <= bound_k`.
    fn n_constraints(&self) -> usize {
        0
    }

    fn score(&self, q: &[f64]) -> f64;

    /// Constraint coefficients at `q`; empty when there are none.
    fn constraints(&self, _q: &[f64]) -> Vec<f64> {
        Vec::new()
    }
}

/// All points of the simplex with coordinates in `{0, 1/N, ..., 1}`, in
/// lexicographic order of their integer numerators.
pub fn simplex_grid(dim: usize, resolution: usize) -> Vec<Vec<f64>> {
    fn rec(dim: usize, left: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<f64>>) {
        if cur.len() + 1 == dim {
            cur.push(left);
            out.push(cur.iter().map(|&k| k as f64 / n as f64).collect());
            cur.pop();
            return;
        }
        for k in (0..=left).rev() {
            cur.push(k);
            rec(dim, left - k, n, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if dim == 0 {
        return out;
    }
    let n = resolution.max(1);
    rec(dim, n, n, &mut Vec::with_capacity(dim), &mut out);
    out
}

#[derive(Clone, Copy, Debug)]
pub struct EnvelopeOptions {
    /// Rounds of reduced-cost column generation after the grid LP; zero keeps
    /// the pure grid solution.
    pub column_rounds: usize,
}

impl Default for EnvelopeOptions {
    fn default() -> Self {
        EnvelopeOptions { column_rounds: crate::defaults::COLUMN_ROUNDS }
    }
}

pub struct EnvelopeProblem<'a> {
    pub base: Vec<f64>,
    pub atoms: Vec<Vec<f64>>,
    pub functional: &'a dyn AtomFunctional,
    pub bounds: Vec<f64>,
    /// Initial step of the column-generation local search, normally the grid
    /// spacing.
    pub search_step: f64,
}

#[derive(Clone, Debug)]
pub struct EnvelopeSolution {
    pub value: f64,
    /// `(atom index, weight)` for the nonzero weights, ascending by index.
    pub weights: Vec<(usize, f64)>,
    /// Atom list including any generated atoms.
    pub atoms: Vec<Vec<f64>>,
}

impl EnvelopeSolution {
    /// `(posterior, weight)` pairs of the support.
    pub fn support(&self) -> Vec<(&[f64], f64)> {
        self.weights.iter().map(|&(i, w)| (self.atoms[i].as_slice(), w)).collect()
    }
}

impl<'a> EnvelopeProblem<'a> {
    /// Grid atoms of the given resolution plus vertices and the base PMF,
    /// restricted to the support of `base`.
    pub fn on_grid(
        base: Vec<f64>,
        resolution: usize,
        functional: &'a dyn AtomFunctional,
        bounds: Vec<f64>,
    ) -> Self {
        let mut atoms = simplex_grid(base.len(), resolution);
        if !atoms.iter().any(|a| a == &base) {
            atoms.push(base.clone());
        }
        let search_step = 1.0 / resolution.max(1) as f64;
        EnvelopeProblem { base, atoms, functional, bounds, search_step }
    }

    fn support_rows(&self) -> Vec<usize> {
        (0..self.base.len()).filter(|&i| self.base[i] > 0.0).collect()
    }

    fn admissible(&self, q: &[f64]) -> bool {
        q.iter().zip(&self.base).all(|(&a, &b)| b > 0.0 || a == 0.0)
    }
}

fn build_lp(
    rows: &[usize],
    base: &[f64],
    atoms: &[Vec<f64>],
    scores: &[f64],
    cons: &[Vec<f64>],
    bounds: &[f64],
) -> LinearProgram {
    LinearProgram {
        objective: scores.to_vec(),
        eq_rows: rows.iter().map(|&i| atoms.iter().map(|a| a[i]).collect()).collect(),
        eq_rhs: rows.iter().map(|&i| base[i]).collect(),
        le_rows: (0..bounds.len()).map(|k| cons.iter().map(|c| c[k]).collect()).collect(),
        le_rhs: bounds.to_vec(),
    }
}

/// Slack added to inequality bounds so boundary-feasible atoms (equal up to
/// rounding) stay feasible.
const BOUND_SLACK: f64 = 1e-10;

/// Maximizes `sum_g w_g f(g)` over weights with `sum_g w_g g = base`,
/// `w >= 0` and the functional's inequality constraints.
pub fn solve_envelope(p: &EnvelopeProblem<'_>, opts: EnvelopeOptions) -> Result<EnvelopeSolution> {
    let dim = p.functional.dim();
    if p.base.len() != dim {
        return Err(Error::Mismatch(format!(
            "base has {} coordinates, functional expects {dim}",
            p.base.len()
        )));
    }
    if p.bounds.len() != p.functional.n_constraints() {
        return Err(Error::Mismatch("one bound per constraint required".into()));
    }
    let rows = p.support_rows();
    let mut atoms: Vec<Vec<f64>> = p.atoms.iter().filter(|a| p.admissible(a)).cloned().collect();
    if atoms.is_empty() {
        return Err(Error::Invalid("no atom lies on the support of the base PMF".into()));
    }
    let mut scores: Vec<f64> = atoms.iter().map(|a| p.functional.score(a)).collect();
    let mut cons: Vec<Vec<f64>> = atoms.iter().map(|a| p.functional.constraints(a)).collect();
    let bounds: Vec<f64> = p.bounds.iter().map(|b| b + BOUND_SLACK * b.abs().max(1.0)).collect();

    let mut sol = solve_or_infeasible(&build_lp(&rows, &p.base, &atoms, &scores, &cons, &bounds))?;
    for _ in 0..opts.column_rounds {
        let fresh = generate_columns(p, &rows, &atoms, &sol, p.search_step);
        if fresh.is_empty() {
            break;
        }
        for q in fresh {
            scores.push(p.functional.score(&q));
            cons.push(p.functional.constraints(&q));
            atoms.push(q);
        }
        sol = solve_or_infeasible(&build_lp(&rows, &p.base, &atoms, &scores, &cons, &bounds))?;
    }

    let weights: Vec<(usize, f64)> = sol
        .basic
        .iter()
        .map(|&j| (j, sol.x[j]))
        .filter(|&(_, w)| w > 0.0)
        .collect();
    let value = weights.iter().map(|&(j, w)| w * scores[j]).sum();
    Ok(EnvelopeSolution { value, weights, atoms })
}

fn solve_or_infeasible(lp: &LinearProgram) -> Result<LpSolution> {
    match lp.solve() {
        LpOutcome::Optimal(s) => Ok(s),
        LpOutcome::Infeasible => Err(Error::Infeasible("envelope constraints cannot be met".into())),
        LpOutcome::Unbounded => Err(Error::Consistency("envelope LP reported unbounded".into())),
    }
}

const REDUCED_TOL: f64 = 1e-11;
const EXTRA_STARTS: usize = 4;

fn generate_columns(
    p: &EnvelopeProblem<'_>,
    rows: &[usize],
    atoms: &[Vec<f64>],
    sol: &LpSolution,
    spacing: f64,
) -> Vec<Vec<f64>> {
    let f = p.functional;
    let reduced = |q: &[f64]| -> f64 {
        let mut r = f.score(q);
        for (k, &i) in rows.iter().enumerate() {
            r -= sol.duals_eq[k] * q[i];
        }
        if !sol.duals_le.is_empty() {
            for (c, y) in f.constraints(q).iter().zip(&sol.duals_le) {
                r -= c * y;
            }
        }
        r
    };
    let mut ranked: Vec<(usize, f64)> = atoms.iter().enumerate().map(|(i, a)| (i, reduced(a))).collect();
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    let mut starts: Vec<usize> = sol.basic.clone();
    for &(i, _) in ranked.iter().take(EXTRA_STARTS) {
        if !starts.contains(&i) {
            starts.push(i);
        }
    }
    let mut fresh: Vec<Vec<f64>> = Vec::new();
    for &s in &starts {
        let (q, r) = local_ascent(&atoms[s], rows, spacing, &reduced);
        if r > REDUCED_TOL
            && !atoms.iter().chain(&fresh).any(|a| max_abs_diff(a, &q) < 1e-12)
        {
            fresh.push(q);
        }
    }
    fresh
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Compass search along simplex edge directions `e_j - e_i`, restricted to
/// the coordinates in `coords`, halving the step until it drops below 1e-12.
fn local_ascent(
    start: &[f64],
    coords: &[usize],
    step0: f64,
    objective: &dyn Fn(&[f64]) -> f64,
) -> (Vec<f64>, f64) {
    let mut q = start.to_vec();
    let mut val = objective(&q);
    let mut step = step0;
    let mut trial = q.clone();
    while step > 1e-12 {
        let mut improved = false;
        for &i in coords {
            for &j in coords {
                if i == j || q[i] <= 0.0 {
                    continue;
                }
                let t = step.min(q[i]);
                trial.copy_from_slice(&q);
                trial[i] -= t;
                trial[j] += t;
                if t == q[i] {
                    trial[i] = 0.0;
                }
                let v = objective(&trial);
                if v > val + 1e-15 {
                    q.copy_from_slice(&trial);
                    val = v;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    (q, val)
}

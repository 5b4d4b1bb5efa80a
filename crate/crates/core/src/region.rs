//! Single-letter rate-equivocation regions.
//!
//! Each bound splits into a part that depends only on `V` (attached through
//! `Z`) and a part that depends only on `U` (attached through `(X, Y)` or
//! `Y`). Both parts are expectations of a fixed per-posterior score under a
//! barycenter constraint, so each is solved as an envelope LP over posterior
//! atoms (see [`crate::envelope`]).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dist::{Alphabet, Axis, Channel, JointSource};
use crate::envelope::{solve_envelope, AtomFunctional, EnvelopeOptions, EnvelopeProblem, EnvelopeSolution};
use crate::error::{Error, Result};
use crate::info::{cond_entropy, cond_mutual_info, entropy, entropy_of, mutual_info, Bits};
use crate::defaults;

use Axis::{E, U, V, X, Y, Z};

/// Tolerance used when checking Markov structure of an extended source.
const STRUCTURE_TOL: f64 = 1e-9;
/// Slack on rate feasibility checks.
const RATE_TOL: f64 = 1e-9;

/// Which bound a region point comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Outer bound with coded side information at Bob; Alice sees `(X, Y)`.
    Coded,
    /// Outer bound with coded side information; Alice sees only `Y`.
    CodedPublic,
    /// Outer bound with coded side information at Bob and side information
    /// `E` at the eavesdropper.
    CodedEve,
    /// Achievable equivocation with uncoded side information at Bob and
    /// side information `E` at the eavesdropper; Alice sees only `Y`.
    UncodedEve,
    /// Equivocation of plain Slepian-Wolf binning, `H(X|E) - H(Y|Z)`.
    SlepianWolf,
}

impl Mode {
    pub const ALL: [Mode; 5] = [Mode::Coded, Mode::CodedPublic, Mode::CodedEve, Mode::UncodedEve, Mode::SlepianWolf];

    pub fn tag(self) -> &'static str {
        match self {
            Mode::Coded => "coded",
            Mode::CodedPublic => "coded-public",
            Mode::CodedEve => "coded-eve",
            Mode::UncodedEve => "uncoded-eve",
            Mode::SlepianWolf => "slepian-wolf",
        }
    }

    /// Axes `U` is allowed to depend on.
    pub fn u_inputs(self) -> &'static [Axis] {
        match self {
            Mode::Coded | Mode::CodedEve => &[X, Y],
            Mode::CodedPublic | Mode::UncodedEve | Mode::SlepianWolf => &[Y],
        }
    }

    /// Whether the bound carries a `V` part optimized under rate budgets.
    pub fn has_v_part(self) -> bool {
        matches!(self, Mode::Coded | Mode::CodedPublic | Mode::CodedEve)
    }

    /// Cardinality bound on the alphabet of `U`.
    pub fn u_cardinality(self, src: &JointSource) -> Result<usize> {
        let inputs: usize = self
            .u_inputs()
            .iter()
            .map(|&a| src.size(a))
            .product::<Result<usize>>()?;
        Ok(inputs + 1)
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Mode::ALL
            .into_iter()
            .find(|m| m.tag() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown mode `{s}`")))
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SolverOptions {
    /// Grid resolution for posterior atoms; `None` picks the default for the
    /// simplex dimension.
    pub grid_resolution: Option<usize>,
    pub column_rounds: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { grid_resolution: None, column_rounds: defaults::COLUMN_ROUNDS }
    }
}

impl SolverOptions {
    pub fn pure_grid(resolution: usize) -> Self {
        SolverOptions { grid_resolution: Some(resolution), column_rounds: 0 }
    }

    fn resolution(&self, dim: usize) -> usize {
        self.grid_resolution.unwrap_or_else(|| defaults::grid_resolution(dim))
    }

    fn envelope(&self) -> EnvelopeOptions {
        EnvelopeOptions { column_rounds: self.column_rounds }
    }
}

fn require_observables(src: &JointSource) -> Result<()> {
    for a in [X, Y, Z, E] {
        src.size(a)?;
    }
    Ok(())
}

fn check_markov(src: &JointSource, a: &[Axis], b: &[Axis], given: &[Axis], what: &str) -> Result<()> {
    let r = src.markov_residual(a, b, given)?;
    if r > STRUCTURE_TOL {
        return Err(Error::Structure(format!("{what} violated (residual {r:e})")));
    }
    Ok(())
}

/// The `U`-dependent part of the equivocation bound for `mode`, evaluated on
/// a source that already carries `U`.
pub fn u_gain(ext: &JointSource, mode: Mode) -> Result<Bits> {
    require_observables(ext)?;
    ext.size(U)?;
    match mode {
        Mode::Coded | Mode::CodedEve => check_markov(ext, &[Z, E], &[U], &[X, Y], "U must depend on (X, Y) only")?,
        Mode::CodedPublic | Mode::UncodedEve => check_markov(ext, &[X, Z, E], &[U], &[Y], "U must depend on Y only")?,
        Mode::SlepianWolf => return Err(Error::Structure("the Slepian-Wolf baseline has no U part".into())),
    }
    u_gain_terms(ext, mode)
}

/// [`u_gain`] without the structure check.
pub(crate) fn u_gain_terms(ext: &JointSource, mode: Mode) -> Result<Bits> {
    Ok(match mode {
        Mode::Coded | Mode::CodedPublic => cond_entropy(ext, &[X], &[U])? - cond_entropy(ext, &[Y], &[U])?,
        Mode::CodedEve => {
            -cond_mutual_info(ext, &[X, Y], &[E], &[U])? + cond_entropy(ext, &[X], &[E, U])?
                - cond_entropy(ext, &[Y], &[E, U])?
        }
        Mode::UncodedEve => {
            cond_mutual_info(ext, &[Y], &[Z], &[U])? - cond_mutual_info(ext, &[Y], &[E], &[U])?
                + cond_entropy(ext, &[X], &[E, U])?
                - cond_entropy(ext, &[Y], &[E, U])?
        }
        Mode::SlepianWolf => return Err(Error::Structure("the Slepian-Wolf baseline has no U part".into())),
    })
}

/// The `V`-side quantities of the coded-side-information bounds.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VTradeoff {
    pub h_y_given_v: Bits,
    pub i_z_v: Bits,
    pub i_xy_v: Bits,
    pub i_y_v: Bits,
}

pub fn v_tradeoff(ext: &JointSource) -> Result<VTradeoff> {
    require_observables(ext)?;
    ext.size(V)?;
    let others: Vec<Axis> = ext.axes().iter().map(|a| a.axis).filter(|&a| a != Z && a != V).collect();
    check_markov(ext, &others, &[V], &[Z], "V must depend on Z only")?;
    Ok(VTradeoff {
        h_y_given_v: cond_entropy(ext, &[Y], &[V])?,
        i_z_v: mutual_info(ext, &[Z], &[V])?,
        i_xy_v: mutual_info(ext, &[X, Y], &[V])?,
        i_y_v: mutual_info(ext, &[Y], &[V])?,
    })
}

/// Conditional rows `P(target tuple | given symbol)` as dense vectors; rows
/// with zero conditioning mass are all zero.
fn conditional_rows(src: &JointSource, target: &[Axis], given: Axis) -> Result<Vec<Vec<f64>>> {
    let mut keep = target.to_vec();
    keep.push(given);
    let joint = src.marginal(&keep)?;
    let gpos = joint.position(given).expect("kept");
    let gsize = joint.axes()[gpos].size;
    let shape: Vec<usize> = joint.axes().iter().map(|a| a.size).collect();
    let tlen: usize = joint.pmf().len() / gsize;
    let mut rows = vec![vec![0.0; tlen]; gsize];
    let mut idx = vec![0usize; shape.len()];
    for (flat, &p) in joint.pmf().iter().enumerate() {
        crate::dist::unravel(flat, &shape, &mut idx);
        let mut t = 0usize;
        for (pos, &i) in idx.iter().enumerate() {
            if pos != gpos {
                t = t * shape[pos] + i;
            }
        }
        rows[idx[gpos]][t] = p;
    }
    for row in &mut rows {
        let mass: f64 = crate::dist::kahan_sum(row.iter().copied());
        if mass > 0.0 {
            row.iter_mut().for_each(|v| *v /= mass);
        }
    }
    Ok(rows)
}

fn marginalize(joint: &[f64], shape: &[usize], keep: &[usize]) -> Vec<f64> {
    let t = crate::dist::Tensor::new(shape.to_vec(), joint.to_vec()).expect("shape");
    t.marginal(keep).into_data()
}

/// Per-posterior score of the `U` part.
pub(crate) struct UScore {
    mode: Mode,
    nx: usize,
    ny: usize,
    nz: usize,
    ne: usize,
    /// Coded: unused. CodedEve: P(e|x,y) rows indexed by x*ny+y.
    /// CodedPublic: P(x|y). UncodedEve: P(x,z,e|y).
    cond: Vec<Vec<f64>>,
}

impl UScore {
    pub(crate) fn new(src: &JointSource, mode: Mode) -> Result<Self> {
        require_observables(src)?;
        let (nx, ny, nz, ne) = (src.size(X)?, src.size(Y)?, src.size(Z)?, src.size(E)?);
        let cond = match mode {
            Mode::Coded => Vec::new(),
            Mode::CodedEve => {
                let xye = src.marginal_pmf(&[X, Y, E])?;
                (0..nx * ny)
                    .map(|xy| {
                        let row = &xye[xy * ne..(xy + 1) * ne];
                        let m: f64 = row.iter().sum();
                        row.iter().map(|v| if m > 0.0 { v / m } else { 0.0 }).collect()
                    })
                    .collect()
            }
            Mode::CodedPublic => conditional_rows(src, &[X], Y)?,
            Mode::UncodedEve => conditional_rows(src, &[X, Z, E], Y)?,
            Mode::SlepianWolf => return Err(Error::Structure("the Slepian-Wolf baseline has no U part".into())),
        };
        Ok(UScore { mode, nx, ny, nz, ne, cond })
    }
}

impl AtomFunctional for UScore {
    fn dim(&self) -> usize {
        match self.mode {
            Mode::Coded | Mode::CodedEve => self.nx * self.ny,
            _ => self.ny,
        }
    }

    fn score(&self, q: &[f64]) -> f64 {
        let (nx, ny, nz, ne) = (self.nx, self.ny, self.nz, self.ne);
        match self.mode {
            Mode::Coded => {
                let hx = entropy_of(&marginalize(q, &[nx, ny], &[0]));
                let hy = entropy_of(&marginalize(q, &[nx, ny], &[1]));
                hx - hy
            }
            Mode::CodedEve => {
                let mut r = vec![0.0; nx * ny * ne];
                for xy in 0..nx * ny {
                    for e in 0..ne {
                        r[xy * ne + e] = q[xy] * self.cond[xy][e];
                    }
                }
                let shape = [nx, ny, ne];
                let h_xe = entropy_of(&marginalize(&r, &shape, &[0, 2]));
                let h_ye = entropy_of(&marginalize(&r, &shape, &[1, 2]));
                let h_xy = entropy_of(q);
                let h_e = entropy_of(&marginalize(&r, &shape, &[2]));
                let h_xye = entropy_of(&r);
                // H(X|E) - H(Y|E) - I(X,Y;E)
                h_xe - h_ye - h_xy - h_e + h_xye
            }
            Mode::CodedPublic => {
                let mut px = vec![0.0; nx];
                for y in 0..ny {
                    for x in 0..nx {
                        px[x] += q[y] * self.cond[y][x];
                    }
                }
                entropy_of(&px) - entropy_of(q)
            }
            Mode::UncodedEve => {
                // joint over (x, y, z, e)
                let mut r = vec![0.0; nx * ny * nz * ne];
                for x in 0..nx {
                    for y in 0..ny {
                        for z in 0..nz {
                            for e in 0..ne {
                                r[((x * ny + y) * nz + z) * ne + e] = q[y] * self.cond[y][(x * nz + z) * ne + e];
                            }
                        }
                    }
                }
                let shape = [nx, ny, nz, ne];
                let h_z = entropy_of(&marginalize(&r, &shape, &[2]));
                let h_yz = entropy_of(&marginalize(&r, &shape, &[1, 2]));
                let h_xe = entropy_of(&marginalize(&r, &shape, &[0, 3]));
                let h_e = entropy_of(&marginalize(&r, &shape, &[3]));
                // I(Y;Z) - I(Y;E) + H(X|E) - H(Y|E) = H(Z) - H(Y,Z) + H(X,E) - H(E)
                h_z - h_yz + h_xe - h_e
            }
            Mode::SlepianWolf => unreachable!("rejected in UScore::new"),
        }
    }
}

/// Which mutual information the `V` part maximizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VTarget {
    /// `I(X, Y; V)`.
    PrivateAndPublic,
    /// `I(Y; V)`, used when Alice does not see `X`.
    PublicOnly,
}

impl VTarget {
    pub fn for_mode(mode: Mode) -> VTarget {
        match mode {
            Mode::CodedPublic => VTarget::PublicOnly,
            _ => VTarget::PrivateAndPublic,
        }
    }
}

/// Per-posterior score of the `V` part with the `I(Z;V)` and optional
/// `H(Y|V)` constraint coefficients.
struct VScore {
    nx: usize,
    ny: usize,
    target: VTarget,
    with_ra: bool,
    /// P(x,y|z)
    cond: Vec<Vec<f64>>,
    h_target: f64,
    h_z: f64,
}

impl VScore {
    fn new(src: &JointSource, target: VTarget, with_ra: bool) -> Result<Self> {
        require_observables(src)?;
        let h_target = match target {
            VTarget::PrivateAndPublic => entropy(src, &[X, Y])?,
            VTarget::PublicOnly => entropy(src, &[Y])?,
        };
        Ok(VScore {
            nx: src.size(X)?,
            ny: src.size(Y)?,
            target,
            with_ra,
            cond: conditional_rows(src, &[X, Y], Z)?,
            h_target,
            h_z: entropy(src, &[Z])?,
        })
    }

    fn mix(&self, q: &[f64]) -> Vec<f64> {
        let mut r = vec![0.0; self.nx * self.ny];
        for (z, &w) in q.iter().enumerate() {
            if w > 0.0 {
                for (acc, &c) in r.iter_mut().zip(&self.cond[z]) {
                    *acc += w * c;
                }
            }
        }
        r
    }
}

impl AtomFunctional for VScore {
    fn dim(&self) -> usize {
        self.cond.len()
    }

    fn n_constraints(&self) -> usize {
        1 + usize::from(self.with_ra)
    }

    fn score(&self, q: &[f64]) -> f64 {
        let r = self.mix(q);
        match self.target {
            VTarget::PrivateAndPublic => self.h_target - entropy_of(&r),
            VTarget::PublicOnly => self.h_target - entropy_of(&marginalize(&r, &[self.nx, self.ny], &[1])),
        }
    }

    fn constraints(&self, q: &[f64]) -> Vec<f64> {
        let mut c = vec![self.h_z - entropy_of(q)];
        if self.with_ra {
            let r = self.mix(q);
            c.push(entropy_of(&marginalize(&r, &[self.nx, self.ny], &[1])));
        }
        c
    }
}

/// Turns an envelope solution into `P(aux | inputs)`: `P(u|s) = w_u q_u(s) / P(s)`.
fn witness_channel(from: Vec<Alphabet>, to: Axis, base: &[f64], sol: &EnvelopeSolution) -> Channel {
    let support = sol.support();
    let k = support.len().max(1);
    let rows = base
        .iter()
        .enumerate()
        .map(|(s, &ps)| {
            let mut row = vec![0.0; k];
            if ps > 0.0 {
                for (u, &(q, w)) in support.iter().enumerate() {
                    row[u] = w * q[s] / ps;
                }
                let total: f64 = row.iter().sum();
                if total > 0.0 {
                    row.iter_mut().for_each(|v| *v /= total);
                } else {
                    row[0] = 1.0;
                }
            } else {
                row[0] = 1.0;
            }
            Some(row)
        })
        .collect();
    Channel { from, to: Alphabet { axis: to, size: k }, rows }
}

#[derive(Clone, Debug)]
pub struct UOptimum {
    pub value: Bits,
    pub channel: Channel,
}

/// Maximizes the `U` part of the bound for `mode` over admissible `P(u|.)`.
pub fn optimize_u(src: &JointSource, mode: Mode, opts: SolverOptions) -> Result<UOptimum> {
    let score = UScore::new(src, mode)?;
    let inputs = mode.u_inputs();
    let base = src.marginal_pmf(inputs)?;
    let resolution = opts.resolution(base.len());
    let problem = EnvelopeProblem::on_grid(base.clone(), resolution, &score, vec![]);
    let sol = solve_envelope(&problem, opts.envelope())?;
    let from = inputs.iter().map(|&a| src.alphabet(a)).collect::<Result<Vec<_>>>()?;
    Ok(UOptimum { value: sol.value, channel: witness_channel(from, U, &base, &sol) })
}

#[derive(Clone, Debug)]
pub struct VOptimum {
    /// Maximized `I(X,Y;V)` (or `I(Y;V)`).
    pub value: Bits,
    pub i_z_v: Bits,
    pub h_y_given_v: Bits,
    pub channel: Channel,
}

/// Maximizes `I(X,Y;V)` (or `I(Y;V)`) over `P(v|z)` subject to
/// `I(Z;V) <= r_c` and, when `r_a` is finite, `H(Y|V) <= r_a`.
pub fn optimize_v(src: &JointSource, target: VTarget, r_c: Bits, r_a: Bits, opts: SolverOptions) -> Result<VOptimum> {
    if !(r_c >= 0.0) || !(r_a >= 0.0) {
        return Err(Error::Invalid(format!("budgets must be non-negative, got r_a={r_a}, r_c={r_c}")));
    }
    let with_ra = r_a.is_finite();
    let score = VScore::new(src, target, with_ra)?;
    let base = src.marginal_pmf(&[Z])?;
    let resolution = opts.resolution(base.len());
    let mut bounds = vec![r_c.min(score.h_z + 1.0)];
    if with_ra {
        bounds.push(r_a);
    }
    let problem = EnvelopeProblem::on_grid(base.clone(), resolution, &score, bounds);
    let sol = solve_envelope(&problem, opts.envelope()).map_err(|e| match e {
        Error::Infeasible(_) => Error::Infeasible(format!(
            "no V with I(Z;V) <= {r_c} and H(Y|V) <= {r_a}"
        )),
        other => other,
    })?;
    let mut i_z_v = 0.0;
    let mut h_y_given_v = 0.0;
    for (q, w) in sol.support() {
        let c = score.constraints(q);
        i_z_v += w * c[0];
        let r = score.mix(q);
        h_y_given_v += w * entropy_of(&marginalize(&r, &[score.nx, score.ny], &[1]));
    }
    Ok(VOptimum {
        value: sol.value,
        i_z_v,
        h_y_given_v,
        channel: witness_channel(vec![src.alphabet(Z)?], V, &base, &sol),
    })
}

/// Equivocation of plain Slepian-Wolf binning, `H(X|E) - H(Y|Z)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SwEquivocation {
    pub raw: Bits,
    pub clamped: Bits,
}

pub fn sw_equivocation(src: &JointSource) -> Result<SwEquivocation> {
    require_observables(src)?;
    let raw = cond_entropy(src, &[X], &[E])? - cond_entropy(src, &[Y], &[Z])?;
    Ok(SwEquivocation { raw, clamped: raw.max(0.0) })
}

#[derive(Clone, Debug)]
pub struct Bound {
    pub delta_raw: Bits,
    /// `delta_raw` clamped to `[0, H(X)]`.
    pub delta: Bits,
    pub v_part: Option<Bits>,
    pub u_part: Option<Bits>,
    pub h_y_given_v: Option<Bits>,
    pub u_channel: Option<Channel>,
    pub v_channel: Option<Channel>,
}

#[derive(Clone, Debug)]
pub enum Outcome {
    Bound(Bound),
    Infeasible(String),
}

#[derive(Clone, Debug)]
pub struct RegionPoint {
    pub mode: Mode,
    pub r_a: Bits,
    pub r_c: Bits,
    pub outcome: Outcome,
}

impl RegionPoint {
    pub fn bound(&self) -> Option<&Bound> {
        match &self.outcome {
            Outcome::Bound(b) => Some(b),
            Outcome::Infeasible(_) => None,
        }
    }

    pub fn delta(&self) -> Option<Bits> {
        self.bound().map(|b| b.delta)
    }

    pub fn delta_raw(&self) -> Option<Bits> {
        self.bound().map(|b| b.delta_raw)
    }
}

/// Maximal equivocation bound at each `(r_a, r_c)` budget pair.
///
/// For the coded modes the `V` part is solved per budget pair and then
/// replaced by the best value among budget pairs it dominates, which keeps
/// the frontier monotone in both coordinates; the `U` part does not depend on
/// the budgets. The uncoded modes require `r_c >= H(Z)` and `r_a >= H(Y|Z)`.
pub fn region_frontier(
    src: &JointSource,
    mode: Mode,
    budgets: &[(Bits, Bits)],
    opts: SolverOptions,
) -> Result<Vec<RegionPoint>> {
    require_observables(src)?;
    let h_x = entropy(src, &[X])?;
    let clamp = |v: f64| v.clamp(0.0, h_x);
    if !mode.has_v_part() {
        let h_z = entropy(src, &[Z])?;
        let h_y_z = cond_entropy(src, &[Y], &[Z])?;
        let (value, witness) = match mode {
            Mode::UncodedEve => {
                let u = optimize_u(src, mode, opts)?;
                (u.value, Some(u.channel))
            }
            _ => (sw_equivocation(src)?.raw, None),
        };
        return Ok(budgets
            .iter()
            .map(|&(r_a, r_c)| {
                let outcome = if r_c < h_z - RATE_TOL {
                    Outcome::Infeasible(format!("requires uncoded side information, r_c >= H(Z) = {h_z}"))
                } else if r_a < h_y_z - RATE_TOL {
                    Outcome::Infeasible(format!("r_a below H(Y|Z) = {h_y_z}"))
                } else {
                    Outcome::Bound(Bound {
                        delta_raw: value,
                        delta: clamp(value),
                        v_part: None,
                        u_part: witness.as_ref().map(|_| value),
                        h_y_given_v: None,
                        u_channel: witness.clone(),
                        v_channel: None,
                    })
                };
                RegionPoint { mode, r_a, r_c, outcome }
            })
            .collect());
    }

    let u = optimize_u(src, mode, opts)?;
    let target = VTarget::for_mode(mode);
    let raw_v: Vec<Option<VOptimum>> = budgets
        .iter()
        .map(|&(r_a, r_c)| match optimize_v(src, target, r_c, r_a, opts) {
            Ok(v) => Ok(Some(v)),
            Err(Error::Infeasible(_)) => Ok(None),
            Err(e) => Err(e),
        })
        .collect::<Result<_>>()?;

    let mut points = Vec::with_capacity(budgets.len());
    for (i, &(r_a, r_c)) in budgets.iter().enumerate() {
        // best V among budget pairs dominated by this one; ties keep the
        // point's own optimum, otherwise the lowest index
        let mut best: Option<&VOptimum> = None;
        for (j, &(ra_j, rc_j)) in budgets.iter().enumerate() {
            if ra_j > r_a || rc_j > r_c {
                continue;
            }
            if let Some(v) = raw_v[j].as_ref() {
                if best.is_none_or(|b| v.value > b.value || (j == i && v.value >= b.value)) {
                    best = Some(v);
                }
            }
        }
        let outcome = match best {
            None => Outcome::Infeasible(format!("no V meets H(Y|V) <= {r_a} with I(Z;V) <= {r_c}")),
            Some(v) => {
                let raw = v.value + u.value;
                Outcome::Bound(Bound {
                    delta_raw: raw,
                    delta: clamp(raw),
                    v_part: Some(v.value),
                    u_part: Some(u.value),
                    h_y_given_v: Some(v.h_y_given_v),
                    u_channel: Some(u.channel.clone()),
                    v_channel: Some(v.channel.clone()),
                })
            }
        };
        points.push(RegionPoint { mode, r_a, r_c, outcome });
    }
    Ok(points)
}

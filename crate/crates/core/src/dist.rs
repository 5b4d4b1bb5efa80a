//! Finite joint distributions and conditional channels.
//!
//! Every tensor is stored row-major in canonical axis order `X, Y, Z, E, U, V`
//! (the multi-letter identity checks use [`Tensor`] directly with their own
//! axis layout).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on the unit-sum constraint of a PMF or channel row.
pub const SUM_TOL: f64 = 1e-12;

/// Role of a random variable in the source coding model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Axis {
    /// Private source.
    X,
    /// Public source Bob must recover.
    Y,
    /// Bob's side information.
    Z,
    /// Eavesdropper's side information.
    E,
    /// Auxiliary variable attached through `(X, Y)` or `Y`.
    U,
    /// Auxiliary variable attached through `Z`.
    V,
    /// Public message.
    J,
}

impl Axis {
    pub fn label(self) -> &'static str {
        match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
            Axis::E => "e",
            Axis::U => "u",
            Axis::V => "v",
            Axis::J => "j",
        }
    }

    pub fn parse(s: &str) -> Option<Axis> {
        Some(match s.to_ascii_lowercase().as_str() {
            "x" => Axis::X,
            "y" => Axis::Y,
            "z" => Axis::Z,
            "e" => Axis::E,
            "u" => Axis::U,
            "v" => Axis::V,
            "j" => Axis::J,
            _ => return None,
        })
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Alphabet {
    pub axis: Axis,
    pub size: usize,
}

impl Alphabet {
    pub fn new(axis: Axis, size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::Invalid(format!("alphabet {axis} must have size >= 1")));
        }
        Ok(Alphabet { axis, size })
    }
}

/// A constraint violated by a candidate PMF.
#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    Shape { expected: usize, found: usize },
    Negative { index: usize, value: f64 },
    NotFinite { index: usize },
    Sum { total: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Shape { expected, found } => {
                write!(f, "shape: expected {expected} entries, found {found}")
            }
            Violation::Negative { index, value } => {
                write!(f, "negativity: entry {index} is {value}")
            }
            Violation::NotFinite { index } => write!(f, "finiteness: entry {index} is not finite"),
            Violation::Sum { total } => write!(f, "sum: entries sum to {total}, off by {:e}", total - 1.0),
        }
    }
}

/// Checks nonnegativity and unit sum (within [`SUM_TOL`]) of a flat PMF of
/// the given shape. Reports the first violated constraint.
pub fn validate(shape: &[usize], pmf: &[f64]) -> std::result::Result<(), Violation> {
    let expected: usize = shape.iter().product();
    if expected != pmf.len() {
        return Err(Violation::Shape { expected, found: pmf.len() });
    }
    for (index, &value) in pmf.iter().enumerate() {
        if !value.is_finite() {
            return Err(Violation::NotFinite { index });
        }
        if value < 0.0 {
            return Err(Violation::Negative { index, value });
        }
    }
    let total = kahan_sum(pmf.iter().copied());
    if (total - 1.0).abs() > SUM_TOL {
        return Err(Violation::Sum { total });
    }
    Ok(())
}

/// Neumaier-compensated sum in iteration order.
pub fn kahan_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Dense row-major tensor of probabilities.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor {
    shape: Vec<usize>,
    data: Vec<f64>,
}

impl Tensor {
    pub fn new(shape: Vec<usize>, data: Vec<f64>) -> Result<Self> {
        let len: usize = shape.iter().product();
        if len != data.len() {
            return Err(Error::Invalid(format!(
                "tensor shape {shape:?} needs {len} entries, got {}",
                data.len()
            )));
        }
        Ok(Tensor { shape, data })
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    fn strides(&self) -> Vec<usize> {
        strides(&self.shape)
    }

    /// Sums out every axis not in `keep`. `keep` holds axis positions in
    /// ascending order; the result keeps them in that order.
    pub fn marginal(&self, keep: &[usize]) -> Tensor {
        debug_assert!(keep.windows(2).all(|w| w[0] < w[1]));
        let out_shape: Vec<usize> = keep.iter().map(|&k| self.shape[k]).collect();
        let out_len: usize = out_shape.iter().product();
        if keep.len() == self.shape.len() {
            return self.clone();
        }
        let out_strides = strides(&out_shape);
        // Per-axis contribution to the output index; zero for summed axes.
        let mut contrib = vec![0usize; self.shape.len()];
        for (pos, &k) in keep.iter().enumerate() {
            contrib[k] = out_strides[pos];
        }
        let mut out = vec![0.0; out_len];
        let mut idx = vec![0usize; self.shape.len()];
        let mut out_index = 0usize;
        for &p in &self.data {
            out[out_index] += p;
            // odometer increment, last axis fastest
            for axis in (0..self.shape.len()).rev() {
                idx[axis] += 1;
                out_index += contrib[axis];
                if idx[axis] < self.shape[axis] {
                    break;
                }
                out_index -= contrib[axis] * idx[axis];
                idx[axis] = 0;
            }
        }
        Tensor { shape: out_shape, data: out }
    }

    pub fn flat_index(&self, multi: &[usize]) -> usize {
        multi
            .iter()
            .zip(self.strides())
            .map(|(&i, s)| i * s)
            .sum()
    }
}

pub(crate) fn strides(shape: &[usize]) -> Vec<usize> {
    let mut s = vec![1usize; shape.len()];
    for i in (0..shape.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * shape[i + 1];
    }
    s
}

/// Decomposes a flat row-major index into per-axis coordinates.
pub(crate) fn unravel(mut flat: usize, shape: &[usize], out: &mut [usize]) {
    for axis in (0..shape.len()).rev() {
        out[axis] = flat % shape[axis];
        flat /= shape[axis];
    }
}

/// Exact joint PMF over labelled finite alphabets in canonical order.
#[derive(Clone, Debug, PartialEq)]
pub struct JointSource {
    axes: Vec<Alphabet>,
    pmf: Tensor,
}

impl JointSource {
    /// Builds a source from alphabets and a flat row-major PMF. Axes must be
    /// distinct and listed in canonical order.
    pub fn new(axes: Vec<Alphabet>, pmf: Vec<f64>) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::Invalid("a source needs at least one axis".into()));
        }
        if axes.windows(2).any(|w| w[0].axis >= w[1].axis) {
            return Err(Error::Invalid(format!(
                "axes must be distinct and in canonical order, got {:?}",
                axes.iter().map(|a| a.axis).collect::<Vec<_>>()
            )));
        }
        let shape: Vec<usize> = axes.iter().map(|a| a.size).collect();
        validate(&shape, &pmf).map_err(Error::Violation)?;
        Ok(JointSource { axes, pmf: Tensor::new(shape, pmf)? })
    }

    /// Convenience constructor for the four observable axes.
    pub fn xyze(sizes: [usize; 4], pmf: Vec<f64>) -> Result<Self> {
        let axes = [Axis::X, Axis::Y, Axis::Z, Axis::E]
            .iter()
            .zip(sizes)
            .map(|(&axis, size)| Alphabet::new(axis, size))
            .collect::<Result<Vec<_>>>()?;
        JointSource::new(axes, pmf)
    }

    pub fn axes(&self) -> &[Alphabet] {
        &self.axes
    }

    pub fn tensor(&self) -> &Tensor {
        &self.pmf
    }

    pub fn pmf(&self) -> &[f64] {
        self.pmf.data()
    }

    pub fn has_axis(&self, axis: Axis) -> bool {
        self.position(axis).is_some()
    }

    pub fn position(&self, axis: Axis) -> Option<usize> {
        self.axes.iter().position(|a| a.axis == axis)
    }

    pub fn size(&self, axis: Axis) -> Result<usize> {
        self.position(axis)
            .map(|p| self.axes[p].size)
            .ok_or(Error::UnknownAxis(axis))
    }

    pub fn alphabet(&self, axis: Axis) -> Result<Alphabet> {
        self.position(axis).map(|p| self.axes[p]).ok_or(Error::UnknownAxis(axis))
    }

    /// Axis positions for `axes`, sorted and deduplicated.
    fn positions(&self, axes: &[Axis]) -> Result<Vec<usize>> {
        let mut pos = axes
            .iter()
            .map(|&a| self.position(a).ok_or(Error::UnknownAxis(a)))
            .collect::<Result<Vec<_>>>()?;
        pos.sort_unstable();
        pos.dedup();
        Ok(pos)
    }

    /// Marginal on `keep`; the result lists the kept axes in canonical order.
    pub fn marginal(&self, keep: &[Axis]) -> Result<JointSource> {
        if keep.is_empty() {
            return Err(Error::Invalid("marginal needs a non-empty axis set".into()));
        }
        let pos = self.positions(keep)?;
        let axes = pos.iter().map(|&p| self.axes[p]).collect();
        Ok(JointSource { axes, pmf: self.pmf.marginal(&pos) })
    }

    /// Marginal probabilities as a flat vector over `keep` in canonical order.
    pub fn marginal_pmf(&self, keep: &[Axis]) -> Result<Vec<f64>> {
        Ok(self.marginal(keep)?.pmf.into_data())
    }

    /// `P(target | given)` as a channel. Rows whose conditioning marginal is
    /// zero are left undefined.
    pub fn condition(&self, target: Axis, given: &[Axis]) -> Result<Channel> {
        if given.contains(&target) {
            return Err(Error::Overlap(format!("target {target} is also conditioned on")));
        }
        let target_alpha = self.alphabet(target)?;
        let mut given_sorted: Vec<Axis> = given.to_vec();
        given_sorted.sort_unstable();
        given_sorted.dedup();
        let from: Vec<Alphabet> = given_sorted
            .iter()
            .map(|&a| self.alphabet(a))
            .collect::<Result<_>>()?;
        let mut keep = given_sorted.clone();
        keep.push(target);
        keep.sort_unstable();
        let joint = self.marginal(&keep)?;
        let target_pos = joint.position(target).expect("kept");
        let n_rows: usize = from.iter().map(|a| a.size).product();
        let k = target_alpha.size;
        let mut rows = vec![vec![0.0; k]; n_rows];
        let shape = joint.pmf.shape().to_vec();
        let mut idx = vec![0usize; shape.len()];
        for (flat, &p) in joint.pmf().iter().enumerate() {
            unravel(flat, &shape, &mut idx);
            let mut row = 0usize;
            for (pos, &i) in idx.iter().enumerate() {
                if pos != target_pos {
                    row = row * shape[pos] + i;
                }
            }
            rows[row][idx[target_pos]] = p;
        }
        let rows = rows
            .into_iter()
            .map(|r| {
                let mass = kahan_sum(r.iter().copied());
                if mass > 0.0 {
                    Some(r.into_iter().map(|p| p / mass).collect())
                } else {
                    None
                }
            })
            .collect();
        Ok(Channel { from, to: target_alpha, rows })
    }

    /// Extends the source by `aux`, which must be indexed by the inputs it
    /// declares. `U` may depend on any subset of `{X, Y}`; `V` only on `Z`.
    pub fn attach_aux(&self, aux: &Channel) -> Result<JointSource> {
        let allowed: &[Axis] = match aux.to.axis {
            Axis::U => &[Axis::X, Axis::Y],
            Axis::V => &[Axis::Z],
            other => {
                return Err(Error::Structure(format!("{other} is not an auxiliary axis")));
            }
        };
        if aux.from.is_empty() && aux.to.axis == Axis::V {
            return Err(Error::Structure("V must be attached through Z".into()));
        }
        for a in &aux.from {
            if !allowed.contains(&a.axis) {
                return Err(Error::Structure(format!(
                    "{} may not be conditioned on {}",
                    aux.to.axis, a.axis
                )));
            }
        }
        self.extend(aux)
    }

    /// Extends the source by any channel whose output axis is new and whose
    /// inputs are existing axes. Undefined channel rows count as zero mass.
    pub(crate) fn extend(&self, ch: &Channel) -> Result<JointSource> {
        if self.has_axis(ch.to.axis) {
            return Err(Error::Structure(format!("axis {} already present", ch.to.axis)));
        }
        let mut from_pos = Vec::with_capacity(ch.from.len());
        for a in &ch.from {
            let p = self.position(a.axis).ok_or(Error::UnknownAxis(a.axis))?;
            if self.axes[p].size != a.size {
                return Err(Error::Mismatch(format!(
                    "channel input {} has size {}, source has {}",
                    a.axis, a.size, self.axes[p].size
                )));
            }
            from_pos.push(p);
        }
        let mut axes = self.axes.clone();
        let insert_at = axes.iter().position(|a| a.axis > ch.to.axis).unwrap_or(axes.len());
        axes.insert(insert_at, ch.to);
        let shape: Vec<usize> = axes.iter().map(|a| a.size).collect();
        let old_shape = self.pmf.shape();
        let k = ch.to.size;
        let total: usize = shape.iter().product();
        let mut data = Vec::with_capacity(total);
        let mut old_idx = vec![0usize; old_shape.len()];
        let old_len = self.pmf.data.len();
        // outer: old axes before the insertion point; middle: new axis; inner: the rest
        let inner: usize = old_shape[insert_at..].iter().product();
        let outer = old_len / inner.max(1);
        for o in 0..outer {
            for sym in 0..k {
                for i in 0..inner {
                    let flat = o * inner + i;
                    unravel(flat, old_shape, &mut old_idx);
                    let mut row = 0usize;
                    for (&p, a) in from_pos.iter().zip(&ch.from) {
                        row = row * a.size + old_idx[p];
                    }
                    let w = ch.rows[row].as_ref().map_or(0.0, |r| r[sym]);
                    data.push(self.pmf.data[flat] * w);
                }
            }
        }
        Ok(JointSource { axes, pmf: Tensor { shape, data } })
    }

    /// Maximum of `|P(a,b,g)P(g) - P(a,g)P(b,g)|`: zero iff `a` and `b` are
    /// conditionally independent given `g`.
    pub fn markov_residual(&self, a: &[Axis], b: &[Axis], given: &[Axis]) -> Result<f64> {
        let all: Vec<Axis> = a.iter().chain(b).chain(given).copied().collect();
        let joint = self.marginal(&all)?;
        let pa = joint.positions(a)?;
        let pb = joint.positions(b)?;
        let pg = joint.positions(given)?;
        let m_abg = joint.pmf.clone();
        let m_ag = joint.pmf.marginal(&sorted_union(&pa, &pg));
        let m_bg = joint.pmf.marginal(&sorted_union(&pb, &pg));
        let m_g = if pg.is_empty() { None } else { Some(joint.pmf.marginal(&pg)) };
        let shape = m_abg.shape().to_vec();
        let mut idx = vec![0usize; shape.len()];
        let pick = |idx: &[usize], pos: &[usize], t: &Tensor| -> f64 {
            let sub: Vec<usize> = pos.iter().map(|&p| idx[p]).collect();
            t.data()[t.flat_index(&sub)]
        };
        let mut worst = 0.0f64;
        for (flat, &p) in m_abg.data().iter().enumerate() {
            unravel(flat, &shape, &mut idx);
            let g = m_g.as_ref().map_or(1.0, |t| pick(&idx, &pg, t));
            let lhs = p * g;
            let rhs = pick(&idx, &sorted_union(&pa, &pg), &m_ag) * pick(&idx, &sorted_union(&pb, &pg), &m_bg);
            worst = worst.max((lhs - rhs).abs());
        }
        Ok(worst)
    }
}

fn sorted_union(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut v: Vec<usize> = a.iter().chain(b).copied().collect();
    v.sort_unstable();
    v.dedup();
    v
}

/// Conditional PMF of `to` given the tuple of `from` axes, one row per input
/// tuple in row-major order. `None` marks a row with zero conditioning mass.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Channel {
    pub from: Vec<Alphabet>,
    pub to: Alphabet,
    pub rows: Vec<Option<Vec<f64>>>,
}

impl Channel {
    /// Builds a channel with every row defined and validated.
    pub fn new(from: Vec<Alphabet>, to: Alphabet, rows: Vec<Vec<f64>>) -> Result<Self> {
        let ch = Channel { from, to, rows: rows.into_iter().map(Some).collect() };
        ch.check()?;
        Ok(ch)
    }

    pub fn check(&self) -> Result<()> {
        let n_rows: usize = self.from.iter().map(|a| a.size).product();
        if self.rows.len() != n_rows {
            return Err(Error::Mismatch(format!(
                "channel needs {n_rows} rows, has {}",
                self.rows.len()
            )));
        }
        for (i, row) in self.rows.iter().enumerate() {
            if let Some(r) = row {
                validate(&[self.to.size], r).map_err(|v| {
                    Error::Invalid(format!("channel row {i}: {v}"))
                })?;
            }
        }
        Ok(())
    }

    /// A channel whose output is the single symbol 0.
    pub fn constant(from: Vec<Alphabet>, to_axis: Axis) -> Self {
        let n_rows: usize = from.iter().map(|a| a.size).product();
        Channel {
            from,
            to: Alphabet { axis: to_axis, size: 1 },
            rows: vec![Some(vec![1.0]); n_rows],
        }
    }

    /// Output copies the (single) input.
    pub fn identity(from: Alphabet, to_axis: Axis) -> Self {
        let rows = (0..from.size)
            .map(|i| {
                let mut r = vec![0.0; from.size];
                r[i] = 1.0;
                Some(r)
            })
            .collect();
        Channel { from: vec![from], to: Alphabet { axis: to_axis, size: from.size }, rows }
    }

    /// Binary symmetric channel with crossover `p` from a binary input.
    pub fn binary_symmetric(from_axis: Axis, to_axis: Axis, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Invalid(format!("crossover {p} outside [0, 1]")));
        }
        Channel::new(
            vec![Alphabet::new(from_axis, 2)?],
            Alphabet::new(to_axis, 2)?,
            vec![vec![1.0 - p, p], vec![p, 1.0 - p]],
        )
    }

    pub fn row(&self, i: usize) -> Option<&[f64]> {
        self.rows.get(i).and_then(|r| r.as_deref())
    }

    /// True when every defined row is the same point mass.
    pub fn is_deterministic_constant(&self) -> bool {
        let mut symbol = None;
        for r in self.rows.iter().flatten() {
            let Some(s) = r.iter().position(|&p| p == 1.0) else {
                return false;
            };
            match symbol {
                None => symbol = Some(s),
                Some(t) if t != s => return false,
                _ => {}
            }
        }
        true
    }
}

/// `P(x,y,z,e) = P(x,y,z) P(e|y)`.
pub fn compose_markov(pxyz: &JointSource, e_given_y: &Channel) -> Result<JointSource> {
    let axes: Vec<Axis> = pxyz.axes().iter().map(|a| a.axis).collect();
    if axes != [Axis::X, Axis::Y, Axis::Z] {
        return Err(Error::Mismatch(format!("expected a source over x,y,z, got {axes:?}")));
    }
    if e_given_y.from.len() != 1 || e_given_y.from[0].axis != Axis::Y {
        return Err(Error::Mismatch("eavesdropper channel must be indexed by y".into()));
    }
    if e_given_y.to.axis != Axis::E {
        return Err(Error::Mismatch("eavesdropper channel must output e".into()));
    }
    if e_given_y.rows.iter().any(Option::is_none) {
        return Err(Error::Invalid("eavesdropper channel has undefined rows".into()));
    }
    e_given_y.check()?;
    pxyz.extend(e_given_y)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dsbs(p: f64) -> JointSource {
        // Y uniform, X = Y through BSC(p); Z, E trivial
        let mut pmf = vec![0.0; 4];
        for x in 0..2 {
            for y in 0..2 {
                pmf[x * 2 + y] = 0.5 * if x == y { 1.0 - p } else { p };
            }
        }
        JointSource::xyze([2, 2, 1, 1], pmf).unwrap()
    }

    #[test]
    fn validate_cases() {
        assert!(validate(&[2, 2], &[0.25; 4]).is_ok());
        assert!(matches!(
            validate(&[2, 2], &[0.6, -0.1, 0.25, 0.25]),
            Err(Violation::Negative { index: 1, .. })
        ));
        assert!(matches!(
            validate(&[2, 2], &[0.25, 0.25, 0.25, 0.249]),
            Err(Violation::Sum { .. })
        ));
        assert!(matches!(validate(&[3], &[0.5, 0.5]), Err(Violation::Shape { .. })));
    }

    #[test]
    fn marginal_of_copy_is_uniform() {
        let src = JointSource::xyze([2, 2, 1, 1], vec![0.5, 0.0, 0.0, 0.5]).unwrap();
        assert_eq!(src.marginal_pmf(&[Axis::X]).unwrap(), vec![0.5, 0.5]);
    }

    #[test]
    fn marginal_of_product() {
        let px = [0.3, 0.7];
        let py = [0.1, 0.6, 0.3];
        let pmf: Vec<f64> = px.iter().flat_map(|a| py.iter().map(move |b| a * b)).collect();
        let src = JointSource::xyze([2, 3, 1, 1], pmf).unwrap();
        let my = src.marginal_pmf(&[Axis::Y]).unwrap();
        for (a, b) in my.iter().zip(py) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn marginal_unknown_axis() {
        let src = dsbs(0.1);
        assert!(matches!(src.marginal(&[Axis::U]), Err(Error::UnknownAxis(Axis::U))));
    }

    #[test]
    fn marginal_by_hand_summation() {
        // 2x2x2 over x,y,z with distinct entries
        let raw: Vec<f64> = (1..=8).map(|v| v as f64 / 36.0).collect();
        let src = JointSource::xyze([2, 2, 2, 1], raw.clone()).unwrap();
        let xz = src.marginal_pmf(&[Axis::Z, Axis::X]).unwrap();
        for x in 0..2 {
            for z in 0..2 {
                let by_hand = raw[x * 4 + z] + raw[x * 4 + 2 + z];
                assert!((xz[x * 2 + z] - by_hand).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn condition_on_copy_is_identity() {
        let src = JointSource::xyze([2, 2, 1, 1], vec![0.5, 0.0, 0.0, 0.5]).unwrap();
        let ch = src.condition(Axis::X, &[Axis::Y]).unwrap();
        assert_eq!(ch.row(0).unwrap(), &[1.0, 0.0]);
        assert_eq!(ch.row(1).unwrap(), &[0.0, 1.0]);
    }

    #[test]
    fn condition_independent_rows_are_marginal() {
        let px = [0.3, 0.7];
        let py = [0.4, 0.6];
        let pmf: Vec<f64> = px.iter().flat_map(|a| py.iter().map(move |b| a * b)).collect();
        let src = JointSource::xyze([2, 2, 1, 1], pmf).unwrap();
        let ch = src.condition(Axis::X, &[Axis::Y]).unwrap();
        for y in 0..2 {
            let r = ch.row(y).unwrap();
            assert!((r[0] - 0.3).abs() < 1e-15 && (r[1] - 0.7).abs() < 1e-15);
        }
    }

    #[test]
    fn condition_matches_direct_ratio_and_flags_zero_rows() {
        let raw = vec![0.1, 0.0, 0.2, 0.0, 0.3, 0.0, 0.4, 0.0];
        let src = JointSource::xyze([2, 2, 2, 1], raw.clone()).unwrap();
        let ch = src.condition(Axis::Y, &[Axis::X, Axis::Z]).unwrap();
        // z = 1 never occurs
        assert!(ch.row(1).is_none() && ch.row(3).is_none());
        for x in 0..2 {
            let pxz0 = raw[x * 4] + raw[x * 4 + 2];
            let r = ch.row(x * 2).unwrap();
            for y in 0..2 {
                assert!((r[y] - raw[x * 4 + y * 2] / pxz0).abs() < 1e-15);
            }
        }
        assert!(matches!(src.condition(Axis::X, &[Axis::X]), Err(Error::Overlap(_))));
    }

    fn xyz_source() -> JointSource {
        let raw: Vec<f64> = (1..=8).map(|v| v as f64 / 36.0).collect();
        let axes = vec![
            Alphabet::new(Axis::X, 2).unwrap(),
            Alphabet::new(Axis::Y, 2).unwrap(),
            Alphabet::new(Axis::Z, 2).unwrap(),
        ];
        JointSource::new(axes, raw).unwrap()
    }

    #[test]
    fn compose_markov_identity_copies_y() {
        let src = xyz_source();
        let e = Channel::identity(Alphabet::new(Axis::Y, 2).unwrap(), Axis::E);
        let full = compose_markov(&src, &e).unwrap();
        let ye = full.marginal_pmf(&[Axis::Y, Axis::E]).unwrap();
        assert_eq!(ye[1], 0.0);
        assert_eq!(ye[2], 0.0);
        assert!(full.markov_residual(&[Axis::X, Axis::Z], &[Axis::E], &[Axis::Y]).unwrap() < 1e-15);
    }

    #[test]
    fn compose_markov_uniform_rows_make_e_independent() {
        let src = xyz_source();
        let e = Channel::new(
            vec![Alphabet::new(Axis::Y, 2).unwrap()],
            Alphabet::new(Axis::E, 3).unwrap(),
            vec![vec![1.0 / 3.0; 3]; 2],
        )
        .unwrap();
        let full = compose_markov(&src, &e).unwrap();
        assert!(full.markov_residual(&[Axis::X, Axis::Y, Axis::Z], &[Axis::E], &[]).unwrap() < 1e-15);
    }

    #[test]
    fn compose_markov_hand_products() {
        let src = dsbs(0.1).marginal(&[Axis::X, Axis::Y, Axis::Z]).unwrap();
        let e = Channel::binary_symmetric(Axis::Y, Axis::E, 0.3).unwrap();
        let full = compose_markov(&src, &e).unwrap();
        let p = full.pmf();
        // (x,y,z,e) = (0,0,0,0): 0.5 * 0.9 * 0.7
        assert!((p[0] - 0.5 * 0.9 * 0.7).abs() < 1e-15);
        // (0,1,0,0): 0.5 * 0.1 * 0.3
        assert!((p[2] - 0.5 * 0.1 * 0.3).abs() < 1e-15);
        // (1,1,0,1): 0.5 * 0.9 * 0.7
        assert!((p[7] - 0.5 * 0.9 * 0.7).abs() < 1e-15);
    }

    #[test]
    fn compose_markov_rejects_mismatch() {
        let src = xyz_source();
        let e = Channel::binary_symmetric(Axis::X, Axis::E, 0.3).unwrap();
        assert!(matches!(compose_markov(&src, &e), Err(Error::Mismatch(_))));
    }

    #[test]
    fn attach_constant_u_is_point_mass() {
        let src = dsbs(0.2);
        let u = Channel::constant(
            vec![src.alphabet(Axis::X).unwrap(), src.alphabet(Axis::Y).unwrap()],
            Axis::U,
        );
        let ext = src.attach_aux(&u).unwrap();
        assert_eq!(ext.pmf(), src.pmf());
    }

    #[test]
    fn attach_rejects_disallowed_inputs() {
        let src = dsbs(0.2);
        let u = Channel::constant(vec![src.alphabet(Axis::Z).unwrap()], Axis::U);
        assert!(matches!(src.attach_aux(&u), Err(Error::Structure(_))));
        let v = Channel::constant(vec![src.alphabet(Axis::Y).unwrap()], Axis::V);
        assert!(matches!(src.attach_aux(&v), Err(Error::Structure(_))));
    }

    #[test]
    fn attach_preserves_marginal_and_markov() {
        let raw: Vec<f64> = (1..=16).map(|v| v as f64 / 136.0).collect();
        let src = JointSource::xyze([2, 2, 2, 2], raw).unwrap();
        let u = Channel::new(
            vec![src.alphabet(Axis::X).unwrap(), src.alphabet(Axis::Y).unwrap()],
            Alphabet::new(Axis::U, 3).unwrap(),
            vec![
                vec![0.2, 0.3, 0.5],
                vec![0.6, 0.1, 0.3],
                vec![0.0, 0.5, 0.5],
                vec![1.0, 0.0, 0.0],
            ],
        )
        .unwrap();
        let v = Channel::binary_symmetric(Axis::Z, Axis::V, 0.15).unwrap();
        let ext = src.attach_aux(&v).unwrap().attach_aux(&u).unwrap();
        let axes: Vec<Axis> = ext.axes().iter().map(|a| a.axis).collect();
        assert_eq!(axes, [Axis::X, Axis::Y, Axis::Z, Axis::E, Axis::U, Axis::V]);
        let back = ext.marginal_pmf(&[Axis::X, Axis::Y, Axis::Z, Axis::E]).unwrap();
        for (a, b) in back.iter().zip(src.pmf()) {
            assert!((a - b).abs() < 1e-15);
        }
        let r_u = ext
            .markov_residual(&[Axis::Z, Axis::E], &[Axis::U], &[Axis::X, Axis::Y])
            .unwrap();
        let r_v = ext
            .markov_residual(&[Axis::X, Axis::Y, Axis::E], &[Axis::V], &[Axis::Z])
            .unwrap();
        assert!(r_u < 1e-12 && r_v < 1e-12);
    }
}

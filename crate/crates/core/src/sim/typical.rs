use crate::dist::{Axis, JointSource};
use crate::error::{Error, Result};

use super::Symbol;

const BOUNDARY_TOL: f64 = 1e-12;

/// Strong joint typicality: every tuple's empirical frequency is within
/// `delta` of its probability, and no zero-probability tuple occurs.
///
/// Variables whose marginal is a point mass only have to sit on that point,
/// so a constant sequence is typical with anything compatible. With at most
/// one variable left the frequency test always passes. Frequencies within
/// `1e-12` of the boundary count as inside.
#[derive(Clone, Debug)]
pub struct Typicality {
    /// Positions (in the caller's sequence list) of tested variables.
    kept: Vec<usize>,
    /// Positions and symbols of point-mass variables.
    fixed: Vec<(usize, Symbol)>,
    sizes: Vec<usize>,
    pmf: Vec<f64>,
    delta: f64,
}

impl Typicality {
    /// `axes` must be in canonical order; [`Typicality::check`] takes the
    /// sequences in the same order.
    pub fn new(src: &JointSource, axes: &[Axis], delta: f64) -> Result<Self> {
        if !axes.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::Invalid("typicality axes must be distinct and in canonical order".into()));
        }
        let mut kept = Vec::new();
        let mut kept_axes = Vec::new();
        let mut fixed = Vec::new();
        for (i, &a) in axes.iter().enumerate() {
            let m = src.marginal_pmf(&[a])?;
            match m.iter().position(|&p| p >= 1.0 - 1e-12) {
                Some(s) => fixed.push((i, s as Symbol)),
                None => {
                    kept.push(i);
                    kept_axes.push(a);
                }
            }
        }
        let (sizes, pmf) = if kept.len() <= 1 {
            (Vec::new(), Vec::new())
        } else {
            let sizes = kept_axes.iter().map(|&a| src.size(a)).collect::<Result<Vec<_>>>()?;
            (sizes, src.marginal_pmf(&kept_axes)?)
        };
        Ok(Typicality { kept, fixed, sizes, pmf, delta })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn check(&self, seqs: &[&[Symbol]]) -> bool {
        if !self.fixed.iter().all(|&(i, s)| seqs[i].iter().all(|&v| v == s)) {
            return false;
        }
        if self.kept.len() <= 1 {
            return true;
        }
        let n = seqs[self.kept[0]].len();
        let mut counts = vec![0u32; self.pmf.len()];
        for t in 0..n {
            let mut cell = 0usize;
            for (&k, &size) in self.kept.iter().zip(&self.sizes) {
                cell = cell * size + seqs[k][t] as usize;
            }
            if self.pmf[cell] == 0.0 {
                return false;
            }
            counts[cell] += 1;
        }
        let n = n as f64;
        counts
            .iter()
            .zip(&self.pmf)
            .all(|(&c, &p)| (c as f64 / n - p).abs() <= self.delta + BOUNDARY_TOL)
    }
}

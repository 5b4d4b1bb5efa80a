//! Shannon measures in bits over [`JointSource`] values.
//!
//! Entropies are summed row-major with compensated summation and the
//! `0 log 0 = 0` convention. Mutual informations in `[-1e-10, 0)` are clamped
//! to zero; anything more negative is reported as a consistency error.

use crate::dist::{kahan_sum, Axis, JointSource};
use crate::error::{Error, Result};

/// Information quantity in bits per symbol.
pub type Bits = f64;

/// Numerical floor below which a negative information value is an error.
pub const NEG_FLOOR: f64 = -1e-10;

/// `-sum p log2 p` of a flat PMF, skipping zero entries.
pub fn entropy_of(pmf: &[f64]) -> Bits {
    let h = -kahan_sum(pmf.iter().filter(|&&p| p > 0.0).map(|&p| p * p.log2()));
    // -0.0 -> 0.0
    h + 0.0
}

fn disjoint(a: &[Axis], b: &[Axis]) -> Result<()> {
    if let Some(x) = a.iter().find(|x| b.contains(x)) {
        return Err(Error::Overlap(format!("axis {x} appears on both sides")));
    }
    Ok(())
}

fn union(parts: &[&[Axis]]) -> Vec<Axis> {
    let mut v: Vec<Axis> = parts.iter().flat_map(|p| p.iter().copied()).collect();
    v.sort_unstable();
    v.dedup();
    v
}

fn clamp_info(value: f64, what: &str) -> Result<Bits> {
    if value >= 0.0 {
        Ok(value)
    } else if value >= NEG_FLOOR {
        Ok(0.0)
    } else {
        Err(Error::Consistency(format!("{what} evaluated to {value:e}")))
    }
}

/// `H(axes)`; an empty set has entropy zero.
pub fn entropy(src: &JointSource, axes: &[Axis]) -> Result<Bits> {
    if axes.is_empty() {
        return Ok(0.0);
    }
    Ok(entropy_of(&src.marginal_pmf(axes)?))
}

/// `H(target | given) = H(target, given) - H(given)`.
pub fn cond_entropy(src: &JointSource, target: &[Axis], given: &[Axis]) -> Result<Bits> {
    disjoint(target, given)?;
    let h = entropy(src, &union(&[target, given]))? - entropy(src, given)?;
    clamp_info(h, "conditional entropy")
}

/// `I(a; b)`.
pub fn mutual_info(src: &JointSource, a: &[Axis], b: &[Axis]) -> Result<Bits> {
    disjoint(a, b)?;
    let i = entropy(src, a)? + entropy(src, b)? - entropy(src, &union(&[a, b]))?;
    clamp_info(i, "mutual information")
}

/// `I(a; b | given)`.
pub fn cond_mutual_info(src: &JointSource, a: &[Axis], b: &[Axis], given: &[Axis]) -> Result<Bits> {
    disjoint(a, b)?;
    disjoint(a, given)?;
    disjoint(b, given)?;
    let i = entropy(src, &union(&[a, given]))? + entropy(src, &union(&[b, given]))?
        - entropy(src, &union(&[a, b, given]))?
        - entropy(src, given)?;
    clamp_info(i, "conditional mutual information")
}

/// Binary entropy function in bits.
pub fn binary_entropy(p: f64) -> Bits {
    entropy_of(&[p, 1.0 - p])
}

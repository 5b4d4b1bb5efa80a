use rayon::prelude::*;
use serde::Serialize;

use crate::defaults;
use crate::dist::{kahan_sum, Axis, Tensor};
use crate::error::{Error, Result};
use crate::info::Bits;

use super::{Scheme, SimConfig};

fn plogp_sum(v: &[f64]) -> f64 {
    -kahan_sum(v.iter().filter(|&&p| p > 0.0).map(|&p| p * p.log2()))
}

/// `(1/n) H(X^n | J1, J2, E^n)` for the realized codebook and bin maps,
/// by exhaustive enumeration of `y^n` through the deterministic encoder.
///
/// Sequences are grouped by message `(J1, J2)`; for each message the
/// unnormalized joint of `(X, E)^n` is accumulated and contributes
/// `H(X^n, E^n, J) - H(E^n, J)` restricted to that message.
pub fn exact_equivocation(cfg: &SimConfig, scheme: &Scheme) -> Result<Bits> {
    let src = &cfg.source;
    let (nx, ny, ne) = (src.size(Axis::X)?, src.size(Axis::Y)?, src.size(Axis::E)?);
    let n = cfg.n as u32;
    let m = nx * ne;
    let buffer = m.checked_pow(n).filter(|&s| s <= defaults::STATE_GUARD);
    let work = ((nx * ny * ne) as u64).checked_pow(n).filter(|&w| w <= defaults::WORK_GUARD);
    let (Some(buffer), Some(_)) = (buffer, work) else {
        return Err(Error::Guard(format!(
            "exact equivocation needs (|X||E|)^n <= {} and (|X||Y||E|)^n <= 2^30; lower n",
            defaults::STATE_GUARD
        )));
    };

    // w[y][x * ne + e] = P(x, y, e)
    let pxye = src.marginal_pmf(&[Axis::X, Axis::Y, Axis::E])?;
    let w: Vec<Vec<f64>> = (0..ny)
        .map(|y| {
            let mut row = vec![0.0; m];
            for x in 0..nx {
                for e in 0..ne {
                    row[x * ne + e] = pxye[(x * ny + y) * ne + e];
                }
            }
            row
        })
        .collect();

    let sequences = ny.pow(n);
    let mut keyed: Vec<(u64, u64, usize)> = (0..sequences)
        .into_par_iter()
        .map(|s| {
            let enc = scheme.encode(&scheme.sequence(s));
            (enc.j1, enc.j2, s)
        })
        .collect();
    keyed.sort_unstable();
    let groups: Vec<&[(u64, u64, usize)]> = keyed.chunk_by(|a, b| (a.0, a.1) == (b.0, b.1)).collect();

    let mut shape = Vec::with_capacity(2 * cfg.n);
    for _ in 0..cfg.n {
        shape.push(nx);
        shape.push(ne);
    }
    let e_positions: Vec<usize> = (0..cfg.n).map(|i| 2 * i + 1).collect();

    let contributions: Vec<f64> = groups
        .par_iter()
        .map(|group| {
            let mut acc = vec![0.0; buffer];
            let mut prod = vec![0.0; buffer];
            for &(_, _, s) in group.iter() {
                let y = scheme.sequence(s);
                prod[0] = 1.0;
                let mut len = 1;
                for &yi in &y {
                    let row = &w[yi as usize];
                    // expand in place from the back so earlier entries stay intact
                    for k in (0..len).rev() {
                        let base = prod[k];
                        for (a, &p) in row.iter().enumerate() {
                            prod[k * m + a] = base * p;
                        }
                    }
                    len *= m;
                }
                for (a, p) in acc.iter_mut().zip(&prod) {
                    *a += p;
                }
            }
            let joint = Tensor::new(shape.clone(), acc).expect("shape matches buffer");
            let eve = joint.marginal(&e_positions);
            plogp_sum(joint.data()) - plogp_sum(eve.data())
        })
        .collect();
    Ok(kahan_sum(contributions) / cfg.n as f64)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AveragedEquivocation {
    pub mean: Bits,
    pub per_seed: Vec<(u64, Bits)>,
}

/// Exact equivocation averaged over independent codebooks, one per seed.
pub fn averaged_equivocation(cfg: &SimConfig, seeds: &[u64]) -> Result<AveragedEquivocation> {
    if seeds.is_empty() {
        return Err(Error::Invalid("need at least one codebook seed".into()));
    }
    let per_seed = seeds
        .iter()
        .map(|&s| {
            let c = cfg.with_seed(s);
            let scheme = Scheme::new(&c)?;
            Ok((s, exact_equivocation(&c, &scheme)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let mean = kahan_sum(per_seed.iter().map(|p| p.1)) / seeds.len() as f64;
    Ok(AveragedEquivocation { mean, per_seed })
}

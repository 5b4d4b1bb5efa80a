//! Random-restart hill climbing over raw `P(u|.)` entries.
//!
//! Shares no code with the envelope LP: each candidate channel is attached to
//! the source and scored through the generic information measures. Used to
//! cross-check [`crate::region::optimize_u`].

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use rayon::prelude::*;

use crate::dist::{Alphabet, Axis, Channel, JointSource};
use crate::error::Result;
use crate::info::Bits;
use crate::region::{u_gain_terms, Mode, UOptimum};
use crate::defaults;

#[derive(Clone, Copy, Debug)]
pub struct RestartOptions {
    pub restarts: usize,
    pub seed: u64,
    /// Compass search stops once the step falls below this.
    pub min_step: f64,
}

impl Default for RestartOptions {
    fn default() -> Self {
        RestartOptions { restarts: defaults::RESTARTS, seed: 0, min_step: 1e-7 }
    }
}

struct Climber<'a> {
    src: &'a JointSource,
    mode: Mode,
    from: Vec<Alphabet>,
    k: usize,
    /// Input tuples with positive probability; other rows never matter.
    live: Vec<usize>,
}

impl Climber<'_> {
    fn channel(&self, rows: &[Vec<f64>]) -> Channel {
        Channel {
            from: self.from.clone(),
            to: Alphabet { axis: Axis::U, size: self.k },
            rows: rows
                .iter()
                .map(|r| {
                    let s: f64 = r.iter().sum();
                    Some(r.iter().map(|v| v / s).collect())
                })
                .collect(),
        }
    }

    fn eval(&self, rows: &[Vec<f64>]) -> Result<Bits> {
        let ext = self.src.attach_aux(&self.channel(rows))?;
        u_gain_terms(&ext, self.mode)
    }

    fn climb(&self, mut rows: Vec<Vec<f64>>, min_step: f64) -> Result<(Bits, Vec<Vec<f64>>)> {
        let mut best = self.eval(&rows)?;
        let mut step = 0.5;
        while step >= min_step {
            let mut improved = false;
            for &r in &self.live {
                for a in 0..self.k {
                    for b in 0..self.k {
                        if a == b {
                            continue;
                        }
                        let t = step.min(rows[r][a]);
                        if t <= 0.0 {
                            continue;
                        }
                        let (old_a, old_b) = (rows[r][a], rows[r][b]);
                        rows[r][a] = old_a - t;
                        rows[r][b] = old_b + t;
                        let v = self.eval(&rows)?;
                        if v > best + 1e-15 {
                            best = v;
                            improved = true;
                        } else {
                            rows[r][a] = old_a;
                            rows[r][b] = old_b;
                        }
                    }
                }
            }
            if !improved {
                step *= 0.5;
            }
        }
        Ok((best, rows))
    }
}

/// Best `U` part found by hill climbing from `restarts` random channels with
/// `|U|` at its cardinality bound. Restart `i` draws from ChaCha8 stream `i`
/// of `seed`, so the result does not depend on the thread count.
pub fn random_restart_u(src: &JointSource, mode: Mode, opts: RestartOptions) -> Result<UOptimum> {
    let from = mode.u_inputs().iter().map(|&a| src.alphabet(a)).collect::<Result<Vec<_>>>()?;
    let base = src.marginal_pmf(mode.u_inputs())?;
    let climber = Climber {
        src,
        mode,
        k: mode.u_cardinality(src)?,
        live: (0..base.len()).filter(|&i| base[i] > 0.0).collect(),
        from,
    };
    let results: Vec<(Bits, Vec<Vec<f64>>)> = (0..opts.restarts.max(1))
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            rng.set_stream(i as u64);
            let rows = (0..base.len())
                .map(|_| {
                    let r: Vec<f64> = (0..climber.k).map(|_| Exp1.sample(&mut rng)).collect();
                    let s: f64 = r.iter().sum();
                    r.into_iter().map(|v| v / s).collect()
                })
                .collect();
            climber.climb(rows, opts.min_step)
        })
        .collect::<Result<_>>()?;
    let (value, rows) = results
        .into_iter()
        .reduce(|a, b| if b.0 > a.0 { b } else { a })
        .expect("at least one restart");
    Ok(UOptimum { value, channel: climber.channel(&rows) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::region::u_gain;

    fn dsbs_with_eve() -> JointSource {
        let f = |p: f64, a: usize, b: usize| if a == b { 1.0 - p } else { p };
        let mut pmf = vec![0.0; 16];
        for x in 0..2 {
            for y in 0..2 {
                for z in 0..2 {
                    for e in 0..2 {
                        pmf[((x * 2 + y) * 2 + z) * 2 + e] = 0.5 * f(0.1, x, y) * f(0.25, z, y) * f(0.3, e, y);
                    }
                }
            }
        }
        JointSource::xyze([2, 2, 2, 2], pmf).unwrap()
    }

    #[test]
    fn deterministic_and_witness_consistent() {
        let src = dsbs_with_eve();
        let opts = RestartOptions { restarts: 8, seed: 3, min_step: 1e-6 };
        let a = random_restart_u(&src, Mode::UncodedEve, opts).unwrap();
        let b = random_restart_u(&src, Mode::UncodedEve, opts).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        let again = u_gain(&src.attach_aux(&a.channel).unwrap(), Mode::UncodedEve).unwrap();
        assert!((again - a.value).abs() < 1e-12);
        assert_eq!(a.channel.to.size, 3);
    }
}

use rand::distributions::WeightedIndex;
use rand_distr::Distribution;
use rayon::prelude::*;
use serde::Serialize;

use crate::dist::Axis;
use crate::error::{Error, Result};
use crate::info::Bits;

use super::{exact_equivocation, rng, DecodeFailure, Scheme, SchemeRates, SimConfig, Symbol, TRIAL_STREAM_BASE};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct FailureCounts {
    pub no_codeword: usize,
    pub ambiguous_codeword: usize,
    pub no_sequence: usize,
    pub ambiguous_sequence: usize,
}

impl FailureCounts {
    fn record(&mut self, f: DecodeFailure) {
        match f {
            DecodeFailure::NoCodeword => self.no_codeword += 1,
            DecodeFailure::AmbiguousCodeword => self.ambiguous_codeword += 1,
            DecodeFailure::NoSequence => self.no_sequence += 1,
            DecodeFailure::AmbiguousSequence => self.ambiguous_sequence += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.no_codeword + self.ambiguous_codeword + self.no_sequence + self.ambiguous_sequence
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialReport {
    pub seed: u64,
    pub n: usize,
    pub eps: f64,
    pub delta_typ: f64,
    pub trials: usize,
    pub codebook_size: usize,
    pub rates: SchemeRates,
    /// Trials where Bob's estimate differs from `Y^n`, decode failures
    /// included.
    pub errors: usize,
    pub encode_failures: usize,
    pub decode_failures: FailureCounts,
    /// `None` when no trials ran.
    pub error_rate: Option<f64>,
    pub encode_failure_rate: Option<f64>,
    /// `(1/n) H(X^n | J1, J2, E^n)` for this codebook, when requested.
    pub equivocation: Option<Bits>,
}

enum Outcome {
    Correct,
    Wrong,
    Failed(DecodeFailure),
}

struct TrialResult {
    outcome: Outcome,
    encode_failed: bool,
}

/// Runs `cfg.trials` independent blocks through encoder and decoder.
/// Trial `t` draws its block from its own RNG stream, so the report does not
/// depend on the thread count.
pub fn run_trials(cfg: &SimConfig) -> Result<TrialReport> {
    let scheme = Scheme::new(cfg)?;
    run_with_scheme(cfg, &scheme, false)
}

/// Same pipeline with plain Slepian-Wolf binning; `cfg.u_channel` must be
/// constant.
pub fn sw_baseline(cfg: &SimConfig) -> Result<TrialReport> {
    if !cfg.u_channel.is_deterministic_constant() {
        return Err(Error::Structure("the Slepian-Wolf baseline needs a constant U channel".into()));
    }
    run_trials(cfg)
}

/// Runs trials on a prebuilt scheme, optionally adding the exact equivocation.
pub fn run_with_scheme(cfg: &SimConfig, scheme: &Scheme, with_equivocation: bool) -> Result<TrialReport> {
    let src = &cfg.source;
    let sizes: Vec<usize> = [Axis::X, Axis::Y, Axis::Z, Axis::E]
        .iter()
        .map(|&a| src.size(a))
        .collect::<Result<_>>()?;
    let sampler = WeightedIndex::new(src.pmf()).map_err(|e| Error::Invalid(format!("source pmf: {e}")))?;
    let n = cfg.n;

    let results: Vec<TrialResult> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let mut r = rng(cfg.seed, TRIAL_STREAM_BASE + t as u64);
            let mut y = vec![0 as Symbol; n];
            let mut z = vec![0 as Symbol; n];
            for i in 0..n {
                let mut flat = sampler.sample(&mut r);
                // axes X, Y, Z, E; only Y and Z reach the coder
                flat /= sizes[3];
                z[i] = (flat % sizes[2]) as Symbol;
                flat /= sizes[2];
                y[i] = (flat % sizes[1]) as Symbol;
            }
            let enc = scheme.encode(&y);
            let outcome = match scheme.decode(enc.j1, enc.j2, &z) {
                Ok(y_hat) if y_hat == y => Outcome::Correct,
                Ok(_) => Outcome::Wrong,
                Err(f) => Outcome::Failed(f),
            };
            TrialResult { outcome, encode_failed: enc.word.is_none() }
        })
        .collect();

    let mut errors = 0;
    let mut encode_failures = 0;
    let mut decode_failures = FailureCounts::default();
    for r in &results {
        encode_failures += usize::from(r.encode_failed);
        match r.outcome {
            Outcome::Correct => {}
            Outcome::Wrong => errors += 1,
            Outcome::Failed(f) => {
                errors += 1;
                decode_failures.record(f);
            }
        }
    }
    let rate = |count: usize| (cfg.trials > 0).then(|| count as f64 / cfg.trials as f64);
    let equivocation = if with_equivocation { Some(exact_equivocation(cfg, scheme)?) } else { None };
    Ok(TrialReport {
        seed: cfg.seed,
        n,
        eps: cfg.eps,
        delta_typ: cfg.delta_typ,
        trials: cfg.trials,
        codebook_size: scheme.codebook.len(),
        rates: scheme.rates,
        errors,
        encode_failures,
        decode_failures,
        error_rate: rate(errors),
        encode_failure_rate: rate(encode_failures),
        equivocation,
    })
}

impl TrialReport {
    /// Runs trials and also computes the exact per-codebook equivocation.
    pub fn with_equivocation(cfg: &SimConfig) -> Result<TrialReport> {
        let scheme = Scheme::new(cfg)?;
        run_with_scheme(cfg, &scheme, true)
    }
}

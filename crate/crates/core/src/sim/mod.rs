//! Finite-blocklength simulation of the two-part binning scheme.
//!
//! Alice quantizes `Y^n` to a codeword `U^n(w)` from a random codebook drawn
//! i.i.d. from `P(u)`, sends the random bin `J1` of `w`, and sends the random
//! bin `J2` of `Y^n` itself. Bob finds the unique codeword in bin `J1` that is
//! typical with `Z^n`, then the unique sequence in bin `J2` typical with both.
//! A constant `U` reduces this to plain Slepian-Wolf binning.

mod code;
mod exact;
mod trials;
mod typical;

#[cfg(test)]
mod tests;

pub use code::{BinMap, Codebook, DecodeFailure, Encoded, Symbol};
pub use exact::{averaged_equivocation, exact_equivocation, AveragedEquivocation};
pub use trials::{run_trials, run_with_scheme, sw_baseline, FailureCounts, TrialReport};
pub use typical::Typicality;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dist::{Axis, Channel, JointSource};
use crate::error::{Error, Result};
use crate::info::{cond_entropy, mutual_info, Bits};

use Axis::{E, U, X, Y, Z};

/// Stream ids for [`rng`]; trial `t` uses `TRIAL_STREAM_BASE + t`.
pub(crate) const CODEBOOK_STREAM: u64 = 1;
pub(crate) const WORD_BIN_STREAM: u64 = 2;
pub(crate) const SEQUENCE_BIN_STREAM: u64 = 3;
pub(crate) const TRIAL_STREAM_BASE: u64 = 1 << 32;

/// ChaCha8 keyed by `seed`, positioned on stream `stream`.
pub(crate) fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

#[derive(Clone, Debug)]
pub struct SimConfig {
    /// Source over `(X, Y, Z, E)`; `|E| = 1` when Eve sees nothing.
    pub source: JointSource,
    /// `P(u|y)`; a constant channel selects Slepian-Wolf binning.
    pub u_channel: Channel,
    pub n: usize,
    pub eps: f64,
    pub delta_typ: f64,
    pub seed: u64,
    pub trials: usize,
}

impl SimConfig {
    /// Slepian-Wolf configuration with a constant `U`.
    pub fn slepian_wolf(source: JointSource, n: usize, eps: f64, delta_typ: f64, seed: u64, trials: usize) -> Result<Self> {
        let u_channel = Channel::constant(vec![source.alphabet(Y)?], U);
        Ok(SimConfig { source, u_channel, n, eps, delta_typ, seed, trials })
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        SimConfig { seed, ..self.clone() }
    }

    pub(crate) fn check(&self) -> Result<JointSource> {
        let axes: Vec<Axis> = self.source.axes().iter().map(|a| a.axis).collect();
        if axes != [X, Y, Z, E] {
            return Err(Error::Structure(format!("simulation needs a source over X, Y, Z, E, got {axes:?}")));
        }
        if self.source.axes().iter().any(|a| a.size > 256) || self.u_channel.to.size > 256 {
            return Err(Error::Invalid("simulation alphabets are limited to 256 symbols".into()));
        }
        if self.u_channel.from.len() != 1 || self.u_channel.from[0] != self.source.alphabet(Y)? {
            return Err(Error::Structure("the U channel must be indexed by Y".into()));
        }
        if self.u_channel.rows.iter().any(Option::is_none) {
            return Err(Error::Invalid("the U channel must define every row".into()));
        }
        self.u_channel.check()?;
        if self.n == 0 {
            return Err(Error::Invalid("blocklength must be at least 1".into()));
        }
        if !(self.eps >= 0.0) || !self.eps.is_finite() {
            return Err(Error::Invalid(format!("rate slack must be >= 0, got {}", self.eps)));
        }
        if !(self.delta_typ > 0.0) {
            return Err(Error::Invalid(format!("typicality slack must be > 0, got {}", self.delta_typ)));
        }
        self.source.attach_aux(&self.u_channel)
    }
}

/// Single-letter rates of the scheme and the realized bin exponents.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SchemeRates {
    pub i_yu: Bits,
    pub i_uz: Bits,
    pub h_y_uz: Bits,
    pub h_y_z: Bits,
    /// `log2` of the number of codeword bins.
    pub word_bin_bits: u32,
    /// `log2` of the number of sequence bins.
    pub sequence_bin_bits: u32,
}

impl SchemeRates {
    pub fn new(ext: &JointSource, n: usize, eps: f64) -> Result<Self> {
        let i_yu = mutual_info(ext, &[Y], &[U])?;
        let i_uz = mutual_info(ext, &[U], &[Z])?;
        let h_y_uz = cond_entropy(ext, &[Y], &[U, Z])?;
        let h_y_z = cond_entropy(ext, &[Y], &[Z])?;
        let word_exp = (n as f64 * (i_yu - i_uz).max(0.0)).round();
        let seq_exp = (n as f64 * (h_y_uz + eps)).round();
        if seq_exp > 63.0 {
            return Err(Error::Guard(format!("2^{seq_exp} sequence bins")));
        }
        Ok(SchemeRates {
            i_yu,
            i_uz,
            h_y_uz,
            h_y_z,
            word_bin_bits: word_exp as u32,
            sequence_bin_bits: seq_exp as u32,
        })
    }

    /// `|I(Y;U) - I(U;Z) + H(Y|U,Z) - H(Y|Z)|`.
    pub fn identity_residual(&self) -> Bits {
        (self.i_yu - self.i_uz + self.h_y_uz - self.h_y_z).abs()
    }

    /// Total realized rate in bits per symbol.
    pub fn realized_rate(&self, n: usize) -> f64 {
        (self.word_bin_bits + self.sequence_bin_bits) as f64 / n as f64
    }
}

/// Everything fixed before trials run: codebook, bin maps and typicality
/// tests.
#[derive(Clone, Debug)]
pub struct Scheme {
    pub n: usize,
    pub rates: SchemeRates,
    pub codebook: Codebook,
    pub bins: BinMap,
    pub(crate) y_size: usize,
    pub(crate) yu: Typicality,
    pub(crate) uz: Typicality,
    pub(crate) yuz: Typicality,
}

impl Scheme {
    pub fn new(cfg: &SimConfig) -> Result<Self> {
        let ext = cfg.check()?;
        let rates = SchemeRates::new(&ext, cfg.n, cfg.eps)?;
        let codebook = Codebook::build(cfg, &ext, &rates)?;
        let bins = BinMap::build(cfg, &ext, &codebook, &rates)?;
        Ok(Scheme {
            n: cfg.n,
            rates,
            yu: Typicality::new(&ext, &[Y, U], cfg.delta_typ)?,
            uz: Typicality::new(&ext, &[Z, U], cfg.delta_typ)?,
            yuz: Typicality::new(&ext, &[Y, Z, U], cfg.delta_typ)?,
            y_size: ext.size(Y)?,
            codebook,
            bins,
        })
    }

    /// Index of `y` among all `|Y|^n` sequences, first symbol most significant.
    pub fn sequence_index(&self, y: &[Symbol]) -> usize {
        y.iter().fold(0usize, |acc, &s| acc * self.y_size + s as usize)
    }

    pub fn sequence(&self, mut index: usize) -> Vec<Symbol> {
        let mut y = vec![0; self.n];
        for slot in y.iter_mut().rev() {
            *slot = (index % self.y_size) as Symbol;
            index /= self.y_size;
        }
        y
    }
}

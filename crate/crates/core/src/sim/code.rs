use rand::distributions::WeightedIndex;
use rand::Rng;
use rand_distr::Distribution;
use serde::Serialize;

use crate::defaults;
use crate::dist::{Axis, JointSource};
use crate::error::{Error, Result};

use super::{rng, Scheme, SchemeRates, SimConfig, CODEBOOK_STREAM, SEQUENCE_BIN_STREAM, WORD_BIN_STREAM};

pub type Symbol = u8;

/// Codewords `U^n(w)` drawn i.i.d. from `P(u)`, stored back to back.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Codebook {
    n: usize,
    words: Vec<Symbol>,
}

impl Codebook {
    /// `round(2^{n(I(Y;U)+eps)})` codewords, or a single one when `U` is a
    /// deterministic constant.
    pub(crate) fn build(cfg: &SimConfig, ext: &JointSource, rates: &SchemeRates) -> Result<Self> {
        let count = if cfg.u_channel.is_deterministic_constant() {
            1
        } else {
            let exp = cfg.n as f64 * (rates.i_yu + cfg.eps);
            let count = exp.exp2().round().max(1.0);
            if count > defaults::CODEBOOK_GUARD as f64 {
                return Err(Error::Guard(format!(
                    "codebook of 2^{exp:.2} words exceeds 2^31; lower n or eps"
                )));
            }
            count as usize
        };
        let pu = ext.marginal_pmf(&[Axis::U])?;
        let dist = WeightedIndex::new(&pu).map_err(|e| Error::Invalid(format!("P(u): {e}")))?;
        let mut r = rng(cfg.seed, CODEBOOK_STREAM);
        let words = (0..count * cfg.n).map(|_| dist.sample(&mut r) as Symbol).collect();
        Ok(Codebook { n: cfg.n, words })
    }

    pub fn len(&self) -> usize {
        self.words.len() / self.n
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn word(&self, w: usize) -> &[Symbol] {
        &self.words[w * self.n..(w + 1) * self.n]
    }

    pub fn words(&self) -> impl Iterator<Item = &[Symbol]> {
        self.words.chunks(self.n)
    }
}

/// Bin assignments, 1-based. Bin 0 of the codeword bins is reserved for an
/// encoding failure.
#[derive(Clone, Debug)]
pub struct BinMap {
    pub word_bin_count: u64,
    pub sequence_bin_count: u64,
    word_bins: Vec<u64>,
    sequence_bins: Vec<u64>,
    /// Word indices sorted by (bin, index).
    word_order: Vec<u32>,
    /// Sequence indices sorted by (bin, index).
    sequence_order: Vec<u32>,
}

fn order_by_bin(bins: &[u64]) -> Vec<u32> {
    let mut order: Vec<u32> = (0..bins.len() as u32).collect();
    order.sort_by_key(|&i| (bins[i as usize], i));
    order
}

fn members<'a>(order: &'a [u32], bins: &[u64], bin: u64) -> &'a [u32] {
    let lo = order.partition_point(|&i| bins[i as usize] < bin);
    let hi = order.partition_point(|&i| bins[i as usize] <= bin);
    &order[lo..hi]
}

impl BinMap {
    pub(crate) fn build(cfg: &SimConfig, ext: &JointSource, codebook: &Codebook, rates: &SchemeRates) -> Result<Self> {
        let y_size = ext.size(Axis::Y)? as u64;
        let sequences = y_size
            .checked_pow(cfg.n as u32)
            .filter(|&s| s <= defaults::SEQUENCE_GUARD)
            .ok_or_else(|| {
                Error::Guard(format!(
                    "|Y|^n above {} sequences; the decoder enumerates sequence bins",
                    defaults::SEQUENCE_GUARD
                ))
            })?;
        if rates.word_bin_bits > 62 {
            return Err(Error::Guard(format!("2^{} codeword bins", rates.word_bin_bits)));
        }
        let word_bin_count = 1u64 << rates.word_bin_bits;
        let sequence_bin_count = 1u64 << rates.sequence_bin_bits;
        let mut r = rng(cfg.seed, WORD_BIN_STREAM);
        let word_bins: Vec<u64> = (0..codebook.len()).map(|_| r.gen_range(1..=word_bin_count)).collect();
        let mut r = rng(cfg.seed, SEQUENCE_BIN_STREAM);
        let sequence_bins: Vec<u64> = (0..sequences).map(|_| r.gen_range(1..=sequence_bin_count)).collect();
        Ok(BinMap {
            word_bin_count,
            sequence_bin_count,
            word_order: order_by_bin(&word_bins),
            sequence_order: order_by_bin(&sequence_bins),
            word_bins,
            sequence_bins,
        })
    }

    pub fn word_bin(&self, w: usize) -> u64 {
        self.word_bins[w]
    }

    pub fn sequence_bin(&self, index: usize) -> u64 {
        self.sequence_bins[index]
    }

    pub fn word_bins(&self) -> &[u64] {
        &self.word_bins
    }

    /// Word indices in codeword bin `bin`, ascending.
    pub fn words_in(&self, bin: u64) -> &[u32] {
        members(&self.word_order, &self.word_bins, bin)
    }

    /// Sequence indices in sequence bin `bin`, ascending.
    pub fn sequences_in(&self, bin: u64) -> &[u32] {
        members(&self.sequence_order, &self.sequence_bins, bin)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Encoded {
    /// Codeword bin, 0 when no codeword is typical with the input.
    pub j1: u64,
    pub j2: u64,
    pub word: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecodeFailure {
    NoCodeword,
    AmbiguousCodeword,
    NoSequence,
    AmbiguousSequence,
}

impl Scheme {
    /// Bins of the first codeword jointly typical with `y`, and of `y`.
    pub fn encode(&self, y: &[Symbol]) -> Encoded {
        let word = self.codebook.words().position(|u| self.yu.check(&[y, u]));
        Encoded {
            j1: word.map_or(0, |w| self.bins.word_bin(w)),
            j2: self.bins.sequence_bin(self.sequence_index(y)),
            word,
        }
    }

    /// Unique codeword in bin `j1` typical with `z`, then the unique
    /// sequence in bin `j2` typical with both.
    pub fn decode(&self, j1: u64, j2: u64, z: &[Symbol]) -> std::result::Result<Vec<Symbol>, DecodeFailure> {
        if j1 == 0 {
            return Err(DecodeFailure::NoCodeword);
        }
        let mut found = None;
        for &w in self.bins.words_in(j1) {
            let u = self.codebook.word(w as usize);
            if self.uz.check(&[z, u]) {
                if found.is_some() {
                    return Err(DecodeFailure::AmbiguousCodeword);
                }
                found = Some(u);
            }
        }
        let u = found.ok_or(DecodeFailure::NoCodeword)?;
        let mut y_hat = None;
        for &s in self.bins.sequences_in(j2) {
            let y = self.sequence(s as usize);
            if self.yuz.check(&[&y, z, u]) {
                if y_hat.is_some() {
                    return Err(DecodeFailure::AmbiguousSequence);
                }
                y_hat = Some(y);
            }
        }
        y_hat.ok_or(DecodeFailure::NoSequence)
    }
}

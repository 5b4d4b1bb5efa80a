use std::collections::HashMap;

use proptest::prelude::*;

use super::*;
use crate::dist::Alphabet;
use crate::info::{cond_entropy, entropy};

fn flip(p: f64, a: usize, b: usize) -> f64 {
    if a == b {
        1.0 - p
    } else {
        p
    }
}

/// Y uniform binary; X, Z, E from Y through BSCs.
fn dsbs(px: f64, pz: f64, pe: f64) -> JointSource {
    let mut pmf = vec![0.0; 16];
    for x in 0..2 {
        for y in 0..2 {
            for z in 0..2 {
                for e in 0..2 {
                    pmf[((x * 2 + y) * 2 + z) * 2 + e] = 0.5 * flip(px, x, y) * flip(pz, z, y) * flip(pe, e, y);
                }
            }
        }
    }
    JointSource::xyze([2, 2, 2, 2], pmf).unwrap()
}

fn bsc_u(p: f64) -> Channel {
    Channel::binary_symmetric(Y, U, p).unwrap()
}

fn cfg(source: JointSource, u: Channel, n: usize, eps: f64, delta: f64, seed: u64, trials: usize) -> SimConfig {
    SimConfig { source, u_channel: u, n, eps, delta_typ: delta, seed, trials }
}

#[test]
fn codebook_for_constant_u_is_one_constant_word() {
    let c = SimConfig::slepian_wolf(dsbs(0.1, 0.25, 0.3), 6, 0.2, 0.1, 1, 0).unwrap();
    let s = Scheme::new(&c).unwrap();
    assert_eq!(s.codebook.len(), 1);
    assert!(s.codebook.word(0).iter().all(|&u| u == 0));
}

#[test]
fn point_mass_u_gives_constant_words() {
    // three-symbol U that always outputs symbol 2
    let u = Channel::new(vec![Alphabet::new(Y, 2).unwrap()], Alphabet::new(U, 3).unwrap(), vec![vec![0.0, 0.0, 1.0]; 2]).unwrap();
    let s = Scheme::new(&cfg(dsbs(0.1, 0.25, 0.3), u, 5, 0.0, 0.1, 4, 0)).unwrap();
    assert!(s.codebook.words().all(|w| w.iter().all(|&u| u == 2)));
}

#[test]
fn codebook_is_seeded_and_roughly_balanced() {
    let c = cfg(dsbs(0.1, 0.25, 0.3), bsc_u(0.1), 8, 0.0, 0.1, 9, 0);
    let ext = c.check().unwrap();
    let mut rates = SchemeRates::new(&ext, 8, 0.0).unwrap();
    rates.i_yu = 0.75;
    let a = Codebook::build(&c, &ext, &rates).unwrap();
    let b = Codebook::build(&c, &ext, &rates).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.len(), 64);
    let ones: usize = a.words().flat_map(|w| w.iter()).map(|&u| u as usize).sum();
    let freq = ones as f64 / (64 * 8) as f64;
    assert!((freq - 0.5).abs() < 0.1, "frequency {freq}");
    let other = Codebook::build(&c.with_seed(10), &ext, &rates).unwrap();
    assert_ne!(a, other);
}

#[test]
fn codebook_guard() {
    let c = cfg(dsbs(0.1, 0.25, 0.3), bsc_u(0.0), 40, 0.0, 0.1, 0, 0);
    assert!(matches!(Scheme::new(&c), Err(Error::Guard(_))));
}

#[test]
fn bin_counts_follow_rounded_exponents() {
    let c = cfg(dsbs(0.1, 0.25, 0.3), bsc_u(0.1), 8, 0.1, 0.1, 2, 0);
    let s = Scheme::new(&c).unwrap();
    let r = s.rates;
    assert_eq!(r.word_bin_bits as f64, (8.0 * (r.i_yu - r.i_uz)).round());
    assert_eq!(r.sequence_bin_bits as f64, (8.0 * (r.h_y_uz + 0.1)).round());
    assert_eq!(s.bins.word_bin_count, 1 << r.word_bin_bits);
    assert_eq!(s.bins.sequence_bin_count, 1 << r.sequence_bin_bits);
    assert!(s.bins.word_bins().iter().all(|&b| (1..=s.bins.word_bin_count).contains(&b)));
    let mut covered = 0;
    for b in 1..=s.bins.sequence_bin_count {
        covered += s.bins.sequences_in(b).len();
    }
    assert_eq!(covered, 256);
    // realized rate within rounding of H(Y|Z) + eps
    assert!((r.realized_rate(8) - (r.h_y_z + 0.1)).abs() <= 1.0 / 8.0 + 1e-12);
}

#[test]
fn constant_u_always_lands_in_bin_one() {
    let c = SimConfig::slepian_wolf(dsbs(0.1, 0.25, 0.3), 6, 0.1, 0.1, 3, 0).unwrap();
    let s = Scheme::new(&c).unwrap();
    for i in 0..64 {
        assert_eq!(s.encode(&s.sequence(i)).j1, 1);
    }
}

#[test]
fn huge_slack_accepts_the_first_codeword() {
    let c = cfg(dsbs(0.1, 0.25, 0.3), bsc_u(0.2), 6, 0.1, 10.0, 5, 0);
    let s = Scheme::new(&c).unwrap();
    let enc = s.encode(&[1, 0, 1, 1, 0, 0]);
    assert_eq!(enc.word, Some(0));
    assert_eq!(enc.j1, s.bins.word_bin(0));
}

/// Typicality straight from the definition, over explicit symbol tuples.
fn typical_by_definition(pairs: &[(u8, u8)], p: &HashMap<(u8, u8), f64>, delta: f64) -> bool {
    let n = pairs.len() as f64;
    let mut counts: HashMap<(u8, u8), usize> = HashMap::new();
    for &t in pairs {
        if p.get(&t).copied().unwrap_or(0.0) == 0.0 {
            return false;
        }
        *counts.entry(t).or_default() += 1;
    }
    p.iter().all(|(k, &pk)| (counts.get(k).copied().unwrap_or(0) as f64 / n - pk).abs() <= delta + 1e-12)
}

#[test]
fn encoder_matches_independent_typicality_oracle() {
    let q = 0.2;
    let c = cfg(dsbs(0.1, 0.25, 0.3), bsc_u(q), 8, 0.1, 0.1, 17, 0);
    let s = Scheme::new(&c).unwrap();
    let mut p = HashMap::new();
    for y in 0..2u8 {
        for u in 0..2u8 {
            p.insert((y, u), 0.5 * if y == u { 1.0 - q } else { q });
        }
    }
    let mut hits = 0;
    for i in 0..256 {
        let y = s.sequence(i);
        let word = s
            .codebook
            .words()
            .position(|u| typical_by_definition(&y.iter().copied().zip(u.iter().copied()).collect::<Vec<_>>(), &p, 0.1));
        let enc = s.encode(&y);
        assert_eq!(enc.word, word);
        assert_eq!(enc.j1, word.map_or(0, |w| s.bins.word_bin(w)));
        assert_eq!(enc.j2, s.bins.sequence_bin(i));
        hits += usize::from(word.is_some());
    }
    assert!(hits > 0);
}

#[test]
fn noiseless_side_information_always_decodes() {
    // Z = Y, X = Y, no eavesdropper
    let mut pmf = vec![0.0; 8];
    pmf[0] = 0.5;
    pmf[7] = 0.5;
    let src = JointSource::xyze([2, 2, 2, 1], pmf).unwrap();
    let c = SimConfig::slepian_wolf(src, 6, 0.1, 1.0, 8, 200).unwrap();
    let r = run_trials(&c).unwrap();
    assert_eq!(r.errors, 0);
}

#[test]
fn empty_codeword_bin_fails_to_decode() {
    let c = cfg(dsbs(0.1, 0.25, 0.3), bsc_u(0.05), 8, 0.0, 0.1, 21, 0);
    let s = Scheme::new(&c).unwrap();
    let empty = (1..=s.bins.word_bin_count).find(|&b| s.bins.words_in(b).is_empty());
    let z = vec![0u8; 8];
    assert_eq!(s.decode(0, 1, &z), Err(DecodeFailure::NoCodeword));
    if let Some(b) = empty {
        assert_eq!(s.decode(b, 1, &z), Err(DecodeFailure::NoCodeword));
    }
}

#[test]
fn constant_public_source_never_errs() {
    // Y and Z constant, X and E fair coins
    let mut pmf = vec![0.0; 16];
    for x in 0..2 {
        for e in 0..2 {
            pmf[((x * 2) * 2) * 2 + e] = 0.25;
        }
    }
    let src = JointSource::xyze([2, 2, 2, 2], pmf).unwrap();
    let c = SimConfig::slepian_wolf(src, 8, 0.1, 0.1, 0, 50).unwrap();
    let r = run_trials(&c).unwrap();
    assert_eq!(r.error_rate, Some(0.0));
}

#[test]
fn zero_trials_leave_rates_undefined() {
    let c = SimConfig::slepian_wolf(dsbs(0.1, 0.25, 0.3), 6, 0.1, 0.1, 0, 0).unwrap();
    let r = run_trials(&c).unwrap();
    assert_eq!(r.error_rate, None);
    assert_eq!(r.encode_failure_rate, None);
}

#[test]
fn baseline_rejects_non_constant_u() {
    let c = cfg(dsbs(0.1, 0.25, 0.3), bsc_u(0.2), 6, 0.1, 0.1, 0, 10);
    assert!(matches!(sw_baseline(&c), Err(Error::Structure(_))));
}

#[test]
fn reports_do_not_depend_on_thread_count() {
    let c = cfg(dsbs(0.1, 0.25, 0.3), bsc_u(0.2), 8, 0.1, 0.1, 6, 300);
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
    let a = one.install(|| TrialReport::with_equivocation(&c)).unwrap();
    let b = four.install(|| TrialReport::with_equivocation(&c)).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.equivocation.unwrap().to_bits(), b.equivocation.unwrap().to_bits());
}

#[test]
fn exact_equivocation_for_constant_public_source_is_h_x_given_e() {
    // Y, Z constant; (X, E) correlated
    let pxe = [[0.4, 0.1], [0.2, 0.3]];
    let mut pmf = vec![0.0; 16];
    for x in 0..2 {
        for e in 0..2 {
            pmf[((x * 2) * 2) * 2 + e] = pxe[x][e];
        }
    }
    let src = JointSource::xyze([2, 2, 2, 2], pmf).unwrap();
    let c = SimConfig::slepian_wolf(src.clone(), 4, 0.1, 0.1, 0, 0).unwrap();
    let got = exact_equivocation(&c, &Scheme::new(&c).unwrap()).unwrap();
    assert!((got - cond_entropy(&src, &[X], &[E]).unwrap()).abs() < 1e-12);
}

#[test]
fn exact_equivocation_for_independent_private_source_is_h_x() {
    let px = [0.3, 0.7];
    let pyze = dsbs(0.0, 0.25, 0.3).marginal_pmf(&[Y, Z, E]).unwrap();
    let mut pmf = vec![0.0; 16];
    for x in 0..2 {
        for r in 0..8 {
            pmf[x * 8 + r] = px[x] * pyze[r];
        }
    }
    let src = JointSource::xyze([2, 2, 2, 2], pmf).unwrap();
    let c = cfg(src.clone(), bsc_u(0.2), 5, 0.1, 0.1, 1, 0);
    let got = exact_equivocation(&c, &Scheme::new(&c).unwrap()).unwrap();
    assert!((got - entropy(&src, &[X]).unwrap()).abs() < 1e-12);
}

/// `(1/n) H(X^n | J, E^n)` by enumerating every `(x, y, e)^n` tuple.
fn equivocation_by_enumeration(c: &SimConfig, s: &Scheme) -> f64 {
    let pxye = c.source.marginal_pmf(&[X, Y, E]).unwrap();
    let n = c.n;
    let mut joint: HashMap<(u64, u64, Vec<u8>, Vec<u8>), f64> = HashMap::new();
    let total = 8usize.pow(n as u32);
    for t in 0..total {
        let mut rest = t;
        let (mut x, mut y, mut e) = (vec![0u8; n], vec![0u8; n], vec![0u8; n]);
        let mut p = 1.0;
        for i in 0..n {
            let sym = rest % 8;
            rest /= 8;
            x[i] = (sym / 4) as u8;
            y[i] = ((sym / 2) % 2) as u8;
            e[i] = (sym % 2) as u8;
            p *= pxye[sym];
        }
        let enc = s.encode(&y);
        *joint.entry((enc.j1, enc.j2, x, e)).or_default() += p;
    }
    let mut eve: HashMap<(u64, u64, Vec<u8>), f64> = HashMap::new();
    for ((j1, j2, _, e), p) in &joint {
        *eve.entry((*j1, *j2, e.clone())).or_default() += p;
    }
    let h = |m: &mut dyn Iterator<Item = f64>| -m.filter(|&p| p > 0.0).map(|p| p * p.log2()).sum::<f64>();
    (h(&mut joint.values().copied()) - h(&mut eve.values().copied())) / n as f64
}

#[test]
fn exact_equivocation_matches_enumeration_oracle() {
    for (u, seed) in [(bsc_u(0.15), 3u64), (Channel::constant(vec![Alphabet::new(Y, 2).unwrap()], U), 4)] {
        let c = cfg(dsbs(0.1, 0.25, 0.3), u, 4, 0.2, 0.2, seed, 0);
        let s = Scheme::new(&c).unwrap();
        let fast = exact_equivocation(&c, &s).unwrap();
        let slow = equivocation_by_enumeration(&c, &s);
        assert!((fast - slow).abs() < 1e-10, "{fast} vs {slow}");
    }
}

#[test]
fn exact_equivocation_guard() {
    let c = SimConfig::slepian_wolf(dsbs(0.1, 0.25, 0.3), 14, 0.1, 0.05, 0, 0).unwrap();
    let s = Scheme::new(&c).unwrap();
    assert!(matches!(exact_equivocation(&c, &s), Err(Error::Guard(_))));
}

#[test]
fn averaged_equivocation_is_the_mean() {
    let c = SimConfig::slepian_wolf(dsbs(0.1, 0.25, 0.3), 4, 0.1, 0.1, 0, 0).unwrap();
    let avg = averaged_equivocation(&c, &[1, 2, 3]).unwrap();
    let mean = avg.per_seed.iter().map(|p| p.1).sum::<f64>() / 3.0;
    assert!((avg.mean - mean).abs() < 1e-12);
    assert!(averaged_equivocation(&c, &[]).is_err());
}

fn random_u_channel(w: &[f64]) -> Channel {
    let rows = w
        .chunks(3)
        .map(|r| {
            let s: f64 = r.iter().sum();
            r.iter().map(|v| v / s).collect()
        })
        .collect();
    Channel::new(vec![Alphabet::new(Y, 2).unwrap()], Alphabet::new(U, 3).unwrap(), rows).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn rate_terms_sum_to_slepian_wolf_rate(w in prop::collection::vec(0.01f64..1.0, 6)) {
        let c = cfg(dsbs(0.1, 0.25, 0.3), random_u_channel(&w), 6, 0.1, 0.1, 0, 0);
        let ext = c.check().unwrap();
        let r = SchemeRates::new(&ext, 6, 0.1).unwrap();
        prop_assert!(r.identity_residual() < 1e-9);
    }

    #[test]
    fn exact_equivocation_respects_conditioning_bounds(w in prop::collection::vec(0.01f64..1.0, 6), seed in 0u64..1000) {
        let src = dsbs(0.1, 0.25, 0.3);
        let c = cfg(src.clone(), random_u_channel(&w), 5, 0.1, 0.15, seed, 0);
        let s = Scheme::new(&c).unwrap();
        let eq = exact_equivocation(&c, &s).unwrap();
        prop_assert!(eq <= entropy(&src, &[X]).unwrap() + 1e-9);
        prop_assert!(eq >= cond_entropy(&src, &[X], &[Y, E]).unwrap() - 1e-9);
    }

    #[test]
    fn trials_are_reproducible(seed in 0u64..1000) {
        let c = cfg(dsbs(0.1, 0.25, 0.3), bsc_u(0.2), 6, 0.1, 0.1, seed, 40);
        prop_assert_eq!(run_trials(&c).unwrap(), run_trials(&c).unwrap());
    }
}

//! Brute-force checks of the single-letterization identities on joints of
//! `(J, X^n, Y^n, E^n)`.
//!
//! With `U_i = (X_{i+1}^n, Y^{i-1}, E^{-i}, J)` where `E^{-i}` is every `E_j`
//! except `E_i`,
//!
//! ```text
//! H(X^n|E^n,J) - H(Y^n|E^n,J) = sum_i [ H(X_i|E_i,U_i) - H(Y_i|E_i,U_i) ]
//! ```
//!
//! and dropping `E` gives the eavesdropper-free form with
//! `U_i = (X_{i+1}^n, Y^{i-1}, J)`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use serde::Serialize;

use crate::defaults;
use crate::dist::{kahan_sum, validate, Tensor};
use crate::error::{Error, Result};
use crate::info::{entropy_of, Bits};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LetterSizes {
    pub j: usize,
    pub x: usize,
    pub y: usize,
    /// 1 when the eavesdropper observes nothing.
    pub e: usize,
}

impl LetterSizes {
    pub fn binary(j: usize) -> Self {
        LetterSizes { j, x: 2, y: 2, e: 2 }
    }

    fn shape(&self, n: usize) -> Vec<usize> {
        let mut s = vec![self.j];
        s.extend(std::iter::repeat(self.x).take(n));
        s.extend(std::iter::repeat(self.y).take(n));
        s.extend(std::iter::repeat(self.e).take(n));
        s
    }

    fn states(&self, n: usize) -> Option<usize> {
        let per = self.x.checked_mul(self.y)?.checked_mul(self.e)?;
        per.checked_pow(n as u32)?.checked_mul(self.j)
    }
}

/// Joint PMF over `J x X^n x Y^n x E^n`, stored row-major in that axis order.
#[derive(Clone, Debug)]
pub struct MultiLetterJoint {
    n: usize,
    sizes: LetterSizes,
    pmf: Tensor,
}

fn check_guard(n: usize, sizes: LetterSizes) -> Result<usize> {
    if n == 0 {
        return Err(Error::Invalid("blocklength must be at least 1".into()));
    }
    if [sizes.j, sizes.x, sizes.y, sizes.e].contains(&0) {
        return Err(Error::Invalid("alphabet sizes must be positive".into()));
    }
    match sizes.states(n) {
        Some(s) if s <= defaults::STATE_GUARD => Ok(s),
        _ => Err(Error::Guard(format!(
            "|J|(|X||Y||E|)^n exceeds {} states; reduce n or the alphabets",
            defaults::STATE_GUARD
        ))),
    }
}

impl MultiLetterJoint {
    pub fn new(n: usize, sizes: LetterSizes, pmf: Vec<f64>) -> Result<Self> {
        check_guard(n, sizes)?;
        let shape = sizes.shape(n);
        validate(&shape, &pmf).map_err(Error::Violation)?;
        Ok(MultiLetterJoint { n, sizes, pmf: Tensor::new(shape, pmf)? })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sizes(&self) -> LetterSizes {
        self.sizes
    }

    pub fn pmf(&self) -> &[f64] {
        self.pmf.data()
    }

    fn j(&self) -> usize {
        0
    }

    fn x(&self, i: usize) -> usize {
        1 + i
    }

    fn y(&self, i: usize) -> usize {
        1 + self.n + i
    }

    fn e(&self, i: usize) -> usize {
        1 + 2 * self.n + i
    }

    fn h(&self, axes: &[usize]) -> Bits {
        if axes.is_empty() {
            return 0.0;
        }
        let mut keep = axes.to_vec();
        keep.sort_unstable();
        keep.dedup();
        entropy_of(self.pmf.marginal(&keep).data())
    }

    fn cond_h(&self, target: &[usize], given: &[usize]) -> Bits {
        let all: Vec<usize> = target.iter().chain(given).copied().collect();
        self.h(&all) - self.h(given)
    }

    /// `|lhs - sum_i rhs_i|`, including the `E` axes when `with_e`.
    fn residual(&self, with_e: bool) -> Bits {
        let n = self.n;
        let e_all: Vec<usize> = if with_e { (0..n).map(|i| self.e(i)).collect() } else { Vec::new() };
        let mut given = e_all.clone();
        given.push(self.j());
        let xs: Vec<usize> = (0..n).map(|i| self.x(i)).collect();
        let ys: Vec<usize> = (0..n).map(|i| self.y(i)).collect();
        let lhs = self.cond_h(&xs, &given) - self.cond_h(&ys, &given);

        let terms: Vec<f64> = (0..n)
            .map(|i| {
                let mut u: Vec<usize> = ((i + 1)..n).map(|k| self.x(k)).collect();
                u.extend((0..i).map(|k| self.y(k)));
                if with_e {
                    u.extend((0..n).filter(|&k| k != i).map(|k| self.e(k)));
                }
                u.push(self.j());
                let mut cond = u;
                if with_e {
                    cond.push(self.e(i));
                }
                self.cond_h(&[self.x(i)], &cond) - self.cond_h(&[self.y(i)], &cond)
            })
            .collect();
        (lhs - kahan_sum(terms)).abs()
    }
}

/// Residual of the eavesdropper-free identity; requires `|E| = 1`.
pub fn identity_residual(m: &MultiLetterJoint) -> Result<Bits> {
    if m.sizes.e != 1 {
        return Err(Error::Structure(format!(
            "expected no eavesdropper axis (|E| = 1), got |E| = {}",
            m.sizes.e
        )));
    }
    Ok(m.residual(false))
}

/// Residual of the identity with eavesdropper observations `E^n`.
pub fn eve_identity_residual(m: &MultiLetterJoint) -> Result<Bits> {
    Ok(m.residual(true))
}

/// Entries drawn i.i.d. Exp(1) from ChaCha8 seeded by `seed`, then
/// normalized (a flat Dirichlet draw).
pub fn random_multiletter(n: usize, sizes: LetterSizes, seed: u64) -> Result<MultiLetterJoint> {
    let states = check_guard(n, sizes)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w: Vec<f64> = (0..states).map(|_| Exp1.sample(&mut rng)).collect();
    let total = kahan_sum(w.iter().copied());
    MultiLetterJoint::new(n, sizes, w.into_iter().map(|v| v / total).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const TOL: f64 = 1e-9;

    #[test]
    fn single_letter_is_term_by_term() {
        let m = random_multiletter(1, LetterSizes { e: 1, ..LetterSizes::binary(3) }, 7).unwrap();
        assert!(identity_residual(&m).unwrap() < 1e-15);
    }

    #[test]
    fn copies_have_zero_sides() {
        // X^n = Y^n, J independent uniform
        let n = 3;
        let sizes = LetterSizes { j: 2, x: 2, y: 2, e: 1 };
        let shape = sizes.shape(n);
        let probe = Tensor::new(shape.clone(), vec![0.0; shape.iter().product()]).unwrap();
        let mut pmf = probe.data().to_vec();
        for j in 0..2 {
            for s in 0..8usize {
                let mut idx = vec![j];
                idx.extend((0..n).map(|b| (s >> (n - 1 - b)) & 1));
                idx.extend((0..n).map(|b| (s >> (n - 1 - b)) & 1));
                idx.extend(std::iter::repeat(0).take(n));
                pmf[probe.flat_index(&idx)] = 1.0 / 16.0;
            }
        }
        let m = MultiLetterJoint::new(n, sizes, pmf).unwrap();
        let xs: Vec<usize> = (0..n).map(|i| m.x(i)).collect();
        let ys: Vec<usize> = (0..n).map(|i| m.y(i)).collect();
        assert!((m.cond_h(&xs, &[0]) - 3.0).abs() < 1e-12);
        assert!((m.cond_h(&xs, &[0]) - m.cond_h(&ys, &[0])).abs() < 1e-15);
        assert!(identity_residual(&m).unwrap() < TOL);
    }

    #[test]
    fn product_joint_sides_are_n_times_single_letter() {
        let n = 2;
        let px = [0.3, 0.7];
        let py = [0.6, 0.4];
        let pe = [0.2, 0.8];
        let sizes = LetterSizes { j: 1, x: 2, y: 2, e: 2 };
        let shape = sizes.shape(n);
        let total: usize = shape.iter().product();
        let mut pmf = vec![0.0; total];
        let mut idx = vec![0usize; shape.len()];
        for (flat, p) in pmf.iter_mut().enumerate() {
            crate::dist::unravel(flat, &shape, &mut idx);
            *p = (0..n).map(|i| px[idx[1 + i]] * py[idx[1 + n + i]] * pe[idx[1 + 2 * n + i]]).product();
        }
        let m = MultiLetterJoint::new(n, sizes, pmf).unwrap();
        let mut given: Vec<usize> = (0..n).map(|i| m.e(i)).collect();
        given.push(0);
        let xs: Vec<usize> = (0..n).map(|i| m.x(i)).collect();
        let ys: Vec<usize> = (0..n).map(|i| m.y(i)).collect();
        let lhs = m.cond_h(&xs, &given) - m.cond_h(&ys, &given);
        let single = entropy_of(&px) - entropy_of(&py);
        assert!((lhs - n as f64 * single).abs() < 1e-12);
        assert!(eve_identity_residual(&m).unwrap() < 1e-12);
    }

    #[test]
    fn without_eve_axes_the_two_residuals_agree_exactly() {
        for seed in 0..20 {
            let m = random_multiletter(3, LetterSizes { e: 1, ..LetterSizes::binary(2) }, seed).unwrap();
            assert_eq!(eve_identity_residual(&m).unwrap().to_bits(), identity_residual(&m).unwrap().to_bits());
        }
    }

    #[test]
    fn wrong_auxiliary_leaves_a_gap() {
        // drop the past Y symbols from U_i; the sum no longer telescopes
        let m = random_multiletter(2, LetterSizes { e: 1, ..LetterSizes::binary(2) }, 5).unwrap();
        let lhs = m.cond_h(&[m.x(0), m.x(1)], &[0]) - m.cond_h(&[m.y(0), m.y(1)], &[0]);
        let wrong: f64 = (0..2)
            .map(|i| {
                let mut u: Vec<usize> = ((i + 1)..2).map(|k| m.x(k)).collect();
                u.push(0);
                m.cond_h(&[m.x(i)], &u) - m.cond_h(&[m.y(i)], &u)
            })
            .sum();
        assert!((lhs - wrong).abs() > 1e-6);
        assert!(identity_residual(&m).unwrap() < TOL);
    }

    #[test]
    fn eve_free_identity_requires_trivial_eve() {
        let m = random_multiletter(2, LetterSizes::binary(1), 0).unwrap();
        assert!(matches!(identity_residual(&m), Err(Error::Structure(_))));
    }

    #[test]
    fn seeds_are_reproducible_and_distinct() {
        let a = random_multiletter(2, LetterSizes::binary(2), 11).unwrap();
        let b = random_multiletter(2, LetterSizes::binary(2), 11).unwrap();
        let c = random_multiletter(2, LetterSizes::binary(2), 12).unwrap();
        assert_eq!(a.pmf(), b.pmf());
        assert!(a.pmf().iter().zip(c.pmf()).any(|(u, v)| u != v));
        assert!(validate(&a.sizes().shape(2), a.pmf()).is_ok());
    }

    #[test]
    fn guard_and_zero_blocklength() {
        let big = LetterSizes { j: 2, x: 4, y: 4, e: 4 };
        assert!(matches!(random_multiletter(4, big, 0), Err(Error::Guard(_))));
        assert!(matches!(random_multiletter(0, LetterSizes::binary(1), 0), Err(Error::Invalid(_))));
    }

    /// Swaps J symbols by a permutation.
    fn relabel_j(m: &MultiLetterJoint, perm: &[usize]) -> MultiLetterJoint {
        let block = m.pmf().len() / m.sizes.j;
        let mut out = vec![0.0; m.pmf().len()];
        for j in 0..m.sizes.j {
            out[perm[j] * block..(perm[j] + 1) * block].copy_from_slice(&m.pmf()[j * block..(j + 1) * block]);
        }
        MultiLetterJoint::new(m.n, m.sizes, out).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn eve_identity_residual_vanishes(seed in any::<u64>(), n in 1usize..=3, j in 1usize..=3, e in 1usize..=2) {
            let m = random_multiletter(n, LetterSizes { j, x: 2, y: 2, e }, seed).unwrap();
            prop_assert!(eve_identity_residual(&m).unwrap() < TOL);
        }

        #[test]
        fn eve_free_residual_vanishes(seed in any::<u64>(), n in 1usize..=3, j in 1usize..=3, x in 1usize..=3) {
            let m = random_multiletter(n, LetterSizes { j, x, y: 2, e: 1 }, seed).unwrap();
            prop_assert!(identity_residual(&m).unwrap() < TOL);
        }

        #[test]
        fn residual_is_invariant_under_j_relabeling(seed in any::<u64>()) {
            let m = random_multiletter(2, LetterSizes::binary(3), seed).unwrap();
            let r = relabel_j(&m, &[2, 0, 1]);
            let a = eve_identity_residual(&m).unwrap();
            let b = eve_identity_residual(&r).unwrap();
            prop_assert!(a < TOL && b < TOL);
            prop_assert!((a - b).abs() < 1e-12);
        }
    }
}

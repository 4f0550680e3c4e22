//! Reproducible element samples for universally quantified checks.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::fpcat::{Elem, ExplicitRing};
use crate::kernel::matrix::Ring;
use crate::kernel::poly::Poly;
use crate::kernel::ratfunc::RatFunc;
use crate::kernel::rational::Rational;

/// Monomial degree cap for basis samples.
pub const DEFAULT_DEGREE_CAP: usize = 6;
/// Pseudorandom combinations added to every sample.
pub const DEFAULT_RANDOM_SAMPLES: usize = 32;
pub const DEFAULT_SEED: u64 = 0x5eed;

/// A spanning family: a Q-basis for finite-dimensional rings, monomials up to
/// `cap` (and negative powers of the inverted element) otherwise.
pub fn basis_elements(ring: &ExplicitRing, cap: usize) -> Vec<Elem> {
    match ring {
        ExplicitRing::Poly { .. } => (0..=cap).map(|k| Elem::P(Poly::monomial(Rational::one(), k))).collect(),
        ExplicitRing::Localized { denom, .. } => {
            let mut out: Vec<Elem> = (0..=cap)
                .map(|k| Elem::F(RatFunc::from_poly(Poly::monomial(Rational::one(), k))))
                .collect();
            let reach = (cap / denom.deg().max(1)).max(1);
            for j in 1..=reach {
                out.push(Elem::F(RatFunc::new(Poly::one(), denom.pow(j)).expect("nonzero denominator")));
                out.push(Elem::F(RatFunc::new(Poly::x(), denom.pow(j)).expect("nonzero denominator")));
            }
            out
        }
        ExplicitRing::Fraction { .. } => {
            let mut out: Vec<Elem> = (0..=cap)
                .map(|k| Elem::F(RatFunc::from_poly(Poly::monomial(Rational::one(), k))))
                .collect();
            for c in 0..cap as i64 {
                out.push(Elem::F(RatFunc::new(Poly::one(), Poly::from_ints(&[-c, 1])).expect("nonzero")));
            }
            out
        }
        ExplicitRing::Product(factors) if factors.iter().any(|f| !f.is_fd_able()) => {
            let mut out = Vec::new();
            for (i, f) in factors.iter().enumerate() {
                for e in basis_elements(f, cap) {
                    out.push(ring.embed(i, &e));
                }
            }
            out
        }
        _ => {
            let d = ring.q_dim().unwrap_or(0);
            (0..d)
                .map(|i| {
                    let mut c = vec![Rational::zero(); d];
                    c[i] = Rational::one();
                    ring.from_coords(&c)
                })
                .collect()
        }
    }
}

/// Basis elements followed by `random` seeded nonempty combinations of them
/// with small nonzero rational coefficients.
pub fn sample_elements(ring: &ExplicitRing, cap: usize, random: usize, seed: u64) -> Vec<Elem> {
    let basis = basis_elements(ring, cap);
    let mut out = basis.clone();
    if basis.is_empty() {
        return out;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..random {
        let mut picked: Vec<bool> = basis.iter().map(|_| rng.gen_bool(0.5)).collect();
        if !picked.contains(&true) {
            picked[rng.gen_range(0..basis.len())] = true;
        }
        let mut acc = ring.zero();
        for (b, _) in basis.iter().zip(&picked).filter(|(_, &p)| p) {
            // nonzero coefficients on independent elements keep the sample nonzero
            let n = rng.gen_range(1i64..=5) * if rng.gen_bool(0.5) { 1 } else { -1 };
            let c = Rational::new(n.into(), rng.gen_range(1i64..=3).into());
            acc = ring.add(&acc, &ring.mul(&ring.from_rational(&c), b));
        }
        out.push(acc);
    }
    out
}

/// The nonzero members of a sample.
pub fn nonzero_samples(ring: &ExplicitRing, cap: usize, random: usize, seed: u64) -> Vec<Elem> {
    sample_elements(ring, cap, random, seed).into_iter().filter(|e| !ring.is_zero(e)).collect()
}

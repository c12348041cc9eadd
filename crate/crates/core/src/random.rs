//! Seeded random elements for the verification suites.
//!
//! Coefficients are small rationals `p/q` with `|p| <= 10` and `1 <= q <= 10`;
//! Grassmann elements get a random support of at most [`GRASSMANN_SUPPORT`]
//! basis monomials. Each trial draws from its own ChaCha stream so that a
//! single trial can be replayed from `(seed, trial)` alone.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ring::{rational, Element, Rational, Ring, RingKind, Value};

pub const GRASSMANN_SUPPORT: usize = 4;

pub type TrialRng = ChaCha8Rng;

pub fn trial_rng(seed: u64, trial: u64) -> TrialRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

pub fn random_rational<R: Rng + ?Sized>(rng: &mut R) -> Rational {
    rational(rng.gen_range(-10..=10), rng.gen_range(1..=10))
}

fn random_value<R: Rng + ?Sized>(ring: &Ring, rng: &mut R) -> Value {
    match ring.kind() {
        RingKind::Grassmann { m } => {
            let size = 1usize << m;
            let mut v = vec![Rational::zero(); size];
            let support = rng.gen_range(1..=GRASSMANN_SUPPORT.min(size));
            for _ in 0..support {
                let s = rng.gen_range(0..size);
                v[s] += random_rational(rng);
            }
            Value::Flat(v)
        }
        RingKind::Matrix { base, n } => {
            Value::Nested((0..n * n).map(|_| random_value(base, rng)).collect())
        }
        RingKind::TruncSkew { base, t, .. } => {
            Value::Nested((0..*t).map(|_| random_value(base, rng)).collect())
        }
        _ => Value::Flat((0..ring.dimension()).map(|_| random_rational(rng)).collect()),
    }
}

impl Ring {
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Element {
        self.wrap(random_value(self, rng))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trial_streams_are_reproducible() {
        let ring = Ring::grassmann(3).unwrap();
        let a = ring.random_element(&mut trial_rng(7, 3));
        let b = ring.random_element(&mut trial_rng(7, 3));
        let c = ring.random_element(&mut trial_rng(7, 4));
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn coefficients_are_small() {
        let mut rng = trial_rng(1, 0);
        for _ in 0..500 {
            let q = random_rational(&mut rng);
            assert!(q.numer().magnitude() <= &10u32.into());
            assert!(q.denom() <= &10.into());
        }
    }
}

//! Seeded generation of rational weight vectors for randomized identity
//! sweeps. All draws are exact rationals with small denominators.

use rand::Rng;

use crate::linalg::{rat, rat_int, Rational};
use num_traits::Zero;

/// A rational drawn from the open interval (0,1).
pub fn open01(rng: &mut impl Rng) -> Rational {
    let den = rng.gen_range(2i64..=24);
    let num = rng.gen_range(1i64..den);
    rat(num, den)
}

/// Independent weights in (0,1).
pub fn open01_weights(rng: &mut impl Rng, count: usize) -> Vec<Rational> {
    (0..count).map(|_| open01(rng)).collect()
}

/// Positive rationals summing to one.
pub fn simplex(rng: &mut impl Rng, count: usize) -> Vec<Rational> {
    loop {
        let raw: Vec<Rational> = (0..count).map(|_| rat(rng.gen_range(1i64..=24), 1)).collect();
        let total: Rational = raw.iter().sum();
        if total.is_zero() {
            continue;
        }
        return raw.into_iter().map(|r| r / &total).collect();
    }
}

/// Weights in (0,1) with the prescribed exact sum. Draws positive rationals,
/// rescales to the target sum, and rejects until every entry is below one.
pub fn constrained_sum_weights(rng: &mut impl Rng, count: usize, sum: &Rational) -> Vec<Rational> {
    let one = rat_int(1);
    loop {
        let raw: Vec<Rational> = (0..count).map(|_| rat(rng.gen_range(8i64..=24), 1)).collect();
        let total: Rational = raw.iter().sum();
        let scaled: Vec<Rational> = raw.into_iter().map(|r| r * sum / &total).collect();
        if scaled.iter().all(|a| *a > Rational::zero() && *a < one) {
            return scaled;
        }
    }
}

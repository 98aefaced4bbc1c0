//! Weighted arrangements, localized averages a_L, counting coefficients B,
//! and the Hirzebruch quadratic forms Q_L in both published formulations.

use num_traits::Zero;
use thiserror::Error;

use crate::arrangement::Arrangement;
use crate::lattice::{FlatId, IntersectionLattice};
use crate::linalg::{format_rational, rat_int, Rational};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WeightError {
    #[error("expected {expected} weights, got {got}")]
    CountMismatch { expected: usize, got: usize },
    #[error("weight {value} at index {index} is outside the open interval (0,1)")]
    OutOfRange { index: usize, value: String },
    #[error("flat {0} does not have rank 2")]
    NotRankTwo(FlatId),
    #[error("flats {0} and {1} are not nested as subspaces")]
    NotNested(FlatId, FlatId),
    #[error("flat {0} is not irreducible")]
    NotIrreducible(FlatId),
    #[error("constraint violated: {0}")]
    Constraint(String),
}

/// An arrangement together with rational weights a_H in (0,1).
#[derive(Debug, Clone)]
pub struct WeightedArrangement {
    arrangement: Arrangement,
    weights: Vec<Rational>,
}

impl WeightedArrangement {
    pub fn new(arrangement: Arrangement, weights: Vec<Rational>) -> Result<Self, WeightError> {
        if weights.len() != arrangement.len() {
            return Err(WeightError::CountMismatch {
                expected: arrangement.len(),
                got: weights.len(),
            });
        }
        let one = rat_int(1);
        for (i, w) in weights.iter().enumerate() {
            if *w <= Rational::zero() || *w >= one {
                return Err(WeightError::OutOfRange {
                    index: i,
                    value: format_rational(w),
                });
            }
        }
        Ok(Self { arrangement, weights })
    }

    pub fn arrangement(&self) -> &Arrangement {
        &self.arrangement
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn weight(&self, h: usize) -> &Rational {
        &self.weights[h]
    }

    /// Total weight s = sum of a_H.
    pub fn total(&self) -> Rational {
        self.weights.iter().sum()
    }

    /// Sum of the weights of the hyperplanes through a flat.
    pub fn sum_over_flat(&self, lat: &IntersectionLattice, id: FlatId) -> Rational {
        lat.flat(id).closure.iter().map(|&h| &self.weights[h as usize]).sum()
    }

    /// Localized average a_L = r(L)^{-1} * sum of a_H over H containing L.
    pub fn a_of_flat(&self, lat: &IntersectionLattice, id: FlatId) -> Rational {
        self.sum_over_flat(lat, id) / rat_int(lat.rank(id) as i64)
    }
}

/// Multiplicity m_L of a rank-2 flat.
pub fn multiplicity(lat: &IntersectionLattice, id: FlatId) -> Result<usize, WeightError> {
    if lat.rank(id) != 2 {
        return Err(WeightError::NotRankTwo(id));
    }
    Ok(lat.multiplicity(id))
}

/// B(L1, L2) for flats L1 contained in L2 as subspaces: the number of
/// irreducible flats L' with L1 contained in L' and L' covered by L2
/// (rank gap exactly one), minus one. May be -1 when no such flat exists.
pub fn b_coeff(lat: &IntersectionLattice, l1: FlatId, l2: FlatId) -> Result<i64, WeightError> {
    if !lat.subspace_le(l1, l2) {
        return Err(WeightError::NotNested(l1, l2));
    }
    let target_rank = lat.rank(l2) + 1;
    let count = lat
        .flats_of_rank(target_rank)
        .filter(|&lp| {
            lat.is_irreducible_flat(lp) && lat.subspace_le(l1, lp) && lat.subspace_le(lp, l2)
        })
        .count() as i64;
    Ok(count - 1)
}

/// Which of the two published formulas to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QFormula {
    Primary,
    Alternative,
}

/// Rank-2 irreducible flats containing `id` as a subspace.
pub fn g2_above(lat: &IntersectionLattice, id: FlatId) -> Vec<FlatId> {
    lat.flats_of_rank(2)
        .filter(|&lp| lat.is_irreducible_flat(lp) && lat.subspace_le(id, lp))
        .collect()
}

/// Hirzebruch quadratic form Q_L of the localized essential arrangement,
/// evaluated exactly at the weight vector. For irreducible flats of rank
/// one or two the form is identically zero.
pub fn hirzebruch_q(
    w: &WeightedArrangement,
    lat: &IntersectionLattice,
    id: FlatId,
    formula: QFormula,
) -> Result<Rational, WeightError> {
    if !lat.is_irreducible_flat(id) {
        return Err(WeightError::NotIrreducible(id));
    }
    let r = lat.rank(id);
    if r <= 2 {
        return Ok(Rational::zero());
    }
    let closure = &lat.flat(id).closure;
    let g2 = g2_above(lat, id);
    let a_l = w.a_of_flat(lat, id);
    let sum_g2_sq: Rational = g2
        .iter()
        .map(|&lp| {
            let a = w.a_of_flat(lat, lp);
            &a * &a
        })
        .sum();

    match formula {
        QFormula::Primary => {
            // sum over G^2_L of a_{L'}^2
            //   - 1/2 sum over H in H_L of B(L,H) a_H^2
            //   - r(L)/2 * a_L^2
            let mut b_term = Rational::zero();
            for &h in closure.iter() {
                let hf = lat.hyperplane_flat(h as usize);
                let b = b_coeff(lat, id, hf)?;
                let a_h = w.weight(h as usize);
                b_term += rat_int(b) * a_h * a_h;
            }
            let half = Rational::new(1.into(), 2.into());
            Ok(sum_g2_sq - &half * b_term - &half * rat_int(r as i64) * &a_l * &a_l)
        }
        QFormula::Alternative => {
            // binom(r,2) a_L^2 - sum over G^2_L of a_{L'}^2
            //   - sum over reducible pairs {H,H'} in H_L of a_H a_{H'}
            let binom = rat_int((r * (r - 1) / 2) as i64);
            let mut red_pairs = Rational::zero();
            for (i, &h) in closure.iter().enumerate() {
                for &hp in closure.iter().skip(i + 1) {
                    let pair_flat =
                        lat.meet_subspaces(lat.hyperplane_flat(h as usize), lat.hyperplane_flat(hp as usize));
                    debug_assert_eq!(lat.rank(pair_flat), 2);
                    if lat.multiplicity(pair_flat) == 2 {
                        red_pairs += w.weight(h as usize) * w.weight(hp as usize);
                    }
                }
            }
            Ok(binom * &a_l * &a_l - sum_g2_sq - red_pairs)
        }
    }
}

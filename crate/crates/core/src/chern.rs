//! Formal Chern-class computations on the wonderful model: the first Chern
//! identity eta, the second-Chern defect Omega assembled from residue Chern
//! polynomials, the parabolic second Chern character, and exact comparison of
//! each against its closed-form coordinates in the Hirzebruch quadratic forms.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{format_rational, rat, rat_int, Rational};
use crate::weights::{b_coeff, hirzebruch_q, QFormula, WeightedArrangement};
use crate::wonder::{BasisKey, GIdx, H2Class, H4Class, WonderModel};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ChernError {
    #[error("weight sum is {sum}, but the constrained mode requires exactly {required}")]
    CyRequired { sum: String, required: String },
}

/// Which residue pair a second-Chern coefficient refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairKind {
    /// a single subspace taken twice
    Equal,
    /// nested subspaces, the first strictly inside the second
    Chain,
    /// transverse-reducible pair
    Transverse,
}

/// Scalar coefficient of a residue pair in the second-Chern expansion:
/// r(r-1)/2 * a^2 for a repeated subspace, r_M (r_L - 1) a_L a_M for a
/// chain, r_L r_M a_L a_M for a transverse pair.
pub fn chern2_pair(
    kind: PairKind,
    r_l: usize,
    r_m: usize,
    a_l: &Rational,
    a_m: &Rational,
) -> Rational {
    match kind {
        PairKind::Equal => rat((r_l * (r_l - 1)) as i64, 2) * a_l * a_l,
        PairKind::Chain => rat_int((r_m * (r_l - 1)) as i64) * a_l * a_m,
        PairKind::Transverse => rat_int((r_l * r_m) as i64) * a_l * a_m,
    }
}

fn a_of(w: &WeightedArrangement, model: &WonderModel<'_>, g: GIdx) -> Rational {
    w.a_of_flat(model.lattice(), model.flat_of(g))
}

/// First Chern identity class: (n+1) times the pullback hyperplane class
/// minus the weighted sum of the divisor classes, reduced to the H^2 basis.
pub fn eta(w: &WeightedArrangement, model: &WonderModel<'_>) -> H2Class {
    let n = w.arrangement().dim() as i64;
    let gamma: Vec<(GIdx, Rational)> = (0..model.g_len())
        .filter(|&g| g != model.empty_gidx())
        .map(|g| {
            let r = model.rank_of(g) as i64;
            (g, -rat_int(r) * a_of(w, model, g))
        })
        .collect();
    model.reduce_h2(&rat_int(n + 1), &gamma)
}

/// Nonempty irreducible subspaces, the summation range of the residue sums.
fn nonempty_g(model: &WonderModel<'_>) -> Vec<GIdx> {
    (0..model.g_len()).filter(|&g| g != model.empty_gidx()).collect()
}

/// The second-Chern defect: binom(n+1,2) gamma_empty^2 minus the three
/// residue sums (squares, nested chains, transverse pairs), each monomial
/// reduced to basic form.
pub fn omega_ohtsuki(w: &WeightedArrangement, model: &WonderModel<'_>) -> H4Class {
    let n = w.arrangement().dim() as i64;
    let mut out = H4Class::zero();
    out.add_scaled(BasisKey::Square(model.empty_gidx()), rat((n + 1) * n, 2));
    let live = nonempty_g(model);
    for &l in &live {
        if model.rank_of(l) < 2 {
            continue;
        }
        let coeff = chern2_pair(PairKind::Equal, model.rank_of(l), 0, &a_of(w, model, l), &rat_int(0));
        out.add_class_scaled(&model.reduce_monomial(l, l), &-coeff);
    }
    for &l in &live {
        for &m in &live {
            if model.lt(l, m) {
                let coeff = chern2_pair(
                    PairKind::Chain,
                    model.rank_of(l),
                    model.rank_of(m),
                    &a_of(w, model, l),
                    &a_of(w, model, m),
                );
                out.add_class_scaled(&model.reduce_monomial(l, m), &-coeff);
            }
        }
    }
    for (i, &l) in live.iter().enumerate() {
        for &m in &live[i + 1..] {
            if model.pitchfork(l, m) {
                let coeff = chern2_pair(
                    PairKind::Transverse,
                    model.rank_of(l),
                    model.rank_of(m),
                    &a_of(w, model, l),
                    &a_of(w, model, m),
                );
                out.add_class_scaled(&model.reduce_monomial(l, m), &-coeff);
            }
        }
    }
    out
}

/// Closed-form coordinates of the second-Chern defect: Q_L on squares,
/// -2 B(L1,L2) Q_{L2} on chains into rank >= 3, zero elsewhere.
pub fn omega_closed_form(w: &WeightedArrangement, model: &WonderModel<'_>) -> H4Class {
    let lat = model.lattice();
    let mut out = H4Class::zero();
    for key in model.delta2() {
        match *key {
            BasisKey::Square(l) => {
                let q = hirzebruch_q(w, lat, model.flat_of(l), QFormula::Primary)
                    .expect("irreducible");
                out.add_scaled(*key, q);
            }
            BasisKey::Chain(l1, l2) => {
                if model.rank_of(l2) >= 3 {
                    let b = b_coeff(lat, model.flat_of(l1), model.flat_of(l2)).expect("nested");
                    let q = hirzebruch_q(w, lat, model.flat_of(l2), QFormula::Primary)
                        .expect("irreducible");
                    out.add_scaled(*key, rat_int(-2 * b) * q);
                }
            }
            BasisKey::Transverse(..) => {}
        }
    }
    out
}

/// The parabolic second Chern character, reduced to basic form.
pub fn parch2(w: &WeightedArrangement, model: &WonderModel<'_>) -> H4Class {
    let n = w.arrangement().dim() as i64;
    let mut out = H4Class::zero();
    out.add_scaled(BasisKey::Square(model.empty_gidx()), rat(-(n + 1), 2));
    let live = nonempty_g(model);
    for &l in &live {
        let r = model.rank_of(l) as i64;
        let a = a_of(w, model, l);
        let coeff = rat(r, 2) * &a * &a;
        out.add_class_scaled(&model.reduce_monomial(l, l), &coeff);
    }
    for &l in &live {
        for &m in &live {
            if model.lt(l, m) {
                let coeff = rat_int(model.rank_of(m) as i64)
                    * a_of(w, model, l)
                    * a_of(w, model, m);
                out.add_class_scaled(&model.reduce_monomial(l, m), &coeff);
            }
        }
    }
    out
}

/// Closed-form coordinates of the parabolic second Chern character: Q_L on
/// squares, +2 B(L1,L2) Q_{L2} on chains into rank >= 3, zero elsewhere.
pub fn parch2_closed_form(w: &WeightedArrangement, model: &WonderModel<'_>) -> H4Class {
    let lat = model.lattice();
    let mut out = H4Class::zero();
    for key in model.delta2() {
        match *key {
            BasisKey::Square(l) => {
                let q = hirzebruch_q(w, lat, model.flat_of(l), QFormula::Primary)
                    .expect("irreducible");
                out.add_scaled(*key, q);
            }
            BasisKey::Chain(l1, l2) => {
                if model.rank_of(l2) >= 3 {
                    let b = b_coeff(lat, model.flat_of(l1), model.flat_of(l2)).expect("nested");
                    let q = hirzebruch_q(w, lat, model.flat_of(l2), QFormula::Primary)
                        .expect("irreducible");
                    out.add_scaled(*key, rat_int(2 * b) * q);
                }
            }
            BasisKey::Transverse(..) => {}
        }
    }
    out
}

/// One basic-monomial coordinate comparison.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct CoeffRow {
    pub key: String,
    pub computed: String,
    pub closed_form: String,
    /// false when the coordinate is excluded from the comparison
    pub compared: bool,
    pub equal: bool,
}

/// Per-coordinate comparison of a computed class against its closed form.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct CoeffReport {
    pub rows: Vec<CoeffRow>,
    pub all_equal: bool,
}

fn compare(
    model: &WonderModel<'_>,
    computed: &H4Class,
    closed: &H4Class,
    compare_empty_square: bool,
) -> CoeffReport {
    let empty_square = BasisKey::Square(model.empty_gidx());
    let mut rows = Vec::with_capacity(model.delta2().len());
    let mut all_equal = true;
    for key in model.delta2() {
        let a = computed.coeff(key);
        let b = closed.coeff(key);
        let compared = compare_empty_square || *key != empty_square;
        let equal = a == b;
        if compared {
            all_equal &= equal;
        }
        rows.push(CoeffRow {
            key: model.render_key(key),
            computed: format_rational(&a),
            closed_form: format_rational(&b),
            compared,
            equal,
        });
    }
    CoeffReport { rows, all_equal }
}

/// Outcome of the paired identity verification.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct IdentityReports {
    pub omega: CoeffReport,
    pub parch2: CoeffReport,
}

/// Compares the computed Omega and parabolic second Chern character against
/// their closed forms, coordinate by coordinate. When `constrain_cy` is set
/// the weights must sum to exactly n+1 and every coordinate is compared;
/// otherwise the empty-subspace square coordinate is skipped, since its
/// closed form is derived under that constraint.
pub fn verify_identities(
    w: &WeightedArrangement,
    model: &WonderModel<'_>,
    constrain_cy: bool,
) -> Result<IdentityReports, ChernError> {
    let required = rat_int(w.arrangement().dim() as i64 + 1);
    if constrain_cy && w.total() != required {
        return Err(ChernError::CyRequired {
            sum: format_rational(&w.total()),
            required: format_rational(&required),
        });
    }
    let omega = compare(
        model,
        &omega_ohtsuki(w, model),
        &omega_closed_form(w, model),
        constrain_cy,
    );
    let pch2 = compare(model, &parch2(w, model), &parch2_closed_form(w, model), constrain_cy);
    Ok(IdentityReports { omega, parch2: pch2 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{gen_bm, gen_braid, gen_generic, gen_seven_lines, Arrangement};
    use crate::checker;
    use crate::lattice::build_lattice;
    use crate::sampling;
    use crate::wonder::{H2Key, WonderModel};
    use num_traits::Zero;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    fn suite() -> Vec<Arrangement> {
        vec![
            gen_braid(4).unwrap(),
            gen_braid(5).unwrap(),
            gen_bm(3).unwrap(),
            gen_seven_lines(),
        ]
    }

    #[test]
    fn chern2_pair_examples() {
        assert_eq!(
            chern2_pair(PairKind::Equal, 2, 0, &rat(3, 4), &rat_int(0)),
            rat(9, 16)
        );
        assert_eq!(
            chern2_pair(PairKind::Chain, 2, 1, &rat(1, 3), &rat(1, 2)),
            rat(1, 6)
        );
        assert_eq!(
            chern2_pair(PairKind::Transverse, 1, 1, &rat(1, 3), &rat(1, 2)),
            rat(1, 6)
        );
    }

    #[test]
    fn eta_identity_random_weights() {
        for arr in suite() {
            let lat = build_lattice(&arr);
            let model = WonderModel::new(&arr, &lat).unwrap();
            let n = arr.dim() as i64;
            let mut rng = StdRng::seed_from_u64(21);
            for _ in 0..50 {
                let ws = sampling::open01_weights(&mut rng, arr.len());
                let w = WeightedArrangement::new(arr.clone(), ws).unwrap();
                let e = eta(&w, &model);
                let expected_h = rat_int(n + 1) - w.total();
                assert_eq!(e.coeff(&H2Key::HPull), expected_h);
                let extra = e.iter().filter(|(k, _)| **k != H2Key::HPull).count();
                assert_eq!(extra, 0, "every gamma coefficient must cancel");
            }
        }
    }

    #[test]
    fn eta_zero_under_cy() {
        let arr = gen_braid(5).unwrap();
        let lat = build_lattice(&arr);
        let model = WonderModel::new(&arr, &lat).unwrap();
        let ws = checker::braid_weights(&arr, &vec![rat(1, 5); 5]).unwrap();
        let w = WeightedArrangement::new(arr.clone(), ws).unwrap();
        assert!(eta(&w, &model).is_zero());

        // sum 2 on braid A4 with uniform 1/3 leaves exactly the pullback class
        let arr = gen_braid(4).unwrap();
        let lat = build_lattice(&arr);
        let model = WonderModel::new(&arr, &lat).unwrap();
        let w = WeightedArrangement::new(arr.clone(), vec![rat(1, 3); 6]).unwrap();
        let e = eta(&w, &model);
        assert_eq!(e.coeff(&H2Key::HPull), rat_int(1));
    }

    #[test]
    fn omega_zero_for_admissible_braid_weights() {
        let arr = gen_braid(4).unwrap();
        let lat = build_lattice(&arr);
        let model = WonderModel::new(&arr, &lat).unwrap();
        let ws = checker::braid_weights(&arr, &vec![rat(1, 4); 4]).unwrap();
        let w = WeightedArrangement::new(arr.clone(), ws).unwrap();
        assert!(omega_ohtsuki(&w, &model).is_zero());
        assert!(parch2(&w, &model).is_zero());
    }

    #[test]
    fn omega_identity_cy_constrained() {
        for arr in suite() {
            let lat = build_lattice(&arr);
            let model = WonderModel::new(&arr, &lat).unwrap();
            let target = rat_int(arr.dim() as i64 + 1);
            let mut rng = StdRng::seed_from_u64(31);
            for _ in 0..20 {
                let ws = sampling::constrained_sum_weights(&mut rng, arr.len(), &target);
                let w = WeightedArrangement::new(arr.clone(), ws).unwrap();
                assert_eq!(omega_ohtsuki(&w, &model), omega_closed_form(&w, &model));
            }
        }
    }

    #[test]
    fn parch2_identity_cy_constrained() {
        for arr in suite() {
            let lat = build_lattice(&arr);
            let model = WonderModel::new(&arr, &lat).unwrap();
            let target = rat_int(arr.dim() as i64 + 1);
            let mut rng = StdRng::seed_from_u64(41);
            for _ in 0..20 {
                let ws = sampling::constrained_sum_weights(&mut rng, arr.len(), &target);
                let w = WeightedArrangement::new(arr.clone(), ws).unwrap();
                assert_eq!(parch2(&w, &model), parch2_closed_form(&w, &model));
            }
        }
    }

    #[test]
    fn unconstrained_identities_skip_empty_square() {
        for arr in [gen_braid(5).unwrap(), gen_bm(3).unwrap()] {
            let lat = build_lattice(&arr);
            let model = WonderModel::new(&arr, &lat).unwrap();
            let mut rng = StdRng::seed_from_u64(51);
            for _ in 0..10 {
                let ws = sampling::open01_weights(&mut rng, arr.len());
                let w = WeightedArrangement::new(arr.clone(), ws).unwrap();
                let reports = verify_identities(&w, &model, false).unwrap();
                assert!(reports.omega.all_equal);
                assert!(reports.parch2.all_equal);
                let skipped = reports.omega.rows.iter().filter(|r| !r.compared).count();
                assert_eq!(skipped, 1);
            }
        }
    }

    #[test]
    fn verify_identities_requires_cy_in_constrained_mode() {
        let arr = gen_braid(4).unwrap();
        let lat = build_lattice(&arr);
        let model = WonderModel::new(&arr, &lat).unwrap();
        let w = WeightedArrangement::new(arr.clone(), vec![rat(1, 3); 6]).unwrap();
        assert!(matches!(
            verify_identities(&w, &model, true),
            Err(ChernError::CyRequired { .. })
        ));
    }

    #[test]
    fn transverse_coordinates_vanish_in_parch2() {
        // V-membership: no transverse basic monomial ever appears in the
        // parabolic second Chern character
        for arr in suite() {
            let lat = build_lattice(&arr);
            let model = WonderModel::new(&arr, &lat).unwrap();
            let mut rng = StdRng::seed_from_u64(61);
            for _ in 0..10 {
                let ws = sampling::open01_weights(&mut rng, arr.len());
                let w = WeightedArrangement::new(arr.clone(), ws).unwrap();
                let p = parch2(&w, &model);
                for (key, _) in p.iter() {
                    assert!(!matches!(key, BasisKey::Transverse(..)));
                }
            }
        }
    }

    #[test]
    fn sign_relation_on_chain_coordinates() {
        // under the weight-sum constraint the chain coordinates of the two
        // closed forms are negatives of each other
        for arr in suite() {
            let lat = build_lattice(&arr);
            let model = WonderModel::new(&arr, &lat).unwrap();
            let target = rat_int(arr.dim() as i64 + 1);
            let mut rng = StdRng::seed_from_u64(71);
            let ws = sampling::constrained_sum_weights(&mut rng, arr.len(), &target);
            let w = WeightedArrangement::new(arr.clone(), ws).unwrap();
            let om = omega_closed_form(&w, &model);
            let pc = parch2_closed_form(&w, &model);
            for key in model.delta2() {
                if let BasisKey::Chain(_, l2) = key {
                    if model.rank_of(*l2) >= 3 {
                        assert_eq!(om.coeff(key), -pc.coeff(key));
                    }
                }
            }
        }
    }

    #[test]
    fn theorem_link_verdict_true_gives_zero_classes() {
        // admissible weights: braid family, reflection family, seven lines
        let mut cases: Vec<WeightedArrangement> = Vec::new();
        let arr = gen_braid(5).unwrap();
        let ws = checker::braid_weights(&arr, &vec![rat(1, 5); 5]).unwrap();
        cases.push(WeightedArrangement::new(arr, ws).unwrap());
        let arr = gen_bm(3).unwrap();
        let ws = checker::uniform_reflection_weights(&arr);
        cases.push(WeightedArrangement::new(arr, ws).unwrap());
        let arr = gen_seven_lines();
        let ws: Vec<Rational> = arr
            .hyperplanes()
            .iter()
            .map(|h| {
                if h.normal().iter().filter(|&&x| x != 0).count() == 1 {
                    rat(1, 3)
                } else {
                    rat(1, 2)
                }
            })
            .collect();
        cases.push(WeightedArrangement::new(arr, ws).unwrap());

        for w in cases {
            let lat = build_lattice(w.arrangement());
            let report = checker::check_theorem_with_lattice(&w, &lat);
            assert!(report.verdict);
            let model = WonderModel::new(w.arrangement(), &lat).unwrap();
            assert!(omega_ohtsuki(&w, &model).is_zero());
            assert!(parch2(&w, &model).is_zero());
        }
    }

    #[test]
    fn generic_omega_coordinate_is_q() {
        let arr = gen_generic(2, 4, 13).unwrap();
        let lat = build_lattice(&arr);
        let model = WonderModel::new(&arr, &lat).unwrap();
        let mut rng = StdRng::seed_from_u64(81);
        let ws = sampling::constrained_sum_weights(&mut rng, 4, &rat_int(3));
        let w = WeightedArrangement::new(arr.clone(), ws).unwrap();
        let om = omega_ohtsuki(&w, &model);
        let key = BasisKey::Square(model.empty_gidx());
        let q = hirzebruch_q(&w, model.lattice(), model.flat_of(model.empty_gidx()), QFormula::Primary)
            .unwrap();
        assert_eq!(om.coeff(&key), q);
        assert!(!q.is_zero());
    }
}

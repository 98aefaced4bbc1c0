//! Decision procedure for the existence criterion: the linear weight-sum
//! condition, the klt inequalities over all proper nonempty flats, and exact
//! vanishing of the Hirzebruch quadratic forms at every irreducible flat of
//! rank at least three. Produces a structured, deterministic report.

use serde::{Deserialize, Serialize};

use crate::arrangement::Arrangement;
use crate::lattice::{build_lattice, FlatId, IntersectionLattice};
use crate::linalg::{format_rational, rat_int, Rational};
use crate::weights::{hirzebruch_q, QFormula, WeightError, WeightedArrangement};
use num_traits::Zero;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct FlatRef {
    pub closure: Vec<u32>,
    pub rank: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct CySection {
    pub pass: bool,
    pub sum: String,
    pub required: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct KltViolation {
    pub flat: FlatRef,
    pub weight_sum: String,
    pub rank: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct KltSection {
    pub pass: bool,
    pub violations: Vec<KltViolation>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct QuadraticValue {
    pub flat: FlatRef,
    /// true for the empty-subspace entry (rank n+1)
    pub empty_subspace: bool,
    pub q: String,
    pub zero: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct QuadraticSection {
    pub pass: bool,
    pub values: Vec<QuadraticValue>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct RankCount {
    pub rank: usize,
    pub flats: usize,
    pub irreducible: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ReportMeta {
    pub dim: usize,
    pub hyperplanes: usize,
    pub essential: bool,
    pub irreducible: bool,
    pub counts: Vec<RankCount>,
}

/// Structured verdict with per-condition witnesses.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct CheckReport {
    pub meta: ReportMeta,
    pub cy: CySection,
    pub klt: KltSection,
    pub quadratic: QuadraticSection,
    pub verdict: bool,
}

fn flat_ref(lat: &IntersectionLattice, id: FlatId) -> FlatRef {
    FlatRef {
        closure: lat.flat(id).closure.clone(),
        rank: lat.rank(id),
    }
}

/// Weight-sum condition: the weights must add up to exactly n+1.
pub fn check_cy(w: &WeightedArrangement) -> CySection {
    let required = rat_int(w.arrangement().dim() as i64 + 1);
    let sum = w.total();
    CySection {
        pass: sum == required,
        sum: format_rational(&sum),
        required: format_rational(&required),
    }
}

/// klt condition: for every flat of rank 1..=n the localized weight sum must
/// be strictly below the rank. All flats are scanned, reducible ones included.
pub fn check_klt(w: &WeightedArrangement, lat: &IntersectionLattice) -> KltSection {
    let n = w.arrangement().dim();
    let mut violations = Vec::new();
    for id in 0..lat.flats().len() {
        let r = lat.rank(id);
        if r < 1 || r > n {
            continue;
        }
        let sum = w.sum_over_flat(lat, id);
        if sum >= rat_int(r as i64) {
            violations.push(KltViolation {
                flat: flat_ref(lat, id),
                weight_sum: format_rational(&sum),
                rank: r,
            });
        }
    }
    KltSection { pass: violations.is_empty(), violations }
}

/// Quadratic condition: Q_L must vanish exactly at every irreducible flat of
/// rank at least three, the empty subspace included when present. Each value
/// is computed by both published formulas as an internal cross-check.
pub fn check_quadratic(w: &WeightedArrangement, lat: &IntersectionLattice) -> QuadraticSection {
    let mut values = Vec::new();
    let mut pass = true;
    for id in 0..lat.flats().len() {
        if !(lat.is_irreducible_flat(id) && lat.rank(id) >= 3) {
            continue;
        }
        let q = hirzebruch_q(w, lat, id, QFormula::Primary).expect("irreducible flat");
        let q_alt = hirzebruch_q(w, lat, id, QFormula::Alternative).expect("irreducible flat");
        assert_eq!(q, q_alt, "the two quadratic-form formulas must agree");
        let zero = q.is_zero();
        pass &= zero;
        values.push(QuadraticValue {
            flat: flat_ref(lat, id),
            empty_subspace: Some(id) == lat.empty_flat(),
            q: format_rational(&q),
            zero,
        });
    }
    QuadraticSection { pass, values }
}

fn meta(w: &WeightedArrangement, lat: &IntersectionLattice) -> ReportMeta {
    let n = w.arrangement().dim();
    let counts = (1..=n + 1)
        .filter_map(|r| {
            let flats = lat.flats_of_rank(r).count();
            if flats == 0 {
                return None;
            }
            let irreducible = lat
                .flats_of_rank(r)
                .filter(|&id| lat.is_irreducible_flat(id))
                .count();
            Some(RankCount { rank: r, flats, irreducible })
        })
        .collect();
    ReportMeta {
        dim: n,
        hyperplanes: w.arrangement().len(),
        essential: lat.essential(),
        irreducible: lat.arrangement_irreducible(),
        counts,
    }
}

/// Runs all three conditions against a prebuilt lattice.
pub fn check_theorem_with_lattice(
    w: &WeightedArrangement,
    lat: &IntersectionLattice,
) -> CheckReport {
    let cy = check_cy(w);
    let klt = check_klt(w, lat);
    let quadratic = check_quadratic(w, lat);
    let verdict = cy.pass && klt.pass && quadratic.pass;
    CheckReport {
        meta: meta(w, lat),
        cy,
        klt,
        quadratic,
        verdict,
    }
}

/// Full decision procedure: builds the lattice and evaluates all conditions.
/// A true verdict certifies the combinatorial existence criterion.
pub fn check_theorem(w: &WeightedArrangement) -> CheckReport {
    let lat = build_lattice(w.arrangement());
    check_theorem_with_lattice(w, &lat)
}

impl CheckReport {
    /// Canonical machine-readable form; identical inputs yield identical bytes.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }

    /// Aligned human-readable table.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let m = &self.meta;
        out.push_str(&format!(
            "arrangement: {} hyperplanes in CP^{} (essential: {}, irreducible: {})\n",
            m.hyperplanes, m.dim, m.essential, m.irreducible
        ));
        for c in &m.counts {
            out.push_str(&format!(
                "  rank {:>2}: {:>4} flats ({} irreducible)\n",
                c.rank, c.flats, c.irreducible
            ));
        }
        out.push_str(&format!(
            "condition (i)   weight sum: {:<12} required: {:<6} -> {}\n",
            self.cy.sum,
            self.cy.required,
            pass_str(self.cy.pass)
        ));
        out.push_str(&format!(
            "condition (ii)  klt inequalities: {} violation(s) -> {}\n",
            self.klt.violations.len(),
            pass_str(self.klt.pass)
        ));
        for v in &self.klt.violations {
            out.push_str(&format!(
                "    flat {:?} rank {}: sum {} >= {}\n",
                v.flat.closure, v.flat.rank, v.weight_sum, v.rank
            ));
        }
        out.push_str(&format!(
            "condition (iii) quadratic forms at {} flat(s) -> {}\n",
            self.quadratic.values.len(),
            pass_str(self.quadratic.pass)
        ));
        for v in &self.quadratic.values {
            let label = if v.empty_subspace {
                "empty subspace".to_string()
            } else {
                format!("{:?}", v.flat.closure)
            };
            out.push_str(&format!("    Q[{label}] rank {} = {}\n", v.flat.rank, v.q));
        }
        out.push_str(&format!("verdict: {}\n", if self.verdict { "PK metric exists" } else { "no PK metric" }));
        out
    }
}

fn pass_str(b: bool) -> &'static str {
    if b {
        "pass"
    } else {
        "FAIL"
    }
}

/// Weight family for the braid arrangement: the hyperplane indexed by the
/// pair {i,j} receives a_i + a_j. Requires all a_i in (0,1) with sum one.
pub fn braid_weights(arr: &Arrangement, a: &[Rational]) -> Result<Vec<Rational>, WeightError> {
    let k = a.len();
    if arr.dim() + 2 != k || arr.len() != k * (k - 1) / 2 {
        return Err(WeightError::Constraint(format!(
            "arrangement is not the braid arrangement on {k} labels"
        )));
    }
    let one = rat_int(1);
    for ai in a {
        if *ai <= Rational::zero() || *ai >= one {
            return Err(WeightError::Constraint(
                "braid parameters must lie in (0,1)".to_string(),
            ));
        }
    }
    if a.iter().sum::<Rational>() != one {
        return Err(WeightError::Constraint(
            "braid parameters must sum to 1".to_string(),
        ));
    }
    let mut weights = vec![Rational::zero(); arr.len()];
    for i in 1..=k {
        for j in i + 1..=k {
            let normal = crate::arrangement::braid_normal(i, j, k);
            let idx = arr
                .index_of(&normal)
                .ok_or_else(|| WeightError::Constraint("missing braid hyperplane".to_string()))?;
            weights[idx] = &a[i - 1] + &a[j - 1];
        }
    }
    Ok(weights)
}

/// The uniform reflection-arrangement family a_H = (n+1)/N.
pub fn uniform_reflection_weights(arr: &Arrangement) -> Vec<Rational> {
    let v = Rational::new((arr.dim() as i64 + 1).into(), (arr.len() as i64).into());
    vec![v; arr.len()]
}

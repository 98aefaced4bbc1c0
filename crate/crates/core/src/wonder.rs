//! Degree-two cohomology of the minimal wonderful model of an essential,
//! irreducible arrangement: generators gamma_L for irreducible subspaces L
//! (gamma of the empty subspace is minus the hyperplane-class pullback),
//! nested-pair tests, the Yuzvinsky bases Delta_1 and Delta_2, reduction of
//! arbitrary degree-two monomials to basic monomials, and an independent
//! presentation-based oracle built from the relations
//!   (R1) products over non-nested sets vanish,
//!   (R2) for every hyperplane H the sum of gamma_L over L inside H vanishes.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use thiserror::Error;

use crate::arrangement::Arrangement;
use crate::lattice::{FlatId, IntersectionLattice};
use crate::linalg::{format_rational, rat_int, Rational};

/// Index into the ordered list of irreducible subspaces (rank then closure;
/// hyperplanes first, the empty subspace last).
pub type GIdx = usize;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WonderError {
    #[error("wonderful model requires an essential arrangement")]
    NotEssential,
    #[error("wonderful model requires an irreducible arrangement")]
    NotIrreducible,
    #[error("wonderful model requires projective dimension >= 2")]
    DimensionTooSmall,
    #[error("presentation quotient dimension mismatch: basis has {expected} monomials, quotient has {got}")]
    QuotientDimension { expected: usize, got: usize },
}

/// A basic monomial of degree two.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BasisKey {
    /// gamma_L^2 with r(L) >= 3
    Square(GIdx),
    /// gamma_{L1} gamma_{L2} where L1 sits inside L2 with rank gap >= 2
    /// and r(L2) >= 2; L1 is the deeper subspace
    Chain(GIdx, GIdx),
    /// gamma_{L1} gamma_{L2} for an incomparable pair with reducible
    /// intersection, both ranks >= 2; stored with L1 < L2
    Transverse(GIdx, GIdx),
}

/// Classification of a degree-two monomial over the generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MonomialType {
    /// non-nested pair, product is zero
    Zero,
    Basic,
    /// gamma_H^2 for a hyperplane
    M1,
    /// gamma_L^2 with r(L) = 2
    M2,
    /// gamma_L gamma_M with L covered by M (rank gap one), r(M) >= 2
    M3,
    /// gamma_L gamma_H with L inside a hyperplane H, r(L) >= 3
    M4,
    /// gamma_L gamma_H with L inside a hyperplane H, r(L) = 2
    M5,
    /// gamma_L gamma_H transverse-reducible, r(L) >= 2
    M6,
    /// gamma_H gamma_H' transverse-reducible hyperplane pair
    M7,
}

/// Sparse class in H^4 over the basic-monomial basis.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct H4Class {
    coords: BTreeMap<BasisKey, Rational>,
}

impl H4Class {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn unit(key: BasisKey) -> Self {
        let mut c = Self::default();
        c.add_scaled(key, Rational::one());
        c
    }

    pub fn add_scaled(&mut self, key: BasisKey, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.coords.entry(key).or_insert_with(Rational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.coords.remove(&key);
        }
    }

    pub fn add_class_scaled(&mut self, other: &H4Class, coeff: &Rational) {
        for (k, v) in &other.coords {
            self.add_scaled(*k, v * coeff);
        }
    }

    pub fn coeff(&self, key: &BasisKey) -> Rational {
        self.coords.get(key).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BasisKey, &Rational)> {
        self.coords.iter()
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }
}

/// Coordinate keys for H^2: the hyperplane-class pullback and the gamma_L for
/// nonempty irreducible subspaces that are not hyperplanes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum H2Key {
    HPull,
    Gamma(GIdx),
}

/// Sparse class in H^2 over the basis {pullback h} + {gamma_L}.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct H2Class {
    coords: BTreeMap<H2Key, Rational>,
}

impl H2Class {
    pub fn add_scaled(&mut self, key: H2Key, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.coords.entry(key).or_insert_with(Rational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.coords.remove(&key);
        }
    }

    pub fn coeff(&self, key: &H2Key) -> Rational {
        self.coords.get(key).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&H2Key, &Rational)> {
        self.coords.iter()
    }
}

/// The degree-two cohomology model of an essential irreducible arrangement.
pub struct WonderModel<'a> {
    arr: &'a Arrangement,
    lat: &'a IntersectionLattice,
    g: Vec<FlatId>,
    g_of_flat: HashMap<FlatId, GIdx>,
    empty: GIdx,
    delta2: Vec<BasisKey>,
}

impl<'a> WonderModel<'a> {
    pub fn new(arr: &'a Arrangement, lat: &'a IntersectionLattice) -> Result<Self, WonderError> {
        if !lat.essential() {
            return Err(WonderError::NotEssential);
        }
        if !lat.arrangement_irreducible() {
            return Err(WonderError::NotIrreducible);
        }
        if arr.dim() < 2 {
            return Err(WonderError::DimensionTooSmall);
        }
        let g: Vec<FlatId> =
            (0..lat.flats().len()).filter(|&id| lat.is_irreducible_flat(id)).collect();
        let g_of_flat: HashMap<FlatId, GIdx> =
            g.iter().enumerate().map(|(i, &f)| (f, i)).collect();
        let empty = g_of_flat[&lat.empty_flat().expect("essential")];
        let mut model = Self { arr, lat, g, g_of_flat, empty, delta2: Vec::new() };
        model.delta2 = model.enumerate_delta2();
        Ok(model)
    }

    pub fn arrangement(&self) -> &Arrangement {
        self.arr
    }

    pub fn lattice(&self) -> &IntersectionLattice {
        self.lat
    }

    /// The irreducible subspaces, in model order.
    pub fn g(&self) -> &[FlatId] {
        &self.g
    }

    pub fn g_len(&self) -> usize {
        self.g.len()
    }

    pub fn flat_of(&self, i: GIdx) -> FlatId {
        self.g[i]
    }

    pub fn gidx_of_flat(&self, f: FlatId) -> Option<GIdx> {
        self.g_of_flat.get(&f).copied()
    }

    pub fn rank_of(&self, i: GIdx) -> usize {
        self.lat.rank(self.g[i])
    }

    pub fn empty_gidx(&self) -> GIdx {
        self.empty
    }

    pub fn is_hyperplane(&self, i: GIdx) -> bool {
        self.rank_of(i) == 1
    }

    /// ambient hyperplane index of a rank-one generator
    pub fn hyperplane_index(&self, i: GIdx) -> usize {
        debug_assert!(self.is_hyperplane(i));
        self.lat.flat(self.g[i]).closure[0] as usize
    }

    /// a contained in b as subspaces
    pub fn le(&self, a: GIdx, b: GIdx) -> bool {
        self.lat.subspace_le(self.g[a], self.g[b])
    }

    pub fn lt(&self, a: GIdx, b: GIdx) -> bool {
        a != b && self.le(a, b)
    }

    fn comparable(&self, a: GIdx, b: GIdx) -> bool {
        self.le(a, b) || self.le(b, a)
    }

    /// b covers a: a inside b with rank gap exactly one
    fn covers_up(&self, a: GIdx, b: GIdx) -> bool {
        self.le(a, b) && self.rank_of(a) == self.rank_of(b) + 1
    }

    /// Incomparable with reducible (or equivalently non-irreducible)
    /// subspace intersection.
    pub fn pitchfork(&self, a: GIdx, b: GIdx) -> bool {
        if self.comparable(a, b) {
            return false;
        }
        let meet = self.lat.meet_subspaces(self.g[a], self.g[b]);
        !self.lat.is_irreducible_flat(meet)
    }

    /// Nested pair test: comparable pairs are nested, incomparable pairs are
    /// nested exactly when their subspace intersection is reducible.
    pub fn is_nested_pair(&self, a: GIdx, b: GIdx) -> bool {
        a == b || self.comparable(a, b) || self.pitchfork(a, b)
    }

    fn b(&self, a: GIdx, b: GIdx) -> i64 {
        crate::weights::b_coeff(self.lat, self.g[a], self.g[b]).expect("nested by construction")
    }

    /// Delta_1: the gamma_L with r(L) >= 2, in model order.
    pub fn delta1(&self) -> Vec<GIdx> {
        (0..self.g.len()).filter(|&i| self.rank_of(i) >= 2).collect()
    }

    fn enumerate_delta2(&self) -> Vec<BasisKey> {
        let mut keys = Vec::new();
        for i in 0..self.g.len() {
            if self.rank_of(i) >= 3 {
                keys.push(BasisKey::Square(i));
            }
        }
        for outer in 0..self.g.len() {
            if self.rank_of(outer) < 2 {
                continue;
            }
            for inner in 0..self.g.len() {
                if inner != outer
                    && self.le(inner, outer)
                    && self.rank_of(inner) >= self.rank_of(outer) + 2
                {
                    keys.push(BasisKey::Chain(inner, outer));
                }
            }
        }
        for a in 0..self.g.len() {
            for b in a + 1..self.g.len() {
                if self.rank_of(a) >= 2 && self.rank_of(b) >= 2 && self.pitchfork(a, b) {
                    keys.push(BasisKey::Transverse(a, b));
                }
            }
        }
        keys
    }

    /// The degree-two basic monomials, deterministically ordered.
    pub fn delta2(&self) -> &[BasisKey] {
        &self.delta2
    }

    /// Renders a basic monomial as a display key.
    pub fn render_key(&self, key: &BasisKey) -> String {
        let closure = |i: GIdx| {
            let c = &self.lat.flat(self.g[i]).closure;
            c.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
        };
        match key {
            BasisKey::Square(i) => format!("g[{}]^2", closure(*i)),
            BasisKey::Chain(a, b) | BasisKey::Transverse(a, b) => {
                format!("g[{}]*g[{}]", closure(*a), closure(*b))
            }
        }
    }

    /// Dump format: ordered (key, value) pairs of a class.
    pub fn render_class(&self, class: &H4Class) -> Vec<(String, String)> {
        class
            .iter()
            .map(|(k, v)| (self.render_key(k), format_rational(v)))
            .collect()
    }

    pub fn classify_monomial(&self, a: GIdx, b: GIdx) -> MonomialType {
        if a == b {
            let r = self.rank_of(a);
            return if r >= 3 {
                MonomialType::Basic
            } else if r == 2 {
                MonomialType::M2
            } else {
                MonomialType::M1
            };
        }
        if self.comparable(a, b) {
            let (inner, outer) = if self.lt(a, b) { (a, b) } else { (b, a) };
            let (ri, ro) = (self.rank_of(inner), self.rank_of(outer));
            if ro >= 2 {
                if ri >= ro + 2 {
                    MonomialType::Basic
                } else {
                    MonomialType::M3
                }
            } else if ri >= 3 {
                MonomialType::M4
            } else {
                MonomialType::M5
            }
        } else if !self.pitchfork(a, b) {
            MonomialType::Zero
        } else {
            let (ra, rb) = (self.rank_of(a), self.rank_of(b));
            if ra >= 2 && rb >= 2 {
                MonomialType::Basic
            } else if ra == 1 && rb == 1 {
                MonomialType::M7
            } else {
                MonomialType::M6
            }
        }
    }

    fn basic_key(&self, a: GIdx, b: GIdx) -> BasisKey {
        if a == b {
            BasisKey::Square(a)
        } else if self.lt(a, b) {
            BasisKey::Chain(a, b)
        } else if self.lt(b, a) {
            BasisKey::Chain(b, a)
        } else {
            BasisKey::Transverse(a.min(b), a.max(b))
        }
    }

    /// Expands a degree-two monomial over the basic-monomial basis, using the
    /// closed reduction table for the seven non-basic types.
    pub fn reduce_monomial(&self, a: GIdx, b: GIdx) -> H4Class {
        match self.classify_monomial(a, b) {
            MonomialType::Zero => H4Class::zero(),
            MonomialType::Basic => H4Class::unit(self.basic_key(a, b)),
            t => {
                let mut out = H4Class::zero();
                for key in &self.delta2 {
                    let c = self.projection(a, b, t, key);
                    if c != 0 {
                        out.add_scaled(*key, rat_int(c));
                    }
                }
                out
            }
        }
    }

    /// Coordinate projection of a non-basic monomial onto one basic monomial.
    fn projection(&self, a: GIdx, b: GIdx, t: MonomialType, key: &BasisKey) -> i64 {
        match t {
            MonomialType::M1 => {
                // The chain coefficient is +2 B(L1,L2) B(L2,H): squaring the
                // hyperplane relation and eliminating rank-two squares leaves
                // the double chains with a positive sign, and the
                // presentation oracle certifies it.
                let h = a;
                match *key {
                    BasisKey::Square(l) => {
                        if self.le(l, h) {
                            -self.b(l, h)
                        } else {
                            0
                        }
                    }
                    BasisKey::Chain(l1, l2) => {
                        if self.le(l2, h) {
                            2 * self.b(l1, l2) * self.b(l2, h)
                        } else {
                            0
                        }
                    }
                    BasisKey::Transverse(..) => 0,
                }
            }
            MonomialType::M2 => {
                let w = a;
                match *key {
                    BasisKey::Square(l) => {
                        if self.lt(l, w) {
                            -1
                        } else {
                            0
                        }
                    }
                    BasisKey::Chain(l1, l2) => {
                        if self.le(l2, w) {
                            2 * self.b(l1, l2)
                        } else {
                            0
                        }
                    }
                    BasisKey::Transverse(..) => 0,
                }
            }
            MonomialType::M3 => {
                let (inner, outer) = if self.lt(a, b) { (a, b) } else { (b, a) };
                match *key {
                    BasisKey::Chain(l1, l2) if l2 == outer && self.lt(l1, inner) => -1,
                    _ => 0,
                }
            }
            MonomialType::M4 => {
                let (p, h) = if self.is_hyperplane(b) { (a, b) } else { (b, a) };
                match *key {
                    BasisKey::Square(l) => {
                        if l == p {
                            -1
                        } else {
                            0
                        }
                    }
                    BasisKey::Chain(l1, l2) => {
                        if l2 == p {
                            self.b(l1, l2)
                        } else if l1 == p && self.lt(l2, h) {
                            -1
                        } else if self.lt(l1, p) && self.covers_up(p, l2) && self.lt(l2, h) {
                            1
                        } else {
                            0
                        }
                    }
                    BasisKey::Transverse(..) => 0,
                }
            }
            MonomialType::M5 => {
                let (w, _h) = if self.is_hyperplane(b) { (a, b) } else { (b, a) };
                match *key {
                    BasisKey::Square(l) => {
                        if self.lt(l, w) {
                            1
                        } else {
                            0
                        }
                    }
                    BasisKey::Chain(l1, l2) => {
                        if l2 == w {
                            -self.b(l1, l2)
                        } else if self.lt(l2, w) {
                            -2 * self.b(l1, l2)
                        } else {
                            0
                        }
                    }
                    BasisKey::Transverse(..) => 0,
                }
            }
            MonomialType::M6 => {
                let (p, h) = if self.is_hyperplane(b) { (a, b) } else { (b, a) };
                match *key {
                    BasisKey::Square(_) => 0,
                    BasisKey::Chain(l1, l2) => {
                        if l2 == p && self.le(l1, h) {
                            -1
                        } else {
                            0
                        }
                    }
                    BasisKey::Transverse(t1, t2) => {
                        if (t1 == p && self.le(t2, h)) || (t2 == p && self.le(t1, h)) {
                            -1
                        } else {
                            0
                        }
                    }
                }
            }
            MonomialType::M7 => {
                let (h, hp) = (a, b);
                match *key {
                    BasisKey::Square(l) => {
                        if self.le(l, h) && self.le(l, hp) {
                            1
                        } else {
                            0
                        }
                    }
                    BasisKey::Chain(l1, l2) => {
                        if self.le(l2, h) && self.le(l2, hp) {
                            -2 * self.b(l1, l2)
                        } else if (self.le(l2, hp) && self.le(l1, h) && self.pitchfork(l2, h))
                            || (self.le(l2, h) && self.le(l1, hp) && self.pitchfork(l2, hp))
                        {
                            1
                        } else {
                            0
                        }
                    }
                    BasisKey::Transverse(t1, t2) => {
                        let mut c = 0;
                        if self.le(t1, h) && self.le(t2, hp) {
                            c += 1;
                        }
                        if self.le(t2, h) && self.le(t1, hp) {
                            c += 1;
                        }
                        c
                    }
                }
            }
            MonomialType::Zero | MonomialType::Basic => unreachable!("handled by reduce_monomial"),
        }
    }

    /// Reduces a degree-one class, eliminating every gamma_H through the
    /// hyperplane relation and gamma of the empty subspace through the
    /// pullback class.
    pub fn reduce_h2(&self, h_pull: &Rational, gamma: &[(GIdx, Rational)]) -> H2Class {
        let mut out = H2Class::default();
        out.add_scaled(H2Key::HPull, h_pull.clone());
        for (g, coeff) in gamma {
            if coeff.is_zero() {
                continue;
            }
            let r = self.rank_of(*g);
            if *g == self.empty {
                out.add_scaled(H2Key::HPull, -coeff.clone());
            } else if r == 1 {
                // gamma_H = pullback h - sum of gamma_L over proper L inside H
                out.add_scaled(H2Key::HPull, coeff.clone());
                for l in 0..self.g.len() {
                    if l != self.empty && self.rank_of(l) >= 2 && self.lt(l, *g) {
                        out.add_scaled(H2Key::Gamma(l), -coeff.clone());
                    }
                }
            } else {
                out.add_scaled(H2Key::Gamma(*g), coeff.clone());
            }
        }
        out
    }
}

/// Linear-algebra oracle over the degree-two presentation. Rows are the
/// products of each generator with a hyperplane relation, plus the non-nested
/// monomials; reduction is exact sparse elimination. Construction certifies
/// that the quotient dimension equals the number of basic monomials.
pub struct PresentationOracle {
    /// all unordered monomial keys, non-basic before basic
    keys: Vec<(GIdx, GIdx)>,
    col_of_key: HashMap<(GIdx, GIdx), usize>,
    /// pivot rows keyed by leading (smallest) column, leading coefficient one
    pivots: BTreeMap<usize, BTreeMap<usize, Rational>>,
    n_nonbasic: usize,
    /// delta2 key per basic column, aligned past the non-basic columns
    basic_keys: Vec<BasisKey>,
}

impl PresentationOracle {
    pub fn new(model: &WonderModel<'_>) -> Result<Self, WonderError> {
        let n = model.g_len();
        let mut nonbasic: Vec<(GIdx, GIdx)> = Vec::new();
        let mut basic: Vec<(GIdx, GIdx)> = Vec::new();
        for a in 0..n {
            for b in a..n {
                if model.classify_monomial(a, b) == MonomialType::Basic {
                    basic.push((a, b));
                } else {
                    nonbasic.push((a, b));
                }
            }
        }
        let n_nonbasic = nonbasic.len();
        // Order basic columns by their Delta_2 position so quotient
        // coordinates come out in basis order.
        let mut basic_with_key: Vec<(usize, (GIdx, GIdx), BasisKey)> = basic
            .into_iter()
            .map(|(a, b)| {
                let key = model.basic_key(a, b);
                let pos = model
                    .delta2()
                    .iter()
                    .position(|k| *k == key)
                    .expect("basic monomial appears in Delta_2");
                (pos, (a, b), key)
            })
            .collect();
        basic_with_key.sort_by_key(|(pos, _, _)| *pos);
        if basic_with_key.len() != model.delta2().len() {
            return Err(WonderError::QuotientDimension {
                expected: model.delta2().len(),
                got: basic_with_key.len(),
            });
        }

        let mut keys = nonbasic;
        let mut basic_keys = Vec::with_capacity(basic_with_key.len());
        for (_, pair, key) in basic_with_key {
            keys.push(pair);
            basic_keys.push(key);
        }
        let col_of_key: HashMap<(GIdx, GIdx), usize> =
            keys.iter().enumerate().map(|(c, &k)| (k, c)).collect();

        let mut oracle = Self {
            keys,
            col_of_key,
            pivots: BTreeMap::new(),
            n_nonbasic,
            basic_keys,
        };

        // Non-nested monomials vanish outright.
        for a in 0..n {
            for b in a..n {
                if model.classify_monomial(a, b) == MonomialType::Zero {
                    let mut row = BTreeMap::new();
                    row.insert(oracle.col_of_key[&(a, b)], Rational::one());
                    oracle.insert_row(row);
                }
            }
        }
        // gamma_L times each hyperplane relation.
        for l in 0..n {
            for h in 0..n {
                if !model.is_hyperplane(h) {
                    continue;
                }
                let mut row: BTreeMap<usize, Rational> = BTreeMap::new();
                for lp in 0..n {
                    if model.le(lp, h) {
                        let key = (l.min(lp), l.max(lp));
                        let col = oracle.col_of_key[&key];
                        let entry = row.entry(col).or_insert_with(Rational::zero);
                        *entry += Rational::one();
                        if entry.is_zero() {
                            row.remove(&col);
                        }
                    }
                }
                oracle.insert_row(row);
            }
        }

        // Every non-basic column must be eliminable and no basic column may
        // acquire a pivot; together these certify the quotient dimension.
        let expected = oracle.basic_keys.len();
        let got = oracle.keys.len() - oracle.pivots.len();
        if got != expected || !(0..oracle.n_nonbasic).all(|c| oracle.pivots.contains_key(&c)) {
            return Err(WonderError::QuotientDimension { expected, got });
        }
        Ok(oracle)
    }

    fn reduce_row(&self, mut row: BTreeMap<usize, Rational>) -> BTreeMap<usize, Rational> {
        loop {
            let Some((&col, coeff)) = row.iter().find(|(c, _)| self.pivots.contains_key(c)) else {
                return row;
            };
            let coeff = coeff.clone();
            let pivot = self.pivots[&col].clone();
            row.remove(&col);
            for (c, v) in pivot {
                if c == col {
                    continue;
                }
                let entry = row.entry(c).or_insert_with(Rational::zero);
                *entry -= &coeff * &v;
                if entry.is_zero() {
                    row.remove(&c);
                }
            }
        }
    }

    fn insert_row(&mut self, row: BTreeMap<usize, Rational>) {
        let mut reduced = self.reduce_row(row);
        let Some((&lead, _)) = reduced.iter().next() else {
            return;
        };
        let lead_coeff = reduced[&lead].clone();
        for v in reduced.values_mut() {
            *v /= &lead_coeff;
        }
        self.pivots.insert(lead, reduced);
    }

    /// Normal form of a degree-two monomial over the basic monomials: the
    /// reduced vector is congruent to the monomial modulo the relation span
    /// and is supported on basic columns only.
    pub fn reduce(&self, a: GIdx, b: GIdx) -> H4Class {
        let key = (a.min(b), a.max(b));
        let col = self.col_of_key[&key];
        let mut v = BTreeMap::new();
        v.insert(col, Rational::one());
        let v = self.reduce_row(v);
        let mut out = H4Class::zero();
        for (c, coeff) in v {
            debug_assert!(c >= self.n_nonbasic, "normal form lives on basic columns");
            out.add_scaled(self.basic_keys[c - self.n_nonbasic], coeff);
        }
        out
    }

    pub fn quotient_dimension(&self) -> usize {
        self.keys.len() - self.pivots.len()
    }
}

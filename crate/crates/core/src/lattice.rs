//! Intersection lattice of a hyperplane arrangement: flats, ranks,
//! irreducibility, localization.
//!
//! A flat is identified with its closure set of hyperplane indices (every
//! hyperplane containing the subspace) plus its rank r(L) = codim L. The empty
//! subspace is the flat of rank n+1 whose closure is the full index set; it is
//! present exactly when the arrangement is essential.
//!
//! Containment conventions, used throughout the crate: for flats `a`, `b`,
//! "a is contained in b as subspaces" is equivalent to
//! `closure(b) is a subset of closure(a)`, and then `rank(a) >= rank(b)`.

use std::collections::HashMap;

use crate::arrangement::Arrangement;
use crate::linalg::{self, Matrix, Rational};

pub type FlatId = usize;

/// An intersection subspace: closure index set plus codimension.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Flat {
    pub closure: Vec<u32>,
    pub rank: usize,
}

/// All flats of an arrangement, with irreducibility data.
#[derive(Debug, Clone)]
pub struct IntersectionLattice {
    dim: usize,
    n_hyperplanes: usize,
    flats: Vec<Flat>,
    by_closure: HashMap<Vec<u32>, FlatId>,
    irreducible: Vec<bool>,
    components: Vec<Vec<Vec<u32>>>,
    essential: bool,
    arrangement_irreducible: bool,
    empty_flat: Option<FlatId>,
}

/// Closure of a subset of hyperplanes: all hyperplanes whose normal lies in
/// the span of the subset's normals, with rank the span dimension.
pub fn closure(arr: &Arrangement, subset: &[usize]) -> Flat {
    assert!(!subset.is_empty(), "closure of an empty subset is undefined");
    let span = arr.normal_matrix_of(subset);
    let base_rank = linalg::rank(&span);
    let mut closure = Vec::new();
    for i in 0..arr.len() {
        let v: Vec<Rational> =
            arr.hyperplane(i).normal().iter().map(|&x| linalg::rat_int(x)).collect();
        if linalg::in_span(&v, &span).expect("lengths agree") {
            closure.push(i as u32);
        }
    }
    Flat { closure, rank: base_rank }
}

/// Finest direct-sum decomposition of a vector configuration, as a partition
/// of the row indices. A basis is chosen greedily in row order; each remaining
/// row is linked to every basis row appearing with nonzero coefficient in its
/// expansion, and the partition is the transitive closure of these links.
pub fn matroid_components(normals: &Matrix) -> Vec<Vec<usize>> {
    let n = normals.rows();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let r = find(parent, parent[i]);
            parent[i] = r;
        }
        parent[i]
    }
    fn union(parent: &mut Vec<usize>, a: usize, b: usize) {
        let (ra, rb) = (find(parent, a), find(parent, b));
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    }

    let mut basis: Vec<usize> = Vec::new();
    let mut basis_rows: Vec<Vec<Rational>> = Vec::new();
    for i in 0..n {
        let row = normals.row(i).to_vec();
        let m = Matrix::from_rows(basis_rows.clone());
        let independent = if basis.is_empty() {
            row.iter().any(|x| !num_traits::Zero::is_zero(x))
        } else {
            !linalg::in_span(&row, &m).expect("lengths agree")
        };
        if independent {
            basis.push(i);
            basis_rows.push(row);
        } else {
            let coeffs = linalg::solve_in_basis(&row, &Matrix::from_rows(basis_rows.clone()))
                .expect("lengths agree")
                .expect("row lies in basis span");
            for (j, c) in coeffs.iter().enumerate() {
                if !num_traits::Zero::is_zero(c) {
                    union(&mut parent, i, basis[j]);
                }
            }
        }
    }

    let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    let mut out: Vec<Vec<usize>> = groups.into_values().collect();
    for g in &mut out {
        g.sort_unstable();
    }
    out.sort();
    out
}

/// Essential iff the normals span the whole ambient space.
pub fn is_essential(arr: &Arrangement) -> bool {
    linalg::rank(&arr.normal_matrix()) == arr.dim() + 1
}

/// Irreducible iff the normal configuration has a single matroid component.
pub fn is_irreducible(arr: &Arrangement) -> bool {
    matroid_components(&arr.normal_matrix()).len() == 1
}

/// Enumerates every flat by level saturation: starting from the rank-1
/// singletons, each flat is extended by every hyperplane outside its closure
/// and the closures are deduplicated, rank by rank.
pub fn build_lattice(arr: &Arrangement) -> IntersectionLattice {
    assert!(!arr.is_empty(), "arrangement must be nonempty");
    let n = arr.dim();
    let mut seen: HashMap<Vec<u32>, Flat> = HashMap::new();
    let mut current: Vec<Flat> = Vec::new();
    for i in 0..arr.len() {
        let f = Flat { closure: vec![i as u32], rank: 1 };
        debug_assert_eq!(closure(arr, &[i]), f);
        seen.insert(f.closure.clone(), f.clone());
        current.push(f);
    }
    while !current.is_empty() {
        let mut next: Vec<Flat> = Vec::new();
        for f in &current {
            if f.rank == n + 1 {
                continue;
            }
            for h in 0..arr.len() as u32 {
                if f.closure.binary_search(&h).is_ok() {
                    continue;
                }
                let mut subset: Vec<usize> = f.closure.iter().map(|&x| x as usize).collect();
                subset.push(h as usize);
                let cl = closure(arr, &subset);
                debug_assert_eq!(cl.rank, f.rank + 1);
                if !seen.contains_key(&cl.closure) {
                    seen.insert(cl.closure.clone(), cl.clone());
                    next.push(cl);
                }
            }
        }
        current = next;
    }

    let mut flats: Vec<Flat> = seen.into_values().collect();
    flats.sort_by(|a, b| (a.rank, &a.closure).cmp(&(b.rank, &b.closure)));

    let mut by_closure = HashMap::new();
    let mut irreducible = Vec::with_capacity(flats.len());
    let mut components = Vec::with_capacity(flats.len());
    let mut empty_flat = None;
    for (id, f) in flats.iter().enumerate() {
        by_closure.insert(f.closure.clone(), id);
        let subset: Vec<usize> = f.closure.iter().map(|&x| x as usize).collect();
        let comps = matroid_components(&arr.normal_matrix_of(&subset));
        irreducible.push(comps.len() == 1);
        components.push(
            comps
                .into_iter()
                .map(|block| block.into_iter().map(|i| f.closure[i]).collect())
                .collect(),
        );
        if f.rank == n + 1 {
            empty_flat = Some(id);
        }
    }

    let essential = is_essential(arr);
    debug_assert_eq!(essential, empty_flat.is_some());
    let arrangement_irreducible = is_irreducible(arr);

    IntersectionLattice {
        dim: n,
        n_hyperplanes: arr.len(),
        flats,
        by_closure,
        irreducible,
        components,
        essential,
        arrangement_irreducible,
        empty_flat,
    }
}

/// A localized sub-arrangement together with its ambient hyperplane indices.
#[derive(Debug, Clone)]
pub struct Localization {
    pub arrangement: Arrangement,
    /// ambient index of each local hyperplane, in local order
    pub ambient: Vec<usize>,
}

impl IntersectionLattice {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_hyperplanes(&self) -> usize {
        self.n_hyperplanes
    }

    pub fn flats(&self) -> &[Flat] {
        &self.flats
    }

    pub fn flat(&self, id: FlatId) -> &Flat {
        &self.flats[id]
    }

    pub fn rank(&self, id: FlatId) -> usize {
        self.flats[id].rank
    }

    pub fn is_irreducible_flat(&self, id: FlatId) -> bool {
        self.irreducible[id]
    }

    pub fn components_of(&self, id: FlatId) -> &[Vec<u32>] {
        &self.components[id]
    }

    pub fn essential(&self) -> bool {
        self.essential
    }

    pub fn arrangement_irreducible(&self) -> bool {
        self.arrangement_irreducible
    }

    /// The empty-subspace flat (rank n+1), present iff essential.
    pub fn empty_flat(&self) -> Option<FlatId> {
        self.empty_flat
    }

    pub fn flat_by_closure(&self, closure: &[u32]) -> Option<FlatId> {
        self.by_closure.get(closure).copied()
    }

    /// Flat of the singleton {h}.
    pub fn hyperplane_flat(&self, h: usize) -> FlatId {
        self.by_closure[&vec![h as u32]]
    }

    pub fn flats_of_rank(&self, rank: usize) -> impl Iterator<Item = FlatId> + '_ {
        (0..self.flats.len()).filter(move |&id| self.flats[id].rank == rank)
    }

    /// True iff `a` is contained in `b` as subspaces (closure containment is
    /// the reverse inclusion).
    pub fn subspace_le(&self, a: FlatId, b: FlatId) -> bool {
        let (ca, cb) = (&self.flats[a].closure, &self.flats[b].closure);
        cb.len() <= ca.len() && cb.iter().all(|x| ca.binary_search(x).is_ok())
    }

    pub fn subspace_lt(&self, a: FlatId, b: FlatId) -> bool {
        a != b && self.subspace_le(a, b)
    }

    /// The flat of the subspace intersection of `a` and `b`: closure of the
    /// union of their closures. Always materialized in the lattice.
    pub fn meet_subspaces(&self, a: FlatId, b: FlatId) -> FlatId {
        let (ca, cb) = (&self.flats[a].closure, &self.flats[b].closure);
        let mut merged: Vec<u32> = ca.iter().chain(cb.iter()).copied().collect();
        merged.sort_unstable();
        merged.dedup();
        if let Some(&id) = self.by_closure.get(&merged) {
            return id;
        }
        // The union of two closures need not be closed; saturate it.
        let full = self
            .by_closure
            .iter()
            .filter(|(cl, _)| {
                merged.len() <= cl.len() && merged.iter().all(|x| cl.binary_search(x).is_ok())
            })
            .min_by_key(|(cl, _)| cl.len())
            .map(|(_, &id)| id)
            .expect("the union of closures saturates to a flat");
        full
    }

    /// Multiplicity of a rank-2 flat: number of hyperplanes through it.
    pub fn multiplicity(&self, id: FlatId) -> usize {
        self.flats[id].closure.len()
    }

    /// The sub-arrangement of hyperplanes containing the flat.
    pub fn localize(&self, arr: &Arrangement, id: FlatId) -> Localization {
        let ambient: Vec<usize> = self.flats[id].closure.iter().map(|&x| x as usize).collect();
        let normals: Vec<Vec<i64>> =
            ambient.iter().map(|&i| arr.hyperplane(i).normal().to_vec()).collect();
        let arrangement = Arrangement::new(arr.dim(), normals).expect("subset of a valid arrangement");
        // Canonical normals are preserved, so sorting is a no-op and local
        // order equals ambient closure order.
        Localization { arrangement, ambient }
    }
}

/// Re-expresses a (typically localized) arrangement in a basis of the span of
/// its normals, producing an essential arrangement in CP^{r-1} with identical
/// combinatorics. Returns the new arrangement and, for each new hyperplane
/// index, the index it came from in the input.
pub fn essentialize(arr: &Arrangement) -> (Arrangement, Vec<usize>) {
    let m = arr.normal_matrix();
    let mut basis_rows: Vec<Vec<Rational>> = Vec::new();
    for i in 0..m.rows() {
        let row = m.row(i).to_vec();
        let candidate = Matrix::from_rows(
            basis_rows.iter().cloned().chain(std::iter::once(row.clone())).collect(),
        );
        if linalg::rank(&candidate) > basis_rows.len() {
            basis_rows.push(row);
        }
    }
    let basis = Matrix::from_rows(basis_rows);
    let mut normals: Vec<Vec<i64>> = Vec::with_capacity(arr.len());
    for i in 0..m.rows() {
        let coords = linalg::solve_in_basis(m.row(i), &basis)
            .expect("lengths agree")
            .expect("row lies in the span of the basis");
        normals.push(scale_to_primitive(&coords));
    }
    let (out, payload) =
        Arrangement::new_with_payload(basis.rows() - 1, normals, (0..arr.len()).collect())
            .expect("projectively distinct normals stay distinct");
    (out, payload)
}

fn scale_to_primitive(coords: &[Rational]) -> Vec<i64> {
    use num_bigint::BigInt;
    use num_traits::ToPrimitive;
    let mut lcm = BigInt::from(1);
    for c in coords {
        lcm = num_integer::lcm(lcm, c.denom().clone());
    }
    let ints: Vec<BigInt> = coords.iter().map(|c| c.numer() * (&lcm / c.denom())).collect();
    ints.iter()
        .map(|x| x.to_i64().expect("desk-scale normals fit in i64"))
        .collect()
}

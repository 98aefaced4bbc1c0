//! Projective hyperplane arrangements in CP^n with integer normals.
//!
//! A hyperplane is stored as a canonicalized integer normal vector: primitive
//! (gcd one), first nonzero entry positive. An arrangement keeps its
//! hyperplanes sorted by normal and duplicate-free, so indices are stable.

use num_integer::Integer;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{self, Matrix};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ArrangementError {
    #[error("normal vector must be nonzero")]
    ZeroNormal,
    #[error("normal has {got} entries, expected {expected}")]
    WrongLength { expected: usize, got: usize },
    #[error("duplicate hyperplane {0:?}")]
    Duplicate(Vec<i64>),
    #[error("braid arrangement needs k >= 3, got {0}")]
    BraidTooSmall(usize),
    #[error("reflection arrangement needs m >= 2, got {0}")]
    ReflectionTooSmall(usize),
    #[error("generic arrangement needs at least n+1 = {expected} hyperplanes, got {got}")]
    GenericTooFew { expected: usize, got: usize },
    #[error("arrangement must be nonempty")]
    Empty,
    #[error("malformed arrangement file: {0}")]
    BadFile(String),
}

/// A projective hyperplane, canonicalized.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Hyperplane {
    normal: Vec<i64>,
}

impl Hyperplane {
    /// Canonicalizes an arbitrary nonzero integer normal: divide by the gcd
    /// of the entries and flip signs so the first nonzero entry is positive.
    pub fn new(raw: &[i64]) -> Result<Self, ArrangementError> {
        let mut g: i64 = 0;
        for &x in raw {
            g = g.gcd(&x);
        }
        if g == 0 {
            return Err(ArrangementError::ZeroNormal);
        }
        let mut normal: Vec<i64> = raw.iter().map(|&x| x / g).collect();
        if let Some(first) = normal.iter().find(|&&x| x != 0) {
            if *first < 0 {
                for x in &mut normal {
                    *x = -*x;
                }
            }
        }
        Ok(Self { normal })
    }

    pub fn normal(&self) -> &[i64] {
        &self.normal
    }
}

/// An ordered, duplicate-free hyperplane arrangement in CP^n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrangement {
    dim: usize,
    hyperplanes: Vec<Hyperplane>,
}

impl Arrangement {
    pub fn new(dim: usize, normals: Vec<Vec<i64>>) -> Result<Self, ArrangementError> {
        if normals.is_empty() {
            return Err(ArrangementError::Empty);
        }
        let mut hyperplanes = Vec::with_capacity(normals.len());
        for raw in &normals {
            if raw.len() != dim + 1 {
                return Err(ArrangementError::WrongLength {
                    expected: dim + 1,
                    got: raw.len(),
                });
            }
            hyperplanes.push(Hyperplane::new(raw)?);
        }
        hyperplanes.sort();
        for w in hyperplanes.windows(2) {
            if w[0] == w[1] {
                return Err(ArrangementError::Duplicate(w[0].normal.clone()));
            }
        }
        Ok(Self { dim, hyperplanes })
    }

    /// Builds from canonical normals together with a parallel payload (e.g.
    /// weights); the payload is permuted alongside the sort.
    pub fn new_with_payload<T>(
        dim: usize,
        normals: Vec<Vec<i64>>,
        payload: Vec<T>,
    ) -> Result<(Self, Vec<T>), ArrangementError> {
        assert_eq!(normals.len(), payload.len());
        if normals.is_empty() {
            return Err(ArrangementError::Empty);
        }
        let mut entries: Vec<(Hyperplane, T)> = Vec::with_capacity(normals.len());
        for (raw, p) in normals.iter().zip(payload) {
            if raw.len() != dim + 1 {
                return Err(ArrangementError::WrongLength {
                    expected: dim + 1,
                    got: raw.len(),
                });
            }
            entries.push((Hyperplane::new(raw)?, p));
        }
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        for w in entries.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(ArrangementError::Duplicate(w[0].0.normal.clone()));
            }
        }
        let mut hyperplanes = Vec::with_capacity(entries.len());
        let mut sorted_payload = Vec::with_capacity(entries.len());
        for (h, p) in entries {
            hyperplanes.push(h);
            sorted_payload.push(p);
        }
        Ok((Self { dim, hyperplanes }, sorted_payload))
    }

    /// Projective dimension n.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.hyperplanes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hyperplanes.is_empty()
    }

    pub fn hyperplane(&self, i: usize) -> &Hyperplane {
        &self.hyperplanes[i]
    }

    pub fn hyperplanes(&self) -> &[Hyperplane] {
        &self.hyperplanes
    }

    /// Index of the hyperplane with the given (not necessarily canonical) normal.
    pub fn index_of(&self, raw: &[i64]) -> Option<usize> {
        let h = Hyperplane::new(raw).ok()?;
        self.hyperplanes.binary_search(&h).ok()
    }

    /// The hyperplane normals as rows of a rational matrix.
    pub fn normal_matrix(&self) -> Matrix {
        Matrix::from_int_rows(
            &self.hyperplanes.iter().map(|h| h.normal.clone()).collect::<Vec<_>>(),
        )
    }

    /// Normal matrix of a subset of hyperplanes.
    pub fn normal_matrix_of(&self, indices: &[usize]) -> Matrix {
        Matrix::from_int_rows(
            &indices.iter().map(|&i| self.hyperplanes[i].normal.clone()).collect::<Vec<_>>(),
        )
    }
}

/// JSON file schema: `{"dim": n, "hyperplanes": [[int, ...], ...]}` with an
/// optional parallel `"weights": ["p/q", ...]` list.
#[derive(Serialize, Deserialize)]
pub struct ArrangementFile {
    pub dim: usize,
    pub hyperplanes: Vec<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<String>>,
}

impl ArrangementFile {
    pub fn from_json(s: &str) -> Result<Self, ArrangementError> {
        serde_json::from_str(s).map_err(|e| ArrangementError::BadFile(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }

    pub fn for_arrangement(arr: &Arrangement, weights: Option<&[linalg::Rational]>) -> Self {
        Self {
            dim: arr.dim(),
            hyperplanes: arr.hyperplanes().iter().map(|h| h.normal().to_vec()).collect(),
            weights: weights.map(|ws| ws.iter().map(linalg::format_rational).collect()),
        }
    }
}

/// Normal of the braid hyperplane indexed by the pair `i < j` of `1..=k`,
/// in the gauge x_k = 0 on CP^{k-2}: x_i - x_j for j < k, and x_i for j = k.
pub fn braid_normal(i: usize, j: usize, k: usize) -> Vec<i64> {
    assert!(1 <= i && i < j && j <= k);
    let mut v = vec![0i64; k - 1];
    v[i - 1] = 1;
    if j < k {
        v[j - 1] = -1;
    }
    v
}

/// Essential braid arrangement: C(k,2) hyperplanes in CP^{k-2}.
pub fn gen_braid(k: usize) -> Result<Arrangement, ArrangementError> {
    if k < 3 {
        return Err(ArrangementError::BraidTooSmall(k));
    }
    let mut normals = Vec::new();
    for i in 1..=k {
        for j in i + 1..=k {
            normals.push(braid_normal(i, j, k));
        }
    }
    Arrangement::new(k - 2, normals)
}

/// Reflection arrangement of type B: the m^2 hyperplanes
/// {x_i = 0} and {x_i +- x_j = 0} in CP^{m-1}.
pub fn gen_bm(m: usize) -> Result<Arrangement, ArrangementError> {
    if m < 2 {
        return Err(ArrangementError::ReflectionTooSmall(m));
    }
    let mut normals = Vec::new();
    for i in 0..m {
        let mut v = vec![0i64; m];
        v[i] = 1;
        normals.push(v);
    }
    for i in 0..m {
        for j in i + 1..m {
            for sign in [1i64, -1] {
                let mut v = vec![0i64; m];
                v[i] = 1;
                v[j] = sign;
                normals.push(v);
            }
        }
    }
    Arrangement::new(m - 1, normals)
}

/// The seven-line arrangement {x, y, z, x+y+z, -x+y+z, x-y+z, x+y-z} in CP^2.
pub fn gen_seven_lines() -> Arrangement {
    Arrangement::new(
        2,
        vec![
            vec![1, 0, 0],
            vec![0, 1, 0],
            vec![0, 0, 1],
            vec![1, 1, 1],
            vec![-1, 1, 1],
            vec![1, -1, 1],
            vec![1, 1, -1],
        ],
    )
    .expect("valid fixed arrangement")
}

/// `k` generic hyperplanes in CP^n, drawn deterministically from `seed` and
/// redrawn until every n+1 of them are linearly independent.
pub fn gen_generic(n: usize, k: usize, seed: u64) -> Result<Arrangement, ArrangementError> {
    if k < n + 1 {
        return Err(ArrangementError::GenericTooFew { expected: n + 1, got: k });
    }
    let mut rng = StdRng::seed_from_u64(seed);
    'attempt: loop {
        let mut normals: Vec<Vec<i64>> = Vec::with_capacity(k);
        while normals.len() < k {
            let v: Vec<i64> = (0..n + 1).map(|_| rng.gen_range(-9..=9)).collect();
            if v.iter().all(|&x| x == 0) {
                continue;
            }
            normals.push(v);
        }
        let arr = match Arrangement::new(n, normals) {
            Ok(a) => a,
            Err(_) => continue 'attempt,
        };
        if all_subsets_independent(&arr, n + 1) {
            return Ok(arr);
        }
    }
}

fn all_subsets_independent(arr: &Arrangement, size: usize) -> bool {
    let idx: Vec<usize> = (0..arr.len()).collect();
    let mut chosen = Vec::new();
    subsets_ok(arr, &idx, size, 0, &mut chosen)
}

fn subsets_ok(
    arr: &Arrangement,
    idx: &[usize],
    size: usize,
    start: usize,
    chosen: &mut Vec<usize>,
) -> bool {
    if chosen.len() == size {
        return linalg::rank(&arr.normal_matrix_of(chosen)) == size;
    }
    for i in start..idx.len() {
        chosen.push(idx[i]);
        let ok = subsets_ok(arr, idx, size, i + 1, chosen);
        chosen.pop();
        if !ok {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonicalization() {
        assert_eq!(Hyperplane::new(&[-2, 4, -6]).unwrap().normal(), &[1, -2, 3]);
        assert_eq!(Hyperplane::new(&[0, -5, 0]).unwrap().normal(), &[0, 1, 0]);
        assert!(Hyperplane::new(&[0, 0]).is_err());
    }

    #[test]
    fn duplicates_rejected() {
        let err = Arrangement::new(1, vec![vec![1, 2], vec![2, 4]]).unwrap_err();
        assert!(matches!(err, ArrangementError::Duplicate(_)));
    }

    #[test]
    fn braid_counts() {
        assert_eq!(gen_braid(4).unwrap().len(), 6);
        assert_eq!(gen_braid(4).unwrap().dim(), 2);
        assert_eq!(gen_braid(5).unwrap().len(), 10);
        assert_eq!(gen_braid(5).unwrap().dim(), 3);
        assert_eq!(gen_braid(3).unwrap().len(), 3);
        assert_eq!(gen_braid(3).unwrap().dim(), 1);
        assert!(gen_braid(2).is_err());
    }

    #[test]
    fn bm_counts() {
        assert_eq!(gen_bm(3).unwrap().len(), 9);
        assert_eq!(gen_bm(3).unwrap().dim(), 2);
        assert_eq!(gen_bm(2).unwrap().len(), 4);
        assert_eq!(gen_bm(2).unwrap().dim(), 1);
        assert!(gen_bm(1).is_err());
    }

    #[test]
    fn seven_lines_count() {
        assert_eq!(gen_seven_lines().len(), 7);
    }

    /// The product of the four +- forms agrees, up to scale, with the pullback
    /// of the conic X^2+Y^2+Z^2-2XY-2YZ-2ZX under [x,y,z] -> [x^2,y^2,z^2].
    #[test]
    fn seven_lines_conic_pullback() {
        // Quartic polynomials in three variables as dense coefficient maps on
        // exponent triples.
        use std::collections::BTreeMap;
        type Poly = BTreeMap<[u32; 3], i64>;
        fn mul(a: &Poly, b: &Poly) -> Poly {
            let mut out = Poly::new();
            for (ea, ca) in a {
                for (eb, cb) in b {
                    let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]];
                    let c = out.entry(e).or_insert(0);
                    *c += ca * cb;
                    if *c == 0 {
                        out.remove(&e);
                    }
                }
            }
            out
        }
        fn linear(coeffs: [i64; 3]) -> Poly {
            let mut p = Poly::new();
            for (i, c) in coeffs.into_iter().enumerate() {
                if c != 0 {
                    let mut e = [0u32; 3];
                    e[i] = 1;
                    p.insert(e, c);
                }
            }
            p
        }
        let product = [
            linear([1, 1, 1]),
            linear([-1, 1, 1]),
            linear([1, -1, 1]),
            linear([1, 1, -1]),
        ]
        .into_iter()
        .reduce(|a, b| mul(&a, &b))
        .unwrap();

        // Conic X^2+Y^2+Z^2-2XY-2YZ-2ZX with X=x^2, Y=y^2, Z=z^2.
        let mut pullback = Poly::new();
        pullback.insert([4, 0, 0], 1);
        pullback.insert([0, 4, 0], 1);
        pullback.insert([0, 0, 4], 1);
        pullback.insert([2, 2, 0], -2);
        pullback.insert([0, 2, 2], -2);
        pullback.insert([2, 0, 2], -2);

        let negated: Poly = pullback.iter().map(|(e, c)| (*e, -c)).collect();
        assert!(product == pullback || product == negated);
    }

    #[test]
    fn generic_deterministic_and_generic() {
        let a = gen_generic(2, 4, 7).unwrap();
        let b = gen_generic(2, 4, 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 4);
        assert!(all_subsets_independent(&a, 3));
        assert!(gen_generic(2, 2, 0).is_err());
    }

    #[test]
    fn file_round_trip() {
        let arr = gen_braid(4).unwrap();
        let file = ArrangementFile::for_arrangement(&arr, None);
        let json = file.to_json();
        let reloaded = ArrangementFile::from_json(&json).unwrap();
        let arr2 = Arrangement::new(reloaded.dim, reloaded.hyperplanes).unwrap();
        assert_eq!(arr, arr2);
        assert_eq!(ArrangementFile::for_arrangement(&arr2, None).to_json(), json);
    }

    #[test]
    fn braid_normal_matches_gauge() {
        assert_eq!(braid_normal(1, 2, 4), vec![1, -1, 0]);
        assert_eq!(braid_normal(2, 4, 4), vec![0, 1, 0]);
        let arr = gen_braid(4).unwrap();
        assert!(arr.index_of(&braid_normal(1, 3, 4)).is_some());
    }
}

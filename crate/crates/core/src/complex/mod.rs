//! Finite abstract simplicial complexes.
//!
//! Vertices are dense `u32` ids with string labels. A simplex is a sorted
//! tuple of vertex ids; simplices are stored per dimension in insertion order
//! and get a global id that is dimension-major, so a chain of faces listed by
//! increasing dimension is also listed by increasing id.

mod build;
pub(crate) mod chain;
pub(crate) mod homology;
mod orient;

use indexmap::IndexSet;
use rustc_hash::{FxBuildHasher, FxHashMap};
use smallvec::SmallVec;

use crate::error::{Error, Result};

pub use build::{FacePoset, Subdivision};
pub use chain::{boundary_matrix, ChainMap, OrientedChain, SimplicialMap};
pub use homology::{cohomology_basis, homology, homology_basis, Homology, Ring};
pub use orient::{fundamental_class, product_orientation, Orientation};

pub type Simplex = SmallVec<[u32; 8]>;
pub(crate) type SimplexSet = IndexSet<Simplex, FxBuildHasher>;

/// Sorted, deduplicated simplex from arbitrary vertex ids.
pub fn simplex(vs: impl IntoIterator<Item = u32>) -> Simplex {
    let mut s: Simplex = vs.into_iter().collect();
    s.sort_unstable();
    s.dedup();
    s
}

/// The face of `s` obtained by deleting position `i`.
pub fn face(s: &[u32], i: usize) -> Simplex {
    s.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &v)| v).collect()
}

#[derive(Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    labels: Vec<String>,
    by_dim: Vec<SimplexSet>,
}

impl std::fmt::Debug for SimplicialComplex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "SimplicialComplex(dim {}, f = {:?})", self.dim(), self.f_vector())
    }
}

impl SimplicialComplex {
    /// The empty complex (links of top simplices, empty fixed sets).
    pub fn empty() -> Self {
        SimplicialComplex { labels: Vec::new(), by_dim: Vec::new() }
    }

    /// Downward closure of `facets` over the given vertex labels. Every label
    /// becomes a vertex, even if no facet mentions it.
    pub fn new<I>(labels: Vec<String>, facets: I) -> Result<Self>
    where
        I: IntoIterator<Item = Simplex>,
    {
        let nv = labels.len() as u32;
        let mut by_dim: Vec<SimplexSet> = vec![(0..nv).map(|v| simplex([v])).collect()];
        let mut seen = FxHashMap::default();
        for (i, l) in labels.iter().enumerate() {
            if seen.insert(l.as_str(), i).is_some() {
                return Err(Error::InvalidOrder(format!("duplicate vertex label {l}")));
            }
        }
        let mut facets: Vec<Simplex> = facets.into_iter().collect();
        for f in &facets {
            if f.iter().any(|&v| v >= nv) {
                return Err(Error::Internal(format!("vertex id out of range in {f:?}")));
            }
        }
        if labels.is_empty() {
            return Err(Error::EmptyComplex);
        }
        facets.sort_by(|a, b| b.len().cmp(&a.len()));
        let top = facets.first().map_or(0, |f| f.len());
        by_dim.resize_with(top.max(1), SimplexSet::default);
        for f in facets {
            let f = simplex(f);
            if by_dim[f.len() - 1].contains(&f) {
                continue;
            }
            insert_closure(&mut by_dim, &f);
        }
        let mut k = SimplicialComplex { labels, by_dim };
        k.canonicalize_order();
        Ok(k)
    }

    /// Complex from facets given by label. Vertex ids follow first appearance.
    pub fn from_maximal_simplices<T: ToString>(maximal: &[Vec<T>]) -> Result<Self> {
        let mut ids: FxHashMap<String, u32> = FxHashMap::default();
        let mut labels = Vec::new();
        let mut facets = Vec::with_capacity(maximal.len());
        for m in maximal {
            if m.is_empty() {
                return Err(Error::EmptyComplex);
            }
            facets.push(simplex(m.iter().map(|x| {
                let l = x.to_string();
                *ids.entry(l.clone()).or_insert_with(|| {
                    labels.push(l);
                    labels.len() as u32 - 1
                })
            })));
        }
        if labels.is_empty() {
            return Err(Error::EmptyComplex);
        }
        Self::new(labels, facets)
    }

    /// Complex on vertices `0..n` labelled by their numbers.
    pub fn from_index_facets(facets: &[Vec<u32>]) -> Result<Self> {
        let n = facets.iter().flatten().map(|&v| v + 1).max().ok_or(Error::EmptyComplex)?;
        let labels = (0..n).map(|v| v.to_string()).collect();
        Self::new(labels, facets.iter().map(|f| simplex(f.iter().copied())))
    }

    /// Built from already-closed per-dimension sets; used by constructions that
    /// enumerate every simplex directly.
    pub(crate) fn from_closed_parts(labels: Vec<String>, mut by_dim: Vec<SimplexSet>) -> Self {
        while by_dim.last().is_some_and(|s| s.is_empty()) {
            by_dim.pop();
        }
        let mut k = SimplicialComplex { labels, by_dim };
        k.canonicalize_order();
        k
    }

    /// Simplices of each dimension sorted lexicographically, so equal complexes
    /// compare equal regardless of construction order.
    fn canonicalize_order(&mut self) {
        for set in &mut self.by_dim {
            set.sort_unstable();
        }
    }

    pub fn is_empty(&self) -> bool {
        self.by_dim.is_empty()
    }

    /// Dimension; the empty complex reports 0 (check `is_empty`).
    pub fn dim(&self) -> usize {
        self.by_dim.len().saturating_sub(1)
    }

    pub fn num_vertices(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: u32) -> &str {
        &self.labels[v as usize]
    }

    pub fn labels_of(&self, s: &[u32]) -> Vec<String> {
        s.iter().map(|&v| self.labels.get(v as usize).cloned().unwrap_or_else(|| format!("#{v}"))).collect()
    }

    pub fn vertex_by_label(&self, label: &str) -> Option<u32> {
        self.labels.iter().position(|l| l == label).map(|i| i as u32)
    }

    /// Simplices of dimension `d` in canonical order.
    pub fn simplices(&self, d: usize) -> &SimplexSet {
        static EMPTY: std::sync::OnceLock<SimplexSet> = std::sync::OnceLock::new();
        self.by_dim.get(d).unwrap_or_else(|| EMPTY.get_or_init(SimplexSet::default))
    }

    pub fn count(&self, d: usize) -> usize {
        self.by_dim.get(d).map_or(0, |s| s.len())
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.by_dim.iter().map(|s| s.len()).collect()
    }

    pub fn total_simplices(&self) -> usize {
        self.by_dim.iter().map(|s| s.len()).sum()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.by_dim
            .iter()
            .enumerate()
            .map(|(d, s)| if d % 2 == 0 { s.len() as i64 } else { -(s.len() as i64) })
            .sum()
    }

    pub fn contains(&self, s: &[u32]) -> bool {
        !s.is_empty() && self.by_dim.get(s.len() - 1).is_some_and(|set| set.contains(s))
    }

    /// Index of `s` among simplices of its dimension.
    pub fn index_of(&self, s: &[u32]) -> Option<usize> {
        self.by_dim.get(s.len().checked_sub(1)?)?.get_index_of(s)
    }

    /// Dimension-major global id.
    pub fn id_of(&self, s: &[u32]) -> Option<usize> {
        let d = s.len().checked_sub(1)?;
        Some(self.offset(d) + self.by_dim.get(d)?.get_index_of(s)?)
    }

    pub fn offset(&self, d: usize) -> usize {
        self.by_dim.iter().take(d).map(|s| s.len()).sum()
    }

    pub fn simplex_by_id(&self, mut id: usize) -> &Simplex {
        for set in &self.by_dim {
            if id < set.len() {
                return &set[id];
            }
            id -= set.len();
        }
        panic!("simplex id out of range")
    }

    /// All simplices in global-id order.
    pub fn iter(&self) -> impl Iterator<Item = &Simplex> + '_ {
        self.by_dim.iter().flatten()
    }

    /// Maximal simplices, by dimension then canonical order.
    pub fn facets(&self) -> Vec<Simplex> {
        let mut out = Vec::new();
        for d in 0..self.by_dim.len() {
            let covered: rustc_hash::FxHashSet<&Simplex> = match self.by_dim.get(d + 1) {
                Some(up) => up.iter().flat_map(|s| (0..s.len()).map(move |i| (s, i))).fold(
                    rustc_hash::FxHashSet::default(),
                    |mut acc, (s, i)| {
                        if let Some(f) = self.by_dim[d].get(&face(s, i)) {
                            acc.insert(f);
                        }
                        acc
                    },
                ),
                None => Default::default(),
            };
            out.extend(self.by_dim[d].iter().filter(|s| !covered.contains(s)).cloned());
        }
        out
    }

    pub fn is_pure(&self) -> bool {
        let n = self.dim();
        self.facets().iter().all(|f| f.len() == n + 1)
    }

    /// `{ τ : τ ∩ σ = ∅, τ ∪ σ ∈ K }`, on the original vertex ids and labels
    /// restricted to the vertices that occur.
    pub fn link(&self, sigma: &[u32]) -> Result<SimplicialComplex> {
        let sigma = simplex(sigma.iter().copied());
        if !self.contains(&sigma) {
            return Err(Error::not_a_simplex(self, &sigma));
        }
        let facets = self.facets();
        let cof: Vec<Simplex> = facets
            .iter()
            .filter(|f| sigma.iter().all(|v| f.binary_search(v).is_ok()))
            .map(|f| f.iter().copied().filter(|v| sigma.binary_search(v).is_err()).collect())
            .collect();
        Ok(self.induced_from_facets(cof))
    }

    /// Subcomplex generated by `facets` (ids of `self`), relabelled on the
    /// vertices that occur, in increasing id order.
    pub fn induced_from_facets(&self, facets: Vec<Simplex>) -> SimplicialComplex {
        let facets: Vec<Simplex> = facets.into_iter().filter(|f| !f.is_empty()).collect();
        if facets.is_empty() {
            return SimplicialComplex::empty();
        }
        let mut used: Vec<u32> = facets.iter().flatten().copied().collect();
        used.sort_unstable();
        used.dedup();
        let pos: FxHashMap<u32, u32> = used.iter().enumerate().map(|(i, &v)| (v, i as u32)).collect();
        let labels = used.iter().map(|&v| self.labels[v as usize].clone()).collect();
        SimplicialComplex::new(labels, facets.iter().map(|f| simplex(f.iter().map(|v| pos[v]))))
            .expect("nonempty subcomplex")
    }

    /// Subcomplex of all simplices satisfying `keep` (which must be closed
    /// under faces), keeping the full vertex set of `self` when `keep` holds
    /// on every vertex.
    pub fn subcomplex(&self, keep: impl Fn(&Simplex) -> bool) -> SimplicialComplex {
        let facets = self.iter().filter(|s| keep(s)).cloned().collect();
        self.induced_from_facets(facets)
    }

    pub fn skeleton(&self, k: usize) -> SimplicialComplex {
        SimplicialComplex { labels: self.labels.clone(), by_dim: self.by_dim.iter().take(k + 1).cloned().collect() }
    }

    /// Connected components as lists of vertex ids.
    pub fn components(&self) -> Vec<Vec<u32>> {
        let n = self.labels.len();
        let mut parent: Vec<u32> = (0..n as u32).collect();
        fn find(p: &mut [u32], mut x: u32) -> u32 {
            while p[x as usize] != x {
                p[x as usize] = p[p[x as usize] as usize];
                x = p[x as usize];
            }
            x
        }
        for e in self.simplices(1) {
            let (a, b) = (find(&mut parent, e[0]), find(&mut parent, e[1]));
            if a != b {
                parent[a.max(b) as usize] = a.min(b);
            }
        }
        let mut groups: FxHashMap<u32, Vec<u32>> = FxHashMap::default();
        let mut order = Vec::new();
        for v in 0..n as u32 {
            let r = find(&mut parent, v);
            groups
                .entry(r)
                .or_insert_with(|| {
                    order.push(r);
                    Vec::new()
                })
                .push(v);
        }
        order.into_iter().map(|r| groups.remove(&r).unwrap()).collect()
    }

    /// Codimension-one faces and the top simplices containing them.
    pub fn ridge_cofaces(&self) -> Vec<Vec<u32>> {
        let n = self.dim();
        if n == 0 || self.is_empty() {
            return Vec::new();
        }
        let mut cof = vec![Vec::new(); self.count(n - 1)];
        for (t, s) in self.simplices(n).iter().enumerate() {
            for i in 0..s.len() {
                let r = self.simplices(n - 1).get_index_of(&face(s, i)[..]).expect("closed");
                cof[r].push(t as u32);
            }
        }
        cof
    }
}

fn insert_closure(by_dim: &mut [SimplexSet], f: &Simplex) {
    let k = f.len();
    if k == 0 {
        return;
    }
    // subsets by bitmask, skipping ones already present together with their faces
    let mut stack = vec![f.clone()];
    while let Some(s) = stack.pop() {
        if !by_dim[s.len() - 1].insert(s.clone()) {
            continue;
        }
        if s.len() > 1 {
            for i in 0..s.len() {
                let t = face(&s, i);
                if !by_dim[t.len() - 1].contains(&t) {
                    stack.push(t);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_of_triangle() {
        let k = SimplicialComplex::from_maximal_simplices(&[vec!["a", "b", "c"]]).unwrap();
        assert_eq!(k.f_vector(), vec![3, 3, 1]);
        assert_eq!(k.dim(), 2);
    }

    #[test]
    fn empty_input_is_rejected() {
        let e: Vec<Vec<u32>> = vec![];
        assert_eq!(SimplicialComplex::from_maximal_simplices(&e), Err(Error::EmptyComplex));
    }

    #[test]
    fn boundary_of_tetrahedron() {
        let k = SimplicialComplex::from_index_facets(&[vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]])
            .unwrap();
        assert_eq!(k.f_vector(), vec![4, 6, 4]);
        assert_eq!(k.euler_characteristic(), 2);
        let lk = k.link(&[0]).unwrap();
        assert_eq!(lk.f_vector(), vec![3, 3]);
        let lk = k.link(&[0, 1]).unwrap();
        assert_eq!(lk.f_vector(), vec![2]);
        assert!(k.link(&[0, 1, 2]).unwrap().is_empty());
        assert!(matches!(k.link(&[0, 9]), Err(Error::NotASimplex(_))));
    }

    #[test]
    fn facets_and_components() {
        let k = SimplicialComplex::from_index_facets(&[vec![0, 1, 2], vec![2, 3], vec![4, 5]]).unwrap();
        assert_eq!(k.facets().len(), 3);
        assert!(!k.is_pure());
        assert_eq!(k.components(), vec![vec![0, 1, 2, 3], vec![4, 5]]);
    }
}

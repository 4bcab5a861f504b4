//! Boundary matrices, oriented chains and simplicial maps.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;

use super::{face, Simplex, SimplicialComplex};
use crate::error::{Error, Result};
use crate::exec;
use crate::linalg::{QVec, SparseVec};

/// Columns of `∂_d : C_d → C_{d-1}`, indexed by the canonical orders. The
/// face dropping vertex `i` has coefficient `(-1)^i`.
pub fn boundary_matrix(k: &SimplicialComplex, d: usize) -> Vec<SparseVec<i64>> {
    let cols: Vec<&Simplex> = k.simplices(d).iter().collect();
    if d == 0 {
        return vec![SparseVec::new(); cols.len()];
    }
    let rows = k.simplices(d - 1);
    exec::map(&cols, |s| {
        let pairs = (0..s.len())
            .map(|i| {
                let r = rows.get_index_of(&face(s, i)).expect("closed under faces") as u32;
                (r, if i % 2 == 0 { 1 } else { -1 })
            })
            .collect();
        SparseVec::from_i64_pairs(pairs)
    })
}

/// Sign of the permutation sorting `v`, with `v` sorted in place; zero when
/// `v` has a repeated entry.
pub fn sort_sign(v: &mut [u32]) -> i64 {
    let mut sign = 1;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        0
    } else {
        sign
    }
}

/// A rational chain: sorted simplices with nonzero coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct OrientedChain {
    pub degree: usize,
    terms: BTreeMap<Simplex, BigRational>,
}

impl OrientedChain {
    pub fn zero(degree: usize) -> Self {
        OrientedChain { degree, terms: BTreeMap::new() }
    }

    /// Adds `c · [v_0, …, v_d]` for an ordered tuple, normalizing to sorted order.
    pub fn add_ordered(&mut self, tuple: &[u32], c: &BigRational) {
        assert_eq!(tuple.len(), self.degree + 1, "wrong degree");
        let mut s: Simplex = tuple.into();
        let sign = sort_sign(&mut s);
        if sign == 0 || c.is_zero() {
            return;
        }
        let c = if sign < 0 { -c.clone() } else { c.clone() };
        match self.terms.entry(s) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Simplex, &BigRational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, s: &[u32]) -> BigRational {
        self.terms.get(s).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn boundary(&self) -> OrientedChain {
        let mut out = OrientedChain::zero(self.degree.saturating_sub(1));
        if self.degree == 0 {
            return out;
        }
        for (s, c) in &self.terms {
            for i in 0..s.len() {
                let c = if i % 2 == 0 { c.clone() } else { -c.clone() };
                out.add_ordered(&face(s, i), &c);
            }
        }
        out
    }

    /// Coordinates in the canonical basis of degree-`degree` simplices.
    pub fn to_vector(&self, k: &SimplicialComplex) -> Result<QVec> {
        let pairs = self
            .terms
            .iter()
            .map(|(s, c)| {
                let i = k.index_of(s).ok_or_else(|| Error::not_a_simplex(k, s))?;
                Ok((i as u32, c.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(QVec::from_rational_pairs(pairs))
    }

    pub fn from_vector(k: &SimplicialComplex, degree: usize, v: &QVec) -> Self {
        let mut out = OrientedChain::zero(degree);
        for (i, c) in v.iter() {
            out.terms.insert(k.simplices(degree)[i as usize].clone(), c.clone());
        }
        out
    }
}

/// A vertex map that sends simplices to simplices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialMap {
    vertex: Vec<u32>,
}

/// Matrices of the induced chain map, one per degree, as columns over the
/// source simplices.
pub type ChainMap = Vec<Vec<SparseVec<i64>>>;

impl SimplicialMap {
    pub fn new(source: &SimplicialComplex, target: &SimplicialComplex, vertex: Vec<u32>) -> Result<Self> {
        if vertex.len() != source.num_vertices() {
            return Err(Error::NotSimplicial(vec![format!(
                "vertex map has {} entries for {} vertices",
                vertex.len(),
                source.num_vertices()
            )]));
        }
        let f = SimplicialMap { vertex };
        for s in source.iter() {
            if !target.contains(&f.image(s)) {
                return Err(Error::NotSimplicial(source.labels_of(s)));
            }
        }
        Ok(f)
    }

    pub fn identity(k: &SimplicialComplex) -> Self {
        SimplicialMap { vertex: (0..k.num_vertices() as u32).collect() }
    }

    pub(crate) fn unchecked(vertex: Vec<u32>) -> Self {
        SimplicialMap { vertex }
    }

    pub fn apply(&self, v: u32) -> u32 {
        self.vertex[v as usize]
    }

    pub fn vertex_map(&self) -> &[u32] {
        &self.vertex
    }

    /// Image simplex (sorted, collapsed vertices merged).
    pub fn image(&self, s: &[u32]) -> Simplex {
        super::simplex(s.iter().map(|&v| self.vertex[v as usize]))
    }

    /// Image of an oriented simplex: `None` when it collapses, else the sorted
    /// image and the orientation sign.
    pub fn oriented_image(&self, s: &[u32]) -> Option<(Simplex, i64)> {
        let mut t: Simplex = s.iter().map(|&v| self.vertex[v as usize]).collect();
        let sign = sort_sign(&mut t);
        (sign != 0).then_some((t, sign))
    }

    pub fn compose(&self, after: &SimplicialMap) -> SimplicialMap {
        SimplicialMap { vertex: self.vertex.iter().map(|&v| after.vertex[v as usize]).collect() }
    }

    /// Chain map in degree `d`.
    pub fn chain_matrix(&self, source: &SimplicialComplex, target: &SimplicialComplex, d: usize) -> Vec<SparseVec<i64>> {
        let cols: Vec<&Simplex> = source.simplices(d).iter().collect();
        let rows = target.simplices(d);
        exec::map(&cols, |s| match self.oriented_image(s) {
            Some((t, sign)) => SparseVec::from_i64_pairs(vec![(rows.get_index_of(&t).expect("simplicial") as u32, sign)]),
            None => SparseVec::new(),
        })
    }

    pub fn chain_maps(&self, source: &SimplicialComplex, target: &SimplicialComplex) -> ChainMap {
        (0..=source.dim()).map(|d| self.chain_matrix(source, target, d)).collect()
    }

    /// Push a chain forward.
    pub fn push(&self, c: &OrientedChain) -> OrientedChain {
        let mut out = OrientedChain::zero(c.degree);
        for (s, coef) in c.terms() {
            let t: Vec<u32> = s.iter().map(|&v| self.vertex[v as usize]).collect();
            out.add_ordered(&t, coef);
        }
        out
    }

    /// Induced map on barycentric subdivisions, `{σ} ↦ {f(σ)}`.
    pub fn subdivide(
        &self,
        source: &SimplicialComplex,
        target: &SimplicialComplex,
    ) -> SimplicialMap {
        let vertex = source.iter().map(|s| target.id_of(&self.image(s)).expect("simplicial") as u32).collect();
        SimplicialMap { vertex }
    }
}

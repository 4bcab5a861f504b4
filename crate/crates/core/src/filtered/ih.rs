//! Simplicial intersection homology over the rationals.
//!
//! The chain model is either the complex itself (when the filtration is
//! full) or its barycentric subdivision, enumerated lazily as chains of
//! simplices without materializing the subdivided complex. In both cases a
//! cell is a sorted tuple of model vertices and the level of a model vertex
//! `v` is `levels[v]`: a vertex of the complex has global id equal to its
//! vertex id, and a vertex of the subdivision is a simplex id.

use num_rational::BigRational;
use rustc_hash::{FxHashMap, FxHashSet};

use super::{classify_simplicial, FilteredComplex, Perversity};
use crate::complex::chain::sort_sign;
use crate::complex::homology::rank_and_lows;
use crate::complex::{face, FacePoset, Simplex, SimplicialMap};
use crate::error::{Error, Result};
use crate::exec;
use crate::linalg::sparse::reduce_tracked;
use crate::linalg::{IntVec, QMatrix, QVec, QuotientBasis, SparseVec};

/// Which chain model to use for a filtered complex.
pub struct IhModel<'a> {
    x: &'a FilteredComplex,
    poset: Option<FacePoset>,
}

impl<'a> IhModel<'a> {
    /// Subdivide exactly when the filtration is not full.
    pub fn new(x: &'a FilteredComplex) -> Self {
        Self::with_subdivision(x, !x.is_full())
    }

    pub fn with_subdivision(x: &'a FilteredComplex, subdivide: bool) -> Self {
        IhModel { x, poset: subdivide.then(|| FacePoset::new(x.complex())) }
    }

    pub fn subdivided(&self) -> bool {
        self.poset.is_some()
    }

    pub fn filtered(&self) -> &FilteredComplex {
        self.x
    }

    fn level(&self, v: u32) -> u32 {
        self.x.levels[v as usize]
    }

    /// Whether a (possibly partial) cell can still be part of an allowable
    /// cell of dimension `i`.
    fn admissible(&self, cell: &[u32], i: usize, p: &Perversity) -> bool {
        let n = self.x.formal_dim;
        for s in 2..=n {
            let c = cell.iter().filter(|&&v| self.level(v) as usize + s <= n).count() as i64;
            if c == 0 {
                continue;
            }
            let ps = p.value(s).expect("perversity domain checked");
            if c - 1 > i as i64 - s as i64 + ps {
                return false;
            }
        }
        true
    }

    /// `i`-cells, restricted to allowable ones when `p` is given, in a
    /// deterministic order.
    pub fn cells(&self, i: usize, p: Option<&Perversity>) -> Vec<Simplex> {
        match &self.poset {
            None => self
                .x
                .complex()
                .simplices(i)
                .iter()
                .filter(|s| p.is_none_or(|p| self.admissible(s, i, p)))
                .cloned()
                .collect(),
            Some(poset) => {
                let per_top = exec::map_range(poset.len(), |t| {
                    let mut out = Vec::new();
                    if (poset.dims[t] as usize) < i {
                        return out;
                    }
                    let admit = |prefix: &[u32]| p.is_none_or(|p| self.admissible(prefix, i, p));
                    poset.for_each_chain(t as u32, i + 1, &admit, &mut |c| out.push(Simplex::from_slice(c)));
                    out
                });
                per_top.into_iter().flatten().collect()
            }
        }
    }

    /// Number of `i`-cells before the perversity restriction.
    pub fn cell_count(&self, i: usize) -> usize {
        match &self.poset {
            None => self.x.complex().count(i),
            Some(poset) => {
                let mut chains = vec![1usize; poset.len()];
                for _ in 0..i {
                    chains = (0..poset.len())
                        .map(|t| poset.faces[t].iter().fold(0usize, |a, &f| a.saturating_add(chains[f as usize])))
                        .collect();
                }
                chains.iter().fold(0usize, |a, &c| a.saturating_add(c))
            }
        }
    }

    pub fn max_cell_dim(&self) -> usize {
        self.x.complex().dim()
    }

    /// Model vertex map induced by a simplicial map to the complex of `target`.
    pub fn vertex_map(&self, f: &SimplicialMap, target: &IhModel) -> Vec<u32> {
        assert_eq!(self.subdivided(), target.subdivided(), "models must agree");
        if self.subdivided() {
            let tk = target.x.complex();
            self.x.complex().iter().map(|s| tk.id_of(&f.image(s)).expect("simplicial") as u32).collect()
        } else {
            f.vertex_map().to_vec()
        }
    }
}

/// Betti numbers of intersection homology in the requested degrees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IhReport {
    pub degrees: Vec<usize>,
    pub betti: Vec<usize>,
    /// Whether the computation ran on the barycentric subdivision because the
    /// filtration was not full.
    pub subdivided: bool,
}

impl IhReport {
    pub fn get(&self, i: usize) -> Option<usize> {
        self.degrees.iter().position(|&d| d == i).map(|k| self.betti[k])
    }
}

pub fn intersection_homology(x: &FilteredComplex, p: &Perversity) -> Result<IhReport> {
    let degrees: Vec<usize> = (0..=x.complex().dim()).collect();
    intersection_homology_degrees(x, p, &degrees)
}

/// Row index for the boundary of `cols`: the cells of `rows` first, in
/// order, then every other face in order of appearance.
fn face_index(rows: &[Simplex], cols: &[Simplex]) -> FxHashMap<Simplex, u32> {
    let mut index: FxHashMap<Simplex, u32> = FxHashMap::default();
    index.reserve(rows.len());
    for r in rows {
        let k = index.len() as u32;
        index.insert(r.clone(), k);
    }
    for c in cols {
        for i in 0..c.len() {
            let f = face(c, i);
            let k = index.len() as u32;
            index.entry(f).or_insert(k);
        }
    }
    index
}

fn boundary_columns(cols: &[Simplex], index: &FxHashMap<Simplex, u32>) -> Vec<SparseVec<i64>> {
    if cols.first().is_some_and(|c| c.len() == 1) {
        return vec![SparseVec::new(); cols.len()];
    }
    exec::map(cols, |c| {
        SparseVec::from_i64_pairs(
            (0..c.len()).map(|i| (index[&face(c, i)], if i % 2 == 0 { 1 } else { -1 })).collect(),
        )
    })
}

struct Reduced {
    rank: usize,
    /// rank of the rows outside the leading block
    rank_tail: usize,
    lows: FxHashSet<u32>,
}

fn reduce_block(cols: &[Simplex], rows: &[Simplex], skip: &FxHashSet<u32>) -> Reduced {
    let index = face_index(rows, cols);
    let kept: Vec<Simplex> =
        cols.iter().enumerate().filter(|(j, _)| !skip.contains(&(*j as u32))).map(|(_, c)| c.clone()).collect();
    let mat = boundary_columns(&kept, &index);
    drop(index);
    let (rank, lows) = rank_and_lows(&mat);
    let head = rows.len() as u32;
    let rank_tail = lows.iter().filter(|&&l| l >= head).count();
    Reduced { rank, rank_tail, lows }
}

pub fn intersection_homology_degrees(x: &FilteredComplex, p: &Perversity, degrees: &[usize]) -> Result<IhReport> {
    p.check_domain(x.max_codim())?;
    let model = IhModel::new(x);
    let betti = betti_on_model(&model, Some(p), degrees);
    Ok(IhReport { degrees: degrees.to_vec(), betti, subdivided: model.subdivided() })
}

/// `dim IH_i = |A_i| − rank ∂|A_i − rank ∂|A_{i+1} + rank N_{i+1}`, with `A`
/// the allowable cells and `N` the part of `∂|A_{i+1}` landing on
/// non-allowable faces. With `p = None` every cell is allowed and this is
/// ordinary homology of the model.
pub fn betti_on_model(model: &IhModel, p: Option<&Perversity>, degrees: &[usize]) -> Vec<usize> {
    let top = model.max_cell_dim();
    let mut cells: FxHashMap<usize, Vec<Simplex>> = FxHashMap::default();
    let get = |i: usize, cells: &mut FxHashMap<usize, Vec<Simplex>>| {
        if i > top {
            return Vec::new();
        }
        cells.entry(i).or_insert_with(|| model.cells(i, p)).clone()
    };
    let mut out = Vec::with_capacity(degrees.len());
    for &i in degrees {
        let a_i = get(i, &mut cells);
        let a_up = get(i + 1, &mut cells);
        let up = reduce_block(&a_up, &a_i, &FxHashSet::default());
        // columns of ∂|A_i that are lows of the reduction above reduce to zero
        let cleared: FxHashSet<u32> = up.lows.iter().copied().filter(|&l| (l as usize) < a_i.len()).collect();
        let rank_i = if i == 0 { 0 } else { reduce_block(&a_i, &[], &cleared).rank };
        out.push(a_i.len() + up.rank_tail - rank_i - up.rank);
        // keep memory bounded on large models: only neighbours of later degrees are reused
        cells.retain(|&d, _| degrees.iter().any(|&k| k == d || k + 1 == d));
    }
    out
}

/// Representatives and coordinates for `IH_i` (or `H_i` of the model when
/// no perversity is given).
#[derive(Debug, Clone)]
pub struct IhBasis {
    pub degree: usize,
    pub subdivided: bool,
    cells: Vec<Simplex>,
    index: FxHashMap<Simplex, u32>,
    quotient: QuotientBasis,
}

impl IhBasis {
    pub fn new(model: &IhModel, p: Option<&Perversity>, i: usize) -> Result<Self> {
        if let Some(p) = p {
            p.check_domain(model.x.max_codim())?;
        }
        let top = model.max_cell_dim();
        let a_i = if i <= top { model.cells(i, p) } else { Vec::new() };
        let a_up = if i < top { model.cells(i + 1, p) } else { Vec::new() };
        let index: FxHashMap<Simplex, u32> = a_i.iter().enumerate().map(|(k, c)| (c.clone(), k as u32)).collect();
        let (cycles, boundaries) = exec::join(
            || {
                if i == 0 {
                    return (0..a_i.len() as u32).map(SparseVec::unit).collect::<Vec<IntVec>>();
                }
                let rows = face_index(&[], &a_i);
                reduce_tracked(&boundary_columns(&a_i, &rows)).kernel()
            },
            || {
                let rows = face_index(&a_i, &a_up);
                let red = reduce_tracked(&boundary_columns(&a_up, &rows));
                let head = a_i.len() as u32;
                red.reduced.into_iter().filter(|c| c.low().is_some_and(|l| l < head)).collect::<Vec<IntVec>>()
            },
        );
        Ok(IhBasis { degree: i, subdivided: model.subdivided(), cells: a_i, index, quotient: QuotientBasis::new(cycles, &boundaries) })
    }

    pub fn dim(&self) -> usize {
        self.quotient.dim()
    }

    pub fn cells(&self) -> &[Simplex] {
        &self.cells
    }

    /// Representative cycles as `(cell, coefficient)` lists.
    pub fn representatives(&self) -> Vec<Vec<(Simplex, BigRational)>> {
        self.quotient
            .representatives()
            .iter()
            .map(|z| z.iter().map(|(k, c)| (self.cells[k as usize].clone(), BigRational::from_integer(c.clone()))).collect())
            .collect()
    }

    /// Coordinates of a cycle given on cells of this model.
    pub fn coordinates(&self, chain: &[(Simplex, BigRational)]) -> Result<Vec<BigRational>> {
        let mut pairs = Vec::with_capacity(chain.len());
        for (c, v) in chain {
            let k = self.index.get(c).ok_or_else(|| {
                Error::Internal(format!("cell {c:?} is not an allowable {}-cell", self.degree))
            })?;
            pairs.push((*k, v.clone()));
        }
        self.quotient
            .coordinates(&QVec::from_rational_pairs(pairs))
            .map_err(|_| Error::Internal("chain is not an allowable cycle".into()))
    }

    /// Matrix of the map induced by a model vertex map into `target`.
    pub fn pushforward(&self, target: &IhBasis, vmap: &[u32]) -> Result<QMatrix> {
        let cols = exec::map(&self.representatives(), |z| target.coordinates(&push_chain(z, vmap)));
        let cols = cols.into_iter().collect::<Result<Vec<_>>>()?;
        Ok(QMatrix::from_columns(&cols, target.dim()))
    }
}

/// Image of a chain under a model vertex map; collapsed cells vanish.
pub fn push_chain(z: &[(Simplex, BigRational)], vmap: &[u32]) -> Vec<(Simplex, BigRational)> {
    let mut acc: FxHashMap<Simplex, BigRational> = FxHashMap::default();
    let mut order = Vec::new();
    for (c, v) in z {
        let mut img: Simplex = c.iter().map(|&u| vmap[u as usize]).collect();
        let sign = sort_sign(&mut img);
        if sign == 0 {
            continue;
        }
        let v = if sign < 0 { -v.clone() } else { v.clone() };
        match acc.get_mut(&img) {
            Some(e) => *e += v,
            None => {
                order.push(img.clone());
                acc.insert(img, v);
            }
        }
    }
    order.into_iter().filter_map(|c| acc.remove(&c).map(|v| (c, v))).filter(|(_, v)| !num_traits::Zero::is_zero(v)).collect()
}

/// Matrices of `f_* : IH_i(X) → IH_i(Y)` for `i = 0..=dim X`, in the bases
/// of [`IhBasis`]. Both sides use the subdivided model unless both
/// filtrations are full.
pub fn induced_map_ih(
    f: &[u32],
    source: &FilteredComplex,
    target: &FilteredComplex,
    p: &Perversity,
) -> Result<Vec<QMatrix>> {
    let map = SimplicialMap::new(source.complex(), target.complex(), f.to_vec())?;
    let class = classify_simplicial(&map, source, target)?;
    if !class.placid {
        return Err(Error::NotPlacid("some stratum is sent to a stratum of larger codimension".into()));
    }
    let subdivide = !(source.is_full() && target.is_full());
    let ms = IhModel::with_subdivision(source, subdivide);
    let mt = IhModel::with_subdivision(target, subdivide);
    let vmap = ms.vertex_map(&map, &mt);
    (0..=source.complex().dim())
        .map(|i| {
            let bs = IhBasis::new(&ms, Some(p), i)?;
            let bt = IhBasis::new(&mt, Some(p), i)?;
            bs.pushforward(&bt, &vmap)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::SimplicialComplex;

    fn sphere2() -> SimplicialComplex {
        SimplicialComplex::from_index_facets(&[vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]]).unwrap()
    }

    fn torus() -> SimplicialComplex {
        let c = SimplicialComplex::from_index_facets(&[vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
        c.product(&c, &[0, 1, 2], &[0, 1, 2]).unwrap()
    }

    #[test]
    fn manifold_ih_is_homology() {
        let x = FilteredComplex::skeletal(&sphere2());
        let r = intersection_homology(&x, &Perversity::LowerMiddle).unwrap();
        assert!(r.subdivided);
        assert_eq!(r.betti, vec![1, 0, 1]);
    }

    #[test]
    fn suspended_torus() {
        let k = torus().suspension();
        let n = k.num_vertices() as u32;
        let x = FilteredComplex::point_filtration(&k, &[n - 2, n - 1]).unwrap();
        assert!(x.is_full());
        let r = intersection_homology(&x, &Perversity::LowerMiddle).unwrap();
        assert_eq!(r.betti, vec![1, 2, 0, 1]);
    }

    #[test]
    fn basis_dimensions_match_ranks() {
        let k = torus().suspension();
        let n = k.num_vertices() as u32;
        let x = FilteredComplex::point_filtration(&k, &[n - 2, n - 1]).unwrap();
        let m = IhModel::new(&x);
        for (i, b) in [1, 2, 0, 1].into_iter().enumerate() {
            assert_eq!(IhBasis::new(&m, Some(&Perversity::LowerMiddle), i).unwrap().dim(), b);
        }
    }

    #[test]
    fn identity_induces_identity() {
        let x = FilteredComplex::skeletal(&sphere2());
        let ms = induced_map_ih(&[0, 1, 2, 3], &x, &x, &Perversity::LowerMiddle).unwrap();
        for m in ms {
            assert_eq!(m, QMatrix::identity(m.rows()));
        }
    }
}

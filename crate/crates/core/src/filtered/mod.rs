//! Filtered complexes, strata, perversities and map classification.
//!
//! A filtration `X_0 ⊆ … ⊆ X_n = X` by subcomplexes is stored as a level per
//! simplex: the least `i` with `σ ∈ X_i`.

mod ih;

use rustc_hash::{FxHashMap, FxHashSet};

use crate::complex::{face, Simplex, SimplicialComplex, SimplicialMap, Subdivision};
use crate::error::{Error, Result};

pub use ih::{
    induced_map_ih, intersection_homology, intersection_homology_degrees, IhBasis, IhModel, IhReport,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilteredComplex {
    complex: SimplicialComplex,
    formal_dim: usize,
    levels: Vec<u32>,
}

impl FilteredComplex {
    /// `X_i` = `i`-skeleton.
    pub fn skeletal(k: &SimplicialComplex) -> Self {
        let levels = k.iter().map(|s| (s.len() - 1) as u32).collect();
        FilteredComplex { complex: k.clone(), formal_dim: k.dim(), levels }
    }

    /// From explicit per-simplex levels (indexed by global id).
    pub fn from_levels(k: &SimplicialComplex, formal_dim: usize, levels: Vec<u32>) -> Result<Self> {
        if levels.len() != k.total_simplices() {
            return Err(Error::InvalidFiltration("one level per simplex required".into()));
        }
        if levels.iter().any(|&l| l as usize > formal_dim) {
            return Err(Error::InvalidFiltration(format!("level above formal dimension {formal_dim}")));
        }
        if !levels.iter().any(|&l| l as usize == formal_dim) {
            return Err(Error::InvalidFiltration("X_{n-1} must differ from X".into()));
        }
        for (id, s) in k.iter().enumerate() {
            for i in 0..s.len() {
                if s.len() > 1 && levels[k.id_of(&face(s, i)).unwrap()] > levels[id] {
                    return Err(Error::InvalidFiltration(format!(
                        "{:?} lies in a smaller X_i than one of its faces",
                        k.labels_of(s)
                    )));
                }
            }
        }
        Ok(FilteredComplex { complex: k.clone(), formal_dim, levels })
    }

    /// From nested subcomplexes `X_0 ⊆ … ⊆ X_{n-1}` given by their simplices
    /// (faces are added); `X_n` is the whole complex.
    pub fn from_subcomplexes(k: &SimplicialComplex, subs: &[Vec<Simplex>]) -> Result<Self> {
        let n = subs.len();
        let mut closures: Vec<FxHashSet<usize>> = Vec::with_capacity(n);
        for sub in subs {
            let mut ids = FxHashSet::default();
            for s in sub {
                k.id_of(s).ok_or_else(|| Error::not_a_simplex(k, s))?;
                closure_ids(k, s, &mut ids);
            }
            closures.push(ids);
        }
        for i in 1..n {
            if !closures[i - 1].is_subset(&closures[i]) {
                return Err(Error::InvalidFiltration(format!("X_{} is not contained in X_{}", i - 1, i)));
            }
        }
        let mut levels = vec![n as u32; k.total_simplices()];
        for (i, ids) in closures.iter().enumerate().rev() {
            for &id in ids {
                levels[id] = i as u32;
            }
        }
        Self::from_levels(k, n, levels)
    }

    /// Filtration `V ⊂ X` with `V` a set of vertices in `X_0` and everything
    /// else at the top level (the suspension-point filtration when `V` are
    /// the apexes).
    pub fn point_filtration(k: &SimplicialComplex, points: &[u32]) -> Result<Self> {
        let n = k.dim();
        let subs: Vec<Vec<Simplex>> =
            (0..n).map(|_| points.iter().map(|&v| crate::complex::simplex([v])).collect()).collect();
        Self::from_subcomplexes(k, &subs)
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn formal_dim(&self) -> usize {
        self.formal_dim
    }

    pub fn levels(&self) -> &[u32] {
        &self.levels
    }

    pub fn level(&self, s: &[u32]) -> Option<u32> {
        self.complex.id_of(s).map(|id| self.levels[id])
    }

    pub fn vertex_level(&self, v: u32) -> u32 {
        self.levels[v as usize]
    }

    /// Every `X_i` is a full subcomplex: a simplex lies in `X_i` as soon as
    /// its vertices do.
    pub fn is_full(&self) -> bool {
        self.complex.iter().zip(&self.levels).all(|(s, &l)| s.iter().map(|&v| self.levels[v as usize]).max() == Some(l))
    }

    /// Barycentric subdivision with lifted levels: the vertex `{τ}` gets the
    /// level of `τ`. The result is always full.
    pub fn make_full(&self) -> (FilteredComplex, Subdivision) {
        let sd = self.complex.barycentric_subdivision();
        let k = &sd.complex;
        let levels = k
            .iter()
            .map(|chain| chain.iter().map(|&v| self.levels[v as usize]).max().unwrap())
            .collect();
        (FilteredComplex { complex: k.clone(), formal_dim: self.formal_dim, levels }, sd)
    }

    /// Connected components of `X_i − X_{i-1}` for every `i`, in increasing
    /// formal dimension.
    pub fn strata(&self) -> Vec<Stratum> {
        let k = &self.complex;
        let total = k.total_simplices();
        let mut parent: Vec<u32> = (0..total as u32).collect();
        fn find(p: &mut [u32], mut x: u32) -> u32 {
            while p[x as usize] != x {
                p[x as usize] = p[p[x as usize] as usize];
                x = p[x as usize];
            }
            x
        }
        for (id, s) in k.iter().enumerate() {
            if s.len() < 2 {
                continue;
            }
            for i in 0..s.len() {
                let f = k.id_of(&face(s, i)).unwrap();
                if self.levels[f] == self.levels[id] {
                    let (a, b) = (find(&mut parent, f as u32), find(&mut parent, id as u32));
                    if a != b {
                        parent[a.max(b) as usize] = a.min(b);
                    }
                }
            }
        }
        let mut groups: FxHashMap<u32, usize> = FxHashMap::default();
        let mut strata: Vec<Stratum> = Vec::new();
        for id in 0..total {
            let r = find(&mut parent, id as u32);
            let slot = *groups.entry(r).or_insert_with(|| {
                strata.push(Stratum {
                    simplices: Vec::new(),
                    formal_dim: self.levels[id] as usize,
                    codim: self.formal_dim - self.levels[id] as usize,
                });
                strata.len() - 1
            });
            strata[slot].simplices.push(id as u32);
        }
        strata.sort_by_key(|s| (s.formal_dim, s.simplices[0]));
        strata
    }

    /// Stratum index of every simplex.
    pub fn stratum_of(&self, strata: &[Stratum]) -> Vec<u32> {
        let mut out = vec![0; self.complex.total_simplices()];
        for (i, s) in strata.iter().enumerate() {
            for &id in &s.simplices {
                out[id as usize] = i as u32;
            }
        }
        out
    }

    /// Largest codimension of a stratum.
    pub fn max_codim(&self) -> usize {
        self.formal_dim - *self.levels.iter().min().unwrap_or(&0) as usize
    }
}

fn closure_ids(k: &SimplicialComplex, s: &[u32], out: &mut FxHashSet<usize>) {
    let n = s.len();
    for mask in 1..(1u32 << n) {
        let f: Simplex = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| s[i]).collect();
        out.insert(k.id_of(&f).unwrap());
    }
}

/// A connected component of `X_i − X_{i-1}`, as global simplex ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stratum {
    pub simplices: Vec<u32>,
    pub formal_dim: usize,
    pub codim: usize,
}

/// Goresky–MacPherson perversity, a function of the codimension `k ≥ 2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Perversity {
    Zero,
    LowerMiddle,
    UpperMiddle,
    Top,
    /// Values at codimensions `2, 3, …, values.len() + 1`.
    Custom(Vec<i64>),
}

impl Perversity {
    pub fn custom(values: Vec<i64>) -> Result<Self> {
        if values.first().is_some_and(|&v| v != 0) {
            return Err(Error::InvalidPerversity("p(2) must be 0".into()));
        }
        for w in values.windows(2) {
            if w[1] < w[0] || w[1] > w[0] + 1 {
                return Err(Error::InvalidPerversity(format!("growth violated: {values:?}")));
            }
        }
        Ok(Perversity::Custom(values))
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "m" | "lower" | "lower-middle" => Ok(Perversity::LowerMiddle),
            "n" | "upper" | "upper-middle" => Ok(Perversity::UpperMiddle),
            "0" | "zero" => Ok(Perversity::Zero),
            "t" | "top" => Ok(Perversity::Top),
            other => {
                let vals = other
                    .split(',')
                    .map(|x| x.trim().parse::<i64>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|_| Error::InvalidPerversity(format!("cannot parse {other:?}")))?;
                Perversity::custom(vals)
            }
        }
    }

    /// `p(k)` for `k ≥ 2`, `None` outside the domain of a custom perversity.
    pub fn value(&self, k: usize) -> Option<i64> {
        let k = k as i64;
        match self {
            Perversity::Zero => Some(0),
            Perversity::LowerMiddle => Some((k - 2).div_euclid(2)),
            Perversity::UpperMiddle => Some((k - 1).div_euclid(2)),
            Perversity::Top => Some(k - 2),
            Perversity::Custom(v) => v.get((k - 2) as usize).copied(),
        }
    }

    /// Checks that every codimension in `2..=max_codim` is covered.
    pub fn check_domain(&self, max_codim: usize) -> Result<()> {
        if let Perversity::Custom(v) = self {
            if max_codim >= 2 && v.len() + 1 < max_codim {
                return Err(Error::PerversityDomainError { have: v.len() + 1, need: max_codim });
            }
        }
        Ok(())
    }

    pub fn name(&self) -> String {
        match self {
            Perversity::Zero => "zero".into(),
            Perversity::LowerMiddle => "lower-middle".into(),
            Perversity::UpperMiddle => "upper-middle".into(),
            Perversity::Top => "top".into(),
            Perversity::Custom(v) => v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","),
        }
    }
}

/// Flags of a simplicial map between filtered complexes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapClassification {
    pub stratified: bool,
    pub equidimensionally_stratified: bool,
    pub cofiltered: bool,
    pub placid: bool,
    /// `f_*` on strata (indices into `source.strata()` / `target.strata()`)
    /// when stratified.
    pub stratum_image: Option<Vec<u32>>,
}

pub fn classify_map(f: &[u32], source: &FilteredComplex, target: &FilteredComplex) -> Result<MapClassification> {
    let map = SimplicialMap::new(source.complex(), target.complex(), f.to_vec())?;
    classify_simplicial(&map, source, target)
}

pub fn classify_simplicial(
    map: &SimplicialMap,
    source: &FilteredComplex,
    target: &FilteredComplex,
) -> Result<MapClassification> {
    let (n, m) = (source.formal_dim as i64, target.formal_dim as i64);
    let s_strata = source.strata();
    let t_strata = target.strata();
    let t_of = target.stratum_of(&t_strata);
    let mut image: Vec<Option<u32>> = vec![None; s_strata.len()];
    let mut stratified = true;
    let mut cofiltered = true;
    let mut equidim = true;
    let k = source.complex();
    for (si, st) in s_strata.iter().enumerate() {
        for &id in &st.simplices {
            let s = k.simplex_by_id(id as usize);
            let img = map.image(s);
            let tid = target.complex().id_of(&img).expect("simplicial");
            let t = t_of[tid];
            match image[si] {
                None => image[si] = Some(t),
                Some(prev) if prev != t => stratified = false,
                _ => {}
            }
            let (ls, lt) = (source.levels[id as usize] as i64, target.levels[tid] as i64);
            if n - ls < m - lt {
                cofiltered = false;
            }
            if ls != lt {
                equidim = false;
            }
        }
    }
    let placid = stratified
        && s_strata
            .iter()
            .zip(&image)
            .all(|(s, t)| t_strata[t.unwrap() as usize].codim <= s.codim);
    Ok(MapClassification {
        stratified,
        equidimensionally_stratified: stratified && equidim,
        cofiltered,
        placid,
        stratum_image: stratified.then(|| image.into_iter().map(|t| t.unwrap()).collect()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sphere2() -> SimplicialComplex {
        SimplicialComplex::from_index_facets(&[vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]]).unwrap()
    }

    #[test]
    fn skeletal_strata_are_open_simplices() {
        let x = FilteredComplex::skeletal(&sphere2());
        assert_eq!(x.strata().len(), 14);
        assert!(!x.is_full());
        let (y, _) = x.make_full();
        assert!(y.is_full());
    }

    #[test]
    fn single_vertex() {
        let k = SimplicialComplex::from_index_facets(&[vec![0]]).unwrap();
        let x = FilteredComplex::skeletal(&k);
        assert_eq!(x.formal_dim(), 0);
        assert_eq!(x.strata().len(), 1);
    }

    #[test]
    fn perversities() {
        assert_eq!(Perversity::LowerMiddle.value(2), Some(0));
        assert_eq!(Perversity::LowerMiddle.value(5), Some(1));
        assert_eq!(Perversity::UpperMiddle.value(5), Some(2));
        assert!(Perversity::custom(vec![1]).is_err());
        assert!(Perversity::custom(vec![0, 2]).is_err());
        let p = Perversity::custom(vec![0, 0]).unwrap();
        assert!(matches!(p.check_domain(4), Err(Error::PerversityDomainError { have: 3, need: 4 })));
    }

    #[test]
    fn vertex_into_edge_is_stratified_but_not_placid() {
        let pt = SimplicialComplex::from_index_facets(&[vec![0]]).unwrap();
        let e = SimplicialComplex::from_index_facets(&[vec![0, 1]]).unwrap();
        let c = classify_map(&[0], &FilteredComplex::skeletal(&pt), &FilteredComplex::skeletal(&e)).unwrap();
        assert!(c.stratified);
        assert!(!c.placid);
        assert!(!c.cofiltered);
    }

    #[test]
    fn identity_has_every_flag() {
        let x = FilteredComplex::skeletal(&sphere2());
        let c = classify_map(&[0, 1, 2, 3], &x, &x).unwrap();
        assert!(c.stratified && c.equidimensionally_stratified && c.cofiltered && c.placid);
    }
}

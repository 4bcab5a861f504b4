use crate::action::GroupAction;
use crate::complex::{Simplex, SimplicialComplex, SimplicialMap};
use crate::error::{Error, Result};

/// A finite-to-one simplicial surjection with multiplicities on open
/// simplices whose fibre sums are constant.
#[derive(Debug, Clone)]
pub struct RamifiedCoverData {
    pub source: SimplicialComplex,
    pub base: SimplicialComplex,
    pub projection: SimplicialMap,
    /// Multiplicity of the points of each open source simplex, by global id.
    pub multiplicity: Vec<u32>,
    pub degree: usize,
}

impl RamifiedCoverData {
    /// Validates surjectivity, dimension preservation and the fibre sums.
    pub fn new(
        source: SimplicialComplex,
        base: SimplicialComplex,
        projection: SimplicialMap,
        multiplicity: Vec<u32>,
        degree: usize,
    ) -> Result<Self> {
        if multiplicity.len() != source.total_simplices() || multiplicity.contains(&0) {
            return Err(Error::NotRamified("one positive multiplicity per source simplex is required".into()));
        }
        let cover = RamifiedCoverData { source, base, projection, multiplicity, degree };
        cover.check_fibre_sums()?;
        Ok(cover)
    }

    /// `Σ μ` over the open simplices above each base simplex.
    pub fn fibre_sums(&self) -> Result<Vec<usize>> {
        let mut sums = vec![0usize; self.base.total_simplices()];
        for (id, s) in self.source.iter().enumerate() {
            let img = self.projection.image(s);
            if img.len() != s.len() {
                return Err(Error::NotRamified(format!("{:?} collapses", self.source.labels_of(s))));
            }
            let b = self.base.id_of(&img).ok_or_else(|| Error::NotRamified("image is not a base simplex".into()))?;
            sums[b] += self.multiplicity[id] as usize;
        }
        Ok(sums)
    }

    fn check_fibre_sums(&self) -> Result<()> {
        let sums = self.fibre_sums()?;
        if let Some((b, s)) = sums.iter().enumerate().find(|(_, &s)| s != self.degree) {
            return Err(Error::NotRamified(format!(
                "fibre over {:?} has total multiplicity {s}, expected {}",
                self.base.labels_of(self.base.simplex_by_id(b)),
                self.degree
            )));
        }
        Ok(())
    }

    /// Source simplices mapping onto `delta` with the same dimension.
    pub fn preimage(&self, delta: &[u32]) -> Result<Vec<Simplex>> {
        let delta = crate::complex::simplex(delta.iter().copied());
        if delta.is_empty() || !self.base.contains(&delta) {
            return Err(Error::not_a_simplex(&self.base, &delta));
        }
        Ok(self.source.simplices(delta.len() - 1).iter().filter(|s| self.projection.image(s) == delta).cloned().collect())
    }

    /// Multiplicity at a vertex of the source.
    pub fn vertex_multiplicity(&self, v: u32) -> u32 {
        self.multiplicity[v as usize]
    }

    /// The suspended covering: suspension points map to suspension points
    /// with multiplicity `d`, and the open cone on a simplex inherits the
    /// multiplicity of the simplex.
    pub fn suspend(&self) -> Result<RamifiedCoverData> {
        let source = self.source.suspension();
        let base = self.base.suspension();
        let (ns, nb) = (self.source.num_vertices() as u32, self.base.num_vertices() as u32);
        let mut vmap = self.projection.vertex_map().to_vec();
        vmap.extend([nb, nb + 1]);
        let projection = SimplicialMap::new(&source, &base, vmap)?;
        let multiplicity = source
            .iter()
            .map(|s| {
                let inner: Simplex = s.iter().copied().filter(|&v| v < ns).collect();
                if inner.is_empty() {
                    self.degree as u32
                } else {
                    self.multiplicity[self.source.id_of(&inner).expect("face of the base")]
                }
            })
            .collect();
        RamifiedCoverData::new(source, base, projection, multiplicity, self.degree)
    }
}

/// The orbit projection of a regular action as a `|G|`-fold ramified
/// covering with `μ = |G_x|`.
pub fn ramified_structure(action: &GroupAction) -> Result<RamifiedCoverData> {
    let orbit = action.orbit_complex()?;
    RamifiedCoverData::new(
        action.complex().clone(),
        orbit.quotient,
        orbit.projection,
        orbit.multiplicity,
        orbit.degree,
    )
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkCoverVerdict {
    pub base_link_dim: i64,
    /// Each preimage of `delta` with the dimension of its link.
    pub preimages: Vec<(Simplex, i64)>,
    pub fibre_sum: usize,
    pub failures: Vec<String>,
}

impl LinkCoverVerdict {
    pub fn passes(&self) -> bool {
        self.failures.is_empty()
    }
}

fn link_dim(k: &SimplicialComplex, s: &[u32]) -> Result<i64> {
    let l = k.link(s)?;
    Ok(if l.is_empty() { -1 } else { l.dim() as i64 })
}

/// Restricting the covering to links: every preimage of `delta` has a link
/// of the same dimension as the link of `delta`, and the fibre over the open
/// simplex sums to the degree.
pub fn link_cover_check(cover: &RamifiedCoverData, delta: &[u32]) -> Result<LinkCoverVerdict> {
    let pre = cover.preimage(delta)?;
    let base_link_dim = link_dim(&cover.base, delta)?;
    let mut failures = Vec::new();
    let mut preimages = Vec::new();
    let mut fibre_sum = 0;
    for s in pre {
        let d = link_dim(&cover.source, &s)?;
        if d != base_link_dim {
            failures.push(format!("link of {:?} has dimension {d}, base link has {base_link_dim}", cover.source.labels_of(&s)));
        }
        let id = cover.source.id_of(&s).expect("source simplex");
        fibre_sum += cover.multiplicity[id] as usize;
        preimages.push((s, d));
    }
    if fibre_sum != cover.degree {
        failures.push(format!("fibre sum {fibre_sum} differs from degree {}", cover.degree));
    }
    Ok(LinkCoverVerdict { base_link_dim, preimages, fibre_sum, failures })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn swap_of_circles_is_an_unramified_double_cover() {
        let c = catalog::disjoint_copies("c", &catalog::sphere(1), 2);
        let cover = ramified_structure(&c.action).unwrap();
        assert_eq!(cover.degree, 2);
        assert!(cover.multiplicity.iter().all(|&m| m == 1));
        let v = link_cover_check(&cover, &[0]).unwrap();
        assert!(v.passes());
        assert_eq!(v.preimages.len(), 2);
        assert!(v.preimages.iter().all(|(_, d)| *d == 0));
    }

    #[test]
    fn octahedron_cover_and_its_suspension() {
        let (reg, _) = catalog::octahedron_rotation().action.regularize(2).unwrap();
        let cover = ramified_structure(&reg).unwrap();
        assert_eq!(cover.degree, 4);
        let poles: Vec<u32> = (0..reg.complex().num_vertices() as u32).filter(|&v| cover.vertex_multiplicity(v) == 4).collect();
        assert_eq!(poles.len(), 2);
        assert!(cover.multiplicity.iter().all(|&m| m == 1 || m == 4));
        let s = cover.suspend().unwrap();
        let nv = cover.source.num_vertices() as u32;
        assert_eq!((s.vertex_multiplicity(nv), s.vertex_multiplicity(nv + 1)), (4, 4));
        // an edge of the quotient away from the pole orbits
        let pole_images: Vec<u32> = poles.iter().map(|&p| cover.projection.apply(p)).collect();
        let edge = cover
            .base
            .simplices(1)
            .iter()
            .find(|e| e.iter().all(|v| !pole_images.contains(v)))
            .unwrap()
            .clone();
        let v = link_cover_check(&cover, &edge).unwrap();
        assert!(v.passes());
        assert_eq!(v.preimages.len(), 4);
        assert!(v.preimages.iter().all(|(_, d)| *d == 0));
    }

    #[test]
    fn bad_multiplicities_are_rejected() {
        let c = catalog::disjoint_copies("c", &catalog::sphere(1), 2);
        let cover = ramified_structure(&c.action).unwrap();
        let mut m = cover.multiplicity.clone();
        m[0] = 2;
        let r = RamifiedCoverData::new(cover.source, cover.base, cover.projection, m, 2);
        assert!(matches!(r, Err(Error::NotRamified(_))));
    }
}

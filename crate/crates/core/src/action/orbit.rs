use num_rational::BigRational;
use num_traits::Signed;

use super::GroupAction;
use crate::complex::{fundamental_class, Orientation, Simplex, SimplicialComplex, SimplicialMap};
use crate::error::{Error, Result};

/// Quotient of a regular action together with the orbit projection.
#[derive(Debug, Clone)]
pub struct OrbitComplexData {
    pub quotient: SimplicialComplex,
    pub projection: SimplicialMap,
    /// Order of the stabilizer of each source simplex, by global id.
    pub multiplicity: Vec<u32>,
    /// `|G|`.
    pub degree: usize,
    /// Whether regularity was confirmed by the brute-force search.
    pub regularity_verified: bool,
}

impl GroupAction {
    /// Vertices are orbits (labelled by their smallest member), simplices are
    /// images of simplices.
    pub fn orbit_complex(&self) -> Result<OrbitComplexData> {
        let k = self.complex();
        let verified = self.regularity_decidable();
        if verified {
            if self.regularity_violation().is_some() {
                return Err(Error::NotRegular);
            }
        } else if self.adjacent_translate().is_some() {
            return Err(Error::NotRegular);
        }
        let n = k.num_vertices();
        let mut orbit_id = vec![u32::MAX; n];
        let mut labels = Vec::new();
        for v in 0..n as u32 {
            if orbit_id[v as usize] != u32::MAX {
                continue;
            }
            let id = labels.len() as u32;
            for w in self.orbit(v) {
                orbit_id[w as usize] = id;
            }
            labels.push(k.label(v).to_string());
        }
        let proj = SimplicialMap::unchecked(orbit_id);
        let facets: Vec<Simplex> = k.facets().iter().map(|s| proj.image(s)).collect();
        if k.facets().iter().zip(&facets).any(|(s, t)| s.len() != t.len()) {
            return Err(Error::NotRegular);
        }
        let quotient = SimplicialComplex::new(labels, facets)?;
        let multiplicity = k.iter().map(|s| self.stabilizer(s).len() as u32).collect();
        Ok(OrbitComplexData {
            quotient,
            projection: proj,
            multiplicity,
            degree: self.group().order(),
            regularity_verified: verified,
        })
    }

    /// Orientation of the orbit complex by propagation, with the sign of each
    /// component chosen to agree with the pushforward of `orientation`.
    pub fn orbit_orientation(&self, data: &OrbitComplexData, orientation: &Orientation) -> Result<Orientation> {
        let k = self.complex();
        if orientation.dim() != k.dim() || !orientation.is_coherent(k) {
            return Err(Error::NotOriented);
        }
        let q = &data.quotient;
        let mut o = fundamental_class(q)?;
        let n = q.dim();
        let pushed = data.projection.push(&orientation.to_chain(k));
        let tops = q.simplices(n);
        let mut signs = o.signs().to_vec();
        for comp in q.components() {
            let Some(t) = tops.iter().position(|s| comp.binary_search(&s[0]).is_ok()) else { continue };
            let c: BigRational = pushed.coefficient(&tops[t]);
            if c == BigRational::from_integer(0.into()) {
                return Err(Error::NotOriented);
            }
            if c.is_negative() != (o.sign(t) < 0) {
                for (i, s) in tops.iter().enumerate() {
                    if comp.binary_search(&s[0]).is_ok() {
                        signs[i] = -signs[i];
                    }
                }
            }
        }
        o = Orientation::from_signs(n, signs);
        Ok(o)
    }
}

impl OrbitComplexData {
    /// Source simplices whose open interiors map onto the open simplex `delta`.
    pub fn preimage_open_simplex(&self, source: &SimplicialComplex, delta: &[u32]) -> Result<Vec<Simplex>> {
        let delta: Simplex = crate::complex::simplex(delta.iter().copied());
        if delta.is_empty() || !self.quotient.contains(&delta) {
            return Err(Error::not_a_simplex(&self.quotient, &delta));
        }
        let d = delta.len() - 1;
        if d > source.dim() {
            return Ok(Vec::new());
        }
        Ok(source.simplices(d).iter().filter(|s| self.projection.image(s) == delta).cloned().collect())
    }

    pub fn multiplicity_of(&self, source: &SimplicialComplex, s: &[u32]) -> Option<u32> {
        source.id_of(s).map(|i| self.multiplicity[i])
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PseudomanifoldReport {
    pub dim: usize,
    pub pm1: bool,
    pub pm2: bool,
    /// Maximal simplices of dimension below the top.
    pub pm1_violations: Vec<Simplex>,
    /// Codimension-one simplices with a coface count other than two.
    pub pm2_violations: Vec<(Simplex, usize)>,
    pub orientable: bool,
    pub orientation: Option<Orientation>,
}

impl PseudomanifoldReport {
    pub fn is_pseudomanifold(&self) -> bool {
        self.pm1 && self.pm2
    }
}

pub fn check_pseudomanifold(k: &SimplicialComplex) -> PseudomanifoldReport {
    let n = k.dim();
    let pm1_violations: Vec<Simplex> = k.facets().into_iter().filter(|s| s.len() != n + 1).collect();
    let mut pm2_violations = Vec::new();
    if n > 0 {
        let ridges = k.simplices(n - 1);
        for (r, c) in k.ridge_cofaces().iter().enumerate() {
            if c.len() != 2 {
                pm2_violations.push((ridges[r].clone(), c.len()));
            }
        }
    }
    let pm1 = !k.is_empty() && pm1_violations.is_empty();
    let pm2 = pm2_violations.is_empty();
    let orientation = if pm1 && pm2 { fundamental_class(k).ok() } else { None };
    PseudomanifoldReport { dim: n, pm1, pm2, pm1_violations, pm2_violations, orientable: orientation.is_some(), orientation }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{homology, Ring};

    fn two_circles() -> SimplicialComplex {
        SimplicialComplex::from_index_facets(&[vec![0, 1], vec![1, 2], vec![0, 2], vec![3, 4], vec![4, 5], vec![3, 5]])
            .unwrap()
    }

    #[test]
    fn swap_quotient_is_a_circle() {
        let a = GroupAction::from_permutations(two_circles(), &[vec![3, 4, 5, 0, 1, 2]]).unwrap();
        let q = a.orbit_complex().unwrap();
        assert_eq!(q.quotient.f_vector(), vec![3, 3]);
        assert!(q.multiplicity.iter().all(|&m| m == 1));
        let pre = q.preimage_open_simplex(a.complex(), &[0, 1]).unwrap();
        assert_eq!(pre.len(), 2);
    }

    #[test]
    fn rotation_quotient_is_a_sphere() {
        let mut f = Vec::new();
        for i in 0..4u32 {
            for p in [4, 5] {
                f.push(vec![i, (i + 1) % 4, p]);
            }
        }
        let k = SimplicialComplex::from_index_facets(&f).unwrap();
        let a = GroupAction::from_permutations(k, &[vec![1, 2, 3, 0, 4, 5]]).unwrap();
        assert!(matches!(a.orbit_complex(), Err(Error::NotRegular)));
        let (r, _) = a.regularize(2).unwrap();
        let q = r.orbit_complex().unwrap();
        assert_eq!(homology(&q.quotient, Ring::Rationals).betti, vec![1, 0, 1]);
        let top = q.quotient.simplices(2)[0].clone();
        assert_eq!(q.preimage_open_simplex(r.complex(), &top).unwrap().len(), 4);
        assert_eq!(q.multiplicity.iter().filter(|&&m| m == 4).count(), 2);
        let o = r.orientation().unwrap();
        let qo = r.orbit_orientation(&q, &o).unwrap();
        assert!(qo.is_coherent(&q.quotient));
        assert!(check_pseudomanifold(&q.quotient).is_pseudomanifold());
    }

    #[test]
    fn trivial_quotient_is_the_source() {
        let a = GroupAction::trivial(two_circles()).unwrap();
        let q = a.orbit_complex().unwrap();
        assert_eq!(q.quotient, two_circles());
        assert_eq!(q.preimage_open_simplex(a.complex(), &[3, 4]).unwrap().len(), 1);
    }

    #[test]
    fn pseudomanifold_witnesses() {
        let s3 = SimplicialComplex::from_index_facets(&[
            vec![0, 1, 2, 3],
            vec![0, 1, 2, 4],
            vec![0, 1, 3, 4],
            vec![0, 2, 3, 4],
            vec![1, 2, 3, 4],
        ])
        .unwrap();
        let r = check_pseudomanifold(&s3);
        assert!(r.pm1 && r.pm2 && r.orientable);
        let dangling = SimplicialComplex::from_index_facets(&[vec![0, 1, 2], vec![2, 3]]).unwrap();
        let r = check_pseudomanifold(&dangling);
        assert!(!r.pm1);
        assert_eq!(r.pm1_violations, vec![crate::complex::simplex([2, 3])]);
        let book = SimplicialComplex::from_index_facets(&[vec![0, 1, 2], vec![0, 1, 3], vec![0, 1, 4]]).unwrap();
        let r = check_pseudomanifold(&book);
        assert!(r.pm2_violations.iter().any(|(s, c)| s[..] == [0, 1] && *c == 3));
    }
}

//! Finite groups acting on simplicial complexes by simplicial automorphisms.

mod group;
mod orbit;

use std::collections::VecDeque;

use crate::complex::{fundamental_class, Orientation, Simplex, SimplicialComplex};
use crate::error::{Error, Result};
use crate::exec;

pub use group::FiniteGroup;
pub use orbit::{OrbitComplexData, PseudomanifoldReport, check_pseudomanifold};

/// Regularity is decided by brute force only below these sizes; larger inputs
/// are subdivided twice without checking.
pub const REGULARITY_MAX_GROUP: usize = 16;
pub const REGULARITY_MAX_SIMPLICES: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupAction {
    group: FiniteGroup,
    complex: SimplicialComplex,
    /// `perms[g][v]` is the image of vertex `v` under element `g`.
    perms: Vec<Vec<u32>>,
}

/// A failure of the regularity condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Irregularity {
    /// `v` and `g v ≠ v` span an edge.
    AdjacentTranslate { g: u32, v: u32 },
    /// Elements of `subgroup` move the vertices of `simplex` onto `image`
    /// one by one, but no single element of `subgroup` does.
    NoCommonElement { subgroup: Vec<u32>, simplex: Simplex, image: Vec<u32> },
}

impl GroupAction {
    /// Extend the generator permutations to the whole group along the
    /// multiplication table and check every element is a simplicial
    /// automorphism.
    pub fn validate(group: FiniteGroup, complex: SimplicialComplex, generators: &[(u32, Vec<u32>)]) -> Result<Self> {
        let n = complex.num_vertices();
        let order = group.order();
        for (g, p) in generators {
            if *g as usize >= order {
                return Err(Error::BadElement(g.to_string()));
            }
            if p.len() != n {
                return Err(Error::NotSimplicialAction(format!(
                    "generator {} permutes {} of {} vertices",
                    group.label(*g),
                    p.len(),
                    n
                )));
            }
        }
        let mut perms: Vec<Option<Vec<u32>>> = vec![None; order];
        perms[group.identity() as usize] = Some((0..n as u32).collect());
        let mut queue = VecDeque::from([group.identity()]);
        while let Some(a) = queue.pop_front() {
            for (g, pg) in generators {
                let ga = group.mul(*g, a);
                let pa = perms[a as usize].as_ref().unwrap();
                let p: Vec<u32> = pa.iter().map(|&x| pg[x as usize]).collect();
                match &perms[ga as usize] {
                    Some(q) if *q != p => {
                        return Err(Error::BadGroup(format!(
                            "generator permutations disagree with the table at {}",
                            group.label(ga)
                        )))
                    }
                    Some(_) => {}
                    None => {
                        perms[ga as usize] = Some(p);
                        queue.push_back(ga);
                    }
                }
            }
        }
        if perms.iter().any(Option::is_none) {
            return Err(Error::BadGroup("generators do not generate the group".into()));
        }
        let perms: Vec<Vec<u32>> = perms.into_iter().map(Option::unwrap).collect();
        for (g, p) in perms.iter().enumerate() {
            let mut seen = vec![false; n];
            for &x in p {
                if x as usize >= n || std::mem::replace(&mut seen[x as usize], true) {
                    return Err(Error::NotSimplicialAction(format!("{} is not a bijection", group.label(g as u32))));
                }
            }
        }
        for a in group.elements() {
            for b in group.elements() {
                let pa = &perms[a as usize];
                let composed: Vec<u32> = perms[b as usize].iter().map(|&x| pa[x as usize]).collect();
                if composed != perms[group.mul(a, b) as usize] {
                    return Err(Error::BadGroup(format!(
                        "perm({}·{}) differs from the composite",
                        group.label(a),
                        group.label(b)
                    )));
                }
            }
        }
        let action = GroupAction { group, complex, perms };
        let bad = exec::map_range(order, |g| {
            action.complex.iter().find(|s| !action.complex.contains(&action.image(g as u32, s))).cloned().map(|s| (g, s))
        });
        if let Some((g, s)) = bad.into_iter().flatten().next() {
            return Err(Error::NotSimplicialAction(format!(
                "{} sends {:?} outside the complex",
                action.group.label(g as u32),
                action.complex.labels_of(&s)
            )));
        }
        Ok(action)
    }

    /// The group generated by vertex permutations, acting on `complex`.
    pub fn from_permutations(complex: SimplicialComplex, generators: &[Vec<u32>]) -> Result<Self> {
        if generators.is_empty() {
            return Self::trivial(complex);
        }
        let (group, perms) = FiniteGroup::generated_by_permutations(generators)?;
        let gens: Vec<(u32, Vec<u32>)> = perms.into_iter().enumerate().map(|(i, p)| (i as u32, p)).collect();
        Self::validate(group, complex, &gens)
    }

    pub fn trivial(complex: SimplicialComplex) -> Result<Self> {
        Self::validate(FiniteGroup::cyclic(1), complex, &[])
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn permutation(&self, g: u32) -> &[u32] {
        &self.perms[g as usize]
    }

    pub fn permutations(&self) -> &[Vec<u32>] {
        &self.perms
    }

    pub fn apply(&self, g: u32, v: u32) -> u32 {
        self.perms[g as usize][v as usize]
    }

    pub fn image(&self, g: u32, s: &[u32]) -> Simplex {
        crate::complex::simplex(s.iter().map(|&v| self.apply(g, v)))
    }

    /// Elements fixing every vertex of `s`.
    pub fn stabilizer(&self, s: &[u32]) -> Vec<u32> {
        self.group.elements().filter(|&g| s.iter().all(|&v| self.apply(g, v) == v)).collect()
    }

    pub fn orbit(&self, v: u32) -> Vec<u32> {
        let mut o: Vec<u32> = self.group.elements().map(|g| self.apply(g, v)).collect();
        o.sort_unstable();
        o.dedup();
        o
    }

    /// The induced action on the barycentric subdivision, whose vertex `t` is
    /// the simplex with global id `t`.
    pub fn subdivide(&self) -> GroupAction {
        let sd = self.complex.barycentric_subdivision();
        let perms = exec::map(&self.perms, |p| {
            self.complex
                .iter()
                .map(|s| {
                    let img = crate::complex::simplex(s.iter().map(|&v| p[v as usize]));
                    self.complex.id_of(&img).expect("simplicial") as u32
                })
                .collect()
        });
        GroupAction { group: self.group.clone(), complex: sd.complex, perms }
    }

    /// Whether the brute-force regularity search is affordable.
    pub fn regularity_decidable(&self) -> bool {
        self.group.order() <= REGULARITY_MAX_GROUP && self.complex.total_simplices() <= REGULARITY_MAX_SIMPLICES
    }

    /// Whether some `g v ≠ v` is adjacent to `v`.
    pub fn adjacent_translate(&self) -> Option<Irregularity> {
        for g in self.group.elements() {
            for e in self.complex.simplices(1) {
                let (a, b) = (e[0], e[1]);
                for (v, w) in [(a, b), (b, a)] {
                    if self.apply(g, v) == w {
                        return Some(Irregularity::AdjacentTranslate { g, v });
                    }
                }
            }
        }
        None
    }

    /// First violation of regularity: for each subgroup `H`, if `(v_i)` and
    /// `(g_i v_i)` with `g_i ∈ H` are both simplices, one `g ∈ H` must do the
    /// job of all the `g_i`. Vertices of the tuples need not be distinct; that
    /// case reduces to [`Irregularity::AdjacentTranslate`].
    pub fn regularity_violation(&self) -> Option<Irregularity> {
        if let Some(v) = self.adjacent_translate() {
            return Some(v);
        }
        let simplices: Vec<&Simplex> = self.complex.iter().filter(|s| s.len() > 1).collect();
        for h in self.group.subgroups() {
            if h.len() == 1 {
                continue;
            }
            let orbits: Vec<Vec<u32>> = (0..self.complex.num_vertices() as u32)
                .map(|v| {
                    let mut o: Vec<u32> = h.iter().map(|&g| self.apply(g, v)).collect();
                    o.sort_unstable();
                    o.dedup();
                    o
                })
                .collect();
            let found = exec::map(&simplices, |s| self.search_tuple(&h, &orbits, s));
            if let Some((s, image)) = found.into_iter().flatten().next() {
                return Some(Irregularity::NoCommonElement { subgroup: h, simplex: s, image });
            }
        }
        None
    }

    fn search_tuple(&self, h: &[u32], orbits: &[Vec<u32>], s: &Simplex) -> Option<(Simplex, Vec<u32>)> {
        let mut image: Vec<u32> = Vec::with_capacity(s.len());
        let mut witness = None;
        self.extend_tuple(h, orbits, s, &mut image, &mut witness);
        witness.map(|w| (s.clone(), w))
    }

    fn extend_tuple(
        &self,
        h: &[u32],
        orbits: &[Vec<u32>],
        s: &Simplex,
        image: &mut Vec<u32>,
        witness: &mut Option<Vec<u32>>,
    ) {
        if witness.is_some() {
            return;
        }
        let i = image.len();
        if i == s.len() {
            let realized = h.iter().any(|&g| s.iter().zip(image.iter()).all(|(&v, &w)| self.apply(g, v) == w));
            if !realized {
                *witness = Some(image.clone());
            }
            return;
        }
        for &w in &orbits[s[i] as usize] {
            if image.contains(&w) {
                continue;
            }
            image.push(w);
            if self.complex.contains(&crate::complex::simplex(image.iter().copied())) {
                self.extend_tuple(h, orbits, s, image, witness);
            }
            image.pop();
        }
    }

    pub fn is_regular(&self) -> bool {
        self.regularity_violation().is_none()
    }

    /// Subdivide until regular, at most `max_subdivisions` times. Inputs
    /// beyond the brute-force bounds get two subdivisions unconditionally.
    pub fn regularize(&self, max_subdivisions: usize) -> Result<(GroupAction, usize)> {
        let mut current = self.clone();
        if !current.regularity_decidable() {
            for _ in 0..max_subdivisions.min(2) {
                current = current.subdivide();
            }
            return Ok((current, max_subdivisions.min(2)));
        }
        for count in 0..=max_subdivisions.min(2) {
            if count > 0 {
                current = current.subdivide();
                if !current.regularity_decidable() {
                    if count < 2 && max_subdivisions >= 2 {
                        current = current.subdivide();
                        return Ok((current, 2));
                    }
                    return Ok((current, count));
                }
            }
            if current.is_regular() {
                return Ok((current, count));
            }
        }
        if max_subdivisions >= 2 {
            Err(Error::Internal("action is still irregular after two barycentric subdivisions".into()))
        } else {
            Err(Error::NotRegular)
        }
    }

    /// [`regularize`](Self::regularize), carrying an orientation along.
    pub fn regularize_oriented(
        &self,
        max_subdivisions: usize,
        orientation: &Orientation,
    ) -> Result<(GroupAction, Orientation, usize)> {
        let (_, count) = self.regularize(max_subdivisions)?;
        let mut current = self.clone();
        let mut o = orientation.clone();
        for _ in 0..count {
            let next = current.subdivide();
            o = o.subdivided(&current.complex, &next.complex);
            current = next;
        }
        Ok((current, o, count))
    }

    /// Simplices fixed vertex by vertex by `g`.
    pub fn fixed_subcomplex(&self, g: u32) -> Result<SimplicialComplex> {
        if g as usize >= self.group.order() {
            return Err(Error::BadElement(g.to_string()));
        }
        Ok(self.complex.subcomplex(|s| s.iter().all(|&v| self.apply(g, v) == v)))
    }

    /// No element other than the identity fixes a point.
    pub fn is_free(&self) -> Result<bool> {
        let has_fixed_vertex = |a: &GroupAction| {
            a.group.elements().any(|g| g != a.group.identity() && (0..a.complex.num_vertices() as u32).any(|v| a.apply(g, v) == v))
        };
        if has_fixed_vertex(self) {
            return Ok(false);
        }
        if self.regularity_decidable() && self.is_regular() {
            return Ok(true);
        }
        // a fixed point in an open simplex becomes a fixed vertex once regular
        let (reg, _) = self.regularize(2)?;
        Ok(!has_fixed_vertex(&reg))
    }

    /// Per element: whether it sends the fundamental cycle to itself.
    pub fn is_orientation_preserving(&self, orientation: &Orientation) -> Result<Vec<bool>> {
        let k = &self.complex;
        let n = k.dim();
        if orientation.dim() != n || !orientation.is_coherent(k) {
            return Err(Error::NotOriented);
        }
        let tops = k.simplices(n);
        Ok(self
            .group
            .elements()
            .map(|g| {
                tops.iter().enumerate().all(|(i, s)| {
                    let mut t: Vec<u32> = s.iter().map(|&v| self.apply(g, v)).collect();
                    let sign = crate::complex::chain::sort_sign(&mut t);
                    let j = tops.get_index_of(&t[..]).expect("simplicial");
                    sign * orientation.sign(i) == orientation.sign(j)
                })
            })
            .collect())
    }

    /// Orientation of the complex, by propagation.
    pub fn orientation(&self) -> Result<Orientation> {
        fundamental_class(&self.complex)
    }
}

/// Convenience wrapper matching the element-keyed generator form.
pub fn validate_action(
    group: FiniteGroup,
    complex: SimplicialComplex,
    generators: &[(u32, Vec<u32>)],
) -> Result<GroupAction> {
    GroupAction::validate(group, complex, generators)
}

/// Whether `v` and `w` lie in a common simplex.
pub fn adjacent(k: &SimplicialComplex, v: u32, w: u32) -> bool {
    v == w || k.contains(&crate::complex::simplex([v, w]))
}


#[cfg(test)]
mod tests {
    use super::*;

    fn octahedron() -> SimplicialComplex {
        // equator 0..4, poles 4 and 5
        let mut f = Vec::new();
        for i in 0..4u32 {
            for p in [4, 5] {
                f.push(vec![i, (i + 1) % 4, p]);
            }
        }
        SimplicialComplex::from_index_facets(&f).unwrap()
    }

    fn rotation() -> GroupAction {
        GroupAction::from_permutations(octahedron(), &[vec![1, 2, 3, 0, 4, 5]]).unwrap()
    }

    fn two_circles() -> SimplicialComplex {
        SimplicialComplex::from_index_facets(&[vec![0, 1], vec![1, 2], vec![0, 2], vec![3, 4], vec![4, 5], vec![3, 5]])
            .unwrap()
    }

    #[test]
    fn four_gon_rotation_is_valid() {
        let c = SimplicialComplex::from_index_facets(&[vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]]).unwrap();
        let a = validate_action(FiniteGroup::cyclic(4), c, &[(1, vec![1, 2, 3, 0])]).unwrap();
        assert_eq!(a.permutation(2), &[2, 3, 0, 1]);
    }

    #[test]
    fn non_simplicial_map_is_rejected() {
        let c = SimplicialComplex::from_index_facets(&[vec![0, 1], vec![1, 2]]).unwrap();
        let r = validate_action(FiniteGroup::cyclic(2), c, &[(1, vec![2, 1, 0])]);
        assert!(r.is_ok());
        let c = SimplicialComplex::from_index_facets(&[vec![0, 1, 2], vec![2, 3], vec![3, 4]]).unwrap();
        let r = validate_action(FiniteGroup::cyclic(2), c, &[(1, vec![4, 1, 2, 3, 0])]);
        assert!(matches!(r, Err(Error::NotSimplicialAction(_))));
    }

    #[test]
    fn inconsistent_generators_are_bad_groups() {
        let r = validate_action(FiniteGroup::cyclic(2), two_circles(), &[(1, vec![1, 2, 0, 4, 5, 3])]);
        assert!(matches!(r, Err(Error::BadGroup(_))));
    }

    #[test]
    fn octahedron_rotation_needs_two_subdivisions() {
        let a = rotation();
        assert!(matches!(a.regularity_violation(), Some(Irregularity::AdjacentTranslate { .. })));
        // one subdivision separates translates but a pole, an edge and a
        // triangle can still be moved by different rotations
        let once = a.subdivide();
        assert!(once.adjacent_translate().is_none());
        assert!(matches!(once.regularity_violation(), Some(Irregularity::NoCommonElement { .. })));
        let (r, count) = a.regularize(2).unwrap();
        assert_eq!(count, 2);
        assert!(r.is_regular());
    }

    #[test]
    fn swap_of_circles_is_regular_and_free() {
        let a = GroupAction::from_permutations(two_circles(), &[vec![3, 4, 5, 0, 1, 2]]).unwrap();
        assert!(a.is_regular());
        assert!(a.is_free().unwrap());
        assert_eq!(a.regularize(2).unwrap().1, 0);
    }

    #[test]
    fn half_turn_of_an_edge_is_not_free() {
        let c = SimplicialComplex::from_index_facets(&[vec![0, 1]]).unwrap();
        let a = GroupAction::from_permutations(c, &[vec![1, 0]]).unwrap();
        assert!(!a.is_regular());
        assert!(!a.is_free().unwrap());
    }

    #[test]
    fn fixed_sets_of_the_rotation() {
        let a = rotation();
        assert_eq!(a.fixed_subcomplex(0).unwrap().total_simplices(), octahedron().total_simplices());
        let f = a.fixed_subcomplex(a.group().element("g0").unwrap()).unwrap();
        assert_eq!(f.f_vector(), vec![2]);
        assert!(matches!(a.fixed_subcomplex(9), Err(Error::BadElement(_))));
    }

    #[test]
    fn rotation_preserves_and_reflection_reverses() {
        let a = rotation();
        let o = a.orientation().unwrap();
        assert!(a.is_orientation_preserving(&o).unwrap().iter().all(|&b| b));
        let r = GroupAction::from_permutations(octahedron(), &[vec![0, 3, 2, 1, 4, 5]]).unwrap();
        let flags = r.is_orientation_preserving(&o).unwrap();
        assert_eq!(flags.iter().filter(|&&b| !b).count(), 1);
    }

    #[test]
    fn subdivided_action_is_simplicial() {
        let s = rotation().subdivide();
        let gens: Vec<(u32, Vec<u32>)> =
            s.group().elements().map(|g| (g, s.permutation(g).to_vec())).collect();
        assert!(validate_action(s.group().clone(), s.complex().clone(), &gens).is_ok());
    }
}

//! Example complexes and actions.

use crate::action::{FiniteGroup, GroupAction};
use crate::complex::{fundamental_class, product_orientation, Orientation, SimplicialComplex};
use crate::error::Result;

/// A nine-vertex triangulation of the complex projective plane. Vertex `i`
/// corresponds to `(i / 3, i % 3)` in `Z/3 × Z/3` and the facet set is
/// invariant under translations.
pub const CP2_FACETS: [[u32; 5]; 36] = [
    [0, 1, 2, 3, 4],
    [0, 1, 2, 3, 5],
    [0, 1, 2, 4, 5],
    [0, 1, 3, 4, 6],
    [0, 1, 3, 5, 7],
    [0, 1, 3, 6, 7],
    [0, 1, 4, 5, 6],
    [0, 1, 5, 6, 8],
    [0, 1, 5, 7, 8],
    [0, 1, 6, 7, 8],
    [0, 2, 3, 4, 8],
    [0, 2, 3, 5, 8],
    [0, 2, 4, 5, 6],
    [0, 2, 4, 6, 7],
    [0, 2, 4, 7, 8],
    [0, 2, 5, 6, 8],
    [0, 2, 6, 7, 8],
    [0, 3, 4, 6, 7],
    [0, 3, 4, 7, 8],
    [0, 3, 5, 7, 8],
    [1, 2, 3, 4, 8],
    [1, 2, 3, 5, 7],
    [1, 2, 3, 6, 7],
    [1, 2, 3, 6, 8],
    [1, 2, 4, 5, 7],
    [1, 2, 4, 7, 8],
    [1, 2, 6, 7, 8],
    [1, 3, 4, 6, 8],
    [1, 4, 5, 6, 8],
    [1, 4, 5, 7, 8],
    [2, 3, 5, 6, 7],
    [2, 3, 5, 6, 8],
    [2, 4, 5, 6, 7],
    [3, 4, 5, 6, 7],
    [3, 4, 5, 6, 8],
    [3, 4, 5, 7, 8],
];

/// The sign that makes the cup form of [`cp2`] positive.
const CP2_SIGN: i8 = -1;

fn from_facets(facets: &[Vec<u32>]) -> SimplicialComplex {
    SimplicialComplex::from_index_facets(facets).expect("catalog complex")
}

/// `∂Δ^{n+1}`, an `n`-sphere.
pub fn sphere(n: usize) -> SimplicialComplex {
    let m = n as u32 + 2;
    from_facets(&(0..m).map(|i| (0..m).filter(|&j| j != i).collect()).collect::<Vec<_>>())
}

/// The `k`-gon.
pub fn circle(k: usize) -> SimplicialComplex {
    let k = k as u32;
    from_facets(&(0..k).map(|i| vec![i, (i + 1) % k]).collect::<Vec<_>>())
}

fn natural(n: usize) -> Vec<u32> {
    (0..n as u32).collect()
}

/// Staircase product of complexes with their natural vertex orders.
pub fn staircase(a: &SimplicialComplex, b: &SimplicialComplex) -> SimplicialComplex {
    a.product(b, &natural(a.num_vertices()), &natural(b.num_vertices())).expect("orders are complete")
}

/// Staircase torus `∂Δ² × ∂Δ²`.
pub fn torus() -> SimplicialComplex {
    staircase(&sphere(1), &sphere(1))
}

/// Staircase `T² × T²`.
pub fn torus4() -> SimplicialComplex {
    staircase(&torus(), &torus())
}

/// The six-vertex real projective plane.
pub fn rp2() -> SimplicialComplex {
    from_facets(&[
        vec![0, 1, 2],
        vec![0, 2, 3],
        vec![0, 3, 4],
        vec![0, 4, 5],
        vec![0, 1, 5],
        vec![1, 2, 4],
        vec![2, 3, 5],
        vec![1, 3, 4],
        vec![2, 4, 5],
        vec![1, 3, 5],
    ])
}

pub fn cp2() -> SimplicialComplex {
    from_facets(&CP2_FACETS.iter().map(|f| f.to_vec()).collect::<Vec<_>>())
}

/// Orientation of [`cp2`] with signature `+1`.
pub fn cp2_orientation(k: &SimplicialComplex) -> Orientation {
    let o = fundamental_class(k).expect("orientable");
    if CP2_SIGN < 0 {
        o.negated()
    } else {
        o
    }
}

/// The seven-vertex torus, triangles `{i, i+1, i+3}` and `{i, i+2, i+3}`.
pub fn mobius_torus() -> SimplicialComplex {
    let mut f = Vec::new();
    for i in 0..7u32 {
        f.push(vec![i, (i + 1) % 7, (i + 3) % 7]);
        f.push(vec![i, (i + 2) % 7, (i + 3) % 7]);
    }
    from_facets(&f)
}

/// Octahedron with equator `0..4` and poles `4`, `5`.
pub fn octahedron() -> SimplicialComplex {
    let mut f = Vec::new();
    for i in 0..4u32 {
        for p in [4, 5] {
            f.push(vec![i, (i + 1) % 4, p]);
        }
    }
    from_facets(&f)
}

/// `∂Δ³ × ∂Δ³` with its product orientation.
pub fn s2xs2() -> (SimplicialComplex, Orientation) {
    let s = sphere(2);
    let o = fundamental_class(&s).expect("sphere");
    let k = staircase(&s, &s);
    let order = natural(4);
    let po = product_orientation(&s, &o, &s, &o, &order, &order, &k).expect("product");
    (k, po)
}

/// An action together with an orientation of its complex, when there is one.
#[derive(Debug, Clone)]
pub struct CatalogAction {
    pub name: String,
    pub action: GroupAction,
    pub orientation: Option<Orientation>,
}

impl CatalogAction {
    fn new(name: &str, action: GroupAction) -> Self {
        let orientation = fundamental_class(action.complex()).ok();
        CatalogAction { name: name.to_string(), action, orientation }
    }

    /// Whether the complex is oriented and every element preserves it.
    pub fn is_oriented(&self) -> bool {
        self.orientation
            .as_ref()
            .is_some_and(|o| self.action.is_orientation_preserving(o).is_ok_and(|v| v.iter().all(|&b| b)))
    }
}

/// The `(u, v) ↦ (v, u)` swap on `∂Δ³ × ∂Δ³`.
pub fn s2xs2_swap() -> CatalogAction {
    let (k, o) = s2xs2();
    let swap: Vec<u32> = (0..16u32).map(|x| (x % 4) * 4 + x / 4).collect();
    let action = GroupAction::from_permutations(k, &[swap]).expect("swap is simplicial");
    CatalogAction { name: "s2xs2-swap".into(), action, orientation: Some(o) }
}

/// Quarter-turn of the octahedron about the polar axis.
pub fn octahedron_rotation() -> CatalogAction {
    let a = GroupAction::from_permutations(octahedron(), &[vec![1, 2, 3, 0, 4, 5]]).expect("rotation");
    CatalogAction::new("octahedron-rotation", a)
}

/// The reflection `i ↦ -i` of the equator, fixing the poles.
pub fn octahedron_reflection() -> CatalogAction {
    let a = GroupAction::from_permutations(octahedron(), &[vec![0, 3, 2, 1, 4, 5]]).expect("reflection");
    CatalogAction::new("octahedron-reflection", a)
}

/// The half-turn `i ↦ i + k/2` of the `k`-gon, free for even `k ≥ 4`.
pub fn circle_half_turn(k: usize) -> CatalogAction {
    let h = (k / 2) as u32;
    let perm = (0..k as u32).map(|i| (i + h) % k as u32).collect::<Vec<_>>();
    let a = GroupAction::from_permutations(circle(k), &[perm]).expect("rotation");
    CatalogAction::new(&format!("half-turn-{k}"), a)
}

/// `Z/copies` cyclically permuting disjoint copies of `k`.
pub fn disjoint_copies(name: &str, k: &SimplicialComplex, copies: usize) -> CatalogAction {
    let parts: Vec<&SimplicialComplex> = std::iter::repeat_n(k, copies).collect();
    let u = SimplicialComplex::disjoint_union(&parts);
    let nv = k.num_vertices() as u32;
    let total = nv * copies as u32;
    let perm: Vec<u32> = (0..total).map(|x| (x + nv) % total).collect();
    let group = FiniteGroup::cyclic(copies);
    let gens = if copies > 1 { vec![(1, perm)] } else { Vec::new() };
    let a = GroupAction::validate(group, u, &gens).expect("permutation of copies");
    CatalogAction::new(name, a)
}

/// The induced action on the suspension, fixing both suspension points.
pub fn suspend_action(a: &GroupAction) -> Result<GroupAction> {
    let s = a.complex().suspension();
    let nv = a.complex().num_vertices() as u32;
    let gens: Vec<(u32, Vec<u32>)> = a
        .group()
        .elements()
        .map(|g| {
            let mut p = a.permutation(g).to_vec();
            p.extend([nv, nv + 1]);
            (g, p)
        })
        .collect();
    GroupAction::validate(a.group().clone(), s, &gens)
}

pub fn suspend_catalog(c: &CatalogAction, times: usize) -> CatalogAction {
    let mut a = c.action.clone();
    for _ in 0..times {
        a = suspend_action(&a).expect("suspension of a simplicial action");
    }
    CatalogAction::new(&format!("suspension-{times}-{}", c.name), a)
}

/// `Z/7 ⋊ Z/3` generated by `i ↦ i + 1` and `i ↦ 2i` on the seven-vertex
/// torus.
pub fn mobius_torus_action() -> CatalogAction {
    let t: Vec<u32> = (0..7).map(|i| (i + 1) % 7).collect();
    let m: Vec<u32> = (0..7).map(|i| (2 * i) % 7).collect();
    let a = GroupAction::from_permutations(mobius_torus(), &[t, m]).expect("affine maps");
    CatalogAction::new("mobius-torus-affine", a)
}

/// `Z/7` translations of the seven-vertex torus (free).
pub fn mobius_torus_translation() -> CatalogAction {
    let t: Vec<u32> = (0..7).map(|i| (i + 1) % 7).collect();
    let a = GroupAction::from_permutations(mobius_torus(), &[t]).expect("translation");
    CatalogAction::new("mobius-torus-translation", a)
}

/// Every catalog action.
pub fn actions() -> Vec<CatalogAction> {
    let mut v = vec![
        octahedron_rotation(),
        octahedron_reflection(),
        circle_half_turn(8),
        disjoint_copies("disjoint-triangles", &from_facets(&[vec![0, 1, 2]]), 2),
        disjoint_copies("disjoint-circles", &sphere(1), 2),
        disjoint_copies("disjoint-spheres", &sphere(2), 2),
        disjoint_copies("disjoint-tori-3", &torus(), 3),
        disjoint_copies("disjoint-cp2-3", &cp2(), 3),
        mobius_torus_action(),
        mobius_torus_translation(),
        s2xs2_swap(),
    ];
    v.push(suspend_catalog(&octahedron_rotation(), 1));
    v.push(suspend_catalog(&disjoint_copies("disjoint-circles", &sphere(1), 2), 1));
    v
}

/// Names understood by [`by_name`].
pub const NAMES: [&str; 14] = [
    "sphere",
    "circle",
    "torus",
    "t4",
    "rp2",
    "cp2",
    "mobius-torus",
    "octahedron",
    "octahedron-reflection",
    "s2xs2-swap",
    "half-turn",
    "disjoint",
    "mobius-affine",
    "mobius-translation",
];

/// A catalog example by name; `param` is the dimension, size or number of
/// copies where one applies.
pub fn by_name(name: &str, param: Option<usize>) -> Option<CatalogAction> {
    let trivial = |name: &str, k: SimplicialComplex| {
        CatalogAction::new(name, GroupAction::trivial(k).expect("trivial action"))
    };
    Some(match name {
        "sphere" => trivial("sphere", sphere(param.unwrap_or(2))),
        "circle" => trivial("circle", circle(param.unwrap_or(4).max(3))),
        "torus" => trivial("torus", torus()),
        "t4" => trivial("t4", torus4()),
        "rp2" => trivial("rp2", rp2()),
        "cp2" => {
            let k = cp2();
            let o = cp2_orientation(&k);
            CatalogAction { name: "cp2".into(), action: GroupAction::trivial(k).expect("trivial"), orientation: Some(o) }
        }
        "mobius-torus" => trivial("mobius-torus", mobius_torus()),
        "octahedron" => octahedron_rotation(),
        "octahedron-reflection" => octahedron_reflection(),
        "s2xs2-swap" => s2xs2_swap(),
        "half-turn" => circle_half_turn(param.unwrap_or(8)),
        "disjoint" => disjoint_copies("disjoint", &sphere(1), param.unwrap_or(2).max(1)),
        "mobius-affine" => mobius_torus_action(),
        "mobius-translation" => mobius_torus_translation(),
        _ => return None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{homology, Ring};

    #[test]
    fn catalog_homology() {
        assert_eq!(homology(&torus(), Ring::Rationals).betti, vec![1, 2, 1]);
        assert_eq!(homology(&cp2(), Ring::Rationals).betti, vec![1, 0, 1, 0, 1]);
        assert_eq!(homology(&mobius_torus(), Ring::Rationals).betti, vec![1, 2, 1]);
        assert_eq!(homology(&s2xs2().0, Ring::Rationals).betti, vec![1, 0, 2, 0, 1]);
        let rp = homology(&rp2(), Ring::Integers);
        assert_eq!(rp.betti, vec![1, 0, 0]);
        assert_eq!(rp.torsion[1], vec![num_bigint::BigInt::from(2)]);
    }

    #[test]
    fn every_catalog_action_is_valid() {
        for c in actions() {
            assert!(c.action.group().order() >= 1, "{}", c.name);
        }
        assert_eq!(mobius_torus_action().action.group().order(), 21);
    }
}

//! Subdivision, products, suspensions and disjoint unions.

use super::{face, simplex, Simplex, SimplexSet, SimplicialComplex};
use crate::error::{Error, Result};
use crate::exec;

/// Proper faces of every simplex, addressed by global id.
#[derive(Debug, Clone)]
pub struct FacePoset {
    /// `faces[t]`: global ids of all nonempty proper faces of simplex `t`,
    /// in decreasing id order.
    pub faces: Vec<Vec<u32>>,
    /// `dims[t]`: dimension of simplex `t`.
    pub dims: Vec<u8>,
}

impl FacePoset {
    pub fn new(k: &SimplicialComplex) -> Self {
        let all: Vec<&Simplex> = k.iter().collect();
        let faces = exec::map(&all, |s| {
            let n = s.len();
            let mut out = Vec::with_capacity((1usize << n).saturating_sub(2));
            for mask in 1..(1u32 << n) - 1 {
                let f: Simplex = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| s[i]).collect();
                out.push(k.id_of(&f).expect("closed under faces") as u32);
            }
            out.sort_unstable_by(|a, b| b.cmp(a));
            out
        });
        let dims = all.iter().map(|s| (s.len() - 1) as u8).collect();
        FacePoset { faces, dims }
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    /// Visit every chain `t_0 < … < t_{len-1} = top` (as an increasing id
    /// tuple) for which `admit(prefix)` holds on every top-down prefix.
    pub fn for_each_chain(
        &self,
        top: u32,
        len: usize,
        admit: &impl Fn(&[u32]) -> bool,
        visit: &mut impl FnMut(&[u32]),
    ) {
        let mut stack = vec![top];
        if !admit(&stack) {
            return;
        }
        self.descend(&mut stack, len, admit, visit);
    }

    fn descend(
        &self,
        stack: &mut Vec<u32>,
        len: usize,
        admit: &impl Fn(&[u32]) -> bool,
        visit: &mut impl FnMut(&[u32]),
    ) {
        if stack.len() == len {
            let chain: Simplex = stack.iter().rev().copied().collect();
            visit(&chain);
            return;
        }
        let last = *stack.last().unwrap();
        // not enough room below for the remaining elements
        if (self.dims[last as usize] as usize) < len - stack.len() {
            return;
        }
        for &f in &self.faces[last as usize] {
            stack.push(f);
            if admit(stack) {
                self.descend(stack, len, admit, visit);
            }
            stack.pop();
        }
    }
}

/// A barycentric subdivision together with the simplex each new vertex
/// comes from.
#[derive(Debug, Clone)]
pub struct Subdivision {
    pub complex: SimplicialComplex,
    /// `origin[v]` is the simplex of the original complex behind vertex `v`.
    pub origin: Vec<Simplex>,
}

impl SimplicialComplex {
    /// Abstract barycentric subdivision. The new vertex `t` is the simplex
    /// with global id `t`; simplices are chains under inclusion.
    pub fn barycentric_subdivision(&self) -> Subdivision {
        let poset = FacePoset::new(self);
        let total = poset.len();
        let n = self.dim();
        let per_top: Vec<Vec<Simplex>> = exec::map_range(total, |t| {
            let mut out = Vec::new();
            for len in 1..=poset.dims[t] as usize + 1 {
                poset.for_each_chain(t as u32, len, &|_| true, &mut |c| out.push(Simplex::from_slice(c)));
            }
            out
        });
        let mut by_dim: Vec<SimplexSet> = vec![SimplexSet::default(); n + 1];
        for chains in per_top {
            for c in chains {
                by_dim[c.len() - 1].insert(c);
            }
        }
        let origin: Vec<Simplex> = self.iter().cloned().collect();
        let labels = origin.iter().map(|s| format!("{{{}}}", self.labels_of(s).join(","))).collect();
        Subdivision { complex: SimplicialComplex::from_closed_parts(labels, by_dim), origin }
    }

    /// Staircase triangulation of `|self| × |other|`. Vertex `(u, v)` gets id
    /// `u * |V(other)| + v` and label `(u,v)`; simplices are chains in the
    /// product of the two total orders whose projections are simplices.
    pub fn product(&self, other: &SimplicialComplex, order_a: &[u32], order_b: &[u32]) -> Result<SimplicialComplex> {
        let rank_a = order_ranks(order_a, self.num_vertices())?;
        let rank_b = order_ranks(order_b, other.num_vertices())?;
        let nb = other.num_vertices() as u32;
        let fa = self.facets();
        let fb = other.facets();
        let mut facets = Vec::new();
        for s in &fa {
            let mut s = s.clone();
            s.sort_by_key(|&v| rank_a[v as usize]);
            for t in &fb {
                let mut t = t.clone();
                t.sort_by_key(|&v| rank_b[v as usize]);
                staircases(s.len() - 1, t.len() - 1, &mut |path| {
                    facets.push(simplex(path.iter().map(|&(i, j)| s[i] * nb + t[j])));
                });
            }
        }
        let mut labels = Vec::with_capacity(self.num_vertices() * other.num_vertices());
        for a in self.labels() {
            for b in other.labels() {
                labels.push(format!("({a},{b})"));
            }
        }
        SimplicialComplex::new(labels, facets)
    }

    /// Join with two new apex vertices.
    pub fn suspension(&self) -> SimplicialComplex {
        let mut labels = self.labels.clone();
        let nv = labels.len() as u32;
        for base in ["N", "S"] {
            let mut l = base.to_string();
            while labels.contains(&l) {
                l.push('\'');
            }
            labels.push(l);
        }
        let mut facets = Vec::new();
        for f in self.facets() {
            for apex in [nv, nv + 1] {
                let mut s = f.clone();
                s.push(apex);
                facets.push(s);
            }
        }
        SimplicialComplex::new(labels, facets).expect("nonempty")
    }

    pub fn iterated_suspension(&self, s: usize) -> SimplicialComplex {
        (0..s).fold(self.clone(), |k, _| k.suspension())
    }

    /// Disjoint union; vertex `v` of part `i` gets id `offset_i + v` and label
    /// `label.i`.
    pub fn disjoint_union(parts: &[&SimplicialComplex]) -> SimplicialComplex {
        let mut labels = Vec::new();
        let mut facets = Vec::new();
        for (i, p) in parts.iter().enumerate() {
            let off = labels.len() as u32;
            labels.extend(p.labels().iter().map(|l| format!("{l}.{i}")));
            facets.extend(p.facets().into_iter().map(|f| f.iter().map(|v| v + off).collect::<Simplex>()));
        }
        SimplicialComplex::new(labels, facets).expect("nonempty union")
    }

    /// Same complex with new labels.
    pub fn relabel(&self, labels: Vec<String>) -> Result<SimplicialComplex> {
        if labels.len() != self.labels.len() {
            return Err(Error::InvalidOrder("label count mismatch".into()));
        }
        SimplicialComplex::new(labels, self.facets())
    }

    /// Codimension-one faces of `s` that lie in the complex, with their
    /// boundary signs.
    pub fn boundary_faces(&self, s: &[u32]) -> Vec<(Simplex, i64)> {
        (0..s.len()).map(|i| (face(s, i), if i % 2 == 0 { 1 } else { -1 })).collect()
    }
}

fn order_ranks(order: &[u32], n: usize) -> Result<Vec<usize>> {
    let mut rank = vec![usize::MAX; n];
    for (r, &v) in order.iter().enumerate() {
        let slot = rank
            .get_mut(v as usize)
            .ok_or_else(|| Error::InvalidOrder(format!("vertex {v} out of range")))?;
        if *slot != usize::MAX {
            return Err(Error::InvalidOrder(format!("vertex {v} listed twice")));
        }
        *slot = r;
    }
    if let Some(v) = rank.iter().position(|&r| r == usize::MAX) {
        return Err(Error::InvalidOrder(format!("vertex {v} missing from order")));
    }
    Ok(rank)
}

/// Monotone lattice paths from `(0,0)` to `(p,q)`.
fn staircases(p: usize, q: usize, visit: &mut impl FnMut(&[(usize, usize)])) {
    fn go(i: usize, j: usize, p: usize, q: usize, path: &mut Vec<(usize, usize)>, visit: &mut impl FnMut(&[(usize, usize)])) {
        path.push((i, j));
        if i == p && j == q {
            visit(path);
        }
        if i < p {
            go(i + 1, j, p, q, path, visit);
        }
        if j < q {
            go(i, j + 1, p, q, path, visit);
        }
        path.pop();
    }
    go(0, 0, p, q, &mut Vec::new(), visit);
}

use std::collections::VecDeque;

use num_rational::BigRational;

use super::chain::sort_sign;
use super::{face, OrientedChain, Simplex, SimplicialComplex};
use crate::error::{Error, Result};

/// Coherent signs on the top simplices, indexed like `simplices(dim)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orientation {
    dim: usize,
    signs: Vec<i8>,
}

impl Orientation {
    pub fn from_signs(dim: usize, signs: Vec<i8>) -> Self {
        Orientation { dim, signs }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn sign(&self, top: usize) -> i64 {
        self.signs[top] as i64
    }

    pub fn negated(&self) -> Self {
        Orientation { dim: self.dim, signs: self.signs.iter().map(|s| -s).collect() }
    }

    pub fn to_chain(&self, k: &SimplicialComplex) -> OrientedChain {
        let mut c = OrientedChain::zero(self.dim);
        for (s, &e) in k.simplices(self.dim).iter().zip(&self.signs) {
            c.add_ordered(s, &BigRational::from_integer(e.into()));
        }
        c
    }

    /// Orientation of the barycentric subdivision `sd` of `k` carried by the
    /// subdivision chain map: the flag `F_0 ⊂ … ⊂ F_n = σ`, listed by
    /// increasing dimension, gets `ε_σ` times the sign of the order in which
    /// it adds the vertices of `σ`.
    pub fn subdivided(&self, k: &SimplicialComplex, sd: &SimplicialComplex) -> Orientation {
        let n = self.dim;
        let tops = k.simplices(n);
        let signs = sd
            .simplices(n)
            .iter()
            .map(|flag| {
                let sigma = k.simplex_by_id(flag[n] as usize);
                let mut added: Vec<u32> = Vec::with_capacity(n + 1);
                let mut prev: &[u32] = &[];
                for &t in flag.iter() {
                    let f = k.simplex_by_id(t as usize);
                    added.extend(f.iter().filter(|v| !prev.contains(v)));
                    prev = f;
                }
                let top = tops.get_index_of(sigma).expect("top simplex");
                (self.sign(top) * sort_sign(&mut added)) as i8
            })
            .collect();
        Orientation { dim: n, signs }
    }

    /// Whether the signed top sum is a cycle of `k`.
    pub fn is_coherent(&self, k: &SimplicialComplex) -> bool {
        self.signs.len() == k.count(self.dim) && self.to_chain(k).boundary().is_zero()
    }
}

/// Pure `n`-complex in which every `(n-1)`-simplex has exactly two cofaces.
fn check_closed_pseudomanifold(k: &SimplicialComplex) -> Result<Vec<Vec<u32>>> {
    if k.is_empty() {
        return Err(Error::NotPseudomanifold("empty complex".into()));
    }
    if !k.is_pure() {
        return Err(Error::NotPseudomanifold("complex is not pure".into()));
    }
    let cof = k.ridge_cofaces();
    if let Some((r, c)) = cof.iter().enumerate().find(|(_, c)| c.len() != 2) {
        let ridge = &k.simplices(k.dim() - 1)[r];
        return Err(Error::NotPseudomanifold(format!(
            "{:?} lies in {} top simplices",
            k.labels_of(ridge),
            c.len()
        )));
    }
    Ok(cof)
}

/// Coherent orientation by propagation across codimension-one faces, with
/// sign `+1` on the first top simplex of each component.
pub fn fundamental_class(k: &SimplicialComplex) -> Result<Orientation> {
    let cof = check_closed_pseudomanifold(k)?;
    let n = k.dim();
    let tops = k.simplices(n);
    if n == 0 {
        return Ok(Orientation { dim: 0, signs: vec![1; tops.len()] });
    }
    let ridges = k.simplices(n - 1);
    let mut signs = vec![0i8; tops.len()];
    for start in 0..tops.len() {
        if signs[start] != 0 {
            continue;
        }
        signs[start] = 1;
        let mut queue = VecDeque::from([start]);
        while let Some(t) = queue.pop_front() {
            let s = &tops[t];
            for i in 0..s.len() {
                let f = face(s, i);
                let r = ridges.get_index_of(&f).unwrap();
                let other = cof[r].iter().map(|&x| x as usize).find(|&x| x != t).unwrap();
                let o = &tops[other];
                let j = o.iter().position(|v| f.binary_search(v).is_err()).unwrap();
                // the two induced orientations of the shared face must cancel
                let want = -signs[t] * if (i + j) % 2 == 0 { 1 } else { -1 };
                if signs[other] == 0 {
                    signs[other] = want;
                    queue.push_back(other);
                } else if signs[other] != want {
                    return Err(Error::OrientationFailure(k.labels_of(o)));
                }
            }
        }
    }
    Ok(Orientation { dim: n, signs })
}

/// Orientation of a staircase product `a × b` (built with `order_a`,
/// `order_b`) induced by the cross product of the fundamental classes. The
/// staircase through `σ × τ` along a lattice path carries the shuffle sign
/// of the path.
pub fn product_orientation(
    a: &SimplicialComplex,
    oa: &Orientation,
    b: &SimplicialComplex,
    ob: &Orientation,
    order_a: &[u32],
    order_b: &[u32],
    prod: &SimplicialComplex,
) -> Result<Orientation> {
    let rank = |order: &[u32], n: usize| {
        let mut r = vec![0usize; n];
        for (i, &v) in order.iter().enumerate() {
            r[v as usize] = i;
        }
        r
    };
    let ra = rank(order_a, a.num_vertices());
    let rb = rank(order_b, b.num_vertices());
    let nb = b.num_vertices() as u32;
    let (p, q) = (oa.dim(), ob.dim());
    let mut signs = vec![0i8; prod.count(p + q)];
    for (si, s) in a.simplices(p).iter().enumerate() {
        let mut so: Simplex = s.clone();
        so.sort_by_key(|&v| ra[v as usize]);
        let eps_s = oa.sign(si) * sort_sign(&mut so.clone());
        for (ti, t) in b.simplices(q).iter().enumerate() {
            let mut to: Simplex = t.clone();
            to.sort_by_key(|&v| rb[v as usize]);
            let eps_t = ob.sign(ti) * sort_sign(&mut to.clone());
            let mut word = Vec::with_capacity(p + q);
            walk(p, q, &mut word, &mut |w| {
                let (mut i, mut j) = (0, 0);
                let mut verts: Vec<u32> = vec![so[0] * nb + to[0]];
                let mut inversions = 0;
                let mut ups = 0;
                for &up in w {
                    if up {
                        j += 1;
                        ups += 1;
                    } else {
                        i += 1;
                        inversions += ups;
                    }
                    verts.push(so[i] * nb + to[j]);
                }
                let shuffle = if inversions % 2 == 0 { 1 } else { -1 };
                let sort = sort_sign(&mut verts);
                let idx = prod.index_of(&verts).expect("staircase simplex");
                signs[idx] = (eps_s * eps_t * shuffle * sort) as i8;
            });
        }
    }
    if signs.contains(&0) {
        return Err(Error::Internal("product orientation does not cover every top simplex".into()));
    }
    Ok(Orientation { dim: p + q, signs })
}

fn walk(p: usize, q: usize, word: &mut Vec<bool>, visit: &mut impl FnMut(&[bool])) {
    let ups = word.iter().filter(|&&u| u).count();
    let rights = word.len() - ups;
    if rights == p && ups == q {
        visit(word);
        return;
    }
    if rights < p {
        word.push(false);
        walk(p, q, word, visit);
        word.pop();
    }
    if ups < q {
        word.push(true);
        walk(p, q, word, visit);
        word.pop();
    }
}

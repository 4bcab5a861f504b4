use num_bigint::BigInt;
use num_traits::One;
use rustc_hash::FxHashSet;

use super::{boundary_matrix, SimplicialComplex};
use crate::exec;
use crate::linalg::snf::invariant_factors;
use crate::linalg::sparse::{reduce_columns, reduce_tracked, SparseVec};
use crate::linalg::IntVec;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ring {
    Integers,
    Rationals,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Homology {
    pub betti: Vec<usize>,
    /// Invariant factors greater than one, per degree (empty over the rationals).
    pub torsion: Vec<Vec<BigInt>>,
}

pub fn homology(k: &SimplicialComplex, ring: Ring) -> Homology {
    let n = k.dim();
    if k.is_empty() {
        return Homology { betti: vec![], torsion: vec![] };
    }
    match ring {
        Ring::Rationals => {
            let ranks = boundary_ranks(k);
            let betti = (0..=n).map(|d| k.count(d) - ranks[d] - ranks[d + 1]).collect();
            Homology { betti, torsion: vec![Vec::new(); n + 1] }
        }
        Ring::Integers => {
            // invariant factors of ∂_{d+1} for d = 0..n
            let factors: Vec<Vec<BigInt>> =
                exec::map_range(n + 1, |d| invariant_factors(&boundary_matrix(k, d + 1)));
            let mut ranks = vec![0; n + 2];
            for d in 0..=n {
                ranks[d + 1] = factors[d].len();
            }
            let betti = (0..=n).map(|d| k.count(d) - ranks[d] - ranks[d + 1]).collect();
            let torsion = factors.into_iter().map(|f| f.into_iter().filter(|x| !x.is_one()).collect()).collect();
            Homology { betti, torsion }
        }
    }
}

/// `ranks[d] = rank ∂_d` for `d = 0..=n+1`, reducing from the top down and
/// skipping columns already known to reduce to zero (the lows of the degree
/// above).
pub fn boundary_ranks(k: &SimplicialComplex) -> Vec<usize> {
    let n = k.dim();
    let mut ranks = vec![0; n + 2];
    let mut cleared: FxHashSet<u32> = FxHashSet::default();
    for d in (1..=n).rev() {
        let cols: Vec<SparseVec<i64>> = boundary_matrix(k, d)
            .into_iter()
            .enumerate()
            .filter(|(j, _)| !cleared.contains(&(*j as u32)))
            .map(|(_, c)| c)
            .collect();
        let (r, lows) = rank_and_lows(&cols);
        ranks[d] = r;
        cleared = lows;
    }
    ranks
}

/// Rank over the rationals together with the pivot rows of the reduction.
pub fn rank_and_lows(cols: &[SparseVec<i64>]) -> (usize, FxHashSet<u32>) {
    match reduce_columns(cols, false) {
        Ok(r) => (r.rank(), r.pivots.keys().copied().collect()),
        Err(_) => {
            let wide: Vec<IntVec> = cols.iter().map(|c| c.to_bigint()).collect();
            let r = reduce_columns(&wide, false).expect("bigint reduction");
            (r.rank(), r.pivots.keys().copied().collect())
        }
    }
}

/// Cycles whose classes form a basis of `H_d(k; Q)`, as vectors over
/// `simplices(d)`.
pub fn homology_basis(k: &SimplicialComplex, d: usize) -> Vec<IntVec> {
    if k.is_empty() || d > k.dim() {
        return Vec::new();
    }
    let cols = boundary_matrix(k, d);
    let up = if d < k.dim() { boundary_matrix(k, d + 1) } else { Vec::new() };
    essential(cols, &up)
}

/// Cocycles whose classes form a basis of `H^d(k; Q)`, as vectors over
/// `simplices(d)`.
pub fn cohomology_basis(k: &SimplicialComplex, d: usize) -> Vec<IntVec> {
    if k.is_empty() || d > k.dim() {
        return Vec::new();
    }
    // Coboundaries with every index reversed are boundary matrices of the
    // reversed filtration.
    let nd = k.count(d) as u32;
    let cols = if d < k.dim() { reversed_coboundary(k, d) } else { vec![SparseVec::new(); nd as usize] };
    let up = if d > 0 { reversed_coboundary(k, d - 1) } else { Vec::new() };
    essential(cols, &up)
        .into_iter()
        .map(|v| {
            let mut pairs: Vec<(u32, BigInt)> = v.iter().map(|(i, x)| (nd - 1 - i, x.clone())).collect();
            pairs.reverse();
            SparseVec::from_pairs(pairs).expect("bigint")
        })
        .collect()
}

/// Columns of `δ^d`, over reversed `d`-simplices, with reversed row order.
fn reversed_coboundary(k: &SimplicialComplex, d: usize) -> Vec<SparseVec<i64>> {
    let nd = k.count(d);
    let nu = k.count(d + 1) as u32;
    let mut cols: Vec<Vec<(u32, i64)>> = vec![Vec::new(); nd];
    for (j, c) in boundary_matrix(k, d + 1).iter().enumerate() {
        for (i, &x) in c.iter() {
            cols[nd - 1 - i as usize].push((nu - 1 - j as u32, x));
        }
    }
    cols.into_iter().map(SparseVec::from_i64_pairs).collect()
}

/// Transform vectors of the columns of `cols` that reduce to zero and are not
/// killed by `up`. Columns killed by `up` are skipped before reducing.
fn essential(cols: Vec<SparseVec<i64>>, up: &[SparseVec<i64>]) -> Vec<IntVec> {
    let (_, killed) = rank_and_lows(up);
    let kept: Vec<u32> = (0..cols.len() as u32).filter(|j| !killed.contains(j)).collect();
    let sub: Vec<SparseVec<i64>> = kept.iter().map(|&j| cols[j as usize].clone()).collect();
    let red = reduce_tracked(&sub);
    let t = red.transform.as_ref().expect("tracked");
    red.reduced
        .iter()
        .zip(t)
        .filter(|(r, _)| r.is_empty())
        .map(|(_, v)| v.reindex_monotone(|i| kept[i as usize]))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_and_sphere() {
        let c = SimplicialComplex::from_index_facets(&[vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
        assert_eq!(homology(&c, Ring::Rationals).betti, vec![1, 1]);
        let s = SimplicialComplex::from_index_facets(&[vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]])
            .unwrap();
        let h = homology(&s, Ring::Integers);
        assert_eq!(h.betti, vec![1, 0, 1]);
        assert!(h.torsion.iter().all(|t| t.is_empty()));
        assert_eq!(homology_basis(&s, 2).len(), 1);
        assert_eq!(cohomology_basis(&s, 2).len(), 1);
        assert_eq!(cohomology_basis(&s, 0).len(), 1);
    }

    #[test]
    fn torus_bases_pair_nondegenerately() {
        let c = SimplicialComplex::from_index_facets(&[vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
        let t = c.product(&c, &[0, 1, 2], &[0, 1, 2]).unwrap();
        let z = homology_basis(&t, 1);
        let a = cohomology_basis(&t, 1);
        assert_eq!((z.len(), a.len()), (2, 2));
        let bd = boundary_matrix(&t, 2);
        for zi in &z {
            let dz = boundary_matrix(&t, 1);
            let mut img = vec![BigInt::from(0); t.count(0)];
            for (j, x) in zi.iter() {
                for (i, &y) in dz[j as usize].iter() {
                    img[i as usize] += x * y;
                }
            }
            assert!(img.iter().all(|x| x == &BigInt::from(0)));
        }
        // coboundary of each cocycle vanishes on every triangle
        for ai in &a {
            for col in &bd {
                let v: BigInt = col.iter().map(|(i, &y)| ai.get(i).cloned().unwrap_or_default() * y).sum();
                assert_eq!(v, BigInt::from(0));
            }
        }
        let pairing: Vec<Vec<BigInt>> = a
            .iter()
            .map(|ai| z.iter().map(|zj| zj.iter().map(|(i, x)| ai.get(i).cloned().unwrap_or_default() * x).sum()).collect())
            .collect();
        let det = &pairing[0][0] * &pairing[1][1] - &pairing[0][1] * &pairing[1][0];
        assert_ne!(det, BigInt::from(0));
    }
}

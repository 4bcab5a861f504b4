//! Canonical forms of small complexes, for caching per isomorphism type.


use crate::complex::{Simplex, SimplicialComplex};

/// Give up on a canonical form when ties leave more orderings than this.
const MAX_ORDERINGS: usize = 5040;

/// Facet list under a relabelling that depends only on the isomorphism type,
/// or `None` when the vertex classes are too symmetric to search.
pub fn canonical_form(k: &SimplicialComplex) -> Option<Vec<Simplex>> {
    let facets = k.facets();
    let n = k.num_vertices();
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, f) in facets.iter().enumerate() {
        for &v in f {
            incident[v as usize].push(i);
        }
    }
    let mut color: Vec<usize> = {
        let sig: Vec<Vec<usize>> = (0..n)
            .map(|v| {
                let mut s: Vec<usize> = incident[v].iter().map(|&i| facets[i].len()).collect();
                s.sort_unstable();
                s
            })
            .collect();
        rank(&sig)
    };
    loop {
        let sig: Vec<(usize, Vec<Vec<usize>>)> = (0..n)
            .map(|v| {
                let mut around: Vec<Vec<usize>> = incident[v]
                    .iter()
                    .map(|&i| {
                        let mut c: Vec<usize> =
                            facets[i].iter().filter(|&&w| w as usize != v).map(|&w| color[w as usize]).collect();
                        c.sort_unstable();
                        c
                    })
                    .collect();
                around.sort();
                (color[v], around)
            })
            .collect();
        let next = rank(&sig);
        let classes = |c: &[usize]| c.iter().copied().max().map_or(0, |m| m + 1);
        if classes(&next) == classes(&color) {
            break;
        }
        color = next;
    }
    let mut cells: Vec<Vec<u32>> = vec![Vec::new(); color.iter().copied().max().map_or(0, |m| m + 1)];
    for v in 0..n {
        cells[color[v]].push(v as u32);
    }
    let mut orderings: usize = 1;
    for c in &cells {
        for i in 2..=c.len() {
            orderings = orderings.checked_mul(i)?;
            if orderings > MAX_ORDERINGS {
                return None;
            }
        }
    }
    let mut best: Option<Vec<Simplex>> = None;
    let mut new_id = vec![0u32; n];
    let mut order: Vec<Vec<u32>> = cells.clone();
    search(&mut order, 0, &facets, &mut new_id, &mut best);
    best
}

fn rank<T: Ord + Clone>(sig: &[T]) -> Vec<usize> {
    let mut distinct: Vec<T> = sig.to_vec();
    distinct.sort();
    distinct.dedup();
    sig.iter().map(|s| distinct.binary_search(s).unwrap()).collect()
}

fn search(cells: &mut [Vec<u32>], c: usize, facets: &[Simplex], new_id: &mut [u32], best: &mut Option<Vec<Simplex>>) {
    if c == cells.len() {
        let mut next = 0u32;
        for cell in cells.iter() {
            for &v in cell {
                new_id[v as usize] = next;
                next += 1;
            }
        }
        let mut form: Vec<Simplex> =
            facets.iter().map(|f| crate::complex::simplex(f.iter().map(|&v| new_id[v as usize]))).collect();
        form.sort();
        if best.as_ref().is_none_or(|b| form < *b) {
            *best = Some(form);
        }
        return;
    }
    permute(cells, c, 0, facets, new_id, best);
}

fn permute(cells: &mut [Vec<u32>], c: usize, i: usize, facets: &[Simplex], new_id: &mut [u32], best: &mut Option<Vec<Simplex>>) {
    if i + 1 >= cells[c].len() {
        search(cells, c + 1, facets, new_id, best);
        return;
    }
    for j in i..cells[c].len() {
        cells[c].swap(i, j);
        permute(cells, c, i + 1, facets, new_id, best);
        cells[c].swap(i, j);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn isomorphic_complexes_share_a_form() {
        let a = SimplicialComplex::from_index_facets(&[vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]]).unwrap();
        let b = SimplicialComplex::from_index_facets(&[vec![0, 2], vec![2, 1], vec![1, 3], vec![0, 3]]).unwrap();
        let c = SimplicialComplex::from_index_facets(&[vec![0, 1], vec![1, 2], vec![0, 2], vec![2, 3]]).unwrap();
        assert_eq!(canonical_form(&a), canonical_form(&b));
        assert_ne!(canonical_form(&a), canonical_form(&c));
    }
}

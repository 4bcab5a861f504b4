//! The Witt condition, suspension oracles and ramified coverings.

mod canon;
mod cover;

use std::sync::Mutex;

use rustc_hash::FxHashMap;

use crate::action::check_pseudomanifold;
use crate::complex::{Simplex, SimplicialComplex};
use crate::error::{Error, Result};
use crate::exec;
use crate::filtered::{intersection_homology_degrees, FilteredComplex, Perversity};

pub use canon::canonical_form;
pub use cover::{link_cover_check, ramified_structure, LinkCoverVerdict, RamifiedCoverData};

/// Link intersection homology results kept per isomorphism type.
pub const LINK_CACHE_CAPACITY: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WittFailure {
    pub simplex: Vec<String>,
    pub link_dim: usize,
    pub ih_dim: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WittReport {
    pub is_witt: bool,
    /// Simplices whose link has even dimension at least two.
    pub checked_links: usize,
    /// Simplices whose link is zero-dimensional (not checked).
    pub exempt_links: usize,
    pub failures: Vec<WittFailure>,
    pub cache_hits: usize,
}

/// `dim IH^m̄_k` of a `2k`-dimensional complex, skeletal filtration.
fn middle_ih(link: &SimplicialComplex) -> Result<usize> {
    let k = link.dim() / 2;
    let r = intersection_homology_degrees(&FilteredComplex::skeletal(link), &Perversity::LowerMiddle, &[k])?;
    Ok(r.get(k).unwrap_or(0))
}

/// Checks `IH^m̄_k(Lk σ) = 0` for every simplex whose link has even dimension
/// `2k ≥ 2`. Zero-dimensional links are exempt: in a pseudomanifold they are
/// two points.
pub fn is_witt(k: &SimplicialComplex) -> Result<WittReport> {
    let pm = check_pseudomanifold(k);
    if !pm.is_pseudomanifold() {
        return Err(Error::NotPseudomanifold(if !pm.pm1 {
            "some maximal simplex is not top-dimensional".into()
        } else {
            "some codimension-one simplex does not lie in exactly two top simplices".into()
        }));
    }
    let n = k.dim();
    let mut candidates: Vec<&Simplex> = Vec::new();
    let mut exempt = 0;
    for d in 0..n {
        let link_dim = n - d - 1;
        if link_dim == 0 {
            exempt += k.count(d);
        } else if link_dim % 2 == 0 {
            candidates.extend(k.simplices(d).iter());
        }
    }
    let cache: Mutex<FxHashMap<Vec<Simplex>, usize>> = Mutex::new(FxHashMap::default());
    let hits = std::sync::atomic::AtomicUsize::new(0);
    let results: Vec<Result<Option<WittFailure>>> = exec::map(&candidates, |s| {
        let link = k.link(s)?;
        let key = canonical_form(&link);
        let cached = key.as_ref().and_then(|key| cache.lock().unwrap().get(key).copied());
        let ih = match cached {
            Some(v) => {
                hits.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                v
            }
            None => {
                let v = middle_ih(&link)?;
                if let Some(key) = key {
                    let mut c = cache.lock().unwrap();
                    if c.len() < LINK_CACHE_CAPACITY {
                        c.insert(key, v);
                    }
                }
                v
            }
        };
        Ok((ih != 0).then(|| WittFailure { simplex: k.labels_of(s), link_dim: link.dim(), ih_dim: ih }))
    });
    let mut failures = Vec::new();
    for r in results {
        if let Some(f) = r? {
            failures.push(f);
        }
    }
    Ok(WittReport {
        is_witt: failures.is_empty(),
        checked_links: candidates.len(),
        exempt_links: exempt,
        failures,
        cache_hits: hits.into_inner(),
    })
}

/// `IH^m̄_i(L)`, the value of `IH^m̄_i(Σ^s L)` for `i ≤ ⌊dim L / 2⌋`.
pub fn suspension_ih_oracle(l: &SimplicialComplex, _s: usize, i: usize) -> Result<usize> {
    let bound = l.dim() / 2;
    if i > bound {
        return Err(Error::OutOfRange { degree: i, bound });
    }
    let r = intersection_homology_degrees(&FilteredComplex::skeletal(l), &Perversity::LowerMiddle, &[i])?;
    Ok(r.get(i).unwrap_or(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn surfaces_and_suspensions() {
        let t = is_witt(&catalog::torus()).unwrap();
        assert!(t.is_witt);
        assert_eq!(t.checked_links, 0);
        assert!(is_witt(&catalog::sphere(2).suspension()).unwrap().is_witt);
        let st = is_witt(&catalog::torus().suspension()).unwrap();
        assert!(!st.is_witt);
        assert_eq!(st.failures.len(), 2);
        assert!(st.failures.iter().all(|f| f.link_dim == 2 && f.ih_dim == 2));
    }

    #[test]
    fn oracle_values() {
        assert_eq!(suspension_ih_oracle(&catalog::torus(), 3, 1).unwrap(), 2);
        assert_eq!(suspension_ih_oracle(&catalog::sphere(2), 1, 0).unwrap(), 1);
        assert_eq!(suspension_ih_oracle(&catalog::sphere(2), 2, 1).unwrap(), 0);
        assert!(matches!(suspension_ih_oracle(&catalog::sphere(2), 1, 2), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn rejects_non_pseudomanifolds() {
        let book = SimplicialComplex::from_index_facets(&[vec![0, 1, 2], vec![0, 1, 3], vec![0, 1, 4]]).unwrap();
        assert!(matches!(is_witt(&book), Err(Error::NotPseudomanifold(_))));
    }
}

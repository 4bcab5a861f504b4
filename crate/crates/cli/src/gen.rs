//! The `gen` verb: catalog examples and suspensions as `.scx` text.

use ihsig_core::catalog;
use ihsig_core::{Orientation, SimplicialComplex};

use crate::scx::{self, ScxFile};

pub fn catalog_file(name: &str, param: Option<usize>) -> Option<String> {
    let c = catalog::by_name(name, param)?;
    let orientation = c.orientation.as_ref();
    Some(scx::serialize(c.action.complex(), Some(&c.action), orientation))
}

/// Orientation of `ΣK` with `ε(σ * N) = ε(σ)` and `ε(σ * S) = -ε(σ)`.
fn suspend_orientation(k: &SimplicialComplex, sk: &SimplicialComplex, o: &Orientation) -> Orientation {
    let n = k.dim();
    let north = k.num_vertices() as u32;
    let signs = sk
        .simplices(n + 1)
        .iter()
        .map(|s| {
            let apex = *s.last().expect("nonempty simplex");
            let base = k.index_of(&s[..n + 1]).expect("base of a cone simplex");
            let e = o.signs()[base];
            if apex == north {
                e
            } else {
                -e
            }
        })
        .collect();
    Orientation::from_signs(n + 1, signs)
}

pub fn suspend(file: &ScxFile, times: usize) -> Result<String, ihsig_core::Error> {
    let mut k = file.complex.clone();
    let mut action = file.action.clone();
    let mut orientation = file.orientation.clone();
    for _ in 0..times {
        let sk = k.suspension();
        orientation = orientation.map(|o| suspend_orientation(&k, &sk, &o));
        action = action.map(|a| catalog::suspend_action(&a)).transpose()?;
        k = sk;
    }
    Ok(scx::serialize(&k, action.as_ref(), orientation.as_ref()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use ihsig_core::complex::fundamental_class;

    #[test]
    fn suspended_orientation_is_coherent() {
        let f = scx::parse(&catalog_file("sphere", Some(2)).unwrap()).unwrap();
        let text = suspend(&ScxFile { orientation: Some(fundamental_class(&f.complex).unwrap()), ..f }, 2).unwrap();
        let g = scx::parse(&text).unwrap();
        let o = g.orientation.unwrap();
        assert!(o.is_coherent(&g.complex));
        assert_eq!(g.complex, catalog::sphere(2).iterated_suspension(2));
    }
}

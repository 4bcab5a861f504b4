//! Transfers of orbit projections on intersection and ordinary homology.
//!
//! `π_!` is determined by `π_* π_! = d` and by having image in the
//! invariants, so it is computed as `d · ι (π_* ι)⁻¹` with `ι` the inclusion
//! of the invariant subspace.

use num_bigint::BigInt;

use crate::action::GroupAction;
use crate::complex::SimplicialMap;
use crate::error::{Error, Result};
use crate::exec;
use crate::filtered::{classify_simplicial, FilteredComplex, IhBasis, IhModel, Perversity};
use crate::linalg::{QMatrix, Q};

/// Basis (as columns) of the vectors fixed by every matrix.
pub fn invariant_subspace(gstars: &[QMatrix]) -> Result<QMatrix> {
    let Some(first) = gstars.first() else {
        return Err(Error::BadRep("no matrices".into()));
    };
    let n = first.rows();
    if gstars.iter().any(|m| m.rows() != n || m.cols() != n) {
        return Err(Error::BadRep("matrices are not square of one size".into()));
    }
    let id = QMatrix::identity(n);
    if !gstars.contains(&id) {
        return Err(Error::BadRep("the identity is missing".into()));
    }
    for a in gstars {
        for b in gstars {
            if !gstars.contains(&(a * b)) {
                return Err(Error::BadRep("matrices are not closed under products".into()));
            }
        }
    }
    if n == 0 {
        return Ok(QMatrix::zeros(0, 0));
    }
    let stacked = gstars.iter().map(|g| g - &id).reduce(|a, b| a.vstack(&b)).unwrap();
    Ok(stacked.kernel())
}

/// Matrices of one transfer in one degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransferMaps {
    pub pi_star: QMatrix,
    pub pi_shriek: QMatrix,
    /// `g_*` on the source, per group element.
    pub g_star: Vec<QMatrix>,
    pub invariants: QMatrix,
}

#[derive(Debug, Clone)]
pub struct TransferData {
    pub degree: usize,
    pub perversity: Perversity,
    pub d: usize,
    pub subdivisions: usize,
    pub ih: TransferMaps,
    pub homology: TransferMaps,
    /// Canonical maps `IH → H` on source and base.
    pub canonical_source: QMatrix,
    pub canonical_base: QMatrix,
}

/// Largest chain model, in cells of one degree, that [`transfers`] will build.
pub const TRANSFER_MAX_CELLS: usize = 500_000;

struct Models<'a> {
    xs: IhModel<'a>,
    ys: IhModel<'a>,
    pi: Vec<u32>,
    gs: Vec<Vec<u32>>,
}

fn placid_or_fail(map: &SimplicialMap, x: &FilteredComplex, y: &FilteredComplex, what: &str) -> Result<()> {
    if !classify_simplicial(map, x, y)?.placid {
        return Err(Error::NotPlacid(what.to_string()));
    }
    Ok(())
}

fn maps(
    m: &Models,
    p: Option<&Perversity>,
    degree: usize,
    d: usize,
) -> Result<(TransferMaps, IhBasis, IhBasis)> {
    let (bx, by) = exec::join(|| IhBasis::new(&m.xs, p, degree), || IhBasis::new(&m.ys, p, degree));
    let (bx, by) = (bx?, by?);
    let pi_star = bx.pushforward(&by, &m.pi)?;
    let g_star = m.gs.iter().map(|g| bx.pushforward(&bx, g)).collect::<Result<Vec<_>>>()?;
    let invariants = invariant_subspace(&g_star)?;
    let restricted = &pi_star * &invariants;
    let inv = if restricted.is_square() { restricted.inverse() } else { None };
    let Some(inv) = inv else {
        return Err(Error::InvariantsIsoFailure {
            degree,
            invariants: invariants.cols(),
            target: by.dim(),
            rank: restricted.rank(),
        });
    };
    let pi_shriek = (&invariants * &inv).scale(&Q::from_integer(BigInt::from(d)));
    Ok((TransferMaps { pi_star, pi_shriek, g_star, invariants }, bx, by))
}

/// Transfer of the orbit projection in one degree, on `IH^p` and on `H`,
/// after regularizing the action. Both complexes carry skeletal filtrations.
pub fn transfer(action: &GroupAction, p: &Perversity, degree: usize) -> Result<TransferData> {
    Ok(transfers(action, p, &[degree])?.remove(0))
}

/// [`transfer`] for several degrees, sharing the models.
pub fn transfers(action: &GroupAction, p: &Perversity, degrees: &[usize]) -> Result<Vec<TransferData>> {
    let (reg, subdivisions) = action.regularize(2)?;
    let orbit = reg.orbit_complex()?;
    let x = FilteredComplex::skeletal(reg.complex());
    let y = FilteredComplex::skeletal(&orbit.quotient);
    p.check_domain(x.max_codim())?;
    placid_or_fail(&orbit.projection, &x, &y, "orbit projection")?;
    let group = reg.group();
    let gmaps: Vec<SimplicialMap> = group
        .elements()
        .map(|g| SimplicialMap::new(reg.complex(), reg.complex(), reg.permutation(g).to_vec()))
        .collect::<Result<_>>()?;
    for g in &gmaps {
        placid_or_fail(g, &x, &x, "group element")?;
    }
    let subdivide = !(x.is_full() && y.is_full());
    let xs = IhModel::with_subdivision(&x, subdivide);
    let ys = IhModel::with_subdivision(&y, subdivide);
    let pi = xs.vertex_map(&orbit.projection, &ys);
    let gs = gmaps.iter().map(|g| xs.vertex_map(g, &xs)).collect();
    for &i in degrees {
        for j in [i, i + 1] {
            let need = xs.cell_count(j);
            if need > TRANSFER_MAX_CELLS {
                return Err(Error::Unsupported(format!(
                    "chain model needs {need} cells in degree {j}, above the budget of {TRANSFER_MAX_CELLS}"
                )));
            }
        }
    }
    let models = Models { xs, ys, pi, gs };
    let d = group.order();
    degrees
        .iter()
        .map(|&i| {
            let (ih, ihx, ihy) = maps(&models, Some(p), i, d)?;
            let (homology, hx, hy) = maps(&models, None, i, d)?;
            let identity_x: Vec<u32> = (0..models.xs.filtered().complex().total_simplices() as u32).collect();
            let identity_y: Vec<u32> = (0..models.ys.filtered().complex().total_simplices() as u32).collect();
            let canonical_source = ihx.pushforward(&hx, &model_identity(&models.xs, identity_x))?;
            let canonical_base = ihy.pushforward(&hy, &model_identity(&models.ys, identity_y))?;
            Ok(TransferData {
                degree: i,
                perversity: p.clone(),
                d,
                subdivisions,
                ih,
                homology,
                canonical_source,
                canonical_base,
            })
        })
        .collect()
}

fn model_identity(m: &IhModel, subdivided_ids: Vec<u32>) -> Vec<u32> {
    if m.subdivided() {
        subdivided_ids
    } else {
        (0..m.filtered().complex().num_vertices() as u32).collect()
    }
}

/// Outcome of [`verify_transfer_identities`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransferVerdict {
    pub degree: usize,
    pub up_down: bool,
    pub down_up: bool,
    pub homology_up_down: bool,
    pub homology_down_up: bool,
    pub square_pi_star: bool,
    pub square_pi_shriek: bool,
    pub shriek_injective: bool,
    pub star_surjective: bool,
    pub failures: Vec<String>,
}

impl TransferVerdict {
    pub fn passes(&self) -> bool {
        self.failures.is_empty()
    }
}

fn check(maps: &TransferMaps, d: usize) -> (bool, bool, bool, bool) {
    let n = maps.pi_star.rows();
    let dq = Q::from_integer(BigInt::from(d));
    let up_down = &maps.pi_star * &maps.pi_shriek == QMatrix::identity(n).scale(&dq);
    let m = maps.pi_star.cols();
    let sum = maps.g_star.iter().fold(QMatrix::zeros(m, m), |acc, g| &acc + g);
    let down_up = &maps.pi_shriek * &maps.pi_star == sum;
    let injective = maps.pi_shriek.rank() == maps.pi_shriek.cols();
    let surjective = maps.pi_star.rank() == maps.pi_star.rows();
    (up_down, down_up, injective, surjective)
}

/// Checks `π_*π_! = d`, `π_!π_* = Σ g_*` on both theories and that the
/// canonical maps `IH → H` commute with `π_*` and `π_!`.
pub fn verify_transfer_identities(td: &TransferData) -> TransferVerdict {
    let (up_down, down_up, inj, surj) = check(&td.ih, td.d);
    let (h_up_down, h_down_up, _, _) = check(&td.homology, td.d);
    let square_pi_star = &td.canonical_base * &td.ih.pi_star == &td.homology.pi_star * &td.canonical_source;
    let square_pi_shriek = &td.canonical_source * &td.ih.pi_shriek == &td.homology.pi_shriek * &td.canonical_base;
    let mut failures = Vec::new();
    for (ok, what) in [
        (up_down, "π_* π_! = d on IH"),
        (down_up, "π_! π_* = Σ g_* on IH"),
        (h_up_down, "π_* π_! = d on H"),
        (h_down_up, "π_! π_* = Σ g_* on H"),
        (square_pi_star, "IH → H commutes with π_*"),
        (square_pi_shriek, "IH → H commutes with π_!"),
        (inj, "π_! injective"),
        (surj, "π_* surjective"),
    ] {
        if !ok {
            failures.push(format!("degree {}: {what} fails", td.degree));
        }
    }
    TransferVerdict {
        degree: td.degree,
        up_down,
        down_up,
        homology_up_down: h_up_down,
        homology_down_up: h_down_up,
        square_pi_star,
        square_pi_shriek,
        shriek_injective: inj,
        star_surjective: surj,
        failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::linalg::q;

    #[test]
    fn invariant_subspaces() {
        assert_eq!(invariant_subspace(&[QMatrix::identity(3)]).unwrap().cols(), 3);
        let swap = QMatrix::from_i64(&[&[0, 1], &[1, 0]]);
        let v = invariant_subspace(&[QMatrix::identity(2), swap]).unwrap();
        assert_eq!(v.cols(), 1);
        assert_eq!(v[(0, 0)], v[(1, 0)]);
        let c = QMatrix::from_i64(&[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]]);
        let v = invariant_subspace(&[QMatrix::identity(3), c.clone(), &c * &c]).unwrap();
        assert_eq!(v.cols(), 1);
        assert!(matches!(invariant_subspace(&[c]), Err(Error::BadRep(_))));
    }

    #[test]
    fn trivial_group_transfer_is_identity() {
        let a = GroupAction::trivial(catalog::sphere(2)).unwrap();
        let td = transfer(&a, &Perversity::LowerMiddle, 2).unwrap();
        assert_eq!(td.d, 1);
        assert_eq!(td.ih.pi_shriek, QMatrix::identity(1));
        assert!(verify_transfer_identities(&td).passes());
    }

    #[test]
    fn free_half_turn_on_a_circle() {
        let c = catalog::circle_half_turn(8);
        let td = transfer(&c.action, &Perversity::LowerMiddle, 1).unwrap();
        assert_eq!(&td.ih.pi_star * &td.ih.pi_shriek, QMatrix::identity(1).scale(&q(2)));
        assert!(verify_transfer_identities(&td).passes());
    }
}

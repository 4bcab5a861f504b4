//! Middle-degree intersection forms, exact signatures and G-signatures.

mod gsig;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::action::GroupAction;
use crate::complex::chain::sort_sign;
use crate::complex::{cohomology_basis, homology, homology_basis, Orientation, Ring, SimplicialComplex};
use crate::error::{Error, Result};
use crate::filtered::{intersection_homology_degrees, FilteredComplex, Perversity};
use crate::linalg::{QMatrix, QVec, Q};

pub use gsig::{
    averaging_check, g_signature, g_signatures, GSignatureReport, NumericTolerance, SignatureValue,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Symmetric,
    Skew,
}

/// The cup-product pairing on `H^m` of an oriented `2m`-complex.
///
/// `cocycles` is a basis of `H^m`; the form is read on the Poincaré duals of
/// these classes. `cycles` is the dual homology basis, `⟨cocycles[i],
/// cycles[j]⟩ = δ_ij`, used to read off coordinates.
#[derive(Debug, Clone)]
pub struct MiddleForm {
    pub degree: usize,
    pub cocycles: Vec<QVec>,
    pub cycles: Vec<QVec>,
    pub matrix: QMatrix,
    pub parity: Parity,
}

impl MiddleForm {
    pub fn rank(&self) -> usize {
        self.matrix.rows()
    }

    /// A form given directly (for inputs outside the computed regime).
    pub fn external(degree: usize, matrix: QMatrix) -> Result<Self> {
        let parity = if degree % 2 == 0 { Parity::Symmetric } else { Parity::Skew };
        let ok = match parity {
            Parity::Symmetric => matrix.is_symmetric(),
            Parity::Skew => matrix.is_skew(),
        };
        if !matrix.is_square() || !ok {
            return Err(Error::NotSymmetric);
        }
        Ok(MiddleForm { degree, cocycles: Vec::new(), cycles: Vec::new(), matrix, parity })
    }
}

fn pair(a: &QVec, b: &QVec) -> Q {
    let mut s = Q::zero();
    let (mut i, mut j) = (0, 0);
    let (ai, bi) = (a.indices(), b.indices());
    while i < ai.len() && j < bi.len() {
        match ai[i].cmp(&bi[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                s += &a.values()[i] * &b.values()[j];
                i += 1;
                j += 1;
            }
        }
    }
    s
}

/// Checks that `IH^m̄_m` and `H_m` have the same dimension, the regime in
/// which the cup form computes the intersection form.
pub fn check_middle_regime(k: &SimplicialComplex) -> Result<()> {
    let n = k.dim();
    if n % 2 == 1 {
        return Err(Error::FormUnavailable(format!("dimension {n} is odd")));
    }
    let m = n / 2;
    if m == 0 {
        return Ok(());
    }
    let ih = intersection_homology_degrees(&FilteredComplex::skeletal(k), &Perversity::LowerMiddle, &[m])?;
    let h = homology(k, Ring::Rationals).betti[m];
    let i = ih.get(m).unwrap_or(0);
    if i != h {
        return Err(Error::FormUnavailable(format!(
            "IH_{m} has dimension {i} but H_{m} has dimension {h}; supply the form externally"
        )));
    }
    Ok(())
}

/// `B(α, β) = ⟨α ⌣ β, [K]⟩` on a basis of `H^m`, with the front-face /
/// back-face rule in vertex-id order.
pub fn cup_form_middle(k: &SimplicialComplex, orientation: &Orientation) -> Result<MiddleForm> {
    let n = k.dim();
    if orientation.dim() != n || !orientation.is_coherent(k) {
        return Err(Error::NotOriented);
    }
    check_middle_regime(k)?;
    let m = n / 2;
    let alpha: Vec<QVec> = cohomology_basis(k, m).iter().map(|v| v.to_rational()).collect();
    let z: Vec<QVec> = homology_basis(k, m).iter().map(|v| v.to_rational()).collect();
    let r = alpha.len();
    if z.len() != r {
        return Err(Error::Internal(format!("{} cocycles against {} cycles", r, z.len())));
    }
    let p = QMatrix::from_rows(alpha.iter().map(|a| z.iter().map(|c| pair(a, c)).collect()).collect());
    let pinv = p.inverse().ok_or_else(|| Error::Internal("Kronecker pairing is singular".into()))?;
    let cycles: Vec<QVec> = (0..r)
        .map(|j| {
            let mut acc = QVec::new();
            for (kk, zk) in z.iter().enumerate() {
                if !pinv[(kk, j)].is_zero() {
                    acc = acc.axpy(&pinv[(kk, j)], zk);
                }
            }
            acc
        })
        .collect();
    let mid = k.simplices(m);
    let mut b = QMatrix::zeros(r, r);
    for (t, s) in k.simplices(n).iter().enumerate() {
        let front = mid.get_index_of(&s[..=m]).unwrap() as u32;
        let back = mid.get_index_of(&s[m..]).unwrap() as u32;
        let eps = Q::from_integer(orientation.sign(t).into());
        let fa: Vec<(usize, &Q)> = alpha.iter().enumerate().filter_map(|(i, a)| a.get(front).map(|x| (i, x))).collect();
        if fa.is_empty() {
            continue;
        }
        let ba: Vec<(usize, &Q)> = alpha.iter().enumerate().filter_map(|(j, a)| a.get(back).map(|x| (j, x))).collect();
        for &(i, x) in &fa {
            for &(j, y) in &ba {
                b[(i, j)] += &eps * x * y;
            }
        }
    }
    let parity = if m % 2 == 0 { Parity::Symmetric } else { Parity::Skew };
    let ok = match parity {
        Parity::Symmetric => b.is_symmetric(),
        Parity::Skew => b.is_skew(),
    };
    if !ok {
        return Err(Error::Internal("cup form has the wrong symmetry".into()));
    }
    Ok(MiddleForm { degree: m, cocycles: alpha, cycles, matrix: b, parity })
}

/// Positive, negative and zero counts of a symmetric rational matrix,
/// by congruence diagonalization.
pub fn inertia(b: &QMatrix) -> Result<(usize, usize, usize)> {
    if !b.is_square() || !b.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let mut a: Vec<Vec<Q>> = (0..b.rows()).map(|i| b.row(i).to_vec()).collect();
    let (mut pos, mut neg, mut zero) = (0, 0, 0);
    while !a.is_empty() {
        let n = a.len();
        let pivot = (0..n).find(|&i| !a[i][i].is_zero());
        let p = match pivot {
            Some(p) => p,
            None => {
                let Some((i, j)) = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).find(|&(i, j)| !a[i][j].is_zero())
                else {
                    zero += n;
                    break;
                };
                // e_i ← e_i + e_j makes the diagonal entry 2·a_ij
                for r in 0..n {
                    let v = a[r][j].clone();
                    a[r][i] += v;
                }
                for c in 0..n {
                    let v = a[j][c].clone();
                    a[i][c] += v;
                }
                i
            }
        };
        let d = a[p][p].clone();
        if d.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        let row = a[p].clone();
        let mut next = Vec::with_capacity(n - 1);
        for (r, ar) in a.iter().enumerate() {
            if r == p {
                continue;
            }
            let f = &ar[p] / &d;
            let new_row: Vec<Q> = (0..n).filter(|&c| c != p).map(|c| &ar[c] - &f * &row[c]).collect();
            next.push(new_row);
        }
        a = next;
    }
    Ok((pos, neg, zero))
}

/// Signature of a symmetric rational matrix.
pub fn signature_exact(b: &QMatrix) -> Result<i64> {
    let (p, n, _) = inertia(b)?;
    Ok(p as i64 - n as i64)
}

/// Matrices of the group elements on the basis of a [`MiddleForm`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GRep {
    pub matrices: Vec<QMatrix>,
}

impl GRep {
    /// Checks `ρ(gh) = ρ(g) ρ(h)` against the table of `action.group()`.
    pub fn new(group: &crate::action::FiniteGroup, matrices: Vec<QMatrix>) -> Result<Self> {
        if matrices.len() != group.order() {
            return Err(Error::BadRep(format!("{} matrices for {} elements", matrices.len(), group.order())));
        }
        let d = matrices.first().map_or(0, |m| m.rows());
        if matrices.iter().any(|m| m.rows() != d || m.cols() != d) {
            return Err(Error::BadRep("matrices differ in size".into()));
        }
        for a in group.elements() {
            for b in group.elements() {
                if &matrices[a as usize] * &matrices[b as usize] != matrices[group.mul(a, b) as usize] {
                    return Err(Error::BadRep(format!("ρ({}·{}) ≠ ρ({})ρ({})", group.label(a), group.label(b), group.label(a), group.label(b))));
                }
            }
        }
        Ok(GRep { matrices })
    }

    /// The action on `H^m` by `(g⁻¹)^*`, which the Poincaré duality of the
    /// form's basis turns into `g_*` on `H_m`.
    pub fn from_action(action: &GroupAction, form: &MiddleForm) -> Result<Self> {
        let k = action.complex();
        let m = form.degree;
        let mid = k.simplices(m);
        let r = form.rank();
        let group = action.group();
        let matrices = crate::exec::map_range(group.order(), |g| {
            let ginv = group.inv(g as u32);
            let pushed: Vec<QVec> = form
                .cycles
                .iter()
                .map(|z| {
                    let pairs: Vec<(u32, BigRational)> = z
                        .iter()
                        .map(|(i, x)| {
                            let mut t: Vec<u32> = mid[i as usize].iter().map(|&v| action.apply(ginv, v)).collect();
                            let sign = sort_sign(&mut t);
                            let j = mid.get_index_of(&t[..]).expect("simplicial");
                            (j as u32, x * BigRational::from_integer(BigInt::from(sign)))
                        })
                        .collect();
                    QVec::from_rational_pairs(pairs)
                })
                .collect();
            let mut rho = QMatrix::zeros(r, r);
            for (i, zi) in pushed.iter().enumerate() {
                for (kk, ak) in form.cocycles.iter().enumerate() {
                    rho[(i, kk)] = pair(ak, zi);
                }
            }
            rho
        });
        Self::new(group, matrices)
    }

    pub fn dim(&self) -> usize {
        self.matrices.first().map_or(0, |m| m.rows())
    }

    /// `(1/|G|) Σ_g tr ρ(g)`.
    pub fn average_trace(&self) -> Q {
        let s: Q = self.matrices.iter().map(|m| m.trace()).sum();
        s / Q::from_integer(BigInt::from(self.matrices.len()))
    }

    /// Whether `ρ(g)ᵀ B ρ(g) = B`.
    pub fn preserves(&self, g: u32, b: &QMatrix) -> bool {
        b.congruent(&self.matrices[g as usize]) == *b
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::fundamental_class;
    use crate::linalg::q;

    #[test]
    fn signatures_of_small_forms() {
        assert_eq!(signature_exact(&QMatrix::from_i64(&[&[0, 1], &[1, 0]])).unwrap(), 0);
        assert_eq!(signature_exact(&QMatrix::from_i64(&[&[2]])).unwrap(), 1);
        assert_eq!(signature_exact(&QMatrix::diagonal(&[q(1), q(1), q(-1)])).unwrap(), 1);
        assert_eq!(inertia(&QMatrix::from_i64(&[&[0, 0], &[0, 0]])).unwrap(), (0, 0, 2));
        assert!(matches!(signature_exact(&QMatrix::from_i64(&[&[0, 1], &[2, 0]])), Err(Error::NotSymmetric)));
    }

    #[test]
    fn torus_form_is_skew_and_unimodular() {
        let c = SimplicialComplex::from_index_facets(&[vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
        let t = c.product(&c, &[0, 1, 2], &[0, 1, 2]).unwrap();
        let o = fundamental_class(&t).unwrap();
        let f = cup_form_middle(&t, &o).unwrap();
        assert_eq!(f.parity, Parity::Skew);
        assert_eq!(f.matrix.determinant(), q(1));
    }

    #[test]
    fn sphere_has_empty_middle_form() {
        let s4 = SimplicialComplex::from_index_facets(
            &(0..6u32).map(|i| (0..6u32).filter(|&j| j != i).collect()).collect::<Vec<_>>(),
        )
        .unwrap();
        let o = fundamental_class(&s4).unwrap();
        let f = cup_form_middle(&s4, &o).unwrap();
        assert_eq!(f.rank(), 0);
        assert_eq!(signature_exact(&f.matrix).unwrap(), 0);
    }

    #[test]
    fn sphere_with_two_points_identified_is_outside_the_regime() {
        let s2 = SimplicialComplex::from_index_facets(&[vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]])
            .unwrap();
        let sd = s2.barycentric_subdivision().complex;
        let a = s2.id_of(&[0]).unwrap() as u32;
        let b = s2.id_of(&[1, 2, 3]).unwrap() as u32;
        let glue = |v: u32| if v == b { a } else if v > b { v - 1 } else { v };
        let facets: Vec<Vec<u32>> = sd.facets().iter().map(|f| f.iter().map(|&v| glue(v)).collect()).collect();
        let pinched = SimplicialComplex::from_index_facets(&facets).unwrap();
        assert_eq!(homology(&pinched, Ring::Rationals).betti, vec![1, 1, 1]);
        assert!(matches!(check_middle_regime(&pinched), Err(Error::FormUnavailable(_))));
    }
}

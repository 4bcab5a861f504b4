use nalgebra::{DMatrix, SymmetricEigen};
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::{cup_form_middle, signature_exact, GRep, MiddleForm, Parity};
use crate::action::GroupAction;
use crate::complex::Orientation;
use crate::error::{Error, Result};
use crate::linalg::{QMatrix, Q};

/// Tolerances of the floating-point evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericTolerance {
    /// Eigenvalues below `degeneracy · ‖A‖` are treated as a rank loss.
    pub degeneracy: f64,
    /// Absolute error bound reported for traces.
    pub trace: f64,
    /// Distance to the nearest integer below which real values are snapped.
    pub snap: f64,
}

impl Default for NumericTolerance {
    fn default() -> Self {
        NumericTolerance { degeneracy: 1e-9, trace: 1e-8, snap: 1e-6 }
    }
}

/// `Sign(g, X)`: real in even middle degree, purely imaginary in odd.
#[derive(Debug, Clone, PartialEq)]
pub enum SignatureValue {
    Exact(i64),
    Approx { re: f64, im: f64, snapped: bool },
}

impl SignatureValue {
    pub fn re(&self) -> f64 {
        match self {
            SignatureValue::Exact(v) => *v as f64,
            SignatureValue::Approx { re, .. } => *re,
        }
    }

    pub fn im(&self) -> f64 {
        match self {
            SignatureValue::Exact(_) => 0.0,
            SignatureValue::Approx { im, .. } => *im,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, SignatureValue::Exact(_))
    }

    pub fn approx_eq(&self, other: &SignatureValue, tol: f64) -> bool {
        (self.re() - other.re()).abs() < tol && (self.im() - other.im()).abs() < tol
    }
}

/// Restriction of `b` to the column space of `basis`.
fn restrict(b: &QMatrix, basis: &QMatrix) -> QMatrix {
    b.congruent(basis)
}

/// `Sign(g, X)`. Involutions (and the identity) are evaluated exactly on
/// the `±1` eigenspaces; other elements numerically, through the complex
/// structure of an averaged invariant inner product.
pub fn g_signature(form: &MiddleForm, rep: &GRep, g: u32, tol: &NumericTolerance) -> Result<SignatureValue> {
    let b = &form.matrix;
    if !rep.preserves(g, b) {
        return Err(Error::NotInvariant(g.to_string()));
    }
    let rho = &rep.matrices[g as usize];
    let id = QMatrix::identity(rep.dim());
    if &(rho * rho) == &id {
        if form.parity == Parity::Skew {
            return Ok(SignatureValue::Exact(0));
        }
        let plus = (rho - &id).kernel();
        let minus = (rho + &id).kernel();
        let s = signature_exact(&restrict(b, &plus))? - signature_exact(&restrict(b, &minus))?;
        return Ok(SignatureValue::Exact(s));
    }
    numeric(form, rep, g, tol)
}

fn numeric(form: &MiddleForm, rep: &GRep, g: u32, tol: &NumericTolerance) -> Result<SignatureValue> {
    let n = rep.dim();
    let mut s = DMatrix::<f64>::zeros(n, n);
    for h in &rep.matrices {
        let hf = h.to_f64();
        s += hf.transpose() * &hf;
    }
    s /= rep.matrices.len() as f64;
    let chol = s.cholesky().ok_or_else(|| Error::Degenerate("averaged inner product is not positive definite".into()))?;
    let l = chol.l();
    let linv = l.clone().try_inverse().ok_or_else(|| Error::Degenerate("singular Cholesky factor".into()))?;
    // orthonormal coordinates y = Lᵀx
    let a = &linv * form.matrix.to_f64() * linv.transpose();
    let rho = l.transpose() * rep.matrices[g as usize].to_f64() * linv.transpose();
    let norm = a.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    match form.parity {
        Parity::Symmetric => {
            let eig = SymmetricEigen::new(a.clone());
            if eig.eigenvalues.iter().any(|l| l.abs() < tol.degeneracy * norm) {
                return Err(Error::Degenerate("intersection form has a near-zero eigenvalue".into()));
            }
            let u = &eig.eigenvectors;
            let sgn = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| l.signum()));
            let p = u * sgn * u.transpose();
            let v = (p * rho).trace();
            let r = v.round();
            let snapped = (v - r).abs() < tol.snap;
            Ok(SignatureValue::Approx { re: if snapped { r } else { v }, im: 0.0, snapped })
        }
        Parity::Skew => {
            if n == 0 {
                return Ok(SignatureValue::Approx { re: 0.0, im: 0.0, snapped: false });
            }
            let m = &a * a.transpose();
            let eig = SymmetricEigen::new(m);
            if eig.eigenvalues.iter().any(|l| l.sqrt() < tol.degeneracy * norm) {
                return Err(Error::Degenerate("intersection form has a near-zero eigenvalue".into()));
            }
            let u = &eig.eigenvectors;
            let inv_sqrt = u * DMatrix::from_diagonal(&eig.eigenvalues.map(|l| 1.0 / l.sqrt())) * u.transpose();
            let j = &a * inv_sqrt;
            // 2i·Im tr_C(g) = -i·tr(Jρ)
            let im = -(j * rho).trace();
            let r = im.round();
            let snapped = (im - r).abs() < tol.snap;
            Ok(SignatureValue::Approx { re: 0.0, im: if snapped { r } else { im }, snapped })
        }
    }
}

pub fn g_signatures(form: &MiddleForm, rep: &GRep, tol: &NumericTolerance) -> Result<Vec<SignatureValue>> {
    crate::exec::map_range(rep.matrices.len(), |g| g_signature(form, rep, g as u32, tol)).into_iter().collect()
}

#[derive(Debug, Clone)]
pub struct GSignatureReport {
    pub middle_degree: usize,
    /// `Sign(g, X)` per group element.
    pub values: Vec<SignatureValue>,
    /// `Sign(X)`.
    pub signature: i64,
    /// Signature of the orbit complex, computed on the quotient.
    pub orbit_signature: i64,
    /// `(1/|G|) Σ_g Sign(g, X)` when every value is exact.
    pub average_exact: Option<Q>,
    pub average: f64,
    pub subdivisions: usize,
    pub exact: bool,
    pub holds: bool,
    /// Whether `Sign(hgh⁻¹) = Sign(g)` for all `g, h`.
    pub conjugation_invariant: bool,
}

/// Compares `Sign(X/G)` computed on the orbit complex with the average of
/// the G-signatures computed on `X`.
pub fn averaging_check(action: &GroupAction, orientation: &Orientation, tol: &NumericTolerance) -> Result<GSignatureReport> {
    let k = action.complex();
    let preserving = action.is_orientation_preserving(orientation)?;
    if let Some(g) = preserving.iter().position(|&p| !p) {
        return Err(Error::NotInvariant(action.group().label(g as u32).to_string()));
    }
    let form = cup_form_middle(k, orientation)?;
    let rep = GRep::from_action(action, &form)?;
    let values = g_signatures(&form, &rep, tol)?;
    let signature = match form.parity {
        Parity::Symmetric => signature_exact(&form.matrix)?,
        Parity::Skew => 0,
    };

    let (reg, reg_o, subdivisions) = action.regularize_oriented(2, orientation)?;
    let orbit = reg.orbit_complex()?;
    let lo = reg.orbit_orientation(&orbit, &reg_o)?;
    let lform = cup_form_middle(&orbit.quotient, &lo)?;
    let orbit_signature = match lform.parity {
        Parity::Symmetric => signature_exact(&lform.matrix)?,
        Parity::Skew => 0,
    };

    let order = action.group().order();
    let exact = values.iter().all(SignatureValue::is_exact);
    let sum: f64 = values.iter().map(SignatureValue::re).sum();
    let average = sum / order as f64;
    let (average_exact, holds) = if exact {
        let s: i64 = values.iter().map(|v| if let SignatureValue::Exact(x) = v { *x } else { 0 }).sum();
        let avg = Q::new(BigInt::from(s), BigInt::from(order));
        let holds = avg == Q::from_integer(orbit_signature.into());
        (Some(avg), holds)
    } else {
        let im: f64 = values.iter().map(SignatureValue::im).sum::<f64>() / order as f64;
        (None, (average - orbit_signature as f64).abs() < tol.trace && im.abs() < tol.trace)
    };
    let group = action.group();
    let conjugation_invariant = group.elements().all(|g| {
        group.elements().all(|h| values[group.conjugate(h, g) as usize].approx_eq(&values[g as usize], tol.trace))
    });
    debug_assert!(average_exact.as_ref().map_or(true, |a| !a.is_zero() || sum.to_i64() == Some(0)));
    Ok(GSignatureReport {
        middle_degree: form.degree,
        values,
        signature,
        orbit_signature,
        average_exact,
        average,
        subdivisions,
        exact,
        holds,
        conjugation_invariant,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::FiniteGroup;
    use crate::linalg::q;

    fn hyperbolic() -> MiddleForm {
        MiddleForm::external(2, QMatrix::from_i64(&[&[0, 1], &[1, 0]])).unwrap()
    }

    #[test]
    fn swap_on_hyperbolic_plane() {
        let f = hyperbolic();
        let g = FiniteGroup::cyclic(2);
        let rep = GRep::new(&g, vec![QMatrix::identity(2), QMatrix::from_i64(&[&[0, 1], &[1, 0]])]).unwrap();
        let t = NumericTolerance::default();
        assert_eq!(g_signature(&f, &rep, 0, &t).unwrap(), SignatureValue::Exact(0));
        assert_eq!(g_signature(&f, &rep, 1, &t).unwrap(), SignatureValue::Exact(2));
        assert!(numeric(&f, &rep, 1, &t).unwrap().approx_eq(&SignatureValue::Exact(2), 1e-8));
    }

    #[test]
    fn rotation_of_a_skew_plane() {
        // order-4 rotation on (Q², standard symplectic form)
        let f = MiddleForm::external(1, QMatrix::from_i64(&[&[0, 1], &[-1, 0]])).unwrap();
        let r = QMatrix::from_i64(&[&[0, -1], &[1, 0]]);
        let mats = vec![QMatrix::identity(2), r.clone(), &r * &r, &(&r * &r) * &r];
        let rep = GRep::new(&FiniteGroup::cyclic(4), mats).unwrap();
        let t = NumericTolerance::default();
        let v = g_signature(&f, &rep, 1, &t).unwrap();
        assert!((v.re()).abs() < 1e-12);
        assert!((v.im().abs() - 2.0).abs() < 1e-9);
        assert_eq!(g_signature(&f, &rep, 2, &t).unwrap(), SignatureValue::Exact(0));
        assert!(numeric(&f, &rep, 2, &t).unwrap().approx_eq(&SignatureValue::Exact(0), 1e-8));
    }

    #[test]
    fn non_invariant_element_is_rejected() {
        let f = hyperbolic();
        let flip = QMatrix::diagonal(&[q(1), q(-1)]);
        let rep = GRep::new(&FiniteGroup::cyclic(2), vec![QMatrix::identity(2), flip]).unwrap();
        assert!(matches!(g_signature(&f, &rep, 1, &NumericTolerance::default()), Err(Error::NotInvariant(_))));
    }
}

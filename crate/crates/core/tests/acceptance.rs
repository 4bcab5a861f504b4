//! Acceptance suite: one line per criterion, non-zero exit on any failure.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use ihsig_core::action::{check_pseudomanifold, GroupAction};
use ihsig_core::catalog::{self, CatalogAction};
use ihsig_core::complex::{fundamental_class, homology, simplex, Ring};
use ihsig_core::filtered::{intersection_homology, intersection_homology_degrees, FilteredComplex, Perversity};
use ihsig_core::linalg::QMatrix;
use ihsig_core::signature::{
    averaging_check, cup_form_middle, g_signature, GRep, NumericTolerance, SignatureValue,
};
use ihsig_core::transfer::{invariant_subspace, transfers, verify_transfer_identities};
use ihsig_core::witt::{is_witt, suspension_ih_oracle};
use ihsig_core::{Error, SimplicialComplex};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn criterion(n: usize, title: &str, budget: Duration, run: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let out = run();
    let t = start.elapsed();
    let (ok, detail) = match out {
        Ok(d) if t <= budget => (true, d),
        Ok(d) => (false, format!("{d}; over budget {:.0?}", budget)),
        Err(e) => (false, e),
    };
    println!(
        "criterion {n} [{title}]: {} in {:.2?} (budget {:.0?}) {detail}",
        if ok { "PASS" } else { "FAIL" },
        t,
        budget
    );
    ok
}

/// Catalog actions on oriented pseudomanifolds whose elements preserve the
/// orientation.
fn oriented_actions() -> Vec<CatalogAction> {
    catalog::actions()
        .into_iter()
        .filter(|c| check_pseudomanifold(c.action.complex()).is_pseudomanifold() && c.is_oriented())
        .collect()
}

fn homology_baseline() -> Outcome {
    for n in 1..=6 {
        let h = homology(&catalog::sphere(n), Ring::Integers);
        let mut want = vec![0; n + 1];
        want[0] = 1;
        want[n] = 1;
        ensure(h.betti == want && h.torsion.iter().all(Vec::is_empty), || format!("sphere {n}: {:?}", h))?;
    }
    let t = homology(&catalog::torus(), Ring::Integers);
    ensure(t.betti == vec![1, 2, 1], || format!("torus {:?}", t.betti))?;
    let rp = homology(&catalog::rp2(), Ring::Integers);
    ensure(rp.torsion[1] == vec![BigInt::from(2)] && rp.betti == vec![1, 0, 0], || format!("rp2 {:?}", rp))?;
    Ok("spheres 1..6, T² (1,2,1), RP² H_1 = Z/2".into())
}

fn ih_suspensions() -> Outcome {
    let st = catalog::torus().suspension();
    let nv = st.num_vertices() as u32;
    let poles = FilteredComplex::point_filtration(&st, &[nv - 2, nv - 1]).map_err(|e| e.to_string())?;
    let a = intersection_homology(&poles, &Perversity::LowerMiddle).map_err(|e| e.to_string())?.betti;
    let b = intersection_homology(&FilteredComplex::skeletal(&st), &Perversity::LowerMiddle).map_err(|e| e.to_string())?.betti;
    ensure(a == vec![1, 2, 0, 1] && b == a, || format!("ΣT²: poles {a:?}, skeletal {b:?}"))?;
    let disjoint = SimplicialComplex::disjoint_union(&[&catalog::sphere(2), &catalog::sphere(2)]);
    let mut checked = 0;
    for (name, l) in [("S²", catalog::sphere(2)), ("T²", catalog::torus()), ("S²⊔S²", disjoint)] {
        let half = l.dim() / 2;
        let oracle: Vec<usize> =
            (0..=half).map(|i| suspension_ih_oracle(&l, 0, i)).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
        for s in 1..=3 {
            let sl = l.iterated_suspension(s);
            let degrees: Vec<usize> = (0..=half).collect();
            let got = intersection_homology_degrees(&FilteredComplex::skeletal(&sl), &Perversity::LowerMiddle, &degrees)
                .map_err(|e| e.to_string())?
                .betti;
            ensure(got == oracle, || format!("Σ^{s}{name}: {got:?} against {oracle:?}"))?;
            checked += 1;
        }
    }
    Ok(format!("ΣT² = (1,2,0,1); {checked} suspensions match the oracle"))
}

fn pseudomanifolds() -> Outcome {
    let s3 = check_pseudomanifold(&catalog::sphere(3));
    ensure(s3.pm1 && s3.pm2 && s3.orientable, || "∂Δ⁴ should be an oriented pseudomanifold".into())?;
    let dangling = SimplicialComplex::from_index_facets(&[vec![0, 1, 2], vec![2, 3]]).unwrap();
    let r = check_pseudomanifold(&dangling);
    ensure(!r.pm1 && r.pm1_violations == vec![simplex([2, 3])], || format!("dangling edge: {r:?}"))?;
    let book = SimplicialComplex::from_index_facets(&[vec![0, 1, 2], vec![0, 1, 3], vec![0, 1, 4]]).unwrap();
    let r = check_pseudomanifold(&book);
    ensure(!r.pm2 && r.pm2_violations.iter().any(|(s, c)| s[..] == [0, 1] && *c == 3), || format!("book: {r:?}"))?;
    let rp = check_pseudomanifold(&catalog::rp2());
    ensure(rp.pm1 && rp.pm2 && !rp.orientable, || "RP² should not be orientable".into())?;
    ensure(matches!(fundamental_class(&catalog::rp2()), Err(Error::OrientationFailure(_))), || {
        "RP² propagation should fail".into()
    })?;
    let mut names = Vec::new();
    for c in oriented_actions() {
        let (reg, o, _) = c.action.regularize_oriented(2, c.orientation.as_ref().unwrap()).map_err(|e| e.to_string())?;
        let orbit = reg.orbit_complex().map_err(|e| format!("{}: {e}", c.name))?;
        let r = check_pseudomanifold(&orbit.quotient);
        let lo = reg.orbit_orientation(&orbit, &o).map_err(|e| format!("{}: {e}", c.name))?;
        ensure(r.pm1 && r.pm2 && r.orientable && lo.is_coherent(&orbit.quotient), || format!("{}: orbit {r:?}", c.name))?;
        names.push(c.name);
    }
    Ok(format!("witnesses as expected; orbit complexes oriented pseudomanifolds for {}", names.join(", ")))
}

fn witt_suite() -> Outcome {
    for (name, k) in [("T²", catalog::torus()), ("7-vertex torus", catalog::mobius_torus()), ("RP²", catalog::rp2()), ("S²", catalog::sphere(2))] {
        ensure(is_witt(&k).map_err(|e| e.to_string())?.is_witt, || format!("{name} should be Witt"))?;
    }
    ensure(is_witt(&catalog::sphere(2).suspension()).map_err(|e| e.to_string())?.is_witt, || "ΣS² should be Witt".into())?;
    let st = catalog::torus().suspension();
    let r = is_witt(&st).map_err(|e| e.to_string())?;
    let poles: Vec<Vec<String>> = vec![vec!["N".into()], vec!["S".into()]];
    let witnesses: Vec<Vec<String>> = r.failures.iter().map(|f| f.simplex.clone()).collect();
    ensure(!r.is_witt && witnesses == poles && r.failures.iter().all(|f| f.ih_dim == 2), || format!("ΣT²: {r:?}"))?;
    let mut names = Vec::new();
    for c in oriented_actions() {
        if !is_witt(c.action.complex()).map_err(|e| e.to_string())?.is_witt {
            continue;
        }
        let (reg, _) = c.action.regularize(2).map_err(|e| e.to_string())?;
        let orbit = reg.orbit_complex().map_err(|e| e.to_string())?;
        let w = is_witt(&orbit.quotient).map_err(|e| format!("{}: {e}", c.name))?;
        ensure(w.is_witt, || format!("{}: orbit complex fails Witt at {:?}", c.name, w.failures))?;
        names.push(c.name);
    }
    Ok(format!("surfaces and ΣS² Witt, ΣT² fails at N and S; Witt orbit complexes for {}", names.join(", ")))
}

fn transfer_suite() -> Outcome {
    let triangles = catalog::disjoint_copies("disjoint-triangles", &SimplicialComplex::from_index_facets(&[vec![0, 1, 2]]).unwrap(), 2);
    let circles = catalog::disjoint_copies("disjoint-circles", &catalog::sphere(1), 2);
    let mut lines = Vec::new();
    for c in [catalog::circle_half_turn(8), catalog::octahedron_rotation(), triangles, circles] {
        let n = c.action.complex().dim();
        let degrees: Vec<usize> = (0..=n).collect();
        let tds = transfers(&c.action, &Perversity::LowerMiddle, &degrees).map_err(|e| format!("{}: {e}", c.name))?;
        for td in &tds {
            let v = verify_transfer_identities(td);
            ensure(v.passes(), || format!("{}: {:?}", c.name, v.failures))?;
        }
        if c.name == "octahedron-rotation" {
            let m = tds[2].ih.g_star.iter().fold(QMatrix::zeros(tds[2].ih.pi_star.cols(), tds[2].ih.pi_star.cols()), |a, g| &a + g);
            ensure(m.rank() == 1, || format!("Σ g_* on IH_2 has rank {}", m.rank()))?;
        }
        lines.push(format!("{} (d = {}, degrees 0..={n})", c.name, tds[0].d));
    }
    Ok(lines.join("; "))
}

fn flagship() -> Outcome {
    let c = catalog::s2xs2_swap();
    let o = c.orientation.clone().unwrap();
    let r = averaging_check(&c.action, &o, &NumericTolerance::default()).map_err(|e| e.to_string())?;
    ensure(r.signature == 0, || format!("Sign(X) = {}", r.signature))?;
    ensure(r.values[1] == SignatureValue::Exact(2), || format!("Sign(swap) = {:?}", r.values[1]))?;
    ensure(r.orbit_signature == 1, || format!("orbit signature {}", r.orbit_signature))?;
    ensure(r.exact && r.holds, || format!("averaging {:?}", r.average_exact))?;
    Ok(format!(
        "Sign(X) = 0, Sign(swap) = 2 exact, orbit signature 1 after {} subdivision(s), (0 + 2)/2 = 1",
        r.subdivisions
    ))
}

/// Middle forms and representations of every catalog action where the cup
/// form is available.
fn catalog_reps() -> Vec<(String, GroupAction, ihsig_core::signature::MiddleForm, GRep)> {
    let mut out = Vec::new();
    for c in oriented_actions() {
        let o = c.orientation.as_ref().unwrap();
        let Ok(form) = cup_form_middle(c.action.complex(), o) else { continue };
        let rep = GRep::from_action(&c.action, &form).expect("representation");
        out.push((c.name, c.action, form, rep));
    }
    out
}

fn conjugation_and_traces() -> Outcome {
    let tol = NumericTolerance::default();
    let reps = catalog_reps();
    let mut names = Vec::new();
    for (name, action, form, rep) in &reps {
        let g = action.group();
        let values: Vec<SignatureValue> =
            g.elements().map(|x| g_signature(form, rep, x, &tol)).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
        for class in g.conjugacy_classes() {
            let v0 = &values[class[0] as usize];
            ensure(class.iter().all(|&x| values[x as usize].approx_eq(v0, tol.trace)), || {
                format!("{name}: values differ on the class {class:?}")
            })?;
        }
        let inv = invariant_subspace(&rep.matrices).map_err(|e| e.to_string())?;
        let avg = rep.average_trace();
        ensure(avg == ihsig_core::linalg::Q::from_integer(BigInt::from(inv.cols())), || {
            format!("{name}: average trace {avg} against invariant dimension {}", inv.cols())
        })?;
        names.push(name.clone());
    }
    Ok(format!("{} representations: {}", names.len(), names.join(", ")))
}

fn free_vanishing() -> Outcome {
    let tol = NumericTolerance::default();
    let mut lines = Vec::new();
    let mut skipped = Vec::new();
    for c in catalog::actions() {
        if !c.action.is_free().map_err(|e| e.to_string())? {
            continue;
        }
        let form = match c.orientation.as_ref().filter(|_| c.is_oriented()).map(|o| cup_form_middle(c.action.complex(), o)) {
            Some(Ok(f)) => f,
            _ => {
                skipped.push(c.name);
                continue;
            }
        };
        let rep = GRep::from_action(&c.action, &form).map_err(|e| e.to_string())?;
        let id = c.action.group().identity();
        for g in c.action.group().elements().filter(|&g| g != id) {
            let v = g_signature(&form, &rep, g, &tol).map_err(|e| e.to_string())?;
            let ok = match v {
                SignatureValue::Exact(x) => x == 0,
                SignatureValue::Approx { re, im, .. } => re.abs() < 1e-8 && im.abs() < 1e-8,
            };
            ensure(ok, || format!("{}: Sign({}) = {v:?}", c.name, c.action.group().label(g)))?;
        }
        lines.push(c.name);
    }
    ensure(!lines.is_empty(), || "no free action with a middle form".into())?;
    Ok(format!("vanishes on {}; no middle form for {}", lines.join(", "), skipped.join(", ")))
}

fn main() {
    let results = [
        criterion(1, "homology baseline", Duration::from_secs(5), homology_baseline),
        criterion(2, "IH suspension suite", Duration::from_secs(60), ih_suspensions),
        criterion(3, "pseudomanifold and orientation", Duration::from_secs(60), pseudomanifolds),
        criterion(4, "Witt suite", Duration::from_secs(300), witt_suite),
        criterion(5, "transfer identities", Duration::from_secs(60), transfer_suite),
        criterion(6, "G-signature flagship", Duration::from_secs(900), flagship),
        criterion(7, "conjugation and trace identities", Duration::from_secs(10), conjugation_and_traces),
        criterion(8, "free-action vanishing", Duration::from_secs(30), free_vanishing),
    ];
    let failed = results.iter().filter(|ok| !**ok).count();
    println!("acceptance: {} of {} criteria pass", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

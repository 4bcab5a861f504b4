use std::path::Path;
use std::process::Command;

use ihsig_cli::pipeline::{run_pipeline, PipelineConfig, Stage};
use ihsig_cli::{gen, scx};
use ihsig_core::catalog;
use ihsig_core::complex::Ring;
use ihsig_core::filtered::Perversity;
use serde_json::Value;

fn ihsig(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_ihsig")).args(args).output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

fn config(stages: Vec<Stage>) -> PipelineConfig {
    PipelineConfig {
        stages,
        perversity: Perversity::LowerMiddle,
        ring: Ring::Integers,
        tolerance: 1e-8,
        max_subdivisions: 2,
        jobs: 1,
        timing: false,
    }
}

#[test]
fn catalog_complexes_round_trip() {
    let mut complexes = vec![
        catalog::sphere(1),
        catalog::sphere(4),
        catalog::torus(),
        catalog::torus4(),
        catalog::rp2(),
        catalog::cp2(),
        catalog::mobius_torus(),
        catalog::octahedron(),
        catalog::s2xs2().0,
        catalog::torus().iterated_suspension(2),
    ];
    for c in catalog::actions() {
        let text = scx::serialize(c.action.complex(), Some(&c.action), c.orientation.as_ref());
        let f = scx::parse(&text).unwrap_or_else(|e| panic!("{}: {e}", c.name));
        assert_eq!(&f.complex, c.action.complex(), "{}", c.name);
        if c.action.group().order() > 1 {
            assert_eq!(f.action.as_ref(), Some(&c.action), "{}", c.name);
        }
        assert_eq!(f.orientation, c.orientation, "{}", c.name);
        complexes.push(c.action.complex().clone());
    }
    for k in complexes {
        let f = scx::parse(&scx::serialize(&k, None, None)).unwrap();
        assert_eq!(f.complex, k);
    }
}

#[test]
fn reports_are_deterministic() {
    let f = scx::parse(&gen::catalog_file("octahedron", None).unwrap()).unwrap();
    let run = || serde_json::to_string_pretty(&run_pipeline("octahedron.scx", &f, &config(Stage::ALL.to_vec())).value).unwrap();
    let a = run();
    assert_eq!(a, run());
    let v: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["verdict"], "pass");
    let keys: Vec<&String> = v["stages"].as_object().unwrap().keys().collect();
    assert_eq!(keys, ["pm", "homology", "ih", "witt", "orbit", "signature", "g-signature", "transfer", "averaging"]);
}

#[test]
fn suspended_torus_fails_witt_at_the_poles() {
    let dir = tempfile::tempdir().unwrap();
    let (code, torus, _) = ihsig(&["gen", "torus"]);
    assert_eq!(code, 0);
    let t = write(dir.path(), "t.scx", &torus);
    let (code, st, _) = ihsig(&["gen", "suspend", &t, "1"]);
    assert_eq!(code, 0);
    let st = write(dir.path(), "st.scx", &st);
    let (code, out, _) = ihsig(&["witt", &st]);
    assert_eq!(code, 1);
    let v: Value = serde_json::from_str(&out).unwrap();
    let w = &v["stages"]["witt"];
    assert_eq!(w["status"], "fail");
    let witnesses: Vec<&Value> = w["failures"].as_array().unwrap().iter().map(|f| &f["simplex"]).collect();
    assert_eq!(witnesses, [&serde_json::json!(["N"]), &serde_json::json!(["S"])]);
}

#[test]
fn sphere_homology_and_ih() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s3.scx");
    let (code, _, _) = ihsig(&["gen", "sphere", "3", "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    let (code, report, _) = ihsig(&["homology", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&report).unwrap();
    assert_eq!(v["stages"]["homology"]["betti"], serde_json::json!([1, 0, 0, 1]));
    let (code, report, _) = ihsig(&["ih", out.to_str().unwrap(), "--perversity", "n"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&report).unwrap();
    assert_eq!(v["stages"]["ih"]["betti"], serde_json::json!([1, 0, 0, 1]));
}

#[test]
fn rp2_torsion_is_reported_over_the_integers() {
    let dir = tempfile::tempdir().unwrap();
    let (_, rp2, _) = ihsig(&["gen", "rp2"]);
    let p = write(dir.path(), "rp2.scx", &rp2);
    let (code, report, _) = ihsig(&["homology", &p]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&report).unwrap();
    assert_eq!(v["stages"]["homology"]["torsion"][1], serde_json::json!(["2"]));
    let (code, report, _) = ihsig(&["check-pm", &p]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&report).unwrap();
    assert_eq!(v["stages"]["pm"]["orientable"], false);
    let (code, report, _) = ihsig(&["signature", &p]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&report).unwrap();
    assert_eq!(v["stages"]["signature"]["status"], "not-applicable");
}

#[test]
fn input_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.scx", "0 1\n1 2\n2 3\n3 0\ngroup cyclic 2\ngen 1: 0->1 1->0\n");
    let (code, _, err) = ihsig(&["check-pm", &bad]);
    assert_eq!(code, 2);
    assert!(err.contains("line 6") && err.contains("not simplicial"), "{err}");
    let good = write(dir.path(), "good.scx", "0 1\n1 2\n2 0\n");
    assert_eq!(ihsig(&["check-pm", &good, "--tolerance", "0"]).0, 2);
    assert_eq!(ihsig(&["check-pm", &good, "--max-subdiv", "3"]).0, 2);
    assert_eq!(ihsig(&["check-pm", &good, "--perversity", "0,2"]).0, 2);
    assert_eq!(ihsig(&["gen", "no-such-thing"]).0, 2);
}

#[test]
fn non_pseudomanifold_fails_check_pm() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "book.scx", "# three pages on one spine\n0 1 2\n0 1 3\n0 1 4\n");
    let (code, report, _) = ihsig(&["check-pm", &p]);
    assert_eq!(code, 1);
    let v: Value = serde_json::from_str(&report).unwrap();
    assert_eq!(v["stages"]["pm"]["pm2_witnesses"][0]["simplex"], serde_json::json!(["0", "1"]));
}

#[test]
fn free_half_turn_transfer_and_vanishing() {
    let dir = tempfile::tempdir().unwrap();
    let (_, text, _) = ihsig(&["gen", "half-turn", "8"]);
    let p = write(dir.path(), "h.scx", &text);
    let (code, report, _) = ihsig(&["verify-transfer", &p]);
    assert_eq!(code, 0, "{report}");
    let v: Value = serde_json::from_str(&report).unwrap();
    assert_eq!(v["stages"]["transfer"]["status"], "pass");
    assert_eq!(v["stages"]["transfer"]["degrees"].as_array().unwrap().len(), 2);
}

#[test]
fn swap_pipeline_averaging() {
    let (code, text, _) = ihsig(&["gen", "s2xs2-swap"]);
    assert_eq!(code, 0);
    let f = scx::parse(&text).unwrap();
    let r = run_pipeline("s2xs2.scx", &f, &config(Stage::ALL.to_vec()));
    let v = &r.value;
    assert_eq!(v["verdict"], "pass", "{v:#}");
    let avg = &v["stages"]["averaging"];
    assert_eq!(avg["status"], "pass");
    assert_eq!(avg["values"], serde_json::json!({ "e": "0", "g0": "2" }));
    assert_eq!(avg["orbit_signature"], "1");
    assert_eq!(avg["average"], "1");
    assert_eq!(v["stages"]["orbit"]["witt"], true);
    assert_eq!(v["stages"]["transfer"]["status"], "not-applicable");
    assert_eq!(r.exit_code(), 0);
}

mod round_trip {
    use super::*;
    use proptest::prelude::*;
    use ihsig_core::SimplicialComplex;

    proptest! {
        #[test]
        fn random_complexes_round_trip(f in prop::collection::vec(prop::collection::btree_set(0u32..9, 1..5), 1..8)) {
            let f: Vec<Vec<u32>> = f.into_iter().map(|s| s.into_iter().collect()).collect();
            let k = SimplicialComplex::from_index_facets(&f).unwrap();
            let parsed = scx::parse(&scx::serialize(&k, None, None)).unwrap();
            prop_assert_eq!(parsed.complex, k);
        }
    }
}

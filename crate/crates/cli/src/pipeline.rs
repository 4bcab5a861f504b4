//! Stage orchestration and the JSON report.

use std::time::Instant;

use ihsig_core::action::{check_pseudomanifold, GroupAction, PseudomanifoldReport};
use ihsig_core::complex::{fundamental_class, homology, Ring};
use ihsig_core::filtered::{intersection_homology, FilteredComplex, Perversity};
use ihsig_core::linalg::{fmt_q, QMatrix};
use ihsig_core::signature::{
    averaging_check, cup_form_middle, g_signatures, inertia, GRep, NumericTolerance, Parity, SignatureValue,
};
use ihsig_core::transfer::{transfer, verify_transfer_identities};
use ihsig_core::witt::is_witt;
use ihsig_core::{Error as CoreError, Orientation, SimplicialComplex};
use serde_json::{json, Map, Value};

use crate::scx::ScxFile;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Stage {
    Pm,
    Homology,
    Ih,
    Witt,
    Orbit,
    Signature,
    GSignature,
    Transfer,
    Averaging,
}

impl Stage {
    pub const ALL: [Stage; 9] = [
        Stage::Pm,
        Stage::Homology,
        Stage::Ih,
        Stage::Witt,
        Stage::Orbit,
        Stage::Signature,
        Stage::GSignature,
        Stage::Transfer,
        Stage::Averaging,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Stage::Pm => "pm",
            Stage::Homology => "homology",
            Stage::Ih => "ih",
            Stage::Witt => "witt",
            Stage::Orbit => "orbit",
            Stage::Signature => "signature",
            Stage::GSignature => "g-signature",
            Stage::Transfer => "transfer",
            Stage::Averaging => "averaging",
        }
    }
}

#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub stages: Vec<Stage>,
    pub perversity: Perversity,
    pub ring: Ring,
    pub tolerance: f64,
    pub max_subdivisions: usize,
    pub jobs: usize,
    pub timing: bool,
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<(), String> {
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(format!("tolerance must be positive, got {}", self.tolerance));
        }
        if self.max_subdivisions > 2 {
            return Err(format!("max-subdiv must be 0, 1 or 2, got {}", self.max_subdivisions));
        }
        Ok(())
    }

    fn numeric(&self) -> NumericTolerance {
        NumericTolerance { trace: self.tolerance, ..NumericTolerance::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Pass,
    Info,
    NotApplicable,
    Fail,
    Error,
}

impl Status {
    fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Info => "info",
            Status::NotApplicable => "not-applicable",
            Status::Fail => "fail",
            Status::Error => "error",
        }
    }
}

pub struct Report {
    pub value: Value,
    pub status: Status,
}

impl Report {
    /// 0 all pass, 1 verdict failure, 3 internal error.
    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Error => 3,
            Status::Fail => 1,
            _ => 0,
        }
    }
}

/// Errors that mean a stage does not apply to the input, as opposed to a
/// failed computation.
fn inapplicable(e: &CoreError) -> bool {
    matches!(
        e,
        CoreError::FormUnavailable(_)
            | CoreError::NotOriented
            | CoreError::NotPseudomanifold(_)
            | CoreError::OrientationFailure(_)
            | CoreError::OutOfRange { .. }
            | CoreError::Unsupported(_)
            | CoreError::NotRegular
            | CoreError::NotInvariant(_)
            | CoreError::EmptyComplex
    )
}

fn rational(x: &ihsig_core::linalg::Q) -> Value {
    Value::String(fmt_q(x))
}

fn matrix(m: &QMatrix) -> Value {
    Value::Array((0..m.rows()).map(|r| Value::Array(m.row(r).iter().map(rational).collect())).collect())
}

fn signature_value(v: &SignatureValue) -> Value {
    match v {
        SignatureValue::Exact(x) => Value::String(x.to_string()),
        SignatureValue::Approx { re, im, snapped } => json!({ "approx": { "re": re, "im": im, "snapped": snapped } }),
    }
}

fn labels(k: &SimplicialComplex, s: &[u32]) -> Value {
    json!(k.labels_of(s))
}

struct Ctx<'a> {
    file: &'a ScxFile,
    action: GroupAction,
    orientation: Option<Orientation>,
    config: &'a PipelineConfig,
}

impl Ctx<'_> {
    fn k(&self) -> &SimplicialComplex {
        &self.file.complex
    }

    /// The orientation when every group element preserves it.
    fn invariant_orientation(&self) -> Result<&Orientation, CoreError> {
        let o = self.orientation.as_ref().ok_or(CoreError::NotOriented)?;
        let preserving = self.action.is_orientation_preserving(o)?;
        match preserving.iter().position(|&p| !p) {
            Some(g) => Err(CoreError::NotInvariant(self.action.group().label(g as u32).to_string())),
            None => Ok(o),
        }
    }
}

fn pm_value(k: &SimplicialComplex, r: &PseudomanifoldReport) -> Value {
    json!({
        "dim": r.dim,
        "pm1": r.pm1,
        "pm2": r.pm2,
        "orientable": r.orientable,
        "pm1_witnesses": r.pm1_violations.iter().map(|s| labels(k, s)).collect::<Vec<_>>(),
        "pm2_witnesses": r.pm2_violations.iter().map(|(s, c)| json!({ "simplex": labels(k, s), "cofaces": c })).collect::<Vec<_>>(),
    })
}

fn run_stage(ctx: &Ctx, stage: Stage) -> Result<(Status, Map<String, Value>), CoreError> {
    let k = ctx.k();
    let mut out = Map::new();
    let status = match stage {
        Stage::Pm => {
            let r = check_pseudomanifold(k);
            if let Value::Object(m) = pm_value(k, &r) {
                out.extend(m);
            }
            if r.is_pseudomanifold() { Status::Pass } else { Status::Fail }
        }
        Stage::Homology => {
            let h = homology(k, ctx.config.ring);
            out.insert("ring".into(), json!(if ctx.config.ring == Ring::Integers { "Z" } else { "Q" }));
            out.insert("betti".into(), json!(h.betti));
            let torsion: Vec<Vec<String>> = h.torsion.iter().map(|t| t.iter().map(|x| x.to_string()).collect()).collect();
            out.insert("torsion".into(), json!(torsion));
            Status::Info
        }
        Stage::Ih => {
            let r = intersection_homology(&FilteredComplex::skeletal(k), &ctx.config.perversity)?;
            out.insert("perversity".into(), json!(ctx.config.perversity.name()));
            out.insert("filtration".into(), json!("skeletal"));
            out.insert("betti".into(), json!(r.betti));
            Status::Info
        }
        Stage::Witt => {
            let r = is_witt(k)?;
            out.insert("is_witt".into(), json!(r.is_witt));
            out.insert("checked_links".into(), json!(r.checked_links));
            out.insert("exempt_links".into(), json!(r.exempt_links));
            let failures: Vec<Value> = r
                .failures
                .iter()
                .map(|f| json!({ "simplex": f.simplex, "link_dim": f.link_dim, "ih_dim": f.ih_dim }))
                .collect();
            out.insert("failures".into(), json!(failures));
            if r.is_witt { Status::Pass } else { Status::Fail }
        }
        Stage::Orbit => {
            let (reg, subdivisions) = ctx.action.regularize(ctx.config.max_subdivisions)?;
            let orbit = reg.orbit_complex()?;
            let q = &orbit.quotient;
            out.insert("subdivisions".into(), json!(subdivisions));
            out.insert("regularity_verified".into(), json!(orbit.regularity_verified));
            out.insert("degree".into(), json!(orbit.degree));
            out.insert("f_vector".into(), json!(q.f_vector()));
            out.insert("betti".into(), json!(homology(q, Ring::Rationals).betti));
            let pm = check_pseudomanifold(q);
            out.insert("pm".into(), pm_value(q, &pm));
            let source_pm = check_pseudomanifold(k);
            let mut status = Status::Info;
            if source_pm.is_pseudomanifold() && ctx.invariant_orientation().is_ok() {
                status = if pm.is_pseudomanifold() && pm.orientable { Status::Pass } else { Status::Fail };
                if is_witt(k)?.is_witt {
                    let w = is_witt(q)?;
                    out.insert("witt".into(), json!(w.is_witt));
                    if !w.is_witt {
                        status = Status::Fail;
                    }
                }
            }
            status
        }
        Stage::Signature => {
            let o = ctx.orientation.as_ref().ok_or(CoreError::NotOriented)?;
            let form = cup_form_middle(k, o)?;
            let (pos, neg, zero) = inertia(&form.matrix)?;
            out.insert("degree".into(), json!(form.degree));
            out.insert("parity".into(), json!(if form.parity == Parity::Symmetric { "symmetric" } else { "skew" }));
            out.insert("rank".into(), json!(form.rank()));
            out.insert("form".into(), matrix(&form.matrix));
            out.insert("inertia".into(), json!([pos, neg, zero]));
            let sign = if form.parity == Parity::Symmetric { pos as i64 - neg as i64 } else { 0 };
            out.insert("signature".into(), json!(sign.to_string()));
            Status::Info
        }
        Stage::GSignature => {
            let o = ctx.invariant_orientation()?;
            let form = cup_form_middle(k, o)?;
            let rep = GRep::from_action(&ctx.action, &form)?;
            let tol = ctx.config.numeric();
            let values = g_signatures(&form, &rep, &tol)?;
            let g = ctx.action.group();
            let table: Map<String, Value> =
                g.elements().map(|x| (g.label(x).to_string(), signature_value(&values[x as usize]))).collect();
            out.insert("degree".into(), json!(form.degree));
            out.insert("values".into(), Value::Object(table));
            let conj = g.conjugacy_classes().iter().all(|c| {
                c.iter().all(|&x| values[x as usize].approx_eq(&values[c[0] as usize], tol.trace))
            });
            out.insert("conjugation_invariant".into(), json!(conj));
            let mut status = if conj { Status::Pass } else { Status::Fail };
            if g.order() > 1 && ctx.action.is_free()? {
                let vanishes = g.elements().filter(|&x| x != g.identity()).all(|x| match values[x as usize] {
                    SignatureValue::Exact(v) => v == 0,
                    SignatureValue::Approx { re, im, .. } => re.abs() < tol.trace && im.abs() < tol.trace,
                });
                out.insert("free_action_vanishing".into(), json!(vanishes));
                if !vanishes {
                    status = Status::Fail;
                }
            }
            status
        }
        Stage::Transfer => {
            if ctx.action.group().order() == 1 {
                return Err(CoreError::Unsupported("trivial group".into()));
            }
            out.insert("perversity".into(), json!(ctx.config.perversity.name()));
            let mut all = true;
            let mut ran = 0;
            let mut verdicts = Vec::new();
            for degree in 0..=k.dim() {
                let td = match transfer(&ctx.action, &ctx.config.perversity, degree) {
                    Ok(td) => td,
                    Err(e) if inapplicable(&e) => {
                        verdicts.push(json!({ "degree": degree, "status": "not-applicable", "reason": e.to_string() }));
                        continue;
                    }
                    Err(e) => return Err(e),
                };
                let v = verify_transfer_identities(&td);
                all &= v.passes();
                ran += 1;
                verdicts.push(json!({
                    "degree": v.degree,
                    "status": if v.passes() { "pass" } else { "fail" },
                    "cover_degree": td.d,
                    "subdivisions": td.subdivisions,
                    "ih_dim": td.ih.pi_star.cols(),
                    "up_down": v.up_down,
                    "down_up": v.down_up,
                    "homology_up_down": v.homology_up_down,
                    "homology_down_up": v.homology_down_up,
                    "square_pi_star": v.square_pi_star,
                    "square_pi_shriek": v.square_pi_shriek,
                    "failures": v.failures,
                }));
            }
            out.insert("degrees".into(), json!(verdicts));
            if ran == 0 {
                Status::NotApplicable
            } else if all {
                Status::Pass
            } else {
                Status::Fail
            }
        }
        Stage::Averaging => {
            let o = ctx.invariant_orientation()?;
            let r = averaging_check(&ctx.action, o, &ctx.config.numeric())?;
            let g = ctx.action.group();
            let table: Map<String, Value> =
                g.elements().map(|x| (g.label(x).to_string(), signature_value(&r.values[x as usize]))).collect();
            out.insert("degree".into(), json!(r.middle_degree));
            out.insert("values".into(), Value::Object(table));
            out.insert("signature".into(), json!(r.signature.to_string()));
            out.insert("orbit_signature".into(), json!(r.orbit_signature.to_string()));
            out.insert(
                "average".into(),
                match &r.average_exact {
                    Some(a) => rational(a),
                    None => json!({ "approx": r.average }),
                },
            );
            out.insert("subdivisions".into(), json!(r.subdivisions));
            out.insert("exact".into(), json!(r.exact));
            out.insert("holds".into(), json!(r.holds));
            if r.holds { Status::Pass } else { Status::Fail }
        }
    };
    Ok((status, out))
}

fn input_summary(path: &str, ctx: &Ctx) -> Value {
    let k = ctx.k();
    let g = ctx.action.group();
    json!({
        "path": path,
        "dim": k.dim(),
        "vertices": k.num_vertices(),
        "f_vector": k.f_vector(),
        "group_order": g.order(),
        "group_elements": g.labels(),
        "oriented": ctx.orientation.is_some(),
    })
}

pub fn run_pipeline(path: &str, file: &ScxFile, config: &PipelineConfig) -> Report {
    ihsig_core::exec::configure_jobs(config.jobs);
    let action = match &file.action {
        Some(a) => a.clone(),
        None => match GroupAction::trivial(file.complex.clone()) {
            Ok(a) => a,
            Err(e) => {
                return Report { value: json!({ "error": e.to_string() }), status: Status::Error };
            }
        },
    };
    let orientation = file.orientation.clone().or_else(|| fundamental_class(&file.complex).ok());
    let ctx = Ctx { file, action, orientation, config };

    let mut root = Map::new();
    root.insert("input".into(), input_summary(path, &ctx));
    root.insert(
        "config".into(),
        json!({
            "perversity": config.perversity.name(),
            "ring": if config.ring == Ring::Integers { "Z" } else { "Q" },
            "tolerance": config.tolerance,
            "max_subdivisions": config.max_subdivisions,
        }),
    );
    let mut stages = Map::new();
    let mut overall = Status::Pass;
    for &stage in &config.stages {
        let start = Instant::now();
        let (status, mut body) = match run_stage(&ctx, stage) {
            Ok(r) => r,
            Err(e) => {
                let status = if inapplicable(&e) { Status::NotApplicable } else { Status::Error };
                let mut m = Map::new();
                m.insert("reason".into(), json!(e.to_string()));
                (status, m)
            }
        };
        let mut entry = Map::new();
        entry.insert("stage".into(), json!(stage.tag()));
        entry.insert("status".into(), json!(status.as_str()));
        entry.append(&mut body);
        if config.timing {
            entry.insert("seconds".into(), json!({ "approx": start.elapsed().as_secs_f64() }));
        }
        stages.insert(stage.tag().into(), Value::Object(entry));
        if matches!(status, Status::Fail | Status::Error) {
            overall = overall.max(status);
        }
    }
    root.insert("stages".into(), Value::Object(stages));
    let verdict = match overall {
        Status::Fail => "fail",
        Status::Error => "error",
        _ => "pass",
    };
    root.insert("verdict".into(), json!(verdict));
    Report { value: Value::Object(root), status: overall }
}

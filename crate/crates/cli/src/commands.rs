use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use nvtorus::numeric::VerificationReport;
use nvtorus::{
    check_necessary_with, cycle_condition_violations, decide_components, epsilon_perturbation, example_cyclic_four,
    example_klein_four, example_rotation, example_translated, format_rational, has_torsion_image, nielsen_of_morphism,
    rebase_lift, verify, AffineRealization, Error, IntVec, NielsenReport, RatMat, RatVec, SampledMultiMap, ScanMode,
    TorusMorphism, Verdict, Witness,
};
use serde_json::{json, Value};

use crate::specfile::{parse_spec, print_spec};
use crate::CliError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_NOT_AFFINE: i32 = 2;

/// Result of a command: exit code plus human and machine renderings.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub exit: i32,
    pub text: String,
    pub json: Value,
}

impl Outcome {
    pub fn render(&self, as_json: bool) -> String {
        if as_json {
            serde_json::to_string_pretty(&self.json).expect("values serialize")
        } else {
            self.text.clone()
        }
    }

    pub fn error(err: &CliError) -> Self {
        let mut body = json!({ "error": err.to_string() });
        if let CliError::Spec { path, line, column, .. } = err {
            body["path"] = json!(path);
            body["line"] = json!(line);
            body["column"] = json!(column);
        }
        if let CliError::Core(Error::ConditionViolated(w) | Error::ComponentNotAffine { witness: w, .. }) = err {
            body["witness"] = witness_json(w);
        }
        Outcome { exit: EXIT_ERROR, text: format!("error: {err}"), json: body }
    }
}

fn int_json(x: &BigInt) -> Value {
    x.to_i64().map_or_else(|| json!(x.to_string()), |v| json!(v))
}

pub fn vec_json(v: &IntVec) -> Value {
    Value::Array(v.iter().map(int_json).collect())
}

fn rat(q: &BigRational) -> Value {
    json!(format_rational(q))
}

fn ratvec_json(v: &RatVec) -> Value {
    Value::Array(v.entries().iter().map(rat).collect())
}

fn matrix_json(m: &RatMat) -> Value {
    Value::Array((0..m.rows()).map(|r| Value::Array(m.row(r).iter().map(rat).collect())).collect())
}

pub fn witness_json(w: &Witness) -> Value {
    json!({ "i": w.index, "z": vec_json(&w.z), "cycleLength": w.cycle_length, "value": vec_json(&w.value) })
}

fn realization_json(r: &AffineRealization) -> Value {
    json!({ "A": matrix_json(r.matrix()), "a": Value::Array(r.points().iter().map(ratvec_json).collect()) })
}

pub fn cmd_validate(text: &str) -> Outcome {
    match parse_spec(text) {
        Ok(psi) => {
            let classes = psi.class_partition().len();
            Outcome {
                exit: EXIT_OK,
                text: format!("OK: k={}, n={}, {} sigma-class(es)", psi.k(), psi.n(), classes),
                json: json!({ "valid": true, "k": psi.k(), "n": psi.n(), "classes": classes }),
            }
        }
        Err(e) => {
            let mut out = Outcome::error(&e);
            out.json["valid"] = json!(false);
            out
        }
    }
}

pub fn cmd_analyze(psi: &TorusMorphism) -> Result<Outcome, CliError> {
    let report = psi.sigma_classes();
    let mut lines = vec![format!("k={}, n={}, irreducible: {}", psi.k(), psi.n(), report.irreducible)];
    let mut classes = Vec::new();
    for (class, stab) in report.classes.iter().zip(&report.stabilizers) {
        let a = psi.restricted_phi_matrix(class[0])?;
        let idx: Vec<String> = class.iter().map(ToString::to_string).collect();
        lines.push(format!("class {{{}}}: S={} (index {}), A={}", idx.join(","), stab, stab.index(), a));
        classes.push(json!({
            "indices": class,
            "stabilizer": Value::Array(stab.rows().iter().map(vec_json).collect()),
            "index": stab.index().to_string(),
            "A": matrix_json(&a),
        }));
    }
    let torsion = has_torsion_image(psi)?;
    match &torsion {
        Some(z) => lines.push(format!("torsion in image: yes, witness z={z}")),
        None => lines.push("torsion in image: no".into()),
    }
    let violations = cycle_condition_violations(psi);
    for v in &violations {
        let cyc: Vec<String> = v.cycle.iter().map(ToString::to_string).collect();
        lines.push(format!("phi constant on orbit {} of sigma(z), z={}: {}", cyc.join(","), v.z, v.value));
    }
    Ok(Outcome {
        exit: EXIT_OK,
        text: lines.join("\n"),
        json: json!({
            "k": psi.k(),
            "n": psi.n(),
            "irreducible": report.irreducible,
            "classes": classes,
            "torsion": { "present": torsion.is_some(), "witness": torsion.as_ref().map(vec_json) },
            "cycleViolations": violations.iter().map(|v| json!({
                "z": vec_json(&v.z), "cycle": v.cycle, "value": vec_json(&v.value)
            })).collect::<Vec<_>>(),
        }),
    })
}

/// Witness with its index translated back to the original labelling.
fn relabel(w: &Witness, index_map: &[usize]) -> Witness {
    Witness { index: index_map[w.index - 1], ..w.clone() }
}

pub fn cmd_decide(psi: &TorusMorphism, full_box_check: bool) -> Result<Outcome, CliError> {
    let verdicts = decide_components(psi)?;
    let irreducible = verdicts.len() == 1;
    let mut lines = Vec::new();
    let mut components = Vec::new();
    let mut any_obstructed = false;
    for cv in &verdicts {
        let indices = &cv.component.index_map;
        let (line, body) = match &cv.verdict {
            Verdict::Affine(r) => (
                format!("AFFINE; {r}"),
                json!({ "indices": indices, "verdict": "affine", "realization": realization_json(r) }),
            ),
            other => {
                any_obstructed = true;
                let w = relabel(other.witness().expect("non-affine verdicts carry witnesses"), indices);
                (
                    format!("NOT AFFINE; witness {w}"),
                    json!({ "indices": indices, "verdict": "not-affine", "witness": witness_json(&w) }),
                )
            }
        };
        if irreducible {
            lines.push(line);
        } else {
            let idx: Vec<String> = indices.iter().map(ToString::to_string).collect();
            lines.push(format!("component {{{}}}: {line}", idx.join(",")));
        }
        components.push(body);
    }
    let verdict = match (any_obstructed, irreducible) {
        (true, _) => "not-affine",
        (false, true) => "affine",
        (false, false) => "components-affine",
    };
    if !irreducible {
        let summary = if any_obstructed {
            "NOT AFFINE (some component is not affine)"
        } else {
            "every component is affine; no verdict for the combined map"
        };
        lines.insert(0, summary.to_string());
    }
    let mut body = json!({ "verdict": verdict, "irreducible": irreducible, "components": components });

    if full_box_check {
        let full = check_necessary_with(psi, ScanMode::FullBox);
        let agrees = full.is_obstructed() == any_obstructed;
        lines.push(format!("full-box check: {}", if agrees { "agrees" } else { "DISAGREES" }));
        body["fullBoxCheck"] = json!({ "agrees": agrees, "witness": full.witness().map(witness_json) });
        if !agrees {
            return Ok(Outcome { exit: EXIT_ERROR, text: lines.join("\n"), json: body });
        }
    }
    let exit = if any_obstructed { EXIT_NOT_AFFINE } else { EXIT_OK };
    Ok(Outcome { exit, text: lines.join("\n"), json: body })
}

fn nielsen_json(r: &NielsenReport) -> Value {
    json!({
        "perFactorDet": r.dets.iter().map(rat).collect::<Vec<_>>(),
        "nielsen": rat(&r.nielsen),
        "nielsenIntegral": r.nielsen_is_integral(),
        "reidemeister": r.reidemeister.to_string(),
        "perComponent": r.per_component.iter().map(|c| json!({
            "indices": c.index_map,
            "nielsen": rat(&c.nielsen),
            "reidemeister": c.reidemeister.to_string(),
            "realization": realization_json(&c.realization),
        })).collect::<Vec<_>>(),
    })
}

pub fn cmd_nielsen(psi: &TorusMorphism) -> Result<Outcome, CliError> {
    let report = nielsen_of_morphism(psi)?;
    let mut text = report.to_string();
    if !report.nielsen_is_integral() {
        text.push_str("\nwarning: N is not an integer");
    }
    Ok(Outcome { exit: EXIT_OK, text, json: nielsen_json(&report) })
}

pub fn cmd_rebase(psi: &TorusMorphism, index: usize, z: &IntVec, parts: &[IntVec]) -> Result<Outcome, CliError> {
    let rebased = rebase_lift(psi, index, z, parts)?;
    let text = print_spec(&rebased);
    let json = serde_json::from_str(&text).expect("printed specs are JSON");
    Ok(Outcome { exit: EXIT_OK, text: text.trim_end().to_string(), json })
}

/// Inputs for `cmd_example`.
#[derive(Clone, Debug)]
pub struct ExampleRequest {
    pub name: String,
    pub n: usize,
    pub k: usize,
    /// Target morphism for `perturbation`.
    pub spec: Option<TorusMorphism>,
    /// Base map for `perturbation`: `rotation`, `klein-four` or `cyclic-four`.
    pub base: String,
    pub grid: usize,
    pub tol_eq: f64,
    pub sep_min: f64,
}

impl Default for ExampleRequest {
    fn default() -> Self {
        ExampleRequest {
            name: "rotation".into(),
            n: 3,
            k: 2,
            spec: None,
            base: "rotation".into(),
            grid: 50,
            tol_eq: 1e-9,
            sep_min: 0.05,
        }
    }
}

pub const EXAMPLES: [&str; 5] = ["rotation", "translated", "klein-four", "cyclic-four", "perturbation"];

fn base_map(name: &str, n: usize, k: usize) -> Result<SampledMultiMap, CliError> {
    Ok(match name {
        "rotation" => example_rotation(n, k)?,
        "klein-four" => example_klein_four()?,
        "cyclic-four" => example_cyclic_four()?,
        other => return Err(CliError::Usage(format!("unknown base map {other:?}"))),
    })
}

pub fn build_example(req: &ExampleRequest) -> Result<SampledMultiMap, CliError> {
    match req.name.as_str() {
        "translated" => Ok(example_translated(req.n)?),
        "perturbation" => {
            let psi = req
                .spec
                .as_ref()
                .ok_or_else(|| CliError::Usage("perturbation needs --spec".into()))?;
            let base = base_map(&req.base, psi.n(), psi.k())?;
            Ok(epsilon_perturbation(psi, &base)?)
        }
        name if EXAMPLES.contains(&name) => base_map(name, req.n, req.k),
        other => Err(CliError::Usage(format!("unknown example {other:?}; expected one of {}", EXAMPLES.join(", ")))),
    }
}

fn report_text(map: &SampledMultiMap, r: &VerificationReport) -> String {
    let params: Vec<String> = map.params().iter().map(|(k, v)| format!("{k}={v}")).collect();
    let title = if params.is_empty() { map.name().to_string() } else { format!("{} ({})", map.name(), params.join(", ")) };
    let mut lines = vec![
        title,
        format!("samples: {}", r.samples_checked),
        format!("max equivariance residual: {:e}", r.max_equivariance_residual),
        format!("min pairwise separation: {:.6}", r.min_pairwise_separation),
    ];
    lines.push(match &r.first_failure {
        None => "PASS".into(),
        Some(t) => format!("FAIL at t={t:?}"),
    });
    lines.join("\n")
}

pub fn cmd_example(req: &ExampleRequest) -> Result<(Outcome, SampledMultiMap), CliError> {
    let map = build_example(req)?;
    let report = verify(&map, req.grid, req.tol_eq, req.sep_min)?;
    let params: serde_json::Map<String, Value> = map.params().iter().map(|(k, v)| (k.clone(), json!(v))).collect();
    let json = json!({
        "name": map.name(),
        "params": params,
        "morphism": serde_json::from_str::<Value>(&print_spec(map.morphism())).expect("printed specs are JSON"),
        "grid": req.grid,
        "tolEq": req.tol_eq,
        "sepMin": req.sep_min,
        "report": serde_json::to_value(&report).expect("reports serialize"),
    });
    let exit = if report.pass { EXIT_OK } else { EXIT_ERROR };
    Ok((Outcome { exit, text: report_text(&map, &report), json }, map))
}

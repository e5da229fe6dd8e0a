use std::fmt;
use std::path::Path;

use kt_core::analysis::{
    default_scan_set, degeneracy_study, invariance_audit, ttw_scan, DegeneracyRow,
};
use kt_core::orbits::{
    act_on_kt, canonicalize, center, classify_kt, classify_pair, derived_invariants, foci,
    invariants_single, joint_invariants, principal_angle, DEFAULT_CLASS_TOL,
};
use kt_core::solver::{
    compatible_kts, compatible_potential_params, reduced_subspace, restricted_compatible,
    validate_basis, Backend, NullspaceResult, SamplingConfig, COLUMN_LABELS, SW_FAMILY_LABELS,
};
use kt_core::{KtError, KtParams, PotentialSpec};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::literal::{parse_element, parse_tensor, LiteralError};
use crate::output::{cell, flatten, fmt_float, render, Report, Table};
use crate::{BackendArg, Command, Common, PotentialArgs, EXIT_DOMAIN, EXIT_USAGE, EXIT_VALIDATION};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(KtError),
    Validation(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Core(e) if e.is_validation() => EXIT_VALIDATION,
            CliError::Core(_) => EXIT_DOMAIN,
            CliError::Validation(_) => EXIT_VALIDATION,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Validation(m) => f.write_str(m),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<KtError> for CliError {
    fn from(e: KtError) -> Self {
        CliError::Core(e)
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn check_common(c: &Common) -> Result<SamplingConfig> {
    if c.samples < 12 {
        return Err(usage(format!("--samples must be at least 12, got {}", c.samples)));
    }
    if !(c.tol > 0.0 && c.tol.is_finite()) {
        return Err(usage(format!("--tol must be positive, got {}", c.tol)));
    }
    Ok(SamplingConfig::default().with_count(c.samples).with_seed(c.seed))
}

fn config_json(c: &Common) -> Value {
    json!({
        "samples": c.samples,
        "tol": c.tol,
        "seed": c.seed,
        "backend": c.backend.as_str(),
    })
}

fn tensor(s: &str) -> Result<KtParams> {
    parse_tensor(s).map_err(|e| match e {
        LiteralError::Syntax(m) => usage(m),
        LiteralError::Domain(e) => CliError::Core(e),
    })
}

fn emit(report: Report, common: &Common) -> Result<()> {
    let text = render(&report, common.format);
    match &common.out {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn run(cmd: Command) -> Result<()> {
    match cmd {
        Command::Invariants { tensor, pair, common } => {
            let r = invariants(tensor, pair, &common)?;
            emit(r, &common)
        }
        Command::Classify { tensor, pair, common } => {
            let r = classify(tensor, pair, &common)?;
            emit(r, &common)
        }
        Command::Transform { tensor, g, common } => {
            let r = transform(&tensor, &g, &common)?;
            emit(r, &common)
        }
        Command::Compatible {
            potential,
            reduced,
            input,
            common,
        } => {
            let r = match input {
                Some(path) => revalidate(&path, &common)?,
                None => compatible(&potential, reduced, &common)?,
            };
            emit(r, &common)
        }
        Command::DualSolve { tensor, common } => {
            let r = dual_solve(&tensor, &common)?;
            emit(r, &common)
        }
        Command::TtwScan {
            omega,
            alpha,
            beta,
            k,
            common,
        } => {
            let r = scan(omega, alpha, beta, k, &common)?;
            emit(r, &common)
        }
        Command::Degeneracy { a, b, ell, common } => {
            let r = degeneracy(a.zip(b), ell, &common)?;
            emit(r, &common)
        }
        Command::Audit { trials, common } => {
            let (r, passed) = audit(trials, &common)?;
            emit(r, &common)?;
            if passed {
                Ok(())
            } else {
                Err(CliError::Validation("invariance audit reported failures".into()))
            }
        }
    }
}

fn single_tensor_json(k: &KtParams) -> Result<Value> {
    let class = classify_kt(k, DEFAULT_CLASS_TOL)?;
    let (d1, d2, d3) = invariants_single(k)?;
    Ok(json!({
        "tensor": k,
        "class": class,
        "invariants": { "d1": d1, "d2": d2, "d3": d3 },
        "center": center(k).ok().map(|c| [c.x, c.y]),
        "foci": foci(k).ok(),
        "principal_angle": principal_angle(k),
    }))
}

fn pair_args(pair: &[String]) -> Result<(KtParams, KtParams)> {
    Ok((tensor(&pair[0])?, tensor(&pair[1])?))
}

fn invariants(t: Option<String>, pair: Option<Vec<String>>, common: &Common) -> Result<Report> {
    check_common(common)?;
    match (t, pair) {
        (Some(t), None) => {
            let k = tensor(&t)?;
            let mut v = single_tensor_json(&k)?;
            v["command"] = json!("invariants");
            v["config"] = config_json(common);
            let inv = &v["invariants"];
            let mut table = Table::new(&["d1", "d2", "d3", "class"]);
            table.push(vec![cell(&inv["d1"]), cell(&inv["d2"]), cell(&inv["d3"]), cell(&v["class"])]);
            Ok(Report {
                command: "invariants",
                json: v,
                table,
            })
        }
        (None, Some(p)) => {
            let (a, b) = pair_args(&p)?;
            let inv = joint_invariants(&a, &b)?;
            let class = classify_pair(&a, &b, DEFAULT_CLASS_TOL)?;
            let v = json!({
                "command": "invariants",
                "config": config_json(common),
                "tensors": [a, b],
                "invariants": inv,
                "derived": derived_invariants(&a, &b).ok(),
                "pair_class": class,
            });
            let mut table = Table::new(&["d1", "d2", "d3", "d4", "d5", "d6", "d7", "d8", "d9", "class"]);
            let mut row: Vec<String> = inv.to_array().iter().map(|x| fmt_float(*x)).collect();
            row.push(class.class.to_string());
            table.push(row);
            Ok(Report {
                command: "invariants",
                json: v,
                table,
            })
        }
        _ => Err(usage("give either --tensor or --pair")),
    }
}

fn classify(t: Option<String>, pair: Option<Vec<String>>, common: &Common) -> Result<Report> {
    check_common(common)?;
    let (v, label) = match (t, pair) {
        (Some(t), None) => {
            let k = tensor(&t)?;
            let class = classify_kt(&k, DEFAULT_CLASS_TOL)?;
            let canonical = canonicalize(&k)
                .ok()
                .map(|(g, c)| json!({ "element": g, "tensor": c }));
            (
                json!({
                    "command": "classify",
                    "config": config_json(common),
                    "tensor": k,
                    "class": class,
                    "canonical": canonical,
                }),
                json!(class),
            )
        }
        (None, Some(p)) => {
            let (a, b) = pair_args(&p)?;
            let class = classify_pair(&a, &b, DEFAULT_CLASS_TOL)?;
            (
                json!({
                    "command": "classify",
                    "config": config_json(common),
                    "tensors": [a, b],
                    "classes": [classify_kt(&a, DEFAULT_CLASS_TOL)?, classify_kt(&b, DEFAULT_CLASS_TOL)?],
                    "pair_class": class,
                }),
                json!(class.class),
            )
        }
        _ => return Err(usage("give either --tensor or --pair")),
    };
    let mut table = Table::new(&["class"]);
    table.push(vec![cell(&label)]);
    Ok(Report {
        command: "classify",
        json: v,
        table,
    })
}

fn transform(t: &str, g: &str, common: &Common) -> Result<Report> {
    check_common(common)?;
    let k = tensor(t)?;
    let g = parse_element(g).map_err(usage)?;
    let moved = act_on_kt(&g, &k);
    let (a1, a2, a3) = invariants_single(&k)?;
    let (b1, b2, b3) = invariants_single(&moved)?;
    let v = json!({
        "command": "transform",
        "config": config_json(common),
        "tensor": k,
        "element": g,
        "transformed": moved,
        "invariants_before": { "d1": a1, "d2": a2, "d3": a3 },
        "invariants_after": { "d1": b1, "d2": b2, "d3": b3 },
    });
    let mut table = Table::new(&COLUMN_LABELS);
    table.push(moved.as_array().iter().map(|x| fmt_float(*x)).collect());
    Ok(Report {
        command: "transform",
        json: v,
        table,
    })
}

/// Potential description as it appears in reports.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct PotentialRecord {
    family: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    omega: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    k: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    gamma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    mu: Option<f64>,
}

impl PotentialRecord {
    fn from_args(p: &PotentialArgs) -> Result<Self> {
        let family = p
            .family
            .clone()
            .ok_or_else(|| usage("--family is required (free, oscillator, sw, ttw, kepler)"))?;
        let z = |v: Option<f64>| Some(v.unwrap_or(0.0));
        let r = match family.as_str() {
            "free" => Self::bare("free"),
            "oscillator" => Self { omega: z(p.omega), ..Self::bare("oscillator") },
            "sw" => Self {
                omega: z(p.omega),
                alpha: z(p.alpha),
                beta: z(p.beta),
                ..Self::bare("sw")
            },
            "ttw" => Self {
                omega: z(p.omega),
                alpha: z(p.alpha),
                beta: z(p.beta),
                k: Some(p.k.ok_or_else(|| usage("--family ttw needs --k"))?),
                gamma: z(p.gamma),
                ..Self::bare("ttw")
            },
            "kepler" => Self { mu: Some(p.mu.unwrap_or(1.0)), ..Self::bare("kepler") },
            other => return Err(usage(format!("unknown family '{other}'"))),
        };
        Ok(r)
    }

    fn bare(family: &str) -> Self {
        Self {
            family: family.into(),
            omega: None,
            alpha: None,
            beta: None,
            k: None,
            gamma: None,
            mu: None,
        }
    }

    fn spec(&self) -> Result<PotentialSpec> {
        let g = |v: Option<f64>| v.unwrap_or(0.0);
        Ok(match self.family.as_str() {
            "free" => PotentialSpec::Free,
            "oscillator" => PotentialSpec::Oscillator { omega: g(self.omega) },
            "sw" => PotentialSpec::sw(g(self.omega), g(self.alpha), g(self.beta)),
            "ttw" => {
                let k = self.k.ok_or_else(|| usage("ttw potential without k"))?;
                match PotentialSpec::ttw(g(self.omega), g(self.alpha), g(self.beta), k)? {
                    PotentialSpec::Ttw { omega, alpha, beta, k, .. } => PotentialSpec::Ttw {
                        omega,
                        alpha,
                        beta,
                        k,
                        gamma: g(self.gamma),
                    },
                    other => other,
                }
            }
            "kepler" => PotentialSpec::Kepler { mu: self.mu.unwrap_or(1.0) },
            other => return Err(usage(format!("unknown family '{other}'"))),
        })
    }
}

fn basis_rows(table: &mut Table, backend: &str, r: &NullspaceResult) {
    for (i, b) in r.basis.iter().enumerate() {
        let mut row = vec![backend.to_string(), r.dim.to_string(), i.to_string()];
        row.extend(b.as_array().iter().map(|x| fmt_float(*x)));
        table.push(row);
    }
}

fn basis_table() -> Table {
    let mut headers = vec!["backend", "dim", "index"];
    headers.extend(COLUMN_LABELS);
    Table::new(&headers)
}

fn compatible(p: &PotentialArgs, reduced: bool, common: &Common) -> Result<Report> {
    let cfg = check_common(common)?;
    let record = PotentialRecord::from_args(p)?;
    let spec = record.spec()?;
    let mut table = basis_table();
    let mut v = json!({
        "command": "compatible",
        "config": config_json(common),
        "potential": record,
        "reduced": reduced,
        "numeric": null,
        "exact": null,
    });
    if reduced {
        if common.backend != BackendArg::Numeric {
            return Err(usage("--reduced is only available with --backend numeric"));
        }
        let r = restricted_compatible(&spec, &reduced_subspace(), &cfg, common.tol)?;
        basis_rows(&mut table, "numeric", &r.result);
        v["numeric"] = to_json(&r.result);
        v["coords"] = to_json(&r.coords);
    } else {
        let want_numeric = common.backend != BackendArg::Exact;
        let want_exact = common.backend != BackendArg::Numeric;
        if want_numeric {
            let r = compatible_kts(&spec, &cfg, common.tol, Backend::Numeric)?;
            basis_rows(&mut table, "numeric", &r);
            v["numeric"] = to_json(&r);
        }
        if want_exact {
            let r = compatible_kts(&spec, &cfg, common.tol, Backend::ExactRational)?;
            basis_rows(&mut table, "exact", &r);
            v["exact"] = to_json(&r);
        }
    }
    Ok(Report {
        command: "compatible",
        json: v,
        table,
    })
}

fn revalidate(path: &Path, common: &Common) -> Result<Report> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    let old: Value = serde_json::from_str(&text)
        .map_err(|e| usage(format!("{} is not JSON: {e}", path.display())))?;
    if old.get("command").and_then(Value::as_str) != Some("compatible") {
        return Err(usage("--input must be a report written by `compatible`"));
    }
    let record: PotentialRecord = serde_json::from_value(old["potential"].clone())
        .map_err(|e| usage(format!("bad potential in report: {e}")))?;
    let spec = record.spec()?;
    let cfg_v = &old["config"];
    let samples = cfg_v["samples"].as_u64().ok_or_else(|| usage("report lacks config.samples"))?;
    let seed = cfg_v["seed"].as_u64().ok_or_else(|| usage("report lacks config.seed"))?;
    let tol = cfg_v["tol"].as_f64().ok_or_else(|| usage("report lacks config.tol"))?;
    let replay = Common {
        samples: samples as usize,
        tol,
        seed,
        ..common.clone()
    };
    let cfg = check_common(&replay)?;
    let mut checks = Vec::new();
    let mut table = Table::new(&["backend", "dim", "validation_residual"]);
    for backend in ["numeric", "exact"] {
        let res = &old[backend];
        if res.is_null() {
            continue;
        }
        let r: NullspaceResult = serde_json::from_value(res.clone())
            .map_err(|e| usage(format!("bad {backend} result in report: {e}")))?;
        let worst = validate_basis(&spec, &r.basis, &cfg, tol)?;
        table.push(vec![backend.into(), r.dim.to_string(), fmt_float(worst)]);
        checks.push(json!({ "backend": backend, "dim": r.dim, "validation_residual": worst }));
    }
    if checks.is_empty() {
        return Err(usage("report contains no basis to validate"));
    }
    let mut config = config_json(&replay);
    config["backend"] = cfg_v["backend"].clone();
    let v = json!({
        "command": "compatible",
        "mode": "revalidate",
        "config": config,
        "potential": record,
        "revalidated": checks,
    });
    Ok(Report {
        command: "compatible",
        json: v,
        table,
    })
}

fn dual_solve(tensors: &[String], common: &Common) -> Result<Report> {
    let cfg = check_common(common)?;
    let ks: Vec<KtParams> = tensors.iter().map(|t| tensor(t)).collect::<Result<_>>()?;
    let r = compatible_potential_params(&ks, &cfg, common.tol)?;
    let mut headers = vec!["dim", "index"];
    headers.extend(SW_FAMILY_LABELS);
    let mut table = Table::new(&headers);
    for (i, b) in r.basis.iter().enumerate() {
        let mut row = vec![r.dim.to_string(), i.to_string()];
        row.extend(b.iter().map(|x| fmt_float(*x)));
        table.push(row);
    }
    let v = json!({
        "command": "dual-solve",
        "config": config_json(common),
        "tensors": ks,
        "labels": SW_FAMILY_LABELS,
        "family": r,
    });
    Ok(Report {
        command: "dual-solve",
        json: v,
        table,
    })
}

fn opt_cell<T: Serialize>(v: &Option<T>) -> String {
    cell(&to_json(v))
}

fn scan(omega: f64, alpha: f64, beta: f64, k: Option<Vec<f64>>, common: &Common) -> Result<Report> {
    let cfg = check_common(common)?;
    let ks = k.unwrap_or_else(default_scan_set);
    if ks.is_empty() {
        return Err(usage("--k needs at least one value"));
    }
    let rows = ttw_scan(&ks, omega, alpha, beta, &cfg, common.tol);
    let mut table = Table::new(&[
        "k",
        "dim",
        "verdict",
        "special_value",
        "gap",
        "validation_residual",
        "error",
    ]);
    for r in &rows {
        table.push(vec![
            fmt_float(r.k),
            opt_cell(&r.dim),
            r.verdict.map(|v| v.as_str().to_string()).unwrap_or_default(),
            r.special_value.to_string(),
            opt_cell(&r.gap),
            opt_cell(&r.validation_residual),
            r.error.clone().unwrap_or_default(),
        ]);
    }
    let v = json!({
        "command": "ttw-scan",
        "config": config_json(common),
        "potential": { "omega": omega, "alpha": alpha, "beta": beta },
        "rows": rows,
    });
    Ok(Report {
        command: "ttw-scan",
        json: v,
        table,
    })
}

fn degeneracy(ab: Option<(f64, f64)>, ell: f64, common: &Common) -> Result<Report> {
    let cfg = check_common(common)?;
    let offsets = match ab {
        Some(p) => vec![p],
        None => vec![(1.0, 1.0), (0.0, 2.0), (2.0, 0.0), (0.0, 0.0)],
    };
    let rows: Vec<DegeneracyRow> = offsets
        .iter()
        .map(|&(a, b)| degeneracy_study(a, b, ell, &cfg, common.tol))
        .collect::<std::result::Result<_, _>>()?;
    let mut table = Table::new(&[
        "a",
        "b",
        "ell",
        "surviving_dim",
        "surviving_basis",
        "pair_class",
        "paper_case",
        "discrepancy_note",
    ]);
    for r in &rows {
        table.push(vec![
            fmt_float(r.a),
            fmt_float(r.b),
            fmt_float(r.ell),
            r.surviving_family.dim.to_string(),
            cell(&to_json(&r.surviving_family.basis)),
            r.pair_class.class.to_string(),
            r.paper_case.to_string(),
            r.discrepancy_note.clone().unwrap_or_default(),
        ]);
    }
    let v = json!({
        "command": "degeneracy",
        "config": config_json(common),
        "labels": SW_FAMILY_LABELS,
        "rows": rows,
    });
    Ok(Report {
        command: "degeneracy",
        json: v,
        table,
    })
}

fn audit(trials: usize, common: &Common) -> Result<(Report, bool)> {
    check_common(common)?;
    if trials == 0 {
        return Err(usage("--trials must be at least 1"));
    }
    let r = invariance_audit(trials, common.seed);
    let passed = r.passed();
    let v = json!({
        "command": "audit",
        "config": config_json(common),
        "report": r,
        "passed": passed,
    });
    let table = flatten(&v["report"]);
    Ok((
        Report {
            command: "audit",
            json: v,
            table,
        },
        passed,
    ))
}

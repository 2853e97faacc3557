use std::io::IsTerminal;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::{json, Value};

use solenoid::decision::{Decision, Verdict};
use solenoid::dynamics;
use solenoid::endo;
use solenoid::error::Error;
use solenoid::exact::matrix::{IntMatrix, RatMatrix};
use solenoid::exact::poly::IntPoly;
use solenoid::odometer;
use solenoid::report::{
    invariants_block, json_big, json_int_matrix, json_rat_matrix, parse_big, parse_int_matrix,
    parse_rat_matrix,
};

#[derive(Parser)]
#[command(name = "solenoid", version, about = "Exact analysis of matrix-defined subgroups of Q^n and their solenoid/odometer dynamics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Defining matrix A as a JSON array of integer rows
    #[arg(long)]
    matrix: Option<String>,
    /// Transform T: JSON rows of integers or [num, den] pairs
    #[arg(long)]
    transform: Option<String>,
    /// Input file with schema {"matrix": ..., "transform": ..., "k": ..., "xi": ...}
    #[arg(long)]
    input: Option<String>,
    /// p-adic precision exponent override
    #[arg(long, env = "SOLENOID_PRECISION_EXPONENT")]
    precision_exponent: Option<u32>,
    /// Bounded-search depths as "m,k"
    #[arg(long, env = "SOLENOID_ORACLE_DEPTH")]
    oracle_depth: Option<String>,
    /// Trust the power basis to generate the maximal order
    #[arg(long, env = "SOLENOID_ASSERT_MONOGENIC", default_value_t = false)]
    assert_monogenic: bool,
    /// Largest period for dynamics blocks
    #[arg(long, env = "SOLENOID_MAX_K")]
    max_k: Option<u32>,
    /// Periods to count, comma-separated
    #[arg(long)]
    k: Option<String>,
    /// xi as integer polynomial coordinates in lambda (low degree first)
    #[arg(long)]
    xi_poly: Option<String>,
    /// extra power of lambda multiplying xi-poly
    #[arg(long, allow_hyphen_values = true)]
    xi_power: Option<i64>,
}

#[derive(Subcommand, Clone)]
enum Command {
    /// Full report: invariants, classification, decisions, dynamics
    Analyze(Common),
    /// Is T an endomorphism of G_A?
    EndCheck(Common),
    /// Is T an automorphism of G_A?
    AutCheck(Common),
    /// Is the dual of T ergodic?
    Ergodic(Common),
    /// Periodic-point counts |F_k|
    Periodic(Common),
    /// Odometer linear representation group: membership or description
    Odometer(Common),
    /// Structural descriptions of End(G_A) and N(X_A)
    Describe(Common),
    /// Bounded witness search for the defining property
    Oracle(Common),
}

struct Inputs {
    matrix: IntMatrix,
    transform: Option<RatMatrix>,
    k: Vec<u32>,
    precision: Option<u32>,
    depth: (u32, u32),
    assert_monogenic: bool,
    max_k: u32,
}

fn parse_json_flag(s: &str, what: &str) -> Result<Value, Error> {
    serde_json::from_str(s).map_err(|e| Error::Input(format!("bad {what} JSON: {e}")))
}

fn xi_transform(a: &IntMatrix, poly: &[BigInt], power: i64) -> Result<RatMatrix, Error> {
    let q = IntPoly::new(poly.to_vec());
    let base = q.eval_matrix(a).to_rat();
    let shift = a
        .to_rat()
        .pow_int(power)
        .ok_or_else(|| Error::Input("singular matrix has no negative powers".into()))?;
    Ok(base.mul(&shift))
}

fn gather(c: &Common) -> Result<Inputs, Error> {
    let mut matrix_v: Option<Value> = None;
    let mut transform_v: Option<Value> = None;
    let mut k_list: Option<Vec<u32>> = None;
    let mut xi: Option<(Vec<BigInt>, i64)> = None;
    if let Some(path) = &c.input {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Input(format!("cannot read {path}: {e}")))?;
        let v: Value =
            serde_json::from_str(&text).map_err(|e| Error::Input(format!("bad input file: {e}")))?;
        matrix_v = v.get("matrix").cloned();
        transform_v = v.get("transform").cloned();
        if let Some(ks) = v.get("k") {
            let arr = ks
                .as_array()
                .ok_or_else(|| Error::Input("\"k\" must be an array".into()))?;
            let mut out = Vec::new();
            for e in arr {
                out.push(
                    e.as_u64()
                        .and_then(|x| u32::try_from(x).ok())
                        .filter(|&x| x > 0)
                        .ok_or_else(|| Error::Input("periods must be positive integers".into()))?,
                );
            }
            k_list = Some(out);
        }
        if let Some(x) = v.get("xi") {
            let poly = x
                .get("poly")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Input("xi.poly must be an array".into()))?
                .iter()
                .map(parse_big)
                .collect::<Result<Vec<_>, _>>()?;
            let power = x.get("power").and_then(Value::as_i64).unwrap_or(0);
            xi = Some((poly, power));
        }
    }
    // flags win over the input file
    if let Some(s) = &c.matrix {
        matrix_v = Some(parse_json_flag(s, "matrix")?);
    }
    if let Some(s) = &c.transform {
        transform_v = Some(parse_json_flag(s, "transform")?);
    }
    if let Some(s) = &c.k {
        let mut out = Vec::new();
        for part in s.split(',') {
            out.push(
                part.trim()
                    .parse::<u32>()
                    .ok()
                    .filter(|&x| x > 0)
                    .ok_or_else(|| Error::Input(format!("bad period {part:?}")))?,
            );
        }
        k_list = Some(out);
    }
    if let Some(s) = &c.xi_poly {
        let arr = parse_json_flag(s, "xi-poly")?;
        let poly = arr
            .as_array()
            .ok_or_else(|| Error::Input("--xi-poly must be a JSON array".into()))?
            .iter()
            .map(parse_big)
            .collect::<Result<Vec<_>, _>>()?;
        xi = Some((poly, c.xi_power.or(xi.map(|(_, p)| p)).unwrap_or(0)));
    } else if let (Some(p), Some((poly, _))) = (c.xi_power, xi.clone()) {
        xi = Some((poly, p));
    }
    let matrix = parse_int_matrix(
        &matrix_v.ok_or_else(|| Error::Input("a defining matrix is required (--matrix or --input)".into()))?,
    )?;
    if matrix.det().is_zero() {
        return Err(Error::Input("defining matrix is singular".into()));
    }
    let mut transform = transform_v.as_ref().map(parse_rat_matrix).transpose()?;
    if let Some(t) = &transform {
        if t.dim() != matrix.dim() {
            return Err(Error::Input("matrix and transform sizes differ".into()));
        }
    }
    if transform.is_none() {
        if let Some((poly, power)) = &xi {
            transform = Some(xi_transform(&matrix, poly, *power)?);
        }
    }
    let depth = match &c.oracle_depth {
        None => (6, 12),
        Some(s) => {
            let parts: Vec<&str> = s.split(',').collect();
            let bad = || Error::Input(format!("bad --oracle-depth {s:?}, expected \"m,k\""));
            if parts.len() != 2 {
                return Err(bad());
            }
            (
                parts[0].trim().parse().map_err(|_| bad())?,
                parts[1].trim().parse().map_err(|_| bad())?,
            )
        }
    };
    Ok(Inputs {
        matrix,
        transform,
        k: k_list.unwrap_or_default(),
        precision: c.precision_exponent,
        depth,
        assert_monogenic: c.assert_monogenic,
        max_k: c.max_k.unwrap_or(dynamics::K_MAX),
    })
}

fn decision_json(d: &Decision) -> Value {
    serde_json::to_value(d).expect("decisions serialize")
}

fn track(worst: &mut u8, d: &Decision) {
    if d.verdict == Verdict::Inconclusive {
        *worst = (*worst).max(3);
    }
}

fn dynamics_block(inp: &Inputs, worst: &mut u8) -> Value {
    let Some(t) = &inp.transform else {
        return json!(null);
    };
    let erg = dynamics::is_ergodic(&inp.matrix, t);
    track(worst, &erg);
    if !erg.is_yes() {
        return json!({ "ergodic": decision_json(&erg) });
    }
    let ks: Vec<u32> = if inp.k.is_empty() {
        (1..=inp.max_k).collect()
    } else {
        inp.k.clone()
    };
    let mut counts = Vec::new();
    for &k in &ks {
        match dynamics::periodic_points(&inp.matrix, t, k) {
            Ok(c) => counts.push(json!({ "k": k, "count": json_big(&c) })),
            Err(e) => {
                *worst = (*worst).max(4);
                counts.push(json!({ "k": k, "error": format!("{e}") }));
            }
        }
    }
    let entropy = match dynamics::entropy(&inp.matrix, t, 128) {
        Ok(rep) => json!({
            "value": rep.value,
            "archimedean": rep.archimedean,
            "finite": rep.finite,
            "empirical_growth": rep
                .empirical
                .iter()
                .map(|(k, g)| json!({ "k": k, "rate": g }))
                .collect::<Vec<_>>(),
        }),
        Err(e) => {
            *worst = (*worst).max(4);
            json!({ "error": format!("{e}") })
        }
    };
    json!({
        "ergodic": decision_json(&erg),
        "periodic_points": counts,
        "entropy": entropy,
    })
}

fn run(cmd: &Command) -> Result<(Value, u8), Error> {
    let (name, common) = match cmd {
        Command::Analyze(c) => ("analyze", c),
        Command::EndCheck(c) => ("end-check", c),
        Command::AutCheck(c) => ("aut-check", c),
        Command::Ergodic(c) => ("ergodic", c),
        Command::Periodic(c) => ("periodic", c),
        Command::Odometer(c) => ("odometer", c),
        Command::Describe(c) => ("describe", c),
        Command::Oracle(c) => ("oracle", c),
    };
    let inp = gather(common)?;
    let mut worst: u8 = 0;
    let mut report = serde_json::Map::new();
    report.insert("command".into(), json!(name));
    let mut input_echo = serde_json::Map::new();
    input_echo.insert("matrix".into(), json_int_matrix(&inp.matrix));
    if let Some(t) = &inp.transform {
        input_echo.insert("transform".into(), json_rat_matrix(t));
    }
    if !inp.k.is_empty() {
        input_echo.insert("k".into(), json!(inp.k));
    }
    report.insert("input".into(), Value::Object(input_echo));
    let inv = endo::invariants(&inp.matrix)?;
    report.insert("invariants".into(), invariants_block(&inv));

    let need_t = || -> Result<&RatMatrix, Error> {
        inp.transform
            .as_ref()
            .ok_or_else(|| Error::Input("this command requires a transform (--transform or --xi-poly)".into()))
    };
    match name {
        "analyze" => {
            let end_desc = endo::end_ring_description(&inp.matrix, inp.assert_monogenic)?;
            let lin_desc = odometer::linear_rep_group_description(&inp.matrix)?;
            report.insert(
                "classification".into(),
                json!({
                    "end_ring": serde_json::to_value(&end_desc).unwrap(),
                    "linear_rep_group": serde_json::to_value(&lin_desc).unwrap(),
                }),
            );
            let mut decisions = serde_json::Map::new();
            if let Some(t) = &inp.transform {
                let d = endo::is_endomorphism(&inp.matrix, t, inp.precision);
                track(&mut worst, &d);
                decisions.insert("endomorphism".into(), decision_json(&d));
                let d = endo::is_automorphism(&inp.matrix, t, inp.precision);
                track(&mut worst, &d);
                decisions.insert("automorphism".into(), decision_json(&d));
                if t.is_integral() {
                    let ti = t.to_int().expect("integral");
                    let d = odometer::in_linear_rep_group(&inp.matrix, &ti);
                    track(&mut worst, &d);
                    decisions.insert("linear_rep_group".into(), decision_json(&d));
                }
            }
            report.insert("decisions".into(), Value::Object(decisions));
            report.insert("dynamics".into(), dynamics_block(&inp, &mut worst));
        }
        "end-check" => {
            let d = endo::is_endomorphism(&inp.matrix, need_t()?, inp.precision);
            track(&mut worst, &d);
            report.insert("decision".into(), decision_json(&d));
        }
        "aut-check" => {
            let d = endo::is_automorphism(&inp.matrix, need_t()?, inp.precision);
            track(&mut worst, &d);
            report.insert("decision".into(), decision_json(&d));
        }
        "ergodic" => {
            let d = dynamics::is_ergodic(&inp.matrix, need_t()?);
            track(&mut worst, &d);
            report.insert("decision".into(), decision_json(&d));
        }
        "periodic" => {
            let t = need_t()?.clone();
            let ks = if inp.k.is_empty() { vec![1] } else { inp.k.clone() };
            let mut counts = Vec::new();
            for k in ks {
                let c = dynamics::periodic_points(&inp.matrix, &t, k)?;
                counts.push(json!({ "k": k, "count": json_big(&c) }));
            }
            report.insert("periodic_points".into(), json!(counts));
        }
        "odometer" => {
            if let Some(t) = &inp.transform {
                if !t.is_integral() {
                    return Err(Error::Input(
                        "odometer membership requires an integer transform".into(),
                    ));
                }
                let d = odometer::in_linear_rep_group(&inp.matrix, &t.to_int().expect("integral"));
                track(&mut worst, &d);
                report.insert("decision".into(), decision_json(&d));
            }
            let desc = odometer::linear_rep_group_description(&inp.matrix)?;
            report.insert(
                "linear_rep_group".into(),
                serde_json::to_value(&desc).unwrap(),
            );
        }
        "describe" => {
            let end_desc = endo::end_ring_description(&inp.matrix, inp.assert_monogenic)?;
            let lin_desc = odometer::linear_rep_group_description(&inp.matrix)?;
            report.insert("end_ring".into(), serde_json::to_value(&end_desc).unwrap());
            report.insert(
                "linear_rep_group".into(),
                serde_json::to_value(&lin_desc).unwrap(),
            );
        }
        "oracle" => {
            let d = endo::bounded_oracle(&inp.matrix, need_t()?, inp.depth.0, inp.depth.1);
            if d.verdict == Verdict::Inconclusive {
                worst = worst.max(3);
            }
            let mut obj = serde_json::Map::new();
            obj.insert("decision".into(), decision_json(&d));
            if let Some(pos) = endo::oracle_positive(&d) {
                obj.insert("all_witnesses_found".into(), json!(pos));
            }
            report.insert("oracle".into(), Value::Object(obj));
        }
        _ => unreachable!(),
    }
    let mut diagnostics = serde_json::Map::new();
    if let Some(p) = inp.precision {
        diagnostics.insert("precision_exponent".into(), json!(p));
    }
    diagnostics.insert("oracle_depth".into(), json!([inp.depth.0, inp.depth.1]));
    report.insert("diagnostics".into(), Value::Object(diagnostics));
    Ok((Value::Object(report), worst))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok((report, worst)) => {
            println!("{}", serde_json::to_string_pretty(&report).unwrap());
            if std::io::stderr().is_terminal() {
                let verdicts: Vec<String> = ["decision", "decisions", "oracle"]
                    .iter()
                    .filter_map(|k| report.get(*k))
                    .map(|v| v.to_string())
                    .collect();
                if !verdicts.is_empty() {
                    eprintln!("verdicts: {}", verdicts.join(" "));
                }
            }
            ExitCode::from(worst)
        }
        Err(e) => {
            let code = match &e {
                Error::Precision(_) => 4,
                _ => 2,
            };
            eprintln!("error: {e}");
            ExitCode::from(code)
        }
    }
}

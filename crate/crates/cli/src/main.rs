//! `sstwist` command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 domain or precondition error,
//! 3 a scenario or mass check returned a false verdict.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value};

use sstwist::arith::{parse_rational, rational_string, Integer, Rational};
use sstwist::cohomology::{
    build_dihedral_action, build_trivial_action, enumerate_h1, twisted_fixed_algebra, FiniteGroup, GroupKind,
};
use sstwist::ellcurve::{supersingular_census, CurveStats, WeierstrassCurve};
use sstwist::field::{FiniteField, Fq};
use sstwist::quat::{classify_group, maximal_order, maximal_order_with_basis, ramified_places, Place, Quaternion};
use sstwist::scenarios::{
    classify_weil, scenario_counterexample, scenario_cyclic_galois, scenario_end_q, scenario_sign_units, verify_table,
    ScenarioReport, TwistClassReport,
};

#[derive(Parser, Debug)]
#[command(name = "sstwist", version, about = "Twists of supersingular elliptic curves, computed exactly")]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalOpts {
    /// Print the canonical JSON envelope to stdout.
    #[arg(long, global = true)]
    json: bool,
    /// Also write the JSON envelope to this file.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Suppress the human-readable summary.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Quaternion algebra B_(p,inf), a maximal order and its unit group.
    Bp {
        p: u64,
        /// Order basis as four `;`-separated rows of four rationals, e.g. "1,0,0,0;0,1,0,0;...".
        #[arg(long)]
        basis: Option<String>,
    },
    /// Cohomology classes of C_m (or D_2m with --dihedral) and End^0 of each twist.
    H1 {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        dihedral: bool,
    },
    /// Run one of the end-to-end scenarios.
    Scenario {
        #[arg(value_enum)]
        name: ScenarioName,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long, default_value_t = 7)]
        pmax: u64,
        #[arg(long, default_value_t = 4)]
        amax: u32,
    },
    /// Look up a supersingular Frobenius trace in the Weil-number table.
    Classify {
        #[arg(long)]
        q: u64,
        #[arg(long, allow_hyphen_values = true)]
        t: String,
    },
    /// Supersingular j-invariants in F_(p^2) and the mass check.
    Census {
        #[arg(long)]
        p: u64,
    },
    /// Point count and Frobenius trace of a Weierstrass curve over F_(p^a).
    Curve {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        a: u32,
        /// a1,a2,a3,a4,a6 as field indices; a negative value denotes the negative of that element.
        #[arg(long, allow_hyphen_values = true)]
        coeffs: String,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ScenarioName {
    Counterexample,
    Endq,
    CyclicGalois,
    SignUnits,
    Table,
}

/// Failure of a command, mapped onto the exit-code contract.
enum Failure {
    Usage(String),
    Domain(String),
}

impl From<sstwist::Error> for Failure {
    fn from(e: sstwist::Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

struct Outcome {
    name: &'static str,
    params: Value,
    result: Value,
    summary: Vec<String>,
    verdict: bool,
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable result")
}

/// Rewrites every JSON number as its decimal string so that no numeric
/// type other than strings reaches the output.
fn canonicalize(v: Value) -> Value {
    match v {
        Value::Number(n) => Value::String(n.to_string()),
        Value::Array(xs) => Value::Array(xs.into_iter().map(canonicalize).collect()),
        Value::Object(m) => Value::Object(m.into_iter().map(|(k, x)| (k, canonicalize(x))).collect::<Map<_, _>>()),
        other => other,
    }
}

fn parse_basis(text: &str) -> Result<Vec<[Rational; 4]>, Failure> {
    text.split(';')
        .map(|row| {
            let entries = row.split(',').map(|x| parse_rational(x.trim())).collect::<sstwist::Result<Vec<_>>>()?;
            entries.try_into().map_err(|_| Failure::Usage(format!("basis row `{row}` must have four entries")))
        })
        .collect()
}

fn place_string(v: &Place) -> String {
    match v {
        Place::Prime(p) => p.to_string(),
        Place::Infinity => "inf".to_string(),
    }
}

fn run_bp(p: u64, basis: Option<&str>) -> Result<Outcome, Failure> {
    let order = match basis {
        Some(text) => maximal_order_with_basis(p, &parse_basis(text)?)?,
        None => maximal_order(p)?,
    };
    let alg = order.algebra();
    let places = ramified_places(alg)?;
    let units = order.unit_group()?;
    let label = classify_group(&units)?;
    let disc = order.reduced_discriminant()?;
    let mut summary = vec![
        format!("B_({p},inf) = ({}, {})", alg.a(), alg.b()),
        format!("ramified at {}", places.iter().map(place_string).collect::<Vec<_>>().join(", ")),
        format!(
            "maximal order basis: {}",
            order.basis().iter().map(Quaternion::to_string).collect::<Vec<_>>().join(", ")
        ),
        format!("reduced discriminant {disc}"),
        format!("{} units, group {label}", units.len()),
    ];
    if let Some(alias) = label.alias() {
        summary.last_mut().expect("nonempty").push_str(&format!(" ({alias})"));
    }
    let result = json!({
        "algebra": { "a": rational_string(alg.a()), "b": rational_string(alg.b()) },
        "ramified_places": places.iter().map(place_string).collect::<Vec<_>>(),
        "order_basis": to_value(&order.basis()),
        "reduced_discriminant": disc.to_string(),
        "maximal": order.is_maximal()?,
        "units": to_value(&units),
        "unit_count": units.len(),
        "group_label": label.to_string(),
        "group_alias": label.alias(),
    });
    let params = json!({ "p": p, "basis": basis });
    Ok(Outcome { name: "bp", params, result, summary, verdict: true })
}

fn run_h1(p: u64, m: u32, dihedral: bool) -> Result<Outcome, Failure> {
    let action = if dihedral {
        build_dihedral_action(p, m)?.action
    } else {
        build_trivial_action(FiniteGroup::new(GroupKind::Cyclic(m))?, &maximal_order(p)?)?
    };
    let classes = enumerate_h1(&action)?;
    let reports = classes
        .iter()
        .map(|c| {
            let fixed = twisted_fixed_algebra(&action, &c.representative)?;
            Ok(TwistClassReport::new(&action, &c.representative, c.orbit_size, fixed))
        })
        .collect::<sstwist::Result<Vec<_>>>()?;
    let group = action.group().kind().to_string();
    let mut summary = vec![format!(
        "{group} acting {} on {} units: {} classes",
        if dihedral { "dihedrally" } else { "trivially" },
        action.units().len(),
        reports.len()
    )];
    for (k, r) in reports.iter().enumerate() {
        let values: Vec<String> = r.cocycle.iter().map(|v| format!("{}->{}", v.element, v.value)).collect();
        summary.push(format!(
            "  class {k} (size {}): [{}] End^0 = {}",
            r.orbit_size,
            values.join(", "),
            r.fixed_algebra.label
        ));
    }
    let result = json!({
        "group": group,
        "action": if dihedral { "dihedral" } else { "trivial" },
        "units": to_value(&action.units()),
        "classes": to_value(&reports),
    });
    let params = json!({ "p": p, "m": m, "dihedral": dihedral });
    Ok(Outcome { name: "h1", params, result, summary, verdict: true })
}

fn scenario_summary(r: &ScenarioReport) -> Vec<String> {
    let mut lines = vec![format!("scenario {} (p = {})", r.id, r.p)];
    lines.extend(r.narrative.iter().map(|l| format!("  {l}")));
    lines.extend(r.checks.iter().map(|c| format!("  [{}] {}", if c.passed { "pass" } else { "FAIL" }, c.name)));
    lines.push(format!("verdict: {}", r.verdict));
    lines
}

fn run_scenario(name: ScenarioName, p: Option<u64>, pmax: u64, amax: u32) -> Result<Outcome, Failure> {
    let need_p = || p.ok_or_else(|| Failure::Usage("this scenario needs --p".to_string()));
    let (report, params) = match name {
        ScenarioName::Counterexample => {
            (scenario_counterexample(need_p()?)?, json!({ "name": "counterexample", "p": p }))
        }
        ScenarioName::Endq => (scenario_end_q(need_p()?)?, json!({ "name": "endq", "p": p })),
        ScenarioName::CyclicGalois => (scenario_cyclic_galois(need_p()?)?, json!({ "name": "cyclic-galois", "p": p })),
        ScenarioName::SignUnits => (scenario_sign_units(need_p()?)?, json!({ "name": "sign-units", "p": p })),
        ScenarioName::Table => (verify_table(pmax, amax)?, json!({ "name": "table", "pmax": pmax, "amax": amax })),
    };
    Ok(Outcome {
        name: "scenario",
        params,
        summary: scenario_summary(&report),
        verdict: report.verdict,
        result: to_value(&report),
    })
}

fn run_classify(q: u64, t: &str) -> Result<Outcome, Failure> {
    let t: Integer = t.trim().parse().map_err(|_| Failure::Usage(format!("`{t}` is not an integer")))?;
    let class = classify_weil(q, &t)?;
    let summary = vec![format!(
        "q = {q}, t = {t}: {} (pi = {})",
        class.end_label,
        to_value(&class.pi_form).as_str().unwrap_or("")
    )];
    let params = json!({ "q": q, "t": t.to_string() });
    Ok(Outcome { name: "classify", params, result: to_value(&class), summary, verdict: true })
}

fn run_census(p: u64) -> Result<Outcome, Failure> {
    let report = supersingular_census(p)?;
    let mut summary = vec![format!("{} supersingular j-invariants in F_({p}^2)", report.supersingular.len())];
    for e in &report.supersingular {
        summary.push(format!(
            "  j = {:?} (coefficients), |Aut| = {}, trace over F_(p^2) = {}",
            e.j_coeffs, e.aut_order, e.trace
        ));
    }
    summary.push(format!(
        "mass {} (expected {}): {}",
        rational_string(&report.mass),
        rational_string(&report.expected_mass),
        if report.mass_ok { "ok" } else { "MISMATCH" }
    ));
    Ok(Outcome {
        name: "census",
        params: json!({ "p": p }),
        verdict: report.mass_ok,
        result: to_value(&report),
        summary,
    })
}

fn field_element(f: &FiniteField, v: i64) -> Result<Fq, Failure> {
    let x = f.element(v.unsigned_abs())?;
    Ok(if v < 0 { f.neg(x) } else { x })
}

fn run_curve(p: u64, a: u32, coeffs: &str) -> Result<Outcome, Failure> {
    let values = coeffs
        .split(',')
        .map(|x| x.trim().parse::<i64>().map_err(|_| Failure::Usage(format!("`{x}` is not an integer"))))
        .collect::<Result<Vec<_>, _>>()?;
    let values: [i64; 5] = values
        .try_into()
        .map_err(|_| Failure::Usage("--coeffs needs exactly five values a1,a2,a3,a4,a6".to_string()))?;
    let field = Arc::new(FiniteField::new(p, a)?);
    let a_fq = values.iter().map(|&v| field_element(&field, v)).collect::<Result<Vec<_>, _>>()?;
    let curve = WeierstrassCurve::new(field.clone(), a_fq.try_into().expect("five coefficients"))?;
    let stats: CurveStats = curve.stats()?;
    let summary = vec![format!(
        "over F_{}: #E = {}, t = {}, j = {}, {}",
        stats.q,
        stats.count,
        stats.trace,
        stats.j.index(),
        if stats.supersingular { "supersingular" } else { "ordinary" }
    )];
    let mut result = to_value(&stats);
    result["coefficients"] = to_value(&curve.coefficients().map(Fq::index));
    result["discriminant"] = to_value(&curve.discriminant().index());
    Ok(Outcome { name: "curve", params: json!({ "p": p, "a": a, "coeffs": values }), result, summary, verdict: true })
}

fn dispatch(command: &Command) -> Result<Outcome, Failure> {
    match command {
        Command::Bp { p, basis } => run_bp(*p, basis.as_deref()),
        Command::H1 { p, m, dihedral } => run_h1(*p, *m, *dihedral),
        Command::Scenario { name, p, pmax, amax } => run_scenario(*name, *p, *pmax, *amax),
        Command::Classify { q, t } => run_classify(*q, t),
        Command::Census { p } => run_census(*p),
        Command::Curve { p, a, coeffs } => run_curve(*p, *a, coeffs),
    }
}

fn envelope(outcome: &Outcome) -> String {
    let v = json!({
        "command": outcome.name,
        "params": outcome.params,
        "result": outcome.result,
        "version": env!("CARGO_PKG_VERSION"),
    });
    serde_json::to_string_pretty(&canonicalize(v)).expect("serializable envelope")
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match dispatch(&cli.command) {
        Ok(o) => o,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let text = envelope(&outcome);
    if let Some(path) = &cli.global.out {
        if let Err(e) = std::fs::write(path, format!("{text}\n")) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    let mut stdout = std::io::stdout().lock();
    let _ = if cli.global.json {
        writeln!(stdout, "{text}")
    } else if !cli.global.quiet {
        outcome.summary.iter().try_for_each(|line| writeln!(stdout, "{line}"))
    } else {
        Ok(())
    };
    if outcome.verdict {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(3)
    }
}

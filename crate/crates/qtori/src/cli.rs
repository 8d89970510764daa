//! Command-line interface.
//!
//! Every number crossing the boundary is an exact rational or a rational
//! polynomial in `t`, printed and parsed as text. Output is deterministic:
//! the same invocation produces byte-identical bytes on every run.
//!
//! Exit codes: 0 on success, 1 for mathematical failures (violated covering
//! relations, cohomological obstructions, failed verification reports), 2
//! for usage problems (unknown flags, malformed expressions, bad files).

use std::fmt::Write as _;
use std::fs;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use num::{BigInt, BigRational, One, Zero};
use serde_json::{json, Value};

use crate::abgroup::FiniteAbelianGroup;
use crate::covering::{
    build_connected_covering, check_connected_covering, classify_coverings, profinite_tower,
    check_freeness_ergodic, solve_theta_prime, CoveringReport,
};
use crate::error::Error;
use crate::expr::eval_expr;
use crate::lattice::IntMatrix;
use crate::phase::Scalar;
use crate::ratpoly::RatPoly;
use crate::smooth::{build_smooth_covering, OutSmoothElement, SigmaEntry, TorusPoint};
use crate::torus::ThetaMatrix;

enum Failure {
    Usage(String),
    Domain(Error),
}

type CliResult<T> = std::result::Result<T, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            // Shape and syntax problems are the caller's input, not a
            // mathematical outcome.
            Error::ExprSyntax { .. }
            | Error::PolySyntax { .. }
            | Error::UnknownGenerator { .. }
            | Error::DimensionMismatch { .. }
            | Error::NotSkew
            | Error::NotUnimodular { .. } => Failure::Usage(e.to_string()),
            other => Failure::Domain(other),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "qtc",
    version,
    about = "Exact arithmetic for finite coverings of quantum tori"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate an expression in the twisted group algebra
    Eval(EvalArgs),
    /// Solve the covering relation M theta' M^T = theta + K for theta'
    SolveTheta(SolveThetaArgs),
    /// Enumerate coverings by sublattice index, with verification reports
    Classify(ClassifyArgs),
    /// Build one connected covering and run the full structural check
    CheckCovering(CheckCoveringArgs),
    /// Build an equivariant graded covering from a homomorphism file
    SmoothBuild(SmoothBuildArgs),
    /// Print the poset of finite quotients with connecting surjections
    Poset(PosetArgs),
    /// Decide freeness of a dual action from its character support
    Freeness(FreenessArgs),
}

#[derive(Args)]
struct OutputOpts {
    /// Emit compact JSON instead of text
    #[arg(long)]
    json: bool,
    /// Emit pretty-printed JSON (implies --json)
    #[arg(long)]
    pretty: bool,
}

impl OutputOpts {
    fn emit(&self, text: &str, value: &Value) {
        let rendered = if self.pretty {
            serde_json::to_string_pretty(value).expect("serializable")
        } else if self.json {
            serde_json::to_string(value).expect("serializable")
        } else {
            text.to_string()
        };
        use std::io::Write as _;
        let mut stdout = std::io::stdout().lock();
        // A closed pipe downstream is not our error; stop quietly.
        if writeln!(stdout, "{rendered}").is_err() || stdout.flush().is_err() {
            std::process::exit(0);
        }
    }
}

#[derive(Args)]
struct EvalArgs {
    /// theta_12 as a polynomial in t (dimension 2), or @file with a full
    /// skew matrix of polynomials
    #[arg(long, allow_hyphen_values = true)]
    theta: String,
    /// Expression, e.g. "u*v - e(1/2)*v^2'"
    #[arg(allow_hyphen_values = true)]
    expr: String,
    #[command(flatten)]
    out: OutputOpts,
}

#[derive(Args)]
struct SolveThetaArgs {
    #[arg(long, allow_hyphen_values = true)]
    theta: String,
    /// Sublattice matrix, row-major comma-separated integers
    #[arg(long = "M", allow_hyphen_values = true)]
    m: String,
    /// Integer skew correction, row-major; "0" is the zero matrix
    #[arg(long = "K", default_value = "0", allow_hyphen_values = true)]
    k: String,
    #[command(flatten)]
    out: OutputOpts,
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long, allow_hyphen_values = true)]
    theta: String,
    /// Largest sublattice index to enumerate
    #[arg(long)]
    max_index: i64,
    /// Bound on the entries of the correction matrix K
    #[arg(long, default_value_t = 0)]
    kbound: i64,
    /// Exponent box radius used by the verification pass
    #[arg(long, default_value_t = 3)]
    support_bound: i64,
    #[command(flatten)]
    out: OutputOpts,
}

#[derive(Args)]
struct CheckCoveringArgs {
    #[arg(long, allow_hyphen_values = true)]
    theta: String,
    #[arg(long = "M", allow_hyphen_values = true)]
    m: String,
    #[arg(long = "K", default_value = "0", allow_hyphen_values = true)]
    k: String,
    /// Candidate theta' to check against the covering relation instead of
    /// deriving it from K; same format as --theta
    #[arg(long, allow_hyphen_values = true)]
    theta_prime: Option<String>,
    #[arg(long, default_value_t = 3)]
    support_bound: i64,
    #[command(flatten)]
    out: OutputOpts,
}

#[derive(Args)]
struct SmoothBuildArgs {
    #[arg(long, allow_hyphen_values = true)]
    theta: String,
    /// JSON file describing the homomorphism: {"group": [d1, ...],
    /// "images": [{"w": [[a, b], [a, b]], "M": [[..], [..]]}, ...]} where
    /// each w coordinate is [rational part, theta coefficient]
    #[arg(long)]
    phi: String,
    #[command(flatten)]
    out: OutputOpts,
}

#[derive(Args)]
struct PosetArgs {
    /// Rank of the ambient lattice
    #[arg(long, default_value_t = 2)]
    dim: usize,
    #[arg(long)]
    max_index: i64,
    #[command(flatten)]
    out: OutputOpts,
}

#[derive(Args)]
struct FreenessArgs {
    /// Invariant factors of the finite group, comma separated, e.g. "2,2"
    #[arg(long)]
    group: String,
    /// Characters with unitary isotypic components: elements separated by
    /// ';', coordinates by ','
    #[arg(long, allow_hyphen_values = true)]
    support: String,
    #[command(flatten)]
    out: OutputOpts,
}

/// Entry point used by the `qtc` binary; returns the process exit code.
pub fn cli_main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    if let Ok(spec) = std::env::var("QTC_THREADS") {
        match spec.trim().parse::<usize>() {
            Ok(k) if k >= 1 => {
                // Ignore the error if a pool was already installed.
                let _ = rayon::ThreadPoolBuilder::new().num_threads(k).build_global();
            }
            _ => {
                eprintln!("usage error: QTC_THREADS must be a positive integer, got {spec:?}");
                return 2;
            }
        }
    }
    match run(&cli) {
        Ok(()) => 0,
        Err(Failure::Usage(m)) => {
            eprintln!("usage error: {m}");
            2
        }
        Err(Failure::Domain(e)) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn run(cli: &Cli) -> CliResult<()> {
    match &cli.cmd {
        Cmd::Eval(a) => run_eval(a),
        Cmd::SolveTheta(a) => run_solve_theta(a),
        Cmd::Classify(a) => run_classify(a),
        Cmd::CheckCovering(a) => run_check_covering(a),
        Cmd::SmoothBuild(a) => run_smooth_build(a),
        Cmd::Poset(a) => run_poset(a),
        Cmd::Freeness(a) => run_freeness(a),
    }
}

fn parse_theta(spec: &str) -> CliResult<ThetaMatrix> {
    if let Some(path) = spec.strip_prefix('@') {
        let text =
            fs::read_to_string(path).map_err(|e| usage(format!("cannot read {path}: {e}")))?;
        let rows: Vec<Vec<String>> = serde_json::from_str(&text)
            .map_err(|e| usage(format!("{path}: expected a matrix of polynomial strings: {e}")))?;
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in &rows {
            if row.len() != n {
                return Err(usage(format!("{path}: matrix must be square, got a row of {}", row.len())));
            }
            for s in row {
                entries.push(RatPoly::from_str(s).map_err(|e| usage(format!("{path}: {e}")))?);
            }
        }
        Ok(ThetaMatrix::new(n, entries)?)
    } else {
        let p = RatPoly::from_str(spec).map_err(|e| usage(format!("--theta: {e}")))?;
        Ok(ThetaMatrix::two_d(p))
    }
}

fn parse_int_matrix(spec: &str, n: usize, flag: &str) -> CliResult<IntMatrix> {
    let spec = spec.trim();
    if spec == "0" {
        return Ok(IntMatrix::zeros(n, n));
    }
    let vals = spec
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<i64>()
                .map_err(|_| usage(format!("{flag}: bad integer {:?}", s.trim())))
        })
        .collect::<CliResult<Vec<i64>>>()?;
    if vals.len() != n * n {
        return Err(usage(format!(
            "{flag}: expected {n}x{n} = {} row-major entries, got {}",
            n * n,
            vals.len()
        )));
    }
    Ok(IntMatrix::from_rows(vals.chunks(n).map(|c| c.to_vec()).collect()))
}

fn parse_rational(s: &str) -> CliResult<BigRational> {
    let s = s.trim();
    let (numer, denom) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let n: BigInt = numer
        .parse()
        .map_err(|_| usage(format!("bad rational {s:?}")))?;
    let d: BigInt = denom
        .parse()
        .map_err(|_| usage(format!("bad rational {s:?}")))?;
    if d.is_zero() {
        return Err(usage(format!("bad rational {s:?}: zero denominator")));
    }
    Ok(BigRational::new(n, d))
}

fn rat_str(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn mat_json(m: &IntMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array((0..m.cols()).map(|j| json!(m[(i, j)])).collect()))
            .collect(),
    )
}

fn mat_text(m: &IntMatrix) -> String {
    let rows: Vec<String> = (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| m[(i, j)].to_string())
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect();
    format!("[{}]", rows.join("; "))
}

fn theta_json(t: &ThetaMatrix) -> Value {
    Value::Array(
        (0..t.dim())
            .map(|i| {
                Value::Array(
                    (0..t.dim())
                        .map(|j| Value::String(t.entry(i, j).to_string()))
                        .collect(),
                )
            })
            .collect(),
    )
}

fn theta_text(t: &ThetaMatrix) -> String {
    let rows: Vec<String> = (0..t.dim())
        .map(|i| {
            (0..t.dim())
                .map(|j| t.entry(i, j).to_string())
                .collect::<Vec<_>>()
                .join(", ")
        })
        .collect();
    format!("[{}]", rows.join("; "))
}

fn point_json(p: &TorusPoint) -> Value {
    json!([rat_str(p.rational_part()), rat_str(p.theta_part())])
}

fn point_text(p: &TorusPoint) -> String {
    format!("{}+{}*theta", rat_str(p.rational_part()), rat_str(p.theta_part()))
}

fn out_elem_json(e: &OutSmoothElement) -> Value {
    json!({
        "w": e.w().iter().map(point_json).collect::<Vec<_>>(),
        "M": mat_json(e.matrix()),
    })
}

fn out_elem_text(e: &OutSmoothElement) -> String {
    let w: Vec<String> = e.w().iter().map(point_text).collect();
    format!("w=({}) M={}", w.join(", "), mat_text(e.matrix()))
}

fn sigma_entry_text(entry: &SigmaEntry) -> String {
    let u = format!(
        "U({})",
        entry
            .exponent
            .iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(",")
    );
    if entry.phase.is_trivial() {
        if entry.exponent.iter().all(|&x| x == 0) {
            "1".to_string()
        } else {
            u
        }
    } else if entry.exponent.iter().all(|&x| x == 0) {
        format!("e({})", entry.phase)
    } else {
        format!("e({})*{u}", entry.phase)
    }
}

fn vec_text(v: &[i64]) -> String {
    format!(
        "({})",
        v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
    )
}

fn run_eval(a: &EvalArgs) -> CliResult<()> {
    let theta = parse_theta(&a.theta)?;
    let x = eval_expr(&a.expr, &theta)?;
    let terms: Vec<Value> = x
        .terms()
        .map(|(lam, c): (&Vec<i64>, &Scalar)| json!({"exponent": lam, "coeff": c.to_string()}))
        .collect();
    let rendered = x.to_string();
    let value = json!({
        "element": rendered,
        "term_count": terms.len(),
        "terms": terms,
    });
    a.out.emit(&rendered, &value);
    Ok(())
}

fn run_solve_theta(a: &SolveThetaArgs) -> CliResult<()> {
    let theta = parse_theta(&a.theta)?;
    let n = theta.dim();
    let m = parse_int_matrix(&a.m, n, "--M")?;
    let k = parse_int_matrix(&a.k, n, "--K")?;
    let tp = solve_theta_prime(&theta, &m, &k)?;
    let mut text = String::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let _ = writeln!(text, "theta'[{},{}] = {}", i + 1, j + 1, tp.entry(i, j));
        }
    }
    text.pop();
    let value = json!({"theta_prime": theta_json(&tp)});
    a.out.emit(&text, &value);
    Ok(())
}

fn run_classify(a: &ClassifyArgs) -> CliResult<()> {
    let theta = parse_theta(&a.theta)?;
    let rows = classify_coverings(&theta, a.max_index, a.kbound, a.support_bound)?;
    let mut text = String::new();
    let mut json_rows = Vec::new();
    for row in &rows {
        let factors = format!(
            "[{}]",
            row.invariant_factors
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        );
        let _ = writeln!(
            text,
            "index={} M={} K={} group={} theta'={} passed={}",
            row.index,
            mat_text(&row.m),
            mat_text(&row.k),
            factors,
            theta_text(&row.theta_prime),
            row.report.all_passed()
        );
        json_rows.push(json!({
            "index": row.index,
            "M": mat_json(&row.m),
            "K": mat_json(&row.k),
            "invariant_factors": row.invariant_factors,
            "theta_prime": theta_json(&row.theta_prime),
            "all_passed": row.report.all_passed(),
            "action_free": row.report.action_free(),
        }));
    }
    let _ = write!(text, "total: {}", rows.len());
    let value = json!({"count": rows.len(), "rows": json_rows});
    a.out.emit(&text, &value);
    Ok(())
}

fn report_json(report: &CoveringReport) -> Value {
    json!({
        "action_well_defined": report.action_well_defined,
        "relations_embed": report.relations_embed,
        "fixed_support_matches": report.fixed_support_matches,
        "fixed_algebra_generated": report.fixed_algebra_generated,
        "characters_total": report.characters_total,
        "characters_covered": report.characters_covered,
        "action_free": report.action_free(),
        "lift_restricts": report.lift_restricts,
        "lift_commutes": report.lift_commutes,
        "lift_ergodic": report.lift_ergodic,
        "all_passed": report.all_passed(),
    })
}

fn run_check_covering(a: &CheckCoveringArgs) -> CliResult<()> {
    let theta = parse_theta(&a.theta)?;
    let n = theta.dim();
    let m = parse_int_matrix(&a.m, n, "--M")?;
    let tp = match &a.theta_prime {
        Some(spec) => parse_theta(spec)?,
        None => {
            let k = parse_int_matrix(&a.k, n, "--K")?;
            solve_theta_prime(&theta, &m, &k)?
        }
    };
    let sys = build_connected_covering(&theta, &m, &tp)?;
    let report = check_connected_covering(&sys, a.support_bound);
    let mut text = String::new();
    let _ = writeln!(text, "index: {}", sys.group.index());
    let _ = writeln!(text, "K: {}", mat_text(&sys.spec.k));
    let _ = writeln!(text, "theta': {}", theta_text(&sys.spec.theta_prime));
    let _ = writeln!(text, "action_well_defined: {}", report.action_well_defined);
    let _ = writeln!(text, "relations_embed: {}", report.relations_embed);
    let _ = writeln!(text, "fixed_support_matches: {}", report.fixed_support_matches);
    let _ = writeln!(text, "fixed_algebra_generated: {}", report.fixed_algebra_generated);
    let _ = writeln!(
        text,
        "characters_covered: {}/{}",
        report.characters_covered, report.characters_total
    );
    let _ = writeln!(text, "lift_restricts: {}", report.lift_restricts);
    let _ = writeln!(text, "lift_commutes: {}", report.lift_commutes);
    let _ = writeln!(text, "lift_ergodic: {}", report.lift_ergodic);
    let _ = write!(text, "all_passed: {}", report.all_passed());
    let value = json!({
        "index": sys.group.index(),
        "K": mat_json(&sys.spec.k),
        "theta_prime": theta_json(&sys.spec.theta_prime),
        "report": report_json(&report),
    });
    a.out.emit(&text, &value);
    if !report.all_passed() {
        return Err(Failure::Domain(Error::Invalid(
            "covering verification failed; see report".into(),
        )));
    }
    Ok(())
}

fn json_i64(v: &Value, what: &str) -> CliResult<i64> {
    v.as_i64().ok_or_else(|| usage(format!("{what}: expected an integer, got {v}")))
}

fn json_rat(v: &Value, what: &str) -> CliResult<BigRational> {
    if let Some(s) = v.as_str() {
        return parse_rational(s);
    }
    if let Some(k) = v.as_i64() {
        return Ok(BigRational::from_integer(k.into()));
    }
    Err(usage(format!("{what}: expected a rational string, got {v}")))
}

fn parse_phi_file(path: &str) -> CliResult<(FiniteAbelianGroup, Vec<OutSmoothElement>)> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("cannot read {path}: {e}")))?;
    let v: Value =
        serde_json::from_str(&text).map_err(|e| usage(format!("{path}: invalid JSON: {e}")))?;
    let factors = v
        .get("group")
        .and_then(Value::as_array)
        .ok_or_else(|| usage(format!("{path}: missing \"group\" array")))?
        .iter()
        .map(|x| json_i64(x, "group factor"))
        .collect::<CliResult<Vec<i64>>>()?;
    let group = FiniteAbelianGroup::new(factors)?;
    let images_json = v
        .get("images")
        .and_then(Value::as_array)
        .ok_or_else(|| usage(format!("{path}: missing \"images\" array")))?;
    let mut images = Vec::new();
    for (i, img) in images_json.iter().enumerate() {
        let w_json = img
            .get("w")
            .and_then(Value::as_array)
            .ok_or_else(|| usage(format!("{path}: image {i}: missing \"w\"")))?;
        if w_json.len() != 2 {
            return Err(usage(format!("{path}: image {i}: w must have 2 coordinates")));
        }
        let mut w = Vec::new();
        for coord in w_json {
            let pair = coord
                .as_array()
                .filter(|p| p.len() == 2)
                .ok_or_else(|| {
                    usage(format!(
                        "{path}: image {i}: each w coordinate is [rational, theta coefficient]"
                    ))
                })?;
            let a = json_rat(&pair[0], "w rational part")?;
            let b = json_rat(&pair[1], "w theta coefficient")?;
            w.push(TorusPoint::new(a, b));
        }
        let m_json = img
            .get("M")
            .and_then(Value::as_array)
            .ok_or_else(|| usage(format!("{path}: image {i}: missing \"M\"")))?;
        let mut rows = Vec::new();
        for row in m_json {
            let row = row
                .as_array()
                .ok_or_else(|| usage(format!("{path}: image {i}: M rows must be arrays")))?;
            rows.push(
                row.iter()
                    .map(|x| json_i64(x, "M entry"))
                    .collect::<CliResult<Vec<i64>>>()?,
            );
        }
        if rows.len() != 2 || rows.iter().any(|r| r.len() != 2) {
            return Err(usage(format!("{path}: image {i}: M must be 2x2")));
        }
        images.push(OutSmoothElement::new(w, IntMatrix::from_rows(rows))?);
    }
    Ok((group, images))
}

fn run_smooth_build(a: &SmoothBuildArgs) -> CliResult<()> {
    let theta = parse_theta(&a.theta)?;
    let (group, images) = parse_phi_file(&a.phi)?;
    let sys = build_smooth_covering(&theta, &group, &images)?;
    let report = sys.verify()?;
    let mut text = String::new();
    let _ = writeln!(
        text,
        "group: [{}]",
        group
            .factors()
            .iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(",")
    );
    let mut sigma_rows = Vec::new();
    for ((c1, c2), entry) in sys.sigma() {
        if !entry.is_trivial() {
            let _ = writeln!(
                text,
                "sigma{}{} = {}",
                vec_text(c1),
                vec_text(c2),
                sigma_entry_text(entry)
            );
        }
        sigma_rows.push(json!({
            "chi1": c1,
            "chi2": c2,
            "exponent": entry.exponent,
            "phase": entry.phase.to_string(),
        }));
    }
    let mut picard_rows = Vec::new();
    for chi in sys.group().elements() {
        let cls = sys.picard_of(&chi)?;
        let _ = writeln!(text, "picard{} = {}", vec_text(&chi), out_elem_text(&cls));
        picard_rows.push(json!({"chi": chi, "class": out_elem_json(&cls)}));
    }
    let report_value = json!({
        "normalized": report.normalized,
        "alpha_consistent": report.alpha_consistent,
        "associative": report.associative,
        "unitaries": report.unitaries,
        "graded": report.graded,
        "fixed_algebra": report.fixed_algebra,
        "involution": report.involution,
        "action_covariant": report.action_covariant,
        "all_passed": report.all_passed(),
    });
    let _ = writeln!(text, "associative: {}", report.associative);
    let _ = writeln!(text, "unitaries: {}", report.unitaries);
    let _ = writeln!(text, "fixed_algebra: {}", report.fixed_algebra);
    let _ = write!(text, "all_passed: {}", report.all_passed());
    let value = json!({
        "group": group.factors(),
        "sigma": sigma_rows,
        "picard": picard_rows,
        "report": report_value,
    });
    a.out.emit(&text, &value);
    if !report.all_passed() {
        return Err(Failure::Domain(Error::Invalid(
            "graded system verification failed; see report".into(),
        )));
    }
    Ok(())
}

fn run_poset(a: &PosetArgs) -> CliResult<()> {
    let tower = profinite_tower(a.dim, a.max_index)?;
    let mut text = String::new();
    let mut node_rows = Vec::new();
    for (i, node) in tower.nodes.iter().enumerate() {
        let factors = node
            .invariant_factors
            .iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(",");
        let _ = writeln!(
            text,
            "node {i}: M={} index={} group=[{}]",
            mat_text(&node.m),
            node.index,
            factors
        );
        node_rows.push(json!({
            "M": mat_json(&node.m),
            "index": node.index,
            "invariant_factors": node.invariant_factors,
        }));
    }
    let mut edge_rows = Vec::new();
    for edge in &tower.edges {
        let _ = writeln!(
            text,
            "edge {} -> {}: map={}",
            edge.from,
            edge.to,
            mat_text(&edge.map)
        );
        edge_rows.push(json!({
            "from": edge.from,
            "to": edge.to,
            "map": mat_json(&edge.map),
        }));
    }
    let _ = write!(
        text,
        "nodes: {}, edges: {}",
        tower.nodes.len(),
        tower.edges.len()
    );
    let value = json!({"nodes": node_rows, "edges": edge_rows});
    a.out.emit(&text, &value);
    Ok(())
}

fn run_freeness(a: &FreenessArgs) -> CliResult<()> {
    let factors = a
        .group
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<i64>()
                .map_err(|_| usage(format!("--group: bad integer {:?}", s.trim())))
        })
        .collect::<CliResult<Vec<i64>>>()?;
    let group = FiniteAbelianGroup::new(factors)?;
    let support = a
        .support
        .split(';')
        .map(|elem| {
            elem.split(',')
                .map(|s| {
                    s.trim()
                        .parse::<i64>()
                        .map_err(|_| usage(format!("--support: bad integer {:?}", s.trim())))
                })
                .collect::<CliResult<Vec<i64>>>()
        })
        .collect::<CliResult<Vec<Vec<i64>>>>()?;
    let report = check_freeness_ergodic(&support, &group)?;
    let mut text = String::new();
    let _ = writeln!(text, "free: {}", report.free);
    let _ = writeln!(
        text,
        "support subgroup order: {}/{}",
        report.subgroup_order, report.group_order
    );
    let kernel: Vec<String> = report.kernel.iter().map(|g| vec_text(g)).collect();
    let _ = writeln!(text, "kernel: {{{}}}", kernel.join(", "));
    let _ = write!(
        text,
        "kernel invariant factors: [{}]",
        report
            .kernel_invariant_factors
            .iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(",")
    );
    let value = json!({
        "free": report.free,
        "subgroup_order": report.subgroup_order,
        "group_order": report.group_order,
        "kernel": report.kernel,
        "kernel_invariant_factors": report.kernel_invariant_factors,
    });
    a.out.emit(&text, &value);
    Ok(())
}

//! Command implementations behind the `zonovol` binary: body-file parsing,
//! dispatch to the computation modules, and text/JSON rendering.
//!
//! Output contract: text numbers carry 12 significant digits; JSON uses the
//! shortest round-trip float encoding with insertion-ordered keys, so one
//! seed and one input file always produce byte-identical output.

use nalgebra::DVector;
use serde::Deserialize;
use serde_json::json;

use crate::bodies::{Body, Budget, VPolytope, Zonotope};
use crate::error::{Error, Result};
use crate::inequality::{
    check_af_lower, check_reverse_af, equality_diagnostics, intrinsic_volume_of_body,
    mixed_volume_of_bodies, InequalityId, InequalityReport,
};
use crate::linalg::{Subspace, Vector};
use crate::oracle::polarization_mixed_volume;
use crate::rng::SampleRng;
use crate::stability::{
    ball_intrinsic_ratio, check_stability, cm_intrinsic_check, projstab_check, TheoremId,
};
use crate::zonoid::Evaluator;

/// Exit code for a checked inequality or certificate that failed to hold.
pub const EXIT_VIOLATED: i32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Text,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "text" => Ok(OutputFormat::Text),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::Parse(format!("unknown format {other:?}"))),
        }
    }
}

/// Rendered command result.
pub struct CmdResult {
    pub stdout: String,
    pub exit_code: i32,
}

impl CmdResult {
    fn ok(stdout: String) -> Self {
        Self {
            stdout,
            exit_code: 0,
        }
    }
}

/// 12 significant digits for text output.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    let decimals = (11 - exp).clamp(0, 17) as usize;
    format!("{:.*}", decimals, x)
}

// ---------------------------------------------------------------------------
// Body files

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct BodyFileJson {
    dimension: usize,
    bodies: Vec<BodyEntryJson>,
    #[serde(default)]
    multiplicities: Option<Vec<usize>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct BodyEntryJson {
    name: String,
    kind: String,
    #[serde(default)]
    generators: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    vertices: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    offset: Option<Vec<f64>>,
    #[serde(default)]
    radius: Option<f64>,
}

/// Parsed and validated body file.
pub struct BodyFile {
    pub dimension: usize,
    pub names: Vec<String>,
    pub bodies: Vec<Body>,
    pub default_multiplicities: Option<Vec<usize>>,
}

fn to_vector(name: &str, what: &str, dim: usize, coords: &[f64]) -> Result<Vector> {
    if coords.len() != dim {
        return Err(Error::Parse(format!(
            "body {name:?}: {what} has {} coordinates, expected {dim}",
            coords.len()
        )));
    }
    if !coords.iter().all(|x| x.is_finite()) {
        return Err(Error::Parse(format!(
            "body {name:?}: non-finite coordinate in {what}"
        )));
    }
    Ok(DVector::from_row_slice(coords))
}

/// Parse a body file. Every structural defect (syntax, coordinate lengths,
/// duplicate names, non-unit balls, several ball entries) is a parse error.
pub fn parse_body_file(content: &str) -> Result<BodyFile> {
    let raw: BodyFileJson = serde_json::from_str(content)
        .map_err(|e| Error::Parse(format!("body file: {e}")))?;
    let dim = raw.dimension;
    if dim == 0 {
        return Err(Error::Parse("dimension must be at least 1".into()));
    }
    if raw.bodies.is_empty() {
        return Err(Error::Parse("body list is empty".into()));
    }
    let mut names = Vec::new();
    let mut bodies = Vec::new();
    let mut ball_seen = false;
    for entry in &raw.bodies {
        if names.contains(&entry.name) {
            return Err(Error::Parse(format!("duplicate body name {:?}", entry.name)));
        }
        let body = match entry.kind.as_str() {
            "zonotope" => {
                let gens = entry.generators.as_ref().ok_or_else(|| {
                    Error::Parse(format!("body {:?}: zonotope needs generators", entry.name))
                })?;
                let gens: Vec<Vector> = gens
                    .iter()
                    .map(|g| to_vector(&entry.name, "generator", dim, g))
                    .collect::<Result<_>>()?;
                let offset = match &entry.offset {
                    Some(o) => Some(to_vector(&entry.name, "offset", dim, o)?),
                    None => None,
                };
                Body::Zonotope(Zonotope::new(dim, gens, offset)?)
            }
            "vpolytope" => {
                let verts = entry.vertices.as_ref().ok_or_else(|| {
                    Error::Parse(format!("body {:?}: vpolytope needs vertices", entry.name))
                })?;
                let verts: Vec<Vector> = verts
                    .iter()
                    .map(|v| to_vector(&entry.name, "vertex", dim, v))
                    .collect::<Result<_>>()?;
                Body::Polytope(VPolytope::new(dim, verts)?)
            }
            "ball" => {
                if ball_seen {
                    return Err(Error::Parse(
                        "at most one ball entry is allowed; give it a multiplicity instead"
                            .into(),
                    ));
                }
                ball_seen = true;
                let r = entry.radius.unwrap_or(1.0);
                if (r - 1.0).abs() > 1e-12 {
                    return Err(Error::Parse(format!(
                        "body {:?}: only the unit ball (radius 1) is supported on exact \
                         paths, got radius {r}",
                        entry.name
                    )));
                }
                Body::Ball { ambient: dim }
            }
            other => {
                return Err(Error::Parse(format!(
                    "body {:?}: unknown kind {other:?} (zonotope, vpolytope or ball)",
                    entry.name
                )))
            }
        };
        names.push(entry.name.clone());
        bodies.push(body);
    }
    if let Some(m) = &raw.multiplicities {
        if m.len() != bodies.len() {
            return Err(Error::Parse(format!(
                "multiplicities list has {} entries for {} bodies",
                m.len(),
                bodies.len()
            )));
        }
    }
    Ok(BodyFile {
        dimension: dim,
        names,
        bodies,
        default_multiplicities: raw.multiplicities,
    })
}

pub fn load_body_file(path: &str) -> Result<BodyFile> {
    let content = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {path}: {e}")))?;
    parse_body_file(&content)
}

/// Multiplicities from the flag, the file default, or all ones.
pub fn resolve_multiplicities(file: &BodyFile, flag: Option<&str>) -> Result<Vec<usize>> {
    let mults = match flag {
        Some(s) => s
            .split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad multiplicity {tok:?}")))
            })
            .collect::<Result<Vec<usize>>>()?,
        None => match &file.default_multiplicities {
            Some(m) => m.clone(),
            None => vec![1; file.bodies.len()],
        },
    };
    if mults.len() != file.bodies.len() {
        return Err(Error::Applicability(format!(
            "{} multiplicities given for {} bodies",
            mults.len(),
            file.bodies.len()
        )));
    }
    Ok(mults)
}

fn paired(file: &BodyFile, mults: &[usize]) -> Vec<(Body, usize)> {
    file.bodies
        .iter()
        .cloned()
        .zip(mults.iter().cloned())
        .filter(|(_, m)| *m > 0)
        .collect()
}

// ---------------------------------------------------------------------------
// Commands

pub struct MixedVolArgs<'a> {
    pub bodies_path: &'a str,
    pub mult: Option<&'a str>,
    pub mc_samples: usize,
    pub seed: u64,
    pub format: OutputFormat,
    pub oracle: bool,
}

pub fn cmd_mixedvol(args: &MixedVolArgs) -> Result<CmdResult> {
    let file = load_body_file(args.bodies_path)?;
    let mults = resolve_multiplicities(&file, args.mult)?;
    let bodies = paired(&file, &mults);
    let budget = Budget::from_env();
    let evaluator = Evaluator::MonteCarlo {
        samples: args.mc_samples,
        seed: args.seed,
    };
    let mv = mixed_volume_of_bodies(&bodies, evaluator, &budget)?;

    let oracle_value = if args.oracle {
        let mut slots: Vec<VPolytope> = Vec::new();
        for (b, m) in &bodies {
            let p = match b {
                Body::Polytope(p) => p.clone(),
                Body::Zonotope(z) => z.to_vpolytope(&budget)?,
                Body::Ball { .. } => {
                    return Err(Error::Applicability(
                        "the polarization oracle cannot represent the ball exactly".into(),
                    ))
                }
            };
            for _ in 0..*m {
                slots.push(p.clone());
            }
        }
        let refs: Vec<&VPolytope> = slots.iter().collect();
        Some(polarization_mixed_volume(&refs, &budget)?)
    } else {
        None
    };

    match args.format {
        OutputFormat::Text => {
            let mut out = String::new();
            out.push_str(&fmt_sig(mv.value));
            out.push('\n');
            if let Some(se) = mv.stderr {
                out.push_str(&format!(
                    "stderr: {} (seed {}, {})\n",
                    fmt_sig(se),
                    args.seed,
                    crate::rng::ALGORITHM
                ));
            }
            out.push_str(&format!("method: {}\n", mv.method));
            if let Some(oracle) = oracle_value {
                out.push_str(&format!("oracle: {}\n", fmt_sig(oracle)));
                out.push_str(&format!("agreement: {:.1e}\n", (mv.value - oracle).abs()));
            }
            Ok(CmdResult::ok(out))
        }
        OutputFormat::Json => {
            let mut obj = json!({
                "value": mv.value,
                "stderr": mv.stderr,
                "method": mv.method,
                "seed": args.seed,
                "rng": crate::rng::ALGORITHM,
            });
            if let Some(oracle) = oracle_value {
                obj["oracle"] = json!(oracle);
                obj["agreement"] = json!((mv.value - oracle).abs());
            }
            Ok(CmdResult::ok(format!("{}\n", serde_json::to_string(&obj).unwrap())))
        }
    }
}

pub struct IntrinsicsArgs<'a> {
    pub bodies_path: &'a str,
    pub mc_samples: usize,
    pub seed: u64,
    pub format: OutputFormat,
}

pub fn cmd_intrinsics(args: &IntrinsicsArgs) -> Result<CmdResult> {
    let file = load_body_file(args.bodies_path)?;
    let n = file.dimension;
    let evaluator = Evaluator::MonteCarlo {
        samples: args.mc_samples,
        seed: args.seed,
    };
    let mut rows = Vec::new();
    for (name, body) in file.names.iter().zip(&file.bodies) {
        for j in 0..=n {
            let (value, stderr) = intrinsic_volume_of_body(body, j, evaluator)?;
            rows.push((name.clone(), j, value, stderr));
        }
    }
    match args.format {
        OutputFormat::Text => {
            let mut out = String::new();
            for (name, j, value, stderr) in rows {
                match stderr {
                    Some(se) => out.push_str(&format!(
                        "{name} V_{j} = {} +- {} (mc, seed {}, {})\n",
                        fmt_sig(value),
                        fmt_sig(se),
                        args.seed,
                        crate::rng::ALGORITHM
                    )),
                    None => out.push_str(&format!("{name} V_{j} = {}\n", fmt_sig(value))),
                }
            }
            Ok(CmdResult::ok(out))
        }
        OutputFormat::Json => {
            let items: Vec<serde_json::Value> = rows
                .iter()
                .map(|(name, j, value, stderr)| {
                    json!({
                        "body": name,
                        "j": j,
                        "value": value,
                        "stderr": stderr,
                    })
                })
                .collect();
            let obj = json!({
                "intrinsic_volumes": items,
                "seed": args.seed,
                "rng": crate::rng::ALGORITHM,
            });
            Ok(CmdResult::ok(format!("{}\n", serde_json::to_string(&obj).unwrap())))
        }
    }
}

pub struct CheckArgs<'a> {
    pub bodies_path: &'a str,
    pub inequality: &'a str,
    pub mult: Option<&'a str>,
    pub gamma: Option<usize>,
    pub beta: Option<usize>,
    pub mc_samples: usize,
    pub seed: u64,
    pub fuzz: Option<usize>,
    pub format: OutputFormat,
}

/// Whether a failed instance contradicts a proven statement (as opposed to
/// the open conjecture on general bodies).
fn instance_is_proven(id: InequalityId, bodies: &[(Body, usize)]) -> bool {
    match id {
        InequalityId::AfLower
        | InequalityId::Thm13
        | InequalityId::Thm14
        | InequalityId::Zonolate => true,
        InequalityId::Conj11 => bodies.iter().all(|(b, _)| b.is_zonotope() || b.is_ball()),
    }
}

fn run_check(
    id: InequalityId,
    bodies: &[(Body, usize)],
    gamma_beta: Option<(usize, usize)>,
    evaluator: Evaluator,
    budget: &Budget,
) -> Result<InequalityReport> {
    match id {
        InequalityId::AfLower => check_af_lower(bodies, evaluator, budget),
        other => check_reverse_af(bodies, other, gamma_beta, evaluator, budget),
    }
}

fn render_report(report: &InequalityReport, proven: bool, format: OutputFormat) -> CmdResult {
    let exit_code = if report.holds { 0 } else { EXIT_VIOLATED };
    let stdout = match format {
        OutputFormat::Text => {
            let mut out = String::new();
            out.push_str(&format!("inequality: {}\n", report.inequality_id));
            out.push_str(&format!("lhs: {}\n", fmt_sig(report.lhs)));
            out.push_str(&format!("rhs: {}\n", fmt_sig(report.rhs)));
            out.push_str(&format!("epsilon: {}\n", fmt_sig(report.epsilon)));
            out.push_str(&format!("holds: {}\n", report.holds));
            out.push_str(&format!("equality_within: {}\n", report.equality_within));
            if report.diagnostics.degenerate {
                out.push_str("degenerate: true\n");
            }
            if !report.holds {
                if proven {
                    out.push_str("NUMERICAL INCONSISTENCY - file a bug\n");
                } else {
                    out.push_str("possible counterexample - verify independently\n");
                }
            }
            out
        }
        OutputFormat::Json => format!("{}\n", serde_json::to_string(report).unwrap()),
    };
    CmdResult { stdout, exit_code }
}

/// Random zonotope with 1..=4 generators, coordinates in [-1, 1].
fn random_zonotope(n: usize, rng: &mut SampleRng) -> Zonotope {
    let count = 1 + (rng.uniform() * 4.0) as usize;
    let gens: Vec<Vector> = (0..count.min(4))
        .map(|_| DVector::from_fn(n, |_, _| rng.uniform() * 2.0 - 1.0))
        .collect();
    Zonotope::new(n, gens, None).expect("random generators are valid")
}

/// Random configuration (bodies with multiplicities and possibly ball
/// copies) valid for the chosen inequality.
fn random_configuration(
    id: InequalityId,
    n: usize,
    rng: &mut SampleRng,
) -> (Vec<(Body, usize)>, Option<(usize, usize)>) {
    match id {
        InequalityId::Zonolate => {
            // Random composition of n into zonotope multiplicities + beta.
            let beta = (rng.uniform() * n as f64) as usize % n;
            let mut remaining = n - beta;
            let mut bodies: Vec<(Body, usize)> = Vec::new();
            while remaining > 0 {
                let a = 1 + (rng.uniform() * remaining as f64) as usize % remaining;
                bodies.push((Body::Zonotope(random_zonotope(n, rng)), a));
                remaining -= a;
            }
            if beta > 0 {
                bodies.push((Body::Ball { ambient: n }, beta));
            }
            (bodies, None)
        }
        _ => {
            let bodies = (0..n)
                .map(|_| (Body::Zonotope(random_zonotope(n, rng)), 1usize))
                .collect();
            (bodies, None)
        }
    }
}

pub fn cmd_check(args: &CheckArgs) -> Result<CmdResult> {
    let id: InequalityId = args.inequality.parse()?;
    let budget = Budget::from_env();
    let evaluator = Evaluator::MonteCarlo {
        samples: args.mc_samples,
        seed: args.seed,
    };
    let gamma_beta = match (args.gamma, args.beta) {
        (Some(g), Some(b)) => Some((g, b)),
        (None, None) => None,
        _ => {
            return Err(Error::Applicability(
                "--gamma and --beta must be given together".into(),
            ))
        }
    };

    if let Some(count) = args.fuzz {
        if !matches!(
            id,
            InequalityId::Conj11 | InequalityId::Zonolate | InequalityId::AfLower
        ) {
            return Err(Error::Applicability(format!(
                "fuzzing supports CONJ_1_1, ZONOLATE and AF_LOWER, not {id}"
            )));
        }
        let file = load_body_file(args.bodies_path)?;
        let n = file.dimension;
        let mut rng = SampleRng::from_seed(args.seed);
        let mut failures = Vec::new();
        for i in 0..count {
            let (bodies, gb) = random_configuration(id, n, &mut rng);
            let report = run_check(id, &bodies, gb, Evaluator::Exact, &budget)?;
            if !report.holds {
                failures.push((i, report));
            }
        }
        let holds = failures.is_empty();
        let stdout = match args.format {
            OutputFormat::Text => {
                let mut out = format!(
                    "fuzz: {count} instances of {id} in dimension {n}, seed {}\n",
                    args.seed
                );
                for (i, rep) in &failures {
                    out.push_str(&format!(
                        "instance {i}: VIOLATED lhs {} rhs {}\n",
                        fmt_sig(rep.lhs),
                        fmt_sig(rep.rhs)
                    ));
                }
                out.push_str(if holds {
                    "all hold\n"
                } else {
                    "NUMERICAL INCONSISTENCY - file a bug\n"
                });
                out
            }
            OutputFormat::Json => {
                let obj = json!({
                    "inequality_id": id,
                    "instances": count,
                    "dimension": n,
                    "seed": args.seed,
                    "violations": failures.iter().map(|(i, r)| json!({"instance": i, "report": r})).collect::<Vec<_>>(),
                    "all_hold": holds,
                });
                format!("{}\n", serde_json::to_string(&obj).unwrap())
            }
        };
        return Ok(CmdResult {
            stdout,
            exit_code: if holds { 0 } else { EXIT_VIOLATED },
        });
    }

    let file = load_body_file(args.bodies_path)?;
    let mults = resolve_multiplicities(&file, args.mult)?;
    let bodies = paired(&file, &mults);
    let report = run_check(id, &bodies, gamma_beta, evaluator, &budget)?;
    Ok(render_report(
        &report,
        instance_is_proven(id, &bodies),
        args.format,
    ))
}

pub struct BracketArgs<'a> {
    pub bodies_path: &'a str,
    pub mult: Option<&'a str>,
    pub format: OutputFormat,
}

pub fn cmd_bracket(args: &BracketArgs) -> Result<CmdResult> {
    let file = load_body_file(args.bodies_path)?;
    let mults = resolve_multiplicities(&file, args.mult)?;
    let bodies = paired(&file, &mults);
    let diag = equality_diagnostics(&bodies);
    match args.format {
        OutputFormat::Text => {
            let mut out = String::new();
            out.push_str(&format!("dims: {:?}\n", diag.dims));
            out.push_str(&format!("multiplicities: {:?}\n", diag.multiplicities));
            out.push_str(&format!("full_bracket: {}\n", fmt_sig(diag.full_bracket)));
            out.push_str("pairwise_brackets:\n");
            for row in &diag.pairwise_brackets {
                let cells: Vec<String> = row.iter().map(|x| fmt_sig(*x)).collect();
                out.push_str(&format!("  {}\n", cells.join(" ")));
            }
            out.push_str(&format!(
                "dims_match_multiplicities: {}\n",
                diag.dims_match_multiplicities
            ));
            Ok(CmdResult::ok(out))
        }
        OutputFormat::Json => Ok(CmdResult::ok(format!(
            "{}\n",
            serde_json::to_string(&diag).unwrap()
        ))),
    }
}

pub struct StabilityCertArgs<'a> {
    pub theorem: &'a str,
    pub bodies_path: &'a str,
    pub mult: Option<&'a str>,
    pub mc_samples: usize,
    pub seed: u64,
    pub format: OutputFormat,
}

pub fn cmd_stability_certificate(args: &StabilityCertArgs) -> Result<CmdResult> {
    let theorem: TheoremId = args.theorem.parse()?;
    let file = load_body_file(args.bodies_path)?;
    let mults = resolve_multiplicities(&file, args.mult)?;
    let bodies = paired(&file, &mults);
    let budget = Budget::from_env();
    let evaluator = Evaluator::MonteCarlo {
        samples: args.mc_samples,
        seed: args.seed,
    };
    let cert = check_stability(theorem, &bodies, evaluator, &budget)?;
    let exit_code = if cert.holds { 0 } else { EXIT_VIOLATED };
    let stdout = match args.format {
        OutputFormat::Text => {
            let mut out = String::new();
            out.push_str(&format!("theorem: {}\n", cert.theorem_id));
            out.push_str(&format!("applicable: {}\n", cert.applicable));
            out.push_str(&format!("epsilon: {}\n", fmt_sig(cert.epsilon)));
            out.push_str(&format!(
                "bracket: {} (bound {})\n",
                fmt_sig(cert.bracket_value),
                fmt_sig(cert.bracket_bound)
            ));
            if cert.bracket_bound < 0.0 {
                out.push_str("bracket bound is negative: trivially satisfied\n");
            }
            for (i, (s, r)) in cert
                .containment_slacks
                .iter()
                .zip(&cert.containment_radii)
                .enumerate()
            {
                out.push_str(&format!(
                    "containment {i}: slack {} <= radius {}\n",
                    fmt_sig(*s),
                    fmt_sig(*r)
                ));
            }
            out.push_str(&format!("holds: {}\n", cert.holds));
            if !cert.holds {
                out.push_str("NUMERICAL INCONSISTENCY - file a bug\n");
            }
            out
        }
        OutputFormat::Json => format!("{}\n", serde_json::to_string(&cert).unwrap()),
    };
    Ok(CmdResult { stdout, exit_code })
}

pub struct ProjStabArgs<'a> {
    pub bodies_path: &'a str,
    pub body: Option<&'a str>,
    pub beta: usize,
    pub mc_samples: usize,
    pub seed: u64,
    pub format: OutputFormat,
}

pub fn cmd_stability_projstab(args: &ProjStabArgs) -> Result<CmdResult> {
    let file = load_body_file(args.bodies_path)?;
    let budget = Budget::from_env();
    let selected: Vec<(String, &Body)> = match args.body {
        Some(name) => {
            let idx = file
                .names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| Error::Parse(format!("no body named {name:?}")))?;
            vec![(name.to_string(), &file.bodies[idx])]
        }
        None => file
            .names
            .iter()
            .cloned()
            .zip(file.bodies.iter())
            .collect(),
    };
    let mut reports = Vec::new();
    for (name, body) in selected {
        let rep = projstab_check(body, args.beta, args.mc_samples, args.seed, &budget)?;
        reports.push((name, rep));
    }
    let all_hold = reports.iter().all(|(_, r)| r.holds);
    let stdout = match args.format {
        OutputFormat::Text => {
            let mut out = String::new();
            for (name, r) in &reports {
                out.push_str(&format!(
                    "{name}: V_{} = {}{} >= factor {} * max projection {} -> {}\n",
                    r.beta,
                    fmt_sig(r.lhs),
                    r.lhs_stderr
                        .map(|s| format!(" +- {}", fmt_sig(s)))
                        .unwrap_or_default(),
                    fmt_sig(r.factor),
                    fmt_sig(r.max_projection),
                    if r.holds { "holds" } else { "VIOLATED" }
                ));
            }
            if !all_hold {
                out.push_str("NUMERICAL INCONSISTENCY - file a bug\n");
            }
            out
        }
        OutputFormat::Json => {
            let items: Vec<serde_json::Value> = reports
                .iter()
                .map(|(name, r)| json!({"body": name, "report": r}))
                .collect();
            format!("{}\n", serde_json::to_string(&items).unwrap())
        }
    };
    Ok(CmdResult {
        stdout,
        exit_code: if all_hold { 0 } else { EXIT_VIOLATED },
    })
}

pub struct Lemma52Args {
    pub n: usize,
    pub format: OutputFormat,
}

pub fn cmd_stability_lemma52(args: &Lemma52Args) -> Result<CmdResult> {
    let mut rows = Vec::new();
    let mut all_hold = true;
    for j in 1..=args.n {
        let r = ball_intrinsic_ratio(args.n, j)?;
        all_hold &= r.holds;
        rows.push(r);
    }
    let stdout = match args.format {
        OutputFormat::Text => {
            let mut out = format!("V_j(B^n)/kappa_j against 2^(n/2) for n = {}\n", args.n);
            for r in &rows {
                out.push_str(&format!(
                    "j = {:2}: ratio {} <= bound {} -> {}\n",
                    r.j,
                    fmt_sig(r.ratio),
                    fmt_sig(r.bound),
                    if r.holds { "holds" } else { "VIOLATED" }
                ));
            }
            out
        }
        OutputFormat::Json => format!("{}\n", serde_json::to_string(&rows).unwrap()),
    };
    Ok(CmdResult {
        stdout,
        exit_code: if all_hold { 0 } else { EXIT_VIOLATED },
    })
}

pub struct FlatnessArgs<'a> {
    pub bodies_path: &'a str,
    pub body: Option<&'a str>,
    pub alpha: usize,
    pub eta: f64,
    pub axes: Option<&'a str>,
    pub mc_samples: usize,
    pub seed: u64,
    pub format: OutputFormat,
}

pub fn cmd_stability_flatness(args: &FlatnessArgs) -> Result<CmdResult> {
    let file = load_body_file(args.bodies_path)?;
    let n = file.dimension;
    let budget = Budget::from_env();
    let evaluator = Evaluator::MonteCarlo {
        samples: args.mc_samples,
        seed: args.seed,
    };
    let axes: Vec<usize> = match args.axes {
        Some(s) => s
            .split(',')
            .map(|tok| {
                let k: usize = tok
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad axis {tok:?}")))?;
                if k == 0 || k > n {
                    return Err(Error::Parse(format!("axis {k} out of range 1..{n}")));
                }
                Ok(k - 1)
            })
            .collect::<Result<_>>()?,
        None => (0..args.alpha).collect(),
    };
    let sub = Subspace::coordinate(n, &axes);
    let offset = DVector::zeros(n);

    let idx = match args.body {
        Some(name) => file
            .names
            .iter()
            .position(|b| b == name)
            .ok_or_else(|| Error::Parse(format!("no body named {name:?}")))?,
        None => 0,
    };
    let rep = cm_intrinsic_check(
        &file.bodies[idx],
        &sub,
        &offset,
        args.alpha,
        args.eta,
        evaluator,
        &budget,
    )?;
    let stdout = match args.format {
        OutputFormat::Text => {
            let mut out = String::new();
            out.push_str(&format!("applicable: {}\n", rep.applicable));
            out.push_str(&format!("V_alpha(M): {}\n", fmt_sig(rep.lhs)));
            out.push_str(&format!("V_alpha(M|A): {}\n", fmt_sig(rep.projected)));
            out.push_str(&format!("factor: {}\n", fmt_sig(rep.factor)));
            out.push_str(&format!(
                "distance to flat: {}\n",
                fmt_sig(rep.distance_to_flat)
            ));
            out.push_str(&format!("holds: {}\n", rep.holds));
            out
        }
        OutputFormat::Json => format!("{}\n", serde_json::to_string(&rep).unwrap()),
    };
    Ok(CmdResult {
        stdout,
        exit_code: if rep.holds { 0 } else { EXIT_VIOLATED },
    })
}

//! Command-line front end: loads JSON models (or built-in fixtures), runs a
//! computation and renders a text or JSON report.

pub mod model;

use clap::{Parser, Subcommand};
use eqdescent::abgroup::Int;
use eqdescent::descent::{
    find_gerbe_lift, find_torsor_lift, fixed_point_torsor, gerbe_obstruction, is_induced, torsor_obstruction, DescentContext,
    DescentError, FixedPointFailure, ObstructionClass,
};
use eqdescent::gcoh::group_cohomology;
use eqdescent::lowdeg::{exactness_report, hs_low_degree_compare, LowDegError, NodeReport};
use eqdescent::possite::{stalkwise_local_vanishing, SiteCochain};
use model::{cochain_json, parse_bundle, parse_cochain, ModelBundle};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use std::path::PathBuf;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}:{line}:{column}: malformed JSON: {msg}")]
    Json { path: String, line: usize, column: usize, msg: String },
    #[error("{path}:{line}:{column}: field `{field}`: {msg}")]
    Field { path: String, field: String, line: usize, column: usize, msg: String },
    #[error("{path}: invalid {what}: {msg}")]
    Validation { path: String, what: String, msg: String },
    #[error("unknown example {name:?}")]
    UnknownExample { name: String },
    #[error("{0}")]
    Usage(String),
    #[error("precondition failed: {0}")]
    Math(String),
}

impl CliError {
    /// 1 for bad input, 2 when the input is valid but the mathematics refuses.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Math(_) => 2,
            _ => 1,
        }
    }
}

impl From<DescentError> for CliError {
    fn from(e: DescentError) -> CliError {
        CliError::Math(e.to_string())
    }
}

impl From<LowDegError> for CliError {
    fn from(e: LowDegError) -> CliError {
        CliError::Math(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "eqdescent", about = "Equivariant descent on finite posets: cohomology, obstructions, exactness checks")]
pub struct Cli {
    /// Model file (JSON); repeat to merge several files.
    #[arg(long = "model", global = true)]
    pub model: Vec<PathBuf>,
    /// Use a built-in fixture instead of model files.
    #[arg(long, global = true)]
    pub example: Option<String>,
    /// Machine-readable output.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for randomized lift perturbations.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// H^q(X, A)
    SheafCohomology {
        #[arg(long)]
        degree: Option<usize>,
    },
    /// H^j(G, A(X)) and H^j(G, A(x)) at every point
    GroupCohomology {
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Whether H^j(G, A(x)) vanishes at every point
    LocalVanishing {
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Obstruction class in H^2(G, A(X)) of a stable 1-cocycle
    TorsorObstruction {
        #[arg(long)]
        cocycle: PathBuf,
        /// Add random coboundaries to the lift before computing the class.
        #[arg(long)]
        perturb: bool,
    },
    /// Obstruction class in H^3(G, A(X)) of a stable 2-cocycle
    GerbeObstruction {
        #[arg(long)]
        cocycle: PathBuf,
        #[arg(long)]
        perturb: bool,
    },
    /// Whether a class comes from the invariants subsheaf
    InducedCheck {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        degree: u8,
        #[arg(long)]
        cocycle: PathBuf,
    },
    /// Exactness of the low-degree sequence at every node
    LesCheck,
    /// Total cohomology of the double complex against H^n(X, E)
    HsCompare,
    /// Print (or write) the model file of a built-in fixture
    Example {
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// A finished report in both renderings.
#[derive(Debug, Clone)]
pub struct Report {
    pub text: String,
    pub json: Value,
}

impl Report {
    pub fn render(&self, as_json: bool) -> String {
        if as_json {
            let mut s = serde_json::to_string_pretty(&self.json).expect("report serializes");
            s.push('\n');
            s
        } else {
            self.text.clone()
        }
    }
}

fn read(path: &PathBuf) -> Result<(String, String), CliError> {
    let p = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: p.clone(), source })?;
    Ok((p, text))
}

fn load(cli: &Cli) -> Result<ModelBundle, CliError> {
    if let Some(name) = &cli.example {
        if !cli.model.is_empty() {
            return Err(CliError::Usage("give either --example or --model, not both".into()));
        }
        let f = eqdescent::fixtures::by_name(name).ok_or_else(|| CliError::UnknownExample { name: name.clone() })?;
        return Ok(ModelBundle::from(f));
    }
    if cli.model.is_empty() {
        return Err(CliError::Usage("no model given (use --model <file> or --example <name>)".into()));
    }
    let docs = cli.model.iter().map(read).collect::<Result<Vec<_>, _>>()?;
    parse_bundle(&docs)
}

fn degree(explicit: Option<usize>, bundle: &ModelBundle) -> Result<usize, CliError> {
    explicit
        .or_else(|| bundle.task.get("degree").and_then(Value::as_u64).map(|d| d as usize))
        .ok_or_else(|| CliError::Usage("--degree is required".into()))
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn ints_json(v: &[Int]) -> Value {
    Value::Array(v.iter().map(|x| x.to_i64().map_or_else(|| json!(x.to_string()), |i| json!(i))).collect())
}

fn ints_text(v: &[Int]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

fn sheaf_cohomology(b: &ModelBundle, q: usize) -> Report {
    let ctx = DescentContext::new(&b.sheaf);
    let g = if q <= ctx.complex().top() { ctx.complex().cohomology(q).render() } else { "0".to_string() };
    Report { text: format!("degree: {q}\ngroup: {g}\n"), json: json!({ "degree": q, "group": g }) }
}

fn group_cohomology_report(b: &ModelBundle, j: usize) -> Report {
    let ctx = DescentContext::new(&b.sheaf);
    let global = group_cohomology(ctx.global_module(), j).render();
    let site = b.sheaf.site();
    let mut text = format!("degree: {j}\nglobal: {global}\n");
    let mut pts = Vec::new();
    for x in 0..site.len() {
        let h = group_cohomology(b.sheaf.stalk_module(x), j).render();
        text.push_str(&format!("point {}: {h}\n", site.name(x)));
        pts.push(json!({ "point": site.name(x), "group": h }));
    }
    Report { text, json: json!({ "degree": j, "global": global, "points": pts }) }
}

fn local_vanishing(b: &ModelBundle, j: usize) -> Report {
    let r = stalkwise_local_vanishing(&b.sheaf, j);
    let mut text = format!("degree: {j}\n");
    let mut pts = Vec::new();
    for (name, g, ok) in &r.points {
        text.push_str(&format!("point {name}: group={} vanishes={}\n", g.render(), yes_no(*ok)));
        pts.push(json!({ "point": name, "group": g.render(), "vanishes": ok }));
    }
    let failing = r.failing_points();
    text.push_str(&format!("overall: {}\nfailing: {}\n", yes_no(r.overall), failing.join(",")));
    Report { text, json: json!({ "degree": j, "points": pts, "overall": r.overall, "failing": failing }) }
}

fn random_cochain(rng: &mut ChaCha8Rng, ctx: &DescentContext, q: usize) -> SiteCochain {
    let cx = ctx.complex();
    let mut z = cx.zero(q);
    for v in z.values.iter_mut() {
        *v = Int::from(rng.gen_range(-3i64..=3));
    }
    z
}

fn obstruction_report(kind: &str, degree: usize, cls: &ObstructionClass, perturbed: bool) -> Report {
    let g = cls.group.render();
    let zero = cls.is_zero();
    let text = format!(
        "kind: {kind}\nlift: found\nperturbed: {}\nobstruction_degree: {degree}\nobstruction_group: {g}\nclass: {}\nzero: {}\n",
        yes_no(perturbed),
        ints_text(&cls.class),
        yes_no(zero)
    );
    let json = json!({
        "kind": kind,
        "lift": "found",
        "perturbed": perturbed,
        "obstruction_degree": degree,
        "obstruction_group": g,
        "class": ints_json(&cls.class),
        "zero": zero,
    });
    Report { text, json }
}

fn load_cocycle(path: &PathBuf, ctx: &DescentContext, want: usize) -> Result<SiteCochain, CliError> {
    let (p, text) = read(path)?;
    let z = parse_cochain(&p, &text, ctx.complex())?;
    if z.degree != want {
        return Err(CliError::Field {
            path: p,
            field: "degree".into(),
            line: 0,
            column: 0,
            msg: format!("expected a degree-{want} cochain, found degree {}", z.degree),
        });
    }
    if !ctx.complex().is_cocycle(&z) {
        return Err(CliError::Math(format!("the degree-{want} cochain is not a cocycle")));
    }
    Ok(z)
}

fn torsor_report(b: &ModelBundle, path: &PathBuf, perturb: bool, seed: u64) -> Result<Report, CliError> {
    let ctx = DescentContext::new(&b.sheaf);
    let t = load_cocycle(path, &ctx, 1)?;
    let mut lift = find_torsor_lift(&ctx, &t)?;
    if perturb {
        // b_g -> b_g + c_g with c_g a 0-cocycle keeps d b_g, hence the lift.
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h0 = ctx.complex().cohomology(0);
        for bg in lift.b.iter_mut() {
            let coords: Vec<Int> = (0..h0.group().ngens()).map(|_| Int::from(rng.gen_range(-3i64..=3))).collect();
            *bg = ctx.complex().add(bg, &ctx.complex().rep_of(0, &coords));
        }
    }
    let cls = torsor_obstruction(&ctx, &lift)?;
    Ok(obstruction_report("torsor", 2, &cls, perturb))
}

fn gerbe_report(b: &ModelBundle, path: &PathBuf, perturb: bool, seed: u64) -> Result<Report, CliError> {
    let ctx = DescentContext::new(&b.sheaf);
    let m = load_cocycle(path, &ctx, 2)?;
    let mut lift = find_gerbe_lift(&ctx, &m)?;
    if perturb {
        // e_g -> e_g + d s_g and f_{g,h} -> f_{g,h} + ρ_g s_h - s_{gh} + s_g.
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cx = ctx.complex();
        let g = ctx.group();
        let s: Vec<SiteCochain> = (0..g.order()).map(|_| random_cochain(&mut rng, &ctx, 0)).collect();
        for (e, sg) in lift.e.iter_mut().zip(&s) {
            *e = cx.add(e, &cx.d(sg));
        }
        for a in 0..g.order() {
            for h in 0..g.order() {
                let w = cx.add(&cx.sub(&ctx.twist(a, &s[h]), &s[g.mul(a, h)]), &s[a]);
                let i = a * g.order() + h;
                lift.f[i] = cx.add(&lift.f[i], &w);
            }
        }
    }
    let cls = gerbe_obstruction(&ctx, &lift)?;
    Ok(obstruction_report("gerbe", 3, &cls, perturb))
}

fn induced_report(b: &ModelBundle, degree: usize, path: &PathBuf) -> Result<Report, CliError> {
    let ctx = DescentContext::new(&b.sheaf);
    let z = load_cocycle(path, &ctx, degree)?;
    let class = ctx.complex().class_of(&z).map_err(DescentError::from)?;
    let group = ctx.complex().cohomology(degree).render();
    let verdict = is_induced(&ctx, &z)?;
    let mut text = format!("degree: {degree}\ngroup: {group}\nclass: {}\n", ints_text(&class));
    let mut json = json!({ "degree": degree, "group": group, "class": ints_json(&class) });
    match &verdict {
        Ok(w) => {
            text.push_str("induced: yes\n");
            let wj = cochain_json(&ctx.invariants().cx, &w.invariant_cocycle);
            text.push_str(&format!("witness: {wj}\n"));
            json["induced"] = json!(true);
            json["witness"] = wj;
        }
        Err(cert) => {
            let c: Vec<Value> = cert.certificate.iter().map(|(i, v)| json!([i, v.to_string()])).collect();
            text.push_str(&format!("induced: no\ncertificate: {}\n", Value::Array(c.clone())));
            json["induced"] = json!(false);
            json["certificate"] = Value::Array(c);
        }
    }
    // The obstruction class when a lift exists, and what blocks descent otherwise.
    let obstruction = if degree == 1 {
        find_torsor_lift(&ctx, &z).and_then(|l| {
            let cls = torsor_obstruction(&ctx, &l)?;
            let fp = fixed_point_torsor(&ctx, &l)?;
            Ok((cls, fp.err()))
        })
    } else {
        find_gerbe_lift(&ctx, &z).and_then(|l| Ok((gerbe_obstruction(&ctx, &l)?, None)))
    };
    match obstruction {
        Ok((cls, fp)) => {
            text.push_str(&format!("obstruction_class: {}\nobstruction_zero: {}\n", ints_text(&cls.class), yes_no(cls.is_zero())));
            json["obstruction_class"] = ints_json(&cls.class);
            json["obstruction_zero"] = json!(cls.is_zero());
            if let Some(FixedPointFailure::Local { points }) = fp {
                text.push_str(&format!("local_failures: {}\n", points.join(",")));
                json["local_failures"] = json!(points);
            }
        }
        Err(e) => {
            text.push_str(&format!("obstruction: unavailable ({e})\n"));
            json["obstruction"] = json!(format!("unavailable ({e})"));
        }
    }
    let lv = stalkwise_local_vanishing(&b.sheaf, degree);
    text.push_str(&format!("local_vanishing: {}\n", yes_no(lv.overall)));
    json["local_vanishing"] = json!(lv.overall);
    Ok(Report { text, json })
}

fn node_json(n: &NodeReport) -> Value {
    json!({
        "name": n.name,
        "image": n.image.render(),
        "kernel": n.kernel.render(),
        "exact": n.exact,
        "certificate": n.certificate,
    })
}

fn les_report(b: &ModelBundle) -> Result<Report, CliError> {
    let ctx = DescentContext::new(&b.sheaf);
    let r = exactness_report(&ctx)?;
    let lv: Vec<Value> = r
        .local_vanishing
        .iter()
        .map(|l| json!({ "degree": l.degree, "overall": l.overall, "failing": l.failing_points() }))
        .collect();
    let json = json!({
        "nodes": r.nodes.iter().map(node_json).collect::<Vec<_>>(),
        "gerbe_node": node_json(&r.gerbe_node),
        "all_exact": r.all_exact(),
        "local_vanishing": lv,
    });
    let mut text = r.render();
    text.push_str(&format!("all_exact: {}\n", yes_no(r.all_exact())));
    Ok(Report { text, json })
}

fn hs_report(b: &ModelBundle) -> Result<Report, CliError> {
    let m = b.gtorsor.as_ref().ok_or_else(|| CliError::Usage("hs-compare needs a `gtorsor` in the model".into()))?;
    let e = b
        .coefficients
        .as_ref()
        .ok_or_else(|| CliError::Usage("hs-compare needs plain `coefficients` in the model".into()))?;
    if e.site() != m.site() {
        return Err(CliError::Usage("`coefficients` must live on the base poset".into()));
    }
    let c = hs_low_degree_compare(e, m)?;
    let degrees: Vec<Value> = c
        .degrees
        .iter()
        .map(|(n, t, d, eq)| json!({ "degree": n, "total": t.render(), "direct": d.render(), "match": eq }))
        .collect();
    let e2: Vec<Value> = c.e2.iter().map(|(p, q, g)| json!({ "p": p, "q": q, "group": g.render() })).collect();
    let mut text = c.render();
    text.push_str(&format!("all_match: {}\n", yes_no(c.all_match())));
    Ok(Report { text, json: json!({ "degrees": degrees, "e2": e2, "all_match": c.all_match() }) })
}

fn example_report(name: &str, out: Option<&PathBuf>) -> Result<Report, CliError> {
    let v = model::emit_model(name)?;
    let body = serde_json::to_string_pretty(&v).expect("model serializes") + "\n";
    match out {
        Some(p) => {
            std::fs::write(p, &body).map_err(|source| CliError::Io { path: p.display().to_string(), source })?;
            let path = p.display().to_string();
            Ok(Report { text: format!("wrote: {path}\n"), json: json!({ "wrote": path }) })
        }
        None => Ok(Report { text: body, json: v }),
    }
}

/// Runs one parsed invocation.
pub fn run(cli: &Cli) -> Result<Report, CliError> {
    if let Command::Example { name, out } = &cli.command {
        return example_report(name, out.as_ref());
    }
    let b = load(cli)?;
    match &cli.command {
        Command::SheafCohomology { degree: d } => Ok(sheaf_cohomology(&b, degree(*d, &b)?)),
        Command::GroupCohomology { degree: d } => Ok(group_cohomology_report(&b, degree(*d, &b)?)),
        Command::LocalVanishing { degree: d } => Ok(local_vanishing(&b, degree(*d, &b)?)),
        Command::TorsorObstruction { cocycle, perturb } => torsor_report(&b, cocycle, *perturb, cli.seed),
        Command::GerbeObstruction { cocycle, perturb } => gerbe_report(&b, cocycle, *perturb, cli.seed),
        Command::InducedCheck { degree, cocycle } => induced_report(&b, *degree as usize, cocycle),
        Command::LesCheck => les_report(&b),
        Command::HsCompare => hs_report(&b),
        Command::Example { .. } => unreachable!("handled above"),
    }
}

/// Parses `args` (including the program name), runs, and returns the
/// rendered output and exit status.
pub fn run_args<I, T>(args: I) -> (String, i32)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            return (e.to_string(), code);
        }
    };
    match run(&cli) {
        Ok(r) => (r.render(cli.json), 0),
        Err(e) => {
            let msg = if cli.json {
                serde_json::to_string_pretty(&json!({ "error": e.to_string(), "exit": e.exit_code() })).unwrap() + "\n"
            } else {
                format!("error: {e}\n")
            };
            (msg, e.exit_code())
        }
    }
}

//! The `klein` command line: verification suites, scene constructions, SVG
//! rendering and finite oval checks.
//!
//! Exit codes: 0 on success, 1 when a check or construction fails, 2 on a
//! usage or parse error.

pub mod construct;
pub mod render;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use klein_core::oval::{conic_oval, involution_model};
use klein_core::scene::Scene;
use klein_core::verify::{run_suite, Report, Sabotage, Suite, TrialConfig};

#[derive(Parser, Debug)]
#[command(name = "klein", version, about = "Exact Klein-disk hyperbolic geometry")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run seeded verification suites.
    Verify(VerifyArgs),
    /// Apply a named construction to objects of a scene.
    Construct(ConstructArgs),
    /// Draw a scene as SVG.
    Render(RenderArgs),
    /// Check the conic oval over a prime field.
    Oval(OvalArgs),
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    trials: usize,
    #[arg(long)]
    sabotage: Option<String>,
    /// Write the report here instead of standard output.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ConstructArgs {
    op: String,
    #[arg(long)]
    scene: PathBuf,
    #[arg(long, num_args = 1..)]
    args: Vec<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct RenderArgs {
    #[arg(long)]
    scene: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 512)]
    size: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OvalCheck {
    Oval,
    Pascal,
    Regular,
    Incidence,
    InvolutionModel,
    All,
}

#[derive(Args, Debug)]
struct OvalArgs {
    #[arg(long)]
    p: u64,
    #[arg(long, value_enum, default_value = "all")]
    check: OvalCheck,
    #[arg(long)]
    json: Option<PathBuf>,
}

/// An error tagged with the exit code it maps to.
struct Failure {
    code: i32,
    err: anyhow::Error,
}

type Outcome = Result<i32, Failure>;

fn usage(err: impl Into<anyhow::Error>) -> Failure {
    Failure { code: 2, err: err.into() }
}

fn failed(err: impl Into<anyhow::Error>) -> Failure {
    Failure { code: 1, err: err.into() }
}

/// Parse `argv` (program name first) and run the command, returning the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let out = match cli.command {
        Command::Verify(a) => verify(a),
        Command::Construct(a) => construct_cmd(a),
        Command::Render(a) => render_cmd(a),
        Command::Oval(a) => oval(a),
    };
    match out {
        Ok(code) => code,
        Err(Failure { code, err }) => {
            eprintln!("error: {err:#}");
            code
        }
    }
}

fn write_out(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())).map_err(failed),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_scene(path: &Path) -> Result<Scene, Failure> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display())).map_err(usage)?;
    Scene::parse(&text).with_context(|| format!("loading {}", path.display())).map_err(usage)
}

fn verify(a: VerifyArgs) -> Outcome {
    let suites: Vec<Suite> =
        if a.suite == "all" { Suite::ALL.to_vec() } else { vec![a.suite.parse().map_err(usage)?] };
    let sabotage = a.sabotage.as_deref().map(str::parse::<Sabotage>).transpose().map_err(usage)?;
    if a.trials == 0 {
        return Err(usage(anyhow!("--trials must be positive")));
    }
    let cfg = TrialConfig::new(a.seed, a.trials).with_sabotage(sabotage);

    // failing trials are reported, not printed as panics
    let hook = std::panic::take_hook();
    std::panic::set_hook(Box::new(|_| {}));
    let report = Report::merge(suites.iter().map(|s| run_suite(*s, &cfg)));
    std::panic::set_hook(hook);

    let text = report.to_json_string() + "\n";
    write_out(a.json.as_deref(), &text)?;
    for c in &report.checks {
        let status = if c.failures == 0 { "ok" } else { "FAIL" };
        eprintln!("{status:>4}  {:<22} {}/{} failed", c.name, c.failures, c.trials);
    }
    Ok(if report.overall { 0 } else { 1 })
}

fn construct_cmd(a: ConstructArgs) -> Outcome {
    if !construct::OPS.iter().any(|(name, _)| *name == a.op) {
        let names: Vec<&str> = construct::OPS.iter().map(|(n, _)| *n).collect();
        return Err(usage(anyhow!("unknown operation \"{}\"; expected one of {}", a.op, names.join(", "))));
    }
    let scene = load_scene(&a.scene)?;
    for name in &a.args {
        if scene.get(name).is_none() {
            return Err(usage(anyhow!("no object named \"{name}\" in the scene")));
        }
    }
    let result = construct::construct(&a.op, &scene, &a.args).map_err(failed)?;
    let text = serde_json::to_string_pretty(&result.to_json()).expect("serialisable") + "\n";
    write_out(a.out.as_deref(), &text)?;
    Ok(0)
}

fn render_cmd(a: RenderArgs) -> Outcome {
    if a.size == 0 {
        return Err(usage(anyhow!("--size must be positive")));
    }
    let scene = load_scene(&a.scene)?;
    write_out(Some(&a.out), &render::render(&scene, a.size))?;
    Ok(0)
}

fn oval(a: OvalArgs) -> Outcome {
    let conic = conic_oval(a.p).map_err(usage)?;
    let want = |c: OvalCheck| a.check == OvalCheck::All || a.check == c;
    let b = &conic.oval;
    let p = a.p as usize;
    let mut checks = serde_json::Map::new();
    let mut extra = serde_json::Map::new();

    let valid = b.verify();
    if want(OvalCheck::Oval) {
        checks.insert("oval".into(), json!(valid && b.size == p + 1 && b.involutions.len() == p * p));
    }
    if want(OvalCheck::Pascal) {
        checks.insert("pascal".into(), json!(b.secants_pascalian().unwrap_or(false)));
    }
    if want(OvalCheck::Regular) {
        checks.insert("regular".into(), json!(b.is_regular().unwrap_or(false)));
    }
    if want(OvalCheck::Incidence) {
        let ok = match b.build_incidence() {
            Ok(inc) => {
                let ok = inc.tangent_count() == p + 1
                    && inc.secant_count() == p * (p + 1) / 2
                    && inc
                        .lines
                        .iter()
                        .all(|l| l.involutions.len() == if l.is_tangent() { p } else { p - 1 });
                extra.insert("incidence".into(), serde_json::to_value(&inc).expect("serialisable"));
                ok
            }
            Err(_) => false,
        };
        checks.insert("incidence".into(), json!(ok));
    }
    if want(OvalCheck::InvolutionModel) {
        let ok = match involution_model(a.p) {
            Ok(r) => {
                let ok = r.isomorphic;
                extra.insert("involution_model".into(), serde_json::to_value(&r).expect("serialisable"));
                ok
            }
            Err(_) => false,
        };
        checks.insert("involution-model".into(), json!(ok));
    }

    let overall = checks.values().all(|v| v == &Value::Bool(true));
    let mut report = json!({
        "p": a.p,
        "points": b.size,
        "involutions": b.involutions.len(),
        "overall": overall,
    });
    for (k, v) in &checks {
        eprintln!("{:>4}  {k}", if v == &Value::Bool(true) { "ok" } else { "FAIL" });
    }
    report["checks"] = Value::Object(checks);
    for (k, v) in extra {
        report[k] = v;
    }
    let text = serde_json::to_string_pretty(&report).expect("serialisable") + "\n";
    match &a.json {
        Some(path) => write_out(Some(path), &text)?,
        None => println!("{}", if overall { "pass" } else { "fail" }),
    }
    Ok(if overall { 0 } else { 1 })
}

//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails.

use std::fs;
use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use klein_core::scalar::{cr_arith, cr_sign, cr_sqrt, Op};
use klein_core::transforms::midpoint;
use klein_core::verify::{run_theorem_suite, Report, Sabotage, TrialConfig};
use klein_core::{Point, Real};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

type Outcome = Result<String, String>;
type Criterion<'a> = Box<dyn Fn() -> Outcome + 'a>;

fn cli(args: &[&str]) -> i32 {
    let argv = std::iter::once("klein").chain(args.iter().copied());
    klein_cli::run(argv)
}

fn quiet<T>(f: impl FnOnce() -> T) -> T {
    let hook = std::panic::take_hook();
    std::panic::set_hook(Box::new(|_| {}));
    let out = f();
    std::panic::set_hook(hook);
    out
}

fn verify_json(dir: &Path, tag: &str, args: &[&str]) -> Result<(i32, String), String> {
    let path = dir.join(format!("{tag}.json"));
    let path_s = path.to_str().unwrap().to_string();
    let mut full = vec!["verify"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--json", &path_s]);
    let code = cli(&full);
    let text = fs::read_to_string(&path).map_err(|e| format!("no report written: {e}"))?;
    Ok((code, text))
}

fn checks(text: &str) -> Result<Vec<Value>, String> {
    let v: Value = serde_json::from_str(text).map_err(|e| e.to_string())?;
    Ok(v["checks"].as_array().cloned().unwrap_or_default())
}

fn all_clean(report: &Report, names: &[&str], trials: usize) -> Result<(), String> {
    for n in names {
        let c = report.check(n).ok_or_else(|| format!("missing check {n}"))?;
        if c.trials != trials || c.failures != 0 {
            return Err(format!("{n}: {}/{} failed", c.failures, c.trials));
        }
    }
    Ok(())
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    if t > limit {
        return Err(format!("took {:.1}s, limit {}s", t.as_secs_f64(), limit.as_secs()));
    }
    Ok(())
}

fn axioms(dir: &Path) -> Outcome {
    let start = Instant::now();
    let (code, text) = verify_json(dir, "axioms", &["--suite", "axioms", "--seed", "42", "--trials", "100"])?;
    let cs = checks(&text)?;
    let expect = [
        ("A1", "exact"),
        ("A2", "exact"),
        ("A3", "exact"),
        ("A6", "exact"),
        ("A7", "exact"),
        ("A10", "exact"),
        ("A4", "sampled"),
        ("A5", "sampled"),
        ("A11", "sampled"),
    ];
    for (name, mode) in expect {
        let c = cs.iter().find(|c| c["name"] == name).ok_or_else(|| format!("missing check {name}"))?;
        if c["mode"] != mode || c["failures"] != 0 || c["trials"] != 100 {
            return Err(format!("{name}: {c}"));
        }
    }
    if code != 0 {
        return Err(format!("exit code {code}"));
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!("9 checks x 100 trials in {:.1}s", start.elapsed().as_secs_f64()))
}

fn theorems() -> Outcome {
    let names = [
        "inv_then_collinear",
        "third_point",
        "separation",
        "cyclic_order",
        "pasch",
        "pasch_corollary",
        "sides",
        "acdf",
        "productperp",
        "diagonalpointpolar",
        "a7star",
        "nocommonperp",
        "fixedlines",
        "incidence",
        "tworefsfixed",
        "bisector",
        "a8",
        "a9",
    ];
    let r = quiet(|| run_theorem_suite(&TrialConfig::new(42, 50).only(&names)));
    all_clean(&r, &names, 50)?;
    Ok(format!("{} checks x 50 trials", names.len()))
}

fn perp_polarity() -> Outcome {
    let r = quiet(|| run_theorem_suite(&TrialConfig::new(42, 50).only(&["perp_polarity"])));
    all_clean(&r, &["perp_polarity"], 50)?;
    Ok("300 concurrent pairs, 0 disagreements".into())
}

fn metric(dir: &Path) -> Outcome {
    let (code, text) = verify_json(dir, "metric", &["--suite", "metric", "--seed", "42", "--trials", "50"])?;
    let cs = checks(&text)?;
    let names = ["I1", "I2", "I3", "P1", "P2", "M1", "M2", "M3", "M4", "not_V_star", "H"];
    for name in names {
        let c = cs.iter().find(|c| c["name"] == name).ok_or_else(|| format!("missing check {name}"))?;
        if c["failures"] != 0 || c["trials"] != 50 {
            return Err(format!("{name}: {c}"));
        }
    }
    let h = cs.iter().find(|c| c["name"] == "H").unwrap();
    if h["mode"] != "sampled" {
        return Err("H is not labelled as sampled".into());
    }
    if code != 0 {
        return Err(format!("exit code {code}"));
    }
    Ok(format!("{} checks x 50 trials", names.len()))
}

fn axial_calculus() -> Outcome {
    let names = ["axial_sqrt", "axial_commute", "axial_decompose", "half_transport", "axial_fixed"];
    let r = quiet(|| run_theorem_suite(&TrialConfig::new(42, 100).only(&names)));
    all_clean(&r, &names, 100)?;
    Ok(format!("{} checks x 100 trials", names.len()))
}

fn midpoints() -> Outcome {
    let m = midpoint(&Point::origin(), &Point::rat(3, 5, 0, 1)).map_err(|e| e.to_string())?;
    if !m.eq_exact(&Point::rat(1, 3, 0, 1)) {
        return Err(format!("midpoint of (0,0),(3/5,0) is {m:?}"));
    }
    let r = quiet(|| run_theorem_suite(&TrialConfig::new(42, 100).only(&["midpoint"])));
    all_clean(&r, &["midpoint"], 100)?;
    Ok("(1/3,0) exact; 100 random pairs".into())
}

fn oval_report(dir: &Path, p: u64, check: &str) -> Result<Value, String> {
    let path = dir.join(format!("oval-{p}-{check}.json"));
    let ps = p.to_string();
    let code = cli(&["oval", "--p", &ps, "--check", check, "--json", path.to_str().unwrap()]);
    let v: Value = serde_json::from_str(&fs::read_to_string(&path).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    if code != 0 || v["overall"] != true {
        return Err(format!("p = {p}, {check}: exit {code}, {}", v["checks"]));
    }
    Ok(v)
}

fn ovals(dir: &Path) -> Outcome {
    let start = Instant::now();
    for p in [3u64, 5, 7, 11, 13] {
        for check in ["oval", "pascal", "regular"] {
            let v = oval_report(dir, p, check)?;
            if v["points"] != p + 1 || v["involutions"] != p * p {
                return Err(format!("p = {p}: wrong counts {} / {}", v["points"], v["involutions"]));
            }
        }
    }
    for p in [3u64, 5] {
        oval_report(dir, p, "involution-model")?;
    }
    within(start, Duration::from_secs(120))?;
    Ok(format!("p in 3,5,7,11,13 in {:.1}s", start.elapsed().as_secs_f64()))
}

fn sabotage(dir: &Path) -> Outcome {
    let cases = [
        (Sabotage::EuclideanMirror, "axioms"),
        (Sabotage::SkewedHalfTurn, "theorems"),
        (Sabotage::DroppedBowtieLabeling, "theorems"),
    ];
    let mut caught = Vec::new();
    for (s, suite) in cases {
        let (code, text) = verify_json(
            dir,
            s.name(),
            &["--suite", suite, "--seed", "42", "--trials", "10", "--sabotage", s.name()],
        )?;
        let failing: Vec<String> = checks(&text)?
            .iter()
            .filter(|c| c["failures"].as_u64().unwrap_or(0) > 0)
            .map(|c| c["name"].as_str().unwrap_or("?").to_string())
            .collect();
        if code != 1 || failing.is_empty() {
            return Err(format!("{}: exit {code}, failing {failing:?}", s.name()));
        }
        let shown = failing.iter().take(3).cloned().collect::<Vec<_>>().join(", ");
        caught.push(format!(
            "{} -> {} failing ({shown}{})",
            s.name(),
            failing.len(),
            if failing.len() > 3 { ", ..." } else { "" }
        ));
    }
    Ok(caught.join("; "))
}

fn determinism(dir: &Path) -> Outcome {
    for (suite, trials) in [("axioms", "10"), ("metric", "5"), ("oval-sample", "10")] {
        let args = ["--suite", suite, "--seed", "2024", "--trials", trials];
        let (_, a) = verify_json(dir, &format!("det-{suite}-a"), &args)?;
        let (_, b) = verify_json(dir, &format!("det-{suite}-b"), &args)?;
        if a != b {
            return Err(format!("{suite} reports differ"));
        }
    }
    let a = oval_report(dir, 7, "all")?;
    let b = oval_report(dir, 7, "all")?;
    if a != b {
        return Err("oval reports differ".into());
    }
    Ok("byte-identical reports".into())
}

fn leaf(rng: &mut ChaCha8Rng) -> Real {
    let n = rng.gen_range(-9i64..=9);
    let d = rng.gen_range(1i64..=9);
    let r = Real::frac(n, d);
    if rng.gen_bool(0.3) {
        cr_sqrt(&r.abs()).unwrap()
    } else {
        r
    }
}

fn random_expr(rng: &mut ChaCha8Rng, depth: u32) -> Real {
    if depth == 0 || rng.gen_bool(0.25) {
        return leaf(rng);
    }
    if rng.gen_bool(0.2) {
        return cr_sqrt(&random_expr(rng, depth - 1).abs()).unwrap();
    }
    let a = random_expr(rng, depth - 1);
    let b = random_expr(rng, depth - 1);
    match rng.gen_range(0..4) {
        0 => cr_arith(Op::Add, &a, &b).unwrap(),
        1 => cr_arith(Op::Sub, &a, &b).unwrap(),
        2 => cr_arith(Op::Mul, &a, &b).unwrap(),
        _ => cr_arith(Op::Div, &a, &b).unwrap_or(a),
    }
}

/// An expression of depth at most 6 that is zero by an algebraic identity.
fn identity(rng: &mut ChaCha8Rng) -> Real {
    let a = random_expr(rng, 3);
    let b = random_expr(rng, 3);
    let c = random_expr(rng, 3);
    match rng.gen_range(0..5) {
        0 => (&a + &b) * &c - (&a * &c + &b * &c),
        1 => (&a - &b) * (&a + &b) - (a.square() - b.square()),
        2 if !b.is_zero() => cr_arith(Op::Div, &(&a * &b), &b).unwrap() - a,
        3 => cr_sqrt(&a.square()).unwrap() - a.abs(),
        _ => cr_sqrt(&a.abs()).unwrap().square() - a.abs(),
    }
}

fn scalar() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut slowest = Duration::ZERO;
    let mut timed_sign = |x: &Real| {
        let t = Instant::now();
        let s = cr_sign(x);
        slowest = slowest.max(t.elapsed());
        s
    };
    for k in 0..1000 {
        let e = identity(&mut rng);
        let s = timed_sign(&e);
        if s != 0 {
            return Err(format!("identity {k} has sign {s}"));
        }
    }
    let r2 = cr_sqrt(&Real::from_int(2)).unwrap();
    let a = timed_sign(&(&r2 - Real::frac(3, 2)));
    let b = timed_sign(&(Real::from_int(3) - Real::from_int(2) * &r2));
    if (a, b) != (-1, 1) {
        return Err(format!("signs {a}, {b}"));
    }
    if slowest >= Duration::from_secs(10) {
        return Err(format!("slowest sign query {:.1}s", slowest.as_secs_f64()));
    }
    Ok(format!("1000 identities; slowest sign query {:.3}s", slowest.as_secs_f64()))
}

fn main() -> ExitCode {
    let dir = tempfile::tempdir().expect("temporary directory");
    let dir = dir.path();
    let criteria: Vec<(&str, Criterion<'_>)> = vec![
        ("axiom suite", Box::new(|| axioms(dir))),
        ("theorem suite", Box::new(theorems)),
        ("perpendicularity is polarity", Box::new(perp_polarity)),
        ("metric-plane suite", Box::new(|| metric(dir))),
        ("axial calculus", Box::new(axial_calculus)),
        ("midpoint", Box::new(midpoints)),
        ("finite ovals", Box::new(|| ovals(dir))),
        ("negative controls", Box::new(|| sabotage(dir))),
        ("determinism", Box::new(|| determinism(dir))),
        ("scalar kernel", Box::new(scalar)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let secs = start.elapsed().as_secs_f64();
        match out {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{secs:.1}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

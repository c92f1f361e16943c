//! Subcommands of the `toro` binary. Each returns a [`Failure`] carrying
//! the process exit code.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use similar::TextDiff;
use toro_core::input::{InputSpec, SpecError};
use toro_core::model::{validate_germ, GermInput, State};
use toro_core::ramification::{classify_subcase, log_jacobian, toroidal_at};
use toro_core::toric2::{strong_factorize, Factorization, Fan2, FanError, Ray};
use toro_core::toroidalize::{current_rlog, run, StepError, DEFAULT_MAX_STEPS};
use toro_core::trace::{dot_x, dot_y, trace_json};

pub const EXIT_PARSE: u8 = 1;
pub const EXIT_INVALID: u8 = 2;
pub const EXIT_IRRATIONAL: u8 = 3;
pub const EXIT_NON_TERMINATION: u8 = 4;
pub const EXIT_INTERNAL: u8 = 5;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Failure {
        Failure { code, message: message.into() }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure::new(EXIT_PARSE, format!("{}: {e}", path.display()))
}

fn out_failure(e: std::io::Error) -> Failure {
    Failure::new(EXIT_INTERNAL, e.to_string())
}

pub fn step_error_code(e: &StepError) -> u8 {
    match e {
        StepError::IrrationalCenter(_) => EXIT_IRRATIONAL,
        StepError::NonTermination { .. } => EXIT_NON_TERMINATION,
        StepError::InvalidGerm { .. } => EXIT_INVALID,
        _ => EXIT_INTERNAL,
    }
}

pub fn load_spec(path: &Path) -> Result<(InputSpec, GermInput), Failure> {
    let text = fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
    let spec = InputSpec::from_toml(&text).map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", path.display())))?;
    let germ = spec.germ().map_err(|e| {
        let code = if matches!(e, SpecError::EmptyTargetBoundary) { EXIT_INVALID } else { EXIT_PARSE };
        Failure::new(code, format!("{}: {e}", path.display()))
    })?;
    Ok((spec, germ))
}

pub fn analyze(path: &Path, out: &mut dyn Write) -> Result<(), Failure> {
    let (_, germ) = load_spec(path)?;
    let map = germ.local_map();
    validate_germ(&map).map_err(|d| Failure::new(EXIT_INVALID, format!("not log smooth: {d}")))?;
    let mut state = State::new(&germ).map_err(|d| Failure::new(EXIT_INVALID, d.to_string()))?;
    let rlog = current_rlog(&mut state).map_err(|e| Failure::new(step_error_code(&e), e.to_string()))?;
    let data = classify_subcase(&map).map_err(|e| Failure::new(EXIT_INTERNAL, e.to_string()))?;
    let toroidal = toroidal_at(&map).map_err(|d| Failure::new(EXIT_INVALID, d.to_string()))?;
    let mut s = String::new();
    let _ = writeln!(s, "valid: yes");
    let _ = writeln!(s, "r_log = {}", log_jacobian(&map));
    let _ = writeln!(s, "R_log = {}", rlog.to_text());
    let _ = writeln!(s, "subcase: {}", data.subcase);
    let _ = writeln!(s, "toroidal: {}", if toroidal { "yes" } else { "no" });
    out.write_all(s.as_bytes()).map_err(out_failure)
}

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub max_steps: Option<usize>,
    pub trace: Option<PathBuf>,
    pub dot_x: Option<PathBuf>,
    pub dot_y: Option<PathBuf>,
}

/// Step limit: the command line, then the germ file, then `TORO_MAX_STEPS`,
/// then the built-in default.
pub fn max_steps(flag: Option<usize>, spec: &InputSpec) -> Result<usize, Failure> {
    if let Some(n) = flag.or(spec.max_steps) {
        return Ok(n);
    }
    match std::env::var("TORO_MAX_STEPS") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::new(EXIT_PARSE, format!("TORO_MAX_STEPS={v:?} is not a step count"))),
        Err(_) => Ok(DEFAULT_MAX_STEPS),
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::new(EXIT_INTERNAL, format!("{}: {e}", path.display())))
}

/// Paths in the germ file are relative to the file itself.
fn relative_to(spec_path: &Path, p: &str) -> PathBuf {
    spec_path.parent().unwrap_or(Path::new(".")).join(p)
}

pub fn run_file(path: &Path, opts: &RunOptions, out: &mut dyn Write) -> Result<(), Failure> {
    let (spec, germ) = load_spec(path)?;
    let limit = max_steps(opts.max_steps, &spec)?;
    let mut state = State::new(&germ).map_err(|d| Failure::new(EXIT_INVALID, format!("not log smooth: {d}")))?;
    let result = run(&mut state, limit);

    let from_spec = |p: &Option<String>| p.as_deref().map(|p| relative_to(path, p));
    let trace = opts.trace.clone().or_else(|| from_spec(&spec.trace));
    let dx = opts.dot_x.clone().or_else(|| from_spec(&spec.dot_x));
    let dy = opts.dot_y.clone().or_else(|| from_spec(&spec.dot_y));
    if let Some(p) = &trace {
        write_file(p, &trace_json(&state.events, result.as_ref().ok().map(|s| &s.atlas)))?;
    }
    if let Some(p) = &dx {
        write_file(p, &dot_x(&state, &state.subcases))?;
    }
    if let Some(p) = &dy {
        write_file(p, &dot_y(&state))?;
    }

    let summary = result.map_err(|e| Failure::new(step_error_code(&e), e.to_string()))?;
    let mut s = String::new();
    let _ = writeln!(s, "toroidal after {} step(s)", summary.atlas.steps);
    for r in &summary.reports {
        let _ = writeln!(
            s,
            "step {}: {:?} -> {:?}, {} source blowup(s), monitor {}",
            r.step,
            r.before.sorted_key().0,
            r.after.sorted_key().0,
            r.x_blowups,
            if r.all_ok() { "ok" } else { "VIOLATED" }
        );
    }
    for g in &summary.atlas.germs {
        let _ = writeln!(s, "x{} over y{}: ({}, {}) det {}", g.germ, g.target, g.pull1, g.pull2, g.det);
    }
    out.write_all(s.as_bytes()).map_err(out_failure)
}

/// Checks one germ file: the run succeeds with every monitor clause and
/// bound satisfied, repeats byte for byte, its DOT forests cover every
/// germ, and it matches `<stem>.trace.json` when that file exists.
fn verify_one(path: &Path) -> Result<String, String> {
    let (_, germ) = load_spec(path).map_err(|f| f.message)?;
    let mut a = State::new(&germ).map_err(|d| d.to_string())?;
    let mut b = State::new(&germ).map_err(|d| d.to_string())?;
    let sa = run(&mut a, DEFAULT_MAX_STEPS).map_err(|e| e.to_string())?;
    let sb = run(&mut b, DEFAULT_MAX_STEPS).map_err(|e| e.to_string())?;
    if let Some(r) = sa.reports.iter().find(|r| !r.all_ok()) {
        let mut why = r.monitor.violations.clone();
        why.extend(r.bound_violations.iter().cloned());
        why.extend(r.formula_mismatches.iter().cloned());
        return Err(format!("step {}: {}", r.step, why.join("; ")));
    }
    if let Some(g) = sa.atlas.germs.iter().find(|g| !g.toroidal) {
        return Err(format!("final chart x{} is not toroidal", g.germ));
    }
    let ta = trace_json(&a.events, Some(&sa.atlas));
    if ta != trace_json(&b.events, Some(&sb.atlas)) {
        return Err("two runs gave different traces".into());
    }
    let nodes = |dot: &str| dot.lines().filter(|l| l.contains("[label=") && !l.contains("->")).count();
    if nodes(&dot_x(&a, &a.subcases)) != a.x.len() || nodes(&dot_y(&a)) != a.y.len() {
        return Err("DOT forest does not cover every germ".into());
    }
    let golden = path.with_extension("trace.json");
    if golden.exists() {
        let want = fs::read_to_string(&golden).map_err(|e| e.to_string())?;
        if want != ta {
            let diff = TextDiff::from_lines(&want, &ta)
                .unified_diff()
                .context_radius(2)
                .header(&golden.display().to_string(), "this run")
                .to_string();
            return Err(format!("trace differs from {}\n{diff}", golden.display()));
        }
        return Ok(format!("{} step(s), golden trace matches", sa.atlas.steps));
    }
    Ok(format!("{} step(s)", sa.atlas.steps))
}

pub fn verify(path: &Path, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    let files: Vec<PathBuf> = if path.is_dir() {
        let mut v: Vec<PathBuf> = fs::read_dir(path)
            .map_err(|e| io_failure(path, e))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "toml"))
            .collect();
        v.sort();
        v
    } else {
        vec![path.to_path_buf()]
    };
    if files.is_empty() {
        writeln!(err, "warning: no germ files in {}", path.display()).map_err(out_failure)?;
        return Ok(());
    }
    let results: Vec<Result<String, String>> = std::thread::scope(|s| {
        let handles: Vec<_> = files.iter().map(|f| s.spawn(move || verify_one(f))).collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap_or_else(|_| Err("verifier panicked".into())))
            .collect()
    });
    let mut failed = 0;
    for (f, r) in files.iter().zip(&results) {
        let name = f.file_name().map_or_else(|| f.display().to_string(), |n| n.to_string_lossy().into_owned());
        let line = match r {
            Ok(msg) => format!("ok   {name}: {msg}\n"),
            Err(msg) => {
                failed += 1;
                format!("FAIL {name}: {msg}\n")
            }
        };
        out.write_all(line.as_bytes()).map_err(out_failure)?;
    }
    writeln!(out, "{} passed, {failed} failed", files.len() - failed).map_err(out_failure)?;
    if failed > 0 {
        return Err(Failure::new(EXIT_INVALID, format!("{failed} germ file(s) failed verification")));
    }
    Ok(())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FanFile {
    rays: Vec<(i64, i64)>,
}

pub fn load_fan(path: &Path) -> Result<Fan2, Failure> {
    let text = fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
    let file: FanFile =
        serde_json::from_str(&text).map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", path.display())))?;
    Fan2::new(file.rays.into_iter().map(|(a, b)| Ray(a, b)))
        .map_err(|e| Failure::new(EXIT_INVALID, format!("{}: {e}", path.display())))
}

#[derive(Serialize)]
struct Script<'a> {
    from: &'a Fan2,
    to: &'a Fan2,
    #[serde(flatten)]
    factorization: &'a Factorization,
}

pub fn factor(a: &Path, b: &Path, out_path: Option<&Path>, out: &mut dyn Write) -> Result<(), Failure> {
    let (fa, fb) = (load_fan(a)?, load_fan(b)?);
    let f = strong_factorize(&fa, &fb).map_err(|e| {
        let code = match e {
            FanError::SupportMismatch(..) | FanError::NotSmooth(..) => EXIT_INVALID,
            _ => EXIT_INTERNAL,
        };
        Failure::new(code, e.to_string())
    })?;
    let mut json = serde_json::to_string_pretty(&Script { from: &fa, to: &fb, factorization: &f })
        .map_err(|e| Failure::new(EXIT_INTERNAL, e.to_string()))?;
    json.push('\n');
    match out_path {
        Some(p) => {
            write_file(p, &json)?;
            writeln!(out, "{} up, {} down; script written to {}", f.ups, f.downs, p.display()).map_err(out_failure)
        }
        None => out.write_all(json.as_bytes()).map_err(out_failure),
    }
}

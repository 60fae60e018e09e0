//! The `gored` command line: argument parsing, fixture loading and report
//! rendering. [`run`] returns the text and exit code instead of printing so
//! that every command can be exercised in tests.

use std::ffi::OsString;
use std::fmt::Write;
use std::path::{Path, PathBuf};

use clap::{ArgMatches, Args, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::field::FieldSpec;
use crate::gproj::{complete_resolution, gproj_test, GprojVerdict};
use crate::homology::{ext_dims, SearchConfig};
use crate::module_cat::{parse_representation, IsoConfig, Module};
use crate::presentation::{parse_presentation, Certified, Presentation};
use crate::reduction::{conjecture_report, gorenstein_test, reduce, ReduceOptions, ReductionTrace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Human,
    Structured,
}

#[derive(Debug, Args, Clone)]
pub struct GlobalArgs {
    /// Depth bound for resolutions and periodicity searches.
    #[arg(long, global = true, env = "GORED_BOUND", default_value_t = 20)]
    pub bound: usize,
    /// Field override: Q, GF(p) or GFp.
    #[arg(long, global = true)]
    pub field: Option<String>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    pub format: Format,
    /// Degree cap for completion of the relations.
    #[arg(long, global = true)]
    pub cap: Option<usize>,
    /// Random combinations tried by the isomorphism search.
    #[arg(long, global = true, default_value_t = 64)]
    pub iso_trials: usize,
}

#[derive(Debug, Parser)]
#[command(name = "gored", version, about = "Homological reduction of bound quiver algebras")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone)]
pub struct ModuleArgs {
    /// Simple module at the vertex with this label (repeatable).
    #[arg(long)]
    pub simple: Vec<String>,
    /// Representation file (repeatable).
    #[arg(long)]
    pub module: Vec<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse, complete and certify an algebra.
    Check { file: PathBuf },
    /// Run the reduction pipeline.
    Reduce {
        file: PathBuf,
        /// Comma-separated vertex labels of a corner idempotent.
        #[arg(long)]
        idempotent: Option<String>,
        #[arg(long, default_value_t = 12)]
        jmax: usize,
    },
    /// Gorenstein projectivity of one module.
    Gproj {
        file: PathBuf,
        #[command(flatten)]
        modules: ModuleArgs,
        /// Also build and verify a complete resolution window.
        #[arg(long)]
        complete: bool,
    },
    /// Dimensions of Ext^j(M, N) for j = 0..=jmax.
    Ext {
        file: PathBuf,
        #[command(flatten)]
        modules: ModuleArgs,
        #[arg(long, default_value_t = 6)]
        jmax: usize,
    },
    /// Injective dimensions of the algebra on both sides.
    Gorenstein { file: PathBuf },
}

/// Settings echoed in every report.
#[derive(Clone, Debug, Serialize)]
pub struct Config {
    pub field: Option<String>,
    pub bound: usize,
    pub completion_cap: Option<usize>,
    pub iso_trials: usize,
    pub seed: u64,
    pub format: Format,
}

impl Config {
    fn from_args(g: &GlobalArgs) -> Self {
        Config {
            field: g.field.clone(),
            bound: g.bound,
            completion_cap: g.cap,
            iso_trials: g.iso_trials,
            seed: g.seed,
            format: g.format,
        }
    }

    fn search(&self) -> SearchConfig {
        SearchConfig {
            bound: self.bound,
            iso: IsoConfig {
                seed: self.seed,
                random_trials: self.iso_trials,
                ..IsoConfig::default()
            },
            ..SearchConfig::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn fail(msg: impl std::fmt::Display) -> Self {
        Outcome {
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
            code: 1,
        }
    }
}

struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

type CmdResult = Result<(String, i32), Failure>;

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let matches = match Cli::command().try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome {
                    stdout: text,
                    stderr: String::new(),
                    code,
                }
            } else {
                Outcome {
                    stdout: String::new(),
                    stderr: text,
                    code,
                }
            };
        }
    };
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => return Outcome::fail(e),
    };
    let config = Config::from_args(&cli.global);
    let sub = matches.subcommand().map(|(_, m)| m.clone());
    let result = match &cli.command {
        Command::Check { file } => cmd_check(file, &config),
        Command::Reduce { file, idempotent, jmax } => cmd_reduce(file, idempotent.as_deref(), *jmax, &config),
        Command::Gproj {
            file,
            modules,
            complete,
        } => cmd_gproj(file, modules, sub.as_ref(), *complete, &config),
        Command::Ext { file, modules, jmax } => cmd_ext(file, modules, sub.as_ref(), *jmax, &config),
        Command::Gorenstein { file } => cmd_gorenstein(file, &config),
    };
    match result {
        Ok((stdout, code)) => Outcome {
            stdout,
            stderr: String::new(),
            code,
        },
        Err(Failure(msg)) => Outcome::fail(msg),
    }
}

fn load(file: &Path, config: &Config) -> Result<Certified, Failure> {
    let text = std::fs::read_to_string(file).map_err(|e| Failure(format!("{}: {e}", file.display())))?;
    let mut p: Presentation = parse_presentation(&text).map_err(|e| Failure(format!("{}: {e}", file.display())))?;
    if let Some(f) = &config.field {
        let spec: FieldSpec = f.parse()?;
        p = p.over_field(spec)?;
    }
    p.certify(config.completion_cap).map_err(|e| Failure(format!("{}: {e}", file.display())))
}

fn structured(command: &str, config: &Config, result: serde_json::Value) -> String {
    let doc = json!({ "command": command, "config": config, "result": result });
    let mut s = serde_json::to_string_pretty(&doc).expect("reports serialize");
    s.push('\n');
    s
}

fn header(out: &mut String, config: &Config) {
    let _ = writeln!(
        out,
        "bound {}  seed {}  field {}",
        config.bound,
        config.seed,
        config.field.as_deref().unwrap_or("as declared")
    );
}

fn cmd_check(file: &Path, config: &Config) -> CmdResult {
    let c = load(file, config)?;
    let summary = c.algebra.summary();
    let q = c.presentation.quiver();
    let relations: Vec<String> = c.presentation.relations().iter().map(|r| r.display(q)).collect();
    let stats = c.system.stats();
    if config.format == Format::Structured {
        let result = json!({
            "field": summary.field,
            "vertices": summary.vertices,
            "arrows": q.arrows(),
            "relations": relations,
            "rules": stats.rules,
            "nilpotency": c.nilpotency,
            "dimension": summary.dimension,
            "loewy_length": summary.loewy_length,
            "basis": summary.basis,
        });
        return Ok((structured("check", config, result), 0));
    }
    let mut out = String::new();
    header(&mut out, config);
    let _ = writeln!(out, "field {}", summary.field);
    let _ = writeln!(out, "vertices {}  arrows {}  relations {}", q.num_vertices(), q.num_arrows(), relations.len());
    let _ = writeln!(out, "rewriting rules {}", stats.rules);
    let _ = writeln!(out, "admissible with N = {}", c.nilpotency);
    let _ = writeln!(out, "dimension {}", summary.dimension);
    let _ = writeln!(out, "basis {}", summary.basis.join(", "));
    Ok((out, 0))
}

fn ordered_modules(
    c: &Certified,
    args: &ModuleArgs,
    matches: Option<&ArgMatches>,
) -> Result<Vec<(String, Module)>, Failure> {
    let a = &c.algebra;
    let mut tagged: Vec<(usize, String, Module)> = Vec::new();
    let idx = |name: &str| -> Vec<usize> {
        matches
            .and_then(|m| m.indices_of(name))
            .map(|i| i.collect())
            .unwrap_or_default()
    };
    let (si, mi) = (idx("simple"), idx("module"));
    for (k, label) in args.simple.iter().enumerate() {
        let v = a
            .vertex_index(label)
            .ok_or_else(|| Failure(format!("unknown vertex `{label}`")))?;
        tagged.push((si.get(k).copied().unwrap_or(k), format!("S{label}"), Module::simple(a.clone(), v)?));
    }
    for (k, path) in args.module.iter().enumerate() {
        let text = std::fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
        let m = parse_representation(&text, c)?;
        let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
        tagged.push((mi.get(k).copied().unwrap_or(usize::MAX - k), name, m));
    }
    tagged.sort_by_key(|t| t.0);
    Ok(tagged.into_iter().map(|(_, n, m)| (n, m)).collect())
}

fn cmd_reduce(file: &Path, idempotent: Option<&str>, jmax: usize, config: &Config) -> CmdResult {
    let c = load(file, config)?;
    let options = ReduceOptions {
        search: config.search(),
        jmax,
        idempotent: idempotent.map(|s| s.split(',').map(|x| x.trim().to_string()).collect()),
        seed: config.seed,
    };
    let trace = reduce(&c.presentation, &options)?;
    let report = conjecture_report(&trace);
    let code = trace.exit_code();
    if config.format == Format::Structured {
        let result = json!({ "trace": trace, "report": report, "exit_code": code });
        return Ok((structured("reduce", config, result), code));
    }
    Ok((render_trace(&trace, config) + &report.render(), code))
}

fn render_trace(trace: &ReductionTrace, config: &Config) -> String {
    let mut out = String::new();
    header(&mut out, config);
    let _ = writeln!(out, "input digest {}", trace.initial_digest);
    for (i, s) in trace.steps.iter().enumerate() {
        let status = if s.applied { "applied" } else { "refused" };
        let _ = writeln!(
            out,
            "step {}: {:?} {{{}}} {status} [{}]",
            i + 1,
            s.kind,
            s.parameters.join(","),
            s.kind.citation()
        );
        for c in &s.side_conditions {
            let ev = match c.evidence {
                crate::reduction::Evidence::Structural(b) => b.to_string(),
                crate::reduction::Evidence::Dimension(d) => d.to_string(),
            };
            let _ = writeln!(out, "  {}: {ev}", c.name);
        }
        if let Some(t) = &s.ehi {
            match t.t_obs {
                Some(x) => {
                    let _ = writeln!(out, "  Ext tails agree for j > {x} (observed, jmax {})", t.jmax);
                }
                None => {
                    let _ = writeln!(out, "  Ext tails disagree at jmax {}", t.jmax);
                }
            }
        }
        for a in &s.alarms {
            let _ = writeln!(out, "  ALARM: {a}");
        }
    }
    if trace.steps.is_empty() {
        let _ = writeln!(out, "no reduction applies");
    }
    let _ = writeln!(out, "core (dimension {}):", trace.summary.core_dimension);
    for line in trace.core.lines() {
        let _ = writeln!(out, "  {line}");
    }
    let g = &trace.summary.core_gorenstein;
    let _ = writeln!(out, "core id_A A: {}  id_A^op A: {}", g.left, g.right);
    if trace.summary.core_self_injective {
        let _ = writeln!(out, "core self-injective");
    }
    match g.is_gorenstein() {
        Some(true) => {
            let _ = writeln!(out, "core Gorenstein, hence A Gorenstein");
        }
        Some(false) => {
            let _ = writeln!(out, "core not Gorenstein, hence A not Gorenstein");
        }
        None => {
            let _ = writeln!(out, "Gorensteinness of the core undetermined");
        }
    }
    for a in &trace.assertions {
        let cites: Vec<&str> = a.citations.iter().map(|c| c.anchor()).collect();
        let _ = writeln!(out, "assert {} [{}]", a.claim, cites.join(", "));
    }
    out
}

fn cmd_gproj(
    file: &Path,
    args: &ModuleArgs,
    matches: Option<&ArgMatches>,
    complete: bool,
    config: &Config,
) -> CmdResult {
    let c = load(file, config)?;
    let modules = ordered_modules(&c, args, matches)?;
    let [(name, m)] = &modules[..] else {
        return Err(Failure("gproj takes exactly one --simple or --module".into()));
    };
    let cfg = config.search();
    let verdict = gproj_test(m, &cfg)?;
    let window = if complete && verdict.is_gproj() {
        let cr = complete_resolution(m, &cfg)?;
        Some(cr.terms.iter().map(Module::dim).collect::<Vec<_>>())
    } else {
        None
    };
    let code = if matches!(verdict, GprojVerdict::Undetermined { .. }) { 2 } else { 0 };
    if config.format == Format::Structured {
        let result = json!({ "module": name, "verdict": verdict, "complete_resolution_dims": window });
        return Ok((structured("gproj", config, result), code));
    }
    let mut out = String::new();
    header(&mut out, config);
    let _ = writeln!(out, "module {name} (dimension {})", m.dim());
    match verdict {
        GprojVerdict::CertifiedGproj { perp, dual_perp } => {
            let _ = writeln!(out, "CertifiedGproj");
            let _ = writeln!(out, "  Ext^j(M, A) = 0: {perp:?}");
            let _ = writeln!(out, "  Ext^j(M*, A) = 0: {dual_perp:?}");
            let _ = writeln!(out, "  M -> M** invertible");
        }
        GprojVerdict::CertifiedNotGproj { witness } => {
            let _ = writeln!(out, "CertifiedNotGproj");
            let _ = writeln!(out, "  witness {witness:?}");
        }
        GprojVerdict::Undetermined { bound } => {
            let _ = writeln!(out, "Undetermined up to bound {bound}");
        }
    }
    if let Some(w) = window {
        let dims: Vec<String> = w.iter().map(usize::to_string).collect();
        let _ = writeln!(out, "complete resolution window dims {}", dims.join(" "));
    }
    Ok((out, code))
}

fn cmd_ext(
    file: &Path,
    args: &ModuleArgs,
    matches: Option<&ArgMatches>,
    jmax: usize,
    config: &Config,
) -> CmdResult {
    let c = load(file, config)?;
    let modules = ordered_modules(&c, args, matches)?;
    let [(mn, m), (nn, n)] = &modules[..] else {
        return Err(Failure("ext takes exactly two modules".into()));
    };
    let (dims, code) = match ext_dims(m, n, jmax, &config.search()) {
        Ok(d) => (Some(d), 0),
        Err(_) => (None, 2),
    };
    if config.format == Format::Structured {
        let result = json!({ "m": mn, "n": nn, "jmax": jmax, "dims": dims });
        return Ok((structured("ext", config, result), code));
    }
    let mut out = String::new();
    header(&mut out, config);
    match dims {
        Some(d) => {
            let row: Vec<String> = d.iter().map(usize::to_string).collect();
            let _ = writeln!(out, "dim Ext^j({mn}, {nn}), j = 0..{jmax}: {}", row.join(" "));
        }
        None => {
            let _ = writeln!(out, "resolution of {mn} exceeded the size limit before degree {jmax}");
        }
    }
    Ok((out, code))
}

fn cmd_gorenstein(file: &Path, config: &Config) -> CmdResult {
    let c = load(file, config)?;
    let g = gorenstein_test(&c.algebra, &config.search())?;
    let code = if g.is_gorenstein().is_some() { 0 } else { 2 };
    if config.format == Format::Structured {
        let result = json!({
            "id_left": g.left,
            "id_right": g.right,
            "gorenstein": g.is_gorenstein(),
            "self_injective": g.is_self_injective(),
        });
        return Ok((structured("gorenstein", config, result), code));
    }
    let mut out = String::new();
    header(&mut out, config);
    let _ = writeln!(out, "id_A A: {}", g.left);
    let _ = writeln!(out, "id_A^op A: {}", g.right);
    let _ = writeln!(
        out,
        "{}",
        match g.is_gorenstein() {
            Some(true) => "Gorenstein",
            Some(false) => "not Gorenstein",
            None => "undetermined",
        }
    );
    Ok((out, code))
}

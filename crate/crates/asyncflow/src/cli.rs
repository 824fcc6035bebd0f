//! Command-line surface. Results go to `out`, diagnostics to `err`.
//!
//! Exit codes: 0 completed (true and false verdicts alike), 2 usage or parse
//! error, 3 budget exhausted or verdict unknown, 4 internal invariant failure.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use asyncflow_core::conjugacy::{search_conjugacy, verify_conjugacy, OmegaElement, SEARCH_MAX_ARITY};
use asyncflow_core::oracle::{oracle_check, OracleConfig};
use asyncflow_core::{
    decide, Flow, Limits, Property, Quantifier, Reason, SeparationMode, StateVector, TransitivityMode, Truth, Verdict,
};
use clap::{Args, Parser, Subcommand};

use crate::census::census_to_csv;
use crate::error::{Error, Result};
use crate::model::{parse_model, ModelDocument};
use crate::permutation::{parse_permutation, print_permutation};
use crate::portrait::export_portrait;
use crate::report::{build_property, PropertyArgs, VerdictReport};
use crate::schedule_text::{letters_text, parse_schedule};

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_UNKNOWN: u8 = 3;
pub const EXIT_INTERNAL: u8 = 4;

#[derive(Parser, Debug)]
#[command(name = "asyncflow", version, about = "Decide dynamical properties of asynchronous Boolean systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct PropertyFlags {
    /// Property name, e.g. p-independent, atemporal-n-separated, set-transitive.
    #[arg(long)]
    property: String,
    /// First state (bit string, coordinate 1 leftmost).
    #[arg(long)]
    mu: Option<String>,
    /// Second state of a pair property.
    #[arg(long)]
    mu2: Option<String>,
    /// Comma-separated states for set-transitive.
    #[arg(long, value_delimiter = ',')]
    set: Option<Vec<String>>,
    /// Transitivity mode: weak-p, strong-p or n.
    #[arg(long)]
    mode: Option<String>,
    /// Also write the JSON verdict report here.
    #[arg(long)]
    json: Option<PathBuf>,
}

impl PropertyFlags {
    fn args(&self) -> PropertyArgs {
        PropertyArgs { mu: self.mu.clone(), mu2: self.mu2.clone(), set: self.set.clone(), mode: self.mode.clone() }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run every decider on a model.
    Analyze {
        model: PathBuf,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Decide one property.
    Check {
        model: PathBuf,
        #[command(flatten)]
        property: PropertyFlags,
    },
    /// Evaluate a flow at time t.
    Flow {
        model: PathBuf,
        #[arg(long)]
        mu: String,
        #[arg(long)]
        schedule: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        t: f64,
        /// Also print the orbit.
        #[arg(long)]
        orbit: bool,
    },
    /// Export the state portrait as DOT.
    Portrait {
        model: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide one property with the brute-force oracle.
    Oracle {
        model: PathBuf,
        #[command(flatten)]
        property: PropertyFlags,
        /// Maximum word length explored.
        #[arg(long, default_value_t = OracleConfig::default().depth)]
        depth: usize,
    },
    /// Exhaustive census over all functions of arity n.
    Census {
        #[arg(long)]
        n: u8,
        /// CSV output path (default census-n<N>.csv).
        #[arg(long, conflicts_with = "resume")]
        csv: Option<PathBuf>,
        /// Continue a partial census CSV from its last complete row.
        #[arg(long)]
        resume: Option<PathBuf>,
        /// Stop after this many further functions.
        #[arg(long)]
        limit: Option<u64>,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        /// Also write the JSON summary here.
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Check or search for a conjugacy between two models.
    Conjugacy {
        model_a: PathBuf,
        model_b: PathBuf,
        #[arg(long, conflicts_with_all = ["h", "h_prime"])]
        search: bool,
        /// State bijection H as a permutation table.
        #[arg(long = "H", requires = "h_prime")]
        h: Option<PathBuf>,
        /// Fire-vector bijection H' as a permutation table.
        #[arg(long = "Hprime", requires = "h")]
        h_prime: Option<PathBuf>,
    },
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(path.display().to_string(), e))
}

pub fn load_model(path: &Path) -> Result<ModelDocument> {
    parse_model(&read(path)?).map_err(|e| Error::parse(path.display().to_string(), e))
}

fn model_name(doc: &ModelDocument, path: &Path) -> String {
    doc.name
        .clone()
        .unwrap_or_else(|| path.file_stem().map_or_else(|| "model".into(), |s| s.to_string_lossy().into_owned()))
}

/// Runs the CLI and returns the process exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn w(out: &mut dyn Write, text: std::fmt::Arguments<'_>) -> Result<()> {
    out.write_fmt(text).map_err(|e| Error::io("<stdout>", e))
}

fn verdict_code(v: &Verdict) -> u8 {
    if v.value == Truth::Unknown {
        EXIT_UNKNOWN
    } else {
        EXIT_OK
    }
}

fn print_verdict(out: &mut dyn Write, property: &Property, v: &Verdict) -> Result<()> {
    w(out, format_args!("{property}: {} ({})\n", v.value, v.reason))?;
    if let Some(wit) = &v.witness {
        if let Some(s) = &wit.schedule {
            if !s.prefix().is_empty() {
                w(out, format_args!("  prefix: {}\n", letters_text(s.prefix())))?;
            }
            w(out, format_args!("  period: {}\n", letters_text(s.period())))?;
        }
        if !wit.initial.is_empty() {
            w(out, format_args!("  initial: {}\n", join(&wit.initial)))?;
        }
        for cp in &wit.checkpoints {
            let at = cp.interval.map_or_else(|| "before t0".to_string(), |k| format!("interval {k}"));
            w(out, format_args!("  {at}: {}\n", join(&cp.states)))?;
        }
        if !wit.states.is_empty() {
            w(out, format_args!("  states: {}\n", join(&wit.states)))?;
        }
    }
    Ok(())
}

fn join(states: &[StateVector]) -> String {
    states.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn check_replay(doc: &ModelDocument, property: &Property, v: &Verdict) -> Result<()> {
    if let Some(wit) = &v.witness {
        if !wit.replays(&doc.function) {
            return Err(Error::Invariant(format!("witness for {property} does not replay")));
        }
    }
    Ok(())
}

/// Properties run by `analyze`: whole-system properties and point
/// transitivity always; pairs up to arity 3; subsets up to arity 2.
pub fn analyze_catalogue(n: u8) -> Vec<Property> {
    let states: Vec<StateVector> = StateVector::all(n).collect();
    let mut v = Property::system_properties();
    for &mu in &states {
        for mode in TransitivityMode::ALL {
            v.push(Property::PointTransitive { mu, mode });
        }
    }
    if n <= 3 {
        for (i, &mu) in states.iter().enumerate() {
            for &other in &states[i + 1..] {
                v.push(Property::AgreeExists { mu, other });
                for mode in SeparationMode::ALL {
                    for quantifier in Quantifier::ALL {
                        v.push(Property::Separated { mu, other, mode, quantifier });
                    }
                }
            }
        }
    }
    if n <= 2 {
        for bits in 1u32..1 << states.len() {
            let set: Vec<StateVector> = states.iter().copied().filter(|s| bits >> s.bits() & 1 == 1).collect();
            for mode in TransitivityMode::ALL {
                v.push(Property::SetTransitive { set: set.clone(), mode });
            }
        }
    }
    v
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<u8> {
    let limits = Limits::default();
    match command {
        Command::Analyze { model, json } => {
            let doc = load_model(&model)?;
            let name = model_name(&doc, &model);
            let mut reports = Vec::new();
            let mut code = EXIT_OK;
            for p in analyze_catalogue(doc.arity()) {
                let v = decide(&doc.function, &p, &limits)?;
                check_replay(&doc, &p, &v)?;
                if v.value == Truth::Unknown && v.reason == Reason::BudgetExceeded {
                    code = EXIT_UNKNOWN;
                }
                w(out, format_args!("{p}\t{}\t{}\n", v.value, v.reason))?;
                reports.push(VerdictReport::new(&name, doc.arity(), &p, "decider", &v));
            }
            if let Some(path) = json {
                write_file(&path, &serde_json::to_string_pretty(&reports)?)?;
            }
            Ok(code)
        }
        Command::Check { model, property } => {
            let doc = load_model(&model)?;
            let p = build_property(&property.property, &property.args(), doc.arity())?;
            let v = decide(&doc.function, &p, &limits)?;
            check_replay(&doc, &p, &v)?;
            print_verdict(out, &p, &v)?;
            if let Some(path) = &property.json {
                let r = VerdictReport::new(&model_name(&doc, &model), doc.arity(), &p, "decider", &v);
                write_file(path, &serde_json::to_string_pretty(&r)?)?;
            }
            Ok(verdict_code(&v))
        }
        Command::Oracle { model, property, depth } => {
            let doc = load_model(&model)?;
            let p = build_property(&property.property, &property.args(), doc.arity())?;
            let cfg = OracleConfig { depth, ..OracleConfig::default() };
            let v = oracle_check(&doc.function, &p, &cfg)?;
            check_replay(&doc, &p, &v)?;
            print_verdict(out, &p, &v)?;
            if let Some(path) = &property.json {
                let r = VerdictReport::new(&model_name(&doc, &model), doc.arity(), &p, "oracle", &v);
                write_file(path, &serde_json::to_string_pretty(&r)?)?;
            }
            Ok(verdict_code(&v))
        }
        Command::Flow { model, mu, schedule, t, orbit } => {
            let doc = load_model(&model)?;
            let n = doc.arity();
            let (s, grid) = parse_schedule(&read(&schedule)?, Some(n))
                .map_err(|e| Error::parse(schedule.display().to_string(), e))?;
            let start: StateVector = mu
                .parse()
                .ok()
                .filter(|m: &StateVector| m.arity() == n)
                .ok_or_else(|| Error::Usage(format!("--mu: expected {n} bits, found `{mu}`")))?;
            let flow = Flow::new(&doc.function, start, &s, &grid)?;
            w(out, format_args!("{}\n", flow.at(t)))?;
            if orbit {
                let states: Vec<StateVector> = flow.orbit().into_iter().collect();
                w(out, format_args!("orbit: {}\n", join(&states)))?;
            }
            Ok(EXIT_OK)
        }
        Command::Portrait { model, out: path } => {
            let doc = load_model(&model)?;
            let p = export_portrait(&doc.function, &model_name(&doc, &model));
            if let Some(warning) = &p.warning {
                let _ = writeln!(err, "warning: {warning}");
            }
            match path {
                Some(path) => write_file(&path, &p.dot)?,
                None => w(out, format_args!("{}", p.dot))?,
            }
            Ok(EXIT_OK)
        }
        Command::Census { n, csv, resume, limit, threads, summary } => {
            let (path, resuming) = match (csv, resume) {
                (_, Some(r)) => (r, true),
                (Some(c), None) => (c, false),
                (None, None) => (PathBuf::from(format!("census-n{n}.csv")), false),
            };
            let report = census_to_csv(n, &path, resuming, limit, threads)?;
            let text = serde_json::to_string_pretty(&report)?;
            w(out, format_args!("{text}\n"))?;
            if let Some(p) = summary {
                write_file(&p, &text)?;
            }
            Ok(if report.complete { EXIT_OK } else { EXIT_UNKNOWN })
        }
        Command::Conjugacy { model_a, model_b, search, h, h_prime } => {
            let a = load_model(&model_a)?;
            let b = load_model(&model_b)?;
            if a.arity() != b.arity() {
                w(out, format_args!("conjugate: false (arities differ)\n"))?;
                return Ok(EXIT_OK);
            }
            match (h, h_prime) {
                (Some(hp), Some(hpp)) => {
                    let load =
                        |p: &Path| parse_permutation(&read(p)?).map_err(|e| Error::parse(p.display().to_string(), e));
                    let h = load(&hp)?;
                    let h_prime = match OmegaElement::new(load(&hpp)?) {
                        Ok(x) => x,
                        Err(asyncflow_core::Error::NotInOmega) => {
                            w(out, format_args!("conjugate: false (H' does not preserve full covers)\n"))?;
                            return Ok(EXIT_OK);
                        }
                        Err(e) => return Err(e.into()),
                    };
                    let ok = verify_conjugacy(&a.function, &b.function, &h, &h_prime)?;
                    w(out, format_args!("conjugate: {ok}\n"))?;
                    Ok(EXIT_OK)
                }
                _ => {
                    if !search {
                        return Err(Error::Usage("conjugacy needs --search or both --H and --Hprime".into()));
                    }
                    if a.arity() > SEARCH_MAX_ARITY {
                        let _ = writeln!(err, "search is limited to arity {SEARCH_MAX_ARITY}");
                        w(out, format_args!("conjugate: unknown\n"))?;
                        return Ok(EXIT_UNKNOWN);
                    }
                    match search_conjugacy(&a.function, &b.function)? {
                        Some((h, hp)) => {
                            if !verify_conjugacy(&a.function, &b.function, &h, &hp)? {
                                return Err(Error::Invariant("search returned an unverified conjugacy".into()));
                            }
                            w(out, format_args!("conjugate: true\n# H\n{}", print_permutation(&h)))?;
                            w(out, format_args!("# H'\n{}", print_permutation(hp.bijection())))?;
                        }
                        None => w(out, format_args!("conjugate: false\n"))?,
                    }
                    Ok(EXIT_OK)
                }
            }
        }
    }
}

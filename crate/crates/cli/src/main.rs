//! `pingpong`: certify, verify and explore ping-pong free subgroups.
//!
//! Exit codes: 0 success, 1 malformed input, 2 hypothesis violation or
//! failed check, 3 certificate integrity failure.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use pingpong_core::certificate::{certify, Certificate, CertifyJob, CertifyOutcome, HChoice};
use pingpong_core::certifier::{search_h, HSearch, VerifySummary, ViolationReport};
use pingpong_core::groups::{Cocharacter, Element, GroupSpec};
use pingpong_core::json::{matrix_from_value, matrix_to_value};
use pingpong_core::rep_span::{span_rank, RankExperiment};
use pingpong_core::words::parse::parse_parts;
use pingpong_core::words::FreeProductWord;
use pingpong_core::{Error, MatrixQ};

/// Seed used whenever `--seed` is not given.
const DEFAULT_SEED: u64 = 42;

#[derive(Parser, Debug)]
#[command(name = "pingpong", version, about = "Exact ping-pong certificates for free subgroups of SL_n, SO_2k+1 and G2")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Debug)]
struct FamilyArgs {
    /// sl<n>, so<2k+1>, g2, or the JSON object form.
    #[arg(long)]
    group: String,
    /// JSON file with the gamma matrices, or `torus-conjugates:<r>` for r seeded torus conjugates.
    #[arg(long)]
    gammas: String,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Find or take h, check non-incidence, pick z, write a certificate.
    Certify {
        #[command(flatten)]
        family: FamilyArgs,
        /// A JSON matrix file, `identity`, or `search`.
        #[arg(long, default_value = "identity")]
        h: String,
        /// Strictly increasing exponents of tau, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        exponents: Option<String>,
        /// Trial budget for `--h search`.
        #[arg(long, default_value_t = 50)]
        budget: usize,
        /// Also trace every reduced word up to this length and record the summary.
        #[arg(long)]
        max_len: Option<usize>,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recheck a certificate, then trace every reduced word up to `--max-len`.
    Verify {
        #[arg(long)]
        certificate: PathBuf,
        #[arg(long, default_value_t = 6)]
        max_len: usize,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reduce, normalize, decompose and evaluate a word with coefficients.
    Word {
        #[arg(long)]
        group: String,
        /// e.g. "g x1 g^-1 [x1, x2]".
        text: String,
        /// JSON object mapping constant names to matrices.
        #[arg(long)]
        constants: Option<PathBuf>,
        /// JSON array of matrices for x1, x2, ... (default: all identity).
        #[arg(long)]
        assign: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Search for a conjugator h satisfying non-incidence.
    SearchH {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value_t = 50)]
        budget: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact span rank of conjugated highest-weight projectors.
    Rank {
        #[arg(long)]
        group: String,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Defaults to (dim V)^2 + 5.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recompute every stored claim of a certificate.
    Recheck {
        #[arg(long)]
        certificate: PathBuf,
    },
}

/// A run that ends with a specific exit code and message.
struct Exit {
    code: u8,
    msg: String,
}

fn input(msg: impl ToString) -> Exit {
    Exit { code: 1, msg: msg.to_string() }
}

impl From<Error> for Exit {
    fn from(e: Error) -> Self {
        input(e)
    }
}

fn read(path: &Path) -> Result<String, Exit> {
    fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn read_json(path: &Path) -> Result<Value, Exit> {
    serde_json::from_str(&read(path)?).map_err(|e| input(format!("{}: line {} column {}: {e}", path.display(), e.line(), e.column())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Exit> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| input(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn load_gammas(spec: GroupSpec, src: &str, seed: u64) -> Result<Vec<Element>, Exit> {
    if let Some(r) = src.strip_prefix("torus-conjugates:") {
        let r: usize = r.parse().map_err(|_| input(format!("bad count in {src:?}")))?;
        if r == 0 {
            return Err(Error::EmptyFamily.into());
        }
        return Ok(spec.seeded_torus_conjugates(r, seed));
    }
    let v = read_json(Path::new(src))?;
    let list = match &v {
        Value::Object(o) => o.get("gammas").ok_or_else(|| input(format!("{src}: missing \"gammas\"")))?,
        other => other,
    };
    let Value::Array(items) = list else {
        return Err(input(format!("{src}: expected an array of matrices")));
    };
    items
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let m = matrix_from_value(m).map_err(|e| input(format!("{src}: gamma {}: {e}", i + 1)))?;
            Element::new(spec, m).map_err(|e| input(format!("{src}: gamma {}: {e}", i + 1)))
        })
        .collect()
}

fn load_h(spec: GroupSpec, src: &str, budget: usize, seed: u64) -> Result<HChoice, Exit> {
    Ok(match src {
        "identity" => HChoice::Given(Element::identity(spec)),
        "search" => HChoice::Search { budget, seed },
        path => {
            let v = read_json(Path::new(path))?;
            let m = match v.get("h") {
                Some(h) => matrix_from_value(h),
                None => matrix_from_value(&v),
            };
            HChoice::Given(Element::new(spec, m.map_err(|e| input(format!("{path}: {e}")))?)?)
        }
    })
}

fn parse_exponents(spec: GroupSpec, text: Option<&str>) -> Result<Cocharacter, Exit> {
    match text {
        None => Ok(spec.default_cocharacter()),
        Some(t) => {
            let exps = t
                .split(',')
                .map(|x| x.trim().parse::<i64>().map_err(|_| input(format!("bad exponent {x:?}"))))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Cocharacter::new(spec, exps)?)
        }
    }
}

fn report_json(r: &ViolationReport) -> Value {
    json!({
        "status": "violation",
        "vanishing": r.vanishing,
        "table": r.table,
    })
}

fn summary_json(s: &VerifySummary) -> Value {
    json!({
        "max_len": s.max_len,
        "words": s.words,
        "failures": s.failures,
        "all_success": s.all_success(),
        "first_failure": s.first_failure.as_ref().map(|f| json!({
            "word": f.word.to_string(),
            "check": f.check,
            "position": f.position,
        })),
    })
}

/// Parses and rechecks; `retrace` also re-runs a stored summary.
fn load_certificate(path: &Path, retrace: bool) -> Result<Certificate, Exit> {
    let c = Certificate::from_json(&read(path)?)?;
    let problems = if retrace { c.recheck() } else { c.recheck_claims() };
    if !problems.is_empty() {
        return Err(Exit { code: 3, msg: format!("certificate failed recheck:\n  {}", problems.join("\n  ")) });
    }
    Ok(c)
}

fn run(cli: Cli) -> Result<(), Exit> {
    match cli.command {
        Command::Certify { family, h, exponents, budget, max_len, jobs, out } => {
            let spec = GroupSpec::parse(&family.group)?;
            let gammas = load_gammas(spec, &family.gammas, family.seed)?;
            let job = CertifyJob {
                spec,
                gammas,
                h: load_h(spec, &h, budget, family.seed)?,
                cocharacter: parse_exponents(spec, exponents.as_deref())?,
                seed: family.seed,
            };
            match certify(&job)? {
                CertifyOutcome::Certified(mut c) => {
                    let mut failed = None;
                    if let Some(l) = max_len {
                        let s = c.verify(l, jobs)?;
                        c.record_summary(&s);
                        if !s.all_success() {
                            failed = Some(s);
                        }
                    }
                    emit(out.as_deref(), &c.to_json())?;
                    eprintln!("certified: {} cross pairings, z = ({})", c.pairings.len(), join(&c.z));
                    if let Some(s) = failed {
                        return Err(Exit { code: 2, msg: format!("trace failures: {}", pretty(&summary_json(&s))) });
                    }
                    Ok(())
                }
                CertifyOutcome::Violated(r) => {
                    emit(out.as_deref(), &pretty(&report_json(&r)))?;
                    Err(Exit { code: 2, msg: format!("non-incidence fails: {r}") })
                }
                CertifyOutcome::Exhausted(attempts) => {
                    let diag: Vec<Value> = attempts
                        .iter()
                        .map(|a| json!({"attempt": a.attempt, "complexity": a.complexity, "vanishing": a.vanishing}))
                        .collect();
                    emit(out.as_deref(), &pretty(&json!({"status": "exhausted", "attempts": diag})))?;
                    Err(Exit { code: 2, msg: format!("no h found in {budget} attempts") })
                }
            }
        }
        Command::Verify { certificate, max_len, jobs, out } => {
            let c = load_certificate(&certificate, false)?;
            let s = c.verify(max_len, jobs)?;
            emit(out.as_deref(), &pretty(&summary_json(&s)))?;
            eprintln!("traced {} words, {} failures", s.words, s.failures);
            match &s.first_failure {
                None => Ok(()),
                Some(f) => Err(Exit { code: 2, msg: format!("first failure: {f}") }),
            }
        }
        Command::Word { group, text, constants, assign, json: as_json } => {
            let spec = GroupSpec::parse(&group)?;
            let consts = match constants {
                None => HashMap::new(),
                Some(p) => {
                    let Value::Object(o) = read_json(&p)? else {
                        return Err(input(format!("{}: expected an object of matrices", p.display())));
                    };
                    let mut map = HashMap::new();
                    for (name, m) in o {
                        let m = matrix_from_value(&m).map_err(|e| input(format!("constant {name}: {e}")))?;
                        map.insert(name, Element::new(spec, m)?);
                    }
                    map
                }
            };
            let word = FreeProductWord::reduce(parse_parts(&text, &consts)?);
            let normalized = word.normalize();
            let basic = normalized.decompose_basic(spec)?;
            let assignment: Vec<MatrixQ> = match assign {
                None => vec![MatrixQ::identity(spec.dim()); word.arity()],
                Some(p) => {
                    let Value::Array(items) = read_json(&p)? else {
                        return Err(input(format!("{}: expected an array of matrices", p.display())));
                    };
                    items.iter().map(matrix_from_value).collect::<Result<_, _>>()?
                }
            };
            let value = word.evaluate(&assignment, spec)?;
            let basic_text: Vec<String> = basic.iter().map(|b| b.to_word().to_string()).collect();
            if as_json {
                print!(
                    "{}",
                    pretty(&json!({
                        "reduced": word.to_string(),
                        "normalized": normalized.to_string(),
                        "basic_words": basic_text,
                        "evaluation": matrix_to_value(value.matrix()),
                    }))
                );
            } else {
                println!("reduced:     {word}");
                println!("normalized:  {normalized}");
                println!("basic words: {}", basic.len());
                for (i, b) in basic_text.iter().enumerate() {
                    println!("  {}: {b}", i + 1);
                }
                println!("evaluation:  {}", matrix_to_value(value.matrix()));
            }
            Ok(())
        }
        Command::SearchH { family, budget, out } => {
            let spec = GroupSpec::parse(&family.group)?;
            let gammas = load_gammas(spec, &family.gammas, family.seed)?;
            match search_h(&gammas, spec, budget, family.seed)? {
                HSearch::Found { h, attempt, complexity, table, .. } => {
                    let v = json!({
                        "status": "found",
                        "seed": family.seed,
                        "attempt": attempt,
                        "complexity": complexity,
                        "h": matrix_to_value(h.matrix()),
                        "pairings": table.cross,
                    });
                    emit(out.as_deref(), &pretty(&v))
                }
                HSearch::Exhausted { attempts } => {
                    let diag: Vec<Value> = attempts
                        .iter()
                        .map(|a| json!({"attempt": a.attempt, "complexity": a.complexity, "vanishing": a.vanishing}))
                        .collect();
                    emit(out.as_deref(), &pretty(&json!({"status": "exhausted", "attempts": diag})))?;
                    Err(Exit { code: 2, msg: format!("no h found in {budget} attempts") })
                }
            }
        }
        Command::Rank { group, seed, samples, out } => {
            let spec = GroupSpec::parse(&group)?;
            let mut exp = RankExperiment::new(spec, seed);
            if let Some(n) = samples {
                if n == 0 {
                    return Err(input("--samples must be at least 1"));
                }
                exp.samples = n;
            }
            let report = span_rank(&exp);
            emit(out.as_deref(), &pretty(&serde_json::to_value(&report).expect("reports serialize")))?;
            eprintln!("{spec}: rank {} (target {})", report.achieved, report.target);
            if report.passed() {
                Ok(())
            } else {
                Err(Exit { code: 2, msg: "rank below target".into() })
            }
        }
        Command::Recheck { certificate } => {
            load_certificate(&certificate, true)?;
            eprintln!("certificate ok");
            Ok(())
        }
    }
}

fn join(v: &[pingpong_core::Rational]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Exit { code, msg }) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

//! Command-line front end for the identity catalog.
//!
//! Exit codes: 0 all requested checks pass, 1 at least one check fails,
//! 2 usage error / unknown id / malformed manifest, 3 at least one check
//! is inconclusive (and none fail).

use std::collections::BTreeMap;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Mutex;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use qident_core::catalog::{
    catalog, find_record, verify, IdentityRecord, VerificationOutcome, VerifyMode, VerifyRequest,
    VerifyStatus,
};

#[derive(Parser)]
#[command(name = "qident", about = "Exact verification of a catalog of q-series identities")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// List every catalog entry with its parameters and default caps.
    List,
    /// Verify the named identities.
    Verify {
        /// Catalog ids to verify.
        #[arg(required = true)]
        ids: Vec<String>,
        #[command(flatten)]
        opts: RunOpts,
    },
    /// Verify every identity in the catalog.
    VerifyAll {
        #[command(flatten)]
        opts: RunOpts,
    },
    /// Run a regression manifest and write a JSON report beside it.
    Regress {
        /// Manifest file: one `id q_cap param_caps mode expected_status`
        /// per line, `#` comments allowed, `-` for no parameter caps.
        manifest: PathBuf,
        #[command(flatten)]
        opts: RunOpts,
    },
}

#[derive(Args, Clone)]
struct RunOpts {
    /// Override the truncation cap for q.
    #[arg(long, value_name = "N")]
    q_cap: Option<i64>,
    /// Override a parameter cap (repeatable), e.g. --cap a=4.
    #[arg(long = "cap", value_name = "VAR=N")]
    caps: Vec<String>,
    /// Verification mode.
    #[arg(long, value_enum, default_value_t = ModeArg::Series)]
    mode: ModeArg,
    /// Number of rational parameter samples (sample mode).
    #[arg(long, value_name = "K", default_value_t = 5)]
    samples: u32,
    /// Seed for the deterministic sample stream.
    #[arg(long, value_name = "S", default_value_t = 0)]
    seed: u64,
    /// Output format.
    #[arg(long, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
    /// Worker threads (default: available parallelism).
    #[arg(long, value_name = "J")]
    jobs: Option<usize>,
    /// Harness self-test: perturb every right-hand side, which must turn
    /// every PASS into a witnessed FAIL.
    #[arg(long, hide = true)]
    mutate_rhs: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Series,
    Sample,
}

impl From<ModeArg> for VerifyMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Series => VerifyMode::Series,
            ModeArg::Sample => VerifyMode::Sample,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

// ---------------------------------------------------------------------------
// JSON schema
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct JsonWitness {
    exponents: BTreeMap<String, i64>,
    lhs: String,
    rhs: String,
}

#[derive(Serialize)]
struct JsonOutcome {
    id: String,
    status: String,
    mode: String,
    caps: BTreeMap<String, i64>,
    witness: Option<JsonWitness>,
    elapsed_ms: u128,
}

fn to_json(outcome: &VerificationOutcome, elapsed_ms: u128) -> JsonOutcome {
    JsonOutcome {
        id: outcome.id.to_string(),
        status: outcome.status.as_str().to_string(),
        mode: outcome.mode.as_str().to_string(),
        caps: outcome.caps.iter().cloned().collect(),
        witness: outcome.witness.as_ref().map(|w| JsonWitness {
            exponents: w.exponents.iter().cloned().collect(),
            lhs: w.lhs.clone(),
            rhs: w.rhs.clone(),
        }),
        elapsed_ms,
    }
}

fn render_text(outcome: &VerificationOutcome, elapsed_ms: u128) -> String {
    let caps: Vec<String> = outcome
        .caps
        .iter()
        .map(|(n, v)| format!("{n}={v}"))
        .collect();
    let mut line = format!(
        "{} {} mode={} caps={}",
        outcome.id,
        outcome.status.as_str(),
        outcome.mode.as_str(),
        caps.join(",")
    );
    if let Some(w) = &outcome.witness {
        let exps: Vec<String> = w.exponents.iter().map(|(n, v)| format!("{n}^{v}")).collect();
        line.push_str(&format!(
            " witness[{}: lhs={} rhs={}]",
            exps.join(" "),
            w.lhs,
            w.rhs
        ));
    }
    if !outcome.detail.is_empty() {
        line.push_str(&format!(" ({})", outcome.detail));
    }
    line.push_str(&format!(" [{elapsed_ms} ms]"));
    line
}

// ---------------------------------------------------------------------------
// Job execution
// ---------------------------------------------------------------------------

struct Job {
    record: &'static IdentityRecord,
    req: VerifyRequest,
}

struct JobResult {
    outcome: VerificationOutcome,
    elapsed_ms: u128,
}

/// Run all jobs on `jobs` worker threads; results come back in job order.
fn run_jobs(jobs_list: Vec<Job>, workers: Option<usize>) -> Vec<JobResult> {
    let n = jobs_list.len();
    let workers = workers
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|p| p.get())
                .unwrap_or(1)
        })
        .max(1)
        .min(n.max(1));
    let jobs_list: Vec<Mutex<Option<Job>>> = jobs_list
        .into_iter()
        .map(|j| Mutex::new(Some(j)))
        .collect();
    let next = Mutex::new(0usize);
    let results: Vec<Mutex<Option<JobResult>>> = (0..n).map(|_| Mutex::new(None)).collect();
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = {
                    let mut g = next.lock().unwrap();
                    let i = *g;
                    if i >= n {
                        return;
                    }
                    *g += 1;
                    i
                };
                let job = jobs_list[i].lock().unwrap().take().unwrap();
                let start = Instant::now();
                let outcome = verify(job.record, &job.req);
                let elapsed_ms = start.elapsed().as_millis();
                *results[i].lock().unwrap() = Some(JobResult {
                    outcome,
                    elapsed_ms,
                });
            });
        }
    });
    results
        .into_iter()
        .map(|m| m.into_inner().unwrap().unwrap())
        .collect()
}

fn aggregate_exit(results: &[JobResult]) -> ExitCode {
    if results
        .iter()
        .any(|r| r.outcome.status == VerifyStatus::Fail)
    {
        ExitCode::from(1)
    } else if results
        .iter()
        .any(|r| r.outcome.status == VerifyStatus::Inconclusive)
    {
        ExitCode::from(3)
    } else {
        ExitCode::SUCCESS
    }
}

fn emit(results: &[JobResult], format: FormatArg) {
    match format {
        FormatArg::Text => {
            for r in results {
                println!("{}", render_text(&r.outcome, r.elapsed_ms));
            }
        }
        FormatArg::Json => {
            for r in results {
                let j = to_json(&r.outcome, r.elapsed_ms);
                println!("{}", serde_json::to_string(&j).expect("serialize"));
            }
        }
    }
}

fn usage_error(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn parse_cap(spec: &str) -> Result<(String, i64), String> {
    let (name, val) = spec
        .split_once('=')
        .ok_or_else(|| format!("cap `{spec}` is not of the form VAR=N"))?;
    let v: i64 = val
        .parse()
        .map_err(|_| format!("cap `{spec}` has a non-integer bound"))?;
    if name.is_empty() {
        return Err(format!("cap `{spec}` has an empty variable name"));
    }
    Ok((name.to_string(), v))
}

fn build_request(opts: &RunOpts) -> Result<VerifyRequest, String> {
    let mut caps = BTreeMap::new();
    if let Some(q) = opts.q_cap {
        caps.insert("q".to_string(), q);
    }
    for spec in &opts.caps {
        let (n, v) = parse_cap(spec)?;
        caps.insert(n, v);
    }
    Ok(VerifyRequest {
        caps,
        mode: opts.mode.into(),
        samples: opts.samples,
        seed: opts.seed,
        mutate_rhs: opts.mutate_rhs,
    })
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

fn cmd_list() -> ExitCode {
    for rec in catalog() {
        let caps: Vec<String> = rec
            .default_caps
            .iter()
            .map(|(n, v)| format!("{n}={v}"))
            .collect();
        let modes: Vec<&str> = rec.modes.iter().map(|m| m.as_str()).collect();
        println!(
            "{} params=[{}] caps={} modes={}\n    {}",
            rec.id,
            rec.params.join(","),
            caps.join(","),
            modes.join("|"),
            rec.description
        );
    }
    ExitCode::SUCCESS
}

fn cmd_verify(ids: &[String], opts: &RunOpts) -> ExitCode {
    let req = match build_request(opts) {
        Ok(r) => r,
        Err(e) => return usage_error(&e),
    };
    let mut jobs = Vec::new();
    for id in ids {
        match find_record(id) {
            Some(rec) => {
                if !rec.supports(req.mode) {
                    return usage_error(&format!(
                        "identity `{id}` does not support mode `{}`",
                        req.mode.as_str()
                    ));
                }
                jobs.push(Job {
                    record: rec,
                    req: req.clone(),
                })
            }
            None => return usage_error(&format!("unknown identity id `{id}`")),
        }
    }
    let results = run_jobs(jobs, opts.jobs);
    emit(&results, opts.format);
    aggregate_exit(&results)
}

fn cmd_verify_all(opts: &RunOpts) -> ExitCode {
    let req = match build_request(opts) {
        Ok(r) => r,
        Err(e) => return usage_error(&e),
    };
    let jobs: Vec<Job> = catalog()
        .iter()
        .map(|rec| {
            let mut req = req.clone();
            if !rec.supports(req.mode) {
                // a catalog sweep runs series-only records in series mode
                // rather than reporting them unverifiable
                req.mode = VerifyMode::Series;
            }
            Job { record: rec, req }
        })
        .collect();
    let results = run_jobs(jobs, opts.jobs);
    emit(&results, opts.format);
    aggregate_exit(&results)
}

// ---------------------------------------------------------------------------
// Regression manifests
// ---------------------------------------------------------------------------

struct ManifestEntry {
    record: &'static IdentityRecord,
    req: VerifyRequest,
    expected: VerifyStatus,
}

fn parse_manifest(text: &str, base: &RunOpts) -> Result<Vec<ManifestEntry>, String> {
    let mut entries = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| format!("manifest line {}: {}", lineno + 1, msg);
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 5 {
            return Err(err(format!(
                "expected 5 fields `id q_cap param_caps mode expected_status`, got {}",
                fields.len()
            )));
        }
        let record =
            find_record(fields[0]).ok_or_else(|| err(format!("unknown id `{}`", fields[0])))?;
        let q_cap: i64 = fields[1]
            .parse()
            .map_err(|_| err(format!("bad q cap `{}`", fields[1])))?;
        let mut caps = BTreeMap::new();
        caps.insert("q".to_string(), q_cap);
        if fields[2] != "-" {
            for spec in fields[2].split(',') {
                let (n, v) = parse_cap(spec).map_err(err)?;
                caps.insert(n, v);
            }
        }
        let mode = match fields[3] {
            "series" => VerifyMode::Series,
            "sample" => VerifyMode::Sample,
            other => return Err(err(format!("bad mode `{other}`"))),
        };
        let expected = match fields[4] {
            "PASS" => VerifyStatus::Pass,
            "FAIL" => VerifyStatus::Fail,
            "INCONCLUSIVE" => VerifyStatus::Inconclusive,
            other => return Err(err(format!("bad expected status `{other}`"))),
        };
        entries.push(ManifestEntry {
            record,
            req: VerifyRequest {
                caps,
                mode,
                samples: base.samples,
                seed: base.seed,
                mutate_rhs: base.mutate_rhs,
            },
            expected,
        });
    }
    Ok(entries)
}

#[derive(Serialize)]
struct ReportEntry {
    #[serde(flatten)]
    outcome: JsonOutcome,
    expected: String,
    matched: bool,
}

fn cmd_regress(manifest: &Path, opts: &RunOpts) -> ExitCode {
    let text = match std::fs::read_to_string(manifest) {
        Ok(t) => t,
        Err(e) => return usage_error(&format!("cannot read manifest: {e}")),
    };
    let entries = match parse_manifest(&text, opts) {
        Ok(e) => e,
        Err(e) => return usage_error(&e),
    };
    let expected: Vec<VerifyStatus> = entries.iter().map(|e| e.expected).collect();
    let jobs: Vec<Job> = entries
        .into_iter()
        .map(|e| Job {
            record: e.record,
            req: e.req,
        })
        .collect();
    let results = run_jobs(jobs, opts.jobs);

    let mut all_matched = true;
    let mut report = Vec::new();
    for (r, exp) in results.iter().zip(&expected) {
        let matched = r.outcome.status == *exp;
        all_matched &= matched;
        report.push(ReportEntry {
            outcome: to_json(&r.outcome, r.elapsed_ms),
            expected: exp.as_str().to_string(),
            matched,
        });
        match opts.format {
            FormatArg::Text => println!(
                "{} expected={} {}",
                render_text(&r.outcome, r.elapsed_ms),
                exp.as_str(),
                if matched { "ok" } else { "MISMATCH" }
            ),
            FormatArg::Json => println!(
                "{}",
                serde_json::to_string(report.last().unwrap()).expect("serialize")
            ),
        }
    }

    let report_path = manifest.with_extension("report.json");
    match std::fs::File::create(&report_path).and_then(|mut f| {
        let body = serde_json::to_string_pretty(&report).expect("serialize");
        f.write_all(body.as_bytes())?;
        f.write_all(b"\n")
    }) {
        Ok(()) => eprintln!("report written to {}", report_path.display()),
        Err(e) => return usage_error(&format!("cannot write report: {e}")),
    }

    if all_matched {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::List => cmd_list(),
        Cmd::Verify { ids, opts } => cmd_verify(&ids, &opts),
        Cmd::VerifyAll { opts } => cmd_verify_all(&opts),
        Cmd::Regress { manifest, opts } => cmd_regress(&manifest, &opts),
    }
}

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cyclevol::acceptance;
use cyclevol::cache::Cache;
use cyclevol::job::{exit, Command, JobError, JobSpec, Outcome, Settings};
use cyclevol::Report;
use cyclevol_core::rational;
use serde_json::{json, Map, Value};

/// Volume-type invariants of numerical cycle classes on products of
/// projective spaces.
#[derive(Parser)]
#[command(name = "cyclevol", version)]
struct Cli {
    /// JSON job file: one job or an array of jobs.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Worker threads for batches and sweeps.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Relative tolerance of the optimizers, as a rational or decimal.
    #[arg(long, global = true)]
    tol: Option<String>,
    /// Grid resolution for optimizer seeds.
    #[arg(long, global = true)]
    grid: Option<u32>,
    #[command(subcommand)]
    command: Option<Cmd>,
}

#[derive(Args, Clone)]
struct ClassArgs {
    /// Factor dimensions, e.g. `1,1` for P^1 x P^1.
    #[arg(long, value_delimiter = ',')]
    dims: Vec<u32>,
    /// Codimension of alpha.
    #[arg(long)]
    codim: Option<u32>,
    /// Coefficients of alpha over the lexicographic monomial basis.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    coeffs: Vec<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Formulation {
    Sup,
    Xiao,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckKind {
    Kt,
    Homogeneity,
    Duality,
}

#[derive(Clone, Copy, ValueEnum)]
enum McKind {
    Divisor,
    Ci,
    P3,
    Perrin,
    Family,
}

#[derive(Subcommand)]
enum Cmd {
    /// Exponent constants epsilon(n,k) and tau(n,k).
    Constants {
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        k: Option<u32>,
        /// Print the table for every n up to this value.
        #[arg(long)]
        max_n: Option<u32>,
    },
    /// Mobility-count and weighted-count upper bounds.
    Bounds {
        #[command(flatten)]
        class: ClassArgs,
        #[arg(long, value_delimiter = ',')]
        divisor: Vec<String>,
        #[arg(long)]
        s: Option<u64>,
        /// Range of s, `lo:hi`.
        #[arg(long)]
        sweep: Option<String>,
        #[arg(long)]
        t: Option<u64>,
        #[arg(long)]
        c: Option<String>,
        #[arg(long)]
        variant: Option<u8>,
        #[arg(long, value_delimiter = ',')]
        formulas: Vec<String>,
        /// Also report the neighbourhood on which the mobility stays below mu.
        #[arg(long)]
        mu: Option<String>,
    },
    /// The intersection-theoretic volume.
    Volhat {
        #[command(flatten)]
        class: ClassArgs,
        #[arg(long, value_enum)]
        formulation: Option<Formulation>,
        #[arg(long, value_enum)]
        check: Option<CheckKind>,
        /// Scale of the homogeneity check.
        #[arg(long)]
        c: Option<String>,
        #[arg(long, value_delimiter = ',')]
        a: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        b: Vec<String>,
        #[arg(long)]
        k: Option<u32>,
    },
    /// Interval for the Seshadri constant at b points.
    Seshadri {
        #[arg(long, value_delimiter = ',')]
        dims: Vec<u32>,
        #[arg(long)]
        b: u64,
        #[arg(long, value_delimiter = ',')]
        divisor: Vec<String>,
    },
    /// Weighted mobility of complete intersections or divisors.
    Wmob {
        #[arg(long, value_delimiter = ',')]
        dims: Vec<u32>,
        #[arg(long, value_delimiter = ',')]
        divisor: Vec<String>,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        t: Option<u64>,
        #[arg(long)]
        sweep: Option<String>,
    },
    /// Exact mobility counts and count estimates.
    Mc {
        #[arg(long, value_enum)]
        kind: McKind,
        #[arg(long, value_delimiter = ',')]
        dims: Vec<u32>,
        #[arg(long, value_delimiter = ',')]
        divisor: Vec<String>,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        m: Option<u64>,
        #[arg(long)]
        d: Option<u64>,
        #[arg(long)]
        dim_w: Option<u64>,
        #[arg(long)]
        n: Option<u32>,
    },
    /// Run the acceptance suite.
    Verify,
}

/// Inserts `key` when the value is present.
fn put(map: &mut Map<String, Value>, key: &str, value: Option<Value>) {
    if let Some(v) = value {
        map.insert(key.into(), v);
    }
}

fn list(values: &[String]) -> Option<Value> {
    (!values.is_empty()).then(|| json!(values))
}

fn dims(values: &[u32]) -> Option<Vec<u32>> {
    (!values.is_empty()).then(|| values.to_vec())
}

fn alpha(class: &ClassArgs) -> Option<Value> {
    let codim = class.codim?;
    Some(json!({ "codim": codim, "coeffs": class.coeffs }))
}

fn job_from_command(cmd: Cmd) -> JobSpec {
    let mut p = Map::new();
    let (variety, command) = match cmd {
        Cmd::Constants { n, k, max_n } => {
            put(&mut p, "n", n.map(Value::from));
            put(&mut p, "k", k.map(Value::from));
            put(&mut p, "max_n", max_n.map(Value::from));
            (None, Command::Constants)
        }
        Cmd::Bounds {
            class,
            divisor,
            s,
            sweep,
            t,
            c,
            variant,
            formulas,
            mu,
        } => {
            put(&mut p, "alpha", alpha(&class));
            put(&mut p, "divisor", list(&divisor));
            put(&mut p, "s", s.map(Value::from));
            put(&mut p, "sweep", sweep.map(Value::from));
            put(&mut p, "t", t.map(Value::from));
            put(&mut p, "c", c.map(Value::from));
            put(&mut p, "variant", variant.map(Value::from));
            put(&mut p, "formulas", list(&formulas));
            put(&mut p, "mu", mu.map(Value::from));
            (dims(&class.dims), Command::Bounds)
        }
        Cmd::Volhat {
            class,
            formulation,
            check,
            c,
            a,
            b,
            k,
        } => {
            put(&mut p, "alpha", alpha(&class));
            let formulation = formulation.map(|f| match f {
                Formulation::Sup => "sup",
                Formulation::Xiao => "xiao",
                Formulation::Both => "both",
            });
            put(&mut p, "formulation", formulation.map(Value::from));
            let check = check.map(|c| match c {
                CheckKind::Kt => "kt",
                CheckKind::Homogeneity => "homogeneity",
                CheckKind::Duality => "duality",
            });
            put(&mut p, "check", check.map(Value::from));
            put(&mut p, "c", c.map(Value::from));
            put(&mut p, "a", list(&a));
            put(&mut p, "b", list(&b));
            put(&mut p, "k", k.map(Value::from));
            (dims(&class.dims), Command::Volhat)
        }
        Cmd::Seshadri {
            dims: d,
            b,
            divisor,
        } => {
            p.insert("b".into(), b.into());
            put(&mut p, "divisor", list(&divisor));
            (dims(&d), Command::Seshadri)
        }
        Cmd::Wmob {
            dims: d,
            divisor,
            k,
            t,
            sweep,
        } => {
            put(&mut p, "divisor", list(&divisor));
            put(&mut p, "k", k.map(Value::from));
            put(&mut p, "t", t.map(Value::from));
            put(&mut p, "sweep", sweep.map(Value::from));
            (dims(&d), Command::Wmob)
        }
        Cmd::Mc {
            kind,
            dims: d,
            divisor,
            k,
            m,
            d: degree,
            dim_w,
            n,
        } => {
            let kind = match kind {
                McKind::Divisor => "divisor",
                McKind::Ci => "ci",
                McKind::P3 => "p3",
                McKind::Perrin => "perrin",
                McKind::Family => "family",
            };
            p.insert("kind".into(), kind.into());
            put(&mut p, "divisor", list(&divisor));
            put(&mut p, "k", k.map(Value::from));
            put(&mut p, "m", m.map(Value::from));
            put(&mut p, "d", degree.map(Value::from));
            put(&mut p, "dim_w", dim_w.map(Value::from));
            put(&mut p, "n", n.map(Value::from));
            (dims(&d), Command::Mc)
        }
        Cmd::Verify => (None, Command::Verify),
    };
    JobSpec {
        variety,
        command,
        payload: Value::Object(p),
        output_path: None,
    }
}

/// Runs one job, going through the cache for optimization jobs.
fn run_job(job: &JobSpec, settings: &Settings, cache: Option<&Cache>) -> Result<Outcome, JobError> {
    let cache = cache.filter(|_| job.command == Command::Volhat);
    let key = cache.map(|_| Cache::key(job, settings));
    if let (Some(cache), Some(key)) = (cache, &key) {
        if let Some(hit) = cache.get(key) {
            return Ok(hit);
        }
    }
    let outcome = job.run(settings)?;
    if let (Some(cache), Some(key)) = (cache, &key) {
        if let Err(e) = cache.put(key, &outcome) {
            eprintln!("warning: cache write failed: {e}");
        }
    }
    Ok(outcome)
}

fn write_json(value: &Value, path: Option<&PathBuf>) -> Result<(), JobError> {
    let text = serde_json::to_string_pretty(value)? + "\n";
    match path {
        Some(p) => fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<u8, JobError> {
    if let Some(n) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .map_err(|e| JobError::Parse(e.to_string()))?;
    }
    let mut settings = Settings::default();
    if let Some(tol) = &cli.tol {
        settings.tol = rational::parse(tol)
            .ok_or_else(|| JobError::Parse(format!("bad tolerance {tol:?}")))?;
    }
    if let Some(grid) = cli.grid {
        settings.grid = grid;
    }
    let cache = Cache::from_env();

    let (jobs, batch) = match (&cli.input, cli.command) {
        (Some(_), Some(_)) => {
            return Err(JobError::Parse(
                "give either --input or a subcommand".into(),
            ))
        }
        (None, None) => return Err(JobError::Parse("nothing to do; see --help".into())),
        (None, Some(cmd)) => (vec![job_from_command(cmd)], false),
        (Some(path), None) => {
            let text = fs::read_to_string(path)?;
            match serde_json::from_str::<Value>(&text)? {
                Value::Array(items) => {
                    let jobs = items
                        .into_iter()
                        .map(serde_json::from_value)
                        .collect::<Result<Vec<JobSpec>, _>>()?;
                    (jobs, true)
                }
                single => (vec![serde_json::from_value(single)?], false),
            }
        }
    };

    use rayon::prelude::*;
    let results: Vec<Result<Outcome, JobError>> = jobs
        .par_iter()
        .map(|j| run_job(j, &settings, cache.as_ref()))
        .collect();

    if !batch {
        let outcome = results.into_iter().next().expect("one job")?;
        if let Report::Verify(v) = &outcome.report {
            for c in &v.criteria {
                eprintln!("{}", acceptance::render(c));
            }
        }
        let value = serde_json::to_value(&outcome.report)?;
        let path = cli
            .output
            .clone()
            .or_else(|| jobs[0].output_path.as_ref().map(PathBuf::from));
        write_json(&value, path.as_ref())?;
        return Ok(outcome.exit_code);
    }

    let mut worst = exit::OK;
    let mut values = Vec::new();
    for (job, result) in jobs.iter().zip(results) {
        let (value, code) = match result {
            Ok(o) => (serde_json::to_value(&o.report)?, o.exit_code),
            Err(e) => (
                json!({ "error": e.to_string(), "exit_code": e.exit_code() }),
                e.exit_code(),
            ),
        };
        worst = worst.max(code);
        match &job.output_path {
            Some(p) => write_json(&value, Some(&PathBuf::from(p)))?,
            None => values.push(value),
        }
    }
    write_json(&Value::Array(values), cli.output.as_ref())?;
    Ok(worst)
}

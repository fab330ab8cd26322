use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use fflattice::analysis::{AnalysisOptions, DEFAULT_SAMPLES, DEFAULT_SEED};
use fflattice::export::{to_bracket, to_plain};
use fflattice::{analyze, basis, decode, minimal_vectors, scan, AnalysisReport, CurveSpec, Error};

const EXIT_INPUT: u8 = 2;
const EXIT_VIOLATION: u8 = 3;

#[derive(Parser)]
#[command(name = "fflattice", version, about = "Analyze lattices built from elliptic curves over prime fields")]
struct Cli {
    /// Emit JSON instead of the human summary.
    #[arg(long, global = true)]
    json: bool,

    /// Random decodes per curve (span and A_(n-1) each).
    #[arg(long, global = true, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,

    /// Master seed for the sampled covering check.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// Only run the named theorem check (repeatable).
    #[arg(long = "only", global = true)]
    only: Vec<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full analysis of one curve given as p:a3,a2,a1,a0.
    Analyze { spec: CurveSpec },
    /// Analyze every valid curve over the primes in [p_min, p_max].
    Scan {
        p_min: u64,
        p_max: u64,
        /// Keep only curves with K rational points, written n=K.
        #[arg(long, value_parser = parse_filter)]
        filter: Option<usize>,
    },
    /// Print the HNF basis or the minimal vectors as a text matrix.
    Export {
        spec: CurveSpec,
        what: What,
        format: Format,
    },
    /// Decode a real vector with zero coordinate sum, given as v0,...,v_(n-1).
    Decode {
        spec: CurveSpec,
        #[arg(allow_hyphen_values = true)]
        vector: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum What {
    Basis,
    Minimal,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Plain,
    Bracket,
}

fn parse_filter(s: &str) -> Result<usize, String> {
    s.strip_prefix("n=")
        .and_then(|k| k.parse().ok())
        .ok_or_else(|| format!("expected n=K, got `{s}`"))
}

fn parse_vector(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|_| format!("`{x}` is not a number")))
        .collect()
}

fn fail(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(if e.is_violation() { EXIT_VIOLATION } else { EXIT_INPUT })
}

fn print_json<T: serde::Serialize>(v: &T) {
    println!("{}", serde_json::to_string_pretty(v).expect("reports serialize"));
}

fn print_report(r: &AnalysisReport) {
    println!("curve        {}", r.curve);
    println!("places       n = {}, eps = {}", r.n, r.epsilon);
    let show = |name: &str, v: Option<String>| {
        println!("{name:<12} {}", v.unwrap_or_else(|| "n/a".into()));
    };
    show("d^2", r.d_squared.map(|x| x.to_string()));
    show(
        "minimal",
        r.minimal_count
            .map(|c| format!("{c} (formula {})", r.minimal_count_formula.map_or("n/a".into(), |f| f.to_string()))),
    );
    show("det^2", r.det_squared.map(|x| x.to_string()));
    show("index", r.index.map(|x| format!("{x} (h_F = {})", r.h_f)));
    show("density", r.packing_density.map(|x| format!("{x:.6}")));
    if let Some(c) = &r.covering {
        println!(
            "covering     bound {:.6}, observed {:.6}, A_(n-1) max {:.6} (seed {})",
            c.bound, c.max_observed, c.a_n1_max, c.seed
        );
    }
    for (id, v) in &r.verdicts {
        match r.failures.get(id) {
            Some(why) => println!("{id:<12} {}: {why}", v.as_str()),
            None => println!("{id:<12} {}", v.as_str()),
        }
    }
}

fn run(cli: Cli) -> ExitCode {
    let opts = AnalysisOptions {
        samples: cli.samples,
        seed: cli.seed,
        checks: (!cli.only.is_empty()).then(|| cli.only.clone()),
    };
    match cli.command {
        Command::Analyze { spec } => {
            let r = match analyze(&spec, &opts) {
                Ok(r) => r,
                Err(e) => return fail(&e),
            };
            if cli.json {
                print_json(&r);
            } else {
                print_report(&r);
            }
            if r.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_VIOLATION)
            }
        }
        Command::Scan { p_min, p_max, filter } => {
            let reports = match scan(p_min, p_max, filter, &opts) {
                Ok(r) => r,
                Err(e) => return fail(&e),
            };
            let failed = reports.iter().filter(|r| !r.passed()).count();
            if cli.json {
                print_json(&reports);
            } else {
                for r in &reports {
                    println!("{}", r.summary());
                }
                println!("{} curves, {} passed, {} failed", reports.len(), reports.len() - failed, failed);
            }
            if failed == 0 {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_VIOLATION)
            }
        }
        Command::Export { spec, what, format } => {
            let t = match spec.build() {
                Ok(c) => c.enumerate_places(),
                Err(e) => return fail(&e),
            };
            let rows = match what {
                What::Basis => basis(&t).map(|b| b.rows().clone()),
                What::Minimal => minimal_vectors(&t).map(|m| m.rows().map(<[i64]>::to_vec).collect()),
            };
            let rows = match rows {
                Ok(r) => r,
                Err(e) => return fail(&e),
            };
            let rows = rows.iter().map(Vec::as_slice);
            match format {
                Format::Plain => print!("{}", to_plain(t.n(), rows)),
                Format::Bracket => print!("{}", to_bracket(rows)),
            }
            ExitCode::SUCCESS
        }
        Command::Decode { spec, vector } => {
            let t = match spec.build() {
                Ok(c) => c.enumerate_places(),
                Err(e) => return fail(&e),
            };
            let vector = match parse_vector(&vector) {
                Ok(v) => v,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(EXIT_INPUT);
                }
            };
            let tr = match decode(&t, &vector) {
                Ok(tr) => tr,
                Err(e) => return fail(&e),
            };
            if cli.json {
                print_json(&tr);
            } else {
                println!("w1       {:?}", tr.w1);
                println!("S        {}", tr.s);
                println!("j        {}", tr.j);
                println!("w2       {:?}", tr.w2);
                println!("distance {:.6}", tr.distance);
                println!("bound    {:.6}", tr.bound);
            }
            ExitCode::SUCCESS
        }
    }
}

fn main() -> ExitCode {
    run(Cli::parse())
}

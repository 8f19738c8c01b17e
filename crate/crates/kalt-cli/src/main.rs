//! `kalt` — k-peak and k-alternating subsequence statistics of permutations.
//!
//! Every run echoes its full effective configuration (including the
//! resolved seed) so any output can be reproduced from its own header.
//! Results are independent of `--threads` by the library's seeding and
//! merging contracts; the thread count is therefore reported on stderr,
//! not in the reproducibility header.
//!
//! Exit status: 0 on success, 1 on usage errors, 2 on domain errors (the
//! stderr message carries the library's stable error name).

use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use clap::{error::ErrorKind, CommandFactory, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use kalt::exact;
use kalt::kstats::{
    alt_lengths, longest_alternating_dp, longest_alternating_fast, peak_count_fast,
    peak_profile_ref, valley_count,
};
use kalt::localstats::{choose_window, tv_bound};
use kalt::montecarlo::{empirical_kolmogorov, estimate, CltReport, Standardize, Stat};
use kalt::xalt::coupling_check;
use kalt::{Permutation, SeedSpec};

const DEFAULT_SEED: u64 = 42;

#[derive(Parser)]
#[command(
    name = "kalt",
    version,
    about = "k-peak and longest k-alternating subsequence statistics of random permutations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Worker threads for parallel commands (0 = all cores)
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    /// Master seed; fixed by default so runs are reproducible
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// Output format on stdout (csv is supported by `clt`)
    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Json)]
    out: OutFormat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StdMode {
    Sample,
    Formula,
}

#[derive(Subcommand)]
enum Command {
    /// Statistics of explicit permutations
    Stat {
        /// Permutation in one-line notation, e.g. "2,1,3"
        #[arg(long, conflicts_with = "file")]
        perm: Option<String>,
        /// File with one permutation per line
        #[arg(long)]
        file: Option<PathBuf>,
        /// Gap parameter
        #[arg(long)]
        k: usize,
    },
    /// Exact moments over all of S_n by exhaustive enumeration (n <= 12),
    /// next to the closed-form values
    Exact {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Include the pairwise peak probability table
        #[arg(long)]
        joint: bool,
    },
    /// Seeded parallel Monte Carlo estimate of a statistic
    Simulate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// peaks | as | zs | local_peaks | mismatch
        #[arg(long, default_value = "peaks")]
        stat: String,
        /// Window radius for local_peaks / mismatch
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
    },
    /// Empirical Kolmogorov distance of the standardized statistic to the
    /// standard normal
    Clt {
        #[arg(long, conflicts_with = "n_list")]
        n: Option<usize>,
        /// Comma-separated list of sizes, e.g. "100,1000,10000"
        #[arg(long, value_name = "LIST")]
        n_list: Option<String>,
        #[arg(long)]
        k: usize,
        /// as | peaks
        #[arg(long, default_value = "as")]
        stat: String,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, value_enum, default_value_t = StdMode::Sample)]
        standardize: StdMode,
        /// Window radius for the reported truncation bound
        /// (default: smallest m with bound <= n^-alpha)
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, default_value_t = 2.0)]
        alpha: f64,
    },
    /// Truncation bound 3n(k/n)^m and window selection
    Tv {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Evaluate the bound at this window radius
        /// (default: choose the smallest m with bound <= n^-alpha)
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, default_value_t = 2.0)]
        alpha: f64,
    },
    /// Continuous gap-alternating statistic vs its binomial coupling
    Xalt {
        #[arg(long)]
        n: usize,
        /// Gap threshold in (0, 1)
        #[arg(long)]
        x: f64,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
    },
    /// Time the reference algorithms against the fast paths
    Bench {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Permutations per timed algorithm
        #[arg(long, default_value_t = 100)]
        iters: u64,
    },
}

enum AppError {
    Usage(String),
    Domain(kalt::Error),
}

impl From<kalt::Error> for AppError {
    fn from(e: kalt::Error) -> Self {
        AppError::Domain(e)
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };

    let threads = cli.threads;
    let run = || dispatch(&cli);
    let result = if threads > 0 {
        eprintln!("threads: {threads}");
        match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
            Ok(pool) => pool.install(run),
            Err(e) => Err(AppError::Usage(format!("--threads: {e}"))),
        }
    } else {
        run()
    };

    match result {
        Ok(()) => {}
        Err(AppError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            let _ = Cli::command().print_help();
            std::process::exit(1);
        }
        Err(AppError::Domain(e)) => {
            eprintln!("error[{}]: {e}", e.name());
            std::process::exit(2);
        }
    }
}

fn print_json(doc: &Value) {
    println!("{doc}");
}

fn require(cond: bool, msg: &str) -> Result<(), AppError> {
    if cond {
        Ok(())
    } else {
        Err(AppError::Usage(msg.to_string()))
    }
}

fn dispatch(cli: &Cli) -> Result<(), AppError> {
    if cli.out == OutFormat::Csv && !matches!(cli.command, Command::Clt { .. }) {
        return Err(AppError::Usage(
            "--out csv is only supported by `clt`".into(),
        ));
    }
    match &cli.command {
        Command::Stat { perm, file, k } => run_stat(cli, perm.as_deref(), file.as_deref(), *k),
        Command::Exact { n, k, joint } => run_exact(cli, *n, *k, *joint),
        Command::Simulate {
            n,
            k,
            stat,
            m,
            samples,
        } => run_simulate(cli, *n, *k, stat, *m, *samples),
        Command::Clt {
            n,
            n_list,
            k,
            stat,
            samples,
            standardize,
            m,
            alpha,
        } => run_clt(
            cli,
            *n,
            n_list.as_deref(),
            *k,
            stat,
            *samples,
            *standardize,
            *m,
            *alpha,
        ),
        Command::Tv { n, k, m, alpha } => run_tv(cli, *n, *k, *m, *alpha),
        Command::Xalt { n, x, samples } => run_xalt(cli, *n, *x, *samples),
        Command::Bench { n, k, iters } => run_bench(cli, *n, *k, *iters),
    }
}

fn stat_payload(p: &Permutation, k: usize) -> Value {
    let a = alt_lengths(p, k);
    json!({
        "n": p.n(),
        "as": a.as_len,
        "zs": a.zs_len,
        "peaks": peak_count_fast(p, k),
        "valleys": valley_count(p, k),
        "residual": a.residual,
    })
}

fn run_stat(
    cli: &Cli,
    perm: Option<&str>,
    file: Option<&std::path::Path>,
    k: usize,
) -> Result<(), AppError> {
    require(k >= 1, "--k must be at least 1")?;
    match (perm, file) {
        (Some(text), None) => {
            let p = Permutation::parse(text)?;
            let config = json!({
                "command": "stat", "perm": text, "k": k, "seed": cli.seed, "out": "json",
            });
            let mut doc = stat_payload(&p, k);
            doc["config"] = config;
            print_json(&doc);
            Ok(())
        }
        (None, Some(path)) => {
            let content = std::fs::read_to_string(path)
                .map_err(|e| AppError::Usage(format!("--file {}: {e}", path.display())))?;
            let mut results = Vec::new();
            for (idx, line) in content.lines().enumerate() {
                if line.trim().is_empty() {
                    continue;
                }
                let p = Permutation::parse(line)?;
                let mut entry = stat_payload(&p, k);
                entry["line"] = json!(idx + 1);
                results.push(entry);
            }
            let doc = json!({
                "config": {
                    "command": "stat", "file": path.display().to_string(), "k": k,
                    "seed": cli.seed, "out": "json",
                },
                "results": results,
            });
            print_json(&doc);
            Ok(())
        }
        _ => Err(AppError::Usage(
            "stat needs exactly one of --perm or --file".into(),
        )),
    }
}

fn run_exact(cli: &Cli, n: usize, k: usize, joint: bool) -> Result<(), AppError> {
    require(n >= 1, "--n must be at least 1")?;
    require(k >= 1, "--k must be at least 1")?;
    let mut moments = exact::enumerate_moments(n, k)?;
    if !joint {
        moments.joint_peak_probs = None;
    }
    // the closed forms apply for 1 <= k <= n-1; outside, report null
    let formula = if k <= n.saturating_sub(1) {
        let lengths = exact::as_moment_formulas(n, k)?;
        json!({
            "e_peaks": exact::e_peaks_formula(n, k)?,
            "var_peaks": exact::var_peaks_formula(n, k)?,
            "lengths": lengths,
        })
    } else {
        Value::Null
    };
    let doc = json!({
        "config": { "command": "exact", "n": n, "k": k, "joint": joint, "seed": cli.seed, "out": "json" },
        "enumeration": moments,
        "formula": formula,
    });
    print_json(&doc);
    Ok(())
}

fn run_simulate(
    cli: &Cli,
    n: usize,
    k: usize,
    stat: &str,
    m: Option<usize>,
    samples: u64,
) -> Result<(), AppError> {
    require(n >= 1, "--n must be at least 1")?;
    require(k >= 1, "--k must be at least 1")?;
    let selector = Stat::parse(stat, m)?;
    let est = estimate(selector, n, k, samples, cli.seed)?;
    let mut config = json!({
        "command": "simulate", "n": n, "k": k, "stat": selector.name(),
        "samples": samples, "seed": cli.seed, "out": "json",
    });
    if let Some(m) = m {
        config["m"] = json!(m);
    }
    let doc = json!({ "config": config, "estimate": est });
    print_json(&doc);
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn run_clt(
    cli: &Cli,
    n: Option<usize>,
    n_list: Option<&str>,
    k: usize,
    stat: &str,
    samples: u64,
    standardize: StdMode,
    m: Option<usize>,
    alpha: f64,
) -> Result<(), AppError> {
    require(k >= 1, "--k must be at least 1")?;
    let sizes: Vec<usize> = match (n, n_list) {
        (Some(n), None) => vec![n],
        (None, Some(list)) => {
            let mut sizes = Vec::new();
            for token in list.split(',') {
                let v: usize = token
                    .trim()
                    .parse()
                    .map_err(|_| AppError::Usage(format!("--n-list: bad size {token:?}")))?;
                sizes.push(v);
            }
            require(!sizes.is_empty(), "--n-list must not be empty")?;
            sizes
        }
        _ => {
            return Err(AppError::Usage(
                "clt needs exactly one of --n or --n-list".into(),
            ))
        }
    };
    require(sizes.iter().all(|&n| n >= 1), "--n must be at least 1")?;
    let selector = Stat::parse(stat, None)?;
    let mode = match standardize {
        StdMode::Sample => Standardize::Sample,
        StdMode::Formula => Standardize::Formula,
    };

    let mut reports: Vec<CltReport> = Vec::new();
    for &size in &sizes {
        let window = match m {
            Some(m) => m,
            None => choose_window(size, k, alpha)?,
        };
        reports.push(empirical_kolmogorov(
            selector, size, k, samples, cli.seed, mode, window,
        )?);
    }

    let mut config = json!({
        "command": "clt", "k": k, "stat": selector.name(), "samples": samples,
        "standardize": mode.name(), "alpha": alpha, "seed": cli.seed,
    });
    if let Some(m) = m {
        config["m"] = json!(m);
    }
    if sizes.len() == 1 {
        config["n"] = json!(sizes[0]);
    } else {
        config["n_list"] = json!(sizes);
    }

    match cli.out {
        OutFormat::Json => {
            config["out"] = json!("json");
            let doc = if reports.len() == 1 {
                json!({ "config": config, "report": reports[0] })
            } else {
                json!({ "config": config, "series": reports })
            };
            print_json(&doc);
        }
        OutFormat::Csv => {
            config["out"] = json!("csv");
            eprintln!("config: {config}");
            let mut out = String::from("n,k,samples,d_k,tv_bound\n");
            for r in &reports {
                writeln!(
                    out,
                    "{},{},{},{},{}",
                    r.n, r.k, r.samples, r.d_k_empirical, r.tv_bound_value
                )
                .expect("string write");
            }
            print!("{out}");
        }
    }
    Ok(())
}

fn run_tv(cli: &Cli, n: usize, k: usize, m: Option<usize>, alpha: f64) -> Result<(), AppError> {
    require(n >= 1, "--n must be at least 1")?;
    require(k >= 1, "--k must be at least 1")?;
    let (window, chosen) = match m {
        Some(m) => (m, false),
        None => (choose_window(n, k, alpha)?, true),
    };
    let bound = tv_bound(n, k, window)?;
    let mut config = json!({
        "command": "tv", "n": n, "k": k, "m": window, "seed": cli.seed, "out": "json",
    });
    if chosen {
        config["alpha"] = json!(alpha);
    }
    let mut doc = json!({ "config": config, "m": window, "bound": bound });
    if chosen {
        doc["target"] = json!((n as f64).powf(-alpha));
    }
    print_json(&doc);
    Ok(())
}

fn run_xalt(cli: &Cli, n: usize, x: f64, samples: u64) -> Result<(), AppError> {
    require(n >= 1, "--n must be at least 1")?;
    let report = coupling_check(n, x, samples, cli.seed)?;
    let doc = json!({
        "config": {
            "command": "xalt", "n": n, "x": x, "samples": samples,
            "seed": cli.seed, "out": "json",
        },
        "report": report,
    });
    print_json(&doc);
    Ok(())
}

fn run_bench(cli: &Cli, n: usize, k: usize, iters: u64) -> Result<(), AppError> {
    require(n >= 1, "--n must be at least 1")?;
    require(k >= 1, "--k must be at least 1")?;
    require(iters >= 1, "--iters must be at least 1")?;
    let perms: Vec<Permutation> = (0..iters)
        .map(|i| Permutation::sample_uniform(n, SeedSpec::new(cli.seed, i)))
        .collect();
    let reals: Vec<Vec<f64>> = perms
        .iter()
        .map(|p| p.values().iter().map(|&v| v as f64).collect())
        .collect();

    let mut benches = Vec::new();
    let mut run_timed = |name: &str, mut f: Box<dyn FnMut() -> usize + '_>| {
        let start = Instant::now();
        let checksum = f();
        let seconds = start.elapsed().as_secs_f64();
        benches.push(json!({
            "algorithm": name,
            "n": n,
            "iterations": iters,
            "seconds": seconds,
            "perms_per_sec": iters as f64 / seconds.max(1e-12),
            "checksum": checksum,
        }));
        seconds
    };

    let peaks_fast = run_timed(
        "peak_count_fast",
        Box::new(|| perms.iter().map(|p| peak_count_fast(p, k)).sum()),
    );
    let peaks_ref = run_timed(
        "peak_profile_ref",
        Box::new(|| perms.iter().map(|p| peak_profile_ref(p, k).count).sum()),
    );
    let las_fast = run_timed(
        "longest_alternating_fast",
        Box::new(|| perms.iter().map(|p| longest_alternating_fast(p, k)).sum()),
    );
    let las_dp = run_timed(
        "longest_alternating_dp",
        Box::new(|| {
            reals
                .iter()
                .map(|r| longest_alternating_dp(r, k as f64).expect("nonempty"))
                .sum()
        }),
    );

    let doc = json!({
        "config": {
            "command": "bench", "n": n, "k": k, "iterations": iters,
            "seed": cli.seed, "out": "json",
        },
        "benches": benches,
        "speedup_peaks": peaks_ref / peaks_fast.max(1e-12),
        "speedup_alternating": las_dp / las_fast.max(1e-12),
    });
    print_json(&doc);
    Ok(())
}

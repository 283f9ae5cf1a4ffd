use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use weil_core::arith::prime_powers_up_to;
use weil_core::census::{census_weil_set, verify_census, Census, DEFAULT_Q};
use weil_core::classify::{classify_record, enumerate_order_divisible};
use weil_core::{known_non_jacobians, q_squared_closed_form, CensusOptions, Error, PrimePower};

mod output;

use output::{write_records, OutputFormat};

#[derive(Parser)]
#[command(
    name = "weil",
    version,
    about = "Weil polynomials of abelian surfaces over finite fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify one pair (a, b) over F_q.
    Classify {
        #[arg(long)]
        q: i64,
        #[arg(long, allow_hyphen_values = true)]
        a: i64,
        #[arg(long, allow_hyphen_values = true)]
        b: i64,
        #[arg(long, value_enum, default_value_t)]
        format: OutputFormat,
    },
    /// List the admissible classes over F_q with q^k dividing the group order.
    Enumerate {
        #[arg(long)]
        q: i64,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..))]
        k: u32,
        #[arg(long, value_enum, default_value_t)]
        format: OutputFormat,
    },
    /// Enumerate every genus-2 curve over F_q and record its (a, b).
    Census {
        #[arg(long)]
        q: i64,
        /// Worker threads (defaults to the number of CPUs).
        #[arg(long)]
        jobs: Option<usize>,
        /// Ignore an existing cache file.
        #[arg(long)]
        force: bool,
        /// Cache directory; WEIL_CACHE_DIR takes precedence.
        #[arg(long, default_value = "weil-cache")]
        cache: PathBuf,
        /// Also accept q = 4 and q = 13, which take much longer.
        #[arg(long)]
        allow_opt_in: bool,
    },
    /// Run the verification checks.
    Verify {
        /// Also run and verify the census for q in {2, 3, 5, 7, 9}.
        #[arg(long)]
        deep: bool,
        #[arg(long, default_value_t = 200)]
        qmax: i64,
        /// Worker threads for the census checks.
        #[arg(long)]
        jobs: Option<usize>,
    },
}

enum Failure {
    Verification,
    Usage,
    Census,
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verification => 1,
            Failure::Usage => 2,
            Failure::Census => 3,
        }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        eprintln!("error: {err}");
        match err {
            Error::VerificationFailure { .. }
            | Error::ParityViolation { .. }
            | Error::InadmissibleCount { .. } => Failure::Census,
            _ => Failure::Usage,
        }
    }
}

impl From<io::Error> for Failure {
    fn from(err: io::Error) -> Self {
        Error::Io(err).into()
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Classify { q, a, b, format } => classify(q, a, b, format),
        Command::Enumerate { q, k, format } => enumerate(q, k, format),
        Command::Census {
            q,
            jobs,
            force,
            cache,
            allow_opt_in,
        } => {
            let cache = std::env::var_os("WEIL_CACHE_DIR").map_or(cache, PathBuf::from);
            let options = CensusOptions {
                jobs,
                allow_opt_in,
                cache_dir: Some(cache),
                force,
            };
            census(q, &options)
        }
        Command::Verify { deep, qmax, jobs } => verify(deep, qmax, jobs),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => ExitCode::from(failure.code()),
    }
}

fn classify(q: i64, a: i64, b: i64, format: OutputFormat) -> Result<(), Failure> {
    let record = classify_record(q, a, b)?;
    write_records(&mut io::stdout().lock(), &[record], format)?;
    Ok(())
}

fn enumerate(q: i64, k: u32, format: OutputFormat) -> Result<(), Failure> {
    let q = PrimePower::new(q)?;
    let records = enumerate_order_divisible(q, k);
    write_records(&mut io::stdout().lock(), &records, format)?;
    Ok(())
}

fn census(q: i64, options: &CensusOptions) -> Result<(), Failure> {
    let census = Census::new(q, options.allow_opt_in)?;
    let start = Instant::now();
    let set = census_weil_set(q, options)?;
    let elapsed = start.elapsed();
    let report = verify_census(&census, &set)?;
    let mut out = io::stdout().lock();
    writeln!(out, "q: {}", set.q)?;
    writeln!(out, "models: {}", set.models)?;
    writeln!(out, "distinct (a,b): {}", set.classes.len())?;
    writeln!(out, "wall time: {:.3}s", elapsed.as_secs_f64())?;
    if let Some(dir) = &options.cache_dir {
        writeln!(
            out,
            "cache: {}",
            weil_core::CensusCache::new(dir).path(q).display()
        )?;
    }
    writeln!(
        out,
        "verification: set equality OK, N3 checked on {} curves",
        report.zeta_checked
    )?;
    let excluded = known_non_jacobians(set.q);
    if q == 2 {
        writeln!(out, "(1,0): {}", realized(set.contains(1, 0)))?;
    }
    for (a, b) in excluded {
        writeln!(out, "({a},{b}): {}", realized(set.contains(a, b)))?;
    }
    Ok(())
}

fn realized(yes: bool) -> &'static str {
    if yes {
        "realized"
    } else {
        "absent"
    }
}

/// Prints a verdict line; stops at the first failing check.
/// `Ok` carries the verdict text, `Err` the reason for failure.
fn check(name: &str, outcome: Result<String, String>) -> Result<(), Failure> {
    let mut out = io::stdout().lock();
    match outcome {
        Ok(detail) => {
            writeln!(out, "{name}: {detail}")?;
            Ok(())
        }
        Err(why) => {
            writeln!(out, "{name}: FAILED ({why})")?;
            Err(Failure::Verification)
        }
    }
}

fn verify(deep: bool, qmax: i64, jobs: Option<usize>) -> Result<(), Failure> {
    let qs = prime_powers_up_to(qmax);

    let outcome = qs
        .iter()
        .find_map(|&q| {
            let brute: Vec<(i64, i64)> = enumerate_order_divisible(q, 2)
                .iter()
                .map(|r| (r.a, r.b))
                .collect();
            (brute != q_squared_closed_form(q)).then(|| format!("mismatch at q={q}"))
        })
        .map_or(Ok("OK".to_string()), Err);
    check(&format!("order-divisibility q<={qmax}"), outcome)?;

    let jmax = qmax.min(27);
    let outcome = qs
        .iter()
        .filter(|q| q.q() <= jmax)
        .find_map(|&q| {
            let without: std::collections::BTreeSet<(i64, i64)> = enumerate_order_divisible(q, 2)
                .iter()
                .filter(|r| r.jacobian == Some(false))
                .map(|r| (r.a, r.b))
                .collect();
            (without != known_non_jacobians(q)).then(|| format!("mismatch at q={q}: {without:?}"))
        })
        .map_or(Ok("OK".to_string()), Err);
    check(&format!("jacobian exclusions q<={jmax}"), outcome)?;

    let mut deltas = Vec::new();
    let mut outcome = Ok("OK".to_string());
    for (q, want) in [(2, 28), (4, 128), (8, 544)] {
        let delta = weil_core::WeilCoeffs::new(PrimePower::new(q)?, -1, q).norm_discriminant();
        deltas.push(delta.to_string());
        if delta != want {
            outcome = Err(format!("q={q}: {delta}, expected {want}"));
        }
    }
    if outcome.is_ok() {
        outcome = Ok(format!("OK ({})", deltas.join(", ")));
    }
    check("delta spot values q in {2,4,8}", outcome)?;

    if deep {
        for q in DEFAULT_Q {
            let census = Census::new(q, false)?;
            let options = CensusOptions {
                jobs,
                ..Default::default()
            };
            let set = census_weil_set(q, &options)?;
            let outcome = match verify_census(&census, &set) {
                Ok(_) => {
                    let excluded = known_non_jacobians(census.q());
                    let mut detail = "set equality OK".to_string();
                    if !excluded.is_empty() {
                        let list: Vec<String> =
                            excluded.iter().map(|(a, b)| format!("({a},{b})")).collect();
                        detail.push_str(&format!(", {} excluded", list.join(" ")));
                    }
                    if excluded.iter().any(|&(a, b)| set.contains(a, b)) {
                        Err("a class without a Jacobian was realized".to_string())
                    } else {
                        Ok(detail)
                    }
                }
                Err(Error::VerificationFailure { failures, .. }) => Err(failures.join("; ")),
                Err(err) => return Err(err.into()),
            };
            check(&format!("census q={q}"), outcome)?;
        }
    }
    Ok(())
}

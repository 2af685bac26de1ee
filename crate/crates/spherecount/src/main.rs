//! Thin command-line surface over the library: counting, identity checks,
//! divisor-sum scans, closed-form constants, remainder scans, and coefficient
//! table dumps. All configuration is flags; results go to stdout or a file.

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use spherecount::analysis::{
    fit_main_constant, fit_remainder_exponent, format_sig12, geometric_grid, records_to_csv,
    records_to_json, scan_remainder, verify_lemma31, RemainderSlope,
};
use spherecount::characters::{omega, DirichletCharacter};
use spherecount::divisor_sums::{sum_beta, sum_sigma_squares, DivisorSumSpec};
use spherecount::lfunctions::{bkt_constant, c2_constant, skt_constant, HalfInteger};
use spherecount::theta::{count_sphere, count_sphere_fast, count_theta, r_table};
use spherecount::Error;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "spherecount", version, about = "Exact counts of rational points on spheres")]
struct Cli {
    /// Cap on internal parallelism (default: machine parallelism). Results
    /// are identical for any value.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Output encoding for tabular subcommands.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Output file (default: stdout).
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum CountPath {
    /// Fastest valid path for the dimension.
    Auto,
    /// Factorization-based closed forms (n in {2, 3}).
    Fast,
    /// Coefficient-table path (any n).
    Table,
}

#[derive(Subcommand)]
enum Cmd {
    /// Exact N(S^n; T), the number of lowest-terms rational points with
    /// denominator at most T.
    Count {
        #[arg(long)]
        n: u32,
        #[arg(long = "T", allow_negative_numbers = true)]
        t: f64,
        #[arg(long, value_enum, default_value_t = CountPath::Auto)]
        path: CountPath,
    },
    /// Exact theta-coefficient sum over square arguments up to T.
    ThetaSum {
        #[arg(long)]
        n: u32,
        #[arg(long = "T", allow_negative_numbers = true)]
        t: f64,
    },
    /// Both directions of the Möbius-inversion identity between sphere and
    /// theta counts; residuals must be exactly zero.
    IdentityCheck {
        #[arg(long)]
        n: u32,
        #[arg(long = "T", allow_negative_numbers = true)]
        t: f64,
    },
    /// Partial sums of twisted (skt) or modified (bkt) divisor sums against
    /// their closed-form main-term constants, over a geometric grid of T.
    DivisorScan {
        #[arg(long, value_enum)]
        kind: ScanKind,
        /// Integer exponent k (skt only).
        #[arg(long)]
        k: Option<u32>,
        /// Doubled half-integral weight 2k, odd (bkt only).
        #[arg(long)]
        weight2: Option<u32>,
        /// First character: "principal:N" or an integer m for omega_m (skt only).
        #[arg(long, default_value = "principal:1", allow_hyphen_values = true)]
        char1: String,
        #[arg(long, default_value = "principal:1", allow_hyphen_values = true)]
        char2: String,
        #[arg(long)]
        t_start: u64,
        #[arg(long)]
        t_stop: u64,
        #[arg(long, default_value_t = 2.0)]
        ratio: f64,
    },
    /// Closed-form main-term constants: the n = 2 pair and the divisor-sum
    /// constants for small parameters.
    Constants,
    /// Remainder scan for N(S^n; T) = c T^n + remainder over a geometric
    /// grid, with main-constant and remainder-exponent fits on stderr.
    RemainderScan {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        t_start: u64,
        #[arg(long)]
        t_stop: u64,
        #[arg(long, default_value_t = 2.0)]
        ratio: f64,
        /// Main-term constant; defaults to the closed form for n = 2 and a
        /// grid fit otherwise.
        #[arg(long, allow_negative_numbers = true)]
        constant: Option<f64>,
    },
    /// Dump the exact coefficient table r_n(0..=limit) as CSV "m,count".
    Rtable {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        limit: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ScanKind {
    Skt,
    Bkt,
}

#[derive(Serialize)]
struct DivisorScanRow {
    kind: &'static str,
    k: String,
    #[serde(rename = "T")]
    t: u64,
    sum: f64,
    normalized: f64,
    constant: f64,
    rel_error: f64,
}

#[derive(Serialize)]
struct ConstantRow {
    name: String,
    value: f64,
}

fn parse_character(spec: &str) -> Result<DirichletCharacter, CliError> {
    if let Some(rest) = spec.strip_prefix("principal:") {
        let n: u64 = rest
            .parse()
            .map_err(|_| CliError::Usage(format!("invalid principal modulus in '{spec}'")))?;
        return DirichletCharacter::principal(n).map_err(CliError::from);
    }
    let m: i64 = spec
        .parse()
        .map_err(|_| CliError::Usage(format!("character selector '{spec}' is neither an integer m nor 'principal:N'")))?;
    omega(m).map_err(CliError::from)
}

enum CliError {
    Usage(String),
    Compute(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExceeded { .. }
            | Error::TailBoundNotCertified { .. }
            | Error::FactorizationOutOfRange(_)
            | Error::Io(_) => CliError::Compute(e),
            other => CliError::Usage(other.to_string()),
        }
    }
}

fn check_bound(t: f64) -> Result<(), CliError> {
    if !(t >= 0.0) {
        return Err(CliError::Usage(format!("bound T = {t} must be nonnegative")));
    }
    Ok(())
}

struct Sink {
    target: Option<PathBuf>,
}

impl Sink {
    fn write(&self, content: &str) -> Result<(), CliError> {
        match &self.target {
            Some(path) => std::fs::write(path, content).map_err(|e| CliError::Compute(e.into())),
            None => {
                print!("{content}");
                Ok(())
            }
        }
    }
}

fn rows_to_csv<T: Serialize>(header: &str, rows: &[T], fields: impl Fn(&T) -> Vec<String>) -> String {
    let mut out = String::from(header);
    out.push('\n');
    for r in rows {
        out.push_str(&fields(r).join(","));
        out.push('\n');
    }
    out
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(threads) = cli.threads {
        if threads == 0 {
            return Err(CliError::Usage("--threads must be positive".into()));
        }
        // ignore the error if a pool already exists (e.g. repeated init in tests)
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    let sink = Sink {
        target: cli.output.clone(),
    };
    match cli.cmd {
        Cmd::Count { n, t, path } => {
            check_bound(t)?;
            let count = match path {
                CountPath::Fast => count_sphere_fast(n, t)?.value,
                CountPath::Table => count_sphere(n, t)?.value,
                CountPath::Auto => {
                    if n == 2 || n == 3 {
                        count_sphere_fast(n, t)?.value
                    } else {
                        count_sphere(n, t)?.value
                    }
                }
            };
            sink.write(&format!("{count}\n"))?;
        }
        Cmd::ThetaSum { n, t } => {
            check_bound(t)?;
            let sum = count_theta(n, t)?;
            sink.write(&format!("{sum}\n"))?;
        }
        Cmd::IdentityCheck { n, t } => {
            check_bound(t)?;
            let (r1, r2) = verify_lemma31(n, t)?;
            if r1 == 0 && r2 == 0 {
                sink.write("lemma31: exact (0,0)\n")?;
            } else {
                sink.write(&format!("lemma31: FAILED ({r1},{r2})\n"))?;
                return Err(CliError::Compute(Error::InvalidParameter(format!(
                    "identity residuals nonzero: ({r1},{r2})"
                ))));
            }
        }
        Cmd::DivisorScan {
            kind,
            k,
            weight2,
            char1,
            char2,
            t_start,
            t_stop,
            ratio,
        } => {
            let grid = geometric_grid(t_start, t_stop, ratio)?;
            let rows: Vec<DivisorScanRow> = match kind {
                ScanKind::Skt => {
                    let k = k.ok_or_else(|| CliError::Usage("skt scan requires --k".into()))?;
                    let chi1 = parse_character(&char1)?;
                    let chi2 = parse_character(&char2)?;
                    let constant = skt_constant(&chi1, &chi2, k)?;
                    let spec = DivisorSumSpec {
                        chi1,
                        chi2,
                        s: k,
                    };
                    grid.iter()
                        .map(|&t| -> Result<DivisorScanRow, Error> {
                            let sum = sum_sigma_squares(&spec, t)?;
                            let normalized = sum / (t as f64).powi(2 * k as i32 + 1);
                            Ok(DivisorScanRow {
                                kind: "skt",
                                k: k.to_string(),
                                t,
                                sum,
                                normalized,
                                constant,
                                rel_error: (normalized - constant).abs() / constant,
                            })
                        })
                        .collect::<Result<_, _>>()?
                }
                ScanKind::Bkt => {
                    let twice = weight2
                        .ok_or_else(|| CliError::Usage("bkt scan requires --weight2 (odd 2k)".into()))?;
                    let hk = HalfInteger::from_twice(twice)?;
                    let constant = bkt_constant(hk)?;
                    grid.iter()
                        .map(|&t| -> Result<DivisorScanRow, Error> {
                            let sum = sum_beta(hk, t)?;
                            let normalized = sum / (t as f64).powi(twice as i32 - 1);
                            Ok(DivisorScanRow {
                                kind: "bkt",
                                k: format!("{twice}/2"),
                                t,
                                sum,
                                normalized,
                                constant,
                                rel_error: (normalized - constant).abs() / constant,
                            })
                        })
                        .collect::<Result<_, _>>()?
                }
            };
            let body = match cli.format {
                Format::Csv => rows_to_csv("kind,k,T,sum,normalized,constant,rel_error", &rows, |r| {
                    vec![
                        r.kind.to_string(),
                        r.k.clone(),
                        r.t.to_string(),
                        format_sig12(r.sum),
                        format_sig12(r.normalized),
                        format_sig12(r.constant),
                        format_sig12(r.rel_error),
                    ]
                }),
                Format::Json => serde_json::to_string_pretty(&rows).unwrap() + "\n",
            };
            sink.write(&body)?;
        }
        Cmd::Constants => {
            let c2 = c2_constant()?;
            let one = DirichletCharacter::principal(1).unwrap();
            let mut rows = vec![
                ConstantRow {
                    name: "c2_star".into(),
                    value: c2.c2_star,
                },
                ConstantRow {
                    name: "c2".into(),
                    value: c2.c2,
                },
            ];
            for k in 1..=3u32 {
                rows.push(ConstantRow {
                    name: format!("skt(trivial,trivial,k={k})"),
                    value: skt_constant(&one, &one, k)?,
                });
            }
            for twice in [5u32, 7, 9] {
                let hk = HalfInteger::from_twice(twice).unwrap();
                rows.push(ConstantRow {
                    name: format!("bkt(k={twice}/2)"),
                    value: bkt_constant(hk)?,
                });
            }
            let body = match cli.format {
                Format::Csv => rows_to_csv("name,value", &rows, |r| {
                    vec![r.name.clone(), format_sig12(r.value)]
                }),
                Format::Json => serde_json::to_string_pretty(&rows).unwrap() + "\n",
            };
            sink.write(&body)?;
        }
        Cmd::RemainderScan {
            n,
            t_start,
            t_stop,
            ratio,
            constant,
        } => {
            let grid = geometric_grid(t_start, t_stop, ratio)?;
            let constant = match constant {
                Some(c) => Some(c),
                None if n == 2 => Some(c2_constant()?.c2),
                None => None,
            };
            let records = scan_remainder(n, &grid, constant)?;
            match fit_main_constant(n, &grid) {
                Ok(fit) => eprintln!(
                    "fit: c = {}, b = {}, rms residual = {}",
                    format_sig12(fit.constant),
                    format_sig12(fit.secondary),
                    format_sig12(fit.residual_norm)
                ),
                Err(e) => eprintln!("fit: unavailable ({e})"),
            }
            match fit_remainder_exponent(&records) {
                Ok(RemainderSlope::Slope(s)) => {
                    eprintln!("remainder exponent: {}", format_sig12(s))
                }
                Ok(RemainderSlope::Exact) => eprintln!("remainder exponent: exact (all zero)"),
                Err(e) => eprintln!("remainder exponent: unavailable ({e})"),
            }
            let body = match cli.format {
                Format::Csv => records_to_csv(&records),
                Format::Json => records_to_json(&records) + "\n",
            };
            sink.write(&body)?;
        }
        Cmd::Rtable { n, limit } => {
            let table = r_table(n, limit)?;
            sink.write(&table.to_csv())?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Compute(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

//! Command-line front end: config I/O, order evaluation, table generation,
//! comparisons, lifts, rotation numbers, extension orders, experiments and
//! SVG rendering.  Exit codes: 0 success, 1 domain error, 2 usage error.

use clap::{Parser, Subcommand};
use corders::extensions::{chain_report, ext_compare, standard_klift_realization, ExtElement};
use corders::harness::{
    run_basepoint_walk, run_singleton_neighborhood, run_stability, safe_margin,
};
use corders::orders::{compare_on_ball, OrderTable};
use corders::pingpong::{
    eval_triple, klift, klift_is_realization, preset_by_name, preset_schottky, realize_pl,
    PingPongConfig,
};
use corders::render::render_svg;
use corders::{ProjectivePoint, ReducedWord};
use num_rational::BigRational;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

#[derive(Parser)]
#[command(
    name = "corders",
    version,
    about = "Exact circular and left orders on free groups from ping-pong data"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check a configuration against the schema and order-compatibility rules.
    Validate {
        /// Config file path or preset:NAME (schottky<N>, three_boundary,
        /// klift_schottky<N>_<K>).
        config: String,
    },
    /// Evaluate the circular order on a word triple.
    Eval {
        config: String,
        w1: String,
        w2: String,
        w3: String,
    },
    /// Materialize a ball order table as CSV.
    Table {
        config: String,
        #[arg(long, default_value_t = 2)]
        radius: u32,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare two configurations' orders on a ball.
    Compare {
        config1: String,
        config2: String,
        #[arg(long, default_value_t = 2)]
        radius: u32,
    },
    /// Build the standard k-lift of a connected-domain configuration.
    Lift {
        config: String,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Certified rotation number of a word's lift on the k-cover of the
    /// rank-2n Schottky action.
    Rot {
        word: String,
        #[arg(long, default_value_t = 1)]
        n: u32,
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 64)]
        max_denominator: i64,
    },
    /// Compare two extension elements (word:m) in the k-lift left order.
    ExtCompare {
        e1: String,
        e2: String,
        #[arg(long, default_value_t = 1)]
        n: u32,
        #[arg(long)]
        k: u32,
    },
    /// Verified commutator-power chain for the k-lift order on F2 x Z.
    Chain {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render a configuration as SVG.
    Render {
        config: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run an experiment: singleton | stability | basepoint-walk.
    Experiment {
        name: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        trials: u32,
        #[arg(long, default_value_t = 3)]
        radius: u32,
        /// Rational margin (p/q) for the stability experiment; defaults to
        /// the certified safe bound.
        #[arg(long)]
        margin: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum AppError {
    Usage(String),
    Domain(String),
}

impl<E: std::error::Error> From<E> for AppError {
    fn from(e: E) -> Self {
        AppError::Domain(e.to_string())
    }
}

const TABLE_RADIUS_CAP: u32 = 4;

fn load_config(spec: &str) -> Result<PingPongConfig, AppError> {
    let cfg = if let Some(name) = spec.strip_prefix("preset:") {
        preset_by_name(name)
            .ok_or_else(|| AppError::Usage(format!("unknown preset {name:?}")))?
    } else {
        let text = std::fs::read_to_string(spec)
            .map_err(|e| AppError::Usage(format!("cannot read {spec}: {e}")))?;
        serde_json::from_str(&text)
            .map_err(|e| AppError::Usage(format!("cannot parse {spec}: {e}")))?
    };
    let report = cfg.validate();
    if !report.ok() {
        return Err(AppError::Domain(format!("invalid config {spec}:\n{report}")));
    }
    Ok(cfg)
}

fn parse_word(cfg: &PingPongConfig, s: &str) -> Result<ReducedWord, AppError> {
    ReducedWord::parse(cfg.alphabet(), s).map_err(|e| AppError::Usage(e.to_string()))
}

fn fmt_value(v: i8) -> &'static str {
    match v {
        1 => "+1",
        0 => "0",
        _ => "-1",
    }
}

/// Write via a temp file in the same directory, then rename.
fn atomic_write(path: &Path, bytes: &[u8]) -> Result<(), AppError> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

fn run(cli: Cli) -> Result<(), AppError> {
    match cli.cmd {
        Cmd::Validate { config } => {
            let cfg = load_config(&config)?;
            println!("{}", cfg.validate());
        }
        Cmd::Eval { config, w1, w2, w3 } => {
            let cfg = load_config(&config)?;
            let (u, v, w) = (
                parse_word(&cfg, &w1)?,
                parse_word(&cfg, &w2)?,
                parse_word(&cfg, &w3)?,
            );
            println!("{}", fmt_value(eval_triple(&cfg, &u, &v, &w)));
        }
        Cmd::Table {
            config,
            radius,
            out,
        } => {
            let cfg = load_config(&config)?;
            if radius > TABLE_RADIUS_CAP {
                let n = corders::freegroup::ball_size(cfg.alphabet().rank(), radius);
                return Err(AppError::Domain(format!(
                    "radius {radius} exceeds the cap {TABLE_RADIUS_CAP} \
                     (estimated {} rows)",
                    n * n * n
                )));
            }
            let table = OrderTable::materialize(&cfg, radius)?;
            let mut bytes = Vec::new();
            table.write_csv(&mut bytes)?;
            atomic_write(&out, &bytes)?;
            println!("wrote {} rows to {}", table.len().pow(3), out.display());
        }
        Cmd::Compare {
            config1,
            config2,
            radius,
        } => {
            let c1 = load_config(&config1)?;
            let c2 = load_config(&config2)?;
            match compare_on_ball(&c1, &c2, radius)? {
                None => println!("agree on ball {radius}"),
                Some((u, v, w, x, y)) => println!(
                    "differ at ({u}, {v}, {w}): {} vs {}",
                    fmt_value(x),
                    fmt_value(y)
                ),
            }
        }
        Cmd::Lift { config, k, out } => {
            let cfg = load_config(&config)?;
            let lifted = klift(&cfg, k)?;
            let n = cfg.alphabet().rank();
            if n % 2 == 0 {
                println!(
                    "k-lift criterion (rank {n} Schottky family): {}",
                    klift_is_realization(n / 2, k)
                );
            }
            let json = serde_json::to_string_pretty(&lifted)
                .map_err(|e| AppError::Domain(e.to_string()))?;
            match out {
                Some(path) => {
                    atomic_write(&path, json.as_bytes())?;
                    println!("wrote {}", path.display());
                }
                None => println!("{json}"),
            }
        }
        Cmd::Rot {
            word,
            n,
            k,
            max_denominator,
        } => {
            let realization = standard_klift_realization(n, k)?;
            let w = ReducedWord::parse(realization.base().alphabet(), &word)
                .map_err(|e| AppError::Usage(e.to_string()))?;
            let f = realization.word_self_map(&w);
            let rot = corders::circle::rotation_number(
                &f,
                realization.base().basepoint(),
                max_denominator,
                &realization.sample_points(),
            )?;
            println!("{rot}");
        }
        Cmd::ExtCompare { e1, e2, n, k } => {
            let realization = standard_klift_realization(n, k)?;
            let alphabet = realization.base().alphabet();
            let a = ExtElement::parse(alphabet, &e1).map_err(|e| AppError::Usage(e.to_string()))?;
            let b = ExtElement::parse(alphabet, &e2).map_err(|e| AppError::Usage(e.to_string()))?;
            println!("{}", fmt_value(ext_compare(&realization, &a, &b)?));
        }
        Cmd::Chain { k, out } => {
            if k < 2 {
                return Err(AppError::Usage("chain requires --k >= 2".into()));
            }
            let report = chain_report(k)?;
            println!("{report}");
            if let Some(path) = out {
                let json = serde_json::to_string_pretty(&report)
                    .map_err(|e| AppError::Domain(e.to_string()))?;
                atomic_write(&path, json.as_bytes())?;
            }
        }
        Cmd::Render { config, out } => {
            let cfg = load_config(&config)?;
            atomic_write(&out, render_svg(&cfg).as_bytes())?;
            println!("wrote {}", out.display());
        }
        Cmd::Experiment {
            name,
            seed,
            trials,
            radius,
            margin,
            out,
        } => {
            let report = match name.as_str() {
                "singleton" => run_singleton_neighborhood(seed, trials, radius)?,
                "stability" => {
                    let cfg = preset_schottky(1);
                    let action = realize_pl(&cfg)?;
                    let bound = safe_margin(&action).unwrap_or_default();
                    let margin = match margin {
                        Some(m) => BigRational::from_str(&m)
                            .map_err(|e| AppError::Usage(format!("bad margin {m:?}: {e}")))?,
                        None => bound,
                    };
                    run_stability(&cfg, &margin, seed, trials, radius)?
                }
                "basepoint-walk" => {
                    let cfg = preset_schottky(1);
                    let action = realize_pl(&cfg)?;
                    let basepoints = [
                        ProjectivePoint::from_int(0),
                        ProjectivePoint::frac(1, 4),
                        ProjectivePoint::frac(1, 2),
                    ];
                    run_basepoint_walk(&cfg, &action, &basepoints, radius)?
                }
                other => {
                    return Err(AppError::Usage(format!(
                        "unknown experiment {other:?} (singleton | stability | basepoint-walk)"
                    )))
                }
            };
            print!("{report}");
            if let Some(path) = out {
                let json = serde_json::to_string_pretty(&report)
                    .map_err(|e| AppError::Domain(e.to_string()))?;
                atomic_write(&path, json.as_bytes())?;
            }
            if !report.passed() {
                return Err(AppError::Domain(format!(
                    "experiment {} recorded {} failing trial(s)",
                    report.spec.id, report.failures
                )));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(AppError::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(AppError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
    }
}

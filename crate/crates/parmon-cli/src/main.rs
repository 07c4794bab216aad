//! `parmon` — batch experiments over partition monoids.
//!
//! Exit codes: 0 success or affirmative verdict, 1 negative mathematical
//! verdict, 2 input error, 3 horizon or cap exceeded.  `PARMON_THREADS`
//! caps the internal worker pool.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use parmon::cardinal::Cardinal;
use parmon::classifier::{classify_mod_e, classify_mod_s, SidedProfile};
use parmon::generation::{
    closure, evaluate_word, relative_rank, word_length_stats, BaseSet, GenerationError, RankMode,
    DEFAULT_CLOSURE_CAP,
};
use parmon::infinite::factorize::{factorize, sandwich_product};
use parmon::infinite::sierpinski::{evaluate_word as evaluate_sierpinski, sierpinski_embed, sierpinski_word};
use parmon::infinite::{restrict_to_window, FinitaryPartition, InfiniteError};
use parmon::oracle;
use parmon::partition::Partition;

const EXIT_NEGATIVE: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_HORIZON: u8 = 3;

#[derive(Parser)]
#[command(name = "parmon", about = "Exact computation over partition monoids", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum BaseArg {
    S,
    E,
    Es,
}

impl From<BaseArg> for BaseSet {
    fn from(b: BaseArg) -> BaseSet {
        match b {
            BaseArg::S => BaseSet::SymmetricGroup,
            BaseArg::E => BaseSet::Idempotents,
            BaseArg::Es => BaseSet::IdempotentsAndUnits,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModArg {
    /// The symmetric-group criterion.
    S,
    /// The idempotent criterion (equivalently idempotents plus units).
    E,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Sampled,
}

#[derive(Subcommand)]
enum Command {
    /// Compose two partitions and print the canonical product.
    Compose {
        left: PathBuf,
        right: PathBuf,
        /// Cross-check against the graph-walk composition oracle.
        #[arg(long)]
        verify: bool,
    },
    /// Report every structural parameter of one partition.
    Params { input: PathBuf },
    /// Saturate the subsemigroup generated by a list of partitions.
    Closure {
        /// JSON file holding an array of partitions.
        #[arg(long)]
        gens: PathBuf,
        #[arg(long, default_value_t = DEFAULT_CLOSURE_CAP)]
        cap: usize,
        /// Record shortest words over the generators.
        #[arg(long)]
        words: bool,
        /// Write JSON lines here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Re-evaluate every recorded word against its element.
        #[arg(long)]
        verify: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Relative rank of P_n modulo a named base set.
    Relrank {
        #[arg(long, value_enum)]
        base: BaseArg,
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum, default_value = "exhaustive")]
        mode: ModeArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Re-check the certificate from scratch.
        #[arg(long)]
        verify: bool,
    },
    /// Decide whether two profiled partitions generate P_X over a base.
    Classify {
        #[arg(long)]
        alpha: PathBuf,
        #[arg(long)]
        beta: PathBuf,
        #[arg(long, value_enum, default_value = "s")]
        base: ModArg,
        /// Also check the verdict against its dual form.
        #[arg(long)]
        verify: bool,
    },
    /// Evaluate the two-generator embedding word against its target.
    Sierpinski {
        /// JSON file holding an array of finitary targets.
        #[arg(long)]
        targets: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 64)]
        window: u32,
        #[arg(long, default_value_t = 10_000)]
        fuel: usize,
    },
    /// Factorize a finitary partition through the canonical pair.
    Factorize {
        #[arg(long)]
        gamma: PathBuf,
        #[arg(long, default_value_t = 64)]
        window: u32,
        #[arg(long, default_value_t = 10_000)]
        fuel: usize,
    },
}

enum CliError {
    Input(String),
    Horizon(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) | CliError::Horizon(m) => f.write_str(m),
        }
    }
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Horizon(_) => EXIT_HORIZON,
        }
    }
}

fn input_err(e: impl fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}

fn infinite_err(e: InfiniteError) -> CliError {
    match e {
        InfiniteError::HorizonExceeded { .. } => CliError::Horizon(e.to_string()),
        other => CliError::Input(other.to_string()),
    }
}

fn read_to_string(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| input_err(format!("{}: {e}", path.display())))
}

/// Partition files hold either the JSON block list or the one-line text form.
fn read_partition(path: &Path) -> Result<Partition, CliError> {
    let text = read_to_string(path)?;
    let trimmed = text.trim();
    let parsed = if trimmed.starts_with('[') {
        Partition::parse_json(trimmed)
    } else {
        Partition::parse_line(trimmed)
    };
    parsed.map_err(|e| input_err(format!("{}: {e}", path.display())))
}

fn read_partition_list(path: &Path) -> Result<Vec<Partition>, CliError> {
    let text = read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| input_err(format!("{}: {e}", path.display())))
}

fn read_profile(path: &Path) -> Result<SidedProfile, CliError> {
    let text = read_to_string(path)?;
    SidedProfile::from_json(&text).map_err(|e| input_err(format!("{}: {e}", path.display())))
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("PARMON_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
        }
    }
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}

fn run(command: Command) -> Result<u8, CliError> {
    match command {
        Command::Compose { left, right, verify } => {
            let a = read_partition(&left)?;
            let b = read_partition(&right)?;
            let product = a.compose(&b).map_err(input_err)?;
            if verify {
                let check = oracle::compose_by_graph(&a, &b);
                if check != product {
                    return Err(CliError::Input("oracle mismatch in composition".into()));
                }
                println!("{}", json!({ "product": product, "verify": "pass" }));
            } else {
                println!("{}", product.to_json_string());
            }
            Ok(0)
        }
        Command::Params { input } => {
            let p = read_partition(&input)?;
            let mus = [1u64, 2, 3];
            let table = |f: &dyn Fn(&Cardinal) -> u64| -> serde_json::Value {
                mus.iter()
                    .map(|&m| (m.to_string(), json!(f(&Cardinal::Finite(m)))))
                    .collect::<serde_json::Map<String, serde_json::Value>>()
                    .into()
            };
            // closures can't be coerced directly in the array, spell them out
            let k = table(&|m| p.param_k(m));
            let kstar = table(&|m| p.param_kstar(m));
            let d = table(&|m| p.param_d(m));
            let dstar = table(&|m| p.param_dstar(m));
            let report = json!({
                "degree": p.degree(),
                "dom": p.dom(),
                "codom": p.codom(),
                "kerClasses": p.ker().classes(),
                "cokerClasses": p.coker().classes(),
                "k": k,
                "kStar": kstar,
                "d": d,
                "dStar": dstar,
                "dTotal": p.param_d_total(),
                "dStarTotal": p.param_dstar_total(),
                "s": p.singularity(),
                "sStar": p.cosingularity(),
                "sh": p.shift(),
                "warp": p.warp(),
                "inL": p.in_l(),
                "inR": p.in_r(),
                "unit": p.is_unit(),
                "idempotent": p.is_idempotent(),
                "finitary": p.is_finitary(),
            });
            println!("{report}");
            Ok(0)
        }
        Command::Closure { gens, cap, words, output, verify, seed } => {
            let generators = read_partition_list(&gens)?;
            let result = closure(&generators, cap, words || verify).map_err(input_err)?;
            if verify {
                let ws = result.words.as_ref().expect("recorded");
                for (i, element) in result.elements.iter().enumerate() {
                    let evaluated = evaluate_word(&ws[i], &generators).map_err(input_err)?;
                    if &evaluated != element {
                        return Err(CliError::Input(format!("word {i} does not reproduce its element")));
                    }
                }
            }
            let mut header = json!({
                "degree": result.degree,
                "generators": result.generators,
                "saturated": result.saturated,
                "count": result.elements.len(),
                "seed": seed,
                "verified": verify,
            });
            if result.words.is_some() {
                let stats = word_length_stats(&result).map_err(input_err)?;
                header["maxWordLength"] = json!(stats.max);
                header["wordLengthHistogram"] = json!(stats
                    .histogram
                    .iter()
                    .map(|&(len, count)| (len.to_string(), json!(count)))
                    .collect::<serde_json::Map<String, serde_json::Value>>());
            }
            let mut lines = String::new();
            lines.push_str(&header.to_string());
            lines.push('\n');
            for e in &result.elements {
                lines.push_str(&e.to_json_string());
                lines.push('\n');
            }
            match output {
                Some(path) => {
                    let mut file = fs::File::create(&path)
                        .map_err(|e| input_err(format!("{}: {e}", path.display())))?;
                    file.write_all(lines.as_bytes()).map_err(input_err)?;
                }
                None => print!("{lines}"),
            }
            Ok(if result.saturated { 0 } else { EXIT_HORIZON })
        }
        Command::Relrank { base, n, mode, seed, verify } => {
            let mode = match mode {
                ModeArg::Exhaustive => RankMode::Exhaustive,
                ModeArg::Sampled => RankMode::Sampled { seed },
            };
            let base: BaseSet = base.into();
            let cert = relative_rank(base, n, mode).map_err(|e| match e {
                GenerationError::RankSearchExhausted(_) => CliError::Horizon(e.to_string()),
                other => input_err(other),
            })?;
            let verified = if verify { Some(cert.verify().map_err(input_err)?) } else { None };
            if verified == Some(false) {
                return Err(CliError::Input("certificate failed re-verification".into()));
            }
            println!(
                "{}",
                json!({
                    "base": cert.base,
                    "n": cert.degree,
                    "rank": cert.rank,
                    "witness": cert.witness,
                    "exhaustiveBelow": cert.exhaustive_below,
                    "verified": verified,
                })
            );
            Ok(0)
        }
        Command::Classify { alpha, beta, base, verify } => {
            let p = read_profile(&alpha)?;
            let q = read_profile(&beta)?;
            let run = |x: &SidedProfile, y: &SidedProfile| match base {
                ModArg::S => classify_mod_s(x, y),
                ModArg::E => classify_mod_e(x, y),
            };
            let verdict = run(&p, &q).map_err(input_err)?;
            if verify {
                let dual = run(&q.dualize(), &p.dualize()).map_err(input_err)?;
                if dual.generates != verdict.generates {
                    return Err(CliError::Input("verdict differs from its dual form".into()));
                }
            }
            println!("{}", verdict.to_json());
            Ok(if verdict.generates { 0 } else { EXIT_NEGATIVE })
        }
        Command::Sierpinski { targets, n, window, fuel } => {
            let list = read_partition_list(&targets)?;
            if n == 0 || n > list.len() {
                return Err(CliError::Input(format!(
                    "target index {n} out of range (1..={})",
                    list.len()
                )));
            }
            let finitary: Vec<FinitaryPartition> =
                list.iter().map(FinitaryPartition::from_finite).collect();
            let (beta, gamma) = sierpinski_embed(&finitary);
            let word = sierpinski_word(n);
            let evaluated =
                evaluate_sierpinski(&word, &beta, &gamma, fuel, window).map_err(infinite_err)?;
            let expected = finitary[n - 1].restrict_to_window(window);
            let equal = evaluated == expected;
            println!(
                "{}",
                json!({
                    "n": n,
                    "word": word.iter().map(|l| l.symbol()).collect::<Vec<_>>(),
                    "wordLength": word.len(),
                    "window": window,
                    "product": evaluated,
                    "equalOnWindow": equal,
                })
            );
            Ok(if equal { 0 } else { EXIT_NEGATIVE })
        }
        Command::Factorize { gamma, window, fuel } => {
            let g = FinitaryPartition::from_finite(&read_partition(&gamma)?);
            let pi = factorize(&g);
            let product = sandwich_product(&pi, fuel);
            let restricted = restrict_to_window(&product, window).map_err(infinite_err)?;
            let expected = g.restrict_to_window(window);
            let matches = restricted == expected;
            println!(
                "{}",
                json!({
                    "window": window,
                    "product": restricted,
                    "anchors": pi.anchor_count(),
                    "matches": matches,
                })
            );
            Ok(if matches { 0 } else { EXIT_NEGATIVE })
        }
    }
}

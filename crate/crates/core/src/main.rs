use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;

use geodesic_audit::audit::{audit, AuditError, AuditParams, CheckKind, CheckStatus};
use geodesic_audit::betti::{resonance_check, BettiError, ManifoldClass, OmegaVariant};
use geodesic_audit::cij::{
    claim3_check, find_paired_tuple, find_tuple, Admissibility, CijError, SearchParams, Strategy,
};
use geodesic_audit::config::{parse_config, ConfigError, GeodesicConfig};
use geodesic_audit::field::parse_rational;
use geodesic_audit::morse::{morse_identity_check, morse_numbers};
use geodesic_audit::normal_form::ValidationMode;
use geodesic_audit::report::{
    emit_report, CijReport, GeodesicClass, IndexRow, MorseReport, OutputFormat, Report, ResonanceRow,
};
use geodesic_audit::synth::{synthesize_config, SynthParams};

const EXIT_OTHER: u8 = 1;
const EXIT_STRUCTURAL: u8 = 2;
const EXIT_INVALID: u8 = 3;
const EXIT_EXHAUSTED: u8 = 4;

#[derive(Parser)]
#[command(name = "geodesic-audit", version, about = "Exact index iteration and Morse audits for closed geodesic configurations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Input {
    /// Configuration file; standard input when absent.
    config: Option<PathBuf>,
    #[arg(long, default_value = "text")]
    output: OutputFormat,
}

#[derive(Args, Clone)]
struct SearchArgs {
    /// Exact rational, e.g. 3/100.
    #[arg(long)]
    epsilon: String,
    #[arg(long = "max-N", alias = "max-n", default_value_t = 1_000_000)]
    max_n: u64,
    /// `auto` or a positive integer.
    #[arg(long, default_value = "auto")]
    m0: String,
    #[arg(long, default_value = "auto", value_parser = ["auto", "scan", "three-gap"])]
    strategy: String,
    /// Iterates checked for parity and the window bounds.
    #[arg(long, default_value_t = 200)]
    window: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Betti numbers of the free loop space.
    Betti {
        #[arg(long)]
        d: u64,
        #[arg(long)]
        n: u64,
        #[arg(long = "max-k")]
        max_k: u64,
        #[arg(long)]
        literal_omega: bool,
        #[arg(long, default_value = "text")]
        output: OutputFormat,
    },
    /// Block counts, mean index and elliptic class of every geodesic.
    Classify(Input),
    /// Index and nullity of iterates.
    Iterate {
        #[command(flatten)]
        input: Input,
        #[arg(long = "max-m", default_value_t = 20)]
        max_m: u64,
        /// Restrict to one geodesic.
        #[arg(long)]
        geodesic: Option<String>,
    },
    /// Exact resonance identity.
    Resonance {
        #[command(flatten)]
        input: Input,
        /// Diagnostic tolerance for near misses.
        #[arg(long, default_value = "1/1000000")]
        tolerance: String,
    },
    /// Morse numbers against Betti numbers.
    Morse {
        #[command(flatten)]
        input: Input,
        #[arg(long = "max-p", default_value_t = geodesic_audit::audit::FALLBACK_CUTOFF)]
        max_p: u64,
    },
    /// Common index jump tuple search.
    Cij {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long)]
        pair: bool,
        /// Accept the first fractional candidate without relation checks.
        #[arg(long)]
        fractional_only: bool,
    },
    /// Full audit of a configuration.
    Audit {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        search: SearchArgs,
        /// Morse cutoff; 2N+1 by default.
        #[arg(long = "max-p")]
        max_p: Option<u64>,
    },
    /// Random configuration satisfying the resonance identity.
    Synthesize {
        #[arg(long)]
        d: u64,
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20_000)]
        attempts: u64,
        /// Morse cutoff used for ranking.
        #[arg(long, default_value_t = 60)]
        window: u64,
        #[arg(long, default_value = "text")]
        output: OutputFormat,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure { code, message: message.into() }
    }
}

impl From<BettiError> for Failure {
    fn from(e: BettiError) -> Self {
        Failure::new(EXIT_INVALID, e.to_string())
    }
}

fn load(path: &Option<PathBuf>) -> Result<GeodesicConfig, Failure> {
    let text = match path {
        Some(p) => std::fs::read_to_string(p).map_err(|e| Failure::new(EXIT_INVALID, format!("{}: {e}", p.display())))?,
        None => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(|e| Failure::new(EXIT_INVALID, format!("stdin: {e}")))?;
            s
        }
    };
    parse_config(&text).map_err(|e: ConfigError| Failure::new(EXIT_INVALID, e.to_string()))
}

fn rational(flag: &str, s: &str) -> Result<BigRational, Failure> {
    parse_rational(s).map_err(|e| Failure::new(EXIT_INVALID, format!("--{flag}: {e}")))
}

fn search_params(args: &SearchArgs) -> Result<SearchParams, Failure> {
    let mut p = SearchParams::new(rational("epsilon", &args.epsilon)?, args.max_n);
    p.m0 = match args.m0.as_str() {
        "auto" => None,
        k => Some(k.parse().map_err(|_| Failure::new(EXIT_INVALID, format!("--m0: expected auto or an integer, got {k:?}")))?),
    };
    p.strategy = match args.strategy.as_str() {
        "scan" => Strategy::Scan,
        "three-gap" => Strategy::ThreeGap,
        _ => Strategy::Auto,
    };
    p.window = args.window;
    Ok(p)
}

fn search_failure(e: CijError) -> Failure {
    let code = match e {
        CijError::Exhausted { .. } | CijError::PairExhausted { .. } => EXIT_EXHAUSTED,
        CijError::BadEpsilon(_) | CijError::Empty => EXIT_INVALID,
        _ => EXIT_OTHER,
    };
    Failure::new(code, e.to_string())
}

fn run(cli: Cli) -> Result<(String, u8), Failure> {
    match cli.command {
        Command::Betti { d, n, max_k, literal_omega, output } => {
            let mc = ManifoldClass::new(d, n)?;
            let variant = if literal_omega { OmegaVariant::Literal } else { OmegaVariant::Corrected };
            Ok((emit_report(&Report::Betti(mc.table(max_k, variant)), output), 0))
        }
        Command::Classify(input) => {
            let cfg = load(&input.config)?;
            let dim = cfg.dn_minus_1();
            let geodesics = cfg
                .geodesics
                .iter()
                .map(|g| GeodesicClass {
                    name: g.name.clone(),
                    initial_index: g.initial_index,
                    counts: g.decomp.counts(),
                    class: g.decomp.elliptic_class(),
                    splitting: g.decomp.splitting_profile(),
                    mean_index: g.mean_index(),
                    gamma: g.gamma(),
                    bumpy_elliptic_violations: g.decomp.validate(dim, ValidationMode::BumpyElliptic),
                })
                .collect();
            Ok((emit_report(&Report::Classify { geodesics }, input.output), 0))
        }
        Command::Iterate { input, max_m, geodesic } => {
            let cfg = load(&input.config)?;
            if let Some(name) = &geodesic {
                if !cfg.geodesics.iter().any(|g| &g.name == name) {
                    return Err(Failure::new(EXIT_INVALID, format!("no geodesic named {name:?}")));
                }
            }
            let mut rows = Vec::new();
            for g in cfg.geodesics.iter().filter(|g| geodesic.as_ref().is_none_or(|n| &g.name == n)) {
                for m in 1..=max_m {
                    let index = g.index_of_iterate(m).try_into().map_err(|_| Failure::new(EXIT_OTHER, "index overflows i64"))?;
                    rows.push(IndexRow { geodesic: g.name.clone(), m, index, nullity: g.nullity_of_iterate(m) });
                }
            }
            Ok((emit_report(&Report::Iterate { rows }, input.output), 0))
        }
        Command::Resonance { input, tolerance } => {
            let cfg = load(&input.config)?;
            let outcome = resonance_check(&cfg.manifold, &cfg.geodesics, &rational("tolerance", &tolerance)?)?;
            let code = if outcome.pass { 0 } else { EXIT_STRUCTURAL };
            let geodesics = cfg
                .geodesics
                .iter()
                .map(|g| ResonanceRow { geodesic: g.name.clone(), gamma: g.gamma(), mean_index: g.mean_index() })
                .collect();
            Ok((emit_report(&Report::Resonance { outcome, geodesics }, input.output), code))
        }
        Command::Morse { input, max_p } => {
            let cfg = load(&input.config)?;
            let table = morse_numbers(&cfg.geodesics, max_p).map_err(|e| Failure::new(EXIT_INVALID, e.to_string()))?;
            let identity = morse_identity_check(&cfg.manifold, &table);
            let betti = (0..=max_p).map(|p| cfg.manifold.betti(p, OmegaVariant::Corrected)).collect();
            let code = if identity.pass { 0 } else { EXIT_OTHER };
            Ok((emit_report(&Report::Morse(MorseReport { table, betti, identity }), input.output), code))
        }
        Command::Cij { input, search, pair, fractional_only } => {
            let cfg = load(&input.config)?;
            let mut params = search_params(&search)?;
            if fractional_only {
                params.admissibility = Admissibility::FractionalOnly;
            }
            let tuple = find_tuple(&cfg.manifold, &cfg.geodesics, &params).map_err(search_failure)?;
            let paired = if pair {
                Some(find_paired_tuple(&cfg.manifold, &cfg.geodesics, &tuple, &params).map_err(search_failure)?)
            } else {
                None
            };
            let (claim3, claim3_skipped) = match claim3_check(&cfg.manifold, &cfg.geodesics, &tuple) {
                Ok(o) => (Some(o), None),
                Err(e) => (None, Some(e.to_string())),
            };
            let code = if claim3.as_ref().is_none_or(|o| o.pass) { 0 } else { EXIT_OTHER };
            let report = Report::Cij(CijReport { tuple, paired, claim3, claim3_skipped });
            Ok((emit_report(&report, input.output), code))
        }
        Command::Audit { input, search, max_p } => {
            let cfg = load(&input.config)?;
            let sp = search_params(&search)?;
            let mut params = AuditParams::new(sp.epsilon, sp.n_max);
            params.m0 = sp.m0;
            params.strategy = sp.strategy;
            params.window = sp.window;
            params.max_p = max_p;
            let report = audit(&cfg, &params).map_err(|e| match e {
                AuditError::Search(e) => search_failure(e),
                AuditError::Betti(e) => Failure::from(e),
                other => Failure::new(EXIT_INVALID, other.to_string()),
            })?;
            let structural_fail =
                report.checks.iter().any(|c| c.kind == CheckKind::Structural && c.status == CheckStatus::Fail);
            let code = if report.passed() {
                0
            } else if report.search_exhausted {
                EXIT_EXHAUSTED
            } else if structural_fail {
                EXIT_STRUCTURAL
            } else {
                EXIT_OTHER
            };
            Ok((emit_report(&Report::Audit(report), input.output), code))
        }
        Command::Synthesize { d, n, seed, attempts, window, output } => {
            let mc = ManifoldClass::new(d, n)?;
            let mut params = SynthParams::new(mc, seed, attempts);
            params.window = window;
            let outcome = synthesize_config(&params).map_err(|e| Failure::new(EXIT_EXHAUSTED, e.to_string()))?;
            Ok((emit_report(&Report::Synthesize(outcome), output), 0))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok((out, code)) => {
            print!("{out}");
            ExitCode::from(code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

//! `groupshare`: deal and recover secrets hidden in word problems.
//!
//! Exit codes: 0 success, 1 usage, 2 bad data or failed precondition,
//! 3 a sampling budget ran out.

mod session;

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use groupshare::freegroup::parse_word;
use groupshare::scheme::{format_bundle, schemes, DealRequest, GroupCodec, DEFAULT_SCHEME};
use groupshare::smallcancel::{
    default_lambda, parse_lambda, random_platform_group, CancellationReport, DehnSolver, Lambda,
    PlatformParams, DEFAULT_BUDGET,
};
use groupshare::tietze::{breakers, parse_breakdown, DEFAULT_BREAKER};
use groupshare::{Error, Presentation};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use session::{read, seed_commitment, write, Manifest, SessionStore};

#[derive(Parser)]
#[command(
    name = "groupshare",
    version,
    about = "Secret sharing over small cancellation groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct GroupArgs {
    /// Number of generators.
    #[arg(long, default_value_t = 3)]
    rank: usize,
    /// Number of relators.
    #[arg(long, default_value_t = 3)]
    relators: usize,
    /// Length of each relator (must exceed 6).
    #[arg(long, default_value_t = 40)]
    length: usize,
    /// Small cancellation bound, e.g. `1/6`.
    #[arg(long, value_parser = lambda_arg)]
    lambda: Option<Lambda>,
}

impl GroupArgs {
    fn params(&self) -> PlatformParams {
        PlatformParams {
            rank: self.rank,
            relator_count: self.relators,
            relator_length: self.length,
            lambda: self.lambda.unwrap_or_else(default_lambda),
            max_attempts: DEFAULT_BUDGET,
        }
    }
}

fn lambda_arg(s: &str) -> Result<Lambda, String> {
    parse_lambda(s).map_err(|e| e.to_string())
}

#[derive(Subcommand)]
enum Command {
    /// Sample a random C'(λ) presentation.
    GenGroup {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample one platform group per participant and deal a secret.
    Deal {
        /// Sharing scheme (see `groupshare list`).
        #[arg(long, default_value = DEFAULT_SCHEME)]
        mode: String,
        /// Hex bit string (nn) or decimal residue (tn).
        #[arg(long)]
        secret: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        t: Option<usize>,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        session_dir: PathBuf,
        #[command(flatten)]
        group: GroupArgs,
    },
    /// Decode the listed participants' bundles and recombine.
    Recover {
        #[arg(long)]
        session_dir: PathBuf,
        /// Comma-separated participant numbers, e.g. `1,3,4`.
        #[arg(long, value_delimiter = ',', required = true)]
        participants: Vec<usize>,
        /// Recombine through the masked ring and keep its transcript.
        #[arg(long)]
        secure_sum: bool,
        /// Seed for the ring masks.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Rewrite a presentation so every relator has length at most 3.
    TietzeBreak {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = DEFAULT_BREAKER)]
        strategy: String,
    },
    /// Report small cancellation data, or decide a word with Dehn's algorithm.
    Inspect {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        word: Option<String>,
        #[arg(long, value_parser = lambda_arg)]
        lambda: Option<Lambda>,
    },
    /// List the registered sharing schemes and relator-breaking strategies.
    List,
}

fn print_report(out: &mut impl std::io::Write, r: &CancellationReport) -> Result<()> {
    writeln!(out, "lambda {}", r.lambda)?;
    writeln!(out, "max-piece-ratio {}", r.max_piece_ratio)?;
    match &r.witness {
        Some(w) => {
            writeln!(out, "witness-piece {}", w.piece)?;
            writeln!(out, "witness-relator {}", w.relator)?;
            writeln!(out, "witness-other {}", w.other)?;
        }
        None => writeln!(out, "witness none")?,
    }
    writeln!(out, "satisfied {}", r.satisfied)?;
    Ok(())
}

fn gen_group(group: &GroupArgs, seed: u64, out: Option<PathBuf>) -> Result<()> {
    let params = group.params();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = random_platform_group(&params, &mut rng)?;
    let report = p.check_small_cancellation(params.lambda)?;
    let mut stdout = std::io::stdout().lock();
    match out {
        Some(path) => {
            write(&path, &p.to_string())?;
            print_report(&mut stdout, &report)?;
        }
        None => {
            write!(stdout, "{p}")?;
            print_report(&mut std::io::stderr().lock(), &report)?;
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn deal(
    mode: &str,
    secret: &str,
    n: usize,
    t: Option<usize>,
    p: Option<u64>,
    seed: u64,
    dir: PathBuf,
    group: &GroupArgs,
) -> Result<()> {
    let registry = schemes();
    let scheme = registry.get(mode)?;
    let req = DealRequest { n, t, p, secret };
    let (cfg, secret) = scheme.prepare(&req)?;
    let cfg = cfg.with_platform(group.params())?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let groups = cfg.sample_groups(&mut rng)?;
    let columns = scheme.deal(&cfg, &secret, &groups, &mut rng)?;

    let store = SessionStore::new(dir);
    store.create()?;
    let manifest = Manifest {
        config: cfg.clone(),
        seed_commitment: seed_commitment(seed),
    };
    write(&store.manifest_path(), &manifest.to_text())?;
    for (j, (g, wc)) in groups.iter().zip(&columns).enumerate() {
        write(&store.presentation_path(j + 1), &g.to_string())?;
        write(&store.bundle_path(j + 1), &format_bundle(wc))?;
    }
    println!(
        "dealt {} session: n={} t={} k={} ({} bundles)",
        cfg.mode,
        cfg.n,
        cfg.t,
        cfg.k,
        columns.len()
    );
    Ok(())
}

fn recover(dir: PathBuf, participants: &[usize], secure_sum: bool, seed: u64) -> Result<()> {
    let store = SessionStore::new(dir);
    let manifest = store.read_manifest()?;
    let cfg = &manifest.config;
    let registry = schemes();
    let scheme = registry.get(cfg.mode)?;

    let mut decoded = Vec::with_capacity(participants.len());
    for &j in participants {
        if j == 0 || j > cfg.n {
            return Err(Error::InvalidParameter(format!(
                "no participant {j} in a session of {}",
                cfg.n
            ))
            .into());
        }
        let g = store.read_presentation(j)?;
        let wc = store.read_bundle(j)?;
        if g.rank() != cfg.platform.rank {
            bail!(
                "participant {j}: presentation rank {} does not match the manifest",
                g.rank()
            );
        }
        if wc.participant != j || wc.width() != cfg.k {
            bail!("participant {j}: bundle header does not match the manifest");
        }
        let bits = GroupCodec::new(&g)
            .decode(&wc)
            .with_context(|| format!("decoding participant {j}"))?;
        decoded.push((j, bits));
    }

    let secret = if secure_sum {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (secret, tr) = scheme.combine_secure(cfg, &decoded, &mut rng)?;
        let names: Vec<String> = participants.iter().map(ToString::to_string).collect();
        let path = store.transcript_path(&format!("secure-sum-{}.log", names.join("-")));
        write(&path, &tr.to_log())?;
        eprintln!("transcript written to {}", path.display());
        secret
    } else {
        scheme.combine(cfg, &decoded)?
    };
    println!("{secret}");
    Ok(())
}

fn load_presentation(path: &Path) -> Result<Presentation> {
    let text = read(path)?;
    let parsed = if text.lines().any(|l| l.trim_start().starts_with("define ")) {
        parse_breakdown(&text).map(|(p, _)| p)
    } else {
        text.parse()
    };
    parsed.with_context(|| format!("parsing {}", path.display()))
}

fn tietze_break(input: PathBuf, out: Option<PathBuf>, strategy: &str) -> Result<()> {
    let registry = breakers();
    let strategy = registry.get(strategy)?;
    let p = load_presentation(&input)?;
    let result = groupshare::tietze::break_relators_with(&p, strategy)?;
    let text = result.to_text();
    let mut stdout = std::io::stdout().lock();
    let stats = format!(
        "strategy {}\ngenerators {} -> {}\nrelators {} -> {}\ntotal-length {} -> {}\nratio {:.4}\nmoves {}\n",
        result.strategy,
        p.rank(),
        result.presentation.rank(),
        p.relators().len(),
        result.presentation.relators().len(),
        p.total_length(),
        result.presentation.total_length(),
        result.length_ratio(),
        result.moves.len(),
    );
    match out {
        Some(path) => {
            write(&path, &text)?;
            stdout.write_all(stats.as_bytes())?;
        }
        None => {
            stdout.write_all(text.as_bytes())?;
            eprint!("{stats}");
        }
    }
    Ok(())
}

fn inspect(input: PathBuf, word: Option<String>, lambda: Option<Lambda>) -> Result<()> {
    let p = load_presentation(&input)?;
    let mut stdout = std::io::stdout().lock();
    match word {
        None => {
            writeln!(
                stdout,
                "generators {}\nrelators {}\ntotal-length {}",
                p.rank(),
                p.relators().len(),
                p.total_length()
            )?;
            let report = p.check_small_cancellation(lambda.unwrap_or_else(default_lambda))?;
            print_report(&mut stdout, &report)?;
        }
        Some(text) => {
            let w = parse_word(&text, p.alphabet())?;
            let trace = DehnSolver::new(&p).run(&w)?;
            for (i, s) in trace.steps.iter().enumerate() {
                writeln!(
                    stdout,
                    "step {} at {}: [{}] -> [{}]",
                    i + 1,
                    s.position,
                    s.replaced,
                    s.replacement
                )?;
            }
            writeln!(stdout, "final [{}]", trace.final_word)?;
            writeln!(
                stdout,
                "{} in {} steps",
                if trace.is_trivial {
                    "trivial"
                } else {
                    "nontrivial"
                },
                trace.steps.len()
            )?;
        }
    }
    Ok(())
}

fn list() -> Result<()> {
    let mut stdout = std::io::stdout().lock();
    writeln!(stdout, "sharing schemes:")?;
    for s in schemes().iter() {
        writeln!(stdout, "  {:<14}{}", s.name(), s.description())?;
    }
    writeln!(stdout, "relator-breaking strategies:")?;
    for s in breakers().iter() {
        writeln!(stdout, "  {:<14}{}", s.name(), s.description())?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::GenGroup { group, seed, out } => gen_group(&group, seed, out),
        Command::Deal {
            mode,
            secret,
            n,
            t,
            p,
            seed,
            session_dir,
            group,
        } => deal(&mode, &secret, n, t, p, seed, session_dir, &group),
        Command::Recover {
            session_dir,
            participants,
            secure_sum,
            seed,
        } => recover(session_dir, &participants, secure_sum, seed),
        Command::TietzeBreak {
            input,
            out,
            strategy,
        } => tietze_break(input, out, &strategy),
        Command::Inspect {
            input,
            word,
            lambda,
        } => inspect(input, word, lambda),
        Command::List => list(),
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.chain().find_map(|e| e.downcast_ref::<Error>()) {
        Some(e) if e.is_budget_exhausted() => 3,
        Some(
            Error::InvalidParameter(_) | Error::InvalidLambda(_) | Error::UnknownStrategy { .. },
        ) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

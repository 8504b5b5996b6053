//! Command-line front end for `lpsynth`.
//!
//! Results go to the output stream, diagnostics and reports to the error
//! stream. Exit codes: 0 success, 1 negative answer, 2 unknown, 64 usage,
//! 65 malformed input, 66 ground size guard exceeded, 70 internal error,
//! 74 I/O error.

pub mod config;
pub mod corpus;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand};

use lpsynth::ground::GroundError;
use lpsynth::interpolation::{craig_lyndon_interpolants, lp_from_prime};
use lpsynth::prover::entailment_problems;
use lpsynth::se::se_oracle_ground_with;
use lpsynth::tptp::{formula_to_tptp, parse_tptp_conjunction};
use lpsynth::{
    decode_checked, parse_program, prove, strongly_equivalent, synthesize, Clausifier, Decider,
    DecodeError, DecodeOptions, EncodedProgram, Formula, InterpolationError, InterpolationTask,
    Program, SeOutcome, SynthesisError, SynthesisOptions, SynthesisResult, Verdict, VocabularySpec,
};

use config::{name_list, parse_kv, Defaults};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_UNKNOWN: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_DATA: i32 = 65;
pub const EXIT_SIZE: i32 = 66;
pub const EXIT_INTERNAL: i32 = 70;
pub const EXIT_IO: i32 = 74;

#[derive(Debug, Parser)]
#[command(
    name = "lpsynth",
    version,
    about = "Strong equivalence and vocabulary-restricted synthesis for answer set programs"
)]
struct Cli {
    /// File of `key = value` defaults (depth, inferences, timeout, max_atoms).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args, Clone, Default)]
struct LimitArgs {
    /// Maximum tableau depth.
    #[arg(long)]
    depth: Option<usize>,
    /// Maximum number of inferences.
    #[arg(long)]
    inferences: Option<u64>,
    /// Wall-clock limit in seconds.
    #[arg(long)]
    timeout: Option<f64>,
    /// Ground atom budget for the exact decision procedure.
    #[arg(long)]
    max_atoms: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print γ(P) and S_P.
    Encode { program: PathBuf },
    /// Turn an encoding back into a program.
    Decode {
        formula: PathBuf,
        #[arg(long)]
        trivial_partition: bool,
        /// Skip the check that the input encodes a program.
        #[arg(long)]
        unchecked: bool,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Craig-Lyndon interpolant of LEFT ⊨ RIGHT.
    Interpolate {
        left: PathBuf,
        right: PathBuf,
        #[arg(long, default_value_t = 1)]
        enumerate: usize,
        /// Print H′ ∧ rename(H′) instead of H′.
        #[arg(long)]
        lp: bool,
        /// Dump the first proof to the error stream.
        #[arg(long)]
        dump_proof: bool,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Check strong equivalence of two programs.
    CheckSe {
        p: PathBuf,
        q: PathBuf,
        #[arg(long, conflicts_with = "prover")]
        ground: bool,
        #[arg(long)]
        prover: bool,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Find R over a vocabulary with P ∪ R strongly equivalent to P ∪ Q.
    Synthesize {
        #[arg(long)]
        context: Option<PathBuf>,
        #[arg(long)]
        target: PathBuf,
        #[arg(long, group = "vocabulary")]
        vocab: Option<String>,
        #[arg(long, group = "vocabulary")]
        hide: Option<String>,
        /// `plus=p,q;plus1=r;minus=p,q,r`
        #[arg(long, group = "vocabulary")]
        vocab_pos: Option<String>,
        #[arg(long, default_value_t = 1)]
        enumerate: usize,
        #[arg(long)]
        trivial_partition: bool,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Run every case directory below DIR.
    Corpus {
        dir: PathBuf,
        #[command(flatten)]
        limits: LimitArgs,
    },
}

struct Failure(i32, String);

impl From<GroundError> for Failure {
    fn from(e: GroundError) -> Self {
        match e {
            GroundError::SizeGuard { .. } => Failure(EXIT_SIZE, e.to_string()),
            GroundError::NotFunctionFree(_) => Failure(EXIT_DATA, e.to_string()),
        }
    }
}

type Outcome = Result<i32, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure(EXIT_IO, format!("{}: {e}", path.display())))
}

fn read_program(path: &Path) -> Result<Program, Failure> {
    parse_program(&read(path)?).map_err(|e| Failure(EXIT_DATA, format!("{}: {e}", path.display())))
}

fn read_formula(path: &Path) -> Result<Formula, Failure> {
    parse_tptp_conjunction(&read(path)?)
        .map_err(|e| Failure(EXIT_DATA, format!("{}: {e}", path.display())))
}

fn defaults(config: Option<&Path>, l: &LimitArgs) -> Result<Defaults, Failure> {
    let mut d = Defaults::default();
    if let Some(path) = config {
        let kv = parse_kv(&read(path)?)
            .map_err(|e| Failure(EXIT_USAGE, format!("{}: {e}", path.display())))?;
        d.apply(&kv)
            .map_err(|e| Failure(EXIT_USAGE, format!("{}: {}", path.display(), e.message)))?;
    }
    if let Some(v) = l.depth {
        d.limits.max_depth = v;
    }
    if let Some(v) = l.inferences {
        d.limits.max_inferences = v;
    }
    if let Some(v) = l.timeout {
        d.limits.wall_time = Duration::try_from_secs_f64(v)
            .map_err(|_| Failure(EXIT_USAGE, format!("bad timeout `{v}`")))?;
    }
    if let Some(v) = l.max_atoms {
        d.max_atoms = v;
    }
    Ok(d)
}

fn io(r: std::io::Result<()>) -> Result<(), Failure> {
    r.map_err(|e| Failure(EXIT_IO, e.to_string()))
}

fn parse_positional(spec: &str) -> Result<VocabularySpec, Failure> {
    let (mut plus, mut plus1, mut minus) = Default::default();
    for part in spec.split(';').map(str::trim).filter(|s| !s.is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Failure(EXIT_USAGE, format!("bad --vocab-pos part `{part}`")))?;
        match k.trim() {
            "plus" => plus = name_list(v),
            "plus1" => plus1 = name_list(v),
            "minus" => minus = name_list(v),
            other => {
                return Err(Failure(
                    EXIT_USAGE,
                    format!("unknown --vocab-pos key `{other}`"),
                ))
            }
        }
    }
    Ok(VocabularySpec::Positional { plus, plus1, minus })
}

fn cmd_encode(path: &Path, out: &mut dyn Write) -> Outcome {
    let p = read_program(path)?;
    let enc = EncodedProgram::new(&p);
    io(write!(
        out,
        "{}{}",
        formula_to_tptp("gamma", "axiom", &enc.gamma),
        formula_to_tptp("s", "axiom", &enc.s)
    ))?;
    Ok(EXIT_OK)
}

fn cmd_decode(
    path: &Path,
    opts: DecodeOptions,
    unchecked: bool,
    d: &Defaults,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Outcome {
    let f = read_formula(path)?;
    let result = if unchecked {
        lpsynth::decode_with(&f, opts)
    } else {
        decode_checked(
            &f,
            &Decider::Auto {
                max_atoms: d.max_atoms,
                limits: d.limits,
            },
            opts,
        )
    };
    match result {
        Ok(p) => {
            io(write!(out, "{p}"))?;
            Ok(EXIT_OK)
        }
        Err(e @ DecodeError::NotAnEncoding) => {
            io(writeln!(err, "{e}"))?;
            Ok(EXIT_NO)
        }
        Err(e @ DecodeError::Undetermined) => {
            io(writeln!(err, "{e}"))?;
            Ok(EXIT_UNKNOWN)
        }
        Err(e) => Err(Failure(EXIT_DATA, e.to_string())),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_interpolate(
    left: &Path,
    right: &Path,
    n: usize,
    lp: bool,
    dump: bool,
    d: &Defaults,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Outcome {
    let task = InterpolationTask::new(read_formula(left)?, read_formula(right)?);
    if dump {
        if let Some(problem) =
            entailment_problems(&task.left, &task.right, &mut Clausifier::new()).first()
        {
            match prove(problem, &d.limits) {
                Ok(p) => io(write!(err, "{}", p.dump()))?,
                Err(u) => io(writeln!(err, "no proof: {u}"))?,
            }
        }
    }
    match craig_lyndon_interpolants(&task, &d.limits, n.max(1)) {
        Ok(hs) => {
            for (i, h) in hs.iter().enumerate() {
                let h = if lp { lp_from_prime(h).h } else { h.clone() };
                io(write!(
                    out,
                    "{}",
                    formula_to_tptp(&format!("interpolant{}", i + 1), "axiom", &h)
                ))?;
                if matches!(h, Formula::True) {
                    io(writeln!(out, "fof(interpolant{}_1, axiom, $true).", i + 1))?;
                }
            }
            Ok(EXIT_OK)
        }
        Err(InterpolationError::Unknown(u)) => {
            io(writeln!(err, "no interpolant: {u}"))?;
            Ok(EXIT_UNKNOWN)
        }
        Err(e) => Err(Failure(EXIT_DATA, e.to_string())),
    }
}

fn cmd_check_se(
    p: &Path,
    q: &Path,
    ground: bool,
    prover: bool,
    d: &Defaults,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Outcome {
    let (p, q) = (read_program(p)?, read_program(q)?);
    let function_free = p.union(&q).functions().iter().all(|(_, a)| *a == 0);
    if ground || (!prover && function_free) {
        match se_oracle_ground_with(&p, &q, d.max_atoms)? {
            SeOutcome::Equivalent => {
                io(writeln!(out, "true"))?;
                Ok(EXIT_OK)
            }
            SeOutcome::NotEquivalent(m) => {
                io(writeln!(out, "false"))?;
                io(writeln!(err, "countermodel: {m}"))?;
                Ok(EXIT_NO)
            }
        }
    } else {
        let v = strongly_equivalent(&p, &q, &d.limits);
        io(writeln!(out, "{v}"))?;
        Ok(if v == Verdict::True {
            EXIT_OK
        } else {
            EXIT_UNKNOWN
        })
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_synthesize(
    context: Option<&Path>,
    target: &Path,
    vocab: Option<&str>,
    hide: Option<&str>,
    vocab_pos: Option<&str>,
    enumerate: usize,
    trivial: bool,
    d: &Defaults,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Outcome {
    let p = match context {
        Some(c) => read_program(c)?,
        None => Program::default(),
    };
    let q = read_program(target)?;
    let v = match (vocab, hide, vocab_pos) {
        (Some(v), None, None) => VocabularySpec::Plain(name_list(v)),
        (None, Some(h), None) => VocabularySpec::complement(&p, &q, &name_list(h)),
        (None, None, Some(s)) => parse_positional(s)?,
        _ => {
            return Err(Failure(
                EXIT_USAGE,
                "exactly one of --vocab, --hide, --vocab-pos is required".into(),
            ))
        }
    };
    let opts = SynthesisOptions {
        limits: d.limits,
        decode: DecodeOptions {
            trivial_partition: trivial,
        },
        enumerate,
        max_atoms: d.max_atoms,
    };
    let rep = synthesize(&p, &q, &v, &opts).map_err(|e| match e {
        SynthesisError::Vocabulary(_) => Failure(EXIT_USAGE, e.to_string()),
        SynthesisError::Ground(g) => g.into(),
        SynthesisError::Internal(_) => Failure(EXIT_INTERNAL, e.to_string()),
    })?;
    io(writeln!(
        err,
        "% entailment left:\n{}",
        formula_to_tptp("left", "axiom", &rep.left)
    ))?;
    io(writeln!(
        err,
        "% entailment right:\n{}",
        formula_to_tptp("right", "conjecture", &rep.right)
    ))?;
    if let Some(h) = &rep.interpolant {
        io(writeln!(
            err,
            "% interpolant:\n{}",
            formula_to_tptp("h", "axiom", h)
        ))?;
    }
    if let Some((verdict, method)) = &rep.verification {
        io(writeln!(err, "% verification: {verdict} ({method:?})"))?;
    }
    match rep.result {
        SynthesisResult::Found(r) => {
            io(write!(out, "{r}"))?;
            for (i, alt) in rep.alternatives.iter().enumerate() {
                io(writeln!(err, "% alternative {}:\n{alt}", i + 1))?;
            }
            Ok(EXIT_OK)
        }
        SynthesisResult::NotFound(m) => {
            io(writeln!(err, "no program over the vocabulary exists"))?;
            if let Some(m) = m {
                io(writeln!(err, "countermodel: {m}"))?;
            }
            Ok(EXIT_NO)
        }
        SynthesisResult::Unknown(why) => {
            io(writeln!(err, "unknown: {why}"))?;
            Ok(EXIT_UNKNOWN)
        }
    }
}

fn cmd_corpus(dir: &Path, d: &Defaults, out: &mut dyn Write) -> Outcome {
    let opts = SynthesisOptions {
        limits: d.limits,
        max_atoms: d.max_atoms,
        ..Default::default()
    };
    let summary = corpus::run_corpus(dir, &opts).map_err(|e| Failure(EXIT_IO, e))?;
    io(writeln!(out, "{summary}"))?;
    Ok(if summary.all_passed() {
        EXIT_OK
    } else {
        EXIT_NO
    })
}

/// Runs the command line `argv` (including the program name).
pub fn run_with<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{e}");
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    EXIT_OK
                }
                _ => EXIT_USAGE,
            };
        }
    };
    let config = cli.config.as_deref();
    let result = match &cli.command {
        Command::Encode { program } => cmd_encode(program, out),
        Command::Decode {
            formula,
            trivial_partition,
            unchecked,
            limits,
        } => defaults(config, limits).and_then(|d| {
            cmd_decode(
                formula,
                DecodeOptions {
                    trivial_partition: *trivial_partition,
                },
                *unchecked,
                &d,
                out,
                err,
            )
        }),
        Command::Interpolate {
            left,
            right,
            enumerate,
            lp,
            dump_proof,
            limits,
        } => defaults(config, limits)
            .and_then(|d| cmd_interpolate(left, right, *enumerate, *lp, *dump_proof, &d, out, err)),
        Command::CheckSe {
            p,
            q,
            ground,
            prover,
            limits,
        } => defaults(config, limits)
            .and_then(|d| cmd_check_se(p, q, *ground, *prover, &d, out, err)),
        Command::Synthesize {
            context,
            target,
            vocab,
            hide,
            vocab_pos,
            enumerate,
            trivial_partition,
            limits,
        } => defaults(config, limits).and_then(|d| {
            cmd_synthesize(
                context.as_deref(),
                target,
                vocab.as_deref(),
                hide.as_deref(),
                vocab_pos.as_deref(),
                *enumerate,
                *trivial_partition,
                &d,
                out,
                err,
            )
        }),
        Command::Corpus { dir, limits } => {
            defaults(config, limits).and_then(|d| cmd_corpus(dir, &d, out))
        }
    };
    match result {
        Ok(code) => code,
        Err(Failure(code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

/// [`run_with`] on the process's standard streams.
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let (stdout, stderr) = (std::io::stdout(), std::io::stderr());
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

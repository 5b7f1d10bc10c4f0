//! `kpaths`: count and maximize k-paths in labelled digraphs stored as TSV.
//!
//! Exit codes: 0 success, 1 negative answer (`check` failed, `verify` did not
//! match), 2 malformed input or usage, 3 violated hypothesis, 4 enumeration
//! limit exceeded.

use std::fs;
use std::io::{BufWriter, ErrorKind, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use kpaths::extremal::{
    acyclic_bound, construct_extremal_acyclic, construct_extremal_loop,
    construct_extremal_rational, loop_bound, semiring_bound, BoundError,
};
use kpaths::optimizer::{chirvasitu_violation, optimize, OptimizeError};
use kpaths::oracle::{verify_with, VerifyOptions};
use kpaths::paths::{
    count_k_paths, enumerate_k_paths_limited, girth, path_content, PathError, DEFAULT_PATH_LIMIT,
};
use kpaths::semiring::{Label, Mode};
use kpaths::tsv::{load_graph, write_graph, TsvError};
use kpaths::Graph;

#[derive(Parser)]
#[command(
    name = "kpaths",
    version,
    about = "Count and maximize paths of length k in labelled digraphs"
)]
struct Cli {
    /// Worker threads for parallel stages (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Nat,
    Rat,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Nat => Mode::Nat,
            ModeArg::Rat => Mode::Rat,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Shape {
    Path,
    Loop,
    Rational,
}

#[derive(Subcommand)]
enum Command {
    /// Print the k-content (the labelled number of k-paths).
    Count {
        #[arg(short)]
        k: usize,
        file: PathBuf,
        /// Also print an approximate decimal with this many digits.
        #[arg(long)]
        decimal: Option<usize>,
    },
    /// Print the length of the shortest loop, or `inf`.
    Girth { file: PathBuf },
    /// Check the girth condition and the pairwise shared-path condition.
    Check {
        #[arg(short)]
        k: usize,
        file: PathBuf,
    },
    /// Print the maximum k-content for total weight N.
    Bound {
        #[arg(short = 'N')]
        n: u64,
        #[arg(short)]
        k: u64,
        #[arg(long, value_enum, default_value = "nat")]
        mode: ModeArg,
        #[arg(long)]
        acyclic: bool,
        #[arg(long)]
        decimal: Option<usize>,
    },
    /// Write a graph attaining the bound.
    Construct {
        #[arg(short = 'N')]
        n: u64,
        #[arg(short)]
        k: u64,
        #[arg(long, value_enum)]
        shape: Shape,
        /// Output file (default: stdout).
        #[arg(short)]
        o: Option<PathBuf>,
    },
    /// Rewrite a graph into a maximizer of its weight, recording each step.
    Optimize {
        #[arg(short)]
        k: usize,
        file: PathBuf,
        /// Output file (default: stdout).
        #[arg(short)]
        o: Option<PathBuf>,
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
    },
    /// Search every small graph of weight N and compare the maximum with the bound.
    Verify {
        #[arg(short = 'N')]
        n: u64,
        #[arg(short)]
        k: u64,
        /// Cap the vertex count at N+1 instead of 2N.
        #[arg(long)]
        fast: bool,
        #[arg(long)]
        acyclic: bool,
        /// Report progress on stderr.
        #[arg(long)]
        progress: bool,
        /// Write the kept maximizers here as TSV.
        #[arg(long)]
        argmax: Option<PathBuf>,
    },
    /// List the k-paths with their contents.
    Paths {
        #[arg(short)]
        k: usize,
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_PATH_LIMIT)]
        limit: usize,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl ToString) -> Self {
        Failure {
            code,
            message: message.to_string(),
        }
    }
}

impl From<TsvError> for Failure {
    fn from(e: TsvError) -> Self {
        Failure::new(2, e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        // a closed pipe downstream is not an error
        if e.kind() == ErrorKind::BrokenPipe {
            Failure::new(0, "")
        } else {
            Failure::new(2, e)
        }
    }
}

impl From<BoundError> for Failure {
    fn from(e: BoundError) -> Self {
        Failure::new(3, e)
    }
}

impl From<OptimizeError> for Failure {
    fn from(e: OptimizeError) -> Self {
        Failure::new(3, e)
    }
}

impl From<PathError> for Failure {
    fn from(e: PathError) -> Self {
        match e {
            PathError::LimitExceeded { .. } => Failure::new(4, e),
            _ => Failure::new(3, e),
        }
    }
}

fn io(path: &std::path::Path) -> impl FnOnce(std::io::Error) -> Failure + '_ {
    move |e| Failure::new(2, format!("{}: {e}", path.display()))
}

fn load(path: &std::path::Path) -> Result<Graph, Failure> {
    load_graph(path).map_err(|e| Failure::new(2, format!("{}: {e}", path.display())))
}

fn emit(w: &mut dyn Write, out: Option<&PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text).map_err(io(p)),
        None => {
            w.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn print_label(
    w: &mut dyn Write,
    key: Option<&str>,
    value: &Label,
    decimal: Option<usize>,
) -> std::io::Result<()> {
    match key {
        Some(k) => writeln!(w, "{k}={value}")?,
        None => writeln!(w, "{value}")?,
    }
    if let Some(d) = decimal {
        writeln!(w, "approx={} (approximate)", value.to_decimal_string(d))?;
    }
    Ok(())
}

fn run(cli: Cli, w: &mut dyn Write) -> Result<u8, Failure> {
    if let Some(j) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build_global()
            .map_err(|e| Failure::new(2, e))?;
    }
    match cli.command {
        Command::Count { k, file, decimal } => {
            let g = load(&file)?;
            print_label(w, None, &count_k_paths(&g, k), decimal)?;
            Ok(0)
        }
        Command::Girth { file } => {
            writeln!(w, "{}", girth(&load(&file)?))?;
            Ok(0)
        }
        Command::Check { k, file } => {
            let g = load(&file)?;
            let gi = girth(&g);
            let girth_ok = gi.at_least(k);
            writeln!(w, "girth={gi}")?;
            writeln!(w, "girth_ok={girth_ok}")?;
            let violation = chirvasitu_violation(&g, k);
            match violation {
                Some((e, f)) => writeln!(w, "chirvasitu=violated {e},{f}")?,
                None => writeln!(w, "chirvasitu=ok")?,
            }
            Ok(if girth_ok && violation.is_none() {
                0
            } else {
                1
            })
        }
        Command::Bound {
            n,
            k,
            mode,
            acyclic,
            decimal,
        } => {
            match (Mode::from(mode), acyclic) {
                (Mode::Rat, _) => print_label(
                    w,
                    Some("sup"),
                    &semiring_bound(&Label::from(n), k)?,
                    decimal,
                )?,
                (Mode::Nat, true) => writeln!(w, "P={}", acyclic_bound(n, k)?)?,
                (Mode::Nat, false) => {
                    writeln!(w, "P={} kP={}", acyclic_bound(n, k)?, loop_bound(n, k)?)?
                }
            }
            Ok(0)
        }
        Command::Construct { n, k, shape, o } => {
            let g = match shape {
                Shape::Path => construct_extremal_acyclic(n, k)?,
                Shape::Loop => construct_extremal_loop(n, k)?,
                Shape::Rational => construct_extremal_rational(&Label::from(n), k)?,
            };
            emit(w, o.as_ref(), &write_graph(&g))?;
            Ok(0)
        }
        Command::Optimize {
            k,
            file,
            o,
            trace,
            mode,
        } => {
            let g = load(&file)?;
            let mode = mode.map(Mode::from).unwrap_or(g.mode());
            let start = if mode == g.mode() {
                g.clone()
            } else {
                g.with_mode(mode).map_err(|e| Failure::new(3, e))?
            };
            let (out, steps) = optimize(&start, k, mode)?;
            if let Some(t) = &trace {
                fs::write(t, steps.to_string()).map_err(io(t))?;
            }
            emit(w, o.as_ref(), &write_graph(&out))?;
            if o.is_some() {
                writeln!(w, "ct_before={}", count_k_paths(&start, k))?;
                writeln!(w, "ct_after={}", count_k_paths(&out, k))?;
                writeln!(w, "steps={}", steps.steps.len())?;
            }
            Ok(0)
        }
        Command::Verify {
            n,
            k,
            fast,
            acyclic,
            progress,
            argmax,
        } => {
            let mut opts = if fast {
                VerifyOptions::fast(n)
            } else {
                VerifyOptions::full(n)
            };
            if acyclic {
                opts = opts.acyclic();
            }
            let report_progress = |seen: u64| eprintln!("examined {seen}");
            let report = verify_with(
                n,
                k,
                opts,
                progress.then_some(&report_progress as &(dyn Fn(u64) + Sync)),
            )?;
            writeln!(w, "{report}")?;
            if let Some(p) = &argmax {
                fs::write(p, report.argmax_tsv()).map_err(io(p))?;
            }
            if report.exceeds_bound() {
                eprintln!("bound exceeded; witness:");
                eprint!("{}", write_graph(&report.argmax_graphs[0]));
            }
            Ok(if report.bound_matched { 0 } else { 1 })
        }
        Command::Paths { k, file, limit } => {
            let g = load(&file)?;
            for p in enumerate_k_paths_limited(&g, k, limit)? {
                writeln!(w, "{p}\t{}", path_content(&g, &p)?)?;
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut w = BufWriter::new(std::io::stdout().lock());
    let result = run(cli, &mut w).and_then(|code| {
        w.flush()?;
        Ok(code)
    });
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) if f.code == 0 => ExitCode::SUCCESS,
        Err(f) => {
            drop(w);
            eprintln!("kpaths: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

//! Argument parsing and the subcommands.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use kappa_core::khcomplex::{build_reduced_complex_capped, homology, DEFAULT_CAP};
use kappa_core::limit::{amphicheirality_check_pair, compute_kappa, compute_window, kappa_in_window, relative_table, Certificate, KappaInvariant, WindowPolicy};
use kappa_core::Error;

use crate::format::{self, Format};
use crate::io::{self, Input};
use crate::verify::{self, Suite};
use crate::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(name = "kappa", version, about = "Reduced Khovanov homology over F2 and the kappa invariant of strongly invertible knots")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Fixed window `N:M` instead of automatic widening.
    #[arg(long, global = true, value_parser = parse_window, allow_hyphen_values = true)]
    pub window: Option<(i64, i64)>,
    /// Largest diagram allowed, in crossings.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    pub cap: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Tsv)]
    pub format: Format,
    /// Seed for the randomized parts of `verify`.
    #[arg(long, global = true, default_value_t = verify::DEFAULT_SEED)]
    pub seed: u64,
    /// Only the conjectural diagnostics (with `verify`).
    #[arg(long, global = true)]
    pub soft_only: bool,
    /// Write the result here instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Homology, Jones polynomial, determinant and thinness of a diagram or tangle closure.
    Kh {
        file: String,
        /// Closure level for a tangle file.
        #[arg(long, allow_hyphen_values = true, conflicts_with = "infinity")]
        level: Option<i64>,
        /// Use the capping closure T(1/0) of a tangle file.
        #[arg(long)]
        infinity: bool,
    },
    /// Write the closed diagram of a tangle closure as JSON.
    Closure {
        file: String,
        #[arg(long, allow_hyphen_values = true, conflicts_with = "infinity")]
        level: Option<i64>,
        #[arg(long)]
        infinity: bool,
    },
    /// The kappa grid of a tangle.
    Kappa { file: String },
    /// Compare kappa with the reflection of kappa of `partner` (default: the same tangle).
    MirrorCheck { file: String, partner: Option<String> },
    /// Run the acceptance checks against a dataset directory.
    Verify {
        #[arg(long, default_value = "data")]
        data: PathBuf,
    },
}

fn parse_window(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("expected N:M, got {s:?}"))?;
    let n: i64 = a.trim().parse().map_err(|e| format!("{a:?}: {e}"))?;
    let m: i64 = b.trim().parse().map_err(|e| format!("{b:?}: {e}"))?;
    if n >= m {
        return Err(format!("window {n}:{m} needs N < M"));
    }
    Ok((n, m))
}

/// What a command produced: text for the output, and the exit status.
pub struct Outcome {
    pub text: String,
    pub status: i32,
}

fn closed_diagram(input: Input, level: Option<i64>, infinity: bool) -> CliResult<(String, kappa_core::diagram::PlanarDiagram)> {
    match input {
        Input::Diagram { name, diagram } => Ok((name, diagram)),
        Input::Tangle(t) => {
            if infinity {
                Ok((format!("{} T(1/0)", t.name), t.closure_infinity()?))
            } else {
                let n = level.ok_or_else(|| CliError::Usage("a tangle file needs --level N or --infinity".into()))?;
                Ok((format!("{} T({n})", t.name), t.closure(n)?))
            }
        }
    }
}

fn single_window(t: &kappa_core::diagram::SuturedTangle, n: i64, m: i64, cap: usize) -> CliResult<KappaInvariant> {
    let w = compute_window(t, n, m, cap)?;
    match kappa_in_window(&w)? {
        Some((table, ei)) => Ok(KappaInvariant {
            total_dim: table.values().sum(),
            table,
            certificate: Certificate {
                window: (n, m),
                agreements: 1,
                surjective_top: ei.surjective_top,
                injective_bottom: ei.injective_bottom,
                windows_tried: vec![(n, m)],
            },
        }),
        None => {
            let partial = relative_table(&w).into_iter().collect();
            Err(Error::Unstabilized { n, m, agreements: 0, partial }.into())
        }
    }
}

fn policy(cli: &Cli) -> WindowPolicy {
    WindowPolicy { cap: cli.cap, ..Default::default() }
}

fn kappa_for(cli: &Cli, t: &kappa_core::diagram::SuturedTangle) -> CliResult<KappaInvariant> {
    match cli.window {
        Some((n, m)) => single_window(t, n, m, cli.cap),
        None => Ok(compute_kappa(t, &policy(cli))?),
    }
}

pub fn execute(cli: &Cli) -> CliResult<Outcome> {
    let ok = |text: String| Ok(Outcome { text, status: 0 });
    match &cli.command {
        Command::Kh { file, level, infinity } => {
            let (name, d) = closed_diagram(io::read(file)?, *level, *infinity)?;
            let h = homology(&build_reduced_complex_capped(&d, cli.cap)?);
            ok(match cli.format {
                Format::Tsv => format::kh_tsv(&name, &h),
                Format::Json => format::kh_json(&name, &h),
            })
        }
        Command::Closure { file, level, infinity } => {
            let (name, d) = closed_diagram(io::read(file)?, *level, *infinity)?;
            if d.crossing_count() > cli.cap {
                return Err(Error::ResourceCap { crossings: d.crossing_count(), cap: cli.cap }.into());
            }
            ok(io::diagram_to_json(&name, &d))
        }
        Command::Kappa { file } => {
            let t = io::read_tangle(file)?;
            let k = kappa_for(cli, &t)?;
            ok(match cli.format {
                Format::Tsv => format::kappa_tsv(&t.name, &k),
                Format::Json => format::kappa_json(&t.name, &k),
            })
        }
        Command::MirrorCheck { file, partner } => {
            let t = io::read_tangle(file)?;
            let p = match partner {
                Some(p) => io::read_tangle(p)?,
                None => t.clone(),
            };
            let r = amphicheirality_check_pair(&t, &p, &policy(cli))?;
            ok(match cli.format {
                Format::Tsv => format::mirror_tsv(&t.name, &r),
                Format::Json => format::mirror_json(&t.name, &r),
            })
        }
        Command::Verify { data } => {
            let suite = Suite::new(data, cli.seed);
            let checks = if cli.soft_only { suite.run_soft() } else { suite.run() };
            let mut text: String = checks.iter().map(|c| c.line() + "\n").collect();
            let pass = verify::all_hard_pass(&checks);
            text.push_str(if pass { "all hard checks passed\n" } else { "hard checks failed\n" });
            Ok(Outcome { text, status: if pass { 0 } else { 1 } })
        }
    }
}

/// Where partial data goes when kappa does not stabilize.
fn partial_path(cli: &Cli, name: &str) -> PathBuf {
    match &cli.output {
        Some(p) => {
            let mut s = p.clone().into_os_string();
            s.push(".unstabilized.json");
            PathBuf::from(s)
        }
        None => PathBuf::from(format!("{name}.unstabilized.json")),
    }
}

fn write_file(path: &PathBuf, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|source| CliError::Write { path: path.display().to_string(), source })
}

/// Runs a parsed command line, printing results and diagnostics. Returns the exit status.
pub fn run(cli: &Cli) -> i32 {
    match execute(cli) {
        Ok(out) => {
            let written = match &cli.output {
                Some(p) => write_file(p, &out.text),
                None => std::io::stdout().write_all(out.text.as_bytes()).map_err(|source| CliError::Write { path: "stdout".into(), source }),
            };
            match written {
                Ok(()) => out.status,
                Err(e) => {
                    eprintln!("kappa: {e}");
                    e.exit_code()
                }
            }
        }
        Err(e) => {
            if let CliError::Core(Error::Unstabilized { n, m, agreements, partial }) = &e {
                let name = match &cli.command {
                    Command::Kappa { file } | Command::MirrorCheck { file, .. } => {
                        io::read_tangle(file).map(|t| t.name).unwrap_or_else(|_| "kappa".into())
                    }
                    _ => "kappa".into(),
                };
                let path = partial_path(cli, &name);
                match write_file(&path, &format::partial_json(&name, (*n, *m), *agreements, partial)) {
                    Ok(()) => eprintln!("kappa: partial data written to {}", path.display()),
                    Err(w) => eprintln!("kappa: {w}"),
                }
            }
            eprintln!("kappa: {e}");
            e.exit_code()
        }
    }
}

pub fn main() -> i32 {
    let cli = Cli::parse();
    run(&cli)
}

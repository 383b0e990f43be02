//! `primspec`: posets, Bratteli diagrams and their AF algebras from the
//! command line.
//!
//! Exit status is 0 on success, 1 when the input violates a precondition and
//! 2 on a usage error.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use primspec::algebra::Style;
use primspec::behncke_leptin::{self, Defector};
use primspec::bratteli::{self, Diagram};
use primspec::config::Bounds;
use primspec::{construction, homology, quotient, report, text, Error, Poset};

#[derive(Parser)]
#[command(
    name = "primspec",
    version,
    about = "Finite T0 spaces as primitive spectra of AF algebras"
)]
struct Cli {
    /// TOML file with bound overrides.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Render algebra expressions in ASCII.
    #[arg(long, global = true)]
    ascii: bool,
    #[command(flatten)]
    bounds: BoundFlags,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Default)]
struct BoundFlags {
    /// Largest poset whose closed sets are enumerated.
    #[arg(long, global = true)]
    closed_bound: Option<usize>,
    /// Largest poset searched for automorphisms.
    #[arg(long, global = true)]
    auto_bound: Option<usize>,
    /// Most nodes per tail period when enumerating ideals.
    #[arg(long, global = true)]
    ideal_bound: Option<usize>,
    /// Most simplices in an order complex.
    #[arg(long, global = true)]
    homology_bound: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Inspect a poset file.
    Poset {
        #[command(subcommand)]
        op: PosetOp,
    },
    /// Quotient a covered space to its poset.
    Quotient {
        file: PathBuf,
        /// Class renames, `old=new,old=new`.
        #[arg(long)]
        rename: Option<String>,
    },
    /// Bratteli diagrams.
    Af {
        #[command(subcommand)]
        op: AfOp,
    },
    /// Algebras classified by defectors.
    Bl {
        #[command(subcommand)]
        op: BlOp,
    },
    /// Integral homology of the order complex.
    Homology { file: PathBuf },
}

#[derive(Subcommand)]
enum PosetOp {
    /// Reprint in canonical text form.
    Show { file: PathBuf },
    /// Hasse diagram in DOT.
    Dot { file: PathBuf },
    /// Closed sets in canonical order.
    Closed { file: PathBuf },
    /// Maximal chains.
    Chains { file: PathBuf },
    /// Order automorphisms.
    Autos { file: PathBuf },
}

#[derive(Subcommand)]
enum AfOp {
    /// Build the diagram of a poset.
    Build {
        file: PathBuf,
        /// Levels to print.
        #[arg(long)]
        levels: Option<usize>,
        #[arg(long, conflicts_with = "json")]
        dot: bool,
        #[arg(long)]
        json: bool,
    },
    /// Check a diagram file.
    Validate {
        file: PathBuf,
        /// Report the dimension rule as warnings only.
        #[arg(long)]
        non_unital: bool,
    },
    /// All ideals of a tailed diagram.
    Ideals { file: PathBuf },
    /// The primitive spectrum as a poset.
    Prim { file: PathBuf },
    /// Whether every block is one-dimensional.
    Commutative { file: PathBuf },
    /// The diagram in DOT.
    Dot {
        file: PathBuf,
        #[arg(long)]
        levels: Option<usize>,
    },
}

#[derive(Subcommand)]
enum BlOp {
    /// Build `A(P, d)`.
    Construct {
        file: PathBuf,
        /// Values such as `x1=1,x2=inf`.
        #[arg(long)]
        defector: String,
        /// Allow zero on maximal points.
        #[arg(long = "override-51")]
        override_51: bool,
        /// Print only the fused algebra.
        #[arg(long)]
        fused: bool,
    },
    /// Search for a chain of immediate moves between two defectors.
    Equiv {
        file: PathBuf,
        #[arg(long)]
        d1: String,
        #[arg(long)]
        d2: String,
        /// Largest finite value explored.
        #[arg(long)]
        bound: Option<u64>,
    },
}

#[derive(Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
struct Config {
    bounds: Bounds,
    ascii: bool,
}

enum Failure {
    Domain(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::Domain(format!("IoError: {}: {e}", path.display())))
}

fn load_poset(path: &Path) -> Result<Poset, Failure> {
    Ok(text::parse_poset(&read(path)?)?)
}

fn load_diagram(path: &Path) -> Result<Diagram, Failure> {
    let d = Diagram::from_json(&read(path)?)?;
    d.check_shape()?;
    Ok(d)
}

fn settings(cli: &Cli) -> Result<(Bounds, Style), Failure> {
    let mut cfg = match &cli.config {
        Some(path) => toml::from_str::<Config>(&read(path)?)
            .map_err(|e| Failure::Usage(format!("config {}: {e}", path.display())))?,
        None => Config::default(),
    };
    let f = &cli.bounds;
    let b = &mut cfg.bounds;
    b.closed_sets = f.closed_bound.unwrap_or(b.closed_sets);
    b.automorphisms = f.auto_bound.unwrap_or(b.automorphisms);
    b.ideal_period_nodes = f.ideal_bound.unwrap_or(b.ideal_period_nodes);
    b.homology_chains = f.homology_bound.unwrap_or(b.homology_chains);
    cfg.bounds.validate().map_err(Failure::Usage)?;
    let style = if cli.ascii || cfg.ascii {
        Style::Ascii
    } else {
        Style::Unicode
    };
    Ok((cfg.bounds, style))
}

fn parse_renames(spec: &str) -> Result<HashMap<String, String>, Failure> {
    spec.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|item| {
            item.split_once('=')
                .map(|(a, b)| (a.trim().to_string(), b.trim().to_string()))
                .ok_or_else(|| Failure::Usage(format!("rename `{item}` is not `old=new`")))
        })
        .collect()
}

fn run(cli: &Cli) -> Result<String, Failure> {
    let (bounds, style) = settings(cli)?;
    let out = match &cli.command {
        Command::Poset { op } => match op {
            PosetOp::Show { file } => text::write_poset(&load_poset(file)?),
            PosetOp::Dot { file } => load_poset(file)?.hasse_dot(),
            PosetOp::Closed { file } => {
                report::closed_sets(&load_poset(file)?, bounds.closed_sets)?
            }
            PosetOp::Chains { file } => report::maximal_chains(&load_poset(file)?),
            PosetOp::Autos { file } => {
                report::automorphisms(&load_poset(file)?, bounds.automorphisms)?
            }
        },
        Command::Quotient { file, rename } => {
            let space = text::parse_covered_space(&read(file)?)?;
            let mut q = quotient::quotient_poset(&space);
            if let Some(spec) = rename {
                q = quotient::rename(&q, &parse_renames(spec)?)?;
            }
            text::write_poset(&q.poset)
        }
        Command::Af { op } => run_af(op, &bounds)?,
        Command::Bl { op } => run_bl(op, &bounds, style)?,
        Command::Homology { file } => {
            let p = load_poset(file)?;
            report::homology_table(&homology::homology(&p, bounds.homology_chains)?)
        }
    };
    Ok(out)
}

fn run_af(op: &AfOp, bounds: &Bounds) -> Result<String, Failure> {
    Ok(match op {
        AfOp::Build {
            file,
            levels,
            dot,
            json,
        } => {
            let p = load_poset(file)?;
            let c = construction::construct(&p, bounds.closed_sets)?;
            let levels = levels.unwrap_or(c.stable + 2);
            if *dot {
                bratteli::diagram_dot(&c.diagram, levels)
            } else if *json {
                c.diagram.to_json()
            } else {
                report::af_build(&p, &c, levels)
            }
        }
        AfOp::Validate { file, non_unital } => {
            let d = Diagram::from_json(&read(file)?)?;
            let r = bratteli::validate(&d, !non_unital);
            let mut out = String::new();
            for w in &r.warnings {
                out.push_str(&format!("warning: {w}\n"));
            }
            if !r.is_valid() {
                let errs: Vec<String> = r.errors.iter().map(|e| e.to_string()).collect();
                return Err(Failure::Domain(format!("{out}{}", errs.join("\n"))));
            }
            out.push_str("valid\n");
            out
        }
        AfOp::Ideals { file } => {
            let d = load_diagram(file)?;
            let marks = bratteli::enumerate_ideals(&d, bounds.ideal_period_nodes)?;
            let flagged = marks
                .into_iter()
                .map(|m| {
                    let prim = bratteli::is_primitive(&d, &m)?;
                    Ok((m, prim))
                })
                .collect::<Result<Vec<_>, Error>>()?;
            report::ideals(&flagged)
        }
        AfOp::Prim { file } => {
            let d = load_diagram(file)?;
            text::write_poset(&bratteli::prim_poset(&d, bounds.ideal_period_nodes)?)
        }
        AfOp::Commutative { file } => {
            let d = load_diagram(file)?;
            format!("{}\n", bratteli::is_commutative(&d))
        }
        AfOp::Dot { file, levels } => {
            let d = load_diagram(file)?;
            let depth = levels.unwrap_or(match d.tail {
                Some(_) => d.effective_levels().max(bounds.truncation_depth),
                None => d.effective_levels().min(bounds.truncation_depth),
            });
            bratteli::diagram_dot(&d, depth)
        }
    })
}

fn run_bl(op: &BlOp, bounds: &Bounds, style: Style) -> Result<String, Failure> {
    Ok(match op {
        BlOp::Construct {
            file,
            defector,
            override_51,
            fused,
        } => {
            let p = load_poset(file)?;
            let d = Defector::parse(&p, defector)?;
            let bl = behncke_leptin::algebra_of_poset(&p, &d, *override_51)?;
            if *fused {
                format!("{}\n", bl.fused().render(style))
            } else {
                report::bl_construct(&bl, style)
            }
        }
        BlOp::Equiv {
            file,
            d1,
            d2,
            bound,
        } => {
            let p = load_poset(file)?;
            let d1 = Defector::parse(&p, d1)?;
            let d2 = Defector::parse(&p, d2)?;
            let bound = bound.unwrap_or_else(|| behncke_leptin::default_bound(&d1, &d2, &p));
            let verdict =
                behncke_leptin::equivalent_defectors(&d1, &d2, &p, bound, bounds.automorphisms)?;
            format!("{verdict}\n")
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
    }
}

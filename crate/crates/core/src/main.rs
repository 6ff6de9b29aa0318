use std::io::Read;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::json;

use plumbcalc::fuzz::{FuzzConfig, Suite};
use plumbcalc::plumbing::max_terms_from_env;
use plumbcalc::report::{self, Outcome, Variant};
use plumbcalc::{Error, Graph, Plumbing, Result};

/// Exact lattice computations on negative-definite plumbing graphs.
#[derive(Parser)]
#[command(name = "plumbcalc", version)]
struct Cli {
    /// Add wall-clock time to the report's stats.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tree shape, determinant and definiteness of a graph file.
    Validate { file: String },
    /// Normalized Seiberg-Witten invariants.
    Invariants {
        file: String,
        #[arg(long)]
        all_classes: bool,
    },
    /// Virtual cohomology number of a cycle.
    H1virt {
        file: String,
        #[arg(long)]
        cycle: String,
        /// Basis of bare coordinates: E or Estar.
        #[arg(long)]
        basis: Option<String>,
    },
    /// Both sides of the duality, its incarnation, or the blow-up route.
    Duality {
        file: String,
        #[arg(long)]
        cycle: String,
        #[arg(long)]
        basis: Option<String>,
        #[arg(long, default_value = "main")]
        variant: String,
    },
    /// Projected counting function `Q_{h,I}(x)`.
    Counting {
        file: String,
        /// The point `x`.
        #[arg(long)]
        bound: String,
        /// A cycle of the class `h`, or `0`; defaults to the class of `x`.
        #[arg(long)]
        class: Option<String>,
        /// Comma-separated vertex ids of `I`; defaults to all vertices.
        #[arg(long, value_delimiter = ',')]
        project: Option<Vec<String>>,
        #[arg(long)]
        basis: Option<String>,
    },
    /// Monomial conditions at every node and branch.
    Monomial {
        file: String,
        /// Cap on the coefficients searched; exhaustive when absent.
        #[arg(long)]
        bound: Option<i64>,
    },
    /// Geometric genus of Seifert data against `sw_0` of its star graph.
    Seifert {
        /// `b0;(a1,w1),(a2,w2),...`
        #[arg(long)]
        data: String,
        #[arg(long)]
        emit_graph: bool,
    },
    /// Seeded property suites over random graphs.
    Fuzz {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 7)]
        max_vertices: usize,
        /// Comma-separated suite names; all suites when absent.
        #[arg(long, value_delimiter = ',')]
        suite: Option<Vec<String>>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Validate { .. } => "validate",
            Command::Invariants { .. } => "invariants",
            Command::H1virt { .. } => "h1virt",
            Command::Duality { .. } => "duality",
            Command::Counting { .. } => "counting",
            Command::Monomial { .. } => "monomial",
            Command::Seifert { .. } => "seifert",
            Command::Fuzz { .. } => "fuzz",
        }
    }
}

fn read_graph(file: &str) -> Result<Graph> {
    let mut text = String::new();
    let r = if file == "-" {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(file).map(|t| text = t)
    };
    r.map_err(|e| Error::Malformed(format!("{file}: {e}")))?;
    Graph::parse_json(&text)
}

fn plumbing(file: &str, max_terms: u64) -> Result<Plumbing> {
    Plumbing::with_limit(read_graph(file)?, max_terms)
}

fn run(cmd: &Command, max_terms: u64) -> Result<Outcome> {
    match cmd {
        Command::Validate { file } => Ok(report::validate(&read_graph(file)?)),
        Command::Invariants { file, all_classes } => report::invariants(&plumbing(file, max_terms)?, *all_classes),
        Command::H1virt { file, cycle, basis } => {
            report::h1virt(&plumbing(file, max_terms)?, cycle, basis.as_deref())
        }
        Command::Duality { file, cycle, basis, variant } => {
            let variant: Variant = variant.parse()?;
            report::duality(&plumbing(file, max_terms)?, cycle, basis.as_deref(), variant)
        }
        Command::Counting { file, bound, class, project, basis } => report::counting(
            &plumbing(file, max_terms)?,
            class.as_deref(),
            bound,
            project.as_deref(),
            basis.as_deref(),
        ),
        Command::Monomial { file, bound } => Ok(report::monomial(&plumbing(file, max_terms)?, *bound)),
        Command::Seifert { data, emit_graph } => report::seifert(data, *emit_graph, max_terms),
        Command::Fuzz { seed, count, max_vertices, suite } => {
            let suites = match suite {
                Some(names) => names.iter().map(|s| s.parse()).collect::<Result<Vec<Suite>>>()?,
                None => Suite::ALL.to_vec(),
            };
            if *max_vertices == 0 {
                return Err(Error::InvalidArgument("--max-vertices must be positive".into()));
            }
            let cfg = FuzzConfig { seed: *seed, count: *count, max_vertices: *max_vertices, max_terms };
            Ok(report::fuzz(&cfg, &suites))
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let max_terms = max_terms_from_env();
    let start = Instant::now();
    let (mut doc, exit, terms) = match run(&cli.command, max_terms) {
        Ok(o) => (o.report, o.exit, Some(o.terms)),
        Err(e) => {
            log::error!("{e}");
            (report::error_report(cli.command.name(), &e), report::exit_code(&e), None)
        }
    };
    let elapsed = start.elapsed();
    log::info!("{} finished in {:.3} s", cli.command.name(), elapsed.as_secs_f64());
    let mut stats = json!({"max_terms": max_terms});
    if let Some(t) = terms {
        stats["terms"] = json!(t);
    }
    if cli.timing {
        stats["wall_ms"] = json!(elapsed.as_millis() as u64);
    }
    doc["stats"] = stats;
    println!("{}", serde_json::to_string_pretty(&doc).expect("report serializes"));
    ExitCode::from(exit as u8)
}

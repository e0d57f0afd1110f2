//! `ctn`: enumeration, verification and rank search for the full
//! contraction semigroups of a finite chain.

mod cache;
mod commands;
mod report;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::SweepOptions;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Lines,
    Csv,
    Json,
}

/// Inclusive degree range: `A..B` or a single `N`.
#[derive(Debug, Clone)]
struct DegreeRange(Vec<usize>);

impl std::str::FromStr for DegreeRange {
    type Err = String;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let parse_end = |s: &str| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| format!("bad degree {s:?} in range {text:?}"))
        };
        let (lo, hi) = match text.split_once("..") {
            Some((lo, hi)) => (parse_end(lo)?, parse_end(hi)?),
            None => {
                let n = parse_end(text)?;
                (n, n)
            }
        };
        if lo < 1 || hi < lo {
            return Err(format!("empty or invalid range {text:?}"));
        }
        Ok(DegreeRange((lo..=hi).collect()))
    }
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// Output format
    #[arg(long, value_enum, default_value = "lines")]
    format: OutputFormat,
    /// Worker threads (defaults to the number of cores)
    #[arg(long)]
    jobs: Option<usize>,
    /// Cache directory for filter enumerations and certificates
    /// (env CTN_CACHE_DIR)
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    /// Lift the n^n filter-enumeration ceiling
    #[arg(long)]
    force_scale: bool,
    /// Closure-evaluation budget per rank search
    #[arg(long, default_value_t = 10_000_000)]
    budget: u64,
}

impl CommonArgs {
    fn sweep_options(&self) -> SweepOptions {
        let cache_dir = self
            .cache_dir
            .clone()
            .or_else(|| std::env::var_os("CTN_CACHE_DIR").map(PathBuf::from));
        SweepOptions {
            format: self.format,
            cache_dir,
            force_scale: self.force_scale,
            budget: self.budget,
        }
    }

    fn install_pool(&self) {
        if let Some(jobs) = self.jobs {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs)
                .build_global();
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "ctn",
    version,
    about = "Full contractions of a finite chain: enumeration, Green's structure, exact ranks",
    after_help = "Family specs: ct, oct, orct, reg-oct, reg-orct, e-oct, e-orct, \
                  k:<p>, k*:<p>, j:<p>, e:<p>, l:<p>, m:<p>. Exit codes: 0 all \
                  claims match, 1 mismatch, 2 usage or scale error, 3 inconclusive."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Count families by brute force and compare with the closed formulas
    Count {
        /// Comma-separated family specs
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "reg-oct,reg-orct,e-oct,e-orct"
        )]
        families: Vec<String>,
        /// Degree range A..B
        #[arg(long, default_value = "1..7")]
        n: DegreeRange,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Exact minimal-generating-set sizes with certificates
    Rank {
        /// Comma-separated targets: l:<p>, m:<p>, q:<p>, w:<p>, reg-oct,
        /// reg-orct, e-oct, e-orct
        #[arg(long, value_delimiter = ',', default_value = "reg-oct,reg-orct,e-orct")]
        families: Vec<String>,
        /// Degree range A..B
        #[arg(long, default_value = "1..6")]
        n: DegreeRange,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// List a family's elements in canonical order
    Enumerate {
        /// Family spec
        #[arg(long)]
        family: String,
        /// Degree
        #[arg(long)]
        n: usize,
        /// Enumeration route: filter, construct, or both (cross-checked)
        #[arg(long)]
        method: Option<String>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Shortest factorization of an element over a generator list
    Factorize {
        /// Target element literal, e.g. "[1,2,2,2]"
        #[arg(long)]
        element: String,
        /// Generators: "corners", a family spec (optionally spec:<n>), or
        /// literals separated by semicolons
        #[arg(long)]
        gens: String,
        /// Degree (defaults to the element's)
        #[arg(long)]
        n: Option<usize>,
        /// Height parameter for corners or rees mode
        #[arg(long)]
        p: Option<usize>,
        /// plain or rees
        #[arg(long, default_value = "plain")]
        mode: String,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Green's class partitions and the structure report
    Greens {
        /// Family spec
        #[arg(long)]
        family: String,
        /// Degree
        #[arg(long)]
        n: usize,
        /// Also derive the classes from principal ideals and cross-check
        #[arg(long)]
        r#abstract: bool,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Counts, ranks and structural checks in one sweep
    Verify {
        /// Degree range for every section (defaults: counts 1..7,
        /// ranks 1..6, structure 2..6)
        #[arg(long)]
        n: Option<DegreeRange>,
        #[command(flatten)]
        common: CommonArgs,
    },
}

fn main() {
    let cli = Cli::parse();
    let code = match &cli.command {
        Command::Count {
            families,
            n,
            common,
        } => {
            common.install_pool();
            commands::cmd_count(families, &n.0, &common.sweep_options())
        }
        Command::Rank {
            families,
            n,
            common,
        } => {
            common.install_pool();
            commands::cmd_rank(families, &n.0, &common.sweep_options())
        }
        Command::Enumerate {
            family,
            n,
            method,
            common,
        } => {
            common.install_pool();
            commands::cmd_enumerate(family, *n, method.as_deref(), &common.sweep_options())
        }
        Command::Factorize {
            element,
            gens,
            n,
            p,
            mode,
            common,
        } => commands::cmd_factorize(element, gens, *n, *p, mode, &common.sweep_options()),
        Command::Greens {
            family,
            n,
            r#abstract,
            common,
        } => {
            common.install_pool();
            commands::cmd_greens(family, *n, *r#abstract, &common.sweep_options())
        }
        Command::Verify { n, common } => {
            common.install_pool();
            let opts = common.sweep_options();
            let (counts, ranks, structure) = match n {
                Some(range) => (range.0.clone(), range.0.clone(), range.0.clone()),
                None => ((1..=7).collect(), (1..=6).collect(), (2..=6).collect()),
            };
            commands::cmd_verify(&counts, &ranks, &structure, &opts)
        }
    };
    std::process::exit(code);
}

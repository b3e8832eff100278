use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use quadgolay::pipeline::{self, merge_shards, RunConfig};
use quadgolay::{Error, FilterSchedule};

#[derive(Parser, Debug)]
#[command(
    name = "quadgolay",
    version,
    about = "Enumerate complex Golay pairs over {1, i, -1, -i}"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Enumerate and filter the even and odd half-sequences.
    Preprocess(Common),
    /// Join half-sequences into candidate first sequences.
    Join {
        #[command(flatten)]
        common: Common,
        /// Only merge existing shard outputs.
        #[arg(long)]
        merge_only: bool,
    },
    /// Find every partner of each candidate first sequence.
    Pairs(Common),
    /// Close the pairs under equivalence and record the counts row.
    Classify(Common),
    /// Run every phase.
    Pipeline(Common),
    /// Compare a counts row with the published tables.
    Verify {
        #[arg(short = 'n', long = "length")]
        n: usize,
        /// Directory holding counts.tsv, or the file itself.
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
}

#[derive(Args, Debug)]
struct Common {
    #[arg(short = 'n', long = "length")]
    n: usize,
    #[arg(long, default_value_t = 1)]
    shards: usize,
    /// Process a single shard (0-based).
    #[arg(long)]
    shard: Option<usize>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long, default_value_t = 128)]
    coarse_points: usize,
    #[arg(long, default_value_t = 3)]
    refine_rounds: usize,
    #[arg(long, default_value_t = 1e-3)]
    epsilon: f64,
    #[arg(long, default_value_t = 1024)]
    final_points: usize,
    /// Recompute join spectra on demand instead of caching them.
    #[arg(long)]
    low_memory: bool,
}

impl Common {
    fn config(&self) -> RunConfig {
        RunConfig {
            n: self.n,
            shards: self.shards,
            shard_index: self.shard,
            out_dir: self.out.clone(),
            schedule: FilterSchedule {
                coarse_points: self.coarse_points,
                refine_rounds: self.refine_rounds,
                epsilon: self.epsilon,
                final_points: self.final_points,
            },
            low_memory: self.low_memory,
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Preprocess(c) => {
            let lists = pipeline::run_preprocess(&c.config())?;
            println!("L_even\t{}\nL_odd\t{}", lists.even.len(), lists.odd.len());
        }
        Command::Join { common, merge_only } => {
            let cfg = common.config();
            let found = if merge_only {
                cfg.validate()?;
                merge_shards(&cfg)?
            } else {
                pipeline::run_join(&cfg)?.0
            };
            match cfg.shard_index {
                Some(k) if !merge_only => println!("L_A shard {k}\t{}", found.len()),
                _ => println!("L_A\t{}", found.len()),
            }
        }
        Command::Pairs(c) => {
            let (pairs, _) = pipeline::run_pairs(&c.config())?;
            println!("pairs\t{}", pairs.len());
        }
        Command::Classify(c) => {
            let row = pipeline::run_classify(&c.config())?;
            println!("{}\n{row}", pipeline::COUNTS_HEADER);
        }
        Command::Pipeline(c) => {
            let row = pipeline::run_pipeline(&c.config())?;
            println!("{}\n{row}", pipeline::COUNTS_HEADER);
        }
        Command::Verify { n, out } => {
            let path = if out.is_dir() {
                out.join("counts.tsv")
            } else {
                out
            };
            let report = pipeline::verify(n, &path)?;
            for note in &report.list_notes {
                println!("note: {note}");
            }
            if !report.reference_known {
                println!("FAIL n={n}: no reference counts");
                return Ok(ExitCode::from(1));
            }
            if report.passed() {
                println!("PASS n={n}");
            } else {
                println!("FAIL n={n}: {}", report.diffs.join(", "));
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Domain(_) | Error::MissingRow(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

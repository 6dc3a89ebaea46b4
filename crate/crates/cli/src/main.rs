//! `wcc` — score graph partitions with the triangle-based community metric,
//! alongside modularity, conductance, per-community statistics, partition
//! and ranking agreement, fixture generation and an exhaustive oracle.

use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use wcc_core::compare::{kendall, nmi_entries, RankSeries};
use wcc_core::error::Error;
use wcc_core::fixtures::{generate, FixtureKind};
use wcc_core::graph::{load_edge_list, write_edge_list, Graph};
use wcc_core::oracle::exhaustive_best_partition;
use wcc_core::partition::{parse_partition_file, Partition};
use wcc_core::quality::{
    conductance, modularity, partition_stats, percentile_report, report_to_csv, stats_to_csv,
    ConductanceVariant,
};
use wcc_core::wcc::wcc_partition;

const EXIT_INPUT_ERROR: u8 = 2;
const EXIT_REFUSED: u8 = 3;

#[derive(Parser)]
#[command(name = "wcc", version, about = "Triangle-based community quality toolkit")]
struct Cli {
    /// Worker threads for per-community evaluation (0 = one per core).
    /// Results are identical at any thread count.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    /// Seed for randomized fixtures.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Score a partition: overall and per-community WCC, modularity and
    /// per-community conductance.
    Evaluate {
        /// Edge-list file ("-" reads stdin).
        #[arg(long)]
        graph: PathBuf,
        /// Partition file, one `vertex<TAB>community` per line.
        #[arg(long)]
        partition: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long, value_enum, default_value_t = ConductanceArg::Standard)]
        conductance: ConductanceArg,
    },
    /// Per-community statistics (triangle density, edge cut, density,
    /// diameter, bridge ratio, conductance) as CSV.
    Stats {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        partition: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long, value_enum, default_value_t = ConductanceArg::Standard)]
        conductance: ConductanceArg,
    },
    /// Pool communities from one or more partitions, rank them by score and
    /// report per-group mean statistics in twenty 5-percentile groups.
    Report {
        #[arg(long)]
        graph: PathBuf,
        /// Partition file; repeat to pool several runs.
        #[arg(long = "partition", required = true)]
        partitions: Vec<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long, value_enum, default_value_t = ConductanceArg::Standard)]
        conductance: ConductanceArg,
    },
    /// Normalized mutual information between two partition files covering
    /// the same vertices.
    Compare {
        /// Exactly two partition files.
        #[arg(long = "partition", required = true)]
        partitions: Vec<PathBuf>,
    },
    /// Kendall tau-b with a 5% significance decision between two
    /// `label,score` rankings.
    Rank {
        series_a: PathBuf,
        series_b: PathBuf,
    },
    /// Emit a synthetic fixture as an edge list on stdout.
    ///
    /// Kinds and parameters: clique K | cycle K | ring-of-cliques M K |
    /// bridged-cliques R S | shared-vertex-cliques R S | clique-satellite R D |
    /// er-random N P (seeded via --seed).
    Generate {
        kind: String,
        params: Vec<String>,
    },
    /// Exhaustively search the best-scoring partition of a small graph
    /// (at most 12 vertices). Prints the partition in partition-file form.
    Oracle {
        #[arg(long)]
        graph: PathBuf,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ConductanceArg {
    Standard,
    PaperLiteral,
}

impl From<ConductanceArg> for ConductanceVariant {
    fn from(arg: ConductanceArg) -> ConductanceVariant {
        match arg {
            ConductanceArg::Standard => ConductanceVariant::Standard,
            ConductanceArg::PaperLiteral => ConductanceVariant::PaperLiteral,
        }
    }
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Failure {
        Failure {
            code: EXIT_INPUT_ERROR,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Failure {
        let code = match err {
            Error::TooLarge { .. } => EXIT_REFUSED,
            _ => EXIT_INPUT_ERROR,
        };
        Failure {
            code,
            message: err.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(err: io::Error) -> Failure {
        Failure::input(err.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads > 0 {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global();
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Evaluate {
            graph,
            partition,
            format,
            conductance,
        } => cmd_evaluate(&graph, &partition, format, conductance.into()),
        Command::Stats {
            graph,
            partition,
            format,
            conductance,
        } => cmd_stats(&graph, &partition, format, conductance.into()),
        Command::Report {
            graph,
            partitions,
            format,
            conductance,
        } => cmd_report(&graph, &partitions, format, conductance.into()),
        Command::Compare { partitions } => cmd_compare(&partitions),
        Command::Rank { series_a, series_b } => cmd_rank(&series_a, &series_b),
        Command::Generate { kind, params } => cmd_generate(&kind, &params, cli.seed),
        Command::Oracle { graph } => cmd_oracle(&graph),
    }
}

fn open_input(path: &Path) -> Result<Box<dyn BufRead>, Failure> {
    if path.as_os_str() == "-" {
        Ok(Box::new(BufReader::new(io::stdin())))
    } else {
        let file = File::open(path)
            .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
        Ok(Box::new(BufReader::new(file)))
    }
}

fn load_graph(path: &Path) -> Result<Graph, Failure> {
    Ok(load_edge_list(open_input(path)?)?)
}

fn load_partition(graph: &Graph, path: &Path) -> Result<Partition, Failure> {
    let entries = parse_partition_file(open_input(path)?)?;
    Ok(Partition::from_entries(graph, &entries)?)
}

fn print_json<T: Serialize>(value: &T) -> Result<(), Failure> {
    let mut stdout = io::stdout().lock();
    serde_json::to_writer_pretty(&mut stdout, value)
        .map_err(|e| Failure::input(e.to_string()))?;
    writeln!(stdout)?;
    Ok(())
}

#[derive(Serialize)]
struct EvaluateCommunity {
    id: String,
    size: usize,
    wcc: f64,
    conductance: f64,
}

#[derive(Serialize)]
struct EvaluateReport {
    wcc: f64,
    modularity: Option<f64>,
    communities: Vec<EvaluateCommunity>,
}

fn cmd_evaluate(
    graph_path: &Path,
    partition_path: &Path,
    format: Format,
    variant: ConductanceVariant,
) -> Result<(), Failure> {
    let graph = load_graph(graph_path)?;
    let partition = load_partition(&graph, partition_path)?;
    let score = wcc_partition(&graph, &partition)?;
    // Modularity is undefined on an edgeless graph; report null there
    // rather than failing an otherwise valid score request.
    let q = modularity(&graph, &partition).ok();
    let mut communities = Vec::with_capacity(score.communities.len());
    for (cid, community) in score.communities.iter().enumerate() {
        let c = conductance(&graph, partition.community(cid as u32), variant)?;
        communities.push(EvaluateCommunity {
            id: community.id.clone(),
            size: community.size,
            wcc: community.wcc,
            conductance: c,
        });
    }
    let report = EvaluateReport {
        wcc: score.wcc,
        modularity: q,
        communities,
    };
    match format {
        Format::Json => print_json(&report)?,
        Format::Csv => {
            let mut out = io::stdout().lock();
            writeln!(out, "# wcc {}", report.wcc)?;
            if let Some(q) = report.modularity {
                writeln!(out, "# modularity {q}")?;
            }
            writeln!(out, "id,size,wcc,conductance")?;
            for c in &report.communities {
                writeln!(out, "{},{},{},{}", c.id, c.size, c.wcc, c.conductance)?;
            }
        }
    }
    Ok(())
}

fn cmd_stats(
    graph_path: &Path,
    partition_path: &Path,
    format: Format,
    variant: ConductanceVariant,
) -> Result<(), Failure> {
    let graph = load_graph(graph_path)?;
    let partition = load_partition(&graph, partition_path)?;
    let records = partition_stats(&graph, &partition, variant)?;
    match format {
        Format::Csv => print!("{}", stats_to_csv(&records)),
        Format::Json => print_json(&records)?,
    }
    Ok(())
}

fn cmd_report(
    graph_path: &Path,
    partition_paths: &[PathBuf],
    format: Format,
    variant: ConductanceVariant,
) -> Result<(), Failure> {
    let graph = load_graph(graph_path)?;
    let mut pool = Vec::new();
    for (index, path) in partition_paths.iter().enumerate() {
        let partition = load_partition(&graph, path)?;
        let mut records = partition_stats(&graph, &partition, variant)?;
        // Communities from different runs may share labels; qualify them
        // with the partition's position on the command line.
        for record in &mut records {
            record.id = format!("{}:{}", index, record.id);
        }
        pool.extend(records);
    }
    let report = percentile_report(&pool)?;
    match format {
        Format::Csv => print!("{}", report_to_csv(&report)),
        Format::Json => print_json(&report)?,
    }
    Ok(())
}

fn cmd_compare(partitions: &[PathBuf]) -> Result<(), Failure> {
    let [first, second] = partitions else {
        return Err(Failure::input(format!(
            "compare needs exactly two --partition files, got {}",
            partitions.len()
        )));
    };
    let a = parse_partition_file(open_input(first)?)?;
    let b = parse_partition_file(open_input(second)?)?;

    #[derive(Serialize)]
    struct CompareOutput {
        nmi: f64,
    }
    print_json(&CompareOutput {
        nmi: nmi_entries(&a, &b)?,
    })
}

fn cmd_rank(series_a: &Path, series_b: &Path) -> Result<(), Failure> {
    let a = RankSeries::from_csv(open_input(series_a)?)?;
    let b = RankSeries::from_csv(open_input(series_b)?)?;
    let outcome = kendall(&a, &b)?;

    #[derive(Serialize)]
    struct RankOutput {
        tau: f64,
        significant: bool,
    }
    print_json(&RankOutput {
        tau: outcome.tau,
        significant: outcome.significant,
    })
}

fn cmd_generate(kind: &str, params: &[String], seed: u64) -> Result<(), Failure> {
    let kind = parse_fixture_kind(kind, params)?;
    let graph = generate(&kind, seed)?;
    let stdout = io::stdout().lock();
    write_edge_list(&graph, stdout)?;
    Ok(())
}

fn parse_fixture_kind(kind: &str, params: &[String]) -> Result<FixtureKind, Failure> {
    let int = |i: usize| -> Result<u32, Failure> {
        params
            .get(i)
            .ok_or_else(|| Failure::input(format!("{kind} needs parameter {}", i + 1)))?
            .parse::<u32>()
            .map_err(|e| Failure::input(format!("parameter {}: {e}", i + 1)))
    };
    let float = |i: usize| -> Result<f64, Failure> {
        params
            .get(i)
            .ok_or_else(|| Failure::input(format!("{kind} needs parameter {}", i + 1)))?
            .parse::<f64>()
            .map_err(|e| Failure::input(format!("parameter {}: {e}", i + 1)))
    };
    let expect = |count: usize| -> Result<(), Failure> {
        if params.len() != count {
            Err(Failure::input(format!(
                "{kind} takes {count} parameter(s), got {}",
                params.len()
            )))
        } else {
            Ok(())
        }
    };
    let normalized = kind.replace('_', "-");
    Ok(match normalized.as_str() {
        "clique" => {
            expect(1)?;
            FixtureKind::Clique { size: int(0)? }
        }
        "cycle" => {
            expect(1)?;
            FixtureKind::Cycle { length: int(0)? }
        }
        "ring-of-cliques" => {
            expect(2)?;
            FixtureKind::RingOfCliques {
                cliques: int(0)?,
                clique_size: int(1)?,
            }
        }
        "bridged-cliques" => {
            expect(2)?;
            FixtureKind::BridgedCliques {
                first: int(0)?,
                second: int(1)?,
            }
        }
        "shared-vertex-cliques" => {
            expect(2)?;
            FixtureKind::SharedVertexCliques {
                first: int(0)?,
                second: int(1)?,
            }
        }
        "clique-satellite" => {
            expect(2)?;
            FixtureKind::CliqueSatellite {
                clique_size: int(0)?,
                links: int(1)?,
            }
        }
        "er-random" => {
            expect(2)?;
            FixtureKind::ErRandom {
                vertices: int(0)?,
                edge_probability: float(1)?,
            }
        }
        other => {
            return Err(Failure::input(format!(
                "unknown fixture kind {other:?}; known kinds: clique, cycle, \
                 ring-of-cliques, bridged-cliques, shared-vertex-cliques, \
                 clique-satellite, er-random"
            )))
        }
    })
}

fn cmd_oracle(graph_path: &Path) -> Result<(), Failure> {
    let graph = load_graph(graph_path)?;
    let (best, score) = exhaustive_best_partition(&graph)?;
    let mut out = io::stdout().lock();
    for cid in 0..best.community_count() as u32 {
        for v in best.community(cid).iter() {
            writeln!(out, "{}\t{}", graph.label(v), best.label(cid))?;
        }
    }
    eprintln!("wcc {score}");
    Ok(())
}

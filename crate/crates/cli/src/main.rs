use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use parikh_grid::export::{cover_table, grid_dot, render_table, to_json, GridExport};
use parikh_grid::search::{ProgressRecord, ProgressSink};
use parikh_grid::{
    bounds, construct_family, covset, enumerate_all_pdb, is_realizable, is_realizable_walk, mincov_explore,
    parse_vector_list, search, step_incidences, verify, walk_of, Alphabet, BowfreeReport, Error, Family, Letter,
    ParikhVector, Realizability, Refutation, SearchConfig, SearchOutcome, SearchStatus, StepIncidence, Target, Walk,
};

#[derive(Parser)]
#[command(name = "pdbgrid", version, about = "Parikh-de-Bruijn grids, covering words and shortest-word search")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    format: Format,

    /// Write the result here instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
    Dot,
}

#[derive(Args)]
struct Params {
    #[arg(long, short)]
    k: usize,
    #[arg(long, short)]
    sigma: usize,
}

#[derive(Args)]
struct WordParams {
    word: String,
    #[arg(long, short)]
    k: usize,
    /// Alphabet size; defaults to one past the largest letter used.
    #[arg(long, short)]
    sigma: Option<usize>,
}

#[derive(Args)]
struct Parallel {
    /// Worker threads.
    #[arg(long, env = "PDBGRID_THREADS", default_value_t = default_threads())]
    threads: usize,
    /// Give up after exploring this many nodes (0 means no limit).
    #[arg(long, default_value_t = parikh_grid::search::DEFAULT_NODE_BUDGET)]
    budget: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    BinaryPdb,
    K2Eulerian,
    KcoverNotK1,
}

#[derive(Clone, Copy, ValueEnum)]
enum TargetArg {
    Shortest,
    Pdb,
    Length,
}

#[derive(Subcommand)]
enum Command {
    /// The PdB-grid H(k, σ) as JSON or DOT.
    Grid(Params),
    /// Check whether a word is k-covering or PdB.
    Verify(WordParams),
    /// The walk a word traces in the grid; with --vertices, decide whether a
    /// vertex sequence is spelled by some word.
    Walk {
        word: Option<String>,
        #[arg(long, short)]
        k: usize,
        #[arg(long, short)]
        sigma: Option<usize>,
        /// Vertex list such as "(3,0,0),(2,1,0)".
        #[arg(long, conflicts_with = "word")]
        vertices: Option<String>,
    },
    /// Decide whether a set of vectors is the order-k Parikh set of a word.
    Realize {
        vectors: String,
        #[arg(long, short)]
        k: usize,
        #[arg(long, short)]
        sigma: usize,
    },
    /// Exhaustive search for a shortest covering word or a PdB word.
    Search {
        #[command(flatten)]
        params: Params,
        #[arg(long, value_enum, default_value_t = TargetArg::Shortest)]
        target: TargetArg,
        /// Word length for --target length.
        #[arg(long, required_if_eq("target", "length"))]
        length: Option<usize>,
        /// Stop deepening after this length.
        #[arg(long)]
        max_len: Option<usize>,
        #[command(flatten)]
        parallel: Parallel,
        /// No progress lines on standard error.
        #[arg(long)]
        quiet: bool,
    },
    /// Length lower bounds and what is known about PdB words.
    Bounds(Params),
    /// The orders k for which a word is k-covering.
    Covset {
        word: String,
        #[arg(long, short)]
        sigma: Option<usize>,
    },
    /// Build a word from one of the known families.
    Construct {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[command(flatten)]
        params: Params,
    },
    /// All PdB words up to reversal and relabeling.
    EnumeratePdb {
        #[command(flatten)]
        params: Params,
        /// Allow more than 20 vectors.
        #[arg(long)]
        force: bool,
        #[command(flatten)]
        parallel: Parallel,
    },
    /// Smallest fraction of order-(k-1) vectors met by short k-covering words.
    Mincov {
        #[command(flatten)]
        params: Params,
        #[arg(long)]
        max_len: usize,
        #[command(flatten)]
        parallel: Parallel,
    },
}

fn default_threads() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

enum Failure {
    Usage(String),
    Library(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Library(e)
    }
}

type Run = Result<(String, bool), Failure>;

fn parse_word(text: &str, sigma: Option<usize>) -> Result<(Vec<Letter>, usize), Error> {
    match sigma {
        Some(s) => Ok((Alphabet::new(s)?.parse(text)?, s)),
        None => {
            let w = Alphabet::new(26)?.parse(text)?;
            let s = w.iter().max().map_or(1, |&m| m as usize + 1);
            Ok((w, s))
        }
    }
}

fn unsupported(format: Format, what: &str) -> Failure {
    let name = match format {
        Format::Json => "json",
        Format::Table => "table",
        Format::Dot => "dot",
    };
    Failure::Usage(format!("{what} has no {name} output"))
}

fn render<T: Serialize>(
    format: Format,
    what: &str,
    body: &T,
    table: impl FnOnce() -> Option<String>,
) -> Result<String, Failure> {
    match format {
        Format::Json => Ok(to_json(body)),
        Format::Table => table().ok_or_else(|| unsupported(format, what)),
        Format::Dot => Err(unsupported(format, what)),
    }
}

#[derive(Serialize)]
struct WalkReport {
    k: usize,
    sigma: usize,
    word: String,
    vertices: Vec<ParikhVector>,
    itinerary: Vec<ParikhVector>,
    bowfree: bool,
    bowfree_consequences: BowfreeReport,
    steps: Vec<StepIncidence>,
}

#[derive(Serialize)]
struct WalkCheckReport {
    k: usize,
    sigma: usize,
    vertices: Vec<ParikhVector>,
    realizable: bool,
    word: Option<String>,
    refutation: Option<Refutation>,
}

#[derive(Serialize)]
struct RealizeReport {
    k: usize,
    sigma: usize,
    realizable: bool,
    witness: Option<String>,
    components: Option<(Vec<ParikhVector>, Vec<ParikhVector>)>,
}

#[derive(Serialize)]
struct CovsetReport {
    sigma: usize,
    word: String,
    covset: Vec<usize>,
}

#[derive(Serialize)]
struct ConstructReport {
    family: Family,
    k: usize,
    sigma: usize,
    word: String,
    length: usize,
    is_covering: bool,
    is_pdb: bool,
    excess: Option<u64>,
}

fn search_config(params: &Params, parallel: &Parallel) -> SearchConfig {
    SearchConfig::new(params.k, params.sigma).workers(parallel.threads).budget(if parallel.budget == 0 {
        None
    } else {
        Some(parallel.budget)
    })
}

fn search_table(o: &SearchOutcome) -> String {
    let status = match o.status {
        SearchStatus::Found => "found".to_string(),
        SearchStatus::RefutedUpTo(l) => format!("refuted up to {l}"),
        SearchStatus::BudgetExhausted => "budget exhausted".to_string(),
    };
    let row = vec![
        o.sigma.to_string(),
        o.k.to_string(),
        o.witness.clone().unwrap_or_else(|| "-".into()),
        o.witness.as_ref().map_or_else(|| "-".into(), |w| w.len().to_string()),
        o.minimal.to_string(),
        status,
        o.stats.nodes.to_string(),
    ];
    render_table(&["sigma", "k", "word", "length", "minimal", "status", "nodes"], &[row])
}

fn run(cli: &Cli) -> Run {
    let format = cli.format;
    match &cli.command {
        Command::Grid(p) => {
            let grid = parikh_grid::PdbGrid::build(p.k, p.sigma)?;
            let text = match format {
                Format::Dot => grid_dot(&grid)?,
                Format::Json => to_json(&GridExport::from_grid(&grid)?),
                Format::Table => return Err(unsupported(format, "grid")),
            };
            Ok((text, true))
        }
        Command::Verify(w) => {
            let (word, sigma) = parse_word(&w.word, w.sigma)?;
            let report = verify(&word, w.k, sigma)?;
            let text = render(format, "verify", &report, || Some(cover_table(std::slice::from_ref(&report))))?;
            Ok((text, report.is_covering))
        }
        Command::Walk { word, k, sigma, vertices } => {
            if let Some(list) = vertices {
                let vs = parse_vector_list(list)?;
                let s = sigma.or_else(|| vs.first().map(ParikhVector::sigma)).unwrap_or(1);
                let walk = Walk::new(*k, vs.clone(), None)?;
                let r = is_realizable_walk(&walk)?;
                let alphabet = Alphabet::new(s)?;
                let report = match &r {
                    Realizability::Realizable { word, .. } => WalkCheckReport {
                        k: *k,
                        sigma: s,
                        vertices: vs,
                        realizable: true,
                        word: Some(alphabet.render(word)),
                        refutation: None,
                    },
                    Realizability::Unrealizable(why) => WalkCheckReport {
                        k: *k,
                        sigma: s,
                        vertices: vs,
                        realizable: false,
                        word: None,
                        refutation: Some(*why),
                    },
                };
                let text = render(format, "walk", &report, || None)?;
                return Ok((text, report.realizable));
            }
            let text = word.as_deref().ok_or_else(|| Failure::Usage("walk needs a word or --vertices".into()))?;
            let (w, s) = parse_word(text, *sigma)?;
            let walk = walk_of(&w, *k, s)?;
            let report = WalkReport {
                k: *k,
                sigma: s,
                word: Alphabet::new(s)?.render(&w),
                itinerary: walk.itinerary().vertices().to_vec(),
                bowfree: walk.is_bowfree(),
                bowfree_consequences: parikh_grid::check_bowfree_consequences(&w, *k, s)?,
                steps: step_incidences(&w, *k, s)?,
                vertices: walk.vertices,
            };
            let table = || {
                let rows: Vec<Vec<String>> = report
                    .vertices
                    .iter()
                    .enumerate()
                    .map(|(i, p)| {
                        let step = report.steps.get(i);
                        let cell = |f: fn(&StepIncidence) -> &ParikhVector| {
                            step.map_or_else(|| "-".to_string(), |s| f(s).to_string())
                        };
                        vec![i.to_string(), p.to_string(), cell(|s| &s.join), cell(|s| &s.meet)]
                    })
                    .collect();
                Some(render_table(&["step", "order k", "order k+1", "order k-1"], &rows))
            };
            Ok((render(format, "walk", &report, table)?, true))
        }
        Command::Realize { vectors, k, sigma } => {
            let vs = parse_vector_list(vectors)?;
            if let Some(bad) = vs.iter().find(|p| p.order() != *k || p.sigma() != *sigma) {
                return Err(Failure::Library(Error::InvalidInput(format!(
                    "{bad} is not an order-{k} vector over {sigma} letters"
                ))));
            }
            let r = is_realizable(&vs)?;
            let alphabet = Alphabet::new(*sigma)?;
            let report = RealizeReport {
                k: *k,
                sigma: *sigma,
                realizable: r.realizable,
                witness: r.witness.as_deref().map(|w| alphabet.render(w)),
                components: r.refutation,
            };
            Ok((render(format, "realize", &report, || None)?, report.realizable))
        }
        Command::Search { params, target, length, max_len, parallel, quiet } => {
            let mut cfg = search_config(params, parallel).max_len(*max_len);
            cfg.target = match target {
                TargetArg::Shortest => Target::ShortestCovering,
                TargetArg::Pdb => Target::PdbOnly,
                TargetArg::Length => Target::ExistenceAtLength(length.expect("required by clap")),
            };
            if !quiet {
                let sink: ProgressSink = Arc::new(|r: &ProgressRecord| {
                    eprintln!("{}", serde_json::to_string(r).expect("progress serializes"));
                });
                cfg.progress = Some(sink);
            }
            let o = search(&cfg)?;
            let found = o.status == SearchStatus::Found;
            Ok((render(format, "search", &o, || Some(search_table(&o)))?, found))
        }
        Command::Bounds(p) => {
            let b = bounds(p.k, p.sigma)?;
            let table = || {
                let row = vec![
                    b.sigma.to_string(),
                    b.k.to_string(),
                    b.pdb_length.to_string(),
                    b.counting_bound.to_string(),
                    b.shortest_lower_bound.to_string(),
                    format!("{:?}", b.known_verdict).to_lowercase(),
                ];
                Some(render_table(&["sigma", "k", "pdb_length", "counting_bound", "lower_bound", "verdict"], &[row]))
            };
            Ok((render(format, "bounds", &b, table)?, true))
        }
        Command::Covset { word, sigma } => {
            let (w, s) = parse_word(word, *sigma)?;
            let report = CovsetReport {
                sigma: s,
                word: Alphabet::new(s)?.render(&w),
                covset: covset(&w, s)?.into_iter().collect(),
            };
            Ok((render(format, "covset", &report, || None)?, true))
        }
        Command::Construct { family, params } => {
            let family = match family {
                FamilyArg::BinaryPdb => Family::BinaryPdb,
                FamilyArg::K2Eulerian => Family::K2Eulerian,
                FamilyArg::KcoverNotK1 => Family::KcoverNotK1,
            };
            let w = construct_family(family, params.k, params.sigma)?;
            let r = verify(&w, params.k, params.sigma)?;
            let report = ConstructReport {
                family,
                k: r.k,
                sigma: r.sigma,
                word: r.word.clone(),
                length: r.length,
                is_covering: r.is_covering,
                is_pdb: r.is_pdb,
                excess: r.excess,
            };
            Ok((render(format, "construct", &report, || Some(cover_table(&[r])))?, true))
        }
        Command::EnumeratePdb { params, force, parallel } => {
            let e = enumerate_all_pdb(&search_config(params, parallel), *force)?;
            let table = || {
                let rows: Vec<Vec<String>> = e.classes.iter().map(|c| vec![c.clone()]).collect();
                Some(render_table(&["class"], &rows))
            };
            Ok((render(format, "enumerate-pdb", &e, table)?, !e.classes.is_empty()))
        }
        Command::Mincov { params, max_len, parallel } => {
            let m = mincov_explore(&search_config(params, parallel), *max_len)?;
            let table = || {
                let row = vec![
                    m.sigma.to_string(),
                    m.k.to_string(),
                    m.max_len.to_string(),
                    m.numerator.map_or_else(|| "-".into(), |n| format!("{n}/{}", m.denominator)),
                    m.witness.clone().unwrap_or_else(|| "-".into()),
                    m.estimate_only.to_string(),
                ];
                Some(render_table(&["sigma", "k", "max_len", "mincov", "witness", "estimate_only"], &[row]))
            };
            Ok((render(format, "mincov", &m, table)?, m.numerator.is_some()))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((mut text, positive)) => {
            if !text.ends_with('\n') {
                text.push('\n');
            }
            let written = match &cli.output {
                Some(path) => std::fs::write(path, &text),
                None => std::io::stdout().write_all(text.as_bytes()),
            };
            if let Err(e) = written {
                eprintln!("error: cannot write output: {e}");
                return ExitCode::from(2);
            }
            ExitCode::from(if positive { 0 } else { 1 })
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Library(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

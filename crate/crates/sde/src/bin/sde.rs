// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use sde::edgelist::parse_weighted_edge_list;
use sde::graph6::parse_graph6;
use sde::pipeline::{self, AsymptoticFamily, PipelineError};
use sde::report::{read_metric_table, records_to_csv_string, CorrelationReport};
use sde_core::families::{FamilySpec, RandomModel};
use sde_core::{Graph, SdeOptions};

#[derive(Parser)]
#[command(
    name = "sde",
    version,
    about = "Spectral degree exponent of weighted undirected graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Root-finding tolerance on q.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Worker threads (default: all cores).
    #[arg(long)]
    jobs: Option<usize>,
    /// Write the main output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Exponent, bounds and solver diagnostics for one graph.
    Compute {
        /// Family string such as `fork:9`, `er:100:0.1:42`.
        #[arg(long, group = "input")]
        family: Option<String>,
        /// graph6 file (first line is used), or a literal graph6 string.
        #[arg(long, group = "input")]
        graph6: Option<String>,
        /// Edge list file `u v [w]`.
        #[arg(long, group = "input")]
        edge_list: Option<PathBuf>,
        /// Edge-list ids start at 1.
        #[arg(long)]
        one_based: bool,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Metric records for every graph of a graph6 file, as CSV.
    Batch {
        #[arg(long)]
        graph6: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Pearson correlation of each metric column against sde_q.
    Correlate {
        /// CSV written by `batch` or `ensemble`.
        input: PathBuf,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Seeded random ensemble: CSV of records plus a correlation report on stderr.
    Ensemble {
        /// `er:<n>:<p>` or `ba:<n>:<m>`.
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Random star-to-complete fills, recording q after every added link.
    Nonmonotonic {
        #[arg(long, default_value_t = 11)]
        n: usize,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Solver exponent against the large-N law of a family.
    Asymptotics {
        /// path, wheel, fork or lollipop.
        #[arg(long)]
        family: String,
        /// Total node counts, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[command(flatten)]
        common: Common,
    },
}

fn options(common: &Common) -> Result<SdeOptions, PipelineError> {
    if common.tol.is_nan() || common.tol <= 0.0 {
        return Err(PipelineError::Input("--tol must be positive".into()));
    }
    Ok(SdeOptions {
        tol_q: common.tol,
        ..SdeOptions::default()
    })
}

fn read(path: &Path) -> Result<String, PipelineError> {
    fs::read_to_string(path).map_err(|e| PipelineError::Input(format!("{}: {e}", path.display())))
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), PipelineError> {
    match out {
        Some(p) => {
            fs::write(p, text).map_err(|e| PipelineError::Input(format!("{}: {e}", p.display())))
        }
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| PipelineError::Input(e.to_string())),
    }
}

fn load_one(
    family: Option<String>,
    graph6: Option<String>,
    edge_list: Option<PathBuf>,
    one_based: bool,
) -> Result<Graph, PipelineError> {
    if let Some(f) = family {
        return Ok(f.parse::<FamilySpec>()?.generate()?);
    }
    if let Some(s) = graph6 {
        let path = Path::new(&s);
        let text = if path.is_file() { read(path)? } else { s };
        let line = text
            .lines()
            .find(|l| !l.trim().is_empty())
            .unwrap_or_default();
        return Ok(parse_graph6(line.trim())?);
    }
    if let Some(p) = edge_list {
        return Ok(parse_weighted_edge_list(&read(&p)?, one_based)?);
    }
    Err(PipelineError::Input(
        "one of --family, --graph6 or --edge-list is required".into(),
    ))
}

fn print_report(
    report: &CorrelationReport,
    json: bool,
    out: &Option<PathBuf>,
) -> Result<(), PipelineError> {
    if json {
        emit(out, &(report.to_json() + "\n"))
    } else {
        emit(out, &report.to_table())
    }
}

fn run(cli: Cli) -> Result<(), PipelineError> {
    match cli.command {
        Command::Compute {
            family,
            graph6,
            edge_list,
            one_based,
            json,
            common,
        } => {
            let opts = options(&common)?;
            let g = load_one(family, graph6, edge_list, one_based)?;
            let report = pipeline::compute(&g, &opts)?;
            let text = if json {
                report.to_json() + "\n"
            } else {
                report.to_text()
            };
            emit(&common.out, &text)
        }
        Command::Batch { graph6, common } => {
            let opts = options(&common)?;
            let text = read(&graph6)?;
            let out = pipeline::with_jobs(common.jobs, || pipeline::batch_graph6(&text, &opts))?;
            let undefined = out.rows.iter().filter(|r| r.class == "regular").count();
            eprintln!(
                "batch: {} rows ({} regular, sde_q = nan), {} lines skipped",
                out.rows.len(),
                undefined,
                out.skipped.len()
            );
            for s in &out.skipped {
                eprintln!("  line {}: {}", s.line, s.reason);
            }
            emit(&common.out, &records_to_csv_string(&out.rows))
        }
        Command::Correlate {
            input,
            json,
            common,
        } => {
            let file = fs::File::open(&input)
                .map_err(|e| PipelineError::Input(format!("{}: {e}", input.display())))?;
            let table = read_metric_table(file)?;
            let corpus = input
                .file_stem()
                .map_or("input".into(), |s| s.to_string_lossy().into_owned());
            let report = sde::report::correlate(&table, &corpus)?;
            print_report(&report, json, &common.out)
        }
        Command::Ensemble {
            family,
            count,
            seed,
            json,
            common,
        } => {
            let opts = options(&common)?;
            let model: RandomModel = family.parse()?;
            let rows = pipeline::with_jobs(common.jobs, || {
                pipeline::ensemble(model, count, seed, &opts)
            })??;
            emit(&common.out, &records_to_csv_string(&rows))?;
            let report = pipeline::correlate_rows(&rows, &family)?;
            let text = if json {
                report.to_json() + "\n"
            } else {
                report.to_table()
            };
            eprint!("{text}");
            Ok(())
        }
        Command::Nonmonotonic {
            n,
            trials,
            seed,
            common,
        } => {
            let opts = options(&common)?;
            let t = pipeline::with_jobs(common.jobs, || {
                pipeline::nonmonotonic(n, trials, seed, &opts)
            })??;
            let decreasing: Vec<usize> =
                t.iter().filter(|t| t.decreasing).map(|t| t.trial).collect();
            eprintln!(
                "{} of {} trajectories contain a decreasing step",
                decreasing.len(),
                t.len()
            );
            if let Some(first) = decreasing.first() {
                eprintln!("  first such trial: {first}");
            }
            emit(&common.out, &pipeline::trajectories_csv(&t))
        }
        Command::Asymptotics {
            family,
            sizes,
            common,
        } => {
            let opts = options(&common)?;
            let fam: AsymptoticFamily = family.parse()?;
            let rows =
                pipeline::with_jobs(common.jobs, || pipeline::asymptotics(fam, &sizes, &opts))??;
            emit(&common.out, &pipeline::asymptotics_csv(&rows))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

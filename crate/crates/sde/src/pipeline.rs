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

//! Pipelines behind the command-line subcommands.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use sde_core::families::{
    fork_q_constant, lollipop_limit_spectral_radius, lollipop_q_asymptotic, path_q_asymptotic,
    FamilyError, FamilySpec, RandomModel,
};
use sde_core::graph::{add_link, classify, degree_sequence};
use sde_core::metrics::{evaluate, MetricsError};
use sde_core::solver::{bounds, sde, InfiniteCause, SdeOptions, SdeResult};
use sde_core::spectral::spectral_radius;
use sde_core::{Graph, GraphClass, SdeError, SpectralError};
use serde::Serialize;
use thiserror::Error;

use crate::edgelist::EdgeListError;
use crate::graph6::{encode_graph6, parse_graph6_lines, Graph6Error};
use crate::report::{correlate, CorrelationReport, MetricTable, RecordRow, ReportError};

/// Resamples allowed per ensemble member before giving up.
pub const ENSEMBLE_MAX_ATTEMPTS: usize = 100;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Graph6(#[from] Graph6Error),
    #[error(transparent)]
    EdgeList(#[from] EdgeListError),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Report(#[from] ReportError),
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Sde(#[from] SdeError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error("worker pool: {0}")]
    Pool(String),
}

impl PipelineError {
    /// 2 for bad input, 3 for numerical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Sde(SdeError::InvalidInput(_)) => 2,
            PipelineError::Sde(_) | PipelineError::Spectral(_) => 3,
            PipelineError::Metrics(MetricsError::Spectral(_) | MetricsError::Sde(_)) => 3,
            _ => 2,
        }
    }
}

/// Runs `f` on a pool of `jobs` threads, or on the global pool when `None`.
pub fn with_jobs<T: Send>(
    jobs: Option<usize>,
    f: impl FnOnce() -> T + Send,
) -> Result<T, PipelineError> {
    match jobs {
        None => Ok(f()),
        Some(j) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(j)
                .build()
                .map_err(|e| PipelineError::Pool(e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundsReport {
    pub lower: f64,
    pub upper: f64,
    pub sharpened_upper: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComputeReport {
    pub nodes: usize,
    pub links: usize,
    pub class: &'static str,
    /// `q` as text: a number, `inf`, or `undefined (regular)`.
    pub q: String,
    #[serde(skip)]
    pub result: SdeResult,
    pub lambda1: f64,
    pub d_max: f64,
    pub multiplicity: usize,
    pub bounds: Option<BoundsReport>,
    pub method: Option<&'static str>,
    pub infinite_cause: Option<&'static str>,
    pub iterations: Option<usize>,
    pub residual: Option<f64>,
}

impl ComputeReport {
    pub fn to_text(&self) -> String {
        let mut s = format!("q          {}\n", self.q);
        s.push_str(&format!("class      {}\n", self.class));
        s.push_str(&format!(
            "nodes      {}\nlinks      {}\n",
            self.nodes, self.links
        ));
        s.push_str(&format!(
            "lambda1    {}\n",
            crate::report::format_real(self.lambda1)
        ));
        s.push_str(&format!(
            "d_max      {} (c = {})\n",
            crate::report::format_real(self.d_max),
            self.multiplicity
        ));
        if let Some(b) = &self.bounds {
            let sharp = b
                .sharpened_upper
                .map_or("-".to_string(), crate::report::format_real);
            s.push_str(&format!(
                "bounds     lower {}  upper {}  sharpened {}\n",
                crate::report::format_real(b.lower),
                crate::report::format_real(b.upper),
                sharp
            ));
        }
        if let Some(cause) = self.infinite_cause {
            s.push_str(&format!("cause      {cause}\n"));
        }
        if let (Some(m), Some(it), Some(r)) = (self.method, self.iterations, self.residual) {
            s.push_str(&format!(
                "method     {m} ({it} iterations, residual {r:.3e})\n"
            ));
        }
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn cause_name(c: InfiniteCause) -> &'static str {
    match c {
        InfiniteCause::CliqueComponent => "clique component on d_max + 1 nodes",
        InfiniteCause::RegularComponent => "component regular at d_max",
        InfiniteCause::NoSpectralGap => "lambda1 equals d_max",
        InfiniteCause::QMaxExceeded => "q beyond search limit",
    }
}

pub fn compute(g: &Graph, opts: &SdeOptions) -> Result<ComputeReport, PipelineError> {
    let result = sde(g, opts)?;
    let class = classify(g, opts.tol_deg);
    let ds = degree_sequence(g, opts.tol_deg);
    let lambda1 = spectral_radius(g, opts.tol_lambda)?;
    let b = match class {
        GraphClass::Regular(_) => None,
        _ => bounds(&ds, lambda1).ok().map(|b| BoundsReport {
            lower: b.lower,
            upper: b.upper,
            sharpened_upper: b.sharpened_upper,
        }),
    };
    let q = match result {
        SdeResult::Undefined => "undefined (regular)".to_string(),
        SdeResult::Infinite(_) => "inf".to_string(),
        SdeResult::Finite(f) => crate::report::format_real(f.q),
    };
    let finite = result.finite();
    Ok(ComputeReport {
        nodes: g.n(),
        links: g.link_count(),
        class: class.name(),
        q,
        result,
        lambda1,
        d_max: ds.d_max(),
        multiplicity: ds.multiplicity(),
        bounds: b,
        method: finite.map(|f| f.method.name()),
        infinite_cause: match result {
            SdeResult::Infinite(c) => Some(cause_name(c)),
            _ => None,
        },
        iterations: finite.map(|f| f.iterations),
        residual: finite.map(|f| f.residual),
    })
}

/// Metrics and exponent for one unweighted connected graph.
pub fn record_row(index: usize, g: &Graph, opts: &SdeOptions) -> Result<RecordRow, PipelineError> {
    let (record, _) = evaluate(g, opts)?;
    Ok(RecordRow {
        index,
        graph: encode_graph6(g)?,
        class: classify(g, opts.tol_deg).name().to_string(),
        record,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Skipped {
    pub line: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BatchOutput {
    /// In input order.
    pub rows: Vec<RecordRow>,
    pub skipped: Vec<Skipped>,
}

/// One row per parsable, connected graph6 line; row `index` is the 1-based input line.
pub fn batch_graph6(text: &str, opts: &SdeOptions) -> BatchOutput {
    let parsed = parse_graph6_lines(text);
    let results: Vec<(usize, Result<RecordRow, String>)> = parsed
        .into_par_iter()
        .map(|(line, rec)| {
            let row = rec
                .map_err(|e| e.to_string())
                .and_then(|rec| record_row(line, &rec.graph, opts).map_err(|e| e.to_string()));
            (line, row)
        })
        .collect();
    let mut out = BatchOutput {
        rows: Vec::new(),
        skipped: Vec::new(),
    };
    for (line, r) in results {
        match r {
            Ok(row) => out.rows.push(row),
            Err(reason) => out.skipped.push(Skipped { line, reason }),
        }
    }
    out
}

pub fn correlate_rows(
    rows: &[RecordRow],
    corpus: &str,
) -> Result<CorrelationReport, PipelineError> {
    Ok(correlate(
        &MetricTable::from_records(rows.iter().map(|r| &r.record)),
        corpus,
    )?)
}

/// `count` members; member `i` comes from stream `i` of `seed`, so the output
/// does not depend on the number of workers.
pub fn ensemble(
    model: RandomModel,
    count: usize,
    seed: u64,
    opts: &SdeOptions,
) -> Result<Vec<RecordRow>, PipelineError> {
    if count < 2 {
        return Err(PipelineError::Input(
            "ensemble needs at least two members".into(),
        ));
    }
    (0..count)
        .into_par_iter()
        .map(|i| {
            let g = model.ensemble_member(seed, i as u64, ENSEMBLE_MAX_ATTEMPTS)?;
            record_row(i, &g, opts)
        })
        .collect()
}

/// Relative size a step must drop by to count as a decrease; well above solver noise.
pub const DECREASE_TOL: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub trial: usize,
    /// `q` after `0, 1, 2, ...` added links, up to the last non-regular graph.
    pub q: Vec<f64>,
    pub decreasing: bool,
    /// The fill ended at a regular (complete) graph, which has no exponent.
    pub ended_regular: bool,
}

/// Fills the star on `n` nodes to the complete graph in random order, one
/// trajectory per trial; trial `t` draws from stream `t` of `seed`.
pub fn nonmonotonic(
    n: usize,
    trials: usize,
    seed: u64,
    opts: &SdeOptions,
) -> Result<Vec<Trajectory>, PipelineError> {
    if n < 4 {
        return Err(PipelineError::Input("non-monotonicity needs n >= 4".into()));
    }
    let star = FamilySpec::Star(n).generate()?;
    (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(trial as u64);
            let mut missing: Vec<(usize, usize)> = (1..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .collect();
            missing.shuffle(&mut rng);
            let mut g = star.clone();
            let mut q = vec![sde(&g, opts)?.value()];
            let mut ended_regular = false;
            for (i, j) in missing {
                g = add_link(&g, i, j, 1.0).expect("link is missing");
                match sde(&g, opts)? {
                    SdeResult::Undefined => {
                        ended_regular = true;
                        break;
                    }
                    r => q.push(r.value()),
                }
            }
            let decreasing = q.windows(2).any(|w| w[1] < w[0] - DECREASE_TOL * w[0]);
            Ok(Trajectory {
                trial,
                q,
                decreasing,
                ended_regular,
            })
        })
        .collect()
}

pub fn trajectories_csv(trajectories: &[Trajectory]) -> String {
    let mut s = String::from("trial,step,q\n");
    for t in trajectories {
        for (step, q) in t.q.iter().enumerate() {
            s.push_str(&format!(
                "{},{step},{}\n",
                t.trial,
                crate::report::format_real(*q)
            ));
        }
    }
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AsymptoticFamily {
    Path,
    Wheel,
    Fork,
    Lollipop,
}

impl std::str::FromStr for AsymptoticFamily {
    type Err = FamilyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "path" => Ok(Self::Path),
            "wheel" => Ok(Self::Wheel),
            "fork" => Ok(Self::Fork),
            "lollipop" => Ok(Self::Lollipop),
            other => Err(FamilyError::BadSpec(format!(
                "no asymptotic formula for `{other}`"
            ))),
        }
    }
}

impl AsymptoticFamily {
    /// Member with `n` nodes in total.
    pub fn member(self, n: usize) -> Result<Graph, FamilyError> {
        let spec = match self {
            Self::Path => FamilySpec::Path(n),
            Self::Wheel => FamilySpec::Wheel(n),
            Self::Fork => FamilySpec::Fork(n.saturating_sub(4)),
            Self::Lollipop => FamilySpec::Lollipop(n.saturating_sub(5)),
        };
        spec.generate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymptoticRow {
    pub n: usize,
    pub solver_q: f64,
    pub asymptotic_q: f64,
    pub abs_error: f64,
    pub rel_error: f64,
}

/// Solver exponent against the family's large-`N` law, for graphs of `n` nodes each.
pub fn asymptotics(
    family: AsymptoticFamily,
    sizes: &[usize],
    opts: &SdeOptions,
) -> Result<Vec<AsymptoticRow>, PipelineError> {
    let law: Box<dyn Fn(usize) -> f64 + Sync> = match family {
        AsymptoticFamily::Path => Box::new(path_q_asymptotic),
        AsymptoticFamily::Wheel => Box::new(|_| 2.0),
        AsymptoticFamily::Fork => {
            let c = fork_q_constant(1e-13);
            Box::new(move |_| c)
        }
        AsymptoticFamily::Lollipop => {
            let lambda = lollipop_limit_spectral_radius()?;
            Box::new(move |n| lollipop_q_asymptotic(n, lambda))
        }
    };
    sizes
        .par_iter()
        .map(|&n| {
            let g = family.member(n)?;
            let solver_q = sde(&g, opts)?.finite().map(|f| f.q).ok_or_else(|| {
                PipelineError::Input(format!("{n}-node member has no finite exponent"))
            })?;
            let asymptotic_q = law(n);
            let abs_error = (solver_q - asymptotic_q).abs();
            Ok(AsymptoticRow {
                n,
                solver_q,
                asymptotic_q,
                abs_error,
                rel_error: abs_error / solver_q,
            })
        })
        .collect()
}

pub fn asymptotics_csv(rows: &[AsymptoticRow]) -> String {
    use crate::report::format_real as f;
    let mut s = String::from("n,solver_q,asymptotic_q,abs_error,rel_error\n");
    for r in rows {
        s.push_str(&format!(
            "{},{},{},{},{}\n",
            r.n,
            f(r.solver_q),
            f(r.asymptotic_q),
            f(r.abs_error),
            f(r.rel_error)
        ));
    }
    s
}

/// Least-squares slope of `y` against `ln x`.
pub fn log_slope(xs: &[usize], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|&x| (x as f64).ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

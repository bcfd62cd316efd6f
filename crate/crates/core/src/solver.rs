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

//! Solving for the spectral degree exponent.
//!
//! Everything runs in the log domain. With `r_i = log(d_i / d_max)`,
//!
//! ```text
//! f1(q) = q log(lambda_1 / d_max) + log N - log sum_i exp(q r_i)
//! ```
//!
//! which is `q log lambda_1 + log N - log sum_i d_i^q` with the largest term
//! factored out. `f1(2) >= 0`, `f1` decreases in `q`, and its root is the SDE.
//! The fixed-point recursion starts at the upper bound
//! `q0 = log(N/c) / log(d_max/lambda_1)` and decreases towards the root.

use alloc::vec::Vec;
use core::fmt;

use crate::graph::{classify, degree_sequence, DegreeSequence, Graph, GraphClass};
use crate::math::{abs, ln, log_sum_exp};
use crate::spectral::{spectral_radius, SpectralError};
use crate::{DEFAULT_TOL_DEG, Q_MAX};

/// Relative margin below `d_max` that `lambda_1` must clear for the bounds to be finite.
pub const SPECTRAL_GAP_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum SdeError {
    /// Every degree is zero, so the power sum has no terms.
    AllDegreesZero,
    /// All degrees coincide; the SDE is undefined.
    RegularGraph,
    /// `lambda_1` is within [`SPECTRAL_GAP_TOL`] of `d_max`.
    NoSpectralGap,
    InvalidInput(&'static str),
    Spectral(SpectralError),
    SolverDisagreement {
        bisection: f64,
        recursion: f64,
    },
}

impl fmt::Display for SdeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SdeError::AllDegreesZero => write!(f, "all degrees are zero"),
            SdeError::RegularGraph => write!(f, "graph is regular; the exponent is undefined"),
            SdeError::NoSpectralGap => write!(f, "spectral radius equals the maximum degree"),
            SdeError::InvalidInput(why) => write!(f, "invalid input: {why}"),
            SdeError::Spectral(e) => write!(f, "{e}"),
            SdeError::SolverDisagreement {
                bisection,
                recursion,
            } => write!(
                f,
                "bisection ({bisection}) and recursion ({recursion}) disagree"
            ),
        }
    }
}

impl core::error::Error for SdeError {}

impl From<SpectralError> for SdeError {
    fn from(e: SpectralError) -> Self {
        SdeError::Spectral(e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Bisection,
    Recursion,
    /// The recursion stalled or oscillated and bisection finished the job.
    RecursionFallback,
    /// Decided structurally (biregular graphs).
    Classified,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Bisection => "bisection",
            Method::Recursion => "recursion",
            Method::RecursionFallback => "recursion_fallback",
            Method::Classified => "classified",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InfiniteCause {
    /// A component is a clique on `d_max + 1` nodes.
    CliqueComponent,
    /// A non-complete component is regular at degree `d_max`.
    RegularComponent,
    /// `lambda_1` reached `d_max` numerically.
    NoSpectralGap,
    /// `f1` was still positive at [`Q_MAX`].
    QMaxExceeded,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiniteSde {
    pub q: f64,
    pub method: Method,
    pub iterations: usize,
    /// `|f1(q)|`.
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SdeResult {
    /// Regular graph.
    Undefined,
    Infinite(InfiniteCause),
    Finite(FiniteSde),
}

impl SdeResult {
    /// `Some(q)` for finite results, `Some(inf)` for infinite ones, `None` if undefined.
    pub fn q(&self) -> Option<f64> {
        match self {
            SdeResult::Undefined => None,
            SdeResult::Infinite(_) => Some(f64::INFINITY),
            SdeResult::Finite(r) => Some(r.q),
        }
    }

    /// Like [`SdeResult::q`] but with NaN standing in for undefined.
    pub fn value(&self) -> f64 {
        self.q().unwrap_or(f64::NAN)
    }

    pub fn finite(&self) -> Option<&FiniteSde> {
        match self {
            SdeResult::Finite(r) => Some(r),
            _ => None,
        }
    }
}

/// Degrees in the form the solvers consume: `log(d_i / d_max)` for positive degrees.
#[derive(Debug, Clone)]
struct LogDegrees {
    n: usize,
    c: usize,
    log_dmax: f64,
    /// `log(d_i / d_max)` for every positive degree, including the `c` zeros at the top.
    rel: Vec<f64>,
}

impl LogDegrees {
    fn new(ds: &DegreeSequence) -> Result<Self, SdeError> {
        let d_max = ds.d_max();
        if d_max <= 0.0 {
            return Err(SdeError::AllDegreesZero);
        }
        let log_dmax = ln(d_max);
        let rel = ds
            .degrees()
            .iter()
            .take_while(|&&d| d > 0.0)
            .map(|&d| ln(d) - log_dmax)
            .collect();
        Ok(Self {
            n: ds.len(),
            c: ds.multiplicity(),
            log_dmax,
            rel,
        })
    }

    /// `f1(q)` given `log(lambda_1 / d_max)`.
    fn f1(&self, q: f64, log_ratio: f64) -> f64 {
        q * log_ratio + ln(self.n as f64) - log_sum_exp(self.rel.iter().map(|&r| q * r))
    }

    /// One step of the recursion: `log N - log(c + sum_{i>c} (d_i/d_max)^q)`, divided by `gap`.
    fn recurse(&self, q: f64, gap: f64) -> f64 {
        let lc = ln(self.c as f64);
        let tail = self.rel[self.c.min(self.rel.len())..]
            .iter()
            .map(|&r| q * r);
        let log_sum = log_sum_exp(core::iter::once(lc).chain(tail));
        (ln(self.n as f64) - log_sum) / gap
    }
}

fn check_lambda(lambda1: f64) -> Result<(), SdeError> {
    if !(lambda1 > 0.0 && lambda1.is_finite()) {
        return Err(SdeError::InvalidInput(
            "spectral radius must be positive and finite",
        ));
    }
    Ok(())
}

/// The log-domain root function `q log lambda_1 + log N - log sum d_i^q`.
pub fn f1(q: f64, ds: &DegreeSequence, lambda1: f64) -> Result<f64, SdeError> {
    check_lambda(lambda1)?;
    let ld = LogDegrees::new(ds)?;
    Ok(ld.f1(q, ln(lambda1) - ld.log_dmax))
}

/// Brackets from the degree sequence and `lambda_1` alone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SdeBounds {
    /// Lower bound clamped below at 2.
    pub lower: f64,
    /// Lower bound before clamping; at most 2 for biregular graphs.
    pub lower_unclamped: f64,
    /// `q0 = log(N/c) / log(d_max/lambda_1)`, also the recursion's start.
    pub upper: f64,
    /// Tighter upper bound, available only when `d_min > 0`.
    pub sharpened_upper: Option<f64>,
}

pub fn bounds(ds: &DegreeSequence, lambda1: f64) -> Result<SdeBounds, SdeError> {
    check_lambda(lambda1)?;
    if ds.d_max() <= 0.0 {
        return Err(SdeError::AllDegreesZero);
    }
    if ds.is_flat() {
        return Err(SdeError::RegularGraph);
    }
    let d_max = ds.d_max();
    if lambda1 >= d_max * (1.0 - SPECTRAL_GAP_TOL) {
        return Err(SdeError::NoSpectralGap);
    }
    let n = ds.len() as f64;
    let c = ds.multiplicity() as f64;
    let gap = ln(d_max / lambda1);
    let upper = ln(n / c) / gap;
    let d2 = ds.second().expect("non-flat sequence has a second degree");
    let ratio2 = d2 / d_max;
    let lower_unclamped = (ln(n) - ln(c + (n - c) * ratio2 * ratio2)) / gap;
    let sharpened_upper = (ds.d_min() > 0.0).then(|| {
        let tail = (n - c) * crate::math::powf(ds.d_min() / d_max, upper);
        (ln(n) - ln(c + tail)) / gap
    });
    Ok(SdeBounds {
        lower: lower_unclamped.max(2.0),
        lower_unclamped,
        upper,
        sharpened_upper,
    })
}

fn prepare(ds: &DegreeSequence, lambda1: f64) -> Result<LogDegrees, SdeError> {
    check_lambda(lambda1)?;
    let ld = LogDegrees::new(ds)?;
    if ds.is_flat() {
        return Err(SdeError::RegularGraph);
    }
    Ok(ld)
}

/// Root of `f1` on `[2, Q_MAX]` by bisection.
///
/// The bracket starts at `q0 (1 + 1e-12)` and doubles while `f1` is still
/// positive there. Bisection continues until the bracket is narrower than
/// `tol_q` and `|f1| <= tol_q`, or the bracket has collapsed to rounding.
pub fn solve_bisection(
    ds: &DegreeSequence,
    lambda1: f64,
    tol_q: f64,
) -> Result<SdeResult, SdeError> {
    let ld = prepare(ds, lambda1)?;
    if tol_q.is_nan() || tol_q <= 0.0 {
        return Err(SdeError::InvalidInput("tol_q must be positive"));
    }
    Ok(bisect(&ld, lambda1, tol_q, Method::Bisection, 0))
}

fn bisect(ld: &LogDegrees, lambda1: f64, tol_q: f64, method: Method, prior: usize) -> SdeResult {
    let log_ratio = ln(lambda1) - ld.log_dmax;
    if log_ratio >= 0.0 {
        return SdeResult::Infinite(InfiniteCause::NoSpectralGap);
    }
    let f = |q: f64| ld.f1(q, log_ratio);
    let f_lo = f(2.0);
    if f_lo <= 0.0 {
        return SdeResult::Finite(FiniteSde {
            q: 2.0,
            method,
            iterations: prior,
            residual: abs(f_lo),
        });
    }
    let q0 = ln(ld.n as f64 / ld.c as f64) / -log_ratio;
    let mut hi = (q0 * (1.0 + 1e-12)).clamp(2.0, Q_MAX);
    while f(hi) > 0.0 {
        if hi >= Q_MAX {
            return SdeResult::Infinite(InfiniteCause::QMaxExceeded);
        }
        hi = (2.0 * hi).min(Q_MAX);
    }
    let mut lo = 2.0;
    let mut iterations = prior;
    let mut mid = 0.5 * (lo + hi);
    let mut f_mid = f(mid);
    loop {
        let narrow = hi - lo <= tol_q;
        if narrow && abs(f_mid) <= tol_q {
            break;
        }
        if hi - lo <= 4.0 * f64::EPSILON * hi {
            break;
        }
        if f_mid > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        mid = 0.5 * (lo + hi);
        f_mid = f(mid);
        iterations += 1;
    }
    SdeResult::Finite(FiniteSde {
        q: mid,
        method,
        iterations,
        residual: abs(f_mid),
    })
}

/// The recursion's iterates `q0, q1, q2, ...` (unbounded; take what you need).
pub fn recursion_iterates(
    ds: &DegreeSequence,
    lambda1: f64,
) -> Result<impl Iterator<Item = f64>, SdeError> {
    let ld = prepare(ds, lambda1)?;
    let gap = ld.log_dmax - ln(lambda1);
    if gap <= 0.0 {
        return Err(SdeError::NoSpectralGap);
    }
    let q0 = ln(ld.n as f64 / ld.c as f64) / gap;
    Ok(core::iter::successors(Some(q0), move |&q| {
        Some(ld.recurse(q, gap))
    }))
}

/// Fixed-point recursion from `q0`, falling back to bisection on stalls or oscillation.
///
/// Stops once the step is below `tol_q` and the geometric tail estimate
/// `|step| rho / (1 - rho)` is below `tol_q / 2`.
pub fn solve_recursion(
    ds: &DegreeSequence,
    lambda1: f64,
    tol_q: f64,
    max_iter: usize,
) -> Result<SdeResult, SdeError> {
    let ld = prepare(ds, lambda1)?;
    if tol_q.is_nan() || tol_q <= 0.0 {
        return Err(SdeError::InvalidInput("tol_q must be positive"));
    }
    let gap = ld.log_dmax - ln(lambda1);
    if gap <= 0.0 {
        return Ok(SdeResult::Infinite(InfiniteCause::NoSpectralGap));
    }
    let q0 = ln(ld.n as f64 / ld.c as f64) / gap;
    if q0.is_nan() || q0 > Q_MAX {
        return Ok(bisect(&ld, lambda1, tol_q, Method::RecursionFallback, 0));
    }
    let log_ratio = -gap;
    let (mut prev, mut q) = (f64::NAN, q0);
    let mut prev2;
    let mut last_step = f64::NAN;
    let mut oscillations = 0;
    for k in 1..=max_iter {
        let next = ld.recurse(q, gap);
        if !next.is_finite() {
            break;
        }
        (prev2, prev, q) = (prev, q, next);
        let step = abs(q - prev);
        let rho = step / last_step;
        last_step = step;
        if step <= 4.0 * f64::EPSILON * q.max(1.0) {
            return Ok(finish(&ld, q, log_ratio, k));
        }
        if step <= tol_q && rho < 1.0 && step * rho / (1.0 - rho) <= 0.5 * tol_q {
            return Ok(finish(&ld, q, log_ratio, k));
        }
        if step > tol_q && abs(q - prev2) <= tol_q {
            oscillations += 1;
            if oscillations >= 3 {
                return Ok(bisect(&ld, lambda1, tol_q, Method::RecursionFallback, k));
            }
        } else {
            oscillations = 0;
        }
    }
    Ok(bisect(
        &ld,
        lambda1,
        tol_q,
        Method::RecursionFallback,
        max_iter,
    ))
}

fn finish(ld: &LogDegrees, q: f64, log_ratio: f64, iterations: usize) -> SdeResult {
    let q = q.max(2.0);
    SdeResult::Finite(FiniteSde {
        q,
        method: Method::Recursion,
        iterations,
        residual: abs(ld.f1(q, log_ratio)),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverKind {
    Bisection,
    Recursion,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SdeOptions {
    pub tol_q: f64,
    /// Tolerance handed to the spectral radius; `q` amplifies its error
    /// by roughly `q / (lambda_1 log(d_max / lambda_1))`.
    pub tol_lambda: f64,
    pub tol_deg: f64,
    pub solver: SolverKind,
    /// Also run the other solver and fail if they differ by more than `2 tol_q`.
    pub verify: bool,
    pub max_iter: usize,
    /// Short-circuit biregular and max-component graphs structurally.
    pub classify: bool,
}

impl Default for SdeOptions {
    fn default() -> Self {
        Self {
            tol_q: 1e-9,
            tol_lambda: 1e-12,
            tol_deg: DEFAULT_TOL_DEG,
            solver: SolverKind::Bisection,
            verify: false,
            max_iter: 1000,
            classify: true,
        }
    }
}

/// Classifies `g`, then solves numerically when no structural answer applies.
pub fn sde(g: &Graph, opts: &SdeOptions) -> Result<SdeResult, SdeError> {
    let class = classify(g, opts.tol_deg);
    if let GraphClass::Regular(_) = class {
        return Ok(SdeResult::Undefined);
    }
    if opts.classify {
        match class {
            GraphClass::MaxCliqueComponent => {
                return Ok(SdeResult::Infinite(InfiniteCause::CliqueComponent))
            }
            GraphClass::MaxRegularComponent => {
                return Ok(SdeResult::Infinite(InfiniteCause::RegularComponent))
            }
            _ => {}
        }
    }
    let ds = degree_sequence(g, opts.tol_deg);
    let lambda1 = spectral_radius(g, opts.tol_lambda)?;
    if opts.classify {
        if let GraphClass::Biregular(..) = class {
            let residual = abs(f1(2.0, &ds, lambda1)?);
            return Ok(SdeResult::Finite(FiniteSde {
                q: 2.0,
                method: Method::Classified,
                iterations: 0,
                residual,
            }));
        }
    }
    solve(&ds, lambda1, opts)
}

/// Numerical solve on a precomputed degree sequence and spectral radius.
pub fn solve(ds: &DegreeSequence, lambda1: f64, opts: &SdeOptions) -> Result<SdeResult, SdeError> {
    let primary = match opts.solver {
        SolverKind::Bisection => solve_bisection(ds, lambda1, opts.tol_q)?,
        SolverKind::Recursion => solve_recursion(ds, lambda1, opts.tol_q, opts.max_iter)?,
    };
    if opts.verify {
        let other = match opts.solver {
            SolverKind::Bisection => solve_recursion(ds, lambda1, opts.tol_q, opts.max_iter)?,
            SolverKind::Recursion => solve_bisection(ds, lambda1, opts.tol_q)?,
        };
        if let (Some(a), Some(b)) = (primary.finite(), other.finite()) {
            if abs(a.q - b.q) > 2.0 * opts.tol_q {
                let (bisection, recursion) = match opts.solver {
                    SolverKind::Bisection => (a.q, b.q),
                    SolverKind::Recursion => (b.q, a.q),
                };
                return Err(SdeError::SolverDisagreement {
                    bisection,
                    recursion,
                });
            }
        } else if primary.q() != other.q() {
            return Err(SdeError::SolverDisagreement {
                bisection: primary.value(),
                recursion: other.value(),
            });
        }
    }
    Ok(primary)
}

/// `|q log lambda_1 - log sum_k Pr[D = k] k^q|`, a relative residual of the
/// distributional form, using the empirical degree distribution of `g`.
pub fn probabilistic_residual(g: &Graph, q: f64) -> Result<f64, SdeError> {
    let lambda1 = spectral_radius(g, 1e-12)?;
    probabilistic_residual_with(&g.degrees(), lambda1, q)
}

pub fn probabilistic_residual_with(degrees: &[f64], lambda1: f64, q: f64) -> Result<f64, SdeError> {
    check_lambda(lambda1)?;
    let n = degrees.len() as f64;
    let mut sorted: Vec<f64> = degrees.iter().copied().filter(|&d| d > 0.0).collect();
    if sorted.is_empty() {
        return Err(SdeError::AllDegreesZero);
    }
    sorted.sort_by(|a, b| a.total_cmp(b));
    // histogram of distinct degree values
    let mut hist: Vec<(f64, usize)> = Vec::new();
    for d in sorted {
        match hist.last_mut() {
            Some((k, count)) if abs(*k - d) <= DEFAULT_TOL_DEG * d.max(1.0) => *count += 1,
            _ => hist.push((d, 1)),
        }
    }
    let rhs = log_sum_exp(
        hist.iter()
            .map(|&(k, count)| ln(count as f64 / n) + q * ln(k)),
    );
    Ok(abs(q * ln(lambda1) - rhs))
}

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

//! Graph families with known or asymptotic exponents, and random models.
//!
//! Random graphs use ChaCha8 (`rand_chacha::ChaCha8Rng`). A single graph
//! from `er:...:seed` or `ba:...:seed` is drawn from `seed_from_u64(seed)`.
//! Ensemble member `i` of a run with master seed `s` draws from
//! `seed_from_u64(s)` switched to stream `i`, so members are independent of
//! each other and of evaluation order.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;
use core::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{classify, Graph, GraphClass};
use crate::math::{bisect_decreasing, cos, ln, log_sum_exp};
use crate::solver::{sde, SdeError, SdeOptions};
use crate::spectral::{spectral_radius, SpectralError};
use crate::DEFAULT_TOL_DEG;

#[derive(Debug, Clone, PartialEq)]
pub enum FamilyError {
    BadSpec(String),
    /// No connected, non-regular sample within the attempt budget.
    FilterExhausted {
        attempts: usize,
    },
}

impl fmt::Display for FamilyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyError::BadSpec(why) => write!(f, "bad family spec: {why}"),
            FamilyError::FilterExhausted { attempts } => write!(
                f,
                "no connected non-regular sample after {attempts} attempts"
            ),
        }
    }
}

impl core::error::Error for FamilyError {}

fn bad<T>(why: impl Into<String>) -> Result<T, FamilyError> {
    Err(FamilyError::BadSpec(why.into()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FamilySpec {
    Path(usize),
    Cycle(usize),
    /// Hub joined to every node of a cycle on `N - 1` nodes.
    Wheel(usize),
    Star(usize),
    Complete(usize),
    CompleteBipartite(usize, usize),
    /// Part `A` of size `m` with degree `r1`, part `B` of size `n` with degree `m r1 / n`.
    Biregular {
        m: usize,
        n: usize,
        r1: usize,
    },
    /// Path on `N` nodes with two pendant nodes at each end (`N + 4` nodes).
    Fork(usize),
    /// `K_4` minus a link, both endpoints of the missing link joined to a
    /// fifth node, followed by a tail of `N` nodes (`N + 5` nodes).
    Lollipop(usize),
    ErdosRenyi {
        n: usize,
        p: f64,
        seed: u64,
    },
    BarabasiAlbert {
        n: usize,
        m: usize,
        seed: u64,
    },
}

impl FamilySpec {
    pub fn generate(&self) -> Result<Graph, FamilyError> {
        self.check()?;
        let g = match *self {
            FamilySpec::Path(n) => path(n),
            FamilySpec::Cycle(n) => {
                let mut links: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
                links.push((0, n - 1));
                unweighted(n, links)
            }
            FamilySpec::Wheel(n) => {
                let rim = n - 1;
                let links = (1..n)
                    .map(|i| (0, i))
                    .chain((0..rim).map(|i| (1 + i, 1 + (i + 1) % rim)));
                unweighted(n, links)
            }
            FamilySpec::Star(n) => unweighted(n, (1..n).map(|i| (0, i))),
            FamilySpec::Complete(n) => {
                unweighted(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))))
            }
            FamilySpec::CompleteBipartite(m, n) => {
                unweighted(m + n, (0..m).flat_map(|i| (0..n).map(move |j| (i, m + j))))
            }
            FamilySpec::Biregular { m, n, r1 } => {
                let links = (0..m).flat_map(|i| (0..r1).map(move |j| (i, m + (i * r1 + j) % n)));
                unweighted(m + n, links)
            }
            FamilySpec::Fork(n) => {
                let mut links: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
                links.extend([(0, n), (0, n + 1), (n - 1, n + 2), (n - 1, n + 3)]);
                unweighted(n + 4, links)
            }
            FamilySpec::Lollipop(n) => {
                // 0-1 is the removed link of the K_4 on {0,1,2,3}; node 4 starts the tail
                let mut links = vec![(0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (0, 4), (1, 4)];
                links.extend((4..n + 4).map(|i| (i, i + 1)));
                unweighted(n + 5, links)
            }
            FamilySpec::ErdosRenyi { n, p, seed } => {
                erdos_renyi(n, p, &mut ChaCha8Rng::seed_from_u64(seed))
            }
            FamilySpec::BarabasiAlbert { n, m, seed } => {
                barabasi_albert(n, m, &mut ChaCha8Rng::seed_from_u64(seed))
            }
        };
        if let Some(profile) = self.degree_profile() {
            check_profile(&g, &profile)?;
        }
        Ok(g)
    }

    fn check(&self) -> Result<(), FamilyError> {
        match *self {
            FamilySpec::Path(n) if n < 2 => bad("path needs N >= 2"),
            FamilySpec::Cycle(n) if n < 3 => bad("cycle needs N >= 3"),
            FamilySpec::Wheel(n) if n < 4 => bad("wheel needs N >= 4"),
            FamilySpec::Star(n) if n < 2 => bad("star needs N >= 2"),
            FamilySpec::Complete(n) if n < 1 => bad("complete graph needs N >= 1"),
            FamilySpec::CompleteBipartite(m, n) if m < 1 || n < 1 => {
                bad("complete bipartite graph needs both parts nonempty")
            }
            FamilySpec::Biregular { m, n, r1 } => {
                if m < 1 || n < 1 || r1 < 1 {
                    bad("biregular graph needs nonempty parts and r1 >= 1")
                } else if r1 > n || (m * r1) % n != 0 {
                    bad(format!(
                        "biregular graph needs r1 <= n and n | m*r1 (m={m}, n={n}, r1={r1})"
                    ))
                } else {
                    Ok(())
                }
            }
            FamilySpec::Fork(n) if n < 2 => bad("fork graph needs N >= 2"),
            FamilySpec::Lollipop(n) if n < 1 => bad("lollipop graph needs N >= 1"),
            FamilySpec::ErdosRenyi { n, p, .. } if n < 1 || !(0.0..=1.0).contains(&p) => {
                bad("ER graph needs N >= 1 and 0 <= p <= 1")
            }
            FamilySpec::BarabasiAlbert { n, m, .. } if m < 1 || m >= n => {
                bad("BA graph needs 1 <= m < N")
            }
            _ => Ok(()),
        }
    }

    /// Exact degree multiset `(degree, count)` of deterministic families.
    pub fn degree_profile(&self) -> Option<Vec<(usize, usize)>> {
        let profile = match *self {
            FamilySpec::Path(2) => vec![(1, 2)],
            FamilySpec::Path(n) => vec![(2, n - 2), (1, 2)],
            FamilySpec::Cycle(n) => vec![(2, n)],
            FamilySpec::Wheel(4) => vec![(3, 4)],
            FamilySpec::Wheel(n) => vec![(n - 1, 1), (3, n - 1)],
            FamilySpec::Star(2) => vec![(1, 2)],
            FamilySpec::Star(n) => vec![(n - 1, 1), (1, n - 1)],
            FamilySpec::Complete(n) => vec![(n - 1, n)],
            FamilySpec::CompleteBipartite(m, n) => vec![(n, m), (m, n)],
            FamilySpec::Biregular { m, n, r1 } => vec![(r1, m), (m * r1 / n, n)],
            FamilySpec::Fork(n) => vec![(3, 2), (2, n - 2), (1, 4)],
            FamilySpec::Lollipop(n) => vec![(3, 5), (2, n - 1), (1, 1)],
            FamilySpec::ErdosRenyi { .. } | FamilySpec::BarabasiAlbert { .. } => return None,
        };
        Some(profile)
    }
}

fn unweighted<I: IntoIterator<Item = (usize, usize)>>(n: usize, links: I) -> Graph {
    Graph::from_unweighted(n, links).expect("family construction yields a simple graph")
}

fn path(n: usize) -> Graph {
    unweighted(n, (0..n - 1).map(|i| (i, i + 1)))
}

fn check_profile(g: &Graph, profile: &[(usize, usize)]) -> Result<(), FamilyError> {
    let mut expected: Vec<usize> = profile
        .iter()
        .flat_map(|&(d, count)| core::iter::repeat_n(d, count))
        .collect();
    let mut actual: Vec<usize> = (0..g.n()).map(|u| g.neighbor_count(u)).collect();
    expected.sort_unstable();
    actual.sort_unstable();
    if expected != actual {
        return bad("generated graph does not have the family's degree profile");
    }
    Ok(())
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            FamilySpec::Path(n) => write!(f, "path:{n}"),
            FamilySpec::Cycle(n) => write!(f, "cycle:{n}"),
            FamilySpec::Wheel(n) => write!(f, "wheel:{n}"),
            FamilySpec::Star(n) => write!(f, "star:{n}"),
            FamilySpec::Complete(n) => write!(f, "complete:{n}"),
            FamilySpec::CompleteBipartite(m, n) => write!(f, "bipartite:{m}:{n}"),
            FamilySpec::Biregular { m, n, r1 } => write!(f, "biregular:{m}:{n}:{r1}"),
            FamilySpec::Fork(n) => write!(f, "fork:{n}"),
            FamilySpec::Lollipop(n) => write!(f, "lollipop:{n}"),
            FamilySpec::ErdosRenyi { n, p, seed } => write!(f, "er:{n}:{p}:{seed}"),
            FamilySpec::BarabasiAlbert { n, m, seed } => write!(f, "ba:{n}:{m}:{seed}"),
        }
    }
}

impl FromStr for FamilySpec {
    type Err = FamilyError;

    /// Parses `name:arg[:arg...]`, e.g. `path:100`, `er:100:0.1:42`, `ba:100:3:42`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut parts = s.trim().split(':');
        let name = parts.next().unwrap_or_default().to_ascii_lowercase();
        let args: Vec<&str> = parts.collect();
        let int = |k: usize| -> Result<usize, FamilyError> {
            args.get(k).and_then(|a| a.parse().ok()).ok_or_else(|| {
                FamilyError::BadSpec(format!("`{s}`: argument {} must be an integer", k + 1))
            })
        };
        let arity = |k: usize| -> Result<(), FamilyError> {
            if args.len() == k {
                Ok(())
            } else {
                bad(format!("`{s}`: `{name}` takes {k} argument(s)"))
            }
        };
        let spec = match name.as_str() {
            "path" => {
                arity(1)?;
                FamilySpec::Path(int(0)?)
            }
            "cycle" => {
                arity(1)?;
                FamilySpec::Cycle(int(0)?)
            }
            "wheel" => {
                arity(1)?;
                FamilySpec::Wheel(int(0)?)
            }
            "star" => {
                arity(1)?;
                FamilySpec::Star(int(0)?)
            }
            "complete" => {
                arity(1)?;
                FamilySpec::Complete(int(0)?)
            }
            "bipartite" | "complete_bipartite" | "kmn" => {
                arity(2)?;
                FamilySpec::CompleteBipartite(int(0)?, int(1)?)
            }
            "biregular" => {
                arity(3)?;
                FamilySpec::Biregular {
                    m: int(0)?,
                    n: int(1)?,
                    r1: int(2)?,
                }
            }
            "fork" => {
                arity(1)?;
                FamilySpec::Fork(int(0)?)
            }
            "lollipop" => {
                arity(1)?;
                FamilySpec::Lollipop(int(0)?)
            }
            "er" => {
                arity(3)?;
                let p = args[1]
                    .parse()
                    .map_err(|_| FamilyError::BadSpec(format!("`{s}`: p must be a real number")))?;
                FamilySpec::ErdosRenyi {
                    n: int(0)?,
                    p,
                    seed: int(2)? as u64,
                }
            }
            "ba" => {
                arity(3)?;
                FamilySpec::BarabasiAlbert {
                    n: int(0)?,
                    m: int(1)?,
                    seed: int(2)? as u64,
                }
            }
            _ => return bad(format!("unknown family `{name}`")),
        };
        spec.check()?;
        Ok(spec)
    }
}

/// `G(n, p)`: each of the `n(n-1)/2` pairs is linked independently with probability `p`.
pub fn erdos_renyi<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Graph {
    let mut links = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen::<f64>() < p {
                links.push((i, j));
            }
        }
    }
    unweighted(n, links)
}

/// Preferential attachment: a complete graph on `m` nodes, then every new
/// node links to `m` distinct targets drawn from the list of link ends.
pub fn barabasi_albert<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Graph {
    let mut links: Vec<(usize, usize)> = (0..m)
        .flat_map(|i| (i + 1..m).map(move |j| (i, j)))
        .collect();
    let mut ends: Vec<usize> = links.iter().flat_map(|&(u, v)| [u, v]).collect();
    let mut targets = Vec::with_capacity(m);
    for v in m..n {
        targets.clear();
        while targets.len() < m {
            let t = if ends.is_empty() {
                rng.gen_range(0..v)
            } else {
                ends[rng.gen_range(0..ends.len())]
            };
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        for &t in &targets {
            links.push((t, v));
            ends.push(t);
            ends.push(v);
        }
    }
    unweighted(n, links)
}

/// Random models used for ensembles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RandomModel {
    ErdosRenyi { n: usize, p: f64 },
    BarabasiAlbert { n: usize, m: usize },
}

impl RandomModel {
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Graph {
        match *self {
            RandomModel::ErdosRenyi { n, p } => erdos_renyi(n, p, rng),
            RandomModel::BarabasiAlbert { n, m } => barabasi_albert(n, m, rng),
        }
    }

    /// Ensemble member `index`: the first connected, non-regular draw from
    /// stream `index` of `master_seed`.
    pub fn ensemble_member(
        &self,
        master_seed: u64,
        index: u64,
        max_attempts: usize,
    ) -> Result<Graph, FamilyError> {
        let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
        rng.set_stream(index);
        for _ in 0..max_attempts {
            let g = self.sample(&mut rng);
            if g.is_connected() && !matches!(classify(&g, DEFAULT_TOL_DEG), GraphClass::Regular(_))
            {
                return Ok(g);
            }
        }
        Err(FamilyError::FilterExhausted {
            attempts: max_attempts,
        })
    }
}

impl TryFrom<FamilySpec> for RandomModel {
    type Error = FamilyError;

    fn try_from(spec: FamilySpec) -> Result<Self, Self::Error> {
        match spec {
            FamilySpec::ErdosRenyi { n, p, .. } => Ok(RandomModel::ErdosRenyi { n, p }),
            FamilySpec::BarabasiAlbert { n, m, .. } => Ok(RandomModel::BarabasiAlbert { n, m }),
            other => bad(format!("`{other}` is not a random model")),
        }
    }
}

impl FromStr for RandomModel {
    type Err = FamilyError;

    /// Parses `er:n:p` or `ba:n:m`; a trailing seed argument is accepted and ignored.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut parts: Vec<&str> = s.trim().split(':').collect();
        if parts.len() == 3 {
            parts.push("0");
        }
        RandomModel::try_from(parts.join(":").parse::<FamilySpec>()?)
    }
}

/// Three-term large-`N` expansion of the path exponent.
pub fn path_q_asymptotic(n: usize) -> f64 {
    let n = n as f64;
    let pi2 = PI * PI;
    4.0 / pi2 * n + 12.0 / pi2 + (1.0 / 3.0 + 52.0 / (3.0 * pi2)) / n
}

/// Root of `cos(pi/(N+1))^q = 1 - 2/N + 2^(1-q)/N`, which is the defining
/// equation specialised to the path with its closed-form spectral radius.
pub fn path_q_exact(n: usize, tol: f64) -> f64 {
    assert!(n >= 3, "path_q_exact needs N >= 3");
    let nf = n as f64;
    let log_cos = ln(cos(PI / (nf + 1.0)));
    let h = |q: f64| {
        q * log_cos - (log_sum_exp([ln(nf - 2.0), (1.0 - q) * core::f64::consts::LN_2]) - ln(nf))
    };
    if h(2.0) <= 0.0 {
        return 2.0;
    }
    bisect_decreasing(h, 2.0, 10.0 * nf, tol)
}

/// Root `q > 2` of `3 * 2^q = 2 + 3^q`; the fork graph's exponent for every `N`.
pub fn fork_q_constant(tol: f64) -> f64 {
    let h = |q: f64| ln(3.0) + q * core::f64::consts::LN_2 - log_sum_exp([ln(2.0), q * ln(3.0)]);
    bisect_decreasing(h, 2.0, 4.0, tol)
}

/// `(a, b)` in `q ~ a log N + b` for the lollipop graph, given its limiting `lambda_1`.
pub fn lollipop_coefficients(lambda1: f64) -> (f64, f64) {
    (1.0 / (ln(3.0) - ln(lambda1)), ln(5.0) / ln(lambda1 / 3.0))
}

/// Logarithmic growth law of the lollipop exponent. Singular as `lambda1 -> 3`.
pub fn lollipop_q_asymptotic(n: usize, lambda1: f64) -> f64 {
    let (a, b) = lollipop_coefficients(lambda1);
    a * ln(n as f64) + b
}

/// Tail length at which the lollipop's spectral radius is taken as its limit.
pub const LOLLIPOP_REFERENCE_N: usize = 10_000;

/// `lambda_1` of the lollipop graph with a tail of [`LOLLIPOP_REFERENCE_N`] nodes.
pub fn lollipop_limit_spectral_radius() -> Result<f64, SpectralError> {
    let g = FamilySpec::Lollipop(LOLLIPOP_REFERENCE_N)
        .generate()
        .expect("valid spec");
    spectral_radius(&g, 1e-13)
}

/// `q(W_N) - 2` from the general solver.
pub fn wheel_limit_check(n: usize) -> Result<f64, SdeError> {
    let g = FamilySpec::Wheel(n)
        .generate()
        .map_err(|_| SdeError::InvalidInput("wheel needs N >= 4"))?;
    let r = sde(&g, &SdeOptions::default())?;
    r.finite()
        .map(|f| f.q - 2.0)
        .ok_or(SdeError::InvalidInput("wheel exponent is not finite"))
}

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

//! Graph metrics that the exponent is compared against.
//!
//! Distance-based metrics treat the graph as unweighted and require it to be
//! connected. Laplacian-based metrics are read off a precomputed [`Spectrum`].

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::graph::Graph;
use crate::math::{abs, exp, ln, round, sqrt};
use crate::solver::{sde, SdeError, SdeOptions, SdeResult};
use crate::spectral::{full_spectrum, SpectralError, Spectrum};

#[derive(Debug, Clone, PartialEq)]
pub enum MetricsError {
    /// Zero variance of end-node degrees (regular graphs among others).
    UndefinedAssortativity,
    ConstantSeries,
    LengthMismatch {
        x: usize,
        y: usize,
    },
    TooShort,
    DisconnectedInput,
    WeightedInput,
    Spectral(SpectralError),
    Sde(SdeError),
}

impl fmt::Display for MetricsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricsError::UndefinedAssortativity => write!(f, "degree assortativity is undefined"),
            MetricsError::ConstantSeries => write!(f, "constant series has no correlation"),
            MetricsError::LengthMismatch { x, y } => {
                write!(f, "series lengths differ ({x} vs {y})")
            }
            MetricsError::TooShort => write!(f, "need at least two samples"),
            MetricsError::DisconnectedInput => write!(f, "distance metrics need a connected graph"),
            MetricsError::WeightedInput => write!(f, "metric suite needs an unweighted graph"),
            MetricsError::Spectral(e) => write!(f, "{e}"),
            MetricsError::Sde(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for MetricsError {}

impl From<SpectralError> for MetricsError {
    fn from(e: SpectralError) -> Self {
        MetricsError::Spectral(e)
    }
}

impl From<SdeError> for MetricsError {
    fn from(e: SdeError) -> Self {
        MetricsError::Sde(e)
    }
}

/// The metric set, in CSV column order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(usize)]
pub enum Metric {
    Links,
    MaxDegree,
    MinDegree,
    DegreeVariance,
    SpectralRadius,
    GapLambda1Lambda2,
    GapLambda1MeanDegree,
    AlgebraicConnectivity,
    EffectiveResistance,
    AvgShortestPath,
    Diameter,
    Clustering,
    Radius,
    Assortativity,
    Bridges,
    LocalEfficiency,
    GlobalEfficiency,
    Leaves,
    GraphEnergy,
    EstradaIndex,
    SpanningTrees,
    MaxLaplacian,
    SdeQ,
}

pub const METRIC_COUNT: usize = 23;

impl Metric {
    pub const ALL: [Metric; METRIC_COUNT] = [
        Metric::Links,
        Metric::MaxDegree,
        Metric::MinDegree,
        Metric::DegreeVariance,
        Metric::SpectralRadius,
        Metric::GapLambda1Lambda2,
        Metric::GapLambda1MeanDegree,
        Metric::AlgebraicConnectivity,
        Metric::EffectiveResistance,
        Metric::AvgShortestPath,
        Metric::Diameter,
        Metric::Clustering,
        Metric::Radius,
        Metric::Assortativity,
        Metric::Bridges,
        Metric::LocalEfficiency,
        Metric::GlobalEfficiency,
        Metric::Leaves,
        Metric::GraphEnergy,
        Metric::EstradaIndex,
        Metric::SpanningTrees,
        Metric::MaxLaplacian,
        Metric::SdeQ,
    ];

    /// Column name; this list is the CSV header contract.
    pub const fn name(self) -> &'static str {
        match self {
            Metric::Links => "links",
            Metric::MaxDegree => "d_max",
            Metric::MinDegree => "d_min",
            Metric::DegreeVariance => "degree_variance",
            Metric::SpectralRadius => "lambda1",
            Metric::GapLambda1Lambda2 => "gap_lambda1_lambda2",
            Metric::GapLambda1MeanDegree => "gap_lambda1_mean_degree",
            Metric::AlgebraicConnectivity => "algebraic_connectivity",
            Metric::EffectiveResistance => "effective_resistance",
            Metric::AvgShortestPath => "avg_shortest_path",
            Metric::Diameter => "diameter",
            Metric::Clustering => "clustering",
            Metric::Radius => "radius",
            Metric::Assortativity => "assortativity",
            Metric::Bridges => "bridges",
            Metric::LocalEfficiency => "local_efficiency",
            Metric::GlobalEfficiency => "global_efficiency",
            Metric::Leaves => "leaves",
            Metric::GraphEnergy => "graph_energy",
            Metric::EstradaIndex => "estrada_index",
            Metric::SpanningTrees => "spanning_trees",
            Metric::MaxLaplacian => "max_laplacian",
            Metric::SdeQ => "sde_q",
        }
    }

    pub fn from_name(name: &str) -> Option<Metric> {
        Metric::ALL.into_iter().find(|m| m.name() == name)
    }
}

/// One value per [`Metric`]. `sde_q` is `inf` for infinite exponents and NaN
/// when undefined; `assortativity` is NaN when undefined.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricsRecord {
    values: [f64; METRIC_COUNT],
}

impl MetricsRecord {
    pub fn new(values: [f64; METRIC_COUNT]) -> Self {
        Self { values }
    }

    #[inline]
    pub fn get(&self, m: Metric) -> f64 {
        self.values[m as usize]
    }

    pub fn set(&mut self, m: Metric, v: f64) {
        self.values[m as usize] = v;
    }

    pub fn values(&self) -> &[f64; METRIC_COUNT] {
        &self.values
    }

    pub fn iter(&self) -> impl Iterator<Item = (Metric, f64)> + '_ {
        Metric::ALL.into_iter().map(move |m| (m, self.get(m)))
    }
}

/// Sample Pearson correlation, clamped to `[-1, 1]`.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64, MetricsError> {
    if x.len() != y.len() {
        return Err(MetricsError::LengthMismatch {
            x: x.len(),
            y: y.len(),
        });
    }
    if x.len() < 2 {
        return Err(MetricsError::TooShort);
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    // relative guard: a series of identical floats can leave round-off in the mean
    let scale_x = x.iter().map(|v| v * v).sum::<f64>().max(f64::MIN_POSITIVE);
    let scale_y = y.iter().map(|v| v * v).sum::<f64>().max(f64::MIN_POSITIVE);
    if sxx <= 1e-24 * scale_x || syy <= 1e-24 * scale_y {
        return Err(MetricsError::ConstantSeries);
    }
    Ok((sxy / sqrt(sxx * syy)).clamp(-1.0, 1.0))
}

/// Degree assortativity: Pearson correlation of end-node degrees over every
/// link taken in both orientations.
pub fn assortativity(g: &Graph) -> Result<f64, MetricsError> {
    let deg = g.degrees();
    let mut x = Vec::with_capacity(2 * g.link_count());
    let mut y = Vec::with_capacity(2 * g.link_count());
    for (u, v, _) in g.links() {
        x.extend([deg[u], deg[v]]);
        y.extend([deg[v], deg[u]]);
    }
    match pearson(&x, &y) {
        Ok(r) => Ok(r),
        Err(_) => Err(MetricsError::UndefinedAssortativity),
    }
}

/// Breadth-first hop distances from `s`; `u32::MAX` marks unreachable nodes.
pub fn bfs_distances(g: &Graph, s: usize) -> Vec<u32> {
    let mut dist = vec![u32::MAX; g.n()];
    let mut queue = VecDeque::new();
    dist[s] = 0;
    queue.push_back(s);
    while let Some(u) = queue.pop_front() {
        for &(v, _) in g.neighbors(u) {
            if dist[v] == u32::MAX {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    dist
}

/// Mean of `1/d(u, v)` over ordered pairs, counting unreachable pairs as 0.
pub fn global_efficiency(g: &Graph) -> f64 {
    let n = g.n();
    if n < 2 {
        return 0.0;
    }
    let total: f64 = (0..n)
        .map(|s| {
            bfs_distances(g, s)
                .into_iter()
                .filter(|&d| d != 0 && d != u32::MAX)
                .map(|d| 1.0 / d as f64)
                .sum::<f64>()
        })
        .sum();
    total / (n * (n - 1)) as f64
}

/// Mean over nodes of the global efficiency of the subgraph induced by the neighbors.
pub fn local_efficiency(g: &Graph) -> f64 {
    let n = g.n();
    let total: f64 = (0..n)
        .map(|u| {
            let nbrs: Vec<usize> = g.neighbors(u).iter().map(|&(v, _)| v).collect();
            if nbrs.len() < 2 {
                0.0
            } else {
                global_efficiency(&g.induced(&nbrs))
            }
        })
        .sum();
    total / n as f64
}

/// Mean local clustering; nodes with fewer than two neighbors contribute 0.
pub fn clustering(g: &Graph) -> f64 {
    let n = g.n();
    let total: f64 = (0..n)
        .map(|u| {
            let nbrs = g.neighbors(u);
            let k = nbrs.len();
            if k < 2 {
                return 0.0;
            }
            let mut closed = 0usize;
            for (i, &(a, _)) in nbrs.iter().enumerate() {
                for &(b, _) in &nbrs[i + 1..] {
                    if g.has_link(a, b) {
                        closed += 1;
                    }
                }
            }
            2.0 * closed as f64 / (k * (k - 1)) as f64
        })
        .sum();
    total / n as f64
}

/// Number of links whose removal disconnects their component (iterative low-link pass).
pub fn bridge_count(g: &Graph) -> usize {
    let n = g.n();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut timer = 0;
    let mut bridges = 0;
    // (node, parent, next neighbor index)
    let mut stack: Vec<(usize, usize, usize)> = Vec::new();
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        disc[root] = timer;
        low[root] = timer;
        timer += 1;
        stack.push((root, usize::MAX, 0));
        while let Some(&mut (u, parent, ref mut next)) = stack.last_mut() {
            if let Some(&(v, _)) = g.neighbors(u).get(*next) {
                *next += 1;
                if v == parent {
                    continue;
                }
                if disc[v] == usize::MAX {
                    disc[v] = timer;
                    low[v] = timer;
                    timer += 1;
                    stack.push((v, u, 0));
                } else {
                    low[u] = low[u].min(disc[v]);
                }
            } else {
                stack.pop();
                if parent != usize::MAX {
                    low[parent] = low[parent].min(low[u]);
                    if low[u] > disc[parent] {
                        bridges += 1;
                    }
                }
            }
        }
    }
    bridges
}

/// `N * sum 1/mu_i` over the `N - 1` largest Laplacian eigenvalues of a connected graph.
pub fn effective_resistance(spectrum: &Spectrum) -> f64 {
    let n = spectrum.laplacian_eigs.len();
    n as f64
        * spectrum.laplacian_eigs[..n - 1]
            .iter()
            .map(|&mu| 1.0 / mu)
            .sum::<f64>()
}

/// Spanning-tree count `(1/N) prod mu_i` of a connected graph, via a log-domain
/// product. Counts below `2^53` are rounded to the nearest integer when the
/// product is within `1e-6` relative of it.
pub fn spanning_tree_count(spectrum: &Spectrum) -> f64 {
    let n = spectrum.laplacian_eigs.len();
    let log_t = spectrum.laplacian_eigs[..n - 1]
        .iter()
        .map(|&mu| ln(mu))
        .sum::<f64>()
        - ln(n as f64);
    let t = exp(log_t);
    if t < 9.007_199_254_740_992e15 {
        let r = round(t);
        if abs(t - r) <= 1e-6 * r.max(1.0) {
            return r;
        }
    }
    t
}

/// Fills every metric for a connected, unweighted graph on at least two nodes.
pub fn metric_suite(
    g: &Graph,
    spectrum: &Spectrum,
    sde: &SdeResult,
) -> Result<MetricsRecord, MetricsError> {
    let n = g.n();
    if n < 2 {
        return Err(MetricsError::TooShort);
    }
    if !g.is_unweighted() {
        return Err(MetricsError::WeightedInput);
    }
    let deg = g.degrees();
    let nf = n as f64;
    let links = g.link_count() as f64;
    let mean = 2.0 * links / nf;
    let var = deg.iter().map(|d| (d - mean) * (d - mean)).sum::<f64>() / nf;
    let d_max = deg.iter().copied().fold(0.0, f64::max);
    let d_min = deg.iter().copied().fold(f64::INFINITY, f64::min);

    let (mut path_sum, mut inv_sum) = (0.0, 0.0);
    let (mut diameter, mut radius) = (0u32, u32::MAX);
    for s in 0..n {
        let dist = bfs_distances(g, s);
        let mut ecc = 0;
        for &d in &dist {
            if d == u32::MAX {
                return Err(MetricsError::DisconnectedInput);
            }
            if d > 0 {
                path_sum += d as f64;
                inv_sum += 1.0 / d as f64;
            }
            ecc = ecc.max(d);
        }
        diameter = diameter.max(ecc);
        radius = radius.min(ecc);
    }
    let pairs = nf * (nf - 1.0);

    let adj = &spectrum.adjacency_eigs;
    let lap = &spectrum.laplacian_eigs;
    let lambda1 = adj[0];

    let mut r = MetricsRecord::new([f64::NAN; METRIC_COUNT]);
    r.set(Metric::Links, links);
    r.set(Metric::MaxDegree, d_max);
    r.set(Metric::MinDegree, d_min);
    r.set(Metric::DegreeVariance, var);
    r.set(Metric::SpectralRadius, lambda1);
    r.set(Metric::GapLambda1Lambda2, lambda1 - adj[1]);
    r.set(Metric::GapLambda1MeanDegree, lambda1 - mean);
    r.set(Metric::AlgebraicConnectivity, lap[n - 2]);
    r.set(Metric::EffectiveResistance, effective_resistance(spectrum));
    r.set(Metric::AvgShortestPath, path_sum / pairs);
    r.set(Metric::Diameter, diameter as f64);
    r.set(Metric::Clustering, clustering(g));
    r.set(Metric::Radius, radius as f64);
    r.set(Metric::Assortativity, assortativity(g).unwrap_or(f64::NAN));
    r.set(Metric::Bridges, bridge_count(g) as f64);
    r.set(Metric::LocalEfficiency, local_efficiency(g));
    r.set(Metric::GlobalEfficiency, inv_sum / pairs);
    r.set(
        Metric::Leaves,
        deg.iter().filter(|&&d| d == 1.0).count() as f64,
    );
    r.set(Metric::GraphEnergy, adj.iter().map(|&l| abs(l)).sum());
    r.set(Metric::EstradaIndex, adj.iter().map(|&l| exp(l)).sum());
    r.set(Metric::SpanningTrees, spanning_tree_count(spectrum));
    r.set(Metric::MaxLaplacian, lap[0]);
    r.set(Metric::SdeQ, sde.value());
    Ok(r)
}

/// Spectrum, exponent and metric suite in one go.
pub fn evaluate(g: &Graph, opts: &SdeOptions) -> Result<(MetricsRecord, SdeResult), MetricsError> {
    let spectrum = full_spectrum(g)?;
    let q = sde(g, opts)?;
    Ok((metric_suite(g, &spectrum, &q)?, q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::FamilySpec;

    fn gen(spec: FamilySpec) -> Graph {
        spec.generate().unwrap()
    }

    fn record(g: &Graph) -> MetricsRecord {
        evaluate(g, &SdeOptions::default()).unwrap().0
    }

    /// Brute force over every (N-1)-subset of links, checking acyclicity with union-find.
    fn enumerate_spanning_trees(g: &Graph) -> u64 {
        let links: Vec<(usize, usize)> = g.links().map(|(u, v, _)| (u, v)).collect();
        let n = g.n();
        let m = links.len();
        let mut count = 0;
        for mask in 0u32..(1 << m) {
            if mask.count_ones() as usize != n - 1 {
                continue;
            }
            let mut parent: Vec<usize> = (0..n).collect();
            fn find(p: &mut [usize], x: usize) -> usize {
                let mut r = x;
                while p[r] != r {
                    r = p[r];
                }
                p[x] = r;
                r
            }
            let mut acyclic = true;
            for (k, &(u, v)) in links.iter().enumerate() {
                if mask & (1 << k) != 0 {
                    let (a, b) = (find(&mut parent, u), find(&mut parent, v));
                    if a == b {
                        acyclic = false;
                        break;
                    }
                    parent[a] = b;
                }
            }
            if acyclic {
                count += 1;
            }
        }
        count
    }

    /// Sum of pairwise effective resistances from the Laplacian pseudoinverse
    /// `(L + J/n)^{-1} - J/n`, inverted by Gauss-Jordan elimination.
    fn resistance_by_pseudoinverse(g: &Graph) -> f64 {
        let n = g.n();
        let w = g.to_dense();
        let deg = g.degrees();
        let mut a = vec![0.0; n * 2 * n];
        for i in 0..n {
            for j in 0..n {
                let lij = if i == j { deg[i] } else { -w[i * n + j] };
                a[i * 2 * n + j] = lij + 1.0 / n as f64;
            }
            a[i * 2 * n + n + i] = 1.0;
        }
        for col in 0..n {
            let piv = (col..n)
                .max_by(|&x, &y| {
                    a[x * 2 * n + col]
                        .abs()
                        .total_cmp(&a[y * 2 * n + col].abs())
                })
                .unwrap();
            for k in 0..2 * n {
                a.swap(col * 2 * n + k, piv * 2 * n + k);
            }
            let p = a[col * 2 * n + col];
            for k in 0..2 * n {
                a[col * 2 * n + k] /= p;
            }
            for r in 0..n {
                if r != col {
                    let f = a[r * 2 * n + col];
                    for k in 0..2 * n {
                        a[r * 2 * n + k] -= f * a[col * 2 * n + k];
                    }
                }
            }
        }
        let pinv = |i: usize, j: usize| a[i * 2 * n + n + j] - 1.0 / n as f64;
        let mut total = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                total += pinv(i, i) + pinv(j, j) - 2.0 * pinv(i, j);
            }
        }
        total
    }

    #[test]
    fn assortativity_examples() {
        for n in [4, 7, 12] {
            let r = assortativity(&gen(FamilySpec::Star(n))).unwrap();
            assert!((r + 1.0).abs() < 1e-12);
        }
        assert_eq!(
            assortativity(&gen(FamilySpec::Cycle(6))),
            Err(MetricsError::UndefinedAssortativity)
        );
        let two_k2 = gen(FamilySpec::Path(2)).disjoint_union(&gen(FamilySpec::Path(2)));
        assert_eq!(
            assortativity(&two_k2),
            Err(MetricsError::UndefinedAssortativity)
        );
    }

    #[test]
    fn assortativity_brute_force() {
        let g = gen(FamilySpec::Lollipop(3));
        let deg = g.degrees();
        let mut pairs = Vec::new();
        for u in 0..g.n() {
            for &(v, _) in g.neighbors(u) {
                pairs.push((deg[u], deg[v]));
            }
        }
        let m = pairs.len() as f64;
        let mx = pairs.iter().map(|p| p.0).sum::<f64>() / m;
        let cov = pairs.iter().map(|p| (p.0 - mx) * (p.1 - mx)).sum::<f64>() / m;
        let var = pairs.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum::<f64>() / m;
        assert!((assortativity(&g).unwrap() - cov / var).abs() < 1e-12);
    }

    #[test]
    fn pearson_examples() {
        let x = [1.0, 2.0, 3.0, 7.5];
        assert!((pearson(&x, &x).unwrap() - 1.0).abs() < 1e-15);
        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        assert!((pearson(&x, &neg).unwrap() + 1.0).abs() < 1e-15);
        assert!((pearson(&[1.0, 2.0, 3.0], &[2.0, 4.0, 6.0001]).unwrap() - 1.0).abs() < 1e-6);
        assert_eq!(
            pearson(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]),
            Err(MetricsError::ConstantSeries)
        );
        assert_eq!(
            pearson(&[0.1; 5], &[1.0, 2.0, 3.0, 4.0, 5.0]),
            Err(MetricsError::ConstantSeries)
        );
        assert_eq!(pearson(&[1.0], &[1.0]), Err(MetricsError::TooShort));
        assert!(matches!(
            pearson(&[1.0, 2.0], &[1.0]),
            Err(MetricsError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn path3_resistance() {
        let r = record(&gen(FamilySpec::Path(3)));
        assert!((r.get(Metric::EffectiveResistance) - 4.0).abs() < 1e-12);
        assert!((resistance_by_pseudoinverse(&gen(FamilySpec::Path(3))) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn small_graph_values() {
        let k2 = record(&gen(FamilySpec::Complete(2)));
        assert!((k2.get(Metric::GraphEnergy) - 2.0).abs() < 1e-12);
        assert_eq!(k2.get(Metric::Diameter), 1.0);
        assert!(k2.get(Metric::SdeQ).is_nan());
        let k4 = record(&gen(FamilySpec::Complete(4)));
        assert_eq!(k4.get(Metric::SpanningTrees), 16.0);
        assert_eq!(k4.get(Metric::Clustering), 1.0);
        let p5 = record(&gen(FamilySpec::Path(5)));
        assert_eq!(p5.get(Metric::Diameter), 4.0);
        assert_eq!(p5.get(Metric::Radius), 2.0);
        assert_eq!(p5.get(Metric::Leaves), 2.0);
        assert_eq!(p5.get(Metric::Bridges), 4.0);
        assert_eq!(p5.get(Metric::SpanningTrees), 1.0);
        assert_eq!(p5.get(Metric::Clustering), 0.0);
        assert!((p5.get(Metric::AvgShortestPath) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn lollipop_structure_metrics() {
        let b = record(&gen(FamilySpec::Lollipop(3)));
        // tail links 4-5, 5-6, 6-7 are the only bridges
        assert_eq!(b.get(Metric::Bridges), 3.0);
        assert_eq!(b.get(Metric::Leaves), 1.0);
        assert!(b.get(Metric::SdeQ) > 2.0);
        let w = record(&gen(FamilySpec::Wheel(6)));
        assert_eq!(w.get(Metric::Bridges), 0.0);
        assert_eq!(w.get(Metric::Radius), 1.0);
    }

    #[test]
    fn efficiency_values() {
        let k4 = gen(FamilySpec::Complete(4));
        assert!((global_efficiency(&k4) - 1.0).abs() < 1e-15);
        assert!((local_efficiency(&k4) - 1.0).abs() < 1e-15);
        let s = gen(FamilySpec::Star(5));
        // hub neighbors are pairwise disconnected, leaves have one neighbor
        assert_eq!(local_efficiency(&s), 0.0);
        let ge = global_efficiency(&s);
        // 4 hub pairs at distance 1 (x2 orientations) and 6 leaf pairs at distance 2
        assert!((ge - (8.0 + 12.0 * 0.5) / 20.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_unsuitable_input() {
        let g = gen(FamilySpec::Path(3)).disjoint_union(&gen(FamilySpec::Star(4)));
        let s = full_spectrum(&g).unwrap();
        assert_eq!(
            metric_suite(&g, &s, &SdeResult::Undefined),
            Err(MetricsError::DisconnectedInput)
        );
        let w = Graph::from_links(3, [(0, 1, 2.0), (1, 2, 1.0)]).unwrap();
        let s = full_spectrum(&w).unwrap();
        assert_eq!(
            metric_suite(&w, &s, &SdeResult::Undefined),
            Err(MetricsError::WeightedInput)
        );
    }

    #[test]
    fn metric_names_unique_and_ordered() {
        for (k, m) in Metric::ALL.iter().enumerate() {
            assert_eq!(*m as usize, k);
            assert_eq!(Metric::from_name(m.name()), Some(*m));
        }
        assert_eq!(Metric::ALL[METRIC_COUNT - 1], Metric::SdeQ);
    }

    #[test]
    fn spanning_trees_match_enumeration() {
        let small = [
            FamilySpec::Path(4),
            FamilySpec::Cycle(5),
            FamilySpec::Complete(5),
            FamilySpec::Wheel(5),
            FamilySpec::CompleteBipartite(2, 3),
            FamilySpec::Lollipop(1),
        ];
        for spec in small {
            let g = gen(spec);
            if g.n() > 6 {
                continue;
            }
            let s = full_spectrum(&g).unwrap();
            assert_eq!(
                spanning_tree_count(&s),
                enumerate_spanning_trees(&g) as f64,
                "{spec}"
            );
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(100))]

            #[test]
            fn resistance_two_ways(n in 2usize..30, p in 0.15f64..0.8, seed: u64) {
                let g = gen(FamilySpec::ErdosRenyi { n, p, seed });
                prop_assume!(g.is_connected());
                let s = full_spectrum(&g).unwrap();
                let a = effective_resistance(&s);
                let b = resistance_by_pseudoinverse(&g);
                prop_assert!((a - b).abs() <= 1e-6 * a.max(1.0), "{} vs {}", a, b);
            }

            #[test]
            fn record_invariants(n in 3usize..30, p in 0.15f64..0.8, seed: u64) {
                let g = gen(FamilySpec::ErdosRenyi { n, p, seed });
                prop_assume!(g.is_connected());
                let r = record(&g);
                let mean = 2.0 * r.get(Metric::Links) / n as f64;
                prop_assert!(r.get(Metric::MinDegree) <= mean && mean <= r.get(Metric::MaxDegree));
                let ge = r.get(Metric::GlobalEfficiency);
                prop_assert!(ge > 0.0 && ge <= 1.0);
                let a = r.get(Metric::Assortativity);
                prop_assert!(a.is_nan() || (-1.0..=1.0).contains(&a));
                for (m, v) in r.iter() {
                    if m != Metric::SdeQ && m != Metric::Assortativity {
                        prop_assert!(v.is_finite(), "{:?}", m);
                    }
                }
            }
        }
    }
}

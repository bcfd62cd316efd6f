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

//! Weighted undirected graphs, degree bookkeeping and structural classes.
//!
//! [`Graph`] stores one sorted neighbor list per node. Every constructor and
//! mutation keeps the adjacency symmetric, loop-free and nonnegative, so the
//! rest of the crate can rely on those invariants without re-checking them.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::Rng;

use crate::math::abs;

#[derive(Debug, Clone, PartialEq)]
pub enum GraphError {
    NoNodes,
    NodeOutOfRange { node: usize, n: usize },
    SelfLoop(usize),
    NegativeWeight { u: usize, v: usize, w: f64 },
    NonFiniteWeight { u: usize, v: usize },
    DuplicateLink(usize, usize),
    LinkExists(usize, usize),
    MissingLink(usize, usize),
    Asymmetric(usize, usize),
    DimensionMismatch { expected: usize, found: usize },
    NotUnweighted,
    NodesNotDistinct,
    RewireConflict,
    InvalidDegrees,
}

impl fmt::Display for GraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphError::NoNodes => write!(f, "graph must have at least one node"),
            GraphError::NodeOutOfRange { node, n } => {
                write!(f, "node {node} out of range for a graph on {n} nodes")
            }
            GraphError::SelfLoop(u) => write!(f, "self-loop at node {u}"),
            GraphError::NegativeWeight { u, v, w } => {
                write!(f, "negative weight {w} on link ({u}, {v})")
            }
            GraphError::NonFiniteWeight { u, v } => {
                write!(f, "non-finite weight on link ({u}, {v})")
            }
            GraphError::DuplicateLink(u, v) => write!(f, "duplicate link ({u}, {v})"),
            GraphError::LinkExists(u, v) => write!(f, "link ({u}, {v}) already exists"),
            GraphError::MissingLink(u, v) => write!(f, "link ({u}, {v}) does not exist"),
            GraphError::Asymmetric(u, v) => write!(f, "weights ({u}, {v}) and ({v}, {u}) differ"),
            GraphError::DimensionMismatch { expected, found } => {
                write!(f, "expected {expected} matrix entries, found {found}")
            }
            GraphError::NotUnweighted => write!(f, "operation requires an unweighted graph"),
            GraphError::NodesNotDistinct => write!(f, "rewiring requires four distinct nodes"),
            GraphError::RewireConflict => {
                write!(
                    f,
                    "both degree-preserving alternatives would duplicate a link"
                )
            }
            GraphError::InvalidDegrees => {
                write!(f, "degrees must be finite, nonnegative and nonempty")
            }
        }
    }
}

impl core::error::Error for GraphError {}

/// A simple undirected graph with nonnegative link weights.
///
/// A weight of zero means "no link"; only positive weights are stored.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    adj: Vec<Vec<(usize, f64)>>,
}

impl Graph {
    /// Graph on `n` nodes without links.
    ///
    /// # Panics
    ///
    /// Panics if `n == 0`.
    pub fn empty(n: usize) -> Self {
        assert!(n > 0, "graph must have at least one node");
        Self {
            adj: vec![Vec::new(); n],
        }
    }

    /// Builds a graph from `(u, v, w)` triples. Zero weights are skipped.
    pub fn from_links<I>(n: usize, links: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        if n == 0 {
            return Err(GraphError::NoNodes);
        }
        let mut g = Self::empty(n);
        for (u, v, w) in links {
            g.check_pair(u, v)?;
            if !w.is_finite() {
                return Err(GraphError::NonFiniteWeight { u, v });
            }
            if w < 0.0 {
                return Err(GraphError::NegativeWeight { u, v, w });
            }
            if w == 0.0 {
                continue;
            }
            if g.has_link(u, v) {
                return Err(GraphError::DuplicateLink(u.min(v), u.max(v)));
            }
            g.insert(u, v, w);
        }
        Ok(g)
    }

    /// Builds an unweighted graph from `(u, v)` pairs.
    pub fn from_unweighted<I>(n: usize, links: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        Self::from_links(n, links.into_iter().map(|(u, v)| (u, v, 1.0)))
    }

    /// Builds a graph from a row-major `n x n` weight matrix.
    pub fn from_dense(n: usize, weights: &[f64]) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::NoNodes);
        }
        if weights.len() != n * n {
            return Err(GraphError::DimensionMismatch {
                expected: n * n,
                found: weights.len(),
            });
        }
        let mut g = Self::empty(n);
        for i in 0..n {
            for j in 0..n {
                let w = weights[i * n + j];
                if !w.is_finite() {
                    return Err(GraphError::NonFiniteWeight { u: i, v: j });
                }
                if w < 0.0 {
                    return Err(GraphError::NegativeWeight { u: i, v: j, w });
                }
                if i == j {
                    if w != 0.0 {
                        return Err(GraphError::SelfLoop(i));
                    }
                    continue;
                }
                if w != weights[j * n + i] {
                    return Err(GraphError::Asymmetric(i, j));
                }
                if i < j && w > 0.0 {
                    g.insert(i, j, w);
                }
            }
        }
        Ok(g)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.adj.len()
    }

    /// Number of links `L`.
    pub fn link_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Neighbors of `u` with their weights, sorted by neighbor index.
    #[inline]
    pub fn neighbors(&self, u: usize) -> &[(usize, f64)] {
        &self.adj[u]
    }

    pub fn weight(&self, u: usize, v: usize) -> f64 {
        match self.adj[u].binary_search_by_key(&v, |&(x, _)| x) {
            Ok(k) => self.adj[u][k].1,
            Err(_) => 0.0,
        }
    }

    #[inline]
    pub fn has_link(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search_by_key(&v, |&(x, _)| x).is_ok()
    }

    /// Links `(u, v, w)` with `u < v`, in lexicographic order.
    pub fn links(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, row)| {
            row.iter()
                .filter(move |&&(v, _)| v > u)
                .map(move |&(v, w)| (u, v, w))
        })
    }

    /// Weighted degree of every node, in node order.
    pub fn degrees(&self) -> Vec<f64> {
        self.adj
            .iter()
            .map(|row| row.iter().map(|&(_, w)| w).sum())
            .collect()
    }

    /// Number of neighbors of `u`, ignoring weights.
    #[inline]
    pub fn neighbor_count(&self, u: usize) -> usize {
        self.adj[u].len()
    }

    /// True when every stored weight equals one.
    pub fn is_unweighted(&self) -> bool {
        self.adj.iter().flatten().all(|&(_, w)| w == 1.0)
    }

    pub fn is_connected(&self) -> bool {
        connected_components(self).len() == 1
    }

    /// Row-major dense weight matrix.
    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.n();
        let mut m = vec![0.0; n * n];
        for (u, row) in self.adj.iter().enumerate() {
            for &(v, w) in row {
                m[u * n + v] = w;
            }
        }
        m
    }

    /// Copy with every weight multiplied by `s > 0`.
    pub fn scaled(&self, s: f64) -> Self {
        assert!(s > 0.0 && s.is_finite());
        let adj = self
            .adj
            .iter()
            .map(|row| row.iter().map(|&(v, w)| (v, w * s)).collect())
            .collect();
        Self { adj }
    }

    /// Disjoint union; nodes of `other` are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Graph) -> Self {
        let off = self.n();
        let mut adj = self.adj.clone();
        adj.extend(
            other
                .adj
                .iter()
                .map(|row| row.iter().map(|&(v, w)| (v + off, w)).collect::<Vec<_>>()),
        );
        Self { adj }
    }

    /// Subgraph induced by `nodes`, relabelled `0..nodes.len()` in the given order.
    pub fn induced(&self, nodes: &[usize]) -> Self {
        let mut index = vec![usize::MAX; self.n()];
        for (k, &u) in nodes.iter().enumerate() {
            index[u] = k;
        }
        let adj = nodes
            .iter()
            .map(|&u| {
                let mut row: Vec<(usize, f64)> = self.adj[u]
                    .iter()
                    .filter(|&&(v, _)| index[v] != usize::MAX)
                    .map(|&(v, w)| (index[v], w))
                    .collect();
                row.sort_by_key(|&(v, _)| v);
                row
            })
            .collect();
        Self { adj }
    }

    /// Checks the symmetric / loop-free / nonnegative invariants.
    pub fn validate(&self) -> Result<(), GraphError> {
        for (u, row) in self.adj.iter().enumerate() {
            for (k, &(v, w)) in row.iter().enumerate() {
                if v >= self.n() {
                    return Err(GraphError::NodeOutOfRange {
                        node: v,
                        n: self.n(),
                    });
                }
                if v == u {
                    return Err(GraphError::SelfLoop(u));
                }
                if !(w > 0.0 && w.is_finite()) {
                    return Err(GraphError::NegativeWeight { u, v, w });
                }
                if k > 0 && row[k - 1].0 >= v {
                    return Err(GraphError::DuplicateLink(u, v));
                }
                if self.weight(v, u) != w {
                    return Err(GraphError::Asymmetric(u, v));
                }
            }
        }
        Ok(())
    }

    fn check_pair(&self, u: usize, v: usize) -> Result<(), GraphError> {
        let n = self.n();
        for node in [u, v] {
            if node >= n {
                return Err(GraphError::NodeOutOfRange { node, n });
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        Ok(())
    }

    fn insert(&mut self, u: usize, v: usize, w: f64) {
        for (a, b) in [(u, v), (v, u)] {
            let row = &mut self.adj[a];
            match row.binary_search_by_key(&b, |&(x, _)| x) {
                Ok(k) => row[k].1 = w,
                Err(k) => row.insert(k, (b, w)),
            }
        }
    }

    fn remove(&mut self, u: usize, v: usize) {
        for (a, b) in [(u, v), (v, u)] {
            let row = &mut self.adj[a];
            if let Ok(k) = row.binary_search_by_key(&b, |&(x, _)| x) {
                row.remove(k);
            }
        }
    }
}

/// Weighted degrees sorted in non-increasing order.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeSequence {
    degrees: Vec<f64>,
    c: usize,
}

impl DegreeSequence {
    /// Sorts `degrees` and counts how many lie within relative `tol` of the maximum.
    pub fn new(mut degrees: Vec<f64>, tol: f64) -> Result<Self, GraphError> {
        if degrees.is_empty() || degrees.iter().any(|d| !d.is_finite() || *d < 0.0) {
            return Err(GraphError::InvalidDegrees);
        }
        degrees.sort_by(|a, b| b.total_cmp(a));
        let d_max = degrees[0];
        let floor = d_max * (1.0 - tol);
        let c = degrees.iter().take_while(|&&d| d >= floor).count();
        Ok(Self { degrees, c })
    }

    #[inline]
    pub fn degrees(&self) -> &[f64] {
        &self.degrees
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    #[inline]
    pub fn d_max(&self) -> f64 {
        self.degrees[0]
    }

    #[inline]
    pub fn d_min(&self) -> f64 {
        self.degrees[self.degrees.len() - 1]
    }

    /// Multiplicity `c` of the maximum degree.
    #[inline]
    pub fn multiplicity(&self) -> usize {
        self.c
    }

    /// The `(c+1)`-th entry: the largest degree strictly below `d_max`.
    pub fn second(&self) -> Option<f64> {
        self.degrees.get(self.c).copied()
    }

    /// True when every degree equals `d_max` up to the tolerance used at construction.
    #[inline]
    pub fn is_flat(&self) -> bool {
        self.c == self.degrees.len()
    }

    /// Population mean `E[D]`.
    pub fn mean(&self) -> f64 {
        self.degrees.iter().sum::<f64>() / self.len() as f64
    }
}

pub fn degree_sequence(g: &Graph, tol_deg: f64) -> DegreeSequence {
    DegreeSequence::new(g.degrees(), tol_deg).expect("graph degrees are finite and nonnegative")
}

/// Structural class, reported in priority order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GraphClass {
    /// Every node has weighted degree `r`; the SDE is undefined.
    Regular(f64),
    /// Bipartite with constant weighted degree `r1 >= r2` on each side.
    Biregular(f64, f64),
    /// Disconnected, and one component is a complete graph whose nodes all have degree `d_max`.
    MaxCliqueComponent,
    /// Disconnected, and one non-complete component is regular at degree `d_max`.
    MaxRegularComponent,
    Generic,
}

impl GraphClass {
    pub fn name(&self) -> &'static str {
        match self {
            GraphClass::Regular(_) => "regular",
            GraphClass::Biregular(..) => "biregular",
            GraphClass::MaxCliqueComponent => "max_clique_component",
            GraphClass::MaxRegularComponent => "max_regular_component",
            GraphClass::Generic => "generic",
        }
    }
}

#[inline]
fn close(a: f64, b: f64, tol: f64) -> bool {
    abs(a - b) <= tol * a.max(b).max(1.0)
}

/// Structural classification in priority order
/// `Regular > Biregular > MaxCliqueComponent > MaxRegularComponent > Generic`.
pub fn classify(g: &Graph, tol_deg: f64) -> GraphClass {
    let deg = g.degrees();
    let d_max = deg.iter().copied().fold(0.0, f64::max);
    let d_min = deg.iter().copied().fold(f64::INFINITY, f64::min);
    if d_max - d_min <= tol_deg * d_max.max(1.0) {
        return GraphClass::Regular(d_max);
    }
    let comps = connected_components(g);
    if let Some((r1, r2)) = biregular_degrees(g, &deg, &comps, tol_deg) {
        return GraphClass::Biregular(r1, r2);
    }
    if comps.len() > 1 {
        let at_max: Vec<&Vec<usize>> = comps
            .iter()
            .filter(|c| c.iter().all(|&u| close(deg[u], d_max, tol_deg)))
            .collect();
        if at_max
            .iter()
            .any(|c| c.iter().all(|&u| g.neighbor_count(u) + 1 == c.len()))
        {
            return GraphClass::MaxCliqueComponent;
        }
        if !at_max.is_empty() {
            return GraphClass::MaxRegularComponent;
        }
    }
    GraphClass::Generic
}

/// Two-colours each component; returns `(r1, r2)` with `r1 > r2` if every
/// component splits into one class of degree `r1` and one of degree `r2`.
fn biregular_degrees(g: &Graph, deg: &[f64], comps: &[Vec<usize>], tol: f64) -> Option<(f64, f64)> {
    let colour = two_colouring(g)?;
    let mut pair: Option<(f64, f64)> = None;
    for comp in comps {
        let mut side: [Option<f64>; 2] = [None, None];
        for &u in comp {
            let s = &mut side[colour[u] as usize];
            match *s {
                None => *s = Some(deg[u]),
                Some(d) if close(d, deg[u], tol) => {}
                Some(_) => return None,
            }
        }
        // a singleton component leaves one side empty
        let (a, b) = (side[0]?, side[1]?);
        let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
        if close(hi, lo, tol) {
            return None;
        }
        match pair {
            None => pair = Some((hi, lo)),
            Some((h, l)) if close(h, hi, tol) && close(l, lo, tol) => {}
            Some(_) => return None,
        }
    }
    pair
}

/// Proper two-colouring over positive links, or `None` if some component has an odd cycle.
pub fn two_colouring(g: &Graph) -> Option<Vec<u8>> {
    let n = g.n();
    let mut colour = vec![u8::MAX; n];
    let mut queue = VecDeque::new();
    for s in 0..n {
        if colour[s] != u8::MAX {
            continue;
        }
        colour[s] = 0;
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            for &(v, _) in g.neighbors(u) {
                if colour[v] == u8::MAX {
                    colour[v] = 1 - colour[u];
                    queue.push_back(v);
                } else if colour[v] == colour[u] {
                    return None;
                }
            }
        }
    }
    Some(colour)
}

/// Partition of the nodes into maximal connected sets, each sorted, ordered by smallest node.
pub fn connected_components(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.n();
    let mut seen = vec![false; n];
    let mut comps = Vec::new();
    let mut stack = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        stack.push(s);
        let mut comp = Vec::new();
        while let Some(u) = stack.pop() {
            comp.push(u);
            for &(v, _) in g.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        comp.sort_unstable();
        comps.push(comp);
    }
    comps
}

/// Which pair of replacement links a degree-preserving swap of `(a,b),(c,d)` creates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rewiring {
    /// `(a,c)` and `(b,d)`.
    Parallel,
    /// `(a,d)` and `(b,c)`.
    Crossed,
}

impl Rewiring {
    fn targets(self, (a, b): (usize, usize), (c, d): (usize, usize)) -> [(usize, usize); 2] {
        match self {
            Rewiring::Parallel => [(a, c), (b, d)],
            Rewiring::Crossed => [(a, d), (b, c)],
        }
    }
}

fn check_rewire(g: &Graph, l1: (usize, usize), l2: (usize, usize)) -> Result<(), GraphError> {
    let (a, b) = l1;
    let (c, d) = l2;
    for node in [a, b, c, d] {
        if node >= g.n() {
            return Err(GraphError::NodeOutOfRange { node, n: g.n() });
        }
    }
    if !g.is_unweighted() {
        return Err(GraphError::NotUnweighted);
    }
    let nodes = [a, b, c, d];
    for i in 0..4 {
        for j in i + 1..4 {
            if nodes[i] == nodes[j] {
                return Err(GraphError::NodesNotDistinct);
            }
        }
    }
    for (u, v) in [l1, l2] {
        if !g.has_link(u, v) {
            return Err(GraphError::MissingLink(u, v));
        }
    }
    Ok(())
}

fn rewire_is_free(g: &Graph, r: Rewiring, l1: (usize, usize), l2: (usize, usize)) -> bool {
    r.targets(l1, l2).iter().all(|&(u, v)| !g.has_link(u, v))
}

/// Degree-preserving swap with an explicit choice of replacement links.
pub fn dpr_rewire_with(
    g: &Graph,
    l1: (usize, usize),
    l2: (usize, usize),
    rewiring: Rewiring,
) -> Result<Graph, GraphError> {
    check_rewire(g, l1, l2)?;
    if !rewire_is_free(g, rewiring, l1, l2) {
        return Err(GraphError::RewireConflict);
    }
    let mut out = g.clone();
    out.remove(l1.0, l1.1);
    out.remove(l2.0, l2.1);
    for (u, v) in rewiring.targets(l1, l2) {
        out.insert(u, v, 1.0);
    }
    Ok(out)
}

/// Degree-preserving swap choosing uniformly among the admissible alternatives.
pub fn dpr_rewire<R: Rng + ?Sized>(
    g: &Graph,
    l1: (usize, usize),
    l2: (usize, usize),
    rng: &mut R,
) -> Result<Graph, GraphError> {
    check_rewire(g, l1, l2)?;
    let options: Vec<Rewiring> = [Rewiring::Parallel, Rewiring::Crossed]
        .into_iter()
        .filter(|&r| rewire_is_free(g, r, l1, l2))
        .collect();
    match options.len() {
        0 => Err(GraphError::RewireConflict),
        k => dpr_rewire_with(g, l1, l2, options[rng.gen_range(0..k)]),
    }
}

/// Copy of `g` with a new link `(i, j)` of weight `w > 0`.
pub fn add_link(g: &Graph, i: usize, j: usize, w: f64) -> Result<Graph, GraphError> {
    g.check_pair(i, j)?;
    if !w.is_finite() {
        return Err(GraphError::NonFiniteWeight { u: i, v: j });
    }
    if w <= 0.0 {
        return Err(GraphError::NegativeWeight { u: i, v: j, w });
    }
    if g.has_link(i, j) {
        return Err(GraphError::LinkExists(i.min(j), i.max(j)));
    }
    let mut out = g.clone();
    out.insert(i, j, w);
    Ok(out)
}

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

//! Spectral radius and dense spectra.
//!
//! The spectral radius uses power iteration on `A + d_max I`. The shift makes
//! every eigenvalue nonnegative, so the iteration cannot lock onto `-lambda_1`
//! of a bipartite graph, and it only needs neighbor lists, which keeps very
//! long paths and lollipops cheap. When the gap below `lambda_1` is tiny
//! (long paths, forks) the iterate is handed to a restarted Lanczos process.
//! Full spectra go through Householder tridiagonalization followed by
//! implicit-shift QL.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::graph::Graph;
use crate::math::{abs, hypot, sin, sqrt};

pub const DEFAULT_MAX_ITER: usize = 1_000_000;

/// Largest `n` accepted by [`full_spectrum`].
pub const DENSE_CAP: usize = 2048;

#[derive(Debug, Clone, PartialEq)]
pub enum SpectralError {
    NoConvergence { iterations: usize, residual: f64 },
    TooLargeForDense { n: usize, cap: usize },
}

impl fmt::Display for SpectralError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpectralError::NoConvergence {
                iterations,
                residual,
            } => write!(
                f,
                "spectral radius did not converge after {iterations} steps (residual {residual:e})"
            ),
            SpectralError::TooLargeForDense { n, cap } => {
                write!(
                    f,
                    "graph on {n} nodes exceeds the dense eigensolver cap of {cap}"
                )
            }
        }
    }
}

impl core::error::Error for SpectralError {}

/// Spectral radius `lambda_1` with absolute error about `tol * max(1, d_max)`.
pub fn spectral_radius(g: &Graph, tol: f64) -> Result<f64, SpectralError> {
    spectral_radius_with(g, tol, DEFAULT_MAX_ITER)
}

/// Power steps before switching to Lanczos.
const POWER_PHASE: usize = 2000;

/// Shifted power iteration, handing over to restarted Lanczos when the
/// spectral gap is too small for it to converge within [`POWER_PHASE`] steps.
/// `max_iter` bounds the total number of operator applications.
pub fn spectral_radius_with(g: &Graph, tol: f64, max_iter: usize) -> Result<f64, SpectralError> {
    let n = g.n();
    let d_max = g.degrees().into_iter().fold(0.0, f64::max);
    if d_max == 0.0 {
        return Ok(0.0);
    }
    let shift = d_max;
    let bound = tol * d_max.max(1.0);

    let mut v: Vec<f64> = (0..n).map(|i| 1.0 + 1e-3 * sin((i + 1) as f64)).collect();
    normalize(&mut v);
    let mut w = vec![0.0; n];
    let mut prev = f64::NAN;

    let power_steps = max_iter.min(POWER_PHASE);
    for _ in 0..power_steps {
        multiply(g, &v, &mut w);
        let rq = dot(&v, &w);
        let residual = sqrt(
            v.iter()
                .zip(&w)
                .map(|(&x, &y)| (y - rq * x) * (y - rq * x))
                .sum(),
        );
        if abs(rq - prev) <= bound && residual <= bound {
            return Ok(rq);
        }
        prev = rq;
        for (x, &y) in v.iter_mut().zip(&w) {
            *x = y + shift * *x;
        }
        normalize(&mut v);
    }
    lanczos(g, v, bound, max_iter - power_steps).map_err(|e| match e {
        SpectralError::NoConvergence {
            iterations,
            residual,
        } => SpectralError::NoConvergence {
            iterations: iterations + power_steps,
            residual,
        },
        other => other,
    })
}

/// Explicitly restarted Lanczos with full reorthogonalization for the largest
/// eigenvalue. Converged when the Ritz residual `beta_k |y_k|` is within `bound`.
fn lanczos(g: &Graph, start: Vec<f64>, bound: f64, budget: usize) -> Result<f64, SpectralError> {
    let n = g.n();
    let basis = n.min((20_000_000 / n).clamp(50, 1200));
    let mut start = start;
    let mut used = 0;
    let mut residual = f64::INFINITY;
    while used < budget {
        let mut vs: Vec<Vec<f64>> = vec![start.clone()];
        let (mut alpha, mut beta) = (Vec::new(), Vec::new());
        let mut w = vec![0.0; n];
        let mut ritz = (0.0, Vec::new());
        for j in 0..basis {
            if used >= budget {
                break;
            }
            multiply(g, &vs[j], &mut w);
            used += 1;
            alpha.push(dot(&vs[j], &w));
            for _ in 0..2 {
                for v in &vs {
                    let c = dot(v, &w);
                    for (x, &y) in w.iter_mut().zip(v) {
                        *x -= c * y;
                    }
                }
            }
            let b = sqrt(dot(&w, &w));
            let last = j + 1 == basis || used >= budget;
            let exhausted = b <= 1e-14 * abs(alpha[j]).max(1.0);
            if (j + 1) % 10 == 0 || last || exhausted {
                let (theta, y) = top_ritz_pair(&alpha, &beta);
                residual = b * abs(y[j]);
                if residual <= bound || exhausted {
                    return Ok(theta);
                }
                ritz = (theta, y);
            }
            if last {
                break;
            }
            beta.push(b);
            vs.push(w.iter().map(|x| x / b).collect());
        }
        let y = &ritz.1;
        if y.is_empty() {
            break;
        }
        start = vec![0.0; n];
        for (v, &c) in vs.iter().zip(y) {
            for (x, &e) in start.iter_mut().zip(v) {
                *x += c * e;
            }
        }
        normalize(&mut start);
    }
    Err(SpectralError::NoConvergence {
        iterations: used,
        residual,
    })
}

/// Largest eigenvalue of the symmetric tridiagonal matrix with diagonal
/// `alpha` and off-diagonal `beta`, with a unit eigenvector from inverse iteration.
fn top_ritz_pair(alpha: &[f64], beta: &[f64]) -> (f64, Vec<f64>) {
    let k = alpha.len();
    let mut d = alpha.to_vec();
    let mut e = beta.to_vec();
    e.resize(k, 0.0);
    tridiagonal_ql(&mut d, &mut e);
    let theta = d.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let scale = alpha
        .iter()
        .chain(beta)
        .fold(0.0, |m: f64, &x| m.max(abs(x)))
        .max(1.0);
    let sigma = theta + 1e-10 * scale;
    let mut y = vec![1.0 / sqrt(k as f64); k];
    for _ in 0..3 {
        y = tridiagonal_solve(alpha, beta, sigma, &y);
        let norm = sqrt(dot(&y, &y));
        for x in y.iter_mut() {
            *x /= norm;
        }
    }
    (theta, y)
}

/// Solves `(T - sigma I) x = rhs` by Gaussian elimination with partial pivoting.
fn tridiagonal_solve(alpha: &[f64], beta: &[f64], sigma: f64, rhs: &[f64]) -> Vec<f64> {
    let k = alpha.len();
    // row i holds (lower, diag, upper, upper2) after pivoting
    let mut diag: Vec<f64> = alpha.iter().map(|a| a - sigma).collect();
    let mut upper: Vec<f64> = (0..k)
        .map(|i| if i + 1 < k { beta[i] } else { 0.0 })
        .collect();
    let mut upper2 = vec![0.0; k];
    let mut x = rhs.to_vec();
    for i in 0..k.saturating_sub(1) {
        let sub = beta[i];
        if abs(sub) > abs(diag[i]) {
            // swap rows i and i + 1
            let (d1, u1, u2) = (diag[i], upper[i], upper2[i]);
            diag[i] = sub;
            upper[i] = diag[i + 1];
            upper2[i] = upper[i + 1];
            x.swap(i, i + 1);
            let f = d1 / sub;
            diag[i + 1] = u1 - f * upper[i];
            upper[i + 1] = u2 - f * upper2[i];
            x[i + 1] -= f * x[i];
        } else {
            if diag[i] == 0.0 {
                diag[i] = f64::EPSILON;
            }
            let f = sub / diag[i];
            diag[i + 1] -= f * upper[i];
            upper[i + 1] -= f * upper2[i];
            x[i + 1] -= f * x[i];
        }
    }
    for i in (0..k).rev() {
        let mut s = x[i];
        if i + 1 < k {
            s -= upper[i] * x[i + 1];
        }
        if i + 2 < k {
            s -= upper2[i] * x[i + 2];
        }
        let d = if diag[i] == 0.0 {
            f64::EPSILON
        } else {
            diag[i]
        };
        x[i] = s / d;
    }
    x
}

fn multiply(g: &Graph, v: &[f64], out: &mut [f64]) {
    for (u, o) in out.iter_mut().enumerate() {
        *o = g.neighbors(u).iter().map(|&(x, w)| w * v[x]).sum();
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize(v: &mut [f64]) {
    let norm = sqrt(dot(v, v));
    for x in v.iter_mut() {
        *x /= norm;
    }
}

/// Adjacency and Laplacian eigenvalues, both sorted in non-increasing order.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub adjacency_eigs: Vec<f64>,
    /// `L = D - A`; negative round-off is clamped and the last entry is exactly zero.
    pub laplacian_eigs: Vec<f64>,
}

impl Spectrum {
    #[inline]
    pub fn lambda1(&self) -> f64 {
        self.adjacency_eigs[0]
    }
}

pub fn full_spectrum(g: &Graph) -> Result<Spectrum, SpectralError> {
    let n = g.n();
    if n > DENSE_CAP {
        return Err(SpectralError::TooLargeForDense { n, cap: DENSE_CAP });
    }
    let adjacency = g.to_dense();
    let mut laplacian: Vec<f64> = adjacency.iter().map(|&w| -w).collect();
    for (i, d) in g.degrees().into_iter().enumerate() {
        laplacian[i * n + i] = d;
    }
    let adjacency_eigs = symmetric_eigenvalues(n, adjacency);
    let mut laplacian_eigs = symmetric_eigenvalues(n, laplacian);
    for mu in laplacian_eigs.iter_mut() {
        if *mu < 0.0 {
            *mu = 0.0;
        }
    }
    laplacian_eigs[n - 1] = 0.0;
    Ok(Spectrum {
        adjacency_eigs,
        laplacian_eigs,
    })
}

/// Eigenvalues of the symmetric row-major `n x n` matrix, in non-increasing order.
pub fn symmetric_eigenvalues(n: usize, mut a: Vec<f64>) -> Vec<f64> {
    assert_eq!(a.len(), n * n);
    let (mut d, mut e) = tridiagonalize(n, &mut a);
    tridiagonal_ql(&mut d, &mut e);
    d.sort_by(|x, y| y.total_cmp(x));
    d
}

/// Householder reduction to tridiagonal form. Returns the diagonal and the
/// off-diagonal, where `e[i]` couples rows `i` and `i + 1` and `e[n-1] = 0`.
fn tridiagonalize(n: usize, a: &mut [f64]) -> (Vec<f64>, Vec<f64>) {
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    let mut v = vec![0.0; n];
    let mut p = vec![0.0; n];
    for k in 0..n.saturating_sub(2) {
        let norm = sqrt((k + 1..n).map(|i| a[i * n + k] * a[i * n + k]).sum());
        d[k] = a[k * n + k];
        if norm == 0.0 {
            e[k] = 0.0;
            continue;
        }
        let x0 = a[(k + 1) * n + k];
        let alpha = if x0 > 0.0 { -norm } else { norm };
        for i in k + 1..n {
            v[i] = a[i * n + k];
        }
        v[k + 1] -= alpha;
        let vnorm = sqrt((k + 1..n).map(|i| v[i] * v[i]).sum());
        for x in &mut v[k + 1..n] {
            *x /= vnorm;
        }
        // p = A22 v, then q = p - (v.p) v, A22 -= 2 (v q^T + q v^T)
        for i in k + 1..n {
            p[i] = (k + 1..n).map(|j| a[i * n + j] * v[j]).sum();
        }
        let kdot: f64 = (k + 1..n).map(|i| v[i] * p[i]).sum();
        for i in k + 1..n {
            p[i] -= kdot * v[i];
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i * n + j] -= 2.0 * (v[i] * p[j] + p[i] * v[j]);
            }
        }
        e[k] = alpha;
    }
    if n >= 2 {
        d[n - 2] = a[(n - 2) * n + n - 2];
        e[n - 2] = a[(n - 1) * n + n - 2];
    }
    if n >= 1 {
        d[n - 1] = a[(n - 1) * n + n - 1];
    }
    (d, e)
}

/// Implicit-shift QL on a symmetric tridiagonal matrix; eigenvalues land in `d`.
fn tridiagonal_ql(d: &mut [f64], e: &mut [f64]) {
    let n = d.len();
    if n < 2 {
        return;
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m < n - 1 {
                let dd = abs(d[m]) + abs(d[m + 1]);
                if abs(e[m]) <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 100 {
                break;
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + if g >= 0.0 { r } else { -r });
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = hypot(f, g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
}

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

//! Spectral degree exponent (SDE) of weighted undirected graphs.
//!
//! The SDE of a non-regular graph is the unique `q >= 2` at which the power
//! mean of order `q` of the weighted degree sequence equals the spectral
//! radius of the weighted adjacency matrix:
//!
//! ```text
//! lambda_1 = ((1/N) * sum_i d_i^q)^(1/q)
//! ```
//!
//! The crate is `no_std` (it needs `alloc`) so it can be embedded anywhere.
//! File formats, batch pipelines and the command-line front end live in the
//! `sde` companion crate.
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`graph`] | [`Graph`], degree sequences, structural classes, rewiring |
//! | [`spectral`] | matrix-free spectral radius, dense adjacency/Laplacian spectra |
//! | [`solver`] | log-domain bisection, fixed-point recursion, bounds |
//! | [`families`] | path, wheel, fork, lollipop, biregular, ER and BA generators |
//! | [`metrics`] | degree assortativity, Laplacian metrics, distance metrics |
//!
//! ```
//! use sde_core::{families::FamilySpec, solver::{sde, SdeOptions}};
//!
//! let fork = FamilySpec::Fork(20).generate().unwrap();
//! let q = sde(&fork, &SdeOptions::default()).unwrap().q().unwrap();
//! assert!((q - 2.36864).abs() < 1e-5);
//! ```
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod families;
pub mod graph;
pub(crate) mod math;
pub mod metrics;
pub mod solver;
pub mod spectral;

pub use graph::{DegreeSequence, Graph, GraphClass, GraphError};
pub use metrics::MetricsRecord;
pub use solver::{SdeBounds, SdeError, SdeOptions, SdeResult};
pub use spectral::{SpectralError, Spectrum};

/// Stand-in for an unbounded exponent in numerical search.
pub const Q_MAX: f64 = 1.0e6;

/// Default relative tolerance for comparing weighted degrees.
pub const DEFAULT_TOL_DEG: f64 = 1.0e-9;

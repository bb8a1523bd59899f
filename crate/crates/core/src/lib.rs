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

//! Equitable, parity and regular edge-factorizations of multigraphs.
//!
//! A factorization splits the edges of a multigraph `G` into `k` spanning
//! factors `G_1, ..., G_k`. The crate builds factorizations whose degrees
//! track `d_G(v)/k` as closely as possible, in three steps:
//!
//! 1. orient `G` so that out-degrees have prescribed residues modulo `k`
//!    ([`orientation`]);
//! 2. split the directed graph into a bipartite graph of maximum degree `k`
//!    and color its edges ([`coloring`]);
//! 3. pull the color classes back to factors ([`pipelines`]).
//!
//! The [`parity`] module covers parity factors with degrees near `ε d(v)`,
//! [`connectivity`] evaluates the cut conditions the constructions rely on,
//! and [`lab`] audits outputs and supplies brute-force oracles.
//!
//! ```
//! use equifactor::graph::Multigraph;
//! use equifactor::pipelines::{equitable_factorize, EquitableRequest, Steering};
//!
//! let k7 = Multigraph::complete(7);
//! let report = equitable_factorize(&k7, &EquitableRequest::new(3, Steering::Auto)).unwrap();
//! for row in report.factorization.degree_table(&k7) {
//!     assert_eq!(row, vec![2; 7]);
//! }
//! ```

pub mod coloring;
pub mod connectivity;
pub mod error;
mod flow;
pub mod graph;
pub mod io;
pub mod lab;
mod matching;
pub mod orientation;
pub mod parity;
pub mod pipelines;
pub mod report;

pub use error::{Error, ErrorKind, Result};
pub use graph::{EdgeId, Factorization, Multigraph, Orientation, VertexId};

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/overview.md")]
mod book_overview {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/graphs.md")]
mod book_graphs {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/connectivity.md")]
mod book_connectivity {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/orientations.md")]
mod book_orientations {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/decomposition.md")]
mod book_decomposition {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/equitable.md")]
mod book_equitable {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/parity.md")]
mod book_parity {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/lab.md")]
mod book_lab {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
mod book_cli {}

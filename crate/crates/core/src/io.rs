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

//! Line-oriented graph files.
//!
//! ```text
//! # a triangle with a loop
//! n 3
//! e 0 1
//! e 1 2
//! e 2 0
//! e 1 1
//! ```
//!
//! Edge ids follow file order; parallel edges are repeated lines.

use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::Multigraph;

pub fn parse_graph(text: &str) -> Result<Multigraph> {
    let mut graph: Option<Multigraph> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let fail = |message: String| Error::Parse { line, message };
        let mut words = content.split_whitespace();
        let tag = words.next().unwrap_or_default();
        let numbers: Vec<usize> = words
            .map(|w| {
                w.parse()
                    .map_err(|_| fail(format!("expected a non-negative integer, found {w:?}")))
            })
            .collect::<Result<_>>()?;
        match (tag, numbers.as_slice()) {
            ("n", [count]) => {
                if graph.is_some() {
                    return Err(fail("duplicate vertex-count header".into()));
                }
                graph = Some(Multigraph::new(*count));
            }
            ("e", [u, v]) => {
                let g = graph
                    .as_mut()
                    .ok_or_else(|| fail("edge before the `n <count>` header".into()))?;
                g.add_edge(*u, *v).map_err(|e| fail(e.to_string()))?;
            }
            ("n", _) => return Err(fail("expected `n <count>`".into())),
            ("e", _) => return Err(fail("expected `e <u> <v>`".into())),
            (other, _) => return Err(fail(format!("unknown record {other:?}"))),
        }
    }
    graph.ok_or_else(|| Error::Parse {
        line: text.lines().count().max(1),
        message: "missing `n <count>` header".into(),
    })
}

pub fn write_graph(g: &Multigraph) -> String {
    let mut out = format!("n {}\n", g.vertex_count());
    for &(u, v) in g.edges() {
        out.push_str(&format!("e {u} {v}\n"));
    }
    out
}

pub fn read_graph_file(path: &Path) -> Result<Multigraph> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    parse_graph(&text)
}

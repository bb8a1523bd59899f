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

//! Decomposition of directed multigraphs by bipartite edge coloring.
//!
//! Every vertex is split into an out-side and an in-side, each side is cut
//! into chunks of at most `k` arcs, and the resulting bipartite multigraph is
//! properly `k`-edge-colored. Color classes pulled back to the original arcs
//! give factors whose out- and in-degrees are within one of `d+/k`, `d-/k`.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Factorization, Multigraph, Orientation, VertexId};
use crate::orientation::eulerian_orientation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Out,
    In,
}

/// Where a vertex of the split graph came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Chunk {
    pub vertex: VertexId,
    pub side: Side,
    pub index: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeOrigin {
    Real(EdgeId),
    Artificial,
}

#[derive(Debug, Clone)]
pub struct BipartiteSplit {
    pub graph: Multigraph,
    pub chunk_of: Vec<Chunk>,
    pub origin_edge: Vec<EdgeOrigin>,
}

impl BipartiteSplit {
    pub fn real_mask(&self) -> Vec<bool> {
        self.origin_edge
            .iter()
            .map(|o| matches!(o, EdgeOrigin::Real(_)))
            .collect()
    }
}

/// Colors are `0..k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeColoring {
    pub color: Vec<usize>,
}

impl EdgeColoring {
    pub fn is_proper(&self, b: &Multigraph) -> bool {
        (0..b.vertex_count()).all(|v| {
            let mut seen = std::collections::HashSet::new();
            b.incident(v).iter().all(|&e| seen.insert(self.color[e]))
        })
    }

    /// Class sizes over the edges selected by `mask` (all edges when `None`).
    pub fn class_sizes(&self, k: usize, mask: Option<&[bool]>) -> Vec<usize> {
        let mut sizes = vec![0; k];
        for (e, &c) in self.color.iter().enumerate() {
            if mask.is_none_or(|m| m[e]) {
                sizes[c] += 1;
            }
        }
        sizes
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecompositionMode {
    /// Factor sizes within one of `|E|/k`.
    Size,
    /// `d_i(u) = (d+(u) - d-(u))/k (mod 2)` wherever `d+(u) = d-(u) (mod k)`.
    Parity,
}

pub fn split_to_bipartite(d: &Orientation, k: usize, parity_mode: bool) -> Result<BipartiteSplit> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let n = d.vertex_count();
    let mut out_arcs = vec![Vec::new(); n];
    let mut in_arcs = vec![Vec::new(); n];
    for (e, &(t, h)) in d.arcs().iter().enumerate() {
        out_arcs[t].push(e);
        in_arcs[h].push(e);
    }
    let mut chunk_of = Vec::new();
    // first chunk id for each (vertex, side)
    let mut out_base = vec![0; n];
    let mut in_base = vec![0; n];
    for v in 0..n {
        out_base[v] = chunk_of.len();
        for index in 0..out_arcs[v].len().div_ceil(k) {
            chunk_of.push(Chunk {
                vertex: v,
                side: Side::Out,
                index,
            });
        }
        in_base[v] = chunk_of.len();
        for index in 0..in_arcs[v].len().div_ceil(k) {
            chunk_of.push(Chunk {
                vertex: v,
                side: Side::In,
                index,
            });
        }
    }
    let mut tail_chunk = vec![0; d.arcs().len()];
    let mut head_chunk = vec![0; d.arcs().len()];
    for v in 0..n {
        for (pos, &e) in out_arcs[v].iter().enumerate() {
            tail_chunk[e] = out_base[v] + pos / k;
        }
        for (pos, &e) in in_arcs[v].iter().enumerate() {
            head_chunk[e] = in_base[v] + pos / k;
        }
    }
    let mut graph = Multigraph::new(chunk_of.len());
    let mut origin_edge = Vec::with_capacity(d.arcs().len());
    for e in 0..d.arcs().len() {
        graph.push_unchecked(tail_chunk[e], head_chunk[e]);
        origin_edge.push(EdgeOrigin::Real(e));
    }
    if parity_mode {
        for v in 0..n {
            let (dp, dm) = (out_arcs[v].len(), in_arcs[v].len());
            let r = dp % k;
            if r != 0 && dm % k == r {
                let out_last = out_base[v] + dp / k;
                let in_last = in_base[v] + dm / k;
                for _ in 0..k - r {
                    graph.push_unchecked(out_last, in_last);
                    origin_edge.push(EdgeOrigin::Artificial);
                }
            }
        }
    }
    Ok(BipartiteSplit {
        graph,
        chunk_of,
        origin_edge,
    })
}

fn two_coloring(b: &Multigraph) -> Result<Vec<bool>> {
    let n = b.vertex_count();
    let mut side: Vec<Option<bool>> = vec![None; n];
    for s in 0..n {
        if side[s].is_some() {
            continue;
        }
        side[s] = Some(false);
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            let su = side[u].unwrap();
            for &e in b.incident(u) {
                let w = b.opposite(e, u);
                match side[w] {
                    None => {
                        side[w] = Some(!su);
                        queue.push_back(w);
                    }
                    Some(sw) if sw == su => {
                        return Err(Error::InvalidInput(format!(
                            "graph is not bipartite (odd cycle through edge {e})"
                        )));
                    }
                    Some(_) => {}
                }
            }
        }
    }
    Ok(side.into_iter().map(|s| s.unwrap()).collect())
}

/// Proper `k`-edge-coloring of a bipartite multigraph with `Δ <= k`.
pub fn konig_edge_coloring(b: &Multigraph, k: usize) -> Result<EdgeColoring> {
    if k == 0 && b.edge_count() > 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    two_coloring(b)?;
    if b.max_degree() > k {
        return Err(Error::InvalidInput(format!(
            "maximum degree {} exceeds k = {k}",
            b.max_degree()
        )));
    }
    let n = b.vertex_count();
    let mut at: Vec<Vec<Option<EdgeId>>> = vec![vec![None; k]; n];
    let mut color = vec![usize::MAX; b.edge_count()];
    for (e, &(x, y)) in b.edges().iter().enumerate() {
        let common = (0..k).find(|&c| at[x][c].is_none() && at[y][c].is_none());
        let c = match common {
            Some(c) => c,
            None => {
                let a = (0..k)
                    .find(|&c| at[x][c].is_none())
                    .expect("degree below k");
                let bb = (0..k)
                    .find(|&c| at[y][c].is_none())
                    .expect("degree below k");
                // Alternating a/bb path from y; it cannot reach x.
                let mut path = Vec::new();
                let mut v = y;
                let mut want = a;
                while let Some(f) = at[v][want] {
                    path.push(f);
                    v = b.opposite(f, v);
                    want = if want == a { bb } else { a };
                }
                for &f in &path {
                    let (p, q) = b.endpoints(f);
                    at[p][color[f]] = None;
                    at[q][color[f]] = None;
                }
                for &f in &path {
                    let swapped = if color[f] == a { bb } else { a };
                    color[f] = swapped;
                    let (p, q) = b.endpoints(f);
                    at[p][swapped] = Some(f);
                    at[q][swapped] = Some(f);
                }
                a
            }
        };
        color[e] = c;
        at[x][c] = Some(e);
        at[y][c] = Some(e);
    }
    Ok(EdgeColoring { color })
}

/// Components of the subgraph formed by colors `i` and `j`.
fn two_color_components(
    b: &Multigraph,
    coloring: &EdgeColoring,
    i: usize,
    j: usize,
) -> Vec<Vec<EdgeId>> {
    let mut seen = vec![false; b.edge_count()];
    let mut comps = Vec::new();
    for e0 in 0..b.edge_count() {
        let c = coloring.color[e0];
        if seen[e0] || (c != i && c != j) {
            continue;
        }
        seen[e0] = true;
        let mut comp = vec![e0];
        let mut stack = vec![e0];
        while let Some(e) = stack.pop() {
            let (p, q) = b.endpoints(e);
            for v in [p, q] {
                for &f in b.incident(v) {
                    let cf = coloring.color[f];
                    if !seen[f] && (cf == i || cf == j) {
                        seen[f] = true;
                        comp.push(f);
                        stack.push(f);
                    }
                }
            }
        }
        comps.push(comp);
    }
    comps
}

/// Kempe swaps until every class size (over `real` edges, or all edges) is
/// within one of the mean.
pub fn balance_color_sizes(
    b: &Multigraph,
    coloring: EdgeColoring,
    k: usize,
    real: Option<&[bool]>,
) -> EdgeColoring {
    let mut coloring = coloring;
    let is_real = |e: EdgeId| real.is_none_or(|m| m[e]);
    'outer: loop {
        let sizes = coloring.class_sizes(k, real);
        let mut pairs: Vec<(usize, usize)> = (0..k)
            .flat_map(|i| (0..k).map(move |j| (i, j)))
            .filter(|&(i, j)| sizes[i] > sizes[j] + 1)
            .collect();
        if pairs.is_empty() {
            return coloring;
        }
        pairs.sort_by_key(|&(i, j)| std::cmp::Reverse(sizes[i] - sizes[j]));
        for (i, j) in pairs {
            let gap = sizes[i] - sizes[j];
            for comp in two_color_components(b, &coloring, i, j) {
                let delta: i64 = comp
                    .iter()
                    .filter(|&&e| is_real(e))
                    .map(|&e| if coloring.color[e] == i { 1 } else { -1 })
                    .sum();
                if delta >= 1 && (delta as usize) < gap {
                    for &e in &comp {
                        coloring.color[e] = if coloring.color[e] == i { j } else { i };
                    }
                    debug_assert!(coloring.is_proper(b));
                    continue 'outer;
                }
            }
        }
        // only reachable with artificial edges present
        return coloring;
    }
}

pub fn decompose_directed(
    d: &Orientation,
    k: usize,
    mode: DecompositionMode,
) -> Result<Factorization> {
    let g = d.underlying();
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let split = split_to_bipartite(d, k, mode == DecompositionMode::Parity)?;
    let mut coloring = konig_edge_coloring(&split.graph, k)?;
    if mode == DecompositionMode::Size {
        coloring = balance_color_sizes(&split.graph, coloring, k, None);
    }
    let mut assignment = vec![0; g.edge_count()];
    for (be, origin) in split.origin_edge.iter().enumerate() {
        if let EdgeOrigin::Real(e) = origin {
            assignment[*e] = coloring.color[be];
        }
    }
    Factorization::new(&g, k, assignment)
}

/// Orientation with `|d+(v) - d-(v)| <= 1`, from an Eulerian orientation of
/// `G` plus one auxiliary vertex adjacent to every odd vertex.
pub fn nearly_balanced_orientation(g: &Multigraph) -> Result<Orientation> {
    let n = g.vertex_count();
    let mut aug = Multigraph::new(n + 1);
    for &(u, v) in g.edges() {
        aug.push_unchecked(u, v);
    }
    for (v, &deg) in g.degrees().iter().enumerate() {
        if deg % 2 == 1 {
            aug.push_unchecked(v, n);
        }
    }
    let euler = eulerian_orientation(&aug)?;
    Orientation::from_arcs(g, euler.arcs()[..g.edge_count()].to_vec())
}

/// Factorization with `floor(d/2k) + floor((d+1)/2k) <= d_i(v)` and
/// `d_i(v) <= ceil(d/2k) + ceil((d-1)/2k)`, sizes within one of `|E|/k`.
pub fn anstee_decomposition(g: &Multigraph, k: usize) -> Result<Factorization> {
    let o = nearly_balanced_orientation(g)?;
    decompose_directed(&o, k, DecompositionMode::Size)
}

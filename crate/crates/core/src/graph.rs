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

//! Undirected multigraphs with loops, orientations and factorizations.
//!
//! Degree conventions: a loop at `v` adds 2 to `d(v)` but is never counted
//! by a cut, so `d({v})` only sees non-loop edges. Edge ids are positional
//! and dense.

use std::collections::BTreeSet;

use crate::error::{Error, Result};

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Multigraph {
    vertex_count: usize,
    edges: Vec<(VertexId, VertexId)>,
    incidence: Vec<Vec<EdgeId>>,
}

impl Multigraph {
    pub fn new(vertex_count: usize) -> Self {
        Multigraph {
            vertex_count,
            edges: Vec::new(),
            incidence: vec![Vec::new(); vertex_count],
        }
    }

    pub fn from_edges(vertex_count: usize, edges: &[(VertexId, VertexId)]) -> Result<Self> {
        let mut g = Multigraph::new(vertex_count);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Appends an edge and returns its id. `u == v` adds a loop.
    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<EdgeId> {
        if u >= self.vertex_count || v >= self.vertex_count {
            return Err(Error::InvalidInput(format!(
                "edge ({u}, {v}) references a vertex outside 0..{}",
                self.vertex_count
            )));
        }
        let id = self.edges.len();
        self.edges.push((u, v));
        self.incidence[u].push(id);
        if u != v {
            self.incidence[v].push(id);
        }
        Ok(id)
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Multigraph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                g.push_unchecked(u, v);
            }
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = Multigraph::new(n);
        for u in 0..n {
            g.push_unchecked(u, (u + 1) % n);
        }
        g
    }

    pub fn path(n: usize) -> Self {
        let mut g = Multigraph::new(n);
        for u in 1..n {
            g.push_unchecked(u - 1, u);
        }
        g
    }

    /// Every edge repeated `times` times; copies of edge `e` get ids
    /// `e * times .. (e + 1) * times`.
    pub fn multiplied(&self, times: usize) -> Self {
        let mut g = Multigraph::new(self.vertex_count);
        for &(u, v) in &self.edges {
            for _ in 0..times {
                g.push_unchecked(u, v);
            }
        }
        g
    }

    pub(crate) fn push_unchecked(&mut self, u: VertexId, v: VertexId) -> EdgeId {
        self.add_edge(u, v).expect("vertex ids in range")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn endpoints(&self, e: EdgeId) -> (VertexId, VertexId) {
        self.edges[e]
    }

    pub fn is_loop(&self, e: EdgeId) -> bool {
        let (u, v) = self.edges[e];
        u == v
    }

    pub fn has_loops(&self) -> bool {
        self.edges.iter().any(|&(u, v)| u == v)
    }

    /// Edge ids incident with `v`, each listed once (loops included).
    pub fn incident(&self, v: VertexId) -> &[EdgeId] {
        &self.incidence[v]
    }

    /// The endpoint of `e` opposite to `v`; `v` itself for a loop.
    pub fn opposite(&self, e: EdgeId, v: VertexId) -> VertexId {
        let (a, b) = self.edges[e];
        if a == v {
            b
        } else {
            a
        }
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.incidence[v]
            .iter()
            .map(|&e| if self.is_loop(e) { 2 } else { 1 })
            .sum()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertex_count];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    pub fn loop_counts(&self) -> Vec<usize> {
        let mut loops = vec![0; self.vertex_count];
        for &(u, v) in &self.edges {
            if u == v {
                loops[u] += 1;
            }
        }
        loops
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    pub fn is_eulerian(&self) -> bool {
        self.degrees().iter().all(|d| d % 2 == 0)
    }

    /// First vertex of odd degree, if any.
    pub fn odd_vertex(&self) -> Option<(VertexId, usize)> {
        self.degrees()
            .into_iter()
            .enumerate()
            .find(|(_, d)| d % 2 == 1)
    }

    pub(crate) fn require_even_degrees(&self) -> Result<()> {
        match self.odd_vertex() {
            Some((vertex, degree)) => Err(Error::OddDegree { vertex, degree }),
            None => Ok(()),
        }
    }

    /// Edge ids whose endpoints both satisfy `keep`.
    pub fn induced_edges(&self, keep: &[bool]) -> impl Iterator<Item = EdgeId> + '_ {
        let keep = keep.to_vec();
        self.edges
            .iter()
            .enumerate()
            .filter(move |(_, &(u, v))| keep[u] && keep[v])
            .map(|(e, _)| e)
    }

    /// Spanning subgraph on the listed edges. The returned vector maps new
    /// edge ids back to ids of `self`.
    pub fn edge_subgraph(&self, edges: &[EdgeId]) -> (Multigraph, Vec<EdgeId>) {
        let mut g = Multigraph::new(self.vertex_count);
        for &e in edges {
            let (u, v) = self.edges[e];
            g.push_unchecked(u, v);
        }
        (g, edges.to_vec())
    }

    /// Number of edges with exactly one end in the set marked by `side`.
    pub fn boundary_size(&self, side: &[bool]) -> usize {
        self.edges
            .iter()
            .filter(|&&(u, v)| side[u] != side[v])
            .count()
    }

    /// `d_G(A)` and `d_G(A, B)` for a disjoint pair of vertex sets.
    pub fn cut_profile(&self, query: &CutQuery) -> Result<CutProfile> {
        let (in_a, in_b) = query.membership(self.vertex_count)?;
        let mut profile = CutProfile::default();
        for &(u, v) in &self.edges {
            if in_a[u] != in_a[v] {
                profile.boundary += 1;
            }
            if (in_a[u] && in_b[v]) || (in_a[v] && in_b[u]) {
                profile.between += 1;
            }
        }
        Ok(profile)
    }

    /// Connected components of `G - removed`, each sorted, ordered by their
    /// smallest vertex.
    pub fn components(&self, removed: &[VertexId]) -> Result<Vec<Vec<VertexId>>> {
        let mut gone = vec![false; self.vertex_count];
        for &v in removed {
            if v >= self.vertex_count {
                return Err(Error::InvalidQuery(format!("vertex {v} out of range")));
            }
            gone[v] = true;
        }
        Ok(self.components_masked(&gone))
    }

    pub(crate) fn components_masked(&self, gone: &[bool]) -> Vec<Vec<VertexId>> {
        let n = self.vertex_count;
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        let mut stack = Vec::new();
        for s in 0..n {
            if gone[s] || comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![s];
            comp[s] = id;
            stack.push(s);
            while let Some(u) = stack.pop() {
                for &e in &self.incidence[u] {
                    let w = self.opposite(e, u);
                    if !gone[w] && comp[w] == usize::MAX {
                        comp[w] = id;
                        members.push(w);
                        stack.push(w);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components_masked(&vec![false; self.vertex_count])
            .len()
            <= 1
    }

    /// `d_G(v) mod k` for every vertex.
    pub fn degree_residues(&self, k: usize) -> Result<Vec<usize>> {
        if k == 0 {
            return Err(Error::InvalidParameter(
                "modulus k must be at least 1".into(),
            ));
        }
        Ok(self.degrees().into_iter().map(|d| d % k).collect())
    }
}

/// A pair of disjoint vertex sets `(A, B)`; `B` may be empty.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CutQuery {
    pub a: BTreeSet<VertexId>,
    pub b: BTreeSet<VertexId>,
}

impl CutQuery {
    pub fn new(
        a: impl IntoIterator<Item = VertexId>,
        b: impl IntoIterator<Item = VertexId>,
    ) -> Self {
        CutQuery {
            a: a.into_iter().collect(),
            b: b.into_iter().collect(),
        }
    }

    fn membership(&self, n: usize) -> Result<(Vec<bool>, Vec<bool>)> {
        let mut in_a = vec![false; n];
        let mut in_b = vec![false; n];
        for &v in &self.a {
            if v >= n {
                return Err(Error::InvalidQuery(format!("vertex {v} out of range")));
            }
            in_a[v] = true;
        }
        for &v in &self.b {
            if v >= n {
                return Err(Error::InvalidQuery(format!("vertex {v} out of range")));
            }
            if in_a[v] {
                return Err(Error::InvalidQuery(format!(
                    "vertex {v} lies in both A and B"
                )));
            }
            in_b[v] = true;
        }
        Ok((in_a, in_b))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CutProfile {
    /// `d_G(A)`: edges with exactly one end in `A`.
    pub boundary: usize,
    /// `d_G(A, B)`: edges joining `A` and `B`.
    pub between: usize,
}

/// A direction for every edge of a multigraph, stored as `(tail, head)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orientation {
    vertex_count: usize,
    arcs: Vec<(VertexId, VertexId)>,
}

impl Orientation {
    /// Checks that every arc is one of the two readings of the matching edge.
    pub fn from_arcs(g: &Multigraph, arcs: Vec<(VertexId, VertexId)>) -> Result<Self> {
        if arcs.len() != g.edge_count() {
            return Err(Error::InvalidInput(format!(
                "{} arcs given for {} edges",
                arcs.len(),
                g.edge_count()
            )));
        }
        for (e, &(t, h)) in arcs.iter().enumerate() {
            let (u, v) = g.endpoints(e);
            if !((t, h) == (u, v) || (t, h) == (v, u)) {
                return Err(Error::InvalidInput(format!(
                    "arc ({t}, {h}) does not match edge {e} = ({u}, {v})"
                )));
            }
        }
        Ok(Orientation {
            vertex_count: g.vertex_count(),
            arcs,
        })
    }

    /// Orient every edge from the given tail.
    pub fn from_tails(g: &Multigraph, tails: &[VertexId]) -> Result<Self> {
        let arcs = tails
            .iter()
            .enumerate()
            .map(|(e, &t)| (t, g.opposite(e, t)))
            .collect();
        Orientation::from_arcs(g, arcs)
    }

    /// Every edge `(u, v)` read as `u -> v`.
    pub fn as_listed(g: &Multigraph) -> Self {
        Orientation {
            vertex_count: g.vertex_count(),
            arcs: g.edges().to_vec(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn arcs(&self) -> &[(VertexId, VertexId)] {
        &self.arcs
    }

    pub fn arc(&self, e: EdgeId) -> (VertexId, VertexId) {
        self.arcs[e]
    }

    pub fn out_degrees(&self) -> Vec<usize> {
        let mut out = vec![0; self.vertex_count];
        for &(t, _) in &self.arcs {
            out[t] += 1;
        }
        out
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        let mut inn = vec![0; self.vertex_count];
        for &(_, h) in &self.arcs {
            inn[h] += 1;
        }
        inn
    }

    /// The underlying undirected multigraph, with the same edge ids.
    pub fn underlying(&self) -> Multigraph {
        let mut g = Multigraph::new(self.vertex_count);
        for &(t, h) in &self.arcs {
            g.push_unchecked(t, h);
        }
        g
    }
}

/// Assignment of every edge to one of `k` factors, indexed `0..k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    k: usize,
    assignment: Vec<usize>,
}

impl Factorization {
    pub fn new(g: &Multigraph, k: usize, assignment: Vec<usize>) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter("k must be at least 1".into()));
        }
        if assignment.len() != g.edge_count() {
            return Err(Error::InvalidInput(format!(
                "assignment covers {} edges but the graph has {}",
                assignment.len(),
                g.edge_count()
            )));
        }
        if let Some((e, &i)) = assignment.iter().enumerate().find(|(_, &i)| i >= k) {
            return Err(Error::InvalidInput(format!(
                "edge {e} assigned to factor {i}, but k = {k}"
            )));
        }
        Ok(Factorization { k, assignment })
    }

    /// Builds from explicit per-factor edge lists, which must partition the
    /// edge ids of `g`.
    pub fn from_factor_edges(g: &Multigraph, factors: &[Vec<EdgeId>]) -> Result<Self> {
        let mut assignment = vec![usize::MAX; g.edge_count()];
        for (i, edges) in factors.iter().enumerate() {
            for &e in edges {
                if e >= g.edge_count() {
                    return Err(Error::InvalidInput(format!("edge id {e} out of range")));
                }
                if assignment[e] != usize::MAX {
                    return Err(Error::InvalidInput(format!(
                        "edge {e} appears in two factors"
                    )));
                }
                assignment[e] = i;
            }
        }
        if let Some(e) = assignment.iter().position(|&i| i == usize::MAX) {
            return Err(Error::InvalidInput(format!("edge {e} is in no factor")));
        }
        Factorization::new(g, factors.len(), assignment)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn factor_of(&self, e: EdgeId) -> usize {
        self.assignment[e]
    }

    pub fn factor_edges(&self, i: usize) -> Vec<EdgeId> {
        self.assignment
            .iter()
            .enumerate()
            .filter(|(_, &f)| f == i)
            .map(|(e, _)| e)
            .collect()
    }

    pub fn all_factor_edges(&self) -> Vec<Vec<EdgeId>> {
        let mut out = vec![Vec::new(); self.k];
        for (e, &i) in self.assignment.iter().enumerate() {
            out[i].push(e);
        }
        out
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &i in &self.assignment {
            sizes[i] += 1;
        }
        sizes
    }

    /// `table[i][v] = d_{G_i}(v)`, recomputed from the raw edge list.
    pub fn degree_table(&self, g: &Multigraph) -> Vec<Vec<usize>> {
        let mut table = vec![vec![0; g.vertex_count()]; self.k];
        for (e, &i) in self.assignment.iter().enumerate() {
            let (u, v) = g.endpoints(e);
            table[i][u] += 1;
            table[i][v] += 1;
        }
        table
    }
}

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

//! Edge-connectivity measures used as existence hypotheses.
//!
//! Small graphs are handled by exhaustive enumeration of vertex subsets or
//! partitions; larger ones by Stoer-Wagner, a Gomory-Hu cut tree with the
//! Padberg-Rao odd-cut rule, and matroid-union forest packing.

#![allow(clippy::needless_range_loop)]

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::flow::FlowNetwork;
use crate::graph::{Multigraph, VertexId};

/// Graphs with at most this many vertices have their cut questions answered
/// by subset enumeration.
pub const CUT_ENUMERATION_LIMIT: usize = 14;
/// Graphs with at most this many vertices have tree-connectivity computed by
/// partition enumeration.
pub const PARTITION_ENUMERATION_LIMIT: usize = 10;

/// Size of a cut, or `Infinite` when no cut of the requested kind exists.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CutValue {
    Finite(usize),
    Infinite,
}

impl CutValue {
    pub fn finite(self) -> Option<usize> {
        match self {
            CutValue::Finite(v) => Some(v),
            CutValue::Infinite => None,
        }
    }

    pub fn at_least(self, bound: usize) -> bool {
        match self {
            CutValue::Finite(v) => v >= bound,
            CutValue::Infinite => true,
        }
    }
}

impl fmt::Display for CutValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CutValue::Finite(v) => write!(f, "{v}"),
            CutValue::Infinite => write!(f, "infinity"),
        }
    }
}

impl Serialize for CutValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            CutValue::Finite(v) => s.serialize_u64(*v as u64),
            CutValue::Infinite => s.serialize_str("infinity"),
        }
    }
}

/// A cut `d_G(side)` together with the side that realizes it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinCut {
    pub value: usize,
    pub side: Vec<VertexId>,
}

fn side_from_mask(n: usize, mask: u64) -> Vec<VertexId> {
    (0..n).filter(|&v| mask >> v & 1 == 1).collect()
}

fn mask_to_flags(n: usize, mask: u64) -> Vec<bool> {
    (0..n).map(|v| mask >> v & 1 == 1).collect()
}

fn flags_to_side(flags: &[bool]) -> Vec<VertexId> {
    flags
        .iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(v, _)| v)
        .collect()
}

/// Visits every vertex set `A` with `0 in A != V` and its boundary size.
/// Together with complements this covers every nonempty proper subset.
fn for_each_cut(g: &Multigraph, mut visit: impl FnMut(u64, usize) -> bool) {
    let n = g.vertex_count();
    assert!(n <= 63);
    if n < 2 {
        return;
    }
    let full = (1u64 << n) - 1;
    let edges: Vec<(u64, u64)> = g
        .edges()
        .iter()
        .filter(|(u, v)| u != v)
        .map(|&(u, v)| (1u64 << u, 1u64 << v))
        .collect();
    let mut rest = 0u64;
    loop {
        let mask = (rest << 1) | 1;
        if mask == full {
            break;
        }
        let cut = edges
            .iter()
            .filter(|&&(a, b)| (mask & a == 0) != (mask & b == 0))
            .count();
        if !visit(mask, cut) {
            return;
        }
        rest += 1;
    }
}

/// Weighted simple view of `g` without loops: `w[u][v]` = multiplicity.
fn weight_matrix(g: &Multigraph) -> Vec<Vec<u64>> {
    let n = g.vertex_count();
    let mut w = vec![vec![0u64; n]; n];
    for &(u, v) in g.edges() {
        if u != v {
            w[u][v] += 1;
            w[v][u] += 1;
        }
    }
    w
}

/// Global minimum cut by Stoer-Wagner. `None` for fewer than two vertices.
pub fn global_min_cut(g: &Multigraph) -> Option<MinCut> {
    let n = g.vertex_count();
    if n < 2 {
        return None;
    }
    let mut w = weight_matrix(g);
    // members[v]: original vertices merged into v
    let mut members: Vec<Vec<VertexId>> = (0..n).map(|v| vec![v]).collect();
    let mut active: Vec<usize> = (0..n).collect();
    let mut best: Option<MinCut> = None;
    while active.len() > 1 {
        let mut key = vec![0u64; n];
        let mut added = vec![false; n];
        let mut prev = active[0];
        let mut last = active[0];
        for step in 0..active.len() {
            let next = *active
                .iter()
                .filter(|&&v| !added[v])
                .max_by(|&&a, &&b| key[a].cmp(&key[b]).then(b.cmp(&a)))
                .expect("vertex left");
            added[next] = true;
            if step == active.len() - 1 {
                let value = key[next] as usize;
                if best.as_ref().is_none_or(|b| value < b.value) {
                    let mut side = members[next].clone();
                    side.sort_unstable();
                    best = Some(MinCut { value, side });
                }
                prev = last;
                last = next;
            } else {
                last = next;
                for &v in &active {
                    if !added[v] {
                        key[v] += w[next][v];
                    }
                }
            }
        }
        // merge `last` into `prev`
        let moved = std::mem::take(&mut members[last]);
        members[prev].extend(moved);
        for &v in &active {
            w[prev][v] += w[last][v];
            w[v][prev] = w[prev][v];
        }
        w[prev][prev] = 0;
        active.retain(|&v| v != last);
    }
    best
}

/// `lambda(G)`: the minimum of `d_G(A)` over nonempty proper `A`.
pub fn edge_connectivity(g: &Multigraph) -> CutValue {
    match global_min_cut(g) {
        Some(cut) => CutValue::Finite(cut.value),
        None => CutValue::Infinite,
    }
}

/// Gomory-Hu cut tree built with Gusfield's method: removing the tree edge
/// `(v, parent[v])` splits the vertices into a minimum `v`-`parent[v]` cut
/// of value `weight[v]`. Vertex 0 is the root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GomoryHuTree {
    pub parent: Vec<VertexId>,
    pub weight: Vec<usize>,
}

fn st_min_cut(w: &[Vec<u64>], s: usize, t: usize) -> (u64, Vec<bool>) {
    let n = w.len();
    let mut net = FlowNetwork::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if w[u][v] > 0 {
                net.add_arc(u, v, w[u][v], w[u][v]);
            }
        }
    }
    let value = net.max_flow(s, t);
    (value, net.source_side(s))
}

pub fn gomory_hu(g: &Multigraph) -> GomoryHuTree {
    let n = g.vertex_count();
    let w = weight_matrix(g);
    let mut parent = vec![0; n];
    let mut weight = vec![0usize; n];
    for s in 1..n {
        let t = parent[s];
        let (value, side) = st_min_cut(&w, s, t);
        weight[s] = value as usize;
        for i in 0..n {
            if i != s && side[i] && parent[i] == t {
                parent[i] = s;
            }
        }
        if side[parent[t]] && parent[t] != t {
            parent[s] = parent[t];
            parent[t] = s;
            weight[s] = weight[t];
            weight[t] = value as usize;
        }
    }
    GomoryHuTree { parent, weight }
}

impl GomoryHuTree {
    fn root(&self) -> VertexId {
        (0..self.parent.len())
            .find(|&v| self.parent[v] == v)
            .unwrap_or(0)
    }

    /// Tree edges as `(child, parent, weight)`.
    pub fn edges(&self) -> Vec<(VertexId, VertexId, usize)> {
        let root = self.root();
        (0..self.parent.len())
            .filter(|&v| v != root)
            .map(|v| (v, self.parent[v], self.weight[v]))
            .collect()
    }

    /// Vertices in the subtree hanging below tree edge `(v, parent[v])`.
    pub fn subtree(&self, v: VertexId) -> Vec<bool> {
        let n = self.parent.len();
        let root = self.root();
        let mut inside = vec![false; n];
        for u in 0..n {
            let mut x = u;
            let mut steps = 0;
            loop {
                if x == v {
                    inside[u] = true;
                    break;
                }
                if x == root || steps > n {
                    break;
                }
                x = self.parent[x];
                steps += 1;
            }
        }
        inside
    }
}

/// Minimum `d_G(A)` over sets `A` containing an odd number of `T`-vertices,
/// via the Padberg-Rao rule on a Gomory-Hu tree. `None` if `|T|` is even
/// and no such set exists (always the case when `T` is empty).
pub fn min_t_odd_cut(g: &Multigraph, t: &[bool]) -> Option<MinCut> {
    if g.vertex_count() < 2 {
        return None;
    }
    let tree = gomory_hu(g);
    let mut best: Option<MinCut> = None;
    for (v, _, value) in tree.edges() {
        let side = tree.subtree(v);
        let odd = side.iter().zip(t).filter(|(&s, &x)| s && x).count() % 2 == 1;
        if odd && best.as_ref().is_none_or(|b| value < b.value) {
            best = Some(MinCut {
                value,
                side: flags_to_side(&side),
            });
        }
    }
    best
}

/// Exhaustive counterpart of [`min_t_odd_cut`] for small graphs.
pub fn min_t_odd_cut_enumerated(g: &Multigraph, t: &[bool]) -> Option<MinCut> {
    let n = g.vertex_count();
    let tmask: u64 = (0..n).filter(|&v| t[v]).map(|v| 1u64 << v).sum();
    let mut best: Option<MinCut> = None;
    for_each_cut(g, |mask, cut| {
        if (mask & tmask).count_ones() % 2 == 1 && best.as_ref().is_none_or(|b| cut < b.value) {
            best = Some(MinCut {
                value: cut,
                side: side_from_mask(n, mask),
            });
        }
        true
    });
    best
}

fn odd_degree_set(g: &Multigraph) -> Vec<bool> {
    g.degrees().iter().map(|d| d % 2 == 1).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OddCut {
    pub value: CutValue,
    pub witness: Option<Vec<VertexId>>,
}

/// Minimum odd `d_G(A)`; infinite when every cut is even.
///
/// `d_G(A)` is odd exactly when `A` holds an odd number of odd-degree
/// vertices, so this is a minimum T-odd cut for the odd-degree set T.
pub fn odd_edge_connectivity(g: &Multigraph) -> OddCut {
    let t = odd_degree_set(g);
    let cut = if g.vertex_count() <= CUT_ENUMERATION_LIMIT {
        min_t_odd_cut_enumerated(g, &t)
    } else {
        min_t_odd_cut(g, &t)
    };
    match cut {
        Some(c) => OddCut {
            value: CutValue::Finite(c.value),
            witness: Some(c.side),
        },
        None => OddCut {
            value: CutValue::Infinite,
            witness: None,
        },
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OddCutCheck {
    pub holds: bool,
    pub witness: Option<Vec<VertexId>>,
}

/// Does every `X` with `sum_{v in X} f(v)` odd satisfy `d_G(X) >= lambda`?
pub fn f_odd_cut_bound(g: &Multigraph, f: &[bool], lambda: usize) -> Result<OddCutCheck> {
    let n = g.vertex_count();
    if f.len() != n {
        return Err(Error::InvalidInput(format!(
            "parity map has {} entries for {n} vertices",
            f.len()
        )));
    }
    if f.iter().filter(|&&b| b).count() % 2 == 1 {
        return Err(Error::InvalidInput(
            "parity map must have an even number of odd vertices".into(),
        ));
    }
    let cut = if n <= CUT_ENUMERATION_LIMIT {
        let tmask: u64 = (0..n).filter(|&v| f[v]).map(|v| 1u64 << v).sum();
        let mut found = None;
        for_each_cut(g, |mask, cut| {
            if (mask & tmask).count_ones() % 2 == 1 && cut < lambda {
                found = Some(MinCut {
                    value: cut,
                    side: side_from_mask(n, mask),
                });
                return false;
            }
            true
        });
        found
    } else {
        min_t_odd_cut(g, f).filter(|c| c.value < lambda)
    };
    Ok(match cut {
        Some(c) => OddCutCheck {
            holds: false,
            witness: Some(c.side),
        },
        None => OddCutCheck {
            holds: true,
            witness: None,
        },
    })
}

/// Is every edge cut of size below `lambda` made of edges sharing a vertex?
pub fn essential_edge_connectivity_at_least(g: &Multigraph, lambda: usize) -> Result<bool> {
    if let Some(e) = (0..g.edge_count()).find(|&e| g.is_loop(e)) {
        return Err(Error::LoopEdge { edge: e });
    }
    let n = g.vertex_count();
    if n <= CUT_ENUMERATION_LIMIT {
        let mut ok = true;
        let edges = g.edges();
        for_each_cut(g, |mask, cut| {
            if cut < lambda {
                let side = mask_to_flags(n, mask);
                let crossing: Vec<_> = edges.iter().filter(|&&(u, v)| side[u] != side[v]).collect();
                if has_disjoint_pair(&crossing) {
                    ok = false;
                    return false;
                }
            }
            true
        });
        return Ok(ok);
    }
    Ok(essential_by_separations(g, lambda))
}

/// Flow route for loopless graphs: a cut is non-trivial iff it contains two
/// vertex-disjoint edges, so it suffices to separate the ends of every such
/// pair.
fn essential_by_separations(g: &Multigraph, lambda: usize) -> bool {
    let n = g.vertex_count();
    let w = weight_matrix(g);
    let mut pairs: Vec<(VertexId, VertexId)> = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if w[u][v] > 0 {
                pairs.push((u, v));
            }
        }
    }
    for (i, &(a, b)) in pairs.iter().enumerate() {
        for &(c, d) in &pairs[i + 1..] {
            if a == c || a == d || b == c || b == d {
                continue;
            }
            for (s, t) in [([a, c], [b, d]), ([a, d], [b, c])] {
                if separating_cut(&w, &s, &t) < lambda as u64 {
                    return false;
                }
            }
        }
    }
    true
}

fn has_disjoint_pair(edges: &[&(VertexId, VertexId)]) -> bool {
    edges.iter().enumerate().any(|(i, &&(a, b))| {
        edges[i + 1..]
            .iter()
            .any(|&&(c, d)| a != c && a != d && b != c && b != d)
    })
}

fn separating_cut(w: &[Vec<u64>], sources: &[usize], sinks: &[usize]) -> u64 {
    let n = w.len();
    let mut net = FlowNetwork::new(n + 2);
    for u in 0..n {
        for v in u + 1..n {
            if w[u][v] > 0 {
                net.add_arc(u, v, w[u][v], w[u][v]);
            }
        }
    }
    let big = u64::MAX / 4;
    for &s in sources {
        net.add_arc(n, s, big, 0);
    }
    for &t in sinks {
        net.add_arc(t, n + 1, big, 0);
    }
    net.max_flow(n, n + 1)
}

/// Maximum number of edge-disjoint spanning trees.
pub fn tree_connectivity(g: &Multigraph) -> Result<usize> {
    if g.vertex_count() < 2 {
        return Err(Error::InvalidInput(
            "tree-connectivity needs at least two vertices".into(),
        ));
    }
    if g.vertex_count() <= PARTITION_ENUMERATION_LIMIT {
        Ok(tree_connectivity_by_partitions(g))
    } else {
        Ok(tree_connectivity_by_packing(g))
    }
}

/// Tutte-Nash-Williams: min over partitions `P` with `|P| >= 2` of
/// `floor(e_P / (|P| - 1))`, by enumerating restricted growth strings.
pub fn tree_connectivity_by_partitions(g: &Multigraph) -> usize {
    let n = g.vertex_count();
    assert!(n >= 2);
    // lower[i]: multiplicities of edges from i to vertices j < i
    let w = weight_matrix(g);
    let mut block = vec![0usize; n];
    let mut best = usize::MAX;
    fn go(
        i: usize,
        blocks: usize,
        cross: u64,
        block: &mut [usize],
        w: &[Vec<u64>],
        best: &mut usize,
    ) {
        let n = block.len();
        if i == n {
            if blocks >= 2 {
                *best = (*best).min((cross / (blocks as u64 - 1)) as usize);
            }
            return;
        }
        for b in 0..=blocks {
            if b == blocks && blocks >= n {
                break;
            }
            block[i] = b;
            let added: u64 = (0..i).filter(|&j| block[j] != b).map(|j| w[i][j]).sum();
            let nb = if b == blocks { blocks + 1 } else { blocks };
            go(i + 1, nb, cross + added, block, w, best);
        }
    }
    block[0] = 0;
    go(1, 1, 0, &mut block, &w, &mut best);
    best
}

/// Edge-disjoint forests grown by matroid partitioning (Edmonds), one edge
/// at a time along shortest exchange paths.
#[derive(Debug, Clone)]
pub struct ForestPacking {
    n: usize,
    edges: Vec<(VertexId, VertexId)>,
    /// forest index per edge, `None` when unassigned
    owner: Vec<Option<usize>>,
    forests: usize,
}

impl ForestPacking {
    pub fn new(g: &Multigraph, forests: usize) -> Self {
        ForestPacking {
            n: g.vertex_count(),
            edges: g.edges().to_vec(),
            owner: vec![None; g.edge_count()],
            forests,
        }
    }

    pub fn add_forest(&mut self) {
        self.forests += 1;
    }

    pub fn forest_edges(&self, i: usize) -> Vec<usize> {
        (0..self.edges.len())
            .filter(|&e| self.owner[e] == Some(i))
            .collect()
    }

    pub fn packed(&self) -> usize {
        self.owner.iter().filter(|o| o.is_some()).count()
    }

    /// Path of edge ids between `a` and `b` inside forest `i`, if connected.
    fn forest_path(&self, i: usize, a: VertexId, b: VertexId) -> Option<Vec<usize>> {
        let mut adj: Vec<Vec<(VertexId, usize)>> = vec![Vec::new(); self.n];
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            if self.owner[e] == Some(i) {
                adj[u].push((v, e));
                adj[v].push((u, e));
            }
        }
        let mut via: Vec<Option<(VertexId, usize)>> = vec![None; self.n];
        let mut seen = vec![false; self.n];
        seen[a] = true;
        let mut queue = std::collections::VecDeque::from([a]);
        while let Some(u) = queue.pop_front() {
            if u == b {
                break;
            }
            for &(v, e) in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    via[v] = Some((u, e));
                    queue.push_back(v);
                }
            }
        }
        if !seen[b] {
            return None;
        }
        let mut path = Vec::new();
        let mut x = b;
        while let Some((p, e)) = via[x] {
            path.push(e);
            x = p;
        }
        Some(path)
    }

    /// Tries to place edge `start`; returns whether the packing grew.
    pub fn insert(&mut self, start: usize) -> bool {
        let (u0, v0) = self.edges[start];
        if u0 == v0 || self.owner[start].is_some() {
            return false;
        }
        let m = self.edges.len();
        let mut label: Vec<Option<usize>> = vec![None; m];
        let mut seen = vec![false; m];
        seen[start] = true;
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            let (a, b) = self.edges[x];
            for i in 0..self.forests {
                if self.owner[x] == Some(i) {
                    continue;
                }
                match self.forest_path(i, a, b) {
                    None => {
                        self.augment(x, i, &label);
                        return true;
                    }
                    Some(cycle) => {
                        for y in cycle {
                            if !seen[y] {
                                seen[y] = true;
                                label[y] = Some(x);
                                queue.push_back(y);
                            }
                        }
                    }
                }
            }
        }
        false
    }

    fn augment(&mut self, mut cur: usize, mut target: usize, label: &[Option<usize>]) {
        loop {
            let old = self.owner[cur];
            self.owner[cur] = Some(target);
            match label[cur] {
                Some(prev) => {
                    target = old.expect("labelled edges sit in a forest");
                    cur = prev;
                }
                None => break,
            }
        }
    }
}

/// Tree-connectivity via forest packing: the largest `k` such that `k`
/// edge-disjoint forests can hold `k (n - 1)` edges.
pub fn tree_connectivity_by_packing(g: &Multigraph) -> usize {
    let n = g.vertex_count();
    assert!(n >= 2);
    if !g.is_connected() {
        return 0;
    }
    let mut packing = ForestPacking::new(g, 0);
    let mut k = 0;
    loop {
        if (k + 1) * (n - 1) > g.edge_count() {
            return k;
        }
        packing.add_forest();
        for e in 0..g.edge_count() {
            packing.insert(e);
        }
        if packing.packed() < (k + 1) * (n - 1) {
            return k;
        }
        k += 1;
    }
}

/// Connectivity statistics with witness cuts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CutReport {
    pub lambda: CutValue,
    pub odd_lambda: CutValue,
    pub tree_connectivity: Option<usize>,
    pub min_cut_witness: Option<Vec<VertexId>>,
    pub odd_cut_witness: Option<Vec<VertexId>>,
}

pub fn analyze(g: &Multigraph) -> CutReport {
    let min_cut = global_min_cut(g);
    let odd = odd_edge_connectivity(g);
    CutReport {
        lambda: min_cut
            .as_ref()
            .map_or(CutValue::Infinite, |c| CutValue::Finite(c.value)),
        odd_lambda: odd.value,
        tree_connectivity: tree_connectivity(g).ok(),
        min_cut_witness: min_cut.map(|c| c.side),
        odd_cut_witness: odd.witness,
    }
}

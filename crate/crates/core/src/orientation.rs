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

//! Orientation solvers: Eulerian orientations, prescribed out-degrees,
//! `p`-orientations modulo `k`, and balanced modular orientations.
//!
//! The modular solver is two-staged. It first searches for an out-degree
//! plan whose entries have the requested residues, pruning with the sum
//! constraint and Hakimi's inequalities on the assigned prefix, and then
//! realizes each complete plan with a bipartite max-flow. The search is
//! exhaustive, so "infeasible" is exact; a node budget turns very large
//! searches into an explicit "undecided" outcome.

use crate::error::{Error, HakimiCertificate, Result};
use crate::flow::FlowNetwork;
use crate::graph::{Multigraph, Orientation, VertexId};

/// Target out-degree residues `p(v)` modulo `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueMap {
    k: usize,
    p: Vec<usize>,
}

impl ResidueMap {
    /// Residues are reduced modulo `k`.
    pub fn new(k: usize, p: Vec<usize>) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter(
                "modulus k must be at least 1".into(),
            ));
        }
        let p = p.into_iter().map(|r| r % k).collect();
        Ok(ResidueMap { k, p })
    }

    pub fn zero(k: usize, n: usize) -> Result<Self> {
        ResidueMap::new(k, vec![0; n])
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn residues(&self) -> &[usize] {
        &self.p
    }

    /// Whether `sum p(v) = |E| (mod k)`, necessary for any solution.
    pub fn sum_matches(&self, g: &Multigraph) -> bool {
        self.p.iter().sum::<usize>() % self.k == g.edge_count() % self.k
    }
}

/// Prescribed out-degree for every vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutDegreePlan(pub Vec<usize>);

/// Node limit for the exhaustive searches in this module.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    pub nodes: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { nodes: 1_000_000 }
    }
}

/// Orients every closed trail found by Hierholzer's walk in its direction of
/// traversal, which balances every vertex.
pub fn eulerian_orientation(g: &Multigraph) -> Result<Orientation> {
    g.require_even_degrees()?;
    let n = g.vertex_count();
    let m = g.edge_count();
    let mut used = vec![false; m];
    let mut cursor = vec![0usize; n];
    let mut tails = vec![0; m];
    for s in 0..n {
        let mut stack = vec![s];
        while let Some(&u) = stack.last() {
            let inc = g.incident(u);
            while cursor[u] < inc.len() && used[inc[cursor[u]]] {
                cursor[u] += 1;
            }
            if cursor[u] < inc.len() {
                let e = inc[cursor[u]];
                used[e] = true;
                tails[e] = u;
                stack.push(g.opposite(e, u));
            } else {
                stack.pop();
            }
        }
    }
    Orientation::from_tails(g, &tails)
}

/// Realizes `d+(v) = plan(v)` exactly, or returns a Hakimi certificate.
///
/// Flow network: source -> edge (1), edge -> each endpoint (1),
/// vertex -> sink (`plan(v)`). An edge sends its unit to its tail.
pub fn realize_out_degrees(g: &Multigraph, plan: &OutDegreePlan) -> Result<Orientation> {
    let n = g.vertex_count();
    let m = g.edge_count();
    let o = &plan.0;
    if o.len() != n {
        return Err(Error::InvalidInput(format!(
            "out-degree plan has {} entries for {n} vertices",
            o.len()
        )));
    }
    let total: usize = o.iter().sum();
    if total != m {
        return Err(Error::InvalidInput(format!(
            "out-degree plan sums to {total}, expected |E| = {m}"
        )));
    }
    let source = 0;
    let sink = m + n + 1;
    let vnode = |v: usize| m + 1 + v;
    let mut net = FlowNetwork::new(m + n + 2);
    let mut tail_arcs: Vec<[Option<(usize, VertexId)>; 2]> = Vec::with_capacity(m);
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        net.add_arc(source, 1 + e, 1, 0);
        let first = Some((net.add_arc(1 + e, vnode(u), 1, 0), u));
        let second = (u != v).then(|| (net.add_arc(1 + e, vnode(v), 1, 0), v));
        tail_arcs.push([first, second]);
    }
    for (v, &cap) in o.iter().enumerate() {
        net.add_arc(vnode(v), sink, cap as u64, 0);
    }
    let flow = net.max_flow(source, sink) as usize;
    if flow < m {
        let reach = net.source_side(source);
        let deficient: Vec<VertexId> = (0..n).filter(|&v| reach[vnode(v)]).collect();
        let overloaded: Vec<VertexId> = (0..n).filter(|&v| !reach[vnode(v)]).collect();
        return Err(Error::HakimiViolation(HakimiCertificate {
            deficient,
            overloaded,
        }));
    }
    let tails: Vec<VertexId> = tail_arcs
        .iter()
        .map(|arcs| {
            arcs.iter()
                .flatten()
                .find(|&&(id, _)| net.flow_on(id) == 1)
                .map(|&(_, v)| v)
                .expect("saturated edge has a tail")
        })
        .collect();
    Orientation::from_tails(g, &tails)
}

struct PlanSearch<'a> {
    g: &'a Multigraph,
    order: Vec<VertexId>,
    candidates: Vec<Vec<usize>>,
    /// suffix_min[i], suffix_max[i]: bounds on the plan sum of order[i..]
    suffix_min: Vec<usize>,
    suffix_max: Vec<usize>,
    in_prefix: Vec<bool>,
    plan: Vec<usize>,
    nodes: u64,
    budget: u64,
}

enum SearchStep {
    Found(Orientation),
    Exhausted,
    OutOfBudget,
}

impl PlanSearch<'_> {
    fn tick(&mut self) -> bool {
        self.nodes += 1;
        self.nodes <= self.budget
    }

    /// `inner`: edges inside the prefix set, `boundary`: `d_G(prefix)`.
    fn run(&mut self, depth: usize, sum: usize, inner: usize, boundary: usize) -> SearchStep {
        let m = self.g.edge_count();
        if depth == self.order.len() {
            if !self.tick() {
                return SearchStep::OutOfBudget;
            }
            return match realize_out_degrees(self.g, &OutDegreePlan(self.plan.clone())) {
                Ok(o) => SearchStep::Found(o),
                Err(Error::HakimiViolation(_)) => SearchStep::Exhausted,
                Err(e) => unreachable!("complete plans are well formed: {e}"),
            };
        }
        let v = self.order[depth];
        let mut to_prefix = 0;
        let mut to_rest = 0;
        for &e in self.g.incident(v) {
            let w = self.g.opposite(e, v);
            if w == v || self.in_prefix[w] {
                to_prefix += 1;
            } else {
                to_rest += 1;
            }
        }
        let loops = self
            .g
            .incident(v)
            .iter()
            .filter(|&&e| self.g.is_loop(e))
            .count();
        let inner2 = inner + to_prefix;
        // edges from v into the prefix stop being boundary edges
        let boundary2 = boundary + to_rest - (to_prefix - loops);
        self.in_prefix[v] = true;
        for idx in 0..self.candidates[v].len() {
            let o = self.candidates[v][idx];
            if !self.tick() {
                self.in_prefix[v] = false;
                return SearchStep::OutOfBudget;
            }
            let s = sum + o;
            if s + self.suffix_min[depth + 1] > m || s + self.suffix_max[depth + 1] < m {
                continue;
            }
            if s < inner2 || s > inner2 + boundary2 {
                continue;
            }
            self.plan[v] = o;
            match self.run(depth + 1, s, inner2, boundary2) {
                SearchStep::Exhausted => {}
                other => {
                    self.in_prefix[v] = false;
                    return other;
                }
            }
        }
        self.in_prefix[v] = false;
        SearchStep::Exhausted
    }
}

/// Orientation with `d+(v) = p(v) (mod k)` at every vertex.
pub fn mod_k_orientation(g: &Multigraph, rm: &ResidueMap) -> Result<Orientation> {
    mod_k_orientation_with_budget(g, rm, SearchBudget::default())
}

pub fn mod_k_orientation_with_budget(
    g: &Multigraph,
    rm: &ResidueMap,
    budget: SearchBudget,
) -> Result<Orientation> {
    let n = g.vertex_count();
    let k = rm.k();
    if rm.residues().len() != n {
        return Err(Error::InvalidInput(format!(
            "residue map has {} entries for {n} vertices",
            rm.residues().len()
        )));
    }
    if !rm.sum_matches(g) {
        return Err(Error::ResidueObstruction {
            sum: rm.residues().iter().sum::<usize>() % k,
            edges: g.edge_count() % k,
            k,
        });
    }
    let degrees = g.degrees();
    let loops = g.loop_counts();
    let mut candidates = vec![Vec::new(); n];
    for v in 0..n {
        let (lo, hi) = (loops[v], degrees[v] - loops[v]);
        let mut values: Vec<usize> = (lo..=hi).filter(|o| o % k == rm.residues()[v]).collect();
        values.sort_by_key(|&o| ((2 * o).abs_diff(degrees[v]), o));
        if values.is_empty() {
            return Err(Error::Infeasible(format!(
                "vertex {v} (degree {}, {} loops) admits no out-degree = {} mod {k}",
                degrees[v],
                loops[v],
                rm.residues()[v]
            )));
        }
        candidates[v] = values;
    }
    let mut order: Vec<VertexId> = (0..n).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(degrees[v]));
    let mut suffix_min = vec![0; n + 1];
    let mut suffix_max = vec![0; n + 1];
    for i in (0..n).rev() {
        let c = &candidates[order[i]];
        suffix_min[i] = suffix_min[i + 1] + c.iter().min().unwrap();
        suffix_max[i] = suffix_max[i + 1] + c.iter().max().unwrap();
    }
    let mut search = PlanSearch {
        g,
        order,
        candidates,
        suffix_min,
        suffix_max,
        in_prefix: vec![false; n],
        plan: vec![0; n],
        nodes: 0,
        budget: budget.nodes,
    };
    match search.run(0, 0, 0, 0) {
        SearchStep::Found(o) => Ok(o),
        SearchStep::Exhausted => Err(Error::Infeasible(format!(
            "no orientation with out-degrees prescribed modulo {k} exists \
             (existence is guaranteed only for (3k-3)-edge-connected or \
             (2k-2)-tree-connected graphs)"
        ))),
        SearchStep::OutOfBudget => Err(Error::Undecided(format!(
            "modulo-{k} orientation search exceeded {} nodes",
            budget.nodes
        ))),
    }
}

/// Balanced orientation modulo `k`.
///
/// Odd `k` (`q` must be `None`): `d+(v) = d-(v) (mod k)` everywhere, found as
/// the `p`-orientation with `p(v) = d(v) / 2 (mod k)`.
/// Even `k`: `G` Eulerian and `|q|` even; `d+ = d-` off `q` and
/// `|d+ - d-| = k` on `q`.
pub fn balanced_mod_k_orientation(
    g: &Multigraph,
    k: usize,
    q: Option<&[VertexId]>,
) -> Result<Orientation> {
    balanced_mod_k_orientation_with_budget(g, k, q, SearchBudget::default())
}

pub fn balanced_mod_k_orientation_with_budget(
    g: &Multigraph,
    k: usize,
    q: Option<&[VertexId]>,
    budget: SearchBudget,
) -> Result<Orientation> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    if k % 2 == 1 {
        if q.is_some() {
            return Err(Error::InvalidInput(
                "a vertex set Q is only meaningful for even k".into(),
            ));
        }
        let half = k.div_ceil(2); // inverse of 2 modulo odd k
        let p = g.degrees().iter().map(|&d| d * half % k).collect();
        return mod_k_orientation_with_budget(g, &ResidueMap::new(k, p)?, budget);
    }
    g.require_even_degrees()?;
    let q = q.unwrap_or(&[]);
    let n = g.vertex_count();
    let mut in_q = vec![false; n];
    for &v in q {
        if v >= n {
            return Err(Error::InvalidInput(format!("vertex {v} out of range")));
        }
        if in_q[v] {
            return Err(Error::InvalidInput(format!("vertex {v} repeated in Q")));
        }
        in_q[v] = true;
    }
    if q.len() % 2 == 1 {
        return Err(Error::InvalidInput(format!(
            "|Q| = {} must be even",
            q.len()
        )));
    }
    if q.is_empty() {
        return eulerian_orientation(g);
    }
    let degrees = g.degrees();
    let loops = g.loop_counts();
    for &v in q {
        if degrees[v] < k + 2 * loops[v] {
            return Err(Error::Infeasible(format!(
                "vertex {v} has degree {} with {} loops, too small for |d+ - d-| = {k}",
                degrees[v], loops[v]
            )));
        }
    }
    let base: Vec<usize> = degrees.iter().map(|d| d / 2).collect();
    let half = q.len() / 2;
    let mut nodes = 0u64;
    // Gray-code walk over sign vectors; bit i set means q[i] gets +k.
    let total: u128 = 1u128 << q.len();
    let mut i: u128 = 0;
    while i < total {
        nodes += 1;
        if nodes > budget.nodes {
            return Err(Error::Undecided(format!(
                "sign search over |Q| = {} exceeded {} nodes",
                q.len(),
                budget.nodes
            )));
        }
        let gray = i ^ (i >> 1);
        i += 1;
        if gray.count_ones() as usize != half {
            continue;
        }
        let mut plan = base.clone();
        for (j, &v) in q.iter().enumerate() {
            if gray >> j & 1 == 1 {
                plan[v] += k / 2;
            } else {
                plan[v] -= k / 2;
            }
        }
        match realize_out_degrees(g, &OutDegreePlan(plan)) {
            Ok(o) => return Ok(o),
            Err(Error::HakimiViolation(_)) => {}
            Err(e) => return Err(e),
        }
    }
    Err(Error::Infeasible(format!(
        "no orientation with |d+ - d-| = {k} exactly on Q exists"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn outs(o: &Orientation) -> Vec<usize> {
        o.out_degrees()
    }

    #[test]
    fn eulerian_examples() {
        let c4 = eulerian_orientation(&Multigraph::cycle(4)).unwrap();
        assert_eq!(outs(&c4), vec![1; 4]);
        assert_eq!(c4.in_degrees(), vec![1; 4]);

        let loops = Multigraph::from_edges(1, &[(0, 0), (0, 0)]).unwrap();
        let o = eulerian_orientation(&loops).unwrap();
        assert_eq!((o.out_degrees()[0], o.in_degrees()[0]), (2, 2));

        let k5 = eulerian_orientation(&Multigraph::complete(5)).unwrap();
        assert_eq!(k5.out_degrees(), vec![2; 5]);
        assert_eq!(k5.in_degrees(), vec![2; 5]);

        assert_eq!(
            eulerian_orientation(&Multigraph::path(3)),
            Err(Error::OddDegree {
                vertex: 0,
                degree: 1
            })
        );
    }

    #[test]
    fn realize_examples() {
        let tri = Multigraph::cycle(3);
        let o = realize_out_degrees(&tri, &OutDegreePlan(vec![1, 1, 1])).unwrap();
        assert_eq!(o.out_degrees(), vec![1, 1, 1]);

        let o = realize_out_degrees(&tri, &OutDegreePlan(vec![2, 1, 0])).unwrap();
        let mut arcs = o.arcs().to_vec();
        arcs.sort();
        assert_eq!(arcs, vec![(0, 1), (0, 2), (1, 2)]);

        match realize_out_degrees(&tri, &OutDegreePlan(vec![3, 0, 0])) {
            Err(Error::HakimiViolation(cert)) => {
                assert_eq!(cert.overloaded, vec![0]);
                assert_eq!(cert.deficient, vec![1, 2]);
            }
            other => panic!("expected a certificate, got {other:?}"),
        }
        assert!(matches!(
            realize_out_degrees(&tri, &OutDegreePlan(vec![1, 1])),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(
            realize_out_degrees(&tri, &OutDegreePlan(vec![1, 1, 0])),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn realize_with_loops() {
        let g = Multigraph::from_edges(2, &[(0, 0), (0, 1), (1, 1)]).unwrap();
        let o = realize_out_degrees(&g, &OutDegreePlan(vec![2, 1])).unwrap();
        assert_eq!(o.out_degrees(), vec![2, 1]);
        assert!(realize_out_degrees(&g, &OutDegreePlan(vec![3, 0])).is_err());
    }

    #[test]
    fn mod_k_examples() {
        let tri = Multigraph::cycle(3);
        assert!(matches!(
            mod_k_orientation(&tri, &ResidueMap::zero(2, 3).unwrap()),
            Err(Error::ResidueObstruction { .. })
        ));

        let k4 = Multigraph::complete(4);
        let o = mod_k_orientation(&k4, &ResidueMap::zero(2, 4).unwrap()).unwrap();
        assert!(o.out_degrees().iter().all(|d| d % 2 == 0));

        let k7 = Multigraph::complete(7);
        let o = mod_k_orientation(&k7, &ResidueMap::zero(3, 7).unwrap()).unwrap();
        assert!(o.out_degrees().iter().all(|d| d % 3 == 0));
    }

    #[test]
    fn mod_k_budget_is_reported() {
        let k7 = Multigraph::complete(7);
        let rm = ResidueMap::zero(3, 7).unwrap();
        let err = mod_k_orientation_with_budget(&k7, &rm, SearchBudget { nodes: 2 }).unwrap_err();
        assert!(matches!(err, Error::Undecided(_)));
    }

    #[test]
    fn balanced_examples() {
        let k7 = Multigraph::complete(7);
        let o = balanced_mod_k_orientation(&k7, 3, None).unwrap();
        let (out, inn) = (o.out_degrees(), o.in_degrees());
        for v in 0..7 {
            assert_eq!((out[v] + 3 - inn[v] % 3) % 3, 0);
        }

        let c4 = Multigraph::cycle(4);
        let o = balanced_mod_k_orientation(&c4, 2, Some(&[0, 1])).unwrap();
        let (out, inn) = (o.out_degrees(), o.in_degrees());
        let diffs: Vec<i64> = (0..4).map(|v| out[v] as i64 - inn[v] as i64).collect();
        assert_eq!(diffs[0].abs(), 2);
        assert_eq!(diffs[1].abs(), 2);
        assert_eq!((diffs[2], diffs[3]), (0, 0));

        let o = balanced_mod_k_orientation(&c4, 4, None).unwrap();
        assert_eq!(o.out_degrees(), o.in_degrees());
    }

    #[test]
    fn balanced_rejects_bad_input() {
        let c4 = Multigraph::cycle(4);
        assert!(matches!(
            balanced_mod_k_orientation(&c4, 2, Some(&[0])),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(
            balanced_mod_k_orientation(&c4, 3, Some(&[0, 1])),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(
            balanced_mod_k_orientation(&Multigraph::path(3), 2, None),
            Err(Error::OddDegree { .. })
        ));
        // C4 has degree 2 < 4
        assert!(matches!(
            balanced_mod_k_orientation(&c4, 4, Some(&[0, 2])),
            Err(Error::Infeasible(_))
        ));
    }

    use proptest::prelude::*;

    fn arb_graph(max_n: usize, max_m: usize) -> impl Strategy<Value = Multigraph> {
        (1usize..=max_n).prop_flat_map(move |n| {
            prop::collection::vec((0..n, 0..n), 0..=max_m)
                .prop_map(move |edges| Multigraph::from_edges(n, &edges).unwrap())
        })
    }

    /// All out-degree vectors reachable by some orientation.
    fn reachable_out_degrees(g: &Multigraph) -> Vec<Vec<usize>> {
        let m = g.edge_count();
        let mut seen = std::collections::BTreeSet::new();
        for mask in 0u32..(1 << m) {
            let mut out = vec![0; g.vertex_count()];
            for (e, &(u, v)) in g.edges().iter().enumerate() {
                out[if mask >> e & 1 == 1 { v } else { u }] += 1;
            }
            seen.insert(out);
        }
        seen.into_iter().collect()
    }

    fn hakimi_holds(g: &Multigraph, plan: &[usize]) -> bool {
        let n = g.vertex_count();
        (0u32..(1 << n)).all(|set| {
            let keep: Vec<bool> = (0..n).map(|v| set >> v & 1 == 1).collect();
            let inner = g.induced_edges(&keep).count();
            let total: usize = (0..n).filter(|&v| keep[v]).map(|v| plan[v]).sum();
            total >= inner
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn eulerian_balances_every_vertex(g in arb_graph(7, 16)) {
            let doubled = g.multiplied(2);
            let o = eulerian_orientation(&doubled).unwrap();
            prop_assert_eq!(o.out_degrees(), o.in_degrees());
        }

        #[test]
        fn mod_k_matches_enumeration(g in arb_graph(5, 11), k in 1usize..5, seed in any::<u64>()) {
            let n = g.vertex_count();
            let p: Vec<usize> = (0..n).map(|v| (seed >> (3 * v)) as usize % k).collect();
            let rm = ResidueMap::new(k, p.clone()).unwrap();
            let exists = reachable_out_degrees(&g)
                .iter()
                .any(|out| (0..n).all(|v| out[v] % k == p[v]));
            match mod_k_orientation(&g, &rm) {
                Ok(o) => {
                    prop_assert!(exists);
                    prop_assert!(o.out_degrees().iter().zip(&p).all(|(d, r)| d % k == *r));
                }
                Err(Error::ResidueObstruction { .. }) | Err(Error::Infeasible(_)) => prop_assert!(!exists),
                Err(e) => prop_assert!(false, "unexpected error {e}"),
            }
        }

        #[test]
        fn realize_agrees_with_hakimi(g in arb_graph(5, 10), seed in any::<u64>()) {
            let n = g.vertex_count();
            let m = g.edge_count();
            // random composition of m into n parts
            let mut plan = vec![0; n];
            let mut s = seed;
            for _ in 0..m {
                plan[(s % n as u64) as usize] += 1;
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407) >> 7 | 1;
            }
            let reachable = reachable_out_degrees(&g).contains(&plan);
            prop_assert_eq!(reachable, hakimi_holds(&g, &plan));
            match realize_out_degrees(&g, &OutDegreePlan(plan.clone())) {
                Ok(o) => {
                    prop_assert!(reachable);
                    prop_assert_eq!(o.out_degrees(), plan);
                }
                Err(Error::HakimiViolation(cert)) => {
                    prop_assert!(!reachable);
                    let keep: Vec<bool> = (0..n).map(|v| cert.deficient.contains(&v)).collect();
                    let inner = g.induced_edges(&keep).count();
                    let total: usize = cert.deficient.iter().map(|&v| plan[v]).sum();
                    prop_assert!(total < inner);
                    let mut all: Vec<usize> = cert.deficient.iter().chain(&cert.overloaded).copied().collect();
                    all.sort();
                    prop_assert_eq!(all, (0..n).collect::<Vec<_>>());
                }
                Err(e) => prop_assert!(false, "unexpected error {e}"),
            }
        }

        #[test]
        fn balanced_odd_k(g in arb_graph(5, 10), k in prop::sample::select(vec![1usize, 3, 5])) {
            if let Ok(o) = balanced_mod_k_orientation(&g, k, None) {
                let (out, inn) = (o.out_degrees(), o.in_degrees());
                for v in 0..g.vertex_count() {
                    prop_assert_eq!(out[v] % k, inn[v] % k);
                }
            }
        }
    }
}

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

//! End-to-end factorization pipelines built from an orientation followed by
//! a directed decomposition.
//!
//! Connectivity hypotheses are evaluated and reported, and a failing
//! hypothesis is logged as a warning. They never gate the computation: the
//! solvers are exact searches and often succeed below the thresholds.

use log::warn;
use serde::{Deserialize, Serialize};

use crate::coloring::{decompose_directed, DecompositionMode};
use crate::connectivity::{
    edge_connectivity, essential_edge_connectivity_at_least, f_odd_cut_bound,
    odd_edge_connectivity, tree_connectivity,
};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Factorization, Multigraph, VertexId};
use crate::orientation::{
    balanced_mod_k_orientation_with_budget, eulerian_orientation, mod_k_orientation_with_budget,
    ResidueMap, SearchBudget,
};

/// A sufficient condition of the kind the pipelines are known to succeed
/// under, and whether the input satisfies it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Hypothesis {
    pub statement: String,
    pub holds: bool,
}

fn hypothesis(statement: String, holds: bool) -> Hypothesis {
    if !holds {
        warn!("hypothesis not satisfied: {statement}");
    }
    Hypothesis { statement, holds }
}

fn hypothesis_note(list: &[Hypothesis]) -> String {
    let failing: Vec<&str> = list
        .iter()
        .filter(|h| !h.holds)
        .map(|h| h.statement.as_str())
        .collect();
    if failing.is_empty() {
        String::new()
    } else {
        format!("unsatisfied hypotheses: {}", failing.join("; "))
    }
}

fn tree_connected(g: &Multigraph, m: usize) -> bool {
    m == 0 || tree_connectivity(g).is_ok_and(|t| t >= m)
}

/// `(3k-3)`-edge-connected or `(2k-2)`-tree-connected.
fn equitable_hypotheses(g: &Multigraph, k: usize) -> Vec<Hypothesis> {
    let lambda = 3 * k - 3;
    let by_cuts = edge_connectivity(g).at_least(lambda);
    let holds = by_cuts || tree_connected(g, 2 * k - 2);
    vec![hypothesis(
        format!("{lambda}-edge-connected or {}-tree-connected", 2 * k - 2),
        holds,
    )]
}

/// How a pipeline steers residues for the equitable factorization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Steering {
    /// `p(v) = d(v)` on `Z`, zero elsewhere. Needs `sum_Z d = |E| (mod k)`.
    Set(Vec<VertexId>),
    /// All slack is absorbed at one vertex.
    Vertex(VertexId),
    /// Smallest `Z` found by [`find_z_set`], else the maximum-degree vertex.
    Auto,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquitableRequest {
    pub k: usize,
    pub steering: Steering,
    pub budget: SearchBudget,
}

impl EquitableRequest {
    pub fn new(k: usize, steering: Steering) -> Self {
        EquitableRequest {
            k,
            steering,
            budget: SearchBudget::default(),
        }
    }
}

/// A factorization with its deviations measured from the edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorReport {
    pub factorization: Factorization,
    /// `max_i |k d_i(v) - d(v)|` per vertex; divide by `k` for the deviation.
    pub vertex_excess: Vec<usize>,
    /// `max_i |k |E_i| - |E||`.
    pub size_excess: usize,
    /// Vertices whose factor degrees miss their target parity.
    pub parity_violations: Option<Vec<VertexId>>,
    pub steering: Option<Steering>,
    pub hypotheses: Vec<Hypothesis>,
}

impl FactorReport {
    pub fn measure(g: &Multigraph, factorization: Factorization) -> Self {
        let k = factorization.k();
        let table = factorization.degree_table(g);
        let degrees = g.degrees();
        let vertex_excess = (0..g.vertex_count())
            .map(|v| {
                table
                    .iter()
                    .map(|row| (k * row[v]).abs_diff(degrees[v]))
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let size_excess = factorization
            .sizes()
            .iter()
            .map(|&s| (k * s).abs_diff(g.edge_count()))
            .max()
            .unwrap_or(0);
        FactorReport {
            factorization,
            vertex_excess,
            size_excess,
            parity_violations: None,
            steering: None,
            hypotheses: Vec::new(),
        }
    }

    fn with_parity_targets(mut self, g: &Multigraph, odd: &[bool]) -> Self {
        let table = self.factorization.degree_table(g);
        let bad = (0..g.vertex_count())
            .filter(|&v| table.iter().any(|row| (row[v] % 2 == 1) != odd[v]))
            .collect();
        self.parity_violations = Some(bad);
        self
    }

    pub fn k(&self) -> usize {
        self.factorization.k()
    }

    pub fn max_vertex_deviation(&self) -> f64 {
        self.vertex_excess.iter().copied().max().unwrap_or(0) as f64 / self.k() as f64
    }

    pub fn vertex_deviation(&self, v: VertexId) -> f64 {
        self.vertex_excess[v] as f64 / self.k() as f64
    }

    pub fn max_size_deviation(&self) -> f64 {
        self.size_excess as f64 / self.k() as f64
    }
}

fn check_k(k: usize) -> Result<()> {
    if k == 0 {
        Err(Error::InvalidParameter("k must be at least 1".into()))
    } else {
        Ok(())
    }
}

fn check_vertices(g: &Multigraph, vs: &[VertexId]) -> Result<()> {
    let mut seen = vec![false; g.vertex_count()];
    for &v in vs {
        if v >= g.vertex_count() {
            return Err(Error::InvalidInput(format!("vertex {v} out of range")));
        }
        if std::mem::replace(&mut seen[v], true) {
            return Err(Error::InvalidInput(format!("vertex {v} listed twice")));
        }
    }
    Ok(())
}

/// Smallest `Z` with `sum_{v in Z} d(v) = |E| (mod k)`, by a subset-sum over
/// degree residues. Ties keep the earliest vertices.
pub fn find_z_set(g: &Multigraph, k: usize) -> Result<Option<Vec<VertexId>>> {
    check_k(k)?;
    let target = g.edge_count() % k;
    let residues = g.degree_residues(k)?;
    const UNREACHED: usize = usize::MAX;
    // best[i][r]: fewest vertices among the first i reaching residue r
    let mut best = vec![vec![UNREACHED; k]];
    best[0][0] = 0;
    for &a in &residues {
        let prev = best.last().unwrap();
        let mut next = prev.clone();
        for r in 0..k {
            if prev[r] != UNREACHED && prev[r] + 1 < next[(r + a) % k] {
                next[(r + a) % k] = prev[r] + 1;
            }
        }
        best.push(next);
    }
    if best[g.vertex_count()][target] == UNREACHED {
        return Ok(None);
    }
    let mut z = Vec::new();
    let mut r = target;
    for v in (0..g.vertex_count()).rev() {
        if best[v + 1][r] != best[v][r] {
            z.push(v);
            r = (r + k - residues[v]) % k;
        }
    }
    z.reverse();
    Ok(Some(z))
}

/// Equitable `k`-factorization steered by a vertex set or a single vertex.
///
/// With a set `Z`, every `|d_i(v) - d(v)/k| < 1` and every factor size is
/// within one of `|E|/k`. With a vertex `z`, the bound at `z` relaxes to 2.
pub fn equitable_factorize(g: &Multigraph, req: &EquitableRequest) -> Result<FactorReport> {
    let k = req.k;
    check_k(k)?;
    let n = g.vertex_count();
    let degrees = g.degrees();
    let steering = match &req.steering {
        Steering::Auto => match find_z_set(g, k)? {
            Some(z) => Steering::Set(z),
            None => {
                let z = (0..n).max_by_key(|&v| (degrees[v], std::cmp::Reverse(v)));
                match z {
                    Some(z) => Steering::Vertex(z),
                    None => Steering::Set(Vec::new()),
                }
            }
        },
        other => other.clone(),
    };
    let mut p = vec![0; n];
    match &steering {
        Steering::Set(z) => {
            check_vertices(g, z)?;
            let sum: usize = z.iter().map(|&v| degrees[v]).sum();
            if sum % k != g.edge_count() % k {
                return Err(Error::InvalidInput(format!(
                    "sum of degrees over Z is {} mod {k}, but |E| is {} mod {k}",
                    sum % k,
                    g.edge_count() % k
                )));
            }
            for &v in z {
                p[v] = degrees[v] % k;
            }
        }
        Steering::Vertex(z) => {
            check_vertices(g, &[*z])?;
            p[*z] = g.edge_count() % k;
        }
        Steering::Auto => unreachable!(),
    }
    let hypotheses = equitable_hypotheses(g, k);
    let orientation = mod_k_orientation_with_budget(g, &ResidueMap::new(k, p)?, req.budget)
        .map_err(|e| e.with_context(&hypothesis_note(&hypotheses)))?;
    let fz = decompose_directed(&orientation, k, DecompositionMode::Size)?;
    let mut report = FactorReport::measure(g, fz);
    report.steering = Some(steering);
    report.hypotheses = hypotheses;
    Ok(report)
}

#[derive(Debug, Clone, PartialEq)]
pub enum ThreeFactorOutcome {
    Decomposable(FactorReport),
    /// Exactly one vertex has degree not divisible by 3.
    Impossible {
        vertex: VertexId,
        explanation: String,
    },
}

/// Decides whether `G` has an equitable 3-factorization, under the
/// assumption that it is 6-edge-connected (or loopless, 5-edge-connected and
/// essentially 6-edge-connected).
pub fn three_factor_criterion(g: &Multigraph) -> Result<(ThreeFactorOutcome, Vec<Hypothesis>)> {
    three_factor_criterion_with_budget(g, SearchBudget::default())
}

pub fn three_factor_criterion_with_budget(
    g: &Multigraph,
    budget: SearchBudget,
) -> Result<(ThreeFactorOutcome, Vec<Hypothesis>)> {
    let lambda = edge_connectivity(g);
    let six = lambda.at_least(6);
    let essential = !g.has_loops()
        && lambda.at_least(5)
        && essential_edge_connectivity_at_least(g, 6).unwrap_or(false);
    let hypotheses = vec![hypothesis(
        "6-edge-connected, or loopless 5-edge-connected and essentially 6-edge-connected".into(),
        six || essential,
    )];
    let degrees = g.degrees();
    let off: Vec<VertexId> = (0..g.vertex_count())
        .filter(|&v| !degrees[v].is_multiple_of(3))
        .collect();
    if let [z] = off[..] {
        let d = degrees[z];
        let explanation = format!(
            "vertex {z} is the only vertex with degree ({d}) not divisible by 3. \
             In an equitable 3-factorization every other vertex has degree d(v)/3 \
             in each factor, so by the handshake lemma d_i({z}) has the same parity \
             for all three factors. Its values lie in {{{}, {}}} and sum to {d}, \
             which forces two consecutive integers of equal parity",
            d / 3,
            d.div_ceil(3)
        );
        return Ok((
            ThreeFactorOutcome::Impossible {
                vertex: z,
                explanation,
            },
            hypotheses,
        ));
    }
    let z = find_z_set(g, 3)?.ok_or_else(|| {
        Error::Infeasible("no vertex set Z with sum of degrees = |E| (mod 3)".into())
    })?;
    let req = EquitableRequest {
        k: 3,
        steering: Steering::Set(z),
        budget,
    };
    let report = equitable_factorize(g, &req)?;
    Ok((ThreeFactorOutcome::Decomposable(report), hypotheses))
}

/// `k` factors with `d_i(v) = d(v) (mod 2)` (odd `k`, `f` absent) or with
/// `d_i(v)` odd exactly on `f` (even `k`, `G` Eulerian), all within two of
/// `d(v)/k`.
pub fn parity_factorize(g: &Multigraph, k: usize, f: Option<&[bool]>) -> Result<FactorReport> {
    parity_factorize_with_budget(g, k, f, SearchBudget::default())
}

pub fn parity_factorize_with_budget(
    g: &Multigraph,
    k: usize,
    f: Option<&[bool]>,
    budget: SearchBudget,
) -> Result<FactorReport> {
    check_k(k)?;
    let n = g.vertex_count();
    let (targets, hypotheses, q) = if k % 2 == 1 {
        if f.is_some() {
            return Err(Error::InvalidInput(
                "for odd k the parities are d(v) mod 2; f must be absent".into(),
            ));
        }
        let targets: Vec<bool> = g.degrees().iter().map(|d| d % 2 == 1).collect();
        let odd_ok = odd_edge_connectivity(g).value.at_least(3 * k - 2);
        let holds = odd_ok || tree_connected(g, 2 * k - 2);
        let h = hypothesis(
            format!(
                "odd-{}-edge-connected or {}-tree-connected",
                3 * k - 2,
                2 * k - 2
            ),
            holds,
        );
        (targets, vec![h], None)
    } else {
        let f = f.ok_or_else(|| Error::InvalidInput("even k requires a parity map f".into()))?;
        if f.len() != n {
            return Err(Error::InvalidInput(format!(
                "parity map has {} entries for {n} vertices",
                f.len()
            )));
        }
        g.require_even_degrees()?;
        let check = f_odd_cut_bound(g, f, 3 * k - 2)?;
        let h = hypothesis(
            format!(
                "d(X) >= {} whenever X holds an odd number of f-odd vertices",
                3 * k - 2
            ),
            check.holds,
        );
        let q: Vec<VertexId> = (0..n).filter(|&v| f[v]).collect();
        (f.to_vec(), vec![h], Some(q))
    };
    let orientation = balanced_mod_k_orientation_with_budget(g, k, q.as_deref(), budget)
        .map_err(|e| e.with_context(&hypothesis_note(&hypotheses)))?;
    let fz = decompose_directed(&orientation, k, DecompositionMode::Parity)?;
    let mut report = FactorReport::measure(g, fz).with_parity_targets(g, &targets);
    report.hypotheses = hypotheses;
    Ok(report)
}

/// Factors that are exactly `d(v)/k` at every vertex.
pub fn regular_factorize(g: &Multigraph, k: usize) -> Result<FactorReport> {
    regular_factorize_with_budget(g, k, SearchBudget::default())
}

pub fn regular_factorize_with_budget(
    g: &Multigraph,
    k: usize,
    budget: SearchBudget,
) -> Result<FactorReport> {
    check_k(k)?;
    if !g.edge_count().is_multiple_of(k) {
        return Err(Error::InvalidInput(format!(
            "|E| = {} is not divisible by k = {k}",
            g.edge_count()
        )));
    }
    let degrees = g.degrees();
    if let Some(v) = (0..g.vertex_count()).find(|&v| !degrees[v].is_multiple_of(k)) {
        return Err(Error::InvalidInput(format!(
            "degree {} of vertex {v} is not divisible by k = {k}",
            degrees[v]
        )));
    }
    let q: Vec<bool> = degrees.iter().map(|d| (d / k) % 2 == 1).collect();
    let check = f_odd_cut_bound(g, &q, 3 * k - 2)?;
    let hypotheses = vec![hypothesis(
        format!(
            "d(X) >= {} whenever X holds an odd number of vertices with d(v)/k odd",
            3 * k - 2
        ),
        check.holds,
    )];
    let orientation =
        mod_k_orientation_with_budget(g, &ResidueMap::zero(k, g.vertex_count())?, budget)
            .map_err(|e| e.with_context(&hypothesis_note(&hypotheses)))?;
    let fz = decompose_directed(&orientation, k, DecompositionMode::Size)?;
    let mut report = FactorReport::measure(g, fz);
    report.hypotheses = hypotheses;
    Ok(report)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegularSplit {
    /// Factor `i` is `r_list[i]`-regular (exact mode) or has `Δ <= r_list[i]`.
    pub factorization: Factorization,
    pub r_list: Vec<usize>,
    pub hypotheses: Vec<Hypothesis>,
    /// Edges added to reach an `r`-regular supergraph (bounded mode).
    pub added_edges: Vec<(VertexId, VertexId)>,
}

/// Splits an even-regular edge set into 2-factors: an Eulerian orientation
/// has `d+ = d- = t`, and a `t`-decomposition of it has `d+ = d- = 1`.
fn two_factors(g: &Multigraph, edges: &[EdgeId]) -> Result<Vec<Vec<EdgeId>>> {
    let (sub, ids) = g.edge_subgraph(edges);
    let t = sub.degrees().first().copied().unwrap_or(0) / 2;
    if t == 0 {
        return Ok(Vec::new());
    }
    let o = eulerian_orientation(&sub)?;
    let fz = decompose_directed(&o, t, DecompositionMode::Size)?;
    Ok(fz
        .all_factor_edges()
        .into_iter()
        .map(|f| f.into_iter().map(|e| ids[e]).collect())
        .collect())
}

/// Partition into factors that are `r_i`-regular, `r = sum r_i`, via a
/// regular `k`-factorization into `r/k`-regular pieces that are regrouped.
///
/// Bounded mode accepts `Δ(G) <= r`: `G` is first completed to an
/// `r`-regular supergraph with loops and then edges between deficient
/// vertices, and the added edges are dropped afterwards.
pub fn regular_split(
    g: &Multigraph,
    r_list: &[usize],
    k: usize,
    bounded_mode: bool,
) -> Result<RegularSplit> {
    regular_split_with_budget(g, r_list, k, bounded_mode, SearchBudget::default())
}

pub fn regular_split_with_budget(
    g: &Multigraph,
    r_list: &[usize],
    k: usize,
    bounded_mode: bool,
    budget: SearchBudget,
) -> Result<RegularSplit> {
    check_k(k)?;
    if r_list.is_empty() || r_list.contains(&0) {
        return Err(Error::InvalidInput(
            "r-list entries must be positive".into(),
        ));
    }
    let r: usize = r_list.iter().sum();
    if !r.is_multiple_of(k) {
        return Err(Error::InvalidInput(format!(
            "r = {r} is not divisible by k = {k}"
        )));
    }
    let s = r / k;
    let n = g.vertex_count();
    let degrees = g.degrees();
    let mut work = g.clone();
    let mut added_edges = Vec::new();
    if bounded_mode {
        if let Some(v) = (0..n).find(|&v| degrees[v] > r) {
            return Err(Error::InvalidInput(format!(
                "vertex {v} has degree {} above r = {r}",
                degrees[v]
            )));
        }
        if (r * n) % 2 == 1 {
            return Err(Error::InvalidInput(format!("r |V| = {} is odd", r * n)));
        }
        let mut deficit: Vec<usize> = degrees.iter().map(|&d| r - d).collect();
        for (v, def) in deficit.iter_mut().enumerate() {
            while *def >= 2 {
                added_edges.push((v, v));
                *def -= 2;
            }
        }
        let mut single: Vec<VertexId> = (0..n).filter(|&v| deficit[v] == 1).collect();
        single.sort_by_key(|&v| (degrees[v], v));
        for pair in single.chunks(2) {
            added_edges.push((pair[0], pair[1]));
        }
        for &(u, v) in &added_edges {
            work.push_unchecked(u, v);
        }
    } else if let Some(v) = (0..n).find(|&v| degrees[v] != r) {
        return Err(Error::InvalidInput(format!(
            "graph is not {r}-regular (vertex {v} has degree {})",
            degrees[v]
        )));
    }

    let mut hypotheses = vec![
        hypothesis(format!("r/k = {s} is odd"), s % 2 == 1),
        hypothesis(
            format!("every r_i >= r/k - 1 >= 2 (r/k = {s})"),
            s >= 3 && r_list.iter().all(|&ri| ri + 1 >= s),
        ),
        hypothesis(format!("|V| = {n} is even"), n.is_multiple_of(2)),
    ];
    let lambda = if bounded_mode { 3 * k - 3 } else { 3 * k - 2 };
    let odd_ok = odd_edge_connectivity(g).value.at_least(lambda);
    hypotheses.push(hypothesis(format!("odd-{lambda}-edge-connected"), odd_ok));

    let base = regular_factorize_with_budget(&work, k, budget)
        .map_err(|e| e.with_context(&hypothesis_note(&hypotheses)))?
        .factorization
        .all_factor_edges();

    // Odd targets each take one s-regular base factor. Everything else is
    // cut into 2-factors and handed out greedily, largest target first.
    let odd_targets = r_list.iter().filter(|&&ri| ri % 2 == 1).count();
    if s.is_multiple_of(2) && odd_targets > 0 {
        return Err(Error::Infeasible(format!(
            "r/k = {s} is even, so the pieces cannot form an odd-regular factor"
        )));
    }
    let mut groups: Vec<Vec<EdgeId>> = vec![Vec::new(); r_list.len()];
    let mut need: Vec<usize> = r_list.to_vec();
    let mut base_iter = base.into_iter();
    for (i, &ri) in r_list.iter().enumerate() {
        if ri % 2 == 1 {
            if ri < s {
                return Err(Error::Infeasible(format!(
                    "odd target r_{i} = {ri} is below r/k = {s}"
                )));
            }
            groups[i].extend(base_iter.next().expect("odd targets <= k by parity"));
            need[i] -= s;
        }
    }
    let rest: Vec<Vec<EdgeId>> = base_iter.collect();
    let mut pieces = Vec::new();
    if s.is_multiple_of(2) {
        for f in &rest {
            pieces.extend(two_factors(&work, f)?);
        }
    } else {
        for pair in rest.chunks(2) {
            let joined: Vec<EdgeId> = pair.iter().flatten().copied().collect();
            pieces.extend(two_factors(&work, &joined)?);
        }
    }
    let mut order: Vec<usize> = (0..r_list.len()).collect();
    order.sort_by_key(|&i| (std::cmp::Reverse(need[i]), i));
    let mut pieces = pieces.into_iter();
    for i in order {
        while need[i] > 0 {
            let piece = pieces.next().expect("2-factor count matches the targets");
            groups[i].extend(piece);
            need[i] -= 2;
        }
    }
    let original = g.edge_count();
    let groups: Vec<Vec<EdgeId>> = groups
        .into_iter()
        .map(|grp| {
            let mut kept: Vec<EdgeId> = grp.into_iter().filter(|&e| e < original).collect();
            kept.sort_unstable();
            kept
        })
        .collect();
    let factorization = Factorization::from_factor_edges(g, &groups)?;
    Ok(RegularSplit {
        factorization,
        r_list: r_list.to_vec(),
        hypotheses,
        added_edges,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn window_ok(g: &Multigraph, fz: &Factorization) -> bool {
        let k = fz.k();
        let d = g.degrees();
        fz.degree_table(g)
            .iter()
            .all(|row| (0..g.vertex_count()).all(|v| (k * row[v]).abs_diff(d[v]) < k))
    }

    #[test]
    fn equitable_examples() {
        let k7 = Multigraph::complete(7);
        let rep =
            equitable_factorize(&k7, &EquitableRequest::new(3, Steering::Set(vec![]))).unwrap();
        assert_eq!(rep.factorization.sizes(), vec![7, 7, 7]);
        for row in rep.factorization.degree_table(&k7) {
            assert_eq!(row, vec![2; 7]);
        }
        assert!(rep.hypotheses.iter().all(|h| h.holds));

        let k4 = Multigraph::complete(4);
        let rep =
            equitable_factorize(&k4, &EquitableRequest::new(2, Steering::Set(vec![]))).unwrap();
        assert_eq!(rep.factorization.sizes(), vec![3, 3]);
        assert!(window_ok(&k4, &rep.factorization));
        assert!(rep.max_vertex_deviation() < 1.0);

        let rep = equitable_factorize(&k4, &EquitableRequest::new(2, Steering::Vertex(0))).unwrap();
        assert!(rep.vertex_deviation(0) < 2.0);
        assert!((1..4).all(|v| rep.vertex_deviation(v) < 1.0));
        let table = rep.factorization.degree_table(&k4);
        assert!(table[0][0].abs_diff(table[1][0]) <= 2);
    }

    #[test]
    fn equitable_rejects_bad_z() {
        let k4 = Multigraph::complete(4);
        // d = 3 at vertex 0, |E| = 6: 3 != 0 (mod 2)
        let err = equitable_factorize(&k4, &EquitableRequest::new(2, Steering::Set(vec![0])));
        assert!(matches!(err, Err(Error::InvalidInput(_))));
        let err = equitable_factorize(&k4, &EquitableRequest::new(2, Steering::Vertex(9)));
        assert!(matches!(err, Err(Error::InvalidInput(_))));
    }

    #[test]
    fn equitable_auto_on_multiplied_graphs() {
        let c4 = Multigraph::cycle(4).multiplied(2);
        let rep = equitable_factorize(&c4, &EquitableRequest::new(2, Steering::Auto)).unwrap();
        assert!(window_ok(&c4, &rep.factorization));
        assert!(rep.size_excess < 2);

        let k4 = Multigraph::complete(4).multiplied(3);
        let rep = equitable_factorize(&k4, &EquitableRequest::new(3, Steering::Auto)).unwrap();
        assert!(window_ok(&k4, &rep.factorization));
        assert!(rep.size_excess < 3);
    }

    #[test]
    fn z_set_examples() {
        assert_eq!(
            find_z_set(&Multigraph::complete(7), 3).unwrap(),
            Some(vec![])
        );

        let g =
            Multigraph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (2, 3)])
                .unwrap();
        assert_eq!(g.degrees(), vec![3, 3, 4, 4]);
        let z = find_z_set(&g, 2).unwrap().unwrap();
        assert_eq!(z.len(), 1);
        assert_eq!(g.degree(z[0]), 3);

        let mut k7 = Multigraph::complete(7);
        k7.add_edge(0, 0).unwrap();
        assert_eq!(find_z_set(&k7, 3).unwrap(), None);
    }

    #[test]
    fn three_factor_examples() {
        let k7 = Multigraph::complete(7);
        match three_factor_criterion(&k7).unwrap().0 {
            ThreeFactorOutcome::Decomposable(rep) => {
                for row in rep.factorization.degree_table(&k7) {
                    assert_eq!(row, vec![2; 7]);
                }
            }
            other => panic!("expected a factorization, got {other:?}"),
        }
        let mut looped = Multigraph::complete(7);
        looped.add_edge(0, 0).unwrap();
        assert!(matches!(
            three_factor_criterion(&looped).unwrap().0,
            ThreeFactorOutcome::Impossible { vertex: 0, .. }
        ));
    }

    #[test]
    fn parity_examples() {
        let k7 = Multigraph::complete(7);
        let rep = parity_factorize(&k7, 3, None).unwrap();
        for row in rep.factorization.degree_table(&k7) {
            assert_eq!(row, vec![2; 7]);
        }
        assert_eq!(rep.parity_violations, Some(vec![]));

        let rep = parity_factorize(&k7, 1, None).unwrap();
        assert_eq!(rep.factorization.sizes(), vec![21]);

        // three Hamiltonian cycles on six vertices: 6-regular
        let mut g = Multigraph::cycle(6);
        for perm in [[0, 2, 4, 1, 5, 3], [0, 3, 1, 4, 2, 5]] {
            for i in 0..6 {
                g.add_edge(perm[i], perm[(i + 1) % 6]).unwrap();
            }
        }
        let f = vec![true; 6];
        let rep = parity_factorize(&g, 2, Some(&f)).unwrap();
        assert_eq!(rep.parity_violations, Some(vec![]));
        for row in rep.factorization.degree_table(&g) {
            assert!(row.iter().all(|&d| d % 2 == 1 && d > 1 && d < 5));
        }
        assert!(rep.max_vertex_deviation() < 2.0);
    }

    #[test]
    fn parity_rejects_bad_f() {
        let k7 = Multigraph::complete(7);
        assert!(matches!(
            parity_factorize(&k7, 3, Some(&[true; 7])),
            Err(Error::InvalidInput(_))
        ));
        let c4 = Multigraph::cycle(4);
        assert!(matches!(
            parity_factorize(&c4, 2, Some(&[true, false, false, false])),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(
            parity_factorize(&c4, 2, None),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn regular_examples() {
        let k7 = Multigraph::complete(7);
        let rep = regular_factorize(&k7, 3).unwrap();
        assert_eq!(rep.factorization.sizes(), vec![7, 7, 7]);
        assert!(rep.vertex_excess.iter().all(|&x| x == 0));

        let c4 = Multigraph::cycle(4).multiplied(2);
        let rep = regular_factorize(&c4, 2).unwrap();
        for row in rep.factorization.degree_table(&c4) {
            assert_eq!(row, vec![2; 4]);
        }

        let rep = regular_factorize(&k7, 1).unwrap();
        assert_eq!(rep.factorization.sizes(), vec![21]);

        assert!(matches!(
            regular_factorize(&Multigraph::complete(4), 2),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn regular_split_examples() {
        let k7 = Multigraph::complete(7);
        let split = regular_split(&k7, &[2, 2, 2], 3, false).unwrap();
        for row in split.factorization.degree_table(&k7) {
            assert_eq!(row, vec![2; 7]);
        }

        let split = regular_split(&k7, &[4, 2], 3, false).unwrap();
        let table = split.factorization.degree_table(&k7);
        assert_eq!(table[0], vec![4; 7]);
        assert_eq!(table[1], vec![2; 7]);

        let mut minus = Multigraph::new(7);
        for (u, v) in Multigraph::complete(7).edges().iter().skip(1) {
            minus.add_edge(*u, *v).unwrap();
        }
        let split = regular_split(&minus, &[2, 2, 2], 3, true).unwrap();
        assert_eq!(split.added_edges, vec![(0, 1)]);
        for row in split.factorization.degree_table(&minus) {
            assert!(row.iter().all(|&d| d <= 2));
        }
    }

    #[test]
    fn regular_split_odd_base() {
        // k = 1 with a single target returns the graph itself
        let k6 = Multigraph::complete(6);
        let split = regular_split(&k6, &[5], 1, false).unwrap();
        assert_eq!(split.factorization.sizes(), vec![15]);
        // K4 doubled is 6-regular; k = 2 gives 3-regular pieces
        let g = Multigraph::complete(4).multiplied(2);
        let split = regular_split(&g, &[3, 3], 2, false).unwrap();
        for row in split.factorization.degree_table(&g) {
            assert_eq!(row, vec![3; 4]);
        }
        assert!(matches!(
            regular_split(&g, &[5, 1], 2, false),
            Err(Error::Infeasible(_))
        ));
        assert!(matches!(
            regular_split(&g, &[4, 1], 2, false),
            Err(Error::InvalidInput(_))
        ));
    }
}

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

//! Parity factors: the Lovász condition, an exact finder, parity factors
//! with degrees near `ε d(v)`, and even factorizations built from them.
//!
//! The finder reduces a parity `(g, f)`-factor to a perfect matching. Each
//! edge end becomes a vertex, the two ends of an edge are joined, and each
//! original vertex `v` gets `d(v) - hi(v)` absorbing vertices plus
//! `(hi(v) - lo(v)) / 2` absorbing pairs. A pair soaks up zero or two ends,
//! so the ends left to edges number `lo(v)`, `lo(v) + 2`, ..., `hi(v)`.

use num_rational::Ratio;
use serde::Serialize;

use crate::connectivity::{edge_connectivity, f_odd_cut_bound};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Factorization, Multigraph, VertexId};
use crate::matching::Matching;
use crate::pipelines::Hypothesis;

/// Exact fraction used for `ε`.
pub type Fraction = Ratio<u64>;

/// Vertex count up to which [`check_lovasz`] enumerates all `3^n` pairs.
pub const LOVASZ_ENUMERATION_LIMIT: usize = 12;

/// Target parity `f` with bounds `g0 <= d_F <= f0`, all of parity `f`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParitySpec {
    f: Vec<bool>,
    g0: Vec<i64>,
    f0: Vec<i64>,
}

impl ParitySpec {
    pub fn new(f: Vec<bool>, g0: Vec<i64>, f0: Vec<i64>) -> Result<Self> {
        if f.len() != g0.len() || f.len() != f0.len() {
            return Err(Error::InvalidInput(
                "f, g0 and f0 must have equal lengths".into(),
            ));
        }
        for v in 0..f.len() {
            let p = f[v] as i64;
            if g0[v] > f0[v] || g0[v].rem_euclid(2) != p || f0[v].rem_euclid(2) != p {
                return Err(Error::InvalidInput(format!(
                    "vertex {v}: need g0 <= f0 with g0 = f0 = f (mod 2), got g0 = {}, f0 = {}, f = {p}",
                    g0[v], f0[v]
                )));
            }
        }
        Ok(ParitySpec { f, g0, f0 })
    }

    /// `g0 = f0 = 1` everywhere: a perfect matching.
    pub fn exact(f: Vec<bool>, value: &[i64]) -> Result<Self> {
        ParitySpec::new(f, value.to_vec(), value.to_vec())
    }

    pub fn f(&self) -> &[bool] {
        &self.f
    }

    pub fn g0(&self) -> &[i64] {
        &self.g0
    }

    pub fn f0(&self) -> &[i64] {
        &self.f0
    }

    fn check_len(&self, g: &Multigraph) -> Result<()> {
        if self.f.len() != g.vertex_count() {
            return Err(Error::InvalidInput(format!(
                "parity spec has {} entries for {} vertices",
                self.f.len(),
                g.vertex_count()
            )));
        }
        Ok(())
    }

    /// Whether `F` (an edge list) satisfies the spec.
    pub fn accepts(&self, g: &Multigraph, factor: &[EdgeId]) -> bool {
        let deg = factor_degrees(g, factor);
        (0..g.vertex_count()).all(|v| {
            let d = deg[v] as i64;
            self.g0[v] <= d && d <= self.f0[v] && (d % 2 == 1) == self.f[v]
        })
    }
}

pub fn factor_degrees(g: &Multigraph, factor: &[EdgeId]) -> Vec<usize> {
    let mut deg = vec![0; g.vertex_count()];
    for &e in factor {
        let (u, v) = g.endpoints(e);
        deg[u] += 1;
        deg[v] += 1;
    }
    deg
}

/// A pair `(A, B)` for which the Lovász inequality fails.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConditionCertificate {
    pub a: Vec<VertexId>,
    pub b: Vec<VertexId>,
    pub omega: usize,
    /// `2 + sum_A f0 + sum_B (d - g0) - d(A, B) - omega`; at most 0.
    pub slack: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum LovaszOutcome {
    /// Every pair satisfies the inequality and `sum f` is even.
    Holds,
    Violated(ConditionCertificate),
    /// `sum f` is odd, so no factor exists whatever the inequalities say.
    OddTotalParity,
}

impl LovaszOutcome {
    pub fn holds(&self) -> bool {
        matches!(self, LovaszOutcome::Holds)
    }
}

fn membership(g: &Multigraph, a: &[VertexId], b: &[VertexId]) -> Result<Vec<u8>> {
    let mut side = vec![0u8; g.vertex_count()];
    for (set, tag) in [(a, 1u8), (b, 2u8)] {
        for &v in set {
            if v >= g.vertex_count() {
                return Err(Error::InvalidQuery(format!("vertex {v} out of range")));
            }
            if side[v] != 0 && side[v] != tag {
                return Err(Error::InvalidQuery(format!(
                    "vertex {v} lies in both A and B"
                )));
            }
            side[v] = tag;
        }
    }
    Ok(side)
}

/// `side[v]`: 0 outside, 1 in `A`, 2 in `B`.
fn omega_from_sides(g: &Multigraph, side: &[u8], f: &[bool]) -> usize {
    let gone: Vec<bool> = side.iter().map(|&s| s != 0).collect();
    g.components_masked(&gone)
        .iter()
        .filter(|comp| {
            let fsum = comp.iter().filter(|&&v| f[v]).count();
            let to_b: usize = comp
                .iter()
                .flat_map(|&v| g.incident(v).iter().map(move |&e| g.opposite(e, v)))
                .filter(|&w| side[w] == 2)
                .count();
            (fsum + to_b) % 2 == 1
        })
        .count()
}

/// Components `X` of `G - (A ∪ B)` with `sum_X f != d(X, B) (mod 2)`.
pub fn omega_f(g: &Multigraph, a: &[VertexId], b: &[VertexId], f: &[bool]) -> Result<usize> {
    if f.len() != g.vertex_count() {
        return Err(Error::InvalidInput(
            "f must have one entry per vertex".into(),
        ));
    }
    let side = membership(g, a, b)?;
    Ok(omega_from_sides(g, &side, f))
}

fn slack(g: &Multigraph, spec: &ParitySpec, side: &[u8], degrees: &[usize], omega: usize) -> i64 {
    let mut s = 2 - omega as i64;
    for v in 0..g.vertex_count() {
        match side[v] {
            1 => s += spec.f0[v],
            2 => s += degrees[v] as i64 - spec.g0[v],
            _ => {}
        }
    }
    let between = g
        .edges()
        .iter()
        .filter(|&&(u, v)| (side[u] == 1 && side[v] == 2) || (side[u] == 2 && side[v] == 1))
        .count();
    s - between as i64
}

/// Checks `omega_f(A, B) < 2 + sum_A f0 + sum_B (d - g0) - d(A, B)` for all
/// disjoint `A`, `B`, in the order of the base-3 counter over vertex
/// memberships (vertex 0 least significant).
pub fn check_lovasz(g: &Multigraph, spec: &ParitySpec) -> Result<LovaszOutcome> {
    spec.check_len(g)?;
    let n = g.vertex_count();
    if n > LOVASZ_ENUMERATION_LIMIT {
        return Err(Error::Undecided(format!(
            "condition enumeration is limited to {LOVASZ_ENUMERATION_LIMIT} vertices, got {n}"
        )));
    }
    let degrees = g.degrees();
    let mut side = vec![0u8; n];
    loop {
        let omega = omega_from_sides(g, &side, &spec.f);
        let s = slack(g, spec, &side, &degrees, omega);
        if s <= 0 {
            let pick = |tag| (0..n).filter(|&v| side[v] == tag).collect();
            return Ok(LovaszOutcome::Violated(ConditionCertificate {
                a: pick(1),
                b: pick(2),
                omega,
                slack: s,
            }));
        }
        // base-3 increment
        let mut i = 0;
        while i < n && side[i] == 2 {
            side[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
        side[i] += 1;
    }
    if spec.f.iter().filter(|&&b| b).count() % 2 == 1 {
        return Ok(LovaszOutcome::OddTotalParity);
    }
    Ok(LovaszOutcome::Holds)
}

/// An edge set `F` meeting the spec, or `None` when none exists.
pub fn find_parity_factor(g: &Multigraph, spec: &ParitySpec) -> Result<Option<Vec<EdgeId>>> {
    spec.check_len(g)?;
    let n = g.vertex_count();
    if spec.f.iter().filter(|&&b| b).count() % 2 == 1 {
        return Ok(None);
    }
    let degrees = g.degrees();
    let mut lo = vec![0usize; n];
    let mut hi = vec![0usize; n];
    for v in 0..n {
        let p = spec.f[v] as i64;
        let mut l = spec.g0[v].max(0);
        if l % 2 != p {
            l += 1;
        }
        let mut h = spec.f0[v].min(degrees[v] as i64);
        if h.rem_euclid(2) != p {
            h -= 1;
        }
        if l > h {
            return Ok(None);
        }
        lo[v] = l as usize;
        hi[v] = h as usize;
    }
    // end vertices: 2e, 2e + 1 for the two ends of edge e
    let m = g.edge_count();
    let mut ends = vec![Vec::new(); n];
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        ends[u].push(2 * e);
        ends[v].push(2 * e + 1);
    }
    let total = 2 * m + (0..n).map(|v| degrees[v] - lo[v]).sum::<usize>();
    let mut mt = Matching::new(total);
    for e in 0..m {
        mt.add_edge(2 * e, 2 * e + 1);
    }
    let mut next = 2 * m;
    for v in 0..n {
        for _ in 0..degrees[v] - hi[v] {
            for &x in &ends[v] {
                mt.add_edge(next, x);
            }
            next += 1;
        }
        for _ in 0..(hi[v] - lo[v]) / 2 {
            for &x in &ends[v] {
                mt.add_edge(next, x);
                mt.add_edge(next + 1, x);
            }
            mt.add_edge(next, next + 1);
            next += 2;
        }
    }
    debug_assert_eq!(next, total);
    if 2 * mt.solve() != total {
        return Ok(None);
    }
    let factor: Vec<EdgeId> = (0..m)
        .filter(|&e| mt.mate(2 * e) == Some(2 * e + 1))
        .collect();
    debug_assert!(spec.accepts(g, &factor));
    Ok(Some(factor))
}

/// Optional one-sided constraint at a vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ZSide {
    /// `d_F(z) >= ε d(z)`.
    AtLeast,
    /// `d_F(z) <= ε d(z)`.
    AtMost,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EpsilonFactor {
    pub edges: Vec<EdgeId>,
    pub spec: ParitySpec,
    pub hypotheses: Vec<Hypothesis>,
}

fn floor_mul(eps: Fraction, d: usize) -> i64 {
    (eps.numer() * d as u64 / eps.denom()) as i64
}

fn ceil_mul(eps: Fraction, d: usize) -> i64 {
    (eps.numer() * d as u64).div_ceil(*eps.denom()) as i64
}

/// Exact comparison of an integer degree with `ε d`.
fn cmp_eps(x: i64, eps: Fraction, d: usize) -> std::cmp::Ordering {
    (x as i128 * *eps.denom() as i128).cmp(&(*eps.numer() as i128 * d as i128))
}

/// Options for [`epsilon_parity_factor`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EpsilonOptions {
    pub z: Option<(VertexId, ZSide)>,
    /// Experimental: narrow the window to `|d_F(v) - ε d(v)| <= 1` at these
    /// vertices. Not guaranteed to succeed.
    pub tight: Vec<VertexId>,
}

/// The `(g0, f0)` windows used by [`epsilon_parity_factor`].
pub fn epsilon_spec(
    g: &Multigraph,
    f: &[bool],
    eps: Fraction,
    options: &EpsilonOptions,
) -> Result<ParitySpec> {
    let n = g.vertex_count();
    if f.len() != n {
        return Err(Error::InvalidInput(format!(
            "parity map has {} entries for {n} vertices",
            f.len()
        )));
    }
    let degrees = g.degrees();
    let mut g0 = vec![0; n];
    let mut f0 = vec![0; n];
    for v in 0..n {
        let p = f[v] as i64;
        let lo = floor_mul(eps, degrees[v]);
        let hi = ceil_mul(eps, degrees[v]);
        g0[v] = if lo % 2 == p { lo } else { lo - 1 };
        f0[v] = if hi % 2 == p { hi } else { hi + 1 };
    }
    for &v in &options.tight {
        if v >= n {
            return Err(Error::InvalidInput(format!("vertex {v} out of range")));
        }
        // smallest value of parity f(v) at least ε d - 1, largest at most ε d + 1
        while cmp_eps(g0[v] + 1, eps, degrees[v]).is_lt() {
            g0[v] += 2;
        }
        while cmp_eps(f0[v] - 1, eps, degrees[v]).is_gt() {
            f0[v] -= 2;
        }
    }
    if let Some((z, side)) = options.z {
        if z >= n {
            return Err(Error::InvalidInput(format!("vertex {z} out of range")));
        }
        match side {
            ZSide::AtLeast if cmp_eps(g0[z], eps, degrees[z]).is_lt() => g0[z] += 2,
            ZSide::AtMost if cmp_eps(f0[z], eps, degrees[z]).is_gt() => f0[z] -= 2,
            _ => {}
        }
    }
    ParitySpec::new(f.to_vec(), g0, f0)
}

fn epsilon_hypotheses(g: &Multigraph, f: &[bool], eps: Fraction) -> Result<Vec<Hypothesis>> {
    let degrees = g.degrees();
    let inv = Fraction::from_integer(1) / eps;
    let one_minus = Fraction::from_integer(1) - eps;
    let first = f_odd_cut_bound(g, f, inv.ceil().to_integer() as usize)?;
    let complement: Vec<bool> = (0..g.vertex_count())
        .map(|v| (degrees[v] % 2 == 1) != f[v])
        .collect();
    let second_bound = if *one_minus.numer() == 0 {
        usize::MAX
    } else {
        (Fraction::from_integer(1) / one_minus).ceil().to_integer() as usize
    };
    let second = f_odd_cut_bound(g, &complement, second_bound)?;
    Ok(vec![
        Hypothesis {
            statement: format!("d(X) >= 1/ε = {inv} whenever sum_X f is odd"),
            holds: first.holds,
        },
        Hypothesis {
            statement: format!("d(X) >= 1/(1-ε) whenever sum_X (d - f) is odd (ε = {eps})"),
            holds: second.holds,
        },
        Hypothesis {
            statement: "2-edge-connected".into(),
            holds: edge_connectivity(g).at_least(2),
        },
    ])
}

/// An `f`-parity factor with `floor(ε d) - 1 <= d_F <= ceil(ε d) + 1`.
pub fn epsilon_parity_factor(
    g: &Multigraph,
    f: &[bool],
    eps: Fraction,
    options: &EpsilonOptions,
) -> Result<EpsilonFactor> {
    if *eps.numer() == 0 || eps >= Fraction::from_integer(1) {
        return Err(Error::InvalidParameter(format!(
            "ε = {eps} must lie strictly between 0 and 1"
        )));
    }
    if f.iter().filter(|&&b| b).count() % 2 == 1 {
        return Err(Error::InvalidInput(
            "f must have an even number of odd vertices".into(),
        ));
    }
    let spec = epsilon_spec(g, f, eps, options)?;
    let hypotheses = epsilon_hypotheses(g, f, eps)?;
    for h in hypotheses.iter().filter(|h| !h.holds) {
        log::warn!("hypothesis not satisfied: {}", h.statement);
    }
    match find_parity_factor(g, &spec)? {
        Some(edges) => Ok(EpsilonFactor {
            edges,
            spec,
            hypotheses,
        }),
        None => {
            let failing: Vec<&str> = hypotheses
                .iter()
                .filter(|h| !h.holds)
                .map(|h| h.statement.as_str())
                .collect();
            let mut msg = format!("no f-parity factor within the ε = {eps} window");
            if !options.tight.is_empty() {
                msg.push_str(" (tight vertices requested; this constraint is experimental)");
            }
            if !failing.is_empty() {
                msg.push_str(&format!("; unsatisfied hypotheses: {}", failing.join("; ")));
            }
            Err(Error::Infeasible(msg))
        }
    }
}

/// Even factor with `|d_F(v) - ε d(v)| < 2`, for `G` with all degrees even.
pub fn even_factor_eps(g: &Multigraph, eps: Fraction) -> Result<Vec<EdgeId>> {
    g.require_even_degrees()?;
    if eps > Fraction::from_integer(1) {
        return Err(Error::InvalidParameter(format!("ε = {eps} exceeds 1")));
    }
    if *eps.numer() == 0 {
        return Ok(Vec::new());
    }
    if eps == Fraction::from_integer(1) {
        return Ok((0..g.edge_count()).collect());
    }
    let f = vec![false; g.vertex_count()];
    Ok(epsilon_parity_factor(g, &f, eps, &EpsilonOptions::default())?.edges)
}

/// `k` even factors with `|d_i(v) - d(v)/k| < 2`: peel off an even
/// `1/k`-factor and recurse on the rest with `k - 1`.
pub fn hilton_even_factorization(g: &Multigraph, k: usize) -> Result<Factorization> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    g.require_even_degrees()?;
    let mut assignment = vec![0; g.edge_count()];
    let mut remaining: Vec<EdgeId> = (0..g.edge_count()).collect();
    for i in (1..k).rev() {
        let (sub, ids) = g.edge_subgraph(&remaining);
        let eps = Fraction::new(1, i as u64 + 1);
        let taken = even_factor_eps(&sub, eps)?;
        let mut in_factor = vec![false; sub.edge_count()];
        for &e in &taken {
            in_factor[e] = true;
            assignment[ids[e]] = i;
        }
        remaining = (0..sub.edge_count())
            .filter(|&e| !in_factor[e])
            .map(|e| ids[e])
            .collect();
    }
    Factorization::new(g, k, assignment)
}

/// Parses `"1/3"`, `"0.25"` or `"1"`.
pub fn parse_fraction(text: &str) -> Result<Fraction> {
    let text = text.trim();
    if let Ok(r) = text.parse::<Fraction>() {
        return Ok(r);
    }
    let x: f64 = text
        .parse()
        .map_err(|_| Error::InvalidParameter(format!("cannot read {text:?} as a fraction")))?;
    fraction_from_f64(x)
}

pub fn fraction_from_f64(x: f64) -> Result<Fraction> {
    if !(x.is_finite() && x >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "{x} is not a non-negative real"
        )));
    }
    let r = Ratio::<i64>::approximate_float(x)
        .ok_or_else(|| Error::InvalidParameter(format!("cannot approximate {x} by a fraction")))?;
    Ok(Fraction::new(*r.numer() as u64, *r.denom() as u64))
}

/// Even factors with `|d_i(v) - ε_i d(v)| < 6` by recursive bipartition of
/// the weights: each split takes an even factor for one group's share.
pub fn weighted_even_factorization(g: &Multigraph, eps_list: &[Fraction]) -> Result<Factorization> {
    g.require_even_degrees()?;
    if eps_list.is_empty() || eps_list.iter().any(|e| *e.numer() == 0) {
        return Err(Error::InvalidInput("weights must be positive".into()));
    }
    let total: Fraction = eps_list.iter().copied().sum();
    let as_real = *total.numer() as f64 / *total.denom() as f64;
    if (as_real - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidInput(format!(
            "weights sum to {total}, not 1"
        )));
    }
    let weights: Vec<Fraction> = eps_list.iter().map(|&e| e / total).collect();
    let mut assignment = vec![0; g.edge_count()];
    let all: Vec<EdgeId> = (0..g.edge_count()).collect();
    let indices: Vec<usize> = (0..weights.len()).collect();
    split_weighted(g, &all, &indices, &weights, &mut assignment)?;
    Factorization::new(g, weights.len(), assignment)
}

/// Greedy balanced bipartition: heaviest first into the lighter group.
fn bipartition(indices: &[usize], weights: &[Fraction]) -> (Vec<usize>, Vec<usize>) {
    let mut sorted = indices.to_vec();
    sorted.sort_by(|&a, &b| weights[b].cmp(&weights[a]).then(a.cmp(&b)));
    let (mut left, mut right) = (Vec::new(), Vec::new());
    let (mut sl, mut sr) = (Fraction::from_integer(0), Fraction::from_integer(0));
    for i in sorted {
        if sl <= sr {
            sl += weights[i];
            left.push(i);
        } else {
            sr += weights[i];
            right.push(i);
        }
    }
    (left, right)
}

fn split_weighted(
    g: &Multigraph,
    edges: &[EdgeId],
    indices: &[usize],
    weights: &[Fraction],
    assignment: &mut [usize],
) -> Result<()> {
    if let [only] = indices {
        for &e in edges {
            assignment[e] = *only;
        }
        return Ok(());
    }
    let (left, right) = bipartition(indices, weights);
    let sum = |part: &[usize]| part.iter().map(|&i| weights[i]).sum::<Fraction>();
    let (sl, sr) = (sum(&left), sum(&right));
    let (sub, ids) = g.edge_subgraph(edges);
    let taken = even_factor_eps(&sub, sl / (sl + sr))?;
    let mut in_left = vec![false; sub.edge_count()];
    for &e in &taken {
        in_left[e] = true;
    }
    let left_edges: Vec<EdgeId> = (0..sub.edge_count())
        .filter(|&e| in_left[e])
        .map(|e| ids[e])
        .collect();
    let right_edges: Vec<EdgeId> = (0..sub.edge_count())
        .filter(|&e| !in_left[e])
        .map(|e| ids[e])
        .collect();
    split_weighted(g, &left_edges, &left, weights, assignment)?;
    split_weighted(g, &right_edges, &right, weights, assignment)
}

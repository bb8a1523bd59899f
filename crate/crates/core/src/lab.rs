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

//! Independent auditing, instance generators and exhaustive oracles.
//!
//! Nothing here calls the solvers: [`verify`] recounts degrees from the raw
//! edge list and the oracles enumerate assignments directly, so they can
//! serve as ground truth for the rest of the crate.

use std::sync::atomic::{AtomicBool, Ordering};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Factorization, Multigraph, VertexId};
use crate::orientation::ResidueMap;
use crate::parity::{Fraction, ParitySpec, ZSide};

/// A bound that [`verify`] can measure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Claim {
    /// `|d_i(v) - d(v)/k| < 1`.
    DeviationBelow1,
    /// `|d_i(v) - d(v)/k| < 2`.
    DeviationBelow2,
    /// `||E_i| - |E|/k| < 1`.
    SizeWithinOne,
    /// `d_i(v) = d(v) (mod 2)`.
    Parity,
    /// Every `d_i(v)` even.
    Even,
    /// `d_i(v) = d(v)/k`.
    Regular,
    /// `d_i(v)` odd exactly when `f(v)`.
    FParity(Vec<bool>),
    /// `|d_i(v) - ε_i d(v)| < 6`.
    Weighted(Vec<Fraction>),
    /// Factor `i` is `r_i`-regular.
    RRegular(Vec<usize>),
    /// Factor `i` has maximum degree at most `r_i`.
    RBounded(Vec<usize>),
    /// `floor(d/2k) + floor((d+1)/2k) <= d_i <= ceil(d/2k) + ceil((d-1)/2k)`.
    Anstee,
    /// Deviation below 2 at `z` and below 1 elsewhere.
    ZVariant(VertexId),
    /// Factor 0 is an `f`-parity factor with
    /// `floor(ε d) - 1 <= d_F <= ceil(ε d) + 1`, respecting the side at `z`.
    EpsilonWindow {
        eps: Fraction,
        f: Vec<bool>,
        z: Option<(VertexId, ZSide)>,
    },
    /// Factor 0 is even with `|d_F(v) - ε d(v)| < 2`.
    EvenEpsilon(Fraction),
}

/// Inputs that parameterized claims draw on when parsed from text.
#[derive(Debug, Clone, Default)]
pub struct ClaimParams {
    pub f: Option<Vec<bool>>,
    pub eps: Option<Fraction>,
    pub eps_list: Option<Vec<Fraction>>,
    pub r_list: Option<Vec<usize>>,
    pub z: Option<VertexId>,
    pub z_side: Option<ZSide>,
}

pub const CLAIM_IDS: &[&str] = &[
    "deviation<1",
    "deviation<2",
    "size±1",
    "parity",
    "even",
    "regular",
    "f-parity",
    "weighted<6",
    "r-regular",
    "r-bounded",
    "anstee",
    "z-variant",
    "eps-window",
    "even-eps<2",
];

impl Claim {
    pub fn parse(id: &str, params: &ClaimParams) -> Result<Claim> {
        let need = |what: &str| Error::InvalidInput(format!("claim {id} needs {what}"));
        Ok(match id {
            "deviation<1" => Claim::DeviationBelow1,
            "deviation<2" => Claim::DeviationBelow2,
            "size±1" | "size+-1" => Claim::SizeWithinOne,
            "parity" => Claim::Parity,
            "even" => Claim::Even,
            "regular" => Claim::Regular,
            "f-parity" => Claim::FParity(params.f.clone().ok_or_else(|| need("a parity map"))?),
            "weighted<6" => {
                Claim::Weighted(params.eps_list.clone().ok_or_else(|| need("weights"))?)
            }
            "r-regular" => Claim::RRegular(params.r_list.clone().ok_or_else(|| need("an r-list"))?),
            "r-bounded" => Claim::RBounded(params.r_list.clone().ok_or_else(|| need("an r-list"))?),
            "anstee" => Claim::Anstee,
            "z-variant" => Claim::ZVariant(params.z.ok_or_else(|| need("a vertex z"))?),
            "eps-window" => Claim::EpsilonWindow {
                eps: params.eps.ok_or_else(|| need("ε"))?,
                f: params.f.clone().ok_or_else(|| need("a parity map"))?,
                z: params.z.zip(params.z_side),
            },
            "even-eps<2" => Claim::EvenEpsilon(params.eps.ok_or_else(|| need("ε"))?),
            other => {
                return Err(Error::InvalidInput(format!(
                    "unknown claim {other:?}; known claims: {}",
                    CLAIM_IDS.join(", ")
                )))
            }
        })
    }

    pub fn id(&self) -> &'static str {
        match self {
            Claim::DeviationBelow1 => "deviation<1",
            Claim::DeviationBelow2 => "deviation<2",
            Claim::SizeWithinOne => "size±1",
            Claim::Parity => "parity",
            Claim::Even => "even",
            Claim::Regular => "regular",
            Claim::FParity(_) => "f-parity",
            Claim::Weighted(_) => "weighted<6",
            Claim::RRegular(_) => "r-regular",
            Claim::RBounded(_) => "r-bounded",
            Claim::Anstee => "anstee",
            Claim::ZVariant(_) => "z-variant",
            Claim::EpsilonWindow { .. } => "eps-window",
            Claim::EvenEpsilon(_) => "even-eps<2",
        }
    }
}

/// One measured claim. Count-type claims measure the number of violating
/// (vertex, factor) pairs against a bound of 0.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClaimCheck {
    pub claim: String,
    pub bound: f64,
    pub measured: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub checks: Vec<ClaimCheck>,
    pub pass: bool,
}

/// `|x - ε d|` as an exact fraction, returned as (numerator, denominator).
fn distance(x: usize, eps: Fraction, d: usize) -> (u128, u128) {
    let den = *eps.denom() as u128;
    let a = x as u128 * den;
    let b = *eps.numer() as u128 * d as u128;
    (a.abs_diff(b), den)
}

fn checked(g: &Multigraph, fz: &Factorization) -> Result<()> {
    if fz.assignment().len() != g.edge_count() {
        return Err(Error::InvalidInput(format!(
            "factorization covers {} edges, graph has {}",
            fz.assignment().len(),
            g.edge_count()
        )));
    }
    if fz.assignment().iter().any(|&i| i >= fz.k()) {
        return Err(Error::InvalidInput("factor index out of range".into()));
    }
    Ok(())
}

fn count_check(claim: &Claim, violations: usize) -> ClaimCheck {
    ClaimCheck {
        claim: claim.id().into(),
        bound: 0.0,
        measured: violations as f64,
        pass: violations == 0,
    }
}

/// Measures every claim on `fz`, recounting degrees from `g`'s edges.
pub fn verify(g: &Multigraph, fz: &Factorization, claims: &[Claim]) -> Result<VerificationReport> {
    checked(g, fz)?;
    let n = g.vertex_count();
    let k = fz.k();
    let mut deg = vec![vec![0usize; n]; k];
    let mut sizes = vec![0usize; k];
    let mut total = vec![0usize; n];
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        let i = fz.assignment()[e];
        deg[i][u] += 1;
        deg[i][v] += 1;
        total[u] += 1;
        total[v] += 1;
        sizes[i] += 1;
    }
    let m = g.edge_count();
    let pairs = || (0..k).flat_map(|i| (0..n).map(move |v| (i, v)));
    let max_excess = |filter: &dyn Fn(VertexId) -> bool| {
        pairs()
            .filter(|&(_, v)| filter(v))
            .map(|(i, v)| (k * deg[i][v]).abs_diff(total[v]))
            .max()
            .unwrap_or(0)
    };
    let mut checks = Vec::new();
    for claim in claims {
        let check = match claim {
            Claim::DeviationBelow1 | Claim::DeviationBelow2 => {
                let bound = if *claim == Claim::DeviationBelow1 {
                    1
                } else {
                    2
                };
                let excess = max_excess(&|_| true);
                ClaimCheck {
                    claim: claim.id().into(),
                    bound: bound as f64,
                    measured: excess as f64 / k as f64,
                    pass: excess < bound * k,
                }
            }
            Claim::SizeWithinOne => {
                let excess = sizes
                    .iter()
                    .map(|&s| (k * s).abs_diff(m))
                    .max()
                    .unwrap_or(0);
                ClaimCheck {
                    claim: claim.id().into(),
                    bound: 1.0,
                    measured: excess as f64 / k as f64,
                    pass: excess < k,
                }
            }
            Claim::Parity => count_check(
                claim,
                pairs()
                    .filter(|&(i, v)| deg[i][v] % 2 != total[v] % 2)
                    .count(),
            ),
            Claim::Even => count_check(claim, pairs().filter(|&(i, v)| deg[i][v] % 2 == 1).count()),
            Claim::Regular => count_check(
                claim,
                pairs().filter(|&(i, v)| k * deg[i][v] != total[v]).count(),
            ),
            Claim::FParity(f) => {
                if f.len() != n {
                    return Err(Error::InvalidInput(
                        "parity map length differs from |V|".into(),
                    ));
                }
                count_check(
                    claim,
                    pairs()
                        .filter(|&(i, v)| (deg[i][v] % 2 == 1) != f[v])
                        .count(),
                )
            }
            Claim::Weighted(eps) => {
                if eps.len() != k {
                    return Err(Error::InvalidInput(format!(
                        "{} weights for {k} factors",
                        eps.len()
                    )));
                }
                let worst = pairs()
                    .map(|(i, v)| {
                        let (num, den) = distance(deg[i][v], eps[i], total[v]);
                        num as f64 / den as f64
                    })
                    .fold(0.0, f64::max);
                let pass = pairs().all(|(i, v)| {
                    let (num, den) = distance(deg[i][v], eps[i], total[v]);
                    num < 6 * den
                });
                ClaimCheck {
                    claim: claim.id().into(),
                    bound: 6.0,
                    measured: worst,
                    pass,
                }
            }
            Claim::RRegular(r) | Claim::RBounded(r) => {
                if r.len() != k {
                    return Err(Error::InvalidInput(format!(
                        "{} targets for {k} factors",
                        r.len()
                    )));
                }
                let exact = matches!(claim, Claim::RRegular(_));
                count_check(
                    claim,
                    pairs()
                        .filter(|&(i, v)| {
                            if exact {
                                deg[i][v] != r[i]
                            } else {
                                deg[i][v] > r[i]
                            }
                        })
                        .count(),
                )
            }
            Claim::Anstee => {
                let bad = pairs()
                    .filter(|&(i, v)| {
                        let d = total[v];
                        let lo = d / (2 * k) + (d + 1) / (2 * k);
                        let hi = d.div_ceil(2 * k) + d.saturating_sub(1).div_ceil(2 * k);
                        deg[i][v] < lo || deg[i][v] > hi
                    })
                    .count();
                count_check(claim, bad)
            }
            Claim::ZVariant(z) => {
                if *z >= n {
                    return Err(Error::InvalidInput(format!("vertex {z} out of range")));
                }
                let at_z = max_excess(&|v| v == *z);
                let rest = max_excess(&|v| v != *z);
                ClaimCheck {
                    claim: claim.id().into(),
                    bound: 1.0,
                    measured: rest as f64 / k as f64,
                    pass: at_z < 2 * k && rest < k,
                }
            }
            Claim::EpsilonWindow { eps, f, z } => {
                if f.len() != n {
                    return Err(Error::InvalidInput(
                        "parity map length differs from |V|".into(),
                    ));
                }
                let (num, den) = (*eps.numer() as usize, *eps.denom() as usize);
                let bad = (0..n)
                    .filter(|&v| {
                        let x = deg[0][v];
                        let d = total[v];
                        let lo = (num * d / den) as i64 - 1;
                        let hi = (num * d).div_ceil(den) + 1;
                        let side_ok = match z {
                            Some((zv, ZSide::AtLeast)) if *zv == v => x * den >= num * d,
                            Some((zv, ZSide::AtMost)) if *zv == v => x * den <= num * d,
                            _ => true,
                        };
                        (x % 2 == 1) != f[v] || (x as i64) < lo || x > hi || !side_ok
                    })
                    .count();
                count_check(claim, bad)
            }
            Claim::EvenEpsilon(eps) => {
                let worst = (0..n)
                    .map(|v| {
                        let (num, den) = distance(deg[0][v], *eps, total[v]);
                        num as f64 / den as f64
                    })
                    .fold(0.0, f64::max);
                let pass = (0..n).all(|v| {
                    let (num, den) = distance(deg[0][v], *eps, total[v]);
                    deg[0][v].is_multiple_of(2) && num < 2 * den
                });
                ClaimCheck {
                    claim: claim.id().into(),
                    bound: 2.0,
                    measured: worst,
                    pass,
                }
            }
        };
        checks.push(check);
    }
    let pass = checks.iter().all(|c| c.pass);
    Ok(VerificationReport { checks, pass })
}

/// Instance families for [`generate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    /// Odd order, degree `kr` except `k - 2` vertices of degree `kr + 1`.
    /// `r` must be odd. Has no equitable `k`-factorization.
    Observation {
        k: usize,
        r: usize,
        n: Option<usize>,
    },
    /// Random loopless `d`-regular multigraph.
    Regular {
        n: usize,
        d: usize,
    },
    /// Union of `c` random Hamiltonian cycles.
    EulerianCycles {
        n: usize,
        c: usize,
    },
    Multiplied {
        base: Box<Family>,
        times: usize,
    },
    Complete {
        n: usize,
    },
    Cycle {
        n: usize,
    },
}

/// Retry cap for the rejection step of the pairing model.
pub const REGULAR_RETRY_CAP: usize = 10_000;

impl Family {
    /// Reads `complete:7`, `cycle:5`, `observation:4,1[,n]`, `regular:10,3`,
    /// `eulerian_cycles:7,3` or `multiplied:<t>:<family>`.
    pub fn parse(text: &str) -> Result<Family> {
        let bad = || Error::InvalidInput(format!("cannot parse family {text:?}"));
        let (name, rest) = text.split_once(':').ok_or_else(bad)?;
        if name == "multiplied" {
            let (t, base) = rest.split_once(':').ok_or_else(bad)?;
            return Ok(Family::Multiplied {
                base: Box::new(Family::parse(base)?),
                times: t.trim().parse().map_err(|_| bad())?,
            });
        }
        let nums: Vec<usize> = rest
            .split(',')
            .map(|s| s.trim().parse())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| bad())?;
        Ok(match (name, nums.as_slice()) {
            ("complete", [n]) => Family::Complete { n: *n },
            ("cycle", [n]) => Family::Cycle { n: *n },
            ("observation", [k, r]) => Family::Observation {
                k: *k,
                r: *r,
                n: None,
            },
            ("observation", [k, r, n]) => Family::Observation {
                k: *k,
                r: *r,
                n: Some(*n),
            },
            ("regular", [n, d]) => Family::Regular { n: *n, d: *d },
            ("eulerian_cycles", [n, c]) => Family::EulerianCycles { n: *n, c: *c },
            _ => return Err(bad()),
        })
    }
}

/// Circulant graph on `n` vertices with the given offsets.
fn circulant(n: usize, offsets: impl IntoIterator<Item = usize>) -> Multigraph {
    let mut g = Multigraph::new(n);
    for s in offsets {
        for i in 0..n {
            g.push_unchecked(i, (i + s) % n);
        }
    }
    g
}

fn observation(k: usize, r: usize, n: Option<usize>) -> Result<Multigraph> {
    if k < 2 || r.is_multiple_of(2) {
        return Err(Error::InvalidInput(format!(
            "observation family needs k >= 2 and odd r, got k = {k}, r = {r}"
        )));
    }
    let kr = k * r;
    let smallest = {
        let base = (kr + 1).max(5);
        base + 1 - base % 2
    };
    let n = n.unwrap_or(smallest);
    if n.is_multiple_of(2) || n < smallest {
        return Err(Error::InvalidInput(format!(
            "observation family needs odd order at least {smallest}, got {n}"
        )));
    }
    if k.is_multiple_of(2) {
        let mut g = circulant(n, 1..=kr / 2);
        for j in 0..k / 2 - 1 {
            g.push_unchecked(2 * j, 2 * j + 1);
        }
        Ok(g)
    } else {
        // degree kr - 1, then +2 on the first k - 2 vertices, +1 elsewhere
        let mut g = circulant(n, 1..=(kr - 1) / 2);
        let special = k - 2;
        if special == 1 {
            g.push_unchecked(0, 0);
        } else {
            for i in 0..special {
                g.push_unchecked(i, (i + 1) % special);
            }
        }
        let mut v = special;
        while v < n {
            g.push_unchecked(v, v + 1);
            v += 2;
        }
        Ok(g)
    }
}

fn random_regular(n: usize, d: usize, rng: &mut ChaCha8Rng) -> Result<Multigraph> {
    if (n * d) % 2 == 1 {
        return Err(Error::InvalidInput(format!("d n = {} must be even", n * d)));
    }
    if d > 0 && n < 2 {
        return Err(Error::InvalidInput(
            "a loopless regular graph needs two vertices".into(),
        ));
    }
    let mut points: Vec<VertexId> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    for _ in 0..REGULAR_RETRY_CAP {
        points.shuffle(rng);
        if points.chunks(2).all(|p| p[0] != p[1]) {
            let mut g = Multigraph::new(n);
            for p in points.chunks(2) {
                g.push_unchecked(p[0], p[1]);
            }
            return Ok(g);
        }
    }
    Err(Error::Infeasible(format!(
        "pairing model produced loops in {REGULAR_RETRY_CAP} attempts (n = {n}, d = {d})"
    )))
}

/// Builds a member of `family`; random families are determined by `seed`.
pub fn generate(family: &Family, seed: u64) -> Result<Multigraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    generate_with(family, &mut rng)
}

fn generate_with(family: &Family, rng: &mut ChaCha8Rng) -> Result<Multigraph> {
    match family {
        Family::Observation { k, r, n } => observation(*k, *r, *n),
        Family::Regular { n, d } => random_regular(*n, *d, rng),
        Family::EulerianCycles { n, c } => {
            if *n == 0 {
                return Err(Error::InvalidInput("need at least one vertex".into()));
            }
            let mut g = Multigraph::new(*n);
            let mut order: Vec<VertexId> = (0..*n).collect();
            for _ in 0..*c {
                order.shuffle(rng);
                for i in 0..*n {
                    g.push_unchecked(order[i], order[(i + 1) % n]);
                }
            }
            Ok(g)
        }
        Family::Multiplied { base, times } => Ok(generate_with(base, rng)?.multiplied(*times)),
        Family::Complete { n } => Ok(Multigraph::complete(*n)),
        Family::Cycle { n } => {
            if *n == 0 {
                return Err(Error::InvalidInput("need at least one vertex".into()));
            }
            Ok(Multigraph::cycle(*n))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleQuestion {
    /// Is there a factorization with `|d_i(v) - d(v)/k| < 1`?
    Equitable { k: usize },
    /// Is there a factor meeting the parity spec?
    ParityGf(ParitySpec),
    /// Is there an orientation with `d+(v) = p(v) (mod k)`?
    Orientation(ResidueMap),
}

pub const EQUITABLE_ORACLE_BUDGET: u128 = 100_000_000;
pub const PARITY_ORACLE_EDGES: usize = 24;
pub const ORIENTATION_ORACLE_EDGES: usize = 20;

/// Exact answer by exhaustive enumeration, sharded over `jobs` threads.
pub fn oracle(g: &Multigraph, question: &OracleQuestion, jobs: usize) -> Result<bool> {
    let jobs = jobs.max(1);
    let m = g.edge_count();
    match question {
        OracleQuestion::Equitable { k } => {
            if *k == 0 {
                return Err(Error::InvalidParameter("k must be at least 1".into()));
            }
            let space = (*k as u128).checked_pow(m as u32).unwrap_or(u128::MAX);
            if space > EQUITABLE_ORACLE_BUDGET {
                return Err(Error::Undecided(format!(
                    "k^|E| = {k}^{m} exceeds the oracle budget {EQUITABLE_ORACLE_BUDGET}"
                )));
            }
            Ok(equitable_exists(g, *k, jobs))
        }
        OracleQuestion::ParityGf(spec) => {
            if spec.f().len() != g.vertex_count() {
                return Err(Error::InvalidInput(
                    "parity spec length differs from |V|".into(),
                ));
            }
            if m > PARITY_ORACLE_EDGES {
                return Err(Error::Undecided(format!(
                    "|E| = {m} exceeds the parity oracle limit {PARITY_ORACLE_EDGES}"
                )));
            }
            Ok(any_mask(m, jobs, |mask| {
                let mut deg = vec![0i64; g.vertex_count()];
                for (e, &(u, v)) in g.edges().iter().enumerate() {
                    if mask >> e & 1 == 1 {
                        deg[u] += 1;
                        deg[v] += 1;
                    }
                }
                (0..g.vertex_count()).all(|v| {
                    spec.g0()[v] <= deg[v]
                        && deg[v] <= spec.f0()[v]
                        && (deg[v] % 2 == 1) == spec.f()[v]
                })
            }))
        }
        OracleQuestion::Orientation(rm) => {
            if rm.residues().len() != g.vertex_count() {
                return Err(Error::InvalidInput(
                    "residue map length differs from |V|".into(),
                ));
            }
            if m > ORIENTATION_ORACLE_EDGES {
                return Err(Error::Undecided(format!(
                    "|E| = {m} exceeds the orientation oracle limit {ORIENTATION_ORACLE_EDGES}"
                )));
            }
            let k = rm.k();
            Ok(any_mask(m, jobs, |mask| {
                let mut out = vec![0usize; g.vertex_count()];
                for (e, &(u, v)) in g.edges().iter().enumerate() {
                    out[if mask >> e & 1 == 1 { v } else { u }] += 1;
                }
                out.iter().zip(rm.residues()).all(|(d, p)| d % k == *p)
            }))
        }
    }
}

/// Does some `mask < 2^m` satisfy `test`? Shards split the mask range.
fn any_mask(m: usize, jobs: usize, test: impl Fn(u64) -> bool + Sync) -> bool {
    let total: u64 = 1 << m;
    let found = AtomicBool::new(false);
    let shard = total.div_ceil(jobs as u64);
    std::thread::scope(|s| {
        for j in 0..jobs as u64 {
            let (found, test) = (&found, &test);
            s.spawn(move || {
                let end = ((j + 1) * shard).min(total);
                let mut mask = j * shard;
                while mask < end {
                    if mask.is_multiple_of(4096) && found.load(Ordering::Relaxed) {
                        return;
                    }
                    if test(mask) {
                        found.store(true, Ordering::Relaxed);
                        return;
                    }
                    mask += 1;
                }
            });
        }
    });
    found.into_inner()
}

struct EquitableSearch<'a> {
    g: &'a Multigraph,
    k: usize,
    lo: Vec<usize>,
    hi: Vec<usize>,
    count: Vec<Vec<usize>>,
    /// incidences of each vertex among edges not yet assigned
    rest: Vec<usize>,
    stop: &'a AtomicBool,
}

impl EquitableSearch<'_> {
    /// Can every factor at `v` still reach `lo[v]`?
    fn reachable(&self, v: VertexId) -> bool {
        let missing: usize = self.count[v]
            .iter()
            .map(|&c| self.lo[v].saturating_sub(c))
            .sum();
        missing <= self.rest[v]
    }

    fn place(&mut self, e: usize, i: usize) -> bool {
        let (u, v) = self.g.endpoints(e);
        self.count[u][i] += 1;
        self.count[v][i] += 1;
        self.rest[u] -= 1;
        self.rest[v] -= 1;
        self.count[u][i] <= self.hi[u]
            && self.count[v][i] <= self.hi[v]
            && self.reachable(u)
            && self.reachable(v)
    }

    fn unplace(&mut self, e: usize, i: usize) {
        let (u, v) = self.g.endpoints(e);
        self.count[u][i] -= 1;
        self.count[v][i] -= 1;
        self.rest[u] += 1;
        self.rest[v] += 1;
    }

    /// `used`: colors already in play; a new edge may open at most one more.
    fn run(&mut self, e: usize, used: usize) -> bool {
        if self.stop.load(Ordering::Relaxed) {
            return false;
        }
        if e == self.g.edge_count() {
            return true;
        }
        for i in 0..(used + 1).min(self.k) {
            let ok = self.place(e, i);
            if ok && self.run(e + 1, used.max(i + 1)) {
                return true;
            }
            self.unplace(e, i);
        }
        false
    }
}

/// Backtracking over factor assignments with factor symmetry broken by
/// first use; shards fix the first edges' assignment.
fn equitable_exists(g: &Multigraph, k: usize, jobs: usize) -> bool {
    let d = g.degrees();
    let lo: Vec<usize> = d.iter().map(|&x| x / k).collect();
    let hi: Vec<usize> = d.iter().map(|&x| x.div_ceil(k)).collect();
    let stop = AtomicBool::new(false);
    let fresh = || EquitableSearch {
        g,
        k,
        lo: lo.clone(),
        hi: hi.clone(),
        count: vec![vec![0; k]; g.vertex_count()],
        rest: d.clone(),
        stop: &stop,
    };
    if jobs == 1 || g.edge_count() < 2 {
        return fresh().run(0, 0);
    }
    // prefixes of the first two edges in canonical form
    let prefixes: Vec<(usize, usize)> = (0..k.min(2)).map(|b| (0, b)).collect();
    let found = AtomicBool::new(false);
    std::thread::scope(|s| {
        for chunk in prefixes.chunks(prefixes.len().div_ceil(jobs)) {
            let (found, stop, fresh) = (&found, &stop, &fresh);
            s.spawn(move || {
                for &(a, b) in chunk {
                    let mut search = fresh();
                    if search.place(0, a) && search.place(1, b) && search.run(2, a.max(b) + 1) {
                        found.store(true, Ordering::Relaxed);
                        stop.store(true, Ordering::Relaxed);
                        return;
                    }
                }
            });
        }
    });
    found.into_inner()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Factorization;

    #[test]
    fn verify_examples() {
        let k7 = Multigraph::complete(7);
        let fz = crate::pipelines::regular_factorize(&k7, 3)
            .unwrap()
            .factorization;
        let rep = verify(&k7, &fz, &[Claim::DeviationBelow1, Claim::SizeWithinOne]).unwrap();
        assert!(rep.pass);

        // C5 edges 0..5 split as (3, 2): vertex with d_i = 2 has deviation 1
        let c5 = Multigraph::cycle(5);
        let fz = Factorization::new(&c5, 2, vec![0, 0, 0, 1, 1]).unwrap();
        let rep = verify(&c5, &fz, &[Claim::DeviationBelow1]).unwrap();
        assert!(!rep.pass);
        assert_eq!(rep.checks[0].measured, 1.0);

        let rep = verify(&c5, &fz, &[]).unwrap();
        assert!(rep.pass && rep.checks.is_empty());
    }

    #[test]
    fn claims_parse() {
        let params = ClaimParams::default();
        assert_eq!(
            Claim::parse("size±1", &params).unwrap(),
            Claim::SizeWithinOne
        );
        assert!(matches!(
            Claim::parse("bogus", &params),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(
            Claim::parse("f-parity", &params),
            Err(Error::InvalidInput(_))
        ));
        for id in CLAIM_IDS {
            let full = ClaimParams {
                f: Some(vec![]),
                eps: Some(Fraction::new(1, 2)),
                eps_list: Some(vec![]),
                r_list: Some(vec![]),
                z: Some(0),
                z_side: None,
            };
            assert_eq!(Claim::parse(id, &full).unwrap().id(), *id);
        }
    }

    #[test]
    fn generator_examples() {
        let c5 = generate(
            &Family::Observation {
                k: 2,
                r: 1,
                n: None,
            },
            0,
        )
        .unwrap();
        assert_eq!(c5.vertex_count(), 5);
        assert_eq!(c5.degrees(), vec![2; 5]);
        assert!(c5.is_connected());

        let g = generate(
            &Family::Multiplied {
                base: Box::new(Family::Complete { n: 4 }),
                times: 3,
            },
            0,
        )
        .unwrap();
        assert_eq!(g.degrees(), vec![9; 4]);

        let g = generate(&Family::EulerianCycles { n: 7, c: 3 }, 5).unwrap();
        assert_eq!(g.degrees(), vec![6; 7]);
        assert!(g.is_eulerian());

        let g = generate(&Family::Regular { n: 10, d: 3 }, 1).unwrap();
        assert_eq!(g.degrees(), vec![3; 10]);
        assert!(!g.has_loops());
        assert_eq!(g, generate(&Family::Regular { n: 10, d: 3 }, 1).unwrap());
        assert!(generate(&Family::Regular { n: 5, d: 3 }, 1).is_err());
    }

    #[test]
    fn observation_degrees() {
        for (k, r) in [(2, 1), (3, 1), (4, 1), (5, 1), (3, 3), (6, 1)] {
            let g = generate(&Family::Observation { k, r, n: None }, 0).unwrap();
            assert_eq!(g.vertex_count() % 2, 1);
            let high = g.degrees().iter().filter(|&&d| d == k * r + 1).count();
            let regular = g.degrees().iter().filter(|&&d| d == k * r).count();
            assert_eq!(
                (high, regular),
                (k - 2, g.vertex_count() - (k - 2)),
                "k = {k}, r = {r}"
            );
        }
        assert!(generate(
            &Family::Observation {
                k: 2,
                r: 2,
                n: None
            },
            0
        )
        .is_err());
    }

    #[test]
    fn family_parse() {
        assert_eq!(
            Family::parse("complete:7").unwrap(),
            Family::Complete { n: 7 }
        );
        assert_eq!(
            Family::parse("multiplied:3:complete:4").unwrap(),
            Family::Multiplied {
                base: Box::new(Family::Complete { n: 4 }),
                times: 3
            }
        );
        assert_eq!(
            Family::parse("observation:4,1").unwrap(),
            Family::Observation {
                k: 4,
                r: 1,
                n: None
            }
        );
        assert!(Family::parse("nothing").is_err());
    }

    #[test]
    fn oracle_examples() {
        let c5 = Multigraph::cycle(5);
        assert!(!oracle(&c5, &OracleQuestion::Equitable { k: 2 }, 1).unwrap());
        let k5 = Multigraph::complete(5);
        assert!(oracle(&k5, &OracleQuestion::Equitable { k: 2 }, 1).unwrap());
        assert!(oracle(&k5, &OracleQuestion::Equitable { k: 2 }, 4).unwrap());
        let tri = Multigraph::cycle(3);
        let rm = ResidueMap::zero(2, 3).unwrap();
        assert!(!oracle(&tri, &OracleQuestion::Orientation(rm), 2).unwrap());
        let big = Multigraph::complete(8);
        assert!(matches!(
            oracle(&big, &OracleQuestion::Equitable { k: 3 }, 1),
            Err(Error::Undecided(_))
        ));
    }
}

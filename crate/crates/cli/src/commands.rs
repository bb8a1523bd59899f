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

//! Subcommand implementations. Each returns the text for standard output
//! and the exit status.

use equifactor::coloring::anstee_decomposition;
use equifactor::connectivity::analyze;
use equifactor::error::{Error, ErrorKind, Result};
use equifactor::graph::{Factorization, Multigraph, Orientation, VertexId};
use equifactor::io::{parse_graph, read_graph_file, write_graph};
use equifactor::lab::{generate, oracle, verify, Claim, ClaimParams, Family, OracleQuestion};
use equifactor::orientation::{
    balanced_mod_k_orientation_with_budget, eulerian_orientation, mod_k_orientation_with_budget,
    ResidueMap, SearchBudget,
};
use equifactor::parity::{
    epsilon_parity_factor, even_factor_eps, hilton_even_factorization, parse_fraction,
    weighted_even_factorization, EpsilonOptions, Fraction, ParitySpec, ZSide,
};
use equifactor::pipelines::{
    equitable_factorize, parity_factorize_with_budget, regular_factorize_with_budget,
    regular_split_with_budget, three_factor_criterion_with_budget, EquitableRequest, Hypothesis,
    Steering, ThreeFactorOutcome,
};
use equifactor::report::FactorizationReport;
use serde_json::json;

use crate::{
    AnalyzeArgs, Command, EvenFactorArgs, FactorArgs, Format, GenArgs, InputArgs, Mode, OracleArgs,
    OrientArgs, ParityFactorArgs, Question, VerifyArgs, ZSideArg,
};

pub struct Outcome {
    pub stdout: String,
    pub status: u8,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, status: 0 }
    }
}

pub fn exit_code(err: &Error) -> u8 {
    match err.kind() {
        ErrorKind::Infeasible => 1,
        ErrorKind::Invalid => 2,
        ErrorKind::Undecided => 3,
    }
}

pub fn run(command: &Command) -> Result<Outcome> {
    match command {
        Command::Analyze(a) => run_analyze(a),
        Command::Orient(a) => run_orient(a),
        Command::Factor(a) => run_factor(a),
        Command::ParityFactor(a) => run_parity_factor(a),
        Command::EvenFactor(a) => run_even_factor(a),
        Command::Verify(a) => run_verify(a),
        Command::Gen(a) => run_gen(a),
        Command::Oracle(a) => run_oracle(a),
    }
}

fn load(input: &InputArgs) -> Result<Multigraph> {
    match (&input.input, &input.family) {
        (Some(path), None) if path.as_os_str() == "-" => {
            let mut text = String::new();
            std::io::Read::read_to_string(&mut std::io::stdin(), &mut text)
                .map_err(|e| Error::InvalidInput(format!("cannot read standard input: {e}")))?;
            parse_graph(&text)
        }
        (Some(path), None) => read_graph_file(path),
        (None, Some(family)) => generate(&Family::parse(family)?, input.seed),
        (Some(_), Some(_)) => Err(Error::InvalidInput(
            "give either an input file or --family, not both".into(),
        )),
        (None, None) => Err(Error::InvalidInput(
            "an input file or --family is required".into(),
        )),
    }
}

fn vertex_flags(g: &Multigraph, list: &[VertexId]) -> Result<Vec<bool>> {
    let mut flags = vec![false; g.vertex_count()];
    for &v in list {
        if v >= g.vertex_count() {
            return Err(Error::InvalidInput(format!("vertex {v} out of range")));
        }
        flags[v] = true;
    }
    Ok(flags)
}

fn budget(nodes: Option<u64>) -> SearchBudget {
    nodes.map_or_else(SearchBudget::default, |nodes| SearchBudget { nodes })
}

fn need_k(k: Option<usize>) -> Result<usize> {
    k.ok_or_else(|| Error::InvalidInput("--k is required".into()))
}

fn z_side(arg: ZSideArg) -> ZSide {
    match arg {
        ZSideArg::AtLeast => ZSide::AtLeast,
        ZSideArg::AtMost => ZSide::AtMost,
    }
}

fn fractions(list: &[String]) -> Result<Vec<Fraction>> {
    list.iter().map(|s| parse_fraction(s)).collect()
}

fn pretty(value: serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(&value).expect("json value serializes");
    s.push('\n');
    s
}

fn run_analyze(args: &AnalyzeArgs) -> Result<Outcome> {
    let g = load(&args.input)?;
    let report = analyze(&g);
    let text = match args.format.unwrap_or(Format::Text) {
        Format::Json => pretty(serde_json::to_value(&report).expect("report serializes")),
        Format::Text => {
            let tree = report
                .tree_connectivity
                .map_or_else(|| "undefined".to_string(), |t| t.to_string());
            format!(
                "vertices={}\nedges={}\nλ={}\nodd-λ={}\ntree-connectivity={}\n",
                g.vertex_count(),
                g.edge_count(),
                report.lambda,
                report.odd_lambda,
                tree
            )
        }
    };
    Ok(Outcome::ok(text))
}

fn orientation_output(o: &Orientation, format: Format) -> String {
    match format {
        Format::Json => pretty(json!({
            "arcs": o.arcs(),
            "out_degrees": o.out_degrees(),
            "in_degrees": o.in_degrees(),
        })),
        Format::Text => o
            .arcs()
            .iter()
            .map(|(t, h)| format!("a {t} {h}\n"))
            .collect(),
    }
}

fn run_orient(args: &OrientArgs) -> Result<Outcome> {
    let g = load(&args.input)?;
    let budget = budget(args.budget);
    let o = match (args.k, args.balanced) {
        (None, false) => eulerian_orientation(&g)?,
        (None, true) => return Err(Error::InvalidInput("--balanced needs --k".into())),
        (Some(k), true) => {
            if args.p.is_some() {
                return Err(Error::InvalidInput(
                    "--p and --balanced are exclusive".into(),
                ));
            }
            balanced_mod_k_orientation_with_budget(&g, k, args.f.as_deref(), budget)?
        }
        (Some(k), false) => {
            if args.f.is_some() {
                return Err(Error::InvalidInput("--f applies to --balanced only".into()));
            }
            let p = args.p.clone().unwrap_or_else(|| vec![0; g.vertex_count()]);
            mod_k_orientation_with_budget(&g, &ResidueMap::new(k, p)?, budget)?
        }
    };
    Ok(Outcome::ok(orientation_output(
        &o,
        args.format.unwrap_or(Format::Json),
    )))
}

fn factorization_output(
    g: &Multigraph,
    fz: &Factorization,
    claims: &[Claim],
    hypotheses: &[Hypothesis],
    format: Format,
) -> Result<Outcome> {
    let audit = verify(g, fz, claims)?;
    let report = FactorizationReport::new(fz, &audit, hypotheses);
    let stdout = match format {
        Format::Json => report.to_json() + "\n",
        Format::Text => {
            let mut s = format!("k={}\n", report.k);
            for (i, f) in report.factors.iter().enumerate() {
                let ids: Vec<String> = f.edges.iter().map(|e| e.to_string()).collect();
                s.push_str(&format!("factor {i}: {}\n", ids.join(" ")));
            }
            for (claim, a) in &report.audit {
                let verdict = if a.pass { "pass" } else { "FAIL" };
                s.push_str(&format!(
                    "{claim}: measured {} bound {} {verdict}\n",
                    a.measured, a.bound
                ));
            }
            for h in hypotheses.iter().filter(|h| !h.holds) {
                s.push_str(&format!("hypothesis not satisfied: {}\n", h.statement));
            }
            s
        }
    };
    let status = if audit.pass { 0 } else { 1 };
    Ok(Outcome { stdout, status })
}

fn run_factor(args: &FactorArgs) -> Result<Outcome> {
    let g = load(&args.input)?;
    let format = args.format.unwrap_or(Format::Json);
    let budget = budget(args.budget);
    let steering_flags = args.z.is_some() || args.z_set.is_some();
    if args.mode != Mode::Equitable && steering_flags {
        return Err(Error::InvalidInput(
            "--z and --Z apply to equitable mode only".into(),
        ));
    }
    if args.mode != Mode::Parity && args.f.is_some() {
        return Err(Error::InvalidInput(
            "--f applies to parity mode only".into(),
        ));
    }
    if args.mode != Mode::Regular && (args.r_list.is_some() || args.bounded) {
        return Err(Error::InvalidInput(
            "--r-list and --bounded apply to regular mode only".into(),
        ));
    }
    match args.mode {
        Mode::Equitable => {
            let k = need_k(args.k)?;
            let steering = match (args.z, &args.z_set) {
                (Some(_), Some(_)) => {
                    return Err(Error::InvalidInput("--z and --Z are exclusive".into()))
                }
                (Some(z), None) => Steering::Vertex(z),
                (None, Some(set)) => Steering::Set(set.clone()),
                (None, None) => Steering::Auto,
            };
            let req = EquitableRequest {
                k,
                steering,
                budget,
            };
            let rep = equitable_factorize(&g, &req)?;
            let claims = match rep.steering {
                Some(Steering::Vertex(z)) => vec![Claim::ZVariant(z), Claim::SizeWithinOne],
                _ => vec![Claim::DeviationBelow1, Claim::SizeWithinOne],
            };
            factorization_output(&g, &rep.factorization, &claims, &rep.hypotheses, format)
        }
        Mode::Parity => {
            let k = need_k(args.k)?;
            let f = args
                .f
                .as_ref()
                .map(|list| vertex_flags(&g, list))
                .transpose()?;
            let rep = parity_factorize_with_budget(&g, k, f.as_deref(), budget)?;
            let parity = match f {
                Some(f) => Claim::FParity(f),
                None => Claim::Parity,
            };
            let claims = [parity, Claim::DeviationBelow2];
            factorization_output(&g, &rep.factorization, &claims, &rep.hypotheses, format)
        }
        Mode::Regular => {
            let k = need_k(args.k)?;
            match &args.r_list {
                Some(r) => {
                    let split = regular_split_with_budget(&g, r, k, args.bounded, budget)?;
                    let claim = if args.bounded {
                        Claim::RBounded(r.clone())
                    } else {
                        Claim::RRegular(r.clone())
                    };
                    factorization_output(
                        &g,
                        &split.factorization,
                        &[claim],
                        &split.hypotheses,
                        format,
                    )
                }
                None => {
                    let rep = regular_factorize_with_budget(&g, k, budget)?;
                    let claims = [Claim::Regular, Claim::SizeWithinOne];
                    factorization_output(&g, &rep.factorization, &claims, &rep.hypotheses, format)
                }
            }
        }
        Mode::Anstee => {
            let k = need_k(args.k)?;
            let fz = anstee_decomposition(&g, k)?;
            factorization_output(&g, &fz, &[Claim::Anstee, Claim::SizeWithinOne], &[], format)
        }
        Mode::ThreeFactor => {
            if args.k.is_some_and(|k| k != 3) {
                return Err(Error::InvalidInput("three-factor mode has k = 3".into()));
            }
            let (outcome, hypotheses) = three_factor_criterion_with_budget(&g, budget)?;
            match outcome {
                ThreeFactorOutcome::Decomposable(rep) => {
                    let claims = [Claim::DeviationBelow1, Claim::SizeWithinOne];
                    factorization_output(&g, &rep.factorization, &claims, &hypotheses, format)
                }
                ThreeFactorOutcome::Impossible {
                    vertex,
                    explanation,
                } => {
                    let stdout = match format {
                        Format::Json => pretty(json!({
                            "decomposable": false,
                            "vertex": vertex,
                            "explanation": explanation,
                        })),
                        Format::Text => format!("impossible: {explanation}\n"),
                    };
                    Ok(Outcome { stdout, status: 1 })
                }
            }
        }
    }
}

/// `F` and its complement as a 2-factorization.
fn with_complement(g: &Multigraph, factor: &[usize]) -> Result<Factorization> {
    let mut assignment = vec![1; g.edge_count()];
    for &e in factor {
        assignment[e] = 0;
    }
    Factorization::new(g, 2, assignment)
}

fn run_parity_factor(args: &ParityFactorArgs) -> Result<Outcome> {
    let g = load(&args.input)?;
    let f = vertex_flags(&g, args.f.as_deref().unwrap_or(&[]))?;
    let eps = match &args.epsilon {
        Some(text) => parse_fraction(text)?,
        None => Fraction::new(1, 2),
    };
    let z = match (args.z, args.z_side) {
        (Some(z), Some(side)) => Some((z, z_side(side))),
        (None, None) => None,
        _ => return Err(Error::InvalidInput("--z and --z-side go together".into())),
    };
    let options = EpsilonOptions {
        z,
        tight: args.tight.clone().unwrap_or_default(),
    };
    let out = epsilon_parity_factor(&g, &f, eps, &options)?;
    let fz = with_complement(&g, &out.edges)?;
    let claims = [Claim::EpsilonWindow { eps, f, z }];
    factorization_output(
        &g,
        &fz,
        &claims,
        &out.hypotheses,
        args.format.unwrap_or(Format::Json),
    )
}

fn run_even_factor(args: &EvenFactorArgs) -> Result<Outcome> {
    let g = load(&args.input)?;
    let format = args.format.unwrap_or(Format::Json);
    if let Some(text) = &args.epsilon {
        let eps = parse_fraction(text)?;
        let factor = even_factor_eps(&g, eps)?;
        let fz = with_complement(&g, &factor)?;
        return factorization_output(&g, &fz, &[Claim::EvenEpsilon(eps)], &[], format);
    }
    if let Some(k) = args.k {
        let fz = hilton_even_factorization(&g, k)?;
        return factorization_output(&g, &fz, &[Claim::Even, Claim::DeviationBelow2], &[], format);
    }
    if let Some(list) = &args.epsilons {
        let eps = fractions(list)?;
        let fz = weighted_even_factorization(&g, &eps)?;
        return factorization_output(&g, &fz, &[Claim::Even, Claim::Weighted(eps)], &[], format);
    }
    Err(Error::InvalidInput(
        "give one of --epsilon, --k or --epsilons".into(),
    ))
}

fn run_verify(args: &VerifyArgs) -> Result<Outcome> {
    let g = load(&args.input)?;
    let text = std::fs::read_to_string(&args.factorization).map_err(|e| {
        Error::InvalidInput(format!("cannot read {}: {e}", args.factorization.display()))
    })?;
    let report = FactorizationReport::from_json(&text)?;
    let fz = report.to_factorization(&g)?;
    let params = ClaimParams {
        f: args
            .f
            .as_ref()
            .map(|list| vertex_flags(&g, list))
            .transpose()?,
        eps: args.epsilon.as_deref().map(parse_fraction).transpose()?,
        eps_list: args.epsilons.as_deref().map(fractions).transpose()?,
        r_list: args.r_list.clone(),
        z: args.z,
        z_side: args.z_side.map(z_side),
    };
    let claims: Vec<Claim> = args
        .claims
        .iter()
        .map(|id| Claim::parse(id, &params))
        .collect::<Result<_>>()?;
    let result = verify(&g, &fz, &claims)?;
    let stdout = match args.format.unwrap_or(Format::Json) {
        Format::Json => pretty(serde_json::to_value(&result).expect("report serializes")),
        Format::Text => {
            let mut s = String::new();
            for c in &result.checks {
                let verdict = if c.pass { "pass" } else { "FAIL" };
                s.push_str(&format!(
                    "{}: measured {} bound {} {verdict}\n",
                    c.claim, c.measured, c.bound
                ));
            }
            s.push_str(if result.pass {
                "overall: pass\n"
            } else {
                "overall: FAIL\n"
            });
            s
        }
    };
    Ok(Outcome {
        stdout,
        status: if result.pass { 0 } else { 1 },
    })
}

fn run_gen(args: &GenArgs) -> Result<Outcome> {
    let g = generate(&Family::parse(&args.family)?, args.seed)?;
    let stdout = match args.format.unwrap_or(Format::Text) {
        Format::Text => write_graph(&g),
        Format::Json => pretty(json!({ "n": g.vertex_count(), "edges": g.edges() })),
    };
    Ok(Outcome::ok(stdout))
}

fn run_oracle(args: &OracleArgs) -> Result<Outcome> {
    let g = load(&args.input)?;
    let n = g.vertex_count();
    let question = match args.question {
        Question::Equitable => OracleQuestion::Equitable { k: need_k(args.k)? },
        Question::Orientation => {
            let k = need_k(args.k)?;
            let p = args.p.clone().unwrap_or_else(|| vec![0; n]);
            OracleQuestion::Orientation(ResidueMap::new(k, p)?)
        }
        Question::Parity => {
            let f = vertex_flags(&g, args.f.as_deref().unwrap_or(&[]))?;
            let g0 = args
                .g0
                .clone()
                .unwrap_or_else(|| f.iter().map(|&b| b as i64).collect());
            let f0 = args.f0.clone().unwrap_or_else(|| {
                let d = g.degrees();
                (0..n)
                    .map(|v| d[v] as i64 - ((d[v] % 2 == 1) != f[v]) as i64)
                    .collect()
            });
            OracleQuestion::ParityGf(ParitySpec::new(f, g0, f0)?)
        }
    };
    let answer = oracle(&g, &question, args.jobs)?;
    let stdout = match args.format.unwrap_or(Format::Text) {
        Format::Text => format!("{answer}\n"),
        Format::Json => pretty(json!({ "answer": answer })),
    };
    Ok(Outcome {
        stdout,
        status: if answer { 0 } else { 1 },
    })
}

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

//! JSON factorization reports.
//!
//! The layout is published as a JSON schema in
//! `schema/factorization.schema.json`; [`FACTORIZATION_SCHEMA`] embeds it.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Factorization, Multigraph};
use crate::lab::VerificationReport;
use crate::pipelines::Hypothesis;

pub const FACTORIZATION_SCHEMA: &str = include_str!("../schema/factorization.schema.json");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AuditEntry {
    pub bound: f64,
    pub measured: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorEdges {
    pub edges: Vec<EdgeId>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorizationReport {
    pub k: usize,
    pub factors: Vec<FactorEdges>,
    pub audit: BTreeMap<String, AuditEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub hypotheses: Vec<Hypothesis>,
}

impl FactorizationReport {
    pub fn new(fz: &Factorization, audit: &VerificationReport, hypotheses: &[Hypothesis]) -> Self {
        FactorizationReport {
            k: fz.k(),
            factors: fz
                .all_factor_edges()
                .into_iter()
                .map(|edges| FactorEdges { edges })
                .collect(),
            audit: audit
                .checks
                .iter()
                .map(|c| {
                    let entry = AuditEntry {
                        bound: c.bound,
                        measured: c.measured,
                        pass: c.pass,
                    };
                    (c.claim.clone(), entry)
                })
                .collect(),
            hypotheses: hypotheses.to_vec(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Strict parse: unknown fields are rejected.
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| Error::InvalidInput(format!("malformed report: {e}")))
    }

    /// Rebuilds the factorization, checking that the factor edge lists
    /// partition the edge ids of `g`.
    pub fn to_factorization(&self, g: &Multigraph) -> Result<Factorization> {
        if self.factors.len() != self.k {
            return Err(Error::InvalidInput(format!(
                "report lists {} factors for k = {}",
                self.factors.len(),
                self.k
            )));
        }
        let lists: Vec<Vec<EdgeId>> = self.factors.iter().map(|f| f.edges.clone()).collect();
        Factorization::from_factor_edges(g, &lists)
    }

    pub fn all_pass(&self) -> bool {
        self.audit.values().all(|a| a.pass)
    }
}

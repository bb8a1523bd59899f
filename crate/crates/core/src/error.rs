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

use std::fmt;

use crate::graph::VertexId;

/// Witness that a prescribed out-degree plan cannot be realized.
///
/// `deficient` is a vertex set `A` with `sum_{v in A} o(v) < |E(G[A])|`;
/// `overloaded` is its complement, where the plan asks for more out-arcs
/// than the edges touching it can supply.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HakimiCertificate {
    pub deficient: Vec<VertexId>,
    pub overloaded: Vec<VertexId>,
}

impl fmt::Display for HakimiCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "deficient set {:?}, overloaded set {:?}",
            self.deficient, self.overloaded
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid query: {0}")]
    InvalidQuery(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("vertex {vertex} has odd degree {degree}")]
    OddDegree { vertex: VertexId, degree: usize },
    #[error("edge {edge} is a loop")]
    LoopEdge { edge: usize },
    #[error("residue obstruction: sum of p is {sum} but |E| = {edges} (mod {k})")]
    ResidueObstruction { sum: usize, edges: usize, k: usize },
    #[error("out-degree plan is not realizable: {0}")]
    HakimiViolation(HakimiCertificate),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("undecided (search budget exhausted): {0}")]
    Undecided(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Coarse classification used for exit codes and reporting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Invalid,
    Infeasible,
    Undecided,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::ResidueObstruction { .. } | Error::HakimiViolation(_) | Error::Infeasible(_) => {
                ErrorKind::Infeasible
            }
            Error::Undecided(_) => ErrorKind::Undecided,
            _ => ErrorKind::Invalid,
        }
    }

    pub(crate) fn with_context(self, context: &str) -> Self {
        if context.is_empty() {
            return self;
        }
        match self {
            Error::Infeasible(m) => Error::Infeasible(format!("{m}; {context}")),
            Error::Undecided(m) => Error::Undecided(format!("{m}; {context}")),
            other => other,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

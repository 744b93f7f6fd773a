//! Discrete Bayesian networks: BIF input and output, forward sampling,
//! graph types, d-separation and CPDAG construction.

mod bif;
mod dataset;
mod dsep;
mod graph;
mod net;
mod sample;
mod tile;

pub use bif::{parse_bif, to_bif};
pub use dataset::Dataset;
pub use dsep::d_separated;
pub use graph::{dag_to_cpdag, Cpdag, Dag, EdgeKind, Pdag};
pub use net::{Cpt, DiscreteBayesNet, Variable, ROW_SUM_TOLERANCE};
pub use sample::forward_sample;
pub use tile::tile_network;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum BnError {
    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("invalid network: {0}")]
    Invalid(String),
    #[error("parent graph contains a cycle")]
    Cyclic,
    #[error("unknown node {0}")]
    UnknownNode(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl BnError {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        BnError::Parse { line, column, message: message.into() }
    }
}

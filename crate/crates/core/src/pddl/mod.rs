//! PDDL front end for the STRIPS fragment: `:strips`, `:typing`,
//! `:action-costs`, and the `=` predicate. Everything else is rejected
//! loudly rather than silently mis-parsed.

mod ast;
mod ground;
mod lexer;
mod parser;

pub use ast::*;
pub use ground::{ground, GroundOptions};
pub use parser::{parse_domain, parse_problem, print_domain, print_problem};

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PddlError {
    #[error("line {line}, col {col}: {msg}")]
    At { line: u32, col: u32, msg: String },
    #[error("unsupported requirement {req} (supported: :strips, :typing, :action-costs, :equality)")]
    UnsupportedRequirement { req: String },
    #[error("{0}")]
    Ground(String),
}

impl PddlError {
    pub(crate) fn at(pos: (u32, u32), msg: impl Into<String>) -> Self {
        PddlError::At { line: pos.0, col: pos.1, msg: msg.into() }
    }
}

use thiserror::Error;

use crate::graph::Vertex;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: Vertex, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("vertex {0} appears more than once")]
    DuplicateVertex(Vertex),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("vertices {first} and {second} share position {position}")]
    DuplicatePosition { first: Vertex, second: Vertex, position: i64 },
    #[error("layout covers {got} vertices, graph has {expected}")]
    LayoutSize { expected: usize, got: usize },
}

/// Why a graph is not a block caterpillar.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Rejection {
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph is empty")]
    Empty,
    #[error("block {block:?} is not a clique")]
    NotBlockGraph { block: Vec<Vertex> },
    #[error("deleting leaves does not leave a block path: {reason}")]
    SpineNotPath { reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DensityError {
    #[error("graph has {n} vertices, brute force is capped at {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("structure does not match graph: {0}")]
    Mismatch(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LayoutError {
    #[error(transparent)]
    Rejected(#[from] Rejection),
    #[error("local density {beta} exceeds the target bandwidth {m}")]
    DensityExceeds { beta: usize, m: usize },
    #[error("structure is not anchored")]
    NotAnchored,
    #[error(transparent)]
    Density(#[from] DensityError),
    #[error("internal construction failure: {0}")]
    Internal(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GadgetError {
    #[error("parameter {name} = {value} is invalid: {requirement}")]
    Parameter {
        name: &'static str,
        value: usize,
        requirement: &'static str,
    },
    #[error("invalid schedule: {0}")]
    Schedule(String),
    #[error("layout does not encode a schedule: {0}")]
    Extraction(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
#[non_exhaustive]
pub enum Error {
    #[error("a topology needs at least 2 nodes, got {0}")]
    TooFewNodes(usize),
    #[error("node {index} has a non-finite coordinate")]
    NonFiniteCoordinate { index: usize },
    #[error("{name} must be a positive finite number, got {value}")]
    NotPositive { name: &'static str, value: f64 },
    #[error("{name} must lie in [0, 1], got {value}")]
    ProbabilityOutOfRange { name: &'static str, value: f64 },
    #[error("source {source_id} is not a node of a {nodes}-node topology")]
    InvalidSource { source_id: usize, nodes: usize },
    #[error("probability list must be non-empty and sorted ascending")]
    UnsortedProbabilities,
    #[error("speed is zero: the pause time is undefined, set the snapshot count explicitly")]
    ZeroSpeed,
    #[error("cannot aggregate an empty sample")]
    EmptySample,
    #[error("relative change is undefined for a zero noiseless value")]
    UndefinedRelativeChange,
    #[error("source sample of {sample} exceeds the {nodes} available nodes")]
    SampleTooLarge { sample: usize, nodes: usize },
    #[error("oracle supports at most {max_nodes} nodes and {max_links} directed links, got {nodes} and {links}")]
    OracleTooLarge {
        nodes: usize,
        links: usize,
        max_nodes: usize,
        max_links: usize,
    },
}

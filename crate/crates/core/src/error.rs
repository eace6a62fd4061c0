use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("cannot parse {0:?}: {1}")]
    Parse(String, String),

    #[error("{0} is not contained in {1}")]
    NotComparable(String, String),

    #[error("interval rank {0} is below the minimum {1} required by this test")]
    RankTooSmall(usize, usize),

    #[error("invalid embedding partition: {0}")]
    InvalidPartition(String),

    #[error("letter {0} does not belong to the alphabet")]
    AlphabetMismatch(u32),

    #[error("chain is not maximal: {0}")]
    NonMaximalChain(String),

    #[error("order complex exceeds the face cap ({faces} faces > {cap})")]
    ComplexTooLarge { faces: usize, cap: usize },

    #[error("{0} is not a layered permutation")]
    NotLayered(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown action `{0}`")]
    UnknownAction(String),
    #[error("operation requires a clock-free automaton, `{0}` declares clocks")]
    ClockedInput(String),
    #[error("determinism is undefined in the presence of silent edges")]
    EpsilonDeterminism,
    #[error("`{0}` is outside the decidable class: its restriction by the high alphabet is not deterministic")]
    OutsideDecidableClass(String),
    #[error("monitor completion requires a deterministic, silent-free automaton: {0}")]
    NondeterministicMonitor(String),
    #[error("zone dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("inclusion gadget requires a deterministic first automaton")]
    NondeterministicGadgetInput,
    #[error("analysis cancelled")]
    Cancelled,
    #[error("model is not well-formed: {0}")]
    InvalidModel(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

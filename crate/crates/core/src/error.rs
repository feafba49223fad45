use alloc::string::String;

/// Errors raised by game construction, transforms and the analyses built on them.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("quota ≥ 1 violated")]
    QuotaZero,
    #[error("every weight ≥ 1 violated (player {player} has weight 0)")]
    ZeroWeight { player: usize },
    #[error("total weight ≥ quota violated (total weight {total} < quota {quota})")]
    QuotaExceedsTotal { quota: u64, total: u64 },
    #[error("total weight overflows a 64-bit integer")]
    WeightOverflow,
    #[error("invalid coalition: player {player} out of range for a game with {players} players")]
    InvalidCoalition { player: usize, players: usize },
    #[error("player {player} out of range for a game with {players} players")]
    PlayerOutOfRange { player: usize, players: usize },
    #[error("precondition violated: player {player} is a member of the coalition")]
    PlayerInCoalition { player: usize },
    #[error("invalid split: {0}")]
    InvalidSplit(String),
    #[error("invalid merge: {0}")]
    InvalidMerge(String),
    #[error("{players} players exceeds the enumeration limit of {limit}; use the dynamic-programming engine")]
    SizeLimit { players: usize, limit: usize },
    #[error("all critical counts are zero, which no valid game produces")]
    DegenerateCounts,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("every sampled raw Banzhaf estimate is zero; increase the sample count or use the exact engine")]
    DegenerateNormalization,
    #[error("k-way split scans need 2 ≤ k ≤ {max}, got k = {k}")]
    KWayGuard { k: usize, max: usize },
    #[error("bound violated: {0}")]
    BoundViolation(String),
    #[error("quota {quota} exceeds the dynamic-programming ceiling {ceiling}")]
    ResourceLimit { quota: u64, ceiling: u64 },
}

pub type Result<T> = core::result::Result<T, Error>;

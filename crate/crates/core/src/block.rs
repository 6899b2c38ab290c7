//! Result type shared by the per-block updaters.

/// How a block update ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockStatus {
    /// A new value was accepted.
    Updated,
    /// The solver returned, but the candidate was worse than the input; input kept.
    Kept,
    /// The convex subproblem was infeasible or failed numerically; input kept.
    Infeasible,
    /// The block was not attempted (e.g. the current point violates a precondition).
    Skipped,
}

impl BlockStatus {
    pub fn name(self) -> &'static str {
        match self {
            BlockStatus::Updated => "updated",
            BlockStatus::Kept => "kept",
            BlockStatus::Infeasible => "infeasible",
            BlockStatus::Skipped => "skipped",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlockOutcome<T> {
    pub value: T,
    pub status: BlockStatus,
    /// SCA / inner iterations actually performed.
    pub iterations: usize,
}

impl<T> BlockOutcome<T> {
    pub fn kept(value: T, status: BlockStatus, iterations: usize) -> Self {
        Self {
            value,
            status,
            iterations,
        }
    }

    pub fn changed(&self) -> bool {
        self.status == BlockStatus::Updated
    }
}

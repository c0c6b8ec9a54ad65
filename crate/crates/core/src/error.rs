use alloc::string::String;

/// Everything that can go wrong inside the core crate.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("identity element must have index 0")]
    IdentityNotZero,
    #[error("group is not a 2-group (element {element} has order {order})")]
    NotA2Group { element: usize, order: usize },
    #[error("budget exceeded: {what} ({value} > {limit})")]
    BudgetExceeded {
        what: &'static str,
        value: usize,
        limit: usize,
    },
    #[error("chain map lift failed in degree {degree}: target not exact")]
    LiftFailed { degree: usize },
    #[error("degree {degree} out of computed range (max {max})")]
    DegreeOutOfRange { degree: usize, max: usize },
    #[error("incompatible operands: {0}")]
    IncompatibleOperands(String),
    #[error("modulus 2^{have} too small, need 2^{need}")]
    ModulusTooSmall { need: u32, have: u32 },
    #[error("kernel of the extension is not generated by a single vector")]
    NotRankOneKernel,
    #[error("coflasqueness check failed for subgroup of order {order}")]
    CoflasquenessCheckFailed { order: usize },
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),
    #[error("integer overflow in exact arithmetic")]
    Overflow,
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = core::result::Result<T, Error>;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SetError {
    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),
    #[error("unknown point {0}")]
    UnknownPoint(String),
    #[error("point {0} does not match the ambient shape")]
    ShapeMismatch(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("multiplication table is not closed on the given labels")]
    NotClosed,
    #[error("no two-sided identity")]
    NoIdentity,
    #[error("element {0} has no inverse")]
    NoInverse(String),
    #[error("not associative at ({0}, {1}, {2})")]
    NotAssociative(String, String, String),
    #[error("act({g}) . act({h}) differs from act({g}{h}) at {witness}")]
    NotAnAction { g: String, h: String, witness: String },
    #[error("act({0}) is not a bijection")]
    NotBijective(String),
    #[error("action does not fit the ambient set: {0}")]
    ShapeMismatch(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpaceError {
    #[error("entourage {0} does not fit the ambient set")]
    ShapeMismatch(String),
    #[error("coarse structure and bornology are not compatible: {entourage}[{bounded}] is unbounded")]
    NotCompatible { entourage: String, bounded: String },
    #[error("search bound {bound} exceeded (index {needed} needed)")]
    SearchBoundExceeded { bound: u64, needed: u64 },
    #[error("spaces carry different groups")]
    GroupMismatch,
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapError {
    #[error("map does not fit the source/target shapes: {0}")]
    ShapeMismatch(String),
    #[error("not equivariant for g = {g} at {point}")]
    NotEquivariant { g: String, point: String },
    #[error("not controlled: image of {entourage} is not an entourage of the target")]
    NotControlled { entourage: String },
    #[error("not proper: preimage of bounded set {bounded} is unbounded")]
    NotProper { bounded: String },
    #[error("maps are not composable")]
    NotComposable,
    #[error(transparent)]
    Space(#[from] SpaceError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("ring mismatch")]
    RingMismatch,
    #[error("instance does not support the group of the space")]
    GroupMismatch,
    #[error("law {law} violated: {witness}")]
    LawViolation { law: String, witness: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ControlledError {
    #[error("support is not G-invariant: {0}")]
    SupportNotInvariant(String),
    #[error("cocycle violated for g = {g}, g' = {h} at {point}")]
    CocycleViolation { g: String, h: String, point: String },
    #[error("rho({g}) at {point} is not invertible")]
    NotInvertible { g: String, point: String },
    #[error("rho({g}) at {point} has the wrong shape")]
    RhoShape { g: String, point: String },
    #[error("support hull is not an entourage: {0}")]
    HullNotEntourage(String),
    #[error("not equivariant for g = {g} at ({to}, {from})")]
    NotEquivariant { g: String, to: String, from: String },
    #[error("morphisms are not composable")]
    NotComposable,
    #[error("entry at ({to}, {from}) has the wrong shape")]
    EntryShape { to: String, from: String },
    #[error("no factorization of the test morphism through the base map")]
    NoFactorization,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Map(#[from] MapError),
}

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("unsupported format_version {0}")]
    Version(u64),
    #[error("dangling reference to {kind} {name:?}")]
    DanglingReference { kind: &'static str, name: String },
    #[error("invalid declaration {name:?}: {reason}")]
    Invalid { name: String, reason: String },
    #[error("unknown suite {0:?}")]
    UnknownSuite(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl ControlledError {
    /// Short class name used by the negative suite and in reports.
    pub fn class(&self) -> &'static str {
        match self {
            ControlledError::SupportNotInvariant(_) => "SupportNotInvariant",
            ControlledError::CocycleViolation { .. } => "CocycleViolation",
            ControlledError::NotInvertible { .. } => "NotInvertible",
            ControlledError::RhoShape { .. } => "RhoShape",
            ControlledError::HullNotEntourage(_) => "HullNotEntourage",
            ControlledError::NotEquivariant { .. } => "NotEquivariant",
            ControlledError::NotComposable => "NotComposable",
            ControlledError::EntryShape { .. } => "EntryShape",
            ControlledError::NoFactorization => "NoFactorization",
            ControlledError::Algebra(e) => e.class(),
            ControlledError::Space(e) => e.class(),
            ControlledError::Map(e) => e.class(),
        }
    }
}

impl AlgebraError {
    pub fn class(&self) -> &'static str {
        match self {
            AlgebraError::ShapeMismatch(_) => "ShapeMismatch",
            AlgebraError::RingMismatch => "RingMismatch",
            AlgebraError::GroupMismatch => "GroupMismatch",
            AlgebraError::LawViolation { .. } => "LawViolation",
        }
    }
}

impl GroupError {
    pub fn class(&self) -> &'static str {
        match self {
            GroupError::NotClosed => "NotClosed",
            GroupError::NoIdentity => "NoIdentity",
            GroupError::NoInverse(_) => "NoInverse",
            GroupError::NotAssociative(..) => "NotAssociative",
            GroupError::NotAnAction { .. } => "NotAnAction",
            GroupError::NotBijective(_) => "NotBijective",
            GroupError::ShapeMismatch(_) => "ShapeMismatch",
        }
    }
}

impl SpaceError {
    pub fn class(&self) -> &'static str {
        match self {
            SpaceError::ShapeMismatch(_) => "ShapeMismatch",
            SpaceError::NotCompatible { .. } => "NotCompatible",
            SpaceError::SearchBoundExceeded { .. } => "SearchBoundExceeded",
            SpaceError::GroupMismatch => "GroupMismatch",
            SpaceError::Group(e) => e.class(),
        }
    }
}

impl MapError {
    pub fn class(&self) -> &'static str {
        match self {
            MapError::ShapeMismatch(_) => "ShapeMismatch",
            MapError::NotEquivariant { .. } => "NotEquivariant",
            MapError::NotControlled { .. } => "NotControlled",
            MapError::NotProper { .. } => "NotProper",
            MapError::NotComposable => "NotComposable",
            MapError::Space(e) => e.class(),
        }
    }
}

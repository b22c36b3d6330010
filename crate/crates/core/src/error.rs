use alloc::string::String;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("zero polynomial where a nonzero one is required")]
    ZeroPolynomial,
    #[error("both polynomials are constant in the elimination variable")]
    DegenerateResultant,
    #[error("defining polynomial {0} is not irreducible over Q")]
    Reducible(String),
    #[error("defining polynomial must have positive degree")]
    ConstantModulus,
    #[error("field degree cap {cap} exceeded (would need degree {needed})")]
    FieldDegreeCapExceeded { cap: usize, needed: usize },
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("characteristic 2 is not supported")]
    CharacteristicTwo,
    #[error("sextic is not homogeneous of degree 6")]
    NotHomogeneous,
    #[error("branch curve is singular{}", witness.as_ref().map(|w| alloc::format!(" at {w}")).unwrap_or_default())]
    SingularBranchCurve { witness: Option<String> },
    #[error("automorphism #{index} does not preserve the sextic: {reason}")]
    BadAutomorphism { index: usize, reason: String },
    #[error("wrong degree: expected {expected}, found {found}")]
    WrongDegree { expected: usize, found: usize },
    #[error("enumeration budget exceeded; largest feasible n is {max_n}")]
    BudgetExceeded { max_n: u32 },
    #[error("point counts admit no Frobenius polynomial")]
    InconsistentCounts,
    #[error("no combination of intersection numbers is consistent")]
    InconsistentIntersections,
    #[error("curve shares a component with the branch sextic")]
    ImageInBranchCurve,
    #[error("divisors share a component")]
    SharedComponent,
    #[error("parametrization is constant or degenerate")]
    DegenerateParametrization,
    #[error("singular point of the curve lies on the branch sextic")]
    SingularityOnBranchCurve,
    #[error("record {0} has no declared self-intersection")]
    MissingSelfIntersection(String),
    #[error("Gram matrix has odd diagonal entry at index {0}")]
    OddDiagonal(usize),
    #[error("Gram matrix is not symmetric")]
    NotSymmetric,
    #[error("Gram matrix does not contain the hyperplane class")]
    MissingHyperplane,
    #[error("lattice rank {rank} is below the bound {tau}")]
    RankBelowBound { rank: usize, tau: usize },
    #[error("matrix #{0} is not an isometry of the lattice")]
    NonIsometry(usize),
    #[error("degenerate lattice (determinant zero)")]
    DegenerateLattice,
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = core::result::Result<T, Error>;

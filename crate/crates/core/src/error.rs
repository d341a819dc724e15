use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("q = {0} is not an odd prime in 3..=61")]
    InvalidField(u32),
    #[error("polynomials live over different fields (q = {0} and q = {1})")]
    FieldMismatch(u32, u32),
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("the zero polynomial has no factorization")]
    ZeroPolynomial,
    #[error("{0} is not monic")]
    NotMonic(String),
    #[error("cannot parse polynomial: {0}")]
    Parse(String),
    #[error("zeta_A has a pole at s = {0}")]
    ZetaPole(String),
    #[error("the derivative Möbius identity is undefined at s = 0")]
    ZeroExponent,
    #[error("unit group of order {order} exceeds the budget of {budget}")]
    BudgetExceeded { order: u64, budget: u64 },
    #[error("modulus must be a nonzero polynomial")]
    ZeroModulus,
    #[error("unit group construction failed: {0}")]
    UnitGroup(String),
    #[error("minimal induced modulus is not unique: {0}")]
    AmbiguousConductor(String),
    #[error("the principal character has no L-polynomial")]
    PrincipalCharacter,
    #[error("character is not primitive")]
    NotPrimitive,
    #[error("gcd(HK, R) != 1")]
    NotCoprime,
    #[error("character family is empty")]
    EmptyFamily,
    #[error("moment has imaginary part {imag:e} over a family of {size} characters")]
    NonReal { imag: f64, size: usize },
    #[error("invalid moment spec: {0}")]
    InvalidSpec(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("cache: {0}")]
    Cache(String),
}

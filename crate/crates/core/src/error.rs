use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("p = {0} is not an odd prime")]
    InvalidPrime(u64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("residue field F_{p}^{f} is too large for this engine")]
    FieldTooLarge { p: u64, f: usize },
    #[error("element is not a unit")]
    NotAUnit,
    #[error("reduction mod p has repeated roots")]
    NotSeparable,
    #[error("rings do not match: {0}")]
    RingMismatch(String),
    #[error("ramification index {e} is divisible by p = {p}")]
    WildRamification { e: u64, p: u64 },
    #[error("element is not a uniformizer (valuation {0})")]
    NotUniformizer(String),
    #[error("element is not a principal unit")]
    NotPrincipalUnit,
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("inner series has a nonzero constant term")]
    NonzeroConstantTerm,
    #[error("linear coefficient is not a unit")]
    NonUnitLinearTerm,
    #[error("series cutoff {have} is below the required {needed}")]
    InsufficientCutoff { needed: usize, have: usize },
    #[error("no unit coefficient up to the cutoff")]
    NoUnitCoefficient,
    #[error("first unit coefficient sits at index {0}, which is not a power of p")]
    NotPPower(usize),
    #[error("height {h} does not divide the residue degree {f}")]
    HeightNotDividingF { h: u32, f: usize },
    #[error("multiplier is not a (p^h - 1)-th root of unity")]
    MultiplierOrderWrong,
    #[error("coefficient at index {0} is not in the degree-h subring")]
    CoefficientNotInSubring(usize),
    #[error("perturbation at index {0} is a unit")]
    UnitPerturbation(usize),
    #[error("degree {0} of the functional equation has no integral solution")]
    NonConvergence(usize),
    #[error("Newton polygon is not a single segment of slope 1/(q-1): {0}")]
    MultipleSlopes(String),
    #[error("no Teichmüller multiplier gives a split residue equation")]
    NoAdmissibleMultiplier,
    #[error("Krasner gap fails: {0}")]
    KrasnerGapFails(String),
    #[error("{0} does not divide {1}")]
    DivisibilityFails(u64, u64),
    #[error("precision too low to decide membership (obstruction valuation {valuation}, precision {precision})")]
    PrecisionTooLowToDecide { valuation: u32, precision: u32 },
    #[error("curve has bad reduction")]
    BadReduction,
    #[error("component group laws live over different rings")]
    MixedRings,
    #[error("heights differ: {0}")]
    HeightMismatch(String),
    #[error("configuration error: {0}")]
    Config(String),
}

impl Error {
    /// Errors that mean "rerun with more digits".
    pub fn is_precision(&self) -> bool {
        matches!(
            self,
            Error::PrecisionExhausted(_)
                | Error::PrecisionTooLowToDecide { .. }
                | Error::InsufficientCutoff { .. }
        )
    }
}

//! Volterra-type and weighted composition operators between Fock spaces.
//!
//! The crate evaluates Fock-space norms, the Berezin-type transform that
//! governs boundedness, compactness and Schatten membership of
//! `V_{(ψ,g)} f = ∫_0^z f(ψ(ζ)) g′(ζ) dζ` and `uC_ψ`, truncated matrix
//! representations of these operators, and the classification logic that
//! combines them.

pub mod berezin;
pub mod criteria;
pub mod fock;
pub mod operator;
pub mod quadrature;
pub mod serde_float;
pub mod symbols;

pub use berezin::{
    berezin_at, berezin_profile, vanishes_at_infinity, BerezinError, BerezinOptions, BerezinProfile, BerezinSample,
    BerezinTransform, GridSpec,
};
pub use fock::{fock_norm, kernel_eval, FockError, FockParams, NormValue};
pub use quadrature::{QuadratureError, Tolerance};
pub use symbols::{EntireSymbol, InducedWeight, LinearMap, OperatorKind, Polynomial, SymbolError, SymbolPair};
pub use criteria::{
    classify_berezin, classify_spectral, consistency_report, oracle_classify, Classification, ClassifyOptions,
    ConsistencyReport, Judgement, Source, Verdict,
};
pub use operator::{build_matrix, spectral_summary, OperatorError, SpectralSummary, TruncatedOperator};

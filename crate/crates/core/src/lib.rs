//! String rewriting toolkit for semi-Thue systems over small alphabets.
//!
//! Words are stored run-length encoded with arbitrary-precision exponents, so
//! rule families like `a^(2^(n+1)-1) c a^n c -> 0` can be matched and applied
//! exactly for any parameter without materializing dense strings. On top of
//! the rewriting engine the crate provides critical-pair enumeration and
//! resolution, termination-measure certificates, capped Thue-distance search,
//! Dehn-function profiling, DFA-based cross-section checking, and the builtin
//! systems `R`, `S`, `T`, `U` together with their verification suites.

pub mod confluence;
pub mod dehn;
mod error;
pub mod expr;
pub mod paper;
pub mod rewrite;
pub mod system;
pub mod verify;
pub mod word;
pub mod xsection;

pub use error::{Error, Result};
pub use expr::ExponentExpr;
pub use rewrite::{Derivation, Direction, Redex, RewriteStep, Strategy, VerifyReport};
pub use system::{Rule, RuleSchema, RewritingSystem};
pub use word::{Alphabet, Symbol, Word};

/// Default ceiling on dense materialization (symbols), used by operations
/// that must expand a run-length word into individual symbols.
pub const DEFAULT_DENSE_CAP: u64 = 1_000_000;

/// Hard ceiling on the bit width of `2^e` powers built during exponent
/// evaluation; evaluation fails beyond it instead of exhausting memory.
pub const MAX_POW2_BITS: u64 = 1 << 32;

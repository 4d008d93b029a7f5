//! Exact q-series and restricted partition counts for checking truncated
//! pentagonal-number recurrences.
//!
//! - [`series`]: truncated formal power series with big-integer coefficients
//! - [`partition`]: residue restrictions and partition count tables
//! - [`identity`]: term schedules, residuals, and identity verifiers

pub mod identity;
pub mod partition;
pub mod series;

pub use identity::{
    pentagonal_series, residual, schedule_for, term_rows, triple_product_product_side,
    triple_product_sum_side, verify_counting, verify_lemma, verify_product_identity,
    verify_schedule, verify_theorem1_equality, IdentityError, IdentitySchedule, IdentityTerm,
    Method, Sign, TermRow, VerificationReport,
};
pub use partition::{
    count_restricted_table, count_unrestricted_pentagonal, enumerate_restricted, restricted_gf,
    CountTable, PartitionError, ResidueRestriction, DEFAULT_ORACLE_BOUND,
};
pub use series::{
    euler_product, make_series, progression_product, ProgressionFactorSpec, SeriesError,
    TruncatedSeries,
};

//! Certified values of `K(L, w)`: closed-form results with checked hypotheses,
//! counting bounds, and an exhaustive oracle for small lengths.

mod bounds;
mod certificate;
mod certify;
mod oracle;

pub use bounds::{has_exceptional_subset, upper_nonexceptional, upper_prime_factors};
pub use certificate::{Certificate, Claim, Justification, OracleScope, WeightSpec};
pub use certify::{certify, TheoremTag};
pub use oracle::{
    k_equi_oracle, k_exact_oracle, k_mixed_oracle, DEFAULT_NODE_BUDGET, MAX_LENGTH, MAX_LENGTH_SMALL_WEIGHT, MAX_SUBSETS,
};

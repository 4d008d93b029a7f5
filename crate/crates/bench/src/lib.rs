//! Shared inputs for the criterion benches.

use pentarec_core::{schedule_for, ResidueRestriction};

/// The three restrictions of the `m = 1` identity, in schedule order.
pub fn m1_restrictions() -> Vec<ResidueRestriction> {
    schedule_for(1)
        .expect("m = 1 is valid")
        .terms
        .into_iter()
        .map(|t| t.restriction)
        .collect()
}

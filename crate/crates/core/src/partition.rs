//! Residue-restricted partition counts.
//!
//! Counts are produced by three independent routes: an unbounded-knapsack
//! table, Euler's pentagonal recurrence (unrestricted only), and the
//! generating function `∏ 1/(1 - q^k)` over allowed parts. A direct
//! enumerator serves as an oracle for small `n`.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::series::{progression_product, ProgressionFactorSpec, TruncatedSeries};

/// Largest `n` the enumeration oracle accepts unless configured otherwise.
pub const DEFAULT_ORACLE_BOUND: usize = 60;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("modulus must be positive")]
    ZeroModulus,
    #[error("n = {n} exceeds the enumeration oracle bound {bound}")]
    OracleBoundExceeded { n: usize, bound: usize },
}

/// Parts `k` are allowed iff `k mod modulus` is not in `forbidden`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ResidueRestriction {
    modulus: u64,
    forbidden: BTreeSet<u64>,
}

impl ResidueRestriction {
    /// Residues may be given unreduced or negative; they are stored in
    /// `0..modulus`, so writing the modulus itself denotes residue 0.
    pub fn new<I>(modulus: u64, residues: I) -> Result<Self, PartitionError>
    where
        I: IntoIterator<Item = i64>,
    {
        if modulus == 0 {
            return Err(PartitionError::ZeroModulus);
        }
        let m = i128::from(modulus);
        let forbidden = residues
            .into_iter()
            .map(|r| i128::from(r).rem_euclid(m) as u64)
            .collect();
        Ok(ResidueRestriction { modulus, forbidden })
    }

    /// No forbidden residues.
    pub fn unrestricted() -> Self {
        ResidueRestriction {
            modulus: 1,
            forbidden: BTreeSet::new(),
        }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn forbidden(&self) -> &BTreeSet<u64> {
        &self.forbidden
    }

    pub fn allows(&self, part: u64) -> bool {
        !self.forbidden.contains(&(part % self.modulus))
    }

    /// True if `self` forbids every residue `other` forbids, over the same
    /// part alphabet.
    pub fn is_at_least_as_strict_as(&self, other: &Self) -> bool {
        (1..=self.modulus * other.modulus).all(|k| self.allows(k) <= other.allows(k))
    }

    pub fn allowed_parts(&self, limit: u64) -> Vec<u64> {
        (1..=limit).filter(|&k| self.allows(k)).collect()
    }
}

impl fmt::Display for ResidueRestriction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list: Vec<String> = self.forbidden.iter().map(u64::to_string).collect();
        write!(f, "parts ≢ {{{}}} (mod {})", list.join(","), self.modulus)
    }
}

/// Restricted partition counts for every `n` in `0..=max_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTable {
    restriction: ResidueRestriction,
    counts: Vec<BigInt>,
}

impl CountTable {
    pub fn restriction(&self) -> &ResidueRestriction {
        &self.restriction
    }

    pub fn max_n(&self) -> usize {
        self.counts.len() - 1
    }

    pub fn counts(&self) -> &[BigInt] {
        &self.counts
    }

    pub fn get(&self, n: usize) -> Option<&BigInt> {
        self.counts.get(n)
    }

    /// Count at a possibly negative index: zero below 0, `None` past the
    /// table.
    pub fn at(&self, n: i64) -> Option<BigInt> {
        if n < 0 {
            Some(BigInt::zero())
        } else {
            self.get(n as usize).cloned()
        }
    }
}

/// Unbounded-knapsack table over the allowed parts, ascending, in place.
pub fn count_restricted_table(restriction: &ResidueRestriction, max_n: usize) -> CountTable {
    let mut counts = vec![BigInt::zero(); max_n + 1];
    counts[0] = BigInt::one();
    for k in restriction.allowed_parts(max_n as u64) {
        let k = k as usize;
        for n in k..=max_n {
            let (lo, hi) = counts.split_at_mut(n);
            if !lo[n - k].is_zero() {
                hi[0] += &lo[n - k];
            }
        }
    }
    CountTable {
        restriction: restriction.clone(),
        counts,
    }
}

/// `p(n)` via `p(n) = Σ_{k≠0} (-1)^(k+1) p(n - k(3k-1)/2)`, with `p(j) = 0`
/// for `j < 0`.
pub fn count_unrestricted_pentagonal(max_n: usize) -> CountTable {
    let mut p: Vec<BigInt> = Vec::with_capacity(max_n + 1);
    p.push(BigInt::one());
    for n in 1..=max_n {
        let mut acc = BigInt::zero();
        for k in 1.. {
            let g_pos = k * (3 * k - 1) / 2;
            if g_pos > n {
                break;
            }
            let g_neg = k * (3 * k + 1) / 2;
            let mut pair = p[n - g_pos].clone();
            if g_neg <= n {
                pair += &p[n - g_neg];
            }
            if k % 2 == 1 {
                acc += pair;
            } else {
                acc -= pair;
            }
        }
        p.push(acc);
    }
    CountTable {
        restriction: ResidueRestriction::unrestricted(),
        counts: p,
    }
}

/// Exhaustive enumeration of partitions of `n` into allowed parts, for use
/// as an oracle. Refuses `n > bound`.
pub fn enumerate_restricted(
    n: usize,
    restriction: &ResidueRestriction,
    bound: usize,
) -> Result<BigInt, PartitionError> {
    if n > bound {
        return Err(PartitionError::OracleBoundExceeded { n, bound });
    }
    fn walk(rest: u64, largest: u64, r: &ResidueRestriction) -> u64 {
        if rest == 0 {
            return 1;
        }
        let mut total = 0;
        let mut part = largest.min(rest);
        while part >= 1 {
            if r.allows(part) {
                total += walk(rest - part, part, r);
            }
            part -= 1;
        }
        total
    }
    Ok(BigInt::from(walk(n as u64, n as u64, restriction)))
}

/// Generating function of the restricted counts, truncated at `order`.
///
/// Builds `∏_{allowed k} (1 - q^k)` from one progression per allowed
/// residue class and inverts it.
pub fn restricted_gf(restriction: &ResidueRestriction, order: usize) -> TruncatedSeries {
    let m = restriction.modulus() as usize;
    let families: Vec<ProgressionFactorSpec> = (0..m)
        .filter(|&r| !restriction.forbidden().contains(&(r as u64)))
        .map(|r| {
            if r == 0 {
                ProgressionFactorSpec::new(m, m, 0)
            } else {
                ProgressionFactorSpec::new(r, m, 0)
            }
            .expect("positive exponents")
        })
        .collect();
    if families.is_empty() {
        return TruncatedSeries::one(order);
    }
    progression_product(&families, order)
        .and_then(|s| s.invert_unit())
        .expect("product of binomials is a unit")
}

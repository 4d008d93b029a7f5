//! Truncated pentagonal recurrences for restricted partitions.
//!
//! For every `m ≥ 1` the signed sum
//!
//! ```text
//! p(n | A_0) + Σ_{i=1..m} (-1)^i [ p(n - i(3i-1)/2 | A_i^-) + p(n - i(3i+1)/2 | A_i^+) ]
//! ```
//!
//! vanishes for `n ≥ 1`, where each `A` forbids residue 0 and two further
//! residues modulo `3(2m+1)^2`. This module builds those term schedules,
//! evaluates the sum from count tables, and checks the underlying product
//! identities directly on truncated series.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::RangeInclusive;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::partition::{count_restricted_table, CountTable, ResidueRestriction};
use crate::series::{
    euler_product, progression_product, ProgressionFactorSpec, SeriesError, TruncatedSeries,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdentityError {
    #[error("parameter {name} must be at least 1")]
    ZeroParameter { name: &'static str },
    #[error("lemma index i = {i} outside 1..={}", 2 * k)]
    LemmaIndex { k: u64, i: i64 },
    #[error("max_n = {0} is below the first claimed index 2")]
    RangeTooSmall(usize),
    #[error("expected {expected} count tables, got {got}")]
    TableCount { expected: usize, got: usize },
    #[error("table for term {term} has restriction {found}, expected {expected}")]
    TableRestriction {
        term: usize,
        expected: ResidueRestriction,
        found: ResidueRestriction,
    },
    #[error("table for term {term} stops at {max_n}, index {needed} required")]
    MissingCoverage {
        term: usize,
        needed: usize,
        max_n: usize,
    },
    #[error("malformed schedule: {0}")]
    MalformedSchedule(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

pub type Result<T> = std::result::Result<T, IdentityError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// `(-1)^i`
    pub fn alternating(i: u64) -> Self {
        if i.is_multiple_of(2) {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    fn apply(self, value: BigInt) -> BigInt {
        match self {
            Sign::Plus => value,
            Sign::Minus => -value,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// One summand: `sign · p(n - shift | restriction)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IdentityTerm {
    pub shift: usize,
    pub sign: Sign,
    pub restriction: ResidueRestriction,
}

/// The ordered terms of the identity for one `m`.
///
/// Fields are public so that callers can assemble arbitrary schedules,
/// including deliberately broken ones; [`IdentitySchedule::validate`]
/// checks the structural invariants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentitySchedule {
    pub m: u64,
    pub modulus: u64,
    pub terms: Vec<IdentityTerm>,
}

/// Generalized pentagonal numbers `i(3i-1)/2` and `i(3i+1)/2`.
pub fn pentagonal_pair(i: u64) -> (u64, u64) {
    ((3 * i * i - i) / 2, (3 * i * i + i) / 2)
}

fn term(modulus: u64, shift: u64, sign: Sign, a: u64, b: u64) -> IdentityTerm {
    IdentityTerm {
        shift: shift as usize,
        sign,
        restriction: ResidueRestriction::new(modulus, [0, a as i64, b as i64])
            .expect("positive modulus"),
    }
}

pub fn schedule_for(m: u64) -> Result<IdentitySchedule> {
    if m == 0 {
        return Err(IdentityError::ZeroParameter { name: "m" });
    }
    let s = 2 * m + 1;
    let modulus = 3 * s * s;
    let mut terms = Vec::with_capacity(s as usize);
    terms.push(term(modulus, 0, Sign::Plus, s * (3 * m + 1), s * (3 * m + 2)));
    for i in 1..=m {
        let sign = Sign::alternating(i);
        let (lower, upper) = pentagonal_pair(i);
        terms.push(term(
            modulus,
            lower,
            sign,
            s * (3 * m - 3 * i + 2),
            s * (3 * m + 3 * i + 1),
        ));
        terms.push(term(
            modulus,
            upper,
            sign,
            s * (3 * m - 3 * i + 1),
            s * (3 * m + 3 * i + 2),
        ));
    }
    Ok(IdentitySchedule { m, modulus, terms })
}

impl IdentitySchedule {
    /// Checks term count, moduli, residue shape, and the shift sequence.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(IdentityError::MalformedSchedule(msg));
        let s = 2 * self.m + 1;
        if self.m == 0 {
            return bad("m = 0".into());
        }
        if self.modulus != 3 * s * s {
            return bad(format!("modulus {} != 3(2m+1)^2", self.modulus));
        }
        if self.terms.len() as u64 != s {
            return bad(format!("{} terms, expected {s}", self.terms.len()));
        }
        let mut expected_shifts = vec![(0, Sign::Plus)];
        for i in 1..=self.m {
            let (lo, hi) = pentagonal_pair(i);
            expected_shifts.push((lo as usize, Sign::alternating(i)));
            expected_shifts.push((hi as usize, Sign::alternating(i)));
        }
        for (idx, (t, (shift, sign))) in self.terms.iter().zip(expected_shifts).enumerate() {
            if t.shift != shift || t.sign != sign {
                return bad(format!("term {idx}: shift/sign ({}, {}) expected ({shift}, {sign})", t.shift, t.sign));
            }
            let r = &t.restriction;
            if r.modulus() != self.modulus {
                return bad(format!("term {idx}: modulus {}", r.modulus()));
            }
            if r.forbidden().len() != 3 || !r.forbidden().contains(&0) {
                return bad(format!("term {idx}: forbidden set {r}"));
            }
            if r.forbidden().iter().any(|&x| x != 0 && x % s != 0) {
                return bad(format!("term {idx}: residues not multiples of 2m+1"));
            }
        }
        Ok(())
    }

    /// Largest shift, i.e. `m(3m+1)/2`.
    pub fn max_shift(&self) -> usize {
        self.terms.iter().map(|t| t.shift).max().unwrap_or(0)
    }
}

/// `Σ (-1)^n q^(n(3n+1)/2)` over all integers `n`, truncated at `order`.
pub fn pentagonal_series(order: usize) -> TruncatedSeries {
    let mut coeffs = vec![BigInt::zero(); order + 1];
    let limit = order as i128;
    for n in 0i128.. {
        let mut hit = false;
        for j in if n == 0 { vec![0] } else { vec![n, -n] } {
            let e = j * (3 * j + 1) / 2;
            if e <= limit {
                hit = true;
                coeffs[e as usize] += if j % 2 == 0 { 1 } else { -1 };
            }
        }
        if !hit {
            break;
        }
    }
    TruncatedSeries::from_coeffs(coeffs).expect("non-empty")
}

fn check_lemma_index(k: u64, i: i64) -> Result<()> {
    if k == 0 {
        return Err(IdentityError::ZeroParameter { name: "k" });
    }
    if i < 1 || i as i128 > 2 * k as i128 {
        return Err(IdentityError::LemmaIndex { k, i });
    }
    Ok(())
}

/// `Σ_n (-1)^n q^((2k+1)n(n+1)/2 - i·n)` over all integers `n`.
pub fn triple_product_sum_side(k: u64, i: i64, order: usize) -> Result<TruncatedSeries> {
    check_lemma_index(k, i)?;
    let width = 2 * k as i128 + 1;
    let i = i as i128;
    let limit = order as i128;
    let exponent = |n: i128| width * n * (n + 1) / 2 - i * n;
    let mut coeffs = vec![BigInt::zero(); order + 1];
    // the exponent grows monotonically in |n| on both sides of 0
    for dir in [1i128, -1] {
        let mut n = if dir == 1 { 0 } else { -1 };
        loop {
            let e = exponent(n);
            debug_assert!(e >= 0);
            if e > limit {
                break;
            }
            coeffs[e as usize] += if n % 2 == 0 { 1 } else { -1 };
            n += dir;
        }
    }
    Ok(TruncatedSeries::from_coeffs(coeffs).expect("non-empty"))
}

/// `∏_{n≥0} (1 - q^((2k+1)(n+1))) (1 - q^((2k+1)n + i)) (1 - q^((2k+1)(n+1) - i))`.
pub fn triple_product_product_side(k: u64, i: i64, order: usize) -> Result<TruncatedSeries> {
    check_lemma_index(k, i)?;
    let width = (2 * k + 1) as usize;
    let i = i as usize;
    let families = [
        ProgressionFactorSpec::new(width, width, 0)?,
        ProgressionFactorSpec::new(i, width, 0)?,
        ProgressionFactorSpec::new(width - i, width, 0)?,
    ];
    Ok(progression_product(&families, order)?)
}

/// Sign · shift of one triple-product summand on the right-hand side of the
/// product identity, with its two non-trivial residues.
fn product_term(
    modulus: usize,
    residues: (u64, u64),
    shift: u64,
    sign: Sign,
    order: usize,
) -> Result<Option<TruncatedSeries>> {
    let shift = shift as usize;
    if shift > order {
        return Ok(None);
    }
    let families = [
        ProgressionFactorSpec::new(modulus, modulus, 0)?,
        ProgressionFactorSpec::new(residues.0 as usize, modulus, 0)?,
        ProgressionFactorSpec::new(residues.1 as usize, modulus, 0)?,
    ];
    let body = progression_product(&families, order)?.shift(shift)?;
    Ok(Some(match sign {
        Sign::Plus => body,
        Sign::Minus => body.neg(),
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Counting,
    Series,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Counting => "counting",
            Method::Series => "series",
        })
    }
}

/// Outcome of one identity sweep.
///
/// `m` holds the identity parameter (for lemma sweeps, `k`). `residuals`
/// covers every index in `n_range`; `passed` considers only `n ≥ 1`, so the
/// constant term is reported but never counted as a failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub m: u64,
    pub n_range: RangeInclusive<usize>,
    pub residuals: BTreeMap<usize, BigInt>,
    pub passed: bool,
    pub elapsed: Duration,
    pub method: Method,
}

impl VerificationReport {
    fn new(
        m: u64,
        n_range: RangeInclusive<usize>,
        residuals: BTreeMap<usize, BigInt>,
        method: Method,
        started: Instant,
    ) -> Self {
        let passed = residuals
            .iter()
            .all(|(&n, value)| n == 0 || value.is_zero());
        VerificationReport {
            m,
            n_range,
            residuals,
            passed,
            elapsed: started.elapsed(),
            method,
        }
    }

    pub fn nonzero_residuals(&self) -> impl Iterator<Item = (usize, &BigInt)> {
        self.residuals
            .iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|(&n, v)| (n, v))
    }

    /// First `n ≥ 1` with a nonzero residual.
    pub fn first_failure(&self) -> Option<(usize, &BigInt)> {
        self.nonzero_residuals().find(|&(n, _)| n >= 1)
    }

    /// Same verdict and residuals, ignoring timing.
    pub fn same_outcome(&self, other: &Self) -> bool {
        self.m == other.m
            && self.n_range == other.n_range
            && self.residuals == other.residuals
            && self.passed == other.passed
            && self.method == other.method
    }
}

/// `Σ sign · p(n - shift | restriction)` with `p(j) = 0` for `j < 0`.
///
/// `tables[t]` must hold the counts for `schedule.terms[t]`.
pub fn residual(n: i64, schedule: &IdentitySchedule, tables: &[CountTable]) -> Result<BigInt> {
    if tables.len() != schedule.terms.len() {
        return Err(IdentityError::TableCount {
            expected: schedule.terms.len(),
            got: tables.len(),
        });
    }
    let mut total = BigInt::zero();
    for (idx, (t, table)) in schedule.terms.iter().zip(tables).enumerate() {
        if table.restriction() != &t.restriction {
            return Err(IdentityError::TableRestriction {
                term: idx,
                expected: t.restriction.clone(),
                found: table.restriction().clone(),
            });
        }
        let index = n - t.shift as i64;
        let value = table.at(index).ok_or(IdentityError::MissingCoverage {
            term: idx,
            needed: index as usize,
            max_n: table.max_n(),
        })?;
        total += t.sign.apply(value);
    }
    Ok(total)
}

/// One count table per schedule term, built in parallel.
pub fn tables_for(schedule: &IdentitySchedule, max_n: usize) -> Vec<CountTable> {
    schedule
        .terms
        .par_iter()
        .map(|t| count_restricted_table(&t.restriction, max_n))
        .collect()
}

/// Per-term restricted counts and the residual at one `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermRow {
    pub n: usize,
    /// `p(n - shift | restriction)` per term, zero where `n < shift`.
    pub counts: Vec<BigInt>,
    pub residual: BigInt,
}

pub fn term_rows(
    schedule: &IdentitySchedule,
    range: RangeInclusive<usize>,
) -> Result<Vec<TermRow>> {
    let tables = tables_for(schedule, *range.end());
    range
        .map(|n| {
            let counts = schedule
                .terms
                .iter()
                .zip(&tables)
                .map(|(t, table)| table.at(n as i64 - t.shift as i64).unwrap_or_default())
                .collect();
            Ok(TermRow {
                n,
                counts,
                residual: residual(n as i64, schedule, &tables)?,
            })
        })
        .collect()
}

/// Evaluates the residual of an arbitrary schedule for every `n` in
/// `0..=max_n`.
pub fn verify_schedule(schedule: &IdentitySchedule, max_n: usize) -> Result<VerificationReport> {
    let started = Instant::now();
    let tables = tables_for(schedule, max_n);
    let residuals = (0..=max_n)
        .map(|n| Ok((n, residual(n as i64, schedule, &tables)?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    Ok(VerificationReport::new(
        schedule.m,
        0..=max_n,
        residuals,
        Method::Counting,
        started,
    ))
}

/// Counting-route check of the identity for `m` over `1..=max_n`; the
/// residual at 0 (always 1) is recorded alongside.
pub fn verify_counting(m: u64, max_n: usize) -> Result<VerificationReport> {
    verify_schedule(&schedule_for(m)?, max_n)
}

/// Series-route check: `∏(1 - q^n)` against the signed, shifted sum of
/// triple products with step `3(2m+1)^2`, built from the closed-form
/// exponents rather than from [`schedule_for`].
pub fn verify_product_identity(m: u64, order: usize) -> Result<VerificationReport> {
    if m == 0 {
        return Err(IdentityError::ZeroParameter { name: "m" });
    }
    let started = Instant::now();
    let s = 2 * m + 1;
    let modulus = (3 * s * s) as usize;

    let lhs = euler_product(order);
    let mut rhs = product_term(modulus, (s * (3 * m + 1), s * (3 * m + 2)), 0, Sign::Plus, order)?
        .expect("shift 0");
    for i in 1..=m {
        let sign = Sign::alternating(i);
        let (lower, upper) = pentagonal_pair(i);
        let pieces = [
            (lower, (s * (3 * m - 3 * i + 2), s * (3 * m + 3 * i + 1))),
            (upper, (s * (3 * m - 3 * i + 1), s * (3 * m + 3 * i + 2))),
        ];
        for (shift, residues) in pieces {
            if let Some(piece) = product_term(modulus, residues, shift, sign, order)? {
                rhs = rhs.add(&piece)?;
            }
        }
    }
    let diff = lhs.sub(&rhs)?;
    let residuals = diff.into_coeffs().into_iter().enumerate().collect();
    Ok(VerificationReport::new(
        m,
        0..=order,
        residuals,
        Method::Series,
        started,
    ))
}

/// Sum side against product side for every admissible `i` in `1..=2k`.
///
/// The residual at exponent `e` is `Σ_i |sum_i[e] - product_i[e]|`.
pub fn verify_lemma(k: u64, order: usize) -> Result<VerificationReport> {
    if k == 0 {
        return Err(IdentityError::ZeroParameter { name: "k" });
    }
    let started = Instant::now();
    let diffs = (1..=2 * k as i64)
        .into_par_iter()
        .map(|i| {
            let sum = triple_product_sum_side(k, i, order)?;
            let product = triple_product_product_side(k, i, order)?;
            Ok(sum.sub(&product)?)
        })
        .collect::<Result<Vec<_>>>()?;
    let residuals = (0..=order)
        .map(|e| {
            let total: BigInt = diffs.iter().map(|d| d.coeffs()[e].abs()).sum();
            (e, total)
        })
        .collect();
    Ok(VerificationReport::new(
        k,
        0..=order,
        residuals,
        Method::Series,
        started,
    ))
}

/// The `m = 1` identity in its equality form
/// `p(n | A) = p(n-1 | B) + p(n-2 | C)` for `2 ≤ n ≤ max_n`; residuals are
/// `lhs - rhs`.
pub fn verify_theorem1_equality(max_n: usize) -> Result<VerificationReport> {
    if max_n < 2 {
        return Err(IdentityError::RangeTooSmall(max_n));
    }
    let started = Instant::now();
    let schedule = schedule_for(1)?;
    let tables = tables_for(&schedule, max_n);
    let residuals = (2..=max_n)
        .map(|n| {
            let lhs = &tables[0].counts()[n];
            let rhs = &tables[1].counts()[n - 1] + &tables[2].counts()[n - 2];
            (n, lhs - rhs)
        })
        .collect();
    Ok(VerificationReport::new(
        1,
        2..=max_n,
        residuals,
        Method::Counting,
        started,
    ))
}

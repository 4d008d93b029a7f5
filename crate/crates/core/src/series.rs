//! Exact truncated formal power series over arbitrary-precision integers.
//!
//! A [`TruncatedSeries`] of order `N` stores the coefficients of
//! `q^0 ..= q^N` and represents a formal series modulo `q^(N+1)`. Binary
//! operations require both operands to share the same order; there is no
//! implicit truncation.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },
    #[error("exponent {exponent} exceeds truncation order {order}")]
    ExponentOutOfRange { exponent: usize, order: usize },
    #[error("shift {shift} exceeds truncation order {order}")]
    ShiftTooLarge { shift: usize, order: usize },
    #[error("constant term {0} is not a unit")]
    NonUnit(BigInt),
    #[error("factor family offset={offset} step={step} start={start_index} produces exponent 0")]
    ZeroExponent {
        offset: usize,
        step: usize,
        start_index: usize,
    },
    #[error("factor family step must be positive")]
    ZeroStep,
    #[error("factor family start index must be 0 or 1, got {0}")]
    BadStartIndex(usize),
    #[error("product of an empty factor list")]
    EmptyProduct,
}

pub type Result<T> = std::result::Result<T, SeriesError>;

/// A formal power series known exactly through `q^order`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruncatedSeries {
    coeffs: Vec<BigInt>,
}

impl TruncatedSeries {
    pub fn zero(order: usize) -> Self {
        TruncatedSeries {
            coeffs: vec![BigInt::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        Self::monomial(order, 0)
    }

    /// `q^exponent`, or the zero series if the exponent lies past the order.
    pub fn monomial(order: usize, exponent: usize) -> Self {
        let mut s = Self::zero(order);
        if exponent <= order {
            s.coeffs[exponent] = BigInt::one();
        }
        s
    }

    /// Builds a series from sparse `(exponent, coefficient)` entries.
    ///
    /// Repeated exponents accumulate.
    pub fn from_entries<I, C>(order: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, C)>,
        C: Into<BigInt>,
    {
        let mut s = Self::zero(order);
        for (exponent, c) in entries {
            if exponent > order {
                return Err(SeriesError::ExponentOutOfRange { exponent, order });
            }
            s.coeffs[exponent] += c.into();
        }
        Ok(s)
    }

    /// Takes a dense coefficient vector; the order is `coeffs.len() - 1`.
    ///
    /// Returns `None` for an empty vector.
    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Option<Self> {
        if coeffs.is_empty() {
            None
        } else {
            Some(TruncatedSeries { coeffs })
        }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    /// Coefficient of `q^exponent`; zero past the order.
    pub fn coeff(&self, exponent: usize) -> BigInt {
        self.coeffs.get(exponent).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn check_order(&self, other: &Self) -> Result<()> {
        if self.order() != other.order() {
            return Err(SeriesError::OrderMismatch {
                left: self.order(),
                right: other.order(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(TruncatedSeries { coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(TruncatedSeries { coeffs })
    }

    pub fn neg(&self) -> Self {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, factor: &BigInt) -> Self {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    /// Truncated product. Schoolbook convolution skipping zero terms, which
    /// is the common case for the sparse products this crate builds.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let order = self.order();
        let mut out = vec![BigInt::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=order - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Ok(TruncatedSeries { coeffs: out })
    }

    /// Multiplication by `q^s`. The top `s` coefficients fall off.
    pub fn shift(&self, s: usize) -> Result<Self> {
        let order = self.order();
        if s > order {
            return Err(SeriesError::ShiftTooLarge { shift: s, order });
        }
        let mut coeffs = vec![BigInt::zero(); s];
        coeffs.extend_from_slice(&self.coeffs[..=order - s]);
        Ok(TruncatedSeries { coeffs })
    }

    /// Multiplicative inverse of a series whose constant term is `±1`.
    pub fn invert_unit(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if !c0.abs().is_one() {
            return Err(SeriesError::NonUnit(c0.clone()));
        }
        let negative = c0.is_negative();
        let order = self.order();
        let mut inv: Vec<BigInt> = Vec::with_capacity(order + 1);
        inv.push(c0.clone());
        for e in 1..=order {
            let mut acc = BigInt::zero();
            for j in 1..=e {
                let a = &self.coeffs[j];
                if !a.is_zero() {
                    acc += a * &inv[e - j];
                }
            }
            // b[e] = -(1/a0) * acc, with 1/a0 == a0 for a0 = ±1
            inv.push(if negative { acc } else { -acc });
        }
        Ok(TruncatedSeries { coeffs: inv })
    }

    /// In-place multiplication by the binomial `1 - q^e`.
    fn mul_one_minus_monomial(&mut self, e: usize) {
        debug_assert!(e >= 1);
        let order = self.order();
        if e > order {
            return;
        }
        for j in (e..=order).rev() {
            if !self.coeffs[j - e].is_zero() {
                let (lo, hi) = self.coeffs.split_at_mut(j);
                hi[0] -= &lo[j - e];
            }
        }
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            match (e, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => f.write_str("q")?,
                (1, false) => write!(f, "{mag}q")?,
                (_, true) => write!(f, "q^{e}")?,
                (_, false) => write!(f, "{mag}q^{e}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(q^{})", self.order() + 1)
    }
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruncatedSeries({self})")
    }
}

/// Sparse constructor used by callers that already hold a map.
pub fn make_series(order: usize, entries: &BTreeMap<usize, BigInt>) -> Result<TruncatedSeries> {
    TruncatedSeries::from_entries(order, entries.iter().map(|(&e, c)| (e, c.clone())))
}

/// The factor family `∏ (1 - q^(offset + step·n))` for `n ≥ start_index`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ProgressionFactorSpec {
    offset: usize,
    step: usize,
    start_index: usize,
}

impl ProgressionFactorSpec {
    pub fn new(offset: usize, step: usize, start_index: usize) -> Result<Self> {
        if step == 0 {
            return Err(SeriesError::ZeroStep);
        }
        if start_index > 1 {
            return Err(SeriesError::BadStartIndex(start_index));
        }
        if offset + step * start_index == 0 {
            return Err(SeriesError::ZeroExponent {
                offset,
                step,
                start_index,
            });
        }
        Ok(ProgressionFactorSpec {
            offset,
            step,
            start_index,
        })
    }

    pub fn offset(&self) -> usize {
        self.offset
    }

    pub fn step(&self) -> usize {
        self.step
    }

    pub fn start_index(&self) -> usize {
        self.start_index
    }

    /// Exponents of the family, ascending, up to and including `limit`.
    pub fn exponents(&self, limit: usize) -> impl Iterator<Item = usize> {
        let first = self.offset + self.step * self.start_index;
        (first..=limit).step_by(self.step)
    }
}

/// Expands the product of every factor family, truncated at `order`.
///
/// Each binomial is applied in place, so a factor `1 - q^e` costs
/// `O(order - e)` rather than a dense multiplication.
pub fn progression_product(
    factors: &[ProgressionFactorSpec],
    order: usize,
) -> Result<TruncatedSeries> {
    if factors.is_empty() {
        return Err(SeriesError::EmptyProduct);
    }
    let mut acc = TruncatedSeries::one(order);
    for spec in factors {
        for e in spec.exponents(order) {
            acc.mul_one_minus_monomial(e);
        }
    }
    Ok(acc)
}

/// `∏_{n≥1} (1 - q^n)` truncated at `order`.
pub fn euler_product(order: usize) -> TruncatedSeries {
    let all = ProgressionFactorSpec::new(0, 1, 1).expect("valid family");
    progression_product(&[all], order).expect("non-empty")
}

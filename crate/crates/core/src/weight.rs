//! Integer weights with an overflow-checked fast path.
//!
//! Letter costs are scaled to a common denominator so that every fixpoint
//! runs over integers. Computations first try `i128` and fall back to
//! `BigInt` when a sum overflows.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::model::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Overflow;

pub(crate) trait Weight: Clone + Ord + Debug {
    fn zero() -> Self;
    fn from_big(b: &BigInt) -> Result<Self, Overflow>;
    fn checked_add(&self, other: &Self) -> Result<Self, Overflow>;
    fn to_big(&self) -> BigInt;
}

impl Weight for i128 {
    fn zero() -> Self {
        0
    }
    fn from_big(b: &BigInt) -> Result<Self, Overflow> {
        b.to_i128().ok_or(Overflow)
    }
    fn checked_add(&self, other: &Self) -> Result<Self, Overflow> {
        i128::checked_add(*self, *other).ok_or(Overflow)
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Weight for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn from_big(b: &BigInt) -> Result<Self, Overflow> {
        Ok(b.clone())
    }
    fn checked_add(&self, other: &Self) -> Result<Self, Overflow> {
        Ok(self + other)
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

/// A weight extended with both infinities. Variant order gives the total
/// order `NegInf < Fin(_) < PosInf`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) enum Ext<W> {
    NegInf,
    Fin(W),
    PosInf,
}

impl<W: Weight> Ext<W> {
    pub fn plus(&self, other: &Self) -> Result<Self, Overflow> {
        Ok(match (self, other) {
            (Ext::PosInf, _) | (_, Ext::PosInf) => Ext::PosInf,
            (Ext::NegInf, _) | (_, Ext::NegInf) => Ext::NegInf,
            (Ext::Fin(a), Ext::Fin(b)) => Ext::Fin(a.checked_add(b)?),
        })
    }
}

/// Rational costs rescaled to integers by a common positive denominator.
#[derive(Debug, Clone)]
pub(crate) struct Scaled {
    pub denominator: BigInt,
    pub values: Vec<BigInt>,
}

impl Scaled {
    /// Scales `costs[i] - shift` for every `i`.
    pub fn shifted(costs: &[Rational], shift: &Rational) -> Self {
        let mut den = shift.denom().clone();
        for c in costs {
            den = den.lcm(c.denom());
        }
        let scale = |r: &Rational| -> BigInt { r.numer() * (&den / r.denom()) };
        let s = scale(shift);
        let values = costs.iter().map(|c| scale(c) - &s).collect();
        Scaled {
            denominator: den,
            values,
        }
    }

    pub fn to_rational(&self, w: &BigInt) -> Rational {
        Rational::new(w.clone(), self.denominator.clone())
    }

    pub fn convert<W: Weight>(&self) -> Result<Vec<W>, Overflow> {
        self.values.iter().map(W::from_big).collect()
    }
}

/// Runs `f` on `i128` weights and retries on `BigInt` after an overflow.
pub(crate) fn with_fallback<T>(
    mut fast: impl FnMut() -> Result<T, Overflow>,
    slow: impl FnOnce() -> T,
) -> T {
    match fast() {
        Ok(v) => v,
        Err(Overflow) => {
            log::debug!("i128 overflow, retrying with big integers");
            slow()
        }
    }
}

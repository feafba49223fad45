//! Counters for the subset-counting dynamic programs.
//!
//! A table over `m` players never holds a count above `2^m`, so `u128` is
//! exact whenever `m ≤ 127`. Larger games fall back to `BigUint`.

use num_bigint::BigUint;
use num_traits::{One, Zero};

/// Largest number of players whose subset counts are guaranteed to fit `u128`.
pub(crate) const U128_MAX_PLAYERS: usize = 127;

pub(crate) trait Count: Clone + Send + Sync + core::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&mut self, other: &Self);
    fn sub(&mut self, other: &Self);
    fn to_big(&self) -> BigUint;
}

impl Count for u128 {
    #[inline]
    fn zero() -> Self {
        0
    }
    #[inline]
    fn one() -> Self {
        1
    }
    #[inline]
    fn add(&mut self, other: &Self) {
        *self += *other;
    }
    #[inline]
    fn sub(&mut self, other: &Self) {
        *self -= *other;
    }
    fn to_big(&self) -> BigUint {
        BigUint::from(*self)
    }
}

impl Count for BigUint {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn add(&mut self, other: &Self) {
        *self += other;
    }
    fn sub(&mut self, other: &Self) {
        *self -= other;
    }
    fn to_big(&self) -> BigUint {
        self.clone()
    }
}

/// Dispatches a generic counting routine on the narrowest exact counter.
macro_rules! with_counter {
    ($players:expr, $C:ident => $body:expr) => {
        if $players <= $crate::count::U128_MAX_PLAYERS {
            type $C = u128;
            $body
        } else {
            type $C = ::num_bigint::BigUint;
            $body
        }
    };
}
pub(crate) use with_counter;

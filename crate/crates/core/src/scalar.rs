//! Entry types a [`Partition`](crate::Partition) can be built over.
//!
//! Partition algebra only needs exact unsigned integer arithmetic, so any
//! fixed-width unsigned primitive works as long as products stay in range;
//! [`BigUint`] removes the range limit entirely. Code that needs to reason
//! about magnitudes (norms, valuations, the catalyst construction) lifts
//! entries to `BigUint` through [`Entry::to_big`].

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{CheckedAdd, CheckedMul, ToPrimitive, Unsigned};

pub trait Entry:
    Clone
    + Ord
    + Hash
    + Debug
    + Display
    + Send
    + Sync
    + Integer
    + Unsigned
    + CheckedAdd
    + CheckedMul
    + 'static
{
    fn to_big(&self) -> BigUint;

    /// Narrowing conversion; `None` when `v` does not fit.
    fn from_big(v: &BigUint) -> Option<Self>;

    fn from_u64(v: u64) -> Option<Self> {
        Self::from_big(&BigUint::from(v))
    }
}

macro_rules! impl_entry_prim {
    ($($t:ty => $to:ident),* $(,)?) => {$(
        impl Entry for $t {
            #[inline]
            fn to_big(&self) -> BigUint {
                BigUint::from(*self)
            }

            #[inline]
            fn from_big(v: &BigUint) -> Option<Self> {
                v.$to().and_then(|x| <$t>::try_from(x).ok())
            }
        }
    )*};
}

impl_entry_prim!(
    u8 => to_u64,
    u16 => to_u64,
    u32 => to_u64,
    u64 => to_u64,
    u128 => to_u128,
    usize => to_u64,
);

impl Entry for BigUint {
    #[inline]
    fn to_big(&self) -> BigUint {
        self.clone()
    }

    #[inline]
    fn from_big(v: &BigUint) -> Option<Self> {
        Some(v.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn narrowing_rejects_out_of_range() {
        assert_eq!(<u8 as Entry>::from_big(&BigUint::from(255u32)), Some(255u8));
        assert_eq!(<u8 as Entry>::from_big(&BigUint::from(256u32)), None);
        let huge = BigUint::from(u64::MAX) * 4u32;
        assert_eq!(<u64 as Entry>::from_big(&huge), None);
        assert!(<u128 as Entry>::from_big(&huge).is_some());
        assert_eq!(<BigUint as Entry>::from_big(&huge), Some(huge.clone()));
    }
}

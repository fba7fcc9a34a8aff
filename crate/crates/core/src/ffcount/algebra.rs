//! Twisted counts are written once, generically over the ring they land in:
//! integers at a fixed `q`, or `Z[L]` where `L` stands for `q` itself.
//! Running the same formula through both backends is what ties symbolic
//! classes to numeric counts.

use std::fmt;

use super::CountingSequence;
use crate::classes::MotivicClass;
use crate::error::{Error, Result};

pub trait CountAlgebra: Sync {
    type Value: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync;

    fn int(&self, v: i128) -> Self::Value;
    /// Image of `L`.
    fn lefschetz(&self) -> Self::Value;
    fn add(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn sub(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn mul(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    /// `N_m` of a base variety.
    fn base_count(&self, seq: &CountingSequence, m: u32) -> Result<Self::Value>;
    /// Division by a group order, failing unless exact.
    fn div_exact(&self, a: &Self::Value, d: usize) -> Result<Self::Value>;

    fn l_power(&self, e: u32) -> Self::Value {
        let l = self.lefschetz();
        (0..e).fold(self.int(1), |acc, _| self.mul(&acc, &l))
    }

    /// Count of `P^m` over `F_{q^k}`: `Σ_{j ≤ m} L^{jk}`.
    fn projective(&self, m: u32, k: u32) -> Self::Value {
        (0..=m).fold(self.int(0), |acc, j| self.add(&acc, &self.l_power(j * k)))
    }

    fn torus(&self, d: u32, k: u32) -> Self::Value {
        let t = self.sub(&self.l_power(k), &self.int(1));
        (0..d).fold(self.int(1), |acc, _| self.mul(&acc, &t))
    }

    fn sum<I: IntoIterator<Item = Self::Value>>(&self, it: I) -> Self::Value {
        it.into_iter()
            .fold(self.int(0), |acc, x| self.add(&acc, &x))
    }
}

/// Integer counts at a fixed prime power `q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Numeric {
    pub q: u64,
}

impl CountAlgebra for Numeric {
    type Value = i128;

    fn int(&self, v: i128) -> i128 {
        v
    }

    fn lefschetz(&self) -> i128 {
        self.q as i128
    }

    fn add(&self, a: &i128, b: &i128) -> i128 {
        a.checked_add(*b).expect("count overflow")
    }

    fn sub(&self, a: &i128, b: &i128) -> i128 {
        a.checked_sub(*b).expect("count overflow")
    }

    fn mul(&self, a: &i128, b: &i128) -> i128 {
        a.checked_mul(*b).expect("count overflow")
    }

    fn base_count(&self, seq: &CountingSequence, m: u32) -> Result<i128> {
        seq.count(self.q, m)
    }

    fn div_exact(&self, a: &i128, d: usize) -> Result<i128> {
        if a % d as i128 != 0 {
            return Err(Error::NonIntegralBurnside {
                sum: a.to_string(),
                order: d,
            });
        }
        Ok(a / d as i128)
    }
}

/// Count polynomials in `Z[L]`; only polynomial base sequences are allowed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Symbolic;

impl CountAlgebra for Symbolic {
    type Value = MotivicClass;

    fn int(&self, v: i128) -> MotivicClass {
        MotivicClass::int(v)
    }

    fn lefschetz(&self) -> MotivicClass {
        MotivicClass::lefschetz()
    }

    fn add(&self, a: &MotivicClass, b: &MotivicClass) -> MotivicClass {
        a + b
    }

    fn sub(&self, a: &MotivicClass, b: &MotivicClass) -> MotivicClass {
        a - b
    }

    fn mul(&self, a: &MotivicClass, b: &MotivicClass) -> MotivicClass {
        a * b
    }

    fn base_count(&self, seq: &CountingSequence, m: u32) -> Result<MotivicClass> {
        match seq.class() {
            Some(c) => Ok(c.l_dilate(m)),
            None => Err(Error::Unsupported(
                "table-backed sequences have no symbolic count polynomial".into(),
            )),
        }
    }

    fn div_exact(&self, a: &MotivicClass, d: usize) -> Result<MotivicClass> {
        a.div_exact(d as i128)
            .ok_or_else(|| Error::NonIntegralBurnside {
                sum: a.to_string(),
                order: d,
            })
    }
}

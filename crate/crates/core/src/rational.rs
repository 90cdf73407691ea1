//! Exact rational-valued functions on a carrier.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::algebra::{median3, MedianAlgebra};
use crate::elements::ElementSet;
use crate::error::{Error, Result};
use crate::maps::MpWitness;

pub type Rational = BigRational;

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// A function `{0, .., n-1} -> Q` stored as exact rationals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalFunctionTable {
    values: Vec<Rational>,
}

impl RationalFunctionTable {
    pub fn new(values: Vec<Rational>) -> Self {
        RationalFunctionTable { values }
    }

    /// From `(numerator, denominator)` pairs; a zero denominator names its index.
    pub fn from_pairs(pairs: &[(BigInt, BigInt)]) -> Result<Self> {
        let mut values = Vec::with_capacity(pairs.len());
        for (i, (num, den)) in pairs.iter().enumerate() {
            if den.is_zero() {
                return Err(Error::malformed(format!("value at index {i} has zero denominator")));
            }
            values.push(Rational::new(num.clone(), den.clone()));
        }
        Ok(RationalFunctionTable { values })
    }

    pub fn from_ints(values: &[i64]) -> Self {
        RationalFunctionTable {
            values: values.iter().map(|&v| int(v)).collect(),
        }
    }

    pub fn constant(n: usize, c: Rational) -> Self {
        RationalFunctionTable { values: vec![c; n] }
    }

    /// `1` on `s`, `0` elsewhere.
    pub fn indicator(s: &ElementSet) -> Self {
        RationalFunctionTable {
            values: (0..s.universe())
                .map(|x| if s.contains(x) { Rational::one() } else { Rational::zero() })
                .collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn get(&self, x: usize) -> &Rational {
        &self.values[x]
    }

    pub fn add(&self, other: &Self) -> Self {
        RationalFunctionTable {
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        RationalFunctionTable {
            values: self.values.iter().map(|a| a * c).collect(),
        }
    }

    /// `x -> f(g(x))` for a permutation (or any self-map) `g` of the carrier.
    pub fn compose(&self, g: &[usize]) -> Self {
        RationalFunctionTable {
            values: g.iter().map(|&gx| self.values[gx].clone()).collect(),
        }
    }

    pub fn is_constant(&self) -> bool {
        self.values.windows(2).all(|w| w[0] == w[1])
    }

    /// Distinct values in increasing order.
    pub fn distinct_values(&self) -> Vec<Rational> {
        let mut v = self.values.clone();
        v.sort();
        v.dedup();
        v
    }

    /// `{x : f(x) <= a}`.
    pub fn sublevel(&self, a: &Rational) -> ElementSet {
        ElementSet::from_members(self.n(), (0..self.n()).filter(|&x| &self.values[x] <= a))
    }

    /// `{x : f(x) >= b}`.
    pub fn superlevel(&self, b: &Rational) -> ElementSet {
        ElementSet::from_members(self.n(), (0..self.n()).filter(|&x| &self.values[x] >= b))
    }

    /// Lexicographically least triple breaking `f(m(x,y,z)) = med(f(x), f(y), f(z))`,
    /// with the median on the target taken in the linear order of Q.
    pub fn mp_witness(&self, a: &MedianAlgebra) -> Result<MpWitness> {
        if self.n() != a.n() {
            return Err(Error::precondition(format!(
                "function on {} points used with carrier of size {}",
                self.n(),
                a.n()
            )));
        }
        let f = &self.values;
        for x in 0..a.n() {
            for y in 0..a.n() {
                for z in 0..a.n() {
                    if f[a.median(x, y, z)] != *median3(&f[x], &f[y], &f[z]) {
                        return Ok(Some([x, y, z]));
                    }
                }
            }
        }
        Ok(None)
    }

    pub fn is_mp(&self, a: &MedianAlgebra) -> Result<bool> {
        Ok(self.mp_witness(a)?.is_none())
    }
}

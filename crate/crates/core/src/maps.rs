//! Median-preserving maps between finite median algebras.

use crate::algebra::MedianAlgebra;
use crate::elements::ElementSet;
use crate::error::{Error, Result};

/// A total map `source -> target` given by its values on source ids.
#[derive(Debug, Clone)]
pub struct MpMap {
    pub source: MedianAlgebra,
    pub target: MedianAlgebra,
    pub values: Vec<usize>,
}

/// Result of an MP check: `None` when the identity holds everywhere,
/// otherwise the lexicographically least triple where it fails.
pub type MpWitness = Option<[usize; 3]>;

impl MpMap {
    pub fn new(source: MedianAlgebra, target: MedianAlgebra, values: Vec<usize>) -> Result<Self> {
        if values.len() != source.n() {
            return Err(Error::malformed(format!(
                "map has {} values for a source of size {}",
                values.len(),
                source.n()
            )));
        }
        if let Some(i) = values.iter().position(|&v| v >= target.n()) {
            return Err(Error::malformed(format!(
                "value at index {i} is {} outside target of size {}",
                values[i],
                target.n()
            )));
        }
        Ok(MpMap { source, target, values })
    }

    /// First triple violating `f(m(x,y,z)) = m(f(x),f(y),f(z))`.
    pub fn mp_witness(&self) -> MpWitness {
        let f = &self.values;
        let n = self.source.n();
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if f[self.source.median(x, y, z)] != self.target.median(f[x], f[y], f[z]) {
                        return Some([x, y, z]);
                    }
                }
            }
        }
        None
    }

    pub fn is_mp(&self) -> bool {
        self.mp_witness().is_none()
    }

    /// `f⁻¹(c)` for a subset of the target.
    pub fn preimage(&self, c: &ElementSet) -> ElementSet {
        ElementSet::from_members(
            self.source.n(),
            (0..self.source.n()).filter(|&x| c.contains(self.values[x])),
        )
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = ElementSet::empty(self.target.n());
        self.values.iter().all(|&v| seen.insert(v))
    }
}

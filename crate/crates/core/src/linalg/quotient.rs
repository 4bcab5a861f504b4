//! Bases of subquotients `Z / B` of a coordinate space, with exact
//! coordinates of classes.
//!
//! `Z` is given by vectors with pairwise distinct lows (the transform
//! columns of a column reduction have this shape), `B ⊆ Z` by arbitrary
//! spanning vectors. The representatives are the `Z` vectors whose low is not
//! the low of any echelonized boundary.

use num_rational::BigRational;
use num_traits::Zero;
use rustc_hash::FxHashMap;

use super::dense::QMatrix;
use super::sparse::{echelon, IntVec, QVec};

#[derive(Debug, Clone)]
pub struct QuotientBasis {
    reps: Vec<IntVec>,
    rep_low: FxHashMap<u32, usize>,
    bnd: Vec<IntVec>,
    bnd_low: FxHashMap<u32, usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NotInSubspace;

impl QuotientBasis {
    pub fn new(cycles: Vec<IntVec>, boundaries: &[IntVec]) -> Self {
        let bnd = echelon(boundaries);
        let bnd_low: FxHashMap<u32, usize> =
            bnd.iter().enumerate().map(|(i, b)| (b.low().unwrap(), i)).collect();
        let reps: Vec<IntVec> =
            cycles.into_iter().filter(|z| !bnd_low.contains_key(&z.low().unwrap())).collect();
        let rep_low = reps.iter().enumerate().map(|(i, z)| (z.low().unwrap(), i)).collect();
        QuotientBasis { reps, rep_low, bnd, bnd_low }
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn representatives(&self) -> &[IntVec] {
        &self.reps
    }

    /// Coordinates of the class of `z` in the representative basis.
    pub fn coordinates(&self, z: &QVec) -> Result<Vec<BigRational>, NotInSubspace> {
        let mut coords = vec![BigRational::zero(); self.reps.len()];
        let mut c = z.clone();
        while let Some(low) = c.low() {
            let lead = c.low_value().unwrap().clone();
            let (basis, slot) = if let Some(&k) = self.bnd_low.get(&low) {
                (&self.bnd[k], None)
            } else if let Some(&k) = self.rep_low.get(&low) {
                (&self.reps[k], Some(k))
            } else {
                return Err(NotInSubspace);
            };
            let pivot = BigRational::from_integer(basis.low_value().unwrap().clone());
            let f = &lead / &pivot;
            c = c.axpy(&-f.clone(), &basis.to_rational());
            if let Some(k) = slot {
                coords[k] += f;
            }
        }
        Ok(coords)
    }

    /// Matrix whose columns are the coordinates of the given vectors.
    pub fn coordinate_matrix(&self, zs: &[QVec]) -> Result<QMatrix, NotInSubspace> {
        let cols = zs.iter().map(|z| self.coordinates(z)).collect::<Result<Vec<_>, _>>()?;
        Ok(QMatrix::from_columns(&cols, self.dim()))
    }
}

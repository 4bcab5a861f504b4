//! Sparse vectors and fraction-free column reduction over the integers.
//!
//! Reduction runs on `i64` with checked arithmetic first; any overflow aborts
//! the attempt and the caller reruns on `BigInt`. Ranks and kernels are exact
//! over the rationals either way.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rustc_hash::FxHashMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Overflow;

/// Integer coefficient usable in fraction-free elimination.
pub trait IntCoeff: Clone + PartialEq + std::fmt::Debug + Send + Sync + 'static {
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn is_unit(&self) -> bool;
    fn mul(&self, o: &Self) -> Result<Self, Overflow>;
    fn sub(&self, o: &Self) -> Result<Self, Overflow>;
    fn gcd(&self, o: &Self) -> Result<Self, Overflow>;
    fn div_exact(&self, o: &Self) -> Self;
    fn to_bigint(&self) -> BigInt;
}

impl IntCoeff for i64 {
    fn from_i64(v: i64) -> Self {
        v
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_unit(&self) -> bool {
        *self == 1 || *self == -1
    }
    fn mul(&self, o: &Self) -> Result<Self, Overflow> {
        self.checked_mul(*o).ok_or(Overflow)
    }
    fn sub(&self, o: &Self) -> Result<Self, Overflow> {
        self.checked_sub(*o).ok_or(Overflow)
    }
    fn gcd(&self, o: &Self) -> Result<Self, Overflow> {
        let g = self.unsigned_abs().gcd(&o.unsigned_abs());
        i64::try_from(g).map_err(|_| Overflow)
    }
    fn div_exact(&self, o: &Self) -> Self {
        self / o
    }
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl IntCoeff for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_unit(&self) -> bool {
        self.abs().is_one()
    }
    fn mul(&self, o: &Self) -> Result<Self, Overflow> {
        Ok(self * o)
    }
    fn sub(&self, o: &Self) -> Result<Self, Overflow> {
        Ok(self - o)
    }
    fn gcd(&self, o: &Self) -> Result<Self, Overflow> {
        Ok(Integer::gcd(self, o))
    }
    fn div_exact(&self, o: &Self) -> Self {
        self / o
    }
    fn to_bigint(&self) -> BigInt {
        self.clone()
    }
}

/// Sparse vector with strictly increasing indices and no stored zeros.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SparseVec<T> {
    idx: Vec<u32>,
    val: Vec<T>,
}

pub type IntVec = SparseVec<BigInt>;
pub type QVec = SparseVec<BigRational>;

impl<T> SparseVec<T> {
    pub fn new() -> Self {
        SparseVec { idx: Vec::new(), val: Vec::new() }
    }

    pub fn is_empty(&self) -> bool {
        self.idx.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.idx.len()
    }

    /// Largest index with a nonzero entry.
    pub fn low(&self) -> Option<u32> {
        self.idx.last().copied()
    }

    pub fn low_value(&self) -> Option<&T> {
        self.val.last()
    }

    pub fn get(&self, i: u32) -> Option<&T> {
        self.idx.binary_search(&i).ok().map(|p| &self.val[p])
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &T)> + '_ {
        self.idx.iter().copied().zip(self.val.iter())
    }

    pub fn indices(&self) -> &[u32] {
        &self.idx
    }

    pub fn values(&self) -> &[T] {
        &self.val
    }

    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> SparseVec<U> {
        SparseVec { idx: self.idx.clone(), val: self.val.iter().map(f).collect() }
    }

    /// Reindex entries through `f`, which must be strictly increasing on the support.
    pub fn reindex_monotone(&self, f: impl Fn(u32) -> u32) -> SparseVec<T>
    where
        T: Clone,
    {
        let idx: Vec<u32> = self.idx.iter().map(|&i| f(i)).collect();
        debug_assert!(idx.windows(2).all(|w| w[0] < w[1]));
        SparseVec { idx, val: self.val.clone() }
    }
}

impl<T: IntCoeff> SparseVec<T> {
    /// Build from arbitrary `(index, value)` pairs, summing duplicates.
    pub fn from_pairs(mut pairs: Vec<(u32, T)>) -> Result<Self, Overflow> {
        pairs.sort_by_key(|p| p.0);
        let mut out = SparseVec::new();
        for (i, v) in pairs {
            if out.idx.last() == Some(&i) {
                let last: &mut T = out.val.last_mut().unwrap();
                let neg = T::from_i64(0).sub(&v)?;
                *last = last.sub(&neg)?;
            } else {
                out.idx.push(i);
                out.val.push(v);
            }
        }
        out.drop_zeros();
        Ok(out)
    }

    pub fn unit(i: u32) -> Self {
        SparseVec { idx: vec![i], val: vec![T::from_i64(1)] }
    }

    fn drop_zeros(&mut self) {
        if self.val.iter().all(|v| !v.is_zero()) {
            return;
        }
        let mut k = 0;
        for j in 0..self.idx.len() {
            if !self.val[j].is_zero() {
                self.idx.swap(k, j);
                self.val.swap(k, j);
                k += 1;
            }
        }
        self.idx.truncate(k);
        self.val.truncate(k);
    }

    /// `beta * self - alpha * other`.
    pub fn combine(&self, beta: &T, other: &Self, alpha: &T) -> Result<Self, Overflow> {
        let zero = T::from_i64(0);
        let mut idx = Vec::with_capacity(self.idx.len() + other.idx.len());
        let mut val = Vec::with_capacity(self.idx.len() + other.idx.len());
        let (mut a, mut b) = (0, 0);
        while a < self.idx.len() || b < other.idx.len() {
            let ia = self.idx.get(a).copied().unwrap_or(u32::MAX);
            let ib = other.idx.get(b).copied().unwrap_or(u32::MAX);
            let (i, v) = if ia < ib {
                a += 1;
                (ia, beta.mul(&self.val[a - 1])?)
            } else if ib < ia {
                b += 1;
                (ib, zero.sub(&alpha.mul(&other.val[b - 1])?)?)
            } else {
                a += 1;
                b += 1;
                (ia, beta.mul(&self.val[a - 1])?.sub(&alpha.mul(&other.val[b - 1])?)?)
            };
            if !v.is_zero() {
                idx.push(i);
                val.push(v);
            }
        }
        Ok(SparseVec { idx, val })
    }

    pub fn content(&self) -> Result<T, Overflow> {
        let mut g = T::from_i64(0);
        for v in &self.val {
            g = g.gcd(v)?;
            if g.is_unit() {
                break;
            }
        }
        Ok(g)
    }

    pub fn divide_by(&mut self, g: &T) {
        for v in &mut self.val {
            *v = v.div_exact(g);
        }
    }

    pub fn to_bigint(&self) -> IntVec {
        self.map(|v| v.to_bigint())
    }
}

impl IntVec {
    pub fn to_rational(&self) -> QVec {
        self.map(|v| BigRational::from_integer(v.clone()))
    }
}

impl SparseVec<i64> {
    pub fn from_i64_pairs(pairs: Vec<(u32, i64)>) -> Self {
        SparseVec::from_pairs(pairs).expect("small integer vector")
    }
}

impl QVec {
    pub fn from_rational_pairs(mut pairs: Vec<(u32, BigRational)>) -> Self {
        pairs.sort_by_key(|p| p.0);
        let mut out = QVec::new();
        for (i, v) in pairs {
            if out.idx.last() == Some(&i) {
                *out.val.last_mut().unwrap() += v;
            } else {
                out.idx.push(i);
                out.val.push(v);
            }
        }
        out.retain_nonzero();
        out
    }

    fn retain_nonzero(&mut self) {
        let mut k = 0;
        for j in 0..self.idx.len() {
            if !self.val[j].is_zero() {
                self.idx.swap(k, j);
                self.val.swap(k, j);
                k += 1;
            }
        }
        self.idx.truncate(k);
        self.val.truncate(k);
    }

    /// `self + f * other`.
    pub fn axpy(&self, f: &BigRational, other: &QVec) -> QVec {
        let mut idx = Vec::with_capacity(self.idx.len() + other.idx.len());
        let mut val = Vec::with_capacity(self.idx.len() + other.idx.len());
        let (mut a, mut b) = (0, 0);
        while a < self.idx.len() || b < other.idx.len() {
            let ia = self.idx.get(a).copied().unwrap_or(u32::MAX);
            let ib = other.idx.get(b).copied().unwrap_or(u32::MAX);
            let (i, v) = if ia < ib {
                a += 1;
                (ia, self.val[a - 1].clone())
            } else if ib < ia {
                b += 1;
                (ib, f * &other.val[b - 1])
            } else {
                a += 1;
                b += 1;
                (ia, &self.val[a - 1] + f * &other.val[b - 1])
            };
            if !v.is_zero() {
                idx.push(i);
                val.push(v);
            }
        }
        QVec { idx, val }
    }

    pub fn scale(&self, f: &BigRational) -> QVec {
        if f.is_zero() {
            return QVec::new();
        }
        self.map(|v| v * f)
    }
}

/// Result of reducing a list of columns by repeated elimination of their
/// largest index.
#[derive(Debug, Clone)]
pub struct ColumnReduction<T> {
    /// Reduced columns; nonzero ones have pairwise distinct lows.
    pub reduced: Vec<SparseVec<T>>,
    /// `low -> column` for the nonzero reduced columns.
    pub pivots: FxHashMap<u32, u32>,
    /// `reduced[j] = sum_k transform[j][k] * input[k]`, with `transform[j]` having low `j`.
    pub transform: Option<Vec<SparseVec<T>>>,
}

impl<T: IntCoeff> ColumnReduction<T> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Kernel vectors (columns whose reduction vanished), each with low equal
    /// to its own column index.
    pub fn kernel(&self) -> Vec<SparseVec<T>> {
        let t = self.transform.as_ref().expect("kernel requires a tracked reduction");
        self.reduced
            .iter()
            .zip(t)
            .filter(|(r, _)| r.is_empty())
            .map(|(_, v)| v.clone())
            .collect()
    }

    pub fn nonzero_columns(&self) -> impl Iterator<Item = &SparseVec<T>> {
        self.reduced.iter().filter(|c| !c.is_empty())
    }
}

/// Fraction-free reduction: each column is repeatedly combined with the
/// earlier column sharing its low until the low is new or the column is zero.
pub fn reduce_columns<T: IntCoeff>(
    cols: &[SparseVec<T>],
    track: bool,
) -> Result<ColumnReduction<T>, Overflow> {
    let mut reduced: Vec<SparseVec<T>> = Vec::with_capacity(cols.len());
    let mut transform: Vec<SparseVec<T>> = Vec::new();
    let mut pivots: FxHashMap<u32, u32> = FxHashMap::default();
    for (j, col) in cols.iter().enumerate() {
        let mut c = col.clone();
        let mut v = if track { SparseVec::unit(j as u32) } else { SparseVec::new() };
        while let Some(low) = c.low() {
            let Some(&k) = pivots.get(&low) else {
                pivots.insert(low, j as u32);
                break;
            };
            let p = &reduced[k as usize];
            let a = c.low_value().unwrap().clone();
            let b = p.low_value().unwrap().clone();
            let g = a.gcd(&b)?;
            let (beta, alpha) = (b.div_exact(&g), a.div_exact(&g));
            c = c.combine(&beta, p, &alpha)?;
            if track {
                v = v.combine(&beta, &transform[k as usize], &alpha)?;
            }
            if !beta.is_unit() {
                normalize(&mut c, &mut v, track)?;
            }
        }
        if c.is_empty() && track {
            let g = v.content()?;
            if !g.is_unit() && !g.is_zero() {
                v.divide_by(&g);
            }
        }
        reduced.push(c);
        if track {
            transform.push(v);
        }
    }
    Ok(ColumnReduction { reduced, pivots, transform: track.then_some(transform) })
}

fn normalize<T: IntCoeff>(
    c: &mut SparseVec<T>,
    v: &mut SparseVec<T>,
    track: bool,
) -> Result<(), Overflow> {
    let mut g = c.content()?;
    if track && !g.is_unit() {
        g = g.gcd(&v.content()?)?;
    }
    if !g.is_unit() && !g.is_zero() {
        c.divide_by(&g);
        if track {
            v.divide_by(&g);
        }
    }
    Ok(())
}

fn widen(cols: &[SparseVec<i64>]) -> Vec<IntVec> {
    cols.iter().map(|c| c.to_bigint()).collect()
}

/// Exact rank over the rationals.
pub fn rank(cols: &[SparseVec<i64>]) -> usize {
    match reduce_columns(cols, false) {
        Ok(r) => r.rank(),
        Err(Overflow) => reduce_columns(&widen(cols), false).expect("bigint").rank(),
    }
}

/// Full reduction with transform, widened to `BigInt` on overflow.
pub fn reduce_tracked(cols: &[SparseVec<i64>]) -> ColumnReduction<BigInt> {
    match reduce_columns(cols, true) {
        Ok(r) => ColumnReduction {
            reduced: r.reduced.iter().map(|c| c.to_bigint()).collect(),
            pivots: r.pivots,
            transform: r.transform.map(|t| t.iter().map(|c| c.to_bigint()).collect()),
        },
        Err(Overflow) => reduce_columns(&widen(cols), true).expect("bigint"),
    }
}

/// Rank of arbitrary integer columns.
pub fn rank_big(cols: &[IntVec]) -> usize {
    reduce_columns(cols, false).expect("bigint").rank()
}

/// Echelon basis of the span of `cols`: nonzero reduced columns keyed by low.
pub fn echelon(cols: &[IntVec]) -> Vec<IntVec> {
    reduce_columns(cols, false)
        .expect("bigint")
        .reduced
        .into_iter()
        .filter(|c| !c.is_empty())
        .collect()
}

/// Kernel basis of the map whose columns are `cols`.
pub fn kernel_big(cols: &[IntVec]) -> Vec<IntVec> {
    reduce_columns(cols, true).expect("bigint").kernel()
}

pub fn gcd_big(a: &BigInt, b: &BigInt) -> BigInt {
    Integer::gcd(a, b)
}

pub fn is_negative(v: &BigInt) -> bool {
    v.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(pairs: &[(u32, i64)]) -> SparseVec<i64> {
        SparseVec::from_i64_pairs(pairs.to_vec())
    }

    #[test]
    fn combine_cancels_and_merges() {
        let a = v(&[(0, 1), (2, 3)]);
        let b = v(&[(1, 2), (2, 3)]);
        let c = a.combine(&1, &b, &1).unwrap();
        assert_eq!(c, v(&[(0, 1), (1, -2)]));
    }

    #[test]
    fn rank_of_triangle_boundary() {
        // edges 01, 02, 12 over vertices 0,1,2
        let cols = vec![v(&[(0, -1), (1, 1)]), v(&[(0, -1), (2, 1)]), v(&[(1, -1), (2, 1)])];
        assert_eq!(rank(&cols), 2);
        let r = reduce_tracked(&cols);
        let ker = r.kernel();
        assert_eq!(ker.len(), 1);
        assert_eq!(ker[0].low(), Some(2));
    }

    #[test]
    fn overflow_falls_back_to_bigint() {
        let big = i64::MAX / 2;
        let cols = vec![v(&[(0, big), (1, 3)]), v(&[(0, 3), (1, big)])];
        assert_eq!(rank(&cols), 2);
        let cols = vec![v(&[(0, big), (1, 3)]), v(&[(0, 2 * 3), (1, 6)])];
        assert_eq!(rank(&cols), 2);
    }

    #[test]
    fn kernel_vectors_are_in_kernel() {
        let cols = vec![
            v(&[(0, 2), (1, 4)]),
            v(&[(0, 3), (1, 6)]),
            v(&[(0, 1), (2, 1)]),
            v(&[(1, 2), (2, -1)]),
        ];
        let r = reduce_tracked(&cols);
        for k in r.kernel() {
            let mut acc = vec![BigInt::zero(); 3];
            for (j, c) in k.iter() {
                for (i, x) in cols[j as usize].iter() {
                    acc[i as usize] += c * BigInt::from(*x);
                }
            }
            assert!(acc.iter().all(|x| num_traits::Zero::is_zero(x)));
        }
        assert_eq!(r.rank() + r.kernel().len(), 4);
    }
}

//! Invariant factors of integer matrices.
//!
//! Unit entries are eliminated sparsely first (Markowitz-style choice of the
//! sparsest row); whatever survives has no unit entries and is small enough
//! for a dense Smith normal form over `BigInt`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rustc_hash::{FxHashMap, FxHashSet};

use super::sparse::SparseVec;

/// Nonzero invariant factors (all positive, each dividing the next).
pub fn invariant_factors(cols: &[SparseVec<i64>]) -> Vec<BigInt> {
    let mut m = SparseInt::new(cols);
    let units = m.eliminate_units();
    let rest = m.into_dense();
    let mut factors = vec![BigInt::one(); units];
    factors.extend(dense_snf(rest));
    factors
}

struct SparseInt {
    cols: Vec<FxHashMap<u32, BigInt>>,
    row_cols: FxHashMap<u32, FxHashSet<u32>>,
    alive: Vec<bool>,
}

impl SparseInt {
    fn new(cols: &[SparseVec<i64>]) -> Self {
        let mut row_cols: FxHashMap<u32, FxHashSet<u32>> = FxHashMap::default();
        let cols: Vec<FxHashMap<u32, BigInt>> = cols
            .iter()
            .enumerate()
            .map(|(j, c)| {
                c.iter()
                    .map(|(i, v)| {
                        row_cols.entry(i).or_default().insert(j as u32);
                        (i, BigInt::from(*v))
                    })
                    .collect()
            })
            .collect();
        let alive = vec![true; cols.len()];
        SparseInt { cols, row_cols, alive }
    }

    fn eliminate_units(&mut self) -> usize {
        let mut count = 0;
        loop {
            let mut order: Vec<usize> = (0..self.cols.len()).filter(|&j| self.alive[j]).collect();
            order.sort_by_key(|&j| self.cols[j].len());
            let mut progressed = false;
            for j in order {
                if !self.alive[j] || self.cols[j].is_empty() {
                    continue;
                }
                let best = self.cols[j]
                    .iter()
                    .filter(|(_, v)| v.abs().is_one())
                    .map(|(&r, _)| (self.row_cols.get(&r).map_or(0, |s| s.len()), r))
                    .min();
                let Some((_, r)) = best else { continue };
                self.pivot(j, r);
                count += 1;
                progressed = true;
            }
            if !progressed {
                return count;
            }
        }
    }

    fn pivot(&mut self, j: usize, r: u32) {
        let piv = self.cols[j][&r].clone();
        let pcol = std::mem::take(&mut self.cols[j]);
        self.alive[j] = false;
        for (&i, _) in &pcol {
            if let Some(s) = self.row_cols.get_mut(&i) {
                s.remove(&(j as u32));
            }
        }
        let others: Vec<u32> = self.row_cols.get(&r).map(|s| s.iter().copied().collect()).unwrap_or_default();
        for k in others {
            let k = k as usize;
            let f = &self.cols[k][&r] * &piv; // piv is a unit, so a/piv == a*piv
            for (&i, v) in &pcol {
                let e = self.cols[k].entry(i).or_insert_with(BigInt::zero);
                *e -= &f * v;
                if e.is_zero() {
                    self.cols[k].remove(&i);
                    if let Some(s) = self.row_cols.get_mut(&i) {
                        s.remove(&(k as u32));
                    }
                } else {
                    self.row_cols.entry(i).or_default().insert(k as u32);
                }
            }
        }
        // Row r now vanishes outside the pivot column.
        self.row_cols.remove(&r);
    }

    fn into_dense(self) -> Vec<Vec<BigInt>> {
        let cols: Vec<&FxHashMap<u32, BigInt>> =
            self.cols.iter().enumerate().filter(|(j, c)| self.alive[*j] && !c.is_empty()).map(|(_, c)| c).collect();
        let mut rows: Vec<u32> = cols.iter().flat_map(|c| c.keys().copied()).collect();
        rows.sort_unstable();
        rows.dedup();
        let pos: FxHashMap<u32, usize> = rows.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        let mut m = vec![vec![BigInt::zero(); cols.len()]; rows.len()];
        for (j, c) in cols.iter().enumerate() {
            for (r, v) in c.iter() {
                m[pos[r]][j] = v.clone();
            }
        }
        m
    }
}

/// Smith normal form diagonal of a dense integer matrix (nonzero part).
pub fn dense_snf(mut m: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !m[i][j].is_zero()
                    && best.map_or(true, |(bi, bj)| m[i][j].abs() < m[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        m.swap(t, bi);
        for row in m.iter_mut() {
            row.swap(t, bj);
        }
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if m[i][t].is_zero() {
                    continue;
                }
                let qt = m[i][t].div_floor(&m[t][t]);
                for j in t..cols {
                    let v = &m[i][j] - &qt * &m[t][j];
                    m[i][j] = v;
                }
                if !m[i][t].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                if m[t][j].is_zero() {
                    continue;
                }
                let qt = m[t][j].div_floor(&m[t][t]);
                for i in t..rows {
                    let v = &m[i][j] - &qt * &m[i][t];
                    m[i][j] = v;
                }
                if !m[t][j].is_zero() {
                    dirty = true;
                }
            }
            if !dirty {
                // divisibility of the trailing block
                let mut bad = None;
                'outer: for i in t + 1..rows {
                    for j in t + 1..cols {
                        if !(&m[i][j] % &m[t][t]).is_zero() {
                            bad = Some(i);
                            break 'outer;
                        }
                    }
                }
                match bad {
                    None => break,
                    Some(i) => {
                        for j in t..cols {
                            let v = &m[t][j] + &m[i][j];
                            m[t][j] = v;
                        }
                        continue;
                    }
                }
            }
            // move the smallest nonzero entry of row/col t back to the pivot
            let mut best = (t, t);
            for i in t..rows {
                if !m[i][t].is_zero() && m[i][t].abs() < m[best.0][best.1].abs() {
                    best = (i, t);
                }
            }
            for j in t..cols {
                if !m[t][j].is_zero() && m[t][j].abs() < m[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            if best.0 != t {
                m.swap(t, best.0);
            }
            if best.1 != t {
                for row in m.iter_mut() {
                    row.swap(t, best.1);
                }
            }
        }
        diag.push(m[t][t].abs());
        t += 1;
    }
    diag
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn dense_snf_of_classic_examples() {
        let m = vec![big(&[2, 4, 4]), big(&[-6, 6, 12]), big(&[10, -4, -16])];
        assert_eq!(dense_snf(m), big(&[2, 6, 12]));
        let m = vec![big(&[2, 0]), big(&[0, 3])];
        assert_eq!(dense_snf(m), big(&[1, 6]));
    }

    #[test]
    fn unit_elimination_then_dense() {
        let cols = vec![
            SparseVec::from_i64_pairs(vec![(0, 1), (1, 1)]),
            SparseVec::from_i64_pairs(vec![(0, 1), (1, -1)]),
        ];
        assert_eq!(invariant_factors(&cols), big(&[1, 2]));
    }
}

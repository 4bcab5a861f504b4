//! Finite groups given by multiplication tables.

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    labels: Vec<String>,
    /// `mult[a][b] = a·b`
    mult: Vec<Vec<u32>>,
    identity: u32,
    inverse: Vec<u32>,
}

impl FiniteGroup {
    /// Validates a multiplication table (associativity, identity, inverses).
    pub fn from_table(labels: Vec<String>, mult: Vec<Vec<u32>>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::BadGroup("empty group".into()));
        }
        if mult.len() != n || mult.iter().any(|r| r.len() != n || r.iter().any(|&x| x as usize >= n)) {
            return Err(Error::BadGroup("table is not n×n over the elements".into()));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| mult[e][a] as usize == a && mult[a][e] as usize == a))
            .ok_or_else(|| Error::BadGroup("no identity element".into()))? as u32;
        let mut inverse = vec![0; n];
        for a in 0..n {
            inverse[a] = (0..n)
                .find(|&b| mult[a][b] == identity && mult[b][a] == identity)
                .ok_or_else(|| Error::BadGroup(format!("{} has no inverse", labels[a])))? as u32;
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let ab = mult[a][b] as usize;
                    let bc = mult[b][c] as usize;
                    if mult[ab][c] != mult[a][bc] {
                        return Err(Error::BadGroup(format!(
                            "not associative at ({}, {}, {})",
                            labels[a], labels[b], labels[c]
                        )));
                    }
                }
            }
        }
        Ok(FiniteGroup { labels, mult, identity, inverse })
    }

    /// `Z/k` with elements `0..k` labelled by their residues.
    pub fn cyclic(k: usize) -> Self {
        let mult = (0..k).map(|a| (0..k).map(|b| ((a + b) % k) as u32).collect()).collect();
        let labels = (0..k).map(|a| a.to_string()).collect();
        Self::from_table(labels, mult).expect("cyclic table")
    }

    /// Group of permutations generated by `gens` (composition `(ab)(x) = a(b(x))`).
    /// Returns the group and the permutation of every element. Element
    /// labels are `e` and shortest words in `g0, g1, …`.
    pub fn generated_by_permutations(gens: &[Vec<u32>]) -> Result<(Self, Vec<Vec<u32>>)> {
        let n = gens.first().map_or(0, |g| g.len());
        let id: Vec<u32> = (0..n as u32).collect();
        let mut perms = vec![id.clone()];
        let mut labels = vec!["e".to_string()];
        let mut index: FxHashMap<Vec<u32>, u32> = FxHashMap::from_iter([(id, 0)]);
        let mut head = 0;
        while head < perms.len() {
            for (gi, g) in gens.iter().enumerate() {
                let p: Vec<u32> = perms[head].iter().map(|&x| g[x as usize]).collect();
                if !index.contains_key(&p) {
                    index.insert(p.clone(), perms.len() as u32);
                    let w = if head == 0 { format!("g{gi}") } else { format!("g{gi}*{}", labels[head]) };
                    labels.push(w);
                    perms.push(p);
                }
            }
            head += 1;
            if perms.len() > 10_000 {
                return Err(Error::BadGroup("generated group is too large".into()));
            }
        }
        let mult = perms
            .iter()
            .map(|a| {
                perms
                    .iter()
                    .map(|b| {
                        let ab: Vec<u32> = b.iter().map(|&x| a[x as usize]).collect();
                        index[&ab]
                    })
                    .collect()
            })
            .collect();
        Ok((Self::from_table(labels, mult)?, perms))
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn identity(&self) -> u32 {
        self.identity
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, g: u32) -> &str {
        &self.labels[g as usize]
    }

    pub fn element(&self, label: &str) -> Result<u32> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(|i| i as u32)
            .ok_or_else(|| Error::BadElement(label.to_string()))
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mult[a as usize][b as usize]
    }

    pub fn inv(&self, a: u32) -> u32 {
        self.inverse[a as usize]
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.order() as u32
    }

    pub fn element_order(&self, g: u32) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    pub fn conjugate(&self, h: u32, g: u32) -> u32 {
        self.mul(self.mul(h, g), self.inv(h))
    }

    pub fn conjugacy_classes(&self) -> Vec<Vec<u32>> {
        let mut seen = vec![false; self.order()];
        let mut out = Vec::new();
        for g in self.elements() {
            if seen[g as usize] {
                continue;
            }
            let mut class: Vec<u32> = self.elements().map(|h| self.conjugate(h, g)).collect();
            class.sort_unstable();
            class.dedup();
            for &c in &class {
                seen[c as usize] = true;
            }
            out.push(class);
        }
        out
    }

    /// Smallest subgroup containing `elems`.
    pub fn closure(&self, elems: &[u32]) -> Vec<u32> {
        let mut inside = vec![false; self.order()];
        inside[self.identity as usize] = true;
        let mut list = vec![self.identity];
        for &g in elems {
            if !inside[g as usize] {
                inside[g as usize] = true;
                list.push(g);
            }
        }
        let mut i = 0;
        while i < list.len() {
            for j in 0..=i {
                for (a, b) in [(list[i], list[j]), (list[j], list[i])] {
                    let c = self.mul(a, b);
                    if !inside[c as usize] {
                        inside[c as usize] = true;
                        list.push(c);
                    }
                }
            }
            i += 1;
        }
        list.sort_unstable();
        list
    }

    /// Every subgroup, as sorted element lists, smallest first.
    pub fn subgroups(&self) -> Vec<Vec<u32>> {
        let mut subs: Vec<Vec<u32>> = Vec::new();
        let mut seen = rustc_hash::FxHashSet::default();
        for g in self.elements() {
            let c = self.closure(&[g]);
            if seen.insert(c.clone()) {
                subs.push(c);
            }
        }
        let mut i = 0;
        while i < subs.len() {
            for j in 0..i {
                let mut gens = subs[i].clone();
                gens.extend(&subs[j]);
                let c = self.closure(&gens);
                if seen.insert(c.clone()) {
                    subs.push(c);
                }
            }
            i += 1;
        }
        subs.sort_by_key(|s| (s.len(), s.clone()));
        subs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_group_basics() {
        let g = FiniteGroup::cyclic(4);
        assert_eq!(g.order(), 4);
        assert_eq!(g.element_order(1), 4);
        assert_eq!(g.element_order(2), 2);
        assert_eq!(g.subgroups().len(), 3);
        assert_eq!(g.conjugacy_classes().len(), 4);
    }

    #[test]
    fn bad_tables_are_rejected() {
        let labels = vec!["a".to_string(), "b".to_string()];
        assert!(FiniteGroup::from_table(labels.clone(), vec![vec![0, 1], vec![1, 1]]).is_err());
        assert!(FiniteGroup::from_table(labels, vec![vec![0, 1]]).is_err());
    }

    #[test]
    fn symmetric_group_from_permutations() {
        let (g, perms) = FiniteGroup::generated_by_permutations(&[vec![1, 0, 2], vec![1, 2, 0]]).unwrap();
        assert_eq!(g.order(), 6);
        assert_eq!(perms.len(), 6);
        assert_eq!(g.conjugacy_classes().len(), 3);
        assert_eq!(g.subgroups().len(), 6);
    }
}

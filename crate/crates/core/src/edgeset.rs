use std::cmp::Ordering;
use std::fmt;

use crate::arith::Rational;
use crate::graph::EdgeId;
use num::{One, Zero};

/// A subset of the edges `0..universe` of a graph. Doubles as a 0/1 incidence vector.
///
/// Ordering is lexicographic on the ascending index sequence, so `{0,5} < {1}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct EdgeSet {
    universe: usize,
    words: Vec<u64>,
}

impl EdgeSet {
    pub fn empty(universe: usize) -> Self {
        EdgeSet { universe, words: vec![0; universe.div_ceil(64)] }
    }

    pub fn full(universe: usize) -> Self {
        let mut s = Self::empty(universe);
        for e in 0..universe {
            s.insert(e);
        }
        s
    }

    pub fn from_indices(universe: usize, indices: impl IntoIterator<Item = EdgeId>) -> Self {
        let mut s = Self::empty(universe);
        for e in indices {
            s.insert(e);
        }
        s
    }

    pub fn from_mask(universe: usize, mask: u64) -> Self {
        debug_assert!(universe <= 64);
        let mut s = Self::empty(universe);
        if universe > 0 {
            s.words[0] = mask;
        }
        s
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn insert(&mut self, e: EdgeId) {
        assert!(e < self.universe, "edge {e} outside universe {}", self.universe);
        self.words[e / 64] |= 1 << (e % 64);
    }

    pub fn remove(&mut self, e: EdgeId) {
        if e < self.universe {
            self.words[e / 64] &= !(1 << (e % 64));
        }
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        e < self.universe && self.words[e / 64] & (1 << (e % 64)) != 0
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.universe).filter(move |&e| self.contains(e))
    }

    pub fn to_vec(&self) -> Vec<EdgeId> {
        self.iter().collect()
    }

    pub fn with(&self, e: EdgeId) -> Self {
        let mut s = self.clone();
        s.insert(e);
        s
    }

    pub fn without(&self, e: EdgeId) -> Self {
        let mut s = self.clone();
        s.remove(e);
        s
    }

    pub fn is_subset(&self, other: &EdgeSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn union(&self, other: &EdgeSet) -> EdgeSet {
        EdgeSet {
            universe: self.universe,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a | b).collect(),
        }
    }

    pub fn incidence(&self) -> Vec<Rational> {
        (0..self.universe)
            .map(|e| if self.contains(e) { Rational::one() } else { Rational::zero() })
            .collect()
    }

    pub fn incidence_i64(&self) -> Vec<i64> {
        (0..self.universe).map(|e| i64::from(self.contains(e))).collect()
    }

    pub fn weight(&self, w: &[Rational]) -> Rational {
        self.iter().fold(Rational::zero(), |acc, e| acc + &w[e])
    }
}

impl Ord for EdgeSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl PartialOrd for EdgeSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for EdgeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for EdgeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|e| e.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lexicographic_order() {
        let a = EdgeSet::from_indices(70, [0, 5]);
        let b = EdgeSet::from_indices(70, [1]);
        let c = EdgeSet::from_indices(70, [0, 5, 69]);
        assert!(a < b);
        assert!(a < c);
        assert!(EdgeSet::empty(70) < a);
        assert_eq!(c.len(), 3);
        assert_eq!(c.to_string(), "{0,5,69}");
    }

    #[test]
    fn set_algebra() {
        let a = EdgeSet::from_indices(4, [1, 2]);
        assert!(a.is_subset(&EdgeSet::full(4)));
        assert!(!EdgeSet::full(4).is_subset(&a));
        assert_eq!(a.with(0).without(2).to_vec(), vec![0, 1]);
        assert_eq!(a.incidence_i64(), vec![0, 1, 1, 0]);
    }
}

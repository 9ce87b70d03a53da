//! Multi-indices `Q = (q_1, …, q_n)` with the graded lexicographic order.

use std::cmp::Ordering;
use std::fmt;

/// Exponent vector of a monomial `x^Q`. Ordered by total degree first,
/// then lexicographically; all stored maps iterate in this order, which
/// fixes the deterministic output order of every report.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        MultiIndex(exponents)
    }

    pub fn zero(arity: usize) -> Self {
        MultiIndex(vec![0; arity])
    }

    /// The i-th unit index (0-based).
    pub fn unit(arity: usize, i: usize) -> Self {
        let mut e = vec![0; arity];
        e[i] = 1;
        MultiIndex(e)
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&q| q == 0)
    }

    pub fn add(&self, rhs: &MultiIndex) -> MultiIndex {
        debug_assert_eq!(self.arity(), rhs.arity());
        MultiIndex(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise difference, `None` when any entry would go negative.
    pub fn checked_sub(&self, rhs: &MultiIndex) -> Option<MultiIndex> {
        debug_assert_eq!(self.arity(), rhs.arity());
        self.0
            .iter()
            .zip(&rhs.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(MultiIndex)
    }

    pub fn divides(&self, other: &MultiIndex) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// All indices of total degree exactly `d`, in graded-lex order.
    pub fn all_of_degree(arity: usize, d: u32) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        let mut current = vec![0u32; arity];
        fill(&mut out, &mut current, 0, d, arity);
        out.sort();
        out
    }

    /// All indices with `lo <= |Q| <= hi`, in graded-lex order.
    pub fn all_up_to(arity: usize, lo: u32, hi: u32) -> Vec<MultiIndex> {
        (lo..=hi)
            .flat_map(|d| Self::all_of_degree(arity, d))
            .collect()
    }
}

fn fill(out: &mut Vec<MultiIndex>, current: &mut Vec<u32>, pos: usize, left: u32, arity: usize) {
    if pos == arity - 1 {
        current[pos] = left;
        out.push(MultiIndex(current.clone()));
        current[pos] = 0;
        return;
    }
    for q in 0..=left {
        current[pos] = q;
        fill(out, current, pos + 1, left - q, arity);
    }
    current[pos] = 0;
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &q)| q > 0)
            .map(|(i, &q)| {
                if q == 1 {
                    format!("x{}", i + 1)
                } else {
                    format!("x{}^{}", i + 1, q)
                }
            })
            .collect();
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("·"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_lex_order() {
        let a = MultiIndex::new(vec![0, 2]);
        let b = MultiIndex::new(vec![1, 0]);
        assert!(b < a, "degree dominates");
        let c = MultiIndex::new(vec![1, 1]);
        let d = MultiIndex::new(vec![0, 2]);
        assert!(d < c, "lex tie-break within a degree");
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(MultiIndex::all_of_degree(3, 4).len(), 15);
        assert_eq!(MultiIndex::all_up_to(2, 1, 3).len(), 2 + 3 + 4);
        let all = MultiIndex::all_up_to(3, 0, 5);
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(all, sorted, "enumeration is already graded-lex sorted");
    }

    #[test]
    fn sub_and_divides() {
        let a = MultiIndex::new(vec![2, 1]);
        let b = MultiIndex::new(vec![1, 1]);
        assert_eq!(a.checked_sub(&b), Some(MultiIndex::new(vec![1, 0])));
        assert_eq!(b.checked_sub(&a), None);
        assert!(b.divides(&a));
        assert!(!a.divides(&b));
    }
}

//! Finite multisets over ordinals.

use std::collections::BTreeMap;
use std::fmt;

/// A multiset; zero counts are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Multiset(BTreeMap<usize, u32>);

impl Multiset {
    pub fn new() -> Self {
        Multiset(BTreeMap::new())
    }

    pub fn singleton(x: usize) -> Self {
        Multiset::from_iter([x])
    }

    /// Multiset with the given counts at positions `0..`.
    pub fn from_counts(counts: &[u32]) -> Self {
        let mut m = Multiset::new();
        for (i, &c) in counts.iter().enumerate() {
            m.insert_n(i, c);
        }
        m
    }

    pub fn count(&self, x: usize) -> u32 {
        self.0.get(&x).copied().unwrap_or(0)
    }

    pub fn insert_n(&mut self, x: usize, n: u32) {
        if n > 0 {
            *self.0.entry(x).or_insert(0) += n;
        }
    }

    pub fn insert(&mut self, x: usize) {
        self.insert_n(x, 1);
    }

    /// Cardinality `|U|`.
    pub fn size(&self) -> u32 {
        self.0.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Distinct elements.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.keys().copied()
    }

    /// `(element, count)` pairs in element order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.0.iter().map(|(&k, &v)| (k, v))
    }

    pub fn max_element(&self) -> Option<usize> {
        self.0.keys().next_back().copied()
    }

    pub fn max_count(&self) -> u32 {
        self.0.values().copied().max().unwrap_or(0)
    }

    /// All counts are 1.
    pub fn is_set(&self) -> bool {
        self.0.values().all(|&c| c == 1)
    }

    /// Multiset union (sum).
    pub fn sum(&self, other: &Multiset) -> Multiset {
        let mut m = self.clone();
        for (x, c) in other.iter() {
            m.insert_n(x, c);
        }
        m
    }

    /// Difference, defined only when `other ⊆ self`.
    pub fn checked_sub(&self, other: &Multiset) -> Option<Multiset> {
        let mut m = self.clone();
        for (x, c) in other.iter() {
            let e = m.0.get_mut(&x)?;
            if *e < c {
                return None;
            }
            *e -= c;
            if *e == 0 {
                m.0.remove(&x);
            }
        }
        Some(m)
    }

    pub fn scale(&self, k: u32) -> Multiset {
        if k == 0 {
            return Multiset::new();
        }
        Multiset(self.0.iter().map(|(&x, &c)| (x, c * k)).collect())
    }

    /// Inclusion `self ⊆ other`.
    pub fn is_sub(&self, other: &Multiset) -> bool {
        self.iter().all(|(x, c)| other.count(x) >= c)
    }

    pub fn intersects(&self, other: &Multiset) -> bool {
        self.support().any(|x| other.count(x) > 0)
    }

    /// Renames elements by `f`.
    pub fn map(&self, f: impl Fn(usize) -> usize) -> Multiset {
        let mut m = Multiset::new();
        for (x, c) in self.iter() {
            m.insert_n(f(x), c);
        }
        m
    }

    pub fn shift(&self, by: usize) -> Multiset {
        self.map(|x| x + by)
    }

    /// Dense count vector of length `n`.
    pub fn to_counts(&self, n: usize) -> Vec<u32> {
        let mut v = vec![0; n];
        for (x, c) in self.iter() {
            v[x] += c;
        }
        v
    }
}

impl FromIterator<usize> for Multiset {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut m = Multiset::new();
        for x in iter {
            m.insert(x);
        }
        m
    }
}

impl FromIterator<(usize, u32)> for Multiset {
    fn from_iter<I: IntoIterator<Item = (usize, u32)>>(iter: I) -> Self {
        let mut m = Multiset::new();
        for (x, c) in iter {
            m.insert_n(x, c);
        }
        m
    }
}

impl fmt::Display for Multiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .iter()
            .map(|(x, c)| if c == 1 { x.to_string() } else { format!("{x}:{c}") })
            .collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

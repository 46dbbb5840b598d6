use std::fmt;
use std::ops::Add;

/// Per-port observation on one boundary.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Label(pub Vec<u32>);

impl Label {
    pub fn zero(n: usize) -> Self {
        Label(vec![0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn max_entry(&self) -> u32 {
        self.0.iter().copied().max().unwrap_or(0)
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn concat(&self, other: &Label) -> Label {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Label(v)
    }

    /// Contiguous bits, as printed for C/E-strong labels.
    pub fn bits(&self) -> String {
        self.0.iter().map(|x| x.to_string()).collect()
    }

    /// Space separated naturals.
    pub fn naturals(&self) -> String {
        self.0
            .iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// All labels of length `n` with entries `0..=max`.
    pub fn all(n: usize, max: u32) -> impl Iterator<Item = Label> {
        let base = max as u64 + 1;
        let count = base.checked_pow(n as u32).expect("label space too large");
        (0..count).map(move |mut code| {
            let mut v = vec![0; n];
            for slot in v.iter_mut().rev() {
                *slot = (code % base) as u32;
                code /= base;
            }
            Label(v)
        })
    }
}

impl From<Vec<u32>> for Label {
    fn from(v: Vec<u32>) -> Self {
        Label(v)
    }
}

impl From<&[u32]> for Label {
    fn from(v: &[u32]) -> Self {
        Label(v.to_vec())
    }
}

impl Add for &Label {
    type Output = Label;
    fn add(self, rhs: &Label) -> Label {
        assert_eq!(self.len(), rhs.len(), "label arity");
        Label(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.naturals())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumerates_in_lexicographic_order() {
        let all: Vec<_> = Label::all(2, 1).map(|l| l.bits()).collect();
        assert_eq!(all, ["00", "01", "10", "11"]);
        assert_eq!(Label::all(0, 5).count(), 1);
    }

    #[test]
    fn pointwise_sum() {
        let a = Label(vec![1, 0, 2]);
        let b = Label(vec![0, 3, 1]);
        assert_eq!(&a + &b, Label(vec![1, 3, 3]));
        assert_eq!(a.concat(&b).len(), 6);
    }
}

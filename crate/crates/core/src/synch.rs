//! Minimal synchronisations between two nets sharing a boundary.
//!
//! For C/E nets a synchronisation is a pair of mutually independent sets of
//! transitions whose attachments to the shared ports coincide; for P/T nets
//! the sets become multisets and the minimal ones form the Hilbert basis of
//! a homogeneous linear Diophantine system.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::multiset::Multiset;
use crate::net::{Net, NetKind};

pub const DEFAULT_NODE_BUDGET: u64 = 1_000_000;

/// Search budget, overridable through `BNETS_NODE_BUDGET`.
pub fn node_budget() -> u64 {
    std::env::var("BNETS_NODE_BUDGET")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_NODE_BUDGET)
}

/// `u` ranges over the left net's transitions, `v` over the right one's.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Synch {
    pub u: Multiset,
    pub v: Multiset,
}

impl Synch {
    pub fn new(u: impl Into<Multiset>, v: impl Into<Multiset>) -> Self {
        Synch {
            u: u.into(),
            v: v.into(),
        }
    }

    pub fn size(&self) -> u32 {
        self.u.size() + self.v.size()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty() && self.v.is_empty()
    }

    pub fn contains(&self, other: &Synch) -> bool {
        other.u.is_sub(&self.u) && other.v.is_sub(&self.v)
    }

    fn sort_key(&self, ta: usize, tb: usize) -> (u32, Vec<u32>) {
        let mut v = self.u.to_counts(ta);
        v.extend(self.v.to_counts(tb));
        (self.size(), v)
    }
}

impl fmt::Display for Synch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ms = |m: &Multiset| {
            m.iter()
                .map(|(x, c)| if c == 1 { x.to_string() } else { format!("{x}:{c}") })
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(f, "({}|{})", ms(&self.u), ms(&self.v))
    }
}

fn check_pair(a: &Net, b: &Net) -> Result<()> {
    if a.kind() != b.kind() {
        return Err(Error::KindMismatch);
    }
    if a.right_arity() != b.left_arity() {
        return Err(Error::ArityMismatch {
            expected: a.right_arity(),
            found: b.left_arity(),
        });
    }
    Ok(())
}

/// Whether `s` synchronises `a` with `b`.
pub fn is_synch(a: &Net, b: &Net, s: &Synch) -> bool {
    let (ta, tb) = (a.transitions(), b.transitions());
    if s.is_empty()
        || s.u.max_element().is_some_and(|x| x >= ta.len())
        || s.v.max_element().is_some_and(|x| x >= tb.len())
    {
        return false;
    }
    let mut lhs = Multiset::new();
    for (t, c) in s.u.iter() {
        lhs = lhs.sum(&ta[t].right.scale(c));
    }
    let mut rhs = Multiset::new();
    for (t, c) in s.v.iter() {
        rhs = rhs.sum(&tb[t].left.scale(c));
    }
    if lhs != rhs {
        return false;
    }
    match a.kind() {
        NetKind::Pt => true,
        NetKind::Ce => {
            let independent = |m: &Multiset, n: &Net| {
                m.is_set()
                    && m.support()
                        .all(|x| m.support().all(|y| x == y || !n.in_contention(x, y)))
            };
            independent(&s.u, a) && independent(&s.v, b)
        }
    }
}

/// The minimal synchronisations, sorted by size then counts.
pub fn minimal_synchs(a: &Net, b: &Net) -> Result<Vec<Synch>> {
    minimal_synchs_with_budget(a, b, node_budget())
}

pub fn minimal_synchs_with_budget(a: &Net, b: &Net, budget: u64) -> Result<Vec<Synch>> {
    check_pair(a, b)?;
    let found = match a.kind() {
        NetKind::Ce => ce_search(a, b, budget)?,
        NetKind::Pt => hilbert_basis(&columns(a, b), budget)?
            .into_iter()
            .map(|x| split(&x, a.transitions().len()))
            .collect(),
    };
    let (ta, tb) = (a.transitions().len(), b.transitions().len());
    let mut minimal: Vec<Synch> = found
        .iter()
        .filter(|s| !found.iter().any(|o| o != *s && s.contains(o)))
        .cloned()
        .collect();
    minimal.sort_by_cached_key(|s| s.sort_key(ta, tb));
    minimal.dedup();
    Ok(minimal)
}

fn split(x: &[u32], ta: usize) -> Synch {
    Synch {
        u: Multiset::from_counts(&x[..ta]),
        v: Multiset::from_counts(&x[ta..]),
    }
}

/// Column `i` is the boundary contribution of the `i`-th transition:
/// right attachments of `a`'s transitions, negated left attachments of `b`'s.
fn columns(a: &Net, b: &Net) -> Vec<Vec<i64>> {
    let m = a.right_arity();
    let col = |ms: &Multiset, sign: i64| {
        ms.to_counts(m)
            .into_iter()
            .map(|c| sign * c as i64)
            .collect::<Vec<_>>()
    };
    a.transitions()
        .iter()
        .map(|t| col(&t.right, 1))
        .chain(b.transitions().iter().map(|t| col(&t.left, -1)))
        .collect()
}

/// Minimal nonzero solutions of `Σ x_i·cols[i] = 0` over the naturals,
/// by the completion procedure of Contejean and Devie: a non-solution is
/// only extended along columns pointing back towards the origin.
pub fn hilbert_basis(cols: &[Vec<i64>], budget: u64) -> Result<Vec<Vec<u32>>> {
    let n = cols.len();
    let dim = cols.first().map_or(0, Vec::len);
    let image = |x: &[u32]| -> Vec<i64> {
        (0..dim)
            .map(|k| (0..n).map(|i| x[i] as i64 * cols[i][k]).sum())
            .collect()
    };
    let mut basis: Vec<Vec<u32>> = Vec::new();
    let mut frontier: BTreeSet<Vec<u32>> = (0..n)
        .map(|i| {
            let mut e = vec![0; n];
            e[i] = 1;
            e
        })
        .collect();
    let mut nodes = 0u64;
    while !frontier.is_empty() {
        let mut open = Vec::new();
        for x in frontier {
            nodes += 1;
            if nodes > budget {
                return Err(Error::SearchBudget(budget));
            }
            let ax = image(&x);
            if ax.iter().all(|&v| v == 0) {
                basis.push(x);
            } else {
                open.push((x, ax));
            }
        }
        let mut next = BTreeSet::new();
        for (x, ax) in open {
            for (j, c) in cols.iter().enumerate() {
                let dot: i64 = ax.iter().zip(c).map(|(p, q)| p * q).sum();
                if dot >= 0 {
                    continue;
                }
                let mut y = x.clone();
                y[j] += 1;
                if !basis.iter().any(|b| b.iter().zip(&y).all(|(p, q)| p <= q)) {
                    next.insert(y);
                }
            }
        }
        frontier = next;
    }
    Ok(basis)
}

/// Independent-set completion search for C/E nets. Every synchronisation
/// is grown from its least transition by repeatedly covering the first
/// unbalanced shared port.
fn ce_search(a: &Net, b: &Net, budget: u64) -> Result<Vec<Synch>> {
    let ta = a.transitions().len();
    let total = ta + b.transitions().len();
    let m = a.right_arity();
    // Signed boundary contribution and side of each global transition.
    let contrib: Vec<Vec<i32>> = (0..total)
        .map(|g| {
            let mut v = vec![0; m];
            if g < ta {
                for p in a.transitions()[g].right.support() {
                    v[p] += 1;
                }
            } else {
                for p in b.transitions()[g - ta].left.support() {
                    v[p] -= 1;
                }
            }
            v
        })
        .collect();
    let conflict = |g: usize, h: usize| -> bool {
        match (g < ta, h < ta) {
            (true, true) => a.in_contention(g, h),
            (false, false) => b.in_contention(g - ta, h - ta),
            _ => false,
        }
    };

    struct Search<'a> {
        contrib: &'a [Vec<i32>],
        conflict: &'a dyn Fn(usize, usize) -> bool,
        ta: usize,
        total: usize,
        nodes: u64,
        budget: u64,
        found: BTreeSet<Vec<usize>>,
    }

    impl Search<'_> {
        fn grow(&mut self, seed: usize, chosen: &mut Vec<usize>, bal: &mut [i32]) -> Result<()> {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::SearchBudget(self.budget));
            }
            let Some(port) = bal.iter().position(|&x| x != 0) else {
                let mut s = chosen.clone();
                s.sort_unstable();
                self.found.insert(s);
                return Ok(());
            };
            // Surplus from the left net is absorbed on the right, and vice versa.
            let want_right = bal[port] > 0;
            let range = if want_right { self.ta..self.total } else { 0..self.ta };
            for g in range {
                if g <= seed
                    || chosen.contains(&g)
                    || self.contrib[g][port] == 0
                    || chosen.iter().any(|&h| (self.conflict)(g, h))
                {
                    continue;
                }
                chosen.push(g);
                for (x, d) in bal.iter_mut().zip(&self.contrib[g]) {
                    *x += d;
                }
                self.grow(seed, chosen, bal)?;
                for (x, d) in bal.iter_mut().zip(&self.contrib[g]) {
                    *x -= d;
                }
                chosen.pop();
            }
            Ok(())
        }
    }

    let mut search = Search {
        contrib: &contrib,
        conflict: &conflict,
        ta,
        total,
        nodes: 0,
        budget,
        found: BTreeSet::new(),
    };
    for seed in 0..total {
        let mut bal = contrib[seed].clone();
        search.grow(seed, &mut vec![seed], &mut bal)?;
    }
    Ok(search
        .found
        .into_iter()
        .map(|set| Synch {
            u: set.iter().copied().filter(|&g| g < ta).collect(),
            v: set.iter().filter(|&&g| g >= ta).map(|&g| g - ta).collect(),
        })
        .collect())
}

/// Splits a synchronisation into minimal ones with multiplicities.
pub fn decompose_synch(a: &Net, b: &Net, s: &Synch) -> Result<Vec<(u32, Synch)>> {
    check_pair(a, b)?;
    if !is_synch(a, b, s) {
        return Err(Error::NotASynch);
    }
    let minimal = minimal_synchs(a, b)?;
    let mut rest = s.clone();
    let mut out = Vec::new();
    while !rest.is_empty() {
        let m = minimal
            .iter()
            .find(|m| rest.contains(m))
            .ok_or(Error::NotASynch)?;
        let times = m
            .u
            .iter()
            .map(|(x, c)| rest.u.count(x) / c)
            .chain(m.v.iter().map(|(x, c)| rest.v.count(x) / c))
            .min()
            .expect("minimal synchronisations are nonempty");
        rest = Synch {
            u: rest.u.checked_sub(&m.u.scale(times)).expect("contained"),
            v: rest.v.checked_sub(&m.v.scale(times)).expect("contained"),
        };
        out.push((times, m.clone()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::net::Transition;

    fn net(kind: NetKind, m: usize, n: usize, ts: Vec<Transition>) -> Net {
        Net::new(kind, m, n, vec![], ts, [], Multiset::new()).unwrap()
    }

    #[test]
    fn ce_single_pair() {
        let a = net(NetKind::Ce, 0, 1, vec![Transition::new("t").right([0])]);
        let b = net(NetKind::Ce, 1, 0, vec![Transition::new("u").left([0])]);
        assert_eq!(minimal_synchs(&a, &b).unwrap(), [Synch::new([0], [0])]);
    }

    #[test]
    fn ce_unattached_transition_is_minimal_alone() {
        let a = net(NetKind::Ce, 0, 1, vec![Transition::new("t")]);
        let b = net(NetKind::Ce, 1, 0, vec![]);
        assert_eq!(minimal_synchs(&a, &b).unwrap(), [Synch::new([0], Multiset::new())]);
    }

    #[test]
    fn ce_contention_blocks_joint_use() {
        // dup ; coalt: the two coalt transitions contend on the right port.
        let a = net(NetKind::Ce, 1, 2, vec![Transition::new("d").left([0]).right([0, 1])]);
        let b = net(
            NetKind::Ce,
            2,
            1,
            vec![
                Transition::new("x").left([0]).right([0]),
                Transition::new("y").left([1]).right([0]),
            ],
        );
        assert!(minimal_synchs(&a, &b).unwrap().is_empty());
        let b = b.as_pt();
        let a = a.as_pt();
        assert_eq!(minimal_synchs(&a, &b).unwrap(), [Synch::new([0], [0, 1])]);
    }

    #[test]
    fn pt_weights_one_and_two() {
        let a = net(NetKind::Pt, 0, 1, vec![Transition::new("t").right([0])]);
        let b = net(NetKind::Pt, 1, 0, vec![Transition::new("u").left([(0, 2)])]);
        assert_eq!(minimal_synchs(&a, &b).unwrap(), [Synch::new([(0, 2)], [0])]);
        let s = Synch::new([(0, 4)], [(0, 2)]);
        assert_eq!(
            decompose_synch(&a, &b, &s).unwrap(),
            [(2, Synch::new([(0, 2)], [0]))]
        );
    }

    #[test]
    fn pt_weights_two_one_four() {
        let a = net(
            NetKind::Pt,
            0,
            1,
            vec![Transition::new("t").right([(0, 2)]), Transition::new("t2").right([0])],
        );
        let b = net(NetKind::Pt, 1, 0, vec![Transition::new("u").left([(0, 4)])]);
        let got = minimal_synchs(&a, &b).unwrap();
        let want = [
            Synch::new([(0, 2)], [0]),
            Synch::new([(0, 1), (1, 2)], [0]),
            Synch::new([(1, 4)], [0]),
        ];
        assert_eq!(got.len(), 3);
        for w in &want {
            assert!(got.contains(w), "missing {w}");
        }
    }

    #[test]
    fn budget_is_reported() {
        let a = net(NetKind::Pt, 0, 1, vec![Transition::new("t").right([(0, 7)])]);
        let b = net(NetKind::Pt, 1, 0, vec![Transition::new("u").left([(0, 5)])]);
        assert_eq!(
            minimal_synchs_with_budget(&a, &b, 3),
            Err(Error::SearchBudget(3))
        );
        assert_eq!(
            minimal_synchs(&a, &b).unwrap(),
            [Synch::new([(0, 5)], [(0, 7)])]
        );
    }

    #[test]
    fn ce_decomposition_into_disjoint_parts() {
        let a = net(
            NetKind::Ce,
            0,
            2,
            vec![Transition::new("t").right([0]), Transition::new("t2").right([1])],
        );
        let b = net(
            NetKind::Ce,
            2,
            0,
            vec![Transition::new("u").left([0]), Transition::new("u2").left([1])],
        );
        let s = Synch::new([0, 1], [0, 1]);
        let mut parts = decompose_synch(&a, &b, &s).unwrap();
        parts.sort();
        assert_eq!(
            parts,
            [(1, Synch::new([0], [0])), (1, Synch::new([1], [1]))]
        );
        assert_eq!(
            decompose_synch(&a, &b, &Synch::new([0], [1])),
            Err(Error::NotASynch)
        );
    }
}

//! C/E and P/T nets with boundaries.

mod compose;
mod firing;
mod format;
mod iso;

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::multiset::Multiset;

pub use compose::compose_seq;
pub use firing::{net_step_set, net_steps, NetStep, NetStepSet};
pub use format::{parse_net, render_net, NetFormat};
pub use iso::{nets_isomorphic, nets_isomorphic_with_cap, DEFAULT_ISO_CAP};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NetKind {
    Ce,
    Pt,
}

impl fmt::Display for NetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NetKind::Ce => "ce",
            NetKind::Pt => "pt",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Transition {
    pub name: String,
    pub pre: Multiset,
    pub post: Multiset,
    pub left: Multiset,
    pub right: Multiset,
}

/// Pre-set, post-set, left and right attachments.
pub type Footprint = (Multiset, Multiset, Multiset, Multiset);

impl Transition {
    pub fn new(name: impl Into<String>) -> Self {
        Transition {
            name: name.into(),
            pre: Multiset::new(),
            post: Multiset::new(),
            left: Multiset::new(),
            right: Multiset::new(),
        }
    }

    pub fn pre(mut self, m: impl Into<Multiset>) -> Self {
        self.pre = m.into();
        self
    }

    pub fn post(mut self, m: impl Into<Multiset>) -> Self {
        self.post = m.into();
        self
    }

    pub fn left(mut self, m: impl Into<Multiset>) -> Self {
        self.left = m.into();
        self
    }

    pub fn right(mut self, m: impl Into<Multiset>) -> Self {
        self.right = m.into();
        self
    }

    pub fn footprint(&self) -> Footprint {
        (
            self.pre.clone(),
            self.post.clone(),
            self.left.clone(),
            self.right.clone(),
        )
    }
}

impl<const N: usize> From<[usize; N]> for Multiset {
    fn from(xs: [usize; N]) -> Self {
        xs.into_iter().collect()
    }
}

impl<const N: usize> From<[(usize, u32); N]> for Multiset {
    fn from(xs: [(usize, u32); N]) -> Self {
        xs.into_iter().collect()
    }
}

/// A net `left → right` with a marking. Always validated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Net {
    kind: NetKind,
    left: usize,
    right: usize,
    places: Vec<String>,
    transitions: Vec<Transition>,
    contention: BTreeSet<(usize, usize)>,
    marking: Multiset,
}

impl Net {
    /// Validates the parts and closes the contention relation.
    pub fn new(
        kind: NetKind,
        left: usize,
        right: usize,
        places: Vec<String>,
        transitions: Vec<Transition>,
        contention: impl IntoIterator<Item = (usize, usize)>,
        marking: Multiset,
    ) -> Result<Net> {
        let net = Net {
            kind,
            left,
            right,
            places,
            transitions,
            contention: contention
                .into_iter()
                .map(|(a, b)| (a.min(b), a.max(b)))
                .collect(),
            marking,
        };
        validate_net(net)
    }

    pub fn kind(&self) -> NetKind {
        self.kind
    }

    pub fn left_arity(&self) -> usize {
        self.left
    }

    pub fn right_arity(&self) -> usize {
        self.right
    }

    pub fn places(&self) -> &[String] {
        &self.places
    }

    pub fn place_count(&self) -> usize {
        self.places.len()
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn marking(&self) -> &Multiset {
        &self.marking
    }

    /// Contention pairs `(i, j)` with `i < j`.
    pub fn contention(&self) -> &BTreeSet<(usize, usize)> {
        &self.contention
    }

    pub fn in_contention(&self, a: usize, b: usize) -> bool {
        self.contention.contains(&(a.min(b), a.max(b)))
    }

    /// Same net, different marking.
    pub fn with_marking(&self, marking: Multiset) -> Result<Net> {
        let mut n = self.clone();
        n.marking = marking;
        check_marking(&n)?;
        Ok(n)
    }

    /// Same structure read as a P/T net (contention dropped).
    pub fn as_pt(&self) -> Net {
        let mut n = self.clone();
        n.kind = NetKind::Pt;
        n.contention.clear();
        n
    }
}

fn check_marking(n: &Net) -> Result<()> {
    if let Some(p) = n.marking.max_element() {
        if p >= n.places.len() {
            return Err(Error::IndexOutOfRange(format!("marked place {p}")));
        }
    }
    if n.kind == NetKind::Ce && !n.marking.is_set() {
        return Err(Error::NotASet(format!("marking {}", n.marking)));
    }
    Ok(())
}

/// Range checks, footprint uniqueness and (C/E) contention closure.
pub fn validate_net(mut net: Net) -> Result<Net> {
    let t = net.transitions.len();
    for tr in &net.transitions {
        let checks = [
            (&tr.pre, net.places.len(), "place"),
            (&tr.post, net.places.len(), "place"),
            (&tr.left, net.left, "left port"),
            (&tr.right, net.right, "right port"),
        ];
        for (ms, limit, what) in checks {
            if let Some(x) = ms.max_element() {
                if x >= limit {
                    return Err(Error::IndexOutOfRange(format!(
                        "{what} {x} in transition `{}`",
                        tr.name
                    )));
                }
            }
            if net.kind == NetKind::Ce && !ms.is_set() {
                return Err(Error::NotASet(format!("{what}s of `{}`", tr.name)));
            }
        }
    }
    check_marking(&net)?;
    let mut seen: HashMap<Footprint, usize> = HashMap::new();
    for (i, tr) in net.transitions.iter().enumerate() {
        if let Some(&j) = seen.get(&tr.footprint()) {
            return Err(Error::DuplicateFootprint(
                net.transitions[j].name.clone(),
                tr.name.clone(),
            ));
        }
        seen.insert(tr.footprint(), i);
    }
    for &(a, b) in &net.contention {
        if b >= t {
            return Err(Error::UnknownTransition(format!("#{b}")));
        }
        if a == b {
            return Err(Error::Malformed(format!(
                "transition `{}` in contention with itself",
                net.transitions[a].name
            )));
        }
    }
    match net.kind {
        NetKind::Pt if !net.contention.is_empty() => {
            return Err(Error::Malformed("P/T nets carry no contention".into()))
        }
        NetKind::Pt => {}
        NetKind::Ce => {
            for i in 0..t {
                for j in i + 1..t {
                    let (u, v) = (&net.transitions[i], &net.transitions[j]);
                    if u.pre.intersects(&v.pre)
                        || u.post.intersects(&v.post)
                        || u.left.intersects(&v.left)
                        || u.right.intersects(&v.right)
                    {
                        net.contention.insert((i, j));
                    }
                }
            }
        }
    }
    Ok(net)
}

/// `m` transitions wiring port `i` to port `i`, no places.
pub fn identity_net(m: usize, kind: NetKind) -> Net {
    let transitions = (0..m)
        .map(|i| {
            Transition::new(format!("t{i}"))
                .left(Multiset::singleton(i))
                .right(Multiset::singleton(i))
        })
        .collect();
    Net::new(kind, m, m, Vec::new(), transitions, [], Multiset::new()).expect("identity net")
}

/// Side-by-side juxtaposition; `b`'s ports are shifted past `a`'s. Two
/// transitions touching nothing share the empty footprint; the first is
/// kept.
pub fn tensor(a: &Net, b: &Net) -> Result<Net> {
    if a.kind != b.kind {
        return Err(Error::KindMismatch);
    }
    let (p, t) = (a.places.len(), a.transitions.len());
    let all = a.transitions.iter().cloned().chain(b.transitions.iter().map(|tr| Transition {
        name: tr.name.clone(),
        pre: tr.pre.shift(p),
        post: tr.post.shift(p),
        left: tr.left.shift(a.left),
        right: tr.right.shift(a.right),
    }));
    let mut seen = HashSet::new();
    let mut index = Vec::new();
    let mut transitions = Vec::new();
    for tr in all {
        if seen.insert(tr.footprint()) {
            index.push(Some(transitions.len()));
            transitions.push(tr);
        } else {
            index.push(None);
        }
    }
    let contention: Vec<(usize, usize)> = a
        .contention
        .iter()
        .copied()
        .chain(b.contention.iter().map(|&(x, y)| (x + t, y + t)))
        .filter_map(|(x, y)| Some((index[x]?, index[y]?)))
        .collect();
    let places = a.places.iter().chain(&b.places).cloned().collect();
    Net::new(
        a.kind,
        a.left + b.left,
        a.right + b.right,
        unique_names(places),
        unique_names(transitions.iter().map(|t| t.name.clone()).collect())
            .into_iter()
            .zip(transitions)
            .map(|(name, tr)| Transition { name, ..tr })
            .collect(),
        contention,
        a.marking.sum(&b.marking.shift(p)),
    )
}

/// Renames repeated names by suffixing their position.
pub(crate) fn unique_names(names: Vec<String>) -> Vec<String> {
    let mut count: HashMap<&str, usize> = HashMap::new();
    for n in &names {
        *count.entry(n.as_str()).or_default() += 1;
    }
    let dup: BTreeSet<String> = count
        .into_iter()
        .filter(|&(_, c)| c > 1)
        .map(|(n, _)| n.to_string())
        .collect();
    names
        .into_iter()
        .enumerate()
        .map(|(i, n)| if dup.contains(&n) { format!("{n}_{i}") } else { n })
        .collect()
}

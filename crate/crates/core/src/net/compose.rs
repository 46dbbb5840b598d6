use std::collections::HashSet;

use crate::error::Result;
use crate::multiset::Multiset;
use crate::net::{unique_names, Net, NetKind, Transition};
use crate::synch::{minimal_synchs, Synch};

/// Sequential composition along the shared boundary. The transitions of
/// the result are the minimal synchronisations, first of each footprint.
pub fn compose_seq(a: &Net, b: &Net) -> Result<Net> {
    let synchs = minimal_synchs(a, b)?;
    let shift = a.place_count();
    let mut seen = HashSet::new();
    let mut kept: Vec<(Synch, Transition)> = Vec::new();
    for s in synchs {
        let tr = fuse(a, b, &s, shift);
        if seen.insert(tr.footprint()) {
            kept.push((s, tr));
        }
    }
    let mut contention = Vec::new();
    if a.kind() == NetKind::Ce {
        for i in 0..kept.len() {
            for j in i + 1..kept.len() {
                let (s, r) = (&kept[i].0, &kept[j].0);
                if clash(&s.u, &r.u, a) || clash(&s.v, &r.v, b) {
                    contention.push((i, j));
                }
            }
        }
    }
    let places = a.places().iter().chain(b.places()).cloned().collect();
    let transitions: Vec<Transition> = kept.into_iter().map(|(_, t)| t).collect();
    let names = unique_names(transitions.iter().map(|t| t.name.clone()).collect());
    Net::new(
        a.kind(),
        a.left_arity(),
        b.right_arity(),
        unique_names(places),
        names
            .into_iter()
            .zip(transitions)
            .map(|(name, t)| Transition { name, ..t })
            .collect(),
        contention,
        a.marking().sum(&b.marking().shift(shift)),
    )
}

/// Overlap or componentwise contention of two transition sets of `n`.
fn clash(x: &Multiset, y: &Multiset, n: &Net) -> bool {
    x.intersects(y)
        || x
            .support()
            .any(|p| y.support().any(|q| n.in_contention(p, q)))
}

fn fuse(a: &Net, b: &Net, s: &Synch, shift: usize) -> Transition {
    let mut t = Transition::new(String::new());
    let mut parts = Vec::new();
    for (i, c) in s.u.iter() {
        let x = &a.transitions()[i];
        t.pre = t.pre.sum(&x.pre.scale(c));
        t.post = t.post.sum(&x.post.scale(c));
        t.left = t.left.sum(&x.left.scale(c));
        parts.push(weighted(&x.name, c));
    }
    for (i, c) in s.v.iter() {
        let x = &b.transitions()[i];
        t.pre = t.pre.sum(&x.pre.shift(shift).scale(c));
        t.post = t.post.sum(&x.post.shift(shift).scale(c));
        t.right = t.right.sum(&x.right.scale(c));
        parts.push(weighted(&x.name, c));
    }
    t.name = parts.join("+");
    t
}

fn weighted(name: &str, c: u32) -> String {
    if c == 1 {
        name.to_string()
    } else {
        format!("{c}{name}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::net::{identity_net, nets_isomorphic};

    #[test]
    fn ce_pair_fuses() {
        let a = Net::new(
            NetKind::Ce,
            0,
            1,
            vec!["p".into()],
            vec![Transition::new("t").right([0]).pre([0])],
            [],
            Multiset::singleton(0),
        )
        .unwrap();
        let b = Net::new(
            NetKind::Ce,
            1,
            0,
            vec!["q".into()],
            vec![Transition::new("u").left([0]).post([0])],
            [],
            Multiset::new(),
        )
        .unwrap();
        let ab = compose_seq(&a, &b).unwrap();
        assert_eq!(ab.transitions().len(), 1);
        let t = &ab.transitions()[0];
        assert_eq!(t.pre, Multiset::singleton(0));
        assert_eq!(t.post, Multiset::singleton(1));
        assert!(t.left.is_empty() && t.right.is_empty());
        assert_eq!(t.name, "t+u");
        assert_eq!(ab.marking(), &Multiset::singleton(0));
    }

    #[test]
    fn pt_weighted_fusion() {
        let a = Net::new(
            NetKind::Pt,
            0,
            1,
            vec!["p".into()],
            vec![Transition::new("t").right([0]).pre([0])],
            [],
            Multiset::new(),
        )
        .unwrap();
        let b = Net::new(
            NetKind::Pt,
            1,
            0,
            vec![],
            vec![Transition::new("u").left([(0, 2)])],
            [],
            Multiset::new(),
        )
        .unwrap();
        let ab = compose_seq(&a, &b).unwrap();
        assert_eq!(ab.transitions().len(), 1);
        assert_eq!(ab.transitions()[0].pre, Multiset::from_counts(&[2]));
        assert_eq!(ab.transitions()[0].name, "2t+u");
    }

    #[test]
    fn identity_is_neutral() {
        let a = Net::new(
            NetKind::Ce,
            2,
            1,
            vec!["p".into()],
            vec![
                Transition::new("t").left([0]).post([0]),
                Transition::new("u").left([1]).pre([0]).right([0]),
            ],
            [],
            Multiset::new(),
        )
        .unwrap();
        let left = compose_seq(&identity_net(2, NetKind::Ce), &a).unwrap();
        let right = compose_seq(&a, &identity_net(1, NetKind::Ce)).unwrap();
        assert!(nets_isomorphic(&a, &left).unwrap());
        assert!(nets_isomorphic(&a, &right).unwrap());
    }
}

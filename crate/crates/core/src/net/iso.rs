use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::net::{Footprint, Net};

pub const DEFAULT_ISO_CAP: usize = 10;

/// Whether a marking-, boundary- and contention-preserving bijection of
/// places and transitions exists.
pub fn nets_isomorphic(a: &Net, b: &Net) -> Result<bool> {
    nets_isomorphic_with_cap(a, b, DEFAULT_ISO_CAP)
}

pub fn nets_isomorphic_with_cap(a: &Net, b: &Net, cap: usize) -> Result<bool> {
    if a.kind() != b.kind()
        || a.left_arity() != b.left_arity()
        || a.right_arity() != b.right_arity()
        || a.place_count() != b.place_count()
        || a.transitions().len() != b.transitions().len()
        || a.contention().len() != b.contention().len()
    {
        return Ok(false);
    }
    if a.place_count() > cap {
        return Err(Error::SizeCap(cap));
    }
    let sig_a = signatures(a);
    let sig_b = signatures(b);
    let mut perm = vec![usize::MAX; a.place_count()];
    let mut used = vec![false; b.place_count()];
    let targets: HashMap<Footprint, usize> = b
        .transitions()
        .iter()
        .enumerate()
        .map(|(i, t)| (t.footprint(), i))
        .collect();
    Ok(assign(a, b, &sig_a, &sig_b, 0, &mut perm, &mut used, &targets))
}

/// Marking, and per-transition boundary profile of the arcs at a place.
type Signature = (u32, Vec<(u32, u32, Vec<usize>, Vec<usize>)>);

fn signatures(n: &Net) -> Vec<Signature> {
    (0..n.place_count())
        .map(|p| {
            let mut arcs: Vec<_> = n
                .transitions()
                .iter()
                .filter(|t| t.pre.count(p) + t.post.count(p) > 0)
                .map(|t| {
                    (
                        t.pre.count(p),
                        t.post.count(p),
                        t.left.support().collect(),
                        t.right.support().collect(),
                    )
                })
                .collect();
            arcs.sort();
            (n.marking().count(p), arcs)
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn assign(
    a: &Net,
    b: &Net,
    sig_a: &[Signature],
    sig_b: &[Signature],
    i: usize,
    perm: &mut Vec<usize>,
    used: &mut Vec<bool>,
    targets: &HashMap<Footprint, usize>,
) -> bool {
    if i == perm.len() {
        return transitions_match(a, b, perm, targets);
    }
    for j in 0..used.len() {
        if used[j] || sig_a[i] != sig_b[j] {
            continue;
        }
        perm[i] = j;
        used[j] = true;
        if assign(a, b, sig_a, sig_b, i + 1, perm, used, targets) {
            return true;
        }
        used[j] = false;
    }
    false
}

fn transitions_match(
    a: &Net,
    b: &Net,
    perm: &[usize],
    targets: &HashMap<Footprint, usize>,
) -> bool {
    let mut sigma = BTreeMap::new();
    for (i, t) in a.transitions().iter().enumerate() {
        let image = (
            t.pre.map(|p| perm[p]),
            t.post.map(|p| perm[p]),
            t.left.clone(),
            t.right.clone(),
        );
        match targets.get(&image) {
            Some(&j) => {
                sigma.insert(i, j);
            }
            None => return false,
        }
    }
    a.contention()
        .iter()
        .all(|&(x, y)| b.in_contention(sigma[&x], sigma[&y]))
}

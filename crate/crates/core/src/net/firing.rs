use std::collections::{BTreeSet, HashSet};

use crate::error::{Error, Result};
use crate::label::Label;
use crate::multiset::Multiset;
use crate::net::{Net, NetKind};
use crate::semantics::{Bound, CeVariant, SemMode, Strength};
use crate::term::Calculus;

/// A labelled firing `trigger/effect` leading to `marking`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NetStep {
    pub trigger: Label,
    pub effect: Label,
    pub marking: Multiset,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetStepSet {
    pub steps: BTreeSet<NetStep>,
    pub truncated: bool,
}

/// All bounded labelled firings of `net` from its marking.
pub fn net_steps(net: &Net, mode: SemMode, bound: Bound) -> Result<BTreeSet<NetStep>> {
    Ok(net_step_set(net, mode, bound)?.steps)
}

/// C/E-strong fires sets of non-contending transitions; every other mode
/// fires multisets and ignores contention. C/E-weak keeps markings 1-safe.
pub fn net_step_set(net: &Net, mode: SemMode, bound: Bound) -> Result<NetStepSet> {
    match (mode.calculus, mode.strength) {
        (Calculus::Tile, _) => Err(Error::Unsupported("tile semantics on nets".into())),
        (Calculus::Ce, Strength::Strong) => {
            if net.kind() != NetKind::Ce {
                return Err(Error::KindMismatch);
            }
            Ok(NetStepSet {
                steps: ce_strong(net, mode.variant),
                truncated: false,
            })
        }
        (Calculus::Ce, Strength::Weak) => {
            if !net.marking().is_set() {
                return Err(Error::NotASet(format!("marking {}", net.marking())));
            }
            Ok(multiset_firing(net, true, Bound::new(bound.max_label, 1)))
        }
        (Calculus::Pt, s) => Ok(multiset_firing(net, s == Strength::Weak, bound)),
    }
}

fn ce_strong(net: &Net, variant: CeVariant) -> BTreeSet<NetStep> {
    let x = net.marking();
    let ts = net.transitions();
    let candidates: Vec<usize> = (0..ts.len())
        .filter(|&i| {
            let t = &ts[i];
            let pre_ok = t.pre.is_sub(x);
            let post_ok = !t.post.intersects(x);
            match variant {
                CeVariant::Standard => pre_ok && post_ok,
                CeVariant::TkI2 => post_ok,
                CeVariant::TkO2 => pre_ok,
                CeVariant::Both => true,
            }
        })
        .collect();
    let mut out = BTreeSet::new();
    let mut chosen = Vec::new();
    independent_sets(net, &candidates, 0, &mut chosen, &mut |u| {
        if let Some(step) = fire_set(net, u, variant) {
            out.insert(step);
        }
    });
    out
}

fn independent_sets(
    net: &Net,
    cands: &[usize],
    from: usize,
    chosen: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize]),
) {
    visit(chosen);
    for k in from..cands.len() {
        let t = cands[k];
        if chosen.iter().all(|&u| !net.in_contention(u, t)) {
            chosen.push(t);
            independent_sets(net, cands, k + 1, chosen, visit);
            chosen.pop();
        }
    }
}

fn fire_set(net: &Net, u: &[usize], variant: CeVariant) -> Option<NetStep> {
    let ts = net.transitions();
    let x = net.marking();
    let sum = |f: fn(&crate::net::Transition) -> &Multiset| {
        u.iter().fold(Multiset::new(), |acc, &i| acc.sum(f(&ts[i])))
    };
    let (pre, post) = (sum(|t| &t.pre), sum(|t| &t.post));
    // Y + pre = X + post, as multisets.
    let y = x.sum(&post).checked_sub(&pre)?;
    if !y.is_set() {
        return None;
    }
    let ok = match variant {
        CeVariant::Standard => pre.is_sub(x) && !post.intersects(x),
        CeVariant::TkI2 => !post.intersects(x) && !pre.intersects(&y),
        CeVariant::TkO2 => {
            let rest = x.checked_sub(&pre)?;
            !rest.intersects(&post)
        }
        CeVariant::Both => true,
    };
    ok.then(|| NetStep {
        trigger: Label(sum(|t| &t.left).to_counts(net.left_arity())),
        effect: Label(sum(|t| &t.right).to_counts(net.right_arity())),
        marking: y,
    })
}

/// Multiset firing, enumerated transition by transition with each one
/// fired at most `max_label` times. Partial results sharing labels and
/// marking change are merged, which keeps the search small.
fn multiset_firing(net: &Net, weak: bool, bound: Bound) -> NetStepSet {
    let (m, n, p) = (net.left_arity(), net.right_arity(), net.place_count());
    let x: Vec<i64> = net.marking().to_counts(p).into_iter().map(i64::from).collect();
    let cap = bound.max_label as i64;
    // Layout: trigger | effect | consumed | produced (strong) or net change (weak).
    let width = if weak { m + n + p } else { m + n + 2 * p };
    let effect = |t: &crate::net::Transition| -> Vec<i64> {
        let mut v = vec![0i64; width];
        for (i, c) in t.left.iter() {
            v[i] += c as i64;
        }
        for (i, c) in t.right.iter() {
            v[m + i] += c as i64;
        }
        for (i, c) in t.pre.iter() {
            if weak {
                v[m + n + i] -= c as i64;
            } else {
                v[m + n + i] += c as i64;
            }
        }
        for (i, c) in t.post.iter() {
            let off = if weak { m + n + i } else { m + n + p + i };
            v[off] += c as i64;
        }
        v
    };
    let within = |v: &[i64]| {
        v[..m + n].iter().all(|&e| e <= cap)
            && (weak || (0..p).all(|i| v[m + n + i] <= x[i]))
    };
    let mut states: HashSet<Vec<i64>> = HashSet::from([vec![0; width]]);
    for t in net.transitions() {
        let e = effect(t);
        let mut next = HashSet::new();
        for s in &states {
            let mut cur = s.clone();
            for _ in 0..=cap {
                if !within(&cur) {
                    break;
                }
                let fresh = next.insert(cur.clone());
                if !fresh && e.iter().all(|&d| d == 0) {
                    break;
                }
                for (c, d) in cur.iter_mut().zip(&e) {
                    *c += d;
                }
            }
        }
        states = next;
    }
    let mut steps = BTreeSet::new();
    'next: for s in states {
        let mut y = Multiset::new();
        for i in 0..p {
            let v = if weak {
                x[i] + s[m + n + i]
            } else {
                x[i] - s[m + n + i] + s[m + n + p + i]
            };
            if v < 0 || v > bound.max_tokens as i64 {
                continue 'next;
            }
            y.insert_n(i, v as u32);
        }
        steps.insert(NetStep {
            trigger: Label(s[..m].iter().map(|&c| c as u32).collect()),
            effect: Label(s[m..m + n].iter().map(|&c| c as u32).collect()),
            marking: y,
        });
    }
    steps.insert(NetStep {
        trigger: Label::zero(m),
        effect: Label::zero(n),
        marking: net.marking().clone(),
    });
    NetStepSet {
        steps,
        truncated: !net.transitions().is_empty(),
    }
}

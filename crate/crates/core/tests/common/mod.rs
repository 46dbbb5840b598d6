//! Seeded generators and relation helpers shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use bnets::net::NetStep;
use bnets::{infer_sort, Label, Multiset, Net, NetKind, Term, Transition};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Shape limits for random terms.
#[derive(Clone, Copy)]
pub struct TermShape {
    pub depth: u32,
    pub max_buffer: u32,
    pub max_buffers: usize,
    pub max_width: usize,
    pub min_size: usize,
}

impl TermShape {
    pub const CE: TermShape = TermShape {
        depth: 5,
        max_buffer: 1,
        max_buffers: 4,
        max_width: 3,
        min_size: 5,
    };
    pub const PT: TermShape = TermShape {
        depth: 5,
        max_buffer: 2,
        max_buffers: 2,
        max_width: 2,
        min_size: 4,
    };
}

fn leaf(rng: &mut ChaCha8Rng, left: usize, max_buffer: u32) -> Term {
    match left {
        0 => [Term::Cohide, Term::Up].choose(rng).unwrap().clone(),
        1 => match rng.gen_range(0..6) {
            0 => Term::Buffer(rng.gen_range(0..=max_buffer)),
            1 => Term::Id,
            2 => Term::Dup,
            3 => Term::Alt,
            4 => Term::Hide,
            _ => Term::Down,
        },
        2 => [Term::Swap, Term::Codup, Term::Coalt].choose(rng).unwrap().clone(),
        _ => Term::ten(leaf(rng, 1, max_buffer), leaf(rng, left - 1, max_buffer)),
    }
}

fn grow(rng: &mut ChaCha8Rng, left: usize, depth: u32, max_buffer: u32) -> Term {
    if depth == 0 || rng.gen_bool(0.15) {
        return leaf(rng, left, max_buffer);
    }
    if rng.gen_bool(0.55) {
        let a = grow(rng, left, depth - 1, max_buffer);
        let mid = infer_sort(&a).unwrap().right;
        let b = grow(rng, mid, depth - 1, max_buffer);
        Term::seq(a, b)
    } else {
        let l1 = rng.gen_range(0..=left);
        Term::ten(
            grow(rng, l1, depth - 1, max_buffer),
            grow(rng, left - l1, depth - 1, max_buffer),
        )
    }
}

/// Widest boundary of any subterm.
pub fn max_width(t: &Term) -> usize {
    let s = infer_sort(t).unwrap();
    let own = s.left.max(s.right);
    match t {
        Term::Seq(a, b) | Term::Ten(a, b) => own.max(max_width(a)).max(max_width(b)),
        _ => own,
    }
}

/// A well-sorted random term within `shape`, built by choosing each
/// operand's left arity from what precedes it.
pub fn random_term(rng: &mut ChaCha8Rng, shape: TermShape) -> Term {
    loop {
        let left = rng.gen_range(0..=2);
        let t = grow(rng, left, shape.depth, shape.max_buffer);
        let buffers = t.buffers().len();
        if t.size() >= shape.min_size
            && (1..=shape.max_buffers).contains(&buffers)
            && max_width(&t) <= shape.max_width
        {
            return t;
        }
    }
}

fn subset(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Multiset {
    (0..n).filter(|_| rng.gen_bool(p)).collect()
}

fn weighted(rng: &mut ChaCha8Rng, n: usize, p: f64, max: u32) -> Multiset {
    let mut m = Multiset::new();
    for i in 0..n {
        if rng.gen_bool(p) {
            m.insert_n(i, rng.gen_range(1..=max));
        }
    }
    m
}

/// Random C/E net: at most three places and transitions, extra
/// contention pairs now and then.
pub fn random_ce_net(rng: &mut ChaCha8Rng, left: usize, right: usize) -> Net {
    loop {
        let p = rng.gen_range(0..=3);
        let t = rng.gen_range(1..=3);
        let transitions: Vec<Transition> = (0..t)
            .map(|i| {
                Transition::new(format!("t{i}"))
                    .pre(subset(rng, p, 0.35))
                    .post(subset(rng, p, 0.35))
                    .left(subset(rng, left, 0.4))
                    .right(subset(rng, right, 0.4))
            })
            .collect();
        let mut extra = Vec::new();
        for i in 0..t {
            for j in i + 1..t {
                if rng.gen_bool(0.15) {
                    extra.push((i, j));
                }
            }
        }
        let marking = subset(rng, p, 0.5);
        let places = (0..p).map(|i| format!("p{i}")).collect();
        if let Ok(n) = Net::new(NetKind::Ce, left, right, places, transitions, extra, marking) {
            return n;
        }
    }
}

/// Random P/T net with arc weights up to `max_weight`.
pub fn random_pt_net(rng: &mut ChaCha8Rng, left: usize, right: usize, max_weight: u32) -> Net {
    loop {
        let p = rng.gen_range(0..=3);
        let t = rng.gen_range(1..=3);
        let transitions: Vec<Transition> = (0..t)
            .map(|i| {
                Transition::new(format!("t{i}"))
                    .pre(weighted(rng, p, 0.35, max_weight))
                    .post(weighted(rng, p, 0.35, max_weight))
                    .left(weighted(rng, left, 0.4, max_weight))
                    .right(weighted(rng, right, 0.4, max_weight))
            })
            .collect();
        let mut marking = Multiset::new();
        for i in 0..p {
            marking.insert_n(i, rng.gen_range(0..=2));
        }
        let places = (0..p).map(|i| format!("p{i}")).collect();
        if let Ok(n) = Net::new(NetKind::Pt, left, right, places, transitions, [], marking) {
            return n;
        }
    }
}

pub type Rel = BTreeSet<(Label, Label, Vec<u32>)>;

pub fn net_rel(net: &Net, steps: &BTreeSet<NetStep>) -> Rel {
    steps
        .iter()
        .map(|s| {
            (
                s.trigger.clone(),
                s.effect.clone(),
                s.marking.to_counts(net.place_count()),
            )
        })
        .collect()
}

pub fn term_rel(steps: &BTreeSet<bnets::Step>) -> Rel {
    steps
        .iter()
        .map(|s| (s.trigger.clone(), s.effect.clone(), s.target.buffers()))
        .collect()
}

/// Steps of a sequential composite predicted from its components: equal
/// middle labels, markings side by side.
pub fn cut_join(a: &Rel, b: &Rel) -> Rel {
    let mut out = BTreeSet::new();
    for (x, y, m) in a {
        for (_, z, n) in b.iter().filter(|s| &s.0 == y) {
            let mut counts = m.clone();
            counts.extend(n);
            out.insert((x.clone(), z.clone(), counts));
        }
    }
    out
}

/// Keeps steps with labels within `max_label` and markings within
/// `max_tokens`.
pub fn window(r: &Rel, max_label: u32, max_tokens: u32) -> Rel {
    r.iter()
        .filter(|(a, b, m)| {
            a.0.iter().chain(&b.0).all(|&c| c <= max_label) && m.iter().all(|&c| c <= max_tokens)
        })
        .cloned()
        .collect()
}

pub fn add(a: &Label, b: &Label) -> Label {
    Label(a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect())
}

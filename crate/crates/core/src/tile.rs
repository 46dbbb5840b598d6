//! Tile semantics with epoch-separated observations.
//!
//! A one-port observation `n1 ; τ;n2 ; ... ; τ;nk` is kept as its epoch
//! counts `[n1, ..., nk]`; its age is `k`. Constants carry closed-form
//! tile relations (all vertical composites of their basic tiles) and
//! composite configurations are derived by horizontal and parallel
//! composition, within an age and per-epoch count bound.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::term::{infer_sort, render_with, Calculus, RenderStyle, Term};
use crate::translate::compound::{ids, seq_all, ten, twist};

/// Epoch counts of one port, canonical by construction.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Epochs(Vec<u32>);

impl Epochs {
    pub fn new(counts: Vec<u32>) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::Malformed("an observation has at least one epoch".into()));
        }
        Ok(Epochs(counts))
    }

    /// The identity observation `0`.
    pub fn zero() -> Self {
        Epochs(vec![0])
    }

    pub fn counts(&self) -> &[u32] {
        &self.0
    }

    pub fn age(&self) -> usize {
        self.0.len()
    }

    pub fn is_idle(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn count_tokens(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Sequential composition: the last epoch merges with the first.
    pub fn then(&self, other: &Epochs) -> Epochs {
        let mut v = self.0.clone();
        *v.last_mut().expect("nonempty") += other.0[0];
        v.extend_from_slice(&other.0[1..]);
        Epochs(v)
    }
}

impl fmt::Display for Epochs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        f.write_str(&parts.join("."))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symbol {
    One,
    Tau,
}

/// Merges `one`s into counts, `tau` opening a new epoch.
pub fn normalize(raw: &[Symbol]) -> Epochs {
    let mut v = vec![0];
    for s in raw {
        match s {
            Symbol::One => *v.last_mut().expect("nonempty") += 1,
            Symbol::Tau => v.push(0),
        }
    }
    Epochs(v)
}

/// One canonical sequence per port.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Observation(pub Vec<Epochs>);

impl Observation {
    pub fn ports(&self) -> usize {
        self.0.len()
    }

    pub fn concat(&self, other: &Observation) -> Observation {
        Observation(self.0.iter().chain(&other.0).cloned().collect())
    }

    pub fn then(&self, other: &Observation) -> Result<Observation> {
        if self.ports() != other.ports() {
            return Err(Error::ArityMismatch {
                expected: self.ports(),
                found: other.ports(),
            });
        }
        Ok(Observation(
            self.0.iter().zip(&other.0).map(|(a, b)| a.then(b)).collect(),
        ))
    }

    pub fn meta(&self) -> ObsMeta {
        let ages: BTreeSet<usize> = self.0.iter().map(Epochs::age).collect();
        let valid = ages.len() <= 1;
        ObsMeta {
            age: ages.iter().copied().max().unwrap_or(0),
            valid,
            idle: valid && self.0.iter().all(Epochs::is_idle),
            counttok: self.0.iter().map(Epochs::count_tokens).collect(),
        }
    }

    /// Port-wise equal ages; the empty observation fits anything valid.
    pub fn coetaneous(&self, other: &Observation) -> bool {
        let (a, b) = (self.meta(), other.meta());
        a.valid && b.valid && (a.age == b.age || self.0.is_empty() || other.0.is_empty())
    }
}

impl fmt::Display for Observation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        let parts: Vec<String> = self.0.iter().map(Epochs::to_string).collect();
        f.write_str(&parts.join(" "))
    }
}

/// Parses `2.0.1 1`: ports by whitespace, epochs by dots; `ε` is empty.
pub fn parse_observation(text: &str) -> Result<Observation> {
    if text.trim() == "ε" {
        return Ok(Observation::default());
    }
    text.split_whitespace()
        .map(|port| {
            let counts = port
                .split('.')
                .map(|c| {
                    c.parse()
                        .map_err(|_| Error::Malformed(format!("bad epoch count `{c}` in `{port}`")))
                })
                .collect::<Result<Vec<u32>>>()?;
            Epochs::new(counts)
        })
        .collect::<Result<Vec<_>>>()
        .map(Observation)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObsMeta {
    pub age: usize,
    pub valid: bool,
    pub idle: bool,
    pub counttok: Vec<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TileBound {
    /// Largest age of any observation, internal ones included.
    pub max_epochs: usize,
    /// Largest count within one epoch.
    pub max_count: u32,
    pub max_tokens: u32,
}

impl Default for TileBound {
    fn default() -> Self {
        TileBound {
            max_epochs: 2,
            max_count: 3,
            max_tokens: 8,
        }
    }
}

impl TileBound {
    pub const fn new(max_epochs: usize, max_count: u32, max_tokens: u32) -> Self {
        TileBound {
            max_epochs,
            max_count,
            max_tokens,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct TileStep {
    pub trigger: Observation,
    pub effect: Observation,
    pub target: Term,
}

impl TileStep {
    pub fn display(&self) -> String {
        let t = render_with(
            &self.target,
            RenderStyle {
                ce_buffers: false,
                compact: true,
            },
        );
        format!("{} / {} -> {}", self.trigger, self.effect, t)
    }
}

#[derive(Clone)]
struct Raw {
    a: Observation,
    b: Observation,
    t: Arc<Term>,
}

/// All bounded tiles of a configuration. With `weak`, `τ` is the
/// identity and every observation is a single epoch.
///
/// Marked places are derived through their cluster encoding and folded
/// back in the targets.
pub fn tile_steps(config: &Term, bound: TileBound, weak: bool) -> Result<BTreeSet<TileStep>> {
    config.check_mode(Calculus::Tile)?;
    infer_sort(config)?;
    let bound = if weak {
        TileBound {
            max_epochs: 1,
            ..bound
        }
    } else {
        bound
    };
    Ok(derive(&Arc::new(expand_places(config)), bound, weak)
        .into_iter()
        .map(|r| TileStep {
            trigger: r.a,
            effect: r.b,
            target: contract_places(&r.t),
        })
        .filter(|s| s.target.buffers().iter().all(|&m| m <= bound.max_tokens))
        .collect())
}

fn derive(t: &Arc<Term>, bound: TileBound, weak: bool) -> Vec<Raw> {
    match &**t {
        Term::Seq(p, r) => {
            let left = derive(p, bound, weak);
            let right = derive(r, bound, weak);
            let mut by_trigger: HashMap<&Observation, Vec<&Raw>> = HashMap::new();
            for s in &right {
                by_trigger.entry(&s.a).or_default().push(s);
            }
            let mut out = Vec::new();
            for s in &left {
                for q in by_trigger.get(&s.b).into_iter().flatten() {
                    out.push(Raw {
                        a: s.a.clone(),
                        b: q.b.clone(),
                        t: rebuild(t, p, r, &s.t, &q.t, Term::Seq),
                    });
                }
            }
            dedup(out)
        }
        Term::Ten(p, r) => {
            let left = derive(p, bound, weak);
            let right = derive(r, bound, weak);
            let mut out = Vec::with_capacity(left.len() * right.len());
            for s in &left {
                for q in &right {
                    out.push(Raw {
                        a: s.a.concat(&q.a),
                        b: s.b.concat(&q.b),
                        t: rebuild(t, p, r, &s.t, &q.t, Term::Ten),
                    });
                }
            }
            dedup(out)
        }
        _ => constant_tiles(t, bound, weak),
    }
}

fn dedup(mut v: Vec<Raw>) -> Vec<Raw> {
    v.sort_by(|x, y| (&x.a, &x.b, &x.t).cmp(&(&y.a, &y.b, &y.t)));
    v.dedup_by(|x, y| x.a == y.a && x.b == y.b && x.t == y.t);
    v
}

fn rebuild(
    parent: &Arc<Term>,
    p: &Arc<Term>,
    r: &Arc<Term>,
    p2: &Arc<Term>,
    r2: &Arc<Term>,
    node: fn(Arc<Term>, Arc<Term>) -> Term,
) -> Arc<Term> {
    if Arc::ptr_eq(p, p2) && Arc::ptr_eq(r, r2) {
        parent.clone()
    } else {
        Arc::new(node(p2.clone(), r2.clone()))
    }
}

/// One-port observations of age `k`.
fn of_age(k: usize, max: u32) -> impl Iterator<Item = Epochs> {
    crate::label::Label::all(k, max).map(|l| Epochs(l.0))
}

fn one_port(bound: TileBound) -> Vec<Epochs> {
    (1..=bound.max_epochs)
        .flat_map(|k| of_age(k, bound.max_count))
        .collect()
}

fn idle(bound: TileBound) -> Vec<Epochs> {
    (1..=bound.max_epochs).map(|k| Epochs(vec![0; k])).collect()
}

fn obs(ports: &[&Epochs]) -> Observation {
    Observation(ports.iter().map(|&e| e.clone()).collect())
}

fn constant_tiles(c: &Arc<Term>, bound: TileBound, weak: bool) -> Vec<Raw> {
    use Term::*;
    let none = Observation::default();
    let mut out = Vec::new();
    let mut push = |a: Observation, b: Observation, t: &Arc<Term>| {
        out.push(Raw { a, b, t: t.clone() })
    };
    let all = one_port(bound);
    match &**c {
        Id => all.iter().for_each(|a| push(obs(&[a]), obs(&[a]), c)),
        Dup => all.iter().for_each(|a| push(obs(&[a]), obs(&[a, a]), c)),
        Codup => all.iter().for_each(|a| push(obs(&[a, a]), obs(&[a]), c)),
        Hide => all.iter().for_each(|a| push(obs(&[a]), none.clone(), c)),
        Cohide => all.iter().for_each(|a| push(none.clone(), obs(&[a]), c)),
        Down => idle(bound).iter().for_each(|a| push(obs(&[a]), none.clone(), c)),
        Up => idle(bound).iter().for_each(|a| push(none.clone(), obs(&[a]), c)),
        Swap => {
            for a in &all {
                for b in all.iter().filter(|b| b.age() == a.age()) {
                    push(obs(&[a, b]), obs(&[b, a]), c);
                }
            }
        }
        Alt | Coalt => {
            for b in &all {
                for d in all.iter().filter(|d| d.age() == b.age()) {
                    let sum: Vec<u32> = b.0.iter().zip(&d.0).map(|(x, y)| x + y).collect();
                    if sum.iter().any(|&s| s > bound.max_count) {
                        continue;
                    }
                    let a = Epochs(sum);
                    if **c == Alt {
                        push(obs(&[&a]), obs(&[b, d]), c);
                    } else {
                        push(obs(&[b, d]), obs(&[&a]), c);
                    }
                }
            }
        }
        Token => {
            let up = Arc::new(Up);
            for a in idle(bound) {
                push(none.clone(), obs(&[&a]), c);
            }
            if weak {
                push(none.clone(), obs(&[&Epochs(vec![1])]), &up);
            } else {
                // The emitted token follows at least one τ.
                for k in 2..=bound.max_epochs {
                    for i in 1..k {
                        let mut v = vec![0; k];
                        v[i] = 1;
                        push(none.clone(), obs(&[&Epochs(v)]), &up);
                    }
                }
            }
        }
        Buffer(n) => {
            for h in &all {
                for e in all.iter().filter(|e| e.age() == h.age()) {
                    if let Some(m) = place_fires(*n, h, e, weak) {
                        if m <= bound.max_tokens {
                            push(obs(&[h]), obs(&[e]), &Arc::new(Buffer(m)));
                        }
                    }
                }
            }
        }
        Seq(..) | Ten(..) => unreachable!("composite"),
    }
    out
}

/// Tokens left in a place of `n` after receiving `h` and emitting `e`,
/// epoch by epoch; a token leaves no earlier than the epoch after it
/// arrived, and initial tokens wait for the first `τ`.
fn place_fires(n: u32, h: &Epochs, e: &Epochs, weak: bool) -> Option<u32> {
    if weak {
        let (h, e) = (h.0[0], e.0[0]);
        return (e <= n + h).then(|| n + h - e);
    }
    if e.0[0] != 0 {
        return None;
    }
    let mut avail = n + h.0[0];
    for i in 1..h.age() {
        if e.0[i] > avail {
            return None;
        }
        avail = avail - e.0[i] + h.0[i];
    }
    Some(avail)
}

/// `(I_h ⊗ ↑) ; X_{h,h} ; (t ⊗ I) ; X_{k,k} ; (I_k ⊗ ↓)`.
pub fn synch_wrap(t: &Term) -> Result<Term> {
    let s = infer_sort(t)?;
    Ok(seq_all([
        ten(ids(s.left), Term::Up),
        twist(s.left),
        Term::ten(t.clone(), Term::Id),
        twist(s.right),
        ten(ids(s.right), Term::Down),
    ]))
}

/// The place with `n` tokens as an empty place and `n` tokens merged by
/// `coalt`.
pub fn tile_place(n: u32) -> Term {
    (0..n).fold(Term::Buffer(0), |acc, _| {
        Term::seq(Term::ten(acc, Term::Token), Term::Coalt)
    })
}

/// Replaces every buffer by its cluster.
pub fn expand_places(t: &Term) -> Term {
    match t {
        Term::Buffer(n) => tile_place(*n),
        Term::Seq(a, b) => Term::seq(expand_places(a), expand_places(b)),
        Term::Ten(a, b) => Term::ten(expand_places(a), expand_places(b)),
        c => c.clone(),
    }
}

/// Folds clusters back into buffers: `(p ⊗ tok) ; coalt` adds a token,
/// `(p ⊗ up) ; coalt` none.
pub fn contract_places(t: &Term) -> Term {
    match t {
        Term::Seq(a, b) => {
            let a = contract_places(a);
            if **b == Term::Coalt {
                if let Term::Ten(x, y) = &a {
                    if let (Term::Buffer(m), Term::Token | Term::Up) = (&**x, &**y) {
                        let extra = u32::from(**y == Term::Token);
                        return Term::Buffer(m + extra);
                    }
                }
            }
            Term::seq(a, contract_places(b))
        }
        Term::Ten(a, b) => Term::ten(contract_places(a), contract_places(b)),
        c => c.clone(),
    }
}

//! Bounded labelled transition systems and bisimilarity.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt::{self, Write};
use std::hash::Hash;

use crate::error::{Error, Result};
use crate::label::Label;
use crate::multiset::Multiset;
use crate::net::{net_step_set, Net};
use crate::semantics::{step_set, Bound, SemMode};
use crate::term::{infer_sort, render_with, Calculus, RenderStyle, Sort, Term};

pub const DEFAULT_STATE_CAP: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub source: usize,
    pub trigger: Label,
    pub effect: Label,
    pub target: usize,
}

/// Reachable fragment from state 0.
#[derive(Debug, Clone)]
pub struct Lts<S> {
    pub states: Vec<S>,
    pub edges: Vec<Edge>,
    pub sort: Sort,
    pub mode: SemMode,
    pub bound: Bound,
    /// No step was dropped by the bound.
    pub complete: bool,
}

fn explore<S, F>(start: S, sort: Sort, mode: SemMode, bound: Bound, cap: usize, mut next: F) -> Result<Lts<S>>
where
    S: Clone + Eq + Hash,
    F: FnMut(&S) -> Result<(Vec<(Label, Label, S)>, bool)>,
{
    let mut index: HashMap<S, usize> = HashMap::from([(start.clone(), 0)]);
    let mut states = vec![start];
    let mut edges = Vec::new();
    let mut complete = true;
    let mut queue = VecDeque::from([0]);
    while let Some(i) = queue.pop_front() {
        let (succ, truncated) = next(&states[i])?;
        complete &= !truncated;
        for (trigger, effect, s) in succ {
            let target = match index.get(&s) {
                Some(&j) => j,
                None => {
                    if states.len() == cap {
                        return Err(Error::StateCap(cap));
                    }
                    index.insert(s.clone(), states.len());
                    states.push(s);
                    queue.push_back(states.len() - 1);
                    states.len() - 1
                }
            };
            edges.push(Edge {
                source: i,
                trigger,
                effect,
                target,
            });
        }
    }
    edges.sort();
    Ok(Lts {
        states,
        edges,
        sort,
        mode,
        bound,
        complete,
    })
}

/// Whether a state must be dropped under the token bound: P/T states are
/// capped on their total token count.
fn over_budget(mode: SemMode, bound: Bound, tokens: u32) -> bool {
    mode.calculus == Calculus::Pt && tokens > bound.max_tokens
}

pub fn term_lts(t: &Term, mode: SemMode, bound: Bound) -> Result<Lts<Term>> {
    term_lts_with_cap(t, mode, bound, DEFAULT_STATE_CAP)
}

pub fn term_lts_with_cap(t: &Term, mode: SemMode, bound: Bound, cap: usize) -> Result<Lts<Term>> {
    t.check_mode(mode.calculus)?;
    let sort = infer_sort(t)?;
    explore(t.clone(), sort, mode, bound, cap, |s| {
        let set = step_set(s, mode, bound)?;
        let mut truncated = set.truncated;
        let mut out = Vec::new();
        for st in set.steps {
            if over_budget(mode, bound, st.target.buffers().iter().sum()) {
                truncated = true;
            } else {
                out.push((st.trigger, st.effect, st.target));
            }
        }
        Ok((out, truncated))
    })
}

pub fn net_lts(net: &Net, mode: SemMode, bound: Bound) -> Result<Lts<Multiset>> {
    net_lts_with_cap(net, mode, bound, DEFAULT_STATE_CAP)
}

pub fn net_lts_with_cap(net: &Net, mode: SemMode, bound: Bound, cap: usize) -> Result<Lts<Multiset>> {
    let sort = Sort::new(net.left_arity(), net.right_arity());
    explore(net.marking().clone(), sort, mode, bound, cap, |m| {
        let set = net_step_set(&net.with_marking(m.clone())?, mode, bound)?;
        let mut truncated = set.truncated;
        let mut out = Vec::new();
        for st in set.steps {
            if over_budget(mode, bound, st.marking.size()) {
                truncated = true;
            } else {
                out.push((st.trigger, st.effect, st.marking));
            }
        }
        Ok((out, truncated))
    })
}

impl<S> Lts<S> {
    pub fn start(&self) -> usize {
        0
    }

    pub fn successors(&self, s: usize) -> impl Iterator<Item = &Edge> {
        let lo = self.edges.partition_point(|e| e.source < s);
        self.edges[lo..].iter().take_while(move |e| e.source == s)
    }

    pub fn label(&self, e: &Edge) -> String {
        format!(
            "{}/{}",
            self.mode.show_label(&e.trigger),
            self.mode.show_label(&e.effect)
        )
    }
}

/// Description of a state for listings and DOT output.
pub trait StateText {
    fn state_text(&self) -> String;
}

impl StateText for Term {
    fn state_text(&self) -> String {
        render_with(
            self,
            RenderStyle {
                ce_buffers: true,
                compact: true,
            },
        )
    }
}

impl StateText for Multiset {
    fn state_text(&self) -> String {
        self.to_string()
    }
}

impl<S: StateText> Lts<S> {
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph lts {\n");
        for (i, st) in self.states.iter().enumerate() {
            let shape = if i == 0 { "doublecircle" } else { "circle" };
            let text = st.state_text().replace('"', "\\\"");
            let _ = writeln!(s, "  s{i} [shape={shape}, label=\"{text}\"];");
        }
        for e in &self.edges {
            let _ = writeln!(
                s,
                "  s{} -> s{} [label=\"{}\"];",
                e.source,
                e.target,
                self.label(e)
            );
        }
        s.push_str("}\n");
        s
    }

    /// One `state --label--> state` line per edge.
    pub fn listing(&self) -> String {
        let mut s = String::new();
        for e in &self.edges {
            let _ = writeln!(
                s,
                "{} --{}--> {}",
                self.states[e.source].state_text(),
                self.label(e),
                self.states[e.target].state_text()
            );
        }
        s
    }
}

/// Which system made the distinguishing move.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessStep {
    /// States of the left and right system before the move.
    pub states: (usize, usize),
    pub attacker: Side,
    pub trigger: Label,
    pub effect: Label,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BisimReport {
    pub equivalent: bool,
    /// Attack sequence; the defender cannot answer the last move.
    pub witness: Option<Vec<WitnessStep>>,
    pub exact: bool,
}

impl BisimReport {
    pub fn verdict(&self, mode: SemMode) -> String {
        let kind = if self.exact { "exact" } else { "bounded" };
        match &self.witness {
            None => format!("equivalent ({kind})"),
            Some(w) => {
                let trace: Vec<String> = w
                    .iter()
                    .map(|s| format!("{}/{}", mode.show_label(&s.trigger), mode.show_label(&s.effect)))
                    .collect();
                format!("distinguished by {} ({kind})", trace.join(" "))
            }
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

/// Moves of one state: label index to the targets' union indices.
type Moves = Vec<(usize, usize)>;

/// Partition refinement over the disjoint union of both systems.
pub fn bisimilar<S, T>(a: &Lts<S>, b: &Lts<T>) -> Result<BisimReport> {
    if a.sort != b.sort {
        return Err(Error::SortDiffers(a.sort, b.sort));
    }
    let labels: BTreeSet<(&Label, &Label)> = a
        .edges
        .iter()
        .chain(&b.edges)
        .map(|e| (&e.trigger, &e.effect))
        .collect();
    let label_ix: HashMap<(&Label, &Label), usize> =
        labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
    let label_of: Vec<(&Label, &Label)> = labels.into_iter().collect();
    let off = a.states.len();
    let n = off + b.states.len();
    let mut moves: Vec<Moves> = vec![Vec::new(); n];
    for (lts_off, edges) in [(0, &a.edges), (off, &b.edges)] {
        for e in edges.iter() {
            moves[lts_off + e.source].push((label_ix[&(&e.trigger, &e.effect)], lts_off + e.target));
        }
    }
    let (sa, sb) = (0, off);

    // history[r] is the partition after r rounds.
    let mut history: Vec<Vec<usize>> = vec![vec![0; n]];
    loop {
        let cur = history.last().expect("nonempty");
        let mut ids: BTreeMap<(usize, BTreeSet<(usize, usize)>), usize> = BTreeMap::new();
        let sigs: Vec<_> = (0..n)
            .map(|s| {
                let sig: BTreeSet<(usize, usize)> =
                    moves[s].iter().map(|&(l, t)| (l, cur[t])).collect();
                (cur[s], sig)
            })
            .collect();
        for sig in &sigs {
            let next = ids.len();
            ids.entry(sig.clone()).or_insert(next);
        }
        let next: Vec<usize> = sigs.iter().map(|sig| ids[sig]).collect();
        let blocks_before = cur.iter().collect::<BTreeSet<_>>().len();
        let stable = ids.len() == blocks_before;
        history.push(next);
        if stable {
            break;
        }
    }
    let exact = a.complete && b.complete;
    let last = history.last().expect("nonempty");
    if last[sa] == last[sb] {
        return Ok(BisimReport {
            equivalent: true,
            witness: None,
            exact,
        });
    }
    let mut trace = Vec::new();
    let (mut s, mut t) = (sa, sb);
    loop {
        let r = (1..history.len())
            .find(|&r| history[r][s] != history[r][t])
            .expect("separated pair");
        let prev = &history[r - 1];
        // Least label whose move one side cannot match up to round r-1.
        let unmatched = |x: usize, y: usize| {
            moves[x]
                .iter()
                .filter(|&&(l, xt)| {
                    !moves[y].iter().any(|&(m, yt)| m == l && prev[yt] == prev[xt])
                })
                .map(|&(l, xt)| (l, xt))
                .min()
        };
        let attack = match (unmatched(s, t), unmatched(t, s)) {
            (Some(p), Some(q)) if q.0 < p.0 => (Side::Right, q),
            (Some(p), _) => (Side::Left, p),
            (None, Some(q)) => (Side::Right, q),
            (None, None) => unreachable!("pair separated at round {r}"),
        };
        let (side, (l, to)) = attack;
        let (trigger, effect) = label_of[l];
        trace.push(WitnessStep {
            states: (s, t - off),
            attacker: side,
            trigger: trigger.clone(),
            effect: effect.clone(),
        });
        let defender = if side == Side::Left { t } else { s };
        let answer = moves[defender].iter().find(|&&(m, _)| m == l).map(|&(_, d)| d);
        match answer {
            None => break,
            Some(d) => {
                (s, t) = if side == Side::Left { (to, d) } else { (d, to) };
            }
        }
    }
    Ok(BisimReport {
        equivalent: false,
        witness: Some(trace),
        exact,
    })
}

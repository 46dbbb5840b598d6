//! One-step labelled transition relations of terms.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::label::Label;
use crate::term::{infer_sort, render_with, Calculus, RenderStyle, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strength {
    Strong,
    Weak,
}

/// Extra C/E-strong rules letting an empty place pass a token straight
/// through (`TkI2`), a full one do so (`TkO2`), or both.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum CeVariant {
    #[default]
    Standard,
    TkI2,
    TkO2,
    Both,
}

impl CeVariant {
    fn through_empty(self) -> bool {
        matches!(self, CeVariant::TkI2 | CeVariant::Both)
    }

    fn through_full(self) -> bool {
        matches!(self, CeVariant::TkO2 | CeVariant::Both)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SemMode {
    pub calculus: Calculus,
    pub strength: Strength,
    pub variant: CeVariant,
}

impl SemMode {
    pub const fn new(calculus: Calculus, strength: Strength) -> Self {
        SemMode {
            calculus,
            strength,
            variant: CeVariant::Standard,
        }
    }

    pub const fn ce_strong() -> Self {
        Self::new(Calculus::Ce, Strength::Strong)
    }

    pub const fn ce_weak() -> Self {
        Self::new(Calculus::Ce, Strength::Weak)
    }

    pub const fn pt_strong() -> Self {
        Self::new(Calculus::Pt, Strength::Strong)
    }

    pub const fn pt_weak() -> Self {
        Self::new(Calculus::Pt, Strength::Weak)
    }

    pub fn with_variant(mut self, variant: CeVariant) -> Self {
        self.variant = variant;
        self
    }

    pub fn is_ce_strong(&self) -> bool {
        self.calculus == Calculus::Ce && self.strength == Strength::Strong
    }

    pub fn is_weak(&self) -> bool {
        self.strength == Strength::Weak
    }

    /// Formats a label the way steps are printed in this mode.
    pub fn show_label(&self, l: &Label) -> String {
        if self.is_ce_strong() {
            l.bits()
        } else {
            l.naturals()
        }
    }

    fn validate(&self) -> Result<()> {
        if self.calculus == Calculus::Tile {
            return Err(Error::Unsupported("tile calculus in step semantics".into()));
        }
        if self.calculus == Calculus::Pt && self.variant != CeVariant::Standard {
            return Err(Error::Unsupported("C/E variant in P/T mode".into()));
        }
        Ok(())
    }
}

impl fmt::Display for SemMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self.calculus {
            Calculus::Ce => "ce",
            Calculus::Pt => "pt",
            Calculus::Tile => "tile",
        };
        let s = match self.strength {
            Strength::Strong => "strong",
            Strength::Weak => "weak",
        };
        write!(f, "{c}-{s}")
    }
}

/// Truncation of the infinite relations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Bound {
    pub max_label: u32,
    pub max_tokens: u32,
}

impl Default for Bound {
    fn default() -> Self {
        Bound {
            max_label: 4,
            max_tokens: 8,
        }
    }
}

impl Bound {
    pub const fn new(max_label: u32, max_tokens: u32) -> Self {
        Bound {
            max_label,
            max_tokens,
        }
    }

    fn effective(self, mode: SemMode) -> Bound {
        match mode.calculus {
            Calculus::Ce if mode.strength == Strength::Strong => Bound::new(1, 1),
            Calculus::Ce => Bound::new(self.max_label, 1),
            _ => self,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Step {
    pub trigger: Label,
    pub effect: Label,
    pub target: Term,
}

impl Step {
    pub fn new(trigger: impl Into<Label>, effect: impl Into<Label>, target: Term) -> Self {
        Step {
            trigger: trigger.into(),
            effect: effect.into(),
            target,
        }
    }

    /// `trigger/effect -> term` in the mode's label format.
    pub fn display(&self, mode: SemMode) -> String {
        let style = RenderStyle {
            ce_buffers: mode.calculus == Calculus::Ce,
            compact: true,
        };
        format!(
            "{}/{} -> {}",
            mode.show_label(&self.trigger),
            mode.show_label(&self.effect),
            render_with(&self.target, style)
        )
    }
}

/// A computed step set together with a flag telling whether the bound cut
/// anything away.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepSet {
    pub steps: BTreeSet<Step>,
    pub truncated: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Raw {
    a: Label,
    b: Label,
    t: Arc<Term>,
}

/// Closed-form relation of a single constant.
pub fn constant_relation(c: &Term, mode: SemMode, bound: Bound) -> Result<BTreeSet<Step>> {
    if !c.is_constant() {
        return Err(Error::Unsupported(format!("`{c}` is not a constant")));
    }
    mode.validate()?;
    c.check_mode(mode.calculus)?;
    let (raw, _) = constant(&Arc::new(c.clone()), mode, bound.effective(mode));
    Ok(raw.into_iter().map(into_step).collect())
}

/// All bounded steps of `t`.
pub fn steps(t: &Term, mode: SemMode, bound: Bound) -> Result<BTreeSet<Step>> {
    Ok(step_set(t, mode, bound)?.steps)
}

/// All bounded steps of `t`, reporting truncation.
pub fn step_set(t: &Term, mode: SemMode, bound: Bound) -> Result<StepSet> {
    mode.validate()?;
    t.check_mode(mode.calculus)?;
    infer_sort(t)?;
    let (raw, truncated) = relation(&Arc::new(t.clone()), mode, bound.effective(mode));
    Ok(StepSet {
        steps: raw.into_iter().map(into_step).collect(),
        truncated,
    })
}

fn into_step(r: Raw) -> Step {
    Step {
        trigger: r.a,
        effect: r.b,
        target: Arc::unwrap_or_clone(r.t),
    }
}

fn relation(t: &Arc<Term>, mode: SemMode, bound: Bound) -> (Vec<Raw>, bool) {
    match &**t {
        Term::Seq(p, r) => {
            let (left, tl) = relation(p, mode, bound);
            let (right, tr) = relation(r, mode, bound);
            let mut by_trigger: HashMap<&Label, Vec<&Raw>> = HashMap::new();
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
            out.sort_unstable();
            out.dedup();
            (out, tl || tr)
        }
        Term::Ten(p, r) => {
            let (left, tl) = relation(p, mode, bound);
            let (right, tr) = relation(r, mode, bound);
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
            out.sort_unstable();
            out.dedup();
            (out, tl || tr)
        }
        _ => constant(t, mode, bound),
    }
}

/// Reuses the parent node when neither child moved.
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

fn lab(v: &[u32]) -> Label {
    Label(v.to_vec())
}

/// Label pairs of a stateless constant.
fn stateless_pairs(c: &Term, mode: SemMode, bound: Bound) -> (Vec<(Label, Label)>, bool) {
    use Term::*;
    if mode.is_ce_strong() {
        let pairs: Vec<(&[u32], &[u32])> = match c {
            Id => vec![(&[0], &[0]), (&[1], &[1])],
            Swap => vec![
                (&[0, 0], &[0, 0]),
                (&[0, 1], &[1, 0]),
                (&[1, 0], &[0, 1]),
                (&[1, 1], &[1, 1]),
            ],
            Dup => vec![(&[0], &[0, 0]), (&[1], &[1, 1])],
            Codup => vec![(&[0, 0], &[0]), (&[1, 1], &[1])],
            Hide => vec![(&[0], &[]), (&[1], &[])],
            Cohide => vec![(&[], &[0]), (&[], &[1])],
            Alt => vec![(&[0], &[0, 0]), (&[1], &[1, 0]), (&[1], &[0, 1])],
            Coalt => vec![(&[0, 0], &[0]), (&[1, 0], &[1]), (&[0, 1], &[1])],
            Down => vec![(&[0], &[])],
            Up => vec![(&[], &[0])],
            _ => unreachable!("stateless constant"),
        };
        return (pairs.into_iter().map(|(a, b)| (lab(a), lab(b))).collect(), false);
    }
    let n = bound.max_label;
    let mut out = Vec::new();
    match c {
        Id => out.extend((0..=n).map(|a| (lab(&[a]), lab(&[a])))),
        Swap => {
            for a in 0..=n {
                for b in 0..=n {
                    out.push((lab(&[a, b]), lab(&[b, a])));
                }
            }
        }
        Dup => out.extend((0..=n).map(|a| (lab(&[a]), lab(&[a, a])))),
        Codup => out.extend((0..=n).map(|a| (lab(&[a, a]), lab(&[a])))),
        Hide => out.extend((0..=n).map(|a| (lab(&[a]), lab(&[])))),
        Cohide => out.extend((0..=n).map(|a| (lab(&[]), lab(&[a])))),
        Alt | Coalt => {
            for h in 0..=n {
                for k in 0..=n - h {
                    let (x, y) = (lab(&[h + k]), lab(&[h, k]));
                    out.push(if *c == Alt { (x, y) } else { (y, x) });
                }
            }
        }
        Down => out.push((lab(&[0]), lab(&[]))),
        Up => out.push((lab(&[]), lab(&[0]))),
        _ => unreachable!("stateless constant"),
    }
    (out, !matches!(c, Down | Up))
}

fn constant(c: &Arc<Term>, mode: SemMode, bound: Bound) -> (Vec<Raw>, bool) {
    match **c {
        Term::Buffer(n) => buffer_relation(n, mode, bound),
        Term::Token | Term::Seq(..) | Term::Ten(..) => {
            unreachable!("checked by mode validation")
        }
        _ => {
            let (pairs, truncated) = stateless_pairs(c, mode, bound);
            let raw = pairs
                .into_iter()
                .map(|(a, b)| Raw { a, b, t: c.clone() })
                .collect();
            (raw, truncated)
        }
    }
}

fn buffer_relation(n: u32, mode: SemMode, bound: Bound) -> (Vec<Raw>, bool) {
    let mut out = Vec::new();
    let mut push = |h: u32, k: u32, m: u32| {
        out.push(Raw {
            a: lab(&[h]),
            b: lab(&[k]),
            t: Arc::new(Term::Buffer(m)),
        })
    };
    if mode.is_ce_strong() {
        let v = mode.variant;
        push(0, 0, n);
        if n == 0 {
            push(1, 0, 1);
            if v.through_empty() {
                push(1, 1, 0);
            }
        } else {
            push(0, 1, 0);
            if v.through_full() {
                push(1, 1, 1);
            }
        }
        return (out, false);
    }
    let weak = mode.is_weak();
    for h in 0..=bound.max_label {
        for k in 0..=bound.max_label {
            let fires = if weak { k <= n + h } else { k <= n };
            if fires && n + h - k <= bound.max_tokens {
                push(h, k, n + h - k);
            }
        }
    }
    (out, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::parse_term;

    fn ce(s: &str) -> Term {
        parse_term(s, Calculus::Ce).unwrap()
    }

    fn pt(s: &str) -> Term {
        parse_term(s, Calculus::Pt).unwrap()
    }

    fn shown(set: &BTreeSet<Step>, mode: SemMode) -> Vec<String> {
        set.iter().map(|s| s.display(mode)).collect()
    }

    #[test]
    fn alt_ce_strong() {
        let m = SemMode::ce_strong();
        let s = constant_relation(&Term::Alt, m, Bound::default()).unwrap();
        assert_eq!(shown(&s, m), ["0/00 -> alt", "1/01 -> alt", "1/10 -> alt"]);
    }

    #[test]
    fn empty_pt_place_weak_bound_one() {
        let m = SemMode::pt_weak();
        let s = constant_relation(&Term::Buffer(0), m, Bound::new(1, 1)).unwrap();
        assert_eq!(shown(&s, m), ["0/0 -> [0]", "1/0 -> [1]", "1/1 -> [0]"]);
    }

    #[test]
    fn full_pt_place_cannot_emit_two_without_input() {
        let s = constant_relation(&Term::Buffer(1), SemMode::pt_weak(), Bound::default()).unwrap();
        assert!(!s.iter().any(|s| s.trigger.0 == [0] && s.effect.0 == [2]));
        assert!(s.iter().any(|s| s.trigger.0 == [1] && s.effect.0 == [2]));
    }

    #[test]
    fn buffer_then_dup_ce_strong() {
        let m = SemMode::ce_strong();
        let s = steps(&ce("[] ; dup"), m, Bound::default()).unwrap();
        assert_eq!(shown(&s, m), ["0/00 -> [];dup", "1/00 -> [*];dup"]);
    }

    #[test]
    fn buffer_then_dup_ce_weak() {
        let t = ce("[] ; dup");
        let s = steps(&t, SemMode::ce_weak(), Bound::new(3, 1)).unwrap();
        for n in 0..=3 {
            assert!(s.contains(&Step::new(vec![n], vec![n, n], t.clone())));
        }
    }

    #[test]
    fn dup_coalt_separates_strong_from_weak() {
        let t = ce("dup ; coalt");
        let strong = steps(&t, SemMode::ce_strong(), Bound::default()).unwrap();
        assert_eq!(strong.len(), 1);
        let weak = steps(&pt("dup ; coalt"), SemMode::pt_weak(), Bound::new(4, 8)).unwrap();
        let pairs: Vec<_> = weak
            .iter()
            .map(|s| (s.trigger.0.clone(), s.effect.0.clone()))
            .collect();
        assert_eq!(pairs, [(vec![0], vec![0]), (vec![1], vec![2]), (vec![2], vec![4])]);
        assert!(weak.iter().all(|s| s.target == pt("dup ; coalt")));
    }

    #[test]
    fn variants_add_pass_through() {
        let m = SemMode::ce_strong().with_variant(CeVariant::Both);
        let e = constant_relation(&Term::Buffer(0), m, Bound::default()).unwrap();
        assert!(e.contains(&Step::new(vec![1], vec![1], Term::Buffer(0))));
        let f = constant_relation(&Term::Buffer(1), m, Bound::default()).unwrap();
        assert!(f.contains(&Step::new(vec![1], vec![1], Term::Buffer(1))));
        let tki2 = SemMode::ce_strong().with_variant(CeVariant::TkI2);
        let f = constant_relation(&Term::Buffer(1), tki2, Bound::default()).unwrap();
        assert_eq!(f.len(), 2);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(steps(&pt("dup ; dup"), SemMode::pt_weak(), Bound::default()).is_err());
        assert!(steps(&pt("[2]"), SemMode::ce_strong(), Bound::default()).is_err());
        let tile = parse_term("tok", Calculus::Tile).unwrap();
        assert!(steps(&tile, SemMode::pt_strong(), Bound::default()).is_err());
    }

    #[test]
    fn truncation_flag() {
        let s = step_set(&ce("down ; up"), SemMode::pt_weak(), Bound::default()).unwrap();
        assert!(!s.truncated);
        let s = step_set(&ce("[] ; dup"), SemMode::ce_strong(), Bound::default()).unwrap();
        assert!(!s.truncated);
        let s = step_set(&ce("id"), SemMode::ce_weak(), Bound::default()).unwrap();
        assert!(s.truncated);
    }
}

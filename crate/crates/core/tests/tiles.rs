mod common;

use std::collections::{BTreeSet, HashMap};

use bnets::tile::{contract_places, expand_places, synch_wrap};
use bnets::{
    parse_observation, parse_term, steps, tile_steps, Bound, Calculus, Label, Observation, SemMode,
    Step, Term, TileBound,
};
use common::*;

fn tile(s: &str) -> Term {
    parse_term(s, Calculus::Tile).unwrap()
}

/// Counts of every port in epoch `i`.
fn slice(o: &Observation, i: usize) -> Label {
    Label(o.0.iter().map(|e| e.counts()[i]).collect())
}

/// P/T steps per state, computed once.
struct Oracle {
    bound: Bound,
    memo: HashMap<Term, Vec<Step>>,
}

impl Oracle {
    fn steps(&mut self, s: &Term) -> &[Step] {
        let bound = self.bound;
        self.memo.entry(s.clone()).or_insert_with(|| {
            steps(s, SemMode::pt_strong(), bound).unwrap().into_iter().collect()
        })
    }

    /// States reachable through silent steps. Components cut off from
    /// the boundary are not clocked by the wrapper and may take extra
    /// epochs of their own.
    fn settle(&mut self, mut states: BTreeSet<Term>) -> BTreeSet<Term> {
        let mut todo: Vec<Term> = states.iter().cloned().collect();
        while let Some(s) = todo.pop() {
            let next: Vec<Term> = self
                .steps(&s)
                .iter()
                .filter(|x| x.trigger.0.iter().chain(&x.effect.0).all(|&c| c == 0))
                .map(|x| x.target.clone())
                .collect();
            for n in next {
                if states.insert(n.clone()) {
                    todo.push(n);
                }
            }
        }
        states
    }

    /// Buffer contents reachable from `t` through the given steps.
    fn run(&mut self, t: &Term, slices: &[(Label, Label)]) -> BTreeSet<Vec<u32>> {
        let mut states = self.settle([t.clone()].into());
        for (a, b) in slices {
            let mut next = BTreeSet::new();
            for s in &states {
                next.extend(
                    self.steps(s)
                        .iter()
                        .filter(|x| &x.trigger == a && &x.effect == b)
                        .map(|x| x.target.clone()),
                );
            }
            states = self.settle(next);
        }
        states.iter().map(Term::buffers).collect()
    }
}

#[test]
fn wrapped_steps_slice_into_pt_steps() {
    let mut r = rng(31);
    let bound = TileBound::new(2, 2, 3);
    for _ in 0..25 {
        let t = random_term(&mut r, TermShape::PT);
        let mut oracle = Oracle {
            bound: Bound::new(6, 3 + 2 * 2),
            memo: HashMap::new(),
        };
        let wrapped = synch_wrap(&t).unwrap();
        for s in tile_steps(&wrapped, bound, false).unwrap() {
            let (a, b) = (s.trigger.meta(), s.effect.meta());
            assert!(a.valid && b.valid && s.trigger.coetaneous(&s.effect), "{t}: {}", s.display());
            let age = a.age.max(b.age);
            if age == 0 {
                continue;
            }
            let slices: Vec<(Label, Label)> = (0..age)
                .map(|i| (slice(&s.trigger, i), slice(&s.effect, i)))
                .collect();
            let reached = oracle.run(&t, &slices);
            assert!(reached.contains(&s.target.buffers()), "{t}: {}", s.display());
        }
    }
}

#[test]
fn wrapper_drops_unsynchronised_steps() {
    let b = TileBound::new(2, 2, 4);
    let plain = tile_steps(&tile("id * id"), b, false).unwrap();
    let wrapped = tile_steps(&synch_wrap(&tile("id * id")).unwrap(), b, false).unwrap();
    let odd = parse_observation("1 0.1").unwrap();
    assert!(plain.iter().any(|s| s.trigger == odd));
    assert!(wrapped.iter().all(|s| s.trigger != odd));
    let fit: BTreeSet<_> = plain
        .iter()
        .filter(|s| s.trigger.meta().valid)
        .map(|s| (s.trigger.clone(), s.effect.clone()))
        .collect();
    let got: BTreeSet<_> = wrapped.iter().map(|s| (s.trigger.clone(), s.effect.clone())).collect();
    assert_eq!(fit, got);
}

#[test]
fn disconnected_halves_share_the_clock() {
    let b = TileBound::new(2, 2, 4);
    let loose = tile_steps(&tile("hide ; cohide"), b, false).unwrap();
    assert!(loose.iter().any(|s| s.trigger.meta().age != s.effect.meta().age));
    let wrapped = tile_steps(&synch_wrap(&tile("hide ; cohide")).unwrap(), b, false).unwrap();
    assert!(wrapped.iter().all(|s| s.trigger.meta().age == s.effect.meta().age));
}

#[test]
fn weak_tiles_agree_with_pt_weak() {
    let mut r = rng(32);
    for _ in 0..30 {
        let t = random_term(&mut r, TermShape::PT);
        let tiles: BTreeSet<(Label, Label, Term)> = tile_steps(&t, TileBound::new(1, 2, 3), true)
            .unwrap()
            .into_iter()
            .map(|s| (slice(&s.trigger, 0), slice(&s.effect, 0), s.target))
            .collect();
        let weak: BTreeSet<(Label, Label, Term)> = steps(&t, SemMode::pt_weak(), Bound::new(2, 3))
            .unwrap()
            .into_iter()
            .map(|s| (s.trigger, s.effect, s.target))
            .collect();
        assert_eq!(tiles, weak, "{t}");
    }
}

#[test]
fn marked_places_are_clusters() {
    let t = tile("[2] ; dup ; ([0] * [1])");
    let e = expand_places(&t);
    assert!(e.buffers().iter().all(|&n| n == 0));
    assert_eq!(contract_places(&e), t);
    let b = TileBound::new(2, 2, 4);
    for s in tile_steps(&tile("[1]"), b, false).unwrap() {
        let (h, k) = (s.trigger.meta().counttok[0], s.effect.meta().counttok[0]);
        assert_eq!(s.effect.0[0].counts()[0], 0);
        assert_eq!(s.target, Term::Buffer(1 + h - k));
    }
}

#[test]
fn token_fires_once_after_an_epoch() {
    let s = tile_steps(&tile("tok ; [0]"), TileBound::new(2, 2, 4), false).unwrap();
    assert!(s.iter().any(|x| x.target.buffers() == [1]));
    for x in s.iter().filter(|x| x.target.buffers() == [1]) {
        assert_eq!(x.effect.meta().counttok, [0]);
    }
}

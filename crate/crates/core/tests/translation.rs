mod common;

use bnets::translate::Encoding;
use bnets::{
    bisimilar, net_lts, net_steps, net_to_term, parse_term, steps, term_lts, term_to_net, Bound,
    Calculus, NetKind, SemMode,
};
use common::*;
use rand::Rng;

#[test]
fn ce_weak_terms_match_their_nets() {
    let mut r = rng(41);
    let mode = SemMode::ce_weak();
    // Internal wires can carry several times what the window shows.
    let wide = Bound::new(8, 1);
    for _ in 0..20 {
        let t = random_term(&mut r, TermShape::CE);
        // Weak C/E nets compose as P/T nets and stay 1-safe when fired.
        let n = term_to_net(&t, NetKind::Pt).unwrap();
        let x = window(&term_rel(&steps(&t, mode, wide).unwrap()), 1, 1);
        let y = window(&net_rel(&n, &net_steps(&n, mode, wide).unwrap()), 1, 1);
        assert_eq!(x, y, "{t}");
    }
}

#[test]
fn terms_are_bisimilar_to_their_nets() {
    let mut r = rng(42);
    let mode = SemMode::ce_strong();
    for _ in 0..40 {
        let t = random_term(&mut r, TermShape::CE);
        let n = term_to_net(&t, NetKind::Ce).unwrap();
        let a = term_lts(&t, mode, Bound::default()).unwrap();
        let b = net_lts(&n, mode, Bound::default()).unwrap();
        let report = bisimilar(&a, &b).unwrap();
        assert!(report.equivalent && report.exact, "{t}");
    }
}

#[test]
fn random_nets_survive_the_round_trip() {
    let mut r = rng(43);
    let mode = SemMode::ce_strong();
    for _ in 0..25 {
        let (left, right) = (r.gen_range(0..=2), r.gen_range(0..=2));
        let n = random_ce_net(&mut r, left, right);
        let t = net_to_term(&n, Encoding::Strong).unwrap();
        let a = net_lts(&n, mode, Bound::default()).unwrap();
        let b = term_lts(&t, mode, Bound::default()).unwrap();
        assert!(bisimilar(&a, &b).unwrap().equivalent, "{n:?}");
    }
}

#[test]
fn bisimulation_is_reflexive_and_separates() {
    let mode = SemMode::ce_strong();
    let lts = |s: &str| term_lts(&parse_term(s, Calculus::Ce).unwrap(), mode, Bound::default()).unwrap();
    let a = lts("[];dup");
    assert!(bisimilar(&a, &a).unwrap().equivalent);
    let report = bisimilar(&lts("[];[]"), &lts("[]")).unwrap();
    assert!(!report.equivalent);
    assert!(report.witness.is_some_and(|w| !w.is_empty()));
}

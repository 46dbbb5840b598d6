//! Builders for the derived term families.

use std::fmt;

use crate::error::{Error, Result};
use crate::term::{mirror, Term};

/// The (0,0) term standing for an empty diagram.
pub fn empty() -> Term {
    Term::seq(Term::Cohide, Term::Hide)
}

pub fn is_empty(t: &Term) -> bool {
    *t == empty()
}

/// Tensor that drops empty operands.
pub fn ten(a: Term, b: Term) -> Term {
    if is_empty(&a) {
        b
    } else if is_empty(&b) {
        a
    } else {
        Term::ten(a, b)
    }
}

/// Sequential composition that drops empty operands; only sound when the
/// other operand has sort (0,0) on the shared side, which sorting forces.
pub fn seq(a: Term, b: Term) -> Term {
    if is_empty(&a) {
        b
    } else if is_empty(&b) {
        a
    } else {
        Term::seq(a, b)
    }
}

pub fn ten_all(ts: impl IntoIterator<Item = Term>) -> Term {
    ts.into_iter().fold(empty(), ten)
}

pub fn seq_all(ts: impl IntoIterator<Item = Term>) -> Term {
    ts.into_iter().reduce(seq).unwrap_or_else(empty)
}

/// Composes the non-identity layers of an `n`-wire stack; `I_n` if none.
pub(crate) fn layers(n: usize, ls: impl IntoIterator<Item = Option<Term>>) -> Term {
    let mut it = ls.into_iter().flatten().peekable();
    if it.peek().is_none() {
        ids(n)
    } else {
        seq_all(it)
    }
}

pub fn ids(n: usize) -> Term {
    ten_all(std::iter::repeat(Term::Id).take(n))
}

pub fn hides(n: usize) -> Term {
    ten_all(std::iter::repeat(Term::Hide).take(n))
}

pub fn cohides(n: usize) -> Term {
    ten_all(std::iter::repeat(Term::Cohide).take(n))
}

/// Wire `i` leaves at position `perm[i]`; `None` for the identity.
pub(crate) fn perm_layers(perm: &[usize]) -> Option<Term> {
    let n = perm.len();
    let mut dest = perm.to_vec();
    let mut out = Vec::new();
    // Bubble sort on destinations, one adjacent swap per layer.
    loop {
        let mut swapped = false;
        for j in 0..n.saturating_sub(1) {
            if dest[j] > dest[j + 1] {
                dest.swap(j, j + 1);
                out.push(ten_all([ids(j), Term::Swap, ids(n - j - 2)]));
                swapped = true;
            }
        }
        if !swapped {
            break;
        }
    }
    if out.is_empty() {
        None
    } else {
        Some(seq_all(out))
    }
}

/// Permutation network sending wire `i` to position `perm[i]`.
pub fn perm_term(perm: &[usize]) -> Term {
    perm_layers(perm).unwrap_or_else(|| ids(perm.len()))
}

/// One output wire fanned from a single input by `dup`.
pub(crate) fn dup_tree(n: usize) -> Term {
    match n {
        0 => Term::Hide,
        1 => Term::Id,
        _ => Term::seq(Term::Dup, ten(dup_tree(n - 1), Term::Id)),
    }
}

/// `n` mutually exclusive inputs merged by `coalt`.
pub(crate) fn coalt_tree(n: usize) -> Term {
    match n {
        0 => Term::Up,
        1 => Term::Id,
        _ => Term::seq(ten(coalt_tree(n - 1), Term::Id), Term::Coalt),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Ids,
    Rotation,
    Dups,
    Codups,
    DupSource,
    CodupSink,
    Hides,
    Cohides,
    Twist,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Ids => "ids",
            Family::Rotation => "rotation",
            Family::Dups => "dups",
            Family::Codups => "codups",
            Family::DupSource => "dup-source",
            Family::CodupSink => "codup-sink",
            Family::Hides => "hides",
            Family::Cohides => "cohides",
            Family::Twist => "twist",
        })
    }
}

/// `X_n : (n+1, n+1)`, one wire crossing `n` others.
pub fn rotation(n: usize) -> Term {
    match n {
        0 => Term::Id,
        1 => Term::Swap,
        _ => Term::seq(ten(rotation(n - 1), Term::Id), ten(ids(n - 1), Term::Swap)),
    }
}

/// `n` wires each copied, copies grouped: `α / αα`.
pub fn dups(n: usize) -> Term {
    match n {
        0 => empty(),
        1 => Term::Dup,
        _ => Term::seq(
            ten(Term::Dup, dups(n - 1)),
            ten_all([Term::Id, rotation(n - 1), ids(n - 1)]),
        ),
    }
}

pub fn codups(n: usize) -> Term {
    mirror(&dups(n))
}

/// `(0, 2n)`: emits `αα`.
pub fn dup_source(n: usize) -> Term {
    seq(cohides(n), dups(n))
}

/// `(2n, 0)`: absorbs `αα`.
pub fn codup_sink(n: usize) -> Term {
    seq(codups(n), hides(n))
}

/// `(n+1, n+1)`: the last wire swapped twice past the others.
pub fn twist(n: usize) -> Term {
    match n {
        0 => Term::Id,
        1 => Term::seq(Term::Swap, Term::Swap),
        _ => {
            let outer = ten(Term::Swap, ids(n - 1));
            seq_all([outer.clone(), ten(Term::Id, twist(n - 1)), outer])
        }
    }
}

pub fn compound(family: Family, n: usize) -> Result<Term> {
    use Family::*;
    let needs_positive = !matches!(family, Twist | Rotation | Ids | Hides | Cohides);
    if needs_positive && n == 0 {
        return Err(Error::Malformed(format!("{family} needs n >= 1")));
    }
    Ok(match family {
        Ids => ids(n),
        Rotation => rotation(n),
        Dups => dups(n),
        Codups => codups(n),
        DupSource => dup_source(n),
        CodupSink => codup_sink(n),
        Hides => hides(n),
        Cohides => cohides(n),
        Twist => twist(n),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::label::Label;
    use crate::semantics::{steps, Bound, SemMode};
    use crate::term::{infer_sort, Sort};

    fn labels(t: &Term) -> Vec<(String, String)> {
        steps(t, SemMode::ce_strong(), Bound::default())
            .unwrap()
            .into_iter()
            .map(|s| (s.trigger.bits(), s.effect.bits()))
            .collect()
    }

    #[test]
    fn sorts() {
        for n in 1..5 {
            assert_eq!(infer_sort(&rotation(n)).unwrap(), Sort::new(n + 1, n + 1));
            assert_eq!(infer_sort(&dups(n)).unwrap(), Sort::new(n, 2 * n));
            assert_eq!(infer_sort(&codups(n)).unwrap(), Sort::new(2 * n, n));
            assert_eq!(infer_sort(&dup_source(n)).unwrap(), Sort::new(0, 2 * n));
            assert_eq!(infer_sort(&codup_sink(n)).unwrap(), Sort::new(2 * n, 0));
            assert_eq!(infer_sort(&twist(n)).unwrap(), Sort::new(n + 1, n + 1));
        }
        assert_eq!(infer_sort(&empty()).unwrap(), Sort::new(0, 0));
    }

    #[test]
    fn dups_copy() {
        let l = labels(&dups(2));
        assert_eq!(l.len(), 4);
        for (a, b) in l {
            assert_eq!(b, format!("{a}{a}"));
        }
    }

    #[test]
    fn dup_source_effects() {
        let effects: Vec<String> = labels(&dup_source(2)).into_iter().map(|(_, b)| b).collect();
        assert_eq!(effects, ["0000", "0101", "1010", "1111"]);
    }

    #[test]
    fn rotation_moves_first_wire_last() {
        for (a, b) in labels(&rotation(2)) {
            assert_eq!(b, format!("{}{}", &a[1..], &a[..1]));
        }
    }

    #[test]
    fn permutations() {
        let perm = [2, 0, 1];
        for s in steps(&perm_term(&perm), SemMode::pt_strong(), Bound::new(2, 2)).unwrap() {
            let mut moved = vec![0; 3];
            for (i, &p) in perm.iter().enumerate() {
                moved[p] = s.trigger.0[i];
            }
            assert_eq!(s.effect, Label(moved));
        }
        assert_eq!(perm_term(&[0, 1]), ids(2));
    }

    #[test]
    fn twist_is_identity_like() {
        for (a, b) in labels(&twist(2)) {
            assert_eq!(a, b);
        }
        assert!(compound(Family::Dups, 0).is_err());
        assert_eq!(compound(Family::Twist, 0).unwrap(), Term::Id);
    }
}

//! Translations between terms and nets with boundaries.

pub mod compound;
pub mod forms;

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::multiset::Multiset;
use crate::net::{compose_seq, tensor, Net, NetKind, Transition};
use crate::term::{Calculus, Term};

pub use compound::{compound, empty, perm_term, Family};
pub use forms::{
    amplifier, contention_term, decompose_function, functional_form, multirelational_form,
    relational_form, FiniteFunction, FormKind, RelKind, SetValuedFunction, Side,
};

use compound::{codup_sink, codups, dup_source, dups, ids, seq_all, ten, ten_all};

/// Homomorphic image of a term; C/E terms may use either kind.
pub fn term_to_net(t: &Term, kind: NetKind) -> Result<Net> {
    match t {
        Term::Seq(a, b) => compose_seq(&term_to_net(a, kind)?, &term_to_net(b, kind)?),
        Term::Ten(a, b) => tensor(&term_to_net(a, kind)?, &term_to_net(b, kind)?),
        c => constant_net(c, kind),
    }
}

fn constant_net(c: &Term, kind: NetKind) -> Result<Net> {
    let tr = |name: &str, left: &[usize], right: &[usize]| {
        Transition::new(name)
            .left(left.iter().copied().collect::<Multiset>())
            .right(right.iter().copied().collect::<Multiset>())
    };
    let sort = c.constant_sort().expect("constant");
    let (places, transitions, marking) = match c {
        Term::Buffer(n) => {
            if kind == NetKind::Ce && *n > 1 {
                return Err(Error::Unsupported(format!("[{n}]")));
            }
            (
                vec!["p".to_string()],
                vec![
                    Transition::new("in").left([0]).post([0]),
                    Transition::new("out").pre([0]).right([0]),
                ],
                Multiset::from_counts(&[*n]),
            )
        }
        Term::Token => return Err(Error::Unsupported("tok".into())),
        Term::Id => (vec![], vec![tr("id", &[0], &[0])], Multiset::new()),
        Term::Swap => (
            vec![],
            vec![tr("x0", &[0], &[1]), tr("x1", &[1], &[0])],
            Multiset::new(),
        ),
        Term::Dup => (vec![], vec![tr("dup", &[0], &[0, 1])], Multiset::new()),
        Term::Codup => (vec![], vec![tr("codup", &[0, 1], &[0])], Multiset::new()),
        Term::Hide => (vec![], vec![tr("hide", &[0], &[])], Multiset::new()),
        Term::Cohide => (vec![], vec![tr("cohide", &[], &[0])], Multiset::new()),
        Term::Alt => (
            vec![],
            vec![tr("alt0", &[0], &[0]), tr("alt1", &[0], &[1])],
            Multiset::new(),
        ),
        Term::Coalt => (
            vec![],
            vec![tr("coalt0", &[0], &[0]), tr("coalt1", &[1], &[0])],
            Multiset::new(),
        ),
        Term::Down | Term::Up => (vec![], vec![], Multiset::new()),
        Term::Seq(..) | Term::Ten(..) => unreachable!("composite"),
    };
    Net::new(kind, sort.left, sort.right, places, transitions, [], marking)
}

/// Tensor of one buffer per place holding its tokens.
pub fn marking_term(net: &Net) -> Term {
    if net.place_count() == 0 {
        return empty();
    }
    ten_all((0..net.place_count()).map(|p| Term::Buffer(net.marking().count(p))))
}

/// Which family of forms to assemble with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Encoding {
    /// Relational forms and the contention filter; C/E strong.
    Strong,
    /// Multirelational forms, no contention filter; C/E weak and P/T.
    Multi,
}

fn boundary(n: usize, net: &Net, pick: impl Fn(&Transition) -> &Multiset) -> Result<SetValuedFunction> {
    SetValuedFunction::new(n, net.transitions().iter().map(|t| pick(t).clone()).collect())
}

/// Assembles the term of a net: source and firing copies of the
/// transitions, postset into the places, preset out, target copies.
pub fn net_to_term(net: &Net, encoding: Encoding) -> Result<Term> {
    let t = net.transitions().len();
    let p = net.place_count();
    let source = boundary(net.left_arity(), net, |x| &x.left)?;
    let target = boundary(net.right_arity(), net, |x| &x.right)?;
    let pre = boundary(p, net, |x| &x.pre)?;
    let post = boundary(p, net, |x| &x.post)?;
    let rho = |f: &SetValuedFunction| form(encoding, RelKind::Rho, f);
    let lambda = |f: &SetValuedFunction| form(encoding, RelKind::Lambda, f);
    let filter = match encoding {
        Encoding::Strong => {
            let pairs: Vec<_> = net.contention().iter().copied().collect();
            contention_term(t, &pairs)?
        }
        Encoding::Multi => ids(t),
    };
    let body = seq_all([
        codups(t),
        rho(&post)?,
        marking_term(net),
        lambda(&pre)?,
        dups(t),
    ]);
    Ok(seq_all([
        ten(dup_source(t), lambda(&source)?),
        ten(filter, body),
        ten(codup_sink(t), rho(&target)?),
    ]))
}

fn form(encoding: Encoding, kind: RelKind, f: &SetValuedFunction) -> Result<Term> {
    match encoding {
        Encoding::Strong => relational_form(kind, f),
        Encoding::Multi => Ok(multirelational_form(kind, f)),
    }
}

/// The encoding matching a semantics of the given calculus.
pub fn encoding_for(calculus: Calculus, weak: bool) -> Encoding {
    match (calculus, weak) {
        (Calculus::Ce, false) => Encoding::Strong,
        _ => Encoding::Multi,
    }
}

/// Buffer contents of a translated term, in place order.
pub fn term_marking(t: &Term) -> Multiset {
    Multiset::from_counts(&t.buffers())
}

/// Replaces the buffers of a term, left to right.
pub fn with_buffers(t: &Term, counts: &[u32]) -> Term {
    fn go(t: &Term, it: &mut std::slice::Iter<'_, u32>) -> Term {
        match t {
            Term::Buffer(_) => Term::Buffer(*it.next().expect("enough counts")),
            Term::Seq(a, b) => {
                let a = go(a, it);
                Term::Seq(Arc::new(a), Arc::new(go(b, it)))
            }
            Term::Ten(a, b) => {
                let a = go(a, it);
                Term::Ten(Arc::new(a), Arc::new(go(b, it)))
            }
            c => c.clone(),
        }
    }
    go(t, &mut counts.iter())
}

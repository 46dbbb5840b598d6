//! Stateless terms realising functions and (multi)relations between
//! boundaries.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::multiset::Multiset;
use crate::term::{mirror, Term};
use crate::translate::compound::{coalt_tree, dup_tree, ids, layers, perm_layers, seq, ten, ten_all};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteFunction {
    cod: usize,
    map: Vec<usize>,
}

impl FiniteFunction {
    pub fn new(cod: usize, map: Vec<usize>) -> Result<Self> {
        if let Some(&x) = map.iter().find(|&&x| x >= cod) {
            return Err(Error::IndexOutOfRange(format!(
                "function value {x} outside codomain {cod}"
            )));
        }
        Ok(FiniteFunction { cod, map })
    }

    pub fn identity(n: usize) -> Self {
        FiniteFunction {
            cod: n,
            map: (0..n).collect(),
        }
    }

    pub fn dom(&self) -> usize {
        self.map.len()
    }

    pub fn cod(&self) -> usize {
        self.cod
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    /// `self` after `g`.
    pub fn after(&self, g: &FiniteFunction) -> FiniteFunction {
        FiniteFunction {
            cod: self.cod,
            map: g.map.iter().map(|&x| self.map[x]).collect(),
        }
    }

    pub fn image(&self) -> BTreeSet<usize> {
        self.map.iter().copied().collect()
    }
}

impl fmt::Display for FiniteFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.map.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]:{}->{}", parts.join(","), self.dom(), self.cod)
    }
}

/// `f = f2 . f1 . f0`: a permutation sorting the domain by image, a
/// monotone surjection onto the image rank, a monotone injection.
pub fn decompose_function(f: &FiniteFunction) -> (FiniteFunction, FiniteFunction, FiniteFunction) {
    let n = f.dom();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (f.apply(i), i));
    let mut f0 = vec![0; n];
    for (pos, &i) in order.iter().enumerate() {
        f0[i] = pos;
    }
    let image: Vec<usize> = f.image().into_iter().collect();
    let rank = |y: usize| image.binary_search(&y).expect("in image");
    let f1: Vec<usize> = order.iter().map(|&i| rank(f.apply(i))).collect();
    let parts = (
        FiniteFunction { cod: n, map: f0 },
        FiniteFunction {
            cod: image.len(),
            map: f1,
        },
        FiniteFunction {
            cod: f.cod(),
            map: image,
        },
    );
    debug_assert_eq!(parts.2.after(&parts.1).after(&parts.0), *f);
    parts
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormKind {
    /// Right inverse: `(cod, dom)`, `U / f⁻¹(U)`.
    Riff,
    /// Left inverse: `(dom, cod)`, `f⁻¹(U) / U`.
    Liff,
    /// Right direct: `(dom, cod)`, `U / f(U)`.
    Rdff,
    /// Left direct: `(cod, dom)`, `f(U) / U`.
    Ldff,
}

pub fn functional_form(kind: FormKind, f: &FiniteFunction) -> Term {
    match kind {
        FormKind::Riff => riff(f),
        FormKind::Liff => mirror(&riff(f)),
        FormKind::Rdff => rdff(f),
        FormKind::Ldff => mirror(&rdff(f)),
    }
}

/// Preimage sizes of the image points, in increasing image order.
fn fibres(f: &FiniteFunction) -> Vec<usize> {
    let mut sizes = vec![0; f.cod()];
    for &y in f.map() {
        sizes[y] += 1;
    }
    sizes.into_iter().filter(|&s| s > 0).collect()
}

fn inverse(perm: &FiniteFunction) -> Vec<usize> {
    let mut inv = vec![0; perm.dom()];
    for (i, &p) in perm.map().iter().enumerate() {
        inv[p] = i;
    }
    inv
}

fn riff(f: &FiniteFunction) -> Term {
    let (f0, _, _) = decompose_function(f);
    let image = f.image();
    let prune = if image.len() == f.cod() {
        None
    } else {
        Some(ten_all((0..f.cod()).map(|y| {
            if image.contains(&y) {
                Term::Id
            } else {
                Term::Hide
            }
        })))
    };
    let sizes = fibres(f);
    let spread = if sizes.iter().all(|&s| s == 1) {
        None
    } else {
        Some(ten_all(sizes.into_iter().map(dup_tree)))
    };
    let sort = perm_layers(&inverse(&f0));
    match (prune, spread, sort) {
        (None, None, None) => ids(f.cod()),
        (p, s, x) => seq_opt([p, s, x]),
    }
}

fn rdff(f: &FiniteFunction) -> Term {
    let (f0, _, _) = decompose_function(f);
    let image = f.image();
    let sort = perm_layers(f0.map());
    let sizes = fibres(f);
    let merge = if sizes.iter().all(|&s| s == 1) {
        None
    } else {
        Some(ten_all(sizes.into_iter().map(coalt_tree)))
    };
    let pad = if image.len() == f.cod() {
        None
    } else {
        Some(ten_all((0..f.cod()).map(|y| {
            if image.contains(&y) {
                Term::Id
            } else {
                Term::Up
            }
        })))
    };
    match (sort, merge, pad) {
        (None, None, None) => ids(f.dom()),
        (x, m, p) => seq_opt([x, m, p]),
    }
}

fn seq_opt(ls: [Option<Term>; 3]) -> Term {
    ls.into_iter()
        .flatten()
        .reduce(seq)
        .expect("at least one layer")
}

/// `f : dom -> M(cod)`; images must be sets for relational forms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SetValuedFunction {
    cod: usize,
    images: Vec<Multiset>,
}

impl SetValuedFunction {
    pub fn new(cod: usize, images: Vec<Multiset>) -> Result<Self> {
        for m in &images {
            if let Some(x) = m.max_element() {
                if x >= cod {
                    return Err(Error::IndexOutOfRange(format!(
                        "image element {x} outside codomain {cod}"
                    )));
                }
            }
        }
        Ok(SetValuedFunction { cod, images })
    }

    pub fn dom(&self) -> usize {
        self.images.len()
    }

    pub fn cod(&self) -> usize {
        self.cod
    }

    pub fn image(&self, i: usize) -> &Multiset {
        &self.images[i]
    }

    pub fn is_set_valued(&self) -> bool {
        self.images.iter().all(Multiset::is_set)
    }

    /// Rows `(i, j, multiplicity)` in lexicographic order.
    fn span(&self) -> (FiniteFunction, FiniteFunction, Vec<u32>) {
        let rows: Vec<(usize, usize, u32)> = self
            .images
            .iter()
            .enumerate()
            .flat_map(|(i, m)| m.iter().map(move |(j, c)| (i, j, c)))
            .collect();
        (
            FiniteFunction {
                cod: self.dom(),
                map: rows.iter().map(|r| r.0).collect(),
            },
            FiniteFunction {
                cod: self.cod,
                map: rows.iter().map(|r| r.1).collect(),
            },
            rows.iter().map(|r| r.2).collect(),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelKind {
    /// `(dom, cod)`, `U / f(U)`.
    Rho,
    /// `(cod, dom)`, `f(U) / U`.
    Lambda,
}

pub fn relational_form(kind: RelKind, f: &SetValuedFunction) -> Result<Term> {
    if !f.is_set_valued() {
        return Err(Error::NotASet("relational form images".into()));
    }
    let (fl, fr, _) = f.span();
    Ok(match kind {
        RelKind::Rho => seq(riff(&fl), rdff(&fr)),
        RelKind::Lambda => seq(mirror(&rdff(&fr)), mirror(&riff(&fl))),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// `!k` (right, `a / ka`) or `k!` (left, `ka / a`).
pub fn amplifier(k: u32, side: Side) -> Result<Term> {
    if k == 0 {
        return Err(Error::Malformed("amplifier factor must be positive".into()));
    }
    Ok(amp(k, side))
}

fn amp(k: u32, side: Side) -> Term {
    if k == 1 {
        return Term::Id;
    }
    match side {
        Side::Right => Term::seq(Term::seq(Term::Dup, ten(amp(k - 1, side), Term::Id)), Term::Coalt),
        Side::Left => Term::seq(Term::seq(Term::Alt, ten(Term::Id, amp(k - 1, side))), Term::Codup),
    }
}

pub fn multirelational_form(kind: RelKind, f: &SetValuedFunction) -> Term {
    let (fl, fr, mult) = f.span();
    let side = match kind {
        RelKind::Rho => Side::Right,
        RelKind::Lambda => Side::Left,
    };
    let amps = if mult.iter().all(|&m| m == 1) {
        None
    } else {
        Some(ten_all(mult.iter().map(|&m| amp(m, side))))
    };
    match kind {
        RelKind::Rho => layers(f.dom(), [Some(riff(&fl)), amps, Some(rdff(&fr))]),
        RelKind::Lambda => layers(
            f.cod(),
            [Some(mirror(&rdff(&fr))), amps, Some(mirror(&riff(&fl)))],
        ),
    }
}

/// Admits `χ(U)/χ(U)` exactly for `U` free of contending pairs.
pub fn contention_gadget() -> Term {
    Term::seq(
        Term::seq(
            Term::ten(Term::Dup, Term::Dup),
            ten_all([Term::Id, Term::Swap, Term::Id]),
        ),
        ten_all([Term::Id, Term::Id, Term::seq(Term::Coalt, Term::Hide)]),
    )
}

/// Identity on `t` wires filtered by the contention relation `pairs`.
pub fn contention_term(t: usize, pairs: &[(usize, usize)]) -> Result<Term> {
    let mut rel = BTreeSet::new();
    for &(u, v) in pairs {
        if u == v || u >= t || v >= t {
            return Err(Error::Malformed(format!("contention pair ({u},{v}) on {t} transitions")));
        }
        rel.insert((u.min(v), u.max(v)));
    }
    let mut term = ids(t);
    for (u, v) in rel {
        // Send u, v to the last two positions, the rest keep their order.
        let mut perm = vec![0; t];
        let mut next = 0;
        for (i, p) in perm.iter_mut().enumerate() {
            if i == u {
                *p = t - 2;
            } else if i == v {
                *p = t - 1;
            } else {
                *p = next;
                next += 1;
            }
        }
        let mut inv = vec![0; t];
        for (i, &p) in perm.iter().enumerate() {
            inv[p] = i;
        }
        let filter = ten(ids(t - 2), contention_gadget());
        term = layers(t, [Some(term), perm_layers(&perm), Some(filter), perm_layers(&inv)]);
    }
    Ok(term)
}

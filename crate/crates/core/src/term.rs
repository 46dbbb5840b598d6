//! Terms of the connector calculi: syntax tree, concrete syntax and sorts.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Which calculus a term is read in. Constrains the constants accepted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Calculus {
    Ce,
    Pt,
    Tile,
}

impl fmt::Display for Calculus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Calculus::Ce => "C/E",
            Calculus::Pt => "P/T",
            Calculus::Tile => "tile",
        })
    }
}

/// A connector term. `Buffer(0)` and `Buffer(1)` double as the empty and
/// full C/E places.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Buffer(u32),
    Token,
    Id,
    Swap,
    Dup,
    Codup,
    Hide,
    Cohide,
    Alt,
    Coalt,
    Down,
    Up,
    Seq(Arc<Term>, Arc<Term>),
    Ten(Arc<Term>, Arc<Term>),
}

/// Boundary arities `(left, right)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sort {
    pub left: usize,
    pub right: usize,
}

impl Sort {
    pub const fn new(left: usize, right: usize) -> Self {
        Sort { left, right }
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.left, self.right)
    }
}

impl Term {
    pub fn seq(a: Term, b: Term) -> Term {
        Term::Seq(Arc::new(a), Arc::new(b))
    }

    pub fn ten(a: Term, b: Term) -> Term {
        Term::Ten(Arc::new(a), Arc::new(b))
    }

    pub fn is_constant(&self) -> bool {
        !matches!(self, Term::Seq(..) | Term::Ten(..))
    }

    /// Sort of a constant; `None` for composite nodes.
    pub fn constant_sort(&self) -> Option<Sort> {
        use Term::*;
        let (l, r) = match self {
            Buffer(_) | Id => (1, 1),
            Token | Cohide | Up => (0, 1),
            Swap => (2, 2),
            Dup | Alt => (1, 2),
            Codup | Coalt => (2, 1),
            Hide | Down => (1, 0),
            Seq(..) | Ten(..) => return None,
        };
        Some(Sort::new(l, r))
    }

    /// ASCII name of a constant.
    pub fn constant_name(&self) -> Option<String> {
        use Term::*;
        let s = match self {
            Buffer(n) => return Some(format!("[{n}]")),
            Token => "tok",
            Id => "id",
            Swap => "swap",
            Dup => "dup",
            Codup => "codup",
            Hide => "hide",
            Cohide => "cohide",
            Alt => "alt",
            Coalt => "coalt",
            Down => "down",
            Up => "up",
            Seq(..) | Ten(..) => return None,
        };
        Some(s.to_string())
    }

    /// Number of constant occurrences.
    pub fn size(&self) -> usize {
        match self {
            Term::Seq(a, b) | Term::Ten(a, b) => a.size() + b.size(),
            _ => 1,
        }
    }

    /// Buffer token counts, left to right.
    pub fn buffers(&self) -> Vec<u32> {
        let mut out = Vec::new();
        self.collect_buffers(&mut out);
        out
    }

    fn collect_buffers(&self, out: &mut Vec<u32>) {
        match self {
            Term::Buffer(n) => out.push(*n),
            Term::Seq(a, b) | Term::Ten(a, b) => {
                a.collect_buffers(out);
                b.collect_buffers(out);
            }
            _ => {}
        }
    }

    /// Checks that every constant is admissible in `mode`.
    pub fn check_mode(&self, mode: Calculus) -> Result<()> {
        match self {
            Term::Seq(a, b) | Term::Ten(a, b) => {
                a.check_mode(mode)?;
                b.check_mode(mode)
            }
            Term::Token if mode != Calculus::Tile => Err(Error::NotInMode {
                name: "tok".into(),
                mode,
                pos: 0,
            }),
            Term::Buffer(n) if mode == Calculus::Ce && *n > 1 => Err(Error::NotInMode {
                name: format!("[{n}]"),
                mode,
                pos: 0,
            }),
            _ => Ok(()),
        }
    }
}

/// Sort inference.
pub fn infer_sort(t: &Term) -> Result<Sort> {
    match t {
        Term::Seq(a, b) => {
            let sa = infer_sort(a)?;
            let sb = infer_sort(b)?;
            if sa.right != sb.left {
                return Err(Error::SortMismatch {
                    node: render_term(t),
                    left: sa.right,
                    right: sb.left,
                });
            }
            Ok(Sort::new(sa.left, sb.right))
        }
        Term::Ten(a, b) => {
            let sa = infer_sort(a)?;
            let sb = infer_sort(b)?;
            Ok(Sort::new(sa.left + sb.left, sa.right + sb.right))
        }
        c => Ok(c.constant_sort().expect("constant")),
    }
}

/// True iff no buffer or token occurs in `t`.
pub fn is_stateless(t: &Term) -> bool {
    match t {
        Term::Buffer(_) | Term::Token => false,
        Term::Seq(a, b) | Term::Ten(a, b) => is_stateless(a) && is_stateless(b),
        _ => true,
    }
}

/// Left-right reflection: duals swapped, sequence order reversed.
/// Buffers and tokens are kept as they are.
pub fn mirror(t: &Term) -> Term {
    use Term::*;
    match t {
        Dup => Codup,
        Codup => Dup,
        Alt => Coalt,
        Coalt => Alt,
        Hide => Cohide,
        Cohide => Hide,
        Down => Up,
        Up => Down,
        Seq(a, b) => Term::seq(mirror(b), mirror(a)),
        Ten(a, b) => Term::ten(mirror(a), mirror(b)),
        c => c.clone(),
    }
}

// ---------------------------------------------------------------- rendering

/// How buffers are printed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RenderStyle {
    /// `[]` / `[*]` instead of `[0]` / `[1]`.
    pub ce_buffers: bool,
    /// No blanks around operators.
    pub compact: bool,
}

/// Canonical text of a term.
pub fn render_term(t: &Term) -> String {
    render_with(t, RenderStyle::default())
}

pub fn render_with(t: &Term, style: RenderStyle) -> String {
    let mut s = String::new();
    write_seq(t, style, &mut s);
    s
}

fn write_seq(t: &Term, st: RenderStyle, out: &mut String) {
    match t {
        Term::Seq(a, b) => {
            write_seq(a, st, out);
            out.push_str(if st.compact { ";" } else { " ; " });
            match **b {
                Term::Seq(..) => write_paren(b, st, out),
                _ => write_ten(b, st, out),
            }
        }
        _ => write_ten(t, st, out),
    }
}

fn write_ten(t: &Term, st: RenderStyle, out: &mut String) {
    match t {
        Term::Ten(a, b) => {
            write_ten(a, st, out);
            out.push_str(if st.compact { "*" } else { " * " });
            write_atom(b, st, out);
        }
        _ => write_atom(t, st, out),
    }
}

fn write_atom(t: &Term, st: RenderStyle, out: &mut String) {
    match t {
        Term::Seq(..) | Term::Ten(..) => write_paren(t, st, out),
        Term::Buffer(0) if st.ce_buffers => out.push_str("[]"),
        Term::Buffer(1) if st.ce_buffers => out.push_str("[*]"),
        c => out.push_str(&c.constant_name().expect("constant")),
    }
}

fn write_paren(t: &Term, st: RenderStyle, out: &mut String) {
    out.push('(');
    write_seq(t, st, out);
    out.push(')');
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_term(self))
    }
}

// ------------------------------------------------------------------ parsing

/// Parses a term in the given calculus.
pub fn parse_term(text: &str, mode: Calculus) -> Result<Term> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        mode,
    };
    let t = p.seq()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(t)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    mode: Calculus,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while let Some(&c) = self.src.get(self.pos) {
            if c == b'#' {
                while self.pos < self.src.len() && self.src[self.pos] != b'\n' {
                    self.pos += 1;
                }
            } else if c.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.src.get(self.pos) == Some(&c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn seq(&mut self) -> Result<Term> {
        let mut t = self.ten()?;
        while self.eat(b';') {
            let r = self.ten()?;
            t = Term::seq(t, r);
        }
        Ok(t)
    }

    fn ten(&mut self) -> Result<Term> {
        let mut t = self.atom()?;
        while self.eat(b'*') {
            let r = self.atom()?;
            t = Term::ten(t, r);
        }
        Ok(t)
    }

    fn atom(&mut self) -> Result<Term> {
        self.skip_ws();
        let start = self.pos;
        match self.src.get(self.pos) {
            None => Err(self.err("unexpected end of input")),
            Some(b'(') => {
                self.pos += 1;
                let t = self.seq()?;
                if !self.eat(b')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(t)
            }
            Some(b'[') => {
                self.pos += 1;
                self.skip_ws();
                let n = match self.src.get(self.pos) {
                    Some(b']') => 0,
                    Some(b'*') => {
                        self.pos += 1;
                        1
                    }
                    Some(c) if c.is_ascii_digit() => self.nat()?,
                    _ => return Err(self.err("expected a token count, `*` or `]`")),
                };
                if !self.eat(b']') {
                    return Err(self.err("expected `]`"));
                }
                if self.mode == Calculus::Ce && n > 1 {
                    return Err(Error::NotInMode {
                        name: format!("[{n}]"),
                        mode: self.mode,
                        pos: start,
                    });
                }
                Ok(Term::Buffer(n))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                while self
                    .src
                    .get(self.pos)
                    .is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_')
                {
                    self.pos += 1;
                }
                let word = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                let t = match word {
                    "tok" => Term::Token,
                    "id" => Term::Id,
                    "swap" => Term::Swap,
                    "dup" => Term::Dup,
                    "codup" => Term::Codup,
                    "hide" => Term::Hide,
                    "cohide" => Term::Cohide,
                    "alt" => Term::Alt,
                    "coalt" => Term::Coalt,
                    "down" => Term::Down,
                    "up" => Term::Up,
                    _ => {
                        self.pos = start;
                        return Err(self.err(&format!("unknown constant `{word}`")));
                    }
                };
                if t == Term::Token && self.mode != Calculus::Tile {
                    return Err(Error::NotInMode {
                        name: word.into(),
                        mode: self.mode,
                        pos: start,
                    });
                }
                Ok(t)
            }
            Some(_) => Err(self.err("expected a constant, `[` or `(`")),
        }
    }

    fn nat(&mut self) -> Result<u32> {
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .expect("ascii")
            .parse()
            .map_err(|_| Error::Syntax {
                pos: start,
                msg: "token count out of range".into(),
            })
    }
}

//! Line-based text format and Graphviz output for nets.

use std::collections::HashMap;
use std::fmt::Write;

use crate::error::{Error, Result};
use crate::multiset::Multiset;
use crate::net::{Net, NetKind, Transition};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NetFormat {
    Text,
    Dot,
}

fn format_err(line: usize, msg: impl Into<String>) -> Error {
    Error::NetFormat {
        line,
        msg: msg.into(),
    }
}

/// Parses the text format and validates the result.
pub fn parse_net(text: &str) -> Result<Net> {
    let mut header: Option<(NetKind, usize, usize)> = None;
    let mut places: Vec<String> = Vec::new();
    let mut place_ix: HashMap<String, usize> = HashMap::new();
    let mut marking = Multiset::new();
    let mut transitions: Vec<Transition> = Vec::new();
    let mut pending_contention: Vec<(usize, String, String)> = Vec::new();

    for (no, raw) in text.lines().enumerate() {
        let line_no = no + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut words = line.split_whitespace();
        let keyword = words.next().expect("nonempty line");
        if header.is_none() && keyword != "net" {
            return Err(format_err(line_no, "expected `net (ce|pt) m=<nat> n=<nat>` header"));
        }
        match keyword {
            "net" => {
                if header.is_some() {
                    return Err(format_err(line_no, "duplicate header"));
                }
                let kind = match words.next() {
                    Some("ce") => NetKind::Ce,
                    Some("pt") => NetKind::Pt,
                    _ => return Err(format_err(line_no, "net kind must be `ce` or `pt`")),
                };
                let (mut m, mut n) = (None, None);
                for w in words {
                    let (k, v) = w
                        .split_once('=')
                        .ok_or_else(|| format_err(line_no, format!("bad field `{w}`")))?;
                    let v = nat(v, line_no)?;
                    match k {
                        "m" => m = Some(v as usize),
                        "n" => n = Some(v as usize),
                        _ => return Err(format_err(line_no, format!("unknown field `{k}`"))),
                    }
                }
                match (m, n) {
                    (Some(m), Some(n)) => header = Some((kind, m, n)),
                    _ => return Err(format_err(line_no, "header needs m= and n=")),
                }
            }
            "place" => {
                let name = words
                    .next()
                    .ok_or_else(|| format_err(line_no, "place needs a name"))?;
                if place_ix.contains_key(name) {
                    return Err(format_err(line_no, format!("duplicate place `{name}`")));
                }
                let tokens = match words.next() {
                    None => 0,
                    Some("marked") => 1,
                    Some(w) => match w.strip_prefix("tokens=") {
                        Some(v) => nat(v, line_no)?,
                        None => return Err(format_err(line_no, format!("bad place option `{w}`"))),
                    },
                };
                if let Some(extra) = words.next() {
                    return Err(format_err(line_no, format!("unexpected `{extra}`")));
                }
                place_ix.insert(name.to_string(), places.len());
                marking.insert_n(places.len(), tokens);
                places.push(name.to_string());
            }
            "trans" => {
                let name = words
                    .next()
                    .ok_or_else(|| format_err(line_no, "trans needs a name"))?;
                if transitions.iter().any(|t| t.name == name) {
                    return Err(format_err(line_no, format!("duplicate transition `{name}`")));
                }
                let mut t = Transition::new(name);
                for w in words {
                    let (k, v) = w
                        .split_once('=')
                        .ok_or_else(|| format_err(line_no, format!("bad field `{w}`")))?;
                    let by_place = |e: &str| {
                        place_ix
                            .get(e)
                            .copied()
                            .ok_or_else(|| format_err(line_no, format!("unknown place `{e}`")))
                    };
                    let by_port = |e: &str| nat(e, line_no).map(|x| x as usize);
                    match k {
                        "pre" => t.pre = multiset(v, line_no, by_place)?,
                        "post" => t.post = multiset(v, line_no, by_place)?,
                        "left" => t.left = multiset(v, line_no, by_port)?,
                        "right" => t.right = multiset(v, line_no, by_port)?,
                        _ => return Err(format_err(line_no, format!("unknown field `{k}`"))),
                    }
                }
                transitions.push(t);
            }
            "contention" => {
                let (Some(a), Some(b), None) = (words.next(), words.next(), words.next()) else {
                    return Err(format_err(line_no, "contention needs two transitions"));
                };
                pending_contention.push((line_no, a.to_string(), b.to_string()));
            }
            other => return Err(format_err(line_no, format!("unknown keyword `{other}`"))),
        }
    }
    let (kind, m, n) = header.ok_or_else(|| format_err(1, "empty net description"))?;
    let index: HashMap<&str, usize> = transitions
        .iter()
        .enumerate()
        .map(|(i, t)| (t.name.as_str(), i))
        .collect();
    let mut contention = Vec::new();
    for (_, a, b) in &pending_contention {
        let find = |x: &String| {
            index
                .get(x.as_str())
                .copied()
                .ok_or_else(|| Error::UnknownTransition(x.clone()))
        };
        contention.push((find(a)?, find(b)?));
    }
    Net::new(kind, m, n, places, transitions, contention, marking)
}

fn nat(s: &str, line: usize) -> Result<u32> {
    s.parse()
        .map_err(|_| format_err(line, format!("expected a natural, found `{s}`")))
}

fn multiset(
    s: &str,
    line: usize,
    elem: impl Fn(&str) -> Result<usize>,
) -> Result<Multiset> {
    let mut m = Multiset::new();
    for part in s.split(',').filter(|p| !p.is_empty()) {
        let (e, c) = match part.split_once(':') {
            Some((e, c)) => (e, nat(c, line)?),
            None => (part, 1),
        };
        m.insert_n(elem(e)?, c);
    }
    Ok(m)
}

/// Text (round-trips through [`parse_net`]) or DOT.
pub fn render_net(net: &Net, format: NetFormat) -> String {
    match format {
        NetFormat::Text => render_text(net),
        NetFormat::Dot => render_dot(net),
    }
}

fn render_text(net: &Net) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "net {} m={} n={}",
        net.kind(),
        net.left_arity(),
        net.right_arity()
    );
    for (i, p) in net.places().iter().enumerate() {
        match (net.kind(), net.marking().count(i)) {
            (_, 0) => {
                let _ = writeln!(s, "place {p}");
            }
            (NetKind::Ce, _) => {
                let _ = writeln!(s, "place {p} marked");
            }
            (NetKind::Pt, c) => {
                let _ = writeln!(s, "place {p} tokens={c}");
            }
        }
    }
    let places = net.places();
    let show = |m: &Multiset, name: &dyn Fn(usize) -> String| {
        m.iter()
            .map(|(x, c)| {
                if c == 1 {
                    name(x)
                } else {
                    format!("{}:{c}", name(x))
                }
            })
            .collect::<Vec<_>>()
            .join(",")
    };
    let place = |x: usize| places[x].clone();
    let port = |x: usize| x.to_string();
    for t in net.transitions() {
        let _ = writeln!(
            s,
            "trans {} pre={} post={} left={} right={}",
            t.name,
            show(&t.pre, &place),
            show(&t.post, &place),
            show(&t.left, &port),
            show(&t.right, &port)
        );
    }
    for &(a, b) in net.contention() {
        let ts = net.transitions();
        let _ = writeln!(s, "contention {} {}", ts[a].name, ts[b].name);
    }
    s
}

fn render_dot(net: &Net) -> String {
    let mut s = String::from("digraph net {\n  rankdir=LR;\n");
    let esc = |x: &str| x.replace('"', "\\\"");
    for i in 0..net.left_arity() {
        let _ = writeln!(s, "  l{i} [shape=triangle, orient=270, label=\"{i}\"];");
    }
    for i in 0..net.right_arity() {
        let _ = writeln!(s, "  r{i} [shape=triangle, orient=90, label=\"{i}\"];");
    }
    for (i, p) in net.places().iter().enumerate() {
        let tokens = match net.marking().count(i) {
            0 => String::new(),
            1 if net.kind() == NetKind::Ce => "\\n*".to_string(),
            c => format!("\\n{c}"),
        };
        let _ = writeln!(s, "  p{i} [shape=circle, label=\"{}{tokens}\"];", esc(p));
    }
    let weight = |c: u32| {
        if c == 1 {
            String::new()
        } else {
            format!(" [label=\"{c}\"]")
        }
    };
    for (i, t) in net.transitions().iter().enumerate() {
        let _ = writeln!(s, "  t{i} [shape=box, label=\"{}\"];", esc(&t.name));
        for (p, c) in t.pre.iter() {
            let _ = writeln!(s, "  p{p} -> t{i}{};", weight(c));
        }
        for (p, c) in t.post.iter() {
            let _ = writeln!(s, "  t{i} -> p{p}{};", weight(c));
        }
        for (p, c) in t.left.iter() {
            let _ = writeln!(s, "  l{p} -> t{i}{};", weight(c));
        }
        for (p, c) in t.right.iter() {
            let _ = writeln!(s, "  t{i} -> r{p}{};", weight(c));
        }
    }
    for &(a, b) in net.contention() {
        let _ = writeln!(s, "  t{a} -> t{b} [style=dashed, dir=none, constraint=false];");
    }
    s.push_str("}\n");
    s
}

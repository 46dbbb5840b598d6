//! `bnets`: command-line front end.
//!
//! Inputs are inline text or paths to files. Text whose first word is
//! `net` is read as a net, anything else as a term.

use std::fmt::Write as _;
use std::path::Path;
use std::process::ExitCode;

use bnets::bisim::StateText;
use bnets::net::NetKind;
use bnets::synch::minimal_synchs;
use bnets::translate::encoding_for;
use bnets::{
    bisimilar, compose_seq, infer_sort, net_lts, net_steps, net_to_term, parse_net, parse_term,
    render_net, render_term, tensor, term_lts, term_to_net, tile::synch_wrap, tile_steps, Bound,
    Calculus, CeVariant, Error, Lts, Net, NetFormat, SemMode, Term, TileBound,
};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "bnets", version, about = "Connector calculi and Petri nets with boundaries")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Args)]
struct Opts {
    #[arg(long, value_enum, default_value_t = Mode::CeStrong, global = true)]
    mode: Mode,
    /// Largest count on a port; per epoch in tile modes.
    #[arg(long, global = true)]
    max_label: Option<u32>,
    #[arg(long, global = true)]
    max_tokens: Option<u32>,
    #[arg(long, default_value_t = 2, global = true)]
    max_epochs: usize,
    #[arg(long, value_enum, default_value_t = Variant::Std, global = true)]
    ce_variant: Variant,
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
}

#[derive(Subcommand)]
enum Verb {
    /// Sort of a term.
    Sort { input: String },
    /// One-step relation of a term or net.
    Steps { input: String },
    /// Reachable labelled transition system.
    Lts { input: String },
    /// Bisimilarity of two terms or nets.
    Bisim { left: String, right: String },
    /// Net of a term.
    ToNet { input: String },
    /// Term of a net.
    ToTerm { input: String },
    /// Sequential composition of two nets.
    Compose { left: String, right: String },
    /// Parallel composition of two nets.
    Tensor { left: String, right: String },
    /// Minimal synchronisations of two nets.
    Synch { left: String, right: String },
    /// Bounded tiles of a configuration.
    Tiles {
        input: String,
        /// Derive the tiles of the synchronising wrapper instead.
        #[arg(long)]
        wrap: bool,
    },
    /// Graphviz rendering of a net, or of a term's state space.
    Dot { input: String },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    CeStrong,
    CeWeak,
    PtStrong,
    PtWeak,
    Tile,
    TileWeak,
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    Std,
    Tki2,
    Tko2,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Dot,
}

enum Failure {
    Negative(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<String, Failure>;

enum Input {
    Term(Term),
    Net(Net),
}

impl Opts {
    fn calculus(&self) -> Calculus {
        match self.mode {
            Mode::CeStrong | Mode::CeWeak => Calculus::Ce,
            Mode::PtStrong | Mode::PtWeak => Calculus::Pt,
            Mode::Tile | Mode::TileWeak => Calculus::Tile,
        }
    }

    fn sem(&self) -> Result<SemMode, Failure> {
        let variant = match self.ce_variant {
            Variant::Std => CeVariant::Standard,
            Variant::Tki2 => CeVariant::TkI2,
            Variant::Tko2 => CeVariant::TkO2,
            Variant::Both => CeVariant::Both,
        };
        let m = match self.mode {
            Mode::CeStrong => SemMode::ce_strong(),
            Mode::CeWeak => SemMode::ce_weak(),
            Mode::PtStrong => SemMode::pt_strong(),
            Mode::PtWeak => SemMode::pt_weak(),
            Mode::Tile | Mode::TileWeak => {
                return Err(Failure::Usage("tile modes are only available to `tiles`".into()))
            }
        };
        Ok(m.with_variant(variant))
    }

    fn bound(&self) -> Bound {
        let d = Bound::default();
        Bound::new(
            self.max_label.unwrap_or(d.max_label),
            self.max_tokens.unwrap_or(d.max_tokens),
        )
    }

    fn tile_bound(&self) -> TileBound {
        let d = TileBound::default();
        TileBound::new(
            self.max_epochs,
            self.max_label.unwrap_or(d.max_count),
            self.max_tokens.unwrap_or(d.max_tokens),
        )
    }

    fn net_kind(&self) -> NetKind {
        match self.calculus() {
            Calculus::Ce => NetKind::Ce,
            _ => NetKind::Pt,
        }
    }

    fn read(&self, arg: &str) -> Result<Input, Failure> {
        let text = load(arg)?;
        if text.split_whitespace().next() == Some("net") {
            return Ok(Input::Net(parse_net(&text)?));
        }
        parse_term(text.trim(), self.calculus())
            .map(Input::Term)
            .map_err(|e| Failure::Usage(with_caret(&e, text.trim())))
    }

    fn term(&self, arg: &str) -> Result<Term, Failure> {
        match self.read(arg)? {
            Input::Term(t) => Ok(t),
            Input::Net(_) => Err(Failure::Usage(format!("`{arg}`: expected a term, found a net"))),
        }
    }

    fn net(&self, arg: &str) -> Result<Net, Failure> {
        match self.read(arg)? {
            Input::Net(n) => Ok(n),
            Input::Term(_) => Err(Failure::Usage(format!("`{arg}`: expected a net"))),
        }
    }
}

fn load(arg: &str) -> Result<String, Failure> {
    if Path::new(arg).is_file() {
        std::fs::read_to_string(arg).map_err(|e| Failure::Usage(format!("{arg}: {e}")))
    } else {
        Ok(arg.to_string())
    }
}

/// Syntax errors point at the offending byte.
fn with_caret(e: &Error, text: &str) -> String {
    match e {
        Error::Syntax { pos, .. } | Error::NotInMode { pos, .. } if !text.contains('\n') => {
            format!("{e}\n  {text}\n  {}^", " ".repeat(*pos))
        }
        _ => e.to_string(),
    }
}

fn lines<I: IntoIterator<Item = String>>(it: I) -> String {
    it.into_iter().fold(String::new(), |mut s, l| {
        let _ = writeln!(s, "{l}");
        s
    })
}

fn lts_text<S: StateText>(lts: &Lts<S>, format: Format) -> String {
    let mut s = match format {
        Format::Dot => lts.to_dot(),
        Format::Text => lts.listing(),
    };
    if format == Format::Text && !lts.complete {
        s.push_str("# truncated by the bound\n");
    }
    s
}

fn run(cli: &Cli) -> Outcome {
    let o = &cli.opts;
    match &cli.verb {
        Verb::Sort { input } => Ok(format!("{}\n", infer_sort(&o.term(input)?)?)),
        Verb::Steps { input } => {
            let mode = o.sem()?;
            Ok(match o.read(input)? {
                Input::Term(t) => lines(
                    bnets::steps(&t, mode, o.bound())?
                        .iter()
                        .map(|s| s.display(mode)),
                ),
                Input::Net(n) => lines(net_steps(&n, mode, o.bound())?.iter().map(|s| {
                    format!(
                        "{}/{} -> {}",
                        mode.show_label(&s.trigger),
                        mode.show_label(&s.effect),
                        s.marking
                    )
                })),
            })
        }
        Verb::Lts { input } => {
            let mode = o.sem()?;
            Ok(match o.read(input)? {
                Input::Term(t) => lts_text(&term_lts(&t, mode, o.bound())?, o.format),
                Input::Net(n) => lts_text(&net_lts(&n, mode, o.bound())?, o.format),
            })
        }
        Verb::Bisim { left, right } => {
            let mode = o.sem()?;
            let (a, b) = (o.read(left)?, o.read(right)?);
            let report = match (&a, &b) {
                (Input::Term(x), Input::Term(y)) => {
                    bisimilar(&term_lts(x, mode, o.bound())?, &term_lts(y, mode, o.bound())?)
                }
                (Input::Term(x), Input::Net(y)) => {
                    bisimilar(&term_lts(x, mode, o.bound())?, &net_lts(y, mode, o.bound())?)
                }
                (Input::Net(x), Input::Term(y)) => {
                    bisimilar(&net_lts(x, mode, o.bound())?, &term_lts(y, mode, o.bound())?)
                }
                (Input::Net(x), Input::Net(y)) => {
                    bisimilar(&net_lts(x, mode, o.bound())?, &net_lts(y, mode, o.bound())?)
                }
            }?;
            let verdict = format!("{}\n", report.verdict(mode));
            if report.equivalent {
                Ok(verdict)
            } else {
                Err(Failure::Negative(verdict))
            }
        }
        Verb::ToNet { input } => {
            let n = term_to_net(&o.term(input)?, o.net_kind())?;
            Ok(render_net(&n, net_format(o.format)))
        }
        Verb::ToTerm { input } => {
            let n = o.net(input)?;
            let weak = matches!(o.mode, Mode::CeWeak | Mode::PtWeak);
            let calculus = match n.kind() {
                NetKind::Ce => Calculus::Ce,
                NetKind::Pt => Calculus::Pt,
            };
            Ok(format!("{}\n", render_term(&net_to_term(&n, encoding_for(calculus, weak))?)))
        }
        Verb::Compose { left, right } => {
            let n = compose_seq(&o.net(left)?, &o.net(right)?)?;
            Ok(render_net(&n, net_format(o.format)))
        }
        Verb::Tensor { left, right } => {
            let n = tensor(&o.net(left)?, &o.net(right)?)?;
            Ok(render_net(&n, net_format(o.format)))
        }
        Verb::Synch { left, right } => {
            let s = minimal_synchs(&o.net(left)?, &o.net(right)?)?;
            Ok(lines(s.iter().map(ToString::to_string)))
        }
        Verb::Tiles { input, wrap } => {
            let weak = match o.mode {
                Mode::Tile => false,
                Mode::TileWeak => true,
                _ => return Err(Failure::Usage("`tiles` needs --mode tile or tile-weak".into())),
            };
            let mut t = o.term(input)?;
            if *wrap {
                t = synch_wrap(&t)?;
            }
            let steps = tile_steps(&t, o.tile_bound(), weak)?;
            Ok(lines(steps.iter().map(|s| s.display())))
        }
        Verb::Dot { input } => Ok(match o.read(input)? {
            Input::Net(n) => render_net(&n, NetFormat::Dot),
            Input::Term(t) => term_lts(&t, o.sem()?, o.bound())?.to_dot(),
        }),
    }
}

fn net_format(f: Format) -> NetFormat {
    match f {
        Format::Text => NetFormat::Text,
        Format::Dot => NetFormat::Dot,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Negative(out)) => {
            print!("{out}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

//! Connector calculi and Petri nets with boundaries.
//!
//! Terms of the C/E and P/T connector calculi are evaluated under strong
//! and weak step semantics; nets with boundaries are composed along shared
//! interfaces through minimal synchronisations; the two worlds are related
//! by translations in both directions and by bounded bisimulation checks.

pub mod bisim;
pub mod error;
pub mod label;
pub mod multiset;
pub mod net;
pub mod semantics;
pub mod synch;
pub mod term;
pub mod tile;
pub mod translate;

pub use error::{Error, Result};
pub use label::Label;
pub use multiset::Multiset;
pub use semantics::{constant_relation, step_set, steps, Bound, CeVariant, SemMode, Step, StepSet, Strength};
pub use term::{infer_sort, is_stateless, parse_term, render_term, Calculus, Sort, Term};
pub use net::{compose_seq, net_steps, parse_net, render_net, tensor, Net, NetFormat, NetKind, Transition};
pub use synch::{minimal_synchs, Synch};
pub use bisim::{bisimilar, net_lts, term_lts, BisimReport, Lts};
pub use translate::{net_to_term, term_to_net, Encoding};
pub use tile::{parse_observation, synch_wrap, tile_place, tile_steps, Epochs, Observation, TileBound, TileStep};

//! Graphical games on bounded-degree networks.
//!
//! The crate ties together four views of the same object:
//!
//! * a [`GraphicalGame`] played with fair rounds of best responses ([`dynamics`]),
//! * the radius-1 locally verifiable labeling whose solutions are exactly the
//!   game's pure Nash equilibria ([`lvl`]),
//! * a LOCAL-model replay of best responses scheduled by a distance-2 coloring
//!   ([`local_sim`]),
//! * simulation games whose best responses execute a constant-time distributed
//!   algorithm in a single fair round ([`simgame`]).
//!
//! [`oracle`] holds the exhaustive ground truth (equilibrium enumeration, price of
//! anarchy, combinatorial optima, frozen colorings) used to check all of the above.

pub mod dynamics;
pub mod game;
pub mod io;
pub mod local_sim;
pub mod lvl;
pub mod network;
pub mod oracle;
pub mod rational;
pub mod seed;
pub mod simgame;

mod error;

pub use error::{Error, Result};
pub use game::{ActionId, GameKind, GraphicalGame, StrategyProfile};
pub use lvl::{compile_lvl, LvlSpec, Verdict};
pub use network::{Edge, Girth, Network, NodeId};
pub use rational::Rational;

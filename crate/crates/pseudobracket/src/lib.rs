//! Exact pseudo bracket polynomials for pseudo link diagrams, and the
//! cosmetic-crossing obstruction built on them.
//!
//! A pseudo link diagram mixes classical crossings with *pseudo* crossings
//! whose over/under information is unknown. The bracket of such a diagram
//! is a polynomial in `A` and `V` with big-integer coefficients, computed
//! as a Kauffman-style state sum in which pseudo crossings expand with
//! weights `V` and `H = 1 - V*d`. Normalizing by `(-A^-3)^writhe` gives an
//! invariant of oriented pseudo links that specializes to the classical
//! normalized bracket on ordinary diagrams.
//!
//! The crate is organized around that pipeline:
//!
//! - [`polynomial`]: sparse exact arithmetic in `Z[A, A^-1]` and
//!   `Z[A, A^-1][V]`.
//! - [`diagram`]: extended PD codes (text and JSON), validation, signs,
//!   writhe, faces, and diagram surgery.
//! - [`bracket`]: the state sum, twice — a naive oracle and a tangle
//!   contraction engine that must always agree.
//! - [`moves`]: kink and poke insertion, slide-move fixture pairs, and
//!   seeded random walks for invariance fuzzing.
//! - [`obstruction`]: the per-crossing cosmetic-crossing test.
//! - [`knotinfo`] and [`cli`]: data ingestion and the command line.
//!
//! The narrative guide lives in `book/` and is compiled into [`book`] so
//! its examples run under `cargo test --doc`.
//!
//! ```
//! use pseudobracket::bracket::{normalized_bracket, Engine};
//! use pseudobracket::diagram::parse_pd_text;
//!
//! let trefoil = parse_pd_text("X(1,5,2,4) X(3,1,4,6) X(5,3,6,2)")?;
//! let pt = trefoil.make_pseudo(0)?;
//! let p = normalized_bracket(&pt, Engine::Contract).unwrap();
//! assert_eq!(p.to_string(), "A^-12 + A^-14*V - A^-2*V");
//! # Ok::<(), pseudobracket::diagram::DiagramError>(())
//! ```

pub mod book;
pub mod braid;
pub mod bracket;
pub mod cli;
pub mod diagram;
pub mod knotinfo;
pub mod moves;
pub mod obstruction;
pub mod polynomial;

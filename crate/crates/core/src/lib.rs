//! Colorings of integer intervals that avoid a pair of monochromatic
//! `m`-sets `X ≺ Y` with `2(x_m - x_1) ≤ y_m - x_1`, and the function
//! `g(m, r)`: the least `N` such that every `r`-coloring of `[1, N]`
//! contains such a pair.
//!
//! * [`coloring`]: the coloring type, `m`-sets, the linear-time verifier.
//! * [`format`]: RLE and JSON text forms.
//! * [`constructions`]: explicit lower-bound colorings and the extension
//!   and block builders.
//! * [`search`]: exhaustive search for exact small values.
//! * [`engine`]: derivation of asymptotic bounds for every `r` from the
//!   known cases.

pub mod coloring;
pub mod constructions;
pub mod engine;
pub mod format;
pub mod search;

pub use coloring::{
    find_violation, is_l_coloring, mono_positions, Color, Coloring, ColoringError, IncrementalChecker, Interval,
    IntervalTriple, MSet, Pos, Violation,
};
pub use format::{parse_coloring_text, parse_rle, to_coloring_text, to_json, to_rle, ParseError};

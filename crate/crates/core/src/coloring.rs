//! Colorings of integer intervals, m-sets, and the L(r) decision procedure.
//!
//! A coloring assigns each position of `[start, start + len - 1]` a color in
//! `1..=r`. Two monochromatic m-sets `X ≺ Y` *violate* the coloring when
//! `2(x_m - x_1) <= y_m - x_1`; a coloring with no violating pair is an
//! L(r)-coloring.
//!
//! The verifier never enumerates pairs of m-sets. For a fixed `y_m` the best
//! `Y` is the last `m` occurrences of its color (largest `y_1`), and for a
//! fixed `x_m` the best `X` is the window of `m` consecutive occurrences of
//! its color ending at `x_m` (largest `x_1`). A violation ending at `p`
//! therefore exists iff the prefix minimum of `2 x_m - x_1` over windows with
//! `x_m < y_1` is at most `p`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Color id, 1-based.
pub type Color = u32;
/// Integer position.
pub type Pos = i64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ColoringError {
    #[error("coloring must cover at least one position")]
    Empty,
    #[error("start position {0} must be at least 1")]
    BadStart(Pos),
    #[error("color {color} at position {pos} is outside 1..={r}")]
    ColorOutOfRange { pos: Pos, color: Color, r: Color },
    #[error("color {color} is outside 1..={r}")]
    QueryColor { color: Color, r: Color },
    #[error("m-set positions must be strictly increasing and nonempty")]
    NotIncreasing,
    #[error("m must be at least {min}, got {m}")]
    BadM { m: usize, min: usize },
    #[error("interval [1, {s}] is too short: need s >= 2r(m-1)+1 = {need}")]
    TooShort { s: Pos, need: Pos },
    #[error("coloring must start at 1, starts at {0}")]
    NotFromOne(Pos),
}

/// Closed integer interval `[lo, hi]`; empty when `hi < lo`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: Pos,
    pub hi: Pos,
}

impl Interval {
    pub fn new(lo: Pos, hi: Pos) -> Self {
        Interval { lo, hi }
    }

    pub fn is_empty(&self) -> bool {
        self.hi < self.lo
    }

    pub fn len(&self) -> usize {
        if self.is_empty() {
            0
        } else {
            (self.hi - self.lo + 1) as usize
        }
    }

    pub fn contains(&self, p: Pos) -> bool {
        self.lo <= p && p <= self.hi
    }
}

/// An r-coloring of a nonempty interval.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawColoring", into = "RawColoring")]
pub struct Coloring {
    start: Pos,
    r: Color,
    colors: Vec<Color>,
}

#[derive(Serialize, Deserialize)]
struct RawColoring {
    start: Pos,
    r: Color,
    colors: Vec<Color>,
}

impl TryFrom<RawColoring> for Coloring {
    type Error = ColoringError;
    fn try_from(raw: RawColoring) -> Result<Self, Self::Error> {
        Coloring::new(raw.start, raw.colors, raw.r)
    }
}

impl From<Coloring> for RawColoring {
    fn from(c: Coloring) -> Self {
        RawColoring { start: c.start, r: c.r, colors: c.colors }
    }
}

impl Coloring {
    pub fn new(start: Pos, colors: Vec<Color>, r: Color) -> Result<Self, ColoringError> {
        if colors.is_empty() {
            return Err(ColoringError::Empty);
        }
        if start < 1 {
            return Err(ColoringError::BadStart(start));
        }
        for (i, &color) in colors.iter().enumerate() {
            if color == 0 || color > r {
                return Err(ColoringError::ColorOutOfRange { pos: start + i as Pos, color, r });
            }
        }
        Ok(Coloring { start, r, colors })
    }

    /// Builds a coloring whose declared color count is the largest color used.
    pub fn from_colors(start: Pos, colors: Vec<Color>) -> Result<Self, ColoringError> {
        let r = colors.iter().copied().max().unwrap_or(0);
        Coloring::new(start, colors, r)
    }

    pub fn start(&self) -> Pos {
        self.start
    }

    pub fn end(&self) -> Pos {
        self.start + self.colors.len() as Pos - 1
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    /// Always false; a coloring covers at least one position.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn r(&self) -> Color {
        self.r
    }

    pub fn colors(&self) -> &[Color] {
        &self.colors
    }

    pub fn interval(&self) -> Interval {
        Interval::new(self.start, self.end())
    }

    pub fn color_at(&self, pos: Pos) -> Option<Color> {
        if pos < self.start || pos > self.end() {
            None
        } else {
            Some(self.colors[(pos - self.start) as usize])
        }
    }

    /// Same colors with a larger declared color count.
    pub fn with_r(mut self, r: Color) -> Result<Self, ColoringError> {
        if let Some(&c) = self.colors.iter().find(|&&c| c > r) {
            return Err(ColoringError::QueryColor { color: c, r });
        }
        self.r = r;
        Ok(self)
    }

    /// Translates the coloring so it starts at `start`.
    pub fn translated(&self, start: Pos) -> Coloring {
        assert!(start >= 1, "start must be positive");
        Coloring { start, r: self.r, colors: self.colors.clone() }
    }

    /// Translates to start at 1. The violation predicate is translation invariant.
    pub fn normalized(&self) -> Coloring {
        self.translated(1)
    }

    /// Restriction to `[lo, hi]`, clipped to the covered interval.
    pub fn restrict(&self, lo: Pos, hi: Pos) -> Option<Coloring> {
        let lo = lo.max(self.start);
        let hi = hi.min(self.end());
        if hi < lo {
            return None;
        }
        let a = (lo - self.start) as usize;
        let b = (hi - self.start) as usize;
        Some(Coloring { start: lo, r: self.r, colors: self.colors[a..=b].to_vec() })
    }

    /// Appends one position colored `color`.
    pub fn pushed(&self, color: Color) -> Result<Coloring, ColoringError> {
        if color == 0 || color > self.r {
            return Err(ColoringError::ColorOutOfRange { pos: self.end() + 1, color, r: self.r });
        }
        let mut colors = self.colors.clone();
        colors.push(color);
        Ok(Coloring { start: self.start, r: self.r, colors })
    }

    /// Number of positions with each color, indexed `0..r` for colors `1..=r`.
    pub fn class_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.r as usize];
        for &c in &self.colors {
            sizes[(c - 1) as usize] += 1;
        }
        sizes
    }

    /// Run-length form: `(color, run length)` pairs with maximal runs.
    pub fn runs(&self) -> Vec<(Color, usize)> {
        let mut runs: Vec<(Color, usize)> = Vec::new();
        for &c in &self.colors {
            match runs.last_mut() {
                Some((last, k)) if *last == c => *k += 1,
                _ => runs.push((c, 1)),
            }
        }
        runs
    }

    /// Per-color occurrence lists (positions), indexed by color - 1.
    fn occurrences(&self) -> Vec<Vec<Pos>> {
        let mut occ = vec![Vec::new(); self.r as usize];
        for (i, &c) in self.colors.iter().enumerate() {
            occ[(c - 1) as usize].push(self.start + i as Pos);
        }
        occ
    }
}

/// `Δ⁻¹(color)` as a strictly increasing list of positions.
pub fn mono_positions(c: &Coloring, color: Color) -> Result<Vec<Pos>, ColoringError> {
    if color == 0 || color > c.r {
        return Err(ColoringError::QueryColor { color, r: c.r });
    }
    Ok(c
        .colors
        .iter()
        .enumerate()
        .filter(|&(_, &k)| k == color)
        .map(|(i, _)| c.start + i as Pos)
        .collect())
}

/// Strictly increasing sequence of positions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MSet(Vec<Pos>);

impl MSet {
    pub fn new(positions: Vec<Pos>) -> Result<Self, ColoringError> {
        if positions.is_empty() || positions.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ColoringError::NotIncreasing);
        }
        Ok(MSet(positions))
    }

    pub fn positions(&self) -> &[Pos] {
        &self.0
    }

    pub fn m(&self) -> usize {
        self.0.len()
    }

    /// `int_i`: the i-th element, 1-based.
    pub fn int(&self, i: usize) -> Option<Pos> {
        if i == 0 {
            None
        } else {
            self.0.get(i - 1).copied()
        }
    }

    /// `first_k`: the first `min(k, m)` elements.
    pub fn first(&self, k: usize) -> &[Pos] {
        &self.0[..k.min(self.0.len())]
    }

    /// `last_k`: the last `min(k, m)` elements.
    pub fn last(&self, k: usize) -> &[Pos] {
        let n = self.0.len();
        &self.0[n - k.min(n)..]
    }

    pub fn head(&self) -> Pos {
        self.0[0]
    }

    pub fn tail(&self) -> Pos {
        *self.0.last().expect("nonempty")
    }

    /// `self ≺ other`: every element of self precedes every element of other.
    pub fn precedes(&self, other: &MSet) -> bool {
        self.tail() < other.head()
    }

    /// `other` is `self`-admissible: `2(x_m - x_1) > y_m - x_1`.
    pub fn admits(&self, other: &MSet) -> bool {
        2 * (self.tail() - self.head()) > other.tail() - self.head()
    }
}

/// A pair of monochromatic m-sets certifying that a coloring is not L(r).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub x: MSet,
    pub y: MSet,
    pub color_x: Color,
    pub color_y: Color,
}

impl Violation {
    /// Independent check of the certificate against `c`.
    pub fn is_valid_for(&self, c: &Coloring, m: usize) -> bool {
        let mono = |s: &MSet, color: Color| s.positions().iter().all(|&p| c.color_at(p) == Some(color));
        self.x.m() == m
            && self.y.m() == m
            && mono(&self.x, self.color_x)
            && mono(&self.y, self.color_y)
            && self.x.precedes(&self.y)
            && !self.x.admits(&self.y)
    }

    /// `(lhs, rhs)` of the instantiated inequality `2(x_m - x_1) <= y_m - x_1`.
    pub fn inequality(&self) -> (Pos, Pos) {
        (2 * (self.x.tail() - self.x.head()), self.y.tail() - self.x.head())
    }
}

/// The partition `I1 = [1, r(m-1)+1]`, `I2 = [r(m-1)+2, 2r(m-1)]`,
/// `I3 = [2r(m-1)+1, s]` of `[1, s]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalTriple {
    pub i1: Interval,
    pub i2: Interval,
    pub i3: Interval,
}

impl IntervalTriple {
    pub fn new(m: usize, r: Color, s: Pos) -> Result<Self, ColoringError> {
        if m < 2 {
            return Err(ColoringError::BadM { m, min: 2 });
        }
        let k = r as Pos * (m as Pos - 1);
        if s < 2 * k + 1 {
            return Err(ColoringError::TooShort { s, need: 2 * k + 1 });
        }
        Ok(IntervalTriple {
            i1: Interval::new(1, k + 1),
            i2: Interval::new(k + 2, 2 * k),
            i3: Interval::new(2 * k + 1, s),
        })
    }

    /// `I2` alone, which only needs `m` and `r`.
    pub fn middle(m: usize, r: Color) -> Interval {
        let k = r as Pos * (m as Pos - 1);
        Interval::new(k + 2, 2 * k)
    }
}

/// Prefix of `2 x_m - x_1` minima over consecutive windows, indexed by
/// offset from the coloring start. `None` until some color has `m`
/// occurrences.
fn window_minima(c: &Coloring, m: usize) -> Vec<Option<Pos>> {
    let mut occ: Vec<Vec<Pos>> = vec![Vec::new(); c.r as usize];
    let mut best: Option<Pos> = None;
    let mut out = Vec::with_capacity(c.len());
    for (i, &color) in c.colors.iter().enumerate() {
        let p = c.start + i as Pos;
        let list = &mut occ[(color - 1) as usize];
        list.push(p);
        if list.len() >= m {
            let x1 = list[list.len() - m];
            let v = 2 * p - x1;
            best = Some(best.map_or(v, |b| b.min(v)));
        }
        out.push(best);
    }
    out
}

fn certificate_at(c: &Coloring, occ: &[Vec<Pos>], m: usize, p: Pos, y_list_end: usize) -> Option<Violation> {
    let color_y = c.color_at(p)?;
    let ylist = &occ[(color_y - 1) as usize];
    let y = &ylist[y_list_end + 1 - m..=y_list_end];
    let y1 = y[0];
    // smallest x_1 over windows with x_m < y_1 and 2 x_m - x_1 <= p
    let mut best: Option<(Pos, Color, usize)> = None;
    for (ci, list) in occ.iter().enumerate() {
        for end in (m - 1)..list.len() {
            let xm = list[end];
            if xm >= y1 {
                break;
            }
            let x1 = list[end + 1 - m];
            if 2 * xm - x1 <= p && best.is_none_or(|(b, _, _)| x1 < b) {
                best = Some((x1, ci as Color + 1, end));
            }
        }
    }
    let (_, color_x, end) = best?;
    let xlist = &occ[(color_x - 1) as usize];
    Some(Violation {
        x: MSet(xlist[end + 1 - m..=end].to_vec()),
        y: MSet(y.to_vec()),
        color_x,
        color_y,
    })
}

/// Returns a violating pair if `c` is not an L(r)-coloring for `m`.
///
/// The certificate has the smallest `y_m`, then the smallest `x_1`, among
/// pairs of the restricted form described in the module docs. Runs in
/// `O(n)` plus one `O(n)` certificate reconstruction.
pub fn find_violation(c: &Coloring, m: usize) -> Option<Violation> {
    assert!(m >= 1, "m must be at least 1");
    let minima = window_minima(c, m);
    let occ = c.occurrences();
    let mut counts = vec![0usize; c.r as usize];
    for (i, &color) in c.colors.iter().enumerate() {
        let p = c.start + i as Pos;
        let k = &mut counts[(color - 1) as usize];
        *k += 1;
        if *k < m {
            continue;
        }
        let y_end = *k - 1;
        let y1 = occ[(color - 1) as usize][y_end + 1 - m];
        if y1 == c.start {
            continue;
        }
        if let Some(best) = minima[(y1 - c.start - 1) as usize] {
            if best <= p {
                return certificate_at(c, &occ, m, p, y_end);
            }
        }
    }
    None
}

/// Whether `c` is an L(r)-coloring for `m`.
pub fn is_l_coloring(c: &Coloring, m: usize) -> bool {
    find_violation(c, m).is_none()
}

/// Returns a violation whose `y_m` is the last position of `c`, if any.
pub fn violation_with_last(c: &Coloring, m: usize) -> Option<Violation> {
    assert!(m >= 1, "m must be at least 1");
    let occ = c.occurrences();
    let p = c.end();
    let color = c.color_at(p)?;
    let list = &occ[(color - 1) as usize];
    if list.len() < m {
        return None;
    }
    let y1 = list[list.len() - m];
    if y1 == c.start {
        return None;
    }
    let prefix = c.restrict(c.start, y1 - 1)?;
    let best = *window_minima(&prefix, m).last()?;
    match best {
        Some(b) if b <= p => certificate_at(c, &occ, m, p, list.len() - 1),
        _ => None,
    }
}

/// Monochromatic `Y ⊂ I2 ∪ I3` with `y_m ∈ I3`, which rules out L(r)-hood.
pub fn pair_witness(c: &Coloring, m: usize) -> Result<Option<MSet>, ColoringError> {
    if c.start != 1 {
        return Err(ColoringError::NotFromOne(c.start));
    }
    let tri = IntervalTriple::new(m, c.r, c.end())?;
    for list in c.occurrences() {
        let tail: Vec<Pos> = list.into_iter().filter(|&p| p >= tri.i2.lo).collect();
        if tail.len() >= m && tri.i3.contains(*tail.last().unwrap()) {
            return Ok(Some(MSet(tail[tail.len() - m..].to_vec())));
        }
    }
    Ok(None)
}

/// Occurrence counts around the first position where some color reaches
/// `m` occurrences.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrefixStats {
    /// `min_c int_m(Δ⁻¹(c))`; absent when no color occurs `m` times.
    pub a: Option<Pos>,
    /// `A_c = |Δ⁻¹(c) ∩ [start, a-1]|`, indexed by color - 1.
    pub before: Vec<usize>,
    /// `B_c = |Δ⁻¹(c) ∩ [a+1, end]|`, indexed by color - 1.
    pub after: Vec<usize>,
    /// `Σ_c A_c + min(B_c, m-1)`; absent together with `a`.
    pub occurrence_sum: Option<usize>,
}

pub fn prefix_statistics(c: &Coloring, m: usize) -> PrefixStats {
    let r = c.r as usize;
    let occ = c.occurrences();
    let a = occ.iter().filter(|l| l.len() >= m).map(|l| l[m - 1]).min();
    let Some(a) = a else {
        return PrefixStats { a: None, before: vec![0; r], after: vec![0; r], occurrence_sum: None };
    };
    let before: Vec<usize> = occ.iter().map(|l| l.iter().filter(|&&p| p < a).count()).collect();
    let after: Vec<usize> = occ.iter().map(|l| l.iter().filter(|&&p| p > a).count()).collect();
    let sum = before
        .iter()
        .zip(&after)
        .map(|(&b, &f)| b + f.min(m.saturating_sub(1)))
        .sum();
    PrefixStats { a: Some(a), before, after, occurrence_sum: Some(sum) }
}

/// Push/pop violation checker for colorings of `[1, n]` grown one position
/// at a time. Each step is `O(1)`.
#[derive(Debug, Clone)]
pub struct IncrementalChecker {
    m: usize,
    colors: Vec<Color>,
    occ: Vec<Vec<Pos>>,
    // minima[i] = min of 2 x_m - x_1 over windows with x_m <= i + 1
    minima: Vec<Pos>,
}

impl IncrementalChecker {
    pub fn new(m: usize, r: Color) -> Self {
        assert!(m >= 1, "m must be at least 1");
        IncrementalChecker { m, colors: Vec::new(), occ: vec![Vec::new(); r as usize], minima: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn colors(&self) -> &[Color] {
        &self.colors
    }

    pub fn count(&self, color: Color) -> usize {
        self.occ[(color - 1) as usize].len()
    }

    /// Would appending `color` create a violation ending at the new position?
    #[inline]
    pub fn violates(&self, color: Color) -> bool {
        let list = &self.occ[(color - 1) as usize];
        // the new position joins `list`; Y is its last m entries
        if list.len() + 1 < self.m {
            return false;
        }
        let p = self.colors.len() as Pos + 1;
        let y1 = if self.m == 1 { p } else { list[list.len() + 1 - self.m] };
        y1 >= 2 && self.minima[(y1 - 2) as usize] <= p
    }

    /// Appends `color` without checking.
    #[inline]
    pub fn push(&mut self, color: Color) {
        let p = self.colors.len() as Pos + 1;
        let list = &mut self.occ[(color - 1) as usize];
        list.push(p);
        let prev = self.minima.last().copied().unwrap_or(Pos::MAX);
        let cur = if list.len() >= self.m { 2 * p - list[list.len() - self.m] } else { Pos::MAX };
        self.minima.push(prev.min(cur));
        self.colors.push(color);
    }

    #[inline]
    pub fn pop(&mut self) -> Option<Color> {
        let color = self.colors.pop()?;
        self.occ[(color - 1) as usize].pop();
        self.minima.pop();
        Some(color)
    }

    pub fn to_coloring(&self, r: Color) -> Option<Coloring> {
        Coloring::new(1, self.colors.clone(), r).ok()
    }
}

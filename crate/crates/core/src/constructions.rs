//! Explicit L(r)-colorings: the lower-bound strings for two, three and four
//! colors, the extension from `I2` to `I1 ∪ I2`, and the block colorings
//! used by the three recursion rules.
//!
//! Builders return colorings on their natural sub-intervals (so an inner
//! coloring of `I2 ∪ I3` starts at `r(m-1)+2`). [`extend_full`] turns such a
//! coloring into one of `[1, s]`.

use thiserror::Error;

use crate::coloring::{find_violation, is_l_coloring, Color, Coloring, Interval, IntervalTriple, Pos, Violation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("r = {r} requires m >= {min}, got m = {m}")]
    BelowThreshold { r: Color, m: usize, min: usize },
    #[error("no lower-bound string for r = {0}")]
    UnsupportedR(Color),
    #[error("invalid parameters: {0}")]
    BadParams(String),
    #[error("inner coloring covers [{}, {}], expected [{}, {}]", got.lo, got.hi, expected.lo, expected.hi)]
    WrongInterval { expected: Interval, got: Interval },
    #[error("inner coloring uses color {color} but only {allowed} colors are allowed")]
    ColorRange { color: Color, allowed: Color },
    #[error("inner coloring is not an L({r})-coloring for m = {m}")]
    NotLColoring { r: Color, m: usize, violation: Box<Violation> },
    #[error("color {color} appears in I3 and occurs {count} times in I2 ∪ I3 (limit {limit})")]
    I3Overfull { color: Color, count: usize, limit: usize },
}

type Result<T> = std::result::Result<T, ConstructionError>;

fn from_runs(start: Pos, r: Color, runs: &[(Color, i64)]) -> Coloring {
    let mut colors = Vec::new();
    for &(c, k) in runs {
        debug_assert!(k >= 0, "negative run");
        colors.extend(std::iter::repeat_n(c, k.max(0) as usize));
    }
    Coloring::new(start, colors, r).expect("construction produces a valid coloring")
}

/// Lower-bound string of the exact formulas for `r ∈ {2, 3, 4}`.
///
/// * r = 2, m >= 2: `1^{2m-3} 2^{m-1}` on `[2m, 5m-5]`
/// * r = 3, m >= 4: `1^{⌊m/2⌋-2} 2^{⌈m/2⌉-1} 1^{2m-1} 2^{⌊m/2⌋} 3^{m-1}` on `[3m-1, 7m+⌊m/2⌋-7]`
///
/// For odd `m` the three-color string with the floor and ceiling exchanged
/// (one position longer) contains a violation inside its first `3m-1` ones;
/// see [`three_color_long_string`].
/// * r = 4, m >= 3: `1^{m-3} 2^{m-1} 1^{2m-1} 3^{m-1} 4^{m-1}` on `[4m-2, 10m-10]`
pub fn lower_string(r: Color, m: usize) -> Result<Coloring> {
    let mi = m as i64;
    let (min, start, runs): (usize, Pos, Vec<(Color, i64)>) = match r {
        2 => (2, 2 * mi, vec![(1, 2 * mi - 3), (2, mi - 1)]),
        3 => {
            let (fl, ce) = (mi / 2, (mi + 1) / 2);
            (4, 3 * mi - 1, vec![(1, fl - 2), (2, ce - 1), (1, 2 * mi - 1), (2, fl), (3, mi - 1)])
        }
        4 => (3, 4 * mi - 2, vec![(1, mi - 3), (2, mi - 1), (1, 2 * mi - 1), (3, mi - 1), (4, mi - 1)]),
        _ => return Err(ConstructionError::UnsupportedR(r)),
    };
    if m < min {
        return Err(ConstructionError::BelowThreshold { r, m, min });
    }
    Ok(from_runs(start, r, &runs))
}

/// `1^{m-⌊m/2⌋-2} 2^{⌊m/2⌋-1} 1^{2m-1} 2^{⌈m/2⌉} 3^{m-1}` on
/// `[3m-1, 7m+⌈m/2⌉-7]`. Equal to [`lower_string`] for even `m`; an
/// L(3)-coloring only for even `m`.
pub fn three_color_long_string(m: usize) -> Result<Coloring> {
    if m < 4 {
        return Err(ConstructionError::BelowThreshold { r: 3, m, min: 4 });
    }
    let mi = m as i64;
    let (fl, ce) = (mi / 2, (mi + 1) / 2);
    Ok(from_runs(3 * mi - 1, 3, &[(1, mi - fl - 2), (2, fl - 1), (1, 2 * mi - 1), (2, ce), (3, mi - 1)]))
}

fn check_inner(inner: &Coloring, expected: Interval, colors: Color, m: usize) -> Result<()> {
    if inner.interval() != expected {
        return Err(ConstructionError::WrongInterval { expected, got: inner.interval() });
    }
    if let Some(&c) = inner.colors().iter().find(|&&c| c > colors) {
        return Err(ConstructionError::ColorRange { color: c, allowed: colors });
    }
    if let Some(v) = find_violation(inner, m) {
        return Err(ConstructionError::NotLColoring { r: colors, m, violation: Box::new(v) });
    }
    Ok(())
}

/// Extends an L(r)-coloring of `I2 = [r(m-1)+2, 2r(m-1)]` to an
/// L(r)-coloring of `[1, 2r(m-1)]`.
///
/// Positions 1 and `r(m-1)+1` get the smallest color with fewer than `m-1`
/// occurrences in `I2`; the first `m-1` occurrences of every color are
/// copied `r(m-1)` places to the left; the rest of `I1` is filled left to
/// right with the smallest color still below `m-1` occurrences in
/// `[1, r(m-1)]`.
pub fn extend_i1(inner: &Coloring, m: usize, r: Color) -> Result<Coloring> {
    if m < 2 || r < 1 {
        return Err(ConstructionError::BadParams(format!("extension needs m >= 2 and r >= 1 (m = {m}, r = {r})")));
    }
    let i2 = IntervalTriple::middle(m, r);
    if i2.is_empty() {
        return Err(ConstructionError::BadParams(format!("I2 is empty for m = {m}, r = {r}")));
    }
    check_inner(inner, i2, r, m)?;

    let k = r as usize * (m - 1);
    let cap = m - 1;
    let mut ext: Vec<Option<Color>> = vec![None; 2 * k + 1]; // index = position
    let sizes = inner.class_sizes();
    let deficient = (1..=r).find(|&t| sizes[(t - 1) as usize] < cap).expect("|I2| < r(m-1) forces a deficient color");
    ext[1] = Some(deficient);
    ext[k + 1] = Some(deficient);
    let mut seen = vec![0usize; r as usize];
    for (i, &t) in inner.colors().iter().enumerate() {
        let p = i2.lo as usize + i;
        ext[p] = Some(t);
        let s = &mut seen[(t - 1) as usize];
        if *s < cap {
            *s += 1;
            ext[p - k] = Some(t);
        }
    }
    let mut counts = vec![0usize; r as usize];
    for c in ext[1..=k].iter().flatten() {
        counts[(c - 1) as usize] += 1;
    }
    for slot in ext[1..=k].iter_mut().filter(|s| s.is_none()) {
        let i = (1..=r).find(|&i| counts[(i - 1) as usize] < cap).expect("exactly r(m-1) slots in [1, r(m-1)]");
        counts[(i - 1) as usize] += 1;
        *slot = Some(i);
    }
    let colors: Vec<Color> = ext[1..].iter().map(|c| c.expect("every position colored")).collect();
    Ok(Coloring::new(1, colors, r).expect("colors in range"))
}

/// Extends a coloring of `I2 ∪ I3` (starting at `r(m-1)+2`, ending at
/// `s >= 2r(m-1)+1`) to `[1, s]`.
///
/// Requires the restriction to `I2` to be L(r) and every color used in `I3`
/// to occur at most `m-1` times in `I2 ∪ I3`.
pub fn extend_full(inner: &Coloring, m: usize, r: Color) -> Result<Coloring> {
    if m < 2 {
        return Err(ConstructionError::BadParams(format!("extension needs m >= 2, got {m}")));
    }
    let i2 = IntervalTriple::middle(m, r);
    if inner.start() != i2.lo || inner.end() < i2.hi + 1 {
        return Err(ConstructionError::WrongInterval {
            expected: Interval::new(i2.lo, (i2.hi + 1).max(inner.end())),
            got: inner.interval(),
        });
    }
    if let Some(&c) = inner.colors().iter().find(|&&c| c > r) {
        return Err(ConstructionError::ColorRange { color: c, allowed: r });
    }
    let tri = IntervalTriple::new(m, r, inner.end()).map_err(|e| ConstructionError::BadParams(e.to_string()))?;
    let sizes = inner.clone().with_r(r).expect("checked above").class_sizes();
    let mut in_i3 = vec![false; r as usize];
    for p in tri.i3.lo..=tri.i3.hi {
        in_i3[(inner.color_at(p).unwrap() - 1) as usize] = true;
    }
    for c in 1..=r {
        let idx = (c - 1) as usize;
        if in_i3[idx] && sizes[idx] > m - 1 {
            return Err(ConstructionError::I3Overfull { color: c, count: sizes[idx], limit: m - 1 });
        }
    }
    let mid = inner.restrict(tri.i2.lo, tri.i2.hi).expect("I2 nonempty").with_r(r).expect("checked");
    let head = extend_i1(&mid, m, r)?;
    let mut colors = head.colors().to_vec();
    colors.extend_from_slice(&inner.colors()[mid.len()..]);
    Ok(Coloring::new(1, colors, r).expect("colors in range"))
}

/// `[(2r+i-1)(m-1)+1, (2r+i)(m-1)]`
fn block(m: usize, r: Color, i: Color) -> (Pos, Pos) {
    let m1 = m as Pos - 1;
    let (r, i) = (r as Pos, i as Pos);
    ((2 * r + i - 1) * m1 + 1, (2 * r + i) * m1)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(ConstructionError::BadParams(msg()))
    }
}

/// Coloring of `[r(m-1)+2, (3r-j)(m-1)]`: an L(j)-coloring of `I2`
/// followed by the blocks `𝓘_i` colored `j+i` for `i ∈ [1, r-j]`.
pub fn build_lift(m: usize, r: Color, j: Color, inner_j: &Coloring) -> Result<Coloring> {
    ensure(m >= 2 && j >= 1 && j < r, || format!("need m >= 2 and 1 <= j < r (m = {m}, r = {r}, j = {j})"))?;
    let i2 = IntervalTriple::middle(m, r);
    check_inner(inner_j, i2, j, m)?;
    let mut colors = inner_j.colors().to_vec();
    for i in 1..=(r - j) {
        let (lo, hi) = block(m, r, i);
        colors.extend(std::iter::repeat_n(j + i, (hi - lo + 1) as usize));
    }
    Ok(Coloring::new(i2.lo, colors, r).expect("colors in range"))
}

/// Coloring of `I2 ∪ [2r(m-1)+1, (3r-j-1)(m-1)]`: an L(j)-coloring of
/// `[(r+1)(m-1)+2, (2r-1)(m-1)]` padded on both sides with `m-1` positions
/// of color `j+1`, then blocks `𝓘_i` colored `j+1+i` for `i ∈ [1, r-j-1]`.
pub fn build_sandwich(m: usize, r: Color, j: Color, inner_j: &Coloring) -> Result<Coloring> {
    ensure(m >= 2 && j >= 1 && j + 1 < r, || format!("need m >= 2 and 1 <= j, j+1 < r (m = {m}, r = {r}, j = {j})"))?;
    let m1 = m as Pos - 1;
    let rp = r as Pos;
    let expected = Interval::new((rp + 1) * m1 + 2, (2 * rp - 1) * m1);
    ensure(!expected.is_empty(), || format!("inner interval is empty for m = {m}, r = {r}"))?;
    check_inner(inner_j, expected, j, m)?;
    let pad = j + 1;
    let mut colors: Vec<Color> = std::iter::repeat_n(pad, m - 1).collect();
    colors.extend_from_slice(inner_j.colors());
    colors.extend(std::iter::repeat_n(pad, m - 1));
    for i in 1..=(r - j - 1) {
        let (lo, hi) = block(m, r, i);
        colors.extend(std::iter::repeat_n(j + 1 + i, (hi - lo + 1) as usize));
    }
    Ok(Coloring::new(rp * m1 + 2, colors, r).expect("colors in range"))
}

/// Coloring of `[r(m-1)+2, (3r-j-1)(m-1)+1]`: color `j+1` on
/// `[r(m-1)+2, (r+1)(m-1)]`, an L(j)-coloring of `[(r+1)(m-1)+1, 2r(m-1)]`,
/// blocks `𝓘_i` colored `j+1+i` for `i ∈ [1, r-j-1]`, and color `j+1` on
/// the final position.
pub fn build_bracket(m: usize, r: Color, j: Color, inner_j: &Coloring) -> Result<Coloring> {
    ensure(m >= 2 && j >= 1 && j < r, || format!("need m >= 2 and 1 <= j < r (m = {m}, r = {r}, j = {j})"))?;
    let m1 = m as Pos - 1;
    let rp = r as Pos;
    let expected = Interval::new((rp + 1) * m1 + 1, 2 * rp * m1);
    check_inner(inner_j, expected, j, m)?;
    let pad = j + 1;
    let mut colors: Vec<Color> = std::iter::repeat_n(pad, m - 2).collect();
    colors.extend_from_slice(inner_j.colors());
    for i in 1..=(r - j - 1) {
        let (lo, hi) = block(m, r, i);
        colors.extend(std::iter::repeat_n(j + 1 + i, (hi - lo + 1) as usize));
    }
    colors.push(pad);
    Ok(Coloring::new(rp * m1 + 2, colors, r).expect("colors in range"))
}

/// All-one coloring of `[1, 2m-1]`, the longest L(1)-coloring.
pub fn single_color(m: usize) -> Coloring {
    Coloring::new(1, vec![1; 2 * m - 1], 1).expect("nonempty")
}

/// Whether `c` (any start) is an L(r)-coloring after translation to 1.
pub fn verifies(c: &Coloring, m: usize) -> bool {
    is_l_coloring(&c.normalized(), m)
}

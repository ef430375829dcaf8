//! Affine bounds on `g(m, r)` for every `r` up to a limit.
//!
//! The knowledge base starts from the exact values for one to four colors
//! and grows one color count at a time through three recursion rules, each
//! of which turns bounds on `g(m, j)` (and `g(m, j+1)`) into bounds on
//! `g(m, r)`:
//!
//! * [`Rule::Lift`]: `r(m-1) <= g(m,j) <= r(m-1)+n` gives
//!   `g(m,r) = (3r-j)(m-1)+1` for `m >= n+1`.
//! * [`Rule::Sandwich`]: `(r-2)(m-1) <= g(m,j)` and
//!   `g(m,j+1) <= (r+1)(m-1)+n` give
//!   `(3r-j-1)(m-1) < g(m,r) <= (3r-j-1)(m-1)+n`.
//! * [`Rule::Bracket`]: `(r-1)(m-1)+1 <= g(m,j) < r(m-1)` gives
//!   `(3r-j-1)(m-1)+1 < g(m,r) <= (3r-j)(m-1)`.
//!
//! Every bound is inclusive: a strict `g < B` is stored as `g <= B-1`.
//!
//! Hypotheses are checked under one of two [`Semantics`]. `Strict` demands
//! that each inequality hold for all `m` past an explicit threshold and
//! tracks that threshold. `Leading` compares leading coefficients only, which
//! is what a coefficient-level sweep over `r` does; it never fails for lack
//! of a constant, and thresholds are kept only where the strict check also
//! passes.

use std::collections::BTreeMap;
use std::fmt;
use std::io;

use num_traits::{PrimInt, Signed};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coloring::{Color, Coloring, Pos};
use crate::constructions::{self, ConstructionError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("no rule applies to r = {0}")]
    Unclassified(Color),
    #[error("no fact for r = {0}")]
    MissingFact(Color),
    #[error("bound for r = {r} is only asymptotic; no threshold on m is known")]
    NoThreshold { r: Color },
    #[error("bound for r = {r} holds for m >= {m_min}, got m = {m}")]
    BelowThreshold { r: Color, m: usize, m_min: u64 },
    #[error("integer overflow")]
    Overflow,
    #[error("family {name}: member {value} at n = {n} disagrees with the closed form {closed}")]
    FamilyMismatch { name: &'static str, n: i64, value: i64, closed: i64 },
    #[error(transparent)]
    Construction(#[from] ConstructionError),
}

/// `coeff·(m-1) + offset`, asserted for all `m >= m_min`. A missing `m_min`
/// marks a bound established at the level of leading coefficients only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AffineBound {
    pub coeff: i64,
    pub offset: i64,
    pub m_min: Option<u64>,
}

impl AffineBound {
    pub const fn new(coeff: i64, offset: i64, m_min: u64) -> Self {
        AffineBound { coeff, offset, m_min: Some(m_min) }
    }

    pub const fn asymptotic(coeff: i64, offset: i64) -> Self {
        AffineBound { coeff, offset, m_min: None }
    }

    pub fn eval(&self, m: u64) -> Option<i64> {
        self.coeff.checked_mul(i64::try_from(m).ok()? - 1)?.checked_add(self.offset)
    }

    pub fn same_form(&self, other: &AffineBound) -> bool {
        self.coeff == other.coeff && self.offset == other.offset
    }

    fn with_m_min(self, m_min: Option<u64>) -> Self {
        AffineBound { m_min, ..self }
    }
}

impl fmt::Display for AffineBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(m-1)", self.coeff)?;
        match self.offset {
            0 => {}
            o if o > 0 => write!(f, "+{o}")?,
            o => write!(f, "{o}")?,
        }
        if let Some(m) = self.m_min {
            write!(f, " for m >= {m}")?;
        }
        Ok(())
    }
}

/// True iff `b1(m) >= b2(m)` for every `m >= from_m`.
pub fn dominates(b1: &AffineBound, b2: &AffineBound, from_m: u64) -> bool {
    let from = from_m.max(1) as i128;
    let (a1, a2) = (b1.coeff as i128, b2.coeff as i128);
    a1 >= a2 && (a1 - a2) * (from - 1) + b1.offset as i128 - b2.offset as i128 >= 0
}

/// The three-color value. The lower form `7m+⌊m/2⌋-6` is certified by an
/// explicit coloring; the upper form `7m+⌈m/2⌉-6` is the proven upper bound.
/// They agree for even `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClosedForm {
    ThreeColors,
}

impl ClosedForm {
    pub fn m_min(&self) -> u64 {
        4
    }

    pub fn lower(&self, m: u64) -> i64 {
        let m = m as i64;
        7 * m + m / 2 - 6
    }

    pub fn upper(&self, m: u64) -> i64 {
        let m = m as i64;
        7 * m + (m + 1) / 2 - 6
    }

    /// `g(m, 3)` where both forms agree.
    pub fn exact(&self, m: u64) -> Option<i64> {
        (m >= self.m_min() && self.lower(m) == self.upper(m)).then(|| self.lower(m))
    }

    /// Leading coefficient usable by lower-bound queries.
    pub fn lower_coeff(&self) -> i64 {
        7
    }

    /// Leading coefficient usable by upper-bound queries.
    pub fn upper_coeff(&self) -> i64 {
        8
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    Lift,
    Sandwich,
    Bracket,
}

impl Rule {
    pub const ALL: [Rule; 3] = [Rule::Lift, Rule::Sandwich, Rule::Bracket];

    pub fn name(&self) -> &'static str {
        match self {
            Rule::Lift => "lift",
            Rule::Sandwich => "sandwich",
            Rule::Bracket => "bracket",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Seed {
    OneColor,
    TwoColors,
    ThreeColors,
    FourColors,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Origin {
    Seed(Seed),
    Rule { rule: Rule, j: Color },
}

impl Origin {
    pub fn label(&self) -> &'static str {
        match self {
            Origin::Seed(_) => "seed",
            Origin::Rule { rule, .. } => rule.name(),
        }
    }

    pub fn j(&self) -> Option<Color> {
        match self {
            Origin::Rule { j, .. } => Some(*j),
            Origin::Seed(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GFact {
    pub r: Color,
    pub lower: AffineBound,
    pub upper: AffineBound,
    pub closed_form: Option<ClosedForm>,
    pub origin: Origin,
}

impl GFact {
    pub fn m_min(&self) -> Option<u64> {
        Some(self.lower.m_min?.max(self.upper.m_min?))
    }

    /// Lower bound value at `m`, using the closed form where present.
    pub fn lower_at(&self, m: u64) -> Option<i64> {
        match self.closed_form {
            Some(cf) if m >= cf.m_min() => Some(cf.lower(m)),
            _ => self.lower.eval(m),
        }
    }

    pub fn upper_at(&self, m: u64) -> Option<i64> {
        match self.closed_form {
            Some(cf) if m >= cf.m_min() => Some(cf.upper(m)),
            _ => self.upper.eval(m),
        }
    }
}

fn ceil_div(a: i64, b: i64) -> i64 {
    debug_assert!(b > 0);
    a.div_euclid(b) + i64::from(a.rem_euclid(b) != 0)
}

fn first_from(base: u64, c: i64, holds: impl Fn(u64) -> bool) -> Option<u64> {
    // the differences scanned here are nondecreasing and grow by at least
    // one every two steps, so the crossing lies within a bounded window
    let limit = base + 2 * (c.unsigned_abs() + 16);
    (base..=limit).find(|&m| holds(m))
}

/// Least `m0` such that `f`'s lower bound is at least `a(m-1)+c` for all
/// `m >= m0`, when such a threshold exists.
pub fn lower_at_least(f: &GFact, a: i64, c: i64) -> Option<u64> {
    if let Some(cf) = f.closed_form {
        if a > cf.lower_coeff() {
            return None;
        }
        return first_from(cf.m_min(), c, |m| cf.lower(m) >= a * (m as i64 - 1) + c);
    }
    let b = f.lower;
    let base = b.m_min?;
    if b.coeff < a {
        None
    } else if b.coeff == a {
        (b.offset >= c).then_some(base)
    } else {
        Some(base.max((1 + ceil_div(c - b.offset, b.coeff - a)).max(1) as u64))
    }
}

/// Least `m0` such that `f`'s upper bound is at most `a(m-1)+c` for all
/// `m >= m0`.
pub fn upper_at_most(f: &GFact, a: i64, c: i64) -> Option<u64> {
    if let Some(cf) = f.closed_form {
        if a < cf.upper_coeff() {
            return None;
        }
        return first_from(cf.m_min(), c, |m| cf.upper(m) <= a * (m as i64 - 1) + c);
    }
    let b = f.upper;
    let base = b.m_min?;
    if b.coeff > a {
        None
    } else if b.coeff == a {
        (b.offset <= c).then_some(base)
    } else {
        Some(base.max((1 + ceil_div(b.offset - c, a - b.coeff)).max(1) as u64))
    }
}

fn leading_lower(f: &GFact, a: i64) -> bool {
    f.closed_form.map_or(f.lower.coeff, |cf| cf.lower_coeff()) >= a
}

fn leading_upper(f: &GFact, a: i64) -> bool {
    f.closed_form.map_or(f.upper.coeff, |cf| cf.upper_coeff()) <= a
}

/// Smallest `n >= 1` with `g(m, ·) <= a(m-1)+n` eventually, and the
/// strict threshold for it when one is known.
fn min_n(f: &GFact, a: i64) -> Option<(i64, Option<u64>)> {
    if !leading_upper(f, a) {
        return None;
    }
    let n = match f.closed_form {
        Some(_) => 1,
        None if f.upper.coeff == a => f.upper.offset.max(1),
        None => 1,
    };
    Some((n, upper_at_most(f, a, n)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Semantics {
    #[default]
    Strict,
    Leading,
}

impl std::str::FromStr for Semantics {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "strict" => Ok(Semantics::Strict),
            "leading" => Ok(Semantics::Leading),
            other => Err(format!("unknown semantics `{other}` (expected strict or leading)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Kind {
    Exact,
    ConstGap { width: u64 },
    CoeffGap,
    Unclassified,
}

impl Kind {
    pub fn name(&self) -> &'static str {
        match self {
            Kind::Exact => "exact",
            Kind::ConstGap { .. } => "const_gap",
            Kind::CoeffGap => "coeff_gap",
            Kind::Unclassified => "unclassified",
        }
    }

    fn rank(&self) -> (u8, u64) {
        match self {
            Kind::Exact => (0, 0),
            Kind::ConstGap { width } => (1, *width),
            Kind::CoeffGap => (2, 0),
            Kind::Unclassified => (3, 0),
        }
    }

    /// Kind implied by a pair of affine bounds.
    pub fn of(lower: &AffineBound, upper: &AffineBound) -> Kind {
        if lower.same_form(upper) {
            Kind::Exact
        } else if lower.coeff == upper.coeff {
            Kind::ConstGap { width: (upper.offset - lower.offset).unsigned_abs() }
        } else {
            Kind::CoeffGap
        }
    }
}

/// One successful rule application.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Candidate {
    pub rule: Rule,
    pub j: Color,
    pub lower: AffineBound,
    pub upper: AffineBound,
    pub kind: Kind,
    pub m_min: Option<u64>,
}

impl Candidate {
    fn key(&self) -> (u8, u64, u64, Color, Rule) {
        let (k, gap) = self.kind.rank();
        (k, gap, self.m_min.unwrap_or(u64::MAX), self.j, self.rule)
    }
}

impl fmt::Display for Candidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lo = self.lower.with_m_min(None);
        let up = self.upper.with_m_min(None);
        write!(f, "{} j={}: ", self.rule.name(), self.j)?;
        if matches!(self.kind, Kind::Exact) {
            write!(f, "g = {lo}")?;
        } else {
            write!(f, "{lo} <= g <= {up}")?;
        }
        match self.m_min {
            Some(m) => write!(f, " for m >= {m}"),
            None => write!(f, " (leading coefficients)"),
        }
    }
}

fn combine(parts: &[Option<u64>]) -> Option<u64> {
    parts.iter().try_fold(2u64, |acc, p| p.map(|p| acc.max(p)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CandidateScan {
    /// Only `j` whose lower coefficient lies in `[r-2, r+1]`.
    Indexed,
    /// Every `j < r`.
    Exhaustive,
}

/// Facts indexed by color count, with an index of lower coefficients.
#[derive(Debug, Clone)]
pub struct KnowledgeBase {
    semantics: Semantics,
    facts: Vec<Option<GFact>>,
    by_lower: BTreeMap<i64, Vec<Color>>,
}

/// The four seed facts.
pub fn seed_kb(semantics: Semantics) -> KnowledgeBase {
    let mut kb = KnowledgeBase { semantics, facts: vec![None], by_lower: BTreeMap::new() };
    let exact = |r, coeff, offset, m_min, seed| GFact {
        r,
        lower: AffineBound::new(coeff, offset, m_min),
        upper: AffineBound::new(coeff, offset, m_min),
        closed_form: None,
        origin: Origin::Seed(seed),
    };
    kb.insert(Some(exact(1, 2, 2, 1, Seed::OneColor)));
    kb.insert(Some(exact(2, 5, 1, 2, Seed::TwoColors)));
    kb.insert(Some(GFact {
        r: 3,
        lower: AffineBound::new(7, 3, 4),
        upper: AffineBound::new(8, 0, 4),
        closed_form: Some(ClosedForm::ThreeColors),
        origin: Origin::Seed(Seed::ThreeColors),
    }));
    kb.insert(Some(exact(4, 10, 1, 3, Seed::FourColors)));
    kb
}

impl KnowledgeBase {
    pub fn semantics(&self) -> Semantics {
        self.semantics
    }

    /// Largest color count with an entry (classified or not).
    pub fn max_r(&self) -> Color {
        (self.facts.len() - 1) as Color
    }

    pub fn fact(&self, r: Color) -> Option<&GFact> {
        self.facts.get(r as usize).and_then(Option::as_ref)
    }

    fn insert(&mut self, fact: Option<GFact>) {
        if let Some(f) = &fact {
            debug_assert_eq!(f.r as usize, self.facts.len());
            self.by_lower.entry(f.closed_form.map_or(f.lower.coeff, |cf| cf.lower_coeff())).or_default().push(f.r);
        }
        self.facts.push(fact);
    }

    fn lower_check(&self, f: &GFact, a: i64, c: i64) -> Option<Option<u64>> {
        let strict = lower_at_least(f, a, c);
        match self.semantics {
            Semantics::Strict => strict.map(Some),
            Semantics::Leading => leading_lower(f, a).then_some(strict),
        }
    }

    fn upper_check(&self, f: &GFact, a: i64, c: i64) -> Option<Option<u64>> {
        let strict = upper_at_most(f, a, c);
        match self.semantics {
            Semantics::Strict => strict.map(Some),
            Semantics::Leading => leading_upper(f, a).then_some(strict),
        }
    }

    fn n_check(&self, f: &GFact, a: i64) -> Option<(i64, Option<u64>)> {
        let (n, m) = min_n(f, a)?;
        match self.semantics {
            Semantics::Strict => m.map(|m| (n, Some(m))),
            Semantics::Leading => Some((n, m)),
        }
    }

    pub fn apply(&self, rule: Rule, r: Color, j: Color) -> Option<Candidate> {
        match rule {
            Rule::Lift => apply_lift(self, r, j),
            Rule::Sandwich => apply_sandwich(self, r, j),
            Rule::Bracket => apply_bracket(self, r, j),
        }
    }

    fn candidates(&self, r: Color, scan: CandidateScan) -> Vec<Candidate> {
        let ri = r as i64;
        let js: Vec<Color> = match scan {
            CandidateScan::Exhaustive => (1..r).collect(),
            CandidateScan::Indexed => {
                let mut js: Vec<Color> =
                    self.by_lower.range(ri - 2..=ri + 1).flat_map(|(_, v)| v.iter().copied()).filter(|&j| j < r).collect();
                js.sort_unstable();
                js
            }
        };
        let mut out = Vec::new();
        for j in js {
            for rule in Rule::ALL {
                if let Some(c) = self.apply(rule, r, j) {
                    out.push(c);
                }
            }
        }
        out
    }

    /// Classifies `r = max_r + 1` and records the winning fact.
    pub fn classify_next(&mut self, scan: CandidateScan) -> Classification {
        let r = self.facts.len() as Color;
        let mut trace = self.candidates(r, scan);
        trace.sort_by_key(Candidate::key);
        let verdict = match trace.first() {
            Some(best) => {
                let fact = GFact {
                    r,
                    lower: best.lower,
                    upper: best.upper,
                    closed_form: None,
                    origin: Origin::Rule { rule: best.rule, j: best.j },
                };
                let c = Classification::from_fact(&fact, best.kind, trace.clone());
                self.insert(Some(fact));
                c
            }
            None => {
                self.insert(None);
                Classification::unclassified(r)
            }
        };
        Classification { trace, ..verdict }
    }

    /// Extends the base through `r`, one color count at a time.
    pub fn classify(&mut self, r: Color) -> Classification {
        while self.max_r() < r {
            self.classify_next(CandidateScan::Indexed);
        }
        match self.fact(r) {
            Some(f) => Classification::from_fact(f, seed_or_rule_kind(f), Vec::new()),
            None => Classification::unclassified(r),
        }
    }

    /// An L(r)-coloring of `[1, L]` where `L + 1` is the lower bound on
    /// `g(m, r)` recorded for `r`; built recursively through the rule that
    /// produced the fact.
    pub fn witness(&self, r: Color, m: usize) -> Result<Coloring, EngineError> {
        let f = self.fact(r).ok_or(EngineError::MissingFact(r))?;
        match f.origin {
            Origin::Seed(Seed::OneColor) => Ok(constructions::single_color(m)),
            Origin::Seed(_) => Ok(constructions::extend_full(&constructions::lower_string(r, m)?, m, r)?),
            Origin::Rule { rule, j } => {
                let m_min = f.m_min().ok_or(EngineError::NoThreshold { r })?;
                if (m as u64) < m_min {
                    return Err(EngineError::BelowThreshold { r, m, m_min });
                }
                Ok(constructions::extend_full(&self.rule_coloring(rule, r, j, m)?, m, r)?)
            }
        }
    }

    /// The block coloring `rule` builds for `r` from this base's witness for
    /// `j`, on the builder's own interval (not extended).
    pub fn rule_coloring(&self, rule: Rule, r: Color, j: Color, m: usize) -> Result<Coloring, EngineError> {
        if m < 2 || j == 0 || j >= r {
            return Err(EngineError::Construction(ConstructionError::BadParams(format!(
                "need m >= 2 and 1 <= j < r (m = {m}, r = {r}, j = {j})"
            ))));
        }
        let (m1, rp) = (m as Pos - 1, r as Pos);
        let (lo, hi) = match rule {
            Rule::Lift => (rp * m1 + 2, 2 * rp * m1),
            Rule::Sandwich => ((rp + 1) * m1 + 2, (2 * rp - 1) * m1),
            Rule::Bracket => ((rp + 1) * m1 + 1, 2 * rp * m1),
        };
        let inner = self.witness(j, m)?;
        let len = hi - lo + 1;
        let piece = inner
            .restrict(1, len)
            .filter(|p| p.len() as Pos == len)
            .ok_or(EngineError::Construction(ConstructionError::BadParams(format!(
                "witness for r = {j} has length {}, need {len}",
                inner.len()
            ))))?
            .translated(lo);
        Ok(match rule {
            Rule::Lift => constructions::build_lift(m, r, j, &piece)?,
            Rule::Sandwich => constructions::build_sandwich(m, r, j, &piece)?,
            Rule::Bracket => constructions::build_bracket(m, r, j, &piece)?,
        })
    }
}

fn seed_or_rule_kind(f: &GFact) -> Kind {
    match f.origin {
        Origin::Seed(_) => Kind::Exact,
        Origin::Rule { .. } => Kind::of(&f.lower, &f.upper),
    }
}

fn j_below(r: Color, j: Color) -> bool {
    j >= 1 && j < r
}

/// `r(m-1) <= g(m,j) <= r(m-1)+n` gives `g(m,r) = (3r-j)(m-1)+1` for
/// `m >= max(m0, n+1)`.
pub fn apply_lift(kb: &KnowledgeBase, r: Color, j: Color) -> Option<Candidate> {
    if !j_below(r, j) {
        return None;
    }
    let f = kb.fact(j)?;
    let a = r as i64;
    let lm = kb.lower_check(f, a, 0)?;
    let (n, um) = kb.n_check(f, a)?;
    let m_min = combine(&[lm, um, Some(n as u64 + 1)]);
    let b = AffineBound { coeff: 3 * a - j as i64, offset: 1, m_min };
    Some(Candidate { rule: Rule::Lift, j, lower: b, upper: b, kind: Kind::Exact, m_min })
}

/// `(r-2)(m-1) <= g(m,j)` and `g(m,j+1) <= (r+1)(m-1)+n` give
/// `(3r-j-1)(m-1)+1 <= g(m,r) <= (3r-j-1)(m-1)+n`.
pub fn apply_sandwich(kb: &KnowledgeBase, r: Color, j: Color) -> Option<Candidate> {
    if j == 0 || j + 1 >= r {
        return None;
    }
    let (f, h) = (kb.fact(j)?, kb.fact(j + 1)?);
    let a = r as i64;
    let lm = kb.lower_check(f, a - 2, 0)?;
    let (n, um) = kb.n_check(h, a + 1)?;
    let m_min = combine(&[lm, um]);
    let coeff = 3 * a - j as i64 - 1;
    let lower = AffineBound { coeff, offset: 1, m_min };
    let upper = AffineBound { coeff, offset: n, m_min };
    Some(Candidate { rule: Rule::Sandwich, j, lower, upper, kind: Kind::of(&lower, &upper), m_min })
}

/// `(r-1)(m-1)+1 <= g(m,j) <= r(m-1)-1` gives
/// `(3r-j-1)(m-1)+2 <= g(m,r) <= (3r-j)(m-1)`.
pub fn apply_bracket(kb: &KnowledgeBase, r: Color, j: Color) -> Option<Candidate> {
    if !j_below(r, j) {
        return None;
    }
    let f = kb.fact(j)?;
    let a = r as i64;
    let lm = kb.lower_check(f, a - 1, 1)?;
    let um = kb.upper_check(f, a, -1)?;
    let m_min = combine(&[lm, um]);
    let lower = AffineBound { coeff: 3 * a - j as i64 - 1, offset: 2, m_min };
    let upper = AffineBound { coeff: 3 * a - j as i64, offset: 0, m_min };
    Some(Candidate { rule: Rule::Bracket, j, lower, upper, kind: Kind::CoeffGap, m_min })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub r: Color,
    pub kind: Kind,
    pub origin: Option<Origin>,
    pub lower: Option<AffineBound>,
    pub upper: Option<AffineBound>,
    pub m_min: Option<u64>,
    /// Every rule application that fired, best first.
    pub trace: Vec<Candidate>,
}

impl Classification {
    fn from_fact(f: &GFact, kind: Kind, trace: Vec<Candidate>) -> Self {
        Classification {
            r: f.r,
            kind,
            origin: Some(f.origin),
            lower: Some(f.lower),
            upper: Some(f.upper),
            m_min: f.m_min(),
            trace,
        }
    }

    fn unclassified(r: Color) -> Self {
        Classification { r, kind: Kind::Unclassified, origin: None, lower: None, upper: None, m_min: None, trace: Vec::new() }
    }

    pub fn theorem(&self) -> &'static str {
        self.origin.map_or("", |o| o.label())
    }

    pub fn j(&self) -> Option<Color> {
        self.origin.and_then(|o| o.j())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
struct CsvRow {
    r: Color,
    kind: &'static str,
    theorem: &'static str,
    j: Option<Color>,
    lower_coeff: Option<i64>,
    lower_off: Option<i64>,
    upper_coeff: Option<i64>,
    upper_off: Option<i64>,
    m_min: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Share {
    pub count: usize,
    pub percent: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyReport {
    pub name: String,
    pub closed_form: String,
    pub members: Vec<i64>,
    pub all_exact: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub max_r: Color,
    pub semantics: Semantics,
    /// Rows counted, `r ∈ [2, max_r]`.
    pub total: usize,
    pub unclassified: usize,
    pub by_kind: BTreeMap<String, Share>,
    pub by_theorem: BTreeMap<String, Share>,
    /// As `by_theorem` over `r ∈ [5, max_r]`, seeds left out.
    pub by_theorem_rules_only: BTreeMap<String, Share>,
    pub families: Vec<FamilyReport>,
}

fn shares<'a>(labels: impl Iterator<Item = &'a str>, keys: &[&str], total: usize) -> BTreeMap<String, Share> {
    let mut counts: BTreeMap<String, usize> = keys.iter().map(|k| (k.to_string(), 0)).collect();
    for l in labels {
        *counts.entry(l.to_string()).or_default() += 1;
    }
    counts
        .into_iter()
        .map(|(k, count)| {
            let pct = if total == 0 { 0.0 } else { 100.0 * count as f64 / total as f64 };
            (k, Share { count, percent: (pct * 1e4).round() / 1e4 })
        })
        .collect()
}

/// Classifications for `r ∈ [2, max_r]` plus the knowledge base behind them.
#[derive(Debug, Clone)]
pub struct ClassificationTable {
    pub max_r: Color,
    pub semantics: Semantics,
    pub rows: Vec<Classification>,
    pub kb: KnowledgeBase,
}

/// Classifies every `r` in `[2, max_r]`. Color counts no rule reaches are
/// recorded as unclassified and later rules skip them.
pub fn classify_all(max_r: Color, semantics: Semantics) -> ClassificationTable {
    classify_all_with(max_r, semantics, CandidateScan::Indexed)
}

pub fn classify_all_with(max_r: Color, semantics: Semantics, scan: CandidateScan) -> ClassificationTable {
    let mut kb = seed_kb(semantics);
    let mut rows: Vec<Classification> = (2..=max_r.min(4))
        .map(|r| {
            let f = kb.fact(r).expect("seed");
            Classification::from_fact(f, Kind::Exact, Vec::new())
        })
        .collect();
    for _ in 5..=max_r {
        rows.push(kb.classify_next(scan));
    }
    ClassificationTable { max_r, semantics, rows, kb }
}

impl ClassificationTable {
    pub fn get(&self, r: Color) -> Option<&Classification> {
        r.checked_sub(2).and_then(|i| self.rows.get(i as usize))
    }

    pub fn unclassified(&self) -> Vec<Color> {
        self.rows.iter().filter(|c| c.kind == Kind::Unclassified).map(|c| c.r).collect()
    }

    /// Fails on the first unclassified color count.
    pub fn require_complete(&self) -> Result<(), EngineError> {
        match self.unclassified().first() {
            Some(&r) => Err(EngineError::Unclassified(r)),
            None => Ok(()),
        }
    }

    pub fn write_csv<W: io::Write>(&self, w: W) -> csv::Result<()> {
        let mut out = csv::Writer::from_writer(w);
        for c in &self.rows {
            out.serialize(CsvRow {
                r: c.r,
                kind: c.kind.name(),
                theorem: c.theorem(),
                j: c.j(),
                lower_coeff: c.lower.map(|b| b.coeff),
                lower_off: c.lower.map(|b| b.offset),
                upper_coeff: c.upper.map(|b| b.coeff),
                upper_off: c.upper.map(|b| b.offset),
                m_min: c.m_min,
            })?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv is utf-8")
    }

    pub fn summary(&self) -> Summary {
        let kinds = ["exact", "const_gap", "coeff_gap", "unclassified"];
        let theorems = ["seed", "lift", "sandwich", "bracket"];
        let label = |c: &Classification| if c.kind == Kind::Unclassified { "unclassified" } else { c.theorem() };
        let rules: Vec<&Classification> = self.rows.iter().filter(|c| c.r >= 5).collect();
        let families = families(self.max_r as i64)
            .unwrap_or_default()
            .into_iter()
            .map(|f| FamilyReport {
                name: f.spec.name.to_string(),
                closed_form: f.spec.label.to_string(),
                all_exact: f.members.iter().all(|&r| self.get(r as Color).is_some_and(|c| c.kind == Kind::Exact)),
                members: f.members,
            })
            .collect();
        Summary {
            max_r: self.max_r,
            semantics: self.semantics,
            total: self.rows.len(),
            unclassified: self.unclassified().len(),
            by_kind: shares(self.rows.iter().map(|c| c.kind.name()), &kinds, self.rows.len()),
            by_theorem: shares(self.rows.iter().map(label), &theorems, self.rows.len()),
            by_theorem_rules_only: shares(rules.iter().map(|c| label(c)), &theorems[1..], rules.len()),
            families,
        }
    }

    pub fn summary_json(&self) -> String {
        serde_json::to_string_pretty(&self.summary()).expect("summary serializes")
    }
}

/// The Fibonacci number `f_n` with `f_0 = 0`, `f_1 = 1`, extended to
/// negative indices by `f_{-n} = (-1)^{n+1} f_n`. `None` on overflow.
pub fn fib<T: PrimInt + Signed>(n: i64) -> Option<T> {
    let k = n.unsigned_abs();
    let value = if k == 0 {
        T::zero()
    } else {
        let (mut a, mut b) = (T::zero(), T::one());
        for _ in 1..k {
            let c = a.checked_add(&b)?;
            a = b;
            b = c;
        }
        b
    };
    Some(if n < 0 && k.is_multiple_of(2) { -value } else { value })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FamilyForm {
    /// `s·f_{2n+3}`
    OddIndex { scale: i64 },
    /// `a·f_{2n} - b·f_{2n-2}`
    EvenPair { a: i64, b: i64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FamilySpec {
    pub name: &'static str,
    pub label: &'static str,
    pub initial: (i64, i64),
    pub form: FamilyForm,
}

impl FamilySpec {
    /// Closed-form value of the member with index `n >= 0`.
    pub fn closed(&self, n: i64) -> Option<i64> {
        match self.form {
            FamilyForm::OddIndex { scale } => fib::<i64>(2 * n + 3)?.checked_mul(scale),
            FamilyForm::EvenPair { a, b } => {
                fib::<i64>(2 * n)?.checked_mul(a)?.checked_sub(fib::<i64>(2 * n - 2)?.checked_mul(b)?)
            }
        }
    }
}

pub const FAMILIES: [FamilySpec; 4] = [
    FamilySpec { name: "(2,5)", label: "f_{2n+3}", initial: (2, 5), form: FamilyForm::OddIndex { scale: 1 } },
    FamilySpec { name: "(4,10)", label: "2f_{2n+3}", initial: (4, 10), form: FamilyForm::OddIndex { scale: 2 } },
    FamilySpec { name: "(7,18)", label: "18f_{2n}-7f_{2n-2}", initial: (7, 18), form: FamilyForm::EvenPair { a: 18, b: 7 } },
    FamilySpec { name: "(9,23)", label: "23f_{2n}-9f_{2n-2}", initial: (9, 23), form: FamilyForm::EvenPair { a: 23, b: 9 } },
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Family {
    pub spec: FamilySpec,
    /// Members `r_0, r_1, …` not exceeding the limit.
    pub members: Vec<i64>,
}

impl Family {
    /// `r_{n+1}` for the member at index `n`, whether or not it is within the limit.
    pub fn successor(&self, n: usize) -> Option<i64> {
        let next = |a: i64, b: i64| b.checked_mul(3)?.checked_sub(a);
        let (mut a, mut b) = self.spec.initial;
        for _ in 0..n {
            let c = next(a, b)?;
            a = b;
            b = c;
        }
        Some(b)
    }
}

/// Members up to `max_r` of each family, generated by
/// `r_n = 3r_{n-1} - r_{n-2}` and checked against the closed forms.
pub fn families(max_r: i64) -> Result<Vec<Family>, EngineError> {
    FAMILIES
        .iter()
        .map(|spec| {
            let mut members = Vec::new();
            let (mut a, mut b) = spec.initial;
            let mut n = 0i64;
            while a <= max_r {
                let closed = spec.closed(n).ok_or(EngineError::Overflow)?;
                if closed != a {
                    return Err(EngineError::FamilyMismatch { name: spec.name, n, value: a, closed });
                }
                members.push(a);
                let c = b.checked_mul(3).and_then(|t| t.checked_sub(a)).ok_or(EngineError::Overflow)?;
                a = b;
                b = c;
                n += 1;
            }
            Ok(Family { spec: *spec, members })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::is_l_coloring;

    fn ab(c: i64, o: i64, m: u64) -> AffineBound {
        AffineBound::new(c, o, m)
    }

    #[test]
    fn dominates_examples() {
        assert!(dominates(&ab(5, 1, 2), &ab(5, 0, 2), 2));
        assert!(!dominates(&ab(5, 1, 2), &ab(6, -10, 2), 2));
        assert!(dominates(&ab(8, 1, 4), &ab(7, 3, 4), 4));
        assert!(!dominates(&ab(8, 1, 2), &ab(7, 3, 2), 2));
        for m in 4..=100u64 {
            assert!(ab(8, 1, 4).eval(m) >= ab(7, 3, 4).eval(m));
        }
    }

    #[test]
    fn seed_facts() {
        let kb = seed_kb(Semantics::Strict);
        let f = kb.fact(2).unwrap();
        assert_eq!((f.lower, f.upper), (ab(5, 1, 2), ab(5, 1, 2)));
        let f = kb.fact(3).unwrap();
        assert_eq!((f.lower, f.upper), (ab(7, 3, 4), ab(8, 0, 4)));
        assert_eq!(upper_at_most(f, 8, 0), Some(4));
        assert_eq!(upper_at_most(f, 8, -1), Some(6));
        assert_eq!(lower_at_least(f, 7, 3), Some(4));
        assert_eq!(lower_at_least(f, 8, 0), None);
        assert_eq!(upper_at_most(f, 7, 100), None);
        assert_eq!(kb.fact(1).unwrap().lower.eval(5), Some(10));
    }

    #[test]
    fn rule_examples() {
        let kb = seed_kb(Semantics::Strict);
        let c = apply_lift(&kb, 5, 2).unwrap();
        assert_eq!((c.lower, c.kind, c.m_min), (ab(13, 1, 2), Kind::Exact, Some(2)));
        let c = apply_sandwich(&kb, 7, 2).unwrap();
        assert_eq!((c.lower.coeff, c.lower.offset, c.upper.offset, c.m_min), (18, 1, 1, Some(4)));
        let c = apply_sandwich(&kb, 4, 1).unwrap();
        assert_eq!((c.lower.coeff, c.kind), (10, Kind::Exact));
        let c = apply_bracket(&kb, 6, 2).unwrap();
        assert_eq!((c.lower, c.upper), (ab(15, 2, 3), ab(16, 0, 3)));
        let c = apply_bracket(&kb, 8, 3).unwrap();
        assert_eq!((c.lower.coeff, c.upper.coeff, c.m_min), (20, 21, Some(6)));
        assert!(apply_bracket(&kb, 5, 2).is_none());
        assert!(apply_lift(&kb, 2, 2).is_none());
        assert!(apply_sandwich(&kb, 3, 2).is_none());
    }

    #[test]
    fn leading_mode_ignores_constants() {
        let kb = seed_kb(Semantics::Leading);
        // g(m,2) = 5(m-1)+1 is not below 5(m-1), but the coefficients match
        let c = apply_bracket(&kb, 5, 2).unwrap();
        assert_eq!(c.m_min, None);
        let c = apply_bracket(&kb, 6, 2).unwrap();
        assert_eq!(c.m_min, Some(3));
    }

    #[test]
    fn kinds() {
        assert_eq!(Kind::of(&ab(5, 1, 2), &ab(5, 1, 2)), Kind::Exact);
        assert_eq!(Kind::of(&ab(5, 1, 2), &ab(5, 3, 2)), Kind::ConstGap { width: 2 });
        assert_eq!(Kind::of(&ab(5, 2, 2), &ab(6, 0, 2)), Kind::CoeffGap);
    }

    #[test]
    fn small_table() {
        let t = classify_all(13, Semantics::Strict);
        let exact: Vec<Color> = t.rows.iter().filter(|c| c.kind == Kind::Exact).map(|c| c.r).collect();
        assert_eq!(exact, vec![2, 3, 4, 5, 7, 9, 10, 12, 13]);
        assert_eq!(t.get(6).unwrap().kind, Kind::CoeffGap);
        assert_eq!(t.get(8).unwrap().kind, Kind::CoeffGap);
        assert_eq!(t.get(11).unwrap().kind, Kind::CoeffGap);
        assert_eq!(t.get(9).unwrap().theorem(), "sandwich");
        let csv = t.to_csv_string();
        assert!(csv.starts_with("r,kind,theorem,j,lower_coeff,lower_off,upper_coeff,upper_off,m_min\n"));
        assert!(csv.contains("\n5,exact,lift,2,13,1,13,1,2\n"));
        assert!(csv.contains("\n3,exact,seed,,7,3,8,0,4\n"));
    }

    #[test]
    fn fibonacci() {
        let f: Vec<i64> = (-4..=10).map(|n| fib::<i64>(n).unwrap()).collect();
        assert_eq!(f, vec![-3, 2, -1, 1, 0, 1, 1, 2, 3, 5, 8, 13, 21, 34, 55]);
        assert_eq!(fib::<i64>(92), Some(7_540_113_804_746_346_429));
        assert_eq!(fib::<i64>(93), None);
        assert_eq!(fib::<i8>(11), Some(89));
        assert_eq!(fib::<i8>(12), None);
    }

    #[test]
    fn family_members() {
        let fs = families(200).unwrap();
        assert_eq!(fs[0].members, vec![2, 5, 13, 34, 89]);
        assert_eq!(fs[1].members, vec![4, 10, 26, 68, 178]);
        assert_eq!(fs[2].members, vec![7, 18, 47, 123]);
        assert_eq!(fs[3].members, vec![9, 23, 60, 157]);
        assert_eq!(fs[0].successor(4), Some(233));
    }

    #[test]
    fn witnesses_certify_lower_bounds() {
        let t = classify_all(13, Semantics::Strict);
        for r in 1..=13 {
            let f = t.kb.fact(r).unwrap();
            let m0 = f.m_min().unwrap().max(2) as usize;
            for m in m0..m0 + 3 {
                let w = t.kb.witness(r, m).unwrap();
                assert_eq!(w.start(), 1);
                assert_eq!(w.end() + 1, f.lower_at(m as u64).unwrap(), "r = {r}, m = {m}");
                assert!(is_l_coloring(&w, m), "r = {r}, m = {m}");
            }
        }
        assert!(matches!(t.kb.witness(6, 2), Err(EngineError::BelowThreshold { .. })));
    }
}

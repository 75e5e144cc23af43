//! One-sided subshifts: shifts of finite type decided exactly, and
//! predicate-defined shifts explored up to a horizon.

pub mod bridge;
pub mod clopen;
pub mod dynamics;
pub mod oracle;
pub mod sft;
pub mod verdict;

use std::collections::{BTreeMap, BTreeSet};

use serde::Deserialize;

use crate::error::{input, Error, Result};
use crate::lspace::{Letter, Word, EMPTY_WORD};
use crate::tight::{canonical_periodic, periodic_at};

pub use oracle::{counterexample_shift, GapRule, OracleShift};
pub use sft::Sft;

/// An eventually periodic point `prefix · period^∞` in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    prefix: Word,
    period: Word,
}

impl Point {
    pub fn new(prefix: Word, period: Word) -> Result<Self> {
        if period.is_empty() {
            return input("a point needs a nonempty period");
        }
        let (prefix, period) = canonical_periodic(prefix, period);
        Ok(Self { prefix, period })
    }

    pub fn periodic(period: Word) -> Result<Self> {
        Self::new(Vec::new(), period)
    }

    pub fn prefix(&self) -> &[Letter] {
        &self.prefix
    }

    pub fn period(&self) -> &[Letter] {
        &self.period
    }

    pub fn letter(&self, i: usize) -> Letter {
        *periodic_at(&self.prefix, &self.period, i)
    }

    /// The first `n` letters.
    pub fn take(&self, n: usize) -> Word {
        (0..n).map(|i| self.letter(i)).collect()
    }

    /// `σⁿ(x)`.
    pub fn shift(&self, n: usize) -> Point {
        if n <= self.prefix.len() {
            return Point { prefix: self.prefix[n..].to_vec(), period: self.period.clone() };
        }
        let mut period = self.period.clone();
        let offset = (n - self.prefix.len()) % period.len();
        period.rotate_left(offset);
        Point { prefix: Vec::new(), period }
    }

    /// `w · x`.
    pub fn prepend(&self, w: &[Letter]) -> Point {
        let (prefix, period) = canonical_periodic([w, &self.prefix].concat(), self.period.clone());
        Point { prefix, period }
    }

    /// Purely periodic, i.e. `γ^∞`.
    pub fn is_cyclic(&self) -> bool {
        self.prefix.is_empty()
    }

    /// Length of a window containing every factor of length `m`.
    pub fn window(&self, m: usize) -> usize {
        self.prefix.len() + self.period.len() + m
    }

    pub fn display(&self, alphabet: &[char]) -> String {
        let s = |w: &[Letter]| w.iter().map(|&a| alphabet[a as usize]).collect::<String>();
        format!("{}({})^inf", s(&self.prefix), s(&self.period))
    }

    pub fn parse(alphabet: &[char], text: &str) -> Result<Self> {
        let text = text.trim();
        let body = text
            .strip_suffix(")^inf")
            .ok_or_else(|| Error::Input(format!("a point looks like `prefix(period)^inf`, got {text:?}")))?;
        let (pre, per) = body.split_once('(').ok_or_else(|| Error::Input("missing `(`".into()))?;
        Self::new(parse_letters(alphabet, pre)?, parse_letters(alphabet, per)?)
    }
}

pub fn parse_letters(alphabet: &[char], text: &str) -> Result<Word> {
    let text = text.trim();
    if text == EMPTY_WORD {
        return Ok(Vec::new());
    }
    text.chars()
        .map(|c| {
            alphabet
                .iter()
                .position(|&x| x == c)
                .map(|i| i as Letter)
                .ok_or_else(|| Error::Input(format!("unknown letter {c:?}")))
        })
        .collect()
}

pub fn fmt_letters(alphabet: &[char], word: &[Letter]) -> String {
    if word.is_empty() {
        EMPTY_WORD.to_string()
    } else {
        word.iter().map(|&a| alphabet[a as usize]).collect()
    }
}

/// Three-valued answer for questions that a bounded search may leave open.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    True,
    False,
    Unknown,
}

impl Decision {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Decision::True
        } else {
            Decision::False
        }
    }

    pub fn and(self, other: Decision) -> Decision {
        match (self, other) {
            (Decision::False, _) | (_, Decision::False) => Decision::False,
            (Decision::True, Decision::True) => Decision::True,
            _ => Decision::Unknown,
        }
    }

    pub fn to_json(self) -> serde_json::Value {
        match self {
            Decision::True => true.into(),
            Decision::False => false.into(),
            Decision::Unknown => "unknown".into(),
        }
    }
}

/// Membership questions shared by exact and bounded shifts.
pub trait ShiftSystem {
    fn alphabet(&self) -> &[char];
    /// `w ∈ L_X`.
    fn in_language(&self, word: &[Letter]) -> bool;
    /// `w · x ∈ X`.
    fn prefixed_point_in(&self, word: &[Letter], x: &Point) -> bool;

    fn point_in(&self, x: &Point) -> bool {
        self.prefixed_point_in(&[], x)
    }

    /// All words of `L_X` of length at most `n`, shortest first then lexicographic.
    fn language(&self, n: usize) -> Vec<Word> {
        let mut out = vec![Vec::new()];
        let mut layer = vec![Vec::new()];
        for _ in 0..n {
            let mut next = Vec::new();
            for w in &layer {
                for a in 0..self.alphabet().len() as Letter {
                    let mut w2 = w.clone();
                    w2.push(a);
                    if self.in_language(&w2) {
                        next.push(w2);
                    }
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }

    /// `{α ∈ L_X : |α| ≤ l, x ∈ F_α}`.
    fn past_set(&self, x: &Point, l: usize) -> BTreeSet<Word> {
        self.language(l).into_iter().filter(|a| self.prefixed_point_in(a, x)).collect()
    }

    /// Eventually periodic points of `X` with `|prefix| + |period| ≤ size`.
    fn points_up_to(&self, size: usize) -> Vec<Point> {
        let mut out = BTreeSet::new();
        let words = all_words(self.alphabet().len(), size);
        for pre in &words {
            for per in &words {
                if per.is_empty() || pre.len() + per.len() > size {
                    continue;
                }
                let p = Point::new(pre.clone(), per.clone()).expect("nonempty period");
                if self.point_in(&p) {
                    out.insert(p);
                }
            }
        }
        out.into_iter().collect()
    }
}

/// Every word over `n` letters of length at most `max_len`.
pub fn all_words(n: usize, max_len: usize) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    let mut layer: Vec<Word> = vec![Vec::new()];
    for _ in 0..max_len {
        let next: Vec<Word> = layer
            .iter()
            .flat_map(|w| {
                (0..n as Letter).map(move |a| {
                    let mut w2 = w.clone();
                    w2.push(a);
                    w2
                })
            })
            .collect();
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// A subshift in either mode.
#[derive(Debug, Clone)]
pub enum Subshift {
    Sft(Sft),
    Oracle(OracleShift),
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum SubshiftJson {
    Sft { alphabet: Vec<String>, forbidden: Vec<String> },
    Builtin { builtin: String, horizon: Option<usize> },
}

pub const DEFAULT_HORIZON: usize = 64;

/// Accepted names of the built-in gap-word shift.
const BUILTIN_GAP_WORDS: [&str; 2] = ["gap-words", "paper-counterexample"];

impl Subshift {
    pub fn from_json_str(text: &str, horizon: Option<usize>) -> Result<Self> {
        let doc: SubshiftJson =
            serde_json::from_str(text).map_err(|e| Error::Input(format!("subshift JSON: {e}")))?;
        match doc {
            SubshiftJson::Sft { alphabet, forbidden } => {
                let mut letters = Vec::new();
                for s in &alphabet {
                    let mut cs = s.chars();
                    match (cs.next(), cs.next()) {
                        (Some(c), None) => letters.push(c),
                        _ => return input(format!("alphabet entries are single characters, got {s:?}")),
                    }
                }
                Ok(Subshift::Sft(Sft::from_strings(&letters, &forbidden)?))
            }
            SubshiftJson::Builtin { builtin, horizon: h } => {
                if !BUILTIN_GAP_WORDS.contains(&builtin.as_str()) {
                    return input(format!("unknown builtin shift {builtin:?}"));
                }
                Ok(Subshift::Oracle(counterexample_shift(horizon.or(h).unwrap_or(DEFAULT_HORIZON))))
            }
        }
    }

    pub fn system(&self) -> &dyn ShiftSystem {
        match self {
            Subshift::Sft(s) => s,
            Subshift::Oracle(o) => o,
        }
    }
}

/// Memoizes languages and past sets, which oracle shifts compute slowly.
#[derive(Default)]
pub struct PastCache {
    languages: BTreeMap<usize, Vec<Word>>,
    sets: BTreeMap<(Point, usize), BTreeSet<Word>>,
}

impl PastCache {
    pub fn get(&mut self, shift: &dyn ShiftSystem, x: &Point, l: usize) -> &BTreeSet<Word> {
        let words = self.languages.entry(l).or_insert_with(|| shift.language(l));
        self.sets
            .entry((x.clone(), l))
            .or_insert_with(|| words.iter().filter(|a| shift.prefixed_point_in(a, x)).cloned().collect())
    }
}

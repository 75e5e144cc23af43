//! Predicate-defined shifts explored up to a horizon, with the gap-word
//! family over `{a, b, c}` as the built-in instance.

use crate::lspace::{Letter, Word};

use super::{Point, ShiftSystem};

const A: Letter = 0;
const B: Letter = 1;
const C: Letter = 2;

/// Which gap lengths `k` are allowed in a factor `x aᵏ b` with `x ∈ {b, c}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GapRule {
    /// Powers of two, and the empty gap (so `bb` and `cb` occur).
    PowersOfTwoOrEmpty,
    /// Powers of two only.
    PowersOfTwo,
}

impl GapRule {
    pub fn allows(self, k: usize) -> bool {
        k.is_power_of_two() || (k == 0 && self == GapRule::PowersOfTwoOrEmpty)
    }
}

/// The gap-word shift: a word is admissible iff every factor `x aᵏ b`
/// with `x ∈ {b, c}` has an allowed gap `k`.
#[derive(Debug, Clone)]
pub struct OracleShift {
    alphabet: Vec<char>,
    rule: GapRule,
    horizon: usize,
}

/// The built-in counterexample shift.
pub fn counterexample_shift(horizon: usize) -> OracleShift {
    OracleShift::new(GapRule::PowersOfTwoOrEmpty, horizon)
}

/// How a point begins, which is all that matters when letters are prepended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Lead {
    /// The point begins `aᵏ b`.
    Gap(usize),
    /// The point begins `aᵏ c` or is `a^∞`: any letter may be prepended.
    Open,
}

impl OracleShift {
    pub fn new(rule: GapRule, horizon: usize) -> Self {
        Self { alphabet: vec!['a', 'b', 'c'], rule, horizon }
    }

    pub fn rule(&self) -> GapRule {
        self.rule
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn admissible(&self, w: &[Letter]) -> bool {
        let mut gap: Option<usize> = None;
        for &l in w {
            match l {
                A => gap = gap.map(|k| k + 1),
                B => {
                    if gap.is_some_and(|k| !self.rule.allows(k)) {
                        return false;
                    }
                    gap = Some(0);
                }
                C => gap = Some(0),
                _ => gap = None,
            }
        }
        true
    }

    pub fn lead(&self, x: &Point) -> Lead {
        let run = x.prefix().iter().chain(x.period().iter().cycle().take(x.period().len())).position(|&l| l != A);
        match run {
            Some(k) if x.letter(k) == B => Lead::Gap(k),
            _ => Lead::Open,
        }
    }

    /// The lead of `l · y` given the lead of `y`, or `None` if `l · y` is
    /// not in the shift.
    pub fn prepend_lead(&self, lead: Lead, l: Letter) -> Option<Lead> {
        match (l, lead) {
            (A, Lead::Gap(k)) => Some(Lead::Gap(k + 1)),
            (A, Lead::Open) => Some(Lead::Open),
            (_, Lead::Gap(k)) if !self.rule.allows(k) => None,
            (B, _) => Some(Lead::Gap(0)),
            _ => Some(Lead::Open),
        }
    }

    /// Lead of `w · y`.
    pub fn prepend_word_lead(&self, lead: Lead, w: &[Letter]) -> Option<Lead> {
        w.iter().rev().try_fold(lead, |acc, &l| self.prepend_lead(acc, l))
    }
}

impl ShiftSystem for OracleShift {
    fn alphabet(&self) -> &[char] {
        &self.alphabet
    }

    /// Every admissible word extends by `a^∞`.
    fn in_language(&self, word: &[Letter]) -> bool {
        self.admissible(word)
    }

    fn prefixed_point_in(&self, word: &[Letter], x: &Point) -> bool {
        let z = x.prepend(word);
        // Gaps inside the periodic part are shorter than the period.
        self.admissible(&z.take(z.window(z.period().len() + 1)))
    }
}

/// Words `x aᵏ b` for gap lengths `k ≤ max_gap`, split by the rule.
pub fn gap_words(rule: GapRule, max_gap: usize) -> (Vec<Word>, Vec<Word>) {
    let mut allowed = Vec::new();
    let mut forbidden = Vec::new();
    for x in [B, C] {
        for k in 0..=max_gap {
            let w: Word = std::iter::once(x).chain(std::iter::repeat_n(A, k)).chain(std::iter::once(B)).collect();
            if rule.allows(k) {
                allowed.push(w);
            } else {
                forbidden.push(w);
            }
        }
    }
    (allowed, forbidden)
}

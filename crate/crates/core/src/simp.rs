//! Simplicity of a finite normal labelled space: cycles without exits,
//! hereditary saturated closures, minimality, and the combined verdict.

use serde_json::{json, Value};

use crate::error::{input, Error, Result};
use crate::lspace::{LabelledSpace, Word};
use crate::setalg::{is_subset, VertexSet};
use crate::tight::{enumerate_tight, TightFilter};

/// `(α, A)` is a cycle when `r(B, α) = B` for every atom `B ⊆ A`.
pub fn is_cycle(space: &LabelledSpace, alpha: &[u8], set: VertexSet) -> bool {
    !alpha.is_empty()
        && set != 0
        && space.family().contains(set)
        && space.family().atoms_below(set).iter().all(|&b| space.image(b, alpha) == b)
}

/// First exit `(k, B)`: an atom `B ⊆ r(A, α₁..ₖ)` whose emitted letters are
/// not exactly `{αₖ₊₁}`.
pub fn has_exit(space: &LabelledSpace, alpha: &[u8], set: VertexSet) -> Result<Option<(usize, VertexSet)>> {
    if !is_cycle(space, alpha, set) {
        return input(format!("({}, {}) is not a cycle", space.fmt_word(alpha), space.fmt_set(set)));
    }
    for k in 0..alpha.len() {
        let level = space.image(set, &alpha[..k]);
        for b in space.family().atoms_below(level) {
            if space.letters_out(b) != [alpha[k]] {
                return Ok(Some((k, b)));
            }
        }
    }
    Ok(None)
}

/// A cycle without exit, if one exists. Condition (L_B) holds iff this is `None`.
///
/// From each atom the only candidate cycle follows the forced letter: every
/// atom below the current level must emit exactly one common letter.
pub fn no_exit_cycle(space: &LabelledSpace) -> Option<(Word, VertexSet)> {
    for &start in space.family().all_atoms() {
        let mut level = start;
        let mut word = Vec::new();
        let mut seen = vec![start];
        loop {
            let mut forced = None;
            let mut ok = true;
            for b in space.family().atoms_below(level) {
                match (space.letters_out(b).as_slice(), forced) {
                    ([a], None) => forced = Some(*a),
                    ([a], Some(f)) if *a == f => {}
                    _ => {
                        ok = false;
                        break;
                    }
                }
            }
            let Some(a) = forced.filter(|_| ok) else { break };
            word.push(a);
            level = space.image(level, &[a]);
            if level == start {
                return Some((word, start));
            }
            if seen.contains(&level) {
                break;
            }
            seen.push(level);
        }
    }
    None
}

pub fn condition_lb(space: &LabelledSpace) -> bool {
    no_exit_cycle(space).is_none()
}

/// A hereditary saturated set, always the principal ideal below `top`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HereditarySaturatedSet {
    pub top: VertexSet,
}

impl HereditarySaturatedSet {
    pub fn contains(&self, set: VertexSet) -> bool {
        is_subset(set, self.top)
    }

    pub fn members(&self, space: &LabelledSpace) -> Vec<VertexSet> {
        space.family().elements().into_iter().filter(|&s| is_subset(s, self.top)).collect()
    }
}

/// Smallest hereditary saturated set containing `generators`.
pub fn hereditary_saturated_closure(space: &LabelledSpace, generators: &[VertexSet]) -> Result<HereditarySaturatedSet> {
    if let Some(&g) = generators.iter().find(|&&g| !space.family().contains(g)) {
        return Err(Error::NotInFamily(space.fmt_set(g)));
    }
    let mut top = generators.iter().fold(0, |acc, g| acc | g);
    loop {
        // Hereditary: everything reachable by relative ranges.
        loop {
            let grown = space.letters().fold(top, |acc, a| acc | space.image(top, &[a]));
            if grown == top {
                break;
            }
            top = grown;
        }
        // Saturated: regular atoms whose one-letter ranges all lie inside.
        let added: VertexSet = space
            .family()
            .all_atoms()
            .iter()
            .copied()
            .filter(|&x| {
                !is_subset(x, top)
                    && !space.letters_out(x).is_empty()
                    && space.letters().all(|a| is_subset(space.image(x, &[a]), top))
            })
            .fold(0, |acc, x| acc | x);
        if added == 0 {
            return Ok(HereditarySaturatedSet { top });
        }
        top |= added;
    }
}

/// `None` when the only hereditary saturated sets are trivial; otherwise a
/// proper nonzero one.
pub fn proper_hereditary_saturated(space: &LabelledSpace) -> Option<HereditarySaturatedSet> {
    let top = space.family().top();
    space.family().all_atoms().iter().find_map(|&x| {
        let h = hereditary_saturated_closure(space, &[x]).expect("atoms are family members");
        (h.top != top).then_some(h)
    })
}

pub fn is_minimal(space: &LabelledSpace) -> bool {
    proper_hereditary_saturated(space).is_none()
}

pub const SECOND_COUNTABLE_NOTE: &str = "finite data gives a countable basis of compact open bisections, so the groupoid is second countable and the criterion is an equivalence";

#[derive(Debug, Clone)]
pub struct Verdict {
    pub condition_lb: bool,
    pub no_exit_cycle: Option<(Word, VertexSet)>,
    pub minimal: bool,
    pub proper_hs_witness: Option<HereditarySaturatedSet>,
    pub simple: bool,
    pub trivial_isotropy_filter: Option<TightFilter>,
}

/// Decides simplicity. A filter with trivial isotropy is reported for
/// simple spaces when one exists among the enumerated tight filters.
pub fn simplicity_verdict(space: &LabelledSpace, max_prefix: usize, max_period: usize) -> Result<Verdict> {
    let report = space.validate_normal();
    if let Some(v) = report.violations.first() {
        return Err(Error::Input(format!("not a normal labelled space: {}", space.describe_violation(v))));
    }
    let no_exit = no_exit_cycle(space);
    let proper = proper_hereditary_saturated(space);
    let simple = no_exit.is_none() && proper.is_none();
    let trivial_isotropy_filter = if simple {
        enumerate_tight(space, max_prefix, max_period).into_iter().find(|f| f.is_finite_type())
    } else {
        None
    };
    Ok(Verdict {
        condition_lb: no_exit.is_none(),
        no_exit_cycle: no_exit,
        minimal: proper.is_none(),
        proper_hs_witness: proper,
        simple,
        trivial_isotropy_filter,
    })
}

impl Verdict {
    pub fn to_json(&self, space: &LabelledSpace) -> Value {
        let names = |s: VertexSet| Value::from(space.set_names(s));
        let mut v = json!({
            "condition_LB": self.condition_lb,
            "no_exit_cycle": self.no_exit_cycle.as_ref().map(|(w, a)| json!({
                "alpha": space.fmt_word(w),
                "A": names(*a),
            })),
            "minimal": self.minimal,
            "proper_hs_witness": self.proper_hs_witness.as_ref().map(|h| {
                h.members(space).into_iter().map(names).collect::<Vec<_>>()
            }),
            "simple": self.simple,
            "trivial_isotropy_point": self.trivial_isotropy_filter.as_ref().map(|f| f.display(space)),
            "second_countable_note": SECOND_COUNTABLE_NOTE,
        });
        if self.simple && self.trivial_isotropy_filter.is_none() {
            v["trivial_isotropy_note"] = Value::from("no witness within enumeration bound");
        }
        v
    }
}

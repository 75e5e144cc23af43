//! The partial action of the free group on the alphabet on tight filters.

use std::collections::BTreeSet;

use crate::error::{input, Error, Result};
use crate::lspace::{LabelledSpace, Letter, Word};
use crate::tight::{can_glue, cut, glue, lcm, FilterBody, TightFilter};

/// A free-group letter: `(a, false)` is `a`, `(a, true)` is `a⁻¹`.
pub type Generator = (Letter, bool);

/// A reduced free-group element in the normal form `αβ⁻¹`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupElement {
    Identity,
    Positive(Word),
    /// `β⁻¹`, stored as `β`.
    Negative(Word),
    /// `αβ⁻¹`, stored as `(α, β)`.
    Mixed(Word, Word),
    /// Any element whose domain is empty.
    EmptyDomain,
}

fn free_reduce(raw: &[Generator]) -> Vec<Generator> {
    let mut out: Vec<Generator> = Vec::with_capacity(raw.len());
    for &g in raw {
        match out.last() {
            Some(&(a, inv)) if a == g.0 && inv != g.1 => {
                out.pop();
            }
            _ => out.push(g),
        }
    }
    out
}

/// Reduces `raw` and classifies it.
pub fn normalize(space: &LabelledSpace, raw: &[Generator]) -> Result<GroupElement> {
    if let Some(&(a, _)) = raw.iter().find(|g| g.0 as usize >= space.alphabet_size()) {
        return input(format!("letter index {a} outside the alphabet"));
    }
    let reduced = free_reduce(raw);
    let split = reduced.iter().position(|g| g.1).unwrap_or(reduced.len());
    if reduced[split..].iter().any(|g| !g.1) {
        return Ok(GroupElement::EmptyDomain);
    }
    let alpha: Word = reduced[..split].iter().map(|g| g.0).collect();
    let beta: Word = reduced[split..].iter().rev().map(|g| g.0).collect();
    if !space.is_labelled_path(&alpha) || !space.is_labelled_path(&beta) {
        return Ok(GroupElement::EmptyDomain);
    }
    Ok(match (alpha.is_empty(), beta.is_empty()) {
        (true, true) => GroupElement::Identity,
        (false, true) => GroupElement::Positive(alpha),
        (true, false) => GroupElement::Negative(beta),
        (false, false) => {
            if space.range(&alpha) & space.range(&beta) == 0 {
                GroupElement::EmptyDomain
            } else {
                GroupElement::Mixed(alpha, beta)
            }
        }
    })
}

impl GroupElement {
    /// `(α, β)` with `t = αβ⁻¹`; `None` for the empty-domain element.
    pub fn parts(&self) -> Option<(&[Letter], &[Letter])> {
        match self {
            GroupElement::Identity => Some((&[], &[])),
            GroupElement::Positive(a) => Some((a, &[])),
            GroupElement::Negative(b) => Some((&[], b)),
            GroupElement::Mixed(a, b) => Some((a, b)),
            GroupElement::EmptyDomain => None,
        }
    }

    /// Reduced word length, `|α| + |β|`.
    pub fn len(&self) -> usize {
        self.parts().map_or(0, |(a, b)| a.len() + b.len())
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, GroupElement::Identity)
    }

    pub fn inverse(&self) -> GroupElement {
        match self {
            GroupElement::Identity => GroupElement::Identity,
            GroupElement::Positive(a) => GroupElement::Negative(a.clone()),
            GroupElement::Negative(b) => GroupElement::Positive(b.clone()),
            GroupElement::Mixed(a, b) => GroupElement::Mixed(b.clone(), a.clone()),
            GroupElement::EmptyDomain => GroupElement::EmptyDomain,
        }
    }

    /// The reduced word `αβ⁻¹` as generators.
    pub fn raw(&self) -> Option<Vec<Generator>> {
        let (a, b) = self.parts()?;
        Some(a.iter().map(|&x| (x, false)).chain(b.iter().rev().map(|&x| (x, true))).collect())
    }

    /// `|α| − |β|`.
    pub fn degree(&self) -> Option<i64> {
        self.parts().map(|(a, b)| a.len() as i64 - b.len() as i64)
    }

    pub fn display(&self, space: &LabelledSpace) -> String {
        let Some((a, b)) = self.parts() else { return "empty".into() };
        if a.is_empty() && b.is_empty() {
            return space.fmt_word(&[]);
        }
        let mut out: String = a.iter().map(|&x| space.letter_char(x)).collect();
        match b.len() {
            0 => {}
            1 => out.push_str(&format!("{}^-1", space.letter_char(b[0]))),
            _ => out.push_str(&format!("({})^-1", b.iter().map(|&x| space.letter_char(x)).collect::<String>())),
        }
        out
    }
}

/// Product `s·t` in the free group, normalized.
pub fn multiply(space: &LabelledSpace, s: &GroupElement, t: &GroupElement) -> Result<GroupElement> {
    match (s.raw(), t.raw()) {
        (Some(x), Some(y)) => normalize(space, &[x, y].concat()),
        _ => Ok(GroupElement::EmptyDomain),
    }
}

/// Parses words like `ab^-1`, `a(bc)^-1`, `a b^-1 c`, or `ω`. A `^-1`
/// applies to the preceding letter or parenthesised block.
pub fn parse_group_word(space: &LabelledSpace, text: &str) -> Result<Vec<Generator>> {
    let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
    let mut out = Vec::new();
    let mut i = 0;
    let letter = |c: char| space.letter_index(c).ok_or_else(|| Error::Input(format!("unknown letter {c:?}")));
    let inverse_follows = |i: usize| chars[i..].starts_with(&['^', '-', '1']);
    while i < chars.len() {
        match chars[i] {
            'ω' => i += 1,
            '(' => {
                let close = chars[i..]
                    .iter()
                    .position(|&c| c == ')')
                    .ok_or_else(|| Error::Input("unclosed `(`".into()))?
                    + i;
                let block: Vec<Letter> = chars[i + 1..close].iter().map(|&c| letter(c)).collect::<Result<_>>()?;
                i = close + 1;
                if inverse_follows(i) {
                    out.extend(block.iter().rev().map(|&a| (a, true)));
                    i += 3;
                } else {
                    out.extend(block.iter().map(|&a| (a, false)));
                }
            }
            c => {
                let a = letter(c)?;
                i += 1;
                if inverse_follows(i) {
                    out.push((a, true));
                    i += 3;
                } else {
                    out.push((a, false));
                }
            }
        }
    }
    Ok(out)
}

/// `ξ ∈ V_{t⁻¹}`, the domain of `φ_t`.
pub fn in_domain(space: &LabelledSpace, xi: &TightFilter, t: &GroupElement) -> bool {
    let Some((alpha, beta)) = t.parts() else { return false };
    if !xi.has_beginning(beta) {
        return false;
    }
    if alpha.is_empty() {
        return true;
    }
    cut(xi, beta).is_ok_and(|c| can_glue(space, &c, alpha))
}

/// `φ_t(ξ) = G_α(H_β(ξ))` for `t = αβ⁻¹`.
pub fn apply(space: &LabelledSpace, t: &GroupElement, xi: &TightFilter) -> Result<TightFilter> {
    if !in_domain(space, xi, t) {
        return Err(Error::Domain(format!("filter is outside the domain of {}", t.display(space))));
    }
    let (alpha, beta) = t.parts().expect("nonempty domain");
    glue(space, &cut(xi, beta)?, alpha)
}

/// All group elements with nonempty domain and reduced length `≤ max_len`.
pub fn elements_up_to(space: &LabelledSpace, max_len: usize) -> Vec<GroupElement> {
    let paths = space.labelled_paths_up_to(max_len);
    let mut out = BTreeSet::new();
    for alpha in &paths {
        for beta in &paths {
            if alpha.len() + beta.len() > max_len {
                continue;
            }
            let raw: Vec<Generator> =
                alpha.iter().map(|&a| (a, false)).chain(beta.iter().rev().map(|&b| (b, true))).collect();
            if let Ok(t) = normalize(space, &raw) {
                if t != GroupElement::EmptyDomain {
                    out.insert(t);
                }
            }
        }
    }
    out.into_iter().collect()
}

/// Group elements `t` with `|t| ≤ max_len` whose domain contains `xi`.
pub fn elements_acting_on(space: &LabelledSpace, xi: &TightFilter, max_len: usize) -> Vec<GroupElement> {
    let mut out = Vec::new();
    for bl in 0..=max_len {
        let Some(beta) = (0..bl).map(|i| xi.letter(i)).collect::<Option<Word>>() else { break };
        for alpha in space.labelled_paths_up_to(max_len - bl) {
            if alpha.last().is_some() && alpha.last() == beta.last() {
                continue;
            }
            let t = match (alpha.is_empty(), beta.is_empty()) {
                (true, true) => GroupElement::Identity,
                (false, true) => GroupElement::Positive(alpha),
                (true, false) => GroupElement::Negative(beta.clone()),
                (false, false) => GroupElement::Mixed(alpha, beta.clone()),
            };
            if in_domain(space, xi, &t) {
                out.push(t);
            }
        }
    }
    out
}

/// `{φ_t(ξ) : |t| ≤ max_len}`.
pub fn orbit(space: &LabelledSpace, xi: &TightFilter, max_len: usize) -> BTreeSet<TightFilter> {
    elements_acting_on(space, xi, max_len)
        .iter()
        .filter_map(|t| apply(space, t, xi).ok())
        .collect()
}

/// A decomposition `word = βγ^∞` witnessing nontrivial isotropy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsotropyWitness {
    pub beta: Word,
    pub gamma: Word,
}

/// Searches `word = βγ^∞` with `x ⊆ r(x, γ)` for the atom `x` at every level
/// `|βγⁿ|`. The power of the word period tried for `γ` goes up to the ratio
/// between the atom period and the word period.
pub fn has_nontrivial_isotropy(space: &LabelledSpace, xi: &TightFilter) -> Option<IsotropyWitness> {
    let FilterBody::Infinite { prefix, period } = xi.body() else { return None };
    let crate::tight::FilterWord::Infinite(word) = xi.word() else { return None };
    let (p, q) = (prefix.len(), period.len());
    let wq = word.period.len();
    let max_power = (q / wq).max(2);
    for beta_len in word.prefix.len()..=p + q {
        for k in 1..=max_power {
            let glen = k * wq;
            let gamma = word.beginning(beta_len + glen)[beta_len..].to_vec();
            // Levels |β| + n|γ| are periodic in n once past the prefix.
            let steps = p.div_ceil(glen) + lcm(glen, q) / glen + 1;
            let holds = (0..=steps).all(|n| {
                xi.atom(beta_len + n * glen)
                    .is_some_and(|x| crate::setalg::is_subset(x, space.image(x, &gamma)))
            });
            if holds {
                return Some(IsotropyWitness { beta: word.beginning(beta_len), gamma });
            }
        }
    }
    None
}

/// `σˡ(ξ) = σᵏ(ξ)` for some `l < k ≤ bound`.
pub fn shift_equality_isotropy(xi: &TightFilter, bound: usize) -> Option<(usize, usize)> {
    let shifts: Vec<Option<TightFilter>> = (0..=bound).map(|n| crate::tight::shift(xi, n).ok()).collect();
    for k in 1..=bound {
        for l in 0..k {
            if let (Some(a), Some(b)) = (&shifts[l], &shifts[k]) {
                if a == b {
                    return Some((l, k));
                }
            }
        }
    }
    None
}

/// Result of checking the partial-action axioms on a sample of filters.
#[derive(Debug, Clone, Default)]
pub struct ActionReport {
    pub checks: usize,
    pub failures: Vec<String>,
}

impl ActionReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }
}

/// Checks identity, the domain and composition laws, semi-saturation and
/// orthogonality for all group elements with `|t| ≤ max_len`.
pub fn verify_partial_action_axioms(space: &LabelledSpace, sample: &[TightFilter], max_len: usize) -> ActionReport {
    let mut report = ActionReport::default();
    let group = elements_up_to(space, max_len);
    let dom = |xi: &TightFilter, t: &GroupElement| in_domain(space, xi, t);
    // V_t is the domain of t⁻¹.
    let image_set = |xi: &TightFilter, t: &GroupElement| in_domain(space, xi, &t.inverse());
    for xi in sample {
        report.check(apply(space, &GroupElement::Identity, xi).as_ref() == Ok(xi), || "φ_ω is not the identity".into());
        let letters: Vec<Letter> = space.letters().collect();
        for &a in &letters {
            for &b in &letters {
                if a < b {
                    let (ta, tb) = (GroupElement::Positive(vec![a]), GroupElement::Positive(vec![b]));
                    report.check(!(image_set(xi, &ta) && image_set(xi, &tb)), || {
                        format!("{} lies in V_{} and V_{}", xi.display(space), space.letter_char(a), space.letter_char(b))
                    });
                }
            }
        }
    }
    for s in &group {
        for t in &group {
            let Ok(st) = multiply(space, s, t) else { continue };
            let name = || format!("s={}, t={}", s.display(space), t.display(space));
            for xi in sample {
                let v = image_set(xi, t);
                if dom(xi, s) && v {
                    let img = apply(space, s, xi);
                    report.check(img.as_ref().is_ok_and(|y| image_set(y, s) && image_set(y, &st)), || {
                        format!("φ_s(V_s⁻¹ ∩ V_t) ⊄ V_s ∩ V_st for {} at {}", name(), xi.display(space))
                    });
                }
                if image_set(xi, s) && image_set(xi, &st) {
                    let pre = apply(space, &s.inverse(), xi);
                    report.check(pre.as_ref().is_ok_and(|y| dom(y, s) && image_set(y, t)), || {
                        format!("V_s ∩ V_st ⊄ φ_s(V_s⁻¹ ∩ V_t) for {} at {}", name(), xi.display(space))
                    });
                }
                if dom(xi, t) && dom(xi, &st) {
                    let lhs = apply(space, t, xi).and_then(|y| apply(space, s, &y));
                    let rhs = apply(space, &st, xi);
                    report.check(lhs.is_ok() && lhs == rhs, || {
                        format!("φ_s∘φ_t ≠ φ_st for {} at {}", name(), xi.display(space))
                    });
                }
                if st.len() == s.len() + t.len() && image_set(xi, &st) {
                    report.check(image_set(xi, s), || format!("V_st ⊄ V_s for {} at {}", name(), xi.display(space)));
                }
            }
        }
    }
    report
}

//! The inverse semigroup of a labelled space: triples `(α, A, β)` and zero.

use crate::error::{input, Result};
use crate::lspace::{LabelledSpace, Letter, Word};
use crate::setalg::{is_subset, VertexSet};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Triple {
    Zero,
    /// `(alpha, set, beta)` with `set ≠ ∅` a family member inside `r(alpha) ∩ r(beta)`.
    Elem { alpha: Word, set: VertexSet, beta: Word },
}

impl Triple {
    /// Checked constructor.
    pub fn new(space: &LabelledSpace, alpha: Word, set: VertexSet, beta: Word) -> Result<Self> {
        let t = Triple::Elem { alpha, set, beta };
        t.check(space)?;
        Ok(t)
    }

    /// The idempotent `(alpha, set, alpha)`.
    pub fn idempotent(space: &LabelledSpace, alpha: Word, set: VertexSet) -> Result<Self> {
        Self::new(space, alpha.clone(), set, alpha)
    }

    pub fn check(&self, space: &LabelledSpace) -> Result<()> {
        let Triple::Elem { alpha, set, beta } = self else { return Ok(()) };
        if *set == 0 {
            return input("the middle set of a triple must be nonempty");
        }
        if !space.family().contains(*set) {
            return input(format!("{} is not in the family", space.fmt_set(*set)));
        }
        if alpha.iter().chain(beta).any(|&a| a as usize >= space.alphabet_size()) {
            return input("triple uses a letter outside the alphabet");
        }
        if !is_subset(*set, space.range(alpha) & space.range(beta)) {
            return input(format!(
                "{} is not inside r({}) ∩ r({})",
                space.fmt_set(*set),
                space.fmt_word(alpha),
                space.fmt_word(beta)
            ));
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Triple::Zero)
    }

    pub fn is_idempotent(&self) -> bool {
        matches!(self, Triple::Elem { alpha, beta, .. } if alpha == beta)
    }

    pub fn star(&self) -> Triple {
        match self {
            Triple::Zero => Triple::Zero,
            Triple::Elem { alpha, set, beta } => {
                Triple::Elem { alpha: beta.clone(), set: *set, beta: alpha.clone() }
            }
        }
    }

    /// Parses `0` or `(α,{v,...},β)`, the notation of [`Triple::display`].
    pub fn parse(space: &LabelledSpace, text: &str) -> Result<Self> {
        let text = text.trim();
        if text == "0" {
            return Ok(Triple::Zero);
        }
        let inner = text
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| crate::Error::Input(format!("expected `(α,{{...}},β)`, got {text:?}")))?;
        let (alpha, rest) = inner.split_once(",{").ok_or_else(|| crate::Error::Input("missing `,{`".into()))?;
        let (set, beta) = rest.split_once("},").ok_or_else(|| crate::Error::Input("missing `},`".into()))?;
        let set = space.parse_set_text(set)?;
        Self::new(space, space.parse_word(alpha)?, set, space.parse_word(beta)?)
    }

    pub fn display(&self, space: &LabelledSpace) -> String {
        match self {
            Triple::Zero => "0".into(),
            Triple::Elem { alpha, set, beta } => {
                format!("({},{},{})", space.fmt_word(alpha), space.fmt_set(*set), space.fmt_word(beta))
            }
        }
    }
}

fn concat(a: &[Letter], b: &[Letter]) -> Word {
    let mut w = a.to_vec();
    w.extend_from_slice(b);
    w
}

/// Product of two triples assumed valid for `space`.
pub fn product(space: &LabelledSpace, s: &Triple, t: &Triple) -> Triple {
    let (Triple::Elem { alpha, set: a, beta }, Triple::Elem { alpha: gamma, set: b, beta: delta }) = (s, t)
    else {
        return Triple::Zero;
    };
    // γ = βγ′ (this includes γ = β, where both cases agree).
    if let Some(rest) = gamma.strip_prefix(beta.as_slice()) {
        let mid = space.image(*a, rest) & b;
        if mid == 0 {
            return Triple::Zero;
        }
        return Triple::Elem { alpha: concat(alpha, rest), set: mid, beta: delta.clone() };
    }
    if let Some(rest) = beta.strip_prefix(gamma.as_slice()) {
        let mid = a & space.image(*b, rest);
        if mid == 0 {
            return Triple::Zero;
        }
        return Triple::Elem { alpha: alpha.clone(), set: mid, beta: concat(delta, rest) };
    }
    Triple::Zero
}

/// Product with validation of both factors against `space`.
pub fn multiply(space: &LabelledSpace, s: &Triple, t: &Triple) -> Result<Triple> {
    s.check(space)?;
    t.check(space)?;
    Ok(product(space, s, t))
}

/// Natural order on idempotents: `(α,A,α) ≤ (β,B,β)` iff `α = βα′` and `A ⊆ r(B, α′)`.
pub fn idempotent_leq(space: &LabelledSpace, p: &Triple, q: &Triple) -> bool {
    match (p, q) {
        (Triple::Zero, _) => true,
        (_, Triple::Zero) => false,
        (Triple::Elem { alpha, set: a, .. }, Triple::Elem { alpha: beta, set: b, .. }) => {
            match alpha.strip_prefix(beta.as_slice()) {
                Some(rest) => is_subset(*a, space.image(*b, rest)),
                None => false,
            }
        }
    }
}

/// All `(α, A, α)` with `|α| ≤ max_len`, ordered by word then by set.
pub fn idempotents_up_to(space: &LabelledSpace, max_len: usize) -> Vec<Triple> {
    let elements = space.family().elements();
    let mut out = Vec::new();
    for alpha in space.labelled_paths_up_to(max_len) {
        let r = space.range(&alpha);
        for &set in &elements {
            if set != 0 && is_subset(set, r) {
                out.push(Triple::Elem { alpha: alpha.clone(), set, beta: alpha.clone() });
            }
        }
    }
    out
}

/// All nonzero triples with both words of length at most `max_len`.
pub fn triples_up_to(space: &LabelledSpace, max_len: usize) -> Vec<Triple> {
    let elements = space.family().elements();
    let paths = space.labelled_paths_up_to(max_len);
    let mut out = Vec::new();
    for alpha in &paths {
        for beta in &paths {
            let r = space.range(alpha) & space.range(beta);
            for &set in &elements {
                if set != 0 && is_subset(set, r) {
                    out.push(Triple::Elem { alpha: alpha.clone(), set, beta: beta.clone() });
                }
            }
        }
    }
    out
}

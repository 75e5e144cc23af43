//! Clopen subsets of an SFT, the Boolean algebra generated by the sets
//! `C(α, β) = {βx ∈ X : αx ∈ X}`.
//!
//! A value is a depth `d` with a set of extendable words of length `d`,
//! standing for the union of their cylinders. Values are kept at the least
//! depth that expresses them, so structural equality is set equality.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::lspace::{Letter, Word};
use crate::setalg::members;

use super::sft::Sft;
use super::Point;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClopenSet {
    depth: usize,
    words: BTreeSet<Word>,
}

fn extensions(sft: &Sft, w: &[Letter]) -> Vec<Word> {
    (0..sft.letters().len() as Letter)
        .map(|a| [w, &[a]].concat())
        .filter(|x| sft.is_extendable(x))
        .collect()
}

impl ClopenSet {
    fn normalized(sft: &Sft, depth: usize, words: BTreeSet<Word>) -> Self {
        let mut set = ClopenSet { depth, words };
        while set.depth > 0 {
            let parents: BTreeSet<Word> = set.words.iter().map(|w| w[..set.depth - 1].to_vec()).collect();
            let complete = parents.iter().all(|p| extensions(sft, p).iter().all(|c| set.words.contains(c)));
            if !complete {
                break;
            }
            set = ClopenSet { depth: set.depth - 1, words: parents };
        }
        if set.words.is_empty() {
            set.depth = 0;
        }
        set
    }

    /// Builds a set from arbitrary words of one length, dropping the
    /// non-extendable ones.
    pub fn from_words(sft: &Sft, depth: usize, words: impl IntoIterator<Item = Word>) -> Self {
        let words = words.into_iter().filter(|w| w.len() == depth && sft.is_extendable(w)).collect();
        Self::normalized(sft, depth, words)
    }

    pub fn empty() -> Self {
        ClopenSet { depth: 0, words: BTreeSet::new() }
    }

    pub fn everything() -> Self {
        ClopenSet { depth: 0, words: BTreeSet::from([Vec::new()]) }
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn words(&self) -> &BTreeSet<Word> {
        &self.words
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// The same set written with words of length `depth ≥ self.depth()`.
    pub fn words_at(&self, sft: &Sft, depth: usize) -> BTreeSet<Word> {
        assert!(depth >= self.depth, "cannot lower a clopen set");
        let mut layer = self.words.clone();
        for _ in self.depth..depth {
            layer = layer.iter().flat_map(|w| extensions(sft, w)).collect();
        }
        layer
    }

    fn combine(&self, sft: &Sft, other: &Self, op: impl Fn(bool, bool) -> bool) -> Self {
        let d = self.depth.max(other.depth);
        let (a, b) = (self.words_at(sft, d), other.words_at(sft, d));
        let words = a.union(&b).filter(|w| op(a.contains(*w), b.contains(*w))).cloned().collect();
        Self::normalized(sft, d, words)
    }

    pub fn meet(&self, sft: &Sft, other: &Self) -> Self {
        self.combine(sft, other, |x, y| x && y)
    }

    pub fn join(&self, sft: &Sft, other: &Self) -> Self {
        self.combine(sft, other, |x, y| x || y)
    }

    pub fn diff(&self, sft: &Sft, other: &Self) -> Self {
        self.combine(sft, other, |x, y| x && !y)
    }

    pub fn is_subset(&self, sft: &Sft, other: &Self) -> bool {
        self.diff(sft, other).is_empty()
    }

    pub fn contains_point(&self, x: &Point) -> bool {
        self.words.contains(&x.take(self.depth))
    }

    /// `r(A, α) = {x : αx ∈ A}`.
    pub fn rel_range(&self, sft: &Sft, alpha: &[Letter]) -> Result<Self> {
        let follower = cset(sft, alpha, &[])?;
        if alpha.len() <= self.depth {
            let tails = self
                .words
                .iter()
                .filter(|w| w.starts_with(alpha))
                .map(|w| w[alpha.len()..].to_vec());
            let tails = Self::from_words(sft, self.depth - alpha.len(), tails);
            Ok(tails.meet(sft, &follower))
        } else if self.words.iter().any(|w| alpha.starts_with(w)) {
            Ok(follower)
        } else {
            Ok(Self::empty())
        }
    }
}

/// `C(α, β)`: words `βv` with `v` a live block followed by both words.
pub fn cset(sft: &Sft, alpha: &[Letter], beta: &[Letter]) -> Result<ClopenSet> {
    for w in [alpha, beta] {
        if !sft.is_extendable(w) {
            return Err(Error::Domain(format!(
                "{} is not in the language",
                super::fmt_letters(sft.letters(), w)
            )));
        }
    }
    let state = sft.follower_state(alpha) & sft.follower_state(beta);
    let words = members(state).map(|i| [beta, &sft.live()[i]].concat());
    Ok(ClopenSet::from_words(sft, beta.len() + sft.block_len(), words))
}

/// Follower set `F_α = C(α, ω)`.
pub fn follower(sft: &Sft, alpha: &[Letter]) -> Result<ClopenSet> {
    cset(sft, alpha, &[])
}

/// Cylinder `Z_β = C(ω, β)`.
pub fn cylinder(sft: &Sft, beta: &[Letter]) -> Result<ClopenSet> {
    cset(sft, &[], beta)
}

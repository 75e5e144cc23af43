//! Tight filters of the idempotent semilattice, encoded as a word together
//! with a compatible sequence of atoms, and the surgery maps between them.
//!
//! A tight filter with word `α₁α₂…` is stored as the pairs `(αₙ, xₙ)` for
//! `n ≥ 1`, where `xₙ` is the atom generating the ultrafilter at level `n`,
//! plus the level-zero atom `x₀` (absent when the level-zero filter is empty).
//! Compatibility means `xₙ₊₁ ⊆ r(xₙ, αₙ₊₁)`; since the family is weakly
//! left-resolving, `xₙ` is then determined by `xₙ₊₁`.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::{input, Error, Result};
use crate::invsemi::Triple;
use crate::lspace::{LabelledSpace, Letter, Word, EMPTY_WORD};
use crate::setalg::{is_subset, UltrafilterRep, VertexSet};

pub type Pair = (Letter, VertexSet);

/// Reduces `prefix · period^∞` to its canonical form: primitive period and
/// shortest prefix.
pub fn canonical_periodic<T: Clone + Eq>(mut prefix: Vec<T>, mut period: Vec<T>) -> (Vec<T>, Vec<T>) {
    assert!(!period.is_empty(), "period must be nonempty");
    let q = period.len();
    if let Some(d) = (1..q).find(|&d| q % d == 0 && (d..q).all(|i| period[i] == period[i - d])) {
        period.truncate(d);
    }
    while prefix.last().is_some_and(|x| Some(x) == period.last()) {
        prefix.pop();
        period.rotate_right(1);
    }
    (prefix, period)
}

/// Entry `i` (0-based) of `prefix · period^∞`.
pub fn periodic_at<'a, T>(prefix: &'a [T], period: &'a [T], i: usize) -> &'a T {
    if i < prefix.len() {
        &prefix[i]
    } else {
        &period[(i - prefix.len()) % period.len()]
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// An infinite word `prefix · period^∞` in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EventuallyPeriodicWord {
    pub prefix: Word,
    pub period: Word,
}

impl EventuallyPeriodicWord {
    pub fn new(prefix: Word, period: Word) -> Result<Self> {
        if period.is_empty() {
            return input("the period of an infinite word must be nonempty");
        }
        let (prefix, period) = canonical_periodic(prefix, period);
        Ok(Self { prefix, period })
    }

    pub fn letter(&self, i: usize) -> Letter {
        *periodic_at(&self.prefix, &self.period, i)
    }

    /// The first `n` letters.
    pub fn beginning(&self, n: usize) -> Word {
        (0..n).map(|i| self.letter(i)).collect()
    }

    /// Every finite beginning is a labelled path.
    pub fn is_labelled(&self, space: &LabelledSpace) -> bool {
        // Beginnings of length p + k·q have ranges that eventually cycle.
        let mut seen = BTreeSet::new();
        let mut set = space.range(&self.prefix);
        if !self.prefix.is_empty() && set == 0 {
            return false;
        }
        loop {
            if !seen.insert(set) {
                return true;
            }
            for &a in &self.period {
                set = space.image(set, &[a]);
                if set == 0 {
                    return false;
                }
            }
        }
    }

    pub fn display(&self, space: &LabelledSpace) -> String {
        let pre: String = self.prefix.iter().map(|&a| space.letter_char(a)).collect();
        let per: String = self.period.iter().map(|&a| space.letter_char(a)).collect();
        format!("{pre}({per})^inf")
    }
}

/// The word of a tight filter.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FilterWord {
    Finite(Word),
    Infinite(EventuallyPeriodicWord),
}

impl FilterWord {
    pub fn letter(&self, i: usize) -> Option<Letter> {
        match self {
            FilterWord::Finite(w) => w.get(i).copied(),
            FilterWord::Infinite(w) => Some(w.letter(i)),
        }
    }

    pub fn has_beginning(&self, beta: &[Letter]) -> bool {
        beta.iter().enumerate().all(|(i, &b)| self.letter(i) == Some(b))
    }

    pub fn display(&self, space: &LabelledSpace) -> String {
        match self {
            FilterWord::Finite(w) => space.fmt_word(w),
            FilterWord::Infinite(w) => w.display(space),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FilterBody {
    Finite(Vec<Pair>),
    Infinite { prefix: Vec<Pair>, period: Vec<Pair> },
}

/// A tight filter. Values are always canonical, so structural equality is
/// equality of filters.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TightFilter {
    bottom: Option<VertexSet>,
    body: FilterBody,
}

/// Level bound for the restricted algebra at word `alpha`: `r(α)`, or the
/// whole family when `α = ω`.
pub fn level_bound(space: &LabelledSpace, alpha: &[Letter]) -> VertexSet {
    if alpha.is_empty() {
        space.family().top()
    } else {
        space.range(alpha)
    }
}

/// The atom `y ⊆ bound` with `x ⊆ r(y, word)`, if any.
pub fn predecessor(space: &LabelledSpace, x: VertexSet, word: &[Letter], bound: VertexSet) -> Option<VertexSet> {
    space
        .family()
        .atoms_below(bound)
        .into_iter()
        .find(|&y| is_subset(x, space.image(y, word)))
}

/// Smallest family member `A ⊆ bound` with `r(A, a) ⊇ target`, when `target`
/// is a family member; `None` when no such member exists.
pub fn min_preimage(space: &LabelledSpace, target: VertexSet, a: Letter, bound: VertexSet) -> Option<VertexSet> {
    let candidates = space.family().atoms_below(bound);
    let mut out = 0;
    for z in space.family().atoms_below(target) {
        let y = candidates.iter().copied().find(|&y| is_subset(z, space.image(y, &[a])))?;
        out |= y;
    }
    Some(out)
}

fn check_letter(space: &LabelledSpace, a: Letter) -> Result<()> {
    if (a as usize) < space.alphabet_size() {
        Ok(())
    } else {
        input(format!("letter index {a} outside the alphabet"))
    }
}

fn is_atom(space: &LabelledSpace, x: VertexSet) -> bool {
    space.family().all_atoms().contains(&x)
}

/// Checks `xₙ₊₁ ⊆ r(xₙ, αₙ₊₁)` along `pairs` and returns the derived bottom.
fn chain_bottom(space: &LabelledSpace, pairs: &[Pair]) -> Result<Option<VertexSet>> {
    let mut prev_word: Word = Vec::new();
    for (i, &(a, x)) in pairs.iter().enumerate() {
        check_letter(space, a)?;
        if !is_atom(space, x) {
            return input(format!("{} is not an atom of the family", space.fmt_set(x)));
        }
        prev_word.push(a);
        if !is_subset(x, space.range(&prev_word)) {
            return input(format!("{} is not below r({})", space.fmt_set(x), space.fmt_word(&prev_word)));
        }
        if i > 0 {
            let (_, prev) = pairs[i - 1];
            if !is_subset(x, space.image(prev, &[a])) {
                return input(format!(
                    "atoms {} and {} are not compatible along {}",
                    space.fmt_set(prev),
                    space.fmt_set(x),
                    space.letter_char(a)
                ));
            }
        }
    }
    Ok(match pairs.first() {
        Some(&(a, x)) => predecessor(space, x, &[a], space.family().top()),
        None => None,
    })
}

impl TightFilter {
    /// The finite-type filter with word `word` and top atom `top`.
    pub fn finite(space: &LabelledSpace, word: &[Letter], top: VertexSet) -> Result<Self> {
        for &a in word {
            check_letter(space, a)?;
        }
        if !is_atom(space, top) || !is_subset(top, level_bound(space, word)) {
            return input(format!(
                "{} is not an atom below r({})",
                space.fmt_set(top),
                space.fmt_word(word)
            ));
        }
        if !is_subset(top, space.sinks()) {
            return input(format!("{} is not made of sinks, so the filter is not tight", space.fmt_set(top)));
        }
        let mut pairs = vec![(0, 0); word.len()];
        let mut x = top;
        for n in (1..=word.len()).rev() {
            pairs[n - 1] = (word[n - 1], x);
            // n - 1 ≥ 1 always has a predecessor because r(α₁..ₙ₋₁) is in the family.
            match predecessor(space, x, &[word[n - 1]], level_bound(space, &word[..n - 1])) {
                Some(y) => x = y,
                None if n == 1 => {
                    return Ok(Self { bottom: None, body: FilterBody::Finite(pairs) });
                }
                None => return Err(Error::Domain("family is not closed under ranges".into())),
            }
        }
        Ok(Self { bottom: Some(x), body: FilterBody::Finite(pairs) })
    }

    /// The infinite-type filter with pairs `prefix · period^∞`.
    pub fn infinite(space: &LabelledSpace, prefix: Vec<Pair>, period: Vec<Pair>) -> Result<Self> {
        if period.is_empty() {
            return input("the period of an infinite filter must be nonempty");
        }
        let (prefix, period) = canonical_periodic(prefix, period);
        // Two periods past the prefix cover every compatibility condition.
        let unrolled: Vec<Pair> = (0..prefix.len() + 2 * period.len())
            .map(|i| *periodic_at(&prefix, &period, i))
            .collect();
        let bottom = chain_bottom(space, &unrolled)?;
        let word: Vec<Letter> = unrolled.iter().map(|p| p.0).collect();
        let ep = EventuallyPeriodicWord::new(
            word[..prefix.len()].to_vec(),
            word[prefix.len()..prefix.len() + period.len()].to_vec(),
        )?;
        if !ep.is_labelled(space) {
            return input("the word is not a labelled path");
        }
        Ok(Self { bottom, body: FilterBody::Infinite { prefix, period } })
    }

    pub fn body(&self) -> &FilterBody {
        &self.body
    }

    pub fn bottom(&self) -> Option<VertexSet> {
        self.bottom
    }

    pub fn is_finite_type(&self) -> bool {
        matches!(self.body, FilterBody::Finite(_))
    }

    /// Number of letters for finite-type filters.
    pub fn length(&self) -> Option<usize> {
        match &self.body {
            FilterBody::Finite(p) => Some(p.len()),
            FilterBody::Infinite { .. } => None,
        }
    }

    /// Pair at level `n ≥ 1`.
    pub fn pair(&self, n: usize) -> Option<Pair> {
        assert!(n >= 1);
        match &self.body {
            FilterBody::Finite(p) => p.get(n - 1).copied(),
            FilterBody::Infinite { prefix, period } => Some(*periodic_at(prefix, period, n - 1)),
        }
    }

    /// Atom generating the ultrafilter at level `n`; `None` past a finite
    /// word or for an empty level-zero filter.
    pub fn atom(&self, n: usize) -> Option<VertexSet> {
        if n == 0 {
            self.bottom
        } else {
            self.pair(n).map(|p| p.1)
        }
    }

    pub fn letter(&self, n: usize) -> Option<Letter> {
        self.pair(n + 1).map(|p| p.0)
    }

    pub fn word(&self) -> FilterWord {
        match &self.body {
            FilterBody::Finite(p) => FilterWord::Finite(p.iter().map(|x| x.0).collect()),
            FilterBody::Infinite { prefix, period } => {
                let (pre, per) = canonical_periodic(
                    prefix.iter().map(|x| x.0).collect(),
                    period.iter().map(|x| x.0).collect(),
                );
                FilterWord::Infinite(EventuallyPeriodicWord { prefix: pre, period: per })
            }
        }
    }

    pub fn has_beginning(&self, beta: &[Letter]) -> bool {
        beta.iter().enumerate().all(|(i, &b)| self.letter(i) == Some(b))
    }

    /// Drops the first `k` levels; the atom at level `k` becomes the bottom.
    fn drop_levels(&self, k: usize) -> Self {
        let bottom = self.atom(k);
        let body = match &self.body {
            FilterBody::Finite(p) => FilterBody::Finite(p[k..].to_vec()),
            FilterBody::Infinite { prefix, period } => {
                if k <= prefix.len() {
                    FilterBody::Infinite { prefix: prefix[k..].to_vec(), period: period.clone() }
                } else {
                    let mut per = period.clone();
                    per.rotate_left((k - prefix.len()) % period.len());
                    FilterBody::Infinite { prefix: Vec::new(), period: per }
                }
            }
        };
        Self { bottom, body }
    }

    /// Prepends `pairs`, whose first atom determines the new bottom.
    fn prepend(&self, space: &LabelledSpace, pairs: Vec<Pair>) -> Self {
        let bottom = match pairs.first() {
            Some(&(a, x)) => predecessor(space, x, &[a], space.family().top()),
            None => self.bottom,
        };
        let body = match &self.body {
            FilterBody::Finite(p) => FilterBody::Finite([pairs, p.clone()].concat()),
            FilterBody::Infinite { prefix, period } => {
                let (prefix, period) = canonical_periodic([pairs, prefix.clone()].concat(), period.clone());
                FilterBody::Infinite { prefix, period }
            }
        };
        Self { bottom, body }
    }

    pub fn display(&self, space: &LabelledSpace) -> String {
        let fmt_opt = |x: Option<VertexSet>| x.map_or_else(|| "{}".to_string(), |s| space.fmt_set(s));
        let mut out = self.word().display(space);
        out.push_str(" : [");
        match &self.body {
            FilterBody::Finite(p) => {
                let atoms: Vec<String> =
                    std::iter::once(fmt_opt(self.bottom)).chain(p.iter().map(|x| space.fmt_set(x.1))).collect();
                out.push_str(&atoms.join(","));
                out.push(']');
            }
            FilterBody::Infinite { prefix, period } => {
                let atoms: Vec<String> = std::iter::once(fmt_opt(self.bottom))
                    .chain(prefix.iter().map(|x| space.fmt_set(x.1)))
                    .collect();
                out.push_str(&atoms.join(","));
                let per: Vec<String> = period.iter().map(|x| space.fmt_set(x.1)).collect();
                let _ = write!(out, "] ([{}])^inf", per.join(","));
            }
        }
        out
    }

    /// Parses the notation produced by [`TightFilter::display`].
    pub fn parse(space: &LabelledSpace, text: &str) -> Result<Self> {
        let (word_text, atoms_text) =
            text.split_once(':').ok_or_else(|| Error::Input("expected `word : [atoms]`".into()))?;
        let word_text = word_text.trim();
        let atoms_text = atoms_text.trim();
        let (atom_head, atom_period) = match atoms_text.split_once("] (") {
            Some((head, tail)) => {
                let tail = tail
                    .strip_suffix(")^inf")
                    .ok_or_else(|| Error::Input("atom period must end with `)^inf`".into()))?;
                (format!("{head}]"), Some(parse_set_list(space, tail)?))
            }
            None => (atoms_text.to_string(), None),
        };
        let head = parse_set_list(space, &atom_head)?;
        if head.is_empty() {
            return input("the atom list needs a level-zero entry");
        }
        let bottom = if head[0] == 0 { None } else { Some(head[0]) };
        let filter = match (parse_word_text(space, word_text)?, atom_period) {
            (FilterWord::Finite(w), None) => {
                if head.len() != w.len() + 1 {
                    return input("a finite word of length n needs n + 1 atoms");
                }
                Self::finite(space, &w, *head.last().unwrap())?
            }
            (FilterWord::Infinite(w), Some(per)) => {
                if per.is_empty() {
                    return input("empty atom period");
                }
                let atoms_pre = &head[1..];
                let p = w.prefix.len().max(atoms_pre.len());
                let q = lcm(w.period.len(), per.len());
                let pairs: Vec<Pair> =
                    (0..p + q).map(|i| (w.letter(i), *periodic_at(atoms_pre, &per, i))).collect();
                Self::infinite(space, pairs[..p].to_vec(), pairs[p..].to_vec())?
            }
            _ => return input("finite words take a plain atom list, infinite words a periodic one"),
        };
        if filter.bottom != bottom {
            return input(format!(
                "level-zero atom should be {}",
                filter.bottom.map_or("{}".to_string(), |s| space.fmt_set(s))
            ));
        }
        if let FilterBody::Finite(p) = &filter.body {
            if p.iter().zip(&head[1..]).any(|(x, &h)| x.1 != h) {
                return input("atom sequence is not compatible with the top atom");
            }
        }
        Ok(filter)
    }
}

fn parse_set_list(space: &LabelledSpace, text: &str) -> Result<Vec<VertexSet>> {
    let inner = text
        .trim()
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| Error::Input(format!("expected a bracketed set list, got {text:?}")))?;
    let mut out = Vec::new();
    let mut rest = inner.trim();
    while !rest.is_empty() {
        let rest_open = rest.strip_prefix('{').ok_or_else(|| Error::Input(format!("expected `{{` in {text:?}")))?;
        let close = rest_open.find('}').ok_or_else(|| Error::Input(format!("unclosed set in {text:?}")))?;
        out.push(space.parse_set_text(&rest_open[..close])?);
        rest = rest_open[close + 1..].trim_start().trim_start_matches(',').trim_start();
    }
    Ok(out)
}

/// Parses `word`, `ω`, or `prefix(period)^inf`.
pub fn parse_word_text(space: &LabelledSpace, text: &str) -> Result<FilterWord> {
    let text = text.trim();
    if let Some(body) = text.strip_suffix(")^inf") {
        let (pre, per) = body.split_once('(').ok_or_else(|| Error::Input("missing `(`".into()))?;
        let pre = if pre.is_empty() { Vec::new() } else { space.parse_word(pre)? };
        let per = space.parse_word(per)?;
        Ok(FilterWord::Infinite(EventuallyPeriodicWord::new(pre, per)?))
    } else if text.is_empty() || text == EMPTY_WORD {
        Ok(FilterWord::Finite(Vec::new()))
    } else {
        Ok(FilterWord::Finite(space.parse_word(text)?))
    }
}

// ---- ultrafilter surgery ----

fn require_path(space: &LabelledSpace, word: &[Letter]) -> Result<()> {
    if space.is_labelled_path(word) {
        Ok(())
    } else {
        Err(Error::Domain(format!("{} is not a labelled path", space.fmt_word(word))))
    }
}

fn require_ultrafilter(space: &LabelledSpace, f: &UltrafilterRep, word: &[Letter]) -> Result<()> {
    let bound = level_bound(space, word);
    if f.bound != bound || !is_atom(space, f.atom) || !is_subset(f.atom, bound) {
        return Err(Error::Domain(format!(
            "not an ultrafilter of the algebra at {}",
            space.fmt_word(word)
        )));
    }
    Ok(())
}

/// `f_{α[β]}`: from an ultrafilter at `αβ` to the ultrafilter (or the empty
/// filter, `None`) at `α`.
pub fn f_map(space: &LabelledSpace, f: &UltrafilterRep, alpha: &[Letter], beta: &[Letter]) -> Result<Option<UltrafilterRep>> {
    let whole = [alpha, beta].concat();
    require_path(space, &whole)?;
    require_ultrafilter(space, f, &whole)?;
    let bound = level_bound(space, alpha);
    Ok(predecessor(space, f.atom, beta, bound).map(|atom| UltrafilterRep { bound, atom }))
}

/// `g_{(α)β}`: from an ultrafilter at `β` containing `r(αβ)` to one at `αβ`.
pub fn g_map(space: &LabelledSpace, f: &UltrafilterRep, alpha: &[Letter], beta: &[Letter]) -> Result<UltrafilterRep> {
    require_ultrafilter(space, f, beta)?;
    let whole = [alpha, beta].concat();
    let bound = level_bound(space, &whole);
    if !is_subset(f.atom, bound) {
        return Err(Error::Domain(format!("r({}) is not in the filter", space.fmt_word(&whole))));
    }
    require_path(space, &whole)?;
    Ok(UltrafilterRep { bound, atom: f.atom & bound })
}

/// `h_{[α]β}`: from an ultrafilter at `αβ` to the ultrafilter at `β` it generates.
pub fn h_map(space: &LabelledSpace, f: &UltrafilterRep, alpha: &[Letter], beta: &[Letter]) -> Result<UltrafilterRep> {
    let whole = [alpha, beta].concat();
    require_path(space, &whole)?;
    require_ultrafilter(space, f, &whole)?;
    let bound = level_bound(space, beta);
    let atom = space
        .family()
        .atoms_below(bound)
        .into_iter()
        .find(|&z| is_subset(f.atom, z))
        .ok_or_else(|| Error::Domain("atom not covered at the cut level".into()))?;
    Ok(UltrafilterRep { bound, atom })
}

// ---- filter surgery ----

/// `ξ ∈ T_{(α)β}`: the bottom exists and lies in `r(α)`.
pub fn can_glue(space: &LabelledSpace, xi: &TightFilter, alpha: &[Letter]) -> bool {
    if alpha.is_empty() {
        return true;
    }
    xi.bottom.is_some_and(|x0| is_subset(x0, space.range(alpha)))
}

/// `G_{(α)β}`: prepends `α`.
pub fn glue(space: &LabelledSpace, xi: &TightFilter, alpha: &[Letter]) -> Result<TightFilter> {
    if alpha.is_empty() {
        return Ok(xi.clone());
    }
    for &a in alpha {
        check_letter(space, a)?;
    }
    if !can_glue(space, xi, alpha) {
        return Err(Error::Domain(format!(
            "the filter's level-zero set does not lie in r({})",
            space.fmt_word(alpha)
        )));
    }
    let mut x = xi.bottom.expect("checked by can_glue");
    let mut pairs = vec![(0, 0); alpha.len()];
    for n in (1..=alpha.len()).rev() {
        pairs[n - 1] = (alpha[n - 1], x);
        if n > 1 {
            x = predecessor(space, x, &[alpha[n - 1]], space.range(&alpha[..n - 1]))
                .ok_or_else(|| Error::Domain("family is not closed under ranges".into()))?;
        }
    }
    Ok(xi.prepend(space, pairs))
}

/// `H_{[α]β}`: removes the beginning `α`.
pub fn cut(xi: &TightFilter, alpha: &[Letter]) -> Result<TightFilter> {
    if !xi.has_beginning(alpha) {
        return Err(Error::Domain("the word does not begin with the cut".into()));
    }
    Ok(xi.drop_levels(alpha.len()))
}

/// `σⁿ`: cuts the first `n` letters.
pub fn shift(xi: &TightFilter, n: usize) -> Result<TightFilter> {
    if xi.length().is_some_and(|l| l < n) {
        return Err(Error::Domain(format!("cannot shift a word of length {} by {n}", xi.length().unwrap())));
    }
    Ok(xi.drop_levels(n))
}

// ---- membership ----

/// `(β, A, β) ∈ ξ`.
pub fn contains(xi: &TightFilter, e: &Triple) -> bool {
    match e {
        Triple::Zero => false,
        Triple::Elem { alpha, set, beta } => {
            alpha == beta && xi.has_beginning(beta) && xi.atom(beta.len()).is_some_and(|x| is_subset(x, *set))
        }
    }
}

/// Membership in the basic open set of filters containing `e` and none of `excluded`.
pub fn in_basic_open(xi: &TightFilter, e: &Triple, excluded: &[Triple]) -> bool {
    contains(xi, e) && !excluded.iter().any(|f| contains(xi, f))
}

// ---- classification ----

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Classification {
    TightFinite,
    TightInfinite,
    NotTight(String),
}

/// Minimum elements `m₀, m₁, …` of a filter's family, indexed by level and
/// given as `prefix · period^∞` (`period` empty for finite words).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyMinima {
    pub prefix: Vec<VertexSet>,
    pub period: Vec<VertexSet>,
}

/// Classifies the filter given by a word and its complete family of minima.
/// Fails when the data is not a filter at all.
pub fn classify(space: &LabelledSpace, word: &FilterWord, minima: &FamilyMinima) -> Result<Classification> {
    let at = |n: usize| *periodic_at(&minima.prefix, &minima.period, n);
    let levels = match word {
        FilterWord::Finite(w) => {
            if !minima.period.is_empty() || minima.prefix.len() != w.len() + 1 {
                return input("a finite word of length n needs n + 1 minima");
            }
            w.len() + 1
        }
        FilterWord::Infinite(w) => {
            if minima.period.is_empty() {
                return input("an infinite word needs a periodic family");
            }
            let start = w.prefix.len().max(minima.prefix.len());
            start + lcm(w.period.len(), minima.period.len()) + 1
        }
    };
    let letter = |i: usize| word.letter(i).expect("level within word");
    let mut beginning: Word = Vec::new();
    for n in 0..levels {
        if n > 0 {
            beginning.push(letter(n - 1));
        }
        let m = at(n);
        let bound = level_bound(space, &beginning);
        if !space.family().contains(m) || !is_subset(m, bound) {
            return input(format!("level {n} minimum is not in the restricted algebra"));
        }
        if n > 0 && m == 0 {
            return input(format!("level {n} is empty"));
        }
        if n + 1 < levels {
            let next = at(n + 1);
            let expected = min_preimage(space, next, letter(n), bound);
            match expected {
                Some(e) if e == m && (n == 0 || e != 0) => {}
                Some(0) if n == 0 && m == 0 => {}
                _ => return input(format!("levels {n} and {} do not form a complete family", n + 1)),
            }
        }
    }
    let atom_ok = |n: usize| (n == 0 && at(n) == 0) || is_atom(space, at(n));
    let non_atom = (0..levels).find(|&n| !atom_ok(n));
    match word {
        FilterWord::Infinite(_) => Ok(match non_atom {
            None => Classification::TightInfinite,
            Some(n) => Classification::NotTight(format!("level {n} is not an ultrafilter")),
        }),
        FilterWord::Finite(w) => {
            let top = at(w.len());
            if !is_atom(space, top) {
                return Ok(Classification::NotTight(format!("level {} is not an ultrafilter", w.len())));
            }
            if is_subset(top, space.sinks()) {
                Ok(Classification::TightFinite)
            } else {
                Ok(Classification::NotTight(format!(
                    "{} contains a vertex that emits edges and no sink set lies below it",
                    space.fmt_set(top)
                )))
            }
        }
    }
}

impl TightFilter {
    /// Minima of the filter's family, for use with [`classify`].
    pub fn minima(&self) -> FamilyMinima {
        let b = self.bottom.unwrap_or(0);
        match &self.body {
            FilterBody::Finite(p) => FamilyMinima {
                prefix: std::iter::once(b).chain(p.iter().map(|x| x.1)).collect(),
                period: Vec::new(),
            },
            FilterBody::Infinite { prefix, period } => FamilyMinima {
                prefix: std::iter::once(b).chain(prefix.iter().map(|x| x.1)).collect(),
                period: period.iter().map(|x| x.1).collect(),
            },
        }
    }
}

// ---- enumeration ----

/// All finite-type tight filters with `|word| ≤ max_prefix` and all
/// infinite-type filters with pair prefix `≤ max_prefix` and pair period
/// `≤ max_period`, sorted and deduplicated.
pub fn enumerate_tight(space: &LabelledSpace, max_prefix: usize, max_period: usize) -> Vec<TightFilter> {
    let mut out = BTreeSet::new();
    let sinks = space.sinks();
    for alpha in space.labelled_paths_up_to(max_prefix) {
        let bound = level_bound(space, &alpha);
        for x in space.family().atoms_below(bound & sinks) {
            if let Ok(f) = TightFilter::finite(space, &alpha, x) {
                out.insert(f);
            }
        }
    }
    if max_period > 0 {
        let mut walk = Vec::new();
        extend_walks(space, &mut walk, max_prefix + max_period, max_prefix, max_period, &mut out);
    }
    out.into_iter().collect()
}

fn successors(space: &LabelledSpace, last: Option<Pair>) -> Vec<Pair> {
    let mut out = Vec::new();
    for a in space.letters() {
        let target = match last {
            None => space.range(&[a]),
            Some((_, x)) => space.image(x, &[a]),
        };
        if target == 0 {
            continue;
        }
        for y in space.family().atoms_below(space.family().top()) {
            if is_subset(y, target) {
                out.push((a, y));
            }
        }
    }
    out
}

fn extend_walks(
    space: &LabelledSpace,
    walk: &mut Vec<Pair>,
    max_len: usize,
    max_prefix: usize,
    max_period: usize,
    out: &mut BTreeSet<TightFilter>,
) {
    let d = walk.len();
    if d > 0 {
        let (_, last) = walk[d - 1];
        for p in d.saturating_sub(max_period)..d.min(max_prefix + 1) {
            let (a, x) = walk[p];
            if is_subset(x, space.image(last, &[a])) {
                if let Ok(f) = TightFilter::infinite(space, walk[..p].to_vec(), walk[p..].to_vec()) {
                    out.insert(f);
                }
            }
        }
    }
    if d == max_len {
        return;
    }
    for next in successors(space, walk.last().copied()) {
        walk.push(next);
        extend_walks(space, walk, max_len, max_prefix, max_period, out);
        walk.pop();
    }
}

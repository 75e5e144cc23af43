//! The labelled space of an SFT truncated at a block depth, and the Stone
//! correspondence between its tight filters and points of the shift.

use std::collections::BTreeSet;

use crate::error::{input, Error, Result};
use crate::lspace::{space_from_edges, LabelledSpace, Letter, Word};
use crate::setalg::{UltrafilterRep, VertexSet};
use crate::tight::{Pair, TightFilter};

use super::clopen::{cset, cylinder, follower, ClopenSet};
use super::sft::Sft;
use super::{fmt_letters, Point, ShiftSystem};

/// The labelled space whose vertices are the extendable words of length
/// `depth`, with an edge `w → w[1..]·c` labelled `w[0]` whenever `w·c` is
/// extendable, and the powerset family.
#[derive(Debug, Clone)]
pub struct Truncation {
    depth: usize,
    blocks: Vec<Word>,
    space: LabelledSpace,
    /// Shift letter index to space letter index.
    letter_map: Vec<Option<Letter>>,
}

impl Truncation {
    pub fn new(sft: &Sft, depth: usize) -> Result<Self> {
        if depth < sft.block_len() {
            return input(format!("truncation depth must be at least {}", sft.block_len()));
        }
        let blocks: Vec<Word> = sft.language(depth).into_iter().filter(|w| w.len() == depth).collect();
        if blocks.is_empty() {
            return input("the shift is empty");
        }
        let names: Vec<String> = blocks.iter().map(|w| fmt_letters(sft.letters(), w)).collect();
        let mut edges = Vec::new();
        for (w, name) in blocks.iter().zip(&names) {
            for c in 0..sft.letters().len() as Letter {
                let wc = [w.as_slice(), &[c]].concat();
                if sft.is_extendable(&wc) {
                    let target = fmt_letters(sft.letters(), &wc[1..]);
                    edges.push((name.clone(), sft.letters()[w[0] as usize], target));
                }
            }
        }
        let name_refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let edge_refs: Vec<(&str, char, &str)> = edges.iter().map(|(s, c, t)| (s.as_str(), *c, t.as_str())).collect();
        let space = space_from_edges(&name_refs, &edge_refs, None)?;
        let letter_map = sft.letters().iter().map(|&c| space.letter_index(c)).collect();
        Ok(Self { depth, blocks, space, letter_map })
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn space(&self) -> &LabelledSpace {
        &self.space
    }

    pub fn blocks(&self) -> &[Word] {
        &self.blocks
    }

    /// Translates a shift word into the space's letters.
    pub fn space_word(&self, w: &[Letter]) -> Result<Word> {
        w.iter()
            .map(|&a| self.letter_map[a as usize].ok_or_else(|| Error::Domain("letter outside the language".into())))
            .collect()
    }

    /// Translates a space word back into shift letters.
    pub fn shift_word(&self, w: &[Letter]) -> Word {
        w.iter()
            .map(|&a| self.letter_map.iter().position(|&m| m == Some(a)).expect("letters correspond") as Letter)
            .collect()
    }

    pub fn block_index(&self, w: &[Letter]) -> Option<usize> {
        self.blocks.binary_search_by(|b| b.as_slice().cmp(w)).ok()
    }

    pub fn to_vertex_set(&self, sft: &Sft, set: &ClopenSet) -> Result<VertexSet> {
        if set.depth() > self.depth {
            return Err(Error::TooLarge(format!("clopen set of depth {} above the truncation", set.depth())));
        }
        Ok(set
            .words_at(sft, self.depth)
            .iter()
            .map(|w| 1u64 << self.block_index(w).expect("extendable blocks are vertices"))
            .fold(0, |acc, b| acc | b))
    }

    pub fn to_clopen(&self, sft: &Sft, set: VertexSet) -> ClopenSet {
        ClopenSet::from_words(sft, self.depth, crate::setalg::members(set).map(|i| self.blocks[i].clone()))
    }

    /// Vertex of the block `x[..depth]`.
    pub fn block_of(&self, x: &Point) -> Option<VertexSet> {
        self.block_index(&x.take(self.depth)).map(|i| 1u64 << i)
    }
}

/// The principal ultrafilter `{A : y ∈ A}` of the clopen algebra.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointFilter {
    point: Point,
}

impl PointFilter {
    pub fn new(sft: &Sft, point: Point) -> Result<Self> {
        if !sft.point_in(&point) {
            return input("the point is not in the shift");
        }
        Ok(Self { point })
    }

    pub fn contains(&self, set: &ClopenSet) -> bool {
        set.contains_point(&self.point)
    }

    pub fn point(&self) -> &Point {
        &self.point
    }
}

/// `σ̃(F)`: generated by `r(A, y₀)` for `A ∈ F`; for the filter of `y` this
/// is the filter of `σ(y)`.
pub fn sigma_tilde(f: &PointFilter) -> PointFilter {
    PointFilter { point: f.point.shift(1) }
}

/// The unique `y ∈ F_α` whose cylinders meet `F_α` inside `F`, read off
/// one letter at a time and closed up when the shifted filter repeats.
pub fn filter_to_point(sft: &Sft, f: &PointFilter, alpha: &[Letter]) -> Result<Point> {
    let f_alpha = follower(sft, alpha)?;
    if !f.contains(&f_alpha) {
        return Err(Error::Domain("F_α is not in the filter".into()));
    }
    let mut letters = Vec::new();
    let mut seen: Vec<PointFilter> = Vec::new();
    let mut current = f.clone();
    loop {
        if let Some(start) = seen.iter().position(|g| *g == current) {
            return Point::new(letters[..start].to_vec(), letters[start..].to_vec());
        }
        seen.push(current.clone());
        let prefix_with = |b: Letter| [letters.as_slice(), &[b]].concat();
        let next = (0..sft.letters().len() as Letter)
            .find(|&b| {
                cylinder(sft, &prefix_with(b)).is_ok_and(|z| f.contains(&z.meet(sft, &f_alpha)))
            })
            .ok_or_else(|| Error::Domain("no cylinder in the filter".into()))?;
        letters.push(next);
        current = sigma_tilde(&current);
    }
}

/// The ultrafilter of `y` in the truncated algebra below `F_α`.
pub fn point_to_filter(sft: &Sft, t: &Truncation, y: &Point, alpha: &[Letter]) -> Result<UltrafilterRep> {
    if !sft.prefixed_point_in(alpha, y) {
        return Err(Error::Domain("the point is not in F_α".into()));
    }
    let bound = t.to_vertex_set(sft, &follower(sft, alpha)?)?;
    let atom = t.block_of(y).ok_or_else(|| Error::Domain("point block missing".into()))?;
    Ok(UltrafilterRep { bound, atom })
}

/// `Φ(ξ) = ξ₀`, as the filter of the point spelled by the word of `ξ`.
pub fn stone_phi(sft: &Sft, t: &Truncation, xi: &TightFilter) -> Result<PointFilter> {
    let crate::tight::FilterWord::Infinite(w) = xi.word() else {
        return Err(Error::Domain("the truncation has no sinks, so tight filters have infinite words".into()));
    };
    let y = Point::new(t.shift_word(&w.prefix), t.shift_word(&w.period))?;
    let levels = match xi.body() {
        crate::tight::FilterBody::Infinite { prefix, period } => prefix.len() + period.len() + 1,
        crate::tight::FilterBody::Finite(_) => unreachable!(),
    };
    for n in 0..=levels {
        if xi.atom(n) != t.block_of(&y.shift(n)) {
            return Err(Error::Domain(format!("level {n} is not the block of the shifted word")));
        }
    }
    PointFilter::new(sft, y)
}

/// `Ψ(F)`: the tight filter whose level-`n` ultrafilter is generated by the
/// block of `σ̃ⁿ(F)`, found by querying cylinders.
pub fn stone_psi(sft: &Sft, t: &Truncation, f: &PointFilter) -> Result<TightFilter> {
    let mut filters: Vec<PointFilter> = Vec::new();
    let mut current = f.clone();
    let repeat_at = loop {
        if let Some(i) = filters.iter().position(|g| *g == current) {
            break i;
        }
        filters.push(current.clone());
        current = sigma_tilde(&current);
    };
    let atom_of = |g: &PointFilter| -> Result<(Letter, VertexSet)> {
        for (i, w) in t.blocks().iter().enumerate() {
            if g.contains(&cylinder(sft, w)?) {
                return Ok((t.space_word(&w[..1])?[0], 1u64 << i));
            }
        }
        Err(Error::Domain("no block cylinder in the filter".into()))
    };
    let atoms: Vec<(Letter, VertexSet)> = filters.iter().map(atom_of).collect::<Result<_>>()?;
    // Level n ≥ 1 pairs the letter read at level n − 1 with the atom at level n.
    let q = filters.len() - repeat_at;
    let pair = |n: usize| -> Pair {
        let idx = |m: usize| if m < filters.len() { m } else { repeat_at + (m - repeat_at) % q };
        (atoms[idx(n - 1)].0, atoms[idx(n)].1)
    };
    let pairs: Vec<Pair> = (1..=repeat_at + 1 + q).map(pair).collect();
    TightFilter::infinite(t.space(), pairs[..repeat_at + 1].to_vec(), pairs[repeat_at + 1..].to_vec())
}

/// Outcome of an exhaustive identity check.
#[derive(Debug, Clone, Default)]
pub struct IdentityReport {
    pub checks: usize,
    pub failures: Vec<String>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn cset_or_empty(sft: &Sft, alpha: &[Letter], beta: &[Letter]) -> ClopenSet {
    cset(sft, alpha, beta).unwrap_or_else(|_| ClopenSet::empty())
}

/// `C(αβ, ω) ∩ C(γ, δ) = r(C(α, ω) ∩ C(γ, βδ), β)` for all words of the
/// language up to `max_len`, which makes `r(·, β)` onto the algebra at `αβ`.
pub fn check_onto_identity(sft: &Sft, max_len: usize) -> IdentityReport {
    let mut report = IdentityReport::default();
    let words = sft.language(max_len);
    for alpha in &words {
        for beta in &words {
            let ab = [alpha.as_slice(), beta].concat();
            if !sft.is_extendable(&ab) {
                continue;
            }
            for gamma in &words {
                for delta in &words {
                    report.checks += 1;
                    let lhs = cset_or_empty(sft, &ab, &[]).meet(sft, &cset_or_empty(sft, gamma, delta));
                    let inner = cset_or_empty(sft, alpha, &[])
                        .meet(sft, &cset_or_empty(sft, gamma, &[beta.as_slice(), delta].concat()));
                    let rhs = inner.rel_range(sft, beta).unwrap_or_else(|_| ClopenSet::empty());
                    if lhs != rhs {
                        let f = |w: &[Letter]| fmt_letters(sft.letters(), w);
                        report.failures.push(format!(
                            "α={} β={} γ={} δ={}",
                            f(alpha),
                            f(beta),
                            f(gamma),
                            f(delta)
                        ));
                    }
                }
            }
        }
    }
    report
}

/// Atoms of the algebra below `F_α` at `depth`: the nonempty `Z_w ∩ F_α`.
fn atoms_below_follower(sft: &Sft, alpha: &[Letter], depth: usize) -> Vec<(Word, ClopenSet)> {
    let fa = cset_or_empty(sft, alpha, &[]);
    fa.words_at(sft, depth.max(fa.depth()))
        .into_iter()
        .map(|w| {
            let a = cylinder(sft, &w).expect("extendable").meet(sft, &fa);
            (w, a)
        })
        .collect()
}

/// For every atom `Z_w ∩ F_α` of depth `depth` lying in `Z_β`, exactly one
/// atom `G` of depth `depth − |β|` below `F_{αβ}` satisfies `G ⊆ r(Z_w ∩ F_α, β)`.
pub fn check_unique_lift(sft: &Sft, max_len: usize, depth: usize) -> IdentityReport {
    let mut report = IdentityReport::default();
    let words = sft.language(max_len);
    for alpha in &words {
        for beta in &words {
            let ab = [alpha.as_slice(), beta].concat();
            if !sft.is_extendable(&ab) || beta.len() > depth {
                continue;
            }
            let upper = atoms_below_follower(sft, &ab, depth - beta.len());
            for (w, atom) in atoms_below_follower(sft, alpha, depth) {
                if !w.starts_with(beta) {
                    continue;
                }
                report.checks += 1;
                let image = atom.rel_range(sft, beta).expect("β in language");
                let lifts = upper.iter().filter(|(_, g)| !g.is_empty() && g.is_subset(sft, &image)).count();
                if lifts != 1 {
                    let f = |x: &[Letter]| fmt_letters(sft.letters(), x);
                    report.failures.push(format!("α={} β={} w={}: {lifts} lifts", f(alpha), f(beta), f(&w)));
                }
            }
        }
    }
    report
}

/// `Φ∘Ψ = id` on the point filters of points of size `≤ size`, and
/// `Ψ∘Φ = id` on the tight filters of the truncation with prefix and period
/// `≤ size`.
pub fn check_stone_round_trip(sft: &Sft, t: &Truncation, size: usize) -> IdentityReport {
    let mut report = IdentityReport::default();
    for y in sft.points_up_to(size) {
        report.checks += 1;
        let f = PointFilter::new(sft, y.clone()).expect("enumerated points lie in the shift");
        let back = stone_psi(sft, t, &f).and_then(|xi| stone_phi(sft, t, &xi));
        if back.as_ref() != Ok(&f) {
            report.failures.push(format!("Φ(Ψ(F)) ≠ F for {}", y.display(sft.letters())));
        }
    }
    for xi in crate::tight::enumerate_tight(t.space(), size, size) {
        report.checks += 1;
        let back = stone_phi(sft, t, &xi).and_then(|f| stone_psi(sft, t, &f));
        if back.as_ref() != Ok(&xi) {
            report.failures.push(format!("Ψ(Φ(ξ)) ≠ ξ for {}", xi.display(t.space())));
        }
    }
    report
}

/// The truncated space's relative ranges agree with those of the clopen algebra.
pub fn check_truncation_ranges(sft: &Sft, t: &Truncation) -> IdentityReport {
    let mut report = IdentityReport::default();
    let space = t.space();
    let all: BTreeSet<VertexSet> = space.family().elements().into_iter().collect();
    for &set in &all {
        let clopen = t.to_clopen(sft, set);
        for a in sft.effective_alphabet() {
            report.checks += 1;
            let expected = clopen.rel_range(sft, &[a]).and_then(|c| t.to_vertex_set(sft, &c));
            let got = space.image(set, &t.space_word(&[a]).expect("effective letter"));
            if expected.as_ref() != Ok(&got) {
                report.failures.push(format!("r({}, {}) differs", space.fmt_set(set), sft.letters()[a as usize]));
            }
        }
    }
    report
}

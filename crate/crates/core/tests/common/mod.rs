//! Shared corpora and brute-force oracles for the integration tests.
#![allow(dead_code)]

pub mod criteria;


use std::collections::{BTreeSet, VecDeque};


use lsimp_core::lspace::{running_example, LabelledGraph, LabelledSpace, Letter, Word};
use lsimp_core::setalg::{is_subset, members, FiniteSetAlgebra, VertexSet};
use lsimp_core::shift::{Point, ShiftSystem, Sft};
use proptest::test_runner::Config;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const CORPUS_SEED: u64 = 0x5eed_1abe;
pub const RANDOM_SPACES: usize = 50;
pub const SFT_SEED: u64 = 0x5f7_0001;
pub const RANDOM_SFTS: usize = 200;

/// Proptest settings without failure files next to the test sources.
pub fn proptest_config(cases: u32) -> Config {
    Config { cases, failure_persistence: None, ..Config::default() }
}

fn graph(n: usize, edges: &[(usize, char, usize)]) -> LabelledGraph {
    let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let named: Vec<(String, char, String)> =
        edges.iter().map(|&(s, c, t)| (names[s].clone(), c, names[t].clone())).collect();
    LabelledGraph::new(names, &named).expect("generated graph is well formed")
}

/// The family generated by all ranges and closed under one-letter
/// relative ranges of its atoms.
fn range_closed_family(g: &LabelledGraph) -> Option<FiniteSetAlgebra> {
    let letters: Vec<Letter> = (0..g.letters().len() as Letter).collect();
    let mut gens: Vec<VertexSet> = letters.iter().map(|&a| g.step(g.vertices(), a)).filter(|&s| s != 0).collect();
    loop {
        let alg = FiniteSetAlgebra::close_generators(g.vertex_count(), &gens).ok()?;
        let extra: Vec<VertexSet> = alg
            .all_atoms()
            .iter()
            .flat_map(|&x| letters.iter().map(move |&a| g.step(x, a)))
            .filter(|&s| s != 0 && !alg.contains(s))
            .collect();
        if extra.is_empty() {
            return Some(alg);
        }
        gens.extend(extra);
    }
}

/// A random normal labelled space with at most 6 vertices and 4 letters.
/// Each target gets at most one incoming edge per letter, plus occasional
/// extra edges that only a coarser family can accommodate.
pub fn random_space(rng: &mut impl Rng) -> LabelledSpace {
    const LETTERS: [char; 4] = ['a', 'b', 'c', 'd'];
    loop {
        let n = rng.gen_range(1..=6);
        let m = rng.gen_range(1..=4);
        let mut edges = Vec::new();
        for &c in &LETTERS[..m] {
            for t in 0..n {
                if rng.gen_bool(0.55) {
                    edges.push((rng.gen_range(0..n), c, t));
                }
                if rng.gen_bool(0.08) {
                    edges.push((rng.gen_range(0..n), c, t));
                }
            }
        }
        if edges.is_empty() {
            continue;
        }
        let g = graph(n, &edges);
        let family = if rng.gen_bool(0.5) {
            FiniteSetAlgebra::powerset(n).ok()
        } else {
            range_closed_family(&g)
        };
        let Some(family) = family else { continue };
        if let Ok(space) = LabelledSpace::validated(g, family) {
            return space;
        }
    }
}

/// The running example followed by the seeded random spaces.
pub fn space_corpus() -> Vec<LabelledSpace> {
    let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED);
    std::iter::once(running_example()).chain((0..RANDOM_SPACES).map(|_| random_space(&mut rng))).collect()
}

/// A random nonempty SFT over 2 or 3 letters with forbidden words of length at most 3.
pub fn random_sft(rng: &mut impl Rng) -> Sft {
    const LETTERS: [char; 3] = ['a', 'b', 'c'];
    loop {
        let n = rng.gen_range(2..=3);
        let count = rng.gen_range(0..=5);
        let forbidden: Vec<String> = (0..count)
            .map(|_| {
                let len = rng.gen_range(1..=3);
                (0..len).map(|_| LETTERS[rng.gen_range(0..n)]).collect()
            })
            .collect();
        if let Ok(sft) = Sft::from_strings(&LETTERS[..n], &forbidden) {
            if !sft.is_empty() {
                return sft;
            }
        }
    }
}

pub fn sft_corpus() -> Vec<Sft> {
    let mut rng = ChaCha8Rng::seed_from_u64(SFT_SEED);
    (0..RANDOM_SFTS).map(|_| random_sft(&mut rng)).collect()
}

pub fn golden_mean() -> Sft {
    Sft::from_strings(&['a', 'b'], &["bb"]).unwrap()
}

pub fn full_shift(n: usize) -> Sft {
    let letters: Vec<char> = "abcdefgh".chars().take(n).collect();
    Sft::from_strings(&letters, &[] as &[&str]).unwrap()
}

// ---- brute-force oracles ----

/// Regular in the direct sense: every nonempty family member below `set` emits an edge.
fn brute_regular(space: &LabelledSpace, set: VertexSet, elements: &[VertexSet]) -> bool {
    elements
        .iter()
        .filter(|&&b| b != 0 && is_subset(b, set))
        .all(|&b| space.letters().any(|a| space.image(b, &[a]) != 0))
}

/// Whether the family members below `top` form a hereditary saturated set,
/// checked against every member and letter.
fn brute_is_hs(space: &LabelledSpace, elements: &[VertexSet], top: VertexSet) -> bool {
    let inside = |s: VertexSet| is_subset(s, top);
    let hereditary = elements
        .iter()
        .filter(|&&a| inside(a))
        .all(|&a| space.letters().all(|l| inside(space.image(a, &[l]))));
    let saturated = elements.iter().all(|&a| {
        inside(a) || !brute_regular(space, a, elements) || !space.letters().all(|l| inside(space.image(a, &[l])))
    });
    hereditary && saturated
}

/// Whether the members of `elements` selected by `mask` form a
/// hereditary saturated set, with every closure rule checked literally.
fn brute_mask_is_hs(space: &LabelledSpace, elements: &[VertexSet], mask: u32) -> bool {
    let index = |s: VertexSet| elements.iter().position(|&e| e == s);
    let inside = |s: VertexSet| index(s).is_some_and(|i| mask >> i & 1 == 1);
    let chosen: Vec<VertexSet> = (0..elements.len()).filter(|&i| mask >> i & 1 == 1).map(|i| elements[i]).collect();
    if !inside(0) {
        return false;
    }
    let unions = chosen.iter().all(|&a| chosen.iter().all(|&b| inside(a | b)));
    let downward = chosen.iter().all(|&a| elements.iter().all(|&b| !is_subset(b, a) || inside(b)));
    let ranges = chosen.iter().all(|&a| space.letters().all(|l| inside(space.image(a, &[l]))));
    let saturated = elements.iter().all(|&a| {
        inside(a) || !brute_regular(space, a, elements) || !space.letters().all(|l| inside(space.image(a, &[l])))
    });
    unions && downward && ranges && saturated
}

/// Smallest hereditary saturated set containing each family member, by
/// scanning every subset of a family of at most 16 members. Returns
/// `(generator, members of the closure)`.
pub fn brute_hs_closures(space: &LabelledSpace) -> Vec<(VertexSet, BTreeSet<VertexSet>)> {
    let elements = space.family().elements();
    assert!(elements.len() <= 16, "exhaustive search needs at most 16 members");
    let all_hs: Vec<u32> =
        (0..1u32 << elements.len()).filter(|&m| brute_mask_is_hs(space, &elements, m)).collect();
    elements
        .iter()
        .enumerate()
        .map(|(i, &g)| {
            let smallest = all_hs.iter().filter(|&&m| m >> i & 1 == 1).fold(u32::MAX, |acc, &m| acc & m);
            let set = (0..elements.len()).filter(|&j| smallest >> j & 1 == 1).map(|j| elements[j]).collect();
            (g, set)
        })
        .collect()
}

/// Same answer for larger families, testing only principal ideals (a family
/// subset closed under unions and subsets is one). Returns `(generator, top)`.
pub fn brute_hs_closure_tops(space: &LabelledSpace) -> Vec<(VertexSet, VertexSet)> {
    let elements = space.family().elements();
    let tops: Vec<VertexSet> = elements.iter().copied().filter(|&t| brute_is_hs(space, &elements, t)).collect();
    elements
        .iter()
        .map(|&g| {
            let smallest =
                tops.iter().copied().filter(|&t| is_subset(g, t)).fold(space.family().top(), |acc, t| acc & t);
            (g, smallest)
        })
        .collect()
}

/// `Cost(P, x)` by direct search: `γ` is grown from the right over
/// windows of `γy` of the forbidden length, testing membership by factor scan.
pub fn brute_cost(sft: &Sft, past: &[Word], x: &Point, horizon: usize) -> Option<usize> {
    let m = sft.memory().max(1);
    // Whether `β·z` lies in the shift depends on the first `M` letters of `z` only.
    let letters = sft.letters().len() as Letter;
    let fits = |z: &Point| past.iter().all(|b| sft.prefixed_point_in(b, z));
    let mut best: Option<usize> = None;
    for i in 0..=horizon.min(x.prefix().len() + x.period().len()) {
        let y = x.shift(i);
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::from([(y.clone(), 0usize)]);
        while let Some((z, j)) = queue.pop_front() {
            if best.is_some_and(|b| i + j >= b) || i + j > horizon {
                break;
            }
            if fits(&z) {
                best = Some(i + j);
                break;
            }
            for a in 0..letters {
                if sft.prefixed_point_in(&[a], &z) {
                    let next = z.prepend(&[a]);
                    if seen.insert(next.take(m)) {
                        queue.push_back((next, j + 1));
                    }
                }
            }
        }
    }
    best
}

/// Strongly connected and not a single cycle, over the live-block graph of a
/// memory-two shift, read from the successor sets.
pub fn live_graph_shape(sft: &Sft) -> (bool, bool) {
    let n = sft.live().len();
    let reach = |start: usize| {
        let mut seen = 1u64 << start;
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            for w in members(sft.successors(u)) {
                if seen >> w & 1 == 0 {
                    seen |= 1 << w;
                    stack.push(w);
                }
            }
        }
        seen
    };
    let irreducible = (0..n).all(|u| reach(u) == sft.all_live());
    let single_cycle = (0..n).all(|u| sft.successors(u).count_ones() == 1);
    (irreducible, irreducible && single_cycle)
}

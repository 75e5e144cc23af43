//! The ten acceptance checks, shared by the acceptance runner and the
//! integration tests.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::time::{Duration, Instant};

use lsimp_core::gpd::{enumerate_elements, theta, GammaElement};
use lsimp_core::invsemi::{idempotent_leq, idempotents_up_to, product, triples_up_to, Triple};
use lsimp_core::lspace::{running_example, space_from_edges, LabelledSpace, Word};
use lsimp_core::paction::{has_nontrivial_isotropy, shift_equality_isotropy, verify_partial_action_axioms};
use lsimp_core::shift::bridge::{check_onto_identity, check_stone_round_trip, check_unique_lift, Truncation};
use lsimp_core::shift::dynamics::{sft_condition_l, sft_hyper_cofinal, Cost};
use lsimp_core::shift::verdict::{counterexample_report, shift_simplicity, NAIVE_DEPTH};
use lsimp_core::shift::{counterexample_shift, Decision, Sft, ShiftSystem, Subshift};
use lsimp_core::simp::{condition_lb, hereditary_saturated_closure, simplicity_verdict};
use lsimp_core::tight::{can_glue, cut, enumerate_tight, glue, shift, TightFilter};

use super::{
    brute_cost, brute_hs_closure_tops, brute_hs_closures, full_shift, golden_mean, sft_corpus, space_corpus,
};

const SHOWN_FAILURES: usize = 5;

/// Checks performed and failures found by one criterion.
#[derive(Debug, Default)]
pub struct Outcome {
    pub checks: usize,
    pub failures: Vec<String>,
    pub elapsed: Duration,
    pub budget: Option<Duration>,
}

impl Outcome {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn absorb(&mut self, checks: usize, failures: impl IntoIterator<Item = String>) {
        self.checks += checks;
        self.failures.extend(failures);
    }

    pub fn within_budget(&self) -> bool {
        self.budget.is_none_or(|b| self.elapsed <= b)
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.within_budget()
    }

    /// Panics with the first few failures.
    pub fn assert_passed(&self) {
        assert!(
            self.failures.is_empty(),
            "{} of {} checks failed, first: {:#?}",
            self.failures.len(),
            self.checks,
            &self.failures[..self.failures.len().min(SHOWN_FAILURES)]
        );
    }

    pub fn summary(&self) -> String {
        let mut s = format!("{} checks, {} failures, {:.2?}", self.checks, self.failures.len(), self.elapsed);
        if let Some(b) = self.budget {
            s.push_str(&format!(" (budget {b:?})"));
        }
        if let Some(first) = self.failures.first() {
            s.push_str(&format!("; first failure: {first}"));
        }
        s
    }
}

fn timed(budget: Option<Duration>, body: impl FnOnce(&mut Outcome)) -> Outcome {
    let start = Instant::now();
    let mut out = Outcome { budget, ..Outcome::default() };
    body(&mut out);
    out.elapsed = start.elapsed();
    out
}

fn triple_text(space: &LabelledSpace, t: &Triple) -> String {
    t.display(space)
}

/// Splits a triple into the triples over the atoms below its set.
fn atomic_parts(space: &LabelledSpace, t: &Triple) -> Vec<Triple> {
    match t {
        Triple::Zero => vec![],
        Triple::Elem { alpha, set, beta } => space
            .family()
            .atoms_below(*set)
            .into_iter()
            .map(|x| Triple::Elem { alpha: alpha.clone(), set: x, beta: beta.clone() })
            .collect(),
    }
}

/// Joins triples sharing both words; `None` if the words differ.
fn join(parts: &[Triple]) -> Option<Triple> {
    let mut out = Triple::Zero;
    for p in parts {
        out = match (out, p) {
            (Triple::Zero, p) => p.clone(),
            (acc, Triple::Zero) => acc,
            (Triple::Elem { alpha, set, beta }, Triple::Elem { alpha: a2, set: s2, beta: b2 }) => {
                if alpha != *a2 || beta != *b2 {
                    return None;
                }
                Triple::Elem { alpha, set: set | s2, beta }
            }
        };
    }
    Some(out)
}

/// Distinct triples numbered in order of appearance.
#[derive(Default)]
struct Interner {
    ids: HashMap<Triple, usize>,
    values: Vec<Triple>,
}

impl Interner {
    fn intern(&mut self, t: Triple) -> usize {
        if let Some(&id) = self.ids.get(&t) {
            return id;
        }
        self.values.push(t.clone());
        self.ids.insert(t, self.values.len() - 1);
        self.values.len() - 1
    }
}

/// `(st)u = s(tu)` for every triple drawn from `elements`. Products are
/// interned, so each distinct value of `st` or `tu` is multiplied by each
/// element once and the triple loop only compares indices.
fn associativity(space: &LabelledSpace, elements: &[Triple], out: &mut Outcome) {
    let n = elements.len();
    let mut table = Interner::default();
    let pairs: Vec<Vec<usize>> = elements
        .iter()
        .map(|x| elements.iter().map(|y| table.intern(product(space, x, y))).collect())
        .collect();
    let distinct = table.values.clone();
    // times_element[d][k] = value d times element k; element_times[i][d] = element i times value d.
    let times_element: Vec<Vec<usize>> =
        distinct.iter().map(|d| elements.iter().map(|u| table.intern(product(space, d, u))).collect()).collect();
    let element_times: Vec<Vec<usize>> =
        elements.iter().map(|s| distinct.iter().map(|d| table.intern(product(space, s, d))).collect()).collect();
    for i in 0..n {
        for j in 0..n {
            let left = &times_element[pairs[i][j]];
            let (right, tus) = (&element_times[i], &pairs[j]);
            let bad = (0..n).filter(|&k| left[k] != right[tus[k]]);
            for k in bad {
                out.failures.push(format!(
                    "(st)u ≠ s(tu) for s={} t={} u={}",
                    triple_text(space, &elements[i]),
                    triple_text(space, &elements[j]),
                    triple_text(space, &elements[k])
                ));
            }
            out.checks += n;
        }
    }
}

/// Inverse semigroup laws for word length at most 2.
///
/// `s s* s = s`, `(s*)* = s` and distributivity of the product over the set
/// component run over all pairs. Associativity then runs over all triples
/// whose set component is an atom, which covers every triple by
/// distributivity. Idempotents commute and their order agrees with `pq = p`.
pub fn inverse_semigroup(spaces: &[LabelledSpace]) -> Outcome {
    timed(Some(Duration::from_secs(30)), |out| {
        for space in spaces {
            let all = triples_up_to(space, 2);
            for s in &all {
                let sss = product(space, &product(space, s, &s.star()), s);
                out.check(sss == *s, || format!("s s* s ≠ s for {}", triple_text(space, s)));
                out.check(s.star().star() == *s, || format!("s** ≠ s for {}", triple_text(space, s)));
            }
            for s in &all {
                let parts = atomic_parts(space, s);
                for t in &all {
                    let whole = product(space, s, t);
                    let split: Vec<Triple> = parts.iter().map(|p| product(space, p, t)).collect();
                    out.check(join(&split) == Some(whole), || {
                        format!("product does not distribute: {} · {}", triple_text(space, s), triple_text(space, t))
                    });
                }
            }
            let atomic: Vec<Triple> = all
                .iter()
                .filter(|t| matches!(t, Triple::Elem { set, .. } if space.family().all_atoms().contains(set)))
                .cloned()
                .collect();
            associativity(space, &atomic, out);
            let idempotents = idempotents_up_to(space, 2);
            for p in &idempotents {
                for q in &idempotents {
                    let pq = product(space, p, q);
                    out.check(pq == product(space, q, p), || {
                        format!("idempotents do not commute: {} {}", triple_text(space, p), triple_text(space, q))
                    });
                    out.check(idempotent_leq(space, p, q) == (pq == *p), || {
                        format!("order disagrees with pq = p for {} ≤ {}", triple_text(space, p), triple_text(space, q))
                    });
                    out.check(pq.is_zero() || (idempotent_leq(space, &pq, p) && idempotent_leq(space, &pq, q)), || {
                        format!("pq is not below both for {} {}", triple_text(space, p), triple_text(space, q))
                    });
                }
            }
        }
    })
}

/// Gluing and cutting are inverse, and both compose along concatenation.
pub fn filter_surgery(spaces: &[LabelledSpace]) -> Outcome {
    timed(None, |out| {
        for space in spaces {
            let words = space.labelled_paths_up_to(2);
            for xi in enumerate_tight(space, 3, 3) {
                let show = || xi.display(space);
                for alpha in &words {
                    let w = |a: &[u8]| space.fmt_word(a);
                    if can_glue(space, &xi, alpha) {
                        let back = glue(space, &xi, alpha).and_then(|g| cut(&g, alpha));
                        out.check(back.as_ref() == Ok(&xi), || format!("H∘G ≠ id at {} with {}", show(), w(alpha)));
                    }
                    if xi.has_beginning(alpha) {
                        let back = cut(&xi, alpha).and_then(|h| glue(space, &h, alpha));
                        out.check(back.as_ref() == Ok(&xi), || format!("G∘H ≠ id at {} with {}", show(), w(alpha)));
                    }
                    for beta in &words {
                        let ab: Word = [alpha.as_slice(), beta].concat();
                        let once = glue(space, &xi, &ab).ok();
                        let twice = glue(space, &xi, beta).and_then(|g| glue(space, &g, alpha)).ok();
                        out.check(once == twice, || {
                            format!("G(αβ) ≠ G(α)∘G(β) at {} with α={} β={}", show(), w(alpha), w(beta))
                        });
                        let once = cut(&xi, &ab).ok();
                        let twice = cut(&xi, alpha).and_then(|h| cut(&h, beta)).ok();
                        out.check(once == twice, || {
                            format!("H(αβ) ≠ H(β)∘H(α) at {} with α={} β={}", show(), w(alpha), w(beta))
                        });
                    }
                }
            }
        }
    })
}

/// Filters used as the sample for the action axioms.
pub const ACTION_SAMPLE: (usize, usize) = (2, 2);

/// The partial-action laws for all `|s|, |t| ≤ 3`.
pub fn partial_action(spaces: &[LabelledSpace]) -> Outcome {
    timed(None, |out| {
        for space in spaces {
            let sample = enumerate_tight(space, ACTION_SAMPLE.0, ACTION_SAMPLE.1);
            let report = verify_partial_action_axioms(space, &sample, 3);
            out.absorb(report.checks, report.failures);
        }
    })
}

/// Θ is a bijection onto the lag groupoid and turns composition into
/// composition.
pub fn groupoid(spaces: &[LabelledSpace]) -> Outcome {
    timed(None, |out| {
        for space in spaces {
            let filters = enumerate_tight(space, 2, 2);
            let members: BTreeSet<&TightFilter> = filters.iter().collect();
            let elements = enumerate_elements(space, &filters, 3);
            let mut images: BTreeMap<GammaElement, usize> = BTreeMap::new();
            for g in &elements {
                out.check(g.is_element(space), || format!("({}, {}) is not an element", g.xi.display(space), g.t.display(space)));
                match theta(g) {
                    Ok(h) => {
                        out.check(h.is_element(), || format!("Θ of {} lands outside Γ", g.t.display(space)));
                        *images.entry(h).or_default() += 1;
                    }
                    Err(e) => out.check(false, || format!("Θ undefined on {}: {e}", g.t.display(space))),
                }
            }
            for (h, count) in &images {
                out.check(*count == 1, || format!("Θ is not injective: {count} preimages of lag {}", h.cocycle));
            }
            // Every lag element between enumerated filters with k + l ≤ 3.
            let mut by_shift: BTreeMap<TightFilter, Vec<(&TightFilter, usize)>> = BTreeMap::new();
            for xi in &filters {
                for k in 0..=3 {
                    if let Ok(s) = shift(xi, k) {
                        by_shift.entry(s).or_default().push((xi, k));
                    }
                }
            }
            for group in by_shift.values() {
                for &(xi, k) in group {
                    for &(eta, l) in group {
                        if k + l > 3 || !members.contains(eta) {
                            continue;
                        }
                        let h = GammaElement { xi: xi.clone(), cocycle: k as i64 - l as i64, eta: eta.clone() };
                        out.check(images.contains_key(&h), || {
                            format!("Θ misses ({}, {}, {})", xi.display(space), h.cocycle, eta.display(space))
                        });
                    }
                }
            }
            // Multiplicativity on composable pairs.
            let mut by_source: BTreeMap<&TightFilter, Vec<usize>> = BTreeMap::new();
            for (i, g) in elements.iter().enumerate() {
                by_source.entry(&g.xi).or_default().push(i);
            }
            for g in &elements {
                let Some(next) = by_source.get(&g.eta) else { continue };
                for &j in next {
                    let h = &elements[j];
                    let Ok(gh) = g.compose(space, h) else {
                        out.check(false, || format!("{} ∘ {} is undefined", g.t.display(space), h.t.display(space)));
                        continue;
                    };
                    let lhs = theta(&gh).ok();
                    let rhs = theta(g).and_then(|a| theta(h).and_then(|b| a.compose(&b))).ok();
                    out.check(lhs.is_some() && lhs == rhs, || {
                        format!("Θ(gh) ≠ Θ(g)Θ(h) for {} and {}", g.t.display(space), h.t.display(space))
                    });
                }
            }
            for g in &elements {
                let inv = theta(&g.invert()).ok();
                out.check(inv.is_some() && inv == theta(g).ok().map(|h| h.invert()), || {
                    format!("Θ does not commute with inversion at {}", g.t.display(space))
                });
            }
        }
    })
}

/// Largest lag tried by the direct shift comparison.
pub const SHIFT_BOUND: usize = 6;

/// The isotropy criterion agrees with `σˡ(ξ) = σᵏ(ξ)` for `l < k ≤ 6`.
pub fn isotropy(spaces: &[LabelledSpace]) -> Outcome {
    timed(None, |out| {
        for space in spaces {
            for xi in enumerate_tight(space, 3, 3) {
                let by_criterion = has_nontrivial_isotropy(space, &xi).is_some();
                let by_shifts = shift_equality_isotropy(&xi, SHIFT_BOUND).is_some();
                out.check(by_criterion == by_shifts, || {
                    format!("{}: criterion {by_criterion}, shifts {by_shifts}", xi.display(space))
                });
            }
        }
    })
}

/// Closure against subset enumeration for families of at most 16 members,
/// and against principal-ideal enumeration for the rest.
pub fn closure(spaces: &[LabelledSpace]) -> Outcome {
    timed(None, |out| {
        for space in spaces {
            if space.family().len() <= 16 {
                for (g, expected) in brute_hs_closures(space) {
                    let got: Option<BTreeSet<u64>> =
                        hereditary_saturated_closure(space, &[g]).ok().map(|h| h.members(space).into_iter().collect());
                    out.check(got.as_ref() == Some(&expected), || {
                        format!("closure of {} is {:?}, expected {:?}", space.fmt_set(g), got, expected)
                    });
                }
            } else {
                for (g, top) in brute_hs_closure_tops(space) {
                    let got = hereditary_saturated_closure(space, &[g]).ok().map(|h| h.top);
                    out.check(got == Some(top), || format!("closure of {} has top {got:?}, expected {top}", space.fmt_set(g)));
                }
            }
        }
    })
}

pub fn single_loop() -> LabelledSpace {
    space_from_edges(&["v"], &[("v", 'a', "v")], None).expect("static example")
}

pub fn two_loops() -> LabelledSpace {
    space_from_edges(&["u", "v"], &[("u", 'a', "u"), ("u", 'b', "u"), ("v", 'a', "v"), ("v", 'b', "v")], None)
        .expect("static example")
}

/// Known verdicts on three small spaces.
pub fn known_verdicts() -> Outcome {
    timed(None, |out| {
        let cases = [
            ("running example", running_example(), true, true, true),
            ("single loop", single_loop(), false, false, true),
            ("two loops", two_loops(), false, true, false),
        ];
        for (name, space, simple, lb, minimal) in cases {
            match simplicity_verdict(&space, 3, 3) {
                Ok(v) => {
                    out.check(v.simple == simple, || format!("{name}: simple = {}", v.simple));
                    out.check(v.condition_lb == lb, || format!("{name}: condition (L_B) = {}", v.condition_lb));
                    out.check(v.minimal == minimal, || format!("{name}: minimal = {}", v.minimal));
                    out.check(v.no_exit_cycle.is_some() == !lb, || format!("{name}: cycle witness mismatch"));
                    out.check(v.proper_hs_witness.is_some() == !minimal, || format!("{name}: closure witness mismatch"));
                }
                Err(e) => out.check(false, || format!("{name}: {e}")),
            }
        }
    })
}

pub const BRUTE_HORIZON: usize = 20;

/// Hyper cofinality by brute force over sampled pasts and points: the
/// words of length at most 2 in one- and two-element pasts, the points of
/// size at most 5, and for a failure the reported witness itself.
fn brute_hyper_cofinal(sft: &Sft, witness: Option<(&[Word], &lsimp_core::shift::Point)>) -> bool {
    if let Some((past, x)) = witness {
        if brute_cost(sft, past, x, BRUTE_HORIZON).is_none() {
            return false;
        }
    }
    let words: Vec<Word> = sft.language(2).into_iter().filter(|w| !w.is_empty()).collect();
    let points = sft.points_up_to(5);
    let mut pasts: Vec<Vec<Word>> = Vec::new();
    for (i, a) in words.iter().enumerate() {
        pasts.push(vec![a.clone()]);
        for b in &words[i + 1..] {
            pasts.push(vec![a.clone(), b.clone()]);
        }
    }
    pasts.iter().all(|past| {
        let nonempty = points.iter().any(|z| past.iter().all(|b| sft.prefixed_point_in(b, z)));
        !nonempty || points.iter().all(|x| brute_cost(sft, past, x, BRUTE_HORIZON).is_some())
    })
}

/// Condition (L) against the truncation's (L_B), and exact hyper
/// cofinality against brute force, on the random SFT corpus.
pub fn subshift_bridge(sfts: &[Sft]) -> Outcome {
    timed(Some(Duration::from_secs(300)), |out| {
        for sft in sfts {
            let name = || format!("{:?} avoiding {:?}", sft.letters(), sft.forbidden());
            let l = sft_condition_l(sft).decision;
            match Truncation::new(sft, sft.block_len()) {
                Ok(t) => {
                    let lb = condition_lb(t.space());
                    out.check(l == Decision::from_bool(lb), || format!("{}: (L) {l:?}, (L_B) {lb}", name()));
                }
                Err(e) => out.check(false, || format!("{}: no truncation: {e}", name())),
            }
            let exact = sft_hyper_cofinal(sft);
            let witness = exact.witness.as_ref().and_then(|w| w.points.first().map(|(x, _)| (w.past.as_slice(), x)));
            let brute = brute_hyper_cofinal(sft, witness);
            out.check(exact.decision == Decision::from_bool(brute), || {
                format!("{}: exact {:?}, brute force {brute}", name(), exact.decision)
            });
        }
    })
}

/// Costs `2ⁿ` for `n ≤ 4`, the bounded naive checks pass, and the shift is
/// not simple.
pub fn counterexample() -> Outcome {
    timed(Some(Duration::from_secs(60)), |out| {
        match counterexample_report(4, 64) {
            Ok(report) => {
                for (n, cost) in &report.costs {
                    out.check(*cost == Cost::Finite(1 << n), || format!("n={n}: cost {cost:?}, expected {}", 1 << n));
                }
                out.check(report.costs.len() == 5, || format!("{} costs reported", report.costs.len()));
                out.check(report.simple == Decision::False, || format!("simple = {:?}", report.simple));
            }
            Err(e) => out.check(false, || e.to_string()),
        }
        match shift_simplicity(&Subshift::Oracle(counterexample_shift(64)), NAIVE_DEPTH) {
            Ok(v) => {
                out.check(v.cofinal_in_past_equivalence.holds, || {
                    format!("past-equivalence cofinality fails: {:?}", v.cofinal_in_past_equivalence.failure)
                });
                out.check(v.no_isolated_cyclic_point, || "an isolated cyclic point was found".into());
                out.check(v.naive_criterion, || "naive criterion fails".into());
                out.check(v.hyper_cofinal.decision == Decision::False, || "hyper cofinality not refuted".into());
                out.check(v.simple == Decision::False, || format!("simple = {:?}", v.simple));
            }
            Err(e) => out.check(false, || e.to_string()),
        }
    })
}

/// Stone round trips on truncations of the golden mean and full 2-shifts,
/// with the lifting and onto identities up to depth 3.
pub fn stone_duality() -> Outcome {
    timed(None, |out| {
        for sft in [golden_mean(), full_shift(2)] {
            for depth in sft.block_len()..=3 {
                match Truncation::new(&sft, depth) {
                    Ok(t) => {
                        let r = check_stone_round_trip(&sft, &t, 3);
                        out.absorb(r.checks, r.failures);
                    }
                    Err(e) => out.check(false, || format!("truncation at depth {depth}: {e}")),
                }
                let r = check_unique_lift(&sft, 3, depth);
                out.absorb(r.checks, r.failures);
            }
            let r = check_onto_identity(&sft, 3);
            out.absorb(r.checks, r.failures);
        }
    })
}

pub struct Criterion {
    pub name: &'static str,
    pub run: fn() -> Outcome,
}

pub fn all() -> Vec<Criterion> {
    vec![
        Criterion { name: "inverse semigroup laws", run: || inverse_semigroup(&space_corpus()) },
        Criterion { name: "filter surgery", run: || filter_surgery(&space_corpus()) },
        Criterion { name: "partial action axioms", run: || partial_action(&space_corpus()) },
        Criterion { name: "groupoid isomorphism", run: || groupoid(&space_corpus()) },
        Criterion { name: "isotropy criterion", run: || isotropy(&space_corpus()) },
        Criterion { name: "hereditary saturated closure", run: || closure(&space_corpus()) },
        Criterion { name: "known verdicts", run: known_verdicts },
        Criterion { name: "subshift bridge", run: || subshift_bridge(&sft_corpus()) },
        Criterion { name: "gap-word counterexample", run: counterexample },
        Criterion { name: "Stone duality", run: stone_duality },
    ]
}

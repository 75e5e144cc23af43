//! Cost and hyper cofinality, condition (L), and past equivalence.
//!
//! For an SFT every question reduces to the live-block graph and the
//! follower automaton, so the answers are exact. Oracle shifts get exact
//! single-point costs and bounded evidence for the global properties.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde_json::{json, Value};

use crate::error::{input, Result};
use crate::lspace::{Letter, Word};
use crate::setalg::members;

use super::oracle::{Lead, OracleShift};
use super::sft::{Sft, StateSet};
use super::{fmt_letters, Decision, PastCache, Point, ShiftSystem};

/// `Cost(P, x)`, honouring a horizon.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cost {
    Finite(usize),
    /// No decomposition exists at all.
    Infinite(String),
    /// Nothing found up to the horizon and infinity not established.
    Unresolved { horizon: usize },
}

impl Cost {
    pub fn finite(&self) -> Option<usize> {
        match self {
            Cost::Finite(c) => Some(*c),
            _ => None,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Cost::Finite(c) => json!(c),
            Cost::Infinite(reason) => json!({ "infinite": reason }),
            Cost::Unresolved { horizon } => json!({ "unresolved_beyond": horizon }),
        }
    }

    fn capped(best: Option<usize>, horizon: usize, proven_infinite: bool, reason: &str) -> Cost {
        match best {
            Some(c) if c <= horizon => Cost::Finite(c),
            None if proven_infinite => Cost::Infinite(reason.to_string()),
            _ => Cost::Unresolved { horizon },
        }
    }
}

const EMPTY_FOLLOWER: &str = "F_P is empty";
const UNREACHABLE: &str = "no shift of the point can be rewritten into F_P";

/// Shortest `|γ|` with block `v ∈ Y_{Pγ}`, for each live block.
fn rewrite_distances(sft: &Sft, start: StateSet) -> Vec<Option<usize>> {
    let mut dist = vec![None; sft.live().len()];
    let mut seen = BTreeSet::from([start]);
    let mut queue = VecDeque::from([(start, 0usize)]);
    let letters = sft.effective_alphabet();
    while let Some((state, depth)) = queue.pop_front() {
        for v in members(state) {
            dist[v].get_or_insert(depth);
        }
        for &a in &letters {
            let next = sft.step(state, a);
            if next != 0 && seen.insert(next) {
                queue.push_back((next, depth + 1));
            }
        }
    }
    dist
}

/// Exact cost for an SFT: the minimum over shifts `σⁱ(x)` of `i` plus the
/// rewriting distance of its profile.
pub fn sft_cost(sft: &Sft, past: &[Word], x: &Point, horizon: usize) -> Result<Cost> {
    if !sft.point_in(x) {
        return input(format!("{} is not in the shift", x.display(sft.letters())));
    }
    let start = sft.set_state(past);
    if start == 0 {
        return Ok(Cost::Infinite(EMPTY_FOLLOWER.into()));
    }
    let dist = rewrite_distances(sft, start);
    let best = (0..x.prefix().len() + x.period().len())
        .filter_map(|i| {
            let v = sft.profile_index(&x.shift(i)).expect("points of the shift have live profiles");
            dist[v].map(|d| i + d)
        })
        .min();
    Ok(Cost::capped(best, horizon, true, UNREACHABLE))
}

/// Exact cost for the gap-word shift, searching `γ` from the right over
/// the leads of `γ·σⁱ(x)`.
pub fn oracle_cost(shift: &OracleShift, past: &[Word], x: &Point, horizon: usize) -> Result<Cost> {
    if !shift.point_in(x) {
        return input(format!("{} is not in the shift", x.display(shift.alphabet())));
    }
    if past.iter().any(|b| !shift.in_language(b)) {
        return Ok(Cost::Infinite(EMPTY_FOLLOWER.into()));
    }
    let fits = |lead: Lead| past.iter().all(|b| shift.prepend_word_lead(lead, b).is_some());
    let mut best: Option<usize> = None;
    let mut all_dead = true;
    for i in 0..x.prefix().len() + x.period().len() {
        let budget = best.map_or(horizon, |b| b.saturating_sub(1)).min(horizon);
        if best == Some(0) || i > budget {
            all_dead = false;
            break;
        }
        let mut layer = BTreeSet::from([shift.lead(&x.shift(i))]);
        for j in 0..=budget - i {
            if layer.iter().any(|&l| fits(l)) {
                best = Some(i + j);
                break;
            }
            layer = layer
                .iter()
                .flat_map(|&l| (0..3).filter_map(move |a| shift.prepend_lead(l, a)))
                .collect();
            if layer.is_empty() {
                break;
            }
        }
        all_dead &= layer.is_empty();
    }
    Ok(Cost::capped(best, horizon, all_dead, UNREACHABLE))
}

/// Largest value of `Cost(P, x)` over points starting with each live block,
/// `None` for infinity; the greatest fixed point of
/// `C(u) = min(d(u), 1 + max C(successors))`.
fn block_sup_costs(sft: &Sft, dist: &[Option<usize>]) -> Vec<Option<usize>> {
    let mut cost: Vec<Option<usize>> = vec![None; dist.len()];
    loop {
        let mut changed = false;
        for u in 0..dist.len() {
            let worst_next = members(sft.successors(u))
                .map(|w| cost[w])
                .try_fold(0usize, |acc, c| c.map(|c| acc.max(c)));
            let value = match (dist[u], worst_next.map(|c| c + 1)) {
                (Some(a), Some(b)) => Some(a.min(b)),
                (a, b) => a.or(b),
            };
            if value != cost[u] {
                cost[u] = value;
                changed = true;
            }
        }
        if !changed {
            return cost;
        }
    }
}

/// Nonempty sets `Y_P` over finite `P ⊆ L_X`, each with a generating `P`.
pub fn follower_classes(sft: &Sft) -> BTreeMap<StateSet, Vec<Word>> {
    let mut classes: BTreeMap<StateSet, Vec<Word>> = BTreeMap::new();
    for (state, w) in sft.automaton().states {
        classes.entry(state).or_insert_with(|| vec![w]);
    }
    loop {
        let mut added = Vec::new();
        for (i, (s, ps)) in classes.iter().enumerate() {
            for (t, qs) in classes.iter().skip(i + 1) {
                let meet = s & t;
                if meet != 0 && !classes.contains_key(&meet) && !added.iter().any(|(m, _)| *m == meet) {
                    added.push((meet, [ps.as_slice(), qs].concat()));
                }
            }
        }
        if added.is_empty() {
            return classes;
        }
        classes.extend(added);
    }
}

/// The eventually periodic point whose blocks follow `path` and then repeat
/// from position `loop_start`.
fn point_along(sft: &Sft, path: &[usize], loop_start: usize) -> Point {
    let letters: Word = path.iter().map(|&v| sft.live()[v][0]).collect();
    Point::new(letters[..loop_start].to_vec(), letters[loop_start..].to_vec()).expect("loops are nonempty")
}

/// Evidence that costs are unbounded for one `P`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostWitness {
    pub past: Vec<Word>,
    pub points: Vec<(Point, Cost)>,
}

impl CostWitness {
    pub fn to_json(&self, alphabet: &[char]) -> Value {
        json!({
            "P": self.past.iter().map(|w| fmt_letters(alphabet, w)).collect::<Vec<_>>(),
            "points": self.points.iter().map(|(x, c)| json!({
                "x": x.display(alphabet),
                "cost": c.to_json(),
            })).collect::<Vec<_>>(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HyperCofinal {
    pub decision: Decision,
    /// `sup_P sup_x Cost(P, x)` when it is finite and known.
    pub sup_cost: Option<usize>,
    pub witness: Option<CostWitness>,
}

/// Exact hyper cofinality of an SFT. A failure comes with a point of
/// infinite cost.
pub fn sft_hyper_cofinal(sft: &Sft) -> HyperCofinal {
    let mut sup = 0;
    for (state, past) in follower_classes(sft) {
        let dist = rewrite_distances(sft, state);
        let sup_costs = block_sup_costs(sft, &dist);
        if let Some(start) = sup_costs.iter().position(Option::is_none) {
            let mut path = vec![start];
            let loop_start = loop {
                let here = *path.last().expect("nonempty");
                let next = members(sft.successors(here))
                    .find(|&w| sup_costs[w].is_none())
                    .expect("an infinite cost propagates to a successor");
                if let Some(i) = path.iter().position(|&v| v == next) {
                    break i;
                }
                path.push(next);
            };
            let point = point_along(sft, &path, loop_start);
            let cost = Cost::Infinite(UNREACHABLE.into());
            return HyperCofinal {
                decision: Decision::False,
                sup_cost: None,
                witness: Some(CostWitness { past, points: vec![(point, cost)] }),
            };
        }
        sup = sup_costs.into_iter().flatten().fold(sup, usize::max);
    }
    HyperCofinal { decision: Decision::True, sup_cost: Some(sup), witness: None }
}

/// Members `x_n = u^{3·2ⁿ} v^∞` of the doubling family with prefix length
/// at most `horizon`.
pub fn doubling_family(u: Letter, v: Letter, horizon: usize) -> Vec<Point> {
    (0..)
        .map(|n| 3usize << n)
        .take_while(|&len| len <= horizon)
        .map(|len| Point::new(vec![u; len], vec![v]).expect("nonempty period"))
        .collect()
}

const MIN_FAMILY: usize = 4;

/// Searches doubling families with one-letter `P` for strictly increasing
/// costs. Finding one is reported as `False`; otherwise the answer is
/// `Unknown`.
pub fn oracle_hyper_cofinal(shift: &OracleShift) -> HyperCofinal {
    let letters = 0..shift.alphabet().len() as Letter;
    for e in letters.clone() {
        for u in letters.clone() {
            for v in letters.clone().filter(|&v| v != u) {
                let past = vec![vec![e]];
                let mut points = Vec::new();
                for x in doubling_family(u, v, shift.horizon()) {
                    if !shift.point_in(&x) {
                        break;
                    }
                    let cost = oracle_cost(shift, &past, &x, shift.horizon()).expect("member of the shift");
                    points.push((x, cost));
                }
                let costs: Vec<Option<usize>> = points.iter().map(|(_, c)| c.finite()).collect();
                let increasing = costs.windows(2).all(|w| matches!((w[0], w[1]), (Some(a), Some(b)) if a < b));
                if points.len() >= MIN_FAMILY && increasing {
                    return HyperCofinal {
                        decision: Decision::False,
                        sup_cost: None,
                        witness: Some(CostWitness { past, points }),
                    };
                }
            }
        }
    }
    HyperCofinal { decision: Decision::Unknown, sup_cost: None, witness: None }
}

/// Follows the unique successor from `start` while there is one.
/// Returns the visited blocks and where they start repeating, or `None`
/// when some block on the way has two successors.
fn deterministic_orbit(sft: &Sft, start: usize) -> Option<(Vec<usize>, usize)> {
    let mut path = vec![start];
    loop {
        let succ = sft.successors(*path.last().expect("nonempty"));
        if succ.count_ones() != 1 {
            return None;
        }
        let next = succ.trailing_zeros() as usize;
        if let Some(i) = path.iter().position(|&v| v == next) {
            return Some((path, i));
        }
        path.push(next);
    }
}

/// A circuit `γ` and a finite `P` with `F_P = {γ^∞}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LWitness {
    pub circuit: Word,
    pub past: Vec<Word>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionL {
    pub decision: Decision,
    pub witness: Option<LWitness>,
}

/// Condition (L) fails exactly when the smallest `Y_P` containing some
/// block `v` is `{v}` and the only point starting with `v` is periodic
/// through `v`.
pub fn sft_condition_l(sft: &Sft) -> ConditionL {
    let classes = follower_classes(sft);
    for v in 0..sft.live().len() {
        let bit = 1u64 << v;
        let smallest = classes.keys().filter(|&&s| s & bit != 0).fold(sft.all_live(), |acc, s| acc & s);
        if smallest != bit {
            continue;
        }
        if let Some((path, 0)) = deterministic_orbit(sft, v) {
            let circuit = path.iter().map(|&u| sft.live()[u][0]).collect();
            return ConditionL {
                decision: Decision::False,
                witness: Some(LWitness { circuit, past: classes[&smallest].clone() }),
            };
        }
    }
    ConditionL { decision: Decision::True, witness: None }
}

/// `{α ∈ L_X : |α| ≤ l, α v is admissible}` for a live block `v`, which is
/// the `l`-past of every point with profile `v`.
fn block_past(sft: &Sft, words: &[Word], v: usize) -> Vec<bool> {
    words.iter().map(|a| sft.is_loc_admissible(&[a.as_slice(), &sft.live()[v]].concat())).collect()
}

/// An `l`-past equivalence class of an SFT: the points whose profile is
/// one of `blocks`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PastClass {
    pub past: BTreeSet<Word>,
    pub blocks: Vec<Word>,
    pub singleton: bool,
}

pub fn past_class(sft: &Sft, x: &Point, l: usize) -> Result<PastClass> {
    let Some(v) = sft.profile_index(x).filter(|_| sft.point_in(x)) else {
        return input(format!("{} is not in the shift", x.display(sft.letters())));
    };
    let words = sft.language(l);
    let own = block_past(sft, &words, v);
    let class: Vec<usize> = (0..sft.live().len()).filter(|&u| block_past(sft, &words, u) == own).collect();
    let singleton = class == [v] && deterministic_orbit(sft, v).is_some();
    Ok(PastClass {
        past: words.iter().zip(&own).filter(|(_, &keep)| keep).map(|(w, _)| w.clone()).collect(),
        blocks: class.iter().map(|&u| sft.live()[u].clone()).collect(),
        singleton,
    })
}

pub fn is_isolated(sft: &Sft, x: &Point, l: usize) -> Result<bool> {
    Ok(past_class(sft, x, l)?.singleton)
}

/// A cyclic point isolated in past equivalence, if any. Classes no longer
/// refine once `l` reaches the block length.
pub fn sft_isolated_cyclic_point(sft: &Sft) -> Option<Point> {
    let l = sft.block_len();
    (0..sft.live().len()).find_map(|v| {
        let (path, 0) = deterministic_orbit(sft, v)? else { return None };
        let x = point_along(sft, &path, 0);
        is_isolated(sft, &x, l).expect("cycle points lie in the shift").then_some(x)
    })
}

pub const SAMPLE_SIZE: usize = 3;
pub const CLASS_SAMPLE_SIZE: usize = 4;

/// Outcome of a bounded check over sampled points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundedReport {
    pub holds: bool,
    pub checked: usize,
    pub failure: Option<String>,
}

impl BoundedReport {
    fn pass(checked: usize) -> Self {
        Self { holds: true, checked, failure: None }
    }

    fn fail(checked: usize, why: String) -> Self {
        Self { holds: false, checked, failure: Some(why) }
    }
}

/// Every sampled cyclic point has another sampled point in its `l`-class,
/// for `l ≤ depth`.
pub fn no_isolated_cyclic_point_bounded(shift: &dyn ShiftSystem, depth: usize) -> BoundedReport {
    let mut cache = PastCache::default();
    let cyclic: Vec<Point> = shift.points_up_to(SAMPLE_SIZE).into_iter().filter(Point::is_cyclic).collect();
    let sample = shift.points_up_to(CLASS_SAMPLE_SIZE);
    let mut checked = 0;
    for l in 1..=depth {
        for z in &cyclic {
            checked += 1;
            let target = cache.get(shift, z, l).clone();
            let company = sample.iter().any(|y| y != z && *cache.get(shift, y, l) == target);
            if !company {
                return BoundedReport::fail(
                    checked,
                    format!("{} is alone in its {l}-class among sampled points", z.display(shift.alphabet())),
                );
            }
        }
    }
    BoundedReport::pass(checked)
}

/// For sampled `x, y` and `l ≤ depth`, some `z = u·σᵐ(x)` with
/// `m, |u| ≤ depth` is `l`-past equivalent to `y`; then `σᵐ(x) = σ^{|u|}(z)`.
pub fn cofinal_in_past_equivalence_bounded(shift: &dyn ShiftSystem, depth: usize) -> BoundedReport {
    let mut cache = PastCache::default();
    let sample = shift.points_up_to(SAMPLE_SIZE);
    let prefixes = shift.language(depth);
    let mut checked = 0;
    for l in 1..=depth {
        for x in &sample {
            let mut reachable: BTreeSet<BTreeSet<Word>> = BTreeSet::new();
            for m in 0..=depth {
                let tail = x.shift(m);
                for u in prefixes.iter().filter(|u| shift.prefixed_point_in(u, &tail)) {
                    reachable.insert(cache.get(shift, &tail.prepend(u), l).clone());
                }
            }
            for y in &sample {
                checked += 1;
                if !reachable.contains(cache.get(shift, y, l)) {
                    let show = |p: &Point| p.display(shift.alphabet());
                    return BoundedReport::fail(
                        checked,
                        format!("no z within depth {depth} joins x = {} to the {l}-class of y = {}", show(x), show(y)),
                    );
                }
            }
        }
    }
    BoundedReport::pass(checked)
}

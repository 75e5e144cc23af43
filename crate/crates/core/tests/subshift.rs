//! Subshifts: costs, condition (L), past classes, clopen sets and the
//! bridge to labelled spaces.

mod common;

use common::criteria;
use lsimp_core::lspace::Word;
use lsimp_core::shift::clopen::{cset, ClopenSet};
use lsimp_core::shift::dynamics::{past_class, sft_cost, Cost};
use lsimp_core::shift::verdict::shift_simplicity;
use lsimp_core::shift::{Decision, Point, Sft, ShiftSystem, Subshift};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn sft_from_seed(seed: u64) -> Sft {
    common::random_sft(&mut ChaCha8Rng::seed_from_u64(seed))
}

fn pick<T: Clone>(items: &[T], i: &prop::sample::Index) -> T {
    i.get(items).clone()
}

#[test]
fn bridge_and_brute_force_agree_on_random_sfts() {
    criteria::subshift_bridge(&common::sft_corpus()).assert_passed();
}

#[test]
fn gap_word_counterexample() {
    criteria::counterexample().assert_passed();
}

#[test]
fn stone_duality_on_small_truncations() {
    criteria::stone_duality().assert_passed();
}

#[test]
fn golden_mean_costs() {
    let g = common::golden_mean();
    let p = |s: &str| Point::parse(g.letters(), s).unwrap();
    let b = vec![vec![1u8]];
    assert_eq!(sft_cost(&g, &b, &p("(a)^inf"), 20).unwrap(), Cost::Finite(0));
    assert_eq!(sft_cost(&g, &b, &p("b(a)^inf"), 20).unwrap(), Cost::Finite(1));
    assert_eq!(sft_cost(&g, &b, &p("(ba)^inf"), 20).unwrap(), Cost::Finite(1));
    assert!(sft_cost(&g, &b, &p("bb(a)^inf"), 20).is_err());
}

/// Letters `0..n` with `ab` forbidden exactly when there is no edge `a → b`.
fn vertex_shift(n: usize, edges: &[bool]) -> Sft {
    let letters: Vec<char> = "abcd".chars().take(n).collect();
    let forbidden: Vec<Word> =
        (0..n * n).filter(|&i| !edges[i]).map(|i| vec![(i / n) as u8, (i % n) as u8]).collect();
    Sft::new(letters, forbidden).unwrap()
}

proptest! {
    #![proptest_config(common::proptest_config(96))]

    #[test]
    fn exact_cost_matches_brute_force(
        seed in any::<u64>(),
        i in any::<prop::sample::Index>(),
        j in any::<prop::sample::Index>(),
        k in any::<prop::sample::Index>(),
        two in any::<bool>(),
    ) {
        let sft = sft_from_seed(seed);
        let words: Vec<Word> = sft.language(3).into_iter().filter(|w| !w.is_empty()).collect();
        let points = sft.points_up_to(4);
        prop_assume!(!words.is_empty() && !points.is_empty());
        let mut past = vec![pick(&words, &i)];
        if two {
            past.push(pick(&words, &j));
        }
        let x = pick(&points, &k);
        let exact = sft_cost(&sft, &past, &x, common::criteria::BRUTE_HORIZON).unwrap();
        let brute = common::brute_cost(&sft, &past, &x, common::criteria::BRUTE_HORIZON);
        prop_assert_eq!(exact.finite(), brute);
        if let Some(c) = exact.finite() {
            // Shifting first costs at most one more step.
            let next = sft_cost(&sft, &past, &x.shift(1), 64).unwrap();
            if let Some(d) = next.finite() {
                prop_assert!(c <= d + 1);
            }
            // A larger past can only cost more.
            let bigger = sft_cost(&sft, &[past.clone(), vec![pick(&words, &k)]].concat(), &x, 64).unwrap();
            if let Some(d) = bigger.finite() {
                prop_assert!(c <= d);
            }
        }
    }

    #[test]
    fn clopen_sets_match_point_membership(
        seed in any::<u64>(),
        picks in prop::collection::vec(any::<prop::sample::Index>(), 5),
    ) {
        let sft = sft_from_seed(seed);
        let words = sft.language(2);
        let points = sft.points_up_to(4);
        let [a, b, c, d] = [0, 1, 2, 3].map(|n| pick(&words, &picks[n]));
        let (Ok(x), Ok(y)) = (cset(&sft, &a, &b), cset(&sft, &c, &d)) else {
            // Words of the language that do not extend to points.
            prop_assert!(!sft.is_extendable(&a) || !sft.is_extendable(&b) || !sft.is_extendable(&c) || !sft.is_extendable(&d));
            return Ok(());
        };
        for z in &points {
            let in_x = z.take(b.len()) == b && sft.prefixed_point_in(&a, &z.shift(b.len()));
            prop_assert_eq!(x.contains_point(z), in_x);
            let in_y = y.contains_point(z);
            prop_assert_eq!(x.meet(&sft, &y).contains_point(z), in_x && in_y);
            prop_assert_eq!(x.join(&sft, &y).contains_point(z), in_x || in_y);
            prop_assert_eq!(x.diff(&sft, &y).contains_point(z), in_x && !in_y);
            if sft.is_extendable(&a) {
                let r = x.rel_range(&sft, &a).unwrap();
                prop_assert_eq!(r.contains_point(z), sft.prefixed_point_in(&a, z) && x.contains_point(&z.prepend(&a)));
            }
        }
        prop_assert!(x.meet(&sft, &y).is_subset(&sft, &x));
        prop_assert_eq!(x.join(&sft, &y).diff(&sft, &y), x.diff(&sft, &y));
        prop_assert_eq!(x.diff(&sft, &x), ClopenSet::empty());
        let z = pick(&points, &picks[4]);
        prop_assert!(cset(&sft, &[], &[]).unwrap().contains_point(&z));
    }

    #[test]
    fn past_classes_match_direct_pasts(seed in any::<u64>(), i in any::<prop::sample::Index>(), l in 1usize..4) {
        let sft = sft_from_seed(seed);
        let points = sft.points_up_to(4);
        let x = pick(&points, &i);
        let class = past_class(&sft, &x, l).unwrap();
        prop_assert_eq!(&class.past, &sft.past_set(&x, l));
        for y in &points {
            let same = sft.past_set(y, l) == class.past;
            prop_assert_eq!(same, class.blocks.contains(&sft.profile(y)));
        }
    }

    /// For an essential 0-1 matrix, the vertex shift is simple exactly when
    /// the matrix is irreducible and not a permutation.
    #[test]
    fn vertex_shifts_follow_cuntz_krieger(n in 1usize..=4, edges in prop::collection::vec(any::<bool>(), 16)) {
        let sft = vertex_shift(n, &edges);
        prop_assume!(!sft.is_empty());
        let live: Vec<usize> = (0..sft.live().len()).collect();
        let essential = live.iter().all(|&v| live.iter().any(|&u| sft.successors(u) >> v & 1 == 1));
        prop_assume!(essential);
        let (irreducible, permutation) = common::live_graph_shape(&sft);
        let verdict = shift_simplicity(&Subshift::Sft(sft), 2).unwrap();
        prop_assert_eq!(verdict.simple, Decision::from_bool(irreducible && !permutation));
    }
}

//! Shifts of finite type and their follower automaton.
//!
//! With `M` the longest forbidden length and `k = max(M − 1, 1)`, a point
//! lies in `X` iff all its `k`-blocks are *live* (loc-admissible with an
//! infinite loc-admissible continuation). The follower set of a word `w` is
//! then described by the set `Y_w` of live `k`-words `v` with `w·v`
//! loc-admissible; these sets are the automaton states.

use std::collections::{BTreeMap, HashMap, VecDeque};

use crate::error::{input, Error, Result};
use crate::lspace::{Letter, Word};

use super::{Point, ShiftSystem};

/// A set of live `k`-words, bit `i` for `Sft::live()[i]`.
pub type StateSet = u64;

const MAX_LIVE: usize = 64;
const MAX_CANDIDATES: usize = 1 << 16;

#[derive(Debug, Clone)]
pub struct Sft {
    alphabet: Vec<char>,
    forbidden: Vec<Word>,
    memory: usize,
    k: usize,
    live: Vec<Word>,
    live_index: HashMap<Word, usize>,
    succ: Vec<StateSet>,
}

impl Sft {
    /// `alphabet` may be in any order; letters are indexed in sorted order.
    pub fn from_strings<S: AsRef<str>>(alphabet: &[char], forbidden: &[S]) -> Result<Self> {
        let mut letters = alphabet.to_vec();
        letters.sort_unstable();
        letters.dedup();
        if letters.len() != alphabet.len() {
            return input("alphabet has repeated letters");
        }
        let mut words = Vec::new();
        for f in forbidden {
            let w = super::parse_letters(&letters, f.as_ref())?;
            if w.is_empty() {
                return input("the empty word cannot be forbidden");
            }
            words.push(w);
        }
        Self::new(letters, words)
    }

    pub fn new(alphabet: Vec<char>, mut forbidden: Vec<Word>) -> Result<Self> {
        if alphabet.is_empty() {
            return input("empty alphabet");
        }
        forbidden.sort();
        forbidden.dedup();
        let memory = forbidden.iter().map(Vec::len).max().unwrap_or(0);
        let k = memory.saturating_sub(1).max(1);
        let n = alphabet.len();
        if n.checked_pow(k as u32).is_none_or(|c| c > MAX_CANDIDATES) {
            return Err(Error::TooLarge(format!("{n}^{k} candidate blocks")));
        }
        let mut sft = Sft {
            alphabet,
            forbidden,
            memory,
            k,
            live: Vec::new(),
            live_index: HashMap::new(),
            succ: Vec::new(),
        };
        let blocks: Vec<Word> =
            super::all_words(n, k).into_iter().filter(|w| w.len() == k && sft.is_loc_admissible(w)).collect();
        // Prune blocks without a successor until stable.
        let mut alive: Vec<bool> = vec![true; blocks.len()];
        let index: HashMap<&Word, usize> = blocks.iter().enumerate().map(|(i, w)| (w, i)).collect();
        let edges: Vec<Vec<usize>> = blocks
            .iter()
            .map(|u| {
                (0..n as Letter)
                    .filter_map(|c| {
                        let mut uc = u.clone();
                        uc.push(c);
                        if sft.is_loc_admissible(&uc) {
                            index.get(&uc[1..].to_vec()).copied()
                        } else {
                            None
                        }
                    })
                    .collect()
            })
            .collect();
        loop {
            let mut changed = false;
            for i in 0..blocks.len() {
                if alive[i] && !edges[i].iter().any(|&j| alive[j]) {
                    alive[i] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let live: Vec<Word> = blocks.iter().zip(&alive).filter(|(_, &a)| a).map(|(w, _)| w.clone()).collect();
        if live.len() > MAX_LIVE {
            return Err(Error::TooLarge(format!("{} live blocks", live.len())));
        }
        let live_index: HashMap<Word, usize> = live.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
        let succ = live
            .iter()
            .map(|u| {
                edges[index[u]]
                    .iter()
                    .filter_map(|&j| live_index.get(&blocks[j]))
                    .fold(0, |acc, &j| acc | 1u64 << j)
            })
            .collect();
        sft.live = live;
        sft.live_index = live_index;
        sft.succ = succ;
        Ok(sft)
    }

    pub fn letters(&self) -> &[char] {
        &self.alphabet
    }

    pub fn forbidden(&self) -> &[Word] {
        &self.forbidden
    }

    /// Longest forbidden length `M`.
    pub fn memory(&self) -> usize {
        self.memory
    }

    /// Profile length `k`.
    pub fn block_len(&self) -> usize {
        self.k
    }

    pub fn live(&self) -> &[Word] {
        &self.live
    }

    pub fn live_index(&self, v: &[Letter]) -> Option<usize> {
        self.live_index.get(v).copied()
    }

    /// Live blocks reachable from block `i` in one step.
    pub fn successors(&self, i: usize) -> StateSet {
        self.succ[i]
    }

    pub fn all_live(&self) -> StateSet {
        if self.live.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.live.len()) - 1
        }
    }

    pub fn is_empty(&self) -> bool {
        self.live.is_empty()
    }

    /// No forbidden factor.
    pub fn is_loc_admissible(&self, w: &[Letter]) -> bool {
        !self.forbidden.iter().any(|f| f.len() <= w.len() && w.windows(f.len()).any(|x| x == f.as_slice()))
    }

    /// `w ∈ L_X`: loc-admissible with an infinite continuation.
    pub fn is_extendable(&self, w: &[Letter]) -> bool {
        if !self.is_loc_admissible(w) {
            return false;
        }
        if w.len() >= self.k {
            self.live_index.contains_key(&w[w.len() - self.k..])
        } else {
            self.live.iter().any(|u| u.starts_with(w))
        }
    }

    /// Letters occurring in `L_X`.
    pub fn effective_alphabet(&self) -> Vec<Letter> {
        (0..self.alphabet.len() as Letter).filter(|&a| self.is_extendable(&[a])).collect()
    }

    /// `Y_w`: live blocks `v` with `w·v` loc-admissible.
    pub fn follower_state(&self, w: &[Letter]) -> StateSet {
        let mut out = 0;
        for (i, v) in self.live.iter().enumerate() {
            if self.is_loc_admissible(&[w, v].concat()) {
                out |= 1 << i;
            }
        }
        out
    }

    /// `Y_{wa}` from `Y_w`.
    pub fn step(&self, state: StateSet, a: Letter) -> StateSet {
        let mut out = 0;
        for i in super::super::setalg::members(state) {
            if self.live[i][0] == a {
                out |= self.succ[i];
            }
        }
        out
    }

    pub fn step_word(&self, state: StateSet, w: &[Letter]) -> StateSet {
        w.iter().fold(state, |s, &a| self.step(s, a))
    }

    /// Follower state of a set of words, `Y_P = ⋂ Y_β`.
    pub fn set_state(&self, words: &[Word]) -> StateSet {
        words.iter().fold(self.all_live(), |acc, w| acc & self.follower_state(w))
    }

    /// First `k` letters of a point.
    pub fn profile(&self, x: &Point) -> Word {
        x.take(self.k)
    }

    /// Index of the point's profile among the live blocks, if it is live.
    pub fn profile_index(&self, x: &Point) -> Option<usize> {
        self.live_index(&self.profile(x))
    }

    /// Follower automaton: distinct states reachable from `Y_ω` with a
    /// shortest (then lexicographically least) witness word each.
    pub fn automaton(&self) -> FollowerAutomaton {
        let start = self.all_live();
        let mut witness: BTreeMap<StateSet, Word> = BTreeMap::new();
        let mut order = vec![start];
        witness.insert(start, Vec::new());
        let mut queue = VecDeque::from([start]);
        let mut transitions = BTreeMap::new();
        while let Some(s) = queue.pop_front() {
            for a in 0..self.alphabet.len() as Letter {
                let t = self.step(s, a);
                transitions.insert((s, a), t);
                if t != 0 && !witness.contains_key(&t) {
                    let mut w = witness[&s].clone();
                    w.push(a);
                    witness.insert(t, w);
                    order.push(t);
                    queue.push_back(t);
                }
            }
        }
        FollowerAutomaton { states: order.into_iter().map(|s| (s, witness[&s].clone())).collect(), transitions }
    }
}

/// Nonempty follower states with witnesses, in discovery order.
#[derive(Debug, Clone)]
pub struct FollowerAutomaton {
    pub states: Vec<(StateSet, Word)>,
    pub transitions: BTreeMap<(StateSet, Letter), StateSet>,
}

impl ShiftSystem for Sft {
    fn alphabet(&self) -> &[char] {
        &self.alphabet
    }

    fn in_language(&self, word: &[Letter]) -> bool {
        self.is_extendable(word)
    }

    fn prefixed_point_in(&self, word: &[Letter], x: &Point) -> bool {
        let window = x.window(self.memory.max(self.k) + 1);
        self.is_loc_admissible(&[word.to_vec(), x.take(window)].concat())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn golden() -> Sft {
        Sft::from_strings(&['a', 'b'], &["bb"]).unwrap()
    }

    #[test]
    fn golden_mean_language() {
        let s = golden();
        let lang: Vec<String> = s.language(2).iter().map(|w| super::super::fmt_letters(s.letters(), w)).collect();
        assert_eq!(lang, vec!["ω", "a", "b", "aa", "ab", "ba"]);
        let full = Sft::from_strings(&['0', '1'], &[] as &[&str]).unwrap();
        assert_eq!(full.language(1).len(), 3);
    }

    #[test]
    fn dead_letters_and_live_blocks() {
        let only_a = Sft::from_strings(&['a', 'b'], &["b"]).unwrap();
        assert_eq!(only_a.effective_alphabet(), vec![0]);
        // `c` can be written but never continued.
        let dead_end = Sft::from_strings(&['a', 'c'], &["ca", "cc"]).unwrap();
        assert!(!dead_end.is_extendable(&[1]));
        assert!(dead_end.is_loc_admissible(&[1]));
    }

    #[test]
    fn step_matches_direct_follower_states() {
        let s = Sft::from_strings(&['a', 'b', 'c'], &["ab", "bcb", "cc"]).unwrap();
        for w in super::super::all_words(3, 5) {
            let direct = s.follower_state(&w);
            let stepped = s.step_word(s.all_live(), &w);
            assert_eq!(direct, stepped, "word {w:?}");
        }
    }

    #[test]
    fn automaton_of_golden_mean() {
        let s = golden();
        let aut = s.automaton();
        // Y_ω = {a, b} and Y_b = {a}.
        assert_eq!(aut.states.len(), 2);
        assert_eq!(aut.states[1].1, vec![1]);
    }
}

//! Labelled graphs with an accommodating family of vertex sets.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{input, Error, Result};
use crate::setalg::{full_set, members, FiniteSetAlgebra, VertexSet, MAX_UNIVERSE};

/// Index of a letter in the (sorted) alphabet.
pub type Letter = u8;
/// A finite word; the empty word is the empty vector.
pub type Word = Vec<Letter>;

/// Rendering of the empty word.
pub const EMPTY_WORD: &str = "ω";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelledGraph {
    vertex_names: Vec<String>,
    letters: Vec<char>,
    edges: Vec<(usize, Letter, usize)>,
    /// `succ[a][v]`: targets of the `a`-labelled edges leaving `v`.
    succ: Vec<Vec<VertexSet>>,
}

impl LabelledGraph {
    /// Builds a graph from vertex names and `(source, label, target)` edges.
    /// The alphabet is the sorted set of labels used.
    pub fn new(vertex_names: Vec<String>, edges: &[(String, char, String)]) -> Result<Self> {
        if vertex_names.is_empty() {
            return input("a graph needs at least one vertex");
        }
        if vertex_names.len() > MAX_UNIVERSE {
            return Err(Error::TooLarge(format!("{} vertices", vertex_names.len())));
        }
        let mut index = HashMap::new();
        for (i, name) in vertex_names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return input(format!("duplicate vertex {name:?}"));
            }
        }
        let mut letters: Vec<char> = edges.iter().map(|e| e.1).collect();
        letters.sort_unstable();
        letters.dedup();
        let lookup = |name: &String| {
            index.get(name).copied().ok_or_else(|| Error::Input(format!("unknown vertex {name:?}")))
        };
        let mut out = Vec::with_capacity(edges.len());
        for (s, l, t) in edges {
            let a = letters.binary_search(l).expect("label collected above") as Letter;
            out.push((lookup(s)?, a, lookup(t)?));
        }
        out.sort_unstable();
        out.dedup();
        let mut succ = vec![vec![0; vertex_names.len()]; letters.len()];
        for &(s, a, t) in &out {
            succ[a as usize][s] |= 1 << t;
        }
        Ok(Self { vertex_names, letters, edges: out, succ })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertex_names
    }

    pub fn letters(&self) -> &[char] {
        &self.letters
    }

    pub fn edges(&self) -> &[(usize, Letter, usize)] {
        &self.edges
    }

    pub fn vertices(&self) -> VertexSet {
        full_set(self.vertex_count())
    }

    /// Targets of `a`-labelled edges leaving `set`.
    pub fn step(&self, set: VertexSet, a: Letter) -> VertexSet {
        let row = &self.succ[a as usize];
        members(set).fold(0, |acc, v| acc | row[v])
    }
}

/// A labelled graph together with its accommodating family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelledSpace {
    graph: LabelledGraph,
    family: FiniteSetAlgebra,
}

/// One failed condition of [`LabelledSpace::validate_normal`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// `r(word)` is not a family member.
    RangeNotInFamily { word: Word, range: VertexSet },
    /// `r(set, letter)` is not a family member.
    RelativeRangeNotInFamily { set: VertexSet, letter: Letter, range: VertexSet },
    /// `r(a ∩ b, letter) ≠ r(a, letter) ∩ r(b, letter)`.
    NotWeaklyLeftResolving { a: VertexSet, b: VertexSet, letter: Letter },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl LabelledSpace {
    pub fn new(graph: LabelledGraph, family: FiniteSetAlgebra) -> Result<Self> {
        if family.universe_size() != graph.vertex_count() {
            return input("family universe does not match the vertex count");
        }
        Ok(Self { graph, family })
    }

    /// Builds the space and rejects it unless it is normal and weakly left-resolving.
    pub fn validated(graph: LabelledGraph, family: FiniteSetAlgebra) -> Result<Self> {
        let space = Self::new(graph, family)?;
        let report = space.validate_normal();
        match report.violations.first() {
            None => Ok(space),
            Some(v) => input(space.describe_violation(v)),
        }
    }

    pub fn graph(&self) -> &LabelledGraph {
        &self.graph
    }

    pub fn family(&self) -> &FiniteSetAlgebra {
        &self.family
    }

    pub fn vertices(&self) -> VertexSet {
        self.graph.vertices()
    }

    pub fn alphabet_size(&self) -> usize {
        self.graph.letters.len()
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> {
        0..self.graph.letters.len() as Letter
    }

    /// Relative range without checking family membership of `set`.
    pub fn image(&self, set: VertexSet, word: &[Letter]) -> VertexSet {
        word.iter().fold(set, |acc, &a| if acc == 0 { 0 } else { self.graph.step(acc, a) })
    }

    /// `r(A, α)`: ranges of the `α`-labelled paths starting in `A`.
    pub fn relative_range(&self, set: VertexSet, word: &[Letter]) -> Result<VertexSet> {
        if !self.family.contains(set) {
            return Err(Error::NotInFamily(self.fmt_set(set)));
        }
        Ok(self.image(set, word))
    }

    /// `r(α) = r(E⁰, α)`.
    pub fn range(&self, word: &[Letter]) -> VertexSet {
        self.image(self.vertices(), word)
    }

    /// Letters labelling an edge that leaves `set`.
    pub fn letters_out(&self, set: VertexSet) -> Vec<Letter> {
        self.letters().filter(|&a| self.graph.step(set, a) != 0).collect()
    }

    pub fn sinks(&self) -> VertexSet {
        let mut emitting = 0;
        for &(s, _, _) in &self.graph.edges {
            emitting |= 1 << s;
        }
        self.vertices() & !emitting
    }

    /// Regularity with the quantifier ranging over family members below `set`.
    pub fn is_regular(&self, set: VertexSet) -> bool {
        if set == 0 {
            return false;
        }
        self.family.atoms_below(set).iter().all(|&atom| !self.letters_out(atom).is_empty())
    }

    pub fn is_labelled_path(&self, word: &[Letter]) -> bool {
        word.is_empty() || self.range(word) != 0
    }

    /// Labelled paths of length exactly `n`, in lexicographic order.
    pub fn labelled_paths(&self, n: usize) -> Vec<Word> {
        let mut layer: Vec<(Word, VertexSet)> = vec![(Vec::new(), self.vertices())];
        for _ in 0..n {
            let mut next = Vec::new();
            for (w, set) in &layer {
                for a in self.letters() {
                    let r = self.graph.step(*set, a);
                    if r != 0 {
                        let mut w2 = w.clone();
                        w2.push(a);
                        next.push((w2, r));
                    }
                }
            }
            layer = next;
        }
        layer.into_iter().map(|(w, _)| w).collect()
    }

    /// Labelled paths of every length up to `max_len`, shortest first.
    pub fn labelled_paths_up_to(&self, max_len: usize) -> Vec<Word> {
        (0..=max_len).flat_map(|n| self.labelled_paths(n)).collect()
    }

    /// Checks closure of the family under ranges and relative ranges and the
    /// weak left-resolving identity. Single letters suffice because relative
    /// ranges compose.
    pub fn validate_normal(&self) -> ValidationReport {
        let mut violations = Vec::new();
        // Ranges of nonempty labelled paths, each distinct set with its shortest word.
        let mut seen: BTreeMap<VertexSet, Word> = BTreeMap::new();
        let mut queue: VecDeque<(VertexSet, Word)> = VecDeque::new();
        for a in self.letters() {
            queue.push_back((self.graph.step(self.vertices(), a), vec![a]));
        }
        while let Some((set, word)) = queue.pop_front() {
            if set == 0 || seen.contains_key(&set) {
                continue;
            }
            seen.insert(set, word.clone());
            if !self.family.contains(set) {
                violations.push(Violation::RangeNotInFamily { word: word.clone(), range: set });
            }
            for a in self.letters() {
                let mut w = word.clone();
                w.push(a);
                queue.push_back((self.graph.step(set, a), w));
            }
        }
        let atoms = self.family.all_atoms();
        for a in self.letters() {
            for &x in atoms {
                let r = self.graph.step(x, a);
                if !self.family.contains(r) {
                    violations.push(Violation::RelativeRangeNotInFamily { set: x, letter: a, range: r });
                }
            }
            // On atoms the identity reduces to disjointness of images.
            for (i, &x) in atoms.iter().enumerate() {
                for &y in &atoms[i + 1..] {
                    if self.graph.step(x, a) & self.graph.step(y, a) != 0 {
                        violations.push(Violation::NotWeaklyLeftResolving { a: x, b: y, letter: a });
                    }
                }
            }
        }
        ValidationReport { violations }
    }

    pub fn describe_violation(&self, v: &Violation) -> String {
        match v {
            Violation::RangeNotInFamily { word, range } => {
                format!("r({})={} is not in the family", self.fmt_word(word), self.fmt_set(*range))
            }
            Violation::RelativeRangeNotInFamily { set, letter, range } => format!(
                "r({},{})={} is not in the family",
                self.fmt_set(*set),
                self.fmt_word(&[*letter]),
                self.fmt_set(*range)
            ),
            Violation::NotWeaklyLeftResolving { a, b, letter } => format!(
                "r({}∩{},{}) differs from the intersection of the relative ranges",
                self.fmt_set(*a),
                self.fmt_set(*b),
                self.fmt_word(&[*letter])
            ),
        }
    }

    // ---- names and notation ----

    pub fn letter_char(&self, a: Letter) -> char {
        self.graph.letters[a as usize]
    }

    pub fn letter_index(&self, c: char) -> Option<Letter> {
        self.graph.letters.binary_search(&c).ok().map(|i| i as Letter)
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.graph.vertex_names.iter().position(|n| n == name)
    }

    pub fn fmt_word(&self, word: &[Letter]) -> String {
        if word.is_empty() {
            EMPTY_WORD.to_string()
        } else {
            word.iter().map(|&a| self.letter_char(a)).collect()
        }
    }

    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let text = text.trim();
        if text == EMPTY_WORD {
            return Ok(Vec::new());
        }
        text.chars()
            .map(|c| self.letter_index(c).ok_or_else(|| Error::Input(format!("unknown letter {c:?}"))))
            .collect()
    }

    pub fn set_names(&self, set: VertexSet) -> Vec<String> {
        members(set).map(|i| self.graph.vertex_names[i].clone()).collect()
    }

    pub fn fmt_set(&self, set: VertexSet) -> String {
        format!("{{{}}}", self.set_names(set).join(","))
    }

    pub fn parse_set<S: AsRef<str>>(&self, names: &[S]) -> Result<VertexSet> {
        let mut set = 0;
        for n in names {
            let n = n.as_ref().trim();
            let i = self.vertex_index(n).ok_or_else(|| Error::Input(format!("unknown vertex {n:?}")))?;
            set |= 1 << i;
        }
        Ok(set)
    }

    /// Parses `{v1,v2}` (braces optional).
    pub fn parse_set_text(&self, text: &str) -> Result<VertexSet> {
        let inner = text.trim().trim_start_matches('{').trim_end_matches('}');
        let names: Vec<&str> = inner.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
        self.parse_set(&names)
    }

    // ---- JSON ----

    pub fn from_json_str(text: &str) -> Result<Self> {
        let doc: SpaceJson =
            serde_json::from_str(text).map_err(|e| Error::Input(format!("space JSON: {e}")))?;
        Self::from_json(&doc)
    }

    /// Builds the space described by `doc` without validating it.
    pub fn from_json(doc: &SpaceJson) -> Result<Self> {
        let mut edges = Vec::with_capacity(doc.edges.len());
        for e in &doc.edges {
            let mut chars = e.label.chars();
            let (Some(c), None) = (chars.next(), chars.next()) else {
                return input(format!("label {:?} must be a single character", e.label));
            };
            edges.push((e.src.clone(), c, e.dst.clone()));
        }
        let graph = LabelledGraph::new(doc.vertices.clone(), &edges)?;
        let n = graph.vertex_count();
        let family = match &doc.family {
            FamilyJson::Powerset => FiniteSetAlgebra::powerset(n)?,
            FamilyJson::Generated { generators } => {
                let tmp = Self { graph: graph.clone(), family: FiniteSetAlgebra::powerset(0)? };
                let gens = generators.iter().map(|g| tmp.parse_set(g)).collect::<Result<Vec<_>>>()?;
                FiniteSetAlgebra::close_generators(n, &gens)?
            }
        };
        Self::new(graph, family)
    }

    pub fn to_json(&self) -> SpaceJson {
        let name = |i: usize| self.graph.vertex_names[i].clone();
        SpaceJson {
            vertices: self.graph.vertex_names.clone(),
            edges: self
                .graph
                .edges
                .iter()
                .map(|&(s, a, t)| EdgeJson { src: name(s), label: self.letter_char(a).to_string(), dst: name(t) })
                .collect(),
            family: FamilyJson::Generated {
                generators: self.family.all_atoms().iter().map(|&a| self.set_names(a)).collect(),
            },
        }
    }
}

impl fmt::Display for LabelledSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<String> = self
            .graph
            .edges
            .iter()
            .map(|&(s, a, t)| {
                format!("{}-{}->{}", self.graph.vertex_names[s], self.letter_char(a), self.graph.vertex_names[t])
            })
            .collect();
        write!(f, "[{}] with {} family atoms", edges.join(" "), self.family.all_atoms().len())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeJson {
    pub src: String,
    pub label: String,
    pub dst: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum FamilyJson {
    Powerset,
    Generated { generators: Vec<Vec<String>> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceJson {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeJson>,
    pub family: FamilyJson,
}

/// Convenience constructor used throughout the tests and examples.
pub fn space_from_edges(
    vertices: &[&str],
    edges: &[(&str, char, &str)],
    generators: Option<&[&[&str]]>,
) -> Result<LabelledSpace> {
    let doc = SpaceJson {
        vertices: vertices.iter().map(|s| s.to_string()).collect(),
        edges: edges
            .iter()
            .map(|(s, l, t)| EdgeJson { src: s.to_string(), label: l.to_string(), dst: t.to_string() })
            .collect(),
        family: match generators {
            None => FamilyJson::Powerset,
            Some(gs) => FamilyJson::Generated {
                generators: gs.iter().map(|g| g.iter().map(|s| s.to_string()).collect()).collect(),
            },
        },
    };
    LabelledSpace::from_json(&doc)
}

/// The running two-vertex example: `1 -a-> 1`, `1 -a-> 2`, `2 -b-> 1`, powerset family.
pub fn running_example() -> LabelledSpace {
    space_from_edges(&["1", "2"], &[("1", 'a', "1"), ("1", 'a', "2"), ("2", 'b', "1")], None)
        .expect("static example is well formed")
}

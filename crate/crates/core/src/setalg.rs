//! Finite Boolean set algebras over a vertex universe of at most 64 points.
//!
//! Sets are bit-vectors; an algebra is stored through its atoms, which is
//! enough to decide membership and to enumerate elements on demand.

use crate::error::{Error, Result};

/// A subset of the vertex universe, bit `i` standing for vertex `i`.
pub type VertexSet = u64;

/// Largest universe representable by [`VertexSet`].
pub const MAX_UNIVERSE: usize = 64;

/// Largest number of atoms for which elements may be enumerated.
pub const MAX_ATOMS: usize = 24;

/// Set with every vertex below `n`.
pub fn full_set(n: usize) -> VertexSet {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Iterator over the vertex indices in `set`, ascending.
pub fn members(set: VertexSet) -> impl Iterator<Item = usize> {
    let mut rest = set;
    std::iter::from_fn(move || {
        if rest == 0 {
            None
        } else {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(i)
        }
    })
}

pub fn is_subset(a: VertexSet, b: VertexSet) -> bool {
    a & !b == 0
}

/// Canonical element order: by cardinality, then by numeric value.
pub fn canonical_key(set: VertexSet) -> (u32, u64) {
    (set.count_ones(), set)
}

/// A family of vertex sets containing the empty set and closed under
/// intersection, union and relative complement.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteSetAlgebra {
    universe_size: usize,
    atoms: Vec<VertexSet>,
    generators: Vec<VertexSet>,
}

impl FiniteSetAlgebra {
    /// Smallest algebra containing `generators`.
    pub fn close_generators(universe_size: usize, generators: &[VertexSet]) -> Result<Self> {
        if universe_size > MAX_UNIVERSE {
            return Err(Error::TooLarge(format!("universe of {universe_size} vertices")));
        }
        let universe = full_set(universe_size);
        let mut atoms: Vec<VertexSet> = Vec::new();
        for &g in generators {
            if !is_subset(g, universe) {
                return Err(Error::Input(format!(
                    "generator {g:#x} leaves the universe of {universe_size} vertices"
                )));
            }
            // Refine every existing block by g, then add the part of g not yet covered.
            let covered = atoms.iter().fold(0, |acc, a| acc | a);
            let mut refined = Vec::with_capacity(atoms.len() * 2 + 1);
            for &a in &atoms {
                for part in [a & g, a & !g] {
                    if part != 0 {
                        refined.push(part);
                    }
                }
            }
            if g & !covered != 0 {
                refined.push(g & !covered);
            }
            atoms = refined;
        }
        if atoms.len() > MAX_ATOMS {
            return Err(Error::TooLarge(format!("{} atoms", atoms.len())));
        }
        atoms.sort_by_key(|&a| canonical_key(a));
        Ok(Self { universe_size, atoms, generators: generators.to_vec() })
    }

    /// Every subset of the universe.
    pub fn powerset(universe_size: usize) -> Result<Self> {
        let singles: Vec<VertexSet> = (0..universe_size).map(|i| 1u64 << i).collect();
        Self::close_generators(universe_size, &singles)
    }

    pub fn universe_size(&self) -> usize {
        self.universe_size
    }

    pub fn generators(&self) -> &[VertexSet] {
        &self.generators
    }

    /// All atoms, in canonical order.
    pub fn all_atoms(&self) -> &[VertexSet] {
        &self.atoms
    }

    /// Largest element: the union of all atoms.
    pub fn top(&self) -> VertexSet {
        self.atoms.iter().fold(0, |acc, a| acc | a)
    }

    /// Number of elements, `2^(atoms)`.
    pub fn len(&self) -> usize {
        1usize << self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, set: VertexSet) -> bool {
        is_subset(set, self.top())
            && self.atoms.iter().all(|&a| a & set == 0 || is_subset(a, set))
    }

    /// All elements in canonical order.
    pub fn elements(&self) -> Vec<VertexSet> {
        let mut out: Vec<VertexSet> = (0..self.len())
            .map(|mask| {
                members(mask as u64).fold(0, |acc, i| acc | self.atoms[i])
            })
            .collect();
        out.sort_by_key(|&s| canonical_key(s));
        out
    }

    fn require(&self, set: VertexSet) -> Result<()> {
        if self.contains(set) {
            Ok(())
        } else {
            Err(Error::NotInFamily(format!("{set:#x}")))
        }
    }

    /// Atoms below `bound`; they are disjoint and their union is `bound`.
    pub fn atoms(&self, bound: VertexSet) -> Result<Vec<VertexSet>> {
        self.require(bound)?;
        Ok(self.atoms_below(bound))
    }

    /// Atoms contained in `set`, without a membership check.
    pub fn atoms_below(&self, set: VertexSet) -> Vec<VertexSet> {
        self.atoms.iter().copied().filter(|&a| is_subset(a, set)).collect()
    }

    /// The atom containing vertex `v`, if `v` is covered by the family.
    pub fn atom_of(&self, v: usize) -> Option<VertexSet> {
        self.atoms.iter().copied().find(|&a| a >> v & 1 == 1)
    }

    /// The restricted algebra `{B : B ⊆ bound}`.
    pub fn restrict(&self, bound: VertexSet) -> Result<RestrictedAlgebra<'_>> {
        self.require(bound)?;
        Ok(RestrictedAlgebra { parent: self, top: bound })
    }

    /// One principal ultrafilter per atom below a nonempty `bound`.
    pub fn ultrafilters(&self, bound: VertexSet) -> Result<Vec<UltrafilterRep>> {
        self.require(bound)?;
        if bound == 0 {
            return Err(Error::NoFilter);
        }
        Ok(self
            .atoms_below(bound)
            .into_iter()
            .map(|atom| UltrafilterRep { bound, atom })
            .collect())
    }
}

/// The elements of a parent algebra lying below a fixed bound.
#[derive(Debug, Clone, Copy)]
pub struct RestrictedAlgebra<'a> {
    pub parent: &'a FiniteSetAlgebra,
    pub top: VertexSet,
}

impl RestrictedAlgebra<'_> {
    pub fn contains(&self, set: VertexSet) -> bool {
        is_subset(set, self.top) && self.parent.contains(set)
    }

    pub fn atoms(&self) -> Vec<VertexSet> {
        self.parent.atoms_below(self.top)
    }

    pub fn elements(&self) -> Vec<VertexSet> {
        self.parent.elements().into_iter().filter(|&s| is_subset(s, self.top)).collect()
    }
}

/// The principal ultrafilter `{B : atom ⊆ B ⊆ bound}` of a restricted algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UltrafilterRep {
    pub bound: VertexSet,
    pub atom: VertexSet,
}

impl UltrafilterRep {
    /// Membership of `set`, assumed to be an element of the parent algebra.
    pub fn contains(&self, set: VertexSet) -> bool {
        is_subset(self.atom, set) && is_subset(set, self.bound)
    }
}

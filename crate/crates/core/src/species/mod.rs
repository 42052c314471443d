//! Species of structures as enumerable functors on canonical finite sets.
//!
//! Every structure lives on `U = {0, .., n-1}`; a species lists its
//! structures level by level and transports them along permutations. The
//! payload encoding is canonical, so equality of structures is equality of
//! encodings and the derived order is a total order used for deduplication
//! and for choosing orbit representatives.

mod atoms;
mod composite;

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::perm::{factorial, Permutation};

pub use atoms::{Atom, AtomKind};
pub use composite::{power, Cartesian, Compose, Derivative, FreeProduct, Product, Sum};

/// Orientation of an oriented set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

/// One block of a free-product structure.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FreeBlock {
    /// Index of the factor species this block is drawn from.
    pub factor: usize,
    /// Sorted points of the block.
    pub block: Vec<usize>,
    /// Structure of the factor species on the block, relabeled canonically.
    pub structure: Structure,
}

/// Species-specific canonical encoding of a structure.
///
/// Sub-structures of composite payloads always live on canonical sets; a
/// subset `S` of `U` is relabeled through its sorted order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Payload {
    /// The unique structure of the unit species on the empty set.
    Empty,
    /// The set `U` itself (species `E` and `E₊`).
    Set,
    /// The singleton structure of `X`.
    Singleton,
    Oriented(Sign),
    /// A linear order as the map position -> element.
    Order(Vec<usize>),
    /// A cyclic permutation by images.
    Cycle(Vec<usize>),
    /// A rooted tree as the parent map; the root is its own parent.
    Tree(Vec<usize>),
    /// Sorted edge list, never containing both orientations of a pair.
    Digraph(Vec<(usize, usize)>),
    /// Ordered sequence of nonempty sorted blocks.
    Ballot(Vec<Vec<usize>>),
    /// A distinguished element.
    Element(usize),
    Sum(Side, Box<Structure>),
    Product { left_set: Vec<usize>, left: Box<Structure>, right: Box<Structure> },
    Cartesian(Box<Structure>, Box<Structure>),
    /// An `F'` structure on `n` points: an `F` structure on `n + 1` points
    /// whose added point is `n`.
    Derived(Box<Structure>),
    /// Blocks sorted by minimal element; `outer` lives on the block indices.
    Composite { blocks: Vec<Vec<usize>>, outer: Box<Structure>, inner: Vec<Structure> },
    Free(Vec<FreeBlock>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Structure {
    pub level: usize,
    pub payload: Payload,
}

impl Structure {
    pub fn new(level: usize, payload: Payload) -> Self {
        Self { level, payload }
    }
}

fn join<T: fmt::Display>(items: &[T]) -> String {
    items.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn blocks_str(blocks: &[Vec<usize>]) -> String {
    blocks.iter().map(|b| format!("{{{}}}", join(b))).collect::<Vec<_>>().join("")
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.payload {
            Payload::Empty => write!(f, "1"),
            Payload::Set => write!(f, "E{}", self.level),
            Payload::Singleton => write!(f, "X"),
            Payload::Oriented(Sign::Plus) => write!(f, "E{}+", self.level),
            Payload::Oriented(Sign::Minus) => write!(f, "E{}-", self.level),
            Payload::Order(v) => write!(f, "L[{}]", join(v)),
            Payload::Cycle(v) => write!(f, "C[{}]", join(v)),
            Payload::Tree(v) => write!(f, "A[{}]", join(v)),
            Payload::Digraph(edges) => {
                let e: Vec<String> = edges.iter().map(|(a, b)| format!("{a}>{b}")).collect();
                write!(f, "D[{}]", e.join(","))
            }
            Payload::Ballot(blocks) => write!(f, "Bal[{}]", blocks_str(blocks)),
            Payload::Element(u) => write!(f, "eps[{u}]"),
            Payload::Sum(Side::Left, s) => write!(f, "inl({s})"),
            Payload::Sum(Side::Right, s) => write!(f, "inr({s})"),
            Payload::Product { left_set, left, right } => {
                write!(f, "({{{}}}:{left};{right})", join(left_set))
            }
            Payload::Cartesian(a, b) => write!(f, "<{a}&{b}>"),
            Payload::Derived(s) => write!(f, "d({s})"),
            Payload::Composite { blocks, outer, inner } => {
                write!(f, "[{}|{outer}|{}]", blocks_str(blocks), join(inner))
            }
            Payload::Free(parts) => {
                let p: Vec<String> = parts
                    .iter()
                    .map(|b| format!("{}:{{{}}}:{}", b.factor, join(&b.block), b.structure))
                    .collect();
                write!(f, "free[{}]", p.join(";"))
            }
        }
    }
}

/// A species of structures: per level a finite list of structures together
/// with a functorial transport along permutations.
pub trait Species: Send + Sync + fmt::Debug {
    /// Printed expression naming this species.
    fn name(&self) -> String;

    /// All structures at level `n`, sorted and deduplicated.
    fn enumerate(&self, n: usize) -> Arc<Vec<Structure>>;

    /// `F[σ](s)`.
    fn transport(&self, s: &Structure, sigma: &Permutation) -> Result<Structure>;

    fn contains(&self, s: &Structure) -> bool {
        self.enumerate(s.level).binary_search(s).is_ok()
    }
}

pub type SpeciesRef = Arc<dyn Species>;

pub(crate) fn check_level(s: &Structure, sigma: &Permutation) -> Result<()> {
    if s.level != sigma.len() {
        return Err(Error::LevelMismatch { expected: s.level, found: sigma.len() });
    }
    Ok(())
}

pub(crate) fn foreign(species: &dyn Species) -> Error {
    Error::ForeignStructure { species: species.name() }
}

/// Per-level memo of enumerations.
#[derive(Debug, Default)]
pub(crate) struct LevelCache {
    levels: Mutex<HashMap<usize, Arc<Vec<Structure>>>>,
}

impl LevelCache {
    pub fn get_or(&self, n: usize, build: impl FnOnce() -> Vec<Structure>) -> Arc<Vec<Structure>> {
        if let Some(v) = self.levels.lock().unwrap().get(&n) {
            return v.clone();
        }
        let mut v = build();
        v.sort_unstable();
        v.dedup();
        let v = Arc::new(v);
        self.levels.lock().unwrap().entry(n).or_insert(v).clone()
    }
}

/// A coloring of the points of a level: `coloring[u]` is the color of `u`.
pub type Coloring = Vec<u8>;

/// Colors transported along `σ`: the result is `c ∘ σ⁻¹`.
pub fn transport_coloring(c: &[u8], sigma: &Permutation) -> Coloring {
    let mut out = vec![0; c.len()];
    for (u, &color) in c.iter().enumerate() {
        out[sigma.apply(u)] = color;
    }
    out
}

/// Orbit data of a (colored) structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitInfo {
    pub representative: Structure,
    pub coloring: Coloring,
    pub orbit_size: u64,
    pub stabilizer_order: u64,
}

pub fn enumerate(species: &dyn Species, n: usize) -> Arc<Vec<Structure>> {
    species.enumerate(n)
}

pub fn transport(species: &dyn Species, s: &Structure, sigma: &Permutation) -> Result<Structure> {
    species.transport(s, sigma)
}

/// `|H_s|`: the number of permutations fixing `s`.
pub fn stabilizer_order(species: &dyn Species, s: &Structure) -> Result<u64> {
    let mut count = 0;
    for sigma in Permutation::all(s.level) {
        if species.transport(s, &sigma)? == *s {
            count += 1;
        }
    }
    Ok(count)
}

/// Orbit of the colored structure `(s, c)` under `(s, c) ↦ (F[σ]s, c∘σ⁻¹)`,
/// with its encoding-minimal representative and colored stabilizer.
pub fn colored_orbit(species: &dyn Species, s: &Structure, c: &[u8]) -> Result<OrbitInfo> {
    if c.len() != s.level {
        return Err(Error::LevelMismatch { expected: s.level, found: c.len() });
    }
    let mut orbit = BTreeSet::new();
    let mut stabilizer = 0;
    for sigma in Permutation::all(s.level) {
        let t = species.transport(s, &sigma)?;
        let d = transport_coloring(c, &sigma);
        if t == *s && d == c {
            stabilizer += 1;
        }
        orbit.insert((t, d));
    }
    let (representative, coloring) = orbit.iter().next().cloned().expect("orbit is nonempty");
    Ok(OrbitInfo {
        representative,
        coloring,
        orbit_size: orbit.len() as u64,
        stabilizer_order: stabilizer,
    })
}

/// Uncolored orbit decomposition of level `n`.
pub fn orbits(species: &dyn Species, n: usize) -> Result<Vec<OrbitInfo>> {
    let structures = species.enumerate(n);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let coloring = vec![0u8; n];
    for s in structures.iter() {
        if seen.contains(s) {
            continue;
        }
        for sigma in Permutation::all(n) {
            seen.insert(species.transport(s, &sigma)?);
        }
        out.push(colored_orbit(species, s, &coloring)?);
    }
    debug_assert!(out.iter().all(|o| o.orbit_size * o.stabilizer_order == factorial(n)));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn atom(kind: AtomKind) -> SpeciesRef {
        Arc::new(Atom::new(kind))
    }

    #[test]
    fn enumerate_examples() {
        assert_eq!(atom(AtomKind::E).enumerate(5).len(), 1);
        assert_eq!(atom(AtomKind::C).enumerate(4).len(), 6);
        assert_eq!(atom(AtomKind::A).enumerate(3).len(), 9);
        assert_eq!(atom(AtomKind::Bal).enumerate(3).len(), 13);
        assert!(atom(AtomKind::C).enumerate(0).is_empty());
        assert!(atom(AtomKind::A).enumerate(0).is_empty());
    }

    #[test]
    fn transport_examples() {
        let l = atom(AtomKind::L);
        let s = Structure::new(3, Payload::Order(vec![0, 1, 2]));
        assert_eq!(l.transport(&s, &Permutation::identity(3)).unwrap(), s);

        // two-vertex tree rooted at 0, vertex 1 attached to 0
        let a = atom(AtomKind::A);
        let t = Structure::new(2, Payload::Tree(vec![0, 0]));
        let moved = a.transport(&t, &Permutation::transposition(2, 0, 1)).unwrap();
        assert_eq!(moved.payload, Payload::Tree(vec![1, 1]));

        let epm = atom(AtomKind::Epm);
        let plus = Structure::new(3, Payload::Oriented(Sign::Plus));
        let moved = epm.transport(&plus, &Permutation::transposition(3, 0, 2)).unwrap();
        assert_eq!(moved.payload, Payload::Oriented(Sign::Minus));
    }

    #[test]
    fn transport_level_mismatch() {
        let l = atom(AtomKind::L);
        let s = Structure::new(3, Payload::Order(vec![0, 1, 2]));
        assert!(matches!(
            l.transport(&s, &Permutation::identity(2)),
            Err(Error::LevelMismatch { .. })
        ));
    }

    #[test]
    fn stabilizer_examples() {
        let e = atom(AtomKind::E);
        assert_eq!(stabilizer_order(&*e, &e.enumerate(4)[0]).unwrap(), 24);
        let l = atom(AtomKind::L);
        for s in l.enumerate(4).iter() {
            assert_eq!(stabilizer_order(&*l, s).unwrap(), 1);
        }
        let c = atom(AtomKind::C);
        for s in c.enumerate(4).iter() {
            assert_eq!(stabilizer_order(&*c, s).unwrap(), 4);
        }
    }

    #[test]
    fn colored_orbit_examples() {
        let e = atom(AtomKind::E);
        let s = e.enumerate(3)[0].clone();
        assert_eq!(colored_orbit(&*e, &s, &[1, 1, 1]).unwrap().stabilizer_order, 6);
        assert_eq!(colored_orbit(&*e, &s, &[0, 1, 2]).unwrap().stabilizer_order, 1);
        let l = atom(AtomKind::L);
        for s in l.enumerate(3).iter() {
            assert_eq!(colored_orbit(&*l, s, &[0, 0, 1]).unwrap().stabilizer_order, 1);
        }
    }

    #[test]
    fn colored_orbit_representative_is_minimal() {
        let e = atom(AtomKind::E);
        let s = e.enumerate(3)[0].clone();
        let info = colored_orbit(&*e, &s, &[1, 0, 1]).unwrap();
        assert_eq!(info.coloring, vec![0, 1, 1]);
        assert_eq!(info.orbit_size, 3);
    }

    #[test]
    fn coloring_transport_moves_colors_with_points() {
        let sigma = Permutation::from_images(vec![2, 0, 1]).unwrap();
        // point 0 (color 7) moves to 2
        assert_eq!(transport_coloring(&[7, 8, 9], &sigma), vec![8, 9, 7]);
    }
}

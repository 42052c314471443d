//! The concrete species: sets, oriented sets, linear orders, cycles,
//! singletons, rooted trees, simple digraphs, ballots and elements.

use std::sync::Arc;

use super::{check_level, foreign, LevelCache, Payload, Sign, Species, Structure};
use crate::combinat::{cartesian_product, ordered_set_partitions, set_partitions};
use crate::error::Result;
use crate::perm::Permutation;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AtomKind {
    /// The unit species: one structure on the empty set, none elsewhere.
    One,
    /// Sets.
    E,
    /// Nonempty sets.
    Eplus,
    /// Oriented sets.
    Epm,
    /// Linear orders.
    L,
    /// Cyclic permutations.
    C,
    /// Singletons.
    X,
    /// Rooted trees.
    A,
    /// Simple directed graphs.
    D,
    /// Ballots (ordered set partitions).
    Bal,
    /// Elements.
    Eps,
}

impl AtomKind {
    pub fn tag(self) -> &'static str {
        match self {
            AtomKind::One => "1",
            AtomKind::E => "E",
            AtomKind::Eplus => "Eplus",
            AtomKind::Epm => "Epm",
            AtomKind::L => "L",
            AtomKind::C => "C",
            AtomKind::X => "X",
            AtomKind::A => "A",
            AtomKind::D => "D",
            AtomKind::Bal => "Bal",
            AtomKind::Eps => "eps",
        }
    }
}

#[derive(Debug)]
pub struct Atom {
    kind: AtomKind,
    cache: LevelCache,
}

impl Atom {
    pub fn new(kind: AtomKind) -> Self {
        Self { kind, cache: LevelCache::default() }
    }

    pub fn kind(&self) -> AtomKind {
        self.kind
    }

    fn build(&self, n: usize) -> Vec<Structure> {
        let points: Vec<usize> = (0..n).collect();
        let wrap = |p: Payload| Structure::new(n, p);
        match self.kind {
            AtomKind::One => {
                if n == 0 {
                    vec![wrap(Payload::Empty)]
                } else {
                    vec![]
                }
            }
            AtomKind::E => vec![wrap(Payload::Set)],
            AtomKind::Eplus => {
                if n > 0 {
                    vec![wrap(Payload::Set)]
                } else {
                    vec![]
                }
            }
            AtomKind::Epm => vec![wrap(Payload::Oriented(Sign::Plus)), wrap(Payload::Oriented(Sign::Minus))],
            AtomKind::X => {
                if n == 1 {
                    vec![wrap(Payload::Singleton)]
                } else {
                    vec![]
                }
            }
            AtomKind::L => Permutation::all(n)
                .into_iter()
                .map(|p| wrap(Payload::Order(p.images().to_vec())))
                .collect(),
            AtomKind::C => cycles(n).into_iter().map(|c| wrap(Payload::Cycle(c))).collect(),
            AtomKind::A => {
                if n == 0 {
                    return vec![];
                }
                rooted_trees(&points)
                    .into_iter()
                    .map(|parents| {
                        let mut f = vec![0; n];
                        for (u, p) in parents {
                            f[u] = p;
                        }
                        wrap(Payload::Tree(f))
                    })
                    .collect()
            }
            AtomKind::D => {
                let pairs: Vec<(usize, usize)> =
                    (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
                let choices: Vec<Vec<Option<(usize, usize)>>> = pairs
                    .iter()
                    .map(|&(u, v)| vec![None, Some((u, v)), Some((v, u))])
                    .collect();
                cartesian_product(&choices)
                    .into_iter()
                    .map(|choice| {
                        let mut edges: Vec<(usize, usize)> = choice.into_iter().flatten().collect();
                        edges.sort_unstable();
                        wrap(Payload::Digraph(edges))
                    })
                    .collect()
            }
            AtomKind::Bal => ordered_set_partitions(&points)
                .into_iter()
                .map(|b| wrap(Payload::Ballot(b)))
                .collect(),
            AtomKind::Eps => points.into_iter().map(|u| wrap(Payload::Element(u))).collect(),
        }
    }
}

/// Cyclic permutations of `{0, .., n-1}` with no fixed power below `n`.
/// Level 0 has none; level 1 has the identity.
fn cycles(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![];
    }
    Permutation::all(n - 1)
        .into_iter()
        .map(|p| {
            // cycle 0 -> p[0]+1 -> p[1]+1 -> ... -> 0
            let order: Vec<usize> = std::iter::once(0).chain(p.images().iter().map(|&i| i + 1)).collect();
            let mut images = vec![0; n];
            for w in 0..n {
                images[order[w]] = order[(w + 1) % n];
            }
            images
        })
        .collect()
}

/// Rooted trees on `points` as parent assignments, built from the recursive
/// decomposition tree = root + set of subtrees.
fn rooted_trees(points: &[usize]) -> Vec<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    for (i, &root) in points.iter().enumerate() {
        let rest: Vec<usize> = points.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &u)| u).collect();
        for partition in set_partitions(&rest) {
            let per_block: Vec<Vec<Vec<(usize, usize)>>> = partition
                .iter()
                .map(|block| {
                    rooted_trees(block)
                        .into_iter()
                        .map(|mut t| {
                            for entry in t.iter_mut() {
                                if entry.0 == entry.1 {
                                    entry.1 = root;
                                }
                            }
                            t
                        })
                        .collect()
                })
                .collect();
            for choice in cartesian_product(&per_block) {
                let mut tree = vec![(root, root)];
                tree.extend(choice.into_iter().flatten());
                out.push(tree);
            }
        }
    }
    out
}

impl Species for Atom {
    fn name(&self) -> String {
        self.kind.tag().to_string()
    }

    fn enumerate(&self, n: usize) -> Arc<Vec<Structure>> {
        self.cache.get_or(n, || self.build(n))
    }

    fn transport(&self, s: &Structure, sigma: &Permutation) -> Result<Structure> {
        check_level(s, sigma)?;
        let n = s.level;
        let conj = |f: &[usize]| {
            let mut g = vec![0; f.len()];
            for (u, &fu) in f.iter().enumerate() {
                g[sigma.apply(u)] = sigma.apply(fu);
            }
            g
        };
        let payload = match (self.kind, &s.payload) {
            (AtomKind::One, Payload::Empty) => Payload::Empty,
            (AtomKind::E | AtomKind::Eplus, Payload::Set) => Payload::Set,
            (AtomKind::X, Payload::Singleton) => Payload::Singleton,
            (AtomKind::Epm, Payload::Oriented(sign)) => {
                Payload::Oriented(if sigma.is_odd() { sign.flip() } else { *sign })
            }
            (AtomKind::L, Payload::Order(f)) => Payload::Order(f.iter().map(|&u| sigma.apply(u)).collect()),
            (AtomKind::C, Payload::Cycle(p)) => Payload::Cycle(conj(p)),
            (AtomKind::A, Payload::Tree(f)) => Payload::Tree(conj(f)),
            (AtomKind::D, Payload::Digraph(edges)) => {
                let mut e: Vec<(usize, usize)> =
                    edges.iter().map(|&(a, b)| (sigma.apply(a), sigma.apply(b))).collect();
                e.sort_unstable();
                Payload::Digraph(e)
            }
            (AtomKind::Bal, Payload::Ballot(blocks)) => Payload::Ballot(
                blocks
                    .iter()
                    .map(|b| {
                        let mut m: Vec<usize> = b.iter().map(|&u| sigma.apply(u)).collect();
                        m.sort_unstable();
                        m
                    })
                    .collect(),
            ),
            (AtomKind::Eps, Payload::Element(u)) => Payload::Element(sigma.apply(*u)),
            _ => return Err(foreign(self)),
        };
        Ok(Structure::new(n, payload))
    }
}

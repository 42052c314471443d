//! Weights of the concrete species.

use std::sync::Arc;

use num_complex::Complex64;

use super::{c, check_nonnegative, check_unit_interval, Neighbors, Weight};
use crate::error::Result;
use crate::species::{Atom, AtomKind, Payload, SpeciesRef, Structure};

fn zero() -> Complex64 {
    c(0.0)
}

/// `ω_E ≡ 1` on sets, or on nonempty sets.
#[derive(Debug)]
pub struct SetWeight {
    species: SpeciesRef,
    nonempty: bool,
}

impl SetWeight {
    pub fn new() -> Self {
        Self { species: Arc::new(Atom::new(AtomKind::E)), nonempty: false }
    }

    /// The same weight restricted to nonempty sets.
    pub fn nonempty() -> Self {
        Self { species: Arc::new(Atom::new(AtomKind::Eplus)), nonempty: true }
    }
}

impl Default for SetWeight {
    fn default() -> Self {
        Self::new()
    }
}

impl Weight for SetWeight {
    fn name(&self) -> String {
        if self.nonempty { "Eplus" } else { "E" }.into()
    }
    fn species(&self) -> SpeciesRef {
        self.species.clone()
    }
    fn bound(&self) -> f64 {
        1.0
    }
    fn value(&self, _: &Structure, _: &Structure) -> Complex64 {
        c(1.0)
    }
    fn raise(&self, f: &Structure) -> Neighbors {
        vec![(Structure::new(f.level + 1, Payload::Set), c(1.0))]
    }
    fn lower(&self, g: &Structure) -> Neighbors {
        let min = if self.nonempty { 2 } else { 1 };
        if g.level < min {
            return vec![];
        }
        vec![(Structure::new(g.level - 1, Payload::Set), c(1.0))]
    }
}

/// `ω_L(f, g) = 1` iff `g` is `f` followed by the new point.
#[derive(Debug)]
pub struct OrderWeight {
    species: SpeciesRef,
}

impl OrderWeight {
    pub fn new() -> Self {
        Self { species: Arc::new(Atom::new(AtomKind::L)) }
    }
}

impl Default for OrderWeight {
    fn default() -> Self {
        Self::new()
    }
}

impl Weight for OrderWeight {
    fn name(&self) -> String {
        "L".into()
    }
    fn species(&self) -> SpeciesRef {
        self.species.clone()
    }
    fn bound(&self) -> f64 {
        1.0
    }
    fn value(&self, f: &Structure, g: &Structure) -> Complex64 {
        match (&f.payload, &g.payload) {
            (Payload::Order(a), Payload::Order(b)) if b.last() == Some(&f.level) && b[..f.level] == a[..] => c(1.0),
            _ => zero(),
        }
    }
    fn raise(&self, f: &Structure) -> Neighbors {
        let Payload::Order(a) = &f.payload else { return vec![] };
        let mut b = a.clone();
        b.push(f.level);
        vec![(Structure::new(f.level + 1, Payload::Order(b)), c(1.0))]
    }
    fn lower(&self, g: &Structure) -> Neighbors {
        match &g.payload {
            Payload::Order(b) if g.level > 0 && b[g.level - 1] == g.level - 1 => {
                vec![(Structure::new(g.level - 1, Payload::Order(b[..g.level - 1].to_vec())), c(1.0))]
            }
            _ => vec![],
        }
    }
}

/// `ω_{E±}`: 1 between equal orientations.
#[derive(Debug)]
pub struct OrientedWeight {
    species: SpeciesRef,
}

impl OrientedWeight {
    pub fn new() -> Self {
        Self { species: Arc::new(Atom::new(AtomKind::Epm)) }
    }
}

impl Default for OrientedWeight {
    fn default() -> Self {
        Self::new()
    }
}

impl Weight for OrientedWeight {
    fn name(&self) -> String {
        "Epm".into()
    }
    fn species(&self) -> SpeciesRef {
        self.species.clone()
    }
    fn bound(&self) -> f64 {
        1.0
    }
    fn value(&self, f: &Structure, g: &Structure) -> Complex64 {
        match (&f.payload, &g.payload) {
            (Payload::Oriented(a), Payload::Oriented(b)) if a == b => c(1.0),
            _ => zero(),
        }
    }
    fn raise(&self, f: &Structure) -> Neighbors {
        vec![(Structure::new(f.level + 1, f.payload.clone()), c(1.0))]
    }
    fn lower(&self, g: &Structure) -> Neighbors {
        if g.level == 0 {
            return vec![];
        }
        vec![(Structure::new(g.level - 1, g.payload.clone()), c(1.0))]
    }
}

/// Rooted-tree weight: 1 for attaching the new point as a leaf, plus `√c`
/// for the re-rooting `f ↦ f_*` that makes the new point the root.
#[derive(Debug)]
pub struct TreeWeight {
    species: SpeciesRef,
    c: f64,
    modified: bool,
}

impl TreeWeight {
    /// `ω_A`.
    pub fn new() -> Self {
        Self { species: Arc::new(Atom::new(AtomKind::A)), c: 0.0, modified: false }
    }

    /// `ω̃_A^c = ω_A + c^{1/2} δ_{f_*, g}`.
    pub fn modified(c: f64) -> Result<Self> {
        check_nonnegative("c", c)?;
        Ok(Self { species: Arc::new(Atom::new(AtomKind::A)), c, modified: true })
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// `f_*`: the old root now points to the new point, which becomes the root.
    pub fn reroot(f: &[usize]) -> Vec<usize> {
        let n = f.len();
        let mut g: Vec<usize> = f.iter().enumerate().map(|(u, &p)| if p == u { n } else { p }).collect();
        g.push(n);
        g
    }
}

impl Default for TreeWeight {
    fn default() -> Self {
        Self::new()
    }
}

impl Weight for TreeWeight {
    fn name(&self) -> String {
        if self.modified {
            format!("tree_c:{}", self.c)
        } else {
            "tree".into()
        }
    }
    fn species(&self) -> SpeciesRef {
        self.species.clone()
    }
    fn bound(&self) -> f64 {
        self.c.sqrt().max(1.0)
    }
    fn value(&self, f: &Structure, g: &Structure) -> Complex64 {
        let (Payload::Tree(a), Payload::Tree(b)) = (&f.payload, &g.payload) else { return zero() };
        let n = a.len();
        if b[n] != n {
            // leaf attached below an old vertex
            let is_leaf = !b[..n].contains(&n);
            if is_leaf && b[..n] == a[..] {
                return c(1.0);
            }
            zero()
        } else if self.c > 0.0 && n > 0 && *b == Self::reroot(a) {
            c(self.c.sqrt())
        } else {
            zero()
        }
    }
    fn raise(&self, f: &Structure) -> Neighbors {
        let Payload::Tree(a) = &f.payload else { return vec![] };
        let n = a.len();
        let mut out: Neighbors = (0..n)
            .map(|u| {
                let mut b = a.clone();
                b.push(u);
                (Structure::new(n + 1, Payload::Tree(b)), c(1.0))
            })
            .collect();
        if self.c > 0.0 && n > 0 {
            out.push((Structure::new(n + 1, Payload::Tree(Self::reroot(a))), c(self.c.sqrt())));
        }
        out
    }
    fn lower(&self, g: &Structure) -> Neighbors {
        let Payload::Tree(b) = &g.payload else { return vec![] };
        let Some(n) = b.len().checked_sub(1) else { return vec![] };
        if n == 0 {
            return vec![];
        }
        let children: Vec<usize> = (0..n).filter(|&u| b[u] == n).collect();
        if b[n] != n {
            if children.is_empty() {
                return vec![(Structure::new(n, Payload::Tree(b[..n].to_vec())), c(1.0))];
            }
            return vec![];
        }
        if self.c > 0.0 && children.len() == 1 {
            let mut a = b[..n].to_vec();
            a[children[0]] = children[0];
            return vec![(Structure::new(n, Payload::Tree(a)), c(self.c.sqrt()))];
        }
        vec![]
    }
}

/// `ω^{D,q}`: the new point gets outgoing edges to a subset `S` of the old
/// points, with amplitude `(q^{n-|S|}(1-q)^{|S|})^{1/2}`.
#[derive(Debug)]
pub struct DigraphWeight {
    species: SpeciesRef,
    q: f64,
}

impl DigraphWeight {
    pub fn new(q: f64) -> Result<Self> {
        check_unit_interval("q", q)?;
        Ok(Self { species: Arc::new(Atom::new(AtomKind::D)), q })
    }

    fn amplitude(&self, n: usize, out_degree: usize) -> f64 {
        // powi(0) is 1 also for a zero base
        (self.q.powi((n - out_degree) as i32) * (1.0 - self.q).powi(out_degree as i32)).sqrt()
    }
}

impl Weight for DigraphWeight {
    fn name(&self) -> String {
        format!("digraph:{}", self.q)
    }
    fn species(&self) -> SpeciesRef {
        self.species.clone()
    }
    fn bound(&self) -> f64 {
        1.0
    }
    fn value(&self, f: &Structure, g: &Structure) -> Complex64 {
        let (Payload::Digraph(a), Payload::Digraph(b)) = (&f.payload, &g.payload) else { return zero() };
        let n = f.level;
        if b.iter().any(|&(_, v)| v == n) {
            return zero();
        }
        let old: Vec<(usize, usize)> = b.iter().copied().filter(|&(u, _)| u != n).collect();
        if old != *a {
            return zero();
        }
        c(self.amplitude(n, b.len() - old.len()))
    }
    fn raise(&self, f: &Structure) -> Neighbors {
        let Payload::Digraph(a) = &f.payload else { return vec![] };
        let n = f.level;
        let mut out = Vec::new();
        for mask in 0..(1u64 << n) {
            let targets: Vec<usize> = (0..n).filter(|&u| mask & (1 << u) != 0).collect();
            let amp = self.amplitude(n, targets.len());
            if amp == 0.0 {
                continue;
            }
            let mut b = a.clone();
            b.extend(targets.iter().map(|&v| (n, v)));
            b.sort_unstable();
            out.push((Structure::new(n + 1, Payload::Digraph(b)), c(amp)));
        }
        out
    }
    fn lower(&self, g: &Structure) -> Neighbors {
        let Payload::Digraph(b) = &g.payload else { return vec![] };
        let Some(n) = g.level.checked_sub(1) else { return vec![] };
        if b.iter().any(|&(_, v)| v == n) {
            return vec![];
        }
        let a: Vec<(usize, usize)> = b.iter().copied().filter(|&(u, _)| u != n).collect();
        let amp = self.amplitude(n, b.len() - a.len());
        if amp == 0.0 {
            return vec![];
        }
        vec![(Structure::new(n, Payload::Digraph(a)), c(amp))]
    }
}

/// `ω_Bal`: `√q` for adding the new point to the last block, `√(1-q)` for
/// opening a new last block; the empty ballot goes to `({*})` with weight 1.
#[derive(Debug)]
pub struct BallotWeight {
    species: SpeciesRef,
    q: f64,
}

impl BallotWeight {
    pub fn new(q: f64) -> Result<Self> {
        check_unit_interval("q", q)?;
        Ok(Self { species: Arc::new(Atom::new(AtomKind::Bal)), q })
    }

    pub fn q(&self) -> f64 {
        self.q
    }
}

impl Weight for BallotWeight {
    fn name(&self) -> String {
        format!("ballot:{}", self.q)
    }
    fn species(&self) -> SpeciesRef {
        self.species.clone()
    }
    fn bound(&self) -> f64 {
        1.0
    }
    fn value(&self, f: &Structure, g: &Structure) -> Complex64 {
        self.lower(g).into_iter().find(|(s, _)| s == f).map_or(zero(), |(_, w)| w)
    }
    fn raise(&self, f: &Structure) -> Neighbors {
        let Payload::Ballot(blocks) = &f.payload else { return vec![] };
        let n = f.level;
        if blocks.is_empty() {
            return vec![(Structure::new(1, Payload::Ballot(vec![vec![0]])), c(1.0))];
        }
        let mut out = Vec::new();
        if self.q > 0.0 {
            let mut b = blocks.clone();
            b.last_mut().unwrap().push(n);
            out.push((Structure::new(n + 1, Payload::Ballot(b)), c(self.q.sqrt())));
        }
        if self.q < 1.0 {
            let mut b = blocks.clone();
            b.push(vec![n]);
            out.push((Structure::new(n + 1, Payload::Ballot(b)), c((1.0 - self.q).sqrt())));
        }
        out
    }
    fn lower(&self, g: &Structure) -> Neighbors {
        let Payload::Ballot(blocks) = &g.payload else { return vec![] };
        let Some(n) = g.level.checked_sub(1) else { return vec![] };
        let Some(last) = blocks.last() else { return vec![] };
        if last.last() != Some(&n) {
            return vec![];
        }
        let mut b = blocks.clone();
        let amp = if last.len() == 1 {
            b.pop();
            if b.is_empty() {
                1.0
            } else {
                (1.0 - self.q).sqrt()
            }
        } else {
            b.last_mut().unwrap().pop();
            self.q.sqrt()
        };
        if amp == 0.0 {
            return vec![];
        }
        vec![(Structure::new(n, Payload::Ballot(b)), c(amp))]
    }
}

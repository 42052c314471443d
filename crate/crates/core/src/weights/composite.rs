//! Weights on composite species.

use std::sync::Arc;

use num_complex::Complex64;

use super::{c, check_nonnegative, check_unit_interval, ElementWeightRef, Neighbors, TreeWeight, Weight, WeightRef};
use crate::error::{Error, Result};
use crate::species::{Cartesian, Compose, FreeBlock, FreeProduct, Payload, Product, Side, SpeciesRef, Structure, Sum};

fn zero() -> Complex64 {
    c(0.0)
}

/// A weight multiplied by a real constant.
#[derive(Debug)]
pub struct ScaledWeight {
    base: WeightRef,
    factor: f64,
}

impl ScaledWeight {
    pub fn new(base: WeightRef, factor: f64) -> Self {
        Self { base, factor }
    }
}

impl Weight for ScaledWeight {
    fn name(&self) -> String {
        format!("scaled:{}({})", self.factor, self.base.name())
    }
    fn species(&self) -> SpeciesRef {
        self.base.species()
    }
    fn bound(&self) -> f64 {
        self.factor.abs() * self.base.bound()
    }
    fn value(&self, f: &Structure, g: &Structure) -> Complex64 {
        self.base.value(f, g) * self.factor
    }
    fn raise(&self, f: &Structure) -> Neighbors {
        if self.factor == 0.0 {
            return vec![];
        }
        self.base.raise(f).into_iter().map(|(s, w)| (s, w * self.factor)).collect()
    }
    fn lower(&self, g: &Structure) -> Neighbors {
        if self.factor == 0.0 {
            return vec![];
        }
        self.base.lower(g).into_iter().map(|(s, w)| (s, w * self.factor)).collect()
    }
}

/// Two weights on the same species with their amplitudes added.
#[derive(Debug)]
pub struct AddWeight {
    left: WeightRef,
    right: WeightRef,
}

impl AddWeight {
    pub fn new(left: WeightRef, right: WeightRef) -> Result<Self> {
        let (l, r) = (left.species().name(), right.species().name());
        if l != r {
            return Err(Error::SpeciesMismatch { space: l, weight: r });
        }
        Ok(Self { left, right })
    }
}

fn merge(a: Neighbors, b: Neighbors) -> Neighbors {
    let mut out: Neighbors = Vec::with_capacity(a.len() + b.len());
    for (s, w) in a.into_iter().chain(b) {
        match out.iter_mut().find(|(t, _)| *t == s) {
            Some((_, v)) => *v += w,
            None => out.push((s, w)),
        }
    }
    out.retain(|(_, w)| *w != zero());
    out
}

impl Weight for AddWeight {
    fn name(&self) -> String {
        format!("add({},{})", self.left.name(), self.right.name())
    }
    fn species(&self) -> SpeciesRef {
        self.left.species()
    }
    fn bound(&self) -> f64 {
        self.left.bound() + self.right.bound()
    }
    fn value(&self, f: &Structure, g: &Structure) -> Complex64 {
        self.left.value(f, g) + self.right.value(f, g)
    }
    fn raise(&self, f: &Structure) -> Neighbors {
        merge(self.left.raise(f), self.right.raise(f))
    }
    fn lower(&self, g: &Structure) -> Neighbors {
        merge(self.left.lower(g), self.right.lower(g))
    }
}

fn wrap_side(side: Side, level: usize, n: Neighbors) -> Neighbors {
    n.into_iter().map(|(s, w)| (Structure::new(level, Payload::Sum(side, Box::new(s))), w)).collect()
}

/// `ω_{F+G}`: each summand keeps its own weight.
#[derive(Debug)]
pub struct SumWeight {
    left: WeightRef,
    right: WeightRef,
    species: SpeciesRef,
}

impl SumWeight {
    pub fn new(left: WeightRef, right: WeightRef) -> Self {
        let species = Arc::new(Sum::new(left.species(), right.species()));
        Self { left, right, species }
    }

    fn part(&self, side: Side) -> &WeightRef {
        match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        }
    }
}

impl Weight for SumWeight {
    fn name(&self) -> String {
        format!("sum({},{})", self.left.name(), self.right.name())
    }
    fn species(&self) -> SpeciesRef {
        self.species.clone()
    }
    fn bound(&self) -> f64 {
        self.left.bound().max(self.right.bound())
    }
    fn value(&self, f: &Structure, g: &Structure) -> Complex64 {
        match (&f.payload, &g.payload) {
            (Payload::Sum(a, x), Payload::Sum(b, y)) if a == b => self.part(*a).value(x, y),
            _ => zero(),
        }
    }
    fn raise(&self, f: &Structure) -> Neighbors {
        let Payload::Sum(side, x) = &f.payload else { return vec![] };
        wrap_side(*side, f.level + 1, self.part(*side).raise(x))
    }
    fn lower(&self, g: &Structure) -> Neighbors {
        let Payload::Sum(side, y) = &g.payload else { return vec![] };
        if g.level == 0 {
            return vec![];
        }
        wrap_side(*side, g.level - 1, self.part(*side).lower(y))
    }
}

/// Product weight with parameter `λ`: the new point joins the right factor
/// with amplitude `√λ·ω_G` or the left factor with `√(1-λ)·ω_F`.
#[derive(Debug)]
pub struct ProductWeight {
    left: WeightRef,
    right: WeightRef,
    lambda: f64,
    species: SpeciesRef,
}

impl ProductWeight {
    pub fn new(lambda: f64, left: WeightRef, right: WeightRef) -> Result<Self> {
        check_unit_interval("lambda", lambda)?;
        let species = Arc::new(Product::new(left.species(), right.species()));
        Ok(Self { left, right, lambda, species })
    }

    fn product(level: usize, left_set: Vec<usize>, l: Structure, r: Structure) -> Structure {
        Structure::new(level, Payload::Product { left_set, left: Box::new(l), right: Box::new(r) })
    }
}

impl Weight for ProductWeight {
    fn name(&self) -> String {
        format!("product:{}({},{})", self.lambda, self.left.name(), self.right.name())
    }
    fn species(&self) -> SpeciesRef {
        self.species.clone()
    }
    fn bound(&self) -> f64 {
        ((1.0 - self.lambda).sqrt() * self.left.bound()).max(self.lambda.sqrt() * self.right.bound())
    }
    fn value(&self, f: &Structure, g: &Structure) -> Complex64 {
        let (Payload::Product { left_set: ls, left: l, right: r }, Payload::Product { left_set: ls2, left: l2, right: r2 }) =
            (&f.payload, &g.payload)
        else {
            return zero();
        };
        let n = f.level;
        if ls2.last() == Some(&n) {
            if ls2[..ls2.len() - 1] == ls[..] && r == r2 {
                return self.left.value(l, l2) * (1.0 - self.lambda).sqrt();
            }
        } else if ls == ls2 && l == l2 {
            return self.right.value(r, r2) * self.lambda.sqrt();
        }
        zero()
    }
    fn raise(&self, f: &Structure) -> Neighbors {
        let Payload::Product { left_set, left, right } = &f.payload else { return vec![] };
        let n = f.level;
        let mut out = Vec::new();
        if self.lambda < 1.0 {
            let s = (1.0 - self.lambda).sqrt();
            let mut ls = left_set.clone();
            ls.push(n);
            for (l, w) in self.left.raise(left) {
                out.push((Self::product(n + 1, ls.clone(), l, (**right).clone()), w * s));
            }
        }
        if self.lambda > 0.0 {
            let s = self.lambda.sqrt();
            for (r, w) in self.right.raise(right) {
                out.push((Self::product(n + 1, left_set.clone(), (**left).clone(), r), w * s));
            }
        }
        out
    }
    fn lower(&self, g: &Structure) -> Neighbors {
        let Payload::Product { left_set, left, right } = &g.payload else { return vec![] };
        let Some(n) = g.level.checked_sub(1) else { return vec![] };
        if left_set.last() == Some(&n) {
            if self.lambda == 1.0 {
                return vec![];
            }
            let s = (1.0 - self.lambda).sqrt();
            let ls = left_set[..left_set.len() - 1].to_vec();
            self.left
                .lower(left)
                .into_iter()
                .map(|(l, w)| (Self::product(n, ls.clone(), l, (**right).clone()), w * s))
                .collect()
        } else {
            if self.lambda == 0.0 {
                return vec![];
            }
            let s = self.lambda.sqrt();
            self.right
                .lower(right)
                .into_iter()
                .map(|(r, w)| (Self::product(n, left_set.clone(), (**left).clone(), r), w * s))
                .collect()
        }
    }
}

fn pair(level: usize, a: Structure, b: Structure) -> Structure {
    Structure::new(level, Payload::Cartesian(Box::new(a), Box::new(b)))
}

fn cross(level: usize, xs: Neighbors, ys: Neighbors) -> Neighbors {
    let mut out = Vec::with_capacity(xs.len() * ys.len());
    for (x, w) in &xs {
        for (y, v) in &ys {
            out.push((pair(level, x.clone(), y.clone()), w * v));
        }
    }
    out
}

/// `ω_{F×G} = ω_F·ω_G`.
#[derive(Debug)]
pub struct CartesianWeight {
    left: WeightRef,
    right: WeightRef,
    species: SpeciesRef,
}

impl CartesianWeight {
    pub fn new(left: WeightRef, right: WeightRef) -> Self {
        let species = Arc::new(Cartesian::new(left.species(), right.species()));
        Self { left, right, species }
    }
}

impl Weight for CartesianWeight {
    fn name(&self) -> String {
        format!("cartesian({},{})", self.left.name(), self.right.name())
    }
    fn species(&self) -> SpeciesRef {
        self.species.clone()
    }
    fn bound(&self) -> f64 {
        self.left.bound() * self.right.bound()
    }
    fn value(&self, f: &Structure, g: &Structure) -> Complex64 {
        match (&f.payload, &g.payload) {
            (Payload::Cartesian(a, b), Payload::Cartesian(x, y)) => self.left.value(a, x) * self.right.value(b, y),
            _ => zero(),
        }
    }
    fn raise(&self, f: &Structure) -> Neighbors {
        let Payload::Cartesian(a, b) = &f.payload else { return vec![] };
        cross(f.level + 1, self.left.raise(a), self.right.raise(b))
    }
    fn lower(&self, g: &Structure) -> Neighbors {
        let Payload::Cartesian(a, b) = &g.payload else { return vec![] };
        if g.level == 0 {
            return vec![];
        }
        cross(g.level - 1, self.left.lower(a), self.right.lower(b))
    }
}

/// `ω^c_{A×A}((f,g),(f',g')) = ω_A(f,f')·ω_A(g,g') + c^{1/2} δ_{f_*,f'} δ_{g_*,g'}`.
#[derive(Debug)]
pub struct PairTreeWeight {
    plain: CartesianWeight,
    c: f64,
}

impl PairTreeWeight {
    pub fn new(c: f64) -> Result<Self> {
        check_nonnegative("c", c)?;
        let tree: WeightRef = Arc::new(TreeWeight::new());
        Ok(Self { plain: CartesianWeight::new(tree.clone(), tree), c })
    }

    fn rerooted(f: &Structure) -> Option<Structure> {
        let Payload::Cartesian(a, b) = &f.payload else { return None };
        let (Payload::Tree(x), Payload::Tree(y)) = (&a.payload, &b.payload) else { return None };
        let n = f.level + 1;
        Some(pair(
            n,
            Structure::new(n, Payload::Tree(TreeWeight::reroot(x))),
            Structure::new(n, Payload::Tree(TreeWeight::reroot(y))),
        ))
    }

    /// Inverse of the double re-rooting, if `g` is of that form.
    fn unrooted(g: &Structure) -> Option<Structure> {
        let Payload::Cartesian(a, b) = &g.payload else { return None };
        let (Payload::Tree(x), Payload::Tree(y)) = (&a.payload, &b.payload) else { return None };
        let n = g.level.checked_sub(1)?;
        if n == 0 {
            return None;
        }
        let undo = |t: &[usize]| -> Option<Vec<usize>> {
            if t[n] != n {
                return None;
            }
            let children: Vec<usize> = (0..n).filter(|&u| t[u] == n).collect();
            if children.len() != 1 {
                return None;
            }
            let mut s = t[..n].to_vec();
            s[children[0]] = children[0];
            Some(s)
        };
        Some(pair(n, Structure::new(n, Payload::Tree(undo(x)?)), Structure::new(n, Payload::Tree(undo(y)?))))
    }
}

impl Weight for PairTreeWeight {
    fn name(&self) -> String {
        format!("pairtree_c:{}", self.c)
    }
    fn species(&self) -> SpeciesRef {
        self.plain.species()
    }
    fn bound(&self) -> f64 {
        1.0 + self.c.sqrt()
    }
    fn value(&self, f: &Structure, g: &Structure) -> Complex64 {
        let mut v = self.plain.value(f, g);
        if self.c > 0.0 && Self::rerooted(f).as_ref() == Some(g) {
            v += self.c.sqrt();
        }
        v
    }
    fn raise(&self, f: &Structure) -> Neighbors {
        let mut out = self.plain.raise(f);
        if self.c > 0.0 {
            if let Some(g) = Self::rerooted(f) {
                out.push((g, c(self.c.sqrt())));
            }
        }
        out
    }
    fn lower(&self, g: &Structure) -> Neighbors {
        let mut out = self.plain.lower(g);
        if self.c > 0.0 {
            if let Some(f) = Self::unrooted(g) {
                out.push((f, c(self.c.sqrt())));
            }
        }
        out
    }
}

/// Weight on `F∘G` from `(ω_F, ω_G, ω_{F,ε})`: the new point either forms a
/// new singleton block (weighted by `ω_F`) or joins a block `p` (weighted by
/// `ω_{F,ε}(f, p)·ω_G`).
#[derive(Debug)]
pub struct ComposeWeight {
    outer: WeightRef,
    inner: WeightRef,
    element: ElementWeightRef,
    unit: Structure,
    species: SpeciesRef,
}

impl ComposeWeight {
    pub fn new(outer: WeightRef, inner: WeightRef, element: ElementWeightRef) -> Result<Self> {
        let g = inner.species();
        let ones = g.enumerate(1);
        if ones.len() != 1 {
            return Err(Error::Composition(format!("`{}` must have exactly one structure on one point", g.name())));
        }
        let unit = ones[0].clone();
        let species = Arc::new(Compose::new(outer.species(), g)?);
        Ok(Self { outer, inner, element, unit, species })
    }

    fn composite(level: usize, blocks: Vec<Vec<usize>>, outer: Structure, inner: Vec<Structure>) -> Structure {
        Structure::new(level, Payload::Composite { blocks, outer: Box::new(outer), inner })
    }
}

impl Weight for ComposeWeight {
    fn name(&self) -> String {
        format!("compose({},{},{})", self.outer.name(), self.inner.name(), self.element.name())
    }
    fn species(&self) -> SpeciesRef {
        self.species.clone()
    }
    fn bound(&self) -> f64 {
        self.outer.bound() + self.element.bound() * self.inner.bound()
    }
    fn value(&self, f: &Structure, g: &Structure) -> Complex64 {
        self.lower(g).into_iter().filter(|(s, _)| s == f).map(|(_, w)| w).sum()
    }
    fn raise(&self, f: &Structure) -> Neighbors {
        let Payload::Composite { blocks, outer, inner } = &f.payload else { return vec![] };
        let n = f.level;
        let mut out = Vec::new();
        let mut new_blocks = blocks.clone();
        new_blocks.push(vec![n]);
        let mut new_inner = inner.clone();
        new_inner.push(self.unit.clone());
        for (o, w) in self.outer.raise(outer) {
            out.push((Self::composite(n + 1, new_blocks.clone(), o, new_inner.clone()), w));
        }
        for p in 0..blocks.len() {
            let e = self.element.value(outer, p);
            if e == zero() {
                continue;
            }
            let mut nb = blocks.clone();
            nb[p].push(n);
            for (gp, w) in self.inner.raise(&inner[p]) {
                let mut ni = inner.clone();
                ni[p] = gp;
                out.push((Self::composite(n + 1, nb.clone(), (**outer).clone(), ni), e * w));
            }
        }
        out
    }
    fn lower(&self, g: &Structure) -> Neighbors {
        let Payload::Composite { blocks, outer, inner } = &g.payload else { return vec![] };
        let Some(n) = g.level.checked_sub(1) else { return vec![] };
        let p = blocks.iter().position(|b| b.contains(&n)).expect("point belongs to a block");
        if blocks[p].len() == 1 {
            // n forms its own block, which is the last one
            let nb = blocks[..p].to_vec();
            let ni = inner[..p].to_vec();
            return self
                .outer
                .lower(outer)
                .into_iter()
                .map(|(o, w)| (Self::composite(n, nb.clone(), o, ni.clone()), w))
                .collect();
        }
        let e = self.element.value(outer, p);
        if e == zero() {
            return vec![];
        }
        let mut nb = blocks.clone();
        nb[p].pop();
        self.inner
            .lower(&inner[p])
            .into_iter()
            .map(|(gp, w)| {
                let mut ni = inner.clone();
                ni[p] = gp;
                (Self::composite(n, nb.clone(), (**outer).clone(), ni), e * w)
            })
            .collect()
    }
}

/// Free-product weight: the new point either joins the last block (weighted
/// by that factor's weight) or opens a new last block of a different factor
/// (weighted by `ω_α(∅, ·)`).
#[derive(Debug)]
pub struct FreeWeight {
    factors: Vec<WeightRef>,
    empties: Vec<Structure>,
    species: SpeciesRef,
}

impl FreeWeight {
    pub fn new(factors: Vec<WeightRef>) -> Result<Self> {
        let species = Arc::new(FreeProduct::new(factors.iter().map(|w| w.species()).collect())?);
        let empties = factors.iter().map(|w| w.species().enumerate(0)[0].clone()).collect();
        Ok(Self { factors, empties, species })
    }
}

impl Weight for FreeWeight {
    fn name(&self) -> String {
        let parts: Vec<String> = self.factors.iter().map(|w| w.name()).collect();
        format!("free({})", parts.join(","))
    }
    fn species(&self) -> SpeciesRef {
        self.species.clone()
    }
    fn bound(&self) -> f64 {
        self.factors.iter().map(|w| w.bound()).fold(0.0, f64::max)
    }
    fn value(&self, f: &Structure, g: &Structure) -> Complex64 {
        self.lower(g).into_iter().filter(|(s, _)| s == f).map(|(_, w)| w).sum()
    }
    fn raise(&self, f: &Structure) -> Neighbors {
        let Payload::Free(parts) = &f.payload else { return vec![] };
        let n = f.level;
        let mut out = Vec::new();
        if let Some(last) = parts.last() {
            for (s, w) in self.factors[last.factor].raise(&last.structure) {
                let mut np = parts.clone();
                let l = np.last_mut().unwrap();
                l.block.push(n);
                l.structure = s;
                out.push((Structure::new(n + 1, Payload::Free(np)), w));
            }
        }
        for (alpha, weight) in self.factors.iter().enumerate() {
            if parts.last().is_some_and(|b| b.factor == alpha) {
                continue;
            }
            for (s, w) in weight.raise(&self.empties[alpha]) {
                let mut np = parts.clone();
                np.push(FreeBlock { factor: alpha, block: vec![n], structure: s });
                out.push((Structure::new(n + 1, Payload::Free(np)), w));
            }
        }
        out
    }
    fn lower(&self, g: &Structure) -> Neighbors {
        let Payload::Free(parts) = &g.payload else { return vec![] };
        let Some(n) = g.level.checked_sub(1) else { return vec![] };
        let Some(last) = parts.last() else { return vec![] };
        if last.block.last() != Some(&n) {
            return vec![];
        }
        let weight = &self.factors[last.factor];
        if last.block.len() == 1 {
            let empty = &self.empties[last.factor];
            let w = weight.value(empty, &last.structure);
            if w == zero() {
                return vec![];
            }
            return vec![(Structure::new(n, Payload::Free(parts[..parts.len() - 1].to_vec())), w)];
        }
        weight
            .lower(&last.structure)
            .into_iter()
            .map(|(s, w)| {
                let mut np = parts.clone();
                let l = np.last_mut().unwrap();
                l.block.pop();
                l.structure = s;
                (Structure::new(n, Payload::Free(np)), w)
            })
            .collect()
    }
}

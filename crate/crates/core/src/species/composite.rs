//! Species built from other species: sum, product, cartesian product,
//! derivative, composition, free product and iterated products.

use std::sync::Arc;

use super::{check_level, foreign, Atom, AtomKind, FreeBlock, LevelCache, Payload, Side, Species, SpeciesRef, Structure};
use crate::combinat::{cartesian_product, ordered_set_partitions, set_partitions};
use crate::error::{Error, Result};
use crate::perm::{induced, Permutation};

/// Points of `{0, .., n-1}` selected by `mask`, and the remaining ones.
pub(crate) fn split_mask(n: usize, mask: u64) -> (Vec<usize>, Vec<usize>) {
    (0..n).partition(|&u| mask & (1 << u) != 0)
}

/// Transport a structure living on the sorted subset `set` of a larger level.
/// Returns the sorted image set and the transported sub-structure.
fn transport_on(species: &dyn Species, sub: &Structure, set: &[usize], sigma: &Permutation) -> Result<(Vec<usize>, Structure)> {
    let (image, local) = induced(sigma, set);
    Ok((image, species.transport(sub, &local)?))
}

#[derive(Debug)]
pub struct Sum {
    pub left: SpeciesRef,
    pub right: SpeciesRef,
    cache: LevelCache,
}

impl Sum {
    pub fn new(left: SpeciesRef, right: SpeciesRef) -> Self {
        Self { left, right, cache: LevelCache::default() }
    }
}

impl Species for Sum {
    fn name(&self) -> String {
        format!("({} + {})", self.left.name(), self.right.name())
    }

    fn enumerate(&self, n: usize) -> Arc<Vec<Structure>> {
        self.cache.get_or(n, || {
            let wrap = |side, s: &Structure| Structure::new(n, Payload::Sum(side, Box::new(s.clone())));
            let mut v: Vec<Structure> = self.left.enumerate(n).iter().map(|s| wrap(Side::Left, s)).collect();
            v.extend(self.right.enumerate(n).iter().map(|s| wrap(Side::Right, s)));
            v
        })
    }

    fn transport(&self, s: &Structure, sigma: &Permutation) -> Result<Structure> {
        check_level(s, sigma)?;
        let Payload::Sum(side, inner) = &s.payload else { return Err(foreign(self)) };
        let part = match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        };
        Ok(Structure::new(s.level, Payload::Sum(*side, Box::new(part.transport(inner, sigma)?))))
    }
}

/// `F·G`: split the points into two sets carrying an `F` and a `G` structure.
#[derive(Debug)]
pub struct Product {
    pub left: SpeciesRef,
    pub right: SpeciesRef,
    cache: LevelCache,
}

impl Product {
    pub fn new(left: SpeciesRef, right: SpeciesRef) -> Self {
        Self { left, right, cache: LevelCache::default() }
    }

    /// The complement of `left_set` at level `n`.
    pub fn right_set(n: usize, left_set: &[usize]) -> Vec<usize> {
        (0..n).filter(|u| left_set.binary_search(u).is_err()).collect()
    }
}

impl Species for Product {
    fn name(&self) -> String {
        format!("({} * {})", self.left.name(), self.right.name())
    }

    fn enumerate(&self, n: usize) -> Arc<Vec<Structure>> {
        self.cache.get_or(n, || {
            let mut v = Vec::new();
            for mask in 0..(1u64 << n) {
                let (ls, rs) = split_mask(n, mask);
                let lefts = self.left.enumerate(ls.len());
                let rights = self.right.enumerate(rs.len());
                for l in lefts.iter() {
                    for r in rights.iter() {
                        v.push(Structure::new(
                            n,
                            Payload::Product { left_set: ls.clone(), left: Box::new(l.clone()), right: Box::new(r.clone()) },
                        ));
                    }
                }
            }
            v
        })
    }

    fn transport(&self, s: &Structure, sigma: &Permutation) -> Result<Structure> {
        check_level(s, sigma)?;
        let Payload::Product { left_set, left, right } = &s.payload else { return Err(foreign(self)) };
        let rs = Self::right_set(s.level, left_set);
        let (new_ls, l) = transport_on(&*self.left, left, left_set, sigma)?;
        let (_, r) = transport_on(&*self.right, right, &rs, sigma)?;
        Ok(Structure::new(s.level, Payload::Product { left_set: new_ls, left: Box::new(l), right: Box::new(r) }))
    }
}

/// `F×G`: an `F` and a `G` structure on the same points.
#[derive(Debug)]
pub struct Cartesian {
    pub left: SpeciesRef,
    pub right: SpeciesRef,
    cache: LevelCache,
}

impl Cartesian {
    pub fn new(left: SpeciesRef, right: SpeciesRef) -> Self {
        Self { left, right, cache: LevelCache::default() }
    }
}

impl Species for Cartesian {
    fn name(&self) -> String {
        format!("({} & {})", self.left.name(), self.right.name())
    }

    fn enumerate(&self, n: usize) -> Arc<Vec<Structure>> {
        self.cache.get_or(n, || {
            let rights = self.right.enumerate(n);
            self.left
                .enumerate(n)
                .iter()
                .flat_map(|l| {
                    rights.iter().map(move |r| {
                        Structure::new(n, Payload::Cartesian(Box::new(l.clone()), Box::new(r.clone())))
                    })
                })
                .collect()
        })
    }

    fn transport(&self, s: &Structure, sigma: &Permutation) -> Result<Structure> {
        check_level(s, sigma)?;
        let Payload::Cartesian(l, r) = &s.payload else { return Err(foreign(self)) };
        Ok(Structure::new(
            s.level,
            Payload::Cartesian(Box::new(self.left.transport(l, sigma)?), Box::new(self.right.transport(r, sigma)?)),
        ))
    }
}

/// `F'`: `F` structures on the points plus one added point `n`, transported
/// by extensions fixing the added point.
#[derive(Debug)]
pub struct Derivative {
    pub inner: SpeciesRef,
    cache: LevelCache,
}

impl Derivative {
    pub fn new(inner: SpeciesRef) -> Self {
        Self { inner, cache: LevelCache::default() }
    }
}

impl Species for Derivative {
    fn name(&self) -> String {
        format!("{}'", self.inner.name())
    }

    fn enumerate(&self, n: usize) -> Arc<Vec<Structure>> {
        self.cache.get_or(n, || {
            self.inner
                .enumerate(n + 1)
                .iter()
                .map(|s| Structure::new(n, Payload::Derived(Box::new(s.clone()))))
                .collect()
        })
    }

    fn transport(&self, s: &Structure, sigma: &Permutation) -> Result<Structure> {
        check_level(s, sigma)?;
        let Payload::Derived(inner) = &s.payload else { return Err(foreign(self)) };
        Ok(Structure::new(s.level, Payload::Derived(Box::new(self.inner.transport(inner, &sigma.extend())?))))
    }
}

/// `F∘G`: a partition of the points, an `F` structure on the set of blocks
/// and a `G` structure on each block. Blocks are ordered by minimal element.
#[derive(Debug)]
pub struct Compose {
    pub outer: SpeciesRef,
    pub inner: SpeciesRef,
    cache: LevelCache,
}

impl Compose {
    pub fn new(outer: SpeciesRef, inner: SpeciesRef) -> Result<Self> {
        if !inner.enumerate(0).is_empty() {
            return Err(Error::Composition(format!("`{}` has structures on the empty set", inner.name())));
        }
        Ok(Self { outer, inner, cache: LevelCache::default() })
    }

    /// Moves the blocks along `σ` and returns them re-sorted by minimum
    /// together with, for each old block index, its new index.
    pub(crate) fn move_blocks(blocks: &[Vec<usize>], sigma: &Permutation) -> (Vec<Vec<usize>>, Vec<usize>) {
        let mut moved: Vec<(Vec<usize>, usize)> = blocks
            .iter()
            .enumerate()
            .map(|(i, b)| {
                let mut m: Vec<usize> = b.iter().map(|&u| sigma.apply(u)).collect();
                m.sort_unstable();
                (m, i)
            })
            .collect();
        moved.sort();
        let mut new_index = vec![0; blocks.len()];
        for (j, (_, i)) in moved.iter().enumerate() {
            new_index[*i] = j;
        }
        (moved.into_iter().map(|(b, _)| b).collect(), new_index)
    }
}

impl Species for Compose {
    fn name(&self) -> String {
        format!("({} o {})", self.outer.name(), self.inner.name())
    }

    fn enumerate(&self, n: usize) -> Arc<Vec<Structure>> {
        self.cache.get_or(n, || {
            let points: Vec<usize> = (0..n).collect();
            let mut v = Vec::new();
            for blocks in set_partitions(&points) {
                let outers = self.outer.enumerate(blocks.len());
                if outers.is_empty() {
                    continue;
                }
                let inners: Vec<Vec<Structure>> = blocks.iter().map(|b| self.inner.enumerate(b.len()).to_vec()).collect();
                for inner in cartesian_product(&inners) {
                    for o in outers.iter() {
                        v.push(Structure::new(
                            n,
                            Payload::Composite { blocks: blocks.clone(), outer: Box::new(o.clone()), inner: inner.clone() },
                        ));
                    }
                }
            }
            v
        })
    }

    fn transport(&self, s: &Structure, sigma: &Permutation) -> Result<Structure> {
        check_level(s, sigma)?;
        let Payload::Composite { blocks, outer, inner } = &s.payload else { return Err(foreign(self)) };
        let (new_blocks, new_index) = Self::move_blocks(blocks, sigma);
        let beta = Permutation::from_images(new_index.clone())?;
        let mut new_inner = inner.clone();
        for (i, b) in blocks.iter().enumerate() {
            let (_, g) = transport_on(&*self.inner, &inner[i], b, sigma)?;
            new_inner[new_index[i]] = g;
        }
        Ok(Structure::new(
            s.level,
            Payload::Composite { blocks: new_blocks, outer: Box::new(self.outer.transport(outer, &beta)?), inner: new_inner },
        ))
    }
}

/// Free product: a ballot of blocks, each carrying a structure of one of the
/// factors on a nonempty set, with consecutive blocks from different factors.
#[derive(Debug)]
pub struct FreeProduct {
    pub factors: Vec<SpeciesRef>,
    cache: LevelCache,
}

impl FreeProduct {
    pub fn new(factors: Vec<SpeciesRef>) -> Result<Self> {
        for f in &factors {
            if f.enumerate(0).len() != 1 {
                return Err(Error::FreeOperand(f.name()));
            }
        }
        if factors.is_empty() {
            return Err(Error::Arity("free product needs at least one operand".into()));
        }
        Ok(Self { factors, cache: LevelCache::default() })
    }

    fn build(&self, n: usize) -> Vec<Structure> {
        let points: Vec<usize> = (0..n).collect();
        let mut out = Vec::new();
        for ballot in ordered_set_partitions(&points) {
            let mut partial: Vec<Vec<FreeBlock>> = vec![vec![]];
            for block in &ballot {
                let mut next = Vec::new();
                for prefix in &partial {
                    for (alpha, species) in self.factors.iter().enumerate() {
                        if prefix.last().is_some_and(|b| b.factor == alpha) {
                            continue;
                        }
                        for s in species.enumerate(block.len()).iter() {
                            let mut p = prefix.clone();
                            p.push(FreeBlock { factor: alpha, block: block.clone(), structure: s.clone() });
                            next.push(p);
                        }
                    }
                }
                partial = next;
            }
            out.extend(partial.into_iter().map(|p| Structure::new(n, Payload::Free(p))));
        }
        out
    }
}

impl Species for FreeProduct {
    fn name(&self) -> String {
        let parts: Vec<String> = self.factors.iter().map(|f| f.name()).collect();
        format!("free({})", parts.join(", "))
    }

    fn enumerate(&self, n: usize) -> Arc<Vec<Structure>> {
        self.cache.get_or(n, || self.build(n))
    }

    fn transport(&self, s: &Structure, sigma: &Permutation) -> Result<Structure> {
        check_level(s, sigma)?;
        let Payload::Free(parts) = &s.payload else { return Err(foreign(self)) };
        let mut moved = Vec::with_capacity(parts.len());
        for part in parts {
            let species = self.factors.get(part.factor).ok_or_else(|| foreign(self))?;
            let (block, structure) = transport_on(&**species, &part.structure, &part.block, sigma)?;
            moved.push(FreeBlock { factor: part.factor, block, structure });
        }
        Ok(Structure::new(s.level, Payload::Free(moved)))
    }
}

/// `F^k` as the left-nested product `F·F·…·F`; `F^0` is the unit species.
pub fn power(species: SpeciesRef, k: usize) -> SpeciesRef {
    if k == 0 {
        return Arc::new(Atom::new(AtomKind::One));
    }
    let mut acc = species.clone();
    for _ in 1..k {
        acc = Arc::new(Product::new(acc, species.clone()));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::factorial;

    fn atom(kind: AtomKind) -> SpeciesRef {
        Arc::new(Atom::new(kind))
    }

    #[test]
    fn sum_counts() {
        let s = Sum::new(atom(AtomKind::E), atom(AtomKind::L));
        assert_eq!(s.enumerate(2).len(), 3);
    }

    #[test]
    fn derivative_of_e_is_e() {
        let d = Derivative::new(atom(AtomKind::E));
        for n in 0..5 {
            assert_eq!(d.enumerate(n).len(), 1);
            assert_eq!(crate::species::stabilizer_order(&d, &d.enumerate(n)[0]).unwrap(), factorial(n));
        }
    }

    #[test]
    fn ballots_as_composition() {
        let c = Compose::new(atom(AtomKind::L), atom(AtomKind::Eplus)).unwrap();
        assert_eq!(c.enumerate(3).len(), 13);
        assert!(Compose::new(atom(AtomKind::L), atom(AtomKind::E)).is_err());
    }

    #[test]
    fn trees_as_singleton_times_set_of_trees() {
        let a = atom(AtomKind::A);
        let inner: SpeciesRef = Arc::new(Compose::new(atom(AtomKind::E), a.clone()).unwrap());
        let p = Product::new(atom(AtomKind::X), inner);
        for n in 0..=5 {
            assert_eq!(p.enumerate(n).len(), a.enumerate(n).len());
        }
    }

    #[test]
    fn powers_of_x_are_orders() {
        let x4 = power(atom(AtomKind::X), 4);
        assert_eq!(x4.enumerate(4).len(), 24);
        assert!(x4.enumerate(3).is_empty());
        assert_eq!(power(atom(AtomKind::L), 0).enumerate(0).len(), 1);
    }

    #[test]
    fn free_product_of_sets() {
        // free(E, E): alternating ballots of two colors
        let f = FreeProduct::new(vec![atom(AtomKind::E), atom(AtomKind::E)]).unwrap();
        assert_eq!(f.enumerate(0).len(), 1);
        assert_eq!(f.enumerate(1).len(), 2);
        // ({0,1}) twice, ({0},{1}) and ({1},{0}) each with 2 alternations
        assert_eq!(f.enumerate(2).len(), 6);
        assert!(FreeProduct::new(vec![atom(AtomKind::A)]).is_err());
    }

    #[test]
    fn composite_transport_is_functorial() {
        let c = Compose::new(atom(AtomKind::L), atom(AtomKind::Eplus)).unwrap();
        let perms = Permutation::all(3);
        for s in c.enumerate(3).iter() {
            for a in &perms {
                for b in &perms {
                    let lhs = c.transport(&c.transport(s, a).unwrap(), b).unwrap();
                    assert_eq!(lhs, c.transport(s, &b.compose(a)).unwrap());
                }
            }
        }
    }
}

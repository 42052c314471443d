//! Operators on a truncated symmetric space.
//!
//! Everything is expressed in the orthonormal orbit basis of [`crate::fock`],
//! where a symmetric function `φ` has coefficients `x_o = φ(s,c)/|H_o|^{1/2}`.
//! With `τ_k` the transposition of `k` and the top point, the annihilator
//! `(a(h)φ)(f,c) = Σ_g ω(f,g) Σ_j conj(h_j) φ(g, c⁺j)` becomes, on a basis
//! vector `e_{[g,d]}` at level `n+1`,
//!
//! ```text
//! a(h) e_{[g,d]} = Σ_{k ≤ n} Σ_{f} ω(f, F[τ_k]g) conj(h_{d(k)}) (H'/H)^{1/2} e_{[f, (d∘τ_k)|n]}
//! ```
//!
//! and the creator is its conjugate transpose,
//! `a*(h) e_{[f,c]} = Σ_g Σ_j conj ω(f,g) h_j (H'/H)^{1/2} e_{[g, c⁺j]}`.
//! These two formulas are the only place where the stabilizer bookkeeping
//! enters; the adjointness tests compare them against the symmetrized
//! creation formula, which is evaluated pointwise on symmetric functions.
//!
//! Creation output above `N_max` is discarded, so identities are compared
//! only on safe levels (see [`Op::depth`]).

use std::collections::{BTreeMap, BTreeSet, HashMap};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{BasisElement, FockSpace, FockVector, Key};
use crate::perm::Permutation;
use crate::species::{transport_coloring, Payload, Structure};
use crate::weights::kernels::{lower_row, upper_row};
use crate::weights::WeightRef;

type C = Complex64;

fn zero() -> C {
    C::new(0.0, 0.0)
}

fn re(x: f64) -> C {
    C::new(x, 0.0)
}

/// A linear combination of colors, `h = Σ_j h_j e_j`.
pub type ColorVector = Vec<C>;

/// The basis color vector `e_j` among `k` colors.
pub fn unit_color(k: usize, j: usize) -> ColorVector {
    let mut h = vec![zero(); k];
    h[j] = re(1.0);
    h
}

/// `⟨h1, h2⟩`, conjugate-linear in `h1`.
pub fn color_inner(h1: &[C], h2: &[C]) -> C {
    h1.iter().zip(h2).map(|(a, b)| a.conj() * b).sum()
}

/// Operator expressions; `Product` applies its factors right to left.
#[derive(Clone, Debug)]
pub enum Op {
    Identity,
    Annihilate { weight: WeightRef, h: ColorVector },
    Create { weight: WeightRef, h: ColorVector },
    /// The creator evaluated through the symmetrized creation formula.
    CreateSymmetrized { weight: WeightRef, h: ColorVector },
    Number,
    /// `P(N)` with coefficients `p_0, p_1, ..`.
    Poly(Vec<f64>),
    SecondQuant(DMatrix<C>),
    /// The orientation switch `g` of `E±`.
    Switch,
    /// `a*(h1) a(h2)` through the lower contraction kernels.
    KernelLower { weight: WeightRef, h1: ColorVector, h2: ColorVector },
    /// `a(h1) a*(h2)` through the upper contraction kernels.
    KernelUpper { weight: WeightRef, h1: ColorVector, h2: ColorVector },
    Scale(C, Box<Op>),
    Sum(Vec<Op>),
    Product(Vec<Op>),
}

fn check_weight(space: &FockSpace, weight: &WeightRef, hs: &[&ColorVector]) -> Result<()> {
    let (s, w) = (space.species().name(), weight.species().name());
    if s != w {
        return Err(Error::SpeciesMismatch { space: s, weight: w });
    }
    for h in hs {
        if h.len() != space.num_colors() {
            return Err(Error::Dimension { expected: space.num_colors(), found: h.len() });
        }
    }
    Ok(())
}

impl Op {
    pub fn annihilator(space: &FockSpace, weight: &WeightRef, h: &[C]) -> Result<Op> {
        let h = h.to_vec();
        check_weight(space, weight, &[&h])?;
        Ok(Op::Annihilate { weight: weight.clone(), h })
    }

    pub fn creator(space: &FockSpace, weight: &WeightRef, h: &[C]) -> Result<Op> {
        let h = h.to_vec();
        check_weight(space, weight, &[&h])?;
        Ok(Op::Create { weight: weight.clone(), h })
    }

    pub fn creator_symmetrized(space: &FockSpace, weight: &WeightRef, h: &[C]) -> Result<Op> {
        let h = h.to_vec();
        check_weight(space, weight, &[&h])?;
        Ok(Op::CreateSymmetrized { weight: weight.clone(), h })
    }

    /// `a*(h1) a(h2)` by the kernel formula.
    pub fn kernel_lower(space: &FockSpace, weight: &WeightRef, h1: &[C], h2: &[C]) -> Result<Op> {
        let (h1, h2) = (h1.to_vec(), h2.to_vec());
        check_weight(space, weight, &[&h1, &h2])?;
        Ok(Op::KernelLower { weight: weight.clone(), h1, h2 })
    }

    /// `a(h1) a*(h2)` by the kernel formula.
    pub fn kernel_upper(space: &FockSpace, weight: &WeightRef, h1: &[C], h2: &[C]) -> Result<Op> {
        let (h1, h2) = (h1.to_vec(), h2.to_vec());
        check_weight(space, weight, &[&h1, &h2])?;
        Ok(Op::KernelUpper { weight: weight.clone(), h1, h2 })
    }

    pub fn second_quantization(space: &FockSpace, a: DMatrix<C>) -> Result<Op> {
        let k = space.num_colors();
        if a.nrows() != k || a.ncols() != k {
            return Err(Error::Dimension { expected: k, found: if a.nrows() != k { a.nrows() } else { a.ncols() } });
        }
        Ok(Op::SecondQuant(a))
    }

    pub fn switch(space: &FockSpace) -> Result<Op> {
        let name = space.species().name();
        if name != "Epm" {
            return Err(Error::WrongSpecies { expected: "Epm".into(), found: name });
        }
        Ok(Op::Switch)
    }

    pub fn scale(self, x: C) -> Op {
        Op::Scale(x, Box::new(self))
    }

    /// `self · other`: `other` acts first.
    pub fn then_after(self, other: Op) -> Op {
        Op::Product(vec![self, other])
    }

    pub fn plus(self, other: Op) -> Op {
        Op::Sum(vec![self, other])
    }

    pub fn minus(self, other: Op) -> Op {
        Op::Sum(vec![self, other.scale(re(-1.0))])
    }

    /// Largest net level increase.
    pub fn shift(&self) -> i64 {
        match self {
            Op::Annihilate { .. } => -1,
            Op::Create { .. } | Op::CreateSymmetrized { .. } => 1,
            Op::Scale(_, o) => o.shift(),
            Op::Sum(ops) => ops.iter().map(Op::shift).max().unwrap_or(0),
            Op::Product(ops) => ops.iter().map(Op::shift).sum(),
            _ => 0,
        }
    }

    /// Largest level increase above the input level reached while applying
    /// the expression: an identity involving it is exact on levels
    /// `≤ N_max - depth`.
    pub fn depth(&self) -> usize {
        match self {
            Op::Create { .. } | Op::CreateSymmetrized { .. } | Op::KernelUpper { .. } => 1,
            Op::Scale(_, o) => o.depth(),
            Op::Sum(ops) => ops.iter().map(Op::depth).max().unwrap_or(0),
            Op::Product(ops) => {
                let (mut depth, mut running) = (0i64, 0i64);
                for op in ops.iter().rev() {
                    depth = depth.max(running + op.depth() as i64);
                    running += op.shift();
                }
                depth.max(0) as usize
            }
            _ => 0,
        }
    }

    pub fn apply(&self, space: &FockSpace, v: &FockVector) -> Result<FockVector> {
        let mut out = match self {
            Op::Identity => v.clone(),
            Op::Annihilate { weight, h } => columns(v, |k| annihilate_column(space, weight, h, k))?,
            Op::Create { weight, h } => columns(v, |k| create_column(space, weight, h, k))?,
            Op::CreateSymmetrized { weight, h } => create_symmetrized(space, weight, h, v)?,
            Op::Number => columns(v, |k| Ok(FockVector::unit(k.clone()).scale(re(k.0.level as f64))))?,
            Op::Poly(p) => columns(v, |k| {
                let n = k.0.level as f64;
                let value = p.iter().rev().fold(0.0, |acc, c| acc * n + c);
                Ok(FockVector::unit(k.clone()).scale(re(value)))
            })?,
            Op::SecondQuant(a) => columns(v, |k| second_quant_column(space, a, k))?,
            Op::Switch => columns(v, |k| switch_column(space, k))?,
            Op::KernelLower { weight, h1, h2 } => kernel_lower_apply(space, weight, h1, h2, v)?,
            Op::KernelUpper { weight, h1, h2 } => kernel_upper_apply(space, weight, h1, h2, v)?,
            Op::Scale(x, o) => o.apply(space, v)?.scale(*x),
            Op::Sum(ops) => {
                let mut acc = FockVector::zero();
                for o in ops {
                    acc = acc.add(&o.apply(space, v)?);
                }
                acc
            }
            Op::Product(ops) => {
                let mut acc = v.clone();
                for o in ops.iter().rev() {
                    acc = o.apply(space, &acc)?;
                }
                acc
            }
        };
        out.truncate(space.max_level());
        out.prune(0.0);
        Ok(out)
    }
}

fn columns(v: &FockVector, mut column: impl FnMut(&Key) -> Result<FockVector>) -> Result<FockVector> {
    let mut out = FockVector::zero();
    for (k, x) in v.iter() {
        for (k2, y) in column(k)?.iter() {
            out.add_at(k2.clone(), x * y);
        }
    }
    Ok(out)
}

fn ratio(h_to: u64, h_from: u64) -> f64 {
    (h_to as f64 / h_from as f64).sqrt()
}

fn annihilate_column(space: &FockSpace, weight: &WeightRef, h: &[C], key: &Key) -> Result<FockVector> {
    let (g, d) = key;
    let mut out = FockVector::zero();
    let Some(n) = g.level.checked_sub(1) else { return Ok(out) };
    let (_, h_from) = space.canonical(g, d)?;
    let species = space.species();
    for k in 0..=n {
        let coef = h[d[k] as usize].conj();
        if coef == zero() {
            continue;
        }
        let tau = Permutation::transposition(n + 1, k, n);
        let gk = species.transport(g, &tau)?;
        let rest = &transport_coloring(d, &tau)[..n];
        for (f, w) in weight.lower(&gk) {
            let (target, h_to) = space.canonical(&f, rest)?;
            out.add_at(target, w * coef * ratio(h_to, h_from));
        }
    }
    Ok(out)
}

fn create_column(space: &FockSpace, weight: &WeightRef, h: &[C], key: &Key) -> Result<FockVector> {
    let (f, c) = key;
    let mut out = FockVector::zero();
    if f.level + 1 > space.max_level() {
        return Ok(out);
    }
    let (_, h_from) = space.canonical(f, c)?;
    for (g, w) in weight.raise(f) {
        for (j, hj) in h.iter().enumerate() {
            if *hj == zero() {
                continue;
            }
            let mut cp = c.clone();
            cp.push(j as u8);
            let (target, h_to) = space.canonical(&g, &cp)?;
            out.add_at(target, w.conj() * hj * ratio(h_to, h_from));
        }
    }
    Ok(out)
}

/// Pointwise symmetrized creation:
/// `(a*(h)φ)(f,c) = Σ_k Σ_g conj ω(g, F[τ_k]f) · φ(g, (c∘τ_k)|n) · h_{c(k)}`.
fn create_symmetrized(space: &FockSpace, weight: &WeightRef, h: &[C], v: &FockVector) -> Result<FockVector> {
    let species = space.species();
    let mut targets = BTreeSet::new();
    for (key, _) in v.iter() {
        if key.0.level + 1 > space.max_level() {
            continue;
        }
        for (g, _) in weight.raise(&key.0) {
            for j in 0..space.num_colors() {
                let mut cp = key.1.clone();
                cp.push(j as u8);
                targets.insert(space.canonical(&g, &cp)?);
            }
        }
    }
    let mut out = FockVector::zero();
    for ((f, c), h_target) in targets {
        let n = f.level - 1;
        let mut value = zero();
        for k in 0..=n {
            let hk = h[c[k] as usize];
            if hk == zero() {
                continue;
            }
            let tau = Permutation::transposition(n + 1, k, n);
            let fk = species.transport(&f, &tau)?;
            let ck = transport_coloring(&c, &tau);
            for (g, w) in weight.lower(&fk) {
                value += w.conj() * space.function_value(v, &g, &ck[..n])? * hk;
            }
        }
        out.add_at((f, c), value / (h_target as f64).sqrt());
    }
    Ok(out)
}

fn second_quant_column(space: &FockSpace, a: &DMatrix<C>, key: &Key) -> Result<FockVector> {
    let (g, d) = key;
    let (_, h_from) = space.canonical(g, d)?;
    let mut out = FockVector::zero();
    for k in 0..g.level {
        for i in 0..space.num_colors() {
            let x = a[(i, d[k] as usize)];
            if x == zero() {
                continue;
            }
            let mut d2 = d.clone();
            d2[k] = i as u8;
            let (target, h_to) = space.canonical(g, &d2)?;
            out.add_at(target, x * ratio(h_to, h_from));
        }
    }
    Ok(out)
}

fn switch_column(space: &FockSpace, key: &Key) -> Result<FockVector> {
    let (g, d) = key;
    let Payload::Oriented(sign) = g.payload else {
        return Err(Error::WrongSpecies { expected: "Epm".into(), found: space.species().name() });
    };
    let flipped = Structure::new(g.level, Payload::Oriented(sign.flip()));
    let (_, h_from) = space.canonical(g, d)?;
    let (target, h_to) = space.canonical(&flipped, d)?;
    let mut out = FockVector::zero();
    out.add_at(target, re(ratio(h_to, h_from)));
    Ok(out)
}

type RowCache = HashMap<(usize, Structure), BTreeMap<Structure, C>>;

fn cached_row<'a>(
    cache: &'a mut RowCache,
    upper: bool,
    weight: &WeightRef,
    k: usize,
    f: &Structure,
) -> Result<&'a BTreeMap<Structure, C>> {
    let key = (k, f.clone());
    if !cache.contains_key(&key) {
        let row = if upper { upper_row(&**weight, k, f)? } else { lower_row(&**weight, k, f)? };
        cache.insert(key.clone(), row);
    }
    Ok(&cache[&key])
}

/// Orbit representatives `[f, d[k:=i]]` for `f` in the `k`-th kernel row of
/// an input representative, which contain every target with a nonzero value.
fn kernel_targets(space: &FockSpace, weight: &WeightRef, upper: bool, v: &FockVector, cache: &mut RowCache) -> Result<BTreeSet<(Key, u64)>> {
    let mut targets = BTreeSet::new();
    for ((g, d), _) in v.iter() {
        let n = g.level;
        let ks = if upper { n + 1 } else { n };
        for k in 0..ks {
            let row: Vec<Structure> = cached_row(cache, upper, weight, k, g)?.keys().cloned().collect();
            for f in row {
                if k == n {
                    targets.insert(space.canonical(&f, d)?);
                    continue;
                }
                for i in 0..space.num_colors() {
                    let mut d2 = d.clone();
                    d2[k] = i as u8;
                    targets.insert(space.canonical(&f, &d2)?);
                }
            }
        }
    }
    Ok(targets)
}

/// `Σ_{k<n} Σ_{f'} K_k(f,f') · a[c_k] · Σ_j conj(b_j) φ(f', c[k:=j])` at `(f, c)`.
fn kernel_sum(
    space: &FockSpace,
    weight: &WeightRef,
    upper: bool,
    a: &[C],
    b: &[C],
    v: &FockVector,
    f: &Structure,
    c: &[u8],
    cache: &mut RowCache,
) -> Result<C> {
    let mut value = zero();
    for k in 0..f.level {
        let ak = a[c[k] as usize];
        if ak == zero() {
            continue;
        }
        let row = cached_row(cache, upper, weight, k, f)?.clone();
        for (f2, kv) in row {
            let mut inner = zero();
            for (j, bj) in b.iter().enumerate() {
                if *bj == zero() {
                    continue;
                }
                let mut c2 = c.to_vec();
                c2[k] = j as u8;
                inner += bj.conj() * space.function_value(v, &f2, &c2)?;
            }
            value += kv * ak * inner;
        }
    }
    Ok(value)
}

fn kernel_lower_apply(space: &FockSpace, weight: &WeightRef, h1: &[C], h2: &[C], v: &FockVector) -> Result<FockVector> {
    let mut cache = RowCache::new();
    let mut out = FockVector::zero();
    for ((f, c), h) in kernel_targets(space, weight, false, v, &mut cache)? {
        let value = kernel_sum(space, weight, false, h1, h2, v, &f, &c, &mut cache)?;
        out.add_at((f, c), value / (h as f64).sqrt());
    }
    Ok(out)
}

fn kernel_upper_apply(space: &FockSpace, weight: &WeightRef, h1: &[C], h2: &[C], v: &FockVector) -> Result<FockVector> {
    let mut cache = RowCache::new();
    let mut out = FockVector::zero();
    let overlap = color_inner(h1, h2);
    for ((f, c), h) in kernel_targets(space, weight, true, v, &mut cache)? {
        let mut value = kernel_sum(space, weight, true, h2, h1, v, &f, &c, &mut cache)?;
        if overlap != zero() {
            let top = cached_row(&mut cache, true, weight, f.level, &f)?.clone();
            for (f2, kv) in top {
                value += overlap * kv * space.function_value(v, &f2, &c)?;
            }
        }
        out.add_at((f, c), value / (h as f64).sqrt());
    }
    Ok(out)
}

/// Creation or annihilation in a monomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dagger {
    Create,
    Annihilate,
}

/// `a^♯_{i_1} ⋯ a^♯_{i_m}` with basis colors, applied right to left.
pub type Word = Vec<(Dagger, u8)>;

fn letter(space: &FockSpace, weight: &WeightRef, (dagger, color): (Dagger, u8)) -> Result<Op> {
    let colors = space.free_colors();
    if color as usize >= colors {
        return Err(Error::Colors { needed: color as usize + 1, available: colors });
    }
    let h = unit_color(space.num_colors(), color as usize);
    match dagger {
        Dagger::Create => Op::creator(space, weight, &h),
        Dagger::Annihilate => Op::annihilator(space, weight, &h),
    }
}

/// Applies a word to `v`, rightmost letter first.
pub fn word_apply(space: &FockSpace, weight: &WeightRef, word: &[(Dagger, u8)], v: &FockVector) -> Result<FockVector> {
    let mut acc = v.clone();
    for &l in word.iter().rev() {
        acc = letter(space, weight, l)?.apply(space, &acc)?;
    }
    Ok(acc)
}

/// Applies a monomial to the vacuum.
///
/// The direct right-to-left product is cross-checked against the
/// color-pairing reduction `a_i R Ω = Σ_{k: R_k = a*_i} a_{i0} R_{<k} a*_{i0} R_{>k} Ω`
/// at the leftmost annihilator, with a color `i0` unused by the word. The
/// check is skipped when the space has no spare color.
pub fn monomial_apply(space: &FockSpace, weight: &WeightRef, word: &[(Dagger, u8)]) -> Result<FockVector> {
    let omega = space.vacuum()?;
    let direct = word_apply(space, weight, word, &omega)?;
    let Some(first) = word.iter().position(|l| l.0 == Dagger::Annihilate) else { return Ok(direct) };
    let used: BTreeSet<u8> = word.iter().map(|l| l.1).collect();
    let Some(fresh) = (0..space.free_colors() as u8).find(|c| !used.contains(c)) else { return Ok(direct) };
    let color = word[first].1;
    let rest = &word[first + 1..];
    let mut reduced = FockVector::zero();
    for (k, l) in rest.iter().enumerate() {
        if *l != (Dagger::Create, color) {
            continue;
        }
        let mut w: Word = vec![(Dagger::Annihilate, fresh)];
        w.extend_from_slice(&rest[..k]);
        w.push((Dagger::Create, fresh));
        w.extend_from_slice(&rest[k + 1..]);
        reduced = reduced.add(&word_apply(space, weight, &w, &omega)?);
    }
    let reduced = word_apply(space, weight, &word[..first], &reduced)?;
    let deviation = direct.sub(&reduced).max_abs();
    if deviation > 1e-10 * (1.0 + direct.max_abs()) {
        return Err(Error::MonomialMismatch(deviation));
    }
    Ok(direct)
}

/// An operator materialized on the orbit basis up to `N_max`.
#[derive(Clone, Debug)]
pub struct OperatorMatrix {
    basis: Vec<BasisElement>,
    columns: Vec<BTreeMap<usize, C>>,
}

impl OperatorMatrix {
    pub fn build(space: &FockSpace, op: &Op) -> Result<Self> {
        Self::build_columns(space, op, space.max_level())
    }

    /// Like [`OperatorMatrix::build`], with the columns above level `top` left empty.
    pub fn build_columns(space: &FockSpace, op: &Op, top: usize) -> Result<Self> {
        let basis = space.basis_upto(space.max_level())?;
        let mut columns = Vec::with_capacity(basis.len());
        for e in &basis {
            if e.level() > top {
                columns.push(BTreeMap::new());
                continue;
            }
            let image = op.apply(space, &FockVector::unit(e.key()))?;
            let mut col = BTreeMap::new();
            for (k, x) in image.iter() {
                if let Some(i) = space.global_index(k)? {
                    col.insert(i, *x);
                }
            }
            columns.push(col);
        }
        Ok(Self { basis, columns })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    pub fn get(&self, row: usize, col: usize) -> C {
        self.columns[col].get(&row).copied().unwrap_or_default()
    }

    /// Nonzero entries as `(row, col, value)`, column-major.
    pub fn entries(&self) -> Vec<(usize, usize, C)> {
        let mut out = Vec::new();
        for (j, col) in self.columns.iter().enumerate() {
            for (&i, &x) in col {
                out.push((i, j, x));
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut columns = vec![BTreeMap::new(); self.dim()];
        for (i, j, x) in self.entries() {
            columns[i].insert(j, x.conj());
        }
        Self { basis: self.basis.clone(), columns }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let columns = other
            .columns
            .iter()
            .map(|col| {
                let mut out: BTreeMap<usize, C> = BTreeMap::new();
                for (&k, &y) in col {
                    for (&i, &x) in &self.columns[k] {
                        *out.entry(i).or_default() += x * y;
                    }
                }
                out
            })
            .collect();
        Self { basis: self.basis.clone(), columns }
    }

    /// Largest entry of `self - other` within the selected columns.
    pub fn max_abs_diff(&self, other: &Self, select: impl Fn(&BasisElement) -> bool) -> f64 {
        let mut worst: f64 = 0.0;
        for (j, e) in self.basis.iter().enumerate() {
            if !select(e) {
                continue;
            }
            let rows: BTreeSet<usize> = self.columns[j].keys().chain(other.columns[j].keys()).copied().collect();
            for i in rows {
                worst = worst.max((self.get(i, j) - other.get(i, j)).norm());
            }
        }
        worst
    }

    /// The dense block from level `from` to level `to`.
    pub fn block(&self, to: usize, from: usize) -> DMatrix<C> {
        let rows: Vec<usize> = (0..self.dim()).filter(|&i| self.basis[i].level() == to).collect();
        let cols: Vec<usize> = (0..self.dim()).filter(|&j| self.basis[j].level() == from).collect();
        DMatrix::from_fn(rows.len(), cols.len(), |r, c| self.get(rows[r], cols[c]))
    }
}

/// Operator norm of the block of `op` from level `n` to level `n + shift`.
pub fn block_norm(matrix: &OperatorMatrix, to: usize, from: usize) -> f64 {
    let b = matrix.block(to, from);
    if b.is_empty() {
        return 0.0;
    }
    b.singular_values().iter().copied().fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::species;
    use crate::fock::SpaceRef;
    use crate::weights::parse_weight;

    fn setup(weight: &str, colors: usize, levels: usize) -> (SpaceRef, WeightRef) {
        let w = parse_weight(weight).unwrap();
        let space = FockSpace::new(w.species(), colors, levels).unwrap();
        (space, w)
    }

    #[test]
    fn annihilate_single_boson() {
        let (space, w) = setup("E", 2, 3);
        let s = &space.species().enumerate(1)[0];
        let e = space.basis_vector(s, &[0]).unwrap();
        let a = Op::annihilator(&space, &w, &unit_color(2, 0)).unwrap();
        let out = a.apply(&space, &e).unwrap();
        assert!((out.sub(&space.vacuum().unwrap())).max_abs() < 1e-15);
        assert!(a.apply(&space, &space.vacuum().unwrap()).unwrap().is_empty());
    }

    #[test]
    fn two_bosons_have_norm_two() {
        let (space, w) = setup("E", 2, 3);
        let ad = Op::creator(&space, &w, &unit_color(2, 0)).unwrap();
        let v = ad.apply(&space, &ad.apply(&space, &space.vacuum().unwrap()).unwrap()).unwrap();
        assert!((v.norm().powi(2) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn creator_is_adjoint_and_symmetrized() {
        let h = vec![C::new(0.6, 0.2), C::new(-0.3, 0.5)];
        for name in ["E", "L", "Epm", "ballot:0.3", "digraph:0.4", "tree_c:1.5", "product:0.3(E,L)", "free(L,E)"] {
            let (space, w) = setup(name, 2, 3);
            let a = OperatorMatrix::build(&space, &Op::annihilator(&space, &w, &h).unwrap()).unwrap();
            let ad = OperatorMatrix::build(&space, &Op::creator(&space, &w, &h).unwrap()).unwrap();
            let sym = OperatorMatrix::build(&space, &Op::creator_symmetrized(&space, &w, &h).unwrap()).unwrap();
            assert!(ad.max_abs_diff(&a.adjoint(), |_| true) < 1e-12, "{name}");
            assert!(ad.max_abs_diff(&sym, |_| true) < 1e-12, "{name}");
        }
    }

    #[test]
    fn linear_in_h() {
        let (space, w) = setup("L", 2, 3);
        let h1 = vec![C::new(0.6, 0.2), C::new(-0.3, 0.5)];
        let h2 = vec![C::new(0.1, -0.7), C::new(0.4, 0.25)];
        let z = C::new(0.3, -1.1);
        let sum: Vec<C> = h1.iter().zip(&h2).map(|(a, b)| a + z * b).collect();
        let v = space.basis_vector(&space.species().enumerate(2)[1], &[0, 1]).unwrap();
        let lhs = Op::creator(&space, &w, &sum).unwrap().apply(&space, &v).unwrap();
        let rhs = Op::creator(&space, &w, &h1)
            .unwrap()
            .apply(&space, &v)
            .unwrap()
            .add(&Op::creator(&space, &w, &h2).unwrap().apply(&space, &v).unwrap().scale(z));
        assert!(lhs.sub(&rhs).max_abs() < 1e-14);
        // the annihilator is antilinear
        let lhs = Op::annihilator(&space, &w, &sum).unwrap().apply(&space, &v).unwrap();
        let rhs = Op::annihilator(&space, &w, &h1)
            .unwrap()
            .apply(&space, &v)
            .unwrap()
            .add(&Op::annihilator(&space, &w, &h2).unwrap().apply(&space, &v).unwrap().scale(z.conj()));
        assert!(lhs.sub(&rhs).max_abs() < 1e-14);
    }

    #[test]
    fn order_annihilator_against_unsymmetrized_definition() {
        // a(e0) on δ_[order 01, colors (0,1)]: only the point in last position
        // can be removed, and it has color 1, so the result vanishes; with
        // colors (1,0) it returns δ_[order 0, color 1].
        let (space, w) = setup("L", 2, 3);
        let s = Structure::new(2, Payload::Order(vec![0, 1]));
        let a = Op::annihilator(&space, &w, &unit_color(2, 0)).unwrap();
        assert!(a.apply(&space, &space.delta_vector(&s, &[0, 1]).unwrap()).unwrap().is_empty());
        let out = a.apply(&space, &space.delta_vector(&s, &[1, 0]).unwrap()).unwrap();
        let t = Structure::new(1, Payload::Order(vec![0]));
        assert!(out.sub(&space.delta_vector(&t, &[1]).unwrap()).max_abs() < 1e-15);
    }

    #[test]
    fn number_and_switch() {
        let (space, _) = setup("Epm", 2, 3);
        let n = Op::Number;
        let s = &space.species().enumerate(3)[0];
        let e = space.basis_vector(s, &[0, 1, 1]).unwrap();
        assert!(n.apply(&space, &e).unwrap().sub(&e.scale(re(3.0))).max_abs() < 1e-15);
        assert!(n.apply(&space, &space.vacuum().unwrap()).unwrap().is_empty());
        let g = Op::switch(&space).unwrap();
        let gg = OperatorMatrix::build(&space, &g.clone().then_after(g.clone())).unwrap();
        let id = OperatorMatrix::build(&space, &Op::Identity).unwrap();
        assert!(gg.max_abs_diff(&id, |_| true) < 1e-15);
        // the two level-0 structures are exchanged
        let omega = space.vacuum().unwrap();
        assert!(g.apply(&space, &omega).unwrap().add(&omega).max_abs() < 1e-15);
        let tree = FockSpace::new(species("A").unwrap(), 2, 3).unwrap();
        assert!(matches!(Op::switch(&tree), Err(Error::WrongSpecies { .. })));
    }

    #[test]
    fn tree_vacuum_is_not_available() {
        let (space, w) = setup("tree", 2, 3);
        assert!(matches!(space.vacuum(), Err(Error::NoVacuum(_))));
        let ones = space.level(1).unwrap();
        let n = Op::Number;
        let e = FockVector::unit(ones.elements[0].key());
        assert!(n.apply(&space, &e).unwrap().sub(&e).max_abs() < 1e-15);
        let ad = Op::creator(&space, &w, &unit_color(2, 0)).unwrap();
        assert_eq!(space.level(0).unwrap().len(), 0);
        assert!(ad.apply(&space, &FockVector::zero()).unwrap().is_empty());
    }

    #[test]
    fn monomials() {
        let (space, w) = setup("L", 3, 4);
        let omega = space.vacuum().unwrap();
        assert_eq!(monomial_apply(&space, &w, &[]).unwrap(), omega);
        let v = monomial_apply(&space, &w, &[(Dagger::Annihilate, 0), (Dagger::Create, 0)]).unwrap();
        assert!(v.sub(&omega).max_abs() < 1e-15);
        let v = monomial_apply(&space, &w, &[(Dagger::Annihilate, 0), (Dagger::Create, 1)]).unwrap();
        assert!(v.is_empty());
        let word = [(Dagger::Create, 1), (Dagger::Annihilate, 0), (Dagger::Create, 1), (Dagger::Create, 0)];
        monomial_apply(&space, &w, &word).unwrap();
    }

    #[test]
    fn depth_of_expressions() {
        let (space, w) = setup("E", 1, 3);
        let h = unit_color(1, 0);
        let a = Op::annihilator(&space, &w, &h).unwrap();
        let ad = Op::creator(&space, &w, &h).unwrap();
        assert_eq!(a.clone().then_after(ad.clone()).depth(), 1);
        assert_eq!(ad.clone().then_after(a.clone()).depth(), 0);
        assert_eq!(a.clone().then_after(a.clone().then_after(ad.clone().then_after(ad.clone()))).depth(), 2);
        assert_eq!(a.then_after(Op::Identity).depth(), 0);
    }

    #[test]
    fn species_mismatch() {
        let space = FockSpace::new(species("L").unwrap(), 2, 3).unwrap();
        let w = parse_weight("E").unwrap();
        assert!(matches!(Op::annihilator(&space, &w, &unit_color(2, 0)), Err(Error::SpeciesMismatch { .. })));
        let w = parse_weight("L").unwrap();
        assert!(matches!(Op::annihilator(&space, &w, &unit_color(3, 0)), Err(Error::Dimension { .. })));
    }
}

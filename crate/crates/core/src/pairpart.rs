//! Pair partitions, vacuum moments and the positive definite function `t`
//! of a combinatorial Fock space.
//!
//! A pair partition `V` of `{1..2r}` is realized by the monomial whose
//! position `p` holds `a(e_i)` when `p` opens the `i`-th pair and `a*(e_i)`
//! when it closes it, applied right to left on the vacuum. Then
//! `t(V) = ⟨Ω, monomial · Ω⟩`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{FockSpace, FockVector, SpaceRef, Vacuum};
use crate::operators::{monomial_apply, unit_color, word_apply, Dagger, Op, Word};
use crate::species::{Payload, Sign, Structure};
use crate::weights::{parse_weight, WeightRef};

type C = Complex64;

/// Pairs `(k, l)` with `k < l`, sorted by opener, covering `1..=2r`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PairPartition {
    pairs: Vec<(usize, usize)>,
}

impl PairPartition {
    /// Validates that `pairs` cover `1..=2r` exactly once.
    pub fn new(mut pairs: Vec<(usize, usize)>) -> Result<Self> {
        for p in pairs.iter_mut() {
            if p.0 > p.1 {
                *p = (p.1, p.0);
            }
        }
        pairs.sort();
        let mut seen: Vec<usize> = pairs.iter().flat_map(|&(k, l)| [k, l]).collect();
        seen.sort();
        if seen != (1..=2 * pairs.len()).collect::<Vec<_>>() {
            return Err(Error::Parameter(format!("{pairs:?} is not a pair partition of 1..{}", 2 * pairs.len())));
        }
        Ok(Self { pairs })
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// Number of pairs `|V|`.
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn is_noncrossing(&self) -> bool {
        self.pairs.iter().all(|a| self.pairs.iter().all(|b| !crosses(*a, *b)))
    }

    /// Relabels the points of a sub-partition to `1..2m`, keeping their order.
    pub fn normalized(pairs: &[(usize, usize)]) -> Self {
        let mut points: Vec<usize> = pairs.iter().flat_map(|&(k, l)| [k, l]).collect();
        points.sort();
        let rank = |x: usize| points.iter().position(|&p| p == x).expect("point of the pair list") + 1;
        let mut out: Vec<(usize, usize)> = pairs.iter().map(|&(k, l)| (rank(k), rank(l))).collect();
        out.sort();
        Self { pairs: out }
    }

    /// The canonical word: one color per pair, numbered by opener.
    pub fn word(&self, colors: &[u8]) -> Word {
        let mut word = vec![(Dagger::Create, 0); 2 * self.len()];
        for (i, &(k, l)) in self.pairs.iter().enumerate() {
            word[k - 1] = (Dagger::Annihilate, colors[i]);
            word[l - 1] = (Dagger::Create, colors[i]);
        }
        word
    }
}

impl fmt::Display for PairPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, l) in &self.pairs {
            write!(f, "({k},{l})")?;
        }
        Ok(())
    }
}

impl FromStr for PairPartition {
    type Err = Error;

    /// Parses `(1,3)(2,4)`; the empty string is the empty partition.
    fn from_str(s: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        let bad = || Error::Syntax { pos: 0, msg: format!("expected pairs like `(1,3)(2,4)`, got `{s}`") };
        if !s.trim().is_empty() && !s.trim().ends_with(')') {
            return Err(bad());
        }
        for chunk in s.split(')').map(str::trim).filter(|c| !c.is_empty()) {
            let inner = chunk.strip_prefix('(').ok_or_else(bad)?;
            let (k, l) = inner.split_once(',').ok_or_else(bad)?;
            pairs.push((k.trim().parse().map_err(|_| bad())?, l.trim().parse().map_err(|_| bad())?));
        }
        Self::new(pairs)
    }
}

fn crosses((a, b): (usize, usize), (c, d): (usize, usize)) -> bool {
    (a < c && c < b && b < d) || (c < a && a < d && d < b)
}

fn nests((a, b): (usize, usize), (c, d): (usize, usize)) -> bool {
    (a < c && d < b) || (c < a && b < d)
}

/// All `(2r-1)!!` pair partitions of `1..2r`, in lexicographic order.
pub fn enumerate(r: usize) -> Vec<PairPartition> {
    fn go(free: &[usize], acc: &mut Vec<(usize, usize)>, out: &mut Vec<PairPartition>) {
        let Some((&first, rest)) = free.split_first() else {
            let mut pairs = acc.clone();
            pairs.sort();
            out.push(PairPartition { pairs });
            return;
        };
        for i in 0..rest.len() {
            acc.push((first, rest[i]));
            let remaining: Vec<usize> = rest.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &x)| x).collect();
            go(&remaining, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    go(&(1..=2 * r).collect::<Vec<_>>(), &mut vec![], &mut out);
    out.sort();
    out
}

/// Which pairs are linked when forming blocks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BlockConvention {
    /// Linked when the intervals cross.
    Crossing,
    /// Linked when the intervals cross or one contains the other.
    Overlap,
}

/// Connected components of `V` under `convention`, each with its original
/// labels, ordered by smallest opener.
pub fn blocks_with(v: &PairPartition, convention: BlockConvention) -> Vec<Vec<(usize, usize)>> {
    let linked = |a, b| crosses(a, b) || (convention == BlockConvention::Overlap && nests(a, b));
    let n = v.len();
    let mut component: Vec<usize> = (0..n).collect();
    fn root(c: &mut [usize], i: usize) -> usize {
        if c[i] == i {
            i
        } else {
            let r = root(c, c[i]);
            c[i] = r;
            r
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if linked(v.pairs[i], v.pairs[j]) {
                let (a, b) = (root(&mut component, i), root(&mut component, j));
                component[a.max(b)] = a.min(b);
            }
        }
    }
    let mut out: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut roots: Vec<usize> = Vec::new();
    for i in 0..n {
        let r = root(&mut component, i);
        match roots.iter().position(|&x| x == r) {
            Some(p) => out[p].push(v.pairs[i]),
            None => {
                roots.push(r);
                out.push(vec![v.pairs[i]]);
            }
        }
    }
    out
}

/// Blocks under the adopted convention, [`BlockConvention::Crossing`], the
/// one matching `t` computed on the ballot space (see [`pin_block_convention`]).
pub fn blocks(v: &PairPartition) -> Vec<Vec<(usize, usize)>> {
    blocks_with(v, BlockConvention::Crossing)
}

/// `q^{|V| - |B(V)|}`.
pub fn t_ballot_closed_form(v: &PairPartition, q: f64) -> f64 {
    q.powi((v.len() - blocks(v).len()) as i32)
}

fn closed_form_with(v: &PairPartition, q: f64, convention: BlockConvention) -> f64 {
    q.powi((v.len() - blocks_with(v, convention).len()) as i32)
}

/// Weight, colors and levels of a space on which `t` can be evaluated for
/// every `V` with `r ≤ r_max`, keeping one color spare for the monomial
/// cross-check.
pub fn space_for_t(weight: &str, r_max: usize) -> Result<(SpaceRef, WeightRef)> {
    let w = parse_weight(weight)?;
    let species = w.species();
    let seeded = species.enumerate(0).is_empty();
    let colors = r_max + 1 + usize::from(seeded);
    let levels = r_max + usize::from(seeded);
    let space = if seeded {
        FockSpace::seeded(species, colors, levels)?
    } else {
        FockSpace::new(species, colors, levels)?
    };
    Ok((space, w))
}

/// `t(V) = ⟨Ω, a^♯ ⋯ a^♯ Ω⟩` with the given fresh color per pair.
pub fn fock_t_with_colors(space: &FockSpace, weight: &WeightRef, v: &PairPartition, colors: &[u8]) -> Result<C> {
    if colors.len() < v.len() {
        return Err(Error::Colors { needed: v.len(), available: colors.len() });
    }
    let mut distinct = colors[..v.len()].to_vec();
    distinct.sort();
    distinct.dedup();
    if distinct.len() < v.len() {
        return Err(Error::Parameter("pairs need distinct colors".into()));
    }
    let needed = space.vacuum_level() + v.len();
    if space.max_level() < needed {
        return Err(Error::Truncation(format!("t on {} pairs needs N_max ≥ {needed}", v.len())));
    }
    let omega = space.vacuum()?;
    let out = monomial_apply(space, weight, &v.word(colors))?;
    Ok(omega.inner(&out))
}

/// `t(V)` with colors `0, 1, ..` by opener.
pub fn fock_t(space: &FockSpace, weight: &WeightRef, v: &PairPartition) -> Result<C> {
    let available = space.free_colors();
    if available < v.len() {
        return Err(Error::Colors { needed: v.len(), available });
    }
    let colors: Vec<u8> = (0..v.len() as u8).collect();
    fock_t_with_colors(space, weight, v, &colors)
}

/// Compares `t` on the ballot space with `q^{|V| - |B(V)|}` under both
/// conventions, over `r ≤ r_max`, and returns the one that matches.
pub fn pin_block_convention(q: f64, r_max: usize, tol: f64) -> Result<Option<BlockConvention>> {
    let (space, w) = space_for_t(&format!("ballot:{q}"), r_max)?;
    let mut matches = vec![BlockConvention::Crossing, BlockConvention::Overlap];
    for r in 0..=r_max {
        for v in enumerate(r) {
            let t = fock_t(&space, &w, &v)?;
            matches.retain(|&c| (t - C::new(closed_form_with(&v, q, c), 0.0)).norm() <= tol);
        }
    }
    Ok(match matches.as_slice() {
        [one] => Some(*one),
        _ => None,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct MultiplicativityReport {
    pub left: String,
    pub right: String,
    pub r_max: usize,
    pub partitions: usize,
    pub deviation: f64,
    pub tol: f64,
    pub pass: bool,
}

/// `t_{F×G}(V) = t_F(V) · t_G(V)` for every `V` with `r ≤ r_max`.
pub fn check_cartesian_multiplicativity(left: &str, right: &str, r_max: usize, tol: f64) -> Result<MultiplicativityReport> {
    let (fs, fw) = space_for_t(left, r_max)?;
    let (gs, gw) = space_for_t(right, r_max)?;
    let (ps, pw) = space_for_t(&format!("cartesian({left},{right})"), r_max)?;
    let (mut deviation, mut partitions) = (0.0f64, 0);
    for r in 0..=r_max {
        for v in enumerate(r) {
            let product = fock_t(&fs, &fw, &v)? * fock_t(&gs, &gw, &v)?;
            deviation = deviation.max((fock_t(&ps, &pw, &v)? - product).norm());
            partitions += 1;
        }
    }
    Ok(MultiplicativityReport { left: left.into(), right: right.into(), r_max, partitions, deviation, tol, pass: deviation <= tol })
}

/// `⟨Ω, X^n Ω⟩` for `n = 0..=m`, `X = a(h) + a*(h)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MomentTable {
    pub values: Vec<f64>,
    /// Largest imaginary part discarded from `values`.
    pub imaginary: f64,
}

/// Vacuum moments of the field operator.
pub fn moments(space: &FockSpace, weight: &WeightRef, h: &[C], m: usize) -> Result<MomentTable> {
    let base = space.vacuum_level();
    let needed = base + m.div_ceil(2) + 1;
    if space.max_level() < needed {
        return Err(Error::Truncation(format!("moments to order {m} need N_max ≥ {needed}")));
    }
    let x = Op::annihilator(space, weight, h)?.plus(Op::creator(space, weight, h)?);
    let omega = space.vacuum()?;
    let mut v = omega.clone();
    let (mut values, mut imaginary) = (vec![], 0.0f64);
    for n in 0..=m {
        let z = omega.inner(&v);
        values.push(z.re);
        imaginary = imaginary.max(z.im.abs());
        if n < m {
            v = x.apply(space, &v)?;
            // components above base + (remaining steps) never return to Ω
            v.truncate(base + (m - n - 1));
        }
    }
    Ok(MomentTable { values, imaginary })
}

/// Moments with a single basis color on a space sized for order `m`.
pub fn moments_for(weight: &str, m: usize) -> Result<MomentTable> {
    let w = parse_weight(weight)?;
    let species = w.species();
    let levels = m.div_ceil(2) + 1;
    let space = if species.enumerate(0).is_empty() {
        FockSpace::seeded(species, 2, levels + 1)?
    } else {
        FockSpace::new(species, 1, levels)?
    };
    moments(&space, &w, &unit_color(space.num_colors(), 0), m)
}

/// Smallest eigenvalue of the Hankel matrix `[m_{i+j}]_{i,j<size}`.
pub fn hankel_min_eigenvalue(values: &[f64], size: usize) -> Result<f64> {
    if values.len() < 2 * size - 1 {
        return Err(Error::Dimension { expected: 2 * size - 1, found: values.len() });
    }
    let h = DMatrix::from_fn(size, size, |i, j| values[i + j]);
    Ok(SymmetricEigen::new(h).eigenvalues.iter().copied().fold(f64::INFINITY, f64::min))
}

fn orientation_sign(s: &Structure) -> f64 {
    match &s.payload {
        Payload::Oriented(Sign::Plus) => 1.0,
        Payload::Oriented(Sign::Minus) => -1.0,
        Payload::Product { left, right, .. } => orientation_sign(left) * orientation_sign(right),
        _ => 1.0,
    }
}

/// The weight on `(E±)^p` giving each of the `p` factors amplitude `p^{-1/2}`.
pub fn green_weight(p: usize) -> Result<String> {
    match p {
        1 => Ok("Epm".into()),
        2 => Ok("product:0.5(Epm,Epm)".into()),
        3 => Ok(format!("product:{}(product:0.5(Epm,Epm),Epm)", 1.0 / 3.0)),
        _ => Err(Error::Parameter(format!("Green spaces are built for 1 ≤ p ≤ 3, got {p}"))),
    }
}

/// `(E±)^p` with `a(h) = p^{-1/2} Σ_k a^{(k)}(h)` and vacuum the product of
/// the antisymmetric vacua `(Ω₊ - Ω₋)/√2`.
pub fn green_space(p: usize, colors: usize, levels: usize) -> Result<(SpaceRef, WeightRef)> {
    let w = parse_weight(&green_weight(p)?)?;
    let species = w.species();
    let amplitude = (2.0f64).powf(-(p as f64) / 2.0);
    let mut omega = FockVector::zero();
    for s in species.enumerate(0).iter() {
        omega.add_at((s.clone(), vec![]), C::new(orientation_sign(s) * amplitude, 0.0));
    }
    let space = FockSpace::build(Arc::clone(&species), colors, levels, Vacuum::Custom(omega))?;
    Ok((space, w))
}

/// Vacuum moments of the Green field of order `p`.
pub fn green_moments(p: usize, m: usize) -> Result<MomentTable> {
    let (space, w) = green_space(p, 1, m.div_ceil(2) + 1)?;
    moments(&space, &w, &unit_color(1, 0), m)
}

/// Applies a word to the vacuum without the reduction cross-check.
pub fn word_on_vacuum(space: &FockSpace, weight: &WeightRef, word: &[(Dagger, u8)]) -> Result<FockVector> {
    word_apply(space, weight, word, &space.vacuum()?)
}

//! The truncated symmetric Hilbert space `Γ_F(K)` over a finite color set.
//!
//! Basis vectors are indexed by orbits `[s, c]` of colored structures. The
//! unnormalized orbit vector `δ_{[s,c]}` has squared norm `|H_{(s,c)}|`; we
//! work in the orthonormal basis `e_{[s,c]} = δ_{[s,c]} / |H_{(s,c)}|^{1/2}`.
//! As a symmetric function, `e_o` takes the value `|H_o|^{1/2}` on every
//! element of the orbit `o`: this is where the `1/n!` of the inner product
//! and the stabilizer orders are absorbed, and the operator formulas in
//! [`crate::operators`] are written against exactly this convention.
//!
//! Levels are materialized lazily, and vectors are sparse maps keyed by
//! canonical orbit representatives, so operators can be applied to vectors
//! at levels whose full basis is never listed.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::perm::{factorial, Permutation};
use crate::species::{transport_coloring, Coloring, Payload, SpeciesRef, Structure};

/// Canonical orbit representative of a colored structure.
pub type Key = (Structure, Coloring);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisElement {
    pub structure: Structure,
    pub coloring: Coloring,
    pub orbit_size: u64,
    /// `|H_{(s,c)}|`, the squared norm of `δ_{[s,c]}`.
    pub norm_sq: u64,
}

impl BasisElement {
    pub fn key(&self) -> Key {
        (self.structure.clone(), self.coloring.clone())
    }

    pub fn level(&self) -> usize {
        self.structure.level
    }
}

#[derive(Debug)]
pub struct Level {
    pub elements: Vec<BasisElement>,
    index: HashMap<Key, usize>,
}

impl Level {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn position(&self, key: &Key) -> Option<usize> {
        self.index.get(key).copied()
    }
}

/// How the vacuum of a space is chosen.
#[derive(Clone, Debug)]
pub enum Vacuum {
    /// The unique level-0 structure; for `E±` the antisymmetric combination
    /// of its two level-0 structures.
    Standard,
    /// The unique level-1 structure carrying a reserved color. Used for
    /// species without level-0 structures, such as rooted trees.
    Seed { color: u8 },
    Custom(FockVector),
}

#[derive(Debug)]
pub struct FockSpace {
    species: SpeciesRef,
    num_colors: usize,
    max_level: usize,
    vacuum: Vacuum,
    levels: Vec<OnceLock<Arc<Level>>>,
    canon: Mutex<HashMap<Key, (Key, u64)>>,
    perms: Mutex<HashMap<usize, Arc<Vec<Permutation>>>>,
}

pub type SpaceRef = Arc<FockSpace>;

impl FockSpace {
    pub fn new(species: SpeciesRef, num_colors: usize, max_level: usize) -> Result<SpaceRef> {
        Self::build(species, num_colors, max_level, Vacuum::Standard)
    }

    /// A space whose vacuum is the seed structure at level 1 with the last
    /// color, which is then reserved for it.
    pub fn seeded(species: SpeciesRef, num_colors: usize, max_level: usize) -> Result<SpaceRef> {
        if num_colors < 2 {
            return Err(Error::Colors { needed: 2, available: num_colors });
        }
        Self::build(species, num_colors, max_level, Vacuum::Seed { color: (num_colors - 1) as u8 })
    }

    pub fn build(species: SpeciesRef, num_colors: usize, max_level: usize, vacuum: Vacuum) -> Result<SpaceRef> {
        if num_colors == 0 || num_colors > u8::MAX as usize {
            return Err(Error::Parameter(format!("number of colors must be in 1..=255, got {num_colors}")));
        }
        Ok(Arc::new(Self {
            species,
            num_colors,
            max_level,
            vacuum,
            levels: (0..=max_level).map(|_| OnceLock::new()).collect(),
            canon: Mutex::new(HashMap::new()),
            perms: Mutex::new(HashMap::new()),
        }))
    }

    pub fn species(&self) -> &SpeciesRef {
        &self.species
    }

    pub fn num_colors(&self) -> usize {
        self.num_colors
    }

    pub fn max_level(&self) -> usize {
        self.max_level
    }

    /// Colors available to operators; excludes a reserved seed color.
    pub fn free_colors(&self) -> usize {
        match self.vacuum {
            Vacuum::Seed { .. } => self.num_colors - 1,
            _ => self.num_colors,
        }
    }

    fn permutations(&self, n: usize) -> Arc<Vec<Permutation>> {
        self.perms.lock().unwrap().entry(n).or_insert_with(|| Arc::new(Permutation::all(n))).clone()
    }

    /// Canonical representative of the orbit of `(s, c)` and `|H_{(s,c)}|`.
    pub fn canonical(&self, s: &Structure, c: &[u8]) -> Result<(Key, u64)> {
        let key = (s.clone(), c.to_vec());
        if let Some(hit) = self.canon.lock().unwrap().get(&key) {
            return Ok(hit.clone());
        }
        if c.len() != s.level {
            return Err(Error::LevelMismatch { expected: s.level, found: c.len() });
        }
        let perms = self.permutations(s.level);
        let mut orbit = Vec::with_capacity(perms.len());
        let mut stabilizer = 0;
        for sigma in perms.iter() {
            let t = self.species.transport(s, sigma)?;
            let d = transport_coloring(c, sigma);
            if t == *s && d == c {
                stabilizer += 1;
            }
            orbit.push((t, d));
        }
        let rep = orbit.iter().min().cloned().expect("orbit is nonempty");
        let mut cache = self.canon.lock().unwrap();
        for element in orbit {
            cache.insert(element, (rep.clone(), stabilizer));
        }
        Ok((rep, stabilizer))
    }

    /// The orbit basis at level `n ≤ N_max`, in representative order.
    pub fn level(&self, n: usize) -> Result<Arc<Level>> {
        let slot = self
            .levels
            .get(n)
            .ok_or_else(|| Error::Truncation(format!("level {n} exceeds the maximal level {}", self.max_level)))?;
        if let Some(l) = slot.get() {
            return Ok(l.clone());
        }
        let level = Arc::new(self.materialize(n)?);
        Ok(slot.get_or_init(|| level).clone())
    }

    fn materialize(&self, n: usize) -> Result<Level> {
        let mut reps: BTreeMap<Key, u64> = BTreeMap::new();
        let colorings = all_colorings(n, self.num_colors);
        for s in self.species.enumerate(n).iter() {
            for c in &colorings {
                let (rep, h) = self.canonical(s, c)?;
                reps.insert(rep, h);
            }
        }
        let total = factorial(n);
        let elements: Vec<BasisElement> = reps
            .into_iter()
            .map(|((structure, coloring), h)| BasisElement { structure, coloring, orbit_size: total / h, norm_sq: h })
            .collect();
        let index = elements.iter().enumerate().map(|(i, e)| (e.key(), i)).collect();
        Ok(Level { elements, index })
    }

    /// Number of basis elements per level `0..=N_max`.
    pub fn dimensions(&self) -> Result<Vec<usize>> {
        (0..=self.max_level).map(|n| Ok(self.level(n)?.len())).collect()
    }

    /// Global index of a basis element, levels concatenated in order.
    pub fn global_index(&self, key: &Key) -> Result<Option<usize>> {
        let n = key.0.level;
        if n > self.max_level {
            return Ok(None);
        }
        let mut offset = 0;
        for m in 0..n {
            offset += self.level(m)?.len();
        }
        Ok(self.level(n)?.position(key).map(|i| offset + i))
    }

    /// All basis elements at levels `0..=top`, in global order.
    pub fn basis_upto(&self, top: usize) -> Result<Vec<BasisElement>> {
        let mut out = Vec::new();
        for n in 0..=top.min(self.max_level) {
            out.extend(self.level(n)?.elements.iter().cloned());
        }
        Ok(out)
    }

    /// The orthonormal basis vector `e_{[s,c]}` of an arbitrary colored structure.
    pub fn basis_vector(&self, s: &Structure, c: &[u8]) -> Result<FockVector> {
        let (key, _) = self.canonical(s, c)?;
        Ok(FockVector::unit(key))
    }

    /// `δ_{[s,c]} = |H_{(s,c)}|^{1/2} e_{[s,c]}`.
    pub fn delta_vector(&self, s: &Structure, c: &[u8]) -> Result<FockVector> {
        let (key, h) = self.canonical(s, c)?;
        Ok(FockVector::unit(key).scale(Complex64::new((h as f64).sqrt(), 0.0)))
    }

    /// Coefficients of `v` in the unnormalized basis `δ`.
    pub fn delta_coefficients(&self, v: &FockVector) -> Result<BTreeMap<Key, Complex64>> {
        v.iter()
            .map(|(k, x)| {
                let (_, h) = self.canonical(&k.0, &k.1)?;
                Ok((k.clone(), x / (h as f64).sqrt()))
            })
            .collect()
    }

    /// The value of the symmetric function `v` at a colored structure.
    pub fn function_value(&self, v: &FockVector, s: &Structure, c: &[u8]) -> Result<Complex64> {
        let (key, h) = self.canonical(s, c)?;
        Ok(v.get(&key) * (h as f64).sqrt())
    }

    pub fn has_vacuum(&self) -> bool {
        self.vacuum().is_ok()
    }

    /// The level at which the vacuum lives.
    pub fn vacuum_level(&self) -> usize {
        match &self.vacuum {
            Vacuum::Seed { .. } => 1,
            Vacuum::Custom(v) => v.iter().map(|(k, _)| k.0.level).min().unwrap_or(0),
            Vacuum::Standard => 0,
        }
    }

    pub fn vacuum(&self) -> Result<FockVector> {
        match &self.vacuum {
            Vacuum::Custom(v) => Ok(v.clone()),
            Vacuum::Seed { color } => {
                let ones = self.species.enumerate(1);
                if ones.len() != 1 {
                    return Err(Error::NoVacuum(self.species.name()));
                }
                self.basis_vector(&ones[0], &[*color])
            }
            Vacuum::Standard => {
                let empty = self.species.enumerate(0);
                match empty.len() {
                    1 => self.basis_vector(&empty[0], &[]),
                    2 if empty.iter().all(|s| matches!(s.payload, Payload::Oriented(_))) => {
                        // (Ω₊ - Ω₋)/√2, empty[0] is the positive orientation
                        let r = std::f64::consts::FRAC_1_SQRT_2;
                        let plus = self.basis_vector(&empty[0], &[])?;
                        let minus = self.basis_vector(&empty[1], &[])?;
                        Ok(plus.scale(Complex64::new(r, 0.0)).add(&minus.scale(Complex64::new(-r, 0.0))))
                    }
                    _ => Err(Error::NoVacuum(self.species.name())),
                }
            }
        }
    }
}

/// All colorings of `n` points with `k` colors, in lexicographic order.
pub fn all_colorings(n: usize, k: usize) -> Vec<Coloring> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|prefix: Coloring| {
                (0..k as u8).map(move |c| {
                    let mut p = prefix.clone();
                    p.push(c);
                    p
                })
            })
            .collect();
    }
    out
}

/// A finite vector in orthonormal-basis coordinates.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FockVector {
    entries: BTreeMap<Key, Complex64>,
}

impl FockVector {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn unit(key: Key) -> Self {
        let mut entries = BTreeMap::new();
        entries.insert(key, Complex64::new(1.0, 0.0));
        Self { entries }
    }

    pub fn get(&self, key: &Key) -> Complex64 {
        self.entries.get(key).copied().unwrap_or_default()
    }

    /// Adds `x` to the coefficient of `key`.
    pub fn add_at(&mut self, key: Key, x: Complex64) {
        *self.entries.entry(key).or_default() += x;
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Key, &Complex64)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn scale(&self, x: Complex64) -> Self {
        Self { entries: self.entries.iter().map(|(k, v)| (k.clone(), v * x)).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, v) in &other.entries {
            out.add_at(k.clone(), *v);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// `⟨self, other⟩`, conjugate-linear in `self`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.entries.iter().map(|(k, v)| v.conj() * other.get(k)).sum()
    }

    pub fn norm(&self) -> f64 {
        self.entries.values().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.values().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Keeps the components at levels `≤ top`.
    pub fn truncate(&mut self, top: usize) {
        self.entries.retain(|k, _| k.0.level <= top);
    }

    /// Drops coefficients with modulus at most `eps`.
    pub fn prune(&mut self, eps: f64) {
        self.entries.retain(|_, v| v.norm() > eps);
    }
}

/// `‖Σ_σ δ_{F[σ]s} ⊗ e_{c∘σ⁻¹}‖²` computed in the unsymmetrized space with
/// the `1/n!` inner product, as an exact fraction `(numerator, n!)`.
pub fn symmetrized_norm_sq(species: &SpeciesRef, s: &Structure, c: &[u8]) -> Result<(u64, u64)> {
    let mut counts: HashMap<Key, u64> = HashMap::new();
    for sigma in Permutation::all(s.level) {
        *counts.entry((species.transport(s, &sigma)?, transport_coloring(c, &sigma))).or_default() += 1;
    }
    Ok((counts.values().map(|m| m * m).sum(), factorial(s.level)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::species;

    #[test]
    fn set_space_level_two() {
        let space = FockSpace::new(species("E").unwrap(), 2, 2).unwrap();
        let level = space.level(2).unwrap();
        let norms: Vec<u64> = level.elements.iter().map(|e| e.norm_sq).collect();
        assert_eq!(norms, vec![2, 1, 2]);
        assert_eq!(space.level(0).unwrap().elements[0].norm_sq, 1);
    }

    #[test]
    fn order_space_level_two() {
        let space = FockSpace::new(species("L").unwrap(), 2, 2).unwrap();
        let level = space.level(2).unwrap();
        assert_eq!(level.len(), 4);
        assert!(level.elements.iter().all(|e| e.norm_sq == 1));
    }

    #[test]
    fn orbits_partition_colored_structures() {
        for name in ["E", "Epm", "L", "C", "A", "Bal", "E * L"] {
            let sp = species(name).unwrap();
            let space = FockSpace::new(sp.clone(), 2, 4).unwrap();
            for n in 0..=4 {
                let total: u64 = space.level(n).unwrap().elements.iter().map(|e| factorial(n) / e.norm_sq).sum();
                assert_eq!(total, sp.enumerate(n).len() as u64 * 2u64.pow(n as u32), "{name} level {n}");
            }
        }
    }

    #[test]
    fn inner_products() {
        let space = FockSpace::new(species("E").unwrap(), 2, 3).unwrap();
        let omega = space.vacuum().unwrap();
        assert_eq!(omega.inner(&omega), Complex64::new(1.0, 0.0));
        let s = &space.species().enumerate(3)[0];
        let d = space.delta_vector(s, &[0, 0, 1]).unwrap();
        assert!((d.inner(&d).re - 2.0).abs() < 1e-12);
        let e1 = space.basis_vector(s, &[0, 1, 1]).unwrap();
        let e2 = space.basis_vector(s, &[0, 0, 1]).unwrap();
        assert_eq!(e1.inner(&e2), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn vacua() {
        let tree = FockSpace::new(species("A").unwrap(), 2, 3).unwrap();
        assert!(matches!(tree.vacuum(), Err(Error::NoVacuum(_))));
        let seeded = FockSpace::seeded(species("A").unwrap(), 2, 3).unwrap();
        assert_eq!(seeded.vacuum().unwrap().len(), 1);
        assert_eq!(seeded.vacuum_level(), 1);
        let epm = FockSpace::new(species("Epm").unwrap(), 1, 2).unwrap();
        let v = epm.vacuum().unwrap();
        assert_eq!(v.len(), 2);
        assert!((v.norm() - 1.0).abs() < 1e-15);
    }
}

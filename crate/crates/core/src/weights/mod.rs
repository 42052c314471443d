//! Weights: permutation-invariant kernels `ω(f, g)` between structures at
//! consecutive levels, where `g` carries the added point `n`.
//!
//! Every weight provides `value` together with the two neighbor generators
//! `raise` (all `g` with `ω(f, g) ≠ 0`) and `lower` (all `f` with
//! `ω(f, g) ≠ 0`). Operators are assembled from the generators; the
//! brute-force sums in [`kernels`] and the tests use `value` only, so the two
//! descriptions are checked against each other.

mod catalog;
mod composite;
mod concrete;
pub mod kernels;

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::species::{SpeciesRef, Structure};

pub use catalog::{element_weight, parse_weight};
pub use composite::{AddWeight, CartesianWeight, ComposeWeight, FreeWeight, PairTreeWeight, ProductWeight, ScaledWeight, SumWeight};
pub use concrete::{BallotWeight, DigraphWeight, OrderWeight, OrientedWeight, SetWeight, TreeWeight};

/// A list of neighbors with their nonzero weights.
pub type Neighbors = Vec<(Structure, Complex64)>;

pub trait Weight: Send + Sync + fmt::Debug {
    /// Catalog name; parsing it back yields an equivalent weight.
    fn name(&self) -> String;

    /// The species this weight lives on.
    fn species(&self) -> SpeciesRef;

    /// A constant `C` with `|ω| ≤ C`.
    fn bound(&self) -> f64;

    /// `ω(f, g)` for valid structures at levels `n` and `n + 1`.
    fn value(&self, f: &Structure, g: &Structure) -> Complex64;

    /// All `(g, ω(f, g))` with nonzero weight.
    fn raise(&self, f: &Structure) -> Neighbors;

    /// All `(f, ω(f, g))` with nonzero weight.
    fn lower(&self, g: &Structure) -> Neighbors;
}

pub type WeightRef = Arc<dyn Weight>;

/// `ω(f, g)` with level and membership checks.
pub fn evaluate(w: &dyn Weight, f: &Structure, g: &Structure) -> Result<Complex64> {
    if g.level != f.level + 1 {
        return Err(Error::LevelMismatch { expected: f.level + 1, found: g.level });
    }
    let species = w.species();
    if !species.contains(f) || !species.contains(g) {
        return Err(Error::ForeignStructure { species: species.name() });
    }
    Ok(w.value(f, g))
}

/// A weight on `F×ε`: `ω(f, p)` for an `F` structure and one of its points.
pub trait ElementWeight: Send + Sync + fmt::Debug {
    fn name(&self) -> String;
    fn value(&self, f: &Structure, point: usize) -> Complex64;
    fn bound(&self) -> f64;
}

pub type ElementWeightRef = Arc<dyn ElementWeight>;

/// `ω_{E,ε} ≡ 1`.
#[derive(Debug)]
pub struct ElementOne;

impl ElementWeight for ElementOne {
    fn name(&self) -> String {
        "Eeps".into()
    }
    fn value(&self, _: &Structure, _: usize) -> Complex64 {
        Complex64::new(1.0, 0.0)
    }
    fn bound(&self) -> f64 {
        1.0
    }
}

/// `ω_{L,ε}(s, u) = 1` iff `u` is the last element of the order `s`.
#[derive(Debug)]
pub struct ElementLast;

impl ElementWeight for ElementLast {
    fn name(&self) -> String {
        "Leps".into()
    }
    fn value(&self, f: &Structure, point: usize) -> Complex64 {
        match &f.payload {
            crate::species::Payload::Order(seq) if seq.last() == Some(&point) => Complex64::new(1.0, 0.0),
            _ => Complex64::new(0.0, 0.0),
        }
    }
    fn bound(&self) -> f64 {
        1.0
    }
}

/// Neighbors by exhaustive search over the next level, for testing.
pub fn raise_by_search(w: &dyn Weight, f: &Structure) -> Neighbors {
    w.species()
        .enumerate(f.level + 1)
        .iter()
        .filter_map(|g| {
            let v = w.value(f, g);
            (v != Complex64::new(0.0, 0.0)).then(|| (g.clone(), v))
        })
        .collect()
}

/// Neighbors by exhaustive search over the previous level, for testing.
pub fn lower_by_search(w: &dyn Weight, g: &Structure) -> Neighbors {
    if g.level == 0 {
        return vec![];
    }
    w.species()
        .enumerate(g.level - 1)
        .iter()
        .filter_map(|f| {
            let v = w.value(f, g);
            (v != Complex64::new(0.0, 0.0)).then(|| (f.clone(), v))
        })
        .collect()
}

pub(crate) fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub(crate) fn check_unit_interval(name: &str, x: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Parameter(format!("{name} must lie in [0, 1], got {x}")));
    }
    Ok(())
}

pub(crate) fn check_nonnegative(name: &str, x: f64) -> Result<()> {
    if !(x >= 0.0 && x.is_finite()) {
        return Err(Error::Parameter(format!("{name} must be a finite number >= 0, got {x}")));
    }
    Ok(())
}

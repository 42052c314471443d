//! The contraction kernels `(ω̄·ω)_k` and `(ω·ω̄)_k`.
//!
//! `kernel_lower` and `kernel_upper` are the literal sums over all structures
//! of the neighboring level; `lower_row` and `upper_row` compute a whole row
//! from the neighbor generators and are what the operators use.

use std::collections::BTreeMap;

use num_complex::Complex64;

use super::{c, Weight};
use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::species::Structure;

/// `(ω̄·ω)_k(f, f') = Σ_{g ∈ F[n-1]} conj ω(g, F[τ](f)) · ω(g, F[τ](f'))`,
/// `τ` the transposition of `k` and `n-1`, for `0 ≤ k ≤ n-1`.
pub fn kernel_lower(w: &dyn Weight, k: usize, f: &Structure, f2: &Structure) -> Result<Complex64> {
    let n = f.level;
    if f2.level != n {
        return Err(Error::LevelMismatch { expected: n, found: f2.level });
    }
    if k >= n {
        return Err(Error::KernelIndex { k, n });
    }
    let species = w.species();
    let tau = Permutation::transposition(n, k, n - 1);
    let x = species.transport(f, &tau)?;
    let y = species.transport(f2, &tau)?;
    Ok(species
        .enumerate(n - 1)
        .iter()
        .map(|g| w.value(g, &x).conj() * w.value(g, &y))
        .sum())
}

/// `(ω·ω̄)_k(f, f') = Σ_{g ∈ F[n+1]} ω(f, g) · conj ω(f', F[τ](g))`,
/// `τ` the transposition of `k` and `n`, for `0 ≤ k ≤ n`.
pub fn kernel_upper(w: &dyn Weight, k: usize, f: &Structure, f2: &Structure) -> Result<Complex64> {
    let n = f.level;
    if f2.level != n {
        return Err(Error::LevelMismatch { expected: n, found: f2.level });
    }
    if k > n {
        return Err(Error::KernelIndex { k, n });
    }
    let species = w.species();
    let tau = Permutation::transposition(n + 1, k, n);
    let mut sum = c(0.0);
    for g in species.enumerate(n + 1).iter() {
        let a = w.value(f, g);
        if a == c(0.0) {
            continue;
        }
        sum += a * w.value(f2, &species.transport(g, &tau)?).conj();
    }
    Ok(sum)
}

/// All nonzero `(ω̄·ω)_k(f, ·)`.
pub fn lower_row(w: &dyn Weight, k: usize, f: &Structure) -> Result<BTreeMap<Structure, Complex64>> {
    let n = f.level;
    if k >= n {
        return Err(Error::KernelIndex { k, n });
    }
    let species = w.species();
    let tau = Permutation::transposition(n, k, n - 1);
    let x = species.transport(f, &tau)?;
    let mut row = BTreeMap::new();
    for (g, a) in w.lower(&x) {
        for (y, b) in w.raise(&g) {
            *row.entry(species.transport(&y, &tau)?).or_insert(c(0.0)) += a.conj() * b;
        }
    }
    row.retain(|_, v| *v != c(0.0));
    Ok(row)
}

/// All nonzero `(ω·ω̄)_k(f, ·)`.
pub fn upper_row(w: &dyn Weight, k: usize, f: &Structure) -> Result<BTreeMap<Structure, Complex64>> {
    let n = f.level;
    if k > n {
        return Err(Error::KernelIndex { k, n });
    }
    let species = w.species();
    let tau = Permutation::transposition(n + 1, k, n);
    let mut row = BTreeMap::new();
    for (g, a) in w.raise(f) {
        let y = species.transport(&g, &tau)?;
        for (f2, b) in w.lower(&y) {
            *row.entry(f2).or_insert(c(0.0)) += a * b.conj();
        }
    }
    row.retain(|_, v| *v != c(0.0));
    Ok(row)
}

//! Permutations of canonical finite sets `{0, .., n-1}`.

use std::fmt;

use crate::error::{Error, Result};

/// A bijection `σ` of `{0, .., n-1}` stored by images: `σ(i) = images[i]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self { images: (0..n).collect() }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::Parameter(format!("{images:?} is not a permutation")));
            }
            seen[i] = true;
        }
        Ok(Self { images })
    }

    /// The transposition exchanging `a` and `b` in `S(n)`.
    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut images: Vec<usize> = (0..n).collect();
        images.swap(a, b);
        Self { images }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `self ∘ other`, i.e. `other` acts first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.len(), other.len(), "composing permutations of different degree");
        Permutation { images: other.images.iter().map(|&i| self.images[i]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.len()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j] = i;
        }
        Permutation { images }
    }

    /// The extension `σ⁺` to `{0, .., n}` fixing the added point `n`.
    pub fn extend(&self) -> Permutation {
        let mut images = self.images.clone();
        images.push(self.len());
        Permutation { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// True for odd permutations.
    pub fn is_odd(&self) -> bool {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut transpositions = 0;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.images[i];
                len += 1;
            }
            transpositions += len - 1;
        }
        transpositions % 2 == 1
    }

    /// All `n!` permutations of `{0, .., n-1}` in lexicographic order of images.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut current: Vec<usize> = (0..n).collect();
        loop {
            out.push(Permutation { images: current.clone() });
            // next lexicographic permutation
            let Some(i) = (1..n).rev().find(|&i| current[i - 1] < current[i]) else {
                break;
            };
            let j = (i..n).rev().find(|&j| current[j] > current[i - 1]).unwrap();
            current.swap(i - 1, j);
            current[i..].reverse();
        }
        out
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "σ{:?}", self.images)
    }
}

pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// Relabels a sorted subset along `σ`: returns the sorted image of `subset`
/// and the induced permutation of canonical indices `{0, .., |subset|-1}`.
pub fn induced(sigma: &Permutation, subset: &[usize]) -> (Vec<usize>, Permutation) {
    let mut image: Vec<usize> = subset.iter().map(|&u| sigma.apply(u)).collect();
    image.sort_unstable();
    let images = subset
        .iter()
        .map(|&u| {
            let v = sigma.apply(u);
            image.binary_search(&v).expect("image point present")
        })
        .collect();
    (image, Permutation { images })
}

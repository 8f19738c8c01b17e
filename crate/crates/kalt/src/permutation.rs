//! Permutations in one-line notation, uniform sampling, and text I/O.
//!
//! Values are 1-based throughout: a permutation of size `n` is a bijective
//! image of `1..=n`, and position `p` (1-based) holds the value `sigma(p)`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::rng::{stream_seed, Xoshiro256PlusPlus};

/// A `(master_seed, stream_index)` pair that fully determines a random
/// stream. Equal specs produce bit-identical streams on any thread count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SeedSpec {
    pub master_seed: u64,
    pub stream_index: u64,
}

impl SeedSpec {
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        SeedSpec {
            master_seed,
            stream_index,
        }
    }

    /// The generator for this stream (see [`crate::rng`] for the derivation).
    pub fn rng(&self) -> Xoshiro256PlusPlus {
        Xoshiro256PlusPlus::from_seed(stream_seed(self.master_seed, self.stream_index))
    }
}

/// A permutation of `[1, n]` in one-line notation.
///
/// Immutable after construction and cheap to share across threads.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    image: Vec<u32>,
}

impl Permutation {
    /// Validate and wrap a one-line image. Every value `1..=n` must appear
    /// exactly once.
    pub fn from_image(image: Vec<u32>) -> Result<Self> {
        let n = image.len();
        if n == 0 {
            return Err(Error::EmptyInput);
        }
        let mut seen = vec![false; n];
        for &v in &image {
            if v == 0 || v as usize > n {
                return Err(Error::NotABijection {
                    n,
                    detail: format!("value {v} outside 1..={n}"),
                });
            }
            let slot = &mut seen[v as usize - 1];
            if *slot {
                return Err(Error::NotABijection {
                    n,
                    detail: format!("value {v} appears more than once"),
                });
            }
            *slot = true;
        }
        Ok(Permutation { image })
    }

    /// Wrap an image that is a bijection by construction (e.g. freshly
    /// shuffled). Checked in debug builds.
    pub(crate) fn from_image_unchecked(image: Vec<u32>) -> Self {
        debug_assert!(Permutation::from_image(image.clone()).is_ok());
        Permutation { image }
    }

    /// Parse a comma- or whitespace-separated list of values.
    pub fn parse(text: &str) -> Result<Self> {
        let mut image = Vec::new();
        for token in text.split(|c: char| c == ',' || c.is_whitespace()) {
            if token.is_empty() {
                continue;
            }
            let v: u32 = token
                .parse()
                .map_err(|_| Error::InvalidToken(token.to_string()))?;
            image.push(v);
        }
        Permutation::from_image(image)
    }

    /// The identity permutation `1, 2, ..., n`.
    pub fn identity(n: usize) -> Self {
        assert!(n >= 1, "permutation size must be at least 1");
        Permutation {
            image: (1..=n as u32).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.image.len()
    }

    /// One-line image: `values()[p]` is the value at (0-based) position `p`.
    pub fn values(&self) -> &[u32] {
        &self.image
    }

    /// Draw a uniformly random permutation of size `n` from the stream
    /// determined by `seed`, via a Fisher-Yates shuffle with unbiased
    /// bounded draws. Exactly uniform on the symmetric group.
    pub fn sample_uniform(n: usize, seed: SeedSpec) -> Self {
        assert!(n >= 1, "permutation size must be at least 1");
        let mut image = Vec::new();
        sample_uniform_into(n, seed, &mut image);
        Permutation::from_image_unchecked(image)
    }

    /// The vertical flip: value `v` at each position becomes `n + 1 - v`.
    /// An involution that exchanges k-peaks and k-valleys.
    pub fn flip(&self) -> Self {
        let n = self.image.len() as u32;
        Permutation {
            image: self.image.iter().map(|&v| n + 1 - v).collect(),
        }
    }

    /// The group inverse: position (1-based) of value `v` in `self` becomes
    /// the value at position `v` of the result.
    pub fn inverse(&self) -> Self {
        let mut image = vec![0u32; self.image.len()];
        for (pos, &v) in self.image.iter().enumerate() {
            image[v as usize - 1] = pos as u32 + 1;
        }
        Permutation { image }
    }
}

/// Fill `out` with a fresh uniform sample of size `n`, reusing its storage.
pub(crate) fn sample_uniform_into(n: usize, seed: SeedSpec, out: &mut Vec<u32>) {
    let mut rng = seed.rng();
    out.clear();
    out.extend(1..=n as u32);
    for i in (1..n).rev() {
        let j = rng.bounded(i as u64 + 1) as usize;
        out.swap(i, j);
    }
}

impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Permutation::parse(s)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.image.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

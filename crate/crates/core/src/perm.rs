//! Permutations of `[n] = {1, …, n}` in one-line notation, plus lexicographic
//! enumeration of the symmetric group.
//!
//! Positions are 1-based everywhere in the public API, so `σ.at(i)` is σ(i).

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest size accepted by [`Permutation::new`] and by enumeration.
///
/// Every coefficient of a generating polynomial over `S_n` is at most `n!`,
/// and `20! < 2^63`.
pub const MAX_N: usize = 20;

/// Largest size accepted by [`Permutation::random`]; bounded by `u8` storage.
pub const MAX_SAMPLE_N: usize = u8::MAX as usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("size {n} out of range 1..={max}")]
    SizeOutOfRange { n: usize, max: usize },
    #[error("not a bijection on [{n}]: {reason}")]
    NotABijection { n: usize, reason: String },
    #[error("cannot parse permutation {text:?}: {reason}")]
    Parse { text: String, reason: String },
}

/// A bijection on `[n]`, stored as its one-line word `σ(1) σ(2) … σ(n)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Permutation {
    word: Vec<u8>,
}

impl Permutation {
    /// Validates `word` as a permutation of `[n]` with `1 <= n <= MAX_N`.
    pub fn new<T>(word: &[T]) -> Result<Self, PermError>
    where
        T: Copy + TryInto<u64>,
    {
        Self::with_limit(word, MAX_N)
    }

    fn with_limit<T>(word: &[T], max: usize) -> Result<Self, PermError>
    where
        T: Copy + TryInto<u64>,
    {
        let n = word.len();
        if n == 0 || n > max {
            return Err(PermError::SizeOutOfRange { n, max });
        }
        let mut seen = vec![false; n + 1];
        let mut out = Vec::with_capacity(n);
        for &raw in word {
            let v = raw.try_into().ok().filter(|&v| v >= 1 && v <= n as u64);
            let Some(v) = v else {
                return Err(PermError::NotABijection {
                    n,
                    reason: "value outside 1..=n".into(),
                });
            };
            if std::mem::replace(&mut seen[v as usize], true) {
                return Err(PermError::NotABijection {
                    n,
                    reason: format!("value {v} repeated"),
                });
            }
            out.push(v as u8);
        }
        Ok(Self { word: out })
    }

    pub fn identity(n: usize) -> Result<Self, PermError> {
        if n == 0 || n > MAX_N {
            return Err(PermError::SizeOutOfRange { n, max: MAX_N });
        }
        Ok(Self {
            word: (1..=n as u8).collect(),
        })
    }

    /// Uniformly random permutation of `[n]`, `1 <= n <= MAX_SAMPLE_N`.
    ///
    /// This is the one constructor allowed past `MAX_N`: statistics are
    /// size-agnostic, only enumeration and distributions carry the guard.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self, PermError> {
        if n == 0 || n > MAX_SAMPLE_N {
            return Err(PermError::SizeOutOfRange {
                n,
                max: MAX_SAMPLE_N,
            });
        }
        let mut word: Vec<u8> = (1..=n).map(|v| v as u8).collect();
        word.shuffle(rng);
        Ok(Self { word })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.word.len()
    }

    /// The one-line word, `word()[i - 1] == σ(i)`.
    #[inline]
    pub fn word(&self) -> &[u8] {
        &self.word
    }

    /// σ(i) for `1 <= i <= n`.
    #[inline]
    pub fn at(&self, i: usize) -> usize {
        self.word[i - 1] as usize
    }

    /// The permutation ρ with ρ(σ(i)) = i.
    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u8; self.n()];
        for (pos, &v) in self.word.iter().enumerate() {
            inv[v as usize - 1] = (pos + 1) as u8;
        }
        Self { word: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.word.iter().enumerate().all(|(i, &v)| v as usize == i + 1)
    }

    /// Steps to the lexicographic successor within `word[from..]`, leaving
    /// the prefix untouched. Returns `false` (word unchanged) at the last one.
    fn advance_suffix(&mut self, from: usize) -> bool {
        let w = &mut self.word[from..];
        if w.len() < 2 {
            return false;
        }
        let Some(i) = (0..w.len() - 1).rev().find(|&i| w[i] < w[i + 1]) else {
            return false;
        };
        let j = (i + 1..w.len()).rev().find(|&j| w[j] > w[i]).unwrap();
        w.swap(i, j);
        w[i + 1..].reverse();
        true
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({self})")
    }
}

/// Digits concatenated when `n <= 9`, comma-separated otherwise.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.n() <= 9 { "" } else { "," };
        for (i, v) in self.word.iter().enumerate() {
            if i > 0 {
                f.write_str(sep)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Accepts the comma form always, and the compact digit form when `n <= 9`.
impl FromStr for Permutation {
    type Err = PermError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let text = s.trim();
        let parse_err = |reason: &str| PermError::Parse {
            text: s.to_string(),
            reason: reason.to_string(),
        };
        let values: Vec<u64> = if text.contains(',') {
            text.split(',')
                .map(|tok| tok.trim().parse::<u64>())
                .collect::<Result<_, _>>()
                .map_err(|_| parse_err("expected comma-separated positive integers"))?
        } else {
            if text.is_empty() {
                return Err(parse_err("empty input"));
            }
            text.chars()
                .map(|c| c.to_digit(10).map(u64::from))
                .collect::<Option<_>>()
                .ok_or_else(|| parse_err("expected digits 1-9"))?
        };
        if !text.contains(',') && values.len() > 9 {
            return Err(parse_err("compact form only covers n <= 9; use commas"));
        }
        Permutation::new(&values)
    }
}

impl TryFrom<Vec<u32>> for Permutation {
    type Error = PermError;
    fn try_from(v: Vec<u32>) -> Result<Self, Self::Error> {
        Permutation::with_limit(&v, MAX_SAMPLE_N)
    }
}

impl From<Permutation> for Vec<u32> {
    fn from(p: Permutation) -> Self {
        p.word.into_iter().map(u32::from).collect()
    }
}

/// Lexicographic enumeration of `S_n`, or of the block of `S_n` whose first
/// entry is fixed.
///
/// [`Enumeration::advance`] lends the current permutation without allocating;
/// the `Iterator` impl clones it.
#[derive(Debug, Clone)]
pub struct Enumeration {
    current: Permutation,
    free_from: usize,
    started: bool,
    done: bool,
}

impl Enumeration {
    fn start(n: usize, first: Option<usize>) -> Result<Self, PermError> {
        let mut current = Permutation::identity(n)?;
        let free_from = match first {
            None => 0,
            Some(f) => {
                if f == 0 || f > n {
                    return Err(PermError::NotABijection {
                        n,
                        reason: format!("first entry {f} outside 1..=n"),
                    });
                }
                // f followed by the rest in increasing order
                current.word[..f].rotate_right(1);
                1
            }
        };
        Ok(Self {
            current,
            free_from,
            started: false,
            done: false,
        })
    }

    pub fn advance(&mut self) -> Option<&Permutation> {
        if self.done {
            return None;
        }
        if self.started {
            if !self.current.advance_suffix(self.free_from) {
                self.done = true;
                return None;
            }
        } else {
            self.started = true;
        }
        Some(&self.current)
    }
}

impl Iterator for Enumeration {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        self.advance().cloned()
    }
}

/// All `n!` permutations of `[n]` in lexicographic order.
pub fn enumerate(n: usize) -> Result<Enumeration, PermError> {
    Enumeration::start(n, None)
}

/// The `(n-1)!` permutations with σ(1) = `first`, in lexicographic order.
/// Concatenating the blocks for `first = 1..=n` gives [`enumerate`]`(n)`.
pub fn enumerate_block(n: usize, first: usize) -> Result<Enumeration, PermError> {
    Enumeration::start(n, Some(first))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn p(w: &[u32]) -> Permutation {
        Permutation::new(w).unwrap()
    }

    #[test]
    fn construction() {
        assert_eq!(p(&[1]).n(), 1);
        assert_eq!(p(&[3, 7, 6, 2, 1, 5, 4]).n(), 7);
        assert!(matches!(
            Permutation::new(&[1u32, 1, 2]),
            Err(PermError::NotABijection { .. })
        ));
        assert!(matches!(
            Permutation::new(&[0u32, 1]),
            Err(PermError::NotABijection { .. })
        ));
        assert!(matches!(
            Permutation::new(&[1u32, 3]),
            Err(PermError::NotABijection { .. })
        ));
        assert!(matches!(
            Permutation::new::<u32>(&[]),
            Err(PermError::SizeOutOfRange { n: 0, .. })
        ));
        let big: Vec<u32> = (1..=21).collect();
        assert!(matches!(
            Permutation::new(&big),
            Err(PermError::SizeOutOfRange { n: 21, .. })
        ));
        assert!(Permutation::new(&[-1i64, 1]).is_err());
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(p(&[1, 2, 3]).inverse(), p(&[1, 2, 3]));
        assert_eq!(p(&[2, 3, 1]).inverse(), p(&[3, 1, 2]));
        assert_eq!(
            p(&[3, 7, 6, 2, 1, 5, 4]).inverse(),
            p(&[5, 4, 1, 7, 6, 3, 2])
        );
    }

    #[test]
    fn inverse_is_involution() {
        for n in 1..=6 {
            for s in enumerate(n).unwrap() {
                let inv = s.inverse();
                for i in 1..=n {
                    assert_eq!(inv.at(s.at(i)), i);
                }
                assert_eq!(inv.inverse(), s);
            }
        }
    }

    #[test]
    fn enumerate_small() {
        let all: Vec<_> = enumerate(1).unwrap().collect();
        assert_eq!(all, vec![p(&[1])]);
        let all: Vec<_> = enumerate(3).unwrap().collect();
        assert_eq!(all.len(), 6);
        assert_eq!(all[0], p(&[1, 2, 3]));
        assert_eq!(all[5], p(&[3, 2, 1]));
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert!(enumerate(0).is_err());
        assert!(enumerate(21).is_err());
    }

    #[test]
    fn enumerate_counts_and_distinct() {
        let mut fact = 1;
        for n in 1..=8 {
            fact *= n;
            let set: HashSet<Permutation> = enumerate(n).unwrap().collect();
            assert_eq!(set.len(), fact);
        }
    }

    #[test]
    fn blocks_concatenate_to_full_enumeration() {
        for n in 1..=7 {
            let full: Vec<_> = enumerate(n).unwrap().collect();
            let blocks: Vec<_> = (1..=n)
                .flat_map(|f| enumerate_block(n, f).unwrap())
                .collect();
            assert_eq!(full, blocks);
        }
        assert!(enumerate_block(3, 4).is_err());
    }

    #[test]
    fn text_forms() {
        let s: Permutation = "3762154".parse().unwrap();
        assert_eq!(s, p(&[3, 7, 6, 2, 1, 5, 4]));
        assert_eq!(s.to_string(), "3762154");
        let c: Permutation = "3,7,6,2,1,5,4".parse().unwrap();
        assert_eq!(c, s);
        let big: Permutation = "10,9,8,7,6,5,4,3,2,1".parse().unwrap();
        assert_eq!(big.to_string(), "10,9,8,7,6,5,4,3,2,1");
        assert!("".parse::<Permutation>().is_err());
        assert!("12a".parse::<Permutation>().is_err());
        assert!("112".parse::<Permutation>().is_err());
    }

    #[test]
    fn random_is_a_bijection() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let s = Permutation::random(50, &mut rng).unwrap();
        let mut w = s.word().to_vec();
        w.sort_unstable();
        assert_eq!(w, (1..=50).collect::<Vec<u8>>());
        assert!(Permutation::random(256, &mut rng).is_err());
    }
}

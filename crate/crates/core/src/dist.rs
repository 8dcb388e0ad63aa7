//! Generating polynomials of statistics summed over `S_n` (or over the
//! valley classes `S_{n,k}`).
//!
//! An [`Engine`] computes every requested distribution for a given `n` in a
//! single enumeration pass, splitting `S_n` into blocks by first entry across
//! worker threads, and caches the results in-process. Partial counts are
//! merged by addition, so the output does not depend on the worker count.

use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gamma::GammaVector;
use crate::perm::{enumerate_block, PermError, Permutation, MAX_N};
use crate::poly::{Monomial, MultiPoly, PolyError};
use crate::stats::{Stat, StatRecord, UnknownStatistic};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DistError {
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error(transparent)]
    UnknownStatistic(#[from] UnknownStatistic),
    #[error("k = {k} out of range 0..={max}")]
    KOutOfRange { k: u32, max: u32 },
    #[error("negative exponent inv - exc at {witness}")]
    NegativeExponent { witness: Permutation },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// A generating polynomial over `S_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Dist {
    /// `Σ t^{stat σ}`.
    Single(Stat),
    /// `Σ p^{s1 σ} q^{s2 σ} t^{s3 σ}`.
    Triple([Stat; 3]),
    /// `Σ q^{inv σ} t^{exc σ}`.
    InvExc,
    /// `Σ q^{inv σ - exc σ} t^{exc σ}`.
    InvExcShifted,
    /// `Σ_{σ ∈ S_{n,k}} p^{res σ} q^{les σ}`.
    ValleyClass(u32),
}

impl Dist {
    pub const RES_LES_DES: Dist = Dist::Triple([Stat::Res, Stat::Les, Stat::Des]);
    pub const RESS_LES_DES: Dist = Dist::Triple([Stat::Ress, Stat::Les, Stat::Des]);
    pub const NEST_CROS_DROP: Dist = Dist::Triple([Stat::Nest, Stat::Cros, Stat::Drop]);
}

impl fmt::Display for Dist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dist::Single(s) => write!(f, "single:{s}"),
            Dist::Triple([a, b, c]) => write!(f, "triple:{a},{b},{c}"),
            Dist::InvExc => f.write_str("S"),
            Dist::InvExcShifted => f.write_str("S-shifted"),
            Dist::ValleyClass(k) => write!(f, "a_nk:{k}"),
        }
    }
}

/// Largest `k` with `S_{n,k}` possibly nonempty.
pub fn max_valleys(n: usize) -> u32 {
    (n.saturating_sub(1) / 2) as u32
}

fn check_size(n: usize) -> Result<(), DistError> {
    if n == 0 || n > MAX_N {
        return Err(PermError::SizeOutOfRange { n, max: MAX_N }.into());
    }
    Ok(())
}

/// Exponent of the term a permutation contributes to `dist`, if any.
fn exponent(dist: Dist, r: &StatRecord) -> Option<Monomial> {
    match dist {
        Dist::Single(s) => Some(Monomial::new(0, 0, r.get(s))),
        Dist::Triple([a, b, c]) => Some(Monomial::new(r.get(a), r.get(b), r.get(c))),
        Dist::InvExc => Some(Monomial::new(0, r.inv, r.exc)),
        // the caller screens inv < exc before getting here
        Dist::InvExcShifted => Some(Monomial::new(0, r.inv - r.exc, r.exc)),
        Dist::ValleyClass(k) => {
            (r.dd == 0 && r.valleys == k).then(|| Monomial::new(r.res, r.les, 0))
        }
    }
}

/// Per-worker counts for every requested distribution.
struct Tally {
    counts: Vec<HashMap<Monomial, u64>>,
    negative: Option<Permutation>,
}

impl Tally {
    fn new(len: usize) -> Self {
        Self {
            counts: vec![HashMap::new(); len],
            negative: None,
        }
    }

    fn record(&mut self, dists: &[Dist], s: &Permutation) {
        let r = StatRecord::of(s);
        for (dist, counts) in dists.iter().zip(&mut self.counts) {
            if *dist == Dist::InvExcShifted && r.inv < r.exc {
                if self.negative.as_ref().is_none_or(|w| s < w) {
                    self.negative = Some(s.clone());
                }
                continue;
            }
            if let Some(m) = exponent(*dist, &r) {
                *counts.entry(m).or_insert(0) += 1;
            }
        }
    }

    fn merge(&mut self, other: Tally) {
        for (mine, theirs) in self.counts.iter_mut().zip(other.counts) {
            for (m, c) in theirs {
                *mine.entry(m).or_insert(0) += c;
            }
        }
        self.negative = match (self.negative.take(), other.negative) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
    }
}

fn to_poly(counts: HashMap<Monomial, u64>) -> Result<MultiPoly, DistError> {
    let terms = counts
        .into_iter()
        .map(|(m, c)| i64::try_from(c).map(|c| (m, c)).map_err(|_| PolyError::Overflow(m)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(MultiPoly::from_terms(terms)?)
}

/// One pass over `S_n` feeding every distribution in `dists`.
pub fn tally(n: usize, dists: &[Dist], jobs: usize) -> Vec<Result<MultiPoly, DistError>> {
    if let Err(e) = check_size(n) {
        return dists.iter().map(|_| Err(e.clone())).collect();
    }
    let workers = jobs.clamp(1, n);
    let next_block = AtomicUsize::new(1);
    let run = || {
        let mut tally = Tally::new(dists.len());
        loop {
            let first = next_block.fetch_add(1, Ordering::Relaxed);
            if first > n {
                break tally;
            }
            let mut block = enumerate_block(n, first).expect("size checked");
            while let Some(s) = block.advance() {
                tally.record(dists, s);
            }
        }
    };
    let total = if workers == 1 {
        run()
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..workers).map(|_| scope.spawn(run)).collect();
            let mut acc = Tally::new(dists.len());
            for h in handles {
                acc.merge(h.join().expect("tally worker panicked"));
            }
            acc
        })
    };
    let Tally { counts, negative } = total;
    dists
        .iter()
        .zip(counts)
        .map(|(dist, counts)| match (dist, &negative) {
            (Dist::InvExcShifted, Some(w)) => Err(DistError::NegativeExponent { witness: w.clone() }),
            _ => to_poly(counts),
        })
        .collect()
}

/// Cached, optionally parallel, distribution engine.
pub struct Engine {
    jobs: usize,
    cache: Mutex<HashMap<(usize, Dist), Result<MultiPoly, DistError>>>,
}

impl Default for Engine {
    fn default() -> Self {
        Self::new(1)
    }
}

impl Engine {
    pub fn new(jobs: usize) -> Self {
        Self {
            jobs: jobs.max(1),
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn jobs(&self) -> usize {
        self.jobs
    }

    /// Computes, in one pass, whichever of `dists` is not cached yet for `n`.
    pub fn prefetch(&self, n: usize, dists: &[Dist]) -> Result<(), DistError> {
        check_size(n)?;
        for d in dists {
            if let Dist::ValleyClass(k) = *d {
                if k > max_valleys(n) {
                    return Err(DistError::KOutOfRange { k, max: max_valleys(n) });
                }
            }
        }
        let mut missing: Vec<Dist> = {
            let cache = self.cache.lock().unwrap();
            dists.iter().copied().filter(|d| !cache.contains_key(&(n, *d))).collect()
        };
        missing.sort();
        missing.dedup();
        if missing.is_empty() {
            return Ok(());
        }
        let results = tally(n, &missing, self.jobs);
        let mut cache = self.cache.lock().unwrap();
        for (d, r) in missing.into_iter().zip(results) {
            cache.insert((n, d), r);
        }
        Ok(())
    }

    pub fn get(&self, n: usize, dist: Dist) -> Result<MultiPoly, DistError> {
        self.prefetch(n, &[dist])?;
        self.cache.lock().unwrap()[&(n, dist)].clone()
    }

    pub fn dist_single(&self, n: usize, stat: Stat) -> Result<MultiPoly, DistError> {
        self.get(n, Dist::Single(stat))
    }

    /// Same as [`Engine::dist_single`], resolving the statistic by name.
    pub fn dist_single_named(&self, n: usize, stat: &str) -> Result<MultiPoly, DistError> {
        self.dist_single(n, stat.parse()?)
    }

    pub fn dist_s(&self, n: usize) -> Result<MultiPoly, DistError> {
        self.get(n, Dist::InvExc)
    }

    pub fn dist_s_shifted(&self, n: usize) -> Result<MultiPoly, DistError> {
        self.get(n, Dist::InvExcShifted)
    }

    pub fn dist_triple(&self, n: usize, triple: [Stat; 3]) -> Result<MultiPoly, DistError> {
        self.get(n, Dist::Triple(triple))
    }

    pub fn a_nk(&self, n: usize, k: u32) -> Result<MultiPoly, DistError> {
        self.get(n, Dist::ValleyClass(k))
    }

    /// All valley classes `a_{n,0} … a_{n,m}` from one pass.
    pub fn a_n(&self, n: usize) -> Result<Vec<MultiPoly>, DistError> {
        check_size(n)?;
        let dists: Vec<_> = (0..=max_valleys(n)).map(Dist::ValleyClass).collect();
        self.prefetch(n, &dists)?;
        dists.into_iter().map(|d| self.get(n, d)).collect()
    }

    /// `γ_{n,k}(q) = a_{n,k}(q², q)` for every `k`.
    pub fn gamma_nk_q(&self, n: usize) -> Result<GammaVector, DistError> {
        let entries = self
            .a_n(n)?
            .iter()
            .map(MultiPoly::substitute_p_with_q_squared)
            .collect::<Result<_, _>>()?;
        Ok(GammaVector { n, entries })
    }

    /// Integer gamma vector of the Eulerian polynomial: `a_{n,k}(1, 1)`.
    pub fn gamma_plain(&self, n: usize) -> Result<GammaVector, DistError> {
        let entries = self
            .a_n(n)?
            .iter()
            .map(MultiPoly::specialize_pq_to_one)
            .collect::<Result<_, _>>()?;
        Ok(GammaVector { n, entries })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(terms: &[(i64, u32, u32, u32)]) -> MultiPoly {
        MultiPoly::from_terms(terms.iter().map(|&(c, p, q, t)| (Monomial::new(p, q, t), c))).unwrap()
    }

    fn eulerian3() -> MultiPoly {
        poly(&[(1, 0, 0, 0), (4, 0, 0, 1), (1, 0, 0, 2)])
    }

    fn a3() -> MultiPoly {
        // (1+t)^2 + (p+q)t
        poly(&[(1, 0, 0, 0), (2, 0, 0, 1), (1, 1, 0, 1), (1, 0, 1, 1), (1, 0, 0, 2)])
    }

    #[test]
    fn single_examples() {
        let e = Engine::default();
        assert_eq!(e.dist_single(1, Stat::Des).unwrap(), MultiPoly::one());
        assert_eq!(e.dist_single(3, Stat::Des).unwrap(), eulerian3());
        assert_eq!(e.dist_single(3, Stat::Exc).unwrap(), eulerian3());
        assert!(matches!(
            e.dist_single_named(3, "maj"),
            Err(DistError::UnknownStatistic(_))
        ));
        assert!(matches!(e.dist_single(0, Stat::Des), Err(DistError::Perm(_))));
        assert!(matches!(e.dist_single(21, Stat::Des), Err(DistError::Perm(_))));
    }

    #[test]
    fn q_eulerian_examples() {
        let e = Engine::default();
        assert_eq!(e.dist_s(1).unwrap(), MultiPoly::one());
        assert_eq!(e.dist_s(2).unwrap(), poly(&[(1, 0, 0, 0), (1, 0, 1, 1)]));
        assert_eq!(e.dist_s(3).unwrap().eval_at_ones().unwrap(), 6);
        assert_eq!(e.dist_s_shifted(2).unwrap(), poly(&[(1, 0, 0, 0), (1, 0, 0, 1)]));
        let shifted3 = e.dist_s_shifted(3).unwrap();
        assert_eq!(
            shifted3,
            poly(&[(1, 0, 0, 0), (2, 0, 0, 1), (1, 0, 1, 1), (1, 0, 2, 1), (1, 0, 0, 2)])
        );
        assert_eq!(shifted3.specialize_pq_to_one().unwrap(), eulerian3());
    }

    #[test]
    fn triple_examples() {
        let e = Engine::default();
        assert_eq!(e.get(3, Dist::RES_LES_DES).unwrap(), a3());
        assert_eq!(e.get(3, Dist::NEST_CROS_DROP).unwrap(), a3());
        assert_eq!(
            e.dist_triple(1, [Stat::Inv, Stat::Less, Stat::Cros]).unwrap(),
            MultiPoly::one()
        );
    }

    #[test]
    fn valley_class_examples() {
        let e = Engine::default();
        assert_eq!(e.a_nk(3, 0).unwrap(), MultiPoly::one());
        assert_eq!(e.a_nk(3, 1).unwrap(), poly(&[(1, 1, 0, 0), (1, 0, 1, 0)]));
        for n in 1..=8 {
            assert_eq!(e.a_nk(n, 0).unwrap(), MultiPoly::one(), "n = {n}");
        }
        assert_eq!(
            e.a_nk(3, 2),
            Err(DistError::KOutOfRange { k: 2, max: 1 })
        );
    }

    #[test]
    fn gamma_q_examples() {
        let e = Engine::default();
        assert_eq!(
            e.gamma_nk_q(3).unwrap().entries,
            vec![MultiPoly::one(), poly(&[(1, 0, 1, 0), (1, 0, 2, 0)])]
        );
        assert_eq!(e.gamma_nk_q(2).unwrap().entries, vec![MultiPoly::one()]);
        assert_eq!(e.gamma_nk_q(1).unwrap().entries, vec![MultiPoly::one()]);
        assert_eq!(
            e.gamma_plain(3).unwrap().entries,
            vec![MultiPoly::one(), MultiPoly::constant(2)]
        );
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let dists = [
            Dist::Single(Stat::Inv),
            Dist::RES_LES_DES,
            Dist::InvExcShifted,
            Dist::ValleyClass(1),
            Dist::ValleyClass(2),
        ];
        let one = tally(7, &dists, 1);
        for jobs in [2, 3, 8, 64] {
            assert_eq!(tally(7, &dists, jobs), one);
        }
    }

    #[test]
    fn cached_and_fresh_agree() {
        let e = Engine::new(4);
        e.prefetch(6, &[Dist::InvExc, Dist::RESS_LES_DES]).unwrap();
        assert_eq!(e.dist_s(6).unwrap(), tally(6, &[Dist::InvExc], 1).remove(0).unwrap());
    }
}

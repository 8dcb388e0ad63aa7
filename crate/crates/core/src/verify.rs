//! Exhaustive checks of the identities around the q-Eulerian gamma
//! expansion. Every check walks `n = 1, 2, …, n_max` in order and stops at
//! the first failure, so a failing report carries the smallest witness.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dist::{max_valleys, Dist, DistError, Engine};
use crate::gamma::{gamma_expand, GammaVector};
use crate::perm::{enumerate, PermError, Permutation, MAX_N};
use crate::poly::{Monomial, MultiPoly, PolyError};
use crate::stats::{crossing_nesting, linear_stats, Stat};

pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_RANDOM_TRIALS: usize = 10_000;
pub const DEFAULT_RANDOM_N: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CheckId {
    #[serde(rename = "eq1")]
    Eq1,
    #[serde(rename = "lemma2")]
    Lemma2,
    #[serde(rename = "lemma3-4")]
    Lemma3_4,
    #[serde(rename = "inv-identity")]
    InvIdentity,
    #[serde(rename = "theorem5")]
    Theorem5,
}

impl CheckId {
    pub const ALL: [CheckId; 5] = [
        CheckId::Eq1,
        CheckId::Lemma2,
        CheckId::Lemma3_4,
        CheckId::InvIdentity,
        CheckId::Theorem5,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckId::Eq1 => "eq1",
            CheckId::Lemma2 => "lemma2",
            CheckId::Lemma3_4 => "lemma3-4",
            CheckId::InvIdentity => "inv-identity",
            CheckId::Theorem5 => "theorem5",
        }
    }

    /// Distributions the check reads for a given `n`.
    pub fn dists(self, n: usize) -> Vec<Dist> {
        let classes = (0..=max_valleys(n)).map(Dist::ValleyClass);
        match self {
            CheckId::Eq1 => vec![
                Dist::Single(Stat::Des),
                Dist::Single(Stat::Exc),
                Dist::Single(Stat::Drop),
            ],
            CheckId::Lemma2 => std::iter::once(Dist::RES_LES_DES).chain(classes).collect(),
            CheckId::Lemma3_4 => vec![Dist::NEST_CROS_DROP, Dist::RESS_LES_DES, Dist::RES_LES_DES],
            CheckId::InvIdentity => vec![],
            CheckId::Theorem5 => std::iter::once(Dist::InvExcShifted).chain(classes).collect(),
        }
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for CheckId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CheckId::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown check {s:?}"))
    }
}

/// What went wrong, at the smallest failing `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Counterexample {
    /// A single permutation violating a pointwise identity.
    Permutation {
        n: usize,
        permutation: Permutation,
        detail: String,
    },
    /// Two polynomials that should agree; `difference = left - right`.
    PolynomialDiff {
        n: usize,
        left: String,
        right: String,
        difference: MultiPoly,
    },
    NotDivisible {
        n: usize,
        k: usize,
        dividend: MultiPoly,
        divisor: MultiPoly,
        remainder: MultiPoly,
    },
    NotExpandable { n: usize, remainder: MultiPoly },
    NegativeCoefficient { n: usize, k: usize, entry: MultiPoly },
    /// The engine itself refused (size guard, overflow, …).
    Engine { n: usize, message: String },
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Counterexample::Permutation { n, permutation, detail } => {
                write!(f, "n={n} sigma={permutation} {detail}")
            }
            Counterexample::PolynomialDiff { n, left, right, difference } => {
                write!(f, "n={n} {left} - {right} = {difference}")
            }
            Counterexample::NotDivisible { n, k, divisor, remainder, .. } => {
                write!(f, "n={n} k={k} not divisible by {divisor}, remainder {remainder}")
            }
            Counterexample::NotExpandable { n, remainder } => {
                write!(f, "n={n} not gamma-expandable, remainder {remainder}")
            }
            Counterexample::NegativeCoefficient { n, k, entry } => {
                write!(f, "n={n} k={k} negative coefficient in {entry}")
            }
            Counterexample::Engine { n, message } => write!(f, "n={n} {message}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub check_id: CheckId,
    pub n_range: (usize, usize),
    pub passed: bool,
    pub counterexample: Option<Counterexample>,
    pub seed: Option<u64>,
    pub elapsed: Duration,
}

/// Serialized form of a [`CheckReport`]. `elapsed_ms` is only filled in when
/// timings are requested, so the default record stream is reproducible.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub check_id: CheckId,
    pub n_range: [usize; 2],
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl CheckReport {
    fn finish(
        check_id: CheckId,
        n_max: usize,
        started: Instant,
        outcome: Result<(), Counterexample>,
    ) -> Self {
        let counterexample = outcome.err();
        Self {
            check_id,
            n_range: (1, n_max),
            passed: counterexample.is_none(),
            counterexample,
            seed: None,
            elapsed: started.elapsed(),
        }
    }

    pub fn record(&self, timings: bool) -> ReportRecord {
        ReportRecord {
            check_id: self.check_id,
            n_range: [self.n_range.0, self.n_range.1],
            passed: self.passed,
            counterexample: self.counterexample.clone(),
            seed: self.seed,
            elapsed_ms: timings.then_some(self.elapsed.as_millis() as u64),
        }
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (lo, hi) = self.n_range;
        match &self.counterexample {
            None => write!(f, "{:<12} n={lo}..{hi} passed", self.check_id),
            Some(c) => write!(f, "{:<12} n={lo}..{hi} FAILED: {c}", self.check_id),
        }
    }
}

fn engine_err(n: usize) -> impl Fn(DistError) -> Counterexample {
    move |e| Counterexample::Engine {
        n,
        message: e.to_string(),
    }
}

fn poly_err(n: usize) -> impl Fn(PolyError) -> Counterexample {
    move |e| Counterexample::Engine {
        n,
        message: e.to_string(),
    }
}

fn expect_equal(
    n: usize,
    (left_name, left): (&str, &MultiPoly),
    (right_name, right): (&str, &MultiPoly),
) -> Result<(), Counterexample> {
    if left == right {
        return Ok(());
    }
    Err(Counterexample::PolynomialDiff {
        n,
        left: left_name.to_string(),
        right: right_name.to_string(),
        difference: left.sub(right).map_err(poly_err(n))?,
    })
}

fn expect_divisible(
    n: usize,
    k: usize,
    dividend: &MultiPoly,
    divisor: &MultiPoly,
) -> Result<MultiPoly, Counterexample> {
    match dividend.try_exact_divide(divisor) {
        Ok(quot) => Ok(quot),
        Err(PolyError::NotDivisible { remainder }) => Err(Counterexample::NotDivisible {
            n,
            k,
            dividend: dividend.clone(),
            divisor: divisor.clone(),
            remainder,
        }),
        Err(e) => Err(poly_err(n)(e)),
    }
}

fn run_check(
    engine: &Engine,
    id: CheckId,
    n_max: usize,
    body: impl Fn(&Engine, usize) -> Result<(), Counterexample>,
) -> CheckReport {
    let started = Instant::now();
    if n_max > MAX_N {
        let err = DistError::from(PermError::SizeOutOfRange { n: n_max, max: MAX_N });
        return CheckReport::finish(id, n_max, started, Err(engine_err(n_max)(err)));
    }
    let outcome = (1..=n_max).try_for_each(|n| {
        engine.prefetch(n, &id.dists(n)).map_err(engine_err(n))?;
        body(engine, n)
    });
    CheckReport::finish(id, n_max, started, outcome)
}

/// des, exc and drop share one distribution.
pub fn check_eq1(engine: &Engine, n_max: usize) -> CheckReport {
    run_check(engine, CheckId::Eq1, n_max, |e, n| {
        let des = e.dist_single(n, Stat::Des).map_err(engine_err(n))?;
        let exc = e.dist_single(n, Stat::Exc).map_err(engine_err(n))?;
        let drop = e.dist_single(n, Stat::Drop).map_err(engine_err(n))?;
        expect_equal(n, ("des", &des), ("exc", &exc))?;
        expect_equal(n, ("des", &des), ("drop", &drop))
    })
}

/// `A_n(p,q,t) = Σ_k a_{n,k}(p,q) t^k (1+t)^{n-1-2k}` and `(p+q)^k | a_{n,k}`.
pub fn check_lemma2(engine: &Engine, n_max: usize) -> CheckReport {
    run_check(engine, CheckId::Lemma2, n_max, |e, n| {
        let triple = e.get(n, Dist::RES_LES_DES).map_err(engine_err(n))?;
        let classes = e.a_n(n).map_err(engine_err(n))?;
        let gamma = GammaVector {
            n,
            entries: classes.clone(),
        };
        let rebuilt = gamma.reconstruct().map_err(poly_err(n))?;
        expect_equal(n, ("sum_k a_nk basis_k", &rebuilt), ("A_n(p,q,t)", &triple))?;
        let p_plus_q = MultiPoly::p().add(&MultiPoly::q()).map_err(poly_err(n))?;
        for (k, a) in classes.iter().enumerate() {
            let divisor = p_plus_q.pow(k as u32).map_err(poly_err(n))?;
            expect_divisible(n, k, a, &divisor)?;
        }
        Ok(())
    })
}

/// `(nest, cros, drop)`, `(ress, les, des)` and `(res, les, des)` are
/// equidistributed, compared as generating polynomials.
pub fn check_lemma3_4(engine: &Engine, n_max: usize) -> CheckReport {
    run_check(engine, CheckId::Lemma3_4, n_max, |e, n| {
        let ncd = e.get(n, Dist::NEST_CROS_DROP).map_err(engine_err(n))?;
        let rld_tilde = e.get(n, Dist::RESS_LES_DES).map_err(engine_err(n))?;
        let rld = e.get(n, Dist::RES_LES_DES).map_err(engine_err(n))?;
        expect_equal(n, ("(nest,cros,drop)", &ncd), ("(ress,les,des)", &rld_tilde))?;
        expect_equal(n, ("(ress,les,des)", &rld_tilde), ("(res,les,des)", &rld))
    })
}

fn inv_identity_holds(s: &Permutation) -> Result<(), Counterexample> {
    let l = linear_stats(s);
    let c = crossing_nesting(s);
    if l.inv == l.drop + c.cros + 2 * c.nest {
        return Ok(());
    }
    Err(Counterexample::Permutation {
        n: s.n(),
        permutation: s.clone(),
        detail: format!(
            "inv={} drop={} cros={} nest={}",
            l.inv, l.drop, c.cros, c.nest
        ),
    })
}

/// `inv = drop + cros + 2 nest` on all of `S_n`, `n <= n_max`, then on
/// `random_trials` seeded uniform permutations of size `random_n`.
pub fn check_inv_identity(
    engine: &Engine,
    n_max: usize,
    random_trials: usize,
    random_n: usize,
    seed: u64,
) -> CheckReport {
    let started = Instant::now();
    let exhaustive = run_check(engine, CheckId::InvIdentity, n_max, |_, n| {
        let mut perms = enumerate(n).map_err(|e| engine_err(n)(e.into()))?;
        while let Some(s) = perms.advance() {
            inv_identity_holds(s)?;
        }
        Ok(())
    });
    let outcome = match exhaustive.counterexample {
        Some(c) => Err(c),
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..random_trials).try_for_each(|_| {
                let s = Permutation::random(random_n, &mut rng)
                    .map_err(|e| engine_err(random_n)(e.into()))?;
                inv_identity_holds(&s)
            })
        }
    };
    let mut report = CheckReport::finish(CheckId::InvIdentity, n_max, started, outcome);
    report.seed = Some(seed);
    report
}

/// `S_n(q, t/q)` expands in the gamma basis with entries `a_{n,k}(q², q)`,
/// nonnegative coefficients, and `q^k (1+q)^k | γ_{n,k}(q)`.
pub fn check_theorem5(engine: &Engine, n_max: usize) -> CheckReport {
    run_check(engine, CheckId::Theorem5, n_max, |e, n| {
        let shifted = match e.dist_s_shifted(n) {
            Err(DistError::NegativeExponent { witness }) => {
                return Err(Counterexample::Permutation {
                    n,
                    permutation: witness,
                    detail: "inv < exc".into(),
                })
            }
            other => other.map_err(engine_err(n))?,
        };
        let expanded = match gamma_expand(&shifted, n) {
            Err(PolyError::NotExpandable { remainder }) => {
                return Err(Counterexample::NotExpandable { n, remainder })
            }
            other => other.map_err(poly_err(n))?,
        };
        let predicted = e.gamma_nk_q(n).map_err(engine_err(n))?;
        let q_one_plus_q = MultiPoly::from_terms([(Monomial::new(0, 1, 0), 1), (Monomial::new(0, 2, 0), 1)])
            .map_err(poly_err(n))?;
        for (k, (got, want)) in expanded.entries.iter().zip(&predicted.entries).enumerate() {
            expect_equal(
                n,
                (&format!("gamma_{n},{k}(q)"), got),
                (&format!("a_{n},{k}(q^2,q)"), want),
            )?;
            if !got.has_nonnegative_coeffs() {
                return Err(Counterexample::NegativeCoefficient {
                    n,
                    k,
                    entry: got.clone(),
                });
            }
            let divisor = q_one_plus_q.pow(k as u32).map_err(poly_err(n))?;
            expect_divisible(n, k, got, &divisor)?;
        }
        Ok(())
    })
}

/// Check selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Selection {
    All,
    One(CheckId),
}

impl Selection {
    pub fn ids(self) -> Vec<CheckId> {
        match self {
            Selection::All => CheckId::ALL.to_vec(),
            Selection::One(id) => vec![id],
        }
    }
}

impl FromStr for Selection {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "all" {
            Ok(Selection::All)
        } else {
            s.parse().map(Selection::One)
        }
    }
}

pub fn run_check_by_id(engine: &Engine, id: CheckId, n_max: usize, seed: u64) -> CheckReport {
    match id {
        CheckId::Eq1 => check_eq1(engine, n_max),
        CheckId::Lemma2 => check_lemma2(engine, n_max),
        CheckId::Lemma3_4 => check_lemma3_4(engine, n_max),
        CheckId::InvIdentity => check_inv_identity(
            engine,
            n_max,
            DEFAULT_RANDOM_TRIALS,
            DEFAULT_RANDOM_N,
            seed,
        ),
        CheckId::Theorem5 => check_theorem5(engine, n_max),
    }
}

/// Runs the selected checks. With more than one check selected, the
/// distributions of all of them are gathered in one enumeration pass per `n`
/// up front, and the per-check timings then exclude that shared pass.
pub fn run_selected(engine: &Engine, which: Selection, n_max: usize, seed: u64) -> Vec<CheckReport> {
    let ids = which.ids();
    let shared = if ids.len() > 1 { n_max.min(MAX_N) } else { 0 };
    for n in 1..=shared {
        let dists: Vec<Dist> = ids.iter().flat_map(|id| id.dists(n)).collect();
        // failures resurface, with a witness, inside the individual checks
        if engine.prefetch(n, &dists).is_err() {
            break;
        }
    }
    ids.into_iter()
        .map(|id| run_check_by_id(engine, id, n_max, seed))
        .collect()
}

pub fn run_all(engine: &Engine, n_max: usize, seed: u64) -> Vec<CheckReport> {
    run_selected(engine, Selection::All, n_max, seed)
}

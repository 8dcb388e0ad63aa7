//! Sparse polynomials with exact `i64` coefficients in the commuting
//! variables `p`, `q`, `t`.
//!
//! Terms are kept in a `BTreeMap` keyed by [`Monomial`], whose ordering is the
//! canonical print order: ascending `t` exponent, then ascending total `(p, q)`
//! degree, then ascending `q` exponent. Zero coefficients are never stored, so
//! structural equality is polynomial equality. Every coefficient operation is
//! checked; overflow surfaces as [`PolyError::Overflow`].

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Monomial {
    pub p: u32,
    pub q: u32,
    pub t: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { p: 0, q: 0, t: 0 };

    pub const fn new(p: u32, q: u32, t: u32) -> Self {
        Self { p, q, t }
    }

    fn checked_mul(self, other: Self) -> Option<Self> {
        Some(Self {
            p: self.p.checked_add(other.p)?,
            q: self.q.checked_add(other.q)?,
            t: self.t.checked_add(other.t)?,
        })
    }

    fn divides(self, other: Self) -> bool {
        self.p <= other.p && self.q <= other.q && self.t <= other.t
    }

    /// Lexicographic comparison with `t > p > q`, the elimination order used
    /// by exact division.
    fn cmp_lex(&self, other: &Self) -> Ordering {
        (self.t, self.p, self.q).cmp(&(other.t, other.p, other.q))
    }

    fn write_vars(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (name, e) in [("p", self.p), ("q", self.q), ("t", self.t)] {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if e == 1 {
                f.write_str(name)?;
            } else {
                write!(f, "{name}^{e}")?;
            }
        }
        Ok(())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let key = |m: &Monomial| (m.t, m.p as u64 + m.q as u64, m.q);
        key(self).cmp(&key(other))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if *self == Monomial::ONE {
            return f.write_str("1");
        }
        self.write_vars(f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("integer overflow at term {0}")]
    Overflow(Monomial),
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("not divisible, remainder {remainder}")]
    NotDivisible { remainder: MultiPoly },
    #[error("no expansion in the (1+t) basis, remainder {remainder}")]
    NotExpandable { remainder: MultiPoly },
    #[error("t-degree {degree} exceeds {max}")]
    DegreeTooHigh { degree: u32, max: u32 },
    #[error("expansion size must be at least 1")]
    EmptySize,
}

/// One `(e_p, e_q, e_t, coeff)` record of the structured rendering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRecord {
    pub e_p: u32,
    pub e_q: u32,
    pub e_t: u32,
    pub coeff: i64,
}

#[derive(Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "Vec<TermRecord>", into = "Vec<TermRecord>")]
pub struct MultiPoly {
    terms: BTreeMap<Monomial, i64>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: i64) -> Self {
        Self::term(c, Monomial::ONE)
    }

    pub fn term(c: i64, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert(m, c);
        }
        Self { terms }
    }

    pub fn p() -> Self {
        Self::term(1, Monomial::new(1, 0, 0))
    }

    pub fn q() -> Self {
        Self::term(1, Monomial::new(0, 1, 0))
    }

    pub fn t() -> Self {
        Self::term(1, Monomial::new(0, 0, 1))
    }

    /// Builds a polynomial from possibly repeated terms, merging like terms.
    pub fn from_terms<I>(terms: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (Monomial, i64)>,
    {
        let mut out = Self::zero();
        for (m, c) in terms {
            out.add_term(m, c)?;
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (Monomial, i64)> + '_ {
        self.terms.iter().map(|(&m, &c)| (m, c))
    }

    pub fn coeff(&self, m: Monomial) -> i64 {
        self.terms.get(&m).copied().unwrap_or(0)
    }

    pub fn records(&self) -> Vec<TermRecord> {
        self.terms()
            .map(|(m, c)| TermRecord {
                e_p: m.p,
                e_q: m.q,
                e_t: m.t,
                coeff: c,
            })
            .collect()
    }

    pub fn t_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.t).max()
    }

    pub fn is_free_of_t(&self) -> bool {
        self.terms.keys().all(|m| m.t == 0)
    }

    pub fn has_nonnegative_coeffs(&self) -> bool {
        self.terms.values().all(|&c| c >= 0)
    }

    /// The coefficient of `t^k`, as a polynomial in `p` and `q`.
    pub fn coeff_of_t(&self, k: u32) -> MultiPoly {
        let terms = self
            .terms
            .range(Monomial::new(0, 0, k)..)
            .take_while(|(m, _)| m.t == k)
            .map(|(&m, &c)| (Monomial { t: 0, ..m }, c))
            .collect();
        Self { terms }
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: i64) -> Result<(), PolyError> {
        if c == 0 {
            return Ok(());
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().checked_add(c).ok_or(PolyError::Overflow(m))?;
                if sum == 0 {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
        Ok(())
    }

    pub fn add(&self, other: &MultiPoly) -> Result<MultiPoly, PolyError> {
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m, c)?;
        }
        Ok(out)
    }

    pub fn neg(&self) -> Result<MultiPoly, PolyError> {
        self.scale(-1)
    }

    pub fn sub(&self, other: &MultiPoly) -> Result<MultiPoly, PolyError> {
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m, c.checked_neg().ok_or(PolyError::Overflow(m))?)?;
        }
        Ok(out)
    }

    pub fn scale(&self, k: i64) -> Result<MultiPoly, PolyError> {
        let mut out = Self::zero();
        for (m, c) in self.terms() {
            out.add_term(m, c.checked_mul(k).ok_or(PolyError::Overflow(m))?)?;
        }
        Ok(out)
    }

    /// Multiplies every term by `c · m`.
    pub fn mul_term(&self, c: i64, m: Monomial) -> Result<MultiPoly, PolyError> {
        let mut out = Self::zero();
        for (m2, c2) in self.terms() {
            let mm = m.checked_mul(m2).ok_or(PolyError::Overflow(m2))?;
            out.add_term(mm, c.checked_mul(c2).ok_or(PolyError::Overflow(mm))?)?;
        }
        Ok(out)
    }

    pub fn mul(&self, other: &MultiPoly) -> Result<MultiPoly, PolyError> {
        let mut out = Self::zero();
        for (m1, c1) in self.terms() {
            for (m2, c2) in other.terms() {
                let m = m1.checked_mul(m2).ok_or(PolyError::Overflow(m1))?;
                out.add_term(m, c1.checked_mul(c2).ok_or(PolyError::Overflow(m))?)?;
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Result<MultiPoly, PolyError> {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Rewrites every `p^a q^b t^c` as `q^(b + 2a) t^c`.
    pub fn substitute_p_with_q_squared(&self) -> Result<MultiPoly, PolyError> {
        let mut out = Self::zero();
        for (m, c) in self.terms() {
            let q = m
                .p
                .checked_mul(2)
                .and_then(|x| x.checked_add(m.q))
                .ok_or(PolyError::Overflow(m))?;
            out.add_term(Monomial::new(0, q, m.t), c)?;
        }
        Ok(out)
    }

    /// Sets `p = q = 1`, keeping `t`.
    pub fn specialize_pq_to_one(&self) -> Result<MultiPoly, PolyError> {
        let mut out = Self::zero();
        for (m, c) in self.terms() {
            out.add_term(Monomial::new(0, 0, m.t), c)?;
        }
        Ok(out)
    }

    /// Value at `p = q = t = 1`.
    pub fn eval_at_ones(&self) -> Result<i64, PolyError> {
        self.terms().try_fold(0i64, |acc, (m, c)| {
            acc.checked_add(c).ok_or(PolyError::Overflow(m))
        })
    }

    fn lex_leading(&self) -> Option<(Monomial, i64)> {
        self.terms().max_by(|a, b| a.0.cmp_lex(&b.0))
    }

    /// Exact division `self / d`.
    ///
    /// Runs multivariate long division in the lex order `t > p > q` (which
    /// reduces in `t` first, then `p`, then `q`), collecting every leading
    /// term that the leading term of `d` does not divide into the remainder.
    /// The quotient is accepted only if the remainder is zero *and*
    /// `quotient · d == self` holds on re-multiplication.
    pub fn try_exact_divide(&self, d: &MultiPoly) -> Result<MultiPoly, PolyError> {
        let (lead_m, lead_c) = d.lex_leading().ok_or(PolyError::DivisionByZero)?;
        let mut rest = self.clone();
        let mut quotient = Self::zero();
        let mut remainder = Self::zero();
        while let Some((m, c)) = rest.lex_leading() {
            if lead_m.divides(m) && c % lead_c == 0 {
                let qm = Monomial::new(m.p - lead_m.p, m.q - lead_m.q, m.t - lead_m.t);
                let qc = c / lead_c;
                quotient.add_term(qm, qc)?;
                rest = rest.sub(&d.mul_term(qc, qm)?)?;
            } else {
                remainder.add_term(m, c)?;
                rest.terms.remove(&m);
            }
        }
        if !remainder.is_zero() {
            return Err(PolyError::NotDivisible { remainder });
        }
        let check = quotient.mul(d)?;
        if check != *self {
            return Err(PolyError::NotDivisible {
                remainder: self.sub(&check)?,
            });
        }
        Ok(quotient)
    }

    fn write_flat(&self, f: &mut fmt::Formatter<'_>, mut first: bool) -> fmt::Result {
        for (m, c) in self.terms() {
            write_signed_term(f, c, m, first)?;
            first = false;
        }
        Ok(())
    }
}

fn write_signed_term(f: &mut fmt::Formatter<'_>, c: i64, m: Monomial, first: bool) -> fmt::Result {
    let mag = c.unsigned_abs();
    match (first, c < 0) {
        (true, true) => f.write_str("-")?,
        (true, false) => {}
        (false, true) => f.write_str(" - ")?,
        (false, false) => f.write_str(" + ")?,
    }
    if m == Monomial::ONE {
        write!(f, "{mag}")
    } else if mag == 1 {
        m.write_vars(f)
    } else {
        write!(f, "{mag}*")?;
        m.write_vars(f)
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly({self})")
    }
}

/// Canonical text, grouped by powers of `t`: `1 + (2 + p + q)*t + t^2`.
/// A `t^k` coefficient with more than one term is parenthesized; the
/// constant-in-`t` group is written out flat.
impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        let mut degrees: Vec<u32> = self.terms.keys().map(|m| m.t).collect();
        degrees.dedup();
        for k in degrees {
            let group = self.coeff_of_t(k);
            if k == 0 || group.len() == 1 {
                let shifted = group.mul_term(1, Monomial::new(0, 0, k)).map_err(|_| fmt::Error)?;
                shifted.write_flat(f, first)?;
            } else {
                if !first {
                    f.write_str(" + ")?;
                }
                f.write_str("(")?;
                group.write_flat(f, true)?;
                f.write_str(")*")?;
                Monomial::new(0, 0, k).write_vars(f)?;
            }
            first = false;
        }
        Ok(())
    }
}

impl From<Vec<TermRecord>> for MultiPoly {
    fn from(records: Vec<TermRecord>) -> Self {
        let mut terms = BTreeMap::new();
        for r in records {
            if r.coeff != 0 {
                terms.insert(Monomial::new(r.e_p, r.e_q, r.e_t), r.coeff);
            }
        }
        Self { terms }
    }
}

impl From<MultiPoly> for Vec<TermRecord> {
    fn from(p: MultiPoly) -> Self {
        p.records()
    }
}

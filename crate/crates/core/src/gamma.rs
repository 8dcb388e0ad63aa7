//! Expansion in the basis `t^k (1+t)^(n-1-2k)`, `0 <= k <= floor((n-1)/2)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::poly::{Monomial, MultiPoly, PolyError};

/// Coefficients `γ_0 … γ_m`, `m = floor((n-1)/2)`, each free of `t`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaVector {
    pub n: usize,
    pub entries: Vec<MultiPoly>,
}

/// `t^k (1+t)^(n-1-2k)`, built from binomial coefficients.
pub fn basis_element(n: usize, k: usize) -> Result<MultiPoly, PolyError> {
    let e = (n - 1 - 2 * k) as u32;
    let mut binom: i64 = 1;
    let mut out = MultiPoly::zero();
    for j in 0..=e {
        let m = Monomial::new(0, 0, k as u32 + j);
        out.add_term(m, binom)?;
        // C(e, j+1) = C(e, j) * (e - j) / (j + 1)
        binom = binom
            .checked_mul((e - j) as i64)
            .ok_or(PolyError::Overflow(m))?
            / (j as i64 + 1);
    }
    Ok(out)
}

fn max_index(n: usize) -> usize {
    (n - 1) / 2
}

impl GammaVector {
    /// `Σ_k entries[k] · t^k (1+t)^(n-1-2k)`.
    pub fn reconstruct(&self) -> Result<MultiPoly, PolyError> {
        let mut acc = MultiPoly::zero();
        for (k, g) in self.entries.iter().enumerate() {
            acc = acc.add(&g.mul(&basis_element(self.n, k)?)?)?;
        }
        Ok(acc)
    }

    /// Sets `p = q = 1` in every entry.
    pub fn specialize_pq_to_one(&self) -> Result<GammaVector, PolyError> {
        Ok(GammaVector {
            n: self.n,
            entries: self
                .entries
                .iter()
                .map(MultiPoly::specialize_pq_to_one)
                .collect::<Result<_, _>>()?,
        })
    }
}

/// One line per entry: `k: <polynomial>`.
impl fmt::Display for GammaVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, g) in self.entries.iter().enumerate() {
            if k > 0 {
                writeln!(f)?;
            }
            write!(f, "{k}: {g}")?;
        }
        Ok(())
    }
}

/// Peels off the basis elements from the bottom: at step `k` the
/// coefficient of `t^k` in the running remainder becomes `γ_k`, and
/// `γ_k · t^k (1+t)^(n-1-2k)` is subtracted. Succeeds iff nothing is left.
pub fn gamma_expand(h: &MultiPoly, n: usize) -> Result<GammaVector, PolyError> {
    if n == 0 {
        return Err(PolyError::EmptySize);
    }
    let max = (n - 1) as u32;
    if let Some(degree) = h.t_degree() {
        if degree > max {
            return Err(PolyError::DegreeTooHigh { degree, max });
        }
    }
    let mut rest = h.clone();
    let mut entries = Vec::with_capacity(max_index(n) + 1);
    for k in 0..=max_index(n) {
        let g = rest.coeff_of_t(k as u32);
        rest = rest.sub(&g.mul(&basis_element(n, k)?)?)?;
        entries.push(g);
    }
    if !rest.is_zero() {
        return Err(PolyError::NotExpandable { remainder: rest });
    }
    Ok(GammaVector { n, entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn eulerian3() -> MultiPoly {
        MultiPoly::from_terms([
            (Monomial::new(0, 0, 0), 1),
            (Monomial::new(0, 0, 1), 4),
            (Monomial::new(0, 0, 2), 1),
        ])
        .unwrap()
    }

    #[test]
    fn basis_elements() {
        assert_eq!(basis_element(1, 0).unwrap(), MultiPoly::one());
        assert_eq!(basis_element(3, 1).unwrap(), MultiPoly::t());
        let one_t = MultiPoly::one().add(&MultiPoly::t()).unwrap();
        assert_eq!(basis_element(6, 1).unwrap(), MultiPoly::t().mul(&one_t.pow(3).unwrap()).unwrap());
    }

    #[test]
    fn expands_eulerian_three() {
        let g = gamma_expand(&eulerian3(), 3).unwrap();
        assert_eq!(g.entries, vec![MultiPoly::one(), MultiPoly::constant(2)]);
        assert_eq!(g.to_string(), "0: 1\n1: 2");
    }

    #[test]
    fn expands_one_plus_t() {
        let h = MultiPoly::one().add(&MultiPoly::t()).unwrap();
        let g = gamma_expand(&h, 2).unwrap();
        assert_eq!(g.entries, vec![MultiPoly::one()]);
    }

    #[test]
    fn expands_with_p_and_q() {
        let pq = MultiPoly::p().add(&MultiPoly::q()).unwrap();
        let h = MultiPoly::from_terms([
            (Monomial::new(0, 0, 0), 1),
            (Monomial::new(0, 0, 1), 2),
            (Monomial::new(1, 0, 1), 1),
            (Monomial::new(0, 1, 1), 1),
            (Monomial::new(0, 0, 2), 1),
        ])
        .unwrap();
        let g = gamma_expand(&h, 3).unwrap();
        assert_eq!(g.entries, vec![MultiPoly::one(), pq]);
    }

    #[test]
    fn rejects_non_palindromic() {
        let h = MultiPoly::from_terms([(Monomial::ONE, 1), (Monomial::new(0, 0, 1), 2)]).unwrap();
        assert!(matches!(gamma_expand(&h, 3), Err(PolyError::NotExpandable { .. })));
    }

    #[test]
    fn rejects_high_degree() {
        let h = MultiPoly::t().pow(3).unwrap();
        assert_eq!(
            gamma_expand(&h, 3),
            Err(PolyError::DegreeTooHigh { degree: 3, max: 2 })
        );
        assert_eq!(gamma_expand(&h, 0), Err(PolyError::EmptySize));
    }

    #[test]
    fn expands_zero_and_size_one() {
        let g = gamma_expand(&MultiPoly::zero(), 4).unwrap();
        assert_eq!(g.entries.len(), 2);
        assert!(g.entries.iter().all(MultiPoly::is_zero));
        assert_eq!(gamma_expand(&MultiPoly::one(), 1).unwrap().entries, vec![MultiPoly::one()]);
    }

    fn arb_pq() -> impl Strategy<Value = MultiPoly> {
        prop::collection::vec((-9i64..9, 0u32..3, 0u32..3), 0..4).prop_map(|ts| {
            MultiPoly::from_terms(ts.into_iter().map(|(c, p, q)| (Monomial::new(p, q, 0), c))).unwrap()
        })
    }

    proptest! {
        #[test]
        fn expand_round_trips(n in 1usize..10, gs in prop::collection::vec(arb_pq(), 5)) {
            let entries: Vec<_> = gs.into_iter().take((n - 1) / 2 + 1).collect();
            let g = GammaVector { n, entries };
            let h = g.reconstruct().unwrap();
            let back = gamma_expand(&h, n).unwrap();
            prop_assert_eq!(back.reconstruct().unwrap(), h);
            prop_assert_eq!(back, g);
        }
    }
}

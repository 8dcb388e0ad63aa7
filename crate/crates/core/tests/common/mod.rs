//! Brute-force oracle shared by the integration tests. It shares no code
//! with the library: permutations come from Heap's algorithm, statistics are
//! the literal set-builder definitions over a zero-padded 1-based word, and
//! polynomials are plain exponent-to-count maps.

#![allow(dead_code)]

use std::collections::BTreeMap;

use perm_gamma::MultiPoly;

pub type Counts = BTreeMap<(u32, u32, u32), i64>;

/// All permutations of 1..=n via Heap's algorithm (order irrelevant).
pub fn heap_permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(k: usize, a: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(a.clone());
            return;
        }
        for i in 0..k - 1 {
            go(k - 1, a, out);
            if k.is_multiple_of(2) {
                a.swap(i, k - 1);
            } else {
                a.swap(0, k - 1);
            }
        }
        go(k - 1, a, out);
    }
    let mut a: Vec<usize> = (1..=n).collect();
    let mut out = Vec::new();
    go(n, &mut a, &mut out);
    out
}

/// 1-based with s[0] = s[n+1] = 0.
fn padded(w: &[usize]) -> Vec<usize> {
    let mut s = vec![0];
    s.extend_from_slice(w);
    s.push(0);
    s
}

fn count<F: Fn(usize, usize) -> bool>(lo: usize, hi: usize, strict: bool, f: F) -> u32 {
    let mut c = 0;
    for i in lo..=hi {
        for j in lo..=hi {
            if (!strict || i < j) && f(i, j) {
                c += 1;
            }
        }
    }
    c
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct OracleStats {
    pub des: u32,
    pub exc: u32,
    pub drop: u32,
    pub inv: u32,
    pub les: u32,
    pub less: u32,
    pub res: u32,
    pub ress: u32,
    pub cros: u32,
    pub nest: u32,
    pub valleys: u32,
    pub dd: u32,
}

pub fn oracle_stats(w: &[usize]) -> OracleStats {
    let n = w.len();
    let s = padded(w);
    let single = |f: &dyn Fn(usize) -> bool| (1..=n).filter(|&i| f(i)).count() as u32;
    OracleStats {
        des: single(&|i| i < n && s[i] > s[i + 1]),
        exc: single(&|i| i < s[i]),
        drop: single(&|i| i > s[i]),
        inv: count(1, n, true, |i, j| s[i] > s[j]),
        les: count(2.min(n), n, true, |i, j| i >= 2 && s[i - 1] > s[j] && s[j] > s[i]),
        less: count(2.min(n), n, true, |i, j| i >= 2 && s[i - 1] < s[j] && s[j] < s[i]),
        res: count(1, n.saturating_sub(1), true, |i, j| s[j + 1] > s[i] && s[i] > s[j]),
        ress: count(1, n.saturating_sub(1), true, |i, j| s[j + 1] < s[i] && s[i] < s[j]),
        cros: count(1, n, false, |i, j| {
            (i < j && j <= s[i] && s[i] < s[j]) || (i > j && j > s[i] && s[i] > s[j])
        }),
        nest: count(1, n, false, |i, j| {
            (i < j && j <= s[j] && s[j] < s[i]) || (i > j && j > s[j] && s[j] > s[i])
        }),
        valleys: single(&|i| s[i - 1] > s[i] && s[i] < s[i + 1]),
        dd: single(&|i| s[i - 1] > s[i] && s[i] > s[i + 1]),
    }
}

pub fn counts_of(p: &MultiPoly) -> Counts {
    p.terms().map(|(m, c)| ((m.p, m.q, m.t), c)).collect()
}

/// Σ over S_n of x^{f(σ)}, skipping permutations where `f` returns `None`.
pub fn oracle_dist<F>(n: usize, f: F) -> Counts
where
    F: Fn(&OracleStats) -> Option<(u32, u32, u32)>,
{
    let mut out = Counts::new();
    for w in heap_permutations(n) {
        if let Some(key) = f(&oracle_stats(&w)) {
            *out.entry(key).or_insert(0) += 1;
        }
    }
    out
}

pub fn factorial(n: usize) -> i64 {
    (1..=n as i64).product()
}

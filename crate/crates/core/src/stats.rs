//! The permutation statistics: descents, excedances, drops, inversions, the
//! four adjacency-pattern counts `les`, `less`, `res`, `ress`, crossings and
//! nestings, and the valley / double-descent profile.
//!
//! Every pair statistic is a plain O(n²) scan of its defining condition.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::perm::Permutation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct LinearStats {
    pub des: u32,
    pub exc: u32,
    pub drop: u32,
    pub inv: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct PatternStats {
    pub les: u32,
    pub less: u32,
    pub res: u32,
    pub ress: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CrossNestStats {
    pub cros: u32,
    pub nest: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ValleyProfile {
    pub valleys: u32,
    pub double_descents: u32,
}

pub fn linear_stats(s: &Permutation) -> LinearStats {
    let w = s.word();
    let n = w.len();
    let mut out = LinearStats::default();
    for i in 0..n {
        let pos = i + 1;
        let v = w[i] as usize;
        if pos < v {
            out.exc += 1;
        } else if pos > v {
            out.drop += 1;
        }
        if i + 1 < n && w[i] > w[i + 1] {
            out.des += 1;
        }
        out.inv += w[i + 1..].iter().filter(|&&x| x < w[i]).count() as u32;
    }
    out
}

pub fn pattern_stats(s: &Permutation) -> PatternStats {
    let n = s.n();
    let mut out = PatternStats::default();
    // les / less: 2 <= i < j <= n, compare σ(j) against the adjacent pair σ(i-1), σ(i)
    for i in 2..=n {
        let (left, here) = (s.at(i - 1), s.at(i));
        for j in i + 1..=n {
            let v = s.at(j);
            if left > v && v > here {
                out.les += 1;
            } else if left < v && v < here {
                out.less += 1;
            }
        }
    }
    // res / ress: 1 <= i < j <= n-1, compare σ(i) against the adjacent pair σ(j), σ(j+1)
    for j in 2..n {
        let (here, right) = (s.at(j), s.at(j + 1));
        for i in 1..j {
            let v = s.at(i);
            if right > v && v > here {
                out.res += 1;
            } else if right < v && v < here {
                out.ress += 1;
            }
        }
    }
    out
}

/// Scans all ordered pairs `(i, j)` of positions against both clauses of
/// each definition.
pub fn crossing_nesting(s: &Permutation) -> CrossNestStats {
    let n = s.n();
    let mut out = CrossNestStats::default();
    for i in 1..=n {
        let si = s.at(i);
        for j in 1..=n {
            let sj = s.at(j);
            if (i < j && j <= si && si < sj) || (i > j && j > si && si > sj) {
                out.cros += 1;
            }
            if (i < j && j <= sj && sj < si) || (i > j && j > sj && sj > si) {
                out.nest += 1;
            }
        }
    }
    out
}

/// Valleys and double descents over positions `1..=n` of the zero-padded
/// word `0 σ(1) … σ(n) 0`.
pub fn valley_profile(s: &Permutation) -> ValleyProfile {
    let mut padded = Vec::with_capacity(s.n() + 2);
    padded.push(0u8);
    padded.extend_from_slice(s.word());
    padded.push(0);
    let mut out = ValleyProfile::default();
    for w in padded.windows(3) {
        let (prev, cur, next) = (w[0], w[1], w[2]);
        if prev > cur {
            if cur < next {
                out.valleys += 1;
            } else if cur > next {
                out.double_descents += 1;
            }
        }
    }
    out
}

/// Membership in `S_{n,k}`: exactly `k` valleys and no double descent.
pub fn in_s_nk(s: &Permutation, k: u32) -> bool {
    let vp = valley_profile(s);
    vp.double_descents == 0 && vp.valleys == k
}

/// Every statistic of one permutation, computed once.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct StatRecord {
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

impl StatRecord {
    pub fn of(s: &Permutation) -> Self {
        let l = linear_stats(s);
        let p = pattern_stats(s);
        let c = crossing_nesting(s);
        let v = valley_profile(s);
        Self {
            des: l.des,
            exc: l.exc,
            drop: l.drop,
            inv: l.inv,
            les: p.les,
            less: p.less,
            res: p.res,
            ress: p.ress,
            cros: c.cros,
            nest: c.nest,
            valleys: v.valleys,
            dd: v.double_descents,
        }
    }

    pub fn get(&self, stat: Stat) -> u32 {
        match stat {
            Stat::Des => self.des,
            Stat::Exc => self.exc,
            Stat::Drop => self.drop,
            Stat::Inv => self.inv,
            Stat::Les => self.les,
            Stat::Less => self.less,
            Stat::Res => self.res,
            Stat::Ress => self.ress,
            Stat::Cros => self.cros,
            Stat::Nest => self.nest,
        }
    }
}

/// `des=… exc=… … valleys=… dd=…` in fixed key order.
impl fmt::Display for StatRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "des={} exc={} drop={} inv={} les={} less={} res={} ress={} cros={} nest={} valleys={} dd={}",
            self.des,
            self.exc,
            self.drop,
            self.inv,
            self.les,
            self.less,
            self.res,
            self.ress,
            self.cros,
            self.nest,
            self.valleys,
            self.dd
        )
    }
}

/// Name of one of the ten statistics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stat {
    Des,
    Exc,
    Drop,
    Inv,
    Les,
    Less,
    Res,
    Ress,
    Cros,
    Nest,
}

impl Stat {
    pub const ALL: [Stat; 10] = [
        Stat::Des,
        Stat::Exc,
        Stat::Drop,
        Stat::Inv,
        Stat::Les,
        Stat::Less,
        Stat::Res,
        Stat::Ress,
        Stat::Cros,
        Stat::Nest,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Stat::Des => "des",
            Stat::Exc => "exc",
            Stat::Drop => "drop",
            Stat::Inv => "inv",
            Stat::Les => "les",
            Stat::Less => "less",
            Stat::Res => "res",
            Stat::Ress => "ress",
            Stat::Cros => "cros",
            Stat::Nest => "nest",
        }
    }
}

impl fmt::Display for Stat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown statistic {0:?}")]
pub struct UnknownStatistic(pub String);

impl FromStr for Stat {
    type Err = UnknownStatistic;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.trim().to_ascii_lowercase();
        Stat::ALL
            .into_iter()
            .find(|st| st.name() == key)
            .ok_or_else(|| UnknownStatistic(s.to_string()))
    }
}

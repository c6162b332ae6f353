//! Ambient structures, arithmetic progressions and the small amount of
//! number theory the rest of the crate leans on.
//!
//! Interval structures live on `[n] = {1, ..., n}`; cyclic structures live on
//! `Z_n = {0, ..., n-1}`. Progressions are always nontrivial (`d != 0`) and,
//! in the cyclic case, must consist of distinct residues.

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StructureKind {
    Interval,
    Cyclic,
}

impl StructureKind {
    pub fn name(self) -> &'static str {
        match self {
            StructureKind::Interval => "interval",
            StructureKind::Cyclic => "cyclic",
        }
    }
}

/// A support set inside `[n]` or `Z_n`.
///
/// The support is kept sorted, together with a membership bitmap over the
/// whole ambient range.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Structure {
    kind: StructureKind,
    n: usize,
    support: Vec<usize>,
    member: Vec<bool>,
}

impl Structure {
    /// The full interval `[n]`.
    pub fn interval(n: usize) -> Self {
        Self::build(StructureKind::Interval, n, (1..=n).collect())
    }

    /// The full cyclic group `Z_n`.
    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidStructure("Z_0 is not a cyclic group".into()));
        }
        Ok(Self::build(StructureKind::Cyclic, n, (0..n).collect()))
    }

    /// A subset `A` of the ambient structure. Duplicates are rejected.
    pub fn with_support(kind: StructureKind, n: usize, elements: &[usize]) -> Result<Self> {
        if kind == StructureKind::Cyclic && n == 0 {
            return Err(Error::InvalidStructure("Z_0 is not a cyclic group".into()));
        }
        let mut seen = BTreeSet::new();
        for &x in elements {
            let in_range = match kind {
                StructureKind::Interval => (1..=n).contains(&x),
                StructureKind::Cyclic => x < n,
            };
            if !in_range {
                return Err(Error::InvalidStructure(format!(
                    "element {x} outside the ambient {} of size {n}",
                    kind.name()
                )));
            }
            if !seen.insert(x) {
                return Err(Error::InvalidStructure(format!("duplicate element {x}")));
            }
        }
        Ok(Self::build(kind, n, seen.into_iter().collect()))
    }

    /// The ambient structure with `removed` deleted from the support.
    pub fn without(kind: StructureKind, n: usize, removed: &[usize]) -> Result<Self> {
        let full = match kind {
            StructureKind::Interval => Self::interval(n),
            StructureKind::Cyclic => Self::cyclic(n)?,
        };
        let mut drop = BTreeSet::new();
        for &x in removed {
            if !full.contains(x) {
                return Err(Error::InvalidStructure(format!("cannot remove {x}: not in the ambient range")));
            }
            drop.insert(x);
        }
        let kept: Vec<usize> = full.support.iter().copied().filter(|x| !drop.contains(x)).collect();
        Self::with_support(kind, n, &kept)
    }

    fn build(kind: StructureKind, n: usize, support: Vec<usize>) -> Self {
        let mut member = vec![false; n + 1];
        for &x in &support {
            member[x] = true;
        }
        Structure { kind, n, support, member }
    }

    pub fn kind(&self) -> StructureKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.support.len() == self.n
    }

    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        self.member.get(x).copied().unwrap_or(false)
    }

    /// Position of `x` in the sorted support.
    pub fn index_of(&self, x: usize) -> Option<usize> {
        if !self.contains(x) {
            return None;
        }
        self.support.binary_search(&x).ok()
    }

    /// Every element of the ambient range, in increasing order.
    pub fn ambient(&self) -> Vec<usize> {
        match self.kind {
            StructureKind::Interval => (1..=self.n).collect(),
            StructureKind::Cyclic => (0..self.n).collect(),
        }
    }

    /// Canonical textual key, e.g. `interval:10` or `cyclic:9:0,1,3`.
    pub fn key(&self) -> String {
        let mut key = format!("{}:{}", self.kind.name(), self.n);
        if !self.is_full() {
            key.push(':');
            let elems: Vec<String> = self.support.iter().map(|x| x.to_string()).collect();
            key.push_str(&elems.join(","));
        }
        key
    }
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.key())
    }
}

/// A nontrivial 3-term progression `a, b, c` with `b = a + d`, `c = a + 2d`
/// (reduced mod n for cyclic structures).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ApTriple {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub d: usize,
}

impl ApTriple {
    pub fn elements(&self) -> [usize; 3] {
        [self.a, self.b, self.c]
    }

    pub fn contains(&self, x: usize) -> bool {
        self.a == x || self.b == x || self.c == x
    }
}

/// All nontrivial 3-APs inside the support, each unordered progression once.
///
/// Interval triples come out with `a < b < c`. Cyclic triples are generated
/// as `(a, a+d, a+2d)` over `a` then `d` ascending; the first generator of each
/// element set is kept and triples with a repeated residue are dropped.
pub fn list_3aps(s: &Structure) -> Vec<ApTriple> {
    list_kaps(s, 3)
        .into_iter()
        .map(|p| ApTriple { a: p.elements[0], b: p.elements[1], c: p.elements[2], d: p.d })
        .collect()
}

/// A k-term progression `start, start+d, ..., start+(k-1)d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Progression {
    pub start: usize,
    pub d: usize,
    pub elements: Vec<usize>,
}

/// k-term progressions inside the support, canonicalised the same way as
/// [`list_3aps`]. Only a plain generator; nothing here is tuned for k > 3.
pub fn list_kaps(s: &Structure, k: usize) -> Vec<Progression> {
    let mut out = Vec::new();
    if k < 2 {
        return out;
    }
    match s.kind {
        StructureKind::Interval => {
            for &a in &s.support {
                let mut d = 1;
                while a + (k - 1) * d <= s.n {
                    if (1..k).all(|i| s.contains(a + i * d)) {
                        out.push(Progression { start: a, d, elements: (0..k).map(|i| a + i * d).collect() });
                    }
                    d += 1;
                }
            }
        }
        StructureKind::Cyclic => {
            let n = s.n;
            let mut seen = BTreeSet::new();
            for &a in &s.support {
                for d in 1..n {
                    let elems: Vec<usize> = (0..k).map(|i| (a + i * d) % n).collect();
                    if !elems.iter().all(|&x| s.contains(x)) {
                        continue;
                    }
                    let mut sorted = elems.clone();
                    sorted.sort_unstable();
                    sorted.dedup();
                    if sorted.len() < k {
                        continue;
                    }
                    if seen.insert(sorted) {
                        out.push(Progression { start: a, d, elements: elems });
                    }
                }
            }
        }
    }
    out
}

/// `f(n)`, the number of 3-APs in `[n]`.
pub fn count_3aps_interval(n: u64) -> u64 {
    (n / 2) * (n.saturating_sub(1) / 2)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut i = 3u64;
    while i * i <= n {
        if n.is_multiple_of(i) {
            return false;
        }
        i += 2;
    }
    true
}

pub fn is_power_of_two(n: u64) -> bool {
    n.is_power_of_two()
}

/// Multiplicative order of `a` modulo `m`.
pub fn mult_order(a: i64, m: u64) -> Result<u64> {
    if m < 2 {
        return Err(Error::InvalidParameter(format!("modulus {m} must be at least 2")));
    }
    let m128 = m as i128;
    let base = (a as i128).rem_euclid(m128) as u64;
    if base.gcd(&m) != 1 {
        return Err(Error::NotCoprime { a, m });
    }
    let mut x = base;
    let mut t = 1u64;
    while x != 1 {
        x = ((x as u128 * base as u128) % m as u128) as u64;
        t += 1;
    }
    Ok(t)
}

/// Whether `a` generates the multiplicative group of `Z_p`.
pub fn is_generator(a: i64, p: u64) -> Result<bool> {
    if !is_prime(p) {
        return Err(Error::InvalidParameter(format!("{p} is not prime")));
    }
    Ok(mult_order(a, p)? == p - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sets(triples: &[ApTriple]) -> Vec<[usize; 3]> {
        let mut v: Vec<[usize; 3]> = triples
            .iter()
            .map(|t| {
                let mut e = t.elements();
                e.sort_unstable();
                e
            })
            .collect();
        v.sort_unstable();
        v
    }

    #[test]
    fn interval_five() {
        let aps = list_3aps(&Structure::interval(5));
        assert_eq!(sets(&aps), vec![[1, 2, 3], [1, 3, 5], [2, 3, 4], [3, 4, 5]]);
        assert!(aps.iter().all(|t| t.a < t.b && t.b < t.c && t.a + t.c == 2 * t.b));
    }

    #[test]
    fn interval_two_has_none() {
        assert!(list_3aps(&Structure::interval(2)).is_empty());
        assert_eq!(count_3aps_interval(1), 0);
        assert_eq!(count_3aps_interval(2), 0);
        assert_eq!(count_3aps_interval(5), 4);
    }

    #[test]
    fn cyclic_three_has_one_triple() {
        let aps = list_3aps(&Structure::cyclic(3).unwrap());
        assert_eq!(sets(&aps), vec![[0, 1, 2]]);
        assert_eq!(aps[0], ApTriple { a: 0, b: 1, c: 2, d: 1 });
    }

    #[test]
    fn even_cyclic_drops_degenerate_triples() {
        assert!(list_3aps(&Structure::cyclic(2).unwrap()).is_empty());
        // Z_4: every 3-subset is a progression, the d = 2 ones collapse.
        let aps = list_3aps(&Structure::cyclic(4).unwrap());
        assert_eq!(aps.len(), 4);
        for t in &aps {
            assert_eq!((t.a + t.c) % 4, (2 * t.b) % 4);
        }
    }

    #[test]
    fn subset_filters_progressions() {
        let s = Structure::without(StructureKind::Interval, 5, &[3]).unwrap();
        assert_eq!(s.support(), &[1, 2, 4, 5]);
        assert!(list_3aps(&s).is_empty());
        assert_eq!(s.key(), "interval:5:1,2,4,5");
        assert_eq!(Structure::interval(5).key(), "interval:5");
    }

    #[test]
    fn bad_supports_rejected() {
        assert!(Structure::with_support(StructureKind::Interval, 4, &[0]).is_err());
        assert!(Structure::with_support(StructureKind::Interval, 4, &[5]).is_err());
        assert!(Structure::with_support(StructureKind::Cyclic, 4, &[4]).is_err());
        assert!(Structure::with_support(StructureKind::Cyclic, 4, &[1, 1]).is_err());
        assert!(Structure::cyclic(0).is_err());
    }

    #[test]
    fn primality() {
        assert!(is_prime(2));
        assert!(!is_prime(9));
        assert!(is_prime(17));
        assert!(!is_prime(1));
        assert!(!is_prime(0));
        let small: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }

    #[test]
    fn orders() {
        assert_eq!(mult_order(2, 7).unwrap(), 3);
        assert_eq!(mult_order(2, 17).unwrap(), 8);
        assert_eq!(mult_order(2, 3).unwrap(), 2);
        assert_eq!(mult_order(-1, 7).unwrap(), 2);
        assert_eq!(mult_order(2, 4), Err(Error::NotCoprime { a: 2, m: 4 }));
        assert!(mult_order(2, 1).is_err());
    }

    #[test]
    fn generators() {
        assert!(is_generator(2, 5).unwrap());
        assert!(!is_generator(2, 7).unwrap());
        assert!(is_generator(2, 3).unwrap());
        assert!(is_generator(2, 9).is_err());
    }

    #[test]
    fn kaps_interval() {
        let aps = list_kaps(&Structure::interval(7), 4);
        // d=1: 4 starts, d=2: starts 1 only
        assert_eq!(aps.len(), 5);
    }
}

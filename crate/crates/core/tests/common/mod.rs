#![allow(dead_code)]

use std::collections::BTreeSet;

use rainbow_core::{Structure, StructureKind};

/// Element sets of the nontrivial 3-APs of a structure, found by the
/// definition rather than the generator under test.
pub fn triples(s: &Structure) -> Vec<[usize; 3]> {
    let sup = s.support();
    let n = s.n();
    let mut out = BTreeSet::new();
    for &x in sup {
        for &y in sup {
            for &z in sup {
                if x == y || y == z || x == z {
                    continue;
                }
                let is_ap = match s.kind() {
                    StructureKind::Interval => x + z == 2 * y,
                    StructureKind::Cyclic => (x + z) % n == (2 * y) % n,
                };
                if is_ap {
                    let mut t = [x, y, z];
                    t.sort_unstable();
                    out.insert(t);
                }
            }
        }
    }
    out.into_iter().collect()
}

/// Counts `r`-colorings of the support (by colors used) with no rainbow
/// triple, over all `r^|A|` assignments.
pub fn brute_force(s: &Structure, r: usize) -> Vec<u64> {
    let sup = s.support();
    let idx = |x: usize| sup.iter().position(|&y| y == x).unwrap();
    let ts: Vec<[usize; 3]> = triples(s).iter().map(|t| [idx(t[0]), idx(t[1]), idx(t[2])]).collect();
    let mut colors = vec![0usize; sup.len()];
    let mut out = vec![0u64; r + 1];
    loop {
        let rainbow = ts.iter().any(|t| {
            let (a, b, c) = (colors[t[0]], colors[t[1]], colors[t[2]]);
            a != b && b != c && a != c
        });
        if !rainbow {
            let used: BTreeSet<usize> = colors.iter().copied().collect();
            out[used.len()] += 1;
        }
        let mut i = 0;
        loop {
            if i == colors.len() {
                return out;
            }
            colors[i] += 1;
            if colors[i] < r {
                break;
            }
            colors[i] = 0;
            i += 1;
        }
    }
}

pub fn brute_total(s: &Structure, r: usize) -> u64 {
    brute_force(s, r).iter().sum()
}

pub fn odd_primes_up_to(n: u64) -> Vec<u64> {
    (3..=n).filter(|&p| (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0)).collect()
}

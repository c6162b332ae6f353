//! Orbits of `Z_p \ {0}` under doubling and negation.
//!
//! A rainbow-free coloring of `Z_p` that gives 0 a color of its own must be
//! constant on each of these orbits, which is what makes the exact-3 colorings
//! of `Z_p` countable in closed form.

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::Pow;

use crate::error::{Error, Result};
use crate::numbers::{is_prime, list_3aps, mult_order, Structure};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orbit {
    /// Smallest uncovered element of `[1, (p-1)/2]` when the orbit was opened.
    pub representative: u64,
    /// Members in discovery order: the doubling cycle of the representative,
    /// followed by the doubling cycle of its negative when that is new.
    pub elements: Vec<u64>,
}

impl Orbit {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, x: u64) -> bool {
        self.elements.contains(&x)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitDecomposition {
    pub p: u64,
    pub orbits: Vec<Orbit>,
    /// 1 when `ord_p(2)` is even, 2 otherwise.
    pub c: u64,
    pub ord: u64,
}

impl OrbitDecomposition {
    pub fn count(&self) -> usize {
        self.orbits.len()
    }

    /// `orbit_of[x]` is the index of the orbit holding `x`; entry 0 is unused.
    pub fn orbit_index(&self) -> Vec<usize> {
        let mut idx = vec![usize::MAX; self.p as usize];
        for (i, o) in self.orbits.iter().enumerate() {
            for &x in &o.elements {
                idx[x as usize] = i;
            }
        }
        idx
    }
}

fn require_odd_prime(p: u64) -> Result<()> {
    if p < 3 || !is_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    Ok(())
}

fn doubling_cycle(start: u64, p: u64) -> Vec<u64> {
    let mut out = vec![start];
    let mut x = (2 * start) % p;
    while x != start {
        out.push(x);
        x = (2 * x) % p;
    }
    out
}

pub fn orbit_decompose(p: u64) -> Result<OrbitDecomposition> {
    require_odd_prime(p)?;
    let ord = mult_order(2, p)?;
    let c = if ord % 2 == 0 { 1 } else { 2 };
    let mut covered = vec![false; p as usize];
    let mut orbits = Vec::new();
    for rep in 1..=(p - 1) / 2 {
        if covered[rep as usize] {
            continue;
        }
        let mut elements = doubling_cycle(rep, p);
        if !elements.contains(&(p - rep)) {
            elements.extend(doubling_cycle(p - rep, p));
        }
        for &x in &elements {
            covered[x as usize] = true;
        }
        orbits.push(Orbit { representative: rep, elements });
    }
    Ok(OrbitDecomposition { p, orbits, c, ord })
}

/// Exact-3-color rainbow-free colorings of `Z_p` with one color used once:
/// `p * r * C(r-1, 2) * (2^m - 2)` for `m` orbits.
pub fn structured_exact3_count(p: u64, r: u64) -> Result<BigInt> {
    if r < 3 {
        return Err(Error::InvalidParameter(format!("r must be at least 3, got {r}")));
    }
    let m = orbit_decompose(p)?.count();
    let two_colorings = BigInt::from(2u32).pow(m) - 2;
    Ok(BigInt::from(p) * BigInt::from(r) * BigInt::from(binomial(r - 1, 2)) * two_colorings)
}

/// Whether every 3-AP `{0, a, b}` of `Z_p` has `a` and `b` in the same orbit.
pub fn zero_ap_pair_same_orbit(p: u64) -> Result<bool> {
    let dec = orbit_decompose(p)?;
    let idx = dec.orbit_index();
    let zp = Structure::cyclic(p as usize)?;
    Ok(list_3aps(&zp).iter().filter(|t| t.contains(0)).all(|t| {
        let others: Vec<usize> = t.elements().into_iter().filter(|&x| x != 0).collect();
        idx[others[0]] == idx[others[1]]
    }))
}

/// Assignment order for DFS over `Z_p`: 0 first, then orbit by orbit.
pub fn orbit_assignment_order(p: u64) -> Result<Vec<usize>> {
    let dec = orbit_decompose(p)?;
    let mut order = vec![0usize];
    order.extend(dec.orbits.iter().flat_map(|o| o.elements.iter().map(|&x| x as usize)));
    Ok(order)
}

/// The orbit count `(p-1) / (c * ord_p(2))`, from the order of 2 alone.
pub fn orbit_count_from_order(p: u64) -> Result<u64> {
    require_odd_prime(p)?;
    let ord = mult_order(2, p)?;
    let c = if ord % 2 == 0 { 1 } else { 2 };
    Ok((p - 1) / (c * ord))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn as_set(o: &Orbit) -> BTreeSet<u64> {
        o.elements.iter().copied().collect()
    }

    #[test]
    fn seven_is_one_orbit() {
        let d = orbit_decompose(7).unwrap();
        assert_eq!((d.c, d.ord, d.count()), (2, 3, 1));
        assert_eq!(as_set(&d.orbits[0]), (1..=6).collect());
        assert_eq!(d.orbits[0].elements, vec![1, 2, 4, 6, 5, 3]);
    }

    #[test]
    fn seventeen_has_two_orbits() {
        let d = orbit_decompose(17).unwrap();
        assert_eq!((d.c, d.ord, d.count()), (1, 8, 2));
        assert_eq!(d.orbits[0].elements, vec![1, 2, 4, 8, 16, 15, 13, 9]);
        assert_eq!(d.orbits[1].elements, vec![3, 6, 12, 7, 14, 11, 5, 10]);
        assert_eq!(d.orbits[1].representative, 3);
    }

    #[test]
    fn three_is_trivial() {
        let d = orbit_decompose(3).unwrap();
        assert_eq!((d.c, d.ord, d.count()), (1, 2, 1));
        assert_eq!(as_set(&d.orbits[0]), BTreeSet::from([1, 2]));
    }

    #[test]
    fn rejects_non_odd_primes() {
        assert_eq!(orbit_decompose(2), Err(Error::NotOddPrime(2)));
        assert_eq!(orbit_decompose(9), Err(Error::NotOddPrime(9)));
        assert!(structured_exact3_count(15, 3).is_err());
        assert!(zero_ap_pair_same_orbit(1).is_err());
    }

    #[test]
    fn structured_counts() {
        assert_eq!(structured_exact3_count(17, 3).unwrap(), BigInt::from(102));
        assert_eq!(structured_exact3_count(7, 3).unwrap(), BigInt::from(0));
        assert_eq!(structured_exact3_count(5, 4).unwrap(), BigInt::from(0));
    }

    #[test]
    fn zero_progressions_stay_in_one_orbit() {
        for p in [7, 17, 31] {
            assert!(zero_ap_pair_same_orbit(p).unwrap(), "p = {p}");
        }
        assert_eq!(orbit_count_from_order(31).unwrap(), 3);
    }

    #[test]
    fn order_starts_at_zero_and_covers_group() {
        let order = orbit_assignment_order(13).unwrap();
        assert_eq!(order[0], 0);
        let set: BTreeSet<usize> = order.iter().copied().collect();
        assert_eq!(set, (0..13).collect());
        assert_eq!(order.len(), 13);
    }
}

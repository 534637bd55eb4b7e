//! Ideal enumeration for an arbitrary finite ring given by its element
//! operations.
//!
//! Elements are the integers `0..order`, and `0` must be the additive
//! identity. Every ideal is a sum of principal ideals, so the complete ideal
//! list is the set of principal ideals closed under pairwise sums.

use std::cmp::Ordering;
use std::collections::HashSet;

use fixedbitset::FixedBitSet;

/// Minimal element arithmetic needed to enumerate ideals.
pub trait FiniteRingOps {
    fn order(&self) -> u32;
    fn add(&self, a: u32, b: u32) -> u32;
    fn mul(&self, a: u32, b: u32) -> u32;
}

/// Orders ideals by size, then by their membership bitmask read as a big
/// integer (highest element index most significant).
pub fn ideal_order(a: &FixedBitSet, b: &FixedBitSet) -> Ordering {
    a.count_ones(..)
        .cmp(&b.count_ones(..))
        .then_with(|| a.as_slice().iter().rev().cmp(b.as_slice().iter().rev()))
}

pub fn principal_ideal<R: FiniteRingOps + ?Sized>(ring: &R, r: u32) -> FixedBitSet {
    let n = ring.order();
    let mut set = FixedBitSet::with_capacity(n as usize);
    for s in 0..n {
        set.insert(ring.mul(r, s) as usize);
    }
    set
}

/// Additive span of `a` and `b`; equals `a + b` when both are ideals.
pub fn ideal_sum<R: FiniteRingOps + ?Sized>(ring: &R, a: &FixedBitSet, b: &FixedBitSet) -> FixedBitSet {
    if a.is_subset(b) {
        return b.clone();
    }
    if b.is_subset(a) {
        return a.clone();
    }
    let mut cur = a.clone();
    for y in b.ones() {
        if cur.contains(y) {
            continue;
        }
        adjoin(ring, &mut cur, y as u32);
    }
    cur
}

/// Grows the additive subgroup `cur` to the subgroup generated by `cur` and `y`.
fn adjoin<R: FiniteRingOps + ?Sized>(ring: &R, cur: &mut FixedBitSet, y: u32) {
    loop {
        let shifted: Vec<usize> = cur
            .ones()
            .map(|x| ring.add(x as u32, y) as usize)
            .filter(|&z| !cur.contains(z))
            .collect();
        if shifted.is_empty() {
            break;
        }
        for z in shifted {
            cur.insert(z);
        }
    }
}

/// The ideal generated by `gens`.
pub fn generated_ideal<R: FiniteRingOps + ?Sized>(ring: &R, gens: &[u32]) -> FixedBitSet {
    let mut acc = FixedBitSet::with_capacity(ring.order() as usize);
    acc.insert(0);
    for &g in gens {
        let p = principal_ideal(ring, g);
        acc = ideal_sum(ring, &acc, &p);
    }
    acc
}

/// All ideals of the ring, duplicate-free and sorted by [`ideal_order`].
pub fn enumerate_ideals<R: FiniteRingOps + ?Sized>(ring: &R) -> Vec<FixedBitSet> {
    let mut seen: HashSet<FixedBitSet> = HashSet::new();
    let mut list: Vec<FixedBitSet> = Vec::new();
    for r in 0..ring.order() {
        let p = principal_ideal(ring, r);
        if seen.insert(p.clone()) {
            list.push(p);
        }
    }
    let mut i = 0;
    while i < list.len() {
        for j in 0..i {
            let s = ideal_sum(ring, &list[i], &list[j]);
            if seen.insert(s.clone()) {
                list.push(s);
            }
        }
        i += 1;
    }
    list.sort_by(ideal_order);
    list
}

/// True when `set` is closed under addition and under multiplication by every
/// ring element.
pub fn is_ideal<R: FiniteRingOps + ?Sized>(ring: &R, set: &FixedBitSet) -> bool {
    if !set.contains(0) {
        return false;
    }
    for x in set.ones() {
        for y in set.ones() {
            if !set.contains(ring.add(x as u32, y as u32) as usize) {
                return false;
            }
        }
        for r in 0..ring.order() {
            if !set.contains(ring.mul(r, x as u32) as usize) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Cyclic(u32);

    impl FiniteRingOps for Cyclic {
        fn order(&self) -> u32 {
            self.0
        }
        fn add(&self, a: u32, b: u32) -> u32 {
            (a + b) % self.0
        }
        fn mul(&self, a: u32, b: u32) -> u32 {
            (a * b) % self.0
        }
    }

    fn members(set: &FixedBitSet) -> Vec<usize> {
        set.ones().collect()
    }

    #[test]
    fn z12_has_one_ideal_per_divisor() {
        let ideals = enumerate_ideals(&Cyclic(12));
        assert_eq!(ideals.len(), 6);
        assert_eq!(members(&ideals[0]), vec![0]);
        assert_eq!(ideals[5].count_ones(..), 12);
        for ideal in &ideals {
            assert!(is_ideal(&Cyclic(12), ideal));
        }
    }

    #[test]
    fn sum_of_incomparable_ideals() {
        let r = Cyclic(12);
        let four = principal_ideal(&r, 4);
        let six = principal_ideal(&r, 6);
        assert_eq!(members(&ideal_sum(&r, &four, &six)), vec![0, 2, 4, 6, 8, 10]);
    }

    #[test]
    fn generated_by_nothing_is_zero() {
        assert_eq!(members(&generated_ideal(&Cyclic(9), &[])), vec![0]);
        assert_eq!(members(&generated_ideal(&Cyclic(9), &[6])), vec![0, 3, 6]);
    }
}

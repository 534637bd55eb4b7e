//! Ideal lists of product rings against independent enumerations.

use std::collections::BTreeSet;

use fixedbitset::FixedBitSet;
use regideal::notation::parse_ring;
use regideal::ring::closure::{enumerate_ideals, is_ideal, FiniteRingOps};
use regideal::ring::{ElementCap, ProductRing};

/// A product ring seen as a single ring on `0..order`.
struct Flat<'a>(&'a ProductRing);

impl FiniteRingOps for Flat<'_> {
    fn order(&self) -> u32 {
        self.0.order().unwrap() as u32
    }

    fn add(&self, a: u32, b: u32) -> u32 {
        let r = self.0;
        r.element_index(&r.add(&r.element_at(a as u64), &r.element_at(b as u64))) as u32
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        let r = self.0;
        r.element_index(&r.mul(&r.element_at(a as u64), &r.element_at(b as u64))) as u32
    }
}

fn ring(spec: &str) -> ProductRing {
    parse_ring(spec, ElementCap::default()).unwrap()
}

fn componentwise_sets(r: &ProductRing) -> BTreeSet<Vec<usize>> {
    r.ideals()
        .iter()
        .map(|i| {
            let mut v: Vec<usize> = r.ideal_elements(i).iter().map(|x| r.element_index(x) as usize).collect();
            v.sort_unstable();
            v
        })
        .collect()
}

fn as_sets(sets: &[FixedBitSet]) -> BTreeSet<Vec<usize>> {
    sets.iter().map(|s| s.ones().collect()).collect()
}

#[test]
fn closure_on_the_flat_ring_matches_products_of_factor_ideals() {
    for spec in [
        "F2 x Z4 x F3",
        "F2 x Z4 x Z4",
        "F2 x F2[x,y]/(x,y)^2 x F3",
        "F2 x Z4 x F3 x Z9",
        "Z8 x F2 x F2[x]/x^2",
        "F3[x]/x^2 x Z4 x F2",
        "F2 x F2 x F2 x F2 x F2 x F2 x F2 x F2",
    ] {
        let r = ring(spec);
        assert!(r.order().unwrap() <= 256, "{spec}");
        let flat = enumerate_ideals(&Flat(&r));
        assert_eq!(as_sets(&flat), componentwise_sets(&r), "{spec}");
        assert_eq!(flat.len(), r.ideal_count(), "{spec}");
    }
}

#[test]
fn exhaustive_subsets_of_small_rings() {
    for spec in ["Z4", "Z9", "F2[x]/x^3", "F2[x,y]/(x,y)^2", "F2 x Z4", "Z4 x F3", "F2 x F2 x F3"] {
        let r = ring(spec);
        let flat = Flat(&r);
        let n = flat.order() as usize;
        assert!(n <= 12, "{spec}");
        let mut found = Vec::new();
        for bits in 0u32..(1 << n) {
            if bits & 1 == 0 {
                continue;
            }
            let mut set = FixedBitSet::with_capacity(n);
            for k in 0..n {
                set.set(k, bits >> k & 1 == 1);
            }
            let closed = set.ones().all(|a| {
                set.ones().all(|b| set.contains(flat.add(a as u32, b as u32) as usize))
                    && (0..n).all(|c| set.contains(flat.mul(c as u32, a as u32) as usize))
            });
            if closed {
                assert!(is_ideal(&flat, &set));
                found.push(set);
            }
        }
        assert_eq!(as_sets(&found), componentwise_sets(&r), "{spec}");
    }
}

#[test]
fn vertex_counts() {
    assert_eq!(ring("F2 x F3 x F5").vertices().len(), 6);
    assert_eq!(ring("F2 x Z4 x F3").vertices().len(), 10);
    assert_eq!(ring("F2 x Z4 x Z4").vertices().len(), 16);
    assert_eq!(ring("F2 x F3 x F5 x F7").vertices().len(), 14);
}

//! Regularity, the sets C⁻/C⁺, and the regular digraph of ideals.
//!
//! An element `r` is regular on an ideal `M` when `r x != 0` for every
//! nonzero `x` in `M`; in particular every element, zero included, is
//! regular on the zero ideal, and zero is regular on nothing else. There is
//! an arc `I -> J` between distinct non-trivial ideals when `I` contains a
//! `J`-regular element.
//!
//! Three routes decide "`I` contains a `J`-regular element":
//!
//! * [`Route::Elementwise`] scans the elements of the product ring;
//! * [`Route::Componentwise`] asks the same question in each local factor;
//! * [`Route::Support`] uses the fact that in a finite local ring only an
//!   ideal containing a unit holds an element regular on a nonzero ideal, so
//!   the answer is "`I` is the whole factor wherever `J` is nonzero".
//!
//! Graph construction uses the support rule and, for rings within the
//! element cap, validates every arc against the elementwise scan.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::Serialize;

use crate::ring::{ElementCap, Ideal, ProductRing, RingElement};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    Elementwise,
    Componentwise,
    Support,
}

/// `r x != 0` for every nonzero `x` in `m`.
pub fn is_regular_on(ring: &ProductRing, r: &RingElement, m: &Ideal) -> bool {
    ring.ideal_elements(m)
        .iter()
        .all(|x| ring.is_zero_element(x) || !ring.is_zero_element(&ring.mul(r, x)))
}

/// Some element of `i` is regular on `j`, by scanning elements of the product.
pub fn contains_regular_element(ring: &ProductRing, i: &Ideal, j: &Ideal) -> bool {
    let targets: Vec<RingElement> = ring
        .ideal_elements(j)
        .into_iter()
        .filter(|y| !ring.is_zero_element(y))
        .collect();
    ring.ideal_elements(i)
        .iter()
        .any(|x| targets.iter().all(|y| !ring.is_zero_element(&ring.mul(x, y))))
}

/// `I_k` contains a `J_k`-regular element in every factor `k`.
pub fn contains_regular_componentwise(ring: &ProductRing, i: &Ideal, j: &Ideal) -> bool {
    ring.components()
        .iter()
        .zip(i.parts.iter().zip(&j.parts))
        .all(|(c, (&a, &b))| c.contains_regular_element(a, b))
}

/// Support rule: `I` is the whole factor wherever `J` is nonzero.
pub fn contains_regular_fast(ring: &ProductRing, i: &Ideal, j: &Ideal) -> bool {
    let need = ring.support_mask(j);
    need & ring.unit_mask(i) == need
}

pub fn contains_regular(ring: &ProductRing, i: &Ideal, j: &Ideal, route: Route) -> bool {
    match route {
        Route::Elementwise => contains_regular_element(ring, i, j),
        Route::Componentwise => contains_regular_componentwise(ring, i, j),
        Route::Support => contains_regular_fast(ring, i, j),
    }
}

/// Arc `I -> J` of the regular digraph, by the support rule. Defined for
/// distinct vertices; equal inputs give `false`.
pub fn arc_fast(ring: &ProductRing, i: &Ideal, j: &Ideal) -> bool {
    i != j && contains_regular_fast(ring, i, j)
}

/// `C⁻(I, K)`: non-trivial ideals containing both an `I`-regular and a
/// `K`-regular element. `C⁻(I)` is `C⁻(I, (0))`.
pub fn c_minus(ring: &ProductRing, i: &Ideal, k: &Ideal, route: Route) -> Vec<Ideal> {
    ring.vertices()
        .into_iter()
        .filter(|j| contains_regular(ring, j, i, route) && contains_regular(ring, j, k, route))
        .collect()
}

/// `C⁺(I, K)`: non-trivial ideals `J` such that both `I` and `K` contain a
/// `J`-regular element. `C⁺(I)` is `C⁺(I, R)`.
pub fn c_plus(ring: &ProductRing, i: &Ideal, k: &Ideal, route: Route) -> Vec<Ideal> {
    ring.vertices()
        .into_iter()
        .filter(|j| contains_regular(ring, i, j, route) && contains_regular(ring, k, j, route))
        .collect()
}

/// Precomputed elementwise regularity over a whole product ring: for each
/// ideal, its member set and its set of regular elements, both as bitsets
/// over flat element indices.
pub struct ElementwiseOracle {
    members: HashMap<Ideal, (FixedBitSet, FixedBitSet)>,
}

impl ElementwiseOracle {
    /// `None` when the ring's order exceeds `cap`.
    pub fn new(ring: &ProductRing, ideals: &[Ideal], cap: ElementCap) -> Option<Self> {
        let order = ring.order().filter(|&o| o <= cap.get())? as usize;
        let elements: Vec<RingElement> = (0..order as u64).map(|x| ring.element_at(x)).collect();
        // x is regular on M exactly when Ann(x) meets M only in zero.
        let annihilators: Vec<FixedBitSet> = elements
            .par_iter()
            .map(|x| {
                let mut ann = FixedBitSet::with_capacity(order);
                for (idx, y) in elements.iter().enumerate() {
                    let zero = x
                        .coords
                        .iter()
                        .zip(&y.coords)
                        .zip(ring.components())
                        .all(|((&a, &b), c)| c.mul(a, b) == 0);
                    if zero {
                        ann.insert(idx);
                    }
                }
                ann
            })
            .collect();
        let members = ideals
            .par_iter()
            .map(|ideal| {
                let mut member = FixedBitSet::with_capacity(order);
                for x in ring.ideal_elements(ideal) {
                    member.insert(ring.element_index(&x) as usize);
                }
                let mut nonzero = member.clone();
                nonzero.set(0, false);
                let mut regular = FixedBitSet::with_capacity(order);
                for (idx, ann) in annihilators.iter().enumerate() {
                    regular.set(idx, ann.is_disjoint(&nonzero));
                }
                (ideal.clone(), (member, regular))
            })
            .collect();
        Some(ElementwiseOracle { members })
    }

    /// Some member of `i` is regular on `j`. Both must have been passed to
    /// [`ElementwiseOracle::new`].
    pub fn contains_regular(&self, i: &Ideal, j: &Ideal) -> bool {
        let (member, _) = &self.members[i];
        let (_, regular) = &self.members[j];
        !member.is_disjoint(regular)
    }
}

/// When to validate support-rule arcs against the elementwise oracle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Validation {
    /// Validate when the ring's order is within the cap.
    WithinCap,
    Never,
}

#[derive(Clone, Debug)]
pub struct BuildOptions {
    pub validation: Validation,
    pub cap: ElementCap,
    /// Test hook: flip this arc of the support-rule relation before
    /// validation, simulating a faulty fast path.
    pub flip_arc: Option<(usize, usize)>,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            validation: Validation::WithinCap,
            cap: ElementCap::from_env(),
            flip_arc: None,
        }
    }
}

/// Where the arc relation came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "status")]
pub enum ArcProvenance {
    /// Support rule only; validation was not requested.
    SupportRule,
    /// Support rule, compared against the elementwise oracle on every
    /// ordered vertex pair. `mismatches` lists disagreeing pairs.
    OracleValidated { mismatches: Vec<(usize, usize)> },
    /// Validation requested but the ring exceeds the element cap.
    OracleSkipped { order: Option<u64>, cap: u64 },
}

/// The regular digraph of ideals.
#[derive(Clone, Debug)]
pub struct RegularDigraph {
    ring: ProductRing,
    vertices: Vec<Ideal>,
    index: HashMap<Ideal, usize>,
    out: Vec<FixedBitSet>,
    out_degree: Vec<usize>,
    in_degree: Vec<usize>,
    provenance: ArcProvenance,
}

pub fn build_digraph(ring: &ProductRing) -> RegularDigraph {
    build_digraph_with(ring, &BuildOptions::default())
}

pub fn build_digraph_with(ring: &ProductRing, options: &BuildOptions) -> RegularDigraph {
    let vertices = ring.vertices();
    let n = vertices.len();
    let masks: Vec<(u64, u64)> = vertices
        .iter()
        .map(|v| (ring.support_mask(v), ring.unit_mask(v)))
        .collect();
    let mut out: Vec<FixedBitSet> = (0..n)
        .into_par_iter()
        .map(|s| {
            let mut row = FixedBitSet::with_capacity(n);
            let units = masks[s].1;
            for (d, &(support, _)) in masks.iter().enumerate() {
                if d != s && support & units == support {
                    row.insert(d);
                }
            }
            row
        })
        .collect();
    if let Some((s, d)) = options.flip_arc {
        if s < n && d < n {
            out[s].toggle(d);
        }
    }
    let provenance = match options.validation {
        Validation::Never => ArcProvenance::SupportRule,
        Validation::WithinCap => match ElementwiseOracle::new(ring, &vertices, options.cap) {
            None => ArcProvenance::OracleSkipped {
                order: ring.order(),
                cap: options.cap.get(),
            },
            Some(oracle) => {
                let mismatches = (0..n)
                    .into_par_iter()
                    .flat_map_iter(|s| {
                        let row = &out[s];
                        let oracle = &oracle;
                        let vertices = &vertices;
                        (0..n).filter_map(move |d| {
                            let expected = s != d && oracle.contains_regular(&vertices[s], &vertices[d]);
                            (expected != row.contains(d)).then_some((s, d))
                        })
                    })
                    .collect();
                ArcProvenance::OracleValidated { mismatches }
            }
        },
    };
    let out_degree = out.iter().map(|r| r.count_ones(..)).collect();
    let mut in_degree = vec![0; n];
    for row in &out {
        for d in row.ones() {
            in_degree[d] += 1;
        }
    }
    let index = vertices.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();
    RegularDigraph {
        ring: ring.clone(),
        vertices,
        index,
        out,
        out_degree,
        in_degree,
        provenance,
    }
}

impl RegularDigraph {
    pub fn ring(&self) -> &ProductRing {
        &self.ring
    }

    pub fn vertices(&self) -> &[Ideal] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex_index(&self, ideal: &Ideal) -> Option<usize> {
        self.index.get(ideal).copied()
    }

    pub fn has_arc(&self, s: usize, d: usize) -> bool {
        self.out[s].contains(d)
    }

    pub fn successors(&self, s: usize) -> &FixedBitSet {
        &self.out[s]
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out_degree[v]
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.in_degree[v]
    }

    pub fn provenance(&self) -> &ArcProvenance {
        &self.provenance
    }

    /// All arcs, in source then target order.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out.iter().enumerate().flat_map(|(s, row)| row.ones().map(move |d| (s, d)))
    }

    pub fn arc_count(&self) -> usize {
        self.out_degree.iter().sum()
    }

    pub fn underlying(&self) -> UnderlyingGraph {
        let mut adjacency = self.out.clone();
        for (s, d) in self.arcs() {
            adjacency[d].insert(s);
        }
        UnderlyingGraph {
            vertices: self.vertices.clone(),
            adjacency,
        }
    }
}

/// The simple undirected graph underlying a [`RegularDigraph`].
#[derive(Clone, Debug)]
pub struct UnderlyingGraph {
    vertices: Vec<Ideal>,
    adjacency: Vec<FixedBitSet>,
}

impl UnderlyingGraph {
    pub fn from_adjacency(vertices: Vec<Ideal>, adjacency: Vec<FixedBitSet>) -> Self {
        UnderlyingGraph { vertices, adjacency }
    }

    pub fn vertices(&self) -> &[Ideal] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn neighbours(&self, v: usize) -> &FixedBitSet {
        &self.adjacency[v]
    }

    pub fn is_adjacent(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].contains(b)
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(|r| r.count_ones(..)).sum::<usize>() / 2
    }
}

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{LocalRing, RingError};

/// An ideal of a [`ProductRing`], one component-ideal index per factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Ideal {
    pub parts: Vec<usize>,
}

impl Ideal {
    pub fn new(parts: Vec<usize>) -> Self {
        Ideal { parts }
    }
}

/// An element of a [`ProductRing`], one element index per factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingElement {
    pub coords: Vec<u32>,
}

/// How a ring is split as `F1 x R2 x R3` for the case analysis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "model")]
pub enum Arrangement {
    /// Every factor is a field; vertices are modelled by their supports.
    Reduced,
    Split(Split),
    /// No field factor, or too few factors to split.
    Unclassified,
}

/// Component indices playing the field `F1`, the non-field local ring `R2`,
/// and the remaining factors `R3` (in the order they are used).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Split {
    pub field: usize,
    pub local: usize,
    pub rest: Vec<usize>,
}

impl Split {
    /// Component indices in arranged order.
    pub fn permutation(&self) -> Vec<usize> {
        let mut order = vec![self.field, self.local];
        order.extend(&self.rest);
        order
    }
}

/// An ordered product of finite local rings.
#[derive(Clone, Debug)]
pub struct ProductRing {
    components: Vec<Arc<LocalRing>>,
    arrangement: Arrangement,
    n_fields: usize,
}

impl ProductRing {
    pub fn new(components: Vec<LocalRing>) -> Result<Self, RingError> {
        Self::from_shared(components.into_iter().map(Arc::new).collect())
    }

    pub fn from_shared(components: Vec<Arc<LocalRing>>) -> Result<Self, RingError> {
        if components.is_empty() {
            return Err(RingError::EmptyProduct);
        }
        if components.len() > 64 {
            return Err(RingError::TooManyComponents(components.len()));
        }
        let n_fields = components.iter().filter(|c| c.is_field()).count();
        let mut ring = ProductRing {
            components,
            arrangement: Arrangement::Unclassified,
            n_fields,
        };
        ring.arrangement = ring.canonicalize_arrangement();
        Ok(ring)
    }

    /// Picks the lowest-indexed field as `F1`; for non-reduced rings the
    /// lowest-indexed non-field as `R2`, with the rest as `R3` in original
    /// order except that a second field (when there are exactly two) leads.
    pub fn canonicalize_arrangement(&self) -> Arrangement {
        let fields: Vec<usize> = (0..self.len()).filter(|&i| self.components[i].is_field()).collect();
        let Some(&field) = fields.first() else {
            return Arrangement::Unclassified;
        };
        if self.is_reduced() {
            return Arrangement::Reduced;
        }
        let local = (0..self.len())
            .find(|&i| !self.components[i].is_field())
            .expect("non-reduced ring has a non-field factor");
        let mut rest: Vec<usize> = (0..self.len()).filter(|&i| i != field && i != local).collect();
        if rest.is_empty() {
            return Arrangement::Unclassified;
        }
        if fields.len() == 2 {
            let second = fields[1];
            rest.retain(|&i| i != second);
            rest.insert(0, second);
        }
        Arrangement::Split(Split { field, local, rest })
    }

    pub fn components(&self) -> &[Arc<LocalRing>] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &LocalRing {
        &self.components[i]
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn arrangement(&self) -> &Arrangement {
        &self.arrangement
    }

    /// Number of field factors.
    pub fn n_fields(&self) -> usize {
        self.n_fields
    }

    /// `|Max(R)|`: one maximal ideal per local factor.
    pub fn max_ideal_count(&self) -> usize {
        self.components.len()
    }

    pub fn is_reduced(&self) -> bool {
        self.n_fields == self.len()
    }

    pub fn is_field(&self) -> bool {
        self.len() == 1 && self.n_fields == 1
    }

    /// Number of elements, or `None` on overflow.
    pub fn order(&self) -> Option<u64> {
        self.components
            .iter()
            .try_fold(1u64, |acc, c| acc.checked_mul(c.order() as u64))
    }

    pub fn ideal_count(&self) -> usize {
        self.components.iter().map(|c| c.ideal_count()).product()
    }

    /// Every ideal, lexicographic by part indices.
    pub fn ideals(&self) -> Vec<Ideal> {
        let counts: Vec<usize> = self.components.iter().map(|c| c.ideal_count()).collect();
        let mut out = Vec::with_capacity(self.ideal_count());
        let mut parts = vec![0usize; counts.len()];
        loop {
            out.push(Ideal::new(parts.clone()));
            let mut pos = counts.len();
            loop {
                if pos == 0 {
                    return out;
                }
                pos -= 1;
                parts[pos] += 1;
                if parts[pos] < counts[pos] {
                    break;
                }
                parts[pos] = 0;
            }
        }
    }

    /// Non-trivial ideals: the vertex set of the regular digraph.
    pub fn vertices(&self) -> Vec<Ideal> {
        self.ideals().into_iter().filter(|i| !self.is_trivial(i)).collect()
    }

    pub fn zero_ideal(&self) -> Ideal {
        Ideal::new(vec![0; self.len()])
    }

    pub fn unit_ideal(&self) -> Ideal {
        Ideal::new(self.components.iter().map(|c| c.whole_ideal()).collect())
    }

    pub fn is_zero(&self, ideal: &Ideal) -> bool {
        ideal.parts.iter().all(|&p| p == 0)
    }

    pub fn is_unit(&self, ideal: &Ideal) -> bool {
        ideal
            .parts
            .iter()
            .zip(&self.components)
            .all(|(&p, c)| p == c.whole_ideal())
    }

    pub fn is_trivial(&self, ideal: &Ideal) -> bool {
        self.is_zero(ideal) || self.is_unit(ideal)
    }

    /// Bit `i` set when part `i` is nonzero.
    pub fn support_mask(&self, ideal: &Ideal) -> u64 {
        ideal
            .parts
            .iter()
            .enumerate()
            .filter(|(_, &p)| p != 0)
            .fold(0, |m, (i, _)| m | (1 << i))
    }

    /// Bit `i` set when part `i` is the whole component.
    pub fn unit_mask(&self, ideal: &Ideal) -> u64 {
        ideal
            .parts
            .iter()
            .zip(&self.components)
            .enumerate()
            .filter(|(_, (&p, c))| p == c.whole_ideal())
            .fold(0, |m, (i, _)| m | (1 << i))
    }

    pub fn full_mask(&self) -> u64 {
        if self.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.len()) - 1
        }
    }

    /// `Nil(R)`: the maximal ideal of each factor.
    pub fn nilradical(&self) -> Ideal {
        Ideal::new(self.components.iter().map(|c| c.maximal_ideal()).collect())
    }

    pub fn is_subset(&self, a: &Ideal, b: &Ideal) -> bool {
        a.parts
            .iter()
            .zip(&b.parts)
            .zip(&self.components)
            .all(|((&x, &y), c)| c.ideal_is_subset(x, y))
    }

    /// `Ann(I)`, computed factor by factor.
    pub fn annihilator(&self, ideal: &Ideal) -> Ideal {
        Ideal::new(
            ideal
                .parts
                .iter()
                .zip(&self.components)
                .map(|(&p, c)| c.annihilator(p))
                .collect(),
        )
    }

    /// Swaps zero and whole parts, fixing non-trivial parts.
    pub fn complement(&self, ideal: &Ideal) -> Ideal {
        Ideal::new(
            ideal
                .parts
                .iter()
                .zip(&self.components)
                .map(|(&p, c)| {
                    if p == 0 {
                        c.whole_ideal()
                    } else if p == c.whole_ideal() {
                        0
                    } else {
                        p
                    }
                })
                .collect(),
        )
    }

    /// The product of the factors at `indices`, in that order.
    pub fn sub_product(&self, indices: &[usize]) -> Result<ProductRing, RingError> {
        ProductRing::from_shared(indices.iter().map(|&i| Arc::clone(&self.components[i])).collect())
    }

    /// The parts of `ideal` at `indices`, as an ideal of `sub_product(indices)`.
    pub fn restrict(&self, ideal: &Ideal, indices: &[usize]) -> Ideal {
        Ideal::new(indices.iter().map(|&i| ideal.parts[i]).collect())
    }

    pub fn mul(&self, a: &RingElement, b: &RingElement) -> RingElement {
        RingElement {
            coords: self
                .components
                .iter()
                .zip(a.coords.iter().zip(&b.coords))
                .map(|(c, (&x, &y))| c.mul(x, y))
                .collect(),
        }
    }

    pub fn add(&self, a: &RingElement, b: &RingElement) -> RingElement {
        RingElement {
            coords: self
                .components
                .iter()
                .zip(a.coords.iter().zip(&b.coords))
                .map(|(c, (&x, &y))| c.add(x, y))
                .collect(),
        }
    }

    pub fn is_zero_element(&self, x: &RingElement) -> bool {
        x.coords.iter().all(|&c| c == 0)
    }

    pub fn is_unit_element(&self, x: &RingElement) -> bool {
        x.coords.iter().zip(&self.components).all(|(&v, c)| c.is_unit(v))
    }

    pub fn contains_element(&self, ideal: &Ideal, x: &RingElement) -> bool {
        ideal
            .parts
            .iter()
            .zip(&x.coords)
            .zip(&self.components)
            .all(|((&p, &v), c)| c.ideal_contains(p, v))
    }

    /// Flat index of `x`, lexicographic in the coordinate tuple.
    pub fn element_index(&self, x: &RingElement) -> u64 {
        x.coords
            .iter()
            .zip(&self.components)
            .fold(0u64, |acc, (&v, c)| acc * c.order() as u64 + v as u64)
    }

    pub fn element_at(&self, mut index: u64) -> RingElement {
        let mut coords = vec![0u32; self.len()];
        for (slot, c) in coords.iter_mut().zip(&self.components).rev() {
            *slot = (index % c.order() as u64) as u32;
            index /= c.order() as u64;
        }
        RingElement { coords }
    }

    /// All elements of `ideal`, in coordinate order.
    pub fn ideal_elements(&self, ideal: &Ideal) -> Vec<RingElement> {
        let members: Vec<Vec<u32>> = ideal
            .parts
            .iter()
            .zip(&self.components)
            .map(|(&p, c)| c.ideal_members(p).collect())
            .collect();
        let mut out = vec![RingElement { coords: Vec::with_capacity(self.len()) }];
        for options in &members {
            out = out
                .into_iter()
                .flat_map(|e| {
                    options.iter().map(move |&v| {
                        let mut coords = e.coords.clone();
                        coords.push(v);
                        RingElement { coords }
                    })
                })
                .collect();
        }
        out
    }
}

impl fmt::Display for ProductRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self.components.iter().map(|c| c.descriptor().to_string()).collect();
        f.write_str(&terms.join(" x "))
    }
}

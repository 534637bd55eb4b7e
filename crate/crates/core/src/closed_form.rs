//! Closed-form distances, eccentricities, diameter, radius and center of the
//! regular graph of ideals, evaluated from ideal structure without search.
//!
//! A connected non-reduced ring is split as `F1 x R2 x R3` (see
//! [`ProductRing::canonicalize_arrangement`]) and every vertex falls in one
//! of five fixed shapes or in one of two families:
//!
//! | shape | ideal |
//! |-------|-------|
//! | `a` | `F1 x R2 x 0` |
//! | `b` | `F1 x 0 x R3` |
//! | `d` | `0 x R2 x R3` |
//! | `u` | `0 x R2 x 0` |
//! | `v` | `0 x 0 x R3` |
//! | `C` | `F1 x I2 x I3`, any other |
//! | `W` | `0 x K2 x K3`, any other |
//!
//! Reduced rings (products of `n >= 3` fields) are handled by the support
//! model: a vertex is determined by the set of factors where it is the whole
//! field, and arcs are strict support containments.
//!
//! Several rules ask whether `C⁻(I3, K3)` or `C⁺(I3, K3)` is empty inside
//! `R3`. Those are answered by an exhaustive scan of the non-trivial ideals
//! of `R3` under the support rule, tabulated once per ring by the
//! (support, unit-support) signature of the query. Where a rule's path can
//! pass through the zero ideal or the whole of `R3` (possible only when
//! `R3` is a field and has no non-trivial ideals), the test also accepts
//! that trivial witness; for `R3` not a field the two readings coincide.

use std::collections::{BTreeSet, HashSet};

use serde::Serialize;
use thiserror::Error;

use crate::metrics::is_connected_predicate;
use crate::ring::{Arrangement, Ideal, ProductRing, RingError};

const MAX_REST_FACTORS: usize = 20;

#[derive(Debug, Error)]
pub enum FormulaError {
    #[error("the regular graph is not connected: it needs three factors and a field factor")]
    Disconnected,
    #[error("the ring is reduced; use the support model")]
    Reduced,
    #[error("the ring is not reduced")]
    NotReduced,
    #[error("the support model needs at least three factors")]
    TooFewComponents,
    #[error("the zero and unit ideals are not vertices")]
    TrivialIdeal,
    #[error("distance queries need two distinct vertices")]
    SameVertex,
    #[error("the ring has no F1 x R2 x R3 arrangement")]
    Unclassified,
    #[error("R3 has {0} factors; at most 20 are supported")]
    TooManyFactors(usize),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// Position of a vertex in the case analysis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "tag")]
pub enum VertexClass {
    #[serde(rename = "a")]
    FieldAndLocal,
    #[serde(rename = "b")]
    FieldAndRest,
    #[serde(rename = "d")]
    LocalAndRest,
    #[serde(rename = "u")]
    LocalOnly,
    #[serde(rename = "v")]
    RestOnly,
    /// Full on `F1`; `local` is the `R2` ideal index, `rest` the `R3` ideal.
    #[serde(rename = "C")]
    FieldFull { local: usize, rest: Ideal },
    /// Zero on `F1`.
    #[serde(rename = "W")]
    FieldZero { local: usize, rest: Ideal },
    /// Reduced model: component indices where the ideal is the whole field.
    #[serde(rename = "reduced-support")]
    Support { support: Vec<usize> },
}

impl VertexClass {
    pub fn tag(&self) -> &'static str {
        match self {
            VertexClass::FieldAndLocal => "a",
            VertexClass::FieldAndRest => "b",
            VertexClass::LocalAndRest => "d",
            VertexClass::LocalOnly => "u",
            VertexClass::RestOnly => "v",
            VertexClass::FieldFull { .. } => "C",
            VertexClass::FieldZero { .. } => "W",
            VertexClass::Support { .. } => "reduced-support",
        }
    }
}

/// A closed-form distance: exact, or one of two candidates when the rules
/// do not separate them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DistanceValue {
    Exact(u32),
    Candidates([u32; 2]),
}

impl DistanceValue {
    pub fn admits(&self, d: u32) -> bool {
        match self {
            DistanceValue::Exact(k) => *k == d,
            DistanceValue::Candidates(ks) => ks.contains(&d),
        }
    }
}

/// Which rule produced a distance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DistanceRule {
    /// Between fixed shapes, `d` to `W`, `a`/`b` to `C`, `u`/`v` to `W`.
    BasicVertices,
    /// `C` to `C` or `W` to `W`.
    SameSide,
    /// `u`, `v`, `d` to `C`; `a`, `b` to `W`.
    AgainstBasic,
    /// `C` to `W` with an arc between them.
    CrossAdjacent,
    /// `C` to `W` with a common neighbour.
    CrossCommonNeighbour,
    /// `C` to `W` where both sit on isolated sides: distance five.
    CrossIsolated,
    /// `C` to `W`, three or four.
    CrossUndetermined,
    /// Reduced rings.
    Support,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum UnknownReason {
    /// The rule only states that the eccentricity is not three, and the
    /// diameter leaves more than one value.
    ExceedsThree,
    /// The ring's `R3` does not lead with a field where the rule needs one.
    ArrangementMismatch,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EccentricityValue {
    Exact(u32),
    Unknown(UnknownReason),
}

/// Which rule produced an eccentricity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EccentricityRule {
    /// Three or more field factors: every vertex has eccentricity three.
    ManyFields,
    /// `a`, `b`, `d`, `u`, `v`.
    BasicVertices,
    /// `C` vertices.
    FieldFull,
    /// `W` vertices.
    FieldZero,
}

/// Which center rule applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CenterCase {
    Reduced,
    SingleField,
    /// Two fields and three factors: every vertex is stated central. This
    /// contradicts the eccentricity rule for `F1 x I2 x 0` with `I2`
    /// non-trivial, which gives four.
    TwoFieldsThreeFactors,
    TwoFieldsMoreFactors,
    ManyFields,
}

#[derive(Clone, Debug, Serialize)]
pub struct CenterFormula {
    pub case: CenterCase,
    pub vertices: Vec<Ideal>,
}

/// Parts of a `C` or `W` vertex relative to the arrangement.
#[derive(Clone, Debug)]
struct Side {
    local: usize,
    rest: Ideal,
    local_zero: bool,
    local_whole: bool,
    rest_zero: bool,
    rest_whole: bool,
    rest_support: u64,
    rest_units: u64,
    /// Masks over `R2 x R3`, with `R2` at bit zero.
    pair_support: u64,
    pair_units: u64,
}

impl Side {
    fn local_nontrivial(&self) -> bool {
        !self.local_zero && !self.local_whole
    }
}

/// A vertex with its position in the case analysis precomputed.
#[derive(Clone, Debug)]
pub struct PreparedVertex(Shape);

#[derive(Clone, Debug)]
enum Shape {
    A,
    B,
    D,
    U,
    V,
    C(Side),
    W(Side),
}

impl Shape {
    fn rank(&self) -> u8 {
        match self {
            Shape::A => 0,
            Shape::B => 1,
            Shape::D => 2,
            Shape::U => 3,
            Shape::V => 4,
            Shape::C(_) => 5,
            Shape::W(_) => 6,
        }
    }
}

struct SplitModel {
    field: usize,
    local: usize,
    rest: Vec<usize>,
    rest_ring: ProductRing,
    rest_nil: Ideal,
    rest_is_field: bool,
    /// Indexed by a mask `M` over `R3` factors: some non-trivial ideal of
    /// `R3` is whole on every factor in `M`.
    minus_by_mask: Vec<bool>,
    /// Some non-trivial ideal of `R3` is zero outside `M`.
    plus_by_mask: Vec<bool>,
}

enum Model {
    Reduced,
    Split(Box<SplitModel>),
}

/// Closed-form evaluator for one ring.
pub struct FormulaEngine<'r> {
    ring: &'r ProductRing,
    model: Model,
}

impl<'r> FormulaEngine<'r> {
    pub fn new(ring: &'r ProductRing) -> Result<Self, FormulaError> {
        if !is_connected_predicate(ring) {
            return Err(FormulaError::Disconnected);
        }
        let model = match ring.arrangement() {
            Arrangement::Reduced => Model::Reduced,
            Arrangement::Unclassified => return Err(FormulaError::Unclassified),
            Arrangement::Split(split) => {
                if split.rest.len() > MAX_REST_FACTORS {
                    return Err(FormulaError::TooManyFactors(split.rest.len()));
                }
                let rest_ring = ring.sub_product(&split.rest)?;
                let signatures: HashSet<(u64, u64)> = rest_ring
                    .vertices()
                    .iter()
                    .map(|j| (rest_ring.support_mask(j), rest_ring.unit_mask(j)))
                    .collect();
                let masks = 1usize << split.rest.len();
                let minus_by_mask = (0..masks as u64)
                    .map(|m| signatures.iter().any(|&(_, units)| m & units == m))
                    .collect();
                let plus_by_mask = (0..masks as u64)
                    .map(|m| signatures.iter().any(|&(support, _)| support & m == support))
                    .collect();
                Model::Split(Box::new(SplitModel {
                    field: split.field,
                    local: split.local,
                    rest: split.rest.clone(),
                    rest_nil: rest_ring.nilradical(),
                    rest_is_field: rest_ring.is_field(),
                    rest_ring,
                    minus_by_mask,
                    plus_by_mask,
                }))
            }
        };
        Ok(FormulaEngine { ring, model })
    }

    pub fn ring(&self) -> &ProductRing {
        self.ring
    }

    pub fn is_reduced_model(&self) -> bool {
        matches!(self.model, Model::Reduced)
    }

    fn check_vertex(&self, v: &Ideal) -> Result<(), FormulaError> {
        if self.ring.is_trivial(v) {
            Err(FormulaError::TrivialIdeal)
        } else {
            Ok(())
        }
    }

    fn split(&self) -> Result<&SplitModel, FormulaError> {
        match &self.model {
            Model::Split(m) => Ok(m),
            Model::Reduced => Err(FormulaError::Reduced),
        }
    }

    fn shape(&self, m: &SplitModel, v: &Ideal) -> Shape {
        let local_ring = self.ring.component(m.local);
        let rest = self.ring.restrict(v, &m.rest);
        let local_zero = v.parts[m.local] == 0;
        let local_whole = v.parts[m.local] == local_ring.whole_ideal();
        let rest_support = m.rest_ring.support_mask(&rest);
        let rest_units = m.rest_ring.unit_mask(&rest);
        let side = Side {
            local: v.parts[m.local],
            local_zero,
            local_whole,
            rest_zero: rest_support == 0,
            rest_whole: rest_units == m.rest_ring.full_mask(),
            rest_support,
            rest_units,
            pair_support: (rest_support << 1) | u64::from(!local_zero),
            pair_units: (rest_units << 1) | u64::from(local_whole),
            rest,
        };
        let field_full = v.parts[m.field] != 0;
        match (field_full, side.local_whole, side.local_zero, side.rest_whole, side.rest_zero) {
            (true, true, _, _, true) => Shape::A,
            (true, _, true, true, _) => Shape::B,
            (true, ..) => Shape::C(side),
            (false, true, _, true, _) => Shape::D,
            (false, true, _, _, true) => Shape::U,
            (false, _, true, true, _) => Shape::V,
            (false, ..) => Shape::W(side),
        }
    }

    pub fn classify_vertex(&self, v: &Ideal) -> Result<VertexClass, FormulaError> {
        self.check_vertex(v)?;
        let m = match &self.model {
            Model::Reduced => {
                let support = (0..self.ring.len()).filter(|&i| v.parts[i] != 0).collect();
                return Ok(VertexClass::Support { support });
            }
            Model::Split(m) => m,
        };
        Ok(match self.shape(m, v) {
            Shape::A => VertexClass::FieldAndLocal,
            Shape::B => VertexClass::FieldAndRest,
            Shape::D => VertexClass::LocalAndRest,
            Shape::U => VertexClass::LocalOnly,
            Shape::V => VertexClass::RestOnly,
            Shape::C(s) => VertexClass::FieldFull { local: s.local, rest: s.rest },
            Shape::W(s) => VertexClass::FieldZero { local: s.local, rest: s.rest },
        })
    }

    /// `C⁻_{R3}(I3, K3)` is non-empty.
    #[cfg(test)]
    fn minus(&self, m: &SplitModel, i: &Ideal, k: &Ideal) -> bool {
        m.minus_by_mask[(m.rest_ring.support_mask(i) | m.rest_ring.support_mask(k)) as usize]
    }

    /// `C⁺_{R3}(I3, K3)` is non-empty.
    #[cfg(test)]
    fn plus(&self, m: &SplitModel, i: &Ideal, k: &Ideal) -> bool {
        m.plus_by_mask[(m.rest_ring.unit_mask(i) & m.rest_ring.unit_mask(k)) as usize]
    }

    /// `C⁻_{R3}(I3)` is non-empty.
    fn minus_strict(m: &SplitModel, s: &Side) -> bool {
        m.minus_by_mask[s.rest_support as usize]
    }

    /// `C⁺_{R3}(I3)` is non-empty.
    fn plus_strict(m: &SplitModel, s: &Side) -> bool {
        m.plus_by_mask[s.rest_units as usize]
    }

    /// `C⁻_{R3}(I3, K3)` is non-empty, or both are zero so that the zero
    /// ideal of `R3` serves as witness.
    fn minus_witness(m: &SplitModel, s: &Side, t: &Side) -> bool {
        m.minus_by_mask[(s.rest_support | t.rest_support) as usize] || (s.rest_zero && t.rest_zero)
    }

    /// `C⁺_{R3}(I3, K3)` is non-empty, or both are the whole of `R3`.
    fn plus_witness(m: &SplitModel, s: &Side, t: &Side) -> bool {
        m.plus_by_mask[(s.rest_units & t.rest_units) as usize] || (s.rest_whole && t.rest_whole)
    }

    fn minus_one(m: &SplitModel, s: &Side) -> bool {
        Self::minus_strict(m, s) || s.rest_zero
    }

    fn plus_one(m: &SplitModel, s: &Side) -> bool {
        Self::plus_strict(m, s) || s.rest_whole
    }

    /// `I2 x I3` contains a `K2 x K3`-regular element in `R2 x R3`.
    fn pair_contains_regular(s: &Side, t: &Side) -> bool {
        t.pair_support & !s.pair_units == 0
    }

    /// Adjacent in the regular graph of `R2 x R3`.
    fn pair_adjacent(s: &Side, t: &Side) -> bool {
        let same = s.local == t.local && s.rest == t.rest;
        !same && (Self::pair_contains_regular(s, t) || Self::pair_contains_regular(t, s))
    }

    /// Precomputes a vertex's position for repeated queries.
    pub fn prepare(&self, v: &Ideal) -> Result<PreparedVertex, FormulaError> {
        self.check_vertex(v)?;
        let m = self.split()?;
        Ok(PreparedVertex(self.shape(m, v)))
    }

    pub fn formula_distance(&self, i: &Ideal, j: &Ideal) -> Result<DistanceValue, FormulaError> {
        self.distance_with_rule(i, j).map(|(v, _)| v)
    }

    /// Distance between two distinct vertices of a non-reduced ring, with
    /// the rule that produced it.
    pub fn distance_with_rule(&self, i: &Ideal, j: &Ideal) -> Result<(DistanceValue, DistanceRule), FormulaError> {
        let (x, y) = (self.prepare(i)?, self.prepare(j)?);
        if i == j {
            return Err(FormulaError::SameVertex);
        }
        Ok(self.prepared_distance(&x, &y))
    }

    /// As [`FormulaEngine::distance_with_rule`] for two distinct prepared
    /// vertices.
    pub fn prepared_distance(&self, x: &PreparedVertex, y: &PreparedVertex) -> (DistanceValue, DistanceRule) {
        let m = match &self.model {
            Model::Split(m) => m,
            Model::Reduced => unreachable!("prepared vertices come from a split model"),
        };
        let (mut x, mut y) = (&x.0, &y.0);
        if x.rank() > y.rank() {
            std::mem::swap(&mut x, &mut y);
        }
        use DistanceRule::*;
        use Shape::*;
        let exact = |d: u32, rule| (DistanceValue::Exact(d), rule);
        match (x, y) {
            (A, B) | (A, D) | (B, D) | (U, V) => exact(2, BasicVertices),
            (A, U) | (B, V) | (D, U) | (D, V) | (D, W(_)) => exact(1, BasicVertices),
            (A, V) | (B, U) => exact(3, BasicVertices),
            (A, C(s)) => exact(if s.rest_zero || s.local_whole { 1 } else { 2 }, BasicVertices),
            (B, C(s)) => exact(if !s.local_zero && !s.rest_whole { 2 } else { 1 }, BasicVertices),
            (U, W(s)) => exact(if !s.local_whole && !s.rest_zero { 2 } else { 1 }, BasicVertices),
            (V, W(s)) => exact(if !s.local_zero && !s.rest_whole { 2 } else { 1 }, BasicVertices),
            (U, C(s)) => {
                let d = if s.local_whole {
                    1
                } else if Self::minus_one(m, s) {
                    2
                } else {
                    3
                };
                exact(d, AgainstBasic)
            }
            (V, C(s)) => {
                let d = if s.rest_whole {
                    1
                } else if s.local_zero || Self::plus_one(m, s) {
                    2
                } else {
                    3
                };
                exact(d, AgainstBasic)
            }
            (D, C(s)) => {
                let d = if s.local_whole || s.rest_whole || Self::plus_one(m, s) {
                    2
                } else if s.local_zero || s.rest_zero || Self::minus_one(m, s) {
                    3
                } else {
                    4
                };
                exact(d, AgainstBasic)
            }
            (A, W(s)) => {
                let d = if s.rest_zero {
                    1
                } else if s.local_whole || Self::minus_one(m, s) {
                    2
                } else {
                    3
                };
                exact(d, AgainstBasic)
            }
            (B, W(s)) => {
                let d = if s.local_zero {
                    1
                } else if Self::plus_one(m, s) {
                    2
                } else {
                    3
                };
                exact(d, AgainstBasic)
            }
            (C(s), C(t)) => {
                let one = (s.local_zero && s.rest_zero) || (t.local_zero && t.rest_zero) || Self::pair_adjacent(s, t);
                exact(if one { 1 } else { 2 }, SameSide)
            }
            (W(s), W(t)) => {
                let one =
                    (s.local_whole && s.rest_whole) || (t.local_whole && t.rest_whole) || Self::pair_adjacent(s, t);
                exact(if one { 1 } else { 2 }, SameSide)
            }
            (C(s), W(t)) => {
                if Self::pair_contains_regular(s, t) {
                    return exact(1, CrossAdjacent);
                }
                let common = (s.local_zero && t.local_zero)
                    || (s.local_whole && t.local_whole)
                    || Self::minus_witness(m, s, t)
                    || Self::plus_witness(m, s, t);
                if common {
                    return exact(2, CrossCommonNeighbour);
                }
                let isolated = s.local_nontrivial()
                    && t.local_nontrivial()
                    && !(Self::plus_one(m, s)
                        || Self::minus_one(m, s)
                        || Self::plus_one(m, t)
                        || Self::minus_one(m, t));
                if isolated {
                    exact(5, CrossIsolated)
                } else {
                    (DistanceValue::Candidates([3, 4]), CrossUndetermined)
                }
            }
            _ => unreachable!("shape pairs are ordered by rank"),
        }
    }

    pub fn formula_eccentricity(&self, v: &Ideal) -> Result<EccentricityValue, FormulaError> {
        self.eccentricity_with_rule(v).map(|(e, _)| e)
    }

    pub fn eccentricity_with_rule(&self, v: &Ideal) -> Result<(EccentricityValue, EccentricityRule), FormulaError> {
        self.check_vertex(v)?;
        if self.ring.n_fields() >= 3 {
            return Ok((EccentricityValue::Exact(3), EccentricityRule::ManyFields));
        }
        Ok(self.prepared_eccentricity(&self.prepare(v)?))
    }

    pub fn prepared_eccentricity(&self, v: &PreparedVertex) -> (EccentricityValue, EccentricityRule) {
        let exact = |e: u32, rule| (EccentricityValue::Exact(e), rule);
        let n_fields = self.ring.n_fields();
        let m = match &self.model {
            Model::Split(m) if n_fields < 3 => m,
            _ => return exact(3, EccentricityRule::ManyFields),
        };
        let two = n_fields == 2;
        // Beyond three, the diameter bounds the eccentricity.
        let not_three = if self.formula_diameter() == 4 {
            EccentricityValue::Exact(4)
        } else {
            EccentricityValue::Unknown(UnknownReason::ExceedsThree)
        };
        match &v.0 {
            Shape::A | Shape::B | Shape::U | Shape::V => exact(3, EccentricityRule::BasicVertices),
            Shape::D => exact(if two { 3 } else { 4 }, EccentricityRule::BasicVertices),
            Shape::C(s) => {
                let rule = EccentricityRule::FieldFull;
                if s.local_whole {
                    exact(3, rule)
                } else if s.rest_zero {
                    let three = two && (!m.rest_is_field || s.local_zero);
                    exact(if three { 3 } else { 4 }, rule)
                } else if s.local_zero {
                    // rest non-trivial here
                    let inside_nil = m.rest_ring.is_subset(&s.rest, &m.rest_nil);
                    exact(if two || !inside_nil { 3 } else { 4 }, rule)
                } else if s.rest_whole {
                    exact(3, rule)
                } else if !two {
                    if Self::plus_strict(m, s) {
                        exact(3, rule)
                    } else {
                        (not_three, rule)
                    }
                } else {
                    match self.isolated_rest_pattern(m, &s.rest, true) {
                        None => (EccentricityValue::Unknown(UnknownReason::ArrangementMismatch), rule),
                        Some(true) => (not_three, rule),
                        Some(false) => exact(3, rule),
                    }
                }
            }
            Shape::W(s) => {
                let rule = EccentricityRule::FieldZero;
                if s.local_zero {
                    exact(3, rule)
                } else if s.rest_whole {
                    // local non-trivial here
                    exact(if two && !m.rest_is_field { 3 } else { 4 }, rule)
                } else if s.local_whole {
                    let three = two || Self::minus_strict(m, s);
                    exact(if three { 3 } else { 4 }, rule)
                } else if s.rest_zero {
                    exact(3, rule)
                } else if !two {
                    if Self::minus_strict(m, s) {
                        exact(3, rule)
                    } else {
                        (not_three, rule)
                    }
                } else {
                    match self.isolated_rest_pattern(m, &s.rest, false) {
                        None => (EccentricityValue::Unknown(UnknownReason::ArrangementMismatch), rule),
                        Some(true) => (not_three, rule),
                        Some(false) => exact(3, rule),
                    }
                }
            }
        }
    }

    /// With two fields, `R3 = T3 x T4 x ...` with `T3` the second field. The
    /// exceptional `R3` ideals are `0 x Q4 x ...` (for `C`, `field_zero =
    /// true`) or `T3 x Q4 x ...` (for `W`) with every `Qi` non-trivial.
    /// `None` when `R3` does not lead with a field.
    fn isolated_rest_pattern(&self, m: &SplitModel, rest: &Ideal, field_zero: bool) -> Option<bool> {
        let lead = m.rest_ring.component(0);
        if !lead.is_field() {
            return None;
        }
        let lead_ok = if field_zero {
            rest.parts[0] == 0
        } else {
            rest.parts[0] == lead.whole_ideal()
        };
        let others_ok = (1..m.rest_ring.len()).all(|k| !m.rest_ring.component(k).is_trivial_ideal(rest.parts[k]));
        Some(lead_ok && others_ok)
    }

    /// Five, four or three for one, two, or at least three field factors.
    pub fn formula_diameter(&self) -> u32 {
        match self.ring.n_fields() {
            1 => 5,
            2 => 4,
            _ => 3,
        }
    }

    pub fn formula_radius(&self) -> u32 {
        3
    }

    pub fn formula_center(&self) -> CenterFormula {
        let vertices = self.ring.vertices();
        let m = match &self.model {
            Model::Reduced => {
                return CenterFormula {
                    case: CenterCase::Reduced,
                    vertices,
                }
            }
            Model::Split(m) => m,
        };
        let n_fields = self.ring.n_fields();
        if n_fields >= 3 {
            return CenterFormula {
                case: CenterCase::ManyFields,
                vertices,
            };
        }
        if n_fields == 1 {
            let whole_local = self.ring.component(m.local).whole_ideal();
            let x: BTreeSet<Ideal> = vertices
                .iter()
                .filter(|v| v.parts[m.field] != 0)
                .filter(|v| {
                    let rest = self.ring.restrict(v, &m.rest);
                    v.parts[m.local] == whole_local || !m.rest_ring.is_subset(&rest, &m.rest_nil)
                })
                .cloned()
                .collect();
            let mut center: BTreeSet<Ideal> = x.iter().map(|v| self.ring.complement(v)).collect();
            center.extend(x);
            return CenterFormula {
                case: CenterCase::SingleField,
                vertices: center.into_iter().collect(),
            };
        }
        if self.ring.max_ideal_count() == 3 {
            return CenterFormula {
                case: CenterCase::TwoFieldsThreeFactors,
                vertices,
            };
        }
        let second_field = m.rest[0];
        let tail = &m.rest[1..];
        let nontrivial = |v: &Ideal, k: usize| !self.ring.component(k).is_trivial_ideal(v.parts[k]);
        let excluded = |v: &Ideal| {
            let middle = nontrivial(v, m.local) && tail.iter().all(|&k| nontrivial(v, k));
            let first = v.parts[m.field] != 0 && v.parts[second_field] == 0;
            let second = v.parts[m.field] == 0 && v.parts[second_field] != 0;
            middle && (first || second)
        };
        CenterFormula {
            case: CenterCase::TwoFieldsMoreFactors,
            vertices: vertices.into_iter().filter(|v| !excluded(v)).collect(),
        }
    }

    /// Distance in a reduced ring from supports alone: one for strictly
    /// nested supports, two when the supports meet or miss some factor
    /// together, three otherwise.
    pub fn reduced_distance(&self, i: &Ideal, j: &Ideal) -> Result<u32, FormulaError> {
        reduced_distance(self.ring, i, j)
    }
}

/// See [`FormulaEngine::reduced_distance`].
pub fn reduced_distance(ring: &ProductRing, i: &Ideal, j: &Ideal) -> Result<u32, FormulaError> {
    if !ring.is_reduced() {
        return Err(FormulaError::NotReduced);
    }
    if ring.len() < 3 {
        return Err(FormulaError::TooFewComponents);
    }
    if ring.is_trivial(i) || ring.is_trivial(j) {
        return Err(FormulaError::TrivialIdeal);
    }
    if i == j {
        return Err(FormulaError::SameVertex);
    }
    let (a, b) = (ring.support_mask(i), ring.support_mask(j));
    Ok(if a & b == a || a & b == b {
        1
    } else if a & b != 0 || (a | b) != ring.full_mask() {
        2
    } else {
        3
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regular::{c_minus, c_plus, Route};
    use crate::ring::LocalRing;

    fn ring(parts: &[&str]) -> ProductRing {
        ProductRing::new(
            parts
                .iter()
                .map(|p| match *p {
                    "F2" => LocalRing::prime_field(2).unwrap(),
                    "F3" => LocalRing::prime_field(3).unwrap(),
                    "F5" => LocalRing::prime_field(5).unwrap(),
                    "F7" => LocalRing::prime_field(7).unwrap(),
                    "Z4" => LocalRing::integers_mod(4).unwrap(),
                    "Z9" => LocalRing::integers_mod(9).unwrap(),
                    "S" => LocalRing::square_zero(2, 2).unwrap(),
                    other => panic!("unknown {other}"),
                })
                .collect(),
        )
        .unwrap()
    }

    fn id(parts: &[usize]) -> Ideal {
        Ideal::new(parts.to_vec())
    }

    #[test]
    fn classification_examples() {
        let r = ring(&["F2", "Z4", "F3"]);
        let e = FormulaEngine::new(&r).unwrap();
        assert_eq!(e.classify_vertex(&id(&[0, 2, 1])).unwrap(), VertexClass::LocalAndRest);
        assert_eq!(
            e.classify_vertex(&id(&[1, 1, 0])).unwrap(),
            VertexClass::FieldFull { local: 1, rest: id(&[0]) }
        );
        let r = ring(&["F2", "F3", "F5"]);
        let e = FormulaEngine::new(&r).unwrap();
        assert_eq!(
            e.classify_vertex(&id(&[1, 0, 1])).unwrap(),
            VertexClass::Support { support: vec![0, 2] }
        );
        assert!(matches!(e.classify_vertex(&r.zero_ideal()), Err(FormulaError::TrivialIdeal)));
    }

    #[test]
    fn classification_is_total_on_split_rings() {
        for parts in [&["F2", "Z4", "Z4"][..], &["F2", "Z4", "F3", "Z9"], &["Z4", "F2", "S"]] {
            let r = ring(parts);
            let e = FormulaEngine::new(&r).unwrap();
            let mut fixed = std::collections::HashMap::new();
            for v in r.vertices() {
                let class = e.classify_vertex(&v).unwrap();
                if !matches!(class, VertexClass::FieldFull { .. } | VertexClass::FieldZero { .. }) {
                    assert!(fixed.insert(class.tag(), v).is_none());
                }
            }
            assert_eq!(fixed.len(), 5);
        }
    }

    #[test]
    fn basic_distances() {
        let r = ring(&["F2", "Z4", "F3"]);
        let e = FormulaEngine::new(&r).unwrap();
        let a = id(&[1, 2, 0]);
        let b = id(&[1, 0, 1]);
        let v = id(&[0, 0, 1]);
        let d = id(&[0, 2, 1]);
        assert_eq!(e.formula_distance(&a, &b).unwrap(), DistanceValue::Exact(2));
        assert_eq!(e.formula_distance(&a, &v).unwrap(), DistanceValue::Exact(3));
        assert_eq!(e.formula_distance(&d, &id(&[0, 1, 1])).unwrap(), DistanceValue::Exact(1));
        assert!(matches!(e.formula_distance(&a, &a), Err(FormulaError::SameVertex)));
    }

    #[test]
    fn isolated_pair_is_five_apart() {
        let r = ring(&["F2", "Z4", "Z4"]);
        let e = FormulaEngine::new(&r).unwrap();
        let (value, rule) = e.distance_with_rule(&id(&[1, 1, 1]), &id(&[0, 1, 1])).unwrap();
        assert_eq!(value, DistanceValue::Exact(5));
        assert_eq!(rule, DistanceRule::CrossIsolated);
    }

    /// With `R3` a field, `C⁻_{R3}((0))` is empty, yet `F1 x R2 x 0` joins
    /// `F1 x I2 x 0` to `0 x R2 x 0`; the zero ideal of `R3` is the witness.
    #[test]
    fn trivial_witness_when_rest_is_a_field() {
        let r = ring(&["F2", "Z4", "F3"]);
        let e = FormulaEngine::new(&r).unwrap();
        let rest = ring(&["F3"]);
        assert!(c_minus(&rest, &rest.zero_ideal(), &rest.zero_ideal(), Route::Elementwise).is_empty());
        let c = id(&[1, 1, 0]);
        let u = id(&[0, 2, 0]);
        assert_eq!(e.formula_distance(&c, &u).unwrap(), DistanceValue::Exact(2));
        let w = id(&[0, 1, 0]);
        assert_eq!(e.formula_distance(&c, &w).unwrap(), DistanceValue::Exact(2));
    }

    #[test]
    fn rest_tables_match_direct_scans() {
        for parts in [&["F2", "Z4", "Z4", "F3"][..], &["F2", "Z4", "S"], &["F2", "Z4", "F3", "F5"]] {
            let r = ring(parts);
            let e = FormulaEngine::new(&r).unwrap();
            let m = e.split().unwrap();
            let rest_ideals = m.rest_ring.ideals();
            for i in &rest_ideals {
                for k in &rest_ideals {
                    let minus = !c_minus(&m.rest_ring, i, k, Route::Elementwise).is_empty();
                    let plus = !c_plus(&m.rest_ring, i, k, Route::Elementwise).is_empty();
                    assert_eq!(e.minus(m, i, k), minus, "{parts:?} {i:?} {k:?}");
                    assert_eq!(e.plus(m, i, k), plus, "{parts:?} {i:?} {k:?}");
                }
            }
        }
    }

    #[test]
    fn eccentricity_examples() {
        let r = ring(&["F2", "Z4", "F3"]);
        let e = FormulaEngine::new(&r).unwrap();
        assert_eq!(e.formula_eccentricity(&id(&[1, 2, 0])).unwrap(), EccentricityValue::Exact(3));
        assert_eq!(e.formula_eccentricity(&id(&[1, 1, 0])).unwrap(), EccentricityValue::Exact(4));
        assert!(matches!(e.formula_eccentricity(&r.unit_ideal()), Err(FormulaError::TrivialIdeal)));
        let r = ring(&["F2", "Z4", "F3", "F5"]);
        let e = FormulaEngine::new(&r).unwrap();
        for v in r.vertices() {
            assert_eq!(e.formula_eccentricity(&v).unwrap(), EccentricityValue::Exact(3));
        }
    }

    #[test]
    fn diameter_and_radius() {
        let e = |p: &[&str]| {
            let r = ring(p);
            let e = FormulaEngine::new(&r).unwrap();
            (e.formula_diameter(), e.formula_radius())
        };
        assert_eq!(e(&["F2", "Z4", "Z4"]), (5, 3));
        assert_eq!(e(&["F2", "Z4", "F3"]), (4, 3));
        assert_eq!(e(&["F2", "F3", "F5"]), (3, 3));
    }

    #[test]
    fn center_cases() {
        let r = ring(&["F2", "F3", "F5"]);
        let e = FormulaEngine::new(&r).unwrap();
        assert_eq!(e.formula_center().vertices.len(), 6);
        let r = ring(&["F2", "Z4", "F3"]);
        let c = FormulaEngine::new(&r).unwrap().formula_center();
        assert_eq!(c.case, CenterCase::TwoFieldsThreeFactors);
        assert_eq!(c.vertices.len(), 10);
    }

    #[test]
    fn reduced_distances() {
        let r = ring(&["F2", "F3", "F5"]);
        assert_eq!(reduced_distance(&r, &id(&[1, 0, 0]), &id(&[1, 1, 0])).unwrap(), 1);
        assert_eq!(reduced_distance(&r, &id(&[1, 1, 0]), &id(&[0, 1, 1])).unwrap(), 2);
        assert_eq!(reduced_distance(&r, &id(&[1, 0, 0]), &id(&[0, 1, 1])).unwrap(), 3);
        let two = ring(&["F2", "F3"]);
        assert!(matches!(
            reduced_distance(&two, &id(&[1, 0]), &id(&[0, 1])),
            Err(FormulaError::TooFewComponents)
        ));
        let nonreduced = ring(&["F2", "Z4", "F3"]);
        assert!(matches!(
            reduced_distance(&nonreduced, &id(&[1, 0, 0]), &id(&[0, 1, 1])),
            Err(FormulaError::NotReduced)
        ));
    }

    #[test]
    fn refuses_disconnected_and_reduced() {
        assert!(matches!(FormulaEngine::new(&ring(&["Z4", "Z9", "Z4"])), Err(FormulaError::Disconnected)));
        assert!(matches!(FormulaEngine::new(&ring(&["F2", "Z4"])), Err(FormulaError::Disconnected)));
        let r = ring(&["F2", "F3", "F5"]);
        let e = FormulaEngine::new(&r).unwrap();
        assert!(matches!(
            e.formula_distance(&id(&[1, 0, 0]), &id(&[0, 1, 0])),
            Err(FormulaError::Reduced)
        ));
    }
}

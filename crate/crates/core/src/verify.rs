//! Ring families and the cross-check harness that compares closed forms and
//! structural properties against the digraph and breadth-first search.
//!
//! Disagreements are returned as [`DiscrepancyReport`] entries rather than
//! raised. An entry is a violation unless it reproduces a documented
//! [`OpenQuestion`], in which case it is marked known-open.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::closed_form::{
    reduced_distance, CenterCase, DistanceRule, DistanceValue, EccentricityRule, EccentricityValue, FormulaEngine,
    UnknownReason,
};
use crate::metrics::{all_pairs_distances, is_connected_predicate, MetricReport};
use crate::notation::{format_ideal, format_ring_spec};
use crate::regular::{build_digraph_with, ArcProvenance, BuildOptions, RegularDigraph};
use crate::ring::{ElementCap, LocalDescriptor, LocalRing, ProductRing, RingError};

/// Entries kept per (ring, check); further entries are only counted.
pub const ENTRY_LIMIT: usize = 25;

#[derive(Clone, Debug, Serialize)]
pub struct FamilyConfig {
    pub seed: u64,
    pub max_components: usize,
    #[serde(serialize_with = "serialize_descriptors")]
    pub allowed_locals: Vec<LocalDescriptor>,
    pub max_vertices: usize,
    /// Rings drawn in addition to the regression set.
    pub count: usize,
}

fn serialize_descriptors<S: serde::Serializer>(ds: &[LocalDescriptor], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(ds.iter().map(|d| d.to_string()))
}

pub fn default_locals() -> Vec<LocalDescriptor> {
    use LocalDescriptor::*;
    vec![
        PrimeField { p: 2 },
        PrimeField { p: 3 },
        PrimeField { p: 5 },
        PrimeField { p: 7 },
        IntegersMod { p: 2, k: 2 },
        IntegersMod { p: 2, k: 3 },
        IntegersMod { p: 3, k: 2 },
        TruncatedPoly { p: 2, k: 2 },
        TruncatedPoly { p: 2, k: 3 },
        TruncatedPoly { p: 3, k: 2 },
        SquareZero { p: 2, vars: 2 },
    ]
}

impl Default for FamilyConfig {
    fn default() -> Self {
        FamilyConfig {
            seed: 0,
            max_components: 5,
            allowed_locals: default_locals(),
            max_vertices: 3000,
            count: 32,
        }
    }
}

#[derive(Debug, Error)]
pub enum FamilyError {
    #[error("no local rings allowed")]
    NoLocals,
    #[error("at least two components are needed, max_components is {0}")]
    TooFewComponents(usize),
    #[error("max_vertices {cap} is below {needed}, the smallest three-factor vertex count")]
    VertexCapTooSmall { cap: usize, needed: usize },
    #[error("could only draw {found} of {wanted} distinct rings under the configuration")]
    Exhausted { wanted: usize, found: usize },
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// One ring of a family.
#[derive(Clone, Debug)]
pub struct FamilyMember {
    pub spec: String,
    pub descriptors: Vec<LocalDescriptor>,
    pub ring: ProductRing,
    pub regression: bool,
}

/// The rings every family starts with.
pub fn regression_set() -> Vec<Vec<LocalDescriptor>> {
    use LocalDescriptor::*;
    let f = |p| PrimeField { p };
    let z = |p, k| IntegersMod { p, k };
    vec![
        vec![f(2), z(2, 2), z(2, 2)],
        vec![f(2), z(2, 2), f(3)],
        vec![f(2), f(3), f(5)],
        vec![f(2), z(2, 2), f(3), z(3, 2)],
        vec![f(2), SquareZero { p: 2, vars: 2 }, f(3)],
    ]
}

#[derive(Clone, Copy, Debug)]
enum Target {
    SingleField,
    TwoFields,
    ManyFields,
    Reduced,
    Disconnected,
}

const TARGET_CYCLE: [Target; 8] = [
    Target::SingleField,
    Target::TwoFields,
    Target::ManyFields,
    Target::Reduced,
    Target::SingleField,
    Target::TwoFields,
    Target::ManyFields,
    Target::Disconnected,
];

const DRAWS_PER_TARGET: usize = 200;

struct Pool {
    fields: Vec<(LocalDescriptor, Arc<LocalRing>)>,
    others: Vec<(LocalDescriptor, Arc<LocalRing>)>,
}

impl Pool {
    fn draw(&self, rng: &mut ChaCha8Rng, target: Target, max_components: usize) -> Option<Vec<usize>> {
        let (nf, no) = (self.fields.len(), self.others.len());
        let range = |rng: &mut ChaCha8Rng, lo: usize| (lo <= max_components).then(|| rng.gen_range(lo..=max_components));
        let (fields, others) = match target {
            Target::SingleField => (1, range(rng, 3)? - 1),
            Target::TwoFields => (2, range(rng, 3)? - 2),
            Target::ManyFields => {
                let m = range(rng, 4)?;
                let f = rng.gen_range(3..m);
                (f, m - f)
            }
            Target::Reduced => (range(rng, 3)?, 0),
            Target::Disconnected => {
                if no > 0 && rng.gen_bool(0.5) {
                    (0, range(rng, 2)?)
                } else {
                    let f = rng.gen_range(0..=2);
                    (f, 2 - f)
                }
            }
        };
        if (fields > 0 && nf == 0) || (others > 0 && no == 0) {
            return None;
        }
        let mut picks: Vec<usize> = (0..fields).map(|_| rng.gen_range(0..nf)).collect();
        picks.extend((0..others).map(|_| nf + rng.gen_range(0..no)));
        picks.shuffle(rng);
        Some(picks)
    }

    fn entry(&self, i: usize) -> &(LocalDescriptor, Arc<LocalRing>) {
        if i < self.fields.len() {
            &self.fields[i]
        } else {
            &self.others[i - self.fields.len()]
        }
    }
}

fn vertex_count(counts: impl Iterator<Item = usize>) -> usize {
    counts.fold(1usize, |acc, c| acc.saturating_mul(c)).saturating_sub(2)
}

/// Deterministic in `cfg`: the regression set followed by `cfg.count`
/// distinct random products cycling through one field, two fields, three
/// or more fields with a non-field, reduced, and disconnected rings.
pub fn generate_family(cfg: &FamilyConfig) -> Result<Vec<FamilyMember>, FamilyError> {
    let cap = ElementCap::from_env();
    let mut members = Vec::new();
    let mut seen = HashSet::new();
    for descriptors in regression_set() {
        let ring = crate::notation::build_ring(&descriptors, cap)?;
        let spec = format_ring_spec(&descriptors);
        seen.insert(spec.clone());
        members.push(FamilyMember {
            spec,
            descriptors,
            ring,
            regression: true,
        });
    }
    if cfg.count == 0 {
        return Ok(members);
    }
    if cfg.allowed_locals.is_empty() {
        return Err(FamilyError::NoLocals);
    }
    if cfg.max_components < 2 {
        return Err(FamilyError::TooFewComponents(cfg.max_components));
    }
    let mut pool = Pool {
        fields: Vec::new(),
        others: Vec::new(),
    };
    for d in &cfg.allowed_locals {
        let ring = Arc::new(LocalRing::new(d, cap)?);
        if ring.is_field() {
            pool.fields.push((d.clone(), ring));
        } else {
            pool.others.push((d.clone(), ring));
        }
    }
    let smallest = pool
        .fields
        .iter()
        .chain(&pool.others)
        .map(|(_, r)| r.ideal_count())
        .min()
        .expect("non-empty pool");
    let needed = vertex_count(std::iter::repeat_n(smallest, 3));
    if cfg.max_vertices < needed {
        return Err(FamilyError::VertexCapTooSmall {
            cap: cfg.max_vertices,
            needed,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for slot in 0..cfg.count {
        let mut found = None;
        'targets: for shift in 0..TARGET_CYCLE.len() {
            let target = TARGET_CYCLE[(slot + shift) % TARGET_CYCLE.len()];
            for _ in 0..DRAWS_PER_TARGET {
                let Some(picks) = pool.draw(&mut rng, target, cfg.max_components) else {
                    break;
                };
                let vertices = vertex_count(picks.iter().map(|&i| pool.entry(i).1.ideal_count()));
                if vertices > cfg.max_vertices {
                    continue;
                }
                let descriptors: Vec<LocalDescriptor> = picks.iter().map(|&i| pool.entry(i).0.clone()).collect();
                let spec = format_ring_spec(&descriptors);
                if seen.insert(spec.clone()) {
                    let ring = ProductRing::from_shared(picks.iter().map(|&i| pool.entry(i).1.clone()).collect())?;
                    found = Some(FamilyMember {
                        spec,
                        descriptors,
                        ring,
                        regression: false,
                    });
                    break 'targets;
                }
            }
        }
        match found {
            Some(member) => members.push(member),
            None => {
                return Err(FamilyError::Exhausted {
                    wanted: cfg.count,
                    found: slot,
                })
            }
        }
    }
    Ok(members)
}

/// Every check the harness runs, in execution order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckId {
    ConnectivityPredicate,
    ArcOracleEquivalence,
    ComponentwiseArcs,
    ArcTransitivity,
    FieldFactorNeighbours,
    NilpotentIffNoRegularSuccessor,
    EccentricityLowerBound,
    ComplementDuality,
    DistanceBasicVertices,
    DistanceSameSide,
    DistanceAgainstBasic,
    DistanceCross,
    ReducedModel,
    EccentricityBasicVertices,
    EccentricityFieldFull,
    EccentricityFieldZero,
    EccentricityManyFields,
    DiameterTrichotomy,
    RadiusThree,
    Center,
}

impl CheckId {
    pub const ALL: [CheckId; 20] = [
        CheckId::ConnectivityPredicate,
        CheckId::ArcOracleEquivalence,
        CheckId::ComponentwiseArcs,
        CheckId::ArcTransitivity,
        CheckId::FieldFactorNeighbours,
        CheckId::NilpotentIffNoRegularSuccessor,
        CheckId::EccentricityLowerBound,
        CheckId::ComplementDuality,
        CheckId::DistanceBasicVertices,
        CheckId::DistanceSameSide,
        CheckId::DistanceAgainstBasic,
        CheckId::DistanceCross,
        CheckId::ReducedModel,
        CheckId::EccentricityBasicVertices,
        CheckId::EccentricityFieldFull,
        CheckId::EccentricityFieldZero,
        CheckId::EccentricityManyFields,
        CheckId::DiameterTrichotomy,
        CheckId::RadiusThree,
        CheckId::Center,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckId::ConnectivityPredicate => "connectivity-predicate",
            CheckId::ArcOracleEquivalence => "arc-oracle-equivalence",
            CheckId::ComponentwiseArcs => "componentwise-arcs",
            CheckId::ArcTransitivity => "arc-transitivity",
            CheckId::FieldFactorNeighbours => "field-factor-neighbours",
            CheckId::NilpotentIffNoRegularSuccessor => "nilpotent-iff-no-regular-successor",
            CheckId::EccentricityLowerBound => "eccentricity-lower-bound",
            CheckId::ComplementDuality => "complement-duality",
            CheckId::DistanceBasicVertices => "distance-basic-vertices",
            CheckId::DistanceSameSide => "distance-same-side",
            CheckId::DistanceAgainstBasic => "distance-against-basic",
            CheckId::DistanceCross => "distance-cross",
            CheckId::ReducedModel => "reduced-model",
            CheckId::EccentricityBasicVertices => "eccentricity-basic-vertices",
            CheckId::EccentricityFieldFull => "eccentricity-field-full",
            CheckId::EccentricityFieldZero => "eccentricity-field-zero",
            CheckId::EccentricityManyFields => "eccentricity-many-fields",
            CheckId::DiameterTrichotomy => "diameter-trichotomy",
            CheckId::RadiusThree => "radius-three",
            CheckId::Center => "center",
        }
    }

    /// The statement the check tests.
    pub fn statement(self) -> &'static str {
        match self {
            CheckId::ConnectivityPredicate => {
                "the graph is connected iff there are at least three maximal ideals and a field factor"
            }
            CheckId::ArcOracleEquivalence => "support-rule arcs equal the elementwise regularity oracle",
            CheckId::ComponentwiseArcs => "I -> J iff each factor of I contains a regular element on that factor of J",
            CheckId::ArcTransitivity => "I -> J -> K with I != K implies I -> K",
            CheckId::FieldFactorNeighbours => "with a field factor, C+(I) or C-(I) is non-empty for every ideal I",
            CheckId::NilpotentIffNoRegularSuccessor => "C+(I) is empty iff I lies in the nilradical",
            CheckId::EccentricityLowerBound => "every eccentricity in a connected graph is at least three",
            CheckId::ComplementDuality => {
                "d(I,J) = d(I^c,J^c), e(I) = e(I^c), I -> J iff J^c -> I^c, and the center is closed under complement"
            }
            CheckId::DistanceBasicVertices => "distances among a, b, d, u, v and from them to their adjacent families",
            CheckId::DistanceSameSide => "distances within the C family and within the W family",
            CheckId::DistanceAgainstBasic => "distances from u, v, d to C and from a, b to W",
            CheckId::DistanceCross => "distances between the C and W families, including the distance-five branch",
            CheckId::ReducedModel => {
                "for products of fields, arcs are strict support containments and distances follow supports"
            }
            CheckId::EccentricityBasicVertices => "eccentricities of a, b, d, u, v",
            CheckId::EccentricityFieldFull => "eccentricities of the C family",
            CheckId::EccentricityFieldZero => "eccentricities of the W family",
            CheckId::EccentricityManyFields => "with three or more field factors every eccentricity is three",
            CheckId::DiameterTrichotomy => "diameter is 5, 4, 3 for one, two, at least three field factors",
            CheckId::RadiusThree => "the radius of a connected graph is three",
            CheckId::Center => "the center equals the closed-form center",
        }
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Documented questions about the closed forms. Known-open entries name one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OpenQuestion {
    /// With two fields and three factors every vertex is stated central,
    /// while `F1 x I2 x 0` with `I2` non-trivial has eccentricity four.
    CenterTwoFieldsThreeFactors,
    /// The exceptional two-field pattern names the factor `i != 4` where
    /// the field sits at index three.
    ExceptionalPatternIndex,
    /// Whether `C⁻((0))` contains every non-trivial ideal.
    ZeroIdealMinusConvention,
    /// The `W` rule with `K2 = R2` is not the complement image of the `C`
    /// rule with `I3 = 0`.
    FieldZeroMirror,
    /// Connectivity from three maximal ideals and a field factor.
    ConnectivitySufficiency,
}

impl OpenQuestion {
    pub fn name(self) -> &'static str {
        match self {
            OpenQuestion::CenterTwoFieldsThreeFactors => "center-two-fields-three-factors",
            OpenQuestion::ExceptionalPatternIndex => "exceptional-pattern-index",
            OpenQuestion::ZeroIdealMinusConvention => "zero-ideal-minus-convention",
            OpenQuestion::FieldZeroMirror => "field-zero-mirror",
            OpenQuestion::ConnectivitySufficiency => "connectivity-sufficiency",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Severity {
    Violation,
    KnownOpen,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiscrepancyReport {
    pub ring: String,
    pub check: CheckId,
    pub subject: String,
    pub expected: String,
    pub observed: String,
    pub severity: Severity,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub open_question: Option<OpenQuestion>,
}

/// Per-check counts for one ring.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CheckSummary {
    pub cases: u64,
    pub violations: u64,
    pub known_open: u64,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "kebab-case", tag = "status")]
pub enum OracleStatus {
    Validated { pairs: u64 },
    Skipped { order: Option<u64>, cap: u64 },
    NotRequested,
}

#[derive(Clone, Debug, Serialize)]
pub struct RingOutcome {
    pub ring: String,
    pub vertices: usize,
    pub n_fields: usize,
    pub max_ideals: usize,
    pub predicate: bool,
    pub connected: bool,
    pub diameter: Option<u32>,
    pub radius: Option<u32>,
    pub oracle: OracleStatus,
    pub checks: BTreeMap<CheckId, CheckSummary>,
    pub discrepancies: Vec<DiscrepancyReport>,
}

impl RingOutcome {
    pub fn violations(&self) -> u64 {
        self.checks.values().map(|c| c.violations).sum()
    }

    pub fn known_open(&self) -> u64 {
        self.checks.values().map(|c| c.known_open).sum()
    }

    pub fn ran(&self, check: CheckId) -> bool {
        self.checks.get(&check).is_some_and(|c| c.cases > 0)
    }
}

#[derive(Clone, Debug, Default)]
pub struct CheckOptions {
    pub build: BuildOptions,
}

#[derive(Default)]
struct Tally {
    checks: BTreeMap<CheckId, CheckSummary>,
    entries: BTreeMap<CheckId, Vec<DiscrepancyReport>>,
}

impl Tally {
    fn case(&mut self, check: CheckId) {
        self.checks.entry(check).or_default().cases += 1;
    }

    fn cases(&mut self, check: CheckId, n: u64) {
        self.checks.entry(check).or_default().cases += n;
    }

    fn record(&mut self, entry: DiscrepancyReport) {
        let summary = self.checks.entry(entry.check).or_default();
        match entry.severity {
            Severity::Violation => summary.violations += 1,
            Severity::KnownOpen => summary.known_open += 1,
        }
        let list = self.entries.entry(entry.check).or_default();
        if list.len() < ENTRY_LIMIT {
            list.push(entry);
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        for (k, v) in other.checks {
            let s = self.checks.entry(k).or_default();
            s.cases += v.cases;
            s.violations += v.violations;
            s.known_open += v.known_open;
        }
        for (k, v) in other.entries {
            let list = self.entries.entry(k).or_default();
            let room = ENTRY_LIMIT.saturating_sub(list.len());
            list.extend(v.into_iter().take(room));
        }
        self
    }
}

struct Context<'a> {
    name: String,
    ring: &'a ProductRing,
    graph: &'a RegularDigraph,
    metrics: &'a MetricReport,
}

impl Context<'_> {
    fn label(&self, v: usize) -> String {
        format_ideal(self.ring, &self.graph.vertices()[v])
    }

    fn pair(&self, a: usize, b: usize) -> String {
        format!("{} | {}", self.label(a), self.label(b))
    }

    fn violation(&self, check: CheckId, subject: String, expected: impl ToString, observed: impl ToString) -> DiscrepancyReport {
        DiscrepancyReport {
            ring: self.name.clone(),
            check,
            subject,
            expected: expected.to_string(),
            observed: observed.to_string(),
            severity: Severity::Violation,
            open_question: None,
        }
    }

    fn bfs(&self, a: usize, b: usize) -> u32 {
        self.metrics.distance(a, b).expect("connected")
    }
}

fn show_distance(v: &DistanceValue) -> String {
    match v {
        DistanceValue::Exact(k) => k.to_string(),
        DistanceValue::Candidates(ks) => format!("{} or {}", ks[0], ks[1]),
    }
}

/// Runs every applicable check on one ring. Disconnected rings run only
/// the connectivity check.
pub fn cross_check(ring: &ProductRing, options: &CheckOptions) -> RingOutcome {
    let graph = build_digraph_with(ring, &options.build);
    let metrics = all_pairs_distances(&graph.underlying());
    let cx = Context {
        name: ring.to_string(),
        ring,
        graph: &graph,
        metrics: &metrics,
    };
    let mut tally = Tally::default();
    let predicate = is_connected_predicate(ring);
    let connected = metrics.connected() && !graph.is_empty();
    tally.case(CheckId::ConnectivityPredicate);
    if predicate != connected {
        tally.record(cx.violation(
            CheckId::ConnectivityPredicate,
            "ring".into(),
            if predicate { "connected" } else { "disconnected" },
            if connected { "connected" } else { "disconnected" },
        ));
    }
    let oracle = match graph.provenance() {
        ArcProvenance::SupportRule => OracleStatus::NotRequested,
        ArcProvenance::OracleSkipped { order, cap } => OracleStatus::Skipped {
            order: *order,
            cap: *cap,
        },
        ArcProvenance::OracleValidated { .. } => OracleStatus::Validated {
            pairs: (graph.len() * graph.len()) as u64,
        },
    };
    if connected && predicate {
        tally = tally.merge(structure_checks(&cx));
        tally = tally.merge(formula_checks(&cx));
    }
    let mut discrepancies: Vec<DiscrepancyReport> = tally.entries.into_values().flatten().collect();
    discrepancies.sort_by_key(|d| d.check);
    RingOutcome {
        ring: cx.name.clone(),
        vertices: graph.len(),
        n_fields: ring.n_fields(),
        max_ideals: ring.max_ideal_count(),
        predicate,
        connected,
        diameter: metrics.diameter(),
        radius: metrics.radius(),
        oracle,
        checks: tally.checks,
        discrepancies,
    }
}

fn structure_checks(cx: &Context) -> Tally {
    let mut t = Tally::default();
    let (ring, graph, metrics) = (cx.ring, cx.graph, cx.metrics);
    let n = graph.len();

    if let ArcProvenance::OracleValidated { mismatches } = graph.provenance() {
        t.cases(CheckId::ArcOracleEquivalence, (n * n) as u64);
        for &(s, d) in mismatches {
            t.record(cx.violation(
                CheckId::ArcOracleEquivalence,
                cx.pair(s, d),
                if graph.has_arc(s, d) { "no arc" } else { "arc" },
                if graph.has_arc(s, d) { "arc" } else { "no arc" },
            ));
        }
    }

    // Per-factor regularity tables from elementwise scans in each factor.
    let local: Vec<Vec<Vec<bool>>> = ring
        .components()
        .iter()
        .map(|c| {
            let k = c.ideal_count();
            (0..k).map(|i| (0..k).map(|j| c.contains_regular_element(i, j)).collect()).collect()
        })
        .collect();
    let vertices = graph.vertices();
    let pairwise = (0..n)
        .into_par_iter()
        .map(|s| {
            let mut t = Tally::default();
            let out_s = graph.successors(s);
            for d in 0..n {
                if d == s {
                    continue;
                }
                t.case(CheckId::ComponentwiseArcs);
                let expected = vertices[s]
                    .parts
                    .iter()
                    .zip(&vertices[d].parts)
                    .zip(&local)
                    .all(|((&a, &b), table)| table[a][b]);
                if expected != graph.has_arc(s, d) {
                    t.record(cx.violation(CheckId::ComponentwiseArcs, cx.pair(s, d), expected, !expected));
                }
            }
            for d in out_s.ones() {
                t.case(CheckId::ArcTransitivity);
                let mut missing = graph.successors(d).clone();
                missing.difference_with(out_s);
                missing.set(s, false);
                if let Some(k) = missing.ones().next() {
                    t.record(cx.violation(
                        CheckId::ArcTransitivity,
                        format!("{} -> {} -> {}", cx.label(s), cx.label(d), cx.label(k)),
                        "arc from first to last",
                        "no arc",
                    ));
                }
            }
            t
        })
        .reduce(Tally::default, Tally::merge);
    t = t.merge(pairwise);

    if ring.n_fields() > 0 {
        let signatures: HashSet<(u64, u64)> = vertices
            .iter()
            .map(|v| (ring.support_mask(v), ring.unit_mask(v)))
            .collect();
        for ideal in ring.ideals() {
            t.case(CheckId::FieldFactorNeighbours);
            let (support, units) = (ring.support_mask(&ideal), ring.unit_mask(&ideal));
            let minus = signatures.iter().any(|&(_, u)| support & u == support);
            let plus = signatures.iter().any(|&(s, _)| s & units == s);
            if !minus && !plus {
                let label = format_ideal(ring, &ideal);
                t.record(cx.violation(CheckId::FieldFactorNeighbours, label, "non-empty", "both empty"));
            }
        }
    }

    let nil = ring.nilradical();
    for (v, ideal) in vertices.iter().enumerate() {
        t.case(CheckId::NilpotentIffNoRegularSuccessor);
        let self_regular = ring.support_mask(ideal) & !ring.unit_mask(ideal) == 0;
        let plus_empty = graph.out_degree(v) == 0 && !self_regular;
        let nilpotent = ring.is_subset(ideal, &nil);
        if plus_empty != nilpotent {
            t.record(cx.violation(
                CheckId::NilpotentIffNoRegularSuccessor,
                cx.label(v),
                if nilpotent { "C+ empty" } else { "C+ non-empty" },
                if plus_empty { "C+ empty" } else { "C+ non-empty" },
            ));
        }
    }

    for v in 0..n {
        t.case(CheckId::EccentricityLowerBound);
        if metrics.eccentricity(v) < 3 {
            t.record(cx.violation(CheckId::EccentricityLowerBound, cx.label(v), ">= 3", metrics.eccentricity(v)));
        }
    }

    let complement: Vec<usize> = vertices
        .iter()
        .map(|v| graph.vertex_index(&ring.complement(v)).expect("complement of a vertex is a vertex"))
        .collect();
    let duality = (0..n)
        .into_par_iter()
        .map(|a| {
            let mut t = Tally::default();
            let ca = complement[a];
            for (b, &cb) in complement.iter().enumerate() {
                t.case(CheckId::ComplementDuality);
                if cx.bfs(a, b) != cx.bfs(ca, cb) {
                    t.record(cx.violation(
                        CheckId::ComplementDuality,
                        cx.pair(a, b),
                        format!("distance {}", cx.bfs(a, b)),
                        format!("complement distance {}", cx.bfs(ca, cb)),
                    ));
                }
                if a != b && graph.has_arc(a, b) != graph.has_arc(cb, ca) {
                    t.record(cx.violation(
                        CheckId::ComplementDuality,
                        cx.pair(a, b),
                        format!("arc {}", graph.has_arc(a, b)),
                        format!("reversed complement arc {}", graph.has_arc(cb, ca)),
                    ));
                }
            }
            if metrics.eccentricity(a) != metrics.eccentricity(ca) {
                t.record(cx.violation(
                    CheckId::ComplementDuality,
                    cx.label(a),
                    format!("eccentricity {}", metrics.eccentricity(a)),
                    format!("complement eccentricity {}", metrics.eccentricity(ca)),
                ));
            }
            if metrics.is_central(a) != metrics.is_central(ca) {
                t.record(cx.violation(CheckId::ComplementDuality, cx.label(a), "complement central", "not central"));
            }
            t
        })
        .reduce(Tally::default, Tally::merge);
    t.merge(duality)
}

fn distance_check(rule: DistanceRule) -> CheckId {
    match rule {
        DistanceRule::BasicVertices => CheckId::DistanceBasicVertices,
        DistanceRule::SameSide => CheckId::DistanceSameSide,
        DistanceRule::AgainstBasic => CheckId::DistanceAgainstBasic,
        DistanceRule::CrossAdjacent
        | DistanceRule::CrossCommonNeighbour
        | DistanceRule::CrossIsolated
        | DistanceRule::CrossUndetermined => CheckId::DistanceCross,
        DistanceRule::Support => CheckId::ReducedModel,
    }
}

fn eccentricity_check(rule: EccentricityRule) -> CheckId {
    match rule {
        EccentricityRule::ManyFields => CheckId::EccentricityManyFields,
        EccentricityRule::BasicVertices => CheckId::EccentricityBasicVertices,
        EccentricityRule::FieldFull => CheckId::EccentricityFieldFull,
        EccentricityRule::FieldZero => CheckId::EccentricityFieldZero,
    }
}

fn formula_checks(cx: &Context) -> Tally {
    let mut t = Tally::default();
    let (ring, graph, metrics) = (cx.ring, cx.graph, cx.metrics);
    let n = graph.len();
    let vertices = graph.vertices();
    let engine = match FormulaEngine::new(ring) {
        Ok(engine) => engine,
        Err(e) => {
            t.case(CheckId::DiameterTrichotomy);
            t.record(cx.violation(CheckId::DiameterTrichotomy, "ring".into(), "closed forms available", e));
            return t;
        }
    };

    if engine.is_reduced_model() {
        let pairs = (0..n)
            .into_par_iter()
            .map(|a| {
                let mut t = Tally::default();
                let da = ring.support_mask(&vertices[a]);
                for b in 0..n {
                    if a == b {
                        continue;
                    }
                    t.case(CheckId::ReducedModel);
                    let db = ring.support_mask(&vertices[b]);
                    let nested = da & db == db && da != db;
                    if nested != graph.has_arc(a, b) {
                        t.record(cx.violation(
                            CheckId::ReducedModel,
                            cx.pair(a, b),
                            format!("arc {nested}"),
                            format!("arc {}", graph.has_arc(a, b)),
                        ));
                    }
                    let formula = reduced_distance(ring, &vertices[a], &vertices[b]).expect("distinct vertices");
                    if formula != cx.bfs(a, b) {
                        t.record(cx.violation(CheckId::ReducedModel, cx.pair(a, b), formula, cx.bfs(a, b)));
                    }
                }
                t
            })
            .reduce(Tally::default, Tally::merge);
        t = t.merge(pairs);
    } else {
        let prepared: Vec<_> = vertices
            .iter()
            .map(|v| engine.prepare(v).expect("split model vertex"))
            .collect();
        let pairs = (0..n)
            .into_par_iter()
            .map(|a| {
                let mut t = Tally::default();
                for b in a + 1..n {
                    let (value, rule) = engine.prepared_distance(&prepared[a], &prepared[b]);
                    let check = distance_check(rule);
                    t.case(check);
                    let observed = cx.bfs(a, b);
                    if !value.admits(observed) {
                        t.record(cx.violation(check, cx.pair(a, b), show_distance(&value), observed));
                    }
                }
                t
            })
            .reduce(Tally::default, Tally::merge);
        t = t.merge(pairs);
    }

    for (v, ideal) in vertices.iter().enumerate() {
        let (value, rule) = engine.eccentricity_with_rule(ideal).expect("vertex");
        let check = eccentricity_check(rule);
        t.case(check);
        let observed = metrics.eccentricity(v);
        let ok = match value {
            EccentricityValue::Exact(e) => e == observed,
            EccentricityValue::Unknown(UnknownReason::ExceedsThree) => observed > 3,
            EccentricityValue::Unknown(UnknownReason::ArrangementMismatch) => false,
        };
        if !ok {
            let expected = match value {
                EccentricityValue::Exact(e) => e.to_string(),
                EccentricityValue::Unknown(UnknownReason::ExceedsThree) => "more than 3".into(),
                EccentricityValue::Unknown(UnknownReason::ArrangementMismatch) => "a closed form".into(),
            };
            t.record(cx.violation(check, cx.label(v), expected, observed));
        }
    }

    t.case(CheckId::DiameterTrichotomy);
    let diameter = metrics.diameter().expect("connected");
    if diameter != engine.formula_diameter() {
        t.record(cx.violation(CheckId::DiameterTrichotomy, "ring".into(), engine.formula_diameter(), diameter));
    }
    t.case(CheckId::RadiusThree);
    let radius = metrics.radius().expect("connected");
    if radius != engine.formula_radius() {
        t.record(cx.violation(CheckId::RadiusThree, "ring".into(), engine.formula_radius(), radius));
    }

    let center = engine.formula_center();
    let formula: BTreeSet<usize> = center
        .vertices
        .iter()
        .map(|v| graph.vertex_index(v).expect("center vertex"))
        .collect();
    let known_open = center.case == CenterCase::TwoFieldsThreeFactors;
    for v in 0..n {
        t.case(CheckId::Center);
        let (stated, actual) = (formula.contains(&v), metrics.is_central(v));
        if stated != actual {
            let mut entry = cx.violation(
                CheckId::Center,
                cx.label(v),
                if stated { "central" } else { "not central" },
                format!("eccentricity {}", metrics.eccentricity(v)),
            );
            if known_open && stated {
                entry.severity = Severity::KnownOpen;
                entry.open_question = Some(OpenQuestion::CenterTwoFieldsThreeFactors);
            }
            t.record(entry);
        }
    }
    t
}

/// Results for a whole family.
#[derive(Clone, Debug, Serialize)]
pub struct FamilyReport {
    pub config: FamilyConfig,
    pub rings: Vec<RingOutcome>,
    pub totals: Totals,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Totals {
    pub rings: usize,
    pub connected: usize,
    pub violations: u64,
    pub known_open: u64,
}

impl FamilyReport {
    pub fn is_clean(&self) -> bool {
        self.totals.violations == 0
    }

    pub fn checks_run(&self) -> BTreeSet<CheckId> {
        self.rings
            .iter()
            .flat_map(|r| r.checks.iter().filter(|(_, s)| s.cases > 0).map(|(&k, _)| k))
            .collect()
    }
}

/// Generates the family and checks its rings in parallel; output order
/// follows the family.
pub fn run_family(cfg: &FamilyConfig, options: &CheckOptions) -> Result<FamilyReport, FamilyError> {
    let family = generate_family(cfg)?;
    let rings: Vec<RingOutcome> = family.par_iter().map(|m| cross_check(&m.ring, options)).collect();
    let totals = Totals {
        rings: rings.len(),
        connected: rings.iter().filter(|r| r.connected).count(),
        violations: rings.iter().map(RingOutcome::violations).sum(),
        known_open: rings.iter().map(RingOutcome::known_open).sum(),
    };
    Ok(FamilyReport {
        config: cfg.clone(),
        rings,
        totals,
    })
}

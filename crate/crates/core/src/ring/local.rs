//! Finite commutative local rings.

use std::fmt;
use std::path::{Path, PathBuf};

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use super::closure::{self, FiniteRingOps};
use super::{ElementCap, RingError};

/// Which local ring to build.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum LocalDescriptor {
    /// The prime field `F_p`.
    PrimeField { p: u32 },
    /// `Z/(p^k)`.
    IntegersMod { p: u32, k: u32 },
    /// `F_p[x]/(x^k)`.
    TruncatedPoly { p: u32, k: u32 },
    /// `F_p[x_1, .., x_n]/(x_1, .., x_n)^2`, presented by generated tables.
    SquareZero { p: u32, vars: u32 },
    /// Addition and multiplication tables read from a JSON file.
    TableFile { path: PathBuf },
}

pub(crate) const VAR_NAMES: [&str; 4] = ["x", "y", "z", "w"];

impl fmt::Display for LocalDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LocalDescriptor::PrimeField { p } => write!(f, "F{p}"),
            LocalDescriptor::IntegersMod { p, k } => write!(f, "Z{}", (*p as u64).pow(*k)),
            LocalDescriptor::TruncatedPoly { p, k } => write!(f, "F{p}[x]/x^{k}"),
            LocalDescriptor::SquareZero { p, vars } => {
                let names = VAR_NAMES[..(*vars as usize).min(VAR_NAMES.len())].join(",");
                write!(f, "F{p}[{names}]/({names})^2")
            }
            LocalDescriptor::TableFile { path } => write!(f, "@{}", path.display()),
        }
    }
}

/// On-disk form of a table-presented ring. Element `0` is the additive
/// identity and element `1` the multiplicative identity.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RingTable {
    pub order: u32,
    pub add: Vec<Vec<u32>>,
    pub mul: Vec<Vec<u32>>,
    #[serde(default)]
    pub labels: Option<Vec<String>>,
}

#[derive(Clone, Debug)]
enum Arith {
    Cyclic { n: u32 },
    Poly { p: u32, k: u32 },
    Table { add: Vec<u32>, mul: Vec<u32> },
}

const MUL_CACHE_LIMIT: u32 = 512;

/// A finite commutative local ring with its complete ideal list.
///
/// Elements are `0..order`; `0` is zero and `1` is one. Ideals are stored as
/// membership bitsets sorted by size then bitmask, so index `0` is the zero
/// ideal and the last index is the whole ring.
#[derive(Clone, Debug)]
pub struct LocalRing {
    descriptor: LocalDescriptor,
    order: u32,
    arith: Arith,
    mul_cache: Option<Vec<u32>>,
    labels: Option<Vec<String>>,
    units: FixedBitSet,
    ideals: Vec<FixedBitSet>,
    maximal: usize,
}

impl FiniteRingOps for LocalRing {
    fn order(&self) -> u32 {
        self.order
    }

    fn add(&self, a: u32, b: u32) -> u32 {
        LocalRing::add(self, a, b)
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        LocalRing::mul(self, a, b)
    }
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `n` as `p^k` with `p` prime, if possible.
pub fn prime_power(n: u64) -> Option<(u32, u32)> {
    if n < 2 {
        return None;
    }
    let mut p = 2u64;
    while p * p <= n && !n.is_multiple_of(p) {
        p += 1;
    }
    if !n.is_multiple_of(p) {
        p = n;
    }
    let mut m = n;
    let mut k = 0;
    while m.is_multiple_of(p) {
        m /= p;
        k += 1;
    }
    (m == 1 && p <= u32::MAX as u64).then_some((p as u32, k))
}

fn checked_order(p: u32, k: u32, cap: ElementCap) -> Result<u32, RingError> {
    if !is_prime(p) {
        return Err(RingError::NotPrime(p));
    }
    if k == 0 {
        return Err(RingError::ZeroExponent);
    }
    let order = (p as u64).checked_pow(k).unwrap_or(u64::MAX);
    if order > cap.get() {
        return Err(RingError::ExceedsCap { order, cap: cap.get() });
    }
    Ok(order as u32)
}

impl LocalRing {
    /// Builds the ring named by `descriptor`. Table files are resolved
    /// relative to the working directory.
    pub fn new(descriptor: &LocalDescriptor, cap: ElementCap) -> Result<Self, RingError> {
        match descriptor {
            LocalDescriptor::PrimeField { p } => {
                let n = checked_order(*p, 1, cap)?;
                Self::finish(descriptor.clone(), n, Arith::Cyclic { n }, None)
            }
            LocalDescriptor::IntegersMod { p, k } => {
                let n = checked_order(*p, *k, cap)?;
                Self::finish(descriptor.clone(), n, Arith::Cyclic { n }, None)
            }
            LocalDescriptor::TruncatedPoly { p, k } => {
                let n = checked_order(*p, *k, cap)?;
                Self::finish(descriptor.clone(), n, Arith::Poly { p: *p, k: *k }, None)
            }
            LocalDescriptor::SquareZero { p, vars } => {
                if *vars == 0 || *vars as usize > VAR_NAMES.len() {
                    return Err(RingError::Table(format!(
                        "square-zero rings take 1 to {} variables",
                        VAR_NAMES.len()
                    )));
                }
                checked_order(*p, vars + 1, cap)?;
                let table = square_zero_table(*p, *vars);
                Self::from_table_with(descriptor.clone(), table, cap)
            }
            LocalDescriptor::TableFile { path } => {
                let table = load_table(path)?;
                Self::from_table_with(descriptor.clone(), table, cap)
            }
        }
    }

    pub fn prime_field(p: u32) -> Result<Self, RingError> {
        Self::new(&LocalDescriptor::PrimeField { p }, ElementCap::default())
    }

    /// `Z/(n)` for a prime power `n`.
    pub fn integers_mod(n: u64) -> Result<Self, RingError> {
        let (p, k) = prime_power(n).ok_or(RingError::NotPrimePower(n))?;
        Self::new(&LocalDescriptor::IntegersMod { p, k }, ElementCap::default())
    }

    pub fn truncated_poly(p: u32, k: u32) -> Result<Self, RingError> {
        Self::new(&LocalDescriptor::TruncatedPoly { p, k }, ElementCap::default())
    }

    pub fn square_zero(p: u32, vars: u32) -> Result<Self, RingError> {
        Self::new(&LocalDescriptor::SquareZero { p, vars }, ElementCap::default())
    }

    /// Builds a ring from explicit tables, checking the commutative ring
    /// axioms and locality.
    pub fn from_table(table: RingTable, path: impl Into<PathBuf>, cap: ElementCap) -> Result<Self, RingError> {
        Self::from_table_with(LocalDescriptor::TableFile { path: path.into() }, table, cap)
    }

    fn from_table_with(descriptor: LocalDescriptor, table: RingTable, cap: ElementCap) -> Result<Self, RingError> {
        let n = table.order;
        if n as u64 > cap.get() {
            return Err(RingError::ExceedsCap { order: n as u64, cap: cap.get() });
        }
        if n < 2 {
            return Err(RingError::Table("a local ring needs at least two elements".into()));
        }
        let flatten = |rows: &[Vec<u32>], what: &str| -> Result<Vec<u32>, RingError> {
            if rows.len() != n as usize || rows.iter().any(|r| r.len() != n as usize) {
                return Err(RingError::Table(format!("{what} table must be {n}x{n}")));
            }
            let flat: Vec<u32> = rows.iter().flatten().copied().collect();
            if flat.iter().any(|&v| v >= n) {
                return Err(RingError::Table(format!("{what} table entry out of range")));
            }
            Ok(flat)
        };
        let add = flatten(&table.add, "addition")?;
        let mul = flatten(&table.mul, "multiplication")?;
        if let Some(labels) = &table.labels {
            if labels.len() != n as usize {
                return Err(RingError::Table("label count differs from order".into()));
            }
        }
        check_axioms(n, &add, &mul)?;
        let labels = table
            .labels
            .map(|ls| ls.into_iter().map(|l| l.chars().filter(|c| !c.is_whitespace()).collect()).collect());
        Self::finish(descriptor, n, Arith::Table { add, mul }, labels)
    }

    fn finish(
        descriptor: LocalDescriptor,
        order: u32,
        arith: Arith,
        labels: Option<Vec<String>>,
    ) -> Result<Self, RingError> {
        let mut ring = LocalRing {
            descriptor,
            order,
            arith,
            mul_cache: None,
            labels,
            units: FixedBitSet::with_capacity(order as usize),
            ideals: Vec::new(),
            maximal: 0,
        };
        if order <= MUL_CACHE_LIMIT {
            let mut cache = Vec::with_capacity((order * order) as usize);
            for a in 0..order {
                for b in 0..order {
                    cache.push(ring.raw_mul(a, b));
                }
            }
            ring.mul_cache = Some(cache);
        }
        ring.units = ring.compute_units();
        ring.ideals = closure::enumerate_ideals(&ring);
        let mut non_units = FixedBitSet::with_capacity(order as usize);
        non_units.insert_range(..);
        non_units.difference_with(&ring.units);
        ring.maximal = ring
            .ideals
            .iter()
            .position(|i| *i == non_units)
            .ok_or(RingError::NotLocal)?;
        Ok(ring)
    }

    fn compute_units(&self) -> FixedBitSet {
        let mut units = FixedBitSet::with_capacity(self.order as usize);
        match &self.arith {
            Arith::Cyclic { n } => {
                let (p, _) = prime_power(*n as u64).expect("cyclic order is a prime power");
                for x in 0..*n {
                    units.set(x as usize, x % p != 0);
                }
            }
            Arith::Poly { p, .. } => {
                for x in 0..self.order {
                    units.set(x as usize, x % p != 0);
                }
            }
            Arith::Table { .. } => {
                for x in 0..self.order {
                    let invertible = (0..self.order).any(|y| self.mul(x, y) == 1);
                    units.set(x as usize, invertible);
                }
            }
        }
        units
    }

    fn raw_mul(&self, a: u32, b: u32) -> u32 {
        match &self.arith {
            Arith::Cyclic { n } => ((a as u64 * b as u64) % *n as u64) as u32,
            Arith::Poly { p, k } => {
                let (p, k) = (*p, *k as usize);
                let da = digits(a, p, k);
                let db = digits(b, p, k);
                let mut out = vec![0u64; k];
                for (i, &x) in da.iter().enumerate() {
                    if x == 0 {
                        continue;
                    }
                    for (j, &y) in db.iter().enumerate().take(k - i) {
                        out[i + j] += x as u64 * y as u64;
                    }
                }
                undigits(out.into_iter().map(|c| (c % p as u64) as u32), p)
            }
            Arith::Table { mul, .. } => mul[(a * self.order + b) as usize],
        }
    }

    pub fn descriptor(&self) -> &LocalDescriptor {
        &self.descriptor
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        match &self.arith {
            Arith::Cyclic { n } => ((a as u64 + b as u64) % *n as u64) as u32,
            Arith::Poly { p, k } => {
                let da = digits(a, *p, *k as usize);
                let db = digits(b, *p, *k as usize);
                undigits(da.iter().zip(&db).map(|(x, y)| (x + y) % p), *p)
            }
            Arith::Table { add, .. } => add[(a * self.order + b) as usize],
        }
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        match &self.mul_cache {
            Some(cache) => cache[(a * self.order + b) as usize],
            None => self.raw_mul(a, b),
        }
    }

    pub fn neg(&self, a: u32) -> u32 {
        (0..self.order).find(|&b| self.add(a, b) == 0).expect("additive inverse exists")
    }

    pub fn is_unit(&self, x: u32) -> bool {
        self.units.contains(x as usize)
    }

    /// Some power of `x` is zero.
    pub fn is_nilpotent(&self, x: u32) -> bool {
        let mut power = x;
        for _ in 0..=self.order {
            if power == 0 {
                return true;
            }
            power = self.mul(power, x);
        }
        false
    }

    pub fn is_field(&self) -> bool {
        self.maximal == 0
    }

    pub fn ideals(&self) -> &[FixedBitSet] {
        &self.ideals
    }

    pub fn ideal(&self, index: usize) -> &FixedBitSet {
        &self.ideals[index]
    }

    pub fn ideal_count(&self) -> usize {
        self.ideals.len()
    }

    pub fn whole_ideal(&self) -> usize {
        self.ideals.len() - 1
    }

    /// Index of the unique maximal ideal, which is also the nilradical.
    pub fn maximal_ideal(&self) -> usize {
        self.maximal
    }

    pub fn is_trivial_ideal(&self, index: usize) -> bool {
        index == 0 || index == self.whole_ideal()
    }

    pub fn ideal_index(&self, set: &FixedBitSet) -> Option<usize> {
        self.ideals.iter().position(|i| i == set)
    }

    pub fn ideal_contains(&self, index: usize, x: u32) -> bool {
        self.ideals[index].contains(x as usize)
    }

    pub fn ideal_is_subset(&self, a: usize, b: usize) -> bool {
        self.ideals[a].is_subset(&self.ideals[b])
    }

    pub fn ideal_members(&self, index: usize) -> impl Iterator<Item = u32> + '_ {
        self.ideals[index].ones().map(|x| x as u32)
    }

    pub fn generated_ideal(&self, gens: &[u32]) -> usize {
        let set = closure::generated_ideal(self, gens);
        self.ideal_index(&set).expect("generated set is an enumerated ideal")
    }

    /// `Ann(I) = { r : r x = 0 for all x in I }`, by elementwise scan.
    pub fn annihilator(&self, index: usize) -> usize {
        let mut set = FixedBitSet::with_capacity(self.order as usize);
        for r in 0..self.order {
            if self.ideal_members(index).all(|x| self.mul(r, x) == 0) {
                set.insert(r as usize);
            }
        }
        self.ideal_index(&set).expect("annihilator is an ideal")
    }

    /// `r x != 0` for every nonzero `x` in the ideal.
    pub fn is_regular_on(&self, r: u32, ideal: usize) -> bool {
        self.ideal_members(ideal).all(|x| x == 0 || self.mul(r, x) != 0)
    }

    /// Some element of ideal `i` is regular on ideal `j`.
    pub fn contains_regular_element(&self, i: usize, j: usize) -> bool {
        self.ideal_members(i).any(|r| self.is_regular_on(r, j))
    }

    /// A deterministic generating set: scan members in index order and keep
    /// each one not already generated by the earlier picks.
    pub fn generators(&self, index: usize) -> Vec<u32> {
        let mut gens = Vec::new();
        let mut span = closure::generated_ideal(self, &[]);
        for x in self.ideal_members(index) {
            if !span.contains(x as usize) {
                gens.push(x);
                span = closure::generated_ideal(self, &gens);
            }
        }
        gens
    }

    pub fn format_element(&self, x: u32) -> String {
        if let Some(labels) = &self.labels {
            return labels[x as usize].clone();
        }
        match &self.arith {
            Arith::Cyclic { .. } | Arith::Table { .. } => x.to_string(),
            Arith::Poly { p, k } => format_linear(&digits(x, *p, *k as usize), |deg| match deg {
                1 => "x".to_string(),
                d => format!("x^{d}"),
            }),
        }
    }

    /// Parses an element literal: an integer for `Z_n` and `F_p`, a
    /// polynomial such as `1+2x^2` for truncated polynomial rings, and a
    /// label for table rings.
    pub fn parse_element(&self, text: &str) -> Option<u32> {
        let text: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if let Some(labels) = &self.labels {
            return labels.iter().position(|l| *l == text).map(|i| i as u32);
        }
        match &self.arith {
            Arith::Cyclic { n } => text.parse::<u64>().ok().map(|v| (v % *n as u64) as u32),
            Arith::Table { .. } => text.parse::<u32>().ok().filter(|&v| v < self.order),
            Arith::Poly { p, k } => {
                let mut coeffs = vec![0u32; *k as usize];
                for term in text.split('+') {
                    let (coef, deg) = parse_monomial(term, "x")?;
                    if deg < *k as usize {
                        coeffs[deg] = (coeffs[deg] + (coef % *p as u64) as u32) % p;
                    }
                }
                Some(undigits(coeffs.into_iter(), *p))
            }
        }
    }
}

fn digits(mut x: u32, p: u32, k: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(k);
    for _ in 0..k {
        out.push(x % p);
        x /= p;
    }
    out
}

fn undigits(ds: impl DoubleEndedIterator<Item = u32>, p: u32) -> u32 {
    ds.rev().fold(0u32, |acc, d| acc * p + d)
}

/// Formats `c_0 + c_1 m_1 + ...`, omitting zero terms and unit coefficients.
fn format_linear(coeffs: &[u32], monomial: impl Fn(usize) -> String) -> String {
    let mut terms = Vec::new();
    for (i, &c) in coeffs.iter().enumerate() {
        if c == 0 {
            continue;
        }
        terms.push(match (i, c) {
            (0, c) => c.to_string(),
            (i, 1) => monomial(i),
            (i, c) => format!("{c}{}", monomial(i)),
        });
    }
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join("+")
    }
}

/// Parses `[coef][var[^exp]]`, returning (coefficient, degree).
fn parse_monomial(term: &str, var: &str) -> Option<(u64, usize)> {
    if term.is_empty() {
        return None;
    }
    let split = term.find(|c: char| !c.is_ascii_digit()).unwrap_or(term.len());
    let (num, rest) = term.split_at(split);
    let coef = if num.is_empty() { 1 } else { num.parse().ok()? };
    if rest.is_empty() {
        return if num.is_empty() { None } else { Some((coef, 0)) };
    }
    let rest = rest.strip_prefix(var)?;
    if rest.is_empty() {
        return Some((coef, 1));
    }
    let exp = rest.strip_prefix('^')?.parse().ok()?;
    Some((coef, exp))
}

fn square_zero_table(p: u32, vars: u32) -> RingTable {
    let k = vars as usize + 1;
    let order = p.pow(vars + 1);
    let mut add = vec![vec![0; order as usize]; order as usize];
    let mut mul = vec![vec![0; order as usize]; order as usize];
    for a in 0..order {
        let da = digits(a, p, k);
        for b in 0..order {
            let db = digits(b, p, k);
            add[a as usize][b as usize] = undigits(da.iter().zip(&db).map(|(x, y)| (x + y) % p), p);
            let prod = (0..k).map(|i| {
                let v = if i == 0 {
                    da[0] * db[0]
                } else {
                    da[0] * db[i] + db[0] * da[i]
                };
                v % p
            });
            mul[a as usize][b as usize] = undigits(prod.collect::<Vec<_>>().into_iter(), p);
        }
    }
    let labels = (0..order)
        .map(|x| format_linear(&digits(x, p, k), |i| VAR_NAMES[i - 1].to_string()))
        .collect();
    RingTable { order, add, mul, labels: Some(labels) }
}

fn load_table(path: &Path) -> Result<RingTable, RingError> {
    let text = std::fs::read_to_string(path).map_err(|source| RingError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| RingError::Table(format!("{}: {e}", path.display())))
}

fn check_axioms(n: u32, add: &[u32], mul: &[u32]) -> Result<(), RingError> {
    let at = |t: &[u32], a: u32, b: u32| t[(a * n + b) as usize];
    let fail = |what: &str| Err(RingError::Table(format!("ring axiom fails: {what}")));
    for a in 0..n {
        if at(add, 0, a) != a {
            return fail("0 is not an additive identity");
        }
        if at(mul, 1, a) != a {
            return fail("1 is not a multiplicative identity");
        }
        if !(0..n).any(|b| at(add, a, b) == 0) {
            return fail("missing additive inverse");
        }
        for b in 0..n {
            if at(add, a, b) != at(add, b, a) {
                return fail("addition is not commutative");
            }
            if at(mul, a, b) != at(mul, b, a) {
                return fail("multiplication is not commutative");
            }
            for c in 0..n {
                if at(add, at(add, a, b), c) != at(add, a, at(add, b, c)) {
                    return fail("addition is not associative");
                }
                if at(mul, at(mul, a, b), c) != at(mul, a, at(mul, b, c)) {
                    return fail("multiplication is not associative");
                }
                if at(mul, a, at(add, b, c)) != at(add, at(mul, a, b), at(mul, a, c)) {
                    return fail("multiplication does not distribute over addition");
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sizes(ring: &LocalRing) -> Vec<usize> {
        ring.ideals().iter().map(|i| i.count_ones(..)).collect()
    }

    #[test]
    fn z4_ideals() {
        let z4 = LocalRing::integers_mod(4).unwrap();
        assert_eq!(z4.order(), 4);
        assert_eq!(z4.ideal_count(), 3);
        assert_eq!(z4.ideal_members(1).collect::<Vec<_>>(), vec![0, 2]);
        assert_eq!(z4.maximal_ideal(), 1);
        assert!(!z4.is_field());
    }

    #[test]
    fn f5_is_a_field() {
        let f5 = LocalRing::prime_field(5).unwrap();
        assert_eq!(f5.ideal_count(), 2);
        assert_eq!(f5.maximal_ideal(), 0);
        assert!(f5.is_field());
    }

    #[test]
    fn square_zero_plane_has_six_ideals() {
        let r = LocalRing::square_zero(2, 2).unwrap();
        assert_eq!(r.order(), 8);
        assert_eq!(sizes(&r), vec![1, 2, 2, 2, 4, 8]);
        let names: Vec<String> = (1..5)
            .map(|i| {
                let gens = r.generators(i);
                gens.iter().map(|&g| r.format_element(g)).collect::<Vec<_>>().join(",")
            })
            .collect();
        assert_eq!(names, vec!["x", "y", "x+y", "x,y"]);
    }

    #[test]
    fn truncated_poly_is_a_chain() {
        let r = LocalRing::truncated_poly(2, 3).unwrap();
        assert_eq!(sizes(&r), vec![1, 2, 4, 8]);
        assert_eq!(r.format_element(6), "x+x^2");
        assert_eq!(r.parse_element("x + x^2"), Some(6));
        assert_eq!(r.parse_element("x^5"), Some(0));
        assert_eq!(r.generators(2), vec![2]);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(LocalRing::prime_field(6), Err(RingError::NotPrime(6))));
        assert!(matches!(LocalRing::integers_mod(12), Err(RingError::NotPrimePower(12))));
        assert!(matches!(LocalRing::truncated_poly(2, 0), Err(RingError::ZeroExponent)));
        let big = LocalRing::new(&LocalDescriptor::IntegersMod { p: 2, k: 13 }, ElementCap::default());
        assert!(matches!(big, Err(RingError::ExceedsCap { order: 8192, .. })));
    }

    #[test]
    fn rejects_non_ring_tables() {
        let table = RingTable {
            order: 2,
            add: vec![vec![0, 1], vec![1, 1]],
            mul: vec![vec![0, 0], vec![0, 1]],
            labels: None,
        };
        assert!(matches!(
            LocalRing::from_table(table, "bad.json", ElementCap::default()),
            Err(RingError::Table(_))
        ));
    }

    #[test]
    fn rejects_non_local_tables() {
        // Z6 is a ring but has two maximal ideals.
        let n = 6u32;
        let table = RingTable {
            order: n,
            add: (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect(),
            mul: (0..n).map(|a| (0..n).map(|b| (a * b) % n).collect()).collect(),
            labels: None,
        };
        assert!(matches!(
            LocalRing::from_table(table, "z6.json", ElementCap::default()),
            Err(RingError::NotLocal)
        ));
    }

    #[test]
    fn annihilator_and_regularity_in_z4() {
        let z4 = LocalRing::integers_mod(4).unwrap();
        assert_eq!(z4.annihilator(1), 1);
        assert_eq!(z4.annihilator(0), 2);
        assert!(!z4.is_regular_on(2, 1));
        assert!(z4.is_regular_on(3, 1));
        assert!(z4.is_regular_on(0, 0));
        assert!(!z4.contains_regular_element(1, 1));
        assert!(z4.contains_regular_element(2, 1));
    }

    #[test]
    fn prime_power_split() {
        assert_eq!(prime_power(8), Some((2, 3)));
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(7), Some((7, 1)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
    }
}

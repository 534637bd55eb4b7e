//! Text forms for rings and ideals.
//!
//! A ring is a product of terms separated by `x`, `×` or `*`:
//!
//! ```text
//! F5                 prime field
//! Z9                 integers modulo a prime power
//! F2[x]/x^3          truncated polynomials, also F2[x]/(x^3)
//! F3[x,y]/(x,y)^2    square-zero local ring in up to four variables
//! @tables/r.json     ring read from addition and multiplication tables
//! ```
//!
//! Whitespace between tokens is ignored, so `F2xZ4xF3` and `F2 x Z4 x F3`
//! name the same ring. A path after `@` runs to the next whitespace or the
//! end of input.
//!
//! An ideal lists one entry per factor, separated by commas: `0`, `1` (the
//! whole factor), or a parenthesized generator list such as `(2)` or
//! `(x,1+y)`.

use std::fmt;
use std::path::PathBuf;
use std::sync::Arc;

use thiserror::Error;

use crate::ring::{prime_power, ElementCap, Ideal, LocalDescriptor, LocalRing, ProductRing, RingError};

/// A syntax error at a byte offset of the input.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("at position {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

#[derive(Debug, Error)]
pub enum NotationError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Ring(#[from] RingError),
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor { text, pos: 0 }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek_raw() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek_raw(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.peek_raw()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn eat(&mut self, want: char) -> bool {
        if self.peek() == Some(want) {
            self.pos += want.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, want: char) -> Result<(), ParseError> {
        if self.eat(want) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{want}`")))
        }
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            position: self.pos,
            message: message.into(),
        }
    }

    fn number(&mut self) -> Result<u64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let mut digits = String::new();
        while let Some(c) = self.peek() {
            if !c.is_ascii_digit() {
                break;
            }
            digits.push(c);
            self.pos += 1;
        }
        if digits.is_empty() {
            return Err(ParseError {
                position: start,
                message: "expected a number".into(),
            });
        }
        digits.parse().map_err(|_| ParseError {
            position: start,
            message: "number out of range".into(),
        })
    }

    fn variable(&mut self) -> Result<char, ParseError> {
        match self.peek() {
            Some(c) if c.is_ascii_lowercase() => {
                self.pos += 1;
                Ok(c)
            }
            _ => Err(self.error("expected a variable name")),
        }
    }
}

fn small(value: u64, at: usize) -> Result<u32, ParseError> {
    u32::try_from(value).map_err(|_| ParseError {
        position: at,
        message: "number out of range".into(),
    })
}

fn parse_term(cur: &mut Cursor) -> Result<LocalDescriptor, ParseError> {
    cur.skip_ws();
    let start = cur.pos;
    match cur.bump() {
        Some('F') => {
            let p = small(cur.number()?, start + 1)?;
            if cur.peek() != Some('[') {
                return Ok(LocalDescriptor::PrimeField { p });
            }
            parse_quotient(cur, p)
        }
        Some('Z') => {
            let at = cur.pos;
            let n = cur.number()?;
            let (p, k) = prime_power(n).ok_or(ParseError {
                position: at,
                message: format!("{n} is not a prime power"),
            })?;
            Ok(LocalDescriptor::IntegersMod { p, k })
        }
        Some('@') => {
            let begin = cur.pos;
            while let Some(c) = cur.peek_raw() {
                if c.is_whitespace() {
                    break;
                }
                cur.pos += c.len_utf8();
            }
            if cur.pos == begin {
                return Err(cur.error("expected a path after `@`"));
            }
            Ok(LocalDescriptor::TableFile {
                path: PathBuf::from(&cur.text[begin..cur.pos]),
            })
        }
        Some(c) => Err(ParseError {
            position: start,
            message: format!("unexpected `{c}`; expected F, Z or @"),
        }),
        None => Err(cur.error("expected a ring term")),
    }
}

/// `[v1,..]/` followed by `v^k`, `(v^k)`, `(v)^k` or `(v1,..)^2`.
fn parse_quotient(cur: &mut Cursor, p: u32) -> Result<LocalDescriptor, ParseError> {
    cur.expect('[')?;
    let mut vars = vec![cur.variable()?];
    while cur.eat(',') {
        let at = cur.pos;
        let v = cur.variable()?;
        if vars.contains(&v) {
            return Err(ParseError {
                position: at,
                message: format!("variable `{v}` repeated"),
            });
        }
        vars.push(v);
    }
    cur.expect(']')?;
    cur.expect('/')?;
    let quotient_at = cur.pos;
    let parenthesized = cur.eat('(');
    let mut seen = vec![cur.variable()?];
    let inner_power = if parenthesized && cur.eat('^') {
        Some(cur.number()?)
    } else {
        None
    };
    while parenthesized && inner_power.is_none() && cur.eat(',') {
        seen.push(cur.variable()?);
    }
    if parenthesized {
        cur.expect(')')?;
    }
    if seen != vars {
        return Err(ParseError {
            position: quotient_at,
            message: "quotient must use the variables of the polynomial ring, in order".into(),
        });
    }
    let power = match inner_power {
        Some(k) => k,
        None => {
            cur.expect('^')?;
            cur.number()?
        }
    };
    if vars.len() == 1 {
        let k = small(power, quotient_at)?;
        return Ok(LocalDescriptor::TruncatedPoly { p, k });
    }
    if power != 2 || inner_power.is_some() {
        return Err(ParseError {
            position: quotient_at,
            message: "several variables are supported only as (x,y,..)^2".into(),
        });
    }
    Ok(LocalDescriptor::SquareZero {
        p,
        vars: vars.len() as u32,
    })
}

/// Parses a product of local ring terms.
pub fn parse_ring_spec(text: &str) -> Result<Vec<LocalDescriptor>, ParseError> {
    let mut cur = Cursor::new(text);
    let mut terms = vec![parse_term(&mut cur)?];
    loop {
        match cur.peek() {
            None => return Ok(terms),
            Some('x' | '×' | '*') => {
                cur.bump();
                terms.push(parse_term(&mut cur)?);
            }
            Some(c) => return Err(cur.error(format!("unexpected `{c}`; expected `x` between factors"))),
        }
    }
}

/// Canonical text for a product, which [`parse_ring_spec`] reads back.
pub fn format_ring_spec(descriptors: &[LocalDescriptor]) -> String {
    RingSpec(descriptors).to_string()
}

struct RingSpec<'a>(&'a [LocalDescriptor]);

impl fmt::Display for RingSpec<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" x ")?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

/// Builds the product, sharing repeated factors.
pub fn build_ring(descriptors: &[LocalDescriptor], cap: ElementCap) -> Result<ProductRing, RingError> {
    let mut built: Vec<(LocalDescriptor, Arc<LocalRing>)> = Vec::new();
    let mut components = Vec::with_capacity(descriptors.len());
    for d in descriptors {
        let ring = match built.iter().find(|(seen, _)| seen == d) {
            Some((_, ring)) => ring.clone(),
            None => {
                let ring = Arc::new(LocalRing::new(d, cap)?);
                built.push((d.clone(), ring.clone()));
                ring
            }
        };
        components.push(ring);
    }
    ProductRing::from_shared(components)
}

pub fn parse_ring(text: &str, cap: ElementCap) -> Result<ProductRing, NotationError> {
    Ok(build_ring(&parse_ring_spec(text)?, cap)?)
}

/// Splits at commas not enclosed in parentheses, with each piece's offset.
fn split_entries(text: &str) -> Result<Vec<(usize, &str)>, ParseError> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut start = 0;
    for (i, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth = depth.checked_sub(1).ok_or(ParseError {
                    position: i,
                    message: "unbalanced `)`".into(),
                })?
            }
            ',' if depth == 0 => {
                out.push((start, &text[start..i]));
                start = i + 1;
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(ParseError {
            position: text.len(),
            message: "unclosed `(`".into(),
        });
    }
    out.push((start, &text[start..]));
    Ok(out)
}

/// Resolves an ideal written factor by factor, e.g. `1,(2),0`.
pub fn parse_ideal_spec(ring: &ProductRing, text: &str) -> Result<Ideal, ParseError> {
    let entries = split_entries(text)?;
    if entries.len() != ring.len() {
        return Err(ParseError {
            position: 0,
            message: format!("expected {} entries, found {}", ring.len(), entries.len()),
        });
    }
    let mut parts = Vec::with_capacity(entries.len());
    for (k, (offset, raw)) in entries.into_iter().enumerate() {
        let component = ring.component(k);
        let lead = raw.len() - raw.trim_start().len();
        let position = offset + lead;
        let entry = raw.trim();
        let index = match entry {
            "0" => 0,
            "1" => component.whole_ideal(),
            _ => {
                let inner = entry
                    .strip_prefix('(')
                    .and_then(|e| e.strip_suffix(')'))
                    .ok_or(ParseError {
                        position,
                        message: format!("expected `0`, `1` or a generator list, found `{entry}`"),
                    })?;
                let mut gens = Vec::new();
                for g in inner.split(',') {
                    let x = component.parse_element(g).ok_or(ParseError {
                        position,
                        message: format!("`{}` is not an element of {}", g.trim(), component.descriptor()),
                    })?;
                    gens.push(x);
                }
                component.generated_ideal(&gens)
            }
        };
        parts.push(index);
    }
    Ok(Ideal::new(parts))
}

/// Canonical text for an ideal, which [`parse_ideal_spec`] reads back.
pub fn format_ideal(ring: &ProductRing, ideal: &Ideal) -> String {
    ideal
        .parts
        .iter()
        .enumerate()
        .map(|(k, &i)| {
            let c = ring.component(k);
            if i == 0 {
                "0".to_string()
            } else if i == c.whole_ideal() {
                "1".to_string()
            } else {
                let gens: Vec<String> = c.generators(i).into_iter().map(|g| c.format_element(g)).collect();
                format!("({})", gens.join(","))
            }
        })
        .collect::<Vec<_>>()
        .join(",")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_each_term() {
        let d = parse_ring_spec("F5 x Z9 x F2[x]/x^3 x F3[x,y]/(x,y)^2 x @t.json").unwrap();
        assert_eq!(
            d,
            vec![
                LocalDescriptor::PrimeField { p: 5 },
                LocalDescriptor::IntegersMod { p: 3, k: 2 },
                LocalDescriptor::TruncatedPoly { p: 2, k: 3 },
                LocalDescriptor::SquareZero { p: 3, vars: 2 },
                LocalDescriptor::TableFile { path: "t.json".into() },
            ]
        );
    }

    #[test]
    fn whitespace_and_separators() {
        let a = parse_ring_spec("F2xZ4xF3").unwrap();
        assert_eq!(parse_ring_spec("  F2 × Z4 *F3 ").unwrap(), a);
        assert_eq!(parse_ring_spec("F2[x]/(x^2)").unwrap(), parse_ring_spec("F2[x]/x^2").unwrap());
        assert_eq!(parse_ring_spec("F2[x]/(x)^2").unwrap(), parse_ring_spec("F 2 [ x ] / x ^ 2").unwrap());
    }

    #[test]
    fn reports_positions() {
        assert_eq!(parse_ring_spec("F2 x Z6").unwrap_err().position, 6);
        assert_eq!(parse_ring_spec("F2 x Q3").unwrap_err().position, 5);
        assert_eq!(parse_ring_spec("F2 Z4").unwrap_err().position, 3);
        assert_eq!(parse_ring_spec("F2[x]/y^2").unwrap_err().position, 6);
        assert!(parse_ring_spec("").is_err());
        assert!(parse_ring_spec("F2 x").is_err());
        assert!(parse_ring_spec("F2[x,y]/(x,y)^3").is_err());
    }

    #[test]
    fn ring_errors_surface() {
        assert!(matches!(
            parse_ring("F4 x F2", ElementCap::default()),
            Err(NotationError::Ring(RingError::NotPrime(4)))
        ));
        assert!(matches!(
            parse_ring("Z4096 x F2", ElementCap::new(100)),
            Err(NotationError::Ring(RingError::ExceedsCap { .. }))
        ));
    }

    #[test]
    fn ideal_examples() {
        let r = parse_ring("F2 x Z4 x Z4", ElementCap::default()).unwrap();
        let i = parse_ideal_spec(&r, "1,(2),(2)").unwrap();
        assert_eq!(i, Ideal::new(vec![1, 1, 1]));
        assert_eq!(format_ideal(&r, &i), "1,(2),(2)");
        assert_eq!(parse_ideal_spec(&r, " 0 , (3) , (0) ").unwrap(), Ideal::new(vec![0, 2, 0]));
        assert!(parse_ideal_spec(&r, "1,(2)").is_err());
        assert_eq!(parse_ideal_spec(&r, "1,2,0").unwrap_err().position, 2);
        let s = parse_ring("F2 x F2[x,y]/(x,y)^2 x F2[x]/x^3", ElementCap::default()).unwrap();
        let j = parse_ideal_spec(&s, "0,(x,y),(x^2)").unwrap();
        assert_eq!(format_ideal(&s, &j), "0,(x,y),(x^2)");
        let k = parse_ideal_spec(&s, "0,(x+y),(1+x)").unwrap();
        assert_eq!(k.parts[2], s.component(2).whole_ideal());
    }

    fn descriptor() -> impl Strategy<Value = LocalDescriptor> {
        let primes = prop::sample::select(vec![2u32, 3, 5, 7, 11]);
        prop_oneof![
            primes.clone().prop_map(|p| LocalDescriptor::PrimeField { p }),
            (primes.clone(), 1u32..4).prop_map(|(p, k)| LocalDescriptor::IntegersMod { p, k }),
            (primes.clone(), 1u32..4).prop_map(|(p, k)| LocalDescriptor::TruncatedPoly { p, k }),
            (primes, 2u32..5).prop_map(|(p, vars)| LocalDescriptor::SquareZero { p, vars }),
            "[a-z]{1,8}\\.json".prop_map(|s| LocalDescriptor::TableFile { path: s.into() }),
        ]
    }

    proptest! {
        #[test]
        fn ring_spec_round_trips(ds in prop::collection::vec(descriptor(), 1..6)) {
            let text = format_ring_spec(&ds);
            prop_assert_eq!(parse_ring_spec(&text).unwrap(), ds.clone());
            let squeezed: String = text.chars().filter(|c| !c.is_whitespace()).collect();
            if !ds.iter().any(|d| matches!(d, LocalDescriptor::TableFile { .. })) {
                prop_assert_eq!(parse_ring_spec(&squeezed).unwrap(), ds);
            }
        }

        #[test]
        fn ideal_spec_round_trips(pick in prop::collection::vec(0usize..4, 3), seed in 0usize..1000) {
            let pool = ["F2", "Z4", "Z8", "F3[x]/x^2", "F2[x,y]/(x,y)^2", "Z9", "F2[x]/x^3"];
            let names: Vec<&str> = pick.iter().enumerate().map(|(i, p)| pool[(p + i * 2) % pool.len()]).collect();
            let r = parse_ring(&names.join(" x "), ElementCap::default()).unwrap();
            let ideals = r.ideals();
            let ideal = &ideals[seed % ideals.len()];
            let text = format_ideal(&r, ideal);
            prop_assert_eq!(&parse_ideal_spec(&r, &text).unwrap(), ideal);
        }
    }
}

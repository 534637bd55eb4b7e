//! Finite commutative Artinian rings, presented as products of finite local
//! rings, with their ideals.

pub mod closure;
mod local;
mod product;

use std::path::PathBuf;

use thiserror::Error;

pub use local::{prime_power, LocalDescriptor, LocalRing, RingTable};
pub use product::{Arrangement, Ideal, ProductRing, RingElement, Split};

/// Upper bound on the number of elements of a local ring, and on the order of
/// a product for which elementwise checks are run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ElementCap(u64);

impl ElementCap {
    pub const DEFAULT: u64 = 4096;
    pub const ENV_VAR: &'static str = "REGIDEAL_MAX_ELEMENTS";

    pub fn new(cap: u64) -> Self {
        ElementCap(cap)
    }

    /// Reads `REGIDEAL_MAX_ELEMENTS`, falling back to the default when unset
    /// or unparsable.
    pub fn from_env() -> Self {
        std::env::var(Self::ENV_VAR)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .map(ElementCap)
            .unwrap_or_default()
    }

    pub fn get(self) -> u64 {
        self.0
    }
}

impl Default for ElementCap {
    fn default() -> Self {
        ElementCap(Self::DEFAULT)
    }
}

#[derive(Debug, Error)]
pub enum RingError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("exponent must be positive")]
    ZeroExponent,
    #[error("ring of order {order} exceeds the element cap {cap}")]
    ExceedsCap { order: u64, cap: u64 },
    #[error("invalid ring table: {0}")]
    Table(String),
    #[error("ring is not local: its non-units do not form an ideal")]
    NotLocal,
    #[error("a product needs at least one component")]
    EmptyProduct,
    #[error("products are limited to 64 components, got {0}")]
    TooManyComponents(usize),
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

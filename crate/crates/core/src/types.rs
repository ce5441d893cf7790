//! Rank-one types modeled as finite sets of inverted primes.
//!
//! Two types are comparable exactly when one inverted set contains the other.
//! Identity is the set itself; the label is display metadata only.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};

use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::arith::{is_prime, primes_above, Natural};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct PrimeType {
    label: String,
    inverted: BTreeSet<u64>,
}

impl PrimeType {
    pub fn new(label: impl Into<String>, inverted: impl IntoIterator<Item = u64>) -> Result<Self> {
        let label = label.into();
        let inverted: BTreeSet<u64> = inverted.into_iter().collect();
        for &p in &inverted {
            if !is_prime(p) {
                return Err(Error::Input(format!(
                    "type {label}: inverted entry {p} is not prime"
                )));
            }
        }
        Ok(PrimeType { label, inverted })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn inverted_primes(&self) -> &BTreeSet<u64> {
        &self.inverted
    }

    /// Subset order on inverted prime sets.
    pub fn is_comparable(&self, other: &Self) -> bool {
        self.inverted.is_subset(&other.inverted) || other.inverted.is_subset(&self.inverted)
    }

    /// No prime of `e` is inverted in this type.
    pub fn is_e_free(&self, e: &Natural) -> bool {
        e.primes().all(|p| !self.inverted.contains(&p))
    }
}

impl PartialEq for PrimeType {
    fn eq(&self, other: &Self) -> bool {
        self.inverted == other.inverted
    }
}

impl Eq for PrimeType {}

impl PartialOrd for PrimeType {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PrimeType {
    fn cmp(&self, other: &Self) -> Ordering {
        self.inverted.cmp(&other.inverted)
    }
}

impl Hash for PrimeType {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.inverted.hash(state);
    }
}

impl fmt::Display for PrimeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label)
    }
}

impl Serialize for PrimeType {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("PrimeType", 2)?;
        st.serialize_field("label", &self.label)?;
        st.serialize_field("inverted_primes", &self.inverted)?;
        st.end()
    }
}

/// `count` pairwise incomparable types labeled t1, t2, ... whose inverted
/// primes are fresh singletons strictly above `floor`.
pub fn fresh_types(count: usize, floor: u64) -> Vec<PrimeType> {
    primes_above(floor, count)
        .into_iter()
        .enumerate()
        .map(|(i, p)| PrimeType::new(format!("t{}", i + 1), [p]).unwrap())
        .collect()
}

//! Exact arithmetic on prime factorizations.
//!
//! Regulator indices, generator coefficients and mu-invariants are carried as
//! explicit factorizations, so gcd, lcm and divisibility are valuation
//! arithmetic and products like 3^2*5*7^3*11 stay exact.

use std::collections::BTreeMap;
use std::fmt;

use serde::de::{Deserializer, Error as DeError};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic Miller-Rabin, valid for all u64.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in MR_BASES {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in MR_BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// The first `count` primes.
pub fn first_primes(count: usize) -> Vec<u64> {
    primes_above(1, count)
}

/// The `count` smallest primes strictly above `floor`.
pub fn primes_above(floor: u64, count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut n = floor.max(1);
    while out.len() < count {
        n += 1;
        if is_prime(n) {
            out.push(n);
        }
    }
    out
}

pub fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// gcd(e, c_1, ..., c_r). Over an e-basis this equals the base-group gcd of e
/// with the element having coefficients c_i; an empty list yields e.
pub fn gcd_base(e: u64, coeffs: &[u64]) -> u64 {
    coeffs.iter().fold(e, |g, &c| gcd_u64(g, c))
}

/// Factored counterpart of [`gcd_base`].
pub fn gcd_base_factored(e: &Natural, coeffs: &[Natural]) -> Natural {
    coeffs.iter().fold(e.clone(), |g, c| g.gcd(c))
}

/// Trial division plus a primality check for the remaining cofactor.
pub fn factorize(n: u64) -> Result<BTreeMap<u64, u32>> {
    if n == 0 {
        return Err(Error::Input("cannot factorize 0".into()));
    }
    let mut left = n;
    let mut map = BTreeMap::new();
    let mut p: u64 = 2;
    while p.saturating_mul(p) <= left && p < 2_000_000 {
        while left % p == 0 {
            *map.entry(p).or_insert(0) += 1;
            left /= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if left > 1 {
        if is_prime(left) {
            *map.entry(left).or_insert(0) += 1;
        } else {
            return Err(Error::Input(format!(
                "{n} has a composite cofactor {left} too large to factor"
            )));
        }
    }
    Ok(map)
}

/// A positive integer in factored form: map prime -> exponent, 1 is the empty map.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Natural {
    factors: BTreeMap<u64, u32>,
}

impl Natural {
    pub fn one() -> Self {
        Natural::default()
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn from_u64(n: u64) -> Result<Self> {
        Ok(Natural {
            factors: factorize(n)?,
        })
    }

    /// Builds from explicit (prime, exponent) pairs, validating primality.
    pub fn from_factors(pairs: impl IntoIterator<Item = (u64, u32)>) -> Result<Self> {
        let mut factors = BTreeMap::new();
        for (p, e) in pairs {
            if !is_prime(p) {
                return Err(Error::Input(format!("{p} is not prime")));
            }
            if e == 0 {
                continue;
            }
            *factors.entry(p).or_insert(0) += e;
        }
        Ok(Natural { factors })
    }

    pub fn prime(p: u64) -> Result<Self> {
        Self::from_factors([(p, 1)])
    }

    pub fn valuation(&self, p: u64) -> u32 {
        self.factors.get(&p).copied().unwrap_or(0)
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.keys().copied()
    }

    pub fn factor_pairs(&self) -> impl Iterator<Item = (u64, u32)> + '_ {
        self.factors.iter().map(|(&p, &e)| (p, e))
    }

    pub fn num_primes(&self) -> usize {
        self.factors.len()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut factors = self.factors.clone();
        for (&p, &e) in &other.factors {
            *factors.entry(p).or_insert(0) += e;
        }
        Natural { factors }
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let mut factors = BTreeMap::new();
        for (&p, &e) in &self.factors {
            let o = other.valuation(p);
            if o > 0 {
                factors.insert(p, e.min(o));
            }
        }
        Natural { factors }
    }

    pub fn lcm(&self, other: &Self) -> Self {
        let mut factors = self.factors.clone();
        for (&p, &e) in &other.factors {
            let cur = factors.entry(p).or_insert(0);
            *cur = (*cur).max(e);
        }
        Natural { factors }
    }

    /// self | other
    pub fn divides(&self, other: &Self) -> bool {
        self.factors
            .iter()
            .all(|(&p, &e)| other.valuation(p) >= e)
    }

    /// self / other, when other | self.
    pub fn checked_div(&self, other: &Self) -> Option<Self> {
        if !other.divides(self) {
            return None;
        }
        let mut factors = self.factors.clone();
        for (&p, &e) in &other.factors {
            let cur = factors.get_mut(&p).unwrap();
            *cur -= e;
            if *cur == 0 {
                factors.remove(&p);
            }
        }
        Some(Natural { factors })
    }

    pub fn is_coprime(&self, other: &Self) -> bool {
        self.factors.keys().all(|p| other.valuation(*p) == 0)
    }

    pub fn value(&self) -> Option<u128> {
        let mut acc: u128 = 1;
        for (&p, &e) in &self.factors {
            for _ in 0..e {
                acc = acc.checked_mul(p as u128)?;
            }
        }
        Some(acc)
    }

    pub fn value_u64(&self) -> Option<u64> {
        self.value().and_then(|v| u64::try_from(v).ok())
    }
}

impl fmt::Display for Natural {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        for (&p, &e) in &self.factors {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Natural {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for Natural {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.factors.len()))?;
        for (&p, &e) in &self.factors {
            map.serialize_entry(&p.to_string(), &e)?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for Natural {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = BTreeMap::<String, u32>::deserialize(deserializer)?;
        let mut pairs = Vec::with_capacity(raw.len());
        for (k, e) in raw {
            let p: u64 = k
                .parse()
                .map_err(|_| D::Error::custom(format!("bad prime key {k:?}")))?;
            pairs.push((p, e));
        }
        Natural::from_factors(pairs).map_err(|err| D::Error::custom(err.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Independent order computation in (Z/e)^r: least m >= 1 with m*c == 0.
    fn ord_bruteforce(e: u64, coeffs: &[u64]) -> u64 {
        (1..=e)
            .find(|m| coeffs.iter().all(|c| (m * (c % e)) % e == 0))
            .unwrap()
    }

    fn gcd_base_oracle(e: u64, coeffs: &[u64]) -> u64 {
        e / ord_bruteforce(e, coeffs)
    }

    #[test]
    fn primality_spot_checks() {
        assert!(is_prime(2));
        assert!(is_prime(97));
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(1));
        assert!(!is_prime(561));
        assert!(!is_prime(1_000_000_005));
    }

    #[test]
    fn factorize_round_trips() {
        let n = Natural::from_u64(15435).unwrap();
        assert_eq!(n.to_string(), "3^2*5*7^3");
        assert_eq!(n.value(), Some(15435));
        assert!(Natural::from_u64(1).unwrap().is_one());
    }

    #[test]
    fn gcd_base_matches_bruteforce_oracle() {
        assert_eq!(gcd_base(15435, &[9, 7, 3, 5, 1]), 1);
        assert_eq!(gcd_base_oracle(15435, &[9, 7, 3, 5, 1]), 1);
        assert_eq!(gcd_base(12, &[4, 6]), 2);
        assert_eq!(gcd_base_oracle(12, &[4, 6]), 2);
        // a in eR leaves gcd = e; so does the empty sum
        assert_eq!(gcd_base(30, &[30, 60]), 30);
        assert_eq!(gcd_base(30, &[]), 30);
        for e in 2..=60u64 {
            for coeffs in [
                vec![e / 2, 3],
                vec![2, 4, 8],
                vec![e - 1],
                vec![6, 10, 15],
            ] {
                assert_eq!(
                    gcd_base(e, &coeffs),
                    gcd_base_oracle(e, &coeffs),
                    "e={e} coeffs={coeffs:?}"
                );
            }
        }
    }

    #[test]
    fn natural_lattice_ops() {
        let a = Natural::from_u64(12).unwrap();
        let b = Natural::from_u64(18).unwrap();
        assert_eq!(a.gcd(&b).value(), Some(6));
        assert_eq!(a.lcm(&b).value(), Some(36));
        assert!(Natural::from_u64(6).unwrap().divides(&a));
        assert_eq!(
            a.checked_div(&Natural::from_u64(4).unwrap()).unwrap().value(),
            Some(3)
        );
        assert!(a.checked_div(&b).is_none());
        assert!(a.is_coprime(&Natural::from_u64(35).unwrap()));
    }

    #[test]
    fn serde_uses_string_prime_keys() {
        let n = Natural::from_u64(180).unwrap();
        let json = serde_json::to_string(&n).unwrap();
        assert_eq!(json, r#"{"2":2,"3":2,"5":1}"#);
        let back: Natural = serde_json::from_str(&json).unwrap();
        assert_eq!(back, n);
        assert!(serde_json::from_str::<Natural>(r#"{"4":1}"#).is_err());
    }

    #[test]
    fn prime_streams() {
        assert_eq!(first_primes(5), vec![2, 3, 5, 7, 11]);
        assert_eq!(primes_above(11, 3), vec![13, 17, 19]);
    }
}

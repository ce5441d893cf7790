//! Integer partitions, partition families, and the hook condition.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

/// Default cap for full enumeration; p(30) = 5604 keeps this instant.
pub const DEFAULT_ENUMERATION_CAP: u32 = 30;

/// Partition of a positive integer; parts kept sorted descending.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    pub fn new(parts: impl IntoIterator<Item = u32>) -> Result<Self> {
        let mut parts: Vec<u32> = parts.into_iter().collect();
        if parts.is_empty() {
            return Err(Error::Input("a partition needs at least one part".into()));
        }
        if parts.contains(&0) {
            return Err(Error::Input("partition parts must be positive".into()));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition { parts })
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn n(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> u32 {
        self.parts.len() as u32
    }

    pub fn max_part(&self) -> u32 {
        self.parts[0]
    }

    pub fn ones(&self) -> u32 {
        self.parts.iter().filter(|&&p| p == 1).count() as u32
    }

    /// Shape (k, 1^{n-k}); both (n) and (1^n) count as hooks.
    pub fn is_hook(&self) -> bool {
        self.parts.iter().skip(1).all(|&p| p == 1)
    }

    pub fn conjugate(&self) -> Partition {
        let len = self.parts[0] as usize;
        let mut cols = vec![0u32; len];
        for &p in &self.parts {
            for c in cols.iter_mut().take(p as usize) {
                *c += 1;
            }
        }
        Partition { parts: cols }
    }
}

// Canonical family order: larger partitions first, descending lexicographically.
impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        other.parts.cmp(&self.parts)
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let strs: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", strs.join(","))
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Accepts `4,2` and exponent notation `2^3,1^2`, with optional parens.
    fn from_str(s: &str) -> Result<Self> {
        let trimmed = s.trim();
        let trimmed = trimmed
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .unwrap_or(trimmed);
        let mut parts = Vec::new();
        for token in trimmed.split(',') {
            let token = token.trim();
            if token.is_empty() {
                return Err(Error::Parse {
                    location: s.trim().to_string(),
                    message: "empty part".into(),
                });
            }
            let (base, count) = match token.split_once('^') {
                Some((b, e)) => (b.trim(), e.trim()),
                None => (token, "1"),
            };
            let part: u32 = base.parse().map_err(|_| Error::Parse {
                location: s.trim().to_string(),
                message: format!("bad part {token:?}"),
            })?;
            let count: u32 = count.parse().map_err(|_| Error::Parse {
                location: s.trim().to_string(),
                message: format!("bad exponent in {token:?}"),
            })?;
            if count > 10_000 {
                return Err(Error::Parse {
                    location: s.trim().to_string(),
                    message: "exponent too large".into(),
                });
            }
            parts.extend(std::iter::repeat(part).take(count as usize));
        }
        Partition::new(parts)
    }
}

/// Finite set of partitions of a common n, deduplicated and canonically ordered.
#[derive(Clone, PartialEq, Eq, Serialize)]
pub struct PartitionFamily {
    n: u32,
    members: BTreeSet<Partition>,
}

impl PartitionFamily {
    pub fn new(n: u32, members: impl IntoIterator<Item = Partition>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Input("family rank n must be positive".into()));
        }
        let members: BTreeSet<Partition> = members.into_iter().collect();
        for m in &members {
            if m.n() != n {
                return Err(Error::Input(format!(
                    "partition ({m}) does not partition {n}"
                )));
            }
        }
        Ok(PartitionFamily { n, members })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Partition> {
        self.members.iter()
    }

    pub fn contains(&self, p: &Partition) -> bool {
        self.members.contains(p)
    }

    pub fn is_subset(&self, other: &PartitionFamily) -> bool {
        self.members.is_subset(&other.members)
    }
}

impl fmt::Display for PartitionFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for m in &self.members {
            writeln!(f, "{m}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for PartitionFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, m) in self.members.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{m:?}")?;
        }
        write!(f, "}} of {}", self.n)
    }
}

fn generate(n: u32, max_part: u32, max_len: u32) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut acc = Vec::new();
    rec_bounded(n, max_part, max_len, &mut acc, &mut out);
    out
}

fn rec_bounded(rem: u32, max_part: u32, slots: u32, acc: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if rem == 0 {
        out.push(Partition {
            parts: acc.clone(),
        });
        return;
    }
    if slots == 0 {
        return;
    }
    let hi = max_part.min(rem);
    let lo = rem.div_ceil(slots);
    let mut p = hi;
    while p >= lo {
        acc.push(p);
        rec_bounded(rem - p, p, slots - 1, acc, out);
        acc.pop();
        if p == 1 {
            break;
        }
        p -= 1;
    }
}

fn rec_exact(rem: u32, max_part: u32, slots: u32, acc: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if slots == 1 {
        if rem >= 1 && rem <= max_part {
            acc.push(rem);
            out.push(Partition {
                parts: acc.clone(),
            });
            acc.pop();
        }
        return;
    }
    let hi = max_part.min(rem.saturating_sub(slots - 1));
    let lo = rem.div_ceil(slots);
    let mut p = hi;
    while p >= lo && p >= 1 {
        acc.push(p);
        rec_exact(rem - p, p, slots - 1, acc, out);
        acc.pop();
        if p == 1 {
            break;
        }
        p -= 1;
    }
}

/// All partitions of n, up to [`DEFAULT_ENUMERATION_CAP`].
pub fn enumerate_all(n: u32) -> Result<PartitionFamily> {
    enumerate_all_capped(n, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_all_capped(n: u32, cap: u32) -> Result<PartitionFamily> {
    if n == 0 || n > cap {
        return Err(Error::Input(format!(
            "n = {n} out of range 1..={cap} for enumeration"
        )));
    }
    PartitionFamily::new(n, generate(n, n, n))
}

/// C(n,k): partitions of n into exactly k parts.
pub fn family_c(n: u32, k: u32) -> Result<PartitionFamily> {
    if n == 0 || k == 0 || k > n {
        return Err(Error::Input(format!("need 1 <= k <= n, got n={n} k={k}")));
    }
    let mut out = Vec::new();
    let mut acc = Vec::new();
    rec_exact(n, n, k, &mut acc, &mut out);
    PartitionFamily::new(n, out)
}

/// S(n,k): partitions of n with max part <= k and k + length <= n + 1.
pub fn family_s(n: u32, k: u32) -> Result<PartitionFamily> {
    if n == 0 || k == 0 || k > n {
        return Err(Error::Input(format!("need 1 <= k <= n, got n={n} k={k}")));
    }
    PartitionFamily::new(n, generate(n, k, n + 1 - k))
}

#[derive(Debug, Clone, Serialize)]
pub struct HookReport {
    /// Largest part over the family.
    pub r: u32,
    /// Longest length over the family.
    pub t: u32,
    pub hooks: Vec<Partition>,
    pub hooked: bool,
}

pub fn hook_report(family: &PartitionFamily) -> Result<HookReport> {
    if family.is_empty() {
        return Err(Error::Input("hook report needs a non-empty family".into()));
    }
    let r = family.iter().map(Partition::max_part).max().unwrap();
    let t = family.iter().map(Partition::len).max().unwrap();
    let hooks: Vec<Partition> = family.iter().filter(|p| p.is_hook()).cloned().collect();
    Ok(HookReport {
        r,
        t,
        hooks,
        hooked: r + t <= family.n() + 1,
    })
}

/// All concatenations {sort(P ++ Q)}; partitions n1 + n2.
pub fn family_product(a: &PartitionFamily, b: &PartitionFamily) -> PartitionFamily {
    let mut members = BTreeSet::new();
    for p in a.iter() {
        for q in b.iter() {
            let parts: Vec<u32> = p.parts().iter().chain(q.parts().iter()).copied().collect();
            members.insert(Partition::new(parts).unwrap());
        }
    }
    PartitionFamily {
        n: a.n() + b.n(),
        members,
    }
}

/// True iff no partition outside the family can be added while staying hooked.
pub fn is_maximal_hooked(family: &PartitionFamily) -> Result<bool> {
    let rep = hook_report(family)?;
    if !rep.hooked {
        return Err(Error::Input("family is not hooked".into()));
    }
    let n = family.n();
    for p in enumerate_all(n)?.iter() {
        if family.contains(p) {
            continue;
        }
        let r = rep.r.max(p.max_part());
        let t = rep.t.max(p.len());
        if r + t <= n + 1 {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(n: u32, specs: &[&str]) -> PartitionFamily {
        PartitionFamily::new(n, specs.iter().map(|s| s.parse().unwrap())).unwrap()
    }

    #[test]
    fn enumerate_small() {
        assert_eq!(enumerate_all(1).unwrap().len(), 1);
        let p4 = enumerate_all(4).unwrap();
        assert_eq!(p4, fam(4, &["4", "3,1", "2,2", "2,1,1", "1,1,1,1"]));
        // p(9) = 30, cross-checked against the Euler recurrence in the
        // property suite
        assert_eq!(enumerate_all(9).unwrap().len(), 30);
        assert!(enumerate_all(0).is_err());
        assert!(enumerate_all(31).is_err());
        assert!(enumerate_all_capped(31, 40).is_ok());
    }

    #[test]
    fn family_c_examples() {
        assert_eq!(family_c(4, 2).unwrap(), fam(4, &["3,1", "2,2"]));
        assert_eq!(family_c(5, 5).unwrap(), fam(5, &["1,1,1,1,1"]));
        let c83 = family_c(8, 3).unwrap();
        assert!(c83.contains(&"6,1,1".parse().unwrap()));
        assert_eq!(c83.iter().map(Partition::max_part).max(), Some(6));
        assert!(family_c(4, 5).is_err());
        assert!(family_c(4, 0).is_err());
    }

    #[test]
    fn family_s_examples() {
        assert_eq!(family_s(4, 2).unwrap(), fam(4, &["2,2", "2,1,1"]));
        assert_eq!(
            family_s(6, 4).unwrap(),
            fam(6, &["4,2", "4,1,1", "3,3", "3,2,1", "2,2,2"])
        );
        assert_eq!(
            family_s(7, 5).unwrap(),
            fam(7, &["3,2,2", "3,3,1", "4,2,1", "5,1,1", "4,3", "5,2"])
        );
    }

    #[test]
    fn hook_report_examples() {
        let s106 = family_s(10, 6).unwrap();
        let rep = hook_report(&s106).unwrap();
        assert_eq!((rep.r, rep.t, rep.hooked), (6, 5, true));
        assert_eq!(rep.hooks, vec!["6,1,1,1,1".parse().unwrap()]);

        let rep = hook_report(&fam(8, &["6,1,1", "2,2,2,2"])).unwrap();
        assert_eq!((rep.r, rep.t, rep.hooked), (6, 4, false));

        let rep = hook_report(&fam(5, &["5"])).unwrap();
        assert_eq!((rep.r, rep.t, rep.hooked), (5, 1, true));

        assert!(hook_report(&PartitionFamily::new(3, []).unwrap()).is_err());
    }

    #[test]
    fn family_product_examples() {
        let a = fam(2, &["2"]);
        let b = fam(2, &["1,1"]);
        assert_eq!(family_product(&a, &b), fam(4, &["2,1,1"]));

        let s42 = family_s(4, 2).unwrap();
        let one = fam(1, &["1"]);
        assert_eq!(family_product(&s42, &one), fam(5, &["2,2,1", "2,1,1,1"]));

        assert_eq!(
            family_product(&fam(4, &["2,2"]), &fam(3, &["3"])),
            fam(7, &["3,2,2"])
        );
    }

    #[test]
    fn maximal_hooked_examples() {
        assert!(is_maximal_hooked(&family_s(6, 4).unwrap()).unwrap());
        assert!(!is_maximal_hooked(&fam(4, &["2,2"])).unwrap());
        for n in 1..=8 {
            assert!(is_maximal_hooked(&family_s(n, 1).unwrap()).unwrap());
        }
        assert!(is_maximal_hooked(&fam(8, &["6,1,1", "2,2,2,2"])).is_err());
    }

    #[test]
    fn parsing_and_display() {
        let p: Partition = "2^3,1^2".parse().unwrap();
        assert_eq!(p.parts(), &[2, 2, 2, 1, 1]);
        let p: Partition = "(6,1,1)".parse().unwrap();
        assert_eq!(p.to_string(), "6,1,1");
        assert!("".parse::<Partition>().is_err());
        assert!("3,0".parse::<Partition>().is_err());
        assert!("a,b".parse::<Partition>().is_err());
    }

    #[test]
    fn hooks_and_conjugates() {
        assert!("5,1,1".parse::<Partition>().unwrap().is_hook());
        assert!("4".parse::<Partition>().unwrap().is_hook());
        assert!("1,1,1".parse::<Partition>().unwrap().is_hook());
        assert!(!"3,2".parse::<Partition>().unwrap().is_hook());
        let p: Partition = "4,2,1".parse().unwrap();
        assert_eq!(p.conjugate().parts(), &[3, 2, 1, 1]);
        assert_eq!(p.conjugate().conjugate(), p);
    }

    #[test]
    fn canonical_family_order() {
        let s64 = family_s(6, 4).unwrap();
        let listed: Vec<String> = s64.iter().map(|p| p.to_string()).collect();
        assert_eq!(listed, vec!["4,2", "4,1,1", "3,3", "3,2,1", "2,2,2"]);
    }
}

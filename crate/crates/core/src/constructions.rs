//! Named generators: corner groups, chain groups, two-part realizers, and the
//! worked example groups with their expected spectra.

use std::collections::BTreeMap;

use crate::arith::{primes_above, Natural};
use crate::error::{Error, Result};
use crate::groups::{direct_sum, BGroup, RigidPiece};
use crate::partitions::{family_c, family_s, Partition, PartitionFamily};
use crate::types::{fresh_types, PrimeType};

fn nat(n: u64) -> Natural {
    Natural::from_u64(n).expect("construction constants factor")
}

fn check_pairwise_coprime(qs: &[u64]) -> Result<Vec<Natural>> {
    let mut out = Vec::with_capacity(qs.len());
    for &q in qs {
        if q <= 1 {
            return Err(Error::Input(format!("index entries must exceed 1, got {q}")));
        }
        out.push(Natural::from_u64(q)?);
    }
    for i in 0..out.len() {
        for j in i + 1..out.len() {
            if !out[i].is_coprime(&out[j]) {
                return Err(Error::Input(format!(
                    "{} and {} are not coprime",
                    qs[i], qs[j]
                )));
            }
        }
    }
    Ok(out)
}

fn max_prime(ns: &[Natural]) -> u64 {
    ns.iter()
        .flat_map(|n| n.primes().max())
        .max()
        .unwrap_or(2)
}

/// Corner group: a rank-k homogeneous part of one type plus a rigid piece of
/// rank n-k+1 whose coefficients are (1, e/q_1, ..., e/q_{n-k}); its spectrum
/// is all partitions of n into k parts.
pub fn corner_group(n: u32, k: u32, q: &[u64]) -> Result<BGroup> {
    if k == 0 || k > n {
        return Err(Error::Input(format!("need 1 <= k <= n, got n={n} k={k}")));
    }
    if q.len() as u32 != n - k {
        return Err(Error::Input(format!(
            "need n-k = {} index entries, got {}",
            n - k,
            q.len()
        )));
    }
    let qs = check_pairwise_coprime(q)?;
    let e = qs.iter().fold(Natural::one(), |acc, q| acc.mul(q));
    let mut types = fresh_types(1 + q.len(), max_prime(&qs));
    let homog = types.remove(0);
    let mut pieces: Vec<RigidPiece> = Vec::new();
    for _ in 1..k {
        pieces.push(RigidPiece::rank_one(homog.clone()));
    }
    if q.is_empty() {
        pieces.push(RigidPiece::rank_one(homog));
    } else {
        // combined generator (e_1 + ... + e_{n-k}) u_1 + e_1 v_1 + ... with
        // e_i = e/q_i; the gcd with e of the u_1 coefficient reduces to 1
        let mut piece_types = vec![homog];
        let mut coeffs = vec![Natural::one()];
        for (t, qi) in types.into_iter().zip(&qs) {
            piece_types.push(t);
            coeffs.push(e.checked_div(qi).unwrap());
        }
        pieces.push(RigidPiece::new(piece_types, e, coeffs)?);
    }
    direct_sum(pieces)
}

/// Chain group [t1 t2; p1] + [t2 t3; p2] + ... of rank 2n on n+1 fresh types;
/// realizes all partitions of 2n into n parts.
pub fn chain_group(n: u32, p: &[u64]) -> Result<BGroup> {
    if n == 0 {
        return Err(Error::Input("chain length must be positive".into()));
    }
    if p.len() as u32 != n {
        return Err(Error::Input(format!(
            "need {n} index entries, got {}",
            p.len()
        )));
    }
    let ps = check_pairwise_coprime(p)?;
    let types = fresh_types(n as usize + 1, max_prime(&ps));
    let mut pieces = Vec::new();
    for (i, pi) in ps.into_iter().enumerate() {
        pieces.push(RigidPiece::with_unit_coeffs(
            vec![types[i].clone(), types[i + 1].clone()],
            pi,
        )?);
    }
    direct_sum(pieces)
}

/// Realizer of the two-part-bounded family S(n,2): floor(n/2) rank-two pieces
/// on one type pair with distinct prime indices, plus a rank-one for odd n.
pub fn sn2_realizer(n: u32) -> Result<BGroup> {
    if n < 2 {
        return Err(Error::Input(format!("need n >= 2, got {n}")));
    }
    let copies = (n / 2) as usize;
    let indices = primes_above(2, copies);
    let floor = indices.last().copied().unwrap_or(2);
    let types = fresh_types(2, floor);
    let mut pieces = Vec::new();
    for &q in &indices {
        pieces.push(RigidPiece::with_unit_coeffs(types.clone(), nat(q))?);
    }
    if n % 2 == 1 {
        pieces.push(RigidPiece::rank_one(types[0].clone()));
    }
    direct_sum(pieces)
}

/// Rank-n group with a single indecomposable decomposition (n).
pub fn indecomposable_of_rank(n: u32) -> Result<BGroup> {
    if n == 0 {
        return Err(Error::Input("rank must be positive".into()));
    }
    let types = fresh_types(n as usize, 2);
    if n == 1 {
        return direct_sum(vec![RigidPiece::rank_one(types.into_iter().next().unwrap())]);
    }
    direct_sum(vec![RigidPiece::with_unit_coeffs(types, nat(2))?])
}

/// Homogeneous completely decomposable group of rank n.
pub fn completely_decomposable(n: u32) -> Result<BGroup> {
    if n == 0 {
        return Err(Error::Input("rank must be positive".into()));
    }
    let t = fresh_types(1, 2).pop().unwrap();
    direct_sum((0..n).map(|_| RigidPiece::rank_one(t.clone())).collect())
}

/// Expected spectrum of a named example.
#[derive(Clone, Debug)]
pub enum Expectation {
    Exact(PartitionFamily),
    Contains(Vec<Partition>),
}

/// A worked example group with its expected spectrum and, where relevant, the
/// name of the group it is nearly isomorphic to.
#[derive(Clone, Debug)]
pub struct NamedExample {
    pub name: &'static str,
    pub description: &'static str,
    pub group: BGroup,
    pub expected: Expectation,
    pub near_iso_to: Option<&'static str>,
}

pub const EXAMPLE_NAMES: [&str; 8] = [
    "s42", "s53", "s53_alt", "s64", "s64_42", "s64_33", "corner_thm", "ex_522_432",
];

fn s53_types() -> Vec<PrimeType> {
    fresh_types(3, 7)
}

fn s64_types() -> Vec<PrimeType> {
    fresh_types(4, 11)
}

fn ex9_types() -> Vec<PrimeType> {
    fresh_types(7, 11)
}

fn pair(ts: &[PrimeType], i: usize, j: usize) -> Vec<PrimeType> {
    vec![ts[i].clone(), ts[j].clone()]
}

/// Returns the named example group, built with the smallest admissible primes.
pub fn named_example(name: &str) -> Result<NamedExample> {
    let ex = match name {
        "s42" => {
            let ts = fresh_types(2, 5);
            NamedExample {
                name: "s42",
                description: "two rank-two pieces on one type pair; realizes S(4,2)",
                group: direct_sum(vec![
                    RigidPiece::with_unit_coeffs(ts.clone(), nat(3))?,
                    RigidPiece::with_unit_coeffs(ts, nat(5))?,
                ])?,
                expected: Expectation::Exact(family_s(4, 2)?),
                near_iso_to: None,
            }
        }
        "s53" => {
            let ts = s53_types();
            NamedExample {
                name: "s53",
                description: "[t1 t2; 35] + [t1 t3; 3] + [t2]; realizes S(5,3)",
                group: direct_sum(vec![
                    RigidPiece::with_unit_coeffs(pair(&ts, 0, 1), nat(35))?,
                    RigidPiece::with_unit_coeffs(pair(&ts, 0, 2), nat(3))?,
                    RigidPiece::rank_one(ts[1].clone()),
                ])?,
                expected: Expectation::Exact(family_s(5, 3)?),
                near_iso_to: None,
            }
        }
        "s53_alt" => {
            let ts = s53_types();
            NamedExample {
                name: "s53_alt",
                description: "rank-3 piece plus a rank-2 piece in the class of s53",
                group: direct_sum(vec![
                    RigidPiece::new(
                        vec![ts[0].clone(), ts[1].clone(), ts[2].clone()],
                        nat(15),
                        vec![nat(1), nat(3), nat(5)],
                    )?,
                    RigidPiece::with_unit_coeffs(pair(&ts, 0, 1), nat(7))?,
                ])?,
                expected: Expectation::Exact(family_s(5, 3)?),
                near_iso_to: Some("s53"),
            }
        }
        "s64" => {
            let ts = s64_types();
            NamedExample {
                name: "s64",
                description: "[t1 t2; 55] + [t1 t3; 7] + [t2 t4; 3]; realizes S(6,4)",
                group: direct_sum(vec![
                    RigidPiece::with_unit_coeffs(pair(&ts, 0, 1), nat(55))?,
                    RigidPiece::with_unit_coeffs(pair(&ts, 0, 2), nat(7))?,
                    RigidPiece::with_unit_coeffs(pair(&ts, 1, 3), nat(3))?,
                ])?,
                expected: Expectation::Exact(family_s(6, 4)?),
                near_iso_to: None,
            }
        }
        "s64_42" => {
            let ts = s64_types();
            NamedExample {
                name: "s64_42",
                description: "rank-4 piece with index 21 plus [t1 t2; 55] in the class of s64",
                group: direct_sum(vec![
                    RigidPiece::new(
                        ts.clone(),
                        nat(21),
                        vec![nat(3), nat(7), nat(3), nat(7)],
                    )?,
                    RigidPiece::with_unit_coeffs(pair(&ts, 0, 1), nat(55))?,
                ])?,
                expected: Expectation::Exact(family_s(6, 4)?),
                near_iso_to: Some("s64"),
            }
        }
        "s64_33" => {
            let ts = s64_types();
            NamedExample {
                name: "s64_33",
                description: "two rank-3 pieces with indices 35 and 33 in the class of s64",
                group: direct_sum(vec![
                    RigidPiece::new(
                        vec![ts[0].clone(), ts[1].clone(), ts[2].clone()],
                        nat(35),
                        vec![nat(1), nat(7), nat(5)],
                    )?,
                    RigidPiece::new(
                        vec![ts[0].clone(), ts[1].clone(), ts[3].clone()],
                        nat(33),
                        vec![nat(3), nat(1), nat(11)],
                    )?,
                ])?,
                expected: Expectation::Exact(family_s(6, 4)?),
                near_iso_to: Some("s64"),
            }
        }
        "corner_thm" => NamedExample {
            name: "corner_thm",
            description: "corner group with n=4, k=2, q=(3,5); realizes C(4,2)",
            group: corner_group(4, 2, &[3, 5])?,
            expected: Expectation::Exact(family_c(4, 2)?),
            near_iso_to: None,
        },
        "ex_522_432" => {
            let ts = ex9_types();
            NamedExample {
                name: "ex_522_432",
                description: "rank-9 group realizing (5,2,2), (5,3,1), (6,2,1), (7,1,1), (4,3,2)",
                group: direct_sum(vec![
                    RigidPiece::new(
                        vec![
                            ts[0].clone(),
                            ts[2].clone(),
                            ts[3].clone(),
                            ts[4].clone(),
                            ts[5].clone(),
                        ],
                        nat(15),
                        vec![nat(1), nat(3), nat(3), nat(5), nat(5)],
                    )?,
                    RigidPiece::with_unit_coeffs(pair(&ts, 0, 1), nat(7))?,
                    RigidPiece::with_unit_coeffs(pair(&ts, 1, 6), nat(11))?,
                ])?,
                expected: Expectation::Contains(
                    ["5,2,2", "4,3,2", "5,3,1", "6,2,1", "7,1,1"]
                        .iter()
                        .map(|s| s.parse().unwrap())
                        .collect(),
                ),
                near_iso_to: None,
            }
        }
        other => {
            return Err(Error::Input(format!(
                "unknown example {other:?}; known names: {}",
                EXAMPLE_NAMES.join(", ")
            )))
        }
    };
    Ok(ex)
}

/// Companion of `ex_522_432` sharing its invariants while decomposing as
/// (4,3,2): proves the class realizes both shapes.
pub fn ex_522_432_companion() -> Result<BGroup> {
    let ts = ex9_types();
    direct_sum(vec![
        RigidPiece::new(
            vec![ts[0].clone(), ts[1].clone(), ts[2].clone(), ts[3].clone()],
            nat(35),
            vec![nat(1), nat(5), nat(7), nat(7)],
        )?,
        RigidPiece::new(
            vec![ts[0].clone(), ts[4].clone(), ts[5].clone()],
            nat(3),
            vec![nat(1), nat(1), nat(1)],
        )?,
        RigidPiece::with_unit_coeffs(pair(&ts, 1, 6), nat(11))?,
    ])
}

/// Mu values a named example is documented to have, keyed by type label.
pub fn documented_mu(name: &str) -> Option<BTreeMap<&'static str, u64>> {
    match name {
        "s53" | "s53_alt" => Some(BTreeMap::from([("t1", 105), ("t2", 35), ("t3", 3)])),
        "s64" | "s64_42" | "s64_33" => Some(BTreeMap::from([
            ("t1", 385),
            ("t2", 165),
            ("t3", 7),
            ("t4", 3),
        ])),
        "ex_522_432" => Some(BTreeMap::from([
            ("t1", 105),
            ("t2", 77),
            ("t3", 5),
            ("t4", 5),
            ("t5", 3),
            ("t6", 3),
            ("t7", 11),
        ])),
        _ => None,
    }
}

/// Distinct odd primes for generic pairwise-coprime index arguments.
pub fn default_index_primes(count: usize) -> Vec<u64> {
    primes_above(2, count)
}

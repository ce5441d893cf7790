//! Indecomposable decompositions and partition spectra of a class.
//!
//! The engine runs on invariant data. Direct decompositions factor the
//! invariants: the regulator index splits into coprime parts, so every prime
//! of the index is owned by exactly one summand, and a summand owning p must
//! contain one copy of every type whose mu is divisible by p. Conversely any
//! such factorization into valid indecomposable classes is realized by
//! concrete standard-form pieces with the same invariants, and nearly
//! isomorphic groups share their decomposition partitions. Decompositions of
//! the class therefore biject with set partitions of the index primes whose
//! induced summands are valid, surplus type copies splitting off as rank-one
//! summands.

use std::collections::{BTreeMap, BTreeSet};

use crate::arith::Natural;
use crate::error::{Error, Result};
use crate::groups::{
    direct_sum, realize_from_invariants, BGroup, Dsu, InvariantData, RigidPiece, TypeInvariant,
};
use crate::partitions::{Partition, PartitionFamily};
use crate::types::PrimeType;

/// Resource caps for the enumeration.
#[derive(Clone, Copy, Debug)]
pub struct DecompLimits {
    pub max_rank: u32,
    pub max_primes: usize,
}

impl Default for DecompLimits {
    fn default() -> Self {
        DecompLimits {
            max_rank: 12,
            max_primes: 8,
        }
    }
}

/// Multiset of indecomposable classes, canonically sorted.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Decomposition {
    summands: Vec<InvariantData>,
}

impl Decomposition {
    pub fn summands(&self) -> &[InvariantData] {
        &self.summands
    }

    /// Rank multiset of the summands.
    pub fn shape(&self) -> Partition {
        Partition::new(self.summands.iter().map(InvariantData::total_rank)).unwrap()
    }
}

/// Per-prime view of invariant data over indexed type slots.
struct Problem {
    types: Vec<PrimeType>,
    ranks: Vec<u32>,
    primes: Vec<PrimeInfo>,
    /// Every prime of e attains its maximal valuation at two or more types.
    realizable: bool,
}

struct PrimeInfo {
    prime: u64,
    support: u32,
    valuations: Vec<u32>,
}

impl Problem {
    fn build(d: &InvariantData, limits: &DecompLimits) -> Result<Problem> {
        let total = d.total_rank();
        if total > limits.max_rank {
            return Err(Error::Resource {
                dimension: "total rank",
                actual: total as usize,
                cap: limits.max_rank as usize,
            });
        }
        let e = d.regulator_index();
        if e.num_primes() > limits.max_primes {
            return Err(Error::Resource {
                dimension: "primes in the regulator index",
                actual: e.num_primes(),
                cap: limits.max_primes,
            });
        }
        let mut types = Vec::new();
        let mut ranks = Vec::new();
        let mut mus = Vec::new();
        for (t, inv) in d.entries() {
            types.push(t.clone());
            ranks.push(inv.rank);
            mus.push(inv.mu.clone());
        }
        assert!(types.len() <= 32, "type count bounded by the rank cap");
        let mut primes = Vec::new();
        let mut realizable = true;
        for p in e.primes() {
            let vmax = e.valuation(p);
            let valuations: Vec<u32> = mus.iter().map(|m| m.valuation(p)).collect();
            let mut support = 0u32;
            let mut attained = 0;
            for (i, &v) in valuations.iter().enumerate() {
                if v > 0 {
                    support |= 1 << i;
                }
                if v == vmax {
                    attained += 1;
                }
            }
            if attained < 2 {
                realizable = false;
            }
            primes.push(PrimeInfo {
                prime: p,
                support,
                valuations,
            });
        }
        Ok(Problem {
            types,
            ranks,
            primes,
            realizable,
        })
    }
}

pub(crate) struct LeafBlock {
    pub prime_idxs: Vec<usize>,
    pub mask: u32,
}

/// Walks all set partitions of the prime set whose blocks respect the
/// per-type copy counts and have connected support hypergraphs. Returns early
/// when the visitor asks to stop.
pub(crate) fn walk_partitions(
    ranks: &[u32],
    supports: &[u32],
    on_leaf: &mut dyn FnMut(&[LeafBlock]) -> bool,
) {
    let mut blocks: Vec<LeafBlock> = Vec::new();
    let mut counts = vec![0u32; ranks.len()];
    rec(0, supports, ranks, &mut blocks, &mut counts, on_leaf);
}

fn counts_allow(add: u32, counts: &[u32], ranks: &[u32]) -> bool {
    let mut m = add;
    while m != 0 {
        let i = m.trailing_zeros() as usize;
        if counts[i] + 1 > ranks[i] {
            return false;
        }
        m &= m - 1;
    }
    true
}

fn bump(add: u32, counts: &mut [u32], up: bool) {
    let mut m = add;
    while m != 0 {
        let i = m.trailing_zeros() as usize;
        if up {
            counts[i] += 1;
        } else {
            counts[i] -= 1;
        }
        m &= m - 1;
    }
}

fn rec(
    next: usize,
    supports: &[u32],
    ranks: &[u32],
    blocks: &mut Vec<LeafBlock>,
    counts: &mut Vec<u32>,
    on_leaf: &mut dyn FnMut(&[LeafBlock]) -> bool,
) -> bool {
    if next == supports.len() {
        if blocks.iter().all(|b| block_connected(b, supports)) {
            return on_leaf(blocks);
        }
        return false;
    }
    let s = supports[next];
    for bi in 0..blocks.len() {
        let add = s & !blocks[bi].mask;
        if counts_allow(add, counts, ranks) {
            bump(add, counts, true);
            blocks[bi].prime_idxs.push(next);
            blocks[bi].mask |= s;
            let stop = rec(next + 1, supports, ranks, blocks, counts, on_leaf);
            let b = &mut blocks[bi];
            b.prime_idxs.pop();
            b.mask &= !add;
            bump(add, counts, false);
            if stop {
                return true;
            }
        }
    }
    if counts_allow(s, counts, ranks) {
        bump(s, counts, true);
        blocks.push(LeafBlock {
            prime_idxs: vec![next],
            mask: s,
        });
        let stop = rec(next + 1, supports, ranks, blocks, counts, on_leaf);
        blocks.pop();
        bump(s, counts, false);
        if stop {
            return true;
        }
    }
    false
}

fn block_connected(block: &LeafBlock, supports: &[u32]) -> bool {
    let n = block.mask.count_ones();
    if n <= 1 {
        return true;
    }
    let bits: Vec<usize> = (0..32).filter(|i| block.mask >> i & 1 == 1).collect();
    let pos: BTreeMap<usize, usize> = bits.iter().enumerate().map(|(k, &b)| (b, k)).collect();
    let mut dsu = Dsu::new(bits.len());
    for &pi in &block.prime_idxs {
        let s = supports[pi];
        let mut anchor = None;
        let mut m = s;
        while m != 0 {
            let i = m.trailing_zeros() as usize;
            match anchor {
                None => anchor = Some(pos[&i]),
                Some(a) => dsu.union(a, pos[&i]),
            }
            m &= m - 1;
        }
    }
    let root = dsu.find(0);
    (1..bits.len()).all(|i| dsu.find(i) == root)
}

fn leaf_shape(blocks: &[LeafBlock], total_rank: u32) -> Partition {
    let mut parts: Vec<u32> = blocks.iter().map(|b| b.mask.count_ones()).collect();
    let used: u32 = parts.iter().sum();
    parts.extend(std::iter::repeat(1).take((total_rank - used) as usize));
    Partition::new(parts).unwrap()
}

/// Shape set for raw mask problems; shared with the realizability search.
pub(crate) fn spectrum_shapes(ranks: &[u32], supports: &[u32]) -> BTreeSet<Partition> {
    let total: u32 = ranks.iter().sum();
    let mut shapes = BTreeSet::new();
    walk_partitions(ranks, supports, &mut |blocks| {
        shapes.insert(leaf_shape(blocks, total));
        false
    });
    shapes
}

/// Every multiset of valid indecomposable classes reconstructing `d`.
pub fn enumerate_decompositions(
    d: &InvariantData,
    limits: &DecompLimits,
) -> Result<Vec<Decomposition>> {
    let problem = Problem::build(d, limits)?;
    let mut out: BTreeSet<Decomposition> = BTreeSet::new();
    if !problem.realizable {
        return Ok(Vec::new());
    }
    let supports: Vec<u32> = problem.primes.iter().map(|p| p.support).collect();
    walk_partitions(&problem.ranks, &supports, &mut |blocks| {
        out.insert(materialize(&problem, blocks));
        false
    });
    Ok(out.into_iter().collect())
}

fn materialize(problem: &Problem, blocks: &[LeafBlock]) -> Decomposition {
    let mut summands = Vec::new();
    let mut used = vec![0u32; problem.types.len()];
    for block in blocks {
        let mut entries = BTreeMap::new();
        let mut m = block.mask;
        while m != 0 {
            let i = m.trailing_zeros() as usize;
            used[i] += 1;
            let mut mu = Natural::one();
            for &pi in &block.prime_idxs {
                let info = &problem.primes[pi];
                let v = info.valuations[i];
                if v > 0 {
                    mu = mu.mul(&Natural::from_factors([(info.prime, v)]).unwrap());
                }
            }
            entries.insert(problem.types[i].clone(), TypeInvariant { rank: 1, mu });
            m &= m - 1;
        }
        summands.push(InvariantData::new(entries).unwrap());
    }
    for (i, t) in problem.types.iter().enumerate() {
        for _ in used[i]..problem.ranks[i] {
            let entries = BTreeMap::from([(
                t.clone(),
                TypeInvariant {
                    rank: 1,
                    mu: Natural::one(),
                },
            )]);
            summands.push(InvariantData::new(entries).unwrap());
        }
    }
    summands.sort();
    Decomposition { summands }
}

/// Materializes a decomposition as a concrete group: one standard-form piece
/// per summand, rank-one pieces for the mu = 1 summands. The result validates
/// and has the invariant data the decomposition factors.
pub fn realize_decomposition(dec: &Decomposition) -> Result<BGroup> {
    let mut pieces = Vec::new();
    for summand in dec.summands() {
        let types: Vec<PrimeType> = summand.entries().keys().cloned().collect();
        let first = summand.entries().values().next().unwrap();
        if types.len() == 1 && first.mu.is_one() {
            pieces.push(RigidPiece::rank_one(types.into_iter().next().unwrap()));
        } else {
            let mu: BTreeMap<PrimeType, Natural> = summand
                .entries()
                .iter()
                .map(|(t, e)| (t.clone(), e.mu.clone()))
                .collect();
            pieces.push(realize_from_invariants(types, &mu)?);
        }
    }
    direct_sum(pieces)
}

/// The partition spectrum: rank multisets over all decompositions.
pub fn partition_spectrum(d: &InvariantData, limits: &DecompLimits) -> Result<PartitionFamily> {
    let problem = Problem::build(d, limits)?;
    let total = d.total_rank();
    if !problem.realizable {
        return PartitionFamily::new(total, []);
    }
    let supports: Vec<u32> = problem.primes.iter().map(|p| p.support).collect();
    let shapes = spectrum_shapes(&problem.ranks, &supports);
    PartitionFamily::new(total, shapes)
}

/// Membership of `p` in the spectrum, with early exit.
pub fn realizes(d: &InvariantData, p: &Partition, limits: &DecompLimits) -> Result<bool> {
    if p.n() != d.total_rank() {
        return Err(Error::Input(format!(
            "partition of {} cannot be realized by a class of rank {}",
            p.n(),
            d.total_rank()
        )));
    }
    let problem = Problem::build(d, limits)?;
    if !problem.realizable {
        return Ok(false);
    }
    let supports: Vec<u32> = problem.primes.iter().map(|pi| pi.support).collect();
    let total = d.total_rank();
    let mut found = false;
    walk_partitions(&problem.ranks, &supports, &mut |blocks| {
        if leaf_shape(blocks, total) == *p {
            found = true;
            return true;
        }
        false
    });
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{direct_sum, RigidPiece};
    use crate::partitions::{family_c, family_s};
    use crate::types::fresh_types;

    fn nat(n: u64) -> Natural {
        Natural::from_u64(n).unwrap()
    }

    fn limits() -> DecompLimits {
        DecompLimits::default()
    }

    #[test]
    fn two_decompositions_of_a_chain() {
        let ts = fresh_types(3, 11);
        let g = direct_sum(vec![
            RigidPiece::with_unit_coeffs(vec![ts[0].clone(), ts[1].clone()], nat(3)).unwrap(),
            RigidPiece::with_unit_coeffs(vec![ts[1].clone(), ts[2].clone()], nat(5)).unwrap(),
        ])
        .unwrap();
        let decs = enumerate_decompositions(&g.invariant_data(), &limits()).unwrap();
        assert_eq!(decs.len(), 2);
        let shapes: BTreeSet<Partition> = decs.iter().map(Decomposition::shape).collect();
        let expected: BTreeSet<Partition> =
            ["2,2".parse().unwrap(), "3,1".parse().unwrap()].into();
        assert_eq!(shapes, expected);
    }

    #[test]
    fn completely_decomposable_has_one_decomposition() {
        let ts = fresh_types(3, 2);
        let g = direct_sum(vec![
            RigidPiece::rank_one(ts[0].clone()),
            RigidPiece::rank_one(ts[1].clone()),
            RigidPiece::rank_one(ts[2].clone()),
        ])
        .unwrap();
        let decs = enumerate_decompositions(&g.invariant_data(), &limits()).unwrap();
        assert_eq!(decs.len(), 1);
        assert_eq!(decs[0].shape(), "1,1,1".parse().unwrap());
        assert_eq!(decs[0].summands().len(), 3);
    }

    #[test]
    fn clipped_piece_has_unique_decomposition() {
        let ts = fresh_types(5, 7);
        let piece = RigidPiece::new(
            ts,
            nat(15435),
            vec![nat(9), nat(7), nat(3), nat(5), nat(1)],
        )
        .unwrap();
        let d = piece.invariant_data();
        assert!(d.is_clipped());
        let decs = enumerate_decompositions(&d, &limits()).unwrap();
        assert_eq!(decs.len(), 1);
        assert_eq!(decs[0].shape(), "5".parse().unwrap());
        let spec = partition_spectrum(&d, &limits()).unwrap();
        assert_eq!(spec.len(), 1);
        assert!(spec.contains(&"5".parse().unwrap()));
    }

    #[test]
    fn s64_spectrum() {
        let ts = fresh_types(4, 11);
        let g = direct_sum(vec![
            RigidPiece::with_unit_coeffs(vec![ts[0].clone(), ts[1].clone()], nat(55)).unwrap(),
            RigidPiece::with_unit_coeffs(vec![ts[0].clone(), ts[2].clone()], nat(7)).unwrap(),
            RigidPiece::with_unit_coeffs(vec![ts[1].clone(), ts[3].clone()], nat(3)).unwrap(),
        ])
        .unwrap();
        let spec = partition_spectrum(&g.invariant_data(), &limits()).unwrap();
        assert_eq!(spec, family_s(6, 4).unwrap());
    }

    #[test]
    fn realizes_examples() {
        let ts = fresh_types(2, 11);
        let g = direct_sum(vec![
            RigidPiece::with_unit_coeffs(ts.clone(), nat(3)).unwrap(),
            RigidPiece::with_unit_coeffs(ts.clone(), nat(5)).unwrap(),
        ])
        .unwrap();
        let d = g.invariant_data();
        assert!(realizes(&d, &"2,1,1".parse().unwrap(), &limits()).unwrap());
        assert!(realizes(&d, &"2,2".parse().unwrap(), &limits()).unwrap());
        assert!(!realizes(&d, &"1,1,1,1".parse().unwrap(), &limits()).unwrap());
        // rank mismatch: a partition of 5 against a rank-4 class
        assert!(realizes(&d, &"3,2".parse().unwrap(), &limits()).is_err());
    }

    #[test]
    fn decompositions_materialize_with_equal_invariants() {
        let ts = fresh_types(4, 11);
        let g = direct_sum(vec![
            RigidPiece::with_unit_coeffs(vec![ts[0].clone(), ts[1].clone()], nat(55)).unwrap(),
            RigidPiece::with_unit_coeffs(vec![ts[0].clone(), ts[2].clone()], nat(7)).unwrap(),
            RigidPiece::with_unit_coeffs(vec![ts[1].clone(), ts[3].clone()], nat(3)).unwrap(),
        ])
        .unwrap();
        let d = g.invariant_data();
        for dec in enumerate_decompositions(&d, &limits()).unwrap() {
            let realized = realize_decomposition(&dec).unwrap();
            assert!(realized.validate().ok);
            assert_eq!(realized.invariant_data(), d);
            let shape = Partition::new(realized.pieces().iter().map(|p| p.rank())).unwrap();
            assert_eq!(shape, dec.shape());
        }
    }

    #[test]
    fn chain_of_two_gives_c42() {
        let ts = fresh_types(3, 11);
        let g = direct_sum(vec![
            RigidPiece::with_unit_coeffs(vec![ts[0].clone(), ts[1].clone()], nat(3)).unwrap(),
            RigidPiece::with_unit_coeffs(vec![ts[1].clone(), ts[2].clone()], nat(5)).unwrap(),
        ])
        .unwrap();
        let spec = partition_spectrum(&g.invariant_data(), &limits()).unwrap();
        assert_eq!(spec, family_c(4, 2).unwrap());
    }

    #[test]
    fn resource_caps() {
        let ts = fresh_types(13, 50);
        let pieces: Vec<RigidPiece> = ts.into_iter().map(RigidPiece::rank_one).collect();
        let g = direct_sum(pieces).unwrap();
        match partition_spectrum(&g.invariant_data(), &limits()) {
            Err(Error::Resource { dimension, .. }) => assert_eq!(dimension, "total rank"),
            other => panic!("expected resource error, got {other:?}"),
        }
    }

    #[test]
    fn unrealizable_data_has_empty_spectrum() {
        // mu = (p, q) on two types: each prime attains its max at one type only
        let ts = fresh_types(2, 11);
        let entries = BTreeMap::from([
            (
                ts[0].clone(),
                TypeInvariant {
                    rank: 1,
                    mu: nat(3),
                },
            ),
            (
                ts[1].clone(),
                TypeInvariant {
                    rank: 1,
                    mu: nat(5),
                },
            ),
        ]);
        let d = InvariantData::new(entries).unwrap();
        assert!(partition_spectrum(&d, &limits()).unwrap().is_empty());
        assert!(enumerate_decompositions(&d, &limits()).unwrap().is_empty());
    }
}

//! Shared generators and oracles for the integration suites.

use std::collections::BTreeMap;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use bgroup::arith::Natural;
use bgroup::groups::{
    direct_sum, realize_from_invariants, BGroup, InvariantData, RigidPiece, TypeInvariant,
};
use bgroup::types::{fresh_types, PrimeType};

pub const INDEX_PRIME_POOL: [u64; 8] = [3, 5, 7, 11, 13, 17, 19, 23];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn nat(n: u64) -> Natural {
    Natural::from_u64(n).unwrap()
}

/// Least m >= 1 with m*c == 0 in (Z/e)^r, by linear scan; the independent
/// oracle for the gcd closed form.
pub fn ord_bruteforce(e: u64, coeffs: &[u64]) -> u64 {
    (1..=e)
        .find(|m| coeffs.iter().all(|c| (m * (c % e)) % e == 0))
        .unwrap()
}

/// Partition counts p(0..=n) by the pentagonal-number recurrence.
pub fn partition_counts(n: usize) -> Vec<u64> {
    let mut p = vec![0u64; n + 1];
    p[0] = 1;
    for i in 1..=n {
        let mut total: i64 = 0;
        let mut k: i64 = 1;
        loop {
            let g1 = (k * (3 * k - 1) / 2) as usize;
            if g1 > i {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            total += sign * p[i - g1] as i64;
            let g2 = (k * (3 * k + 1) / 2) as usize;
            if g2 <= i {
                total += sign * p[i - g2] as i64;
            }
            k += 1;
        }
        p[i] = total as u64;
    }
    p
}

/// A valid rigid piece on a subset of `types`, indecomposable by making the
/// first prime's support the whole subset (a clique keeps the frame
/// connected). Deeper valuations are exercised through exponent 2.
pub fn random_indecomposable_piece(
    rng: &mut ChaCha8Rng,
    types: &[PrimeType],
    primes: &[u64],
) -> RigidPiece {
    assert!(types.len() >= 2 && !primes.is_empty());
    let mut mu: BTreeMap<PrimeType, Natural> = types
        .iter()
        .map(|t| (t.clone(), Natural::one()))
        .collect();
    for (i, &p) in primes.iter().enumerate() {
        let exp = rng.gen_range(1..=2u32);
        let support: Vec<&PrimeType> = if i == 0 {
            types.iter().collect()
        } else {
            let size = rng.gen_range(2..=types.len());
            let mut idx: Vec<usize> = (0..types.len()).collect();
            idx.shuffle(rng);
            idx.truncate(size);
            idx.into_iter().map(|j| &types[j]).collect()
        };
        let factor = Natural::from_factors([(p, exp)]).unwrap();
        for t in support {
            let m = mu.get_mut(t).unwrap();
            *m = m.mul(&factor);
        }
    }
    realize_from_invariants(types.to_vec(), &mu).expect("generated piece is valid")
}

/// Random group: 1..=3 pieces over a shared pool of fresh types, pairwise
/// disjoint index primes, rank-one pieces mixed in.
pub fn random_bgroup(rng: &mut ChaCha8Rng, max_rank: u32) -> BGroup {
    let pool = fresh_types(5, *INDEX_PRIME_POOL.last().unwrap());
    let mut primes: Vec<u64> = INDEX_PRIME_POOL.to_vec();
    primes.shuffle(rng);
    let mut next_prime = 0usize;
    let mut pieces: Vec<RigidPiece> = Vec::new();
    let mut rank_left = max_rank;
    let piece_count = rng.gen_range(1..=3);
    for _ in 0..piece_count {
        if rank_left == 0 {
            break;
        }
        let want_rank_one = rng.gen_bool(0.3) || rank_left == 1;
        if want_rank_one {
            pieces.push(RigidPiece::rank_one(
                pool[rng.gen_range(0..pool.len())].clone(),
            ));
            rank_left -= 1;
            continue;
        }
        let size = rng.gen_range(2..=(rank_left.min(4) as usize));
        let mut idx: Vec<usize> = (0..pool.len()).collect();
        idx.shuffle(rng);
        let subset: Vec<PrimeType> = idx[..size].iter().map(|&j| pool[j].clone()).collect();
        let n_primes = rng.gen_range(1..=2usize).min(primes.len() - next_prime);
        if n_primes == 0 {
            break;
        }
        let chunk = &primes[next_prime..next_prime + n_primes];
        next_prime += n_primes;
        pieces.push(random_indecomposable_piece(rng, &subset, chunk));
        rank_left -= size as u32;
    }
    if pieces.is_empty() {
        pieces.push(RigidPiece::rank_one(pool[0].clone()));
    }
    direct_sum(pieces).expect("generated group is valid")
}

/// Invariant data assembled directly from a support pattern with the given
/// per-prime exponents (same exponent across the support).
pub fn data_from_supports(
    ranks: &[u32],
    supports: &[(u64, u32, u32)], // (prime, exponent, support mask)
    type_floor: u64,
) -> InvariantData {
    let types = fresh_types(ranks.len(), type_floor);
    let mut entries = BTreeMap::new();
    for (i, t) in types.iter().enumerate() {
        let mut mu = Natural::one();
        for &(p, exp, mask) in supports {
            if mask >> i & 1 == 1 {
                mu = mu.mul(&Natural::from_factors([(p, exp)]).unwrap());
            }
        }
        entries.insert(
            t.clone(),
            TypeInvariant {
                rank: ranks[i],
                mu,
            },
        );
    }
    InvariantData::new(entries).unwrap()
}

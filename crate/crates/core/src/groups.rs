//! Standard-form rigid pieces, their direct sums, and near-isomorphism
//! invariants.
//!
//! A rigid piece is stored as an antichain typeset, a regulator index e, and
//! generator coefficients alpha_tau dividing e, relative to a fixed e-basis.
//! Its invariants are mu_tau = e / alpha_tau. A group is a direct sum of
//! pieces with pairwise coprime indices; invariants multiply across pieces.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::arith::{gcd_base_factored, Natural};
use crate::error::{Error, Result, ValidationReport, Violation, ViolationCode};
use crate::types::PrimeType;

/// Union-find over 0..n.
pub(crate) struct Dsu(Vec<usize>);

impl Dsu {
    pub(crate) fn new(n: usize) -> Self {
        Dsu((0..n).collect())
    }

    pub(crate) fn find(&mut self, mut i: usize) -> usize {
        while self.0[i] != i {
            self.0[i] = self.0[self.0[i]];
            i = self.0[i];
        }
        i
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra != rb {
            self.0[ra] = rb;
        }
    }
}

/// Rigid piece in standard form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RigidPiece {
    types: Vec<PrimeType>,
    index: Natural,
    coeffs: Vec<Natural>,
}

impl RigidPiece {
    /// Pure rank-one piece; the regulator criterion forces e = 1.
    pub fn rank_one(t: PrimeType) -> RigidPiece {
        RigidPiece {
            types: vec![t],
            index: Natural::one(),
            coeffs: vec![Natural::one()],
        }
    }

    pub fn new(types: Vec<PrimeType>, index: Natural, coeffs: Vec<Natural>) -> Result<RigidPiece> {
        if types.len() != coeffs.len() {
            return Err(Error::Input(format!(
                "{} types but {} coefficients",
                types.len(),
                coeffs.len()
            )));
        }
        let piece = RigidPiece {
            types,
            index,
            coeffs,
        };
        match piece.validate().violations.into_iter().next() {
            Some(v) => Err(Error::Validation(v)),
            None => Ok(piece),
        }
    }

    /// Standard shorthand [tau_1 ... tau_r; e] with all coefficients 1.
    pub fn with_unit_coeffs(types: Vec<PrimeType>, index: Natural) -> Result<RigidPiece> {
        let coeffs = vec![Natural::one(); types.len()];
        RigidPiece::new(types, index, coeffs)
    }

    /// Checks every standard-form clause, reporting the first violated one.
    pub fn validate(&self) -> ValidationReport {
        if self.types.is_empty() {
            return ValidationReport::invalid(Violation::new(
                ViolationCode::EmptyTypeset,
                "piece has an empty typeset",
            ));
        }
        for i in 0..self.types.len() {
            for j in i + 1..self.types.len() {
                if self.types[i].is_comparable(&self.types[j]) {
                    return ValidationReport::invalid(
                        Violation::new(
                            ViolationCode::ComparableTypes,
                            format!(
                                "types {} and {} are comparable",
                                self.types[i], self.types[j]
                            ),
                        )
                        .with_type(self.types[j].label()),
                    );
                }
            }
        }
        for t in &self.types {
            for p in self.index.primes() {
                if t.inverted_primes().contains(&p) {
                    return ValidationReport::invalid(
                        Violation::new(
                            ViolationCode::NotEFree,
                            format!("type {t} inverts prime {p} of the index"),
                        )
                        .with_type(t.label())
                        .with_prime(p),
                    );
                }
            }
        }
        for (t, c) in self.types.iter().zip(&self.coeffs) {
            if !c.divides(&self.index) {
                return ValidationReport::invalid(
                    Violation::new(
                        ViolationCode::CoefficientNotDivisor,
                        format!("coefficient {c} at {t} does not divide index {}", self.index),
                    )
                    .with_type(t.label()),
                );
            }
        }
        if self.types.len() == 1 {
            if !self.index.is_one() {
                return ValidationReport::invalid(Violation::new(
                    ViolationCode::RankOneIndex,
                    format!("rank-one piece must have index 1, got {}", self.index),
                ));
            }
            return ValidationReport::valid();
        }
        // Regulator criterion: gcd(e, coefficients away from tau) = 1 for all tau.
        for (i, t) in self.types.iter().enumerate() {
            let others: Vec<Natural> = self
                .coeffs
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, c)| c.clone())
                .collect();
            let g = gcd_base_factored(&self.index, &others);
            if !g.is_one() {
                return ValidationReport::invalid(
                    Violation::new(
                        ViolationCode::RegulatorCriterion,
                        format!("regulator criterion fails at {t}: gcd = {g}"),
                    )
                    .with_type(t.label()),
                );
            }
        }
        ValidationReport::valid()
    }

    pub fn rank(&self) -> u32 {
        self.types.len() as u32
    }

    pub fn typeset(&self) -> &[PrimeType] {
        &self.types
    }

    pub fn index(&self) -> &Natural {
        &self.index
    }

    pub fn coefficients(&self) -> &[Natural] {
        &self.coeffs
    }

    /// mu_tau = e / alpha_tau.
    pub fn mu(&self) -> BTreeMap<PrimeType, Natural> {
        self.types
            .iter()
            .zip(&self.coeffs)
            .map(|(t, c)| (t.clone(), self.index.checked_div(c).unwrap()))
            .collect()
    }

    pub fn frame(&self) -> Frame {
        Frame::from_mu(self.mu())
    }

    /// Rank one, or rigid with connected frame.
    pub fn is_indecomposable(&self) -> bool {
        self.rank() == 1 || self.frame().is_connected()
    }

    pub fn invariant_data(&self) -> InvariantData {
        let entries = self
            .mu()
            .into_iter()
            .map(|(t, mu)| (t, TypeInvariant { rank: 1, mu }))
            .collect();
        InvariantData { entries }
    }
}

/// mu-invariants of a validated piece.
pub fn mu_invariants(piece: &RigidPiece) -> BTreeMap<PrimeType, Natural> {
    piece.mu()
}

/// Graph on critical types; edge where mu-invariants share a prime.
#[derive(Clone, Debug, Serialize)]
pub struct Frame {
    vertices: Vec<PrimeType>,
    edges: Vec<(usize, usize)>,
}

impl Frame {
    pub fn from_mu(mu: impl IntoIterator<Item = (PrimeType, Natural)>) -> Frame {
        let items: Vec<(PrimeType, Natural)> = mu.into_iter().collect();
        let mut edges = Vec::new();
        for i in 0..items.len() {
            for j in i + 1..items.len() {
                if !items[i].1.gcd(&items[j].1).is_one() {
                    edges.push((i, j));
                }
            }
        }
        Frame {
            vertices: items.into_iter().map(|(t, _)| t).collect(),
            edges,
        }
    }

    pub fn vertices(&self) -> &[PrimeType] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn is_connected(&self) -> bool {
        if self.vertices.len() <= 1 {
            return true;
        }
        let mut dsu = Dsu::new(self.vertices.len());
        for &(a, b) in &self.edges {
            dsu.union(a, b);
        }
        let root = dsu.find(0);
        (1..self.vertices.len()).all(|i| dsu.find(i) == root)
    }
}

/// Direct sum of rigid pieces with pairwise coprime indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BGroup {
    pieces: Vec<RigidPiece>,
}

impl BGroup {
    pub fn pieces(&self) -> &[RigidPiece] {
        &self.pieces
    }

    pub fn rank(&self) -> u32 {
        self.pieces.iter().map(RigidPiece::rank).sum()
    }

    /// Product of piece indices; the regulator index of the sum.
    pub fn total_index(&self) -> Natural {
        self.pieces
            .iter()
            .fold(Natural::one(), |acc, p| acc.mul(p.index()))
    }

    pub fn validate(&self) -> ValidationReport {
        if self.pieces.is_empty() {
            return ValidationReport::invalid(Violation::new(
                ViolationCode::EmptyTypeset,
                "group has no pieces",
            ));
        }
        for (pi, piece) in self.pieces.iter().enumerate() {
            let rep = piece.validate();
            if let Some(v) = rep.violations.into_iter().next() {
                return ValidationReport::invalid(v.with_piece(pi));
            }
        }
        for i in 0..self.pieces.len() {
            for j in i + 1..self.pieces.len() {
                if !self.pieces[i].index().is_coprime(self.pieces[j].index()) {
                    let g = self.pieces[i].index().gcd(self.pieces[j].index());
                    return ValidationReport::invalid(
                        Violation::new(
                            ViolationCode::IndicesNotCoprime,
                            format!(
                                "pieces {i} and {j} have indices sharing {g}"
                            ),
                        )
                        .with_piece(j),
                    );
                }
            }
        }
        // Union of typesets must be an antichain; equal types may recur.
        for i in 0..self.pieces.len() {
            for j in i..self.pieces.len() {
                for (a, s) in self.pieces[i].typeset().iter().enumerate() {
                    for (b, t) in self.pieces[j].typeset().iter().enumerate() {
                        if i == j && b <= a {
                            continue;
                        }
                        if s != t && s.is_comparable(t) {
                            return ValidationReport::invalid(
                                Violation::new(
                                    ViolationCode::ComparableTypes,
                                    format!(
                                        "types {s} (piece {i}) and {t} (piece {j}) are comparable"
                                    ),
                                )
                                .with_piece(j)
                                .with_type(t.label()),
                            );
                        }
                    }
                }
            }
        }
        // Global e-freeness against the full index.
        let total = self.total_index();
        for (pi, piece) in self.pieces.iter().enumerate() {
            for t in piece.typeset() {
                for p in total.primes() {
                    if t.inverted_primes().contains(&p) {
                        return ValidationReport::invalid(
                            Violation::new(
                                ViolationCode::NotEFree,
                                format!("type {t} inverts prime {p} of the total index"),
                            )
                            .with_piece(pi)
                            .with_type(t.label())
                            .with_prime(p),
                        );
                    }
                }
            }
        }
        ValidationReport::valid()
    }

    /// Per-type homogeneous rank and multiplied mu-invariants.
    pub fn invariant_data(&self) -> InvariantData {
        let mut entries: BTreeMap<PrimeType, TypeInvariant> = BTreeMap::new();
        for piece in &self.pieces {
            for (t, mu) in piece.mu() {
                match entries.get_mut(&t) {
                    Some(e) => {
                        e.rank += 1;
                        e.mu = e.mu.mul(&mu);
                    }
                    None => {
                        entries.insert(t, TypeInvariant { rank: 1, mu });
                    }
                }
            }
        }
        InvariantData { entries }
    }
}

pub fn direct_sum(pieces: Vec<RigidPiece>) -> Result<BGroup> {
    let g = BGroup { pieces };
    match g.validate().violations.into_iter().next() {
        Some(v) => Err(Error::Validation(v)),
        None => Ok(g),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct TypeInvariant {
    pub rank: u32,
    pub mu: Natural,
}

/// Near-isomorphism class data: per type, homogeneous rank and mu-invariant.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct InvariantData {
    entries: BTreeMap<PrimeType, TypeInvariant>,
}

impl InvariantData {
    pub fn new(entries: BTreeMap<PrimeType, TypeInvariant>) -> Result<InvariantData> {
        if entries.is_empty() {
            return Err(Error::Input("invariant data needs at least one type".into()));
        }
        for e in entries.values() {
            if e.rank == 0 {
                return Err(Error::Input("homogeneous ranks must be positive".into()));
            }
        }
        // Every prime of every mu must be absent from every type's inversions.
        for (t, _) in entries.iter() {
            for (s, inv) in entries.iter() {
                for p in inv.mu.primes() {
                    if t.inverted_primes().contains(&p) {
                        return Err(Error::Input(format!(
                            "type {t} inverts prime {p} of mu({s})"
                        )));
                    }
                }
            }
        }
        Ok(InvariantData { entries })
    }

    pub fn entries(&self) -> &BTreeMap<PrimeType, TypeInvariant> {
        &self.entries
    }

    pub fn get(&self, t: &PrimeType) -> Option<&TypeInvariant> {
        self.entries.get(t)
    }

    pub fn total_rank(&self) -> u32 {
        self.entries.values().map(|e| e.rank).sum()
    }

    /// lcm of all mu; for group data this equals the product of piece indices.
    pub fn regulator_index(&self) -> Natural {
        self.entries
            .values()
            .fold(Natural::one(), |acc, e| acc.lcm(&e.mu))
    }

    /// Rigid (all ranks 1) with every mu > 1.
    pub fn is_clipped(&self) -> bool {
        self.entries
            .values()
            .all(|e| e.rank == 1 && !e.mu.is_one())
    }
}

/// The classification criterion: equal regulator shape and equal mu maps.
pub fn near_iso_equal(a: &InvariantData, b: &InvariantData) -> bool {
    a == b
}

/// Builds the standard-form piece with invariants mu: e = lcm(mu),
/// alpha = e/mu. Fails when a prime attains its maximal valuation at fewer
/// than two types, or when a type is not e-free.
pub fn realize_from_invariants(
    types: Vec<PrimeType>,
    mu: &BTreeMap<PrimeType, Natural>,
) -> Result<RigidPiece> {
    if types.is_empty() {
        return Err(Error::Input("no types given".into()));
    }
    for t in &types {
        if !mu.contains_key(t) {
            return Err(Error::Input(format!("missing mu for type {t}")));
        }
    }
    if mu.len() != types.len() {
        return Err(Error::Input("mu map does not match the typeset".into()));
    }
    let e = types
        .iter()
        .fold(Natural::one(), |acc, t| acc.lcm(&mu[t]));
    if types.len() == 1 {
        if !e.is_one() {
            return Err(Error::Validation(Violation::new(
                ViolationCode::RankOneIndex,
                format!("rank-one data requires mu = 1, got {e}"),
            )));
        }
        return Ok(RigidPiece::rank_one(types.into_iter().next().unwrap()));
    }
    for t in &types {
        if !t.is_e_free(&e) {
            let p = e
                .primes()
                .find(|p| t.inverted_primes().contains(p))
                .unwrap();
            return Err(Error::Validation(
                Violation::new(
                    ViolationCode::NotEFree,
                    format!("type {t} inverts prime {p} of e = {e}"),
                )
                .with_type(t.label())
                .with_prime(p),
            ));
        }
    }
    for p in e.primes() {
        let vmax = e.valuation(p);
        let attained: Vec<&PrimeType> = types
            .iter()
            .filter(|t| mu[t].valuation(p) == vmax)
            .collect();
        if attained.len() < 2 {
            return Err(Error::Validation(
                Violation::new(
                    ViolationCode::RegulatorCriterion,
                    format!(
                        "prime {p} attains its maximal valuation only at type {}",
                        attained[0]
                    ),
                )
                .with_type(attained[0].label())
                .with_prime(p),
            ));
        }
    }
    let coeffs: Vec<Natural> = types
        .iter()
        .map(|t| e.checked_div(&mu[t]).unwrap())
        .collect();
    RigidPiece::new(types, e, coeffs)
}

/// Result of merging two overlapping pieces: the combined piece plus the
/// rank-one types split off, one per shared type.
#[derive(Clone, Debug)]
pub struct MergeOutcome {
    pub merged: RigidPiece,
    pub split_off: Vec<PrimeType>,
}

/// Combines two standard-form pieces sharing d >= 1 critical types into one
/// piece of full typeset plus d rank-one summands, conserving invariant data.
/// Coefficients: alpha*beta on shared types, e2*alpha on x1-only types,
/// e1*beta on x2-only types.
pub fn merge_overlap(x1: &RigidPiece, x2: &RigidPiece) -> Result<MergeOutcome> {
    if !x1.index().is_coprime(x2.index()) {
        let g = x1.index().gcd(x2.index());
        return Err(Error::Validation(Violation::new(
            ViolationCode::IndicesNotCoprime,
            format!("indices share {g}"),
        )));
    }
    for s in x1.typeset() {
        for t in x2.typeset() {
            if s != t && s.is_comparable(t) {
                return Err(Error::Validation(
                    Violation::new(
                        ViolationCode::ComparableTypes,
                        format!("types {s} and {t} are comparable"),
                    )
                    .with_type(t.label()),
                ));
            }
        }
    }
    let shared: Vec<PrimeType> = x1
        .typeset()
        .iter()
        .filter(|t| x2.typeset().contains(t))
        .cloned()
        .collect();
    if shared.is_empty() {
        return Err(Error::Validation(Violation::new(
            ViolationCode::NoOverlap,
            "typesets do not overlap; use a plain direct sum",
        )));
    }
    let e1 = x1.index();
    let e2 = x2.index();
    let mu2 = x2.mu();
    let mut types = Vec::new();
    let mut coeffs = Vec::new();
    for (t, a) in x1.typeset().iter().zip(x1.coefficients()) {
        if shared.contains(t) {
            // gcd(e2*alpha, e1*beta) = alpha*beta for coprime indices
            let beta = x2.index().checked_div(&mu2[t]).unwrap();
            types.push(t.clone());
            coeffs.push(a.mul(&beta));
        } else {
            types.push(t.clone());
            coeffs.push(e2.mul(a));
        }
    }
    for (t, b) in x2.typeset().iter().zip(x2.coefficients()) {
        if !shared.contains(t) {
            types.push(t.clone());
            coeffs.push(e1.mul(b));
        }
    }
    let merged = RigidPiece::new(types, e1.mul(e2), coeffs)?;
    Ok(MergeOutcome {
        merged,
        split_off: shared,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Natural;
    use crate::types::fresh_types;

    fn nat(n: u64) -> Natural {
        Natural::from_u64(n).unwrap()
    }

    /// e = 3^2*5*7^3 with alpha = (3^2, 7, 3, 5, 1).
    fn example_piece() -> RigidPiece {
        let ts = fresh_types(5, 7);
        RigidPiece::new(
            ts,
            nat(15435),
            vec![nat(9), nat(7), nat(3), nat(5), nat(1)],
        )
        .unwrap()
    }

    #[test]
    fn example_piece_is_valid_with_exact_mu() {
        let piece = example_piece();
        let mu: Vec<u64> = piece
            .typeset()
            .iter()
            .map(|t| piece.mu()[t].value_u64().unwrap())
            .collect();
        assert_eq!(mu, vec![1715, 2205, 5145, 3087, 15435]);
        assert!(piece.is_indecomposable());
    }

    #[test]
    fn rank_two_criterion_forces_unit_coefficients() {
        let ts = fresh_types(2, 7);
        let err = RigidPiece::new(ts.clone(), nat(15), vec![nat(3), nat(1)]);
        match err {
            Err(Error::Validation(v)) => {
                assert_eq!(v.code, ViolationCode::RegulatorCriterion);
                assert_eq!(v.type_label.as_deref(), Some("t2"));
            }
            other => panic!("expected criterion failure, got {other:?}"),
        }
        let ok = RigidPiece::with_unit_coeffs(ts, nat(15)).unwrap();
        let mu = ok.mu();
        assert!(mu.values().all(|m| m.value_u64() == Some(15)));
    }

    #[test]
    fn rank_one_pieces() {
        let t = fresh_types(1, 7).pop().unwrap();
        let p = RigidPiece::rank_one(t.clone());
        assert!(p.validate().ok);
        assert!(p.mu()[&t].is_one());
        assert!(p.is_indecomposable());
        let bad = RigidPiece::new(vec![t], nat(3), vec![nat(1)]);
        match bad {
            Err(Error::Validation(v)) => assert_eq!(v.code, ViolationCode::RankOneIndex),
            other => panic!("expected rank-one violation, got {other:?}"),
        }
    }

    #[test]
    fn validation_clause_order() {
        let ts = fresh_types(2, 40);
        let comparable = PrimeType::new("sub", []).unwrap();
        let rep = RigidPiece {
            types: vec![ts[0].clone(), comparable],
            index: nat(6),
            coeffs: vec![nat(1), nat(1)],
        }
        .validate();
        assert_eq!(rep.first().unwrap().code, ViolationCode::ComparableTypes);

        let not_free = PrimeType::new("bad", [3]).unwrap();
        let rep = RigidPiece {
            types: vec![ts[0].clone(), not_free],
            index: nat(6),
            coeffs: vec![nat(1), nat(1)],
        }
        .validate();
        assert_eq!(rep.first().unwrap().code, ViolationCode::NotEFree);

        let rep = RigidPiece {
            types: ts.clone(),
            index: nat(6),
            coeffs: vec![nat(5), nat(1)],
        }
        .validate();
        assert_eq!(
            rep.first().unwrap().code,
            ViolationCode::CoefficientNotDivisor
        );
    }

    #[test]
    fn frames() {
        let piece = example_piece();
        assert!(piece.frame().is_connected());

        let ts = fresh_types(2, 10);
        let mu: BTreeMap<PrimeType, Natural> =
            [(ts[0].clone(), nat(3)), (ts[1].clone(), nat(5))].into();
        assert!(Frame::from_mu(mu).edges().is_empty());

        let ts = fresh_types(3, 10);
        let mu: BTreeMap<PrimeType, Natural> = [
            (ts[0].clone(), nat(3)),
            (ts[1].clone(), nat(15)),
            (ts[2].clone(), nat(5)),
        ]
        .into();
        let frame = Frame::from_mu(mu);
        assert_eq!(frame.edges().len(), 2);
        assert!(frame.is_connected());
    }

    #[test]
    fn decomposable_piece_detected_by_frame() {
        // alpha = (q, q, p, p) with e = pq passes the criterion but the frame
        // splits into two components.
        let ts = fresh_types(4, 15);
        let piece = RigidPiece::new(
            ts,
            nat(15),
            vec![nat(5), nat(5), nat(3), nat(3)],
        )
        .unwrap();
        assert!(!piece.is_indecomposable());
    }

    #[test]
    fn direct_sum_validation() {
        let ts = fresh_types(2, 11);
        let a = RigidPiece::with_unit_coeffs(ts.clone(), nat(5)).unwrap();
        let b = RigidPiece::with_unit_coeffs(ts.clone(), nat(7)).unwrap();
        let g = direct_sum(vec![a.clone(), b]).unwrap();
        assert_eq!(g.rank(), 4);

        let c = RigidPiece::with_unit_coeffs(ts.clone(), nat(10)).unwrap();
        match direct_sum(vec![a.clone(), c]) {
            Err(Error::Validation(v)) => assert_eq!(v.code, ViolationCode::IndicesNotCoprime),
            other => panic!("expected coprimality failure, got {other:?}"),
        }

        let sub = PrimeType::new("sub", []).unwrap();
        let tiny = RigidPiece::rank_one(sub);
        match direct_sum(vec![a, tiny]) {
            Err(Error::Validation(v)) => assert_eq!(v.code, ViolationCode::ComparableTypes),
            other => panic!("expected comparable-types failure, got {other:?}"),
        }
    }

    #[test]
    fn global_e_freeness_across_pieces() {
        let t1 = PrimeType::new("t1", [13]).unwrap();
        let t2 = PrimeType::new("t2", [17]).unwrap();
        // t3 inverts 5, the index of the *other* piece
        let t3 = PrimeType::new("t3", [5]).unwrap();
        let a = RigidPiece::with_unit_coeffs(vec![t1, t3], nat(3)).unwrap();
        let b = RigidPiece::with_unit_coeffs(vec![t2.clone(), t2.clone()], nat(5));
        // t2 repeated in one piece is comparable with itself: invalid piece
        assert!(b.is_err());
        let t4 = PrimeType::new("t4", [19]).unwrap();
        let b = RigidPiece::with_unit_coeffs(vec![t2, t4], nat(5)).unwrap();
        match direct_sum(vec![a, b]) {
            Err(Error::Validation(v)) => {
                assert_eq!(v.code, ViolationCode::NotEFree);
                assert_eq!(v.prime, Some(5));
            }
            other => panic!("expected e-freeness failure, got {other:?}"),
        }
    }

    fn s64_types() -> Vec<PrimeType> {
        fresh_types(4, 11)
    }

    fn s64_group() -> BGroup {
        let ts = s64_types();
        direct_sum(vec![
            RigidPiece::with_unit_coeffs(vec![ts[0].clone(), ts[1].clone()], nat(55)).unwrap(),
            RigidPiece::with_unit_coeffs(vec![ts[0].clone(), ts[2].clone()], nat(7)).unwrap(),
            RigidPiece::with_unit_coeffs(vec![ts[1].clone(), ts[3].clone()], nat(3)).unwrap(),
        ])
        .unwrap()
    }

    #[test]
    fn invariant_data_of_sum() {
        let ts = s64_types();
        let data = s64_group().invariant_data();
        let expect = [(0u32, 385u64, 2u32), (1, 165, 2), (2, 7, 1), (3, 3, 1)];
        for (i, mu, rank) in expect {
            let e = data.get(&ts[i as usize]).unwrap();
            assert_eq!(e.mu.value_u64(), Some(mu));
            assert_eq!(e.rank, rank);
        }
        assert_eq!(data.total_rank(), 6);
        assert_eq!(data.regulator_index().value_u64(), Some(1155));
    }

    #[test]
    fn single_rank_one_data() {
        let t = fresh_types(1, 2).pop().unwrap();
        let g = direct_sum(vec![RigidPiece::rank_one(t.clone())]).unwrap();
        let d = g.invariant_data();
        let e = d.get(&t).unwrap();
        assert_eq!(e.rank, 1);
        assert!(e.mu.is_one());
        assert!(!d.is_clipped());
    }

    #[test]
    fn near_iso_checks() {
        let d = s64_group().invariant_data();
        assert!(near_iso_equal(&d, &d));
        let ts = fresh_types(2, 11);
        let p = RigidPiece::with_unit_coeffs(ts.clone(), nat(3)).unwrap();
        let q = RigidPiece::with_unit_coeffs(ts, nat(5)).unwrap();
        assert!(!near_iso_equal(
            &p.invariant_data(),
            &q.invariant_data()
        ));
    }

    #[test]
    fn clipped_detection() {
        let ts = fresh_types(2, 15);
        let p = RigidPiece::with_unit_coeffs(ts, nat(15)).unwrap();
        assert!(p.invariant_data().is_clipped());
        assert!(!s64_group().invariant_data().is_clipped());
    }

    #[test]
    fn realize_round_trip_and_failures() {
        let piece = example_piece();
        let rebuilt =
            realize_from_invariants(piece.typeset().to_vec(), &piece.mu()).unwrap();
        assert_eq!(rebuilt.index(), piece.index());
        assert_eq!(rebuilt.coefficients(), piece.coefficients());

        let ts = fresh_types(2, 15);
        let mu: BTreeMap<PrimeType, Natural> =
            [(ts[0].clone(), nat(15)), (ts[1].clone(), nat(15))].into();
        let p = realize_from_invariants(ts.clone(), &mu).unwrap();
        assert!(p.coefficients().iter().all(Natural::is_one));

        let mu: BTreeMap<PrimeType, Natural> =
            [(ts[0].clone(), nat(3)), (ts[1].clone(), nat(5))].into();
        match realize_from_invariants(ts, &mu) {
            Err(Error::Validation(v)) => {
                assert_eq!(v.code, ViolationCode::RegulatorCriterion);
                assert!(v.prime == Some(3) || v.prime == Some(5));
            }
            other => panic!("expected criterion failure, got {other:?}"),
        }
    }

    #[test]
    fn inflated_index_breaks_validity() {
        // 29 is e-free for every type of the example piece
        let piece = example_piece();
        let e = piece.index().mul(&nat(29));
        let coeffs: Vec<Natural> = piece.coefficients().iter().map(|c| c.mul(&nat(29))).collect();
        let rep = RigidPiece {
            types: piece.typeset().to_vec(),
            index: e,
            coeffs,
        }
        .validate();
        assert!(!rep.ok);
        assert_eq!(rep.first().unwrap().code, ViolationCode::RegulatorCriterion);
    }

    #[test]
    fn merge_examples() {
        // [t1 t2; 5] + [t1 t2; 7] -> [t1 t2; 35] plus both shared types
        let ts = fresh_types(2, 11);
        let x1 = RigidPiece::with_unit_coeffs(ts.clone(), nat(5)).unwrap();
        let x2 = RigidPiece::with_unit_coeffs(ts.clone(), nat(7)).unwrap();
        let out = merge_overlap(&x1, &x2).unwrap();
        assert_eq!(out.merged.index().value_u64(), Some(35));
        assert!(out.merged.coefficients().iter().all(Natural::is_one));
        assert_eq!(out.split_off.len(), 2);

        // [t1 t2; 55] + [t1 t3; 7] -> [t1 t2 t3; 385] with coefficients (1, 7, 55)
        let ts = s64_types();
        let x1 =
            RigidPiece::with_unit_coeffs(vec![ts[0].clone(), ts[1].clone()], nat(55)).unwrap();
        let x2 =
            RigidPiece::with_unit_coeffs(vec![ts[0].clone(), ts[2].clone()], nat(7)).unwrap();
        let out = merge_overlap(&x1, &x2).unwrap();
        assert_eq!(out.merged.index().value_u64(), Some(385));
        let coeffs: Vec<u64> = out
            .merged
            .coefficients()
            .iter()
            .map(|c| c.value_u64().unwrap())
            .collect();
        assert_eq!(coeffs, vec![1, 7, 55]);
        let mu: Vec<u64> = out
            .merged
            .typeset()
            .iter()
            .map(|t| out.merged.mu()[t].value_u64().unwrap())
            .collect();
        assert_eq!(mu, vec![385, 55, 7]);
        assert_eq!(out.split_off, vec![ts[0].clone()]);

        // indecomposability is preserved
        assert!(x1.is_indecomposable() && x2.is_indecomposable());
        assert!(out.merged.is_indecomposable());

        // invariant data is conserved against the plain direct sum
        let summed = direct_sum(vec![x1.clone(), x2.clone()]).unwrap();
        let mut pieces = vec![out.merged.clone()];
        pieces.extend(out.split_off.iter().cloned().map(RigidPiece::rank_one));
        let merged_group = direct_sum(pieces).unwrap();
        assert!(near_iso_equal(
            &summed.invariant_data(),
            &merged_group.invariant_data()
        ));

        // no overlap is an error
        let ts4 = fresh_types(4, 11);
        let a = RigidPiece::with_unit_coeffs(vec![ts4[0].clone(), ts4[1].clone()], nat(3)).unwrap();
        let b = RigidPiece::with_unit_coeffs(vec![ts4[2].clone(), ts4[3].clone()], nat(5)).unwrap();
        match merge_overlap(&a, &b) {
            Err(Error::Validation(v)) => assert_eq!(v.code, ViolationCode::NoOverlap),
            other => panic!("expected no-overlap error, got {other:?}"),
        }
    }
}

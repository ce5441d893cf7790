//! Obstruction screening and bounded exhaustive search for groups realizing a
//! partition family, plus the verdict table over the S(n,k) grid.
//!
//! Candidates are enumerated at the invariant level up to relabeling of types
//! and primes. Only the prime-sharing pattern can influence the spectrum: a
//! candidate is a rank vector plus a multiset of supports recording which
//! types each index prime touches. Valuations deeper than 1 and the actual
//! prime values are quotiented out; a randomized suite checks that spectra
//! are invariant under both.
//!
//! Negative verdicts are always "refuted within budget": the enumeration is
//! finite while the corresponding impossibility arguments are symbolic in the
//! primes. Exhaustion statistics are kept in the verdict log.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{first_primes, Natural};
use crate::constructions::{
    completely_decomposable, corner_group, default_index_primes, indecomposable_of_rank,
    named_example, sn2_realizer,
};
use crate::decomp::{
    enumerate_decompositions, partition_spectrum, realize_decomposition, spectrum_shapes,
    DecompLimits,
};
use crate::error::{Error, Result};
use crate::groups::{BGroup, InvariantData, TypeInvariant};
use crate::partitions::{family_s, hook_report, Partition, PartitionFamily};
use crate::types::fresh_types;

/// Enumeration budget for one search.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SearchBudget {
    pub max_primes: usize,
    pub max_exponent: u32,
    pub max_types: usize,
    #[serde(skip)]
    pub time_cap: Duration,
}

impl SearchBudget {
    /// Default budget: 6 primes, exponent 2, n types, 60 s.
    pub fn default_for(n: u32) -> SearchBudget {
        SearchBudget {
            max_primes: 6,
            max_exponent: 2,
            max_types: n as usize,
            time_cap: Duration::from_secs(60),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.max_primes == 0
            || self.max_exponent == 0
            || self.max_types == 0
            || self.time_cap.is_zero()
        {
            return Err(Error::Input("budget fields must all be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    Contains,
    Equals,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Obstruction {
    HookCondition { r: u32, t: u32, n: u32 },
    MultipleHooks { hooks: Vec<Partition> },
    BlagoPair { p: Partition, q: Partition },
}

impl fmt::Display for Obstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Obstruction::HookCondition { r, t, n } => {
                write!(f, "hook condition fails: {r} + {t} > {}", n + 1)
            }
            Obstruction::MultipleHooks { hooks } => {
                let hs: Vec<String> = hooks.iter().map(|h| format!("({h})")).collect();
                write!(f, "more than one hook: {}", hs.join(", "))
            }
            Obstruction::BlagoPair { p, q } => {
                write!(f, "pair ({p}) / ({q}) violates the two-partition bound")
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum VerdictStatus {
    Realized,
    RefutedWithinBudget,
    Obstructed,
    Unknown,
}

/// Machine-readable trail of one search.
#[derive(Clone, Debug, Default, Serialize)]
pub struct SearchLog {
    pub nodes: u64,
    pub candidates: u64,
    pub elapsed_ms: u128,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub status: VerdictStatus,
    pub witness: Option<BGroup>,
    pub obstruction: Option<Obstruction>,
    pub log: SearchLog,
}

impl Verdict {
    fn new(status: VerdictStatus) -> Verdict {
        Verdict {
            status,
            witness: None,
            obstruction: None,
            log: SearchLog::default(),
        }
    }
}

/// Both partitions of n satisfy: every part of one is at most
/// n - length(other) + 1.
pub fn blago_pair_check(p: &Partition, q: &Partition) -> Result<bool> {
    if p.n() != q.n() {
        return Err(Error::Input(format!(
            "partitions of different ranks {} and {}",
            p.n(),
            q.n()
        )));
    }
    let n = p.n();
    Ok(p.max_part() + q.len() <= n + 1 && q.max_part() + p.len() <= n + 1)
}

/// First failed test among: hook condition, more than one hook, a pair
/// violating the two-partition bound. None means pass.
pub fn obstruction_screen(family: &PartitionFamily) -> Result<Option<Obstruction>> {
    let rep = hook_report(family)?;
    if !rep.hooked {
        return Ok(Some(Obstruction::HookCondition {
            r: rep.r,
            t: rep.t,
            n: family.n(),
        }));
    }
    if rep.hooks.len() > 1 {
        return Ok(Some(Obstruction::MultipleHooks { hooks: rep.hooks }));
    }
    let members: Vec<&Partition> = family.iter().collect();
    for i in 0..members.len() {
        for j in i..members.len() {
            if !blago_pair_check(members[i], members[j])? {
                return Ok(Some(Obstruction::BlagoPair {
                    p: members[i].clone(),
                    q: members[j].clone(),
                }));
            }
        }
    }
    Ok(None)
}

fn count_bits_le(mask: u32, ranks: &[u32]) -> u32 {
    let mut total = 0;
    let mut m = mask;
    while m != 0 {
        let i = m.trailing_zeros() as usize;
        total += ranks[i];
        m &= m - 1;
    }
    total
}

/// Can the chosen supports be placed into the >=2 parts of one target
/// partition, respecting part sizes and per-type copy counts? Necessary for
/// any extension of `chosen` to realize that partition.
fn assignment_feasible(chosen: &[u32], order: &[usize], caps: &[u32], ranks: &[u32]) -> bool {
    fn rec(
        i: usize,
        order: &[usize],
        chosen: &[u32],
        caps: &[u32],
        ranks: &[u32],
        unions: &mut [u32],
        counts: &mut [u32],
    ) -> bool {
        if i == order.len() {
            return true;
        }
        let s = chosen[order[i]];
        let mut tried: Vec<(u32, u32)> = Vec::with_capacity(caps.len());
        for slot in 0..caps.len() {
            let state = (caps[slot], unions[slot]);
            if tried.contains(&state) {
                continue;
            }
            tried.push(state);
            let u = unions[slot] | s;
            if u.count_ones() > caps[slot] {
                continue;
            }
            let add = s & !unions[slot];
            let mut ok = true;
            let mut m = add;
            while m != 0 {
                let b = m.trailing_zeros() as usize;
                if counts[b] + 1 > ranks[b] {
                    ok = false;
                    break;
                }
                m &= m - 1;
            }
            if !ok {
                continue;
            }
            let mut m = add;
            while m != 0 {
                let b = m.trailing_zeros() as usize;
                counts[b] += 1;
                m &= m - 1;
            }
            let old = unions[slot];
            unions[slot] = u;
            if rec(i + 1, order, chosen, caps, ranks, unions, counts) {
                return true;
            }
            unions[slot] = old;
            let mut m = add;
            while m != 0 {
                let b = m.trailing_zeros() as usize;
                counts[b] -= 1;
                m &= m - 1;
            }
        }
        false
    }
    let mut unions = vec![0u32; caps.len()];
    let mut counts = vec![0u32; ranks.len()];
    rec(0, order, chosen, caps, ranks, &mut unions, &mut counts)
}

struct Space {
    ranks: Vec<u32>,
    full_mask: u32,
    allowed: Vec<u32>,
    mult_cap: Vec<u32>,
    /// mask-image tables, one per rank-preserving type permutation
    perm_tables: Option<Vec<Vec<u32>>>,
    /// flat |allowed| x |allowed| matrix; empty means "no prefilter"
    pair_ok: Vec<bool>,
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

fn permutations_of(items: &[usize]) -> Vec<Vec<usize>> {
    if items.is_empty() {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(i);
        for mut tail in permutations_of(&rest) {
            let mut v = vec![x];
            v.append(&mut tail);
            out.push(v);
        }
    }
    out
}

impl Space {
    fn build(ranks: Vec<u32>, size_cap: u32, member_caps: &[Vec<u32>]) -> Space {
        let t = ranks.len();
        let full_mask = if t == 32 { u32::MAX } else { (1u32 << t) - 1 };
        let mut allowed = Vec::new();
        let mut mult_cap = Vec::new();
        for mask in 0..=full_mask {
            let pc = mask.count_ones();
            if pc >= 2 && pc <= size_cap {
                allowed.push(mask);
                // more copies of a support than the smallest rank it touches
                // never change the spectrum
                let cap = (0..t)
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| ranks[i])
                    .min()
                    .unwrap();
                mult_cap.push(cap);
            }
        }
        let perm_tables = Self::build_perm_tables(&ranks, t);
        let pair_ok = Self::build_pair_matrix(&allowed, &ranks, member_caps);
        Space {
            ranks,
            full_mask,
            allowed,
            mult_cap,
            perm_tables,
            pair_ok,
        }
    }

    fn build_perm_tables(ranks: &[u32], t: usize) -> Option<Vec<Vec<u32>>> {
        let mut classes: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
        for (i, &r) in ranks.iter().enumerate() {
            classes.entry(r).or_default().push(i);
        }
        let count: usize = classes.values().map(|c| factorial(c.len())).product();
        if count > 5040 {
            return None;
        }
        let mut perms: Vec<Vec<usize>> = vec![(0..t).collect()];
        for class in classes.values() {
            let class_perms = permutations_of(class);
            let mut next = Vec::with_capacity(perms.len() * class_perms.len());
            for base in &perms {
                for cp in &class_perms {
                    let mut p = base.clone();
                    for (slot, &img) in class.iter().zip(cp.iter()) {
                        p[*slot] = img;
                    }
                    next.push(p);
                }
            }
            perms = next;
        }
        let size = 1usize << t;
        let tables = perms
            .into_iter()
            .map(|p| {
                let mut table = vec![0u32; size];
                for (mask, entry) in table.iter_mut().enumerate() {
                    let mut img = 0u32;
                    for (i, &pi) in p.iter().enumerate() {
                        if mask >> i & 1 == 1 {
                            img |= 1 << pi;
                        }
                    }
                    *entry = img;
                }
                table
            })
            .collect();
        Some(tables)
    }

    fn build_pair_matrix(allowed: &[u32], ranks: &[u32], member_caps: &[Vec<u32>]) -> Vec<bool> {
        if allowed.len() > 160 {
            return Vec::new();
        }
        let len = allowed.len();
        let mut rows = vec![true; len * len];
        for i in 0..len {
            for j in i..len {
                let pair = [allowed[i], allowed[j]];
                let order = if allowed[i].count_ones() >= allowed[j].count_ones() {
                    [0usize, 1]
                } else {
                    [1usize, 0]
                };
                let ok = member_caps
                    .iter()
                    .all(|caps| assignment_feasible(&pair, &order, caps, ranks));
                rows[i * len + j] = ok;
                rows[j * len + i] = ok;
            }
        }
        rows
    }

    fn pair_allowed(&self, i: usize, j: usize) -> bool {
        self.pair_ok.is_empty() || self.pair_ok[i * self.allowed.len() + j]
    }

    fn canonical_key(&self, chosen: &[u32]) -> Vec<u32> {
        let mut best: Vec<u32> = chosen.to_vec();
        best.sort_unstable();
        if let Some(tables) = &self.perm_tables {
            for table in tables {
                let mut mapped: Vec<u32> = chosen.iter().map(|&m| table[m as usize]).collect();
                mapped.sort_unstable();
                if mapped < best {
                    best = mapped;
                }
            }
        }
        best
    }
}

struct Engine<'a> {
    mode: SearchMode,
    budget: &'a SearchBudget,
    deadline: Instant,
    n: u32,
    target_set: BTreeSet<Partition>,
    /// per member: its >=2 parts, descending; sorted most restrictive first
    member_caps: Vec<Vec<u32>>,
    min_ones: u32,
    size_cap: u32,
    min_primes: usize,
    min_len: u32,
    nodes: u64,
    candidates: u64,
    seen: HashSet<(Vec<u32>, Vec<u32>)>,
    found: Option<(Vec<u32>, Vec<u32>)>,
    timed_out: bool,
}

impl<'a> Engine<'a> {
    fn new(family: &PartitionFamily, mode: SearchMode, budget: &'a SearchBudget) -> Engine<'a> {
        let target_set: BTreeSet<Partition> = family.iter().cloned().collect();
        let mut member_caps: Vec<Vec<u32>> = family
            .iter()
            .map(|p| {
                p.parts()
                    .iter()
                    .copied()
                    .filter(|&x| x >= 2)
                    .collect::<Vec<u32>>()
            })
            .collect();
        member_caps.sort_by_key(|caps| {
            (
                caps.iter().copied().max().unwrap_or(0),
                std::cmp::Reverse(caps.len()),
            )
        });
        let min_ones = family.iter().map(Partition::ones).min().unwrap_or(0);
        let size_cap = family.iter().map(Partition::max_part).min().unwrap_or(1);
        let min_primes = member_caps.iter().map(Vec::len).max().unwrap_or(0);
        let min_len = family.iter().map(Partition::len).min().unwrap_or(1);
        Engine {
            mode,
            budget,
            deadline: Instant::now() + budget.time_cap,
            n: family.n(),
            target_set,
            member_caps,
            min_ones,
            size_cap,
            min_primes,
            min_len,
            nodes: 0,
            candidates: 0,
            seen: HashSet::new(),
            found: None,
            timed_out: false,
        }
    }

    /// Rank vectors to try. When the family contains a hook and a two-part
    /// partition with both parts >= 2, the critical typeset is pinned: no
    /// type can have mu = 1 (a type with mu = 1 puts a 1 into every realized
    /// partition, while the two-part member has none, and the hook forces
    /// every mu > 1 type into one summand), so there are exactly k types,
    /// and realizing a two-part partition bounds every homogeneous rank by 2.
    fn rank_vectors(&self) -> Vec<Vec<u32>> {
        let n = self.n;
        let hook = self.target_set.iter().find(|p| p.is_hook());
        let two_part = self
            .target_set
            .iter()
            .find(|p| p.len() == 2 && p.parts()[1] >= 2);
        if let (Some(hook), Some(_)) = (hook, two_part) {
            let k = hook.max_part();
            let doubles = n - k;
            if doubles > k || k as usize > self.budget.max_types {
                return Vec::new();
            }
            let mut ranks = vec![2u32; doubles as usize];
            ranks.extend(std::iter::repeat(1).take((k - doubles) as usize));
            return vec![ranks];
        }
        let mut out = Vec::new();
        let t_max = self.budget.max_types.min(n as usize);
        for t in 1..=t_max {
            let Ok(fam) = crate::partitions::family_c(n, t as u32) else {
                continue;
            };
            for p in fam.iter() {
                if p.max_part() <= self.min_len {
                    out.push(p.parts().to_vec());
                }
            }
        }
        out
    }

    fn run(&mut self) {
        let spaces: Vec<Space> = self
            .rank_vectors()
            .into_iter()
            .map(|ranks| Space::build(ranks, self.size_cap, &self.member_caps))
            .collect();
        for space in &spaces {
            let m_lo = self.min_primes;
            if m_lo == 0 {
                self.test_candidate(space, &[]);
                if self.found.is_some() {
                    return;
                }
            }
            for m_target in m_lo.max(1)..=self.budget.max_primes {
                let mut chosen = Vec::with_capacity(m_target);
                self.dfs(space, &mut chosen, 0, m_target);
                if self.found.is_some() || self.timed_out {
                    return;
                }
            }
        }
    }

    fn dfs(&mut self, space: &Space, chosen: &mut Vec<usize>, start: usize, m_target: usize) {
        if chosen.len() == m_target {
            let masks: Vec<u32> = chosen.iter().map(|&i| space.allowed[i]).collect();
            self.test_candidate(space, &masks);
            return;
        }
        for idx in start..space.allowed.len() {
            self.nodes += 1;
            if self.nodes % 1024 == 0 && Instant::now() >= self.deadline {
                self.timed_out = true;
                return;
            }
            let mult = chosen.iter().rev().take_while(|&&i| i == idx).count() as u32;
            if mult >= space.mult_cap[idx] {
                continue;
            }
            if !chosen.iter().all(|&i| space.pair_allowed(i, idx)) {
                continue;
            }
            chosen.push(idx);
            if self.feasible(space, chosen) {
                self.dfs(space, chosen, idx, m_target);
                if self.found.is_some() || self.timed_out {
                    return;
                }
            }
            chosen.pop();
        }
    }

    fn feasible(&self, space: &Space, chosen: &[usize]) -> bool {
        let masks: Vec<u32> = chosen.iter().map(|&i| space.allowed[i]).collect();
        let order: Vec<usize> = {
            let mut o: Vec<usize> = (0..masks.len()).collect();
            o.sort_by_key(|&i| std::cmp::Reverse(masks[i].count_ones()));
            o
        };
        self.member_caps
            .iter()
            .all(|caps| assignment_feasible(&masks, &order, caps, &space.ranks))
    }

    fn test_candidate(&mut self, space: &Space, chosen: &[u32]) {
        let covered = chosen.iter().fold(0u32, |acc, &m| acc | m);
        let forced_ones = count_bits_le(space.full_mask & !covered, &space.ranks);
        if forced_ones > self.min_ones {
            return;
        }
        let key = space.canonical_key(chosen);
        if !self.seen.insert((space.ranks.clone(), key)) {
            return;
        }
        self.candidates += 1;
        let shapes = spectrum_shapes(&space.ranks, chosen);
        let ok = match self.mode {
            SearchMode::Contains => self.target_set.iter().all(|p| shapes.contains(p)),
            SearchMode::Equals => shapes == self.target_set,
        };
        if ok {
            self.found = Some((space.ranks.clone(), chosen.to_vec()));
        }
    }
}

/// Builds the minimal-prime witness group for a found candidate: primes
/// 2, 3, 5, ... in canonical order, fresh singleton inverted primes beyond
/// them, assembled from the finest decomposition of the invariant data.
fn build_witness(ranks: &[u32], supports: &[u32]) -> Result<(BGroup, InvariantData)> {
    let m = supports.len();
    let index_primes = first_primes(m);
    let floor = index_primes.last().copied().unwrap_or(2);
    let types = fresh_types(ranks.len(), floor);
    let mut entries = BTreeMap::new();
    for (i, t) in types.iter().enumerate() {
        let mut mu = Natural::one();
        for (j, &s) in supports.iter().enumerate() {
            if s >> i & 1 == 1 {
                mu = mu.mul(&Natural::prime(index_primes[j])?);
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
    let data = InvariantData::new(entries)?;
    let limits = DecompLimits {
        max_rank: data.total_rank().max(12),
        max_primes: m.max(8),
    };
    let decs = enumerate_decompositions(&data, &limits)?;
    let best = decs
        .iter()
        .fold(None::<&crate::decomp::Decomposition>, |acc, d| match acc {
            Some(a) if a.summands().len() >= d.summands().len() => Some(a),
            _ => Some(d),
        })
        .ok_or_else(|| Error::Input("witness data admits no decomposition".into()))?;
    let group = realize_decomposition(best)?;
    Ok((group, data))
}

/// Bounded exhaustive search for a group whose spectrum contains or equals
/// the family. The witness of a REALIZED verdict is re-checked through the
/// decomposition engine, not trusted from the search.
pub fn search_realizer(
    family: &PartitionFamily,
    mode: SearchMode,
    budget: &SearchBudget,
) -> Result<Verdict> {
    budget.validate()?;
    let started = Instant::now();
    if let Some(ob) = obstruction_screen(family)? {
        let mut v = Verdict::new(VerdictStatus::Obstructed);
        v.log.elapsed_ms = started.elapsed().as_millis();
        v.log.notes.push(ob.to_string());
        v.obstruction = Some(ob);
        return Ok(v);
    }
    let mut engine = Engine::new(family, mode, budget);
    engine.run();
    let mut log = SearchLog {
        nodes: engine.nodes,
        candidates: engine.candidates,
        elapsed_ms: started.elapsed().as_millis(),
        notes: Vec::new(),
    };
    if let Some((ranks, supports)) = engine.found {
        let (group, data) = build_witness(&ranks, &supports)?;
        // independent re-check through the factored pipeline
        let limits = DecompLimits {
            max_rank: data.total_rank().max(12),
            max_primes: supports.len().max(8),
        };
        let spec = partition_spectrum(&group.invariant_data(), &limits)?;
        let verified = match mode {
            SearchMode::Contains => family.iter().all(|p| spec.contains(p)),
            SearchMode::Equals => &spec == family,
        };
        if !verified {
            return Err(Error::Input(
                "internal error: witness failed the decomposition re-check".into(),
            ));
        }
        log.notes.push(format!(
            "witness over {} primes and {} types",
            supports.len(),
            ranks.len()
        ));
        let mut v = Verdict::new(VerdictStatus::Realized);
        v.witness = Some(group);
        v.log = log;
        return Ok(v);
    }
    if engine.timed_out {
        log.notes
            .push(format!("time cap {:?} reached", budget.time_cap));
        let mut v = Verdict::new(VerdictStatus::Unknown);
        v.log = log;
        return Ok(v);
    }
    log.notes.push(format!(
        "exhausted {} canonical candidates ({} nodes)",
        log.candidates, log.nodes
    ));
    let mut v = Verdict::new(VerdictStatus::RefutedWithinBudget);
    v.log = log;
    Ok(v)
}

/// One cell of the verdict table.
#[derive(Clone, Debug)]
pub struct TableCell {
    pub n: u32,
    pub k: u32,
    pub verdict: Verdict,
}

#[derive(Clone, Debug)]
pub struct TheoremTable {
    pub n_max: u32,
    pub cells: Vec<TableCell>,
}

impl TheoremTable {
    pub fn get(&self, n: u32, k: u32) -> Option<&Verdict> {
        self.cells
            .iter()
            .find(|c| c.n == n && c.k == k)
            .map(|c| &c.verdict)
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("S(n,k) realizability for n <= {}\n\n", self.n_max));
        out.push_str("      ");
        for k in 1..=self.n_max {
            out.push_str(&format!("k={:<4}", k));
        }
        out.push('\n');
        for n in 1..=self.n_max {
            out.push_str(&format!("n={:<4}", n));
            for k in 1..=n {
                let sym = match self.get(n, k).map(|v| v.status) {
                    Some(VerdictStatus::Realized) => "R",
                    Some(VerdictStatus::RefutedWithinBudget) => "x",
                    Some(VerdictStatus::Obstructed) => "O",
                    Some(VerdictStatus::Unknown) => "?",
                    None => " ",
                };
                out.push_str(&format!("{sym:<6}"));
            }
            out.push('\n');
        }
        out.push_str("\nR = realized, x = refuted within budget, O = obstructed, ? = unknown\n\n");
        for cell in &self.cells {
            let v = &cell.verdict;
            let status = match v.status {
                VerdictStatus::Realized => "REALIZED",
                VerdictStatus::RefutedWithinBudget => "REFUTED_WITHIN_BUDGET",
                VerdictStatus::Obstructed => "OBSTRUCTED",
                VerdictStatus::Unknown => "UNKNOWN",
            };
            out.push_str(&format!(
                "S({},{}): {status} (candidates={}, {} ms{})\n",
                cell.n,
                cell.k,
                v.log.candidates,
                v.log.elapsed_ms,
                if v.log.notes.is_empty() {
                    String::new()
                } else {
                    format!(", {}", v.log.notes.join("; "))
                },
            ));
        }
        out
    }
}

fn construction_witness(n: u32, k: u32) -> Result<Option<BGroup>> {
    let g = if k == 1 {
        Some(completely_decomposable(n)?)
    } else if k == n {
        Some(indecomposable_of_rank(n)?)
    } else if k == 2 {
        Some(sn2_realizer(n)?)
    } else if k + 1 == n {
        Some(corner_group(n, 2, &default_index_primes((n - 2) as usize))?)
    } else if (n, k) == (5, 3) {
        Some(named_example("s53")?.group)
    } else if (n, k) == (6, 4) {
        Some(named_example("s64")?.group)
    } else {
        None
    };
    Ok(g)
}

fn table_cell(n: u32, k: u32, budget: &SearchBudget) -> Result<Verdict> {
    let started = Instant::now();
    let family = family_s(n, k)?;
    if let Some(group) = construction_witness(n, k)? {
        let limits = DecompLimits::default();
        let spec = partition_spectrum(&group.invariant_data(), &limits)?;
        if spec != family {
            return Err(Error::Input(format!(
                "internal error: construction for S({n},{k}) failed the spectrum re-check"
            )));
        }
        let mut v = Verdict::new(VerdictStatus::Realized);
        v.witness = Some(group);
        v.log.elapsed_ms = started.elapsed().as_millis();
        v.log.notes.push("realized by construction".into());
        return Ok(v);
    }
    let cell_budget = SearchBudget {
        max_types: n as usize,
        ..*budget
    };
    search_realizer(&family, SearchMode::Equals, &cell_budget)
}

/// Verdicts for every S(n,k) with 1 <= k <= n <= n_max. Constructions cover
/// the realizable diagonal stripes; every other cell is searched directly.
///
/// Refuted verdicts are deliberately NOT propagated upward in n: upward
/// persistence of negatives fails in general (S(6,3) is refuted exhaustively
/// while S(7,3) has a verified realizer), so each cell earns its own verdict.
/// Cells where a smaller refuted n exists for the same k carry a note.
pub fn verify_theorem_table(n_max: u32, budget: &SearchBudget) -> Result<TheoremTable> {
    if !(4..=9).contains(&n_max) {
        return Err(Error::Input(format!(
            "n_max must lie in 4..=9 for desk-scale coverage, got {n_max}"
        )));
    }
    budget.validate()?;
    let mut refuted_at: BTreeMap<u32, u32> = BTreeMap::new();
    let mut cells = Vec::new();
    for n in 1..=n_max {
        let row: Vec<(u32, Result<Verdict>)> = (1..=n)
            .into_par_iter()
            .map(|k| (k, table_cell(n, k, budget)))
            .collect();
        for (k, verdict) in row {
            let mut verdict = verdict?;
            match verdict.status {
                VerdictStatus::RefutedWithinBudget => {
                    refuted_at.entry(k).or_insert(n);
                }
                VerdictStatus::Realized => {
                    if let Some(&n0) = refuted_at.get(&k) {
                        verdict.log.notes.push(format!(
                            "upward persistence of negatives fails here: S({n0},{k}) is refuted"
                        ));
                    }
                }
                _ => {}
            }
            cells.push(TableCell { n, k, verdict });
        }
    }
    Ok(TheoremTable { n_max, cells })
}

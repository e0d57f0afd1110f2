//! Closure computation, Rees quotient arithmetic, factorization
//! witnesses, the distinguished corner generating sets, and exact
//! semigroup-rank search with checkable certificates.
//!
//! Rank search works over an index multiplication table of the closed
//! target, so a single closure test is a few hundred table lookups. The
//! certificate's minimality claim rests on two sound pruning steps, both
//! machine-checked per call:
//!
//! * elements not generated by the other elements must belong to every
//!   generating set (they are seeded into every candidate);
//! * when the top-height slice alone generates the whole target, any
//!   generating set's top slice must generate that slice in the Rees
//!   (height-preserving) sense, so the subset search can run over the
//!   slice instead of the full target.

use std::collections::BTreeMap;
use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::{
    corner, enumerate, grid_element, Corner, EnumerateOptions, FamilyId, FamilySet, FamilyTag,
    Method,
};
use crate::transform::Transformation;

/// Generation mode: ordinary products, or the Rees quotient product at
/// height `p` where any product of smaller height counts as zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenMode {
    Plain,
    Rees(usize),
}

impl std::fmt::Display for GenMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GenMode::Plain => write!(f, "plain"),
            GenMode::Rees(p) => write!(f, "rees({p})"),
        }
    }
}

/// Least set containing `gens` and closed under composition, by product
/// saturation.
pub fn closure(gens: &[Transformation]) -> Result<FamilySet> {
    let first = gens
        .first()
        .ok_or_else(|| Error::BadParameter("closure of an empty generator list".into()))?;
    let n = first.degree();
    for g in gens {
        if g.degree() != n {
            return Err(Error::DegreeMismatch(n, g.degree()));
        }
    }
    let mut members: Vec<Transformation> = Vec::new();
    let mut seen: HashMap<Transformation, usize> = HashMap::new();
    for g in gens {
        if !seen.contains_key(g) {
            seen.insert(g.clone(), members.len());
            members.push(g.clone());
        }
    }
    let mut i = 0;
    while i < members.len() {
        for j in 0..=i {
            for (a, b) in [(i, j), (j, i)] {
                let prod = members[a].compose(&members[b]).expect("common degree");
                if !seen.contains_key(&prod) {
                    seen.insert(prod.clone(), members.len());
                    members.push(prod);
                }
            }
        }
        i += 1;
    }
    FamilySet::from_elements(None, n, members)
}

/// Saturation under the height-`p` Rees product: products that drop
/// height become zero and are not expanded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReesClosure {
    pub carrier: FamilySet,
    pub reached_zero: bool,
}

pub fn rees_closure(gens: &[Transformation], p: usize) -> Result<ReesClosure> {
    let first = gens
        .first()
        .ok_or_else(|| Error::BadParameter("closure of an empty generator list".into()))?;
    let n = first.degree();
    for g in gens {
        if g.degree() != n {
            return Err(Error::DegreeMismatch(n, g.degree()));
        }
        if g.rank() != p {
            return Err(Error::BadParameter(format!(
                "Rees generator {g} has height {}, expected {p}",
                g.rank()
            )));
        }
    }
    let mut members: Vec<Transformation> = Vec::new();
    let mut seen: HashMap<Transformation, usize> = HashMap::new();
    for g in gens {
        if !seen.contains_key(g) {
            seen.insert(g.clone(), members.len());
            members.push(g.clone());
        }
    }
    let mut reached_zero = false;
    let mut i = 0;
    while i < members.len() {
        for j in 0..=i {
            for (a, b) in [(i, j), (j, i)] {
                let prod = members[a].compose(&members[b]).expect("common degree");
                if prod.rank() < p {
                    reached_zero = true;
                } else if !seen.contains_key(&prod) {
                    seen.insert(prod.clone(), members.len());
                    members.push(prod);
                }
            }
        }
        i += 1;
    }
    Ok(ReesClosure {
        carrier: FamilySet::from_elements(None, n, members)?,
        reached_zero,
    })
}

/// The Rees quotient at height `p`: the height-`p` carrier plus an
/// absorbing zero (a sentinel outside the transformation value space,
/// represented here by `None`).
#[derive(Debug, Clone)]
pub struct ReesQuotient {
    p: usize,
    carrier: FamilySet,
}

impl ReesQuotient {
    /// Wraps a carrier whose elements all have height exactly `p`.
    pub fn new(carrier: FamilySet, p: usize) -> Result<Self> {
        if let Some(bad) = carrier.iter().find(|t| t.rank() != p) {
            return Err(Error::BadParameter(format!(
                "carrier element {bad} has height {}, expected {p}",
                bad.rank()
            )));
        }
        Ok(Self { p, carrier })
    }

    /// Builds the quotient of a closed family by its height-`p` slice.
    pub fn of_family(family: &FamilySet, p: usize) -> Result<Self> {
        Self::new(family.rank_slice(p), p)
    }

    pub fn height(&self) -> usize {
        self.p
    }

    pub fn carrier(&self) -> &FamilySet {
        &self.carrier
    }

    /// The quotient product: `None` is the zero.
    pub fn product(&self, a: &Transformation, b: &Transformation) -> Option<Transformation> {
        let ab = a.compose(b).expect("common degree");
        (ab.rank() == self.p).then_some(ab)
    }
}

/// Does `gens` generate `target` in the given mode?
///
/// Plain mode asks whether the closure contains the target; Rees mode
/// asks whether the Rees closure carrier equals the target's top slice,
/// and requires `gens ⊆ target`.
pub fn generates(gens: &[Transformation], target: &FamilySet, mode: GenMode) -> Result<bool> {
    match mode {
        GenMode::Plain => {
            let c = closure(gens)?;
            Ok(target.iter().all(|t| c.contains(t)))
        }
        GenMode::Rees(p) => {
            if let Some(outsider) = gens.iter().find(|g| !target.contains(g)) {
                return Err(Error::BadParameter(format!(
                    "Rees generator {outsider} is not a member of the target"
                )));
            }
            let slice = target.rank_slice(p);
            let reached = rees_closure(gens, p)?;
            Ok(reached.carrier == slice)
        }
    }
}

/// A factorization witness: indices into a generator list, evaluated
/// left to right.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Word(pub Vec<usize>);

impl Word {
    pub fn eval(&self, gens: &[Transformation]) -> Option<Transformation> {
        let mut letters = self.0.iter();
        let first = *letters.next()?;
        let mut acc = gens.get(first)?.clone();
        for &i in letters {
            acc = acc.compose(gens.get(i)?).ok()?;
        }
        Some(acc)
    }
}

/// Shortest word over `gens` evaluating to `target`, lexicographically
/// least among the shortest; `None` when unreachable.
///
/// In Rees mode, letters and partial products must keep height `p`.
pub fn factorize(target: &Transformation, gens: &[Transformation], mode: GenMode) -> Option<Word> {
    let n = target.degree();
    let usable = |t: &Transformation| match mode {
        GenMode::Plain => true,
        GenMode::Rees(p) => t.rank() == p,
    };
    // Breadth-first over reached elements; expanding states in FIFO order
    // and letters in index order makes the first path to each element the
    // lexicographically least among the shortest.
    let mut states: Vec<(Transformation, Option<(usize, usize)>)> = Vec::new();
    let mut seen: HashMap<Transformation, usize> = HashMap::new();
    for (i, g) in gens.iter().enumerate() {
        if g.degree() != n || !usable(g) {
            continue;
        }
        if !seen.contains_key(g) {
            seen.insert(g.clone(), states.len());
            states.push((g.clone(), Some((usize::MAX, i))));
        }
    }
    let mut cursor = 0;
    while cursor < states.len() {
        if states[cursor].0 == *target {
            // walk parents back to the root
            let mut letters = Vec::new();
            let mut at = cursor;
            loop {
                let (parent, letter) = states[at].1.expect("every state has a provenance");
                letters.push(letter);
                if parent == usize::MAX {
                    break;
                }
                at = parent;
            }
            letters.reverse();
            return Some(Word(letters));
        }
        for (i, g) in gens.iter().enumerate() {
            if g.degree() != n || !usable(g) {
                continue;
            }
            let next = states[cursor].0.compose(g).expect("common degree");
            if let GenMode::Rees(p) = mode {
                if next.rank() < p {
                    continue;
                }
            }
            if !seen.contains_key(&next) {
                seen.insert(next.clone(), states.len());
                states.push((next, Some((cursor, i))));
            }
        }
        cursor += 1;
    }
    None
}

/// Elements of a closed set that the remaining elements do not generate:
/// `{α ∈ S : α ∉ ⟨S \ {α}⟩}`. Every generating set must contain all of
/// them, which is what makes them usable as search seeds.
pub fn indecomposables(s: &FamilySet) -> Result<FamilySet> {
    let table = MulTable::plain(s)?;
    let mut scratch = ClosureScratch::new(table.size);
    let picked: Vec<Transformation> = (0..s.len())
        .filter(|&i| {
            let others: Vec<u16> = (0..s.len() as u16).filter(|&j| j as usize != i).collect();
            !scratch.closure_contains(&table, &others, i as u16)
        })
        .map(|i| s.elements()[i].clone())
        .collect();
    Ok(FamilySet::from_sorted(None, s.degree(), picked))
}

/// Index multiplication table over a closed carrier. Entry `ZERO` marks
/// a product that left the carrier (only possible in Rees mode, where it
/// is the quotient zero).
struct MulTable {
    size: usize,
    tab: Vec<u16>,
}

const ZERO: u16 = u16::MAX;

/// Sets above this size would need gigabyte-scale tables; exact rank
/// search is not meant for them.
const MAX_TABLE: usize = 5000;

impl MulTable {
    fn plain(s: &FamilySet) -> Result<Self> {
        Self::build(s, None)
    }

    fn rees(slice: &FamilySet, p: usize) -> Result<Self> {
        Self::build(slice, Some(p))
    }

    fn build(s: &FamilySet, rees_p: Option<usize>) -> Result<Self> {
        let size = s.len();
        if size > MAX_TABLE {
            return Err(Error::BadParameter(format!(
                "set of {size} elements is too large for exact rank search"
            )));
        }
        let mut tab = vec![0u16; size * size];
        for (i, a) in s.iter().enumerate() {
            for (j, b) in s.iter().enumerate() {
                let ab = a.compose(b).expect("common degree");
                let entry = match rees_p {
                    Some(p) if ab.rank() < p => ZERO,
                    _ => match s.index_of(&ab) {
                        Some(k) => k as u16,
                        None => {
                            return Err(Error::NotClosed {
                                left: a.to_string(),
                                right: b.to_string(),
                                product: ab.to_string(),
                            })
                        }
                    },
                };
                tab[i * size + j] = entry;
            }
        }
        Ok(Self { size, tab })
    }

    #[inline]
    fn mul(&self, a: u16, b: u16) -> u16 {
        self.tab[a as usize * self.size + b as usize]
    }
}

/// Reusable closure workspace: epoch-marked membership plus a member
/// list, so one allocation serves millions of closure tests.
struct ClosureScratch {
    mark: Vec<u32>,
    epoch: u32,
    members: Vec<u16>,
}

impl ClosureScratch {
    fn new(size: usize) -> Self {
        Self {
            mark: vec![0; size],
            epoch: 0,
            members: Vec::with_capacity(size),
        }
    }

    /// Size of the closure of `seed`, capped at `cap`: stops early once
    /// `cap` members are reached.
    fn closure_size(&mut self, table: &MulTable, seed: &[u16], cap: usize) -> usize {
        self.epoch += 1;
        let epoch = self.epoch;
        self.members.clear();
        for &g in seed {
            if self.mark[g as usize] != epoch {
                self.mark[g as usize] = epoch;
                self.members.push(g);
            }
        }
        if self.members.len() >= cap {
            return self.members.len();
        }
        let mut i = 0;
        while i < self.members.len() {
            let a = self.members[i];
            for j in 0..=i {
                let b = self.members[j];
                for prod in [table.mul(a, b), table.mul(b, a)] {
                    if prod != ZERO && self.mark[prod as usize] != epoch {
                        self.mark[prod as usize] = epoch;
                        self.members.push(prod);
                        if self.members.len() >= cap {
                            return self.members.len();
                        }
                    }
                }
            }
            i += 1;
        }
        self.members.len()
    }

    fn reaches_all(&mut self, table: &MulTable, seed: &[u16], want: usize) -> bool {
        self.closure_size(table, seed, want) >= want
    }

    /// Whether the closure of `seed` contains `needle`.
    fn closure_contains(&mut self, table: &MulTable, seed: &[u16], needle: u16) -> bool {
        self.epoch += 1;
        let epoch = self.epoch;
        self.members.clear();
        for &g in seed {
            if self.mark[g as usize] != epoch {
                self.mark[g as usize] = epoch;
                self.members.push(g);
            }
        }
        if self.mark[needle as usize] == epoch {
            return true;
        }
        let mut i = 0;
        while i < self.members.len() {
            let a = self.members[i];
            for j in 0..=i {
                let b = self.members[j];
                for prod in [table.mul(a, b), table.mul(b, a)] {
                    if prod != ZERO && self.mark[prod as usize] != epoch {
                        if prod == needle {
                            return true;
                        }
                        self.mark[prod as usize] = epoch;
                        self.members.push(prod);
                    }
                }
            }
            i += 1;
        }
        false
    }
}

/// Options for [`min_rank`].
#[derive(Debug, Clone, Copy)]
pub struct SearchOptions {
    /// Maximum number of closure evaluations for one call. When the
    /// budget runs out the certificate carries bounds instead of an
    /// exact size.
    pub budget: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self { budget: 10_000_000 }
    }
}

/// A minimal-generating-set certificate.
///
/// When `exhaustive_below` is true, every candidate of size `size - 1`
/// consistent with the seeding lemmas was tested and failed, so `size`
/// is the exact rank. When the budget ran out, `size` is the best upper
/// bound, `lower_bound` the proven lower bound, and `exhaustive_below`
/// is false.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankCertificate {
    pub target: String,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<usize>,
    pub mode: String,
    pub size: usize,
    #[serde(
        serialize_with = "serialize_literals",
        deserialize_with = "deserialize_literals"
    )]
    pub generators: Vec<Transformation>,
    pub exhaustive_below: bool,
    pub subsets_tested: u64,
    pub budget_exhausted: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lower_bound: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factorizations: Option<BTreeMap<String, Word>>,
}

fn serialize_literals<S: serde::Serializer>(
    gens: &[Transformation],
    ser: S,
) -> std::result::Result<S::Ok, S::Error> {
    ser.collect_seq(gens.iter().map(|t| t.to_string()))
}

fn deserialize_literals<'de, D: serde::Deserializer<'de>>(
    de: D,
) -> std::result::Result<Vec<Transformation>, D::Error> {
    let literals = Vec::<String>::deserialize(de)?;
    literals
        .into_iter()
        .map(|lit| lit.parse().map_err(serde::de::Error::custom))
        .collect()
}

impl RankCertificate {
    /// Re-checks that the recorded generators generate the target.
    pub fn revalidate(&self, target: &FamilySet) -> Result<bool> {
        let mode = match self.p {
            Some(p) if self.mode.starts_with("rees") => GenMode::Rees(p),
            _ => GenMode::Plain,
        };
        generates(&self.generators, target, mode)
    }

    /// Attaches a shortest-word factorization of every target element
    /// over the certified generators.
    pub fn with_factorizations(mut self, target: &FamilySet) -> Self {
        let mode = match self.p {
            Some(p) if self.mode.starts_with("rees") => GenMode::Rees(p),
            _ => GenMode::Plain,
        };
        let mut map = BTreeMap::new();
        for t in target.iter() {
            if let Some(word) = factorize(t, &self.generators, mode) {
                map.insert(t.to_string(), word);
            }
        }
        self.factorizations = Some(map);
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("certificate serializes")
    }
}

/// Exact semigroup rank of a closed target, with certificate.
///
/// The search seeds every candidate with the elements no other elements
/// generate, takes a greedy pass for an upper bound, and then scans
/// candidate subsets level by level in canonical lexicographic order, so
/// the reported generating set is the lexicographically least one of
/// minimum size. For a plain target whose top-height slice generates
/// everything (checked per call), the scan runs over that slice in the
/// Rees quotient, which is equivalent and far smaller.
pub fn min_rank(
    target: &FamilySet,
    mode: GenMode,
    opts: &SearchOptions,
) -> Result<RankCertificate> {
    if target.is_empty() {
        return Err(Error::BadParameter("rank of an empty set".into()));
    }
    let mut budget = Budget {
        left: opts.budget,
        used: 0,
    };
    match mode {
        GenMode::Rees(p) => {
            if let Some(bad) = target.iter().find(|t| t.rank() != p) {
                return Err(Error::BadParameter(format!(
                    "Rees target element {bad} has height {}, expected {p}",
                    bad.rank()
                )));
            }
            let table = MulTable::rees(target, p)?;
            let outcome = search(&table, target, &mut budget);
            Ok(outcome.into_certificate(target, mode, None, budget.used))
        }
        GenMode::Plain => {
            let table = MulTable::plain(target)?;
            let top = target.max_rank().expect("nonempty");
            let slice = target.rank_slice(top);
            if slice.len() < target.len() {
                let slice_indices: Vec<u16> = slice
                    .iter()
                    .map(|t| target.index_of(t).expect("slice of target") as u16)
                    .collect();
                let mut scratch = ClosureScratch::new(table.size);
                let top_generates =
                    budget.spend(1) && scratch.reaches_all(&table, &slice_indices, target.len());
                if top_generates {
                    // Any generating set's top slice must generate the
                    // slice in the Rees sense, and conversely a Rees
                    // generating set of the slice generates everything.
                    let rees_table = MulTable::rees(&slice, top)?;
                    let outcome = search(&rees_table, &slice, &mut budget);
                    let note = format!(
                        "search reduced to the {} height-{top} elements, whose closure is the whole target",
                        slice.len()
                    );
                    let mut cert = outcome.into_certificate(target, mode, Some(note), budget.used);
                    cert.n = target.degree();
                    cert.target = target.label();
                    return Ok(cert);
                }
            }
            let outcome = search(&table, target, &mut budget);
            Ok(outcome.into_certificate(target, mode, None, budget.used))
        }
    }
}

/// Convenience wrapper: rank of a Rees quotient.
pub fn min_rank_quotient(q: &ReesQuotient, opts: &SearchOptions) -> Result<RankCertificate> {
    min_rank(q.carrier(), GenMode::Rees(q.height()), opts)
}

struct Budget {
    left: u64,
    used: u64,
}

impl Budget {
    /// Tries to spend `cost` closure evaluations.
    fn spend(&mut self, cost: u64) -> bool {
        if self.left >= cost {
            self.left -= cost;
            self.used += cost;
            true
        } else {
            false
        }
    }
}

struct SearchOutcome {
    size: usize,
    generators: Vec<u16>,
    element_pool: Vec<Transformation>,
    exhaustive_below: bool,
    subsets_tested: u64,
    budget_exhausted: bool,
    lower_bound: Option<usize>,
}

impl SearchOutcome {
    fn into_certificate(
        self,
        target: &FamilySet,
        mode: GenMode,
        note: Option<String>,
        evals_used: u64,
    ) -> RankCertificate {
        let mut generators: Vec<Transformation> = self
            .generators
            .iter()
            .map(|&i| self.element_pool[i as usize].clone())
            .collect();
        generators.sort_unstable();
        let _ = evals_used;
        RankCertificate {
            target: target.label(),
            n: target.degree(),
            p: match mode {
                GenMode::Rees(p) => Some(p),
                GenMode::Plain => None,
            },
            mode: mode.to_string(),
            size: self.size,
            generators,
            exhaustive_below: self.exhaustive_below,
            subsets_tested: self.subsets_tested,
            budget_exhausted: self.budget_exhausted,
            lower_bound: self.lower_bound,
            note,
            factorizations: None,
        }
    }
}

/// Level-by-level exact search over one multiplication table.
fn search(table: &MulTable, pool: &FamilySet, budget: &mut Budget) -> SearchOutcome {
    let size = table.size;
    let want = size;
    let all: Vec<u16> = (0..size as u16).collect();
    let mut scratch = ClosureScratch::new(size);
    let mut tested: u64 = 0;

    let give_up = |tested: u64, lower: usize, upper: Vec<u16>| SearchOutcome {
        size: upper.len(),
        generators: upper,
        element_pool: pool.elements().to_vec(),
        exhaustive_below: false,
        subsets_tested: tested,
        budget_exhausted: true,
        lower_bound: Some(lower),
    };

    // Seeding: elements not generated by the rest.
    let mut seed: Vec<u16> = Vec::new();
    for i in 0..size as u16 {
        if !budget.spend(1) {
            return give_up(tested, 1, all);
        }
        let others: Vec<u16> = (0..size as u16).filter(|&j| j != i).collect();
        if !scratch.closure_contains(table, &others, i) {
            seed.push(i);
        }
    }

    if !budget.spend(1) {
        return give_up(tested, seed.len().max(1), all);
    }
    if !seed.is_empty() && scratch.reaches_all(table, &seed, want) {
        return SearchOutcome {
            size: seed.len(),
            generators: seed,
            element_pool: pool.elements().to_vec(),
            // every generating set contains the seed, so nothing smaller
            // can generate
            exhaustive_below: true,
            subsets_tested: tested,
            budget_exhausted: false,
            lower_bound: None,
        };
    }

    // Greedy pass for an upper bound.
    let free: Vec<u16> = (0..size as u16).filter(|i| !seed.contains(i)).collect();
    let mut greedy = seed.clone();
    let mut greedy_ok = true;
    loop {
        if !budget.spend(1) {
            greedy_ok = false;
            break;
        }
        if !greedy.is_empty() && scratch.reaches_all(table, &greedy, want) {
            break;
        }
        let mut best: Option<(usize, u16)> = None;
        let mut candidate = greedy.clone();
        for &x in &free {
            if greedy.contains(&x) {
                continue;
            }
            if !budget.spend(1) {
                greedy_ok = false;
                break;
            }
            candidate.push(x);
            let reach = scratch.closure_size(table, &candidate, want);
            candidate.pop();
            if best.is_none_or(|(s, _)| reach > s) {
                best = Some((reach, x));
            }
        }
        if !greedy_ok {
            break;
        }
        match best {
            Some((_, x)) => greedy.push(x),
            None => {
                greedy_ok = false;
                break;
            }
        }
    }
    let upper: Vec<u16> = if greedy_ok { greedy } else { all.clone() };

    // Ascending level scan; candidates always include the seed and are
    // visited in lexicographic order over the free pool, so within a
    // level the first success is the canonical witness.
    let base = seed.len();
    let mut level = base.max(1);
    loop {
        let choose = level - base;
        if choose > free.len() {
            // no candidates at this level; with a correct upper bound
            // this cannot happen before a success
            level += 1;
            continue;
        }
        let mut combo: Vec<usize> = (0..choose).collect();
        let mut candidate: Vec<u16> = Vec::with_capacity(level);
        loop {
            candidate.clear();
            candidate.extend_from_slice(&seed);
            candidate.extend(combo.iter().map(|&i| free[i]));
            if !budget.spend(1) {
                return give_up(tested, level, upper);
            }
            tested += 1;
            if scratch.reaches_all(table, &candidate, want) {
                return SearchOutcome {
                    size: level,
                    generators: candidate,
                    element_pool: pool.elements().to_vec(),
                    exhaustive_below: true,
                    subsets_tested: tested,
                    budget_exhausted: false,
                    lower_bound: None,
                };
            }
            // next combination in lexicographic order
            if choose == 0 {
                break;
            }
            let mut k = choose;
            loop {
                if k == 0 {
                    break;
                }
                k -= 1;
                if combo[k] < free.len() - (choose - k) {
                    combo[k] += 1;
                    for t in (k + 1)..choose {
                        combo[t] = combo[t - 1] + 1;
                    }
                    break;
                }
                if k == 0 {
                    combo.clear();
                    break;
                }
            }
            if combo.is_empty() {
                break;
            }
        }
        level += 1;
    }
}

/// The two named corner generating sets of a height-`p` quotient.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GensetVariant {
    /// Row of `η` and column of `δ`, minus `δ`: `2(n-p)` elements, all
    /// order-preserving.
    Q,
    /// Row of `η` and the starred column of `δ`, minus `δ`:
    /// `2(n-p) + 1` elements, mixing both orientations.
    W,
}

/// Builds the corner generating set for the height-`p` quotient.
pub fn quotient_genset(n: usize, p: usize, variant: GensetVariant) -> Result<Vec<Transformation>> {
    if n < 3 || p < 2 || p + 1 > n {
        return Err(Error::BadParameter(format!(
            "corner generating sets need n >= 3 and 2 <= p <= n-1, got n = {n}, p = {p}"
        )));
    }
    let m = n - p;
    let delta = corner(n, p, Corner::Delta)?;
    let mut gens: Vec<Transformation> = Vec::new();
    // R_eta: the full row with image {1..p}
    for c in 0..=m {
        gens.push(grid_element(n, p, c, 0)?);
    }
    match variant {
        GensetVariant::Q => {
            // L_delta: the full column with delta's kernel
            for r in 0..=m {
                gens.push(grid_element(n, p, 0, r)?);
            }
        }
        GensetVariant::W => {
            // starred column: order-reversing elements with delta's kernel
            for r in 0..=m {
                gens.push(grid_element(n, p, 0, r)?.star());
            }
        }
    }
    let mut gens: Vec<Transformation> = gens.into_iter().filter(|g| *g != delta).collect();
    gens.sort_unstable();
    gens.dedup();
    Ok(gens)
}

/// Which height-slice chain to test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InclusionVariant {
    /// Order-preserving slices.
    K,
    /// Order-preserving-or-reversing slices.
    J,
}

/// Whether every height-`p` element lies in the plain closure of the
/// height-`p+1` slice.
pub fn inclusion_check(n: usize, p: usize, variant: InclusionVariant) -> Result<bool> {
    if n < 4 || p < 1 || p + 2 > n {
        return Err(Error::BadParameter(format!(
            "slice inclusion is tested for n >= 4 and 1 <= p <= n-2, got n = {n}, p = {p}"
        )));
    }
    let tag = match variant {
        InclusionVariant::K => FamilyTag::K,
        InclusionVariant::J => FamilyTag::J,
    };
    let lower = enumerate(
        FamilyId::with_p(tag, p),
        n,
        Method::Construct,
        EnumerateOptions::default(),
    )?;
    let upper = enumerate(
        FamilyId::with_p(tag, p + 1),
        n,
        Method::Construct,
        EnumerateOptions::default(),
    )?;
    let generated = closure(upper.elements())?;
    Ok(lower.iter().all(|t| generated.contains(t)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::Relation;

    fn t(images: &[usize]) -> Transformation {
        Transformation::new(images.len(), images).unwrap()
    }

    fn fam(spec: &str, n: usize) -> FamilySet {
        enumerate(
            FamilyId::parse(spec).unwrap(),
            n,
            Method::Construct,
            EnumerateOptions::default(),
        )
        .unwrap()
    }

    fn fam_filter(spec: &str, n: usize) -> FamilySet {
        enumerate(
            FamilyId::parse(spec).unwrap(),
            n,
            Method::Filter,
            EnumerateOptions::default(),
        )
        .unwrap()
    }

    #[test]
    fn closure_examples() {
        let c = closure(&[t(&[1, 1, 2, 3]), t(&[2, 3, 4, 4])]).unwrap();
        let k3 = fam("k:3", 4);
        assert!(k3.iter().all(|x| c.contains(x)));
        assert_eq!(c.rank_slice(3), k3);

        let id = Transformation::identity(3).unwrap();
        assert_eq!(
            closure(std::slice::from_ref(&id)).unwrap().elements(),
            &[id][..]
        );

        let c2 = Transformation::constant(3, 2).unwrap();
        assert_eq!(
            closure(std::slice::from_ref(&c2)).unwrap().elements(),
            &[c2][..]
        );

        assert!(closure(&[]).is_err());
        assert!(closure(&[t(&[1, 2]), t(&[1, 2, 3])]).is_err());
    }

    #[test]
    fn closure_is_idempotent_and_extensive() {
        let gens = [t(&[1, 1, 2, 3]), t(&[2, 3, 4, 4]), t(&[4, 3, 2, 1])];
        let once = closure(&gens).unwrap();
        for g in &gens {
            assert!(once.contains(g));
        }
        let twice = closure(once.elements()).unwrap();
        assert_eq!(once, twice);
    }

    #[test]
    fn rees_closure_examples() {
        // the corner generating set reaches all of K_3(4) and hits zero
        let gens = quotient_genset(4, 3, GensetVariant::Q).unwrap();
        let reached = rees_closure(&gens, 3).unwrap();
        assert_eq!(reached.carrier, fam("k:3", 4));
        assert!(reached.reached_zero);

        // delta alone: idempotent, never drops height
        let delta = corner(4, 2, Corner::Delta).unwrap();
        let reached = rees_closure(std::slice::from_ref(&delta), 2).unwrap();
        assert_eq!(reached.carrier.elements(), &[delta][..]);
        assert!(!reached.reached_zero);

        // eta alone: eta^2 drops height
        let eta = corner(4, 2, Corner::Eta).unwrap();
        assert!(rees_closure(&[eta], 2).unwrap().reached_zero);

        assert!(rees_closure(&[t(&[1, 2, 2, 2])], 3).is_err());
    }

    #[test]
    fn generates_examples() {
        let k3 = fam("k:3", 4);
        let gens = quotient_genset(4, 3, GensetVariant::Q).unwrap();
        assert_eq!(gens, vec![t(&[1, 1, 2, 3]), t(&[2, 3, 4, 4])]);
        assert!(generates(&gens, &k3, GenMode::Rees(3)).unwrap());

        let delta = corner(4, 3, Corner::Delta).unwrap();
        assert!(!generates(&[delta], &k3, GenMode::Rees(3)).unwrap());

        let j3 = fam("j:3", 5);
        let w = quotient_genset(5, 3, GensetVariant::W).unwrap();
        assert!(generates(&w, &j3, GenMode::Rees(3)).unwrap());

        // outsider generator rejected in rees mode
        let id = Transformation::identity(4).unwrap();
        assert!(generates(&[id], &k3, GenMode::Rees(4)).is_err());
    }

    #[test]
    fn factorize_examples() {
        let tau = corner(4, 2, Corner::Tau).unwrap();
        let eta = corner(4, 2, Corner::Eta).unwrap();
        let delta = corner(4, 2, Corner::Delta).unwrap();
        let word = factorize(&delta, &[tau.clone(), eta.clone()], GenMode::Plain).unwrap();
        assert_eq!(word, Word(vec![0, 1]));
        assert_eq!(word.eval(&[tau.clone(), eta.clone()]).unwrap(), delta);

        assert_eq!(
            factorize(&tau, std::slice::from_ref(&tau), GenMode::Plain).unwrap(),
            Word(vec![0])
        );

        let word = factorize(
            &t(&[2, 2, 3, 4]),
            &[t(&[1, 1, 2, 3]), t(&[2, 3, 4, 4])],
            GenMode::Plain,
        )
        .unwrap();
        assert_eq!(word, Word(vec![0, 1]));

        // [2,3,3,4] is not regular, hence unreachable from the regulars
        let reg = fam("reg-oct", 4);
        assert!(factorize(&t(&[2, 3, 3, 4]), reg.elements(), GenMode::Plain).is_none());
    }

    #[test]
    fn indecomposable_elements() {
        let e4 = fam_filter("e-orct", 4);
        let ind = indecomposables(&e4).unwrap();
        assert!(ind.contains(&t(&[1, 2, 2, 2])));
        // interior windows are products of the boundary ones
        assert!(!ind.contains(&t(&[2, 2, 3, 3])));

        let l41 = fam("l:1", 4);
        assert_eq!(indecomposables(&l41).unwrap(), l41);

        let id = Transformation::identity(3).unwrap();
        let single = FamilySet::from_elements(None, 3, vec![id.clone()]).unwrap();
        assert_eq!(indecomposables(&single).unwrap().elements(), &[id][..]);

        let open = FamilySet::from_elements(None, 4, vec![t(&[1, 1, 2, 3])]).unwrap();
        assert!(matches!(
            indecomposables(&open),
            Err(Error::NotClosed { .. })
        ));
    }

    #[test]
    fn min_rank_of_l43() {
        let l43 = fam("l:3", 4);
        let cert = min_rank(&l43, GenMode::Plain, &SearchOptions::default()).unwrap();
        assert_eq!(cert.size, 2);
        assert_eq!(cert.generators, vec![t(&[1, 1, 2, 3]), t(&[2, 3, 4, 4])]);
        assert!(cert.exhaustive_below);
        assert!(!cert.budget_exhausted);
        assert!(cert.revalidate(&l43).unwrap());
    }

    #[test]
    fn min_rank_of_reg_families() {
        let cert = min_rank(
            &fam("reg-oct", 4),
            GenMode::Plain,
            &SearchOptions::default(),
        )
        .unwrap();
        assert_eq!(cert.size, 3);

        // Conjugating the top-left corner by the reversal yields the
        // bottom-right corner, so the reversal plus one corner generate
        // everything: the rank is 2, not the 4 suggested by counting
        // {id, reversal} on top of the quotient generators.
        let reg_orct = fam("reg-orct", 4);
        let cert = min_rank(&reg_orct, GenMode::Plain, &SearchOptions::default()).unwrap();
        assert_eq!(cert.size, 2);
        assert_eq!(cert.generators, vec![t(&[1, 1, 2, 3]), t(&[4, 3, 2, 1])]);
        assert!(cert.exhaustive_below);
        assert!(cert.revalidate(&reg_orct).unwrap());
    }

    #[test]
    fn min_rank_of_constants() {
        let cert = min_rank(&fam("l:1", 4), GenMode::Plain, &SearchOptions::default()).unwrap();
        assert_eq!(cert.size, 4);
        assert!(cert.exhaustive_below);
    }

    #[test]
    fn min_rank_budget_exhaustion() {
        let reg_orct = fam("reg-orct", 4);
        let cert = min_rank(&reg_orct, GenMode::Plain, &SearchOptions { budget: 3 }).unwrap();
        assert!(cert.budget_exhausted);
        assert!(!cert.exhaustive_below);
        assert!(cert.lower_bound.unwrap() >= 1);
        assert!(cert.size >= 4);
        // the bound witness still generates
        assert!(cert.revalidate(&reg_orct).unwrap());
    }

    #[test]
    fn min_rank_rees_mode() {
        let k3 = fam("k:3", 4);
        let cert = min_rank(&k3, GenMode::Rees(3), &SearchOptions::default()).unwrap();
        assert_eq!(cert.size, 2);
        let q = ReesQuotient::of_family(&fam("l:3", 4), 3).unwrap();
        let cert2 = min_rank_quotient(&q, &SearchOptions::default()).unwrap();
        assert_eq!(cert2.size, 2);
        assert!(min_rank(&k3, GenMode::Rees(2), &SearchOptions::default()).is_err());
    }

    #[test]
    fn certificate_factorizations_evaluate() {
        let k3 = fam("k:3", 4);
        let cert = min_rank(&k3, GenMode::Rees(3), &SearchOptions::default())
            .unwrap()
            .with_factorizations(&k3);
        let map = cert.factorizations.as_ref().unwrap();
        assert_eq!(map.len(), k3.len());
        for (literal, word) in map {
            let value: Transformation = literal.parse().unwrap();
            assert_eq!(word.eval(&cert.generators).unwrap(), value);
        }
    }

    #[test]
    fn quotient_gensets() {
        let q = quotient_genset(4, 3, GensetVariant::Q).unwrap();
        assert_eq!(q.len(), 2);
        assert_eq!(quotient_genset(5, 3, GensetVariant::Q).unwrap().len(), 4);
        let w = quotient_genset(4, 3, GensetVariant::W).unwrap();
        assert_eq!(w.len(), 3);
        // delta removed, delta-star kept
        let delta = corner(4, 3, Corner::Delta).unwrap();
        let delta_star = corner(4, 3, Corner::DeltaStar).unwrap();
        assert!(!q.contains(&delta) && !w.contains(&delta));
        assert!(w.contains(&delta_star));
        assert!(quotient_genset(4, 1, GensetVariant::Q).is_err());
        assert!(quotient_genset(4, 4, GensetVariant::Q).is_err());
    }

    #[test]
    fn inclusion_checks() {
        assert!(inclusion_check(4, 2, InclusionVariant::K).unwrap());
        assert!(inclusion_check(4, 2, InclusionVariant::J).unwrap());
        assert!(inclusion_check(5, 3, InclusionVariant::K).unwrap());
        assert!(inclusion_check(3, 1, InclusionVariant::K).is_err());
        assert!(inclusion_check(4, 3, InclusionVariant::K).is_err());
    }

    #[test]
    fn rees_quotient_product() {
        let l = fam("l:3", 4);
        let q = ReesQuotient::of_family(&l, 3).unwrap();
        let eta = corner(4, 3, Corner::Eta).unwrap();
        let tau = corner(4, 3, Corner::Tau).unwrap();
        // tau * eta = delta keeps height; eta * eta drops to zero
        assert_eq!(
            q.product(&tau, &eta).unwrap(),
            corner(4, 3, Corner::Delta).unwrap()
        );
        assert!(q.product(&eta, &eta).is_none());
    }

    #[test]
    fn every_kp_element_factors_in_two_letters_over_the_corner_classes() {
        // R_eta ∪ L_delta: every grid element is a two-letter product
        let k3 = fam("k:3", 4);
        let eta = corner(4, 3, Corner::Eta).unwrap();
        let delta = corner(4, 3, Corner::Delta).unwrap();
        let mut gens = Vec::new();
        gens.extend(
            crate::families::class_of(&eta, &k3, Relation::R)
                .unwrap()
                .iter()
                .cloned(),
        );
        gens.extend(
            crate::families::class_of(&delta, &k3, Relation::L)
                .unwrap()
                .iter()
                .cloned(),
        );
        gens.sort_unstable();
        gens.dedup();
        for alpha in k3.iter() {
            let word = factorize(alpha, &gens, GenMode::Rees(3)).unwrap();
            assert!(word.0.len() <= 2, "{alpha} needed {:?}", word);
        }
    }
}

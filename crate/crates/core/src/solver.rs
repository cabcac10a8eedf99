//! Exact solvers for multiset antiresolving sets.
//!
//! Everything here is exhaustive enumeration over probe sets in canonical
//! order: cardinality ascending, lexicographic within a cardinality. Batches
//! of candidate sets are evaluated in parallel, but results are merged in
//! enumeration order, so reported values and witnesses do not depend on the
//! thread count. Budgets cap wall-clock time and the number of evaluated
//! sets; a search cut short by its budget never reports `Optimal`.

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use thiserror::Error;

use crate::graph::DistanceMatrix;
use crate::multiset::{k_value_scratch, partition, KeyScratch, SetError};

/// Caps on a single solver call.
#[derive(Debug, Clone, Copy)]
pub struct Budget {
    pub max_seconds: f64,
    pub max_subsets: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_seconds: 60.0,
            max_subsets: 100_000_000,
        }
    }
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget {
            max_seconds: f64::INFINITY,
            max_subsets: u64::MAX,
        }
    }

    pub fn seconds(max_seconds: f64) -> Self {
        Budget {
            max_seconds,
            ..Budget::default()
        }
    }
}

/// How a search ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    /// Witness found; everything smaller was ruled out.
    Optimal,
    /// All non-empty proper subsets were ruled out.
    InfeasibleProven,
    /// All subsets up to the cardinality bound were ruled out; larger sets
    /// were not requested.
    OpenWithinBound,
    /// The budget ran out first; `explored_bound` is the last cardinality
    /// that was fully enumerated.
    BudgetExhausted,
}

/// Result of a single minimum-cardinality search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveOutcome {
    pub status: SolveStatus,
    /// Minimum cardinality, when `status == Optimal`.
    pub value: Option<usize>,
    /// Lexicographically first witness at the minimum cardinality.
    pub witness: Option<Vec<usize>>,
    /// Largest cardinality whose layer was fully enumerated (or the witness
    /// cardinality for `Optimal`).
    pub explored_bound: usize,
    pub subsets_checked: u64,
    pub elapsed: Duration,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolverError {
    #[error("k = {k} out of range; valid range is 1..={max} for n = {n}", max = n - 1)]
    InvalidK { k: usize, n: usize },
    #[error("cardinality bound {bound} out of range; valid range is 1..={max} for n = {n}", max = n - 1)]
    InvalidBound { bound: usize, n: usize },
}

const BATCH: usize = 4096;

/// Wall-clock and evaluation-count meter shared by one solver call.
struct Meter {
    start: Instant,
    budget: Budget,
    used: u64,
}

impl Meter {
    fn new(budget: Budget) -> Self {
        Meter {
            start: Instant::now(),
            budget,
            used: 0,
        }
    }

    fn exhausted(&self) -> bool {
        self.used >= self.budget.max_subsets
            || self.start.elapsed().as_secs_f64() >= self.budget.max_seconds
    }

    fn elapsed(&self) -> Duration {
        self.start.elapsed()
    }
}

/// Advances `cur` to the next cardinality-`|cur|` subset of `0..n` in
/// lexicographic order. Returns false after the last one.
fn next_combination(cur: &mut [usize], n: usize) -> bool {
    let c = cur.len();
    let mut i = c;
    while i > 0 {
        i -= 1;
        if cur[i] < n - c + i {
            cur[i] += 1;
            for j in i + 1..c {
                cur[j] = cur[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Streams one cardinality layer into flat batches.
struct LayerSweep {
    n: usize,
    card: usize,
    cur: Vec<usize>,
    fresh: bool,
    done: bool,
}

impl LayerSweep {
    fn new(n: usize, card: usize) -> Self {
        debug_assert!(card >= 1 && card < n);
        LayerSweep {
            n,
            card,
            cur: Vec::new(),
            fresh: true,
            done: false,
        }
    }

    /// Appends up to `max` subsets to `flat`; returns how many were added.
    fn fill(&mut self, flat: &mut Vec<usize>, max: usize) -> usize {
        flat.clear();
        let mut count = 0;
        while count < max && !self.done {
            if self.fresh {
                self.cur = (0..self.card).collect();
                self.fresh = false;
            } else if !next_combination(&mut self.cur, self.n) {
                self.done = true;
                break;
            }
            flat.extend_from_slice(&self.cur);
            count += 1;
        }
        count
    }
}

/// Evaluates the partition k-value of every subset in the batch, preserving
/// batch order.
fn eval_batch(dm: &DistanceMatrix, flat: &[usize], card: usize, out: &mut Vec<usize>) {
    let n = dm.n();
    let d = dm.diameter() as usize;
    flat.par_chunks(card)
        .with_min_len(32)
        .map_init(
            || KeyScratch::new(n, d),
            |scratch, s| k_value_scratch(dm, s, scratch),
        )
        .collect_into_vec(out);
}

fn check_k(k: usize, n: usize) -> Result<(), SolverError> {
    if k == 0 || k > n - 1 {
        return Err(SolverError::InvalidK { k, n });
    }
    Ok(())
}

fn check_bound(bound: usize, n: usize) -> Result<(), SolverError> {
    if bound == 0 || bound > n - 1 {
        return Err(SolverError::InvalidBound { bound, n });
    }
    Ok(())
}

/// Minimum cardinality of a k-MARS, searching cardinalities `1..=max_card`.
///
/// `InfeasibleProven` requires `max_card = n - 1`, i.e. every candidate set
/// was ruled out.
pub fn msad(
    dm: &DistanceMatrix,
    k: usize,
    max_card: usize,
    budget: Budget,
) -> Result<SolveOutcome, SolverError> {
    let n = dm.n();
    check_k(k, n)?;
    check_bound(max_card, n)?;
    let mut meter = Meter::new(budget);
    let mut flat = Vec::with_capacity(BATCH * max_card);
    let mut evals = Vec::with_capacity(BATCH);
    for card in 1..=max_card {
        let mut sweep = LayerSweep::new(n, card);
        loop {
            let count = sweep.fill(&mut flat, BATCH);
            if count == 0 {
                break;
            }
            if meter.exhausted() {
                return Ok(SolveOutcome {
                    status: SolveStatus::BudgetExhausted,
                    value: None,
                    witness: None,
                    explored_bound: card - 1,
                    subsets_checked: meter.used,
                    elapsed: meter.elapsed(),
                });
            }
            eval_batch(dm, &flat, card, &mut evals);
            meter.used += count as u64;
            if let Some(pos) = evals.iter().position(|&kv| kv == k) {
                let witness = flat[pos * card..(pos + 1) * card].to_vec();
                return Ok(SolveOutcome {
                    status: SolveStatus::Optimal,
                    value: Some(card),
                    witness: Some(witness),
                    explored_bound: card,
                    subsets_checked: meter.used,
                    elapsed: meter.elapsed(),
                });
            }
        }
    }
    let status = if max_card == n - 1 {
        SolveStatus::InfeasibleProven
    } else {
        SolveStatus::OpenWithinBound
    };
    Ok(SolveOutcome {
        status,
        value: None,
        witness: None,
        explored_bound: max_card,
        subsets_checked: meter.used,
        elapsed: meter.elapsed(),
    })
}

/// One shared sweep answering [`msad`] for every requested k at once.
pub fn k_spectrum(
    dm: &DistanceMatrix,
    ks: &[usize],
    max_card: usize,
    budget: Budget,
) -> Result<BTreeMap<usize, SolveOutcome>, SolverError> {
    let n = dm.n();
    for &k in ks {
        check_k(k, n)?;
    }
    check_bound(max_card, n)?;
    let mut unresolved: BTreeSet<usize> = ks.iter().copied().collect();
    let mut resolved: BTreeMap<usize, SolveOutcome> = BTreeMap::new();
    let mut meter = Meter::new(budget);
    let mut flat = Vec::with_capacity(BATCH * max_card);
    let mut evals = Vec::with_capacity(BATCH);
    let mut budget_hit = false;
    'layers: for card in 1..=max_card {
        if unresolved.is_empty() {
            break;
        }
        let mut sweep = LayerSweep::new(n, card);
        loop {
            let count = sweep.fill(&mut flat, BATCH);
            if count == 0 {
                break;
            }
            if meter.exhausted() {
                budget_hit = true;
                // Everything still open falls back to the last full layer.
                for &k in &unresolved {
                    resolved.insert(
                        k,
                        SolveOutcome {
                            status: SolveStatus::BudgetExhausted,
                            value: None,
                            witness: None,
                            explored_bound: card - 1,
                            subsets_checked: meter.used,
                            elapsed: meter.elapsed(),
                        },
                    );
                }
                break 'layers;
            }
            eval_batch(dm, &flat, card, &mut evals);
            meter.used += count as u64;
            for (pos, &kv) in evals.iter().enumerate() {
                if unresolved.remove(&kv) {
                    let witness = flat[pos * card..(pos + 1) * card].to_vec();
                    resolved.insert(
                        kv,
                        SolveOutcome {
                            status: SolveStatus::Optimal,
                            value: Some(card),
                            witness: Some(witness),
                            explored_bound: card,
                            subsets_checked: meter.used,
                            elapsed: meter.elapsed(),
                        },
                    );
                }
            }
        }
    }
    if !budget_hit {
        let status = if max_card == n - 1 {
            SolveStatus::InfeasibleProven
        } else {
            SolveStatus::OpenWithinBound
        };
        for &k in &unresolved {
            resolved.insert(
                k,
                SolveOutcome {
                    status,
                    value: None,
                    witness: None,
                    explored_bound: max_card,
                    subsets_checked: meter.used,
                    elapsed: meter.elapsed(),
                },
            );
        }
    }
    Ok(resolved)
}

/// Result of a [`kappa`] computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KappaOutcome {
    /// Largest k for which a k-MARS was found.
    pub value: usize,
    /// Whether the search proves no larger k is achievable.
    pub exact: bool,
    /// First set (canonical order) achieving `value`.
    pub witness: Vec<usize>,
    pub subsets_checked: u64,
    pub elapsed: Duration,
}

/// Largest k admitting a k-MARS.
///
/// A vertex adjacent to everything else settles the question immediately:
/// its singleton leaves one class of size n - 1, the best any set can do.
/// Otherwise the search sweeps cardinalities `1..=max_card`, stopping early
/// once no larger set could beat the best value found (a set of size c never
/// exceeds k = n - c). The singleton layer is always evaluated in full, so
/// the reported value is a real achieved k even under a tiny budget.
pub fn kappa(
    dm: &DistanceMatrix,
    max_card: usize,
    budget: Budget,
) -> Result<KappaOutcome, SolverError> {
    let n = dm.n();
    check_bound(max_card, n)?;
    let universal =
        (0..n).find(|&u| dm.row(u).iter().filter(|&&d| d == 1).count() == n - 1);
    if let Some(u) = universal {
        debug_assert_eq!(partition(dm, &[u]).unwrap().k_value, n - 1);
        return Ok(KappaOutcome {
            value: n - 1,
            exact: true,
            witness: vec![u],
            subsets_checked: 0,
            elapsed: Duration::ZERO,
        });
    }
    let mut meter = Meter::new(budget);
    let mut flat = Vec::with_capacity(BATCH * max_card);
    let mut evals = Vec::with_capacity(BATCH);
    let mut best_k = 0usize;
    let mut best_witness: Vec<usize> = Vec::new();
    let mut pruned = false;
    let mut budget_hit = false;
    'layers: for card in 1..=max_card {
        if best_k >= n - card {
            pruned = true;
            break;
        }
        let mut sweep = LayerSweep::new(n, card);
        loop {
            let count = sweep.fill(&mut flat, BATCH);
            if count == 0 {
                break;
            }
            if card > 1 && meter.exhausted() {
                budget_hit = true;
                break 'layers;
            }
            eval_batch(dm, &flat, card, &mut evals);
            meter.used += count as u64;
            for (pos, &kv) in evals.iter().enumerate() {
                if kv > best_k {
                    best_k = kv;
                    best_witness = flat[pos * card..(pos + 1) * card].to_vec();
                }
            }
        }
    }
    let exact = !budget_hit
        && (pruned || max_card == n - 1 || n - (max_card + 1) <= best_k);
    Ok(KappaOutcome {
        value: best_k,
        exact,
        witness: best_witness,
        subsets_checked: meter.used,
        elapsed: meter.elapsed(),
    })
}

/// One entry of an anonymity spectrum: the smallest set size observed to
/// leave a smallest class of exactly k, with its witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectrumEntry {
    pub card: usize,
    pub witness: Vec<usize>,
}

/// Worst-case anonymity against an adversary controlling at most `ell`
/// probe vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnonymityProfile {
    pub ell: usize,
    /// min over non-empty S with |S| <= ell of the partition k-value.
    pub level: usize,
    /// First set (canonical order) achieving `level`.
    pub witness: Vec<usize>,
    /// For every k-value observed, the first set that produced it.
    pub spectrum: BTreeMap<usize, SpectrumEntry>,
    /// False when the budget cut the sweep short.
    pub exact: bool,
    pub subsets_checked: u64,
    pub elapsed: Duration,
}

/// Computes the anonymity level for probe sets of size at most `ell`.
///
/// The singleton layer is always evaluated in full, so `level` is always an
/// achieved value even under a tiny budget.
pub fn anonymity_level(
    dm: &DistanceMatrix,
    ell: usize,
    budget: Budget,
) -> Result<AnonymityProfile, SolverError> {
    let n = dm.n();
    check_bound(ell, n)?;
    let mut meter = Meter::new(budget);
    let mut flat = Vec::with_capacity(BATCH * ell);
    let mut evals = Vec::with_capacity(BATCH);
    let mut level = usize::MAX;
    let mut witness: Vec<usize> = Vec::new();
    let mut spectrum: BTreeMap<usize, SpectrumEntry> = BTreeMap::new();
    let mut budget_hit = false;
    'layers: for card in 1..=ell {
        let mut sweep = LayerSweep::new(n, card);
        loop {
            let count = sweep.fill(&mut flat, BATCH);
            if count == 0 {
                break;
            }
            if card > 1 && meter.exhausted() {
                budget_hit = true;
                break 'layers;
            }
            eval_batch(dm, &flat, card, &mut evals);
            meter.used += count as u64;
            for (pos, &kv) in evals.iter().enumerate() {
                let s = || flat[pos * card..(pos + 1) * card].to_vec();
                if kv < level {
                    level = kv;
                    witness = s();
                }
                spectrum.entry(kv).or_insert_with(|| SpectrumEntry {
                    card,
                    witness: s(),
                });
            }
        }
    }
    debug_assert!(level != usize::MAX);
    Ok(AnonymityProfile {
        ell,
        level,
        witness,
        spectrum,
        exact: !budget_hit,
        subsets_checked: meter.used,
        elapsed: meter.elapsed(),
    })
}

/// Certificate check for a claimed k-MARS.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessReport {
    pub claimed_k: usize,
    /// Actual smallest class cardinality of the candidate set.
    pub actual_k: usize,
    /// Whether the candidate really is a k-MARS for the claimed k.
    pub certified: bool,
    /// The candidate set, sorted.
    pub set: Vec<usize>,
    /// When certified: a proven upper bound on the minimum k-MARS size,
    /// namely |set|.
    pub upper_bound: Option<usize>,
}

/// Checks a claimed k-MARS and, on success, certifies `msad_k <= |s_set|`.
pub fn verify_witness(
    dm: &DistanceMatrix,
    s_set: &[usize],
    k: usize,
) -> Result<WitnessReport, SetError> {
    if k == 0 {
        return Err(SetError::InvalidK);
    }
    let part = partition(dm, s_set)?;
    let mut set: Vec<usize> = s_set.to_vec();
    set.sort_unstable();
    set.dedup();
    let certified = part.k_value == k;
    Ok(WitnessReport {
        claimed_k: k,
        actual_k: part.k_value,
        certified,
        upper_bound: certified.then_some(set.len()),
        set,
    })
}

/// Searches rotation-symmetric subsets of a cycle for a k-MARS of the given
/// cardinality.
///
/// `dm` must come from a cycle whose vertices are numbered consecutively
/// around the cycle. Candidates are unions of orbits of the rotation
/// `v -> v + g (mod n)`, for each proper divisor g of n in ascending order,
/// with orbit choices enumerated lexicographically; the first hit is
/// returned. A miss here proves nothing: the restriction trades
/// completeness for speed.
pub fn cycle_rotation_witness(
    dm: &DistanceMatrix,
    k: usize,
    card: usize,
) -> Result<Option<Vec<usize>>, SolverError> {
    let n = dm.n();
    check_k(k, n)?;
    check_bound(card, n)?;
    let mut scratch = KeyScratch::new(n, dm.diameter() as usize);
    for g in 1..n {
        if n % g != 0 {
            continue;
        }
        let orbit_len = n / g;
        if card % orbit_len != 0 {
            continue;
        }
        let picks = card / orbit_len;
        if picks == 0 || picks > g {
            continue;
        }
        // S = { b + i*g : b in B, 0 <= i < n/g } for B over residues 0..g.
        let mut base: Vec<usize> = (0..picks).collect();
        loop {
            let mut s: Vec<usize> = base
                .iter()
                .flat_map(|&b| (0..orbit_len).map(move |i| b + i * g))
                .collect();
            s.sort_unstable();
            if k_value_scratch(dm, &s, &mut scratch) == k {
                return Ok(Some(s));
            }
            if !next_combination(&mut base, g) {
                break;
            }
        }
    }
    Ok(None)
}

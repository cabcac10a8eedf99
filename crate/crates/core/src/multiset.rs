//! Multiset distance representations and the equivalence partition they
//! induce on the vertices outside a probe set.
//!
//! For a set S and a vertex v outside S, the representation of v is the
//! multiset of distances from v to the members of S, canonicalized as a
//! count vector indexed by distance 1..=diameter. Two outside vertices are
//! equivalent when their count vectors match; the partition's `k_value` is
//! the smallest class cardinality. S is a k-MARS (k-multiset antiresolving
//! set) exactly when `k_value == k`.

use thiserror::Error;

use crate::graph::DistanceMatrix;

/// Errors for set-based queries.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum SetError {
    #[error("probe set must be non-empty")]
    EmptySet,
    #[error("probe set must be a proper subset of the vertices")]
    FullSet,
    #[error("vertex {v} out of range for n = {n}")]
    OutOfRange { v: usize, n: usize },
    #[error("vertex {v} belongs to the probe set")]
    VertexInSet { v: usize },
    #[error("k must be at least 1")]
    InvalidK,
}

/// Canonical multiset-of-distances representation: `counts()[r - 1]` is the
/// number of probe vertices at distance `r`, for r in 1..=diameter.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultisetKey {
    counts: Vec<u32>,
}

impl MultisetKey {
    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    /// Total multiplicity; always equals the probe set size.
    pub fn total(&self) -> u32 {
        self.counts.iter().sum()
    }
}

/// One equivalence class: the shared key and its members (sorted).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivClass {
    pub key: MultisetKey,
    pub members: Vec<usize>,
}

/// The full partition of `V \ S` under multiset-representation equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassPartition {
    /// Classes sorted lexicographically by key.
    pub classes: Vec<EquivClass>,
    /// Smallest class cardinality.
    pub k_value: usize,
}

/// Validates a probe set: in range, deduplicated, non-empty, proper.
/// Returns the sorted member list.
fn normalize_set(n: usize, s_set: &[usize]) -> Result<Vec<usize>, SetError> {
    for &v in s_set {
        if v >= n {
            return Err(SetError::OutOfRange { v, n });
        }
    }
    let mut s: Vec<usize> = s_set.to_vec();
    s.sort_unstable();
    s.dedup();
    if s.is_empty() {
        return Err(SetError::EmptySet);
    }
    if s.len() == n {
        return Err(SetError::FullSet);
    }
    Ok(s)
}

/// Multiset representation of `v` with respect to `s_set`.
pub fn multiset_key(
    dm: &DistanceMatrix,
    s_set: &[usize],
    v: usize,
) -> Result<MultisetKey, SetError> {
    let n = dm.n();
    if v >= n {
        return Err(SetError::OutOfRange { v, n });
    }
    let s = normalize_set(n, s_set)?;
    if s.binary_search(&v).is_ok() {
        return Err(SetError::VertexInSet { v });
    }
    let d = dm.diameter() as usize;
    let mut counts = vec![0u32; d];
    for &sv in &s {
        counts[dm.dist(v, sv) as usize - 1] += 1;
    }
    Ok(MultisetKey { counts })
}

/// Partitions `V \ S` by multiset-representation equality.
pub fn partition(dm: &DistanceMatrix, s_set: &[usize]) -> Result<ClassPartition, SetError> {
    let n = dm.n();
    let s = normalize_set(n, s_set)?;
    let d = dm.diameter() as usize;
    let mut keyed: Vec<(Vec<u32>, usize)> = Vec::with_capacity(n - s.len());
    for v in 0..n {
        if s.binary_search(&v).is_ok() {
            continue;
        }
        let mut counts = vec![0u32; d];
        for &sv in &s {
            counts[dm.dist(v, sv) as usize - 1] += 1;
        }
        keyed.push((counts, v));
    }
    keyed.sort_unstable();
    let mut classes: Vec<EquivClass> = Vec::new();
    for (counts, v) in keyed {
        match classes.last_mut() {
            Some(cls) if cls.key.counts == counts => cls.members.push(v),
            _ => classes.push(EquivClass {
                key: MultisetKey { counts },
                members: vec![v],
            }),
        }
    }
    let k_value = classes
        .iter()
        .map(|c| c.members.len())
        .min()
        .expect("proper subset leaves at least one outside vertex");
    Ok(ClassPartition { classes, k_value })
}

/// Smallest class cardinality of the partition induced by `s_set`.
pub fn k_value(dm: &DistanceMatrix, s_set: &[usize]) -> Result<usize, SetError> {
    let s = normalize_set(dm.n(), s_set)?;
    let mut scratch = KeyScratch::new(dm.n(), dm.diameter() as usize);
    Ok(k_value_scratch(dm, &s, &mut scratch))
}

/// Whether `s_set` is a k-MARS: the smallest class has cardinality exactly `k`.
pub fn is_k_mars(dm: &DistanceMatrix, s_set: &[usize], k: usize) -> Result<bool, SetError> {
    if k == 0 {
        return Err(SetError::InvalidK);
    }
    Ok(k_value(dm, s_set)? == k)
}

/// Smallest class cardinality under full distance-vector equality (probe
/// vertices kept in sorted order). Vector equality refines multiset
/// equality, so this never exceeds [`k_value`].
pub fn vector_k(dm: &DistanceMatrix, s_set: &[usize]) -> Result<usize, SetError> {
    let n = dm.n();
    let s = normalize_set(n, s_set)?;
    let mut keyed: Vec<(Vec<u32>, usize)> = Vec::with_capacity(n - s.len());
    for v in 0..n {
        if s.binary_search(&v).is_ok() {
            continue;
        }
        let vector: Vec<u32> = s.iter().map(|&sv| dm.dist(v, sv)).collect();
        keyed.push((vector, v));
    }
    keyed.sort_unstable();
    let mut min_run = usize::MAX;
    let mut run = 0usize;
    for i in 0..keyed.len() {
        run += 1;
        if i + 1 == keyed.len() || keyed[i + 1].0 != keyed[i].0 {
            min_run = min_run.min(run);
            run = 0;
        }
    }
    Ok(min_run)
}

/// Reusable buffers for the enumeration hot path.
pub(crate) struct KeyScratch {
    d: usize,
    counts: Vec<u32>,
    members: Vec<u32>,
    in_set: Vec<bool>,
}

impl KeyScratch {
    pub(crate) fn new(n: usize, diameter: usize) -> Self {
        KeyScratch {
            d: diameter,
            counts: vec![0; n * diameter],
            members: Vec::with_capacity(n),
            in_set: vec![false; n],
        }
    }
}

/// Scratch-based [`k_value`] for validated input: `s` sorted, deduplicated,
/// in range, non-empty, proper.
pub(crate) fn k_value_scratch(dm: &DistanceMatrix, s: &[usize], scratch: &mut KeyScratch) -> usize {
    let n = dm.n();
    let KeyScratch {
        d,
        counts,
        members,
        in_set,
    } = scratch;
    let d = *d;
    for &v in s {
        in_set[v] = true;
    }
    members.clear();
    for v in 0..n {
        if !in_set[v] {
            members.push(v as u32);
        }
    }
    for &v in members.iter() {
        let v = v as usize;
        counts[v * d..v * d + d].fill(0);
    }
    for &sv in s {
        let row = dm.row(sv);
        for &v in members.iter() {
            let v = v as usize;
            counts[v * d + row[v] as usize - 1] += 1;
        }
    }
    members.sort_unstable_by(|&a, &b| {
        let (a, b) = (a as usize, b as usize);
        counts[a * d..a * d + d].cmp(&counts[b * d..b * d + d])
    });
    let mut min_run = usize::MAX;
    let mut run = 0usize;
    for i in 0..members.len() {
        run += 1;
        let last = i + 1 == members.len();
        if last || {
            let (a, b) = (members[i] as usize, members[i + 1] as usize);
            counts[a * d..a * d + d] != counts[b * d..b * d + d]
        } {
            min_run = min_run.min(run);
            run = 0;
        }
    }
    for &v in s {
        in_set[v] = false;
    }
    min_run
}

//! Named graph families: seeded generators and closed-form answers.
//!
//! The oracles here return values justified by structural arguments alone,
//! never by search. Anything outside a proven case comes back `Unknown`
//! rather than an extrapolation, and upper bounds that are not known to be
//! tight are reported as bounds.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{DistanceMatrix, Graph};
use crate::multiset::{partition, SetError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FamilyError {
    #[error("invalid family parameters: {reason}")]
    InvalidParameters { reason: String },
    #[error("no closed form is available for this family")]
    UnsupportedFamily,
    #[error("random generation failed to reach a connected graph after {attempts} attempts")]
    GenerationFailed { attempts: usize },
    #[error("graph is not a tree")]
    NotATree,
    #[error("no rule applies to trees of diameter below 3")]
    DiameterTooSmall,
    #[error("graph is not a hub-and-rim wheel on at least 7 vertices with hub 0")]
    NotAWheel,
    #[error(transparent)]
    Set(#[from] SetError),
}

/// A named graph family instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilySpec {
    /// Path on `n` vertices, numbered along the path.
    Path { n: usize },
    /// Cycle on `n` vertices, numbered around the cycle.
    Cycle { n: usize },
    /// Complete bipartite graph; sides are `0..r` and `r..r + t`.
    CompleteBipartite { r: usize, t: usize },
    /// Hub vertex 0 joined to every vertex of the rim cycle `1..n`.
    Wheel { n: usize },
    /// Complete binary tree of the given height: root 0 has degree 2, every
    /// leaf sits at distance `depth` from the root, inner vertices have
    /// degree 3. Vertices use heap order (children of v are 2v+1, 2v+2).
    CompleteBinaryTree { depth: usize },
    /// The 3-dimensional hypercube: vertices 0..8, edges between words at
    /// Hamming distance 1.
    Hypercube3,
    /// Two hubs (0 and 5), each with four spokes, and a perfect matching
    /// between the spoke sets: spoke i attaches to hub 0 and spoke i + 5.
    TwinStar,
    /// Random graph built per vertex: each vertex draws a degree budget
    /// uniform in `1..=max_degree` and that many distinct random endpoints;
    /// the result is symmetrized and deduplicated. Seeds are retried
    /// (seed, seed+1, ...) until the graph is connected.
    SparseRandom { n: usize, max_degree: usize, seed: u64 },
    /// Complete graph minus `removed` distinct random edges; seeds are
    /// retried until the result is connected.
    DenseRandom { n: usize, removed: usize, seed: u64 },
    /// Uniform random labeled tree (decoded from a uniform random code).
    RandomTree { n: usize, seed: u64 },
}

fn invalid(reason: impl Into<String>) -> FamilyError {
    FamilyError::InvalidParameters {
        reason: reason.into(),
    }
}

/// Builds the graph described by `spec`. Seeded variants are deterministic
/// in their parameters.
pub fn generate(spec: &FamilySpec) -> Result<Graph, FamilyError> {
    match *spec {
        FamilySpec::Path { n } => {
            if n < 2 {
                return Err(invalid("path needs n >= 2"));
            }
            let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
            Ok(Graph::from_edges(n, &edges).expect("path is simple and connected"))
        }
        FamilySpec::Cycle { n } => {
            if n < 3 {
                return Err(invalid("cycle needs n >= 3"));
            }
            let mut edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
            edges.push((n - 1, 0));
            Ok(Graph::from_edges(n, &edges).expect("cycle is simple and connected"))
        }
        FamilySpec::CompleteBipartite { r, t } => {
            if r < 1 || t < 1 {
                return Err(invalid("complete bipartite needs r >= 1 and t >= 1"));
            }
            let mut edges = Vec::with_capacity(r * t);
            for u in 0..r {
                for v in r..r + t {
                    edges.push((u, v));
                }
            }
            Ok(Graph::from_edges(r + t, &edges).expect("complete bipartite is connected"))
        }
        FamilySpec::Wheel { n } => {
            if n < 4 {
                return Err(invalid("wheel needs n >= 4"));
            }
            let mut edges = Vec::with_capacity(2 * (n - 1));
            for v in 1..n {
                edges.push((0, v));
                edges.push((v, if v == n - 1 { 1 } else { v + 1 }));
            }
            Ok(Graph::from_edges(n, &edges).expect("wheel is simple and connected"))
        }
        FamilySpec::CompleteBinaryTree { depth } => {
            if depth < 1 {
                return Err(invalid("complete binary tree needs depth >= 1"));
            }
            let n = (1usize << (depth + 1)) - 1;
            let edges: Vec<_> = (1..n).map(|v| ((v - 1) / 2, v)).collect();
            Ok(Graph::from_edges(n, &edges).expect("heap order yields a tree"))
        }
        FamilySpec::Hypercube3 => {
            let mut edges = Vec::new();
            for u in 0..8usize {
                for v in u + 1..8 {
                    if (u ^ v).count_ones() == 1 {
                        edges.push((u, v));
                    }
                }
            }
            Ok(Graph::from_edges(8, &edges).expect("hypercube is connected"))
        }
        FamilySpec::TwinStar => {
            let mut edges = vec![
                (0, 1),
                (0, 2),
                (0, 3),
                (0, 4),
                (5, 6),
                (5, 7),
                (5, 8),
                (5, 9),
            ];
            for i in 1..=4 {
                edges.push((i, i + 5));
            }
            Ok(Graph::from_edges(10, &edges).expect("twin star is connected"))
        }
        FamilySpec::SparseRandom {
            n,
            max_degree,
            seed,
        } => sparse_random(n, max_degree, seed),
        FamilySpec::DenseRandom { n, removed, seed } => dense_random(n, removed, seed),
        FamilySpec::RandomTree { n, seed } => random_tree(n, seed),
    }
}

const RETRY_LIMIT: usize = 1000;

fn sparse_random(n: usize, max_degree: usize, seed: u64) -> Result<Graph, FamilyError> {
    if n < 2 {
        return Err(invalid("sparse random graph needs n >= 2"));
    }
    if max_degree < 1 {
        return Err(invalid("sparse random graph needs max_degree >= 1"));
    }
    let cap = max_degree.min(n - 1);
    for attempt in 0..RETRY_LIMIT {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt as u64));
        let mut edge_set: BTreeSet<(usize, usize)> = BTreeSet::new();
        for u in 0..n {
            let budget = rng.gen_range(1..=cap);
            for idx in rand::seq::index::sample(&mut rng, n - 1, budget) {
                let v = if idx >= u { idx + 1 } else { idx };
                edge_set.insert((u.min(v), u.max(v)));
            }
        }
        let edges: Vec<_> = edge_set.into_iter().collect();
        if let Ok(g) = Graph::from_edges(n, &edges) {
            return Ok(g);
        }
    }
    Err(FamilyError::GenerationFailed {
        attempts: RETRY_LIMIT,
    })
}

fn dense_random(n: usize, removed: usize, seed: u64) -> Result<Graph, FamilyError> {
    if n < 2 {
        return Err(invalid("dense random graph needs n >= 2"));
    }
    let total = n * (n - 1) / 2;
    if total - removed < n - 1 {
        return Err(invalid(format!(
            "removing {removed} of {total} edges cannot leave a connected graph"
        )));
    }
    let mut pairs = Vec::with_capacity(total);
    for u in 0..n {
        for v in u + 1..n {
            pairs.push((u, v));
        }
    }
    for attempt in 0..RETRY_LIMIT {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt as u64));
        let mut keep = vec![true; total];
        for idx in rand::seq::index::sample(&mut rng, total, removed) {
            keep[idx] = false;
        }
        let edges: Vec<_> = pairs
            .iter()
            .zip(&keep)
            .filter_map(|(&e, &k)| k.then_some(e))
            .collect();
        if let Ok(g) = Graph::from_edges(n, &edges) {
            return Ok(g);
        }
    }
    Err(FamilyError::GenerationFailed {
        attempts: RETRY_LIMIT,
    })
}

/// Decodes a uniform random code word into a uniform random labeled tree.
fn random_tree(n: usize, seed: u64) -> Result<Graph, FamilyError> {
    if n < 2 {
        return Err(invalid("random tree needs n >= 2"));
    }
    if n == 2 {
        return Ok(Graph::from_edges(2, &[(0, 1)]).expect("single edge"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let code: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    let mut degree = vec![1u32; n];
    for &v in &code {
        degree[v] += 1;
    }
    let mut leaves: BTreeSet<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &v in &code {
        let leaf = *leaves.iter().next().expect("a leaf always remains");
        leaves.remove(&leaf);
        edges.push((leaf, v));
        degree[v] -= 1;
        if degree[v] == 1 {
            leaves.insert(v);
        }
    }
    let mut rest = leaves.into_iter();
    let a = rest.next().expect("two vertices remain");
    let b = rest.next().expect("two vertices remain");
    edges.push((a, b));
    Ok(Graph::from_edges(n, &edges).expect("decoded edge set is a tree"))
}

/// A closed-form answer for a minimum k-MARS size.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosedForm {
    /// Exactly this minimum cardinality.
    Exact(usize),
    /// A k-MARS of this size exists; minimality is not claimed.
    UpperBound(usize),
    /// No k-MARS exists for this k.
    Infeasible,
    /// Outside every proven case.
    Unknown,
}

/// A closed-form value plus the rule that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosedFormResult {
    pub value: ClosedForm,
    /// Human-readable name of the case that fired.
    pub rule: &'static str,
}

fn exact(value: usize, rule: &'static str) -> ClosedFormResult {
    ClosedFormResult {
        value: ClosedForm::Exact(value),
        rule,
    }
}

fn infeasible(rule: &'static str) -> ClosedFormResult {
    ClosedFormResult {
        value: ClosedForm::Infeasible,
        rule,
    }
}

fn unknown(rule: &'static str) -> ClosedFormResult {
    ClosedFormResult {
        value: ClosedForm::Unknown,
        rule,
    }
}

/// Largest k admitting a k-MARS, for the families where a closed form is
/// known.
pub fn oracle_kappa(spec: &FamilySpec) -> Result<ClosedFormResult, FamilyError> {
    match *spec {
        FamilySpec::Path { n } => {
            if n < 2 {
                return Err(invalid("path needs n >= 2"));
            }
            if n == 2 {
                Ok(exact(1, "path on two vertices: universal vertex"))
            } else {
                Ok(exact(2, "path: a mid vertex pairs its two sides; 3 is out of reach"))
            }
        }
        FamilySpec::CompleteBipartite { r, t } => {
            if r < 1 || t < 1 {
                return Err(invalid("complete bipartite needs r >= 1 and t >= 1"));
            }
            let (big, small) = (r.max(t), r.min(t));
            if small == 1 {
                Ok(exact(
                    big + small - 1,
                    "complete bipartite with a singleton side: universal hub",
                ))
            } else {
                Ok(exact(
                    big + small - 2,
                    "complete bipartite, both sides >= 2: probe one vertex per side",
                ))
            }
        }
        FamilySpec::Wheel { n } => {
            if n < 4 {
                return Err(invalid("wheel needs n >= 4"));
            }
            Ok(exact(n - 1, "wheel: universal hub"))
        }
        _ => Err(FamilyError::UnsupportedFamily),
    }
}

/// Minimum k-MARS size on a path.
pub fn oracle_msad_path(n: usize, k: usize) -> Result<ClosedFormResult, FamilyError> {
    if n < 2 {
        return Err(invalid("path needs n >= 2"));
    }
    if k < 1 {
        return Err(invalid("k must be at least 1"));
    }
    if n == 2 {
        return Ok(if k == 1 {
            exact(1, "path on two vertices: one probe leaves one singleton class")
        } else {
            infeasible("path on two vertices: probing both leaves nobody to classify")
        });
    }
    match k {
        1 => Ok(exact(1, "path: a leaf splits everyone by distance")),
        2 => {
            if n % 2 == 1 {
                Ok(exact(1, "path of odd order: the center pairs its two sides"))
            } else {
                Ok(exact(2, "path of even order: the two leaves pair mirror vertices"))
            }
        }
        _ => Ok(infeasible("path: no probe set leaves a smallest class above 2")),
    }
}

/// Minimum k-MARS size on a complete bipartite graph with side sizes
/// `r >= t >= 1`.
pub fn oracle_msad_complete_bipartite(
    r: usize,
    t: usize,
    k: usize,
) -> Result<ClosedFormResult, FamilyError> {
    if t < 1 || r < t {
        return Err(invalid("complete bipartite oracle needs r >= t >= 1"));
    }
    if k < 1 {
        return Err(invalid("k must be at least 1"));
    }
    let kappa_max = if t == 1 { r + t - 1 } else { r + t - 2 };
    if k > kappa_max {
        return Ok(infeasible("complete bipartite: k exceeds the largest achievable value"));
    }
    if t >= 2 && k == 1 {
        return Ok(unknown("complete bipartite: k = 1 is outside the proven cases"));
    }
    if k < t {
        // Here 1 < k < t: probe all but k vertices of the small side.
        return Ok(exact(t - k, "complete bipartite, 1 < k < t"));
    }
    if k == t {
        return Ok(if r > t {
            exact(1, "complete bipartite, k = t < r: one probe in the large side")
        } else {
            exact(r, "complete bipartite, k = t = r: probe one full side")
        });
    }
    if k <= r {
        // t < k <= r.
        return Ok(exact(r + t - k, "complete bipartite, t < k <= r"));
    }
    // r < k <= r + t - 2; the leftover sides must split k across both parts.
    if k % 2 == (r + t) % 2 {
        Ok(exact(r + t - k, "complete bipartite, r < k, matching parity"))
    } else {
        Ok(infeasible("complete bipartite, r < k, parity mismatch"))
    }
}

/// Minimum 2-MARS size on a tree.
///
/// Paths are answered by the parity rule. Other trees need diameter at
/// least 3 (stars are handled by the complete bipartite case list); for
/// them the answer is 1 exactly when some vertex's smallest distance shell
/// `D_i(x)` over `1 <= i <= ecc(x)` has exactly two vertices — then that
/// singleton is a 2-MARS. A shell of size 2 alone is not enough: the same
/// vertex may own a singleton shell elsewhere, dropping its guarantee
/// to 1.
pub fn oracle_msad2_tree(g: &Graph, dm: &DistanceMatrix) -> Result<ClosedFormResult, FamilyError> {
    if !g.is_tree() {
        return Err(FamilyError::NotATree);
    }
    let n = g.n();
    let is_path = (0..n).all(|v| g.degree(v) <= 2);
    if is_path {
        return oracle_msad_path(n, 2);
    }
    if dm.diameter() < 3 {
        return Err(FamilyError::DiameterTooSmall);
    }
    let mut shell = vec![0u32; dm.diameter() as usize + 1];
    for x in 0..n {
        shell.fill(0);
        for v in 0..n {
            shell[dm.dist(x, v) as usize] += 1;
        }
        if shell[1..=dm.eccentricity(x) as usize]
            .iter()
            .min()
            .copied()
            == Some(2)
        {
            return Ok(exact(1, "tree: a vertex whose smallest distance shell has two vertices"));
        }
    }
    Ok(exact(
        2,
        "tree where every vertex has a sub-two smallest shell or none of size two",
    ))
}

/// Minimum k-MARS size on a complete binary tree of the given height.
///
/// Height 1 is a three-vertex path and routes to the path rules. For
/// heights >= 2 the proven cases are k = 3 (exact) and k a power of two
/// up to 2^height (a bound from probing the top of the tree: the witness
/// is the full set of vertices within distance log2(k) - 1 of the root,
/// which leaves the k vertices of the next level as the smallest class
/// and has size k - 1).
pub fn oracle_msad_binary_tree(depth: usize, k: usize) -> Result<ClosedFormResult, FamilyError> {
    if depth < 1 {
        return Err(invalid("complete binary tree needs depth >= 1"));
    }
    if k < 1 {
        return Err(invalid("k must be at least 1"));
    }
    if depth == 1 {
        return oracle_msad_path(3, k);
    }
    if k == 3 {
        return Ok(match depth {
            2 => infeasible("complete binary tree of height 2: no 3-MARS exists"),
            3 => exact(2, "complete binary tree of height 3: root plus one child"),
            _ => exact(1, "complete binary tree of height > 3: one child of the root"),
        });
    }
    if k >= 2 && k.is_power_of_two() && k <= (1usize << depth) {
        return Ok(ClosedFormResult {
            value: ClosedForm::UpperBound(k - 1),
            rule: "complete binary tree, k a power of two: probe the top levels",
        });
    }
    Ok(unknown("complete binary tree: k outside the proven cases"))
}

/// Minimum k-MARS size on a wheel (hub 0, rim cycle of n - 1 vertices),
/// for n >= 7.
pub fn oracle_msad_wheel(n: usize, k: usize) -> Result<ClosedFormResult, FamilyError> {
    if n < 7 {
        return Err(invalid("wheel rules need n >= 7"));
    }
    if k < 1 || k > n - 1 {
        return Err(invalid("wheel rules need 1 <= k <= n - 1"));
    }
    if k == n - 1 {
        return Ok(exact(1, "wheel: the hub alone leaves the whole rim as one class"));
    }
    if k < 4 {
        return Ok(unknown("wheel: k <= 3 is outside the proven cases"));
    }
    // All comparisons below are doubled to stay in integers.
    if k % 2 == 0 {
        if 2 * n >= 5 * k + 2 {
            Ok(exact((k + 2) / 2, "wheel, even k, order at least (5k+2)/2"))
        } else if 2 * n >= 3 * k + 2 {
            Ok(exact(n - k, "wheel, even k, order in [(3k+2)/2, (5k+2)/2)"))
        } else {
            Ok(infeasible("wheel, even k, order below (3k+2)/2"))
        }
    } else {
        if 2 * n >= 5 * k + 5 {
            let rem = (n - 1 - k) % 3;
            let value = ((n - 1 - k) / 3 + rem + 1).min((3 * k + 3) / 2);
            Ok(exact(value, "wheel, odd k, order at least (5k+5)/2"))
        } else if n > 2 * k {
            Ok(exact(n - k, "wheel, odd k, order in (2k, (5k+5)/2)"))
        } else {
            Ok(infeasible("wheel, odd k, order at most 2k"))
        }
    }
}

/// Outcome of checking the hub-membership rule on one candidate set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LemmaCheck {
    /// Either the set is not a k-MARS for any k >= 4 (vacuous) or it
    /// contains the hub.
    Holds,
    /// The set is a k-MARS with k >= 4 yet misses the hub.
    Violated { observed_k: usize, set: Vec<usize> },
}

/// Checks, on a wheel with hub 0 and n >= 7, that a k-MARS with k >= 4
/// must contain the hub.
pub fn wheel_center_lemma_check(
    g: &Graph,
    dm: &DistanceMatrix,
    s_set: &[usize],
    k: usize,
) -> Result<LemmaCheck, FamilyError> {
    let n = g.n();
    let rim: Vec<usize> = (1..n).collect();
    let is_wheel = n >= 7
        && g.degree(0) == n - 1
        && (1..n).all(|v| g.degree(v) == 3)
        && g.induced_connected(&rim);
    if !is_wheel {
        return Err(FamilyError::NotAWheel);
    }
    if k < 4 {
        return Err(invalid("the hub rule concerns k >= 4"));
    }
    let part = partition(dm, s_set)?;
    let mut set: Vec<usize> = s_set.to_vec();
    set.sort_unstable();
    set.dedup();
    if part.k_value == k && !set.contains(&0) {
        Ok(LemmaCheck::Violated {
            observed_k: part.k_value,
            set,
        })
    } else {
        Ok(LemmaCheck::Holds)
    }
}

//! Integer-program encoding of the k-MARS search.
//!
//! The model minimizes the probe-set size over binary probe indicators
//! `s_u`, class-assignment indicators `q_u_v` (vertex v joins the class
//! represented by u; `q_u_u` marks u as a representative; only `u <= v` is
//! materialized), integer distance profiles `t_u_r` (how many probed
//! vertices sit at distance r from u), and profile-separation indicators
//! `d_u_v_r` (the profiles of u and v differ at distance r, materialized
//! for `u < v`).
//!
//! The encoding constrains every class to have at least k members, not
//! exactly k, so an optimal assignment must be decoded and re-checked
//! against the exact partition before its probe set is accepted as a
//! k-MARS. `Assignment::decode` plus the partition routines cover that
//! final step.

use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::DistanceMatrix;
use crate::multiset::{partition, SetError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MilpError {
    #[error("k = {k} out of range; valid range is 1..={max} for n = {n}", max = n - 1)]
    InvalidK { k: usize, n: usize },
    #[error("probe set leaves a class of size {size}, below the required minimum {k}")]
    ClassTooSmall { size: usize, k: usize },
    #[error("assignment shape does not match the model dimensions")]
    ShapeMismatch,
    #[error(transparent)]
    Set(#[from] SetError),
}

/// One decision variable of the model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    /// Vertex u is probed.
    S(usize),
    /// Vertex v belongs to the class represented by u (u <= v).
    Q(usize, usize),
    /// Number of probed vertices at distance r from u (r >= 1).
    T(usize, usize),
    /// Profiles of u and v differ at distance r, with u's the larger
    /// (u < v).
    Delta(usize, usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

/// A linear constraint in normal form: sum of terms `sense` rhs.
#[derive(Debug, Clone)]
pub struct Constraint {
    pub name: String,
    /// Constraint-family tag, the prefix of `name`.
    pub family: &'static str,
    pub terms: Vec<(i64, Var)>,
    pub sense: Sense,
    pub rhs: i64,
}

/// Variable-count summary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VarCounts {
    pub s: usize,
    pub q: usize,
    pub t: usize,
    pub delta: usize,
}

impl VarCounts {
    pub fn total(&self) -> usize {
        self.s + self.q + self.t + self.delta
    }
}

/// The complete model for one graph and one k.
#[derive(Debug, Clone)]
pub struct MilpModel {
    n: usize,
    k: usize,
    /// Number of distinct positive distances; profiles run over 1..=this.
    diameter: usize,
    /// Slack constant n - k used to deactivate comparisons.
    big_m: i64,
    dm: DistanceMatrix,
    constraints: Vec<Constraint>,
}

/// Index of the pair (u, v) with u <= v in lexicographic order.
fn pair_index(n: usize, u: usize, v: usize) -> usize {
    debug_assert!(u <= v && v < n);
    u * (2 * n - u + 1) / 2 + (v - u)
}

/// Index of the pair (u, v) with u < v in lexicographic order.
fn tri_index(n: usize, u: usize, v: usize) -> usize {
    debug_assert!(u < v && v < n);
    u * (2 * n - u - 1) / 2 + (v - u - 1)
}

/// Builds the model for finding a minimum probe set whose classes all have
/// at least k members.
pub fn build_model(dm: &DistanceMatrix, k: usize) -> Result<MilpModel, MilpError> {
    let n = dm.n();
    if k == 0 || k > n - 1 {
        return Err(MilpError::InvalidK { k, n });
    }
    let d = dm.diameter() as usize;
    let m = (n - k) as i64;
    let mut cons: Vec<Constraint> = Vec::new();
    let mut push = |name: String, family: &'static str, terms: Vec<(i64, Var)>, sense: Sense, rhs: i64| {
        cons.push(Constraint {
            name,
            family,
            terms,
            sense,
            rhs,
        });
    };

    // (1) At least one vertex is probed.
    push(
        "noempty".into(),
        "noempty",
        (0..n).map(|u| (1, Var::S(u))).collect(),
        Sense::Ge,
        1,
    );

    // (2) Every vertex is probed or joins exactly one class.
    for u in 0..n {
        let mut terms = vec![(1, Var::S(u))];
        terms.extend((0..=u).map(|v| (1, Var::Q(v, u))));
        push(format!("partition_{u}"), "partition", terms, Sense::Eq, 1);
    }

    // (3) Joining u's class requires u to be a representative.
    for u in 0..n {
        for v in u + 1..n {
            push(
                format!("logic_{u}_{v}"),
                "logic",
                vec![(1, Var::Q(u, v)), (-1, Var::Q(u, u))],
                Sense::Le,
                0,
            );
        }
    }

    // (4) Probed vertices neither represent nor join classes.
    for u in 0..n {
        for v in u..n {
            push(
                format!("incomp_{u}_{v}"),
                "incomp",
                vec![(1, Var::S(u)), (1, Var::Q(u, v))],
                Sense::Le,
                1,
            );
        }
    }

    // (5) A representative's class has at least k members.
    for u in 0..n {
        let mut terms: Vec<(i64, Var)> = (u + 1..n).map(|v| (1, Var::Q(u, v))).collect();
        terms.push((-((k as i64) - 1), Var::Q(u, u)));
        push(format!("card_{u}"), "card", terms, Sense::Ge, 0);
    }

    // (6) Profiles count probed vertices by distance.
    for u in 0..n {
        for r in 1..=d {
            let mut terms = vec![(1, Var::T(u, r))];
            for v in 0..n {
                if dm.dist(u, v) as usize == r {
                    terms.push((-1, Var::S(v)));
                }
            }
            push(format!("count_{u}_{r}"), "count", terms, Sense::Eq, 0);
        }
    }

    // (7)/(8) Vertices in the same class share their profile.
    for u in 0..n {
        for v in u + 1..n {
            for r in 1..=d {
                push(
                    format!("classlo_{u}_{v}_{r}"),
                    "classlo",
                    vec![(1, Var::T(u, r)), (-1, Var::T(v, r)), (-m, Var::Q(u, v))],
                    Sense::Ge,
                    -m,
                );
            }
        }
    }
    for u in 0..n {
        for v in u + 1..n {
            for r in 1..=d {
                push(
                    format!("classhi_{u}_{v}_{r}"),
                    "classhi",
                    vec![(1, Var::T(u, r)), (-1, Var::T(v, r)), (m, Var::Q(u, v))],
                    Sense::Le,
                    m,
                );
            }
        }
    }

    // (9) Separation indicators are off inside a class.
    for u in 0..n {
        for v in u + 1..n {
            for r in 1..=d {
                push(
                    format!("dscope_{u}_{v}_{r}"),
                    "dscope",
                    vec![(1, Var::Delta(u, v, r)), (1, Var::Q(u, v))],
                    Sense::Le,
                    1,
                );
            }
        }
    }

    // (10) Two representatives must separate somewhere.
    for u in 0..n {
        for v in u + 1..n {
            let mut terms = vec![(1, Var::Q(u, u)), (1, Var::Q(v, v))];
            terms.extend((1..=d).map(|r| (-1, Var::Delta(u, v, r))));
            push(format!("maximal_{u}_{v}"), "maximal", terms, Sense::Le, 1);
        }
    }

    // (11) A separation claim needs a strictly larger profile entry.
    for u in 0..n {
        for v in u + 1..n {
            for r in 1..=d {
                push(
                    format!("dmean_{u}_{v}_{r}"),
                    "dmean",
                    vec![(1 + m, Var::Delta(u, v, r)), (-1, Var::T(u, r)), (1, Var::T(v, r))],
                    Sense::Le,
                    m,
                );
            }
        }
    }

    // (12)/(13) Class members may not out-profile their representative.
    for u in 0..n {
        for v in u + 1..n {
            for r in 1..=d {
                push(
                    format!("seppos_{u}_{v}_{r}"),
                    "seppos",
                    vec![
                        (1, Var::T(u, r)),
                        (-1, Var::T(v, r)),
                        (-m, Var::S(u)),
                        (m, Var::Q(u, v)),
                    ],
                    Sense::Le,
                    m,
                );
            }
        }
    }
    for u in 0..n {
        for v in u + 1..n {
            for r in 1..=d {
                push(
                    format!("sepneg_{u}_{v}_{r}"),
                    "sepneg",
                    vec![
                        (-1, Var::T(u, r)),
                        (1, Var::T(v, r)),
                        (-m, Var::S(u)),
                        (m, Var::Q(u, v)),
                    ],
                    Sense::Le,
                    m,
                );
            }
        }
    }

    Ok(MilpModel {
        n,
        k,
        diameter: d,
        big_m: m,
        dm: dm.clone(),
        constraints: cons,
    })
}

impl MilpModel {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn diameter(&self) -> usize {
        self.diameter
    }

    pub fn big_m(&self) -> i64 {
        self.big_m
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn var_counts(&self) -> VarCounts {
        let n = self.n;
        VarCounts {
            s: n,
            q: n * (n + 1) / 2,
            t: n * self.diameter,
            delta: n * (n - 1) / 2 * self.diameter,
        }
    }

    /// Number of constraints per family, in emission order.
    pub fn family_counts(&self) -> Vec<(&'static str, usize)> {
        let mut out: Vec<(&'static str, usize)> = Vec::new();
        for c in &self.constraints {
            match out.last_mut() {
                Some((fam, count)) if *fam == c.family => *count += 1,
                _ => out.push((c.family, 1)),
            }
        }
        out
    }

    fn var_name(var: Var) -> String {
        match var {
            Var::S(u) => format!("s_{u}"),
            Var::Q(u, v) => format!("q_{u}_{v}"),
            Var::T(u, r) => format!("t_{u}_{r}"),
            Var::Delta(u, v, r) => format!("d_{u}_{v}_{r}"),
        }
    }

    /// Renders the model in LP text format. The output is byte-for-byte
    /// deterministic for a given graph and k.
    pub fn export_lp(&self) -> String {
        let mut out = String::new();
        out.push_str("Minimize\n");
        let obj_terms: Vec<(i64, Var)> = (0..self.n).map(|u| (1, Var::S(u))).collect();
        push_wrapped(&mut out, &format!(" obj: {}", render_terms(&obj_terms)));
        out.push_str("Subject To\n");
        for c in &self.constraints {
            let sense = match c.sense {
                Sense::Le => "<=",
                Sense::Ge => ">=",
                Sense::Eq => "=",
            };
            push_wrapped(
                &mut out,
                &format!(" {}: {} {} {}", c.name, render_terms(&c.terms), sense, c.rhs),
            );
        }
        out.push_str("Bounds\n");
        for u in 0..self.n {
            for r in 1..=self.diameter {
                let _ = writeln!(out, " 0 <= t_{u}_{r} <= {}", self.big_m);
            }
        }
        out.push_str("Binaries\n");
        let mut binaries: Vec<String> = Vec::new();
        for u in 0..self.n {
            binaries.push(format!("s_{u}"));
        }
        for u in 0..self.n {
            for v in u..self.n {
                binaries.push(format!("q_{u}_{v}"));
            }
        }
        for u in 0..self.n {
            for v in u + 1..self.n {
                for r in 1..=self.diameter {
                    binaries.push(format!("d_{u}_{v}_{r}"));
                }
            }
        }
        push_wrapped(&mut out, &format!(" {}", binaries.join(" ")));
        out.push_str("Generals\n");
        let mut generals: Vec<String> = Vec::new();
        for u in 0..self.n {
            for r in 1..=self.diameter {
                generals.push(format!("t_{u}_{r}"));
            }
        }
        push_wrapped(&mut out, &format!(" {}", generals.join(" ")));
        out.push_str("End\n");
        out
    }
}

/// Renders `c1 x1 + c2 x2 - c3 x3` with unit coefficients elided.
fn render_terms(terms: &[(i64, Var)]) -> String {
    let mut out = String::new();
    for (i, &(coef, var)) in terms.iter().enumerate() {
        let name = MilpModel::var_name(var);
        let mag = coef.unsigned_abs();
        if i == 0 {
            if coef < 0 {
                out.push_str("- ");
            }
        } else if coef < 0 {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        if mag != 1 {
            let _ = write!(out, "{mag} ");
        }
        out.push_str(&name);
    }
    out
}

/// Appends `line` to `out`, wrapping on spaces near 200 columns;
/// continuation lines keep a leading space so LP readers treat them as part
/// of the same record.
fn push_wrapped(out: &mut String, line: &str) {
    const WIDTH: usize = 200;
    let mut rest = line;
    loop {
        if rest.len() <= WIDTH {
            out.push_str(rest);
            out.push('\n');
            return;
        }
        let cut = rest[..WIDTH].rfind(' ').unwrap_or(WIDTH);
        out.push_str(&rest[..cut]);
        out.push('\n');
        out.push(' ');
        rest = &rest[cut + 1..];
    }
}

/// A full variable assignment for one model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    n: usize,
    diameter: usize,
    s: Vec<bool>,
    q: Vec<bool>,
    t: Vec<i64>,
    delta: Vec<bool>,
}

impl Assignment {
    /// All-zero assignment with the model's shape.
    pub fn zeroed(model: &MilpModel) -> Self {
        let n = model.n;
        let d = model.diameter;
        Assignment {
            n,
            diameter: d,
            s: vec![false; n],
            q: vec![false; n * (n + 1) / 2],
            t: vec![0; n * d],
            delta: vec![false; n * (n - 1) / 2 * d],
        }
    }

    pub fn value(&self, var: Var) -> i64 {
        match var {
            Var::S(u) => self.s[u] as i64,
            Var::Q(u, v) => self.q[pair_index(self.n, u, v)] as i64,
            Var::T(u, r) => self.t[u * self.diameter + (r - 1)],
            Var::Delta(u, v, r) => {
                self.delta[tri_index(self.n, u, v) * self.diameter + (r - 1)] as i64
            }
        }
    }

    pub fn set_s(&mut self, u: usize, on: bool) {
        self.s[u] = on;
    }

    pub fn set_q(&mut self, u: usize, v: usize, on: bool) {
        self.q[pair_index(self.n, u, v)] = on;
    }

    pub fn set_t(&mut self, u: usize, r: usize, value: i64) {
        self.t[u * self.diameter + (r - 1)] = value;
    }

    pub fn set_delta(&mut self, u: usize, v: usize, r: usize, on: bool) {
        self.delta[tri_index(self.n, u, v) * self.diameter + (r - 1)] = on;
    }

    /// Reads back the probe set and the classes encoded in the q variables.
    /// Classes come out keyed by representative, members sorted.
    pub fn decode(&self) -> (Vec<usize>, Vec<Vec<usize>>) {
        let probe: Vec<usize> = (0..self.n).filter(|&u| self.s[u]).collect();
        let mut classes = Vec::new();
        for u in 0..self.n {
            if self.q[pair_index(self.n, u, u)] {
                let mut members = vec![u];
                members.extend((u + 1..self.n).filter(|&v| self.q[pair_index(self.n, u, v)]));
                classes.push(members);
            }
        }
        (probe, classes)
    }
}

/// Encodes a probe set as a model assignment: representatives are the
/// lowest-index members of the exact partition classes, profiles are the
/// true distance counts, and each representative pair separates exactly
/// where the earlier one's profile is larger.
///
/// Fails with `ClassTooSmall` when some class has fewer than k members,
/// since no feasible encoding exists then.
pub fn assignment_from_set(model: &MilpModel, s_set: &[usize]) -> Result<Assignment, MilpError> {
    let part = partition(&model.dm, s_set)?;
    if part.k_value < model.k {
        return Err(MilpError::ClassTooSmall {
            size: part.k_value,
            k: model.k,
        });
    }
    let mut a = Assignment::zeroed(model);
    let mut sorted: Vec<usize> = s_set.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    for &u in &sorted {
        a.set_s(u, true);
    }
    for u in 0..model.n {
        for &sv in &sorted {
            let r = model.dm.dist(u, sv) as usize;
            if r >= 1 {
                a.set_t(u, r, a.value(Var::T(u, r)) + 1);
            }
        }
    }
    let reps: Vec<usize> = part.classes.iter().map(|c| c.members[0]).collect();
    for cls in &part.classes {
        let rep = cls.members[0];
        for &v in &cls.members {
            a.set_q(rep, v, true);
        }
    }
    for (i, &x) in reps.iter().enumerate() {
        for &y in reps.iter().skip(i + 1) {
            let (u, v) = (x.min(y), x.max(y));
            for r in 1..=model.diameter {
                if a.value(Var::T(u, r)) > a.value(Var::T(v, r)) {
                    a.set_delta(u, v, r, true);
                }
            }
        }
    }
    Ok(a)
}

/// Per-family constraint check results.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyReport {
    pub family: &'static str,
    pub checked: usize,
    pub violated: usize,
    /// Name of the first violated row, with its slack.
    pub first_violation: Option<String>,
}

/// Full feasibility check of an assignment against a model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeasibilityReport {
    pub feasible: bool,
    /// Probe-set size under the assignment.
    pub objective: i64,
    /// True when every integer profile lies in [0, n - k].
    pub domain_ok: bool,
    pub families: Vec<FamilyReport>,
}

/// Evaluates every constraint family and the variable domains.
pub fn check_assignment(
    model: &MilpModel,
    a: &Assignment,
) -> Result<FeasibilityReport, MilpError> {
    if a.n != model.n || a.diameter != model.diameter {
        return Err(MilpError::ShapeMismatch);
    }
    let domain_ok = a.t.iter().all(|&tv| (0..=model.big_m).contains(&tv));
    let mut families: Vec<FamilyReport> = Vec::new();
    for c in &model.constraints {
        let lhs: i64 = c.terms.iter().map(|&(coef, var)| coef * a.value(var)).sum();
        let ok = match c.sense {
            Sense::Le => lhs <= c.rhs,
            Sense::Ge => lhs >= c.rhs,
            Sense::Eq => lhs == c.rhs,
        };
        if families.last().map(|f| f.family) != Some(c.family) {
            families.push(FamilyReport {
                family: c.family,
                checked: 0,
                violated: 0,
                first_violation: None,
            });
        }
        let fam = families.last_mut().expect("just pushed");
        fam.checked += 1;
        if !ok {
            fam.violated += 1;
            if fam.first_violation.is_none() {
                fam.first_violation = Some(format!("{} (lhs = {lhs}, rhs = {})", c.name, c.rhs));
            }
        }
    }
    let feasible = domain_ok && families.iter().all(|f| f.violated == 0);
    let objective = a.s.iter().map(|&b| b as i64).sum();
    Ok(FeasibilityReport {
        feasible,
        objective,
        domain_ok,
        families,
    })
}

//! Structured run reports. Every command produces one [`Report`]; the text
//! and JSON renderings carry the same values, and only `elapsed_seconds`
//! varies between identical runs.

use std::fmt::Write as _;

use mars_core::milp::{MilpModel, VarCounts};
use mars_core::solver::{AnonymityProfile, KappaOutcome, SolveOutcome, SolveStatus, WitnessReport};
use serde::Serialize;

/// One command invocation, described end to end.
#[derive(Debug, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub operation: &'static str,
    pub input: Input,
    pub parameters: Params,
    pub outcome: Outcome,
    /// Wall-clock time of the whole command; the only field that may
    /// differ between two identical invocations.
    pub elapsed_seconds: f64,
}

/// The analyzed or generated graph.
#[derive(Debug, Serialize)]
pub struct Input {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    pub n: usize,
    pub m: usize,
    pub diameter: u32,
}

/// Echo of the effective command parameters (defaults resolved).
#[derive(Debug, Default, Serialize)]
pub struct Params {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ks: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ell: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_card: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub set: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget_seconds: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget_subsets: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
}

/// Command-specific results.
#[derive(Debug, Serialize)]
#[serde(untagged)]
pub enum Outcome {
    Search(SearchRow),
    Spectrum { rows: Vec<SearchRow> },
    Kappa {
        value: usize,
        exact: bool,
        witness: Vec<usize>,
        subsets_checked: u64,
    },
    Anonymity {
        ell: usize,
        level: usize,
        exact: bool,
        witness: Vec<usize>,
        achieved: Vec<AchievedRow>,
        subsets_checked: u64,
    },
    Gen {
        #[serde(skip_serializing_if = "Option::is_none")]
        path: Option<String>,
        n: usize,
        m: usize,
        diameter: u32,
    },
    Export {
        #[serde(skip_serializing_if = "Option::is_none")]
        path: Option<String>,
        variables: VarBlock,
        constraints: usize,
        big_m: i64,
    },
    Verify {
        claimed_k: usize,
        actual_k: usize,
        certified: bool,
        set: Vec<usize>,
        #[serde(skip_serializing_if = "Option::is_none")]
        upper_bound: Option<usize>,
    },
}

/// One minimum-size search (the whole `analyze` answer, or one `spectrum`
/// row).
#[derive(Debug, Serialize)]
pub struct SearchRow {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<usize>>,
    pub explored_bound: usize,
    pub subsets_checked: u64,
}

/// First probe set observed to achieve a given guarantee.
#[derive(Debug, Serialize)]
pub struct AchievedRow {
    pub k: usize,
    pub card: usize,
    pub witness: Vec<usize>,
}

/// Variable counts of an exported integer program.
#[derive(Debug, Serialize)]
pub struct VarBlock {
    pub s: usize,
    pub q: usize,
    pub t: usize,
    pub delta: usize,
    pub total: usize,
}

pub fn status_str(status: SolveStatus) -> &'static str {
    match status {
        SolveStatus::Optimal => "optimal",
        SolveStatus::InfeasibleProven => "infeasible_proven",
        SolveStatus::OpenWithinBound => "open_within_bound",
        SolveStatus::BudgetExhausted => "budget_exhausted",
    }
}

/// A status that settles the question (found or proven absent).
pub fn decisive(status: SolveStatus) -> bool {
    matches!(
        status,
        SolveStatus::Optimal | SolveStatus::InfeasibleProven
    )
}

pub fn search_row(k: Option<usize>, out: &SolveOutcome) -> SearchRow {
    SearchRow {
        k,
        status: status_str(out.status),
        value: out.value,
        witness: out.witness.clone(),
        explored_bound: out.explored_bound,
        subsets_checked: out.subsets_checked,
    }
}

pub fn kappa_outcome(out: &KappaOutcome) -> Outcome {
    Outcome::Kappa {
        value: out.value,
        exact: out.exact,
        witness: out.witness.clone(),
        subsets_checked: out.subsets_checked,
    }
}

pub fn anonymity_outcome(profile: &AnonymityProfile) -> Outcome {
    Outcome::Anonymity {
        ell: profile.ell,
        level: profile.level,
        exact: profile.exact,
        witness: profile.witness.clone(),
        achieved: profile
            .spectrum
            .iter()
            .map(|(&k, entry)| AchievedRow {
                k,
                card: entry.card,
                witness: entry.witness.clone(),
            })
            .collect(),
        subsets_checked: profile.subsets_checked,
    }
}

pub fn export_outcome(model: &MilpModel, path: Option<String>) -> Outcome {
    let VarCounts { s, q, t, delta } = model.var_counts();
    Outcome::Export {
        path,
        variables: VarBlock {
            s,
            q,
            t,
            delta,
            total: model.var_counts().total(),
        },
        constraints: model.constraints().len(),
        big_m: model.big_m(),
    }
}

pub fn verify_outcome(rep: &WitnessReport) -> Outcome {
    Outcome::Verify {
        claimed_k: rep.claimed_k,
        actual_k: rep.actual_k,
        certified: rep.certified,
        set: rep.set.clone(),
        upper_bound: rep.upper_bound,
    }
}

/// `{0, 1, 20}` display form for vertex sets.
fn set_str(s: &[usize]) -> String {
    let inner: Vec<String> = s.iter().map(|v| v.to_string()).collect();
    format!("{{{}}}", inner.join(", "))
}

fn push_search_line(out: &mut String, row: &SearchRow, label: &str) {
    match row.status {
        "optimal" => {
            let _ = writeln!(
                out,
                "{label}: optimal — minimum size {}, witness {}",
                row.value.expect("optimal rows carry a value"),
                set_str(row.witness.as_deref().expect("optimal rows carry a witness")),
            );
        }
        "infeasible_proven" => {
            let _ = writeln!(
                out,
                "{label}: infeasible — proven, every non-empty proper set ruled out"
            );
        }
        "open_within_bound" => {
            let _ = writeln!(
                out,
                "{label}: open — all sizes <= {} ruled out, larger sizes not requested",
                row.explored_bound
            );
        }
        _ => {
            let _ = writeln!(
                out,
                "{label}: budget exhausted — sizes <= {} fully ruled out",
                row.explored_bound
            );
        }
    }
}

/// Renders the text form. Same values as the JSON form, for humans.
pub fn render_text(r: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "mars {} — {}", r.version, r.operation);
    let name = r
        .input
        .path
        .as_deref()
        .or(r.input.family.as_deref())
        .unwrap_or("<graph>");
    let _ = writeln!(
        out,
        "input: {name} (n={}, m={}, diameter={})",
        r.input.n, r.input.m, r.input.diameter
    );

    let p = &r.parameters;
    let mut parts: Vec<String> = Vec::new();
    if let Some(k) = p.k {
        parts.push(format!("k={k}"));
    }
    if let Some(ks) = &p.ks {
        let list: Vec<String> = ks.iter().map(|k| k.to_string()).collect();
        parts.push(format!("k=[{}]", list.join(",")));
    }
    if let Some(ell) = p.ell {
        parts.push(format!("ell={ell}"));
    }
    if let Some(mc) = p.max_card {
        parts.push(format!("max_card={mc}"));
    }
    if let Some(set) = &p.set {
        parts.push(format!("set={}", set_str(set)));
    }
    if let Some(seed) = p.seed {
        parts.push(format!("seed={seed}"));
    }
    if let Some(out_path) = &p.out {
        parts.push(format!("out={out_path}"));
    }
    if let (Some(secs), Some(subs)) = (p.budget_seconds, p.budget_subsets) {
        parts.push(format!("budget={secs}s/{subs} sets"));
    }
    if let Some(threads) = p.threads {
        parts.push(format!("threads={threads}"));
    }
    if !parts.is_empty() {
        let _ = writeln!(out, "parameters: {}", parts.join(", "));
    }

    match &r.outcome {
        Outcome::Search(row) => {
            push_search_line(&mut out, row, "result");
            let _ = writeln!(out, "work: {} sets checked", row.subsets_checked);
        }
        Outcome::Spectrum { rows } => {
            let mut total = 0u64;
            for row in rows {
                let label = format!("k={}", row.k.expect("spectrum rows carry k"));
                push_search_line(&mut out, row, &label);
                total = total.max(row.subsets_checked);
            }
            let _ = writeln!(out, "work: {total} sets checked in one shared sweep");
        }
        Outcome::Kappa {
            value,
            exact,
            witness,
            subsets_checked,
        } => {
            let qual = if *exact { "exact" } else { "lower bound, budget hit" };
            let _ = writeln!(
                out,
                "result: largest guarantee {value} ({qual}), witness {}",
                set_str(witness)
            );
            let _ = writeln!(out, "work: {subsets_checked} sets checked");
        }
        Outcome::Anonymity {
            ell,
            level,
            exact,
            witness,
            achieved,
            subsets_checked,
        } => {
            let qual = if *exact { "exact" } else { "upper bound, budget hit" };
            let _ = writeln!(
                out,
                "result: anonymity level {level} against {ell} probes ({qual}), weakest set {}",
                set_str(witness)
            );
            for row in achieved {
                let _ = writeln!(
                    out,
                    "  guarantee {} first reached by |S|={} witness {}",
                    row.k,
                    row.card,
                    set_str(&row.witness)
                );
            }
            let _ = writeln!(out, "work: {subsets_checked} sets checked");
        }
        Outcome::Gen {
            path,
            n,
            m,
            diameter,
        } => match path {
            Some(p) => {
                let _ = writeln!(out, "wrote {p}: n={n}, m={m}, diameter={diameter}");
            }
            None => {
                let _ = writeln!(out, "generated: n={n}, m={m}, diameter={diameter}");
            }
        },
        Outcome::Export {
            path,
            variables,
            constraints,
            big_m,
        } => {
            let _ = writeln!(
                out,
                "model: {} variables (s={}, q={}, t={}, delta={}), {} constraints, big-M {}",
                variables.total,
                variables.s,
                variables.q,
                variables.t,
                variables.delta,
                constraints,
                big_m
            );
            if let Some(p) = path {
                let _ = writeln!(out, "wrote {p}");
            }
        }
        Outcome::Verify {
            claimed_k,
            actual_k,
            certified,
            set,
            upper_bound,
        } => {
            if *certified {
                let _ = writeln!(
                    out,
                    "certified: {} is a {claimed_k}-guarantee probe set; minimum size <= {}",
                    set_str(set),
                    upper_bound.expect("certified reports carry the bound")
                );
            } else {
                let _ = writeln!(
                    out,
                    "not certified: {} has guarantee {actual_k}, not {claimed_k}",
                    set_str(set)
                );
            }
        }
    }
    let _ = writeln!(out, "elapsed: {:.3} s", r.elapsed_seconds);
    out
}

//! Shared helpers for the integration suites.
//!
//! The naive routines recompute anonymity guarantees from scratch with a
//! different canonical form (sorted distance lists instead of count
//! vectors) so the main library is checked against an independent path.
//! The LP reader round-trips exported models.

#![allow(dead_code)]

use mars_core::graph::DistanceMatrix;
use mars_core::milp::Var;

/// Vertices named by a bitmask, ascending.
pub fn mask_set(mask: u32) -> Vec<usize> {
    (0..32).filter(|&b| mask >> b & 1 == 1).collect()
}

/// Guarantee of a probe set, recomputed with sorted distance lists.
pub fn naive_k(dm: &DistanceMatrix, s: &[usize]) -> usize {
    use std::collections::BTreeMap;
    let n = dm.n();
    let mut groups: BTreeMap<Vec<u32>, usize> = BTreeMap::new();
    for v in 0..n {
        if s.contains(&v) {
            continue;
        }
        let mut key: Vec<u32> = s.iter().map(|&u| dm.dist(u, v)).collect();
        key.sort_unstable();
        *groups.entry(key).or_insert(0) += 1;
    }
    groups.values().copied().min().expect("proper subset")
}

/// Minimum probe-set size with guarantee exactly k, by full scan.
pub fn naive_msad(dm: &DistanceMatrix, k: usize) -> Option<usize> {
    let n = dm.n();
    assert!(n <= 20, "bitmask scan limited to small graphs");
    for card in 1..n {
        for mask in 1u32..(1 << n) - 1 {
            if mask.count_ones() as usize != card {
                continue;
            }
            if naive_k(dm, &mask_set(mask)) == k {
                return Some(card);
            }
        }
    }
    None
}

/// Largest achievable guarantee, by full scan.
pub fn naive_kappa(dm: &DistanceMatrix) -> usize {
    let n = dm.n();
    assert!(n <= 20, "bitmask scan limited to small graphs");
    (1u32..(1 << n) - 1)
        .map(|mask| naive_k(dm, &mask_set(mask)))
        .max()
        .expect("n >= 2")
}

/// One parsed constraint row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpRow {
    pub name: String,
    pub terms: Vec<(i64, String)>,
    pub sense: String,
    pub rhs: i64,
}

/// A parsed LP file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedLp {
    pub objective: Vec<(i64, String)>,
    pub rows: Vec<LpRow>,
    /// (variable, lower, upper)
    pub bounds: Vec<(String, i64, i64)>,
    pub binaries: Vec<String>,
    pub generals: Vec<String>,
}

fn parse_terms(tokens: &[&str]) -> Vec<(i64, String)> {
    let mut terms = Vec::new();
    let mut sign: i64 = 1;
    let mut coef: Option<i64> = None;
    for &tok in tokens {
        match tok {
            "+" => sign = 1,
            "-" => sign = -1,
            _ => {
                if let Ok(v) = tok.parse::<i64>() {
                    coef = Some(v);
                } else {
                    terms.push((sign * coef.unwrap_or(1), tok.to_string()));
                    sign = 1;
                    coef = None;
                }
            }
        }
    }
    assert!(coef.is_none(), "dangling coefficient");
    terms
}

/// Reads the LP text format produced by the model exporter. Panics on any
/// shape it does not recognize, which is exactly what a round-trip test
/// wants.
pub fn parse_lp(text: &str) -> ParsedLp {
    let mut section = "";
    let mut records: Vec<(&str, String)> = Vec::new();
    let mut binaries: Vec<String> = Vec::new();
    let mut generals: Vec<String> = Vec::new();
    for line in text.lines() {
        match line {
            "Minimize" => section = "min",
            "Subject To" => section = "cons",
            "Bounds" => section = "bounds",
            "Binaries" => section = "bin",
            "Generals" => section = "gen",
            "End" => section = "end",
            _ => {
                let t = line.trim_start();
                match section {
                    "min" | "cons" => {
                        let first = t.split_whitespace().next().unwrap_or("");
                        if first.ends_with(':') {
                            records.push((section, t.to_string()));
                        } else {
                            let last = records.last_mut().expect("continuation without a row");
                            last.1.push(' ');
                            last.1.push_str(t);
                        }
                    }
                    "bounds" => records.push((section, t.to_string())),
                    "bin" => binaries.extend(t.split_whitespace().map(String::from)),
                    "gen" => generals.extend(t.split_whitespace().map(String::from)),
                    _ => panic!("content outside any section: {line}"),
                }
            }
        }
    }
    assert_eq!(section, "end", "missing End marker");

    let mut objective = Vec::new();
    let mut rows = Vec::new();
    let mut bounds = Vec::new();
    for (sec, rec) in records {
        match sec {
            "min" | "cons" => {
                let (name, rest) = rec.split_once(':').expect("row name");
                let tokens: Vec<&str> = rest.split_whitespace().collect();
                if sec == "min" {
                    assert_eq!(name, "obj");
                    objective = parse_terms(&tokens);
                } else {
                    let sense_at = tokens
                        .iter()
                        .position(|t| matches!(*t, "<=" | ">=" | "="))
                        .expect("sense token");
                    rows.push(LpRow {
                        name: name.to_string(),
                        terms: parse_terms(&tokens[..sense_at]),
                        sense: tokens[sense_at].to_string(),
                        rhs: tokens[sense_at + 1].parse().expect("rhs"),
                    });
                }
            }
            "bounds" => {
                let tokens: Vec<&str> = rec.split_whitespace().collect();
                assert_eq!(tokens.len(), 5);
                assert_eq!(tokens[1], "<=");
                assert_eq!(tokens[3], "<=");
                bounds.push((
                    tokens[2].to_string(),
                    tokens[0].parse().expect("lower bound"),
                    tokens[4].parse().expect("upper bound"),
                ));
            }
            _ => unreachable!(),
        }
    }
    ParsedLp {
        objective,
        rows,
        bounds,
        binaries,
        generals,
    }
}

/// Maps an exported variable name back to the model variable.
pub fn var_of_name(name: &str) -> Var {
    let parts: Vec<&str> = name.split('_').collect();
    let num = |i: usize| parts[i].parse::<usize>().expect("index");
    match parts[0] {
        "s" => Var::S(num(1)),
        "q" => Var::Q(num(1), num(2)),
        "t" => Var::T(num(1), num(2)),
        "d" => Var::Delta(num(1), num(2), num(3)),
        other => panic!("unknown variable prefix {other}"),
    }
}

/// Evaluates a parsed row under a variable valuation.
pub fn row_holds(row: &LpRow, value: impl Fn(&str) -> i64) -> bool {
    let lhs: i64 = row.terms.iter().map(|(c, name)| c * value(name)).sum();
    match row.sense.as_str() {
        "<=" => lhs <= row.rhs,
        ">=" => lhs >= row.rhs,
        "=" => lhs == row.rhs,
        other => panic!("unknown sense {other}"),
    }
}

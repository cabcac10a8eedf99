//! Cycle feasibility survey. For every cycle length 4..=14 and every
//! admissible guarantee k, exhaustive search decides whether a k-probe-set
//! exists. The observed law — feasible exactly when k divides 2n — is
//! asserted in full, together with the frozen minimum cardinalities.

use mars_core::families::{generate, FamilySpec};
use mars_core::graph::DistanceMatrix;
use mars_core::solver::{msad, Budget, SolveStatus};

/// (n, feasible rows as (k, minimum cardinality)); everything absent is
/// proven infeasible by the same exhaustive run.
const CYCLE_TABLE: &[(usize, &[(usize, usize)])] = &[
    (4, &[(1, 1), (2, 2)]),
    (5, &[(1, 2), (2, 1)]),
    (6, &[(1, 1), (2, 2), (3, 3), (4, 2)]),
    (7, &[(1, 2), (2, 1)]),
    (8, &[(1, 1), (2, 2), (4, 4)]),
    (9, &[(1, 2), (2, 1), (3, 6), (6, 3)]),
    (10, &[(1, 1), (2, 2), (4, 2), (5, 5)]),
    (11, &[(1, 2), (2, 1)]),
    (12, &[(1, 1), (2, 2), (3, 3), (4, 4), (6, 6), (8, 4)]),
    (13, &[(1, 2), (2, 1)]),
    (14, &[(1, 1), (2, 2), (4, 2), (7, 7)]),
];

#[test]
fn feasible_guarantees_are_the_divisors_of_twice_n() {
    for &(n, rows) in CYCLE_TABLE {
        let g = generate(&FamilySpec::Cycle { n }).unwrap();
        let dm = DistanceMatrix::from_graph(&g);
        let mut seen: Vec<(usize, usize)> = Vec::new();
        for k in 1..n {
            let out = msad(&dm, k, n - 1, Budget::unlimited()).unwrap();
            let divides = (2 * n) % k == 0;
            match out.status {
                SolveStatus::Optimal => {
                    assert!(divides, "C{n}: k={k} feasible but does not divide {}", 2 * n);
                    seen.push((k, out.value.unwrap()));
                }
                SolveStatus::InfeasibleProven => {
                    assert!(!divides, "C{n}: k={k} divides {} but is infeasible", 2 * n);
                }
                other => panic!("C{n} k={k}: unbounded exhaustive run ended {other:?}"),
            }
        }
        assert_eq!(seen, rows, "C{n}: feasibility table drifted");
    }
}

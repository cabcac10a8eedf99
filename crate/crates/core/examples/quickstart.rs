//! Minimal library walkthrough: build a graph, ask for the smallest probe
//! set with a 2-anonymity guarantee, and print the certificate.
//!
//! Run with `cargo run --example quickstart`.

use mars_core::families::{self, FamilySpec};
use mars_core::graph::DistanceMatrix;
use mars_core::solver::{self, Budget};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = families::generate(&FamilySpec::Cycle { n: 40 })?;
    let dm = DistanceMatrix::from_graph(&g);

    // Exhaustive search over all candidate sets up to n - 1 vertices.
    let out = solver::msad(&dm, 2, g.n() - 1, Budget::unlimited())?;
    println!(
        "smallest 2-guarantee probe set on a 40-cycle: {:?} (witness {:?})",
        out.value, out.witness
    );

    // The largest guarantee any probe set can force. Two stars joined at
    // their centers resolve instantly; the cycle above would need all 2^40
    // subsets, so size-capped or budgeted runs are the norm on big graphs.
    let twin = families::generate(&FamilySpec::TwinStar)?;
    let tdm = DistanceMatrix::from_graph(&twin);
    let kappa = solver::kappa(&tdm, twin.n() - 1, Budget::unlimited())?;
    println!("strongest guarantee: {} (exact: {})", kappa.value, kappa.exact);
    Ok(())
}

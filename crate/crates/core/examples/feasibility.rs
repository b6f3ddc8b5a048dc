//! The linear feasibility solver on its own.
//!
//! `cargo run --example feasibility`

use povmlab::feasibility::{solve, solve_with_objective, Equality, FeasibilityProblem};

fn main() -> povmlab::error::Result<()> {
    // x0 + x1 + x2 = 1, x0 - x2 = 0.25, x >= 0
    let equalities = vec![
        Equality {
            coeffs: vec![1.0, 1.0, 1.0],
            rhs: 1.0,
        },
        Equality {
            coeffs: vec![1.0, 0.0, -1.0],
            rhs: 0.25,
        },
    ];
    let p = FeasibilityProblem::new(3, equalities.clone(), 1e-9)?;
    println!("some point: {:?}", solve(&p)?);
    println!(
        "minimising x1: {:?}",
        solve_with_objective(&p, Some(&[0.0, 1.0, 0.0]))?
    );

    let mut contradictory = equalities;
    contradictory.push(Equality {
        coeffs: vec![1.0, 1.0, 1.0],
        rhs: 2.0,
    });
    let q = FeasibilityProblem::new(3, contradictory, 1e-9)?;
    println!("with x0 + x1 + x2 = 2 added: {:?}", solve(&q)?);
    Ok(())
}

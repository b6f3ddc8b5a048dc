//! Joint observables: the product-kernel construction and the commuting
//! case.
//!
//! `cargo run --example joint_measurability`

use povmlab::fuzzy::{apply_kernel, MarkovKernel};
use povmlab::joint::{joint_for_commuting_pair, joint_residual, product_joint, JointVerdict};
use povmlab::linalg::Tolerance;
use povmlab::observables::fixtures::{sharp_x, sharp_z, smeared_qubit, trine};
use povmlab::observables::OutcomeSet;

fn main() -> povmlab::error::Result<()> {
    let tol = Tolerance::default();

    let g = trine();
    let to = OutcomeSet::range(2)?;
    let mu = MarkovKernel::new(
        g.outcomes().clone(),
        to.clone(),
        vec![vec![1.0, 0.0], vec![0.5, 0.5], vec![0.0, 1.0]],
        &tol,
    )?;
    let nu = MarkovKernel::new(
        g.outcomes().clone(),
        to,
        vec![vec![0.2, 0.8], vec![0.6, 0.4], vec![1.0, 0.0]],
        &tol,
    )?;
    let joint = product_joint(&g, &mu, &nu)?;
    let residual = joint_residual(&joint, &apply_kernel(&g, &mu)?, &apply_kernel(&g, &nu)?)?;
    println!(
        "post-processed trine: joint on {:?}, residual {residual:.1e}",
        joint.outcomes().labels()
    );

    let (e1, e2) = (smeared_qubit(0.5), smeared_qubit(0.25));
    if let JointVerdict::Joint(g) = joint_for_commuting_pair(&e1, &e2, &tol)? {
        for (label, effect) in g.outcomes().labels().iter().zip(g.effects()) {
            println!("  G({label}) = diag {:?}", effect.diagonal_real());
        }
    }
    match joint_for_commuting_pair(&sharp_z(), &sharp_x(), &tol)? {
        JointVerdict::Joint(_) => println!("spin-z and spin-x: joint"),
        JointVerdict::NotDecided { commutator_norm } => {
            println!("spin-z and spin-x: not decided (commutator {commutator_norm:.3})")
        }
    }
    Ok(())
}

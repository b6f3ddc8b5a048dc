//! Deciding whether observables are fuzzy.
//!
//! `cargo run --example classification`

use povmlab::fuzzy::{classify_fuzzy, FuzzyClass};
use povmlab::generate::{random_sharp_nonzero, seeded};
use povmlab::linalg::Tolerance;
use povmlab::observables::fixtures::{coin, sharp_z, smeared_qubit, trine};
use povmlab::observables::Observable;

fn describe(name: &str, e: &Observable, tol: &Tolerance) -> povmlab::error::Result<()> {
    let verdict = match classify_fuzzy(e, tol)? {
        FuzzyClass::NotFuzzy => "not fuzzy".to_string(),
        FuzzyClass::Fuzzy(cert) => format!("fuzzy, parent has {} outcomes", cert.parent.len()),
        FuzzyClass::Unknown => "unknown".to_string(),
    };
    println!("{name:>24}: {verdict}");
    Ok(())
}

fn main() -> povmlab::error::Result<()> {
    let tol = Tolerance::default();
    let mut rng = seeded(5);
    describe("spin-z", &sharp_z(), &tol)?;
    describe("smeared spin-z (t=1/2)", &smeared_qubit(0.5), &tol)?;
    describe("coin", &coin(2), &tol)?;
    describe(
        "rank-one sharp, d=5",
        &random_sharp_nonzero(5, 5, &mut rng)?,
        &tol,
    )?;
    describe(
        "coarse sharp, d=5",
        &random_sharp_nonzero(5, 3, &mut rng)?,
        &tol,
    )?;
    describe("trine", &trine(), &tol)?;
    Ok(())
}

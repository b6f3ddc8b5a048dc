//! Reading and writing the JSON observable format.
//!
//! `cargo run --example json_documents`

use povmlab::document::ObservableDocument;
use povmlab::linalg::Tolerance;
use povmlab::observables::fixtures::trine;
use povmlab::observables::validate;

fn main() -> povmlab::error::Result<()> {
    let doc = ObservableDocument::from_observable(&trine()).with_metadata("name", "qubit trine");
    let text = doc.to_json();
    println!("{text}");

    let parsed = ObservableDocument::from_json(&text)?;
    assert_eq!(parsed, doc);
    let e = parsed.to_observable()?;
    println!("validation: {}", validate(&e, &Tolerance::default()));
    Ok(())
}

pub mod cli;
pub mod document;
pub mod error;
pub mod feasibility;
pub mod fuzzy;
pub mod generate;
pub mod joint;
pub mod linalg;
pub mod observables;
pub mod representation;

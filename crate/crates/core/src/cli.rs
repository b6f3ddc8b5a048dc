//! The `povmlab` command line.
//!
//! Every command builds a JSON report plus a short text rendering and an
//! exit code: `0` for success, `1` for a negative verdict about the input
//! (invalid, infeasible, not commutative, not decided), `2` for usage,
//! parse and shape errors.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::document::{matrix_entries, KernelDocument, ObservableDocument};
use crate::error::Error;
use crate::fuzzy::{
    apply_kernel, classify_fuzzy, find_fuzzy_kernel_canonical, is_relabeling, FuzzyClass,
};
use crate::generate;
use crate::joint::{joint_for_commuting_pair, joint_residual, JointVerdict};
use crate::linalg::Tolerance;
use crate::observables::{validate, Observable, Violation};
use crate::representation::{
    mixture_decomposition, reconstruct_mixture, reconstruct_spectral, spectral_representation,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "povmlab",
    version,
    about = "Commutative POVMs, fuzzy versions and joint observables"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Entrywise operator equality threshold.
    #[arg(long, global = true, value_name = "F")]
    pub tol_eq: Option<f64>,
    /// Most negative eigenvalue still accepted as positive.
    #[arg(long, global = true, value_name = "F")]
    pub tol_psd: Option<f64>,
    /// Eigenvalue clustering threshold.
    #[arg(long, global = true, value_name = "F")]
    pub tol_cluster: Option<f64>,
    /// Hermiticity threshold.
    #[arg(long, global = true, value_name = "F")]
    pub tol_herm: Option<f64>,
    /// Equality slack of the kernel feasibility solver.
    #[arg(long, global = true, value_name = "F")]
    pub tol_feas: Option<f64>,
    /// Seed for the generators.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the measure axioms of an observable document.
    Validate { file: PathBuf },
    /// Spectral representation and mixture decomposition of a commutative observable.
    Represent { file: PathBuf },
    /// Search for a kernel making E a fuzzy version of F.
    Fuzzy {
        #[arg(value_name = "E")]
        fuzzy: PathBuf,
        #[arg(value_name = "F")]
        parent: PathBuf,
    },
    /// Build a joint observable for a pair with commuting effects.
    Joint { first: PathBuf, second: PathBuf },
    /// Decide whether an observable is fuzzy, where the theory allows.
    Classify { file: PathBuf },
    /// Emit a generated observable document.
    Gen {
        #[arg(value_enum)]
        kind: GenKind,
        /// Hilbert space dimension (sharp, coin, random-fuzzy).
        #[arg(long, default_value_t = 2)]
        dim: usize,
        /// Number of outcomes (sharp: of the observable; random-fuzzy: of E).
        #[arg(long, default_value_t = 2)]
        outcomes: usize,
        /// Outcomes of the sharp parent in random-fuzzy.
        #[arg(long, default_value_t = 2)]
        sharp_outcomes: usize,
        /// Smearing parameter of smeared-qubit.
        #[arg(long, default_value_t = 0.5)]
        t: f64,
        /// Comma separated weights of the convolution measure.
        #[arg(long, value_delimiter = ',')]
        nu: Vec<f64>,
        /// Group order of the convolution; must match the length of --nu.
        #[arg(long)]
        n: Option<usize>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    Sharp,
    SmearedQubit,
    Convolution,
    RandomFuzzy,
    Coin,
}

/// Result of one command, before it is written out.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub code: i32,
    pub json: Value,
    pub text: String,
}

impl Report {
    fn new(code: i32, json: Value, text: impl Into<String>) -> Self {
        Self {
            code,
            json,
            text: text.into(),
        }
    }

    fn failure(code: i32, message: impl Into<String>) -> Self {
        let message = message.into();
        Self::new(
            code,
            json!({ "error": message }),
            format!("error: {message}"),
        )
    }

    fn from_error(e: &Error) -> Self {
        Self::failure(exit_code_for(e), e.to_string())
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                serde_json::to_string_pretty(&self.json).expect("reports serialize") + "\n"
            }
            Format::Text => self.text.clone() + "\n",
        }
    }
}

/// Exit code a library error maps to.
pub fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::NotHermitian { .. }
        | Error::NotCommutative { .. }
        | Error::NotCommutingFamily { .. }
        | Error::InvalidObservable(_)
        | Error::ClusterAmbiguity { .. }
        | Error::NoConvergence { .. }
        | Error::NumericalBreakdown(_) => EXIT_NO,
        _ => EXIT_USAGE,
    }
}

/// Parses `args` (including the program name), runs the command and writes
/// its report. Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let report = execute(&cli);
    let rendered = report.render(cli.format);
    let written = match &cli.out {
        Some(path) => {
            fs::write(path, rendered).map_err(|e| format!("cannot write {}: {e}", path.display()))
        }
        None => io::stdout()
            .write_all(rendered.as_bytes())
            .map_err(|e| format!("cannot write output: {e}")),
    };
    match written {
        Ok(()) => report.code,
        Err(message) => {
            eprintln!("{message}");
            EXIT_USAGE
        }
    }
}

/// Builds the tolerance from the defaults and any overrides.
pub fn tolerance(cli: &Cli) -> Result<Tolerance, String> {
    let mut tol = Tolerance::default();
    let overrides = [
        (cli.tol_eq, &mut tol.eps_eq),
        (cli.tol_psd, &mut tol.eps_psd),
        (cli.tol_cluster, &mut tol.eps_eig_cluster),
        (cli.tol_herm, &mut tol.eps_herm),
        (cli.tol_feas, &mut tol.eps_feas),
    ];
    for (value, field) in overrides {
        if let Some(v) = value {
            *field = v;
        }
    }
    if tol.is_valid() {
        Ok(tol)
    } else {
        Err("tolerances must be finite and nonnegative".into())
    }
}

pub fn execute(cli: &Cli) -> Report {
    let tol = match tolerance(cli) {
        Ok(t) => t,
        Err(m) => return Report::failure(EXIT_USAGE, m),
    };
    let result = match &cli.command {
        Command::Validate { file } => load(file).map(|e| cmd_validate(&e, &tol)),
        Command::Represent { file } => load(file).map(|e| cmd_represent(&e, &tol)),
        Command::Fuzzy { fuzzy, parent } => {
            load(fuzzy).and_then(|e| load(parent).map(|f| cmd_fuzzy(&e, &f, &tol)))
        }
        Command::Joint { first, second } => {
            load(first).and_then(|e1| load(second).map(|e2| cmd_joint(&e1, &e2, &tol)))
        }
        Command::Classify { file } => load(file).map(|e| cmd_classify(&e, &tol)),
        Command::Gen {
            kind,
            dim,
            outcomes,
            sharp_outcomes,
            t,
            nu,
            n,
        } => Ok(cmd_gen(
            *kind,
            &GenParams {
                dim: *dim,
                outcomes: *outcomes,
                sharp_outcomes: *sharp_outcomes,
                t: *t,
                nu: nu.clone(),
                n: *n,
            },
            cli.seed,
        )),
    };
    result.unwrap_or_else(|r| r)
}

/// Reads an observable document from a path, `-` meaning standard input.
fn load(path: &Path) -> Result<Observable, Report> {
    let text = if path == Path::new("-") {
        let mut buf = String::new();
        io::stdin()
            .read_to_string(&mut buf)
            .map(|_| buf)
            .map_err(|e| Report::failure(EXIT_USAGE, format!("cannot read standard input: {e}")))?
    } else {
        fs::read_to_string(path).map_err(|e| {
            Report::failure(EXIT_USAGE, format!("cannot read {}: {e}", path.display()))
        })?
    };
    ObservableDocument::from_json(&text)
        .and_then(|doc| doc.to_observable())
        .map_err(|e| Report::failure(EXIT_USAGE, format!("{}: {e}", path.display())))
}

fn violation_json(v: &Violation) -> Value {
    let (kind, outcome, magnitude) = match v {
        Violation::NotHermitian { outcome, deviation } => {
            ("not_hermitian", Some(outcome), Some(*deviation))
        }
        Violation::NegativeEigenvalue { outcome, value } => {
            ("negative_eigenvalue", Some(outcome), Some(*value))
        }
        Violation::SumNotIdentity { deviation } => ("sum_not_identity", None, Some(*deviation)),
        Violation::NotProjective => ("not_projective", None, None),
    };
    json!({ "kind": kind, "outcome": outcome, "magnitude": magnitude, "message": v.to_string() })
}

/// Checks validity first; `Err` carries the exit-1 report for invalid input.
fn require_valid(e: &Observable, tol: &Tolerance) -> Result<(), Report> {
    let report = validate(e, tol);
    if report.is_valid() {
        Ok(())
    } else {
        Err(Report::new(
            EXIT_NO,
            json!({
                "verdict": "invalid",
                "violations": report.violations.iter().map(violation_json).collect::<Vec<_>>(),
            }),
            format!("invalid: {report}"),
        ))
    }
}

pub fn cmd_validate(e: &Observable, tol: &Tolerance) -> Report {
    match require_valid(e, tol) {
        Ok(()) => Report::new(
            EXIT_OK,
            json!({ "verdict": "valid", "violations": [] }),
            "valid",
        ),
        Err(r) => r,
    }
}

pub fn cmd_represent(e: &Observable, tol: &Tolerance) -> Report {
    if let Err(r) = require_valid(e, tol) {
        return r;
    }
    let rep = match spectral_representation(e, tol) {
        Ok(rep) => rep,
        Err(Error::NotCommutative { norm }) => {
            return Report::new(
                EXIT_NO,
                json!({ "verdict": "not commutative", "commutator_norm": norm }),
                format!("not commutative (commutator norm {norm:.3e})"),
            )
        }
        Err(err) => return Report::from_error(&err),
    };
    let spectral_residual = reconstruct_spectral(&rep)
        .max_effect_diff(e)
        .expect("same shape");
    let dec = mixture_decomposition(&rep, tol);
    let mixture_residual = match reconstruct_mixture(&dec, &rep).and_then(|m| m.max_effect_diff(e))
    {
        Ok(r) => r,
        Err(err) => return Report::from_error(&err),
    };
    let labels = e.outcomes().labels();
    let rows: Vec<&[f64]> = rep.rows().iter().map(|r| r.weights()).collect();
    let maps: Vec<Vec<&str>> = dec
        .components()
        .iter()
        .map(|m| m.iter().map(|&x| labels[x].as_str()).collect())
        .collect();

    let mut text = format!("{} spectral projections\n", rep.len());
    for (k, (p, row)) in rep.projections().iter().zip(&rows).enumerate() {
        text += &format!("  k{k}: rank {:.0}, row {row:?}\n", p.trace().re);
    }
    text += &format!("mixture of {} deterministic maps\n", dec.len());
    for (w, m) in dec.weights().iter().zip(&maps) {
        text += &format!("  {w:.12} x {m:?}\n");
    }
    text += &format!("residuals: spectral {spectral_residual:.3e}, mixture {mixture_residual:.3e}");

    Report::new(
        EXIT_OK,
        json!({
            "verdict": "commutative",
            "outcomes": labels,
            "projections": rep.projections().iter().map(matrix_entries).collect::<Vec<_>>(),
            "rows": rows,
            "mixture": { "weights": dec.weights(), "maps": maps },
            "residuals": { "spectral": spectral_residual, "mixture": mixture_residual },
        }),
        text,
    )
}

pub fn cmd_fuzzy(e: &Observable, f: &Observable, tol: &Tolerance) -> Report {
    if e.dim() != f.dim() {
        return Report::from_error(&Error::DimensionMismatch {
            expected: f.dim(),
            found: e.dim(),
        });
    }
    for obs in [e, f] {
        if let Err(r) = require_valid(obs, tol) {
            return r;
        }
    }
    let kernel = match find_fuzzy_kernel_canonical(e, f, tol) {
        Ok(Some(k)) => k,
        Ok(None) => return Report::new(EXIT_NO, json!({ "verdict": "infeasible" }), "infeasible"),
        Err(err) => return Report::from_error(&err),
    };
    let residual = apply_kernel(f, &kernel)
        .and_then(|image| image.max_effect_diff(e))
        .expect("kernel matches the shapes");
    let relabeling = is_relabeling(&kernel, tol).map(|phi| {
        let from = phi.from_outcomes();
        let to = phi.to_outcomes();
        (0..from.len())
            .map(|x| {
                (
                    from.label(x).to_string(),
                    Value::from(to.label(phi.image(x))),
                )
            })
            .collect::<serde_json::Map<_, _>>()
    });
    let mut text = format!("feasible (residual {residual:.3e})\nkernel:\n");
    for (x, row) in kernel.matrix().iter().enumerate() {
        text += &format!("  {} -> {row:?}\n", kernel.from_outcomes().label(x));
    }
    match &relabeling {
        Some(map) => {
            let pairs: Vec<String> = map
                .iter()
                .map(|(x, a)| format!("{x}->{}", a.as_str().unwrap_or("")))
                .collect();
            text += &format!("relabeling: {}", pairs.join(", "));
        }
        None => text += "relabeling: none",
    }
    Report::new(
        EXIT_OK,
        json!({
            "verdict": "feasible",
            "kernel": KernelDocument::from_kernel(&kernel),
            "residual": residual,
            "relabeling": relabeling,
        }),
        text,
    )
}

pub fn cmd_joint(e1: &Observable, e2: &Observable, tol: &Tolerance) -> Report {
    if e1.dim() != e2.dim() {
        return Report::from_error(&Error::DimensionMismatch {
            expected: e1.dim(),
            found: e2.dim(),
        });
    }
    for obs in [e1, e2] {
        if let Err(r) = require_valid(obs, tol) {
            return r;
        }
    }
    let g = match joint_for_commuting_pair(e1, e2, tol) {
        Ok(JointVerdict::Joint(g)) => g,
        Ok(JointVerdict::NotDecided { commutator_norm }) => {
            return Report::new(
                EXIT_NO,
                json!({ "verdict": "not decided", "commutator_norm": commutator_norm }),
                format!("not decided: effects do not commute (norm {commutator_norm:.3e})"),
            )
        }
        Err(err) => return Report::from_error(&err),
    };
    let residual = match joint_residual(&g, e1, e2) {
        Ok(r) => r,
        Err(err) => return Report::from_error(&err),
    };
    let doc = ObservableDocument::from_observable(&g).with_metadata("kind", "joint");
    Report::new(
        EXIT_OK,
        json!({ "verdict": "joint", "joint": doc, "residual": residual }),
        format!(
            "joint observable on {} outcomes (marginal residual {residual:.3e})\n{}",
            g.len(),
            doc.to_json()
        ),
    )
}

pub fn cmd_classify(e: &Observable, tol: &Tolerance) -> Report {
    if let Err(r) = require_valid(e, tol) {
        return r;
    }
    match classify_fuzzy(e, tol) {
        Ok(FuzzyClass::NotFuzzy) => {
            Report::new(EXIT_OK, json!({ "verdict": "not fuzzy" }), "not fuzzy")
        }
        Ok(FuzzyClass::Unknown) => Report::new(EXIT_OK, json!({ "verdict": "unknown" }), "unknown"),
        Ok(FuzzyClass::Fuzzy(cert)) => Report::new(
            EXIT_OK,
            json!({
                "verdict": "fuzzy",
                "parent": ObservableDocument::from_observable(&cert.parent),
                "kernel": KernelDocument::from_kernel(&cert.kernel),
            }),
            format!(
                "fuzzy: image of a {}-outcome sharp observable that it cannot reproduce",
                cert.parent.len()
            ),
        ),
        Err(err) => Report::from_error(&err),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenParams {
    pub dim: usize,
    pub outcomes: usize,
    pub sharp_outcomes: usize,
    pub t: f64,
    pub nu: Vec<f64>,
    pub n: Option<usize>,
}

pub fn cmd_gen(kind: GenKind, p: &GenParams, seed: u64) -> Report {
    let mut rng = generate::seeded(seed);
    if p.dim == 0 || p.outcomes == 0 || p.sharp_outcomes == 0 {
        return Report::failure(EXIT_USAGE, "dimension and outcome counts must be positive");
    }
    let seed_text = seed.to_string();
    let single = |obs: crate::error::Result<Observable>, name: &str| match obs {
        Ok(o) => {
            let doc = ObservableDocument::from_observable(&o)
                .with_metadata("kind", name)
                .with_metadata("seed", seed_text.clone());
            let json = serde_json::to_value(&doc).expect("documents serialize");
            Report::new(EXIT_OK, json, doc.to_json())
        }
        Err(err) => Report::failure(EXIT_USAGE, err.to_string()),
    };
    match kind {
        GenKind::Sharp => {
            // Every outcome gets a nonzero projection whenever there is room.
            let e = if p.outcomes <= p.dim {
                generate::random_sharp_nonzero(p.dim, p.outcomes, &mut rng)
            } else {
                generate::random_sharp(p.dim, p.outcomes, &mut rng)
            };
            single(e, "sharp")
        }
        GenKind::Coin => single(Ok(generate::coin(p.dim)), "coin"),
        GenKind::SmearedQubit => single(generate::smeared_qubit(p.t), "smeared-qubit"),
        GenKind::Convolution => {
            if p.nu.is_empty() {
                return Report::failure(EXIT_USAGE, "convolution needs --nu");
            }
            if let Some(n) = p.n.filter(|&n| n != p.nu.len()) {
                return Report::failure(
                    EXIT_USAGE,
                    format!("--n {n} but --nu has {} weights", p.nu.len()),
                );
            }
            single(generate::convolution(p.nu.clone()), "convolution")
        }
        GenKind::RandomFuzzy => {
            match generate::random_fuzzy(p.dim, p.sharp_outcomes, p.outcomes, &mut rng) {
                Ok(triple) => {
                    let json = json!({
                        "sharp": ObservableDocument::from_observable(&triple.sharp).with_metadata("kind", "sharp"),
                        "kernel": KernelDocument::from_kernel(&triple.kernel),
                        "fuzzy": ObservableDocument::from_observable(&triple.fuzzy).with_metadata("kind", "random-fuzzy"),
                    });
                    let text = serde_json::to_string_pretty(&json).expect("documents serialize");
                    Report::new(EXIT_OK, json, text)
                }
                Err(err) => Report::failure(EXIT_USAGE, err.to_string()),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::observables::fixtures::*;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn validate_reports() {
        assert_eq!(cmd_validate(&coin(2), &tol()).code, EXIT_OK);
        let doubled = Observable::new(
            coin(2).outcomes().clone(),
            coin(2).effects().iter().map(|e| e.scale(2.0)).collect(),
        )
        .unwrap();
        let r = cmd_validate(&doubled, &tol());
        assert_eq!(r.code, EXIT_NO);
        assert!(r.text.contains("sum deviates by 1.0"));
    }

    #[test]
    fn represent_reports() {
        let r = cmd_represent(&smeared_qubit(0.5), &tol());
        assert_eq!(r.code, EXIT_OK);
        assert_eq!(r.json["rows"], json!([[0.25, 0.75], [0.75, 0.25]]));
        assert_eq!(r.json["mixture"]["weights"], json!([0.75, 0.25]));

        let r = cmd_represent(&coin(2), &tol());
        assert_eq!(r.json["rows"], json!([[0.5, 0.5]]));

        let r = cmd_represent(&trine(), &tol());
        assert_eq!(r.code, EXIT_NO);
        assert_eq!(r.json["verdict"], "not commutative");
    }

    #[test]
    fn fuzzy_reports() {
        let r = cmd_fuzzy(&smeared_qubit(0.5), &sharp_z(), &tol());
        assert_eq!(r.code, EXIT_OK);
        assert_eq!(r.json["relabeling"], Value::Null);

        assert_eq!(cmd_fuzzy(&sharp_x(), &sharp_z(), &tol()).code, EXIT_NO);
        assert_eq!(cmd_fuzzy(&coin(3), &sharp_z(), &tol()).code, EXIT_USAGE);

        let swapped = Observable::new(
            sharp_z().outcomes().clone(),
            sharp_z().effects().iter().rev().cloned().collect(),
        )
        .unwrap();
        let r = cmd_fuzzy(&swapped, &sharp_z(), &tol());
        assert_eq!(r.json["relabeling"], json!({ "0": "1", "1": "0" }));
    }

    #[test]
    fn joint_reports() {
        let r = cmd_joint(&smeared_qubit(0.5), &smeared_qubit(0.25), &tol());
        assert_eq!(r.code, EXIT_OK);
        assert!(r.json["residual"].as_f64().unwrap() < 1e-8);
        let r = cmd_joint(&sharp_z(), &sharp_x(), &tol());
        assert_eq!(
            (r.code, r.json["verdict"].as_str()),
            (EXIT_NO, Some("not decided"))
        );
    }

    #[test]
    fn gen_reports() {
        let params = GenParams {
            dim: 2,
            outcomes: 2,
            sharp_outcomes: 2,
            t: 0.5,
            nu: vec![],
            n: None,
        };
        let r = cmd_gen(GenKind::SmearedQubit, &params, 0);
        let doc: ObservableDocument = serde_json::from_value(r.json).unwrap();
        assert_eq!(doc.to_observable().unwrap(), smeared_qubit(0.5));

        assert_eq!(cmd_gen(GenKind::Convolution, &params, 0).code, EXIT_USAGE);
        let bad = GenParams {
            t: 2.0,
            ..params.clone()
        };
        assert_eq!(cmd_gen(GenKind::SmearedQubit, &bad, 0).code, EXIT_USAGE);

        let a = cmd_gen(GenKind::RandomFuzzy, &params, 5);
        assert_eq!(a, cmd_gen(GenKind::RandomFuzzy, &params, 5));
    }
}

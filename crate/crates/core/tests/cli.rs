use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

use povmlab::document::ObservableDocument;
use povmlab::fuzzy::{relabel, Relabeling};
use povmlab::linalg::ComplexMatrix;
use povmlab::observables::fixtures::*;
use povmlab::observables::{Observable, OutcomeSet};

fn povmlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_povmlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

struct Workspace {
    dir: TempDir,
}

impl Workspace {
    fn new() -> Self {
        Self {
            dir: TempDir::new().unwrap(),
        }
    }

    fn write(&self, name: &str, text: &str) -> PathBuf {
        let path = self.dir.path().join(name);
        std::fs::write(&path, text).unwrap();
        path
    }

    fn observable(&self, name: &str, e: &Observable) -> String {
        let path = self.write(name, &ObservableDocument::from_observable(e).to_json());
        path.to_str().unwrap().to_string()
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn validate_exit_codes() {
    let ws = Workspace::new();
    let coin_file = ws.observable("coin.json", &coin(2));
    assert_eq!(code(&povmlab(&["validate", &coin_file])), 0);

    let doubled = Observable::new(
        OutcomeSet::range(2).unwrap(),
        vec![ComplexMatrix::identity(2), ComplexMatrix::identity(2)],
    )
    .unwrap();
    let file = ws.observable("double.json", &doubled);
    let out = povmlab(&["validate", "--format", "text", &file]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stdout).contains("sum deviates by 1.0"));

    let bad = ws.write("bad.json", "{\"schema_version\": \"1\", \"dim\": ");
    assert_eq!(code(&povmlab(&["validate", bad.to_str().unwrap()])), 2);

    let mut doc = ObservableDocument::from_observable(&coin(2));
    doc.schema_version = "7".into();
    let future = ws.write("future.json", &doc.to_json());
    assert_eq!(code(&povmlab(&["validate", future.to_str().unwrap()])), 2);

    assert_eq!(code(&povmlab(&["validate", "/nonexistent/file.json"])), 2);
    assert_eq!(code(&povmlab(&["validate", "--bogus", &coin_file])), 2);
    assert_eq!(code(&povmlab(&["frobnicate"])), 2);
}

#[test]
fn represent_outputs() {
    let ws = Workspace::new();
    let out = povmlab(&["represent", &ws.observable("s.json", &smeared_qubit(0.5))]);
    assert_eq!(code(&out), 0);
    let v = json_of(&out);
    assert_eq!(v["rows"], serde_json::json!([[0.25, 0.75], [0.75, 0.25]]));
    assert_eq!(v["mixture"]["weights"], serde_json::json!([0.75, 0.25]));
    assert!(v["residuals"]["spectral"].as_f64().unwrap() <= 1e-8);

    let v = json_of(&povmlab(&["represent", &ws.observable("c.json", &coin(2))]));
    assert_eq!(v["rows"], serde_json::json!([[0.5, 0.5]]));

    let out = povmlab(&[
        "represent",
        "--format",
        "text",
        &ws.observable("t.json", &trine()),
    ]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stdout).contains("not commutative"));
}

#[test]
fn fuzzy_outputs() {
    let ws = Workspace::new();
    let smeared = ws.observable("s.json", &smeared_qubit(0.5));
    let pz = ws.observable("pz.json", &sharp_z());
    let px = ws.observable("px.json", &sharp_x());

    let out = povmlab(&["fuzzy", &smeared, &pz]);
    assert_eq!(code(&out), 0);
    let v = json_of(&out);
    assert_eq!(v["verdict"], "feasible");
    let matrix = v["kernel"]["matrix"].as_array().unwrap();
    assert!((matrix[0][0].as_f64().unwrap() - 0.75).abs() < 1e-9);

    let out = povmlab(&["fuzzy", &px, &pz]);
    assert_eq!(
        (code(&out), json_of(&out)["verdict"].clone()),
        (1, Value::from("infeasible"))
    );

    let f = computational_basis(3);
    let phi = Relabeling::from_labels(
        f.outcomes().clone(),
        OutcomeSet::new(["a", "b"]).unwrap(),
        &[("0", "b"), ("1", "a"), ("2", "b")],
    )
    .unwrap();
    let e = ws.observable("e.json", &relabel(&f, &phi).unwrap());
    let out = povmlab(&[
        "fuzzy",
        "--format",
        "text",
        &e,
        &ws.observable("f.json", &f),
    ]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("relabeling: 0->b, 1->a, 2->b"));

    assert_eq!(
        code(&povmlab(&[
            "fuzzy",
            &ws.observable("c3.json", &coin(3)),
            &pz
        ])),
        2
    );
}

#[test]
fn joint_outputs() {
    let ws = Workspace::new();
    let a = ws.observable("a.json", &smeared_qubit(0.5));
    let b = ws.observable("b.json", &smeared_qubit(0.25));
    let out = povmlab(&["joint", &a, &b]);
    assert_eq!(code(&out), 0);
    let v = json_of(&out);
    assert!(v["residual"].as_f64().unwrap() < 1e-8);
    let doc: ObservableDocument = serde_json::from_value(v["joint"].clone()).unwrap();
    assert_eq!(doc.outcomes, ["0|0", "0|1", "1|0", "1|1"]);

    let pz = ws.observable("pz.json", &sharp_z());
    let out = povmlab(&["joint", &pz, &ws.observable("px.json", &sharp_x())]);
    assert_eq!(
        (code(&out), json_of(&out)["verdict"].clone()),
        (1, Value::from("not decided"))
    );

    let v = json_of(&povmlab(&["joint", &pz, &pz]));
    let g = serde_json::from_value::<ObservableDocument>(v["joint"].clone())
        .unwrap()
        .to_observable()
        .unwrap();
    assert_eq!(g.effects()[1], ComplexMatrix::zeros(2));
    assert_eq!(g.effects()[2], ComplexMatrix::zeros(2));
}

#[test]
fn classify_outputs() {
    let ws = Workspace::new();
    let v = json_of(&povmlab(&[
        "classify",
        &ws.observable("z.json", &sharp_z()),
    ]));
    assert_eq!(v["verdict"], "not fuzzy");
    let v = json_of(&povmlab(&[
        "classify",
        &ws.observable("s.json", &smeared_qubit(0.5)),
    ]));
    assert_eq!(v["verdict"], "fuzzy");
    let v = json_of(&povmlab(&["classify", &ws.observable("t.json", &trine())]));
    assert_eq!(v["verdict"], "unknown");
}

fn gen_to(ws: &Workspace, name: &str, args: &[&str]) -> PathBuf {
    let path = ws.path(name);
    let mut all = vec!["gen"];
    all.extend_from_slice(args);
    all.extend_from_slice(&["--out", path.to_str().unwrap()]);
    let out = povmlab(&all);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    path
}

fn read_doc(path: &Path) -> Observable {
    ObservableDocument::from_json(&std::fs::read_to_string(path).unwrap())
        .unwrap()
        .to_observable()
        .unwrap()
}

#[test]
fn generators() {
    let ws = Workspace::new();
    let s = gen_to(&ws, "s.json", &["smeared-qubit", "--t", "0.5"]);
    assert_eq!(read_doc(&s), smeared_qubit(0.5));

    let c = gen_to(&ws, "c.json", &["coin", "--dim", "3"]);
    assert_eq!(read_doc(&c), coin(3));

    let conv = gen_to(
        &ws,
        "conv.json",
        &["convolution", "--n", "4", "--nu", "0.5,0.5,0,0"],
    );
    let e = read_doc(&conv);
    assert_eq!(
        e.effects()[0],
        ComplexMatrix::from_real_diagonal(&[0.5, 0.5, 0.0, 0.0])
    );
    assert_eq!(
        e.effects()[3],
        ComplexMatrix::from_real_diagonal(&[0.5, 0.0, 0.0, 0.5])
    );

    assert_eq!(
        code(&povmlab(&[
            "gen",
            "convolution",
            "--n",
            "3",
            "--nu",
            "0.5,0.5,0,0"
        ])),
        2
    );
    assert_eq!(code(&povmlab(&["gen", "smeared-qubit", "--t", "1.5"])), 2);

    let first = povmlab(&[
        "gen",
        "sharp",
        "--dim",
        "4",
        "--outcomes",
        "3",
        "--seed",
        "9",
    ]);
    let second = povmlab(&[
        "gen",
        "sharp",
        "--dim",
        "4",
        "--outcomes",
        "3",
        "--seed",
        "9",
    ]);
    let other = povmlab(&[
        "gen",
        "sharp",
        "--dim",
        "4",
        "--outcomes",
        "3",
        "--seed",
        "10",
    ]);
    assert_eq!(first.stdout, second.stdout);
    assert_ne!(first.stdout, other.stdout);

    let triple = json_of(&povmlab(&[
        "gen",
        "random-fuzzy",
        "--dim",
        "3",
        "--seed",
        "4",
    ]));
    for key in ["sharp", "kernel", "fuzzy"] {
        assert!(triple.get(key).is_some());
    }
}

#[test]
fn represent_residuals_on_generated_fixtures() {
    let ws = Workspace::new();
    let fixtures = [
        gen_to(&ws, "a.json", &["smeared-qubit", "--t", "0.25"]),
        gen_to(&ws, "b.json", &["coin", "--dim", "4"]),
        gen_to(&ws, "c.json", &["convolution", "--nu", "0.1,0.2,0.3,0.4,0"]),
        gen_to(
            &ws,
            "d.json",
            &["sharp", "--dim", "6", "--outcomes", "4", "--seed", "2"],
        ),
    ];
    for path in &fixtures {
        let out = povmlab(&["represent", path.to_str().unwrap()]);
        assert_eq!(code(&out), 0);
        let v = json_of(&out);
        assert!(v["residuals"]["spectral"].as_f64().unwrap() <= 1e-8);
        assert!(v["residuals"]["mixture"].as_f64().unwrap() <= 1e-8);
    }
    for seed in ["1", "2", "3"] {
        let out = povmlab(&[
            "gen",
            "random-fuzzy",
            "--dim",
            "5",
            "--outcomes",
            "3",
            "--sharp-outcomes",
            "4",
            "--seed",
            seed,
        ]);
        let doc: ObservableDocument =
            serde_json::from_value(json_of(&out)["fuzzy"].clone()).unwrap();
        let path = ws.write(&format!("rf{seed}.json"), &doc.to_json());
        let v = json_of(&povmlab(&["represent", path.to_str().unwrap()]));
        assert!(v["residuals"]["spectral"].as_f64().unwrap() <= 1e-8);
    }
}

#[test]
fn commands_are_deterministic_and_tolerances_apply() {
    let ws = Workspace::new();
    let file = ws.observable("s.json", &smeared_qubit(0.5));
    let a = povmlab(&["represent", &file]);
    let b = povmlab(&["represent", &file]);
    assert_eq!(a.stdout, b.stdout);

    let nearly = Observable::new(
        OutcomeSet::range(2).unwrap(),
        vec![
            ComplexMatrix::from_real_diagonal(&[1.0, 1e-6]),
            ComplexMatrix::from_real_diagonal(&[0.0, 1.0]),
        ],
    )
    .unwrap();
    let nearly = ws.observable("n.json", &nearly);
    assert_eq!(code(&povmlab(&["validate", &nearly])), 1);
    assert_eq!(
        code(&povmlab(&["validate", "--tol-eq", "1e-5", &nearly])),
        0
    );
    assert_eq!(code(&povmlab(&["validate", "--tol-eq", "-1", &nearly])), 2);
}

#[test]
fn stdin_input() {
    use std::io::Write;
    use std::process::Stdio;
    let mut child = Command::new(env!("CARGO_BIN_EXE_povmlab"))
        .args(["validate", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(
            ObservableDocument::from_observable(&coin(2))
                .to_json()
                .as_bytes(),
        )
        .unwrap();
    assert!(child.wait_with_output().unwrap().status.success());
}

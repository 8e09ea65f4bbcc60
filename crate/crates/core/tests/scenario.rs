use std::fs;
use std::path::Path;

use markovlab::runner::run_scenario;
use markovlab::scenario::{DeterminingSource, Precision, Scenario};
use markovlab::Error;

fn shipped(name: &str) -> Scenario {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios").join(name);
    Scenario::from_file(&path).unwrap()
}

fn csvs(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut v: Vec<(String, Vec<u8>)> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "csv"))
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap()))
        .collect();
    v.sort();
    v
}

#[test]
fn circle_scenario_runs_every_block() {
    let s = shipped("example-2-2.toml");
    assert_eq!(s.approx.as_ref().unwrap().precision, Precision::DoubleDouble);
    let a = tempfile::tempdir().unwrap();
    let out = run_scenario(&s, Some(a.path())).unwrap();
    let text = out.summary.join("\n");
    for needle in [
        "markov bound alpha=(1,0): factor <= 6 n^(2|alpha|): holds: yes",
        "markov bound alpha=(0,1): factor <= 2 n^(2|alpha|): holds: yes",
        "approx decay r=4",
        "within d_L + 1e-8: yes",
        "extension telescoping defect: 0.000e0",
        "determining alpha=(1,0): sup norms tend to zero: yes",
    ] {
        assert!(text.contains(needle), "missing {needle:?} in\n{text}");
    }
    let names: Vec<String> = csvs(a.path()).into_iter().map(|c| c.0).collect();
    assert_eq!(
        names,
        [
            "approx.csv",
            "determining.csv",
            "e.csv",
            "extension.csv",
            "extension_grid.csv",
            "markov.csv"
        ]
    );
    assert!(a.path().join("summary.txt").exists());
    assert!(a.path().join("coefficients.txt").exists());
    let grid = fs::read_to_string(a.path().join("extension_grid.csv")).unwrap();
    assert_eq!(grid.lines().count(), 41 * 41 + 1);

    let b = tempfile::tempdir().unwrap();
    run_scenario(&s, Some(b.path())).unwrap();
    assert_eq!(csvs(a.path()), csvs(b.path()));
    assert_eq!(
        fs::read(a.path().join("markov.json")).unwrap(),
        fs::read(b.path().join("markov.json")).unwrap()
    );
}

#[test]
fn family_scenario_derives_the_bump_exponent() {
    let s = shipped("example-2-4-family.toml");
    assert!(s.extension.as_ref().unwrap().r.is_none());
    let dir = tempfile::tempdir().unwrap();
    let out = run_scenario(&s, Some(dir.path())).unwrap();
    let text = out.summary.join("\n");
    // the fitted exponents are just above 2, so r = ceil(m) + 1 = 4
    assert!(text.contains("extension r=4 L=10"), "{text}");
    assert!(text.contains("relation x2^3 = (-1 * x1^4 + 1) * x2"), "{text}");
}

#[test]
fn cube_root_scenario() {
    let s = shipped("example-2-3.toml");
    assert_eq!(s.determining.as_ref().unwrap().source, DeterminingSource::Counterexample);
    let dir = tempfile::tempdir().unwrap();
    let out = run_scenario(&s, Some(dir.path())).unwrap();
    let text = out.summary.join("\n");
    assert!(text.contains("determining alpha=(0,1): sup norms tend to zero: no"), "{text}");
    let det = fs::read_to_string(dir.path().join("determining.csv")).unwrap();
    // D_y P_n = 1 for every n
    for line in det.lines().filter(|l| l.starts_with("0;1,")) {
        assert!(line.contains(",1.0000000000000000e0,"), "{line}");
    }
}

#[test]
fn validation_rejects_bad_blocks() {
    let cases = [
        ("name = \"x\"\npreset = \"example-9\"\n", "preset"),
        ("name = \"x\"\npreset = \"example-2-2\"\ndensity = 10\n", "density"),
        ("name = \"x\"\npreset = \"example-2-2\"\n[approx]\ntarget = \"sine\"\n", "approx.target"),
        (
            "name = \"x\"\npreset = \"example-2-2\"\n[approx]\ntarget = \"zero\"\nlmax = 4\n[extension]\nlevel = 6\nr = 2\n",
            "extension.level",
        ),
        ("name = \"x\"\npreset = \"example-2-2\"\n[approx]\ntarget = \"zero\"\n[extension]\nlevel = 3\n", "extension.r"),
        (
            "name = \"x\"\npreset = \"example-2-2\"\n[markov]\nalphas = [[1, 0]]\nlmax = 3\nbounds = [{ alpha = [0, 1], M = 2.0, m = 2.0 }]\n",
            "markov.bounds[0].alpha",
        ),
        (
            "name = \"x\"\npreset = \"example-2-2\"\n[determining]\nalphas = [[1, 0]]\nlmax = 3\nsource = \"counterexample\"\n",
            "determining.source",
        ),
        ("name = \"x\"\npreset = \"example-2-4-family\"\n", "family"),
        ("name = \"x\"\n", "relation"),
    ];
    for (text, want) in cases {
        match Scenario::from_toml(text) {
            Err(Error::Config { path, .. }) => assert_eq!(path, want, "{text}"),
            other => panic!("{text}: {other:?}"),
        }
    }
}

#[test]
fn custom_relation_with_all_branch_kinds() {
    let s = Scenario::from_toml(
        r#"
name = "custom"
density = 64
[relation]
nvars = 2
k = 2
q = ["0", "1 - x1^2", "0"]
[branches]
catalogue = [{ kind = "zero" }, { kind = "sqrt", radicand = "1 - x1^2" }, { kind = "neg-sqrt", radicand = "1 - x1^2" }]
boxes = [[[-1.0, 1.0]]]
[approx]
target = "xk-pow-d"
lmax = 3
precision = "double"
"#,
    )
    .unwrap();
    let e = s.sample().unwrap();
    assert_eq!(e.len(), presets_len());
    let dir = tempfile::tempdir().unwrap();
    run_scenario(&s, Some(dir.path())).unwrap();
    // y^3 reduces into the family, so it is reproduced from l = 2 on
    let csv = fs::read_to_string(dir.path().join("approx.csv")).unwrap();
    for line in csv.lines().skip(3) {
        let d: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        assert!(d <= 1e-9, "{line}");
    }

    let cube = Scenario::from_toml(
        "name = \"c\"\ndensity = 64\n[relation]\nnvars = 2\nk = 2\nq = [\"1 - x1^2\", \"0\", \"0\"]\n\
         [branches]\ncatalogue = [{ kind = \"cbrt\", radicand = \"1 - x1^2\" }]\nboxes = [[[0.25, 0.5]]]\n",
    )
    .unwrap();
    assert_eq!(cube.sample().unwrap().len(), 64);
}

fn presets_len() -> usize {
    markovlab::presets::circle_and_line_set(64).unwrap().len()
}

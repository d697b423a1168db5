use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use qdt_choice::estimator::FitResult;
use qdt_choice::model::ParamSet;
use qdt_choice::trial::{load_trials, read_trials, CSV_COLUMNS, FEATURE_COLUMNS};
use std::collections::BTreeMap;

fn qdt_choice(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qdt-choice"))
        .args(args)
        .env("QDT_CHOICE_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = qdt_choice(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    qdt_choice(args).status.code().unwrap()
}

fn synth(dir: &Path, shape: &str, subjects: usize) -> String {
    let out = dir.to_str().unwrap();
    ok(&["synth", "--out", out, "--shape", shape, "--subjects", &subjects.to_string()]);
    dir.join("synthetic.csv").to_str().unwrap().to_owned()
}

fn csv_rows(path: &Path) -> Vec<Vec<String>> {
    let mut rdr = csv::Reader::from_path(path).unwrap();
    rdr.records()
        .map(|r| r.unwrap().iter().map(str::to_owned).collect())
        .collect()
}

fn header(path: &Path) -> Vec<String> {
    let mut rdr = csv::Reader::from_path(path).unwrap();
    rdr.headers().unwrap().iter().map(str::to_owned).collect()
}

#[test]
fn synth_writes_expected_row_counts() {
    let dir = tempfile::tempdir().unwrap();
    let d1 = synth(&dir.path().join("d1"), "dataset1", 5);
    let set = load_trials(&d1).unwrap();
    assert_eq!(set.trials.len(), 4800);
    assert_eq!(set.subjects().len(), 5);

    let d2 = synth(&dir.path().join("d2"), "dataset2", 2);
    assert_eq!(load_trials(&d2).unwrap().trials.len(), 1248);
    assert_eq!(header(Path::new(&d2)), CSV_COLUMNS);

    let truth: BTreeMap<String, ParamSet> =
        serde_json::from_str(&fs::read_to_string(dir.path().join("d2/truth.json")).unwrap()).unwrap();
    assert_eq!(truth.len(), 2);
    for params in truth.values() {
        params.validate().unwrap();
        assert!(params.attraction.is_some());
    }
}

#[test]
fn synth_is_deterministic_and_seeded() {
    let dir = tempfile::tempdir().unwrap();
    let a = synth(&dir.path().join("a"), "dataset2", 1);
    let b = synth(&dir.path().join("b"), "dataset2", 1);
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let c = dir.path().join("c");
    ok(&["synth", "--out", c.to_str().unwrap(), "--shape", "dataset2", "--seed", "7"]);
    assert_ne!(fs::read(&a).unwrap(), fs::read(c.join("synthetic.csv")).unwrap());
}

#[test]
fn fit_then_reports() {
    let dir = tempfile::tempdir().unwrap();
    let data = synth(&dir.path().join("data"), "dataset2", 2);
    let out = dir.path().join("qdt");
    let o = out.to_str().unwrap();
    let summary = ok(&["fit", "--data", &data, "--out", o, "--components", "memory"]);
    assert_eq!(summary.lines().count(), 2);

    for subject in ["synth_001", "synth_002"] {
        let text = fs::read_to_string(out.join("params").join(format!("{subject}.json"))).unwrap();
        let fits: Vec<FitResult> = serde_json::from_str(&text).unwrap();
        assert_eq!(fits.len(), 6);
        for (k, fit) in fits.iter().enumerate() {
            assert_eq!(fit.fold, Some(k));
            assert!(fit.objective.is_finite());
            let ap = fit.params.attraction.unwrap();
            assert!(ap.mask.memory && !ap.mask.need && !ap.mask.time_frame);
        }
    }

    ok(&["predict", "--data", &data, "--out", o]);
    let preds = csv_rows(&out.join("predictions.csv"));
    assert_eq!(preds.len(), 1248);

    ok(&["evaluate", "--data", &data, "--out", o]);
    assert_eq!(header(&out.join("accuracy.csv")), ["subject", "model", "fold", "accuracy"]);
    let acc = csv_rows(&out.join("accuracy.csv"));
    assert_eq!(acc.len(), 12);
    for row in &acc {
        let a: f64 = row[3].parse().unwrap();
        assert!((0.0..=1.0).contains(&a));
    }
    assert_eq!(
        header(&out.join("calibration.csv")),
        ["bin_lower", "bin_upper", "midpoint", "n", "empirical_rate"]
    );
    let cal = csv_rows(&out.join("calibration.csv"));
    assert_eq!(cal.len(), 10);
    let n: usize = cal.iter().map(|r| r[3].parse::<usize>().unwrap()).sum();
    assert_eq!(n, 1248);
    assert_eq!(header(&out.join("factor_hist.csv")), ["factor", "bin_lower", "count"]);
    let f_total: u64 = csv_rows(&out.join("factor_hist.csv"))
        .iter()
        .filter(|r| r[0] == "f")
        .map(|r| r[2].parse::<u64>().unwrap())
        .sum();
    assert_eq!(f_total, 1248);

    ok(&["simulate", "--data", &data, "--out", o, "--n-sims", "1"]);
    assert_eq!(header(&out.join("similarity_hist.csv")), ["bin_lower", "count"]);
    let total: u64 = csv_rows(&out.join("similarity_hist.csv"))
        .iter()
        .map(|r| r[1].parse::<u64>().unwrap())
        .sum();
    assert_eq!(total, 2);
}

#[test]
fn cpt_fit_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let data = synth(&dir.path().join("data"), "dataset2", 1);
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for out in [&a, &b] {
        ok(&["fit", "--data", &data, "--out", out.to_str().unwrap(), "--model", "cpt"]);
    }
    let pa = fs::read_to_string(a.join("params/synth_001.json")).unwrap();
    let pb = fs::read_to_string(b.join("params/synth_001.json")).unwrap();
    assert_eq!(pa, pb);
    assert!(!pa.contains("attraction"));
    let fits: Vec<FitResult> = serde_json::from_str(&pa).unwrap();
    assert_eq!(fits.len(), 6);
    assert!(fits.iter().all(|f| f.params.attraction.is_none()));
}

#[test]
fn export_features_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let data = synth(&dir.path().join("data"), "dataset2", 1);
    let o = dir.path().join("feat");
    ok(&["export-features", "--data", &data, "--out", o.to_str().unwrap()]);
    let path = o.join("features.csv");
    assert_eq!(header(&path), FEATURE_COLUMNS);
    let rows = csv_rows(&path);
    assert_eq!(rows.len(), 624);
    assert!(rows.iter().all(|r| r.len() == 16));

    let original = read_trials(fs::File::open(&data).unwrap()).unwrap();
    for (row, t) in rows.iter().zip(&original) {
        assert_eq!(row[0], t.subject_id);
        assert_eq!(row[3].parse::<f64>().unwrap(), t.initial_amount);
        assert_eq!(row[4].parse::<f64>().unwrap(), t.win_prob);
        let label = &row[15];
        assert_eq!(label, if t.response.as_str() == "gamble" { "1" } else { "0" });
    }
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = d.join("out");
    let o = o.to_str().unwrap();

    // usage and configuration
    assert_eq!(code(&["fit"]), 3);
    assert_eq!(code(&["no-such-command"]), 3);
    assert_eq!(code(&["synth", "--out", o, "--shape", "dataset9"]), 3);
    assert_eq!(code(&["synth", "--out", o, "--components", "mood"]), 3);
    assert_eq!(code(&["synth", "--out", o, "--subjects", "0"]), 3);
    assert_eq!(code(&["--help"]), 0);

    let data = synth(&d.join("data"), "dataset2", 1);
    assert_eq!(code(&["fit", "--data", &data, "--out", o, "--folds", "1"]), 3);
    assert_eq!(code(&["fit", "--data", &data, "--out", o, "--reg-weight", "-1"]), 3);

    // data
    let missing = d.join("missing.csv");
    assert_eq!(code(&["fit", "--data", missing.to_str().unwrap(), "--out", o]), 2);
    let bad = d.join("bad.csv");
    fs::write(&bad, "subject_id,block_id\ns1,notanumber\n").unwrap();
    assert_eq!(code(&["fit", "--data", bad.to_str().unwrap(), "--out", o]), 2);
    let empty = d.join("empty.csv");
    fs::write(&empty, "").unwrap();
    assert_eq!(code(&["export-features", "--data", empty.to_str().unwrap(), "--out", o]), 2);

    // reports without a fit
    assert_eq!(code(&["evaluate", "--data", &data, "--out", o]), 2);
    assert_eq!(code(&["simulate", "--data", &data, "--out", o]), 2);
}

#[test]
fn in_process_run_matches_binary() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x");
    let args = ["qdt-choice", "synth", "--out", out.to_str().unwrap(), "--shape", "dataset2"];
    assert_eq!(qdt_choice::cli::run(args), 0);
    let via_bin = synth(&dir.path().join("y"), "dataset2", 1);
    assert_eq!(
        fs::read(out.join("synthetic.csv")).unwrap(),
        fs::read(via_bin).unwrap()
    );
}

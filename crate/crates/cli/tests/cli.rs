use std::process::{Command, Output};

use kasami::output::SpectrumReport;

fn kasami(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kasami"))
        .args(args)
        .env_remove("KASAMI_WORKERS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn prodform_identity() {
    let o = kasami(&[
        "identities",
        "--theorem",
        "prodform",
        "--q",
        "2",
        "--i",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "LHS 15 = RHS 15\n");
}

#[test]
fn other_identities() {
    let o = kasami(&[
        "identities",
        "--theorem",
        "twovsone",
        "--q",
        "3",
        "--u",
        "5",
        "--i",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let o = kasami(&[
        "identities",
        "--theorem",
        "mobius",
        "--q",
        "4",
        "--u",
        "3",
        "--i",
        "1",
    ]);
    assert_eq!(stdout(&o), "LHS 0 = RHS 0\nLHS 0 = RHS 0\n");
    let o = kasami(&["identities", "--theorem", "moment", "--m", "6", "--i", "2"]);
    assert_eq!(stdout(&o), "LHS 945/256 = RHS 945/256\n");
    let o = kasami(&[
        "identities",
        "--theorem",
        "expansion",
        "--m",
        "4",
        "--i",
        "1",
    ]);
    assert_eq!(stdout(&o), "LHS 46 = RHS 46\n");
    let o = kasami(&["identities", "--theorem", "recursion"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn decimated_sequence() {
    let o = kasami(&["sequence", "--m", "4", "--decimation", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let bits = out.split_whitespace().nth(2).unwrap();
    assert_eq!(bits.len(), 15);
    assert!(out.contains("(period 3)"));
    let o = kasami(&["sequence", "--m", "4", "--decimation", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn generator_listing() {
    let o = kasami(&["sequence", "--m", "4", "--k", "2", "--format", "csv"]);
    let out = stdout(&o);
    assert!(out.starts_with("label,bits,period\n"));
    assert_eq!(out.lines().count(), 4);
}

#[test]
fn solution_counts() {
    let o = kasami(&[
        "solutions",
        "--m",
        "6",
        "--n",
        "3",
        "--d",
        "1",
        "--s",
        "2",
        "--u",
        "2",
        "--method",
        "both",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.matches("59536").count(), 2, "{out}");
    // outside s ≥ u only the exhaustive count is available
    let o = kasami(&["solutions", "--m", "4", "--s", "0", "--u", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("empirical"));
    let o = kasami(&[
        "solutions",
        "--m",
        "4",
        "--s",
        "0",
        "--u",
        "1",
        "--method",
        "formula",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let o = kasami(&[
        "solutions",
        "--m",
        "8",
        "--s",
        "1",
        "--u",
        "2",
        "--method",
        "enumerate",
    ]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn spectrum_both_methods() {
    let o = kasami(&[
        "spectrum", "--m", "4", "--n", "2", "--d", "1", "--k", "1", "--method", "both", "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let r = SpectrumReport::from_json(&stdout(&o)).unwrap();
    let census: Vec<(i64, String)> = r
        .spectrum
        .iter()
        .map(|s| (s.dc, s.count.to_string()))
        .collect();
    assert_eq!(
        census,
        vec![(-5, "18".into()), (-1, "15".into()), (3, "30".into())]
    );
}

#[test]
fn spectrum_validation_and_budget() {
    let o = kasami(&["spectrum", "--m", "6", "--n", "3", "--d", "2", "--k", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("gcd(n,d) = 1 ≠ gcd(m,d) = 2"));
    let o = kasami(&["spectrum", "--m", "10", "--k", "2", "--method", "enumerate"]);
    assert_eq!(o.status.code(), Some(3));
    let o = kasami(&["spectrum", "--m", "4", "--worker-count", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn spectrum_nontrivial_e() {
    let o = kasami(&[
        "spectrum", "--m", "12", "--n", "6", "--d", "2", "--k", "1", "--method", "formula",
        "--format", "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let r = SpectrumReport::from_csv(&stdout(&o)).unwrap();
    assert_eq!(r.params.e, 2);
    assert_eq!(r.beta[0].rank, 6);
    assert_eq!(r.beta[0].count.to_string(), "63");
}

#[test]
fn output_file_is_reproducible() {
    let dir = std::env::temp_dir().join(format!("kasami-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let a = dir.join("a.json");
    let b = dir.join("b.json");
    for (path, workers) in [(&a, "1"), (&b, "3")] {
        let o = kasami(&[
            "spectrum",
            "--m",
            "6",
            "--k",
            "3",
            "--method",
            "both",
            "--format",
            "json",
            "--worker-count",
            workers,
            "--output",
            path.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
        assert!(o.stdout.is_empty());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn worker_count_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_kasami"))
        .args(["spectrum", "--m", "4", "--k", "2", "--method", "enumerate"])
        .env("KASAMI_WORKERS", "2")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn verify_identities() {
    let o = kasami(&["verify", "--suite", "identities", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.ends_with("13 checks, 0 failed\n"), "{out}");
    assert!(String::from_utf8_lossy(&o.stderr).contains("wall time"));
}

#[test]
fn verify_spectrum_and_sequences() {
    for suite in ["spectrum", "sequences"] {
        let o = kasami(&["verify", "--suite", suite]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    }
}

#[test]
fn verify_solutions_reports_the_converse_gap() {
    let o = kasami(&["verify", "--suite", "solutions"]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("FAIL solutions  elimination converse inclusion"));
    assert!(out.contains("PASS solutions  elimination forward inclusion"));
    assert_eq!(out.matches("FAIL").count(), 1);
}

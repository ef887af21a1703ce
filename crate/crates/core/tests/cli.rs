use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/data").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_factoring"))
        .args(args)
        .env("NO_COLOR", "1")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

fn records(csv_text: &str) -> Vec<csv::StringRecord> {
    csv::Reader::from_reader(csv_text.as_bytes())
        .records()
        .map(|r| r.unwrap())
        .collect()
}

const DEAL: &str = r#""c": 100, "t": 1, "delta": 0.5, "r_a": 0.2, "r_b": 0.2, "lambda_a": 0.1, "lambda_b": 0.1"#;

#[test]
fn prices_reference_cell() {
    let out = run(&["price", data("table1.json").to_str().unwrap(), "--model", "revocatory"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with(
        "id,model,price,implied_alpha,p_default_no_clawback,p_joint_survival,p_clawback,mc_std_error,\
         theta,kendall_tau,c,t,delta,r_a,r_b,lambda_a,lambda_b,error\r\n"
    ));
    let rows = records(&text);
    assert_eq!(rows.len(), 3);
    assert_eq!(&rows[0][1], "revocatory_closed");
    let price: f64 = rows[0][2].parse().unwrap();
    assert_eq!(format!("{price:.3}"), "88.164");
}

#[test]
fn kendall_tau_input_matches_theta() {
    let dir = tempfile::tempdir().unwrap();
    let by_theta = write(
        &dir,
        "theta.json",
        &format!(r#"{{"schema_version": "1", "deals": [{{"id": "x", {DEAL}, "theta": 2}}]}}"#),
    );
    let by_tau = write(
        &dir,
        "tau.json",
        &format!(r#"{{"schema_version": "1", "deals": [{{"id": "x", {DEAL}, "kendall_tau": 0.5}}]}}"#),
    );
    let a = run(&["price", &by_theta]);
    let b = run(&["price", &by_tau]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn degenerate_deal_is_reported_per_row() {
    let out = run(&["price", data("degenerate.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let rows = records(&stdout(&out));
    assert_eq!(rows.len(), 4);
    assert!(rows[..3].iter().all(|r| r[17].is_empty()));
    assert!(rows[3][17].starts_with("degenerate_deal"));
    assert!(rows[3][2].is_empty());
}

#[test]
fn validation_lists_every_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(
        &dir,
        "bad.json",
        &format!(
            r#"{{"schema_version": "1", "deals": [
  {{"id": "a", "c": -1, "t": 1, "delta": 0.5, "r_a": 0.2, "r_b": 0.2, "lambda_a": 0.1, "lambda_b": 0.1, "theta": 2}},
  {{"id": "a", {DEAL}, "theta": 0.5, "colour": "red"}}
]}}"#
        ),
    );
    let out = run(&["price", &path]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    let err = String::from_utf8(out.stderr).unwrap();
    let lines: Vec<&str> = err.lines().collect();
    assert_eq!(lines.len(), 4, "{err}");
    assert!(lines[0].starts_with("2:20: $.deals[0].c"));
    assert!(err.contains("$.deals[1].id: duplicate"));
    assert!(err.contains("$.deals[1].theta"));
    assert!(err.contains("$.deals[1].colour: unknown field"));
}

#[test]
fn unknown_schema_version_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(
        &dir,
        "v2.json",
        &format!(r#"{{"schema_version": "2", "deals": [{{"id": "x", {DEAL}, "theta": 1}}]}}"#),
    );
    assert_eq!(run(&["price", &path]).status.code(), Some(2));
}

#[test]
fn tables_print_reference_cells() {
    let one = stdout(&run(&["tables", "--table", "1"]));
    assert!(one.contains("88.164"));
    assert!(one.contains("90.199"));
    let two = stdout(&run(&["tables", "--table", "2"]));
    assert!(two.contains("90.44666"));
    assert!(two.contains("77.38472"));
    assert_eq!(two.matches("96.09835").count(), 5);
    assert!(!two.contains('\x1b'));
}

#[test]
fn table_mc_check_passes() {
    let out = run(&["tables", "--table", "2", "--mc-check", "--paths", "200000"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("max |MC - closed| / SE"));
}

#[test]
fn table_mc_check_failure_exit_code() {
    // One path has zero standard error, so every cell is out of band.
    let out = run(&["tables", "--table", "1", "--mc-check", "--paths", "1", "--workers", "1"]);
    assert_eq!(out.status.code(), Some(4));
}

fn sweep_prices(args: &[&str]) -> (Vec<f64>, String) {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0));
    let prices = records(&stdout(&out)).iter().map(|r| r[2].parse().unwrap()).collect();
    (prices, String::from_utf8(out.stderr).unwrap())
}

#[test]
fn theta_sweep_matches_table_column() {
    let (prices, footer) = sweep_prices(&["sweep", "--param", "theta", "--from", "1", "--to", "5", "--steps", "5"]);
    let printed: Vec<String> = prices.iter().map(|p| format!("{p:.3}")).collect();
    assert_eq!(printed[0], "88.164");
    assert_eq!(printed[2], "91.606");
    assert_eq!(printed[4], "91.866");
    assert!(footer.contains("nondecreasing=true"));
}

#[test]
fn delta_sweep_starts_at_standard_price() {
    let (prices, _) = sweep_prices(&["sweep", "--param", "delta", "--from", "0", "--to", "2", "--steps", "5"]);
    let standard = 100.0 * (1.0 - 0.8 * (1.0 - (-0.1f64).exp()));
    assert!((prices[0] - standard).abs() < 1e-6);
}

#[test]
fn assignor_intensity_sweep_is_nonincreasing() {
    let (prices, footer) = sweep_prices(&[
        "sweep", "--param", "lambda-a", "--from", "0", "--to", "0.5", "--steps", "11",
    ]);
    assert_eq!(prices.len(), 11);
    assert!(footer.contains("nonincreasing=true"), "{footer}");
}

#[test]
fn mc_runs_are_byte_identical() {
    let scenario = data("table1.json");
    let args = [
        "price",
        scenario.to_str().unwrap(),
        "--mc",
        "--seed",
        "9",
        "--paths",
        "50000",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let rows = records(&stdout(&a));
    assert_eq!(rows.len(), 12);
    assert!(rows.iter().any(|r| &r[1] == "revocatory_mc" && !r[7].is_empty()));
    assert!(rows.iter().any(|r| &r[1] == "standard_mc"));
}

#[test]
fn json_rows_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let rows_path = dir.path().join("rows.jsonl");
    let first = run(&[
        "price",
        data("table1.json").to_str().unwrap(),
        "--out",
        "json",
        "--output",
        rows_path.to_str().unwrap(),
    ]);
    assert_eq!(first.status.code(), Some(0));
    let again = run(&["price", rows_path.to_str().unwrap(), "--input", "rows", "--out", "json"]);
    assert_eq!(again.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&rows_path).unwrap(), stdout(&again));
}

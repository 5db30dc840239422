use std::process::{Command, Output};

use fibnorm_cli::{Report, Status};

fn fibnorm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fibnorm"))
        .args(args)
        .arg("--quiet")
        .env_remove("FIBNORM_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = fibnorm(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Report {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    serde_json::from_str(&stdout(&all)).unwrap()
}

fn column(r: &Report, name: &str) -> Vec<String> {
    let i = r.columns.iter().position(|c| c == name).unwrap();
    r.rows.iter().map(|row| row[i].clone()).collect()
}

#[test]
fn table_one_periods() {
    let r = json(&["table", "1"]);
    let want = "3 8 6 20 24 16 12 24 60 10 24 28 48 40 24 36 24 18 60";
    assert_eq!(column(&r, "period").join(" "), want);
    let range = json(&["pisano", "2..20"]);
    assert_eq!(column(&range, "period").join(" "), want);
}

#[test]
fn single_moduli() {
    assert_eq!(column(&json(&["pisano", "10000", "--fast"]), "period"), ["15000"]);
    assert_eq!(column(&json(&["pisano", "1"]), "period"), ["1"]);
    assert_eq!(column(&json(&["pisano", "1000", "--direct"]), "period"), ["1500"]);
}

#[test]
fn both_methods_agree() {
    let r = json(&["pisano", "1..300", "--both"]);
    assert_eq!(r.rows.len(), 300);
    assert!(column(&r, "agree").iter().all(|a| a == "yes"));
    assert_eq!(r.status, Status::Ok);
}

#[test]
fn json_round_trips_and_is_deterministic() {
    let args = ["table", "7", "--base", "3", "--places", "5", "--format", "json"];
    let first = stdout(&args);
    let second = stdout(&args);
    assert_eq!(first, second);
    let r: Report = serde_json::from_str(&first).unwrap();
    let mut again = serde_json::to_string_pretty(&r).unwrap();
    again.push('\n');
    assert_eq!(again, first);
}

#[test]
fn worker_count_does_not_change_output() {
    let one = stdout(&["omega", "1..400", "--jobs", "1", "--format", "csv"]);
    let many = stdout(&["omega", "1..400", "--jobs", "4", "--format", "csv"]);
    assert_eq!(one, many);
}

#[test]
fn table_two_zero_counts() {
    let r = json(&["table", "2"]);
    let zeros = column(&r, "zeros").join(" ");
    assert_eq!(zeros, "1 2 1 4 2 2 2 2 4 1 2 4 2 2 2 4 2 1 2");
}

#[test]
fn table_four_matches_the_rule() {
    let r = json(&["table", "4"]);
    assert_eq!(r.rows.len(), 9);
    assert!(column(&r, "agree").iter().all(|a| a == "yes"));
    // only the mixed one-zero/four-zero cells can produce both values
    let observed = column(&r, "observed");
    assert_eq!(observed[2], "2 4");
    assert_eq!(observed[6], "2 4");
    assert_eq!(observed[8], "4");
}

#[test]
fn binary_place_counts_follow_the_listed_sequence() {
    // the 24 digits listed for the 2^3 place
    let listed = "0,0,0,0,0,0,1,1,0,0,0,1,0,1,1,0,1,1,1,0,1,0,1,0";
    let zeros = listed.split(',').filter(|d| *d == "0").count();
    let r = json(&["freq", "2", "3"]);
    assert_eq!(column(&r, "count"), [zeros.to_string(), (24 - zeros).to_string()]);
    let t5 = json(&["table", "5"]);
    assert_eq!(column(&t5, "sequence")[3], listed.replace(',', " "));
    assert_eq!(column(&t5, "zeros"), ["1", "4", "8", "14", "28"]);
    assert_eq!(column(&t5, "ones"), ["2", "2", "4", "10", "20"]);
}

#[test]
fn table_six_upsilon() {
    let r = json(&["table", "6", "--bases", "5,13,17"]);
    assert_eq!(column(&r, "upsilon"), ["0", "1", "1"]);
    assert_eq!(column(&r, "searched_to"), ["3", "4", "4"]);
}

#[test]
fn table_seven_rows() {
    let r = json(&["table", "7", "--base", "3", "--places", "8"]);
    assert_eq!(r.rows.len(), 9);
    assert_eq!(r.rows[2][2..5], ["27", "18", "27"]);
    assert_eq!(r.rows[3][5..11], ["291", "255", "318", "33.6806", "29.5139", "36.8056"]);
    assert_eq!(r.rows[2][11..14], ["100/3", "175/6", "75/2"]);
    assert_eq!(r.rows[8][5..8], ["158112", "149607", "164673"]);
}

#[test]
fn figure_one_csv() {
    let csv = stdout(&["figure1", "3", "--places", "11", "--format", "csv"]);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "place,digit,cumulative_percent,reference");
    assert_eq!(lines.len(), 37);
    assert_eq!(lines[1], "0,0,25.0000,0.333333");
    assert_eq!(lines[36], "11,2,34.4750,0.333333");
    assert!(lines.iter().all(|l| l.split(',').count() == 4));
}

#[test]
fn concatenation_prefix() {
    let csv = stdout(&["concat", "10", "--t", "20", "--format", "csv"]);
    assert_eq!(csv, "digits\n01123581321345589144\n");
}

#[test]
fn normality_pairs() {
    let r = json(&["normality", "10", "2", "100000"]);
    assert_eq!(r.rows.len(), 100);
    assert_eq!(r.meta["listing"], "all");
    let total: u64 = column(&r, "count").iter().map(|c| c.parse::<u64>().unwrap()).sum();
    assert_eq!(total, 100000 - 1);
}

#[test]
fn jacobson_and_residues() {
    let r = json(&["jacobson", "0", "5"]);
    assert_eq!(r.meta["holds"], "true");
    assert_eq!(column(&r, "count"), column(&r, "predicted"));
    let r = json(&["residues", "16"]);
    assert_eq!(r.meta["jacobson_pattern"], "false");
}

#[test]
fn exit_codes() {
    let budget = fibnorm(&["pisano", "1000", "--direct", "--budget", "100"]);
    assert_eq!(budget.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&budget.stdout).contains("budget-exceeded"));

    let env = Command::new(env!("CARGO_BIN_EXE_fibnorm"))
        .args(["phi", "3", "2", "--quiet"])
        .env("FIBNORM_BUDGET", "5")
        .output()
        .unwrap();
    assert_eq!(env.status.code(), Some(2));

    assert_eq!(fibnorm(&["pisano", "0"]).status.code(), Some(3));
    assert_eq!(fibnorm(&["table", "3"]).status.code(), Some(3));
    assert_eq!(fibnorm(&["phi", "1", "0"]).status.code(), Some(3));
    assert_eq!(fibnorm(&["no-such-command"]).status.code(), Some(3));
}

#[test]
fn partial_table_keeps_finished_rows() {
    let out = fibnorm(&["table", "7", "--places", "11", "--budget", "100000", "--format", "json"]);
    assert_eq!(out.status.code(), Some(2));
    let r: Report = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r.status, Status::BudgetExceeded);
    // N_9 = 157464 is the first period over the limit
    assert_eq!(r.rows.len(), 9);
}

use std::process::{Command, Output};

use serde_json::Value;
use torus_wrt::wrt::tau_hat;
use torus_wrt::{Real, SurgerySpec, F150};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_torus-wrt"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn validation_errors_exit_with_two_and_name_the_constraint() {
    let cases: [(&[&str], &str); 4] = [
        (
            &["tau", "-a", "2", "-b", "4", "-p", "13", "-n", "11"],
            "gcd(a,b)",
        ),
        (
            &["tau", "-a", "2", "-b", "3", "-p", "13", "-n", "10"],
            "odd",
        ),
        (
            &["expand", "-a", "3", "-b", "5", "-p", "18", "-n", "11"],
            "gcd(p,ab)",
        ),
        (
            &[
                "sweep", "-a", "2", "-b", "3", "-p", "13", "--n-from", "4", "--n-to", "4",
            ],
            "no odd levels",
        ),
    ];
    for (args, needle) in cases {
        let o = bin(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(stderr(&o).contains(needle), "{args:?}: {}", stderr(&o));
        assert!(o.stdout.is_empty());
    }
}

#[test]
fn unsupported_precision_is_a_validation_error() {
    let o = bin(&[
        "tau",
        "-a",
        "2",
        "-b",
        "3",
        "-p",
        "13",
        "-n",
        "11",
        "--precision",
        "64",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn tau_json_matches_library() {
    let o = bin(&["tau", "-a", "3", "-b", "5", "-p", "19", "-n", "31"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["precision_bits"], 53);
    assert_eq!(v["spec"]["p"], 19);
    assert!(v["tool_version"].is_string());
    let want = tau_hat::<f64>(&SurgerySpec::new(3, 5, 19, 31).unwrap()).value;
    assert_eq!(v["tau"]["value"]["re"], want.re.to_decimal());
    assert_eq!(v["tau"]["value"]["im"], want.im.to_decimal());

    let o = bin(&[
        "tau",
        "-a",
        "3",
        "-b",
        "5",
        "-p",
        "19",
        "-n",
        "31",
        "--precision",
        "150",
        "--format",
        "csv",
    ]);
    let want = tau_hat::<F150>(&SurgerySpec::new(3, 5, 19, 31).unwrap()).value;
    assert_eq!(
        stdout(&o),
        format!(
            "n,tau_re,tau_im\n31,{},{}\n",
            want.re.to_decimal(),
            want.im.to_decimal()
        )
    );
}

#[test]
fn output_is_deterministic() {
    let args = [
        "expand",
        "-a",
        "2",
        "-b",
        "5",
        "-p",
        "13",
        "-n",
        "41",
        "--precision",
        "150",
    ];
    assert_eq!(stdout(&bin(&args)), stdout(&bin(&args)));
}

#[test]
fn tau_thread_count_agrees() {
    let one = bin(&[
        "tau", "-a", "2", "-b", "3", "-p", "13", "-n", "101", "--format", "csv",
    ]);
    let four = bin(&[
        "tau",
        "-a",
        "2",
        "-b",
        "3",
        "-p",
        "13",
        "-n",
        "101",
        "--format",
        "csv",
        "--workers",
        "4",
    ]);
    let parse = |o: &Output| -> Vec<f64> {
        stdout(o)
            .lines()
            .nth(1)
            .unwrap()
            .split(',')
            .skip(1)
            .map(|x| x.parse().unwrap())
            .collect()
    };
    let (x, y) = (parse(&one), parse(&four));
    assert!((x[0] - y[0]).abs() < 1e-12 && (x[1] - y[1]).abs() < 1e-12);
}

#[test]
fn sweep_rows_independent_of_workers() {
    let base = [
        "sweep", "-a", "3", "-b", "5", "-p", "19", "--n-from", "21", "--n-to", "60", "--format",
        "csv",
    ];
    let one = bin(&[&base[..], &["--workers", "1"]].concat());
    let four = bin(&[&base[..], &["--workers", "4"]].concat());
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(stdout(&one), stdout(&four));
    let body = stdout(&one);
    let mut lines = body.lines();
    assert_eq!(
        lines.next().unwrap(),
        "n,tau_re,tau_im,A_re,A_im,B_re,B_im,residual,n_times_residual"
    );
    let ns: Vec<i64> = lines
        .map(|l| l.split(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(ns, (21..=59).step_by(2).collect::<Vec<_>>());
    let summary: Value = serde_json::from_str(&stderr(&one)).unwrap();
    assert!(summary["slope"].is_number());
}

#[test]
fn invariant_table_row_counts() {
    for (a, b, p, rows) in [("3", "5", "19", 6), ("2", "3", "7", 0), ("2", "3", "13", 3)] {
        let o = bin(&["tables", "-a", a, "-b", b, "-p", p]);
        assert_eq!(o.status.code(), Some(0));
        let body = stdout(&o);
        assert_eq!(
            body.lines().next().unwrap(),
            "h,k,l,class,CS_plus,CS_minus,T_plus,T_minus"
        );
        assert_eq!(body.lines().count() - 1, rows, "({a},{b},{p})");
    }
}

#[test]
fn tables_write_to_file_and_report_io_errors() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("labels.json");
    let o = bin(&[
        "tables",
        "-a",
        "3",
        "-b",
        "5",
        "-p",
        "19",
        "--table",
        "labels",
        "--format",
        "json",
        "-o",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 6);

    let bad = dir.path().join("missing").join("x.csv");
    let o = bin(&[
        "tables",
        "-a",
        "3",
        "-b",
        "5",
        "-p",
        "19",
        "-o",
        bad.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("cannot write"));
}

#[test]
fn verify_single_group() {
    let o = bin(&["verify", "--only", "index-sets"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["spec"].is_null());
    let checks = v["checks"].as_array().unwrap();
    assert!(!checks.is_empty());
    assert!(checks
        .iter()
        .all(|c| c["group"] == "index-sets" && c["pass"] == true));
    assert!(stderr(&o).lines().all(|l| l.starts_with("PASS ")));
}

#[test]
fn verify_with_seed_adds_points() {
    let o = bin(&["verify", "--only", "lemmas", "--check-seed", "7"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["check_seed"], 7);
    let sinh = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "geometric-sinh-sum")
        .unwrap();
    let used: usize = sinh["detail"]
        .as_str()
        .unwrap()
        .split(' ')
        .next()
        .unwrap()
        .parse()
        .unwrap();
    assert!(used > 4);
}

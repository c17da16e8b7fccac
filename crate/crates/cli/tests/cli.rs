use means_lab::report::{self, ReportRow, REPORT_HEADER, SIGNMAP_HEADER};
use means_lab::{run, EXIT_USAGE, EXIT_WITNESS};
use means_lab_core::margins;
use means_lab_core::{InequalityId, PositivePair};
use proptest::prelude::*;

struct Out {
    code: i32,
    stdout: String,
    stderr: String,
}

fn invoke(args: &[&str], env_digits: Option<&str>) -> Out {
    let argv = std::iter::once("means-lab").chain(args.iter().copied());
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(argv, env_digits, &mut out, &mut err);
    Out {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn records(text: &str) -> (csv::StringRecord, Vec<csv::StringRecord>) {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().unwrap().clone();
    (header, r.records().map(Result::unwrap).collect())
}

#[test]
fn eval_reports_every_mean() {
    let o = invoke(&["eval", "--kind", "all", "--x", "1", "--y", "4"], None);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let (header, rows) = records(&o.stdout);
    assert_eq!(header.iter().collect::<Vec<_>>(), ["kind", "x", "y", "value", "digits"]);
    let kinds: Vec<_> = rows.iter().map(|r| r[0].to_owned()).collect();
    assert_eq!(kinds, ["H", "G", "A", "Q", "P", "L", "I"]);
    assert_eq!(&rows[0][3], "1.6000000000000001e0");
    assert_eq!(&rows[2][3], "2.5000000000000000e0");
}

#[test]
fn eval_with_digits_prints_oracle_decimal() {
    let o = invoke(&["eval", "--kind", "I", "--t", "4", "--digits", "30"], None);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let (_, rows) = records(&o.stdout);
    assert_eq!(&rows[0][3], "2.33588884765208357680302351896e0");
    assert_eq!(&rows[0][4], "30");
}

#[test]
fn margin_row_is_certified() {
    let o = invoke(&["margin", "--ineq", "EQ6_CONJ", "--t", "100"], None);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let (header, rows) = records(&o.stdout);
    assert_eq!(header.iter().collect::<Vec<_>>(), REPORT_HEADER);
    assert_eq!(&rows[0][7], "negative");
    // Signs are confirmed at twice the starting precision.
    assert_eq!(&rows[0][8], "100");
    assert_eq!(&rows[0][9], "true");
    let margin: f64 = rows[0][5].parse().unwrap();
    assert!((margin + 0.50851435669022252).abs() < 1e-13);
}

#[test]
fn digits_come_from_flag_then_environment() {
    let args = ["margin", "--ineq", "EQ2_PRODUCT", "--x", "1", "--y", "4"];
    let env = invoke(&args, Some("64"));
    assert_eq!(&records(&env.stdout).1[0][8], "128");
    let mut with_flag = args.to_vec();
    with_flag.extend(["--digits", "40"]);
    let flag = invoke(&with_flag, Some("64"));
    assert_eq!(&records(&flag.stdout).1[0][8], "80");
    let bad = invoke(&args, Some("lots"));
    assert_eq!(bad.code, EXIT_USAGE);
    assert!(bad.stderr.contains("MEANS_LAB_DIGITS"), "{}", bad.stderr);
    assert_eq!(invoke(&args, Some("10")).code, EXIT_USAGE);
}

#[test]
fn usage_and_domain_errors_exit_2() {
    let cases: [&[&str]; 7] = [
        &["margin", "--ineq", "NOPE", "--t", "2"],
        &["eval", "--kind", "Z", "--t", "2"],
        &["eval", "--kind", "A", "--x", "-1", "--y", "2"],
        &["eval", "--kind", "A", "--t", "0.5"],
        &["margin", "--ineq", "EQ1_POWER", "--t", "2"],
        &["lemma", "--a", "1", "--b", "1", "--c", "3", "--d", "3", "--n", "2"],
        &["frobnicate"],
    ];
    for args in cases {
        let o = invoke(args, None);
        assert_eq!(o.code, EXIT_USAGE, "{args:?}");
        assert!(o.stdout.is_empty(), "{args:?}");
        assert!(!o.stderr.is_empty(), "{args:?}");
    }
    assert_eq!(invoke(&["--help"], None).code, 0);
}

#[test]
fn hunt_exit_codes() {
    let found = invoke(&["hunt", "--ineq", "EQ6_CONJ", "--t-hi", "1000"], None);
    assert_eq!(found.code, EXIT_WITNESS, "{}", found.stderr);
    assert!(found.stderr.contains("seed: 0"));
    let none = invoke(&["hunt", "--ineq", "EQ4_SANDOR", "--t-hi", "1e6"], None);
    assert_eq!(none.code, 0, "{}", none.stderr);
    let (_, rows) = records(&none.stdout);
    assert_eq!(&rows[0][9], "false");
    assert_ne!(&rows[0][7], "negative");
}

#[test]
fn scan_csv_is_in_grid_order() {
    let o = invoke(
        &["scan", "--ineq", "EQ1_POWER", "--t-hi", "100", "--t-steps", "5", "--n-lo", "0", "--n-hi", "1", "--n-steps", "3"],
        None,
    );
    assert_eq!(o.code, 0, "{}", o.stderr);
    let (header, rows) = records(&o.stdout);
    assert_eq!(header.iter().collect::<Vec<_>>(), SIGNMAP_HEADER);
    assert_eq!(rows.len(), 15);
    let ns: Vec<f64> = rows.iter().map(|r| r[2].parse().unwrap()).collect();
    assert_eq!(&ns[..5], &[0.0; 5]);
    assert_eq!(&ns[10..], &[1.0; 5]);
    let ts: Vec<f64> = rows[..5].iter().map(|r| r[1].parse().unwrap()).collect();
    assert_eq!(ts[0], 1.0);
    assert!((ts[4] - 100.0).abs() < 1e-12);
    // n = 0.5 fails above the diagonal, t = 1 is an exact zero.
    let mid: Vec<&str> = rows[5..10].iter().map(|r| r.get(5).unwrap()).collect();
    assert_eq!(mid, ["zero", "negative", "negative", "negative", "negative"]);
}

#[test]
fn scan_reports_budget_exhaustion() {
    let o = invoke(&["scan", "--ineq", "EQ2_PRODUCT", "--t-steps", "20", "--budget", "7"], None);
    assert_eq!(o.code, 0);
    assert_eq!(records(&o.stdout).1.len(), 7);
    assert!(o.stderr.contains("budget exhausted"), "{}", o.stderr);
}

#[test]
fn json_carries_metadata() {
    let o = invoke(&["scan", "--ineq", "EQ6_CONJ", "--t-steps", "4", "--seed", "9", "--out", "json"], None);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let doc: serde_json::Value = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(doc["meta"]["schema"], report::SCHEMA_VERSION);
    assert_eq!(doc["meta"]["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(doc["meta"]["seed"], 9);
    assert_eq!(doc["meta"]["config"]["id"], "EQ6_CONJ");
    assert_eq!(doc["complete"], true);
    assert_eq!(doc["records"].as_array().unwrap().len(), 4);
    assert!(o.stdout.ends_with("}\n"));
}

#[test]
fn chain_identities_and_lemma_tables() {
    let chain = invoke(&["chain", "--x", "1", "--y", "4"], None);
    let (_, rows) = records(&chain.stdout);
    assert_eq!(rows.len(), 11);
    assert!(rows[6..].iter().all(|r| r[3].parse::<f64>().unwrap() > 0.0));

    let ids = invoke(&["identities", "--x", "1", "--y", "4"], None);
    let (header, rows) = records(&ids.stdout);
    assert_eq!(header.iter().collect::<Vec<_>>(), ["name", "value"]);
    assert_eq!(rows.len(), 4);

    let lemma = invoke(&["lemma", "--a", "3", "--b", "2", "--c", "4", "--d", "1", "--n", "-3"], None);
    assert_eq!(lemma.code, 0, "{}", lemma.stderr);
    assert_eq!(&records(&lemma.stdout).1[0][7], "true");
}

#[test]
fn bracket_needs_a_sign_change() {
    let o = invoke(&["bracket", "--ineq", "EQ2_PRODUCT", "--t-lo", "2", "--t-hi", "10"], None);
    assert_eq!(o.code, EXIT_USAGE);
    let same_sign = invoke(&["bracket", "--ineq", "EQ1_POWER", "--n", "0.5", "--t-lo", "1.0000001", "--t-hi", "2"], None);
    // The n = 0.5 gap is negative on the whole open interval.
    assert_eq!(same_sign.code, EXIT_USAGE, "{}", same_sign.stdout);
}

#[test]
fn profile_json_rows() {
    let o = invoke(&["profile", "--n-list", "0.5,2", "--grid", "64", "--out", "json"], None);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let doc: serde_json::Value = serde_json::from_str(&o.stdout).unwrap();
    let rows = doc["records"].as_array().unwrap();
    assert_eq!(rows[0]["class"], "fails");
    assert_eq!(rows[0]["certified_sign"], "negative");
    assert_eq!(rows[1]["class"], "holds-on-grid");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn report_csv_round_trips(lt in 0.0f64..18.0, ls in -20.0f64..20.0, n in -10i32..=10) {
        let (t, s) = (lt.exp(), 10f64.powf(ls));
        let p = PositivePair::new(t * s, s).unwrap();
        let rec = margins::margin(InequalityId::Eq1Power, p, Some(f64::from(n))).unwrap();
        let row = ReportRow::new(&rec, None);
        let mut buf = Vec::new();
        report::write_report_csv(std::slice::from_ref(&row), &mut buf).unwrap();
        let (_, rows) = records(core::str::from_utf8(&buf).unwrap());
        let parsed: Vec<f64> = [1, 2, 3, 4, 5, 6].iter().map(|&i| rows[0][i].parse().unwrap()).collect();
        for (got, want) in parsed.iter().zip([row.x, row.y, row.t, row.n.unwrap(), row.margin, row.rel_margin]) {
            prop_assert!(got.to_bits() == want.to_bits() || (got.is_nan() && want.is_nan()), "{got} vs {want}");
        }
    }
}

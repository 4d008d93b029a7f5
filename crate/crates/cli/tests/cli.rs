mod common;

use common::{check_schema, parse_json, payload, pentarec};
use pentarec_cli::{verify_schedule_outcome, MethodArg, OutputFormat, EXIT_FAIL};
use pentarec_core::{schedule_for, ResidueRestriction};
use serde_json::Value;

#[test]
fn count_examples() {
    let out = pentarec(&["count", "--n", "29", "--modulus", "27", "--forbid", "0,12,15", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = parse_json(&out.stdout);
    check_schema(&doc).unwrap();
    assert_eq!(doc["params"]["count"], "4133");
    assert_eq!(doc["params"]["forbidden"], serde_json::json!([0, 12, 15]));

    let out = pentarec(&["count", "--n", "29", "--format", "json"]);
    assert_eq!(parse_json(&out.stdout)["params"]["count"], "4565");

    let out = pentarec(&["count", "--n", "0", "--modulus", "5", "--forbid", "0,1,2,3,4"]);
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim_end(), "p(0 | parts ≢ {0,1,2,3,4} (mod 5)) = 1");
}

#[test]
fn residues_pasted_with_modulus_for_zero() {
    let a = pentarec(&["count", "--n", "28", "--modulus", "27", "--forbid", "6,21,27", "--format", "json"]);
    let b = pentarec(&["count", "--n", "28", "--modulus", "27", "--forbid", "0,6,21", "--format", "json"]);
    assert_eq!(payload(&parse_json(&a.stdout)), payload(&parse_json(&b.stdout)));
    assert_eq!(parse_json(&a.stdout)["params"]["count"], "2701");
}

#[test]
fn count_with_oracle() {
    let out = pentarec(&["count", "--n", "27", "--modulus", "27", "--forbid", "3,24,27", "--oracle"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("= 1432"));
    assert!(text.contains("enumeration oracle: 1432 (agrees)"));

    let refused = std::process::Command::new(env!("CARGO_BIN_EXE_pentarec"))
        .args(["count", "--n", "30", "--oracle"])
        .env("PARTITION_ORACLE_BOUND", "20")
        .output()
        .unwrap();
    assert_eq!(refused.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&refused.stderr).contains("oracle bound 20"));

    let bad_env = std::process::Command::new(env!("CARGO_BIN_EXE_pentarec"))
        .args(["count", "--n", "3", "--oracle"])
        .env("PARTITION_ORACLE_BOUND", "lots")
        .output()
        .unwrap();
    assert_eq!(bad_env.status.code(), Some(2));
}

fn term_rows(doc: &Value) -> Vec<(u64, String, Vec<u64>)> {
    doc["params"]["terms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| {
            (
                t["shift"].as_u64().unwrap(),
                t["sign"].as_str().unwrap().to_string(),
                t["forbidden"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect(),
            )
        })
        .collect()
}

#[test]
fn terms_examples() {
    let doc = parse_json(&pentarec(&["terms", "--m", "1", "--format", "json"]).stdout);
    check_schema(&doc).unwrap();
    assert_eq!(doc["params"]["modulus"], 27);
    assert_eq!(
        term_rows(&doc),
        [
            (0, "+".to_string(), vec![0, 12, 15]),
            (1, "-".to_string(), vec![0, 6, 21]),
            (2, "-".to_string(), vec![0, 3, 24]),
        ]
    );
    let doc = parse_json(&pentarec(&["terms", "--m", "2", "--format", "json"]).stdout);
    assert_eq!(doc["params"]["modulus"], 75);
    let rows = term_rows(&doc);
    assert_eq!(rows.len(), 5);
    assert_eq!(rows[3], (5, "+".to_string(), vec![0, 10, 65]));
    assert_eq!(rows[4], (7, "+".to_string(), vec![0, 5, 70]));

    let csv = pentarec(&["terms", "--m", "3", "--format", "csv"]);
    let text = String::from_utf8(csv.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "index,shift,sign,modulus,forbidden");
    assert_eq!(lines.len(), 8);
    assert_eq!(lines[1], "0,0,+,147,0;70;77");
}

#[test]
fn verify_examples() {
    let out = pentarec(&["verify", "--m", "1", "--max-n", "500", "--method", "both"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("counting: PASS"));
    assert!(text.contains("series:   PASS"));
    assert!(text.contains("residual(0) = 1 (constant term)"));

    assert_eq!(pentarec(&["verify", "--m", "2", "--max-n", "300"]).status.code(), Some(0));

    let out = pentarec(&["verify", "--m", "5", "--max-n", "200", "--format", "json"]);
    let doc = parse_json(&out.stdout);
    check_schema(&doc).unwrap();
    assert_eq!(doc["passed"], true);
    assert_eq!(doc["residuals"], serde_json::json!([{"n": 0, "value": "1"}]));
}

#[test]
fn lemma_examples() {
    for args in [["--k", "1", "--order", "200"], ["--k", "4", "--order", "300"], ["--k", "1", "--order", "0"]] {
        let mut full = vec!["lemma"];
        full.extend(args);
        full.extend(["--format", "json"]);
        let out = pentarec(&full);
        assert_eq!(out.status.code(), Some(0));
        let doc = parse_json(&out.stdout);
        check_schema(&doc).unwrap();
        assert_eq!(doc["passed"], true);
        assert!(doc["residuals"].as_array().unwrap().is_empty());
    }
}

#[test]
fn table_examples() {
    let doc = parse_json(&pentarec(&["table", "--m", "1", "--from", "27", "--to", "29", "--format", "json"]).stdout);
    check_schema(&doc).unwrap();
    let rows = doc["params"]["rows"].as_array().unwrap();
    let last = &rows[2];
    assert_eq!(last["n"], 29);
    assert_eq!(last["counts"], serde_json::json!(["4133", "2701", "1432"]));
    assert_eq!(last["residual"], "0");

    let doc = parse_json(&pentarec(&["table", "--m", "1", "--from", "0", "--to", "0", "--format", "json"]).stdout);
    assert_eq!(doc["residuals"], serde_json::json!([{"n": 0, "value": "1"}]));
    assert_eq!(doc["passed"], true);

    let csv = String::from_utf8(pentarec(&["table", "--m", "2", "--from", "7", "--to", "7", "--format", "csv"]).stdout).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "n,term_0,term_1,term_2,term_3,term_4,residual");
    assert!(lines[1].starts_with("7,") && lines[1].ends_with(",0"));
}

#[test]
fn text_and_json_agree() {
    let text = String::from_utf8(pentarec(&["table", "--m", "1", "--from", "27", "--to", "29"]).stdout).unwrap();
    let doc = parse_json(&pentarec(&["table", "--m", "1", "--from", "27", "--to", "29", "--format", "json"]).stdout);
    for row in doc["params"]["rows"].as_array().unwrap() {
        let mut fields = vec![row["n"].to_string()];
        fields.extend(row["counts"].as_array().unwrap().iter().map(|c| c.as_str().unwrap().to_string()));
        fields.push(row["residual"].as_str().unwrap().to_string());
        let line = text
            .lines()
            .find(|l| l.split_whitespace().next() == Some(&fields[0]))
            .expect("row present in text");
        assert_eq!(line.split_whitespace().collect::<Vec<_>>(), fields);
    }
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["count", "--n", "3", "--modulus", "4", "--forbid", "1,x"],
        vec!["count", "--n", "3", "--forbid", "1"],
        vec!["terms", "--m", "0"],
        vec!["verify", "--m", "1", "--max-n", "9000"],
        vec!["table", "--m", "1", "--from", "9", "--to", "3"],
        vec!["frobnicate"],
    ] {
        assert_eq!(pentarec(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn corrupted_schedule_exits_1() {
    let mut schedule = schedule_for(2).unwrap();
    schedule.terms[4].restriction = ResidueRestriction::new(75, [0, 5, 71]).unwrap();
    let out = verify_schedule_outcome(&schedule, 200, MethodArg::Counting, OutputFormat::Json);
    assert_eq!(out.exit_code, EXIT_FAIL);
    let doc: Value = serde_json::from_str(&out.stdout).unwrap();
    check_schema(&doc).unwrap();
    assert_eq!(doc["passed"], false);
    // part 70 is first allowed in the shift-7 term at n = 77
    assert_eq!(doc["params"]["checks"][0]["first_failure"], 77);

    let text = verify_schedule_outcome(&schedule, 200, MethodArg::Both, OutputFormat::Text);
    assert_eq!(text.exit_code, EXIT_FAIL);
    assert!(text.stdout.contains("first failing n = 77"));
    assert!(text.stdout.contains("series:   PASS"));
}

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use potb_cli::PlanDocument;
use potb_core::constructions::{catalog, construct};
use tempfile::TempDir;

fn potb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_potb")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn gen(dir: &TempDir, file: &str, args: &[&str]) -> PathBuf {
    let path = dir.path().join(file);
    let mut full = vec!["gen"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["-o", path_str(&path)]);
    let o = potb(&full);
    assert_eq!(code(&o), 0, "gen {args:?}: {}", String::from_utf8_lossy(&o.stderr));
    path
}

#[test]
fn catalog_lists_thirteen_recipes() {
    let o = potb(&["catalog"]);
    assert_eq!(code(&o), 0);
    let ids: Vec<String> = stdout(&o).lines().filter(|l| !l.starts_with(' ')).map(String::from).collect();
    assert_eq!(ids.len(), 13, "{ids:?}");
    assert!(ids.contains(&"thm6.2".to_string()));

    let o = potb(&["catalog", "--id", "thm3.3"]);
    assert!(stdout(&o).contains("s odd prime power >= 5"));

    let o = potb(&["catalog", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 13);
    assert_eq!(v[0]["id"], "ex2.1");

    assert_eq!(code(&potb(&["catalog", "--id", "thm9.9"])), 2);
}

#[test]
fn gen_then_verify_every_preset() {
    let dir = TempDir::new().unwrap();
    let mut count = 0;
    for e in catalog() {
        for (pi, preset) in e.presets.iter().enumerate() {
            let parts = construct(e.id, &preset.params).unwrap().parts.len();
            for part in 0..parts {
                let mut args: Vec<String> = vec!["--id".into(), e.id.to_string(), "--part".into(), part.to_string()];
                for (k, v) in preset.params.iter() {
                    args.push(format!("--{k}"));
                    args.push(v.to_string());
                }
                let args: Vec<&str> = args.iter().map(String::as_str).collect();
                let file = gen(&dir, &format!("{}-{pi}-{part}.json", e.id), &args);
                let report = dir.path().join("report.json");
                let o = potb(&["verify", path_str(&file), "--report", path_str(&report)]);
                assert_eq!(code(&o), 0, "{} {:?} part {part}:\n{}", e.id, args, stdout(&o));
                assert!(stdout(&o).contains("reproduces"), "{}", stdout(&o));
                let r: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
                assert_eq!(r["all_claims_pass"], true);
                count += 1;
            }
        }
    }
    assert!(count >= 15, "{count}");
}

#[test]
fn documents_round_trip() {
    for e in catalog() {
        for preset in e.presets {
            let r = construct(e.id, &preset.params).unwrap();
            for part in &r.parts {
                let doc = PlanDocument::from_plan(&part.plan, Some((r.id, &r.params)), &part.claims);
                let json = doc.to_json();
                let back = PlanDocument::from_json(&json).unwrap();
                assert_eq!(back, doc);
                assert_eq!(back.to_json(), json);
                assert_eq!(back.to_plan().unwrap(), part.plan);
                assert_eq!(back.parsed_claims().unwrap(), part.claims);
            }
        }
    }
}

#[test]
fn generated_file_reserializes_identically() {
    let dir = TempDir::new().unwrap();
    let file = gen(&dir, "p33.json", &["--id", "thm3.3", "--s", "9"]);
    let text = std::fs::read_to_string(&file).unwrap();
    let doc = PlanDocument::from_json(&text).unwrap();
    assert_eq!(doc.to_json(), text);
    assert!(doc.factors.iter().all(|f| f.kind == "field"));
    assert_eq!(doc.factors[0].levels.last().unwrap(), "inf");
    let construction = doc.construction.as_ref().unwrap();
    assert_eq!(construction.id, "thm3.3");
    assert_eq!(construction.params["s"], 9);
}

#[test]
fn thm51_document_shape() {
    let dir = TempDir::new().unwrap();
    let file = gen(&dir, "p.json", &["--id", "thm5.1", "--h", "2"]);
    let doc = PlanDocument::from_json(&std::fs::read_to_string(file).unwrap()).unwrap();
    assert_eq!(doc.factors.len(), 6);
    assert_eq!(doc.blocks.len(), 4);
    assert!(doc.blocks.iter().all(|b| b.len() == 4));
}

#[test]
fn exit_codes() {
    let o = potb(&["gen", "--id", "thm3.1a", "--s", "4"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("s >= 5"));
    assert_eq!(code(&potb(&["gen", "--id", "thm7.7"])), 2);
    assert_eq!(code(&potb(&["gen", "--id", "thm5.2", "--part", "5"])), 2);

    let dir = TempDir::new().unwrap();
    let p61 = gen(&dir, "p61.json", &["--id", "thm6.1", "--m", "4", "--n", "4"]);
    let o = potb(&["verify", path_str(&p61), "--claim", "potb"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("FAIL potb"));
    assert_eq!(code(&potb(&["verify", path_str(&p61), "--claim", "piotb(0,1,2,3|4,5,6,7|8,9,10,11|12,13,14,15)"])), 0);
    assert_eq!(code(&potb(&["verify", path_str(&p61), "--claim", "nonsense"])), 3);

    let ragged = dir.path().join("ragged.json");
    std::fs::write(
        &ragged,
        r#"{"version":"1","name":"r","factors":[{"name":"A","levels":["0","1"],"kind":"cyclic"}],
            "blocks":[[["0"],["1"]],[["0"]]],"claims":[]}"#,
    )
    .unwrap();
    assert_eq!(code(&potb(&["verify", path_str(&ragged)])), 3);

    let garbage = dir.path().join("garbage.json");
    std::fs::write(&garbage, "{ not json").unwrap();
    assert_eq!(code(&potb(&["verify", path_str(&garbage)])), 3);
    assert_eq!(code(&potb(&["verify", path_str(&dir.path().join("missing.json"))])), 3);

    let bad_level = dir.path().join("bad_level.json");
    std::fs::write(
        &bad_level,
        r#"{"version":"1","name":"r","factors":[{"name":"A","levels":["0","x"],"kind":"labels"}],
            "blocks":[[["0"]]],"claims":[]}"#,
    )
    .unwrap();
    assert_eq!(code(&potb(&["verify", path_str(&bad_level)])), 3);
}

fn integers_only(v: &serde_json::Value) -> bool {
    match v {
        serde_json::Value::Number(n) => n.is_i64() || n.is_u64(),
        serde_json::Value::Array(a) => a.iter().all(integers_only),
        serde_json::Value::Object(o) => o.values().all(integers_only),
        _ => true,
    }
}

#[test]
fn report_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let file = gen(&dir, "p.json", &["--id", "thm3.1b1", "--s", "10", "--a", "1", "--b", "3"]);
    let (r1, r2) = (dir.path().join("r1.json"), dir.path().join("r2.json"));
    assert_eq!(code(&potb(&["verify", path_str(&file), "--report", path_str(&r1)])), 0);
    assert_eq!(code(&potb(&["verify", path_str(&file), "--report", path_str(&r2)])), 0);
    let (t1, t2) = (std::fs::read_to_string(&r1).unwrap(), std::fs::read_to_string(&r2).unwrap());
    assert_eq!(t1, t2);
    let v: serde_json::Value = serde_json::from_str(&t1).unwrap();
    assert!(integers_only(&v));
    assert_eq!(v["otb"]["potb"], true);
    assert_eq!(v["otb"]["matrix"][0], "1111");
    assert_eq!(v["factors"][0]["design"]["type"], "gdd");
    assert_eq!(v["factors"][0]["design"]["lambda1"], 0);
    assert_eq!(v["factors"][0]["design"]["lambda2"], 1);
}

#[test]
fn table_and_csv_formats() {
    let o = potb(&["gen", "--id", "thm3.2", "--s", "5", "--format", "table"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows.len(), 3);
    for row in &rows {
        let cells: Vec<&str> = row.split('|').map(str::trim).filter(|c| !c.is_empty()).collect();
        assert_eq!(cells.len(), 31, "name plus 30 blocks");
        assert!(cells[1..].iter().all(|c| c.split_whitespace().count() == 2));
    }

    let o = potb(&["gen", "--id", "thm3.2", "--s", "5", "--format", "csv"]);
    let mut reader = csv::Reader::from_reader(o.stdout.as_slice());
    assert_eq!(reader.headers().unwrap(), vec!["block", "run", "factor", "level"]);
    let records: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(records.len(), 30 * 2 * 3);
    assert!(records.iter().any(|r| &r[3] == "inf"));
}

#[test]
fn cyclotomy_oracle_matches_direct_count() {
    // independent count over Z_7 with primitive root 3
    let powers: Vec<u64> = (0..6).scan(1u64, |x, _| {
        let v = *x;
        *x = *x * 3 % 7;
        Some(v)
    })
    .collect();
    let mut expected = [[0u64; 2]; 2];
    for k in 0..6 {
        for l in 0..6 {
            if (1 + powers[k]) % 7 == powers[l] {
                expected[k % 2][l % 2] += 1;
            }
        }
    }
    let o = potb(&["oracle", "cyclotomy", "--q", "7"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    for i in 0..2 {
        for j in 0..2 {
            let line = text.lines().find(|l| l.starts_with(&format!("({i},{j})"))).unwrap();
            let nums: Vec<u64> = line.split_whitespace().skip(1).map(|x| x.parse().unwrap()).collect();
            assert_eq!(nums, [expected[i][j], expected[i][j]], "{line}");
        }
    }
    assert!(text.contains("agree: yes"));
    assert_eq!(code(&potb(&["oracle", "cyclotomy", "--q", "6"])), 2);
    assert_eq!(code(&potb(&["oracle", "cyclotomy", "--q", "8"])), 2);
}

#[test]
fn recount_of_thm32_pair_incidence() {
    let dir = TempDir::new().unwrap();
    let file = gen(&dir, "p32.json", &["--id", "thm3.2", "--s", "5"]);
    let o = potb(&["oracle", "recount", path_str(&file), "--pair", "0,1"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("agrees with library incidence: yes"));
    // reference display lists ∞ first
    let reference = [
        [0, 2, 2, 2, 2, 2],
        [2, 2, 2, 1, 1, 2],
        [2, 2, 2, 2, 1, 1],
        [2, 1, 2, 2, 2, 1],
        [2, 1, 1, 2, 2, 2],
        [2, 2, 1, 1, 2, 2],
    ];
    let rows: Vec<Vec<i64>> = text
        .lines()
        .skip(2)
        .take(6)
        .map(|l| l.split('|').nth(1).unwrap().split_whitespace().map(|x| x.parse().unwrap()).collect())
        .collect();
    let order = [5, 0, 1, 2, 3, 4];
    for a in 0..6 {
        for b in 0..6 {
            assert_eq!(rows[order[a]][order[b]], reference[a][b], "entry ({a},{b})");
        }
    }
    let gram_line = text.lines().skip_while(|l| !l.starts_with("L(A1)")).nth(2).unwrap();
    assert_eq!(gram_line.split('|').nth(1).unwrap().split_whitespace().collect::<Vec<_>>(), ["10", "2", "2", "2", "2", "2"]);
    assert_eq!(code(&potb(&["oracle", "recount", path_str(&file), "--pair", "0,9"])), 3);
}

#[test]
fn oa_check_on_generated_and_corrupted_arrays() {
    let dir = TempDir::new().unwrap();
    let q = dir.path().join("q44.json");
    assert_eq!(code(&potb(&["oracle", "oa-gen", "--hadamard", "4", "--augment", "-o", path_str(&q)])), 0);
    let o = potb(&["oracle", "oa-check", path_str(&q)]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("OA(4, 4, 2, 2) augmented: strength 2 holds"));

    let mut doc = PlanDocument::from_json(&std::fs::read_to_string(&q).unwrap()).unwrap();
    doc.array.as_mut().unwrap().rows[1][2] ^= 1;
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, doc.to_json()).unwrap();
    assert_eq!(code(&potb(&["oracle", "oa-check", path_str(&bad)])), 1);

    let rao = dir.path().join("rao.json");
    assert_eq!(code(&potb(&["oracle", "oa-gen", "--rao", "3,2", "-o", path_str(&rao)])), 0);
    assert!(stdout(&potb(&["oracle", "oa-check", path_str(&rao)])).contains("OA(9, 4, 3, 2)"));

    let p = gen(&dir, "plan.json", &["--id", "ex2.1"]);
    assert_eq!(code(&potb(&["oracle", "oa-check", path_str(&p)])), 3);
}

#[test]
fn golden_diff_reports_errata_without_failing() {
    let dir = TempDir::new().unwrap();
    let file = gen(&dir, "p61.json", &["--id", "thm6.1", "--m", "4", "--n", "4"]);
    let report = dir.path().join("r.json");
    let o = potb(&["verify", path_str(&file), "--golden", "thm6.1", "--report", path_str(&report)]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(report).unwrap()).unwrap();
    let cells = v["errata"]["cells"].as_array().unwrap();
    assert_eq!(cells.len(), 2);
    assert!(cells.iter().all(|c| c["factor"] == "B3" && c["block"] == 4 && c["table"] == "1" && c["generated"] == "0"));
    assert_eq!(v["errata"]["layout"].as_array().unwrap().len(), 1);

    let table = dir.path().join("t.txt");
    std::fs::write(&table, "A | 01 | 10\nB | 01 | 01\n").unwrap();
    let p = dir.path().join("small.json");
    std::fs::write(
        &p,
        r#"{"version":"1","name":"small","factors":[{"name":"A","levels":["0","1"],"kind":"cyclic"},
            {"name":"B","levels":["0","1"],"kind":"cyclic"}],
            "blocks":[[["0","0"],["1","1"]],[["1","0"],["0","1"]]],"claims":["potb"]}"#,
    )
    .unwrap();
    let o = potb(&["verify", path_str(&p), "--golden", path_str(&table)]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("table matches the generated plan"));
    assert_eq!(code(&potb(&["verify", path_str(&p), "--golden", "no-such-table"])), 3);
}

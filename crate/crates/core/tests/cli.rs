use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn beltex(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_beltex"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Relative path -> contents of every file under `dir`.
fn tree(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                let rel = p.strip_prefix(dir).unwrap().to_string_lossy().into_owned();
                out.insert(rel, fs::read(&p).unwrap());
            }
        }
    }
    out
}

const SMALL: &str = r#"{"train_per_class": 20, "test_per_class": 6, "hetero_per_pair": 4, "seed": 5}"#;

#[test]
fn staged_run_matches_the_pipeline() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("cfg.json");
    fs::write(&cfg, SMALL).unwrap();
    let staged = tmp.path().join("staged");
    let whole = tmp.path().join("whole");
    for stage in ["gen", "features", "fit", "score", "fuse", "decide", "report"] {
        let o = beltex(&["--config", path(&cfg), "--out-dir", path(&staged), stage]);
        assert!(o.status.success(), "{stage}: {}", String::from_utf8_lossy(&o.stderr));
    }
    let o = beltex(&["--config", path(&cfg), "--out-dir", path(&whole), "pipeline"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let (a, b) = (tree(&staged), tree(&whole));
    assert_eq!(a.keys().collect::<Vec<_>>(), b.keys().collect::<Vec<_>>());
    for (k, v) in &a {
        assert!(v == &b[k], "{k} differs");
    }
    // 4 homogeneous groups of 6 and 4 mixtures of 4
    let decisions: serde_json::Value =
        serde_json::from_slice(&b["decisions.json"]).unwrap();
    assert_eq!(decisions.as_array().unwrap().len(), 40);
}

#[test]
fn seed_flag_changes_the_images() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("cfg.json");
    fs::write(&cfg, SMALL).unwrap();
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    assert!(beltex(&["--config", path(&cfg), "--out-dir", path(&a), "gen"]).status.success());
    assert!(beltex(&["--config", path(&cfg), "--seed", "6", "--out-dir", path(&b), "gen"]).status.success());
    let name = "images/test-rock-00000.pgm";
    assert_ne!(fs::read(a.join(name)).unwrap(), fs::read(b.join(name)).unwrap());
}

#[test]
fn lattice_stats_writes_the_histogram() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("stats.csv");
    let o = beltex(&["lattice-stats", "--n", "3", "--output", path(&out)]);
    assert!(o.status.success());
    let text = fs::read_to_string(&out).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "cardinality,count");
    let total: usize = rows[1..]
        .iter()
        .map(|r| r.split(',').nth(1).unwrap().parse::<usize>().unwrap())
        .sum();
    assert_eq!(total, 18);
}

#[test]
fn config_errors_exit_with_2() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("cfg.json");
    fs::write(&cfg, r#"{"sed": 3}"#).unwrap();
    let o = beltex(&["--config", path(&cfg), "--out-dir", path(tmp.path()), "gen"]);
    assert_eq!(o.status.code(), Some(2));
    fs::write(&cfg, r#"{"q": 12}"#).unwrap();
    let o = beltex(&["--config", path(&cfg), "--out-dir", path(tmp.path()), "gen"]);
    assert_eq!(o.status.code(), Some(2));
    let o = beltex(&["lattice-stats", "--n", "7", "--out-dir", path(tmp.path())]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn total_conflict_exits_with_3() {
    let tmp = tempfile::tempdir().unwrap();
    let scores = tmp.path().join("scores.csv");
    let params = tmp.path().join("params.json");
    // with alpha = 1 the pair (0,1) commits to class 0 and the pair (0,2) to class 2
    fs::write(&scores, "obs_id,i,j,f\nx,0,1,1e6\nx,0,2,-1e6\nx,1,2,0.5\n").unwrap();
    let pair = |i, j| format!(r#"{{"i":{i},"j":{j},"lambda_p":1.0,"lambda_n":-1.0}}"#);
    fs::write(
        &params,
        format!(r#"{{"alpha":1.0,"pairs":[{},{},{}]}}"#, pair(0, 1), pair(0, 2), pair(1, 2)),
    )
    .unwrap();
    let out = tmp.path().join("m.json");
    let args = [
        "--out-dir",
        path(tmp.path()),
        "fuse",
        "--scores",
        path(&scores),
        "--params",
        path(&params),
        "--output",
        path(&out),
    ];
    let o = beltex(&[&args[..], &["--algebra", "power"]].concat());
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
    // the free model has no conflict
    let o = beltex(&[&args[..], &["--algebra", "hyper"]].concat());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let docs: serde_json::Value = serde_json::from_slice(&fs::read(&out).unwrap()).unwrap();
    assert_eq!(docs["x"]["algebra"], "hyper");
}

#[test]
fn decide_on_a_single_mass_document() {
    let tmp = tempfile::tempdir().unwrap();
    let mass = tmp.path().join("m.json");
    fs::write(
        &mass,
        r#"{"frame":["C1","C2","C3"],"algebra":"power","focal":[
            {"element":"C1","mass":0.4},{"element":"C2","mass":0.35},{"element":"C3","mass":0.25}]}"#,
    )
    .unwrap();
    let run = |rule: &str| {
        let o = beltex(&["decide", "--mass", path(&mass), "--rule", rule]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        serde_json::from_slice::<serde_json::Value>(&o.stdout).unwrap()
    };
    assert_eq!(run("max-bel-reject")["verdict"], "REJECT");
    assert_eq!(run("pignistic")["verdict"], "C1");
    assert_eq!(run("cardinality4")["verdict"], "C1&C2|C1&C3|C2&C3");
    let o = beltex(&["decide", "--mass", path(&mass), "--rule", "hyper-weighted"]);
    // plausibility is the default decision function and is refused on D^Θ
    assert_eq!(o.status.code(), Some(2));
    let o = beltex(&["decide", "--mass", path(&mass), "--rule", "nonsense"]);
    assert_eq!(o.status.code(), Some(2));
}

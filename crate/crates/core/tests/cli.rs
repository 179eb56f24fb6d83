use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(rel)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cogsheaf")).args(args).output().unwrap()
}

fn run_on(args: &[&str], path: &Path) -> Output {
    let mut all = args.to_vec();
    all.push(path.to_str().unwrap());
    run(&all)
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn validate_passes_every_shipped_file() {
    let mut args = vec!["validate".to_string()];
    for name in ["fix-triv", "fix-seg", "fix-tri", "fix-circ"] {
        for f in fs::read_dir(fixture(name)).unwrap() {
            let p = f.unwrap().path();
            if !p.to_str().unwrap().contains("broken") {
                args.push(p.to_str().unwrap().into());
            }
        }
    }
    let refs: Vec<&str> = args.iter().map(String::as_str).collect();
    let o = run(&refs);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
}

#[test]
fn validate_names_the_broken_pair() {
    let o = run_on(&["validate", "--report", "json"], &fixture("fix-tri/bundle-broken.json"));
    assert_eq!(code(&o), 1);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], false);
    let violations = &v["files"][0]["reports"][1]["violations"];
    assert_eq!(violations[0]["rule"], "twist-compatibility");
    assert_eq!(violations[0]["location"], "(0, 6)");
}

#[test]
fn truncated_file_is_an_input_failure_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let text = fs::read_to_string(fixture("fix-seg/complex.json")).unwrap();
    let path = dir.path().join("complex.json");
    fs::write(&path, &text[..text.len() / 2]).unwrap();
    let o = run_on(&["validate"], &path);
    assert_eq!(code(&o), 2);
    let err = stderr(&o);
    let pos = err.split("complex.json:").nth(1).unwrap();
    let mut parts = pos.split(':');
    assert!(parts.next().unwrap().parse::<usize>().is_ok(), "{err}");
    assert!(parts.next().unwrap().parse::<usize>().is_ok(), "{err}");
}

#[test]
fn invalid_group_table_is_a_semantic_failure() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.json");
    fs::write(&path, r#"{"kind": "group", "version": 1, "name": "bad", "table": [[0, 1], [1, 1]]}"#).unwrap();
    assert_eq!(code(&run_on(&["validate"], &path)), 1);
}

#[test]
fn develop_regular_sheaf_writes_a_true_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cert.json");
    let o = run(&["develop", fixture("fix-seg/bundle.json").to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let cert: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(cert["kind"], "certificate");
    assert_eq!(cert["verdict"], true);
    let id: Vec<Vec<String>> =
        (0..12).map(|r| (0..12).map(|c| if r == c { "1" } else { "0" }.to_string()).collect()).collect();
    for a in cert["arrow_images"].as_array().unwrap() {
        let m: Vec<Vec<String>> = serde_json::from_value(a.clone()).unwrap();
        assert_eq!(m, id);
    }
}

#[test]
fn develop_trivial_sheaf_fails_on_injectivity() {
    let o = run_on(&["develop"], &fixture("fix-seg/bundle-trivial.json"));
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("reason: fails injectivity"), "{}", stdout(&o));
}

#[test]
fn develop_disconnected_is_an_input_failure() {
    let o = run_on(&["develop"], &fixture("disconnected/bundle.json"));
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("DisconnectedScwol"), "{}", stderr(&o));
}

#[test]
fn sheaf_from_morphism_writes_rank_twelve() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sheaf.json");
    let o = run(&["sheaf-from-morphism", fixture("fix-seg/bundle.json").to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let sheaf: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(sheaf["dims"], serde_json::json!([12, 12, 12]));
    assert_eq!(code(&run_on(&["dev-check"], &out)), 0);
    assert_eq!(code(&run_on(&["validate"], &out)), 0);
}

#[test]
fn collapsed_morphism_reports_a_kernel() {
    let o = run_on(&["sheaf-from-morphism", "--report", "json"], &fixture("fix-seg/bundle-collapsed.json"));
    assert_eq!(code(&o), 1);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let inj = &v["dev_report"]["injective_on_local_groups"];
    assert_eq!(inj["holds"], false);
    assert_eq!(inj["counterexample"], serde_json::json!([0, 1]));
    assert_eq!(cogsheaf::fixtures::fix_seg().complex.group(cogsheaf::scwol::ObjectId(0)).element_order(1), 4);
    assert_eq!(v["warnings"]["violations"][0]["rule"], "injective");
}

#[test]
fn missing_group_file_is_an_input_failure() {
    let dir = tempfile::tempdir().unwrap();
    for f in ["bundle.json", "complex.json", "cell-complex.json", "sheaf.json", "morphism.json", "group-v-z12.json", "group-w-z12.json", "group-e0-z12.json"] {
        fs::copy(fixture("fix-seg").join(f), dir.path().join(f)).unwrap();
    }
    let o = run_on(&["sheaf-from-morphism"], &dir.path().join("bundle.json"));
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("group-z12.json"), "{}", stderr(&o));
}

#[test]
fn sheaf_from_then_develop_composes() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["fix-triv", "fix-seg", "fix-tri"] {
        let d = dir.path().join(name);
        fs::create_dir_all(&d).unwrap();
        let sheaf = d.join("sheaf.json");
        let o = run(&["sheaf-from-morphism", fixture(name).join("bundle.json").to_str().unwrap(), "--out", sheaf.to_str().unwrap()]);
        assert_eq!(code(&o), 0, "{name}: {}", stderr(&o));
        let v: Value = serde_json::from_str(&fs::read_to_string(&sheaf).unwrap()).unwrap();
        let bundle = serde_json::json!({"kind": "bundle", "version": 1, "name": "composed", "complex": v["complex"], "sheaf": "sheaf.json"});
        fs::write(d.join("bundle.json"), bundle.to_string()).unwrap();
        let o = run_on(&["develop"], &d.join("bundle.json"));
        assert_eq!(code(&o), 0, "{name}: {}{}", stdout(&o), stderr(&o));
    }
}

#[test]
fn bh_cat_dumps_the_category() {
    let o = run_on(&["bh-cat", "--table", "--report", "json"], &fixture("fix-triv/complex.json"));
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["kind"], "bh-category");
    assert_eq!(v["arrows"].as_array().unwrap().len(), 2);
    assert_eq!(v["composition"].as_array().unwrap().len(), 4);
}

#[test]
fn field_flag_reparses_entries() {
    let o = run_on(&["develop", "--field", "Fp:5", "--report", "json"], &fixture("fix-circ/bundle.json"));
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["field"], "Fp:5");
    assert_eq!(code(&run_on(&["develop", "--field", "Fp:2"], &fixture("fix-circ/bundle.json"))), 1);
    assert_eq!(code(&run_on(&["develop", "--field", "nope"], &fixture("fix-circ/bundle.json"))), 2);
}

#[test]
fn fixtures_command_writes_the_shipped_tree() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&run(&["fixtures", "--out", dir.path().to_str().unwrap()])), 0);
    let a = fs::read_to_string(dir.path().join("fix-tri/sheaf.json")).unwrap();
    assert_eq!(a, fs::read_to_string(fixture("fix-tri/sheaf.json")).unwrap());
    assert_eq!(code(&run(&["fixtures"])), 2);
}

mod common;

use common::{args, corpus, corpus_inputs, filtra, golden_commands};
use filtra::cliio::{parse, serialize, Object};
use filtra::exactla::HomologyModule;
use serde_json::Value;

fn stdout_json(out: &std::process::Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("JSON output")
}

fn stderr_json(out: &std::process::Output) -> Value {
    assert!(!out.status.success());
    serde_json::from_slice(&out.stderr).expect("JSON error document")
}

/// Set `FILTRA_BLESS=1` to rewrite the golden files.
#[test]
fn golden_outputs() {
    let bless = std::env::var_os("FILTRA_BLESS").is_some();
    for (name, argv) in golden_commands() {
        let out = filtra(&argv, None);
        assert!(out.status.success(), "{name}: {}", String::from_utf8_lossy(&out.stderr));
        let path = corpus().join("golden").join(&name);
        if bless {
            std::fs::write(&path, &out.stdout).unwrap();
            continue;
        }
        let want = std::fs::read(&path).unwrap_or_else(|_| panic!("missing golden {name}"));
        assert!(out.stdout == want, "{name} differs from its golden file");
    }
}

#[test]
fn corpus_is_canonical() {
    for path in corpus_inputs() {
        let text = std::fs::read_to_string(&path).unwrap();
        let object = parse(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(serialize(&object), text, "{} is not canonical", path.display());
    }
}

#[test]
fn check_passes_on_corpus() {
    for path in corpus_inputs() {
        let out = filtra(&[String::from("check"), path.display().to_string()], None);
        assert_eq!(out.status.code(), Some(0), "{}", path.display());
        assert_eq!(stdout_json(&out)["payload"]["passed"], Value::Bool(true));
    }
}

#[test]
fn gr_of_times_two_has_two_torsion_in_weight_zero() {
    let doc = stdout_json(&filtra(&args("gr times_two.json"), None));
    let Object::Graded(g) = parse(&doc.to_string()).unwrap() else { panic!("expected a graded document") };
    assert_eq!(g.piece(0).homology(0).torsion, vec![2.into()]);
    assert_eq!(g.piece(1).homology(0), HomologyModule::free(g.ring(), 1));
}

#[test]
fn second_page_of_two_step_is_one_copy_of_z_mod_two() {
    let doc = stdout_json(&filtra(&args("ss two_step.json --pages 2"), None));
    let entries = doc["payload"]["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 1);
    assert_eq!(entries[0]["total_degree"], 0);
    assert_eq!(entries[0]["module"]["torsion"], serde_json::json!(["2"]));
    assert_eq!(doc["payload"]["r_stab"], 2);
}

#[test]
fn rees_round_trip_through_files() {
    let dir = std::env::temp_dir().join(format!("filtra-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let rees = dir.join("m.json");
    let back = dir.join("x.json");
    for name in ["times_two.json", "two_step.json", "cellular.json", "rational.json", "mod_two.json"] {
        let to = vec!["rees".into(), "to".into(), name.into(), "--output".into(), rees.display().to_string()];
        assert!(filtra(&to, None).status.success());
        let from = vec!["rees".into(), "from".into(), rees.display().to_string(), "-o".into(), back.display().to_string()];
        assert!(filtra(&from, None).status.success());
        assert_eq!(std::fs::read(&back).unwrap(), std::fs::read(corpus().join(name)).unwrap(), "{name}");
    }
    std::fs::remove_dir_all(&dir).unwrap();
}

fn write_temp(name: &str, text: &str) -> std::path::PathBuf {
    let path = std::env::temp_dir().join(format!("filtra-{}-{name}", std::process::id()));
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn bad_dimensions_name_the_weight_and_degree() {
    let path = write_temp(
        "dims.json",
        r#"{"format_version":"1","ring":"z","kind":"graded_complex","payload":{"pieces":{"3":{"ranks":{"0":1,"1":2},"differentials":{"1":[["1"]]}}}}}"#,
    );
    let err = stderr_json(&filtra(&[String::from("homology"), path.display().to_string()], None));
    assert_eq!(err["kind"], "error");
    assert_eq!(err["payload"]["error"], "schema");
    assert_eq!(err["payload"]["path"], "payload.pieces.3.differentials.1");
    assert!(err["payload"]["message"].as_str().unwrap().contains("1x2"));
}

#[test]
fn nonzero_square_names_the_degree_pair() {
    let path = write_temp(
        "square.json",
        r#"{"format_version":"1","ring":"z","kind":"chain_complex","payload":{"ranks":{"0":1,"1":1,"2":1},"differentials":{"1":[["1"]],"2":[["3"]]}}}"#,
    );
    let err = stderr_json(&filtra(&[String::from("homology"), path.display().to_string()], None));
    let message = err["payload"]["message"].as_str().unwrap();
    assert!(message.contains("d_1 ∘ d_2"), "{message}");
}

#[test]
fn non_chain_structure_map_is_rejected() {
    let path = write_temp(
        "map.json",
        r#"{"format_version":"1","ring":"z","kind":"filtered_complex","tail":"zero","payload":{"levels":{"0":{"ranks":{"0":1,"1":1},"differentials":{"1":[["1"]]}},"1":{"ranks":{"1":1}}},"maps":{"1":{"1":[["1"]]}}}}"#,
    );
    let err = stderr_json(&filtra(&[String::from("gr"), path.display().to_string()], None));
    assert_eq!(err["payload"]["path"], "payload.maps.1");
    assert!(err["payload"]["message"].as_str().unwrap().contains("degree 1"));
}

#[test]
fn wrong_kind_and_missing_file_are_errors() {
    let err = stderr_json(&filtra(&args("rees from times_two.json"), None));
    assert_eq!(err["payload"]["path"], "kind");
    let err = stderr_json(&filtra(&args("gr no_such_file.json"), None));
    assert_eq!(err["payload"]["error"], "io");
    let err = stderr_json(&filtra(&args("ss two_step.json --pages 0"), None));
    assert_eq!(err["payload"]["path"], "--pages");
    let err = stderr_json(&filtra(&args("gr rational.json --ring z"), None));
    assert_eq!(err["payload"]["error"], "unsupported");
}

#[test]
fn serre_convention_reindexes() {
    let doc = stdout_json(&filtra(&args("ss two_step.json --pages 1 --convention serre"), None));
    let entries = doc["payload"]["entries"].as_array().unwrap();
    for e in entries {
        assert_eq!(e["p"].as_i64().unwrap() + e["q"].as_i64().unwrap(), -e["total_degree"].as_i64().unwrap());
    }
}

#[test]
fn non_cellular_filtered_tensor_warns_on_stderr_only() {
    let warned = filtra(&args("tensor filtered times_two.json times_two.json"), None);
    assert!(warned.status.success());
    assert!(String::from_utf8_lossy(&warned.stderr).starts_with("warning: "));
    let quiet = filtra(&args("tensor filtered cellular.json cellular.json"), None);
    assert!(quiet.status.success());
    assert!(quiet.stderr.is_empty());
}

use eqdescent::fixtures::{self, EXAMPLE_NAMES};
use eqdescent_cli::model::{emit_model, parse_bundle, ModelBundle};
use eqdescent_cli::run_args;
use std::path::PathBuf;

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("eqdescent-cli-tests-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn write(name: &str, body: &str) -> String {
    let p = scratch(name);
    std::fs::write(&p, body).unwrap();
    p.display().to_string()
}

fn run(args: &[&str]) -> (String, i32) {
    let mut v = vec!["eqdescent"];
    v.extend_from_slice(args);
    run_args(v)
}

fn emitted(name: &str) -> String {
    let path = scratch(&format!("{name}.json")).display().to_string();
    let (out, code) = run(&["example", name, "--out", &path]);
    assert_eq!(code, 0, "{out}");
    path
}

#[test]
fn emitted_models_round_trip_to_the_fixtures() {
    for name in EXAMPLE_NAMES {
        let text = serde_json::to_string_pretty(&emit_model(name).unwrap()).unwrap();
        let parsed = parse_bundle(&[(format!("{name}.json"), text)]).unwrap();
        let fx = ModelBundle::from(fixtures::by_name(name).unwrap());
        assert_eq!(parsed.site, fx.site, "{name}: site");
        assert_eq!(parsed.group, fx.group, "{name}: group");
        assert_eq!(parsed.sheaf, fx.sheaf, "{name}: sheaf");
        assert_eq!(parsed.gtorsor, fx.gtorsor, "{name}: gtorsor");
        assert_eq!(parsed.coefficients, fx.coefficients, "{name}: coefficients");
        match (&parsed.cover, &fx.cover) {
            (Some(a), Some(b)) => {
                assert_eq!(a.map.source, b.map.source, "{name}: cover poset");
                assert_eq!(a.map.map, b.map.map, "{name}: cover map");
                assert_eq!(a.deck, b.deck, "{name}: deck");
            }
            (None, None) => {}
            _ => panic!("{name}: cover presence differs"),
        }
        // emitting the parsed bundle again is a fixed point
        let again = eqdescent_cli::model::bundle_json(&parsed);
        assert_eq!(again, emit_model(name).unwrap(), "{name}: second emission");
    }
}

#[test]
fn interval_branched_first_cohomology_is_z2() {
    let m = emitted("interval-branched");
    let (out, code) = run(&["--model", &m, "sheaf-cohomology", "--degree", "1"]);
    assert_eq!(code, 0);
    assert!(out.contains("group: Z/2"), "{out}");
}

#[test]
fn sphere_branched_les_check_flags_the_gerbe_node() {
    let m = emitted("sphere-branched");
    let (out, code) = run(&["--model", &m, "les-check"]);
    assert_eq!(code, 0);
    assert!(out.contains("node H2(X,A)^G: image=Z kernel=Z exact=no"), "{out}");
    assert!(out.contains("certificate: kernel element (1) is not in the image"), "{out}");
}

#[test]
fn circle_cover_les_check_is_exact_everywhere() {
    let m = emitted("circle-cover");
    let (out, code) = run(&["--model", &m, "les-check"]);
    assert_eq!(code, 0);
    let nodes: Vec<&str> = out.lines().filter(|l| l.starts_with("node ")).collect();
    assert_eq!(nodes.len(), 7);
    assert!(nodes.iter().all(|l| l.ends_with("exact=yes")), "{out}");
    assert!(out.contains("all_exact: yes"));
}

#[test]
fn hs_compare_matches_on_cover_models() {
    for name in ["circle-cover", "sphere-cover"] {
        let m = emitted(name);
        let (out, code) = run(&["--model", &m, "hs-compare"]);
        assert_eq!(code, 0, "{out}");
        assert!(out.contains("all_match: yes"), "{name}: {out}");
    }
}

#[test]
fn hs_compare_without_a_torsor_is_a_validation_error() {
    let m = emitted("interval-branched");
    let (out, code) = run(&["--model", &m, "hs-compare"]);
    assert_eq!(code, 1);
    assert!(out.contains("gtorsor"), "{out}");
}

#[test]
fn local_vanishing_names_the_endpoints() {
    let (out, code) = run(&["--example", "interval-branched", "local-vanishing", "--degree", "1"]);
    assert_eq!(code, 0);
    assert!(out.contains("failing: P,Q"), "{out}");
    assert!(out.contains("point I: group=0 vanishes=yes"), "{out}");
}

#[test]
fn group_cohomology_reports_pole_stalks() {
    let (out, _) = run(&["--example", "sphere-branched", "group-cohomology", "--degree", "2"]);
    assert!(out.contains("point N: Z/2") && out.contains("point S: Z/2"), "{out}");
    let (out, _) = run(&["--example", "sphere-branched", "group-cohomology", "--degree", "3"]);
    assert!(out.contains("global: 0"), "{out}");
}

#[test]
fn torsor_obstruction_is_zero_but_not_induced() {
    let c = write("ib-class.json", r#"{"degree": 1, "class": [1]}"#);
    for seed in ["0", "1", "2"] {
        let (out, code) = run(&["--example", "interval-branched", "--seed", seed, "torsor-obstruction", "--cocycle", &c, "--perturb"]);
        assert_eq!(code, 0, "{out}");
        assert!(out.contains("zero: yes"), "{out}");
    }
    let (out, code) = run(&["--example", "interval-branched", "induced-check", "--degree", "1", "--cocycle", &c]);
    assert_eq!(code, 0);
    assert!(out.contains("induced: no"), "{out}");
    assert!(out.contains("local_failures: P,Q"), "{out}");
}

#[test]
fn gerbe_obstruction_is_zero_but_not_induced() {
    let c = write("sb-class.json", r#"{"degree": 2, "class": [1]}"#);
    let (out, code) = run(&["--example", "sphere-branched", "gerbe-obstruction", "--cocycle", &c, "--perturb", "--seed", "5"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("zero: yes"), "{out}");
    let (out, _) = run(&["--example", "sphere-branched", "induced-check", "--degree", "2", "--cocycle", &c]);
    assert!(out.contains("induced: no"), "{out}");
}

const SIGN_CIRCLE: &str = r#"{"poset": {"points": ["a","b","c","d"], "leq": [["a","c"],["a","d"],["b","c"],["b","d"]]},
 "group": {"elements": ["e","s"], "table": [["e","s"],["s","e"]]},
 "sheaf": {"stalks": {"a": {"rank":1},"b": {"rank":1},"c": {"rank":1},"d": {"rank":1}},
   "restrictions": {"a<=c": [[1]], "a<=d": [[1]], "b<=c": [[1]], "b<=d": [[1]]},
   "action": {"s": {"a": [[-1]], "b": [[-1]], "c": [[-1]], "d": [[-1]]}}}}"#;

#[test]
fn unstable_class_exits_with_status_two() {
    // sign action on the circle negates the generator of H^1 = Z
    let m = write("sign-circle.json", SIGN_CIRCLE);
    let (out, code) = run(&["--model", &m, "sheaf-cohomology", "--degree", "1"]);
    assert_eq!(code, 0);
    assert!(out.contains("group: Z"), "{out}");
    for (file, body) in [("sign-class.json", r#"{"degree": 1, "class": [1]}"#), ("sign-values.json", r#"{"degree": 1, "values": {"a<c": [1]}}"#)] {
        let c = write(file, body);
        let (out, code) = run(&["--model", &m, "torsor-obstruction", "--cocycle", &c]);
        assert_eq!(code, 2, "{out}");
        assert!(out.contains("moved by group element"), "{out}");
    }
    // the zero class is stable
    let c = write("sign-zero.json", r#"{"degree": 1, "class": [0]}"#);
    let (out, code) = run(&["--model", &m, "torsor-obstruction", "--cocycle", &c]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("zero: yes"));
}

#[test]
fn cochain_on_a_missing_chain_is_rejected() {
    let c = write("bad-chain.json", r#"{"degree": 1, "values": {"c<a": [1]}}"#);
    let m = write("sign-circle2.json", SIGN_CIRCLE);
    let (out, code) = run(&["--model", &m, "torsor-obstruction", "--cocycle", &c]);
    assert_eq!(code, 1, "{out}");
    assert!(out.contains("c<a"), "{out}");
}

#[test]
fn malformed_inputs_name_field_and_position() {
    let m = write("bad-json.json", "{\n  \"poset\": {\"points\": [\"a\",]\n}");
    let (out, code) = run(&["--model", &m, "les-check"]);
    assert_eq!(code, 1);
    assert!(out.contains("bad-json.json:2:"), "{out}");

    let m = write("bad-leq.json", "{\n  \"poset\": {\"points\": [\"a\"], \"leq\": [[\"a\", \"zz\"]]},\n  \"sheaf\": {\"stalks\": {}}\n}");
    let (out, code) = run(&["--model", &m, "les-check"]);
    assert_eq!(code, 1);
    assert!(out.contains("field `poset.leq`") && out.contains("bad-leq.json:2:"), "{out}");

    let m = write(
        "bad-matrix.json",
        r#"{"poset": {"points": ["a", "b"], "leq": [["a", "b"]]},
"sheaf": {"stalks": {"a": {"rank": 1}, "b": {"rank": 1}}, "restrictions": {"a<=b": [[1, 2]]}}}"#,
    );
    let (out, code) = run(&["--model", &m, "sheaf-cohomology", "--degree", "0"]);
    assert_eq!(code, 1);
    assert!(out.contains("field `sheaf.restrictions.a<=b`") && out.contains("bad-matrix.json:2:"), "{out}");
}

#[test]
fn cyclic_poset_is_rejected() {
    let m = write(
        "cycle.json",
        r#"{"poset": {"points": ["a", "b"], "leq": [["a", "b"], ["b", "a"]]}, "sheaf": {"stalks": {"a": {}, "b": {}}}}"#,
    );
    let (out, code) = run(&["--model", &m, "sheaf-cohomology", "--degree", "0"]);
    assert_eq!(code, 1);
    assert!(out.contains("invalid poset"), "{out}");
}

#[test]
fn models_split_across_files_merge() {
    let a = write("split-a.json", r#"{"poset": {"points": ["P", "Q", "I"], "leq": [["P", "I"], ["Q", "I"]]}}"#);
    let b = write("split-b.json", r#"{"sheaf": {"stalks": {"P": {"rank": 1}, "Q": {"rank": 1}, "I": {"rank": 1}}, "restrictions": {"P<=I": [[1]], "Q<=I": [[1]]}}, "task": {"degree": 0}}"#);
    let (out, code) = run(&["--model", &a, "--model", &b, "sheaf-cohomology"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("degree: 0") && out.contains("group: Z"), "{out}");
}

#[test]
fn json_reports_use_the_text_field_names() {
    let (text, _) = run(&["--example", "circle-cover", "sheaf-cohomology", "--degree", "1"]);
    let (js, _) = run(&["--json", "--example", "circle-cover", "sheaf-cohomology", "--degree", "1"]);
    let v: serde_json::Value = serde_json::from_str(&js).unwrap();
    for line in text.lines() {
        let (k, val) = line.split_once(": ").unwrap();
        assert_eq!(v[k].to_string().trim_matches('"'), val);
    }
    let (js, _) = run(&["--json", "--example", "sphere-branched", "les-check"]);
    let v: serde_json::Value = serde_json::from_str(&js).unwrap();
    assert_eq!(v["gerbe_node"]["exact"], serde_json::json!(false));
    assert_eq!(v["nodes"].as_array().unwrap().len(), 6);
}

#[test]
fn unknown_example_is_a_validation_error() {
    let (out, code) = run(&["example", "torus"]);
    assert_eq!(code, 1);
    assert!(out.contains("torus"));
}

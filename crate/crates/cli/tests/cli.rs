use std::path::{Path, PathBuf};
use std::process::Command as Process;

use serde_json::{json, Value};

use tropmoduli::family::{fiber, validate_family, wall_verdicts};
use tropmoduli::io::{
    read_complex, read_curve, read_enumeration, read_family, read_pair, read_type, read_types, ComplexDoc, CurveDoc,
    TypeDoc, TypesDoc,
};
use tropmoduli::linalg::{ratio, RatVector};
use tropmoduli::moduli::{canonical_form, classify, enumerate_types, resolve_4valent, wall_graph, WallKind};
use tropmoduli::polyhedral::{build_skeleton, validate_complex};
use tropmoduli_cli::{emit, execute, parse_command, CliError, Format, Report, Status, Verb};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn text(name: &str) -> String {
    std::fs::read_to_string(fixture(name)).unwrap()
}

fn run(args: &[&str]) -> Report {
    execute(&parse_command(args).unwrap())
}

fn path(name: &str) -> String {
    fixture(name).to_str().unwrap().to_string()
}

fn binary(args: &[&str]) -> (i32, String) {
    let out = Process::new(env!("CARGO_BIN_EXE_tropmoduli"))
        .args(args)
        .output()
        .unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

#[test]
fn parses_verbs_and_flags() {
    let c = parse_command(["validate-complex", "c.json"]).unwrap();
    assert!(matches!(&c.verb, Verb::ValidateComplex { complex } if complex == Path::new("c.json")));
    assert_eq!((c.seed, c.format), (0, Format::Json));

    let c = parse_command(["resolve", "type.json", "--vertex", "v3"]).unwrap();
    assert!(matches!(&c.verb, Verb::Resolve { vertex: Some(v), .. } if v == "v3"));

    let c = parse_command(["fiber", "f.json", "--face", "r0", "--point", "-1/2", "--seed", "7"]).unwrap();
    assert!(matches!(&c.verb, Verb::Fiber { point, .. } if point == "-1/2"));
    assert_eq!(c.seed, 7);

    assert!(matches!(parse_command(["fiber"]), Err(CliError::MissingInput(_))));
    assert!(matches!(parse_command(["frobnicate"]), Err(CliError::UnknownVerb(_))));
    assert!(matches!(
        parse_command(["enumerate", "s.json", "--threads", "x"]),
        Err(CliError::Usage(_))
    ));
}

#[test]
fn validate_complex_matches_library() {
    let r = run(&["validate-complex", &path("segment_ok.json")]);
    assert_eq!(r.status, Status::Ok);
    let lib = validate_complex(&read_complex(&text("segment_ok.json")).unwrap());
    assert_eq!(r.payload, json!({ "violations": lib.violations }));

    let r = run(&["validate-complex", &path("index_two.json")]);
    assert_eq!(r.status, Status::Violations);
    let lib = validate_complex(&read_complex(&text("index_two.json")).unwrap());
    assert_eq!(r.payload, json!({ "violations": lib.violations }));
    assert!(!lib.is_valid());
}

#[test]
fn skeleton_matches_library() {
    let r = run(&["skeleton", &path("triangle_pair.json")]);
    let sk = build_skeleton(&read_pair(&text("triangle_pair.json")).unwrap()).unwrap();
    assert_eq!(r.status, Status::Ok);
    assert_eq!(
        r.payload["complex"],
        serde_json::to_value(ComplexDoc::from_complex(&sk)).unwrap()
    );
    assert_eq!(r.payload["complex"]["faces"].as_array().unwrap().len(), 7);
}

#[test]
fn validate_curve_matches_library() {
    for (name, status) in [
        ("tripod_curve.json", Status::Ok),
        ("unbalanced_curve.json", Status::Violations),
    ] {
        let r = run(&["validate-curve", &path(name)]);
        let lib = read_curve(&text(name)).unwrap().validate();
        assert_eq!(r.status, status, "{name}");
        assert_eq!(r.payload, json!({ "violations": lib.violations }));
    }
}

#[test]
fn enumerate_matches_library() {
    let r = run(&["enumerate", &path("enumerate_cross.json")]);
    let types = enumerate_types(&read_enumeration(&text("enumerate_cross.json")).unwrap()).unwrap();
    assert_eq!(r.payload, serde_json::to_value(TypesDoc::new(&types)).unwrap());
    assert_eq!(types.len(), 4);
}

#[test]
fn classify_and_resolve_match_library() {
    let t = read_type(&text("cross.json")).unwrap();
    let r = run(&["classify", &path("cross.json")]);
    assert_eq!(r.payload["canonical"], json!(canonical_form(&t)));
    assert_eq!(r.payload["kind"], json!("WeightlessAlmost3Valent"));
    assert_eq!(r.payload["stratum_dim"], json!(2));

    let r = run(&["resolve", &path("cross.json")]);
    let lib = resolve_4valent(&t, classify(&t).four_valent_vertex.unwrap()).unwrap();
    let keys: Vec<Value> = lib.iter().map(|x| json!(canonical_form(&x.ty))).collect();
    let got: Vec<Value> = r.payload["resolutions"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x["canonical"].clone())
        .collect();
    assert_eq!(got, keys);
    for (entry, res) in r.payload["resolutions"].as_array().unwrap().iter().zip(&lib) {
        assert_eq!(
            entry["type"],
            serde_json::to_value(TypeDoc::from_type(&res.ty)).unwrap()
        );
    }

    let r = run(&["resolve", &path("cross.json"), "--vertex", "nope"]);
    assert_eq!(
        (r.status, r.payload["error"]["pointer"].clone()),
        (Status::Error, json!("/vertex"))
    );
}

#[test]
fn wallgraph_matches_library() {
    let r = run(&["enumerate", &path("enumerate_line.json")]);
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("cli-wallgraph");
    std::fs::create_dir_all(&dir).unwrap();
    let types_path = dir.join("types.json");
    std::fs::write(&types_path, emit(&r, Format::Json)).unwrap();

    let g = run(&["wallgraph", types_path.to_str().unwrap()]);
    let types = read_types(&std::fs::read_to_string(&types_path).unwrap()).unwrap();
    let nodes: Vec<_> = types
        .into_iter()
        .filter(|t| classify(t).kind == WallKind::Weightless3Valent)
        .collect();
    let wg = wall_graph(&nodes).unwrap();
    let keys: Vec<Value> = g.payload["nodes"]
        .as_array()
        .unwrap()
        .iter()
        .map(|n| n["canonical"].clone())
        .collect();
    assert_eq!(keys, wg.node_keys.iter().map(|k| json!(k)).collect::<Vec<_>>());
    assert_eq!(g.payload["walls"].as_array().unwrap().len(), wg.walls.len());
    assert_eq!(g.summary, "15 nodes, 10 walls");

    let p = run(&["propagate", types_path.to_str().unwrap(), &path("seeds_one.json")]);
    assert_eq!(p.status, Status::Error, "the seed has a different degree");
}

#[test]
fn family_verbs_match_library() {
    let f = read_family(&text("family_ray.json"), Some(&fixture(""))).unwrap();
    let r = run(&["validate-family", &path("family_ray.json")]);
    assert_eq!(r.payload, json!({ "violations": validate_family(&f).violations }));

    let r = run(&["fiber", &path("family_ray.json"), "--face", "r0", "--point", "5/2"]);
    let curve = fiber(&f, 1, &RatVector(vec![ratio(5, 2)])).unwrap();
    assert_eq!(
        r.payload["curve"],
        serde_json::to_value(CurveDoc::from_curve(&curve)).unwrap()
    );
    assert_eq!(r.payload["curve"]["lengths"]["e"], json!("5/2"));

    let r = run(&["fiber", &path("family_ray.json"), "--face", "r0", "--point", "0/1"]);
    assert_eq!(r.payload["face"], json!("o"));

    let r = run(&["fiber", &path("family_ray.json"), "--face", "r0", "--point", "-1/1"]);
    assert_eq!(r.status, Status::Error);

    let r = run(&["verdicts", &path("family_three_rays.json")]);
    let three = read_family(&text("family_three_rays.json"), Some(&fixture(""))).unwrap();
    let lib = wall_verdicts(&three).unwrap();
    let list = r.payload["verdicts"].as_array().unwrap();
    assert_eq!(list.len(), lib.len());
    assert_eq!(list[0]["verdict"], json!(lib[0].verdict));
    assert_eq!(list[0]["verified"], json!(true));

    let r = run(&["alpha", &path("family_ray.json")]);
    let dims: Vec<(u64, u64)> = r.payload["strata"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| (s["dim"].as_u64().unwrap(), s["stratum_dim"].as_u64().unwrap()))
        .collect();
    let mut sorted = dims.clone();
    sorted.sort();
    assert_eq!(sorted, vec![(0, 2), (1, 3)]);
}

#[test]
fn verdicts_report_the_three_cases() {
    for (name, verdict) in [
        ("family_two_rays.json", "Harmonic"),
        ("family_three_rays.json", "LocallyCombinatoriallySurjective"),
        ("family_ray.json", "Inconclusive"),
    ] {
        let r = run(&["verdicts", &path(name), "--face", "o"]);
        assert_eq!(r.status, Status::Ok, "{name}");
        assert_eq!(r.payload["verdicts"][0]["verdict"], json!(verdict), "{name}");
    }
    let r = run(&["verdicts", &path("family_ray.json")]);
    assert_eq!(r.payload["verdicts"][0]["uncovered"].as_array().unwrap().len(), 2);
}

#[test]
fn errors_carry_json_pointers() {
    let r = run(&["validate-family", &path("tripod_curve.json")]);
    assert_eq!(r.status, Status::Error);
    assert!(r.payload["error"]["pointer"].is_string());
    let r = run(&["validate-complex", "/nonexistent/complex.json"]);
    assert_eq!(r.status, Status::Error);
}

#[test]
fn exit_codes() {
    assert_eq!(binary(&["validate-complex", &path("segment_ok.json")]).0, 0);
    assert_eq!(binary(&["validate-complex", &path("index_two.json")]).0, 1);
    assert_eq!(binary(&["validate-family", &path("family_ray_shifted.json")]).0, 1);
    assert_eq!(binary(&["validate-curve", "/nonexistent.json"]).0, 2);
    assert_eq!(binary(&["fiber"]).0, 2);
    assert_eq!(binary(&["frobnicate"]).0, 2);
    assert_eq!(binary(&["--help"]).0, 0);
}

#[test]
fn output_is_deterministic() {
    let args = ["classify", &path("cross.json"), "--samples", "3", "--seed", "11"];
    let (code, first) = binary(&args);
    assert_eq!(code, 0);
    assert_eq!(binary(&args).1, first);
    let v: Value = serde_json::from_str(&first).unwrap();
    assert_eq!(v["schema"], json!("tropmoduli/1"));
    assert_eq!(v["payload"]["samples"].as_array().unwrap().len(), 3);
    let other = binary(&["classify", &path("cross.json"), "--samples", "3", "--seed", "12"]).1;
    assert_ne!(other, first);
}

#[test]
fn text_format_prints_the_summary() {
    let (code, out) = binary(&["validate-complex", &path("segment_ok.json"), "--format", "text"]);
    assert_eq!((code, out.as_str()), (0, "complex is valid\n"));
}

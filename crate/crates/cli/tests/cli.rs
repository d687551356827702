use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use consim_core::biquiver::{base_change, random_base_change, random_rep, Biquiver};
use consim_core::exactmat::random::{random_matrix, random_nonsingular, seeded_rng};
use consim_core::reductions::{witness_biquiver, witness_commuting_pair, Encoding, PairInstance};
use consim_core::{CMatrix, GaussianRational};
use serde_json::{json, Value};

fn consim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_consim"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "status {:?}, stderr {}",
        out.status,
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stderr_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stderr).expect("stderr is JSON")
}

fn write(dir: &Path, name: &str, value: &impl serde::Serialize) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string(value).unwrap()).unwrap();
    path
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn commutant_basis_dimensions() {
    let v = stdout_json(&consim(&["commutant-basis", "--partition", "4:1,2:1", "--oracle"]));
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["complex_dim"], 10);
    assert_eq!(v["real_dim"], 20);
    assert_eq!(v["oracle_real_dim"], 20);
    assert_eq!(v["basis"].as_array().unwrap().len(), 20);
}

#[test]
fn commutant_basis_weyr_view() {
    let v = stdout_json(&consim(&["commutant-basis", "--partition", "4:1,2:1", "--weyr"]));
    let order: Vec<&str> = v["weyr"]["order"].as_array().unwrap().iter().map(|s| s.as_str().unwrap()).collect();
    assert_eq!(order, ["1,1", "1,2", "2,1", "2,2", "3,1", "4,1"]);
    assert!(v["basis"][0].get("weyr_matrix").is_some());
}

#[test]
fn encode_pair_scalars() {
    let dir = tempfile::tempdir().unwrap();
    let x = CMatrix::scalar(GaussianRational::from_ints(2, 1));
    let y = CMatrix::scalar(GaussianRational::from_ints(0, -1));
    let inst = write(dir.path(), "pair.json", &json!({ "X": x, "Y": y }));
    let v = stdout_json(&consim(&["encode", "pair", path_str(&inst)]));
    assert_eq!(v["kind"], json!({ "type": "commuting-pair", "n": 1 }));
    let j: CMatrix = serde_json::from_value(v["J"].clone()).unwrap();
    let m: CMatrix = serde_json::from_value(v["M"].clone()).unwrap();
    assert_eq!((j.shape(), m.shape()), ((5, 5), (5, 5)));
    assert_eq!(m[(0, 2)], GaussianRational::from_ints(2, 1));
    assert_eq!(m[(0, 4)], GaussianRational::from_ints(0, -1));
    assert_eq!(m[(1, 3)], GaussianRational::from_ints(2, -1));
    assert_eq!(m[(4, 3)], GaussianRational::from(1));
    assert_eq!(v["M"]["entries"][1][3], json!(["2/1", "-1/1"]));
}

#[test]
fn selfcheck_passes() {
    let out = consim(&["selfcheck", "--seed", "0", "--trials", "50"]);
    let v = stdout_json(&out);
    assert_eq!(v["ok"], true);
    assert_eq!(v["trials"], 50);
}

#[test]
fn output_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let bq = Biquiver::six_arrow_example();
    let rep = random_rep(&bq, &[1, 2, 1], 9).unwrap();
    let inst = write(dir.path(), "bq.json", &json!({ "biquiver": bq, "representation": rep }));
    for args in [
        vec!["encode", "biquiver", path_str(&inst)],
        vec!["selfcheck", "--seed", "3", "--trials", "2"],
        vec!["commutant-basis", "--partition", "3:2,1:1"],
    ] {
        let (a, b) = (consim(&args), consim(&args));
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn encode_decode_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = seeded_rng(4);
    let tuple = json!({
        "n": 2,
        "X": [random_matrix(&mut rng, 2, 2), random_matrix(&mut rng, 2, 2)],
        "Y": [random_matrix(&mut rng, 2, 2)],
    });
    let bq = Biquiver::six_arrow_example();
    let biq = json!({ "biquiver": bq, "representation": random_rep(&bq, &[1, 1, 2], 1).unwrap() });
    let pair = json!({ "X": random_matrix(&mut rng, 2, 2), "Y": random_matrix(&mut rng, 2, 2) });
    for (kind, inst) in [("pair", pair), ("tuple", tuple), ("biquiver", biq)] {
        let path = write(dir.path(), &format!("{kind}.json"), &inst);
        let enc_out = consim(&["encode", kind, path_str(&path)]);
        let enc_text = stdout_json(&enc_out);
        let enc_path = dir.path().join(format!("{kind}.enc.json"));
        std::fs::write(&enc_path, &enc_out.stdout).unwrap();

        // Emitted matrices re-parse to values that serialize identically.
        let enc: Encoding = serde_json::from_value(enc_text.clone()).unwrap();
        assert_eq!(serde_json::to_value(&enc.m).unwrap(), enc_text["M"]);

        let mut decoded = stdout_json(&consim(&["decode", path_str(&enc_path)]));
        decoded.as_object_mut().unwrap().remove("schema_version");
        assert_eq!(decoded, inst, "{kind}");
    }
}

#[test]
fn six_arrow_biquiver_layout_via_cli() {
    let dir = tempfile::tempdir().unwrap();
    let bq = Biquiver::six_arrow_example();
    let inst = write(
        dir.path(),
        "bq.json",
        &json!({ "biquiver": bq, "representation": random_rep(&bq, &[1, 1, 1], 0).unwrap() }),
    );
    let v = stdout_json(&consim(&["encode", "biquiver", path_str(&inst), "--partition", "2,7,4"]));
    let cells: Vec<(String, usize, usize, usize, usize)> = v["placement"]
        .as_array()
        .unwrap()
        .iter()
        .map(|pl| {
            let n = |a: &str, b: &str| pl[a][b].as_u64().unwrap() as usize;
            (
                pl["slot"].as_str().unwrap().to_string(),
                n("row", "strip"),
                n("row", "substrip"),
                n("col", "strip"),
                n("col", "substrip"),
            )
        })
        .collect();
    let expected = [
        ("A", 1, 1, 2, 1),
        ("B", 1, 2, 3, 1),
        ("C", 2, 1, 2, 3),
        ("D", 3, 2, 2, 7),
        ("E", 3, 1, 2, 5),
        ("F", 3, 4, 3, 3),
    ];
    for (got, want) in cells.iter().zip(expected) {
        assert_eq!((got.0.as_str(), got.1, got.2, got.3, got.4), want);
    }
}

#[test]
fn witness_commands() {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = seeded_rng(12);
    let a = PairInstance::new(random_matrix(&mut rng, 2, 2), random_matrix(&mut rng, 2, 2)).unwrap();
    let c = random_nonsingular(&mut rng, 2);
    let b = a.transform(&c).unwrap();
    let pa = write(dir.path(), "a.json", &a);
    let pb = write(dir.path(), "b.json", &b);
    let ea = dir.path().join("a.enc.json");
    let eb = dir.path().join("b.enc.json");
    std::fs::write(&ea, consim(&["encode", "pair", path_str(&pa)]).stdout).unwrap();
    std::fs::write(&eb, consim(&["encode", "pair", path_str(&pb)]).stdout).unwrap();
    let s = write(dir.path(), "s.json", &witness_commuting_pair(&c).unwrap());

    let v = stdout_json(&consim(&["verify-witness", path_str(&ea), path_str(&eb), path_str(&s)]));
    assert_eq!(v["commutant_ok"], true);
    assert_eq!(v["transport_ok"], true);

    let v = stdout_json(&consim(&["extract-witness", path_str(&ea), path_str(&eb), path_str(&s)]));
    assert_eq!(v["all_hold"], true);
    let got: CMatrix = serde_json::from_value(v["witnesses"][0].clone()).unwrap();
    assert_eq!(got, c);

    let v = stdout_json(&consim(&["verify-witness", path_str(&ea), path_str(&ea), path_str(&s)]));
    assert_eq!(v["transport_ok"], false);

    let mut bad = CMatrix::identity(10);
    bad[(2, 2)] = GaussianRational::i();
    let sbad = write(dir.path(), "sbad.json", &bad);
    let out = consim(&["extract-witness", path_str(&ea), path_str(&eb), path_str(&sbad)]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr_json(&out)["code"], "contract");
}

#[test]
fn biquiver_witness_commands() {
    let dir = tempfile::tempdir().unwrap();
    let bq = Biquiver::six_arrow_example();
    let dims = [1, 2, 1];
    let rep = random_rep(&bq, &dims, 3).unwrap();
    let s_list = random_base_change(&dims, 4);
    let rep2 = base_change(&bq, &rep, &s_list).unwrap();
    let pa = write(dir.path(), "a.json", &json!({ "biquiver": bq, "representation": rep }));
    let pb = write(dir.path(), "b.json", &json!({ "biquiver": bq, "representation": rep2 }));
    let ea = dir.path().join("a.enc.json");
    let eb = dir.path().join("b.enc.json");
    std::fs::write(&ea, consim(&["encode", "biquiver", path_str(&pa)]).stdout).unwrap();
    std::fs::write(&eb, consim(&["encode", "biquiver", path_str(&pb)]).stdout).unwrap();
    let enc: Encoding = serde_json::from_slice(&std::fs::read(&ea).unwrap()).unwrap();
    let s = write(dir.path(), "s.json", &witness_biquiver(&enc, &s_list).unwrap());

    let v = stdout_json(&consim(&["extract-witness", path_str(&ea), path_str(&eb), path_str(&s)]));
    assert_eq!(v["all_hold"], true);
    assert_eq!(v["relations"].as_array().unwrap().len(), 6);
    let got: Vec<CMatrix> = serde_json::from_value(v["witnesses"].clone()).unwrap();
    assert_eq!(got, s_list);
}

#[test]
fn invariants_accepts_both_pair_schemas() {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = seeded_rng(2);
    let (x, y) = (random_matrix(&mut rng, 2, 2), random_matrix(&mut rng, 2, 2));
    let named = write(dir.path(), "named.json", &json!({ "X": x, "Y": y }));
    let plain = write(dir.path(), "plain.json", &json!({ "first": x, "second": y }));
    let a = stdout_json(&consim(&["invariants", path_str(&named)]));
    let b = stdout_json(&consim(&["invariants", path_str(&plain), "--depth", "2"]));
    assert_eq!(a, b);
    assert_eq!(a["words"].as_array().unwrap().len(), 20);
    let shallow = stdout_json(&consim(&["invariants", path_str(&named), "--depth", "1"]));
    assert_eq!(shallow["words"].as_array().unwrap().len(), 4);
}

#[test]
fn error_reporting() {
    let dir = tempfile::tempdir().unwrap();
    let broken = dir.path().join("broken.json");
    std::fs::write(&broken, "{ not json").unwrap();
    let out = consim(&["decode", path_str(&broken)]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["code"], "parse");

    let out = consim(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["code"], "usage");

    let bq = Biquiver::six_arrow_example();
    let inst = write(
        dir.path(),
        "bq.json",
        &json!({ "biquiver": bq, "representation": random_rep(&bq, &[1, 1, 1], 0).unwrap() }),
    );
    let out = consim(&["encode", "biquiver", path_str(&inst), "--partition", "2,3,4"]);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr_json(&out);
    assert_eq!(err["code"], "capacity");
    assert!(err["message"].as_str().unwrap().contains("odd column"));

    let pair = write(dir.path(), "p.json", &json!({ "X": CMatrix::identity(1), "Y": CMatrix::identity(1) }));
    let out = consim(&["encode", "pair", path_str(&pair), "--partition", "2"]);
    assert_eq!(out.status.code(), Some(2));

    let out = consim(&["commutant-basis", "--partition", "2:1,2:3"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr_json(&out)["code"], "precondition");

    let mismatched = write(dir.path(), "bad_pair.json", &json!({ "X": CMatrix::identity(1), "Y": CMatrix::identity(2) }));
    let out = consim(&["encode", "pair", path_str(&mismatched)]);
    assert_eq!(out.status.code(), Some(2));
}

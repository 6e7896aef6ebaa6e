//! Golden-file tests over the corpus in `data/`. Set `UPDATE_GOLDEN=1` to rewrite the expectations.

use std::path::{Path, PathBuf};
use std::process::Command;

fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data")
}

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden")
}

/// Runs the binary inside `data/`; returns the exit code and a transcript with the
/// temporary directory replaced by `$OUT`.
fn run(args: &[&str], out_dir: &Path) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_gcrossed"))
        .args(args)
        .current_dir(data_dir())
        .env("RUST_LOG", "off")
        .output()
        .expect("binary runs");
    let code = out.status.code().unwrap_or(-1);
    let tmp = out_dir.display().to_string();
    let transcript = format!(
        "exit {code}\n--- stdout\n{}--- stderr\n{}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    )
    .replace(&tmp, "$OUT");
    (code, transcript)
}

fn check(name: &str, args: &[&str], want_code: i32) {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out.json");
    let out_s = out.display().to_string();
    let args: Vec<&str> = args.iter().map(|a| if *a == "$OUT" { out_s.as_str() } else { a }).collect();
    let (code, transcript) = run(&args, dir.path());
    let mut files = vec![(golden_dir().join(format!("{name}.txt")), transcript.clone())];
    if out.exists() {
        files.push((golden_dir().join(format!("{name}.json")), std::fs::read_to_string(&out).unwrap()));
    }
    for (path, got) in files {
        if std::env::var_os("UPDATE_GOLDEN").is_some() {
            std::fs::create_dir_all(golden_dir()).unwrap();
            std::fs::write(&path, &got).unwrap();
        } else {
            let want = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden file {}", path.display()));
            assert_eq!(got, want, "{} differs", path.display());
        }
    }
    assert_eq!(code, want_code, "{name}: {transcript}");
}

#[test]
fn construct_klein_twist() {
    check("construct_klein_twist", &["construct", "--group", "klein4", "--base", "c1", "--cocycle", "twist", "--out", "$OUT"], 0);
}

#[test]
fn construct_toric_swap() {
    check(
        "construct_toric_swap",
        &["construct", "--group", "z2", "--base", "toric", "--action", "swap", "--cocycle", "trivial", "--out", "$OUT"],
        0,
    );
}

#[test]
fn construct_from_files() {
    check(
        "construct_from_files",
        &["construct", "--group", "z3_group.json", "--base", "fib_base.json", "--cocycle", "trivial", "--out", "$OUT"],
        0,
    );
    check(
        "construct_free_orbit",
        &["construct", "--group", "z2", "--base", "two_points.json", "--action", "z2_swap_two.json", "--cocycle", "trivial", "--out", "$OUT"],
        0,
    );
}

#[test]
fn construct_rejects_non_cocycle() {
    check("construct_non_cocycle", &["construct", "--group", "klein4", "--base", "c1", "--cocycle", "klein_not_cocycle.json"], 1);
}

#[test]
fn verify_good_and_broken() {
    check("verify_toric", &["verify", "--algebra", "toric_swap.json", "--out", "$OUT"], 0);
    check("verify_broken", &["verify", "--algebra", "klein_broken.json"], 1);
}

#[test]
fn verlinde_instances() {
    check("verlinde_abab_builtin", &["verlinde", "--algebra", "klein_twist.json", "--instance", "abab", "--out", "$OUT"], 0);
    check("verlinde_abab_file", &["verlinde", "--algebra", "klein_twist.json", "--instance", "abab.json"], 0);
    check("verlinde_abab_untwisted", &["verlinde", "--algebra", "klein_trivial.json", "--instance", "abab"], 0);
    check("verlinde_handle", &["verlinde", "--algebra", "klein_twist.json", "--instance", "klein_handle.json"], 0);
    check("verlinde_toric_genus1", &["verlinde", "--algebra", "toric_swap.json", "--instance", "toric_genus1.json"], 0);
    check("verlinde_wrong_product", &["verlinde", "--algebra", "toric_swap.json", "--instance", "toric_wrong_product.json"], 1);
}

#[test]
fn fuse_bases() {
    check("fuse_klein_basis", &["fuse", "--algebra", "klein_twist.json", "--instance", "klein_basis.json", "--out", "$OUT"], 0);
    check("fuse_toric_default", &["fuse", "--algebra", "toric_swap.json"], 0);
}

#[test]
fn cohomology_checks() {
    check("cohomology_twist", &["cohomology", "--group", "klein4", "--base", "c1", "--cocycle", "twist"], 0);
    check("cohomology_not_cocycle", &["cohomology", "--group", "klein4", "--base", "c1", "--cocycle", "klein_not_cocycle.json"], 0);
    check(
        "cohomology_compare",
        &["cohomology", "--group", "klein4", "--base", "c1", "--cocycle", "trivial", "--cocycle", "klein_twist_cocycle.json", "--out", "$OUT"],
        0,
    );
    check(
        "cohomology_same_class",
        &["cohomology", "--group", "klein4", "--base", "c1", "--cocycle", "twist", "--cocycle", "klein_twist_cocycle.json"],
        0,
    );
}

#[test]
fn classify_algebras() {
    check("classify_twist", &["classify", "--algebra", "klein_twist.json", "--cocycle", "twist", "--out", "$OUT"], 0);
    check("classify_trivial_vs_twist", &["classify", "--algebra", "klein_trivial.json", "--cocycle", "twist"], 0);
    check("classify_broken", &["classify", "--algebra", "klein_broken.json"], 1);
}

#[test]
fn smatrix_sectors() {
    check("smatrix_builtin", &["smatrix", "--algebra", "toric_swap.json", "--instance", "toric", "--out", "$OUT"], 0);
    check("smatrix_file", &["smatrix", "--algebra", "toric_swap.json", "--instance", "toric_sectors.json"], 0);
    check("smatrix_bad", &["smatrix", "--algebra", "toric_swap.json", "--instance", "toric_sectors_bad.json"], 1);
}

#[test]
fn malformed_inputs_exit_2() {
    check("malformed_json", &["verify", "--algebra", "malformed.json"], 2);
    check("unknown_group", &["construct", "--group", "nope", "--base", "c1", "--cocycle", "trivial"], 2);
    check("missing_flag", &["verlinde", "--algebra", "klein_twist.json"], 2);
    check("wrong_shape", &["cohomology", "--group", "z2", "--base", "c1", "--cocycle", "klein_twist_cocycle.json"], 2);
}

#[test]
fn corpus_algebras_are_reproduced() {
    for (file, args) in [
        ("klein_twist.json", vec!["construct", "--group", "klein4", "--base", "c1", "--cocycle", "twist"]),
        ("klein_trivial.json", vec!["construct", "--group", "klein4", "--base", "c1", "--cocycle", "trivial"]),
        ("toric_swap.json", vec!["construct", "--group", "z2", "--base", "toric", "--action", "swap", "--cocycle", "trivial"]),
    ] {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("a.json");
        let mut full = args.clone();
        let o = out.display().to_string();
        full.extend(["--out", o.as_str()]);
        let (code, _) = run(&full, dir.path());
        assert_eq!(code, 0);
        let first = std::fs::read(&out).unwrap();
        assert_eq!(first, std::fs::read(data_dir().join(file)).unwrap(), "{file} is not reproduced");
        let (code, _) = run(&full, dir.path());
        assert_eq!(code, 0);
        assert_eq!(first, std::fs::read(&out).unwrap(), "{file}: output is not deterministic");
    }
}

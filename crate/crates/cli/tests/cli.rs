use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use filtra::format;
use filtra::models::{self, RandomSpec};
use filtra::BaseRing;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn corpus(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(name)
}

fn filtra(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_filtra")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("filtra-cli-{name}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn spectral_of_circle_max() {
    let dir = scratch("max");
    let cl = dir.join("max.cl");
    std::fs::write(&cl, "cls max deg=1\nterm max 1\n").unwrap();
    let out = filtra(&["spectral", "--complex", path(&corpus("circle_z.fc")), "--class", path(&cl)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "1\n");
}

#[test]
fn verify_corpus_manifest() {
    let out = filtra(&["verify", "--manifest", path(&corpus("corpus.mf"))]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).ends_with("0 violations, 0 input errors\n"));
}

#[test]
fn oracle_matches_spectral_on_random_complexes() {
    let dir = scratch("oracle");
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for i in 0..10 {
        let c = models::random_complex(&mut rng, &RandomSpec::new(BaseRing::prime_field(3).unwrap(), 8));
        let fc = dir.join(format!("random{i}.fc"));
        std::fs::write(&fc, format::emit_complex(&c)).unwrap();
        let homology = filtra(&["homology", "--complex", path(&fc)]);
        assert_eq!(homology.status.code(), Some(0));
        let cl = dir.join(format!("z{i}.cl"));
        std::fs::write(&cl, stdout(&homology)).unwrap();
        let spectral = filtra(&["spectral", "--complex", path(&fc), "--class", path(&cl)]);
        let oracle = filtra(&["oracle", "--complex", path(&fc), "--class", path(&cl)]);
        assert_eq!(spectral.status.code(), Some(0));
        assert_eq!(oracle.status.code(), Some(0));
        assert_eq!(stdout(&spectral), stdout(&oracle));
    }
}

#[test]
fn exit_codes() {
    let dir = scratch("codes");
    let equal = dir.join("equal.fc");
    std::fs::write(&equal, "ring Z\ngen min deg=0 action=0\ngen max deg=1 action=0\nbnd max min 1\n").unwrap();
    let out = filtra(&["validate", "--complex", path(&equal)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).starts_with("equal.fc: invalid"));

    let novikov = dir.join("novikov.fc");
    std::fs::write(&novikov, "ring Z\ngen a deg=1 action=1\ngen b deg=0 action=0\nbnd a b 1*t^1\n").unwrap();
    let out = filtra(&["validate", "--complex", path(&novikov)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 4, column 9"));

    assert_eq!(filtra(&["spectral", "--complex", path(&dir.join("missing.fc"))]).status.code(), Some(2));
    assert_eq!(filtra(&["spectral", "--frobnicate"]).status.code(), Some(2));
    assert_eq!(
        filtra(&["oracle", "--complex", path(&corpus("circle_q.fc")), "--class", path(&corpus("circle_q.cl"))])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(filtra(&["validate", "--complex", path(&corpus("torus_z.fc"))]).status.code(), Some(0));
}

#[test]
fn ring_override_enables_the_oracle() {
    let (fc, cl) = (corpus("rp2_z.fc"), corpus("rp2_f2.cl"));
    let args = ["oracle", "--complex", path(&fc), "--class", path(&cl), "--ring-override", "F2"];
    let out = filtra(&args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(stdout(&out), "0\n1\n2\n");
}

#[test]
fn emitted_complexes_parse_back() {
    let dual = filtra(&["dualize", "--complex", path(&corpus("rp2_z.fc"))]);
    let c = format::parse_complex(&stdout(&dual)).unwrap();
    assert_eq!(c.generator(0).name, "c0^v");

    let circle = corpus("circle_f2.fc");
    let tensor = filtra(&["tensor", "--complex", path(&circle), "--complex", path(&circle)]);
    assert_eq!(format::parse_complex(&stdout(&tensor)).unwrap().len(), 4);

    let lift = filtra(&[
        "lift",
        "--complex",
        path(&circle),
        "--period-degree",
        "2",
        "--period-action",
        "3/2",
        "--window",
        "-1:1",
    ]);
    let text = stdout(&lift);
    assert!(text.starts_with("ring Novikov(F2, deg=2, area=3/2)\nwindow -1:1\n"), "{text}");
    format::parse_complex(&text).unwrap();
    assert_eq!(filtra(&["lift", "--complex", path(&circle)]).status.code(), Some(2));
}

#[test]
fn spectrum_lists_actions() {
    let out = filtra(&["spectrum", "--complex", path(&corpus("circle2_q.fc"))]);
    assert_eq!(stdout(&out), "1/3\n2\n");
}

#[test]
fn repeated_runs_are_byte_identical() {
    let manifest = corpus("corpus.mf");
    let args = ["verify", "--manifest", path(&manifest), "--seed", "3"];
    let (a, b) = (filtra(&args), filtra(&args));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.status.code(), b.status.code());
}

//! The shipped corpus directory matches the library models byte for byte.
//! Run with `FILTRA_BLESS=1` to rewrite it.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use filtra::coeff::{int, rational, RingDescriptor};
use filtra::complex::SparseMatrix;
use filtra::format;
use filtra::models::{self, golden_corpus};
use filtra::props;
use filtra::runner::{self, Command, Request, Status};
use filtra::{FilteredComplex, FilteredMap};

fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

/// Every generated file with its expected contents.
fn expected_files() -> Vec<(String, String)> {
    let mut files = Vec::new();
    let mut add = |name: String, text: String| files.push((name, text));
    for e in golden_corpus() {
        add(format!("{}.fc", e.name), format::emit_complex(&e.complex));
        let classes = props::basis_classes(&e.complex).unwrap();
        add(format!("{}.cl", e.name), format::emit_classes(&e.complex, &classes));
        let engine = filtra::spectral::SpectralEngine::new(&e.complex);
        let values: String = classes.iter().map(|(_, c)| format!("{}\n", engine.invariant(c).unwrap())).collect();
        add(format!("golden/{}.spectral", e.name), values);
    }
    for ring in ["f2", "z"] {
        let desc = if ring == "f2" { RingDescriptor::prime_field(2).unwrap() } else { RingDescriptor::integers() };
        let torus = Arc::new(models::morse_torus(&int(0), &int(1), &int(1), &int(2), &desc).unwrap());
        add(format!("torus_{ring}.prod"), format::emit_product(&models::torus_intersection_product(torus).unwrap()));
    }
    let z = RingDescriptor::integers();
    let ambient = Arc::new(models::periodic_orbit_model(&models::point(&int(0), &z).unwrap()));
    let circle = Arc::new(models::morse_circle(&int(0), &int(1), &z).unwrap());
    add("point_orbit_z.fc".into(), format::emit_complex(&ambient));
    let action = models::unit_action(ambient, "pt", circle.clone()).unwrap();
    add("unit_action.prod".into(), format::emit_product(&action.data));

    let up = Arc::new(circle.shift_actions(&rational(3, 2)));
    add("circle_z_up.fc".into(), format::emit_complex(&up));
    add(
        "circle_z_to_up.map".into(),
        format::emit_map(&FilteredMap::identity_by_name(circle.clone(), up.clone()).unwrap()),
    );
    add("circle_z_from_up.map".into(), format::emit_map(&FilteredMap::identity_by_name(up, circle.clone()).unwrap()));
    add("circle_z_zero.htpy".into(), format::emit_homotopy(&circle, &SparseMatrix::default()));

    let interval = Arc::new(models::interval(&z).unwrap());
    let delta = [("b".to_string(), rational(1, 3)), ("b'".to_string(), rational(-1, 4))].into();
    let pert = Arc::new(interval.perturb_actions(&delta, &rational(1, 3)).unwrap());
    add("interval_z_pert.fc".into(), format::emit_complex(&pert));
    let there =
        FilteredMap::identity_by_name(interval.clone(), pert.clone()).unwrap().with_shift(rational(1, 3)).unwrap();
    let back = FilteredMap::identity_by_name(pert, interval.clone()).unwrap().with_shift(rational(1, 3)).unwrap();
    add("interval_z_to_pert.map".into(), format::emit_map(&there));
    add("interval_z_from_pert.map".into(), format::emit_map(&back));
    add("interval_z_zero.htpy".into(), format::emit_homotopy(&interval, &SparseMatrix::default()));
    files
}

#[test]
fn corpus_files_match_models() {
    let dir = corpus_dir();
    let bless = std::env::var_os("FILTRA_BLESS").is_some();
    for (name, text) in expected_files() {
        let path = dir.join(&name);
        if bless {
            std::fs::create_dir_all(path.parent().unwrap()).unwrap();
            std::fs::write(&path, &text).unwrap();
        }
        let on_disk = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(on_disk, text, "{name} is stale; rerun with FILTRA_BLESS=1");
    }
}

#[test]
fn corpus_complexes_parse_to_models() {
    for e in golden_corpus() {
        let c: FilteredComplex = format::load_complex(&corpus_dir().join(format!("{}.fc", e.name))).unwrap();
        assert_eq!(c, e.complex, "{}", e.name);
    }
}

/// Golden spectral values, each checked by hand against the minimal
/// max-action representative.
#[test]
fn golden_values() {
    let expect = [
        ("circle_z", "0\n1\n"),
        ("circle2_q", "1/3\n2\n"),
        ("sphere_q", "0\n1\n"),
        ("torus_f2", "0\n1\n1\n2\n"),
        ("rp2_z", "0\n1\n"),
        ("rp2_f2", "0\n1\n2\n"),
        ("interval_z", "0\n"),
        ("three_q", "0\n"),
        ("circle_lift_f2", "0\n1\n"),
    ];
    for (name, values) in expect {
        let req = Request {
            complexes: vec![corpus_dir().join(format!("{name}.fc"))],
            classes: vec![corpus_dir().join(format!("{name}.cl"))],
            ..Request::default()
        };
        let out = runner::run_command(Command::Spectral, &req);
        assert_eq!(out.status, Status::Ok, "{name}: {}", out.stderr);
        assert_eq!(out.stdout, values, "{name}");
    }
}

#[test]
fn corpus_manifest_passes() {
    let out = runner::verify(&corpus_dir().join("corpus.mf"), 0);
    assert_eq!(out.status, Status::Ok, "{}{}", out.stdout, out.stderr);
}

//! Printed fops and reports pinned against files in `golden/`.
//! Set `FOPKIT_UPDATE_GOLDEN=1` to rewrite them.

use std::path::PathBuf;
use std::sync::Arc;

use fopkit::cli;
use fopkit::io::print_fop;
use fopkit_core::fop::Fop;
use fopkit_core::problems::reductions::{autoreduction, identity, swap_1_max, AUTOREDUCIBLE};
use fopkit_core::vocab::builtin;

fn golden(name: &str, actual: &str) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("golden").join(name);
    if std::env::var_os("FOPKIT_UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(actual, expected, "{} differs", path.display());
}

fn data(name: &str) -> String {
    format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn report(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = cli::run(
        std::iter::once("fopkit").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    assert!(err.is_empty(), "{}", String::from_utf8_lossy(&err));
    (code, String::from_utf8(out).unwrap())
}

#[test]
fn catalog_fops() {
    let fops: Vec<(String, Fop)> = vec![
        (
            "identity-graph.fop".into(),
            identity(Arc::new(builtin::graph())).unwrap(),
        ),
        (
            "identity-st-graph.fop".into(),
            identity(Arc::new(builtin::st_graph())).unwrap(),
        ),
        ("swap-1-max.fop".into(), swap_1_max().unwrap()),
    ]
    .into_iter()
    .chain(
        AUTOREDUCIBLE
            .iter()
            .map(|p| (format!("pad-{p}-3.fop"), autoreduction(p, 3).unwrap())),
    )
    .collect();
    for (name, fop) in fops {
        golden(&name, &print_fop(&fop));
    }
}

#[test]
fn reports() {
    let (code, text) = report(&["uniformity", "--problem", "reach", "--n", "3", "--k", "1", "--m", "3,4"]);
    assert_eq!(code, 0);
    golden("uniformity-reach-3-1.txt", &text);

    let (code, text) = report(&[
        "uniformity",
        "--problem",
        "mono_triangle",
        "--n",
        "6",
        "--k",
        "15",
        "--m",
        "6",
        "--probe",
        &data("k6-probe.fof"),
    ]);
    assert_eq!(code, 1);
    golden("probe-k6.txt", &text);

    let (code, text) = report(&[
        "superfluous",
        "--psi",
        &data("no-edges.fof"),
        "--fop",
        &format!("{}/golden/identity-graph.fop", env!("CARGO_MANIFEST_DIR")),
        "--size-bound",
        "2",
    ]);
    assert_eq!(code, 1);
    golden("superfluous-no-edges.txt", &text);

    let (code, text) = report(&["--format", "tsv", "harness", "longest-path", "--size-bound", "2"]);
    assert_eq!(code, 0);
    golden("harness-longest-path-2.tsv", &text);

    let (code, text) = report(&["catalog"]);
    assert_eq!(code, 0);
    golden("catalog.txt", &text);
}

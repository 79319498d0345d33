//! Regenerates the status fixtures from the scalar oracle and checks them
//! against the committed files. Run with `QFORGE_BLESS=1` to rewrite them.

mod oracle;

use std::path::PathBuf;

use num_traits::Zero;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn check_or_bless(name: &str, table: &str) {
    let path = fixture(name);
    if std::env::var_os("QFORGE_BLESS").is_some() {
        std::fs::write(&path, table).unwrap();
        return;
    }
    let committed = std::fs::read_to_string(&path).unwrap();
    assert_eq!(committed, table, "oracle disagrees with {}", path.display());
}

#[test]
fn theorem_fixture_matches_oracle() {
    let points = oracle::sample_points(0x5eed, 3);
    check_or_bless(
        "theorem_statuses.txt",
        &oracle::status_table(oracle::THEOREM_GRID, &points),
    );
}

#[test]
fn extended_fixture_matches_oracle() {
    let points = oracle::sample_points(0x5eed, 3);
    check_or_bless(
        "extended_statuses.txt",
        &oracle::status_table(oracle::EXTENDED_GRID, &points),
    );
}

#[test]
fn oracle_sanity() {
    let pts = oracle::sample_points(7, 2);
    for pt in &pts {
        let q = &pt.q;
        // F_1 = x - y + z
        assert_eq!(oracle::f(1, &pt.x, &pt.y, &pt.z, q), &pt.x - &pt.y + &pt.z);
        // kernel collapses to a Cauchy polynomial when the z-factors cancel
        for m in 0..5 {
            assert_eq!(
                oracle::kernel(m, &pt.y, &pt.z, &pt.xi, &pt.z, q),
                oracle::cauchy(m, &pt.xi, &pt.y, q)
            );
        }
        // all k = l = 0 cells are trivially true
        for id in ["thm3.1-general", "cor3.2", "thm4", "cor-psi"] {
            let (l, r) = oracle::sides(id, 0, 0, pt);
            assert!((l - r).is_zero(), "{id}");
        }
    }
}

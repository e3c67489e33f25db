use std::sync::atomic::Ordering;
use std::sync::Arc;

use graphcx::calculus::OperatorTag;
use graphcx::graphcore::{GraphConstraints, Parity};
use graphcx::homology::*;
use graphcx::linalg::{Field, PRIME_A, PRIME_B};

const P: Field = Field::Prime(PRIME_A);

#[test]
fn even_cells() {
    let s = ComplexSpec::even_delta();
    assert_eq!(cohomology_dim(&s, (5, 0), P).unwrap(), 1);
    assert_eq!(cohomology_dim(&s, (6, 2), P).unwrap(), 1);
    assert_eq!(cohomology_dim(&s, (7, 0), P).unwrap(), 0);
}

#[test]
fn odd_cells() {
    let s = ComplexSpec::odd_delta();
    assert_eq!(cohomology_dim(&s, (3, 0), P).unwrap(), 1);
    for b in -1..=4 {
        assert_eq!(cohomology_dim(&s, (5, b), P).unwrap(), 0, "v=5, b={b}");
    }
}

#[test]
fn odd_eight_vertices_four_loops() {
    let s = ComplexSpec::odd_delta();
    assert_eq!(cohomology_dim(&s, (8, 4), P).unwrap(), 2);
}

#[test]
fn even_table_corner() {
    let t = dim_table(&ComplexSpec::even_delta(), 0..=9, -1..=8, P);
    let mut nz = t.nonzero();
    nz.sort();
    assert_eq!(nz, vec![(5, 0, 1), (6, 2, 1), (9, 0, 1)]);
    assert!(t.unknown().is_empty());
    assert!(t.cells.iter().all(|c| c.composite_checked));
    let grid = t.render();
    assert!(grid.lines().next().unwrap().trim_start().starts_with("b\\e"));
    assert_eq!(t.to_csv().lines().count(), t.cells.len() + 1);
}

#[test]
fn odd_table_six_vertices() {
    let t = dim_table(&ComplexSpec::odd_delta(), 1..=6, -1..=4, P);
    let mut nz = t.nonzero();
    nz.sort();
    assert_eq!(nz, vec![(2, 1, 1), (3, 0, 1), (4, 2, 1), (6, 3, 1)]);
}

#[test]
fn fields_agree_on_small_cells() {
    for spec in [ComplexSpec::even_delta(), ComplexSpec::odd_delta()] {
        let (a, b) = match spec.parity {
            Parity::Even => (0..=8, -1..=4),
            Parity::Odd => (1..=5, -1..=3),
        };
        let q = dim_table(&spec, a.clone(), b.clone(), Field::Rational);
        let p1 = dim_table(&spec, a.clone(), b.clone(), Field::Prime(PRIME_A));
        let p2 = dim_table(&spec, a, b, Field::Prime(PRIME_B));
        for ((x, y), z) in q.cells.iter().zip(&p1.cells).zip(&p2.cells) {
            assert!(x.basis.unwrap() <= 2000);
            assert_eq!(x.dim, y.dim);
            assert_eq!(x.dim, z.dim);
            assert!(x.dim.is_some());
        }
    }
}

#[test]
fn empty_range() {
    let t = dim_table(&ComplexSpec::even_delta(), 3..=2, 0..=1, P);
    assert!(t.is_empty());
    assert_eq!(t.to_csv().lines().count(), 1);
}

#[test]
fn capacity_is_reported_per_cell() {
    let limits = Limits { max_basis: 20, ..Limits::default() };
    let t = Engine::new(ComplexSpec::odd_delta(), P).with_limits(limits).table(1..=5, 0..=2);
    assert_eq!(t.dim(3, 0), Some(1));
    let unknown = t.unknown();
    assert!(!unknown.is_empty());
    assert!(unknown.iter().all(|c| c.note.as_deref().unwrap().contains("capacity")));
    assert!(t.render().contains('?'));
    assert!(t.to_csv().contains(",?,"));
}

#[test]
fn cache_round_trip_and_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let spec = ComplexSpec::odd_delta();
    let cache = Arc::new(Cache::new(dir.path()));
    let first = Engine::new(spec, P).with_cache(cache.clone()).table(1..=5, -1..=3);
    assert!(cache.stats.misses.load(Ordering::Relaxed) > 0);
    let basis = cache.basis_path(Parity::Odd, &spec.constraints, 4, 6);
    assert!(basis.exists());
    assert!(cache.matrix_path(Parity::Odd, &spec.constraints, "delta", 4, 6).exists());

    let again = Arc::new(Cache::new(dir.path()));
    let second = Engine::new(spec, P).with_cache(again.clone()).table(1..=5, -1..=3);
    assert_eq!(first, second);
    assert_eq!(again.stats.misses.load(Ordering::Relaxed), 0);

    let text = std::fs::read_to_string(&basis).unwrap();
    std::fs::write(&basis, text.replacen('1', "2", 1)).unwrap();
    let third_cache = Arc::new(Cache::new(dir.path()));
    let third = Engine::new(spec, P).with_cache(third_cache.clone()).table(1..=5, -1..=3);
    assert_eq!(first, third);
    assert_eq!(third_cache.stats.corrupt.load(Ordering::Relaxed), 1);
    let healed = std::fs::read_to_string(&basis).unwrap();
    assert_eq!(healed, text);
}

#[test]
fn json_metadata() {
    let t = dim_table(&ComplexSpec::even_delta(), 4..=6, 0..=2, P);
    let j = t.to_json();
    assert_eq!(j["field"], format!("p:{PRIME_A}"));
    assert_eq!(j["cache_key"], constraints_key(&GraphConstraints::connected()));
    assert_eq!(j["cells"].as_array().unwrap().len(), 9);
    let back: Vec<CellDim> = serde_json::from_value(j["cells"].clone()).unwrap();
    assert_eq!(back, t.cells);
}

#[test]
fn nabla_cohomology() {
    let r = nabla_cohomology_check(6, P).unwrap();
    assert!(r.holds(), "{r:?}");
    assert_eq!(r.all_graphs[0], (1, Some(1)));
    assert_eq!(r.connected[1], (2, Some(1)));
    assert_eq!(r.connected[3], (4, Some(0)));
}

#[test]
fn labeled_nabla_is_acyclic() {
    assert_eq!(labeled_nabla_dims(1).unwrap(), vec![1]);
    for n in 2..=6 {
        assert!(labeled_nabla_dims(n).unwrap().iter().all(|&d| d == 0), "n={n}");
    }
}

#[test]
fn spec_validation() {
    let c = GraphConstraints::connected();
    assert!(ComplexSpec::new(Parity::Odd, OperatorTag::Nabla, c, Grading::ByVerticesAndB).is_err());
    assert!(ComplexSpec::new(Parity::Even, OperatorTag::DeltaPlusNabla, c, Grading::ByEdgesAndB).is_err());
    assert!(ComplexSpec::new(Parity::Even, OperatorTag::BracketWithTheta, c, Grading::ByEdgesAndB).is_err());
    assert_eq!(Grading::ByEdgesAndB.cell(5, 0), Some((5, 5)));
    assert_eq!(Grading::ByVerticesAndB.cell(2, 1), Some((2, 3)));
    assert_eq!(Grading::ByEdgesAndB.cell(2, 2), None);
}

use fatpoint::fermat::{self, Configuration, GeneratorKind};
use fatpoint::field::primes_with_root_of_unity;
use fatpoint::interpolation::*;
use fatpoint::linalg;
use fatpoint::{CyclotomicField, Field, PrimeField};

fn q3() -> CyclotomicField {
    CyclotomicField::new(3).unwrap()
}

#[test]
fn graded_pieces() {
    let f = q3();
    assert_eq!(vanishing_dimension(&f, &Configuration::empty(5), 4), 126);
    let w5 = fermat::build_configuration(5, 3, &f).unwrap();
    assert_eq!(vanishing_dimension(&f, &w5, 4), 24);
    assert_eq!(vanishing_dimension(&f, &w5, 3), 0);
    let w3 = fermat::build_configuration(3, 3, &f).unwrap();
    assert_eq!(vanishing_space(&f, &w3, 4).len(), 8);
}

#[test]
fn triple_point_matrix_in_p5_has_rank_18() {
    let f = q3();
    let gens = fermat::generators(GeneratorKind::FermatSpace, 5, 3, &f).unwrap();
    for r in random_general_points(&f, 5, 3, 3, 42).unwrap() {
        let m = derivative_rows(&gens.gens, &r, 3).unwrap();
        assert_eq!((m.rows(), m.cols()), (21, 24));
        assert_eq!(linalg::rank(&f, &m), 18);
    }
}

#[test]
fn triple_point_dimensions() {
    let f = q3();
    assert_eq!(triple_point_dimension(&f, 3, 2, 1).unwrap(), 1);
    assert_eq!(triple_point_dimension(&f, 5, 2, 1).unwrap(), 6);
}

#[test]
fn fermat_plane_curves_are_unexpected() {
    for n in 3..=5u64 {
        let f = CyclotomicField::new(n).unwrap();
        let w = fermat::build_configuration(2, n, &f).unwrap();
        let r = unexpectedness_report(&f, &w, n as u32 + 2, &[4], 2, 3).unwrap();
        assert!(r.verdict, "n = {n}: {r:?}");
        assert_eq!(r.actual_dim, 1);
        assert_eq!(r.expected_dim, 0);
    }
}

#[test]
fn report_is_deterministic_and_seed_sensitive() {
    let f = q3();
    let w = fermat::build_configuration(5, 3, &f).unwrap();
    let a = unexpectedness_report(&f, &w, 4, &[3, 2], 2, 77).unwrap();
    let b = unexpectedness_report(&f, &w, 4, &[3, 2], 2, 77).unwrap();
    let c = unexpectedness_report(&f, &w, 4, &[3, 2], 2, 78).unwrap();
    assert_eq!(a, b);
    assert_ne!(a.seeds, c.seeds);
    assert_eq!(
        (a.base_dim, a.conditions_expected, a.virtual_dim),
        (24, 27, -3)
    );
    assert_eq!((a.actual_dim, a.rank_per_point.clone()), (1, vec![18, 5]));
    let json = serde_json::to_string(&a).unwrap();
    let back: UnexpectednessReport = serde_json::from_str(&json).unwrap();
    assert_eq!(back, a);
}

#[test]
fn simple_point_is_never_unexpected() {
    let f = q3();
    let w = fermat::build_configuration(2, 3, &f).unwrap();
    let r = unexpectedness_report(&f, &w, 6, &[1], 3, 0).unwrap();
    assert!(!r.verdict);
    assert_eq!(r.actual_dim as i64, r.virtual_dim);
}

#[test]
fn conditions_sweep_on_two_primes() {
    let rows: Vec<_> = primes_with_root_of_unity(3, 2)
        .into_iter()
        .map(|p| {
            conditions_count_sweep(
                &PrimeField::new(3, p).unwrap(),
                &[2, 3],
                2,
                9,
                DEFAULT_MAX_K,
            )
            .unwrap()
        })
        .collect();
    for run in &rows {
        assert_eq!(run[0].triple_dim, 6);
        assert_eq!(run[0].increments, vec![5]);
        assert_eq!(run[1].triple_dim, 15);
        assert_eq!(run[1].increments, vec![8, 6]);
        assert_eq!(run[1].total_conditions, 14);
        assert!(run.iter().all(|r| r.matches && r.final_dim == 1));
    }
}

#[test]
fn symbolic_tables_match_references() {
    let f = q3();
    for (dim, rank) in [(3, 7), (5, 18)] {
        let t = symbolic_interpolation_matrix(&f, dim).unwrap();
        let reference = reference_table(&f, dim).unwrap();
        assert!(compare_tables(&t, &reference).is_empty());
        assert_eq!(linalg::symbolic_rank(&t.matrix).rank, rank);
    }
}

#[test]
fn table_rows_and_columns() {
    let f = q3();
    let t = symbolic_interpolation_matrix(&f, 3).unwrap();
    assert_eq!(
        t.column_labels,
        vec![
            (0, 2),
            (0, 3),
            (1, 0),
            (1, 3),
            (2, 0),
            (2, 1),
            (3, 1),
            (3, 2)
        ]
    );
    assert_eq!(t.row_labels[0], vec![2, 0, 0, 0]);
    assert_eq!(t.row_labels[1], vec![1, 1, 0, 0]);
    assert_eq!(t.row_labels[9], vec![0, 0, 0, 2]);
    // The first row is divided by 6 a0.
    assert_eq!(t.row_factors[0].1, 6.into());
    assert_eq!(t.row_factors[0].0.exps(), &[1, 0, 0, 0]);
}

#[test]
fn a_corrupted_reference_is_detected() {
    let f = q3();
    let t = symbolic_interpolation_matrix(&f, 3).unwrap();
    let mut reference = reference_table(&f, 3).unwrap();
    let e = reference.get(4, 0).scale(&f.from_i64(-1));
    reference.set(4, 0, e);
    let diff = compare_tables(&t, &reference);
    assert_eq!(diff.len(), 1);
    assert_eq!(diff[0].row, 4);
}

#[test]
fn specialized_table_has_numeric_rank() {
    let f = q3();
    let t = symbolic_interpolation_matrix(&f, 3).unwrap();
    let gens = fermat::generators(GeneratorKind::FermatSpace, 3, 3, &f).unwrap();
    for r in random_general_points(&f, 3, 3, 4, 5).unwrap() {
        let s = specialize(&t.matrix, &r).unwrap();
        assert_eq!(linalg::rank(&f, &s), 7);
        assert_eq!(
            linalg::rank(&f, &derivative_rows(&gens.gens, &r, 3).unwrap()),
            7
        );
    }
}

#[test]
fn generation_small_cases() {
    for n in 3..=6u64 {
        let f = CyclotomicField::new(n).unwrap();
        assert!(verify_generation(&f, 2, n, 8).unwrap().holds, "n = {n}");
    }
    let f = q3();
    let r = verify_generation(&f, 3, 3, 6).unwrap();
    assert!(r.holds);
    let spans: Vec<_> = r.rows.iter().map(|row| row.span_dim).collect();
    assert_eq!(spans, vec![0, 0, 0, 8, 26, 53]);
}

#[test]
fn solutions_satisfy_their_conditions() {
    let f = q3();
    let w = fermat::build_configuration(2, 3, &f).unwrap();
    let system = LinearSystem::through(&f, &w, 5);
    let pts = sample_fat_points(&f, &w, &[4], 17, DEFAULT_BOUND).unwrap();
    let sols = system.solutions(&pts).unwrap();
    assert_eq!(sols.len(), 1);
    for p in w.points() {
        assert!(f.is_zero(&sols[0].evaluate(p).unwrap()));
    }
    let d = derivative_rows(&sols, &pts[0].0, 4).unwrap();
    assert!((0..d.rows()).all(|r| f.is_zero(d.get(r, 0))));
}

use fatpoint::fermat::*;
use fatpoint::field::primes_with_root_of_unity;
use fatpoint::{CyclotomicField, Field, PrimeField};

#[test]
fn configuration_sizes() {
    let f = CyclotomicField::new(3).unwrap();
    for (dim, count) in [(2, 12), (3, 31), (5, 249)] {
        assert_eq!(build_configuration(dim, 3, &f).unwrap().len(), count);
    }
    let f4 = CyclotomicField::new(4).unwrap();
    assert_eq!(build_configuration(2, 4, &f4).unwrap().len(), 19);
}

#[test]
fn generators_are_independent_and_vanish() {
    for (dim, count) in [(3, 8), (4, 15), (5, 24)] {
        let f = CyclotomicField::new(3).unwrap();
        let g = generators(GeneratorKind::FermatSpace, dim, 3, &f).unwrap();
        assert_eq!(g.len(), count);
        assert_eq!(coefficient_rank(&f, &g.gens), count);
        let w = build_configuration(dim, 3, &f).unwrap();
        assert!(verify_vanishing(&g, &w).unwrap().holds);
    }
}

#[test]
fn modular_configuration_matches_cyclotomic_count() {
    let f = PrimeField::new(3, primes_with_root_of_unity(3, 1)[0]).unwrap();
    let w = build_configuration(4, 3, &f).unwrap();
    assert_eq!(w.len(), 81 + 5);
    let g = generators(GeneratorKind::FermatSpace, 4, 3, &f).unwrap();
    assert!(verify_vanishing(&g, &w).unwrap().holds);
}

#[test]
fn a_wrong_point_gives_a_witness() {
    let f = CyclotomicField::new(3).unwrap();
    let mut w = build_configuration(3, 3, &f).unwrap();
    let p = fatpoint::ProjPoint::from_ints(&f, &[1, 2, 3, 4]).unwrap();
    w.fermat_points.push(p);
    let g = generators(GeneratorKind::FermatSpace, 3, 3, &f).unwrap();
    let check = verify_vanishing(&g, &w).unwrap();
    assert!(!check.holds);
    assert_eq!(check.witness.unwrap().1, 27);
}

#[test]
fn json_round_trip_and_field_check() {
    let f = CyclotomicField::new(3).unwrap();
    let w = build_configuration(2, 3, &f).unwrap();
    let text = w.to_json(&f);
    let back = Configuration::from_json(&f, &text).unwrap();
    assert_eq!(back.len(), 12);
    assert!(back
        .points()
        .zip(w.points())
        .all(|(a, b)| a.same_point(b, &f)));
    let other = CyclotomicField::new(6).unwrap();
    assert!(Configuration::<<CyclotomicField as Field>::Elem>::from_json(&other, &text).is_err());
}

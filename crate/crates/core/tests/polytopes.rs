use gosset::gosset::{build, expected};
use gosset::octonion::gosset240_vertices;
use num_rational::Rational64;

#[test]
fn gosset_421_counts_and_euler_characteristic() {
    let p = build(8).unwrap();
    let e = expected(8).unwrap();
    assert_eq!(p.vertex_count(), e.facets);
    assert_eq!(p.degree(), Some(56));
    assert_eq!(p.orthoplex_facets.len(), 2160);
    assert!(p.orthoplex_facets.iter().all(|f| f.len() == 7));
    assert_eq!(p.face_vector()[0], 17280);
    assert_eq!(p.euler_characteristic(), Rational64::new(17, 2));
}

#[test]
fn zero_product_pairs_are_all_covered_once() {
    let v = gosset240_vertices();
    let zero = (0..240)
        .flat_map(|i| (i + 1..240).map(move |j| (i, j)))
        .filter(|&(i, j)| v[i].dot(&v[j]) == Rational64::from_integer(0))
        .count();
    assert_eq!(zero, 15120);
    let p = build(8).unwrap();
    let pairs: usize = p.orthoplex_facets.iter().map(|f| f.len()).sum();
    assert_eq!(pairs, zero);
}

#[test]
fn odd_dimensions_have_vanishing_euler_characteristic() {
    for n in [3, 5, 7] {
        assert_eq!(
            build(n).unwrap().euler_characteristic(),
            Rational64::from_integer(0)
        );
    }
}

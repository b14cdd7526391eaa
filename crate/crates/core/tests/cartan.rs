use cartan_super::cartan::{closed_form_argument, image_rank, ko_subalgebra_k, t_h, t_k, t_op};
use cartan_super::verify::{verify_closed_forms, verify_jacobi, verify_operator_composition};
use cartan_super::{build_algebra, CartanParams, Family, GradedAlgebra, Poly, Signature};

fn build(family: Family, n: usize, t: &[u32], p: u32) -> GradedAlgebra {
    build_algebra(&CartanParams::new(family, n, t, p).unwrap()).unwrap()
}

#[test]
fn dimensions_match_the_image_rank() {
    for (n, t, p) in [
        (1, vec![1], 5),
        (1, vec![2], 5),
        (2, vec![1, 1], 5),
        (1, vec![1], 7),
    ] {
        let size = 2usize.pow(n as u32) * (p as usize).pow(t.iter().sum());
        let ho = build(Family::HO, n, &t, p);
        let ko = build(Family::KO, n, &t, p);
        assert_eq!(ho.dim(), size - 1);
        assert_eq!(ko.dim(), 2 * size);
        assert_eq!(
            image_rank(Family::HO, ho.signature().unwrap()).unwrap(),
            ho.dim()
        );
        assert_eq!(
            image_rank(Family::KO, ko.signature().unwrap()).unwrap(),
            ko.dim()
        );
    }
}

#[test]
fn gradings_span_the_expected_range() {
    let ho = build(Family::HO, 2, &[1, 1], 5);
    let ko = build(Family::KO, 2, &[1, 1], 5);
    assert_eq!(ho.degree_range(), (-1, 8));
    assert_eq!(ko.degree_range(), (-2, 10));
    assert_eq!(ho.basis_of_degree(-1).len(), 4);
    assert_eq!(ho.basis_of_degree(8).len(), 1);
    assert_eq!(ko.basis_of_degree(-2).len(), 1);
    assert!(ho.degree_violation().is_none() && ko.degree_violation().is_none());
    assert!(
        ho.super_antisymmetry_violation().is_none() && ko.super_antisymmetry_violation().is_none()
    );
}

#[test]
fn small_algebras_satisfy_jacobi_exhaustively() {
    for family in [Family::HO, Family::KO] {
        let x = build(family, 1, &[1], 5);
        assert!(verify_jacobi(&x, None, 0).is_ok());
        assert!(verify_closed_forms(&x).unwrap().is_ok());
        assert!(verify_operator_composition(&x).unwrap().is_ok());
    }
}

#[test]
fn closed_forms_hold_with_higher_truncation() {
    for family in [Family::HO, Family::KO] {
        let x = build(family, 1, &[2], 5);
        assert!(verify_closed_forms(&x).unwrap().is_ok());
    }
}

#[test]
fn hamiltonian_bracket_argument_is_t_h_applied() {
    let s = Signature::hamiltonian(2, &[1, 1], 5).unwrap();
    let a = Poly::var(&s, 1)
        .unwrap()
        .mul(&Poly::var(&s, 3).unwrap())
        .unwrap();
    let b = Poly::var(&s, 2)
        .unwrap()
        .mul(&Poly::var(&s, 4).unwrap())
        .unwrap();
    let expect = t_h(&a).unwrap().apply(&b).unwrap();
    assert_eq!(closed_form_argument(Family::HO, &a, &b).unwrap(), expect);
    assert_eq!(t_op(Family::HO, &a).unwrap(), t_h(&a).unwrap());
}

#[test]
fn t_k_of_one_is_a_multiple_of_the_contact_partial() {
    let s = Signature::contact(2, &[1, 1], 5).unwrap();
    let one = Poly::one(&s);
    let d = t_k(&one).unwrap();
    let coeffs: Vec<usize> = d
        .coeffs()
        .filter(|(_, c)| !c.is_zero())
        .map(|(j, _)| j)
        .collect();
    assert_eq!(coeffs, vec![5]);
    assert!(t_h(&one).unwrap().is_zero());
}

#[test]
fn k_span_leaves_itself_only_through_t_k_one() {
    let k = ko_subalgebra_k(2, &[1, 1], 5).unwrap();
    let one =
        k.ko.index_of(&k.ko.signature().unwrap().one_monomial())
            .unwrap();
    assert_eq!(k.ko_indices.len(), k.ho.dim());
    assert!(!k.is_closed());
    assert!(k.outside.iter().all(|&(_, _, c)| c == one));
    // every offending pair is T_K(x_i), T_K(x_{i'}) up to order
    for &(a, b, _) in &k.outside {
        let (ma, mb) = (k.ko.label(a).unwrap(), k.ko.label(b).unwrap());
        assert_eq!(ma.std_degree() + mb.std_degree(), 2);
    }
}

#[test]
fn json_round_trip_preserves_everything() {
    for family in [Family::HO, Family::KO] {
        let x = build(family, 2, &[1, 1], 5);
        let text = x.to_json_string();
        let y = GradedAlgebra::from_json_str(&text).unwrap();
        assert_eq!(y.dim(), x.dim());
        assert_eq!(y.labels(), x.labels());
        assert_eq!(y.degrees(), x.degrees());
        assert_eq!(y.parities(), x.parities());
        for i in 0..x.dim() {
            for j in 0..x.dim() {
                assert_eq!(x.bracket_basis(i, j), y.bracket_basis(i, j));
            }
        }
        assert_eq!(y.to_json_string(), text);
    }
}

#[test]
fn invalid_parameters_are_rejected() {
    assert!(CartanParams::new(Family::HO, 2, &[1, 1], 4).is_err());
    assert!(CartanParams::new(Family::HO, 2, &[1, 1], 3).is_err());
    assert!(CartanParams::new(Family::HO, 2, &[1], 5).is_err());
    assert!(CartanParams::new(Family::KO, 0, &[], 5).is_err());
    assert!(CartanParams::new(Family::KO, 1, &[0], 5).is_err());
    assert!(GradedAlgebra::from_json_str("{").is_err());
}

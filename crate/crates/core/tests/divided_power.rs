use cartan_super::{Monomial, Parity, Poly, PrimeField, Signature};
use num_bigint::BigUint;
use proptest::prelude::*;

fn factorial_binomial(a: u64, b: u64) -> BigUint {
    let fact = |k: u64| (1..=k).fold(BigUint::from(1u32), |acc, i| acc * i);
    fact(a) / (fact(b) * fact(a - b))
}

#[test]
fn lucas_matches_factorial_oracle() {
    for p in [5u32, 7, 11] {
        let f = PrimeField::new(p).unwrap();
        let limit = 2 * u64::from(p) * u64::from(p);
        for a in 0..=limit {
            for b in 0..=a {
                let expect = (factorial_binomial(a, b) % p)
                    .to_u32_digits()
                    .first()
                    .copied()
                    .unwrap_or(0);
                assert_eq!(f.binomial(a, b).value(), expect, "p={p} a={a} b={b}");
            }
            assert!(f.binomial(a, a + 1).is_zero());
        }
    }
}

#[test]
fn multi_binomial_is_a_product() {
    let f = PrimeField::new(5).unwrap();
    let v = f.multi_binomial(&[7, 3], &[2, 1]).unwrap();
    assert_eq!(v, f.mul(f.binomial(9, 7), f.binomial(4, 3)));
    assert!(f.multi_binomial(&[1], &[1, 2]).is_err());
}

#[test]
fn divided_power_product_rule() {
    // x^(a) x^(b) = C(a+b, a) x^(a+b)
    let sig = Signature::new(1, 0, &[2], 5).unwrap();
    let f = sig.field();
    for a in 0..25u32 {
        for b in 0..25u32 {
            let got = sig.mul_monomials(&Monomial::new(vec![a], 0), &Monomial::new(vec![b], 0));
            if a + b < 25 && !f.binomial(u64::from(a + b), u64::from(a)).is_zero() {
                let (c, m) = got.unwrap();
                assert_eq!(m, Monomial::new(vec![a + b], 0));
                assert_eq!(c, f.binomial(u64::from(a + b), u64::from(a)));
            } else {
                assert!(got.is_none(), "a={a} b={b}");
            }
        }
    }
}

#[test]
fn signature_counts() {
    let s = Signature::hamiltonian(2, &[1, 1], 5).unwrap();
    assert_eq!((s.m(), s.n(), s.dim()), (2, 2, 100));
    let k = Signature::contact(2, &[1, 1], 5).unwrap();
    assert_eq!((k.nvars(), k.dim()), (5, 200));
    assert!(Signature::new(1, 0, &[1], 4).is_err());
    assert_eq!(s.prime_index(1).unwrap(), 3);
    assert_eq!(s.prime_index(4).unwrap(), 2);
}

fn sig() -> Signature {
    Signature::new(2, 2, &[2, 1], 5).unwrap()
}

fn monomial_strategy() -> impl Strategy<Value = Monomial> {
    (0u32..25, 0u32..5, 0u32..4).prop_map(|(a, b, u)| Monomial::new(vec![a, b], u))
}

fn poly_strategy() -> impl Strategy<Value = Poly> {
    prop::collection::vec((monomial_strategy(), 1i64..5), 0..4).prop_map(|terms| {
        let s = sig();
        let mut p = Poly::zero(&s);
        for (m, c) in terms {
            p.add_term(m, s.field().elem(c));
        }
        p
    })
}

proptest! {
    #[test]
    fn product_is_associative(a in poly_strategy(), b in poly_strategy(), c in poly_strategy()) {
        let l = a.mul(&b).unwrap().mul(&c).unwrap();
        let r = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(l, r);
    }

    #[test]
    fn product_is_supercommutative(a in monomial_strategy(), b in monomial_strategy()) {
        let s = sig();
        let (pa, pb) = (Poly::monomial(&s, a.clone()), Poly::monomial(&s, b.clone()));
        let ab = pa.mul(&pb).unwrap();
        let ba = pb.mul(&pa).unwrap();
        let sign = s.field().signed(cartan_super::Fp::ONE, a.parity().koszul(b.parity()));
        prop_assert_eq!(ab, ba.scale(sign));
    }

    #[test]
    fn partials_are_superderivations(a in poly_strategy(), b in poly_strategy(), r in 1usize..=4) {
        let s = sig();
        let pr = s.index_parity(r).unwrap();
        let lhs = a.mul(&b).unwrap().partial(r).unwrap();
        let mut rhs = a.partial(r).unwrap().mul(&b).unwrap();
        for part in a.homogeneous_parts() {
            let neg = part.parity().is_some_and(|q| pr.koszul(q));
            let t = part.mul(&b.partial(r).unwrap()).unwrap();
            rhs = rhs.add(&t.scale(s.field().signed(cartan_super::Fp::ONE, neg))).unwrap();
        }
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn odd_partials_square_to_zero(a in poly_strategy(), r in 3usize..=4) {
        prop_assert!(a.partial(r).unwrap().partial(r).unwrap().is_zero());
        prop_assert_eq!(sig().index_parity(r).unwrap(), Parity::Odd);
    }
}

use cartan_super::linalg::dense_rank;
use cartan_super::{Fp, PrimeField, SparseMatrix, SparseVec, Subspace};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn field() -> PrimeField {
    PrimeField::new(5).unwrap()
}

fn random_dense(rng: &mut ChaCha8Rng, rows: usize, cols: usize, density: f64) -> Vec<Vec<Fp>> {
    let f = field();
    (0..rows)
        .map(|_| {
            (0..cols)
                .map(|_| {
                    if rng.gen_bool(density) {
                        f.elem(rng.gen_range(1..5))
                    } else {
                        Fp::ZERO
                    }
                })
                .collect()
        })
        .collect()
}

#[test]
fn sparse_and_dense_rank_agree_on_random_instances() {
    let f = field();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for k in 0..100 {
        let rows = rng.gen_range(1..=200);
        let cols = rng.gen_range(1..=200);
        let dense = if k % 5 == 0 {
            // low rank: product of thin factors
            let r = rng.gen_range(1..=20);
            let a = SparseMatrix::from_dense(r, &random_dense(&mut rng, rows, r, 0.5)).unwrap();
            let b = SparseMatrix::from_dense(cols, &random_dense(&mut rng, r, cols, 0.5)).unwrap();
            a.mul(&f, &b).unwrap().to_dense()
        } else {
            random_dense(&mut rng, rows, cols, [0.01, 0.05, 0.2, 0.7][k % 4])
        };
        let m = SparseMatrix::from_dense(cols, &dense).unwrap();
        let r = dense_rank(&f, &dense);
        assert_eq!(m.rank_sparse(&f), r, "instance {k} ({rows}x{cols})");
        assert_eq!(m.rank(&f), r);
        assert_eq!(m.kernel_basis(&f).dim() + r, cols);
    }
}

#[test]
fn kernel_vectors_are_annihilated() {
    let f = field();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let dense = random_dense(&mut rng, 30, 40, 0.2);
        let m = SparseMatrix::from_dense(40, &dense).unwrap();
        for v in m.kernel_basis(&f).basis() {
            assert!(m.mul_vec(&f, v).is_zero());
        }
    }
}

#[test]
fn rref_is_canonical_for_the_row_space() {
    let f = field();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let dense = random_dense(&mut rng, 12, 15, 0.3);
    let m = SparseMatrix::from_dense(15, &dense).unwrap();
    let mut shuffled = dense.clone();
    shuffled.reverse();
    let doubled: Vec<Vec<Fp>> = shuffled
        .iter()
        .map(|r| r.iter().map(|&x| f.add(x, x)).collect())
        .collect();
    let m2 = SparseMatrix::from_dense(15, &doubled).unwrap();
    assert_eq!(m.rref(&f), m2.rref(&f));
}

fn vec_strategy(len: usize) -> impl Strategy<Value = SparseVec> {
    prop::collection::vec(0u32..5, len).prop_map(|v| {
        SparseVec::from_dense(
            &v.into_iter()
                .map(|x| field().elem(x.into()))
                .collect::<Vec<_>>(),
        )
    })
}

fn subspace_strategy() -> impl Strategy<Value = Subspace> {
    prop::collection::vec(vec_strategy(8), 0..6)
        .prop_map(|rows| Subspace::span(field(), 8, rows).unwrap())
}

proptest! {
    #[test]
    fn dimension_formula_for_sum_and_intersection(u in subspace_strategy(), w in subspace_strategy()) {
        let s = u.sum(&w).unwrap();
        let i = u.intersect(&w).unwrap();
        prop_assert_eq!(s.dim() + i.dim(), u.dim() + w.dim());
        prop_assert!(i.is_subspace_of(&u).unwrap() && i.is_subspace_of(&w).unwrap());
        prop_assert!(u.is_subspace_of(&s).unwrap() && w.is_subspace_of(&s).unwrap());
    }

    #[test]
    fn span_membership(rows in prop::collection::vec(vec_strategy(6), 1..5), coeffs in prop::collection::vec(0i64..5, 5)) {
        let f = field();
        let u = Subspace::span(f, 6, rows.clone()).unwrap();
        let mut v = SparseVec::new();
        for (r, &c) in rows.iter().zip(&coeffs) {
            v = v.axpy(&f, f.elem(c), r);
        }
        prop_assert!(u.contains(&v).unwrap());
        prop_assert!(u.equal(&Subspace::span(f, 6, u.basis().to_vec()).unwrap()).unwrap());
    }

    #[test]
    fn transpose_preserves_rank(rows in prop::collection::vec(vec_strategy(7), 1..9)) {
        let f = field();
        let m = SparseMatrix::from_rows(7, rows).unwrap();
        prop_assert_eq!(m.rank(&f), m.transpose().rank(&f));
    }
}

#[test]
fn out_of_range_vectors_are_rejected() {
    assert!(Subspace::span(field(), 3, [SparseVec::unit(5)]).is_err());
    assert!(SparseMatrix::from_rows(2, vec![SparseVec::unit(2)]).is_err());
}

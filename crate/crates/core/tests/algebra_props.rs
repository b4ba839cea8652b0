use liftcollapse::certificate::{det_expansion, matrix_a, matrix_b, matrix_b_by_column_sums, omega};
use liftcollapse::exact::{rat, RMatrix, RVector, Rational};
use liftcollapse::perm::{act_on_vector, reynolds_full, PermGroup, Permutation};
use num_traits::Zero;
use proptest::prelude::*;

fn small_rat() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=5).prop_map(|(a, b)| rat(a, b))
}

fn unit_rat() -> impl Strategy<Value = Rational> {
    (2i64..=40).prop_flat_map(|d| (1..d).prop_map(move |n| rat(n, d)))
}

fn square(n: usize) -> impl Strategy<Value = RMatrix> {
    prop::collection::vec(small_rat(), n * n).prop_map(move |v| {
        RMatrix::from_rows(v.chunks(n).map(<[Rational]>::to_vec).collect()).unwrap()
    })
}

fn sized_square(max: usize) -> impl Strategy<Value = RMatrix> {
    (1..=max).prop_flat_map(square)
}

fn theta(max_t: usize) -> impl Strategy<Value = (usize, RVector)> {
    (0..=max_t).prop_flat_map(|t| (Just(t), prop::collection::vec(unit_rat(), t + 1)))
}

fn permutation(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle().prop_map(|v| Permutation::new(v).unwrap())
}

fn group() -> impl Strategy<Value = PermGroup> {
    (2usize..=5).prop_flat_map(|n| {
        prop::collection::vec(permutation(n), 1..=3).prop_map(move |g| PermGroup::new(n, g).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn solve_round_trip((m, x) in sized_square(8).prop_flat_map(|m| {
        let n = m.rows();
        (Just(m), prop::collection::vec(small_rat(), n))
    })) {
        prop_assume!(!m.det().unwrap().is_zero());
        let b = m.mul_vec(&x).unwrap();
        prop_assert_eq!(m.solve(&b).unwrap(), x);
    }

    #[test]
    fn det_multiplicative((a, b) in (1usize..=5).prop_flat_map(|n| (square(n), square(n)))) {
        let ab = a.mul(&b).unwrap();
        prop_assert_eq!(ab.det().unwrap(), a.det().unwrap() * b.det().unwrap());
    }

    #[test]
    fn transitivity_is_monotone(g in group()) {
        let n = g.n();
        for k in 1..n {
            if g.is_k_transitive(k + 1, 1_000_000).unwrap() {
                prop_assert!(g.is_k_transitive(k, 1_000_000).unwrap());
            }
        }
    }

    #[test]
    fn reynolds_lands_in_fixed_space(g in group(), seed in prop::collection::vec(small_rat(), 5)) {
        let x = seed[..g.n()].to_vec();
        let avg = reynolds_full(&x, &g, 1_000_000).unwrap();
        for p in g.generators() {
            prop_assert_eq!(act_on_vector(p, &avg).unwrap(), avg.clone());
        }
    }

    #[test]
    fn determinant_equals_omega((t, th) in theta(5)) {
        let a = matrix_a(t, &th).unwrap();
        prop_assert_eq!(a.det().unwrap(), omega(t, &th).unwrap());
        let b = matrix_b(t, &th).unwrap();
        prop_assert_eq!(&b, &matrix_b_by_column_sums(t, &th).unwrap());
        prop_assert_eq!(b.det().unwrap(), omega(t, &th).unwrap());
    }

    #[test]
    fn first_column_expansion((k, d) in theta(5)) {
        for i in 0..=k {
            let direct = matrix_a(k - i, &d[i..]).unwrap().det().unwrap();
            prop_assert_eq!(det_expansion(k, i, &d).unwrap(), direct);
        }
    }
}

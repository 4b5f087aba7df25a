use std::collections::BTreeSet;

use kreg::constructions::{thm3_map, thm4_map};
use kreg::linalg::Matrix;
use kreg::poly::{enumerate_monomials, Monomial, PolyMap, Polynomial, WeightVector};
use kreg::regularity::{eval_matrix, PointTuple};
use kreg::scalar::{Rational, Scalar};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=6).prop_map(|(a, b)| Rational::new(BigInt::from(a), BigInt::from(b)))
}

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    rational().prop_filter("nonzero", |r| !r.is_zero())
}

fn polynomial(n: usize) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((prop::collection::vec(0u32..4, n), rational()), 0..6).prop_map(
        move |terms| {
            terms.into_iter().fold(Polynomial::zero(n), |acc, (e, c)| {
                acc.add(&Polynomial::from_monomial(Monomial::new(e), c))
            })
        },
    )
}

fn matrix(max_r: usize, max_c: usize) -> impl Strategy<Value = Matrix> {
    (1..=max_r, 1..=max_c).prop_flat_map(|(r, c)| {
        // Small integer entries make rank deficiency common.
        prop::collection::vec(
            prop_oneof![3 => (-2i64..=2).prop_map(Rational::from_i64), 1 => rational()],
            r * c,
        )
        .prop_map(move |d| Matrix::from_vec(r, c, d).unwrap())
    })
}

/// Textbook Gauss–Jordan rank with exact field division.
fn naive_rank(m: &Matrix) -> usize {
    let mut a = m.to_rows();
    let (rows, cols) = (m.rows(), m.cols());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(p, r);
        let inv = Rational::one() / &a[r][c];
        let pivot_row: Vec<Rational> = a[r].iter().map(|x| x * &inv).collect();
        for (i, row) in a.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for j in 0..cols {
                    row[j] = &row[j] - &f * &pivot_row[j];
                }
            }
        }
        a[r] = pivot_row;
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

fn binomial(n: u64, k: u64) -> u64 {
    (1..=k).fold(1, |acc, i| acc * (n + 1 - i) / i)
}

proptest! {
    #[test]
    fn monomial_enumeration_matches_brute_force(n in 1usize..4, d in 0u32..5) {
        let got = enumerate_monomials(n, d).unwrap();
        prop_assert_eq!(got.len() as u64, binomial(n as u64 + d as u64, n as u64));
        let mut brute = BTreeSet::new();
        let mut e = vec![0u32; n];
        loop {
            if e.iter().sum::<u32>() <= d {
                brute.insert(Monomial::new(e.clone()));
            }
            let mut i = 0;
            while i < n && e[i] == d {
                e[i] = 0;
                i += 1;
            }
            if i == n {
                break;
            }
            e[i] += 1;
        }
        let as_set: BTreeSet<Monomial> = got.iter().cloned().collect();
        prop_assert_eq!(as_set, brute);
        prop_assert!(got.windows(2).all(|w| w[0].degree() <= w[1].degree()));
    }

    #[test]
    fn evaluation_is_a_ring_homomorphism(
        p in polynomial(3),
        q in polynomial(3),
        x in prop::collection::vec(rational(), 3),
    ) {
        let (pv, qv) = (p.eval(&x).unwrap(), q.eval(&x).unwrap());
        prop_assert_eq!(p.add(&q).eval(&x).unwrap(), pv.clone() + &qv);
        prop_assert_eq!(p.mul(&q).eval(&x).unwrap(), pv * qv);
    }

    #[test]
    fn polynomial_json_round_trips(p in polynomial(3)) {
        prop_assert_eq!(Polynomial::from_json(&p.to_json()).unwrap(), p);
    }

    #[test]
    fn weighted_components_scale_by_lambda_power(
        x in prop::collection::vec(rational(), 3),
        lambda in nonzero_rational(),
    ) {
        for (map, w) in [
            (thm3_map(3, 4, true).unwrap(), vec![4u64, 6, 9]),
            (thm4_map(3, 5, false).unwrap(), vec![16, 12, 9]),
        ] {
            let w = WeightVector::new(w).unwrap();
            let moved = w.act(&lambda, &x);
            for f in map.components() {
                let d = f.weighted_degree(&w).unwrap().unwrap();
                prop_assert_eq!(
                    f.eval(&moved).unwrap(),
                    Scalar::pow(&lambda, d as u32) * f.eval(&x).unwrap()
                );
            }
        }
    }

    #[test]
    fn rank_agrees_with_gauss_jordan(m in matrix(8, 16)) {
        prop_assert_eq!(m.rank(), naive_rank(&m));
    }

    #[test]
    fn rank_is_transpose_invariant(m in matrix(6, 9)) {
        prop_assert_eq!(m.rank(), m.transpose().rank());
    }

    #[test]
    fn nonzero_column_scaling_preserves_rank(m in matrix(6, 9), c in nonzero_rational(), j in 0usize..9) {
        let j = j % m.cols();
        prop_assert_eq!(m.scale_column(j, &c).rank(), m.rank());
    }

    #[test]
    fn kernel_basis_is_a_basis_of_the_kernel(m in matrix(6, 9)) {
        let k = m.kernel_basis();
        prop_assert_eq!(k.len(), m.cols() - m.rank());
        for v in &k {
            prop_assert!(m.mul_vec(v).unwrap().iter().all(Zero::is_zero));
        }
        if !k.is_empty() {
            prop_assert_eq!(Matrix::from_rows(k).unwrap().rank(), m.cols() - m.rank());
        }
    }

    #[test]
    fn particular_solutions_solve(m in matrix(6, 9), x in prop::collection::vec(rational(), 9)) {
        let x = &x[..m.cols()];
        let b = m.mul_vec(x).unwrap();
        let sol = m.solve_particular(&b).unwrap().expect("b is in the column space");
        prop_assert_eq!(m.mul_vec(&sol).unwrap(), b);
    }

    #[test]
    fn evaluation_matrix_rows_are_map_values(pts in prop::collection::vec(prop::collection::vec(-5i64..=5, 3), 1..5)) {
        let map = thm3_map(3, 4, true).unwrap();
        let mut seen = BTreeSet::new();
        let pts: Vec<Vec<Rational>> = pts
            .into_iter()
            .filter(|p| seen.insert(p.clone()))
            .map(|p| p.into_iter().map(Rational::from_i64).collect())
            .collect();
        let tuple = PointTuple::new(pts.clone()).unwrap();
        let e = eval_matrix(&map, &tuple).unwrap();
        for (i, p) in pts.iter().enumerate() {
            let expect = map.eval(p).unwrap();
            prop_assert_eq!(e.row(i), expect.as_slice());
        }
    }
}

#[test]
fn polymap_json_round_trips() {
    for map in [
        thm3_map(3, 4, true).unwrap(),
        thm4_map(3, 5, false).unwrap(),
    ] {
        let text = map.to_json_string();
        let back = PolyMap::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back.to_json_string(), text);
    }
}

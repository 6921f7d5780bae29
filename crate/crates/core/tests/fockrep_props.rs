//! Truncated Fock models: evaluation, interiors and norm bounds on random inputs.

mod common;

use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;

use common::{num_element, raw_word, term_data};
use qcuntz::fockrep::{
    build_fock_rep, compressed_norm, evaluate, gauge_average, s_conjugation_sum, shifted_range_residual, FockForm,
    Rep, SparseOp, TruncFock,
};
use qcuntz::symalg::{Expectation, NumAlgebra, RawLetter};

const FORMS: [FockForm; 3] = [FockForm::A, FockForm::B, FockForm::C];

fn q_of(phi: f64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * phi)
}

fn raw_product(rep: &Rep, word: &[RawLetter]) -> SparseOp {
    word.iter().fold(rep.identity(), |acc, l| {
        let g = rep.generator(l.letter).unwrap();
        acc.mul(&if l.star { g.adjoint() } else { g.clone() })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn evaluate_is_a_homomorphism_on_the_interior(x in term_data(2, 2, 2, 3), y in term_data(2, 2, 2, 3), phi in 0.0..1.0f64, form in 0..3usize) {
        let q = q_of(phi);
        let alg = NumAlgebra::numeric(2, 2, q, true).unwrap();
        let rep = build_fock_rep(2, 2, 5, 5, q, FORMS[form]).unwrap();
        let (x, y) = (num_element(&alg, &x), num_element(&alg, &y));
        let (ex, ey) = (evaluate(&x, &rep).unwrap(), evaluate(&y, &rep).unwrap());
        let mask = rep.interior(4);
        prop_assert!(evaluate(&(&x * &y), &rep).unwrap().sub(&ex.mul(&ey)).max_column_norm(&mask) < 1e-10);
        prop_assert!(compressed_norm(&evaluate(&x.adjoint(), &rep).unwrap().sub(&ex.adjoint()), &rep.interior(2)) < 1e-10);
    }

    #[test]
    fn generator_products_do_not_depend_on_the_truncation(w in raw_word(2, 2, 3), phi in 0.0..1.0f64, form in 0..3usize) {
        let q = q_of(phi);
        let (small, big) = (TruncFock::pair(2, 2, 4, 4).unwrap(), TruncFock::pair(2, 2, 5, 5).unwrap());
        let rs = build_fock_rep(2, 2, 4, 4, q, FORMS[form]).unwrap();
        let rb = build_fock_rep(2, 2, 5, 5, q, FORMS[form]).unwrap();
        let (ps, pb) = (raw_product(&rs, &w), raw_product(&rb, &w));
        let to_big = |i: usize| {
            let (mu, mu2) = small.basis_words(i);
            big.index(&mu, &mu2).unwrap()
        };
        let mask = rs.interior(w.len());
        for col in (0..rs.dim()).filter(|&c| mask[c]) {
            let mut image: Vec<(usize, Complex64)> = ps.column(col).iter().map(|&(r, v)| (to_big(r), v)).collect();
            image.sort_by_key(|e| e.0);
            let mut expected = pb.column(to_big(col)).to_vec();
            expected.sort_by_key(|e| e.0);
            prop_assert_eq!(image.len(), expected.len());
            for (a, b) in image.iter().zip(&expected) {
                prop_assert_eq!(a.0, b.0);
                prop_assert!((a.1 - b.1).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn conjugation_sums_are_contractive(x in term_data(2, 2, 3, 4), phi in 0.0..1.0f64, k in 0..3usize) {
        let q = q_of(phi);
        let alg = NumAlgebra::numeric(2, 2, q, true).unwrap();
        let rep = build_fock_rep(2, 2, 3, 3, q, FockForm::A).unwrap();
        let op = evaluate(&num_element(&alg, &x), &rep).unwrap();
        let all = vec![true; rep.dim()];
        let lhs = compressed_norm(&s_conjugation_sum(&rep, &op, k), &all);
        prop_assert!(lhs <= compressed_norm(&op, &all) * (1.0 + 1e-12) + 1e-14);
    }

    #[test]
    fn shifted_ranges_and_gauge_averages(x in term_data(2, 2, 3, 4), phi in 0.0..1.0f64, form in 0..3usize) {
        let q = q_of(phi);
        let alg = NumAlgebra::numeric(2, 2, q, true).unwrap();
        let rep = build_fock_rep(2, 2, 4, 4, q, FORMS[form]).unwrap();
        for k in 0..=2 {
            prop_assert!(shifted_range_residual(&rep, k) < 1e-12);
        }
        let x = num_element(&alg, &x);
        let averaged = gauge_average(&evaluate(&x, &rep).unwrap(), &rep, 8).unwrap();
        let direct = evaluate(&x.expectation(Expectation::Phi), &rep).unwrap();
        prop_assert!(averaged.sub(&direct).max_column_norm(&rep.interior(3)) < 1e-10);
    }
}

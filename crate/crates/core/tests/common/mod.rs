//! Shared proptest strategies and builders.
#![allow(dead_code)]

use std::sync::Arc;

use num_complex::Complex64;
use proptest::prelude::*;

use qcuntz::coeff::{DeformVars, Gauss, PhaseCoeff};
use qcuntz::symalg::{Element, Letter, NumAlgebra, NumElement, RawLetter, RawWord, SymAlgebra, SymElement};

/// Letters over `s_1..s_n`, `t_1..t_m`, each starred or not.
pub fn raw_word(n: u16, m: u16, max_len: usize) -> impl Strategy<Value = RawWord> {
    let letter = (any::<bool>(), 1..=n.max(m), any::<bool>()).prop_map(move |(is_s, i, star)| {
        let l = if is_s { Letter::s(1 + (i - 1) % n) } else { Letter::t(1 + (i - 1) % m) };
        RawLetter::new(l, star)
    });
    prop::collection::vec(letter, 0..=max_len)
}

/// `(q-exponents, re, im, word)` terms.
pub type TermData = Vec<((i32, i32), i64, i64, RawWord)>;

pub fn term_data(n: u16, m: u16, max_len: usize, max_terms: usize) -> impl Strategy<Value = TermData> {
    prop::collection::vec(((0..3i32, -2..3i32), -3..4i64, -3..4i64, raw_word(n, m, max_len)), 1..=max_terms)
}

pub fn coeff(vars: DeformVars, exps: (i32, i32), re: i64, im: i64) -> PhaseCoeff {
    let g = Gauss::from_ints(i128::from(re), i128::from(im));
    let e = match vars {
        DeformVars::SingleGeneric => vec![exps.0, exps.1.abs()],
        DeformVars::SingleUnimodular => vec![exps.0 + exps.1],
        DeformVars::MultiUnimodular { n, m } => {
            let mut v = vec![0; n * m];
            v[0] = exps.0;
            v[n * m - 1] = exps.1;
            v
        }
    };
    PhaseCoeff::monomial(vars, e, g).unwrap()
}

pub fn sym_element(alg: &Arc<SymAlgebra>, data: &TermData) -> SymElement {
    let vars = alg.vars().unwrap();
    let terms: Vec<_> = data.iter().map(|(e, re, im, w)| (coeff(vars, *e, *re, *im), w.clone())).collect();
    Element::from_raw(alg, &terms).unwrap()
}

pub fn num_element(alg: &Arc<NumAlgebra>, data: &TermData) -> NumElement {
    let terms: Vec<_> = data
        .iter()
        .map(|(_, re, im, w)| (Complex64::new(*re as f64 / 3.0, *im as f64 / 3.0), w.clone()))
        .collect();
    Element::from_raw(alg, &terms).unwrap()
}

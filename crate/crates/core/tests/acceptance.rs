//! Acceptance criteria 1–9: one PASS/FAIL line each, nonzero exit on failure.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qcuntz::coeff::DeformVars;
use qcuntz::cuntzq::{
    commutation_phase_failures, fixed_point_unit_failures, fixed_point_words, isometry_failures,
    pure_infinite_witness, witness_residual,
};
use qcuntz::fockrep::{
    braid_residuals, build_fock_rep, evaluate, relation_residuals_at, wick_norm, wick_t, FockForm, Rep,
    SparseOp,
};
use qcuntz::kgroups::{k_table, FgAbGroup};
use qcuntz::rieffel::{
    crossed_untwist_check, deformed_fock_deviation, double_deform_check, theta_from_q, twisted_product,
    ExactPhase, GradedOperator,
};
use qcuntz::symalg::{
    normal_order, normal_order_with, parse_expr, Element, Expectation, Letter, Monomial, NumAlgebra,
    RawLetter, RawWord, SymAlgebra,
};
use qcuntz::untwist::{partial_sum_identity, roundtrip_check};

const SEED: u64 = 20_240_917;

type Outcome = Result<String, String>;

fn polar(r: f64, phi: f64) -> Complex64 {
    Complex64::from_polar(r, 2.0 * PI * phi)
}

fn require(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn within(limit: Duration, start: Instant, detail: String) -> Outcome {
    let spent = start.elapsed();
    require(spent < limit, format!("{detail}; {:.2} s of {} s", spent.as_secs_f64(), limit.as_secs()))
}

fn lib<T>(r: qcuntz::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

/// Relations of the three Fock forms at `N = M = 4`, interior of order 2.
fn relations() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for q in [Complex64::new(1.0, 0.0), polar(1.0, 0.3), Complex64::new(0.0, 1.0)] {
        for form in [FockForm::A, FockForm::B, FockForm::C] {
            let rep = lib(build_fock_rep(2, 2, 4, 4, q, form))?;
            let table = relation_residuals_at(&rep, q, 2);
            if table.len() != 4 {
                return Err(format!("expected 4 relation families, got {}", table.len()));
            }
            worst = table.values().fold(worst, |a, &b| a.max(b));
        }
    }
    let detail = format!("max residual {worst:.2e} < 1e-12");
    if worst >= 1e-12 {
        return Err(detail);
    }
    within(Duration::from_secs(5), start, detail)
}

/// Round trip at `L = 5` and the partial-sum identity for `N ≤ 3`.
fn untwist() -> Outcome {
    let start = Instant::now();
    let (mut dev, mut partial): (f64, f64) = (0.0, 0.0);
    for q in [Complex64::new(0.0, 0.0), Complex64::new(0.5, 0.0), polar(0.5, 0.2)] {
        let r = lib(roundtrip_check(2, 2, q, 5))?;
        dev = dev.max(r.deviation_e0).max(r.deviation_eq);
        for big_n in 0..=3 {
            partial = partial.max(lib(partial_sum_identity(2, 2, q, 5, big_n))?);
        }
    }
    let detail = format!("round trip {dev:.2e} < 1e-10, partial sums {partial:.2e} < 1e-12");
    if dev >= 1e-10 || partial >= 1e-12 {
        return Err(detail);
    }
    within(Duration::from_secs(10), start, detail)
}

fn random_word(rng: &mut ChaCha8Rng, n: usize, m: usize, max_len: usize) -> RawWord {
    let len = rng.gen_range(0..=max_len);
    (0..len)
        .map(|_| {
            let letter = if rng.gen_bool(0.5) {
                Letter::s(rng.gen_range(1..=n as u16))
            } else {
                Letter::t(rng.gen_range(1..=m as u16))
            };
            RawLetter::new(letter, rng.gen_bool(0.5))
        })
        .collect()
}

/// Product of generator matrices, letter by letter, without rewriting.
fn raw_product(rep: &Rep, word: &[RawLetter]) -> Result<SparseOp, String> {
    let mut acc = rep.identity();
    for l in word {
        let g = lib(rep.generator(l.letter))?;
        acc = acc.mul(&if l.star { g.adjoint() } else { g.clone() });
    }
    Ok(acc)
}

/// `evaluate(normal form)` against raw matrix products on 200 elements.
fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let qs = [Complex64::new(1.0, 0.0), polar(1.0, 0.3), Complex64::new(0.0, 1.0)];
    let forms = [FockForm::A, FockForm::B, FockForm::C];
    let mut reps = Vec::new();
    for (k, &q) in qs.iter().enumerate() {
        let alg = lib(NumAlgebra::numeric(2, 2, q, true))?;
        let rep = lib(build_fock_rep(2, 2, 5, 5, q, forms[k]))?;
        let mask = rep.interior(4);
        reps.push((alg, rep, mask));
    }
    let mut worst: f64 = 0.0;
    for i in 0..200 {
        let (alg, rep, mask) = &reps[i % reps.len()];
        let terms: Vec<(Complex64, RawWord)> = (0..rng.gen_range(1..=3))
            .map(|_| (Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)), random_word(&mut rng, 2, 2, 4)))
            .collect();
        let x = lib(Element::from_raw(alg, &terms))?;
        let symbolic = lib(evaluate(&x, rep))?;
        let mut direct = SparseOp::zeros(rep.dim(), rep.dim());
        for (c, w) in &terms {
            direct = direct.add_scaled(&raw_product(rep, w)?, *c);
        }
        worst = worst.max(symbolic.sub(&direct).max_column_norm(mask));
    }
    require(worst < 1e-10, format!("200 elements, max interior deviation {worst:.2e} < 1e-10"))
}

/// Normal forms under two random redex strategies and the default one.
fn confluence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    let generic = lib(SymAlgebra::symbolic(2, 3, DeformVars::SingleGeneric))?;
    let unimodular = lib(SymAlgebra::symbolic(3, 2, DeformVars::SingleUnimodular))?;
    let mut mismatches = 0;
    for i in 0..500 {
        let alg = if i % 2 == 0 { &generic } else { &unimodular };
        let word = random_word(&mut rng, alg.n(), alg.m(), 10);
        let mut pick_a = ChaCha8Rng::seed_from_u64(SEED + 2 * i as u64);
        let mut pick_b = ChaCha8Rng::seed_from_u64(SEED + 2 * i as u64 + 1);
        let a = lib(normal_order_with(alg, alg.unit().clone(), &word, |c| pick_a.gen_range(0..c.len())))?;
        let b = lib(normal_order_with(alg, alg.unit().clone(), &word, |c| pick_b.gen_range(0..c.len())))?;
        let d = lib(normal_order(alg, alg.unit().clone(), &word))?;
        mismatches += usize::from(a != b || a != d);
    }
    require(mismatches == 0, format!("500 words, {mismatches} mismatched normal forms"))
}

fn random_sym_element(rng: &mut ChaCha8Rng, alg: &Arc<SymAlgebra>) -> Result<Element<qcuntz::coeff::PhaseCoeff>, String> {
    let words: Vec<_> = (0..rng.gen_range(1..=4))
        .map(|_| (alg.unit().clone(), random_word(rng, alg.n(), alg.m(), 6)))
        .collect();
    lib(Element::from_raw(alg, &words))
}

/// Matrix units, expectation idempotence, the implementing isometry and the
/// commutation phase, all exact.
fn structure() -> Outcome {
    let alg = lib(SymAlgebra::symbolic(2, 2, DeformVars::SingleUnimodular))?;
    let units = lib(fixed_point_unit_failures(&alg, 1, 1))? + lib(fixed_point_unit_failures(&alg, 2, 1))?;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 3);
    let mut idempotence = 0;
    for _ in 0..50 {
        let x = random_sym_element(&mut rng, &alg)?;
        for which in [Expectation::Phi1, Expectation::Phi2, Expectation::Phi] {
            let y = x.expectation(which);
            idempotence += usize::from(y.expectation(which) != y);
        }
    }
    let isometry = lib(isometry_failures(&alg, 1, 1))?;
    let phase = lib(commutation_phase_failures(&alg, 2))?;
    let detail = format!(
        "failures: matrix units {units}, idempotence {idempotence}, isometry {isometry}, commutation phase {phase}"
    );
    require(units + idempotence + isometry + phase == 0, detail)
}

/// `‖axb − 1‖` for 20 random nonzero inputs in `F_{1,1}`.
fn witness() -> Outcome {
    let start = Instant::now();
    let alg = lib(NumAlgebra::numeric(2, 2, polar(1.0, 0.3), true))?;
    let basis = fixed_point_words(2, 2, 1, 1);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 4);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let terms: Vec<(Monomial, Complex64)> = basis
            .iter()
            .flat_map(|a| basis.iter().map(move |b| (a.clone(), b.clone())))
            .map(|(a, b)| (Monomial::new(a, b), Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))))
            .collect();
        let x = Element::from_terms(&alg, terms);
        let w = lib(pure_infinite_witness(&x))?;
        worst = worst.max(lib(witness_residual(&x, &w))?);
    }
    let detail = format!("20 witnesses, max residual {worst:.2e} < 1e-8");
    if worst >= 1e-8 {
        return Err(detail);
    }
    within(Duration::from_secs(30), start, detail)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// K-table for `2 ≤ n, m ≤ 30` against the gcd formula, plus `(3, 5)`.
fn ktable() -> Outcome {
    let start = Instant::now();
    let mut bad = Vec::new();
    for n in 2..=30 {
        for m in 2..=30 {
            let t = lib(k_table(n, m))?;
            let d = gcd(n - 1, m - 1);
            let zd = FgAbGroup::cyclic(d).to_string();
            let ok = t.routes_agree
                && t.d == d
                && t.K0_OnOm == zd
                && t.K1_OnOm == zd
                && t.KK1_order == u128::from(d).pow(3)
                && t.Ext_trivial == (d == 1);
            if !ok {
                bad.push((n, m));
            }
        }
    }
    let t = lib(k_table(3, 5))?;
    let example = t.d == 2
        && t.K0_OnOm == "Z/2Z"
        && t.K1_OnOm == "Z/2Z"
        && t.K0_Mq == "Z/2Z ⊕ Z"
        && t.K1_Mq == "0"
        && t.KK1_order == 8;
    let detail = format!("{} mismatched pairs, (3,5) example {}", bad.len(), if example { "ok" } else { "wrong" });
    if !bad.is_empty() || !example {
        return Err(detail);
    }
    within(Duration::from_secs(1), start, detail)
}

/// Exact phases, exact double deformation, the deformed Fock model and the
/// crossed-product untwist.
fn rieffel() -> Outcome {
    let q = polar(1.0, 0.3);
    let theta = lib(theta_from_q(q))?;
    let alg = lib(NumAlgebra::numeric(2, 2, q, true))?;
    let s1 = lib(GradedOperator::num(lib(Element::s(&alg, 1))?))?;
    let t1 = lib(GradedOperator::num(lib(Element::t(&alg, 1))?))?;
    // e^{∓iπφ₀} = e^{2πi c (∓1)} with c = φ₀/2 = 0.15
    let mut phases_exact = true;
    for (a, b, units) in [(&s1, &t1, -1), (&t1, &s1, 1)] {
        let mut inverse = ExactPhase::zero();
        inverse.add(0.15, -units);
        phases_exact &= lib(twisted_product(a, b, theta))?.phase.merged(&inverse).is_zero();
    }
    let sym = lib(SymAlgebra::symbolic(2, 2, DeformVars::SingleUnimodular))?;
    let samples: Vec<GradedOperator> = ["1", "s1", "t2", "s1*t1'", "t1*t2*s2'", "s2'*s1'", "s1*s2*t1'"]
        .iter()
        .map(|e| lib(GradedOperator::sym(lib(parse_expr(e, &sym))?)))
        .collect::<Result<_, _>>()?;
    let double = lib(double_deform_check(&samples, theta))?;
    let fock = lib(deformed_fock_deviation(2, 2, 4, 4, q))?;
    let crossed = lib(crossed_untwist_check(2, 2, q, 4, 4))?.values().fold(0.0, |a: f64, &b| a.max(b));
    let detail = format!(
        "phases {}, double deformation {double:e}, Fock form A {fock:.2e} < 1e-13, crossed product {crossed:.2e} < 1e-13",
        if phases_exact { "exact" } else { "wrong" }
    );
    require(phases_exact && double == 0.0 && fock < 1e-13 && crossed < 1e-13, detail)
}

/// `‖T‖ = |q0|` and the braid relation.
fn wick() -> Outcome {
    let (mut norm_dev, mut braid): (f64, f64) = (0.0, 0.0);
    for (n, m) in [(1, 1), (2, 2)] {
        for q in [Complex64::new(0.5, 0.0), polar(1.0, 0.3)] {
            let t = wick_t(n, m, q);
            norm_dev = norm_dev.max((wick_norm(&t) - q.norm()).abs());
            braid = braid.max(braid_residuals(&t).standard);
        }
    }
    require(
        norm_dev < 1e-12 && braid < 1e-12,
        format!("norm deviation {norm_dev:.2e} < 1e-12, braid residual {braid:.2e} < 1e-12"),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("relation suite", relations),
        ("untwist suite", untwist),
        ("symbolic/numeric equivalence", oracle_equivalence),
        ("rewrite confluence", confluence),
        ("structure suite", structure),
        ("pure-infiniteness witness", witness),
        ("K-table", ktable),
        ("Rieffel suite", rieffel),
        ("Wick operator", wick),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS {} {name}: {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {} {name}: {detail}", k + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

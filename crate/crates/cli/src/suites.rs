//! The individual verification suites.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qcuntz::coeff::DeformVars;
use qcuntz::cuntzq::{
    commutation_phase_failures, fixed_point_unit_failures, fixed_point_words, ideal_membership,
    isometry_failures, pure_infinite_witness, witness_residual, IdealFlags,
};
use qcuntz::fockrep::{
    braid_residuals, build_fock_rep, concrete_theta_rep, relation_residuals_at, theta_relation_residuals,
    wick_norm, wick_t, wold_classify, FockForm,
};
use qcuntz::kgroups::k_table;
use qcuntz::rieffel::{
    crossed_untwist_check, deformed_fock_deviation, double_deform_check, theta_from_q, twisted_product,
    ExactPhase, GradedOperator,
};
use qcuntz::symalg::{parse_expr, Element, Expectation, Monomial, NumAlgebra, SymAlgebra};
use qcuntz::untwist::{partial_sum_identity, roundtrip_check};

use crate::{Check, CliError, SuiteConfig};

pub const SUITES: [&str; 8] = ["relations", "untwist", "rieffel", "ideals", "expectations", "witness", "ktable", "wick"];

pub(crate) struct SuiteOutput {
    pub checks: Vec<Check>,
    pub table: Option<serde_json::Value>,
}

type Out = Result<SuiteOutput, CliError>;

fn plain(checks: Vec<Check>) -> Out {
    Ok(SuiteOutput { checks, table: None })
}

pub(crate) fn run(name: &str, cfg: &SuiteConfig) -> Out {
    match name {
        "relations" => relations(cfg),
        "untwist" => untwist(cfg),
        "rieffel" => rieffel(cfg),
        "ideals" => ideals(cfg),
        "expectations" => expectations(cfg),
        "witness" => witness(cfg),
        "ktable" => ktable(cfg),
        "wick" => wick(cfg),
        other => Err(CliError::UnknownSuite(other.into())),
    }
}

fn polar(r: f64, phi: f64) -> Complex64 {
    Complex64::from_polar(r, 2.0 * PI * phi)
}

/// The configured `q0`, or the suite's default sweep.
fn q_values(cfg: &SuiteConfig, defaults: &[Complex64]) -> Vec<Complex64> {
    match cfg.q0() {
        Some(q) => vec![q],
        None => defaults.to_vec(),
    }
}

fn q_label(q: Complex64) -> String {
    format!("q={:.6}{:+.6}i", q.re, q.im)
}

fn sym_algebra(cfg: &SuiteConfig) -> Result<std::sync::Arc<SymAlgebra>, CliError> {
    Ok(SymAlgebra::symbolic(cfg.n, cfg.m, DeformVars::SingleUnimodular)?)
}

fn relations(cfg: &SuiteConfig) -> Out {
    let mut checks = Vec::new();
    let qs = q_values(cfg, &[Complex64::new(1.0, 0.0), polar(1.0, 0.3), Complex64::new(0.0, 1.0)]);
    for q in qs {
        for (form, tag) in [(FockForm::A, "A"), (FockForm::B, "B"), (FockForm::C, "C")] {
            let rep = build_fock_rep(cfg.n, cfg.m, cfg.trunc.n, cfg.trunc.m, q, form)?;
            for (rel, r) in relation_residuals_at(&rep, q, 2) {
                checks.push(Check::new(format!("relations/{}/{tag}/{rel}", q_label(q)), rel, r, cfg.tol));
            }
            if form == FockForm::A {
                let w = wold_classify(&rep, q, 2, 1e-8)?;
                checks.push(Check::exact(
                    format!("relations/{}/A/wold", q_label(q)),
                    "dim H1 = dim H",
                    rep.dim() - w.dims[0],
                ));
            }
        }
    }
    if !cfg.theta.is_empty() {
        let qmat = cfg.q_matrix();
        let rep = concrete_theta_rep(cfg.n, cfg.m, &qmat, cfg.trunc.n, cfg.trunc.m, cfg.trunc.l)?;
        for (rel, r) in theta_relation_residuals(&rep, &qmat) {
            checks.push(Check::new(format!("relations/theta/{rel}"), rel, r, cfg.tol));
        }
    }
    plain(checks)
}

fn untwist(cfg: &SuiteConfig) -> Out {
    let mut checks = Vec::new();
    let qs = q_values(cfg, &[Complex64::new(0.0, 0.0), Complex64::new(0.5, 0.0), polar(0.5, 0.2)]);
    let l = cfg.trunc.l;
    for q in qs {
        let id = |s: &str| format!("untwist/{}/{s}", q_label(q));
        let report = roundtrip_check(cfg.n, cfg.m, q, l)?;
        checks.push(Check::new(id("roundtrip_e0"), "t^_r(v, w(v)) - v_{n+r}", report.deviation_e0, cfg.tol));
        checks.push(Check::new(id("roundtrip_eq"), "w_r(v, t^) - w_r", report.deviation_eq, cfg.tol));
        for (rel, r) in report.w_residuals.iter().chain(&report.hat_residuals) {
            checks.push(Check::new(id(rel), rel.clone(), *r, cfg.tol));
        }
        for big_n in 0..=3.min(l - 1) {
            let r = partial_sum_identity(cfg.n, cfg.m, q, l, big_n)?;
            checks.push(Check::new(
                id(&format!("partial_sum/N={big_n}")),
                "sum_{k<=N} q^k sum_{|mu|=k} s_mu (1-Q) t_r s_mu* = t_r - q^{N+1} sum_{|mu|=N+1} s_mu t_r s_mu*",
                r,
                cfg.tol,
            ));
        }
    }
    plain(checks)
}

fn rieffel(cfg: &SuiteConfig) -> Out {
    let mut checks = Vec::new();
    let sym = sym_algebra(cfg)?;
    let samples: Vec<GradedOperator> = ["1", "s1", "t1", "s1*t1'", "t1*t1*s1'", "s1'*s1'"]
        .iter()
        .map(|e| GradedOperator::sym(parse_expr(e, &sym)?))
        .collect::<qcuntz::Result<_>>()?;
    for q in q_values(cfg, &[polar(1.0, 0.3), Complex64::new(0.0, 1.0)]) {
        let id = |s: &str| format!("rieffel/{}/{s}", q_label(q));
        let theta = theta_from_q(q)?;
        let alg = NumAlgebra::numeric(cfg.n, cfg.m, q, true)?;
        let s1 = GradedOperator::num(Element::s(&alg, 1)?)?;
        let t1 = GradedOperator::num(Element::t(&alg, 1)?)?;
        // the expected phase e^{∓iπφ₀} is e^{2πi c (∓1)} with c = φ₀/2
        for (a, b, units, name, anchor) in [
            (&s1, &t1, -1, "phase_st", "s1 ._Theta t1 = e^{-i pi phi0} s1 t1"),
            (&t1, &s1, 1, "phase_ts", "t1 ._Theta s1 = e^{i pi phi0} t1 s1"),
        ] {
            let mut expected = ExactPhase::zero();
            expected.add(theta.c, -units);
            let got = twisted_product(a, b, theta)?.phase.merged(&expected);
            checks.push(Check::exact(id(name), anchor, usize::from(!got.is_zero())));
        }
        let dd = double_deform_check(&samples, theta)?;
        checks.push(Check::new(id("double_deformation"), "(a ._Theta b) ._{-Theta} = ab", dd, 0.0));
        let dev = deformed_fock_deviation(cfg.n, cfg.m, cfg.trunc.n, cfg.trunc.m, q)?;
        checks.push(Check::new(id("deformed_fock"), "pi_Theta(untwisted Fock) - Fock form A", dev, cfg.tol));
        for (rel, r) in crossed_untwist_check(cfg.n, cfg.m, q, cfg.trunc.n, cfg.trunc.m)? {
            checks.push(Check::new(id(&format!("crossed/{rel}")), rel, r, cfg.tol));
        }
    }
    plain(checks)
}

fn ideals(cfg: &SuiteConfig) -> Out {
    let alg = sym_algebra(cfg)?;
    let flags = |in_iq, in_i1, in_i2, in_mq| IdealFlags { in_iq, in_i1, in_i2, in_mq };
    let examples = [
        ("1", flags(false, false, false, false)),
        ("1 - Q", flags(false, true, false, true)),
        ("1 - P", flags(false, false, true, true)),
        ("(1 - Q)*(1 - P)", flags(true, true, true, true)),
        ("s1*(1 - Q)*t1'", flags(false, true, false, true)),
        ("t1*(1 - P)*s1*(1 - Q)", flags(true, true, true, true)),
        ("s1*t1 - q*t1*s1", flags(false, false, false, false)),
    ];
    let mut checks = Vec::new();
    for (k, (expr, expected)) in examples.iter().enumerate() {
        let got = ideal_membership(&parse_expr(expr, &alg)?)?;
        let mismatches = [
            got.in_iq != expected.in_iq,
            got.in_i1 != expected.in_i1,
            got.in_i2 != expected.in_i2,
            got.in_mq != expected.in_mq,
        ];
        checks.push(Check::exact(
            format!("ideals/membership/{k}"),
            format!("ideal flags of {expr}"),
            mismatches.iter().filter(|&&b| b).count(),
        ));
    }
    for (k, l) in [(1, 1), (2, 1)] {
        checks.push(Check::exact(
            format!("ideals/matrix_units/F_{k}{l}"),
            "e_ab e_cd = delta_bc e_ad, e_ab* = e_ba, sum_a e_aa = 1",
            fixed_point_unit_failures(&alg, k, l)?,
        ));
    }
    checks.push(Check::exact(
        "ideals/commutation_phase",
        "E X = q^{(|nu1|-|mu1|)(|mu2|-|nu2|)} X E, E = s_mu1 (1-Q) s_nu1*, X = t_mu2 t_nu2*",
        commutation_phase_failures(&alg, 2)?,
    ));
    plain(checks)
}

fn expectations(cfg: &SuiteConfig) -> Out {
    let alg = sym_algebra(cfg)?;
    let samples = ["1 + s1 + t1'", "s1*t1*t1'*s1' + s1*s1'*t1", "Q*P + s1'*t1*s1", "t1*s1*(1 - Q)*s1'*t1'", "s1^2*t1'^2 + t1*s1'"];
    let mut failures = [0usize; 3];
    let mut compose = 0usize;
    for e in samples {
        let x = parse_expr(e, &alg)?;
        for (k, which) in [Expectation::Phi1, Expectation::Phi2, Expectation::Phi].into_iter().enumerate() {
            let y = x.expectation(which);
            failures[k] += usize::from(y.expectation(which) != y);
        }
        let both = x.expectation(Expectation::Phi1).expectation(Expectation::Phi2);
        compose += usize::from(both != x.expectation(Expectation::Phi));
    }
    let mut checks = vec![
        Check::exact("expectations/idempotent/phi1", "phi1 o phi1 = phi1", failures[0]),
        Check::exact("expectations/idempotent/phi2", "phi2 o phi2 = phi2", failures[1]),
        Check::exact("expectations/idempotent/phi", "phi o phi = phi", failures[2]),
        Check::exact("expectations/compose", "phi2 o phi1 = phi", compose),
    ];
    checks.push(Check::exact(
        "expectations/isometry/k=1,l=1",
        "w*w = 1, [w, F_kl] = 0, w* y w = phi(y)",
        isometry_failures(&alg, 1, 1)?,
    ));
    plain(checks)
}

/// A random element of `F_{1,1}` with at least one nonzero coefficient.
fn random_f11(alg: &std::sync::Arc<NumAlgebra>, rng: &mut ChaCha8Rng) -> qcuntz::symalg::NumElement {
    let basis = fixed_point_words(alg.n(), alg.m(), 1, 1);
    loop {
        let mut terms = Vec::new();
        for a in &basis {
            for b in &basis {
                if rng.gen_bool(0.5) {
                    let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                    terms.push((Monomial::new(a.clone(), b.clone()), c));
                }
            }
        }
        if !terms.is_empty() {
            return Element::from_terms(alg, terms);
        }
    }
}

fn witness(cfg: &SuiteConfig) -> Out {
    let q = cfg.q0().unwrap_or_else(|| polar(1.0, 0.3));
    let alg = NumAlgebra::numeric(cfg.n, cfg.m, q, true)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut checks = Vec::new();
    for k in 0..20 {
        let x = random_f11(&alg, &mut rng);
        let w = pure_infinite_witness(&x)?;
        checks.push(Check::new(format!("witness/{k:02}"), "a x b - 1", witness_residual(&x, &w)?, cfg.tol));
    }
    plain(checks)
}

fn ktable(cfg: &SuiteConfig) -> Out {
    let (n, m) = (cfg.n as u64, cfg.m as u64);
    let table = k_table(n, m)?;
    let mut sweep = 0usize;
    for a in 2..=30 {
        for b in 2..=30 {
            sweep += usize::from(!k_table(a, b)?.routes_agree);
        }
    }
    let checks = vec![
        Check::exact("ktable/routes_agree", "Kunneth route = six-term route", usize::from(!table.routes_agree)),
        Check::exact("ktable/routes_agree_sweep", "Kunneth route = six-term route, 2 <= n, m <= 30", sweep),
        Check::exact(
            "ktable/kk1_order",
            "|KK1| = |K0 + K1| * d",
            usize::from(table.KK1_order != u128::from(table.d).pow(3)),
        ),
    ];
    let value = serde_json::to_value(&table).expect("table serializes");
    Ok(SuiteOutput { checks, table: Some(value) })
}

fn wick(cfg: &SuiteConfig) -> Out {
    let mut dims = vec![(1, 1), (cfg.n, cfg.m)];
    dims.dedup();
    let mut checks = Vec::new();
    for q in q_values(cfg, &[Complex64::new(0.5, 0.0), polar(1.0, 0.3)]) {
        for &(n, m) in &dims {
            let t = wick_t(n, m, q);
            let id = |s: &str| format!("wick/{}/n={n},m={m}/{s}", q_label(q));
            checks.push(Check::new(id("norm"), "||T|| - |q0|", (wick_norm(&t) - q.norm()).abs(), cfg.tol));
            let b = braid_residuals(&t);
            checks.push(Check::new(id("braid"), "T1 T2 T1 - T2 T1 T2", b.standard, cfg.tol));
        }
    }
    plain(checks)
}

//! Rieffel deformation of `Z²`-graded data by `Θ = (0, c; −c, 0)`:
//! `a ·_Θ b = e^{2πi⟨Θp, q⟩} a·b` for `a` of degree `p`, `b` of degree `q`,
//! with `⟨Θp, q⟩ = c (p₂q₁ − p₁q₂)`.
//!
//! Phases are tracked exactly as integer multiples of each `|c|` seen, so a
//! deformation by `Θ` followed by `−Θ` cancels without rounding.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fockrep::{build_fock_rep, phase_of, relation_residuals, FockForm, Rep, SparseOp};
use crate::symalg::{NumElement, SymElement};

/// Real skew-symmetric `2 × 2` matrix `(0, c; −c, 0)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SkewTheta {
    pub c: f64,
}

impl SkewTheta {
    pub fn new(c: f64) -> SkewTheta {
        SkewTheta { c }
    }

    pub fn from_matrix(m: [[f64; 2]; 2]) -> Result<SkewTheta> {
        if m[0][0] != 0.0 || m[1][1] != 0.0 || m[0][1] != -m[1][0] {
            return Err(Error::Config(format!("{m:?} is not skew-symmetric")));
        }
        Ok(SkewTheta { c: m[0][1] })
    }

    pub fn matrix(&self) -> [[f64; 2]; 2] {
        [[0.0, self.c], [-self.c, 0.0]]
    }

    pub fn transpose(&self) -> SkewTheta {
        SkewTheta { c: -self.c }
    }

    pub fn neg(&self) -> SkewTheta {
        SkewTheta { c: -self.c }
    }

    /// `⟨Θp, q⟩`.
    pub fn pairing(&self, p: (i32, i32), q: (i32, i32)) -> f64 {
        self.c * pairing_units(p, q) as f64
    }

    pub fn phase(&self, p: (i32, i32), q: (i32, i32)) -> Complex64 {
        Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * self.pairing(p, q))
    }
}

/// `p₂q₁ − p₁q₂`, the integer part of `⟨Θp, q⟩ / c`.
pub fn pairing_units(p: (i32, i32), q: (i32, i32)) -> i64 {
    i64::from(p.1) * i64::from(q.0) - i64::from(p.0) * i64::from(q.1)
}

/// `Θ_q` with off-diagonal `φ₀/2` for `q0 = e^{2πiφ₀}`, `φ₀ ∈ [0, 1)`.
pub fn theta_from_q(q0: Complex64) -> Result<SkewTheta> {
    if (q0.norm() - 1.0).abs() > crate::fockrep::UNIMODULAR_TOL {
        return Err(Error::Domain(format!("|q0| = {} is not 1", q0.norm())));
    }
    Ok(SkewTheta::new(phase_of(q0) / 2.0))
}

/// `Σ_k c_k n_k` stored as `|c_k|` bits to signed integer counts.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExactPhase(BTreeMap<u64, i64>);

impl ExactPhase {
    pub fn zero() -> ExactPhase {
        ExactPhase::default()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Adds `units · c`.
    pub fn add(&mut self, c: f64, units: i64) {
        if c == 0.0 || units == 0 {
            return;
        }
        let signed = if c < 0.0 { -units } else { units };
        let e = self.0.entry(c.abs().to_bits()).or_insert(0);
        *e += signed;
        if *e == 0 {
            self.0.remove(&c.abs().to_bits());
        }
    }

    pub fn merged(&self, other: &ExactPhase) -> ExactPhase {
        let mut out = self.clone();
        for (&bits, &units) in &other.0 {
            out.add(f64::from_bits(bits), units);
        }
        out
    }

    /// The real number `Σ c_k n_k`.
    pub fn angle(&self) -> f64 {
        self.0.iter().map(|(&b, &u)| f64::from_bits(b) * u as f64).sum()
    }

    /// `e^{2πi · angle}`.
    pub fn value(&self) -> Complex64 {
        Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * self.angle())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Payload {
    Sym(SymElement),
    Num(NumElement),
    Op(SparseOp),
}

/// Homogeneous payload of degree `degree` carrying an exact phase factor.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedOperator {
    pub degree: (i32, i32),
    pub payload: Payload,
    pub phase: ExactPhase,
}

fn element_degree(degrees: Vec<(i32, i32)>) -> Result<(i32, i32)> {
    match degrees.as_slice() {
        [] => Ok((0, 0)),
        [p] => Ok(*p),
        more => Err(Error::Config(format!("inhomogeneous element with degrees {more:?}"))),
    }
}

impl GradedOperator {
    pub fn sym(x: SymElement) -> Result<GradedOperator> {
        let degree = element_degree(x.degrees())?;
        Ok(GradedOperator { degree, payload: Payload::Sym(x), phase: ExactPhase::zero() })
    }

    pub fn num(x: NumElement) -> Result<GradedOperator> {
        let degree = element_degree(x.degrees())?;
        Ok(GradedOperator { degree, payload: Payload::Num(x), phase: ExactPhase::zero() })
    }

    /// Checks every entry maps grading block `g(j)` to `g(j) + degree`.
    pub fn op(x: SparseOp, grading: &[(i32, i32)], degree: (i32, i32)) -> Result<GradedOperator> {
        for (r, c, _) in x.triplets() {
            let d = (grading[r].0 - grading[c].0, grading[r].1 - grading[c].1);
            if d != degree {
                return Err(Error::Config(format!(
                    "entry ({r}, {c}) has degree {d:?}, expected {degree:?}"
                )));
            }
        }
        Ok(GradedOperator { degree, payload: Payload::Op(x), phase: ExactPhase::zero() })
    }

    /// The payload times the phase, as a numeric element.
    pub fn num_value(&self) -> Option<NumElement> {
        match &self.payload {
            Payload::Num(x) => Some(x.scale(&self.phase.value())),
            _ => None,
        }
    }

    /// The payload times the phase, as an operator.
    pub fn op_value(&self) -> Option<SparseOp> {
        match &self.payload {
            Payload::Op(x) => Some(x.scale(self.phase.value())),
            _ => None,
        }
    }
}

fn payload_product(a: &Payload, b: &Payload) -> Result<Payload> {
    match (a, b) {
        (Payload::Sym(x), Payload::Sym(y)) => Ok(Payload::Sym(x.try_mul(y)?)),
        (Payload::Num(x), Payload::Num(y)) => Ok(Payload::Num(x.try_mul(y)?)),
        (Payload::Op(x), Payload::Op(y)) => {
            if x.ncols() != y.nrows() {
                return Err(Error::Config("operator dimensions differ".into()));
            }
            Ok(Payload::Op(x.mul(y)))
        }
        _ => Err(Error::Config("incompatible payload kinds".into())),
    }
}

/// Product deformed successively by each `Θ` in `thetas`.
pub fn deformed_product(a: &GradedOperator, b: &GradedOperator, thetas: &[SkewTheta]) -> Result<GradedOperator> {
    let mut phase = a.phase.merged(&b.phase);
    for th in thetas {
        phase.add(th.c, pairing_units(a.degree, b.degree));
    }
    Ok(GradedOperator {
        degree: (a.degree.0 + b.degree.0, a.degree.1 + b.degree.1),
        payload: payload_product(&a.payload, &b.payload)?,
        phase,
    })
}

/// `a ·_Θ b`.
pub fn twisted_product(a: &GradedOperator, b: &GradedOperator, theta: SkewTheta) -> Result<GradedOperator> {
    deformed_product(a, b, &[theta])
}

/// Max deviation between undeformed products and products deformed by `Θ`
/// then `−Θ`, over all pairs and both parenthesizations of all triples;
/// also checks associativity of `·_Θ` and the unit. Exact phases give 0.
pub fn double_deform_check(samples: &[GradedOperator], theta: SkewTheta) -> Result<f64> {
    let both = [theta, theta.neg()];
    let mut worst: f64 = 0.0;
    let mut compare = |x: &GradedOperator, y: &GradedOperator| {
        let d = if x.payload != y.payload {
            f64::INFINITY
        } else {
            (x.phase.value() - y.phase.value()).norm()
        };
        worst = worst.max(d);
    };
    for a in samples {
        for b in samples {
            compare(&deformed_product(a, b, &both)?, &deformed_product(a, b, &[])?);
            for c in samples {
                let left = deformed_product(&deformed_product(a, b, &both)?, c, &both)?;
                let right = deformed_product(a, &deformed_product(b, c, &both)?, &both)?;
                let plain = deformed_product(&deformed_product(a, b, &[])?, c, &[])?;
                compare(&left, &plain);
                compare(&right, &plain);
                let l1 = twisted_product(&twisted_product(a, b, theta)?, c, theta)?;
                let r1 = twisted_product(a, &twisted_product(b, c, theta)?, theta)?;
                compare(&l1, &r1);
            }
        }
    }
    Ok(worst)
}

/// `π_Θ(x)ξ = e^{2πi⟨Θp, q⟩} π(x)ξ` entrywise, with `p = g(row) − g(col)`
/// and `q = g(col)`.
pub fn deform_op(x: &SparseOp, grading: &[(i32, i32)], theta: SkewTheta) -> SparseOp {
    let t = x.triplets().map(|(r, c, v)| {
        let p = (grading[r].0 - grading[c].0, grading[r].1 - grading[c].1);
        (r, c, v * theta.phase(p, grading[c]))
    });
    SparseOp::from_triplets(x.nrows(), x.ncols(), t.collect::<Vec<_>>())
}

pub fn deform_rep(rep: &Rep, theta: SkewTheta) -> Result<Rep> {
    let grading = rep
        .grading
        .as_ref()
        .ok_or_else(|| Error::Config("representation carries no grading".into()))?;
    let map = |ops: &[SparseOp]| ops.iter().map(|x| deform_op(x, grading, theta)).collect();
    Ok(Rep { s: map(&rep.s), t: map(&rep.t), ..rep.clone() })
}

/// Max interior entry deviation between `deform_rep(untwisted, Θ_q)` and
/// the form A Fock representation.
pub fn deformed_fock_deviation(n: usize, m: usize, big_n: usize, big_m: usize, q0: Complex64) -> Result<f64> {
    let plain = crate::fockrep::untwisted_fock_rep(n, m, big_n, big_m)?;
    let deformed = deform_rep(&plain, theta_from_q(q0)?)?;
    let target = build_fock_rep(n, m, big_n, big_m, q0, FockForm::A)?;
    let pairs = deformed.s.iter().zip(&target.s).chain(deformed.t.iter().zip(&target.t));
    Ok(pairs.map(|(a, b)| a.sub(b).max_abs()).fold(0.0, f64::max))
}

pub const REL_U_S: &str = "u s~_j u* - e^{i pi phi0} s~_j";
pub const REL_U_T: &str = "u t~_r u* - e^{-i pi phi0} t~_r";

/// Residuals of the relations for `ŝ_j = s̃_j u`, `t̂_r = t̃_r u` on the
/// untwisted Fock pair model, `u = d_n(e^{iπφ₀}) ⊗ d_m(e^{−iπφ₀})`.
pub fn crossed_untwist_check(
    n: usize,
    m: usize,
    q0: Complex64,
    big_n: usize,
    big_m: usize,
) -> Result<BTreeMap<String, f64>> {
    theta_from_q(q0)?;
    let h = crate::fockrep::sqrt_branch(q0);
    let plain = crate::fockrep::untwisted_fock_rep(n, m, big_n, big_m)?;
    let grading = plain.grading.clone().expect("pair model is graded");
    let diag: Vec<Complex64> = grading
        .iter()
        .map(|&(a, b)| {
            let k = a - b;
            if k >= 0 {
                h.powu(k as u32)
            } else {
                h.conj().powu((-k) as u32)
            }
        })
        .collect();
    let u = SparseOp::diagonal(&diag);
    let ua = u.adjoint();
    let hat = Rep {
        s: plain.s.iter().map(|x| x.mul(&u)).collect(),
        t: plain.t.iter().map(|x| x.mul(&u)).collect(),
        ..plain.clone()
    };
    let mut table = relation_residuals(&hat, q0);
    let mask = plain.interior(2);
    let conj_dev = |x: &SparseOp, c: Complex64| u.mul(x).mul(&ua).add_scaled(x, -c).max_column_norm(&mask);
    table.insert(REL_U_S.into(), plain.s.iter().map(|x| conj_dev(x, h)).fold(0.0, f64::max));
    table.insert(REL_U_T.into(), plain.t.iter().map(|x| conj_dev(x, h.conj())).fold(0.0, f64::max));
    Ok(table)
}

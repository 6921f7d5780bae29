//! The `|q| < 1` untwisting on the truncated free Fock space `Free(n+m, L)`:
//! `s_i = v_i`, `w_r = Σ_k q^k Σ_{|μ|=k} v_μ w̃_r v_μ*` with
//! `w̃_r = v_{n+r}(1 − |q|²Q̃)^{1/2}`, and back via
//! `t̂_r = (1−Q) t_r (1 − |q|²Q)^{-1/2}`.
//!
//! Functions of `1 − cQ` for a projection `Q` use `f(1 − cQ) = (1−Q) + f(1−c)Q`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fockrep::{SparseOp, TruncFock};

/// `(1 − c Q)^power` for a projection `Q`.
pub fn projection_power(q: &SparseOp, c: f64, power: f64) -> SparseOp {
    let id = SparseOp::identity(q.nrows());
    let f = Complex64::new((1.0 - c).powf(power), 0.0);
    id.sub(q).add_scaled(q, f)
}

/// `Σ_i x_i x_i*`.
pub fn range_sum(ops: &[SparseOp]) -> SparseOp {
    let d = ops.first().map_or(0, SparseOp::nrows);
    ops.iter().fold(SparseOp::zeros(d, d), |acc, x| acc.add(&x.mul(&x.adjoint())))
}

/// `X ↦ Σ_i s_i X s_i*`.
fn conjugation_step(s: &[SparseOp], s_adj: &[SparseOp], x: &SparseOp) -> SparseOp {
    s.iter()
        .zip(s_adj)
        .fold(SparseOp::zeros(x.nrows(), x.ncols()), |acc, (a, b)| acc.add(&a.mul(x).mul(b)))
}

/// Terms `A_k = Σ_{|μ|=k} s_μ X s_μ*` until the first zero term or `max_terms`.
pub fn conjugation_series(s: &[SparseOp], x: &SparseOp, max_terms: usize) -> Vec<SparseOp> {
    let s_adj: Vec<SparseOp> = s.iter().map(SparseOp::adjoint).collect();
    let mut terms = vec![x.clone()];
    while terms.len() < max_terms {
        let next = conjugation_step(s, &s_adj, terms.last().expect("nonempty"));
        if next.nnz() == 0 {
            break;
        }
        terms.push(next);
    }
    terms
}

fn check_parameter(q0: Complex64) -> Result<()> {
    if q0.norm() >= 1.0 {
        return Err(Error::Domain(format!("|q0| = {} is not below 1", q0.norm())));
    }
    Ok(())
}

/// `w_r` from isometries `s_i` with `Q = Σ s_i s_i*` and the free generators
/// `u_r` playing `v_{n+r}`; the series is summed until its terms vanish.
pub fn build_w_generators(s: &[SparseOp], u: &[SparseOp], q0: Complex64) -> Result<Vec<SparseOp>> {
    check_parameter(q0)?;
    let dim = u.first().map_or(0, SparseOp::nrows);
    let root = projection_power(&range_sum(s), q0.norm_sqr(), 0.5);
    Ok(u.iter()
        .map(|ur| {
            let wt = ur.mul(&root);
            let mut acc = SparseOp::zeros(dim, dim);
            let mut qk = Complex64::new(1.0, 0.0);
            for term in conjugation_series(s, &wt, dim + 1) {
                acc = acc.add_scaled(&term, qk);
                qk *= q0;
            }
            acc
        })
        .collect())
}

/// `t̂_r = (1−Q) t_r (1 − |q|²Q)^{-1/2}`.
pub fn build_hat_generators(s: &[SparseOp], t: &[SparseOp], q0: Complex64) -> Result<Vec<SparseOp>> {
    check_parameter(q0)?;
    let q = range_sum(s);
    let id = SparseOp::identity(q.nrows());
    let left = id.sub(&q);
    let right = projection_power(&q, q0.norm_sqr(), -0.5);
    Ok(t.iter().map(|tr| left.mul(tr).mul(&right)).collect())
}

/// `v_1..v_{n+m}` on `Free(n+m, L)` with the derived operators.
#[derive(Clone, Debug)]
pub struct FreeModel {
    pub n: usize,
    pub m: usize,
    pub l: usize,
    pub q0: Complex64,
    pub v: Vec<SparseOp>,
    headroom: Vec<usize>,
}

impl FreeModel {
    pub fn new(n: usize, m: usize, q0: Complex64, l: usize) -> Result<FreeModel> {
        check_parameter(q0)?;
        if n == 0 || m == 0 {
            return Err(Error::Config("n and m must be positive".into()));
        }
        let space = TruncFock::free(n + m, l)?;
        let headroom = (0..space.dim()).map(|i| space.headroom(i)).collect();
        Ok(FreeModel { n, m, l, q0, v: space.free_creations(), headroom })
    }

    pub fn dim(&self) -> usize {
        self.headroom.len()
    }

    pub fn interior(&self, order: usize) -> Vec<bool> {
        self.headroom.iter().map(|&h| h >= order).collect()
    }

    pub fn s_ops(&self) -> &[SparseOp] {
        &self.v[..self.n]
    }

    pub fn u_ops(&self) -> &[SparseOp] {
        &self.v[self.n..]
    }

    /// `Q̃ = Σ_{i≤n} v_i v_i*`.
    pub fn q_tilde(&self) -> SparseOp {
        range_sum(self.s_ops())
    }

    /// `w̃_r = v_{n+r}(1 − |q|²Q̃)^{1/2}`, `r` 1-based.
    pub fn w_tilde(&self, r: usize) -> SparseOp {
        self.v[self.n + r - 1].mul(&projection_power(&self.q_tilde(), self.q0.norm_sqr(), 0.5))
    }

    pub fn w_generators(&self) -> Result<Vec<SparseOp>> {
        build_w_generators(self.s_ops(), self.u_ops(), self.q0)
    }
}

fn worst(table: &mut BTreeMap<String, f64>, name: &str, r: f64) {
    let e = table.entry(name.to_string()).or_insert(0.0);
    *e = e.max(r);
}

fn delta(x: SparseOp, same: bool) -> SparseOp {
    if same {
        x.sub(&SparseOp::identity(x.nrows()))
    } else {
        x
    }
}

/// Interior (order 2) residuals of the relations satisfied by the `w_r`.
pub fn w_relation_residuals(model: &FreeModel, w: &[SparseOp]) -> BTreeMap<String, f64> {
    let mask = model.interior(2);
    let q = model.q0;
    let mut out = BTreeMap::new();
    let wa: Vec<SparseOp> = w.iter().map(SparseOp::adjoint).collect();
    for r in 0..model.m {
        for l in 0..model.m {
            worst(&mut out, "w_r* w_l - delta_rl", delta(wa[r].mul(&w[l]), r == l).max_column_norm(&mask));
        }
        for vi in model.s_ops() {
            let via = vi.adjoint();
            let x = via.mul(&w[r]).add_scaled(&w[r].mul(&via), -q);
            worst(&mut out, "v_i* w_r - q w_r v_i*", x.max_column_norm(&mask));
        }
        let x = SparseOp::identity(model.dim()).sub(&model.q_tilde()).mul(&w[r]).sub(&model.w_tilde(r + 1));
        worst(&mut out, "(1-Q~) w_r - w~_r", x.max_column_norm(&mask));
    }
    out
}

/// Interior (order 2) residuals of the `t̂_r` and `t̃_r = (1−Q)t_r` relations.
pub fn hat_relation_residuals(
    s: &[SparseOp],
    t: &[SparseOp],
    hat: &[SparseOp],
    q0: Complex64,
    mask: &[bool],
) -> BTreeMap<String, f64> {
    let mut out = BTreeMap::new();
    let q = range_sum(s);
    let id = SparseOp::identity(q.nrows());
    let tilde: Vec<SparseOp> = t.iter().map(|tr| id.sub(&q).mul(tr)).collect();
    let ha: Vec<SparseOp> = hat.iter().map(SparseOp::adjoint).collect();
    let ta: Vec<SparseOp> = tilde.iter().map(SparseOp::adjoint).collect();
    let defect = id.add_scaled(&q, Complex64::new(-q0.norm_sqr(), 0.0));
    for r in 0..hat.len() {
        for si in s {
            let sa = si.adjoint();
            worst(&mut out, "s_i* t^_r", sa.mul(&hat[r]).max_column_norm(mask));
            worst(&mut out, "s_i* t~_r", sa.mul(&tilde[r]).max_column_norm(mask));
        }
        for l in 0..hat.len() {
            worst(&mut out, "t^_r* t^_l - delta_rl", delta(ha[r].mul(&hat[l]), r == l).max_column_norm(mask));
            let tt = ta[r].mul(&tilde[l]);
            let tt = if r == l { tt.sub(&defect) } else { tt };
            worst(&mut out, "t~_r* t~_l - delta_rl (1 - |q|^2 Q)", tt.max_column_norm(mask));
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct RoundtripReport {
    pub n: usize,
    pub m: usize,
    pub q0: [f64; 2],
    pub l: usize,
    /// Number of nonzero terms in each `w_r` series.
    pub series_terms: usize,
    /// `max_r ‖t̂_r − v_{n+r}‖` on the interior, `t̂` rebuilt from `(v_i, w_r)`.
    pub deviation_e0: f64,
    /// `max_r ‖w_r(v_i, t̂) − w_r‖` on the interior.
    pub deviation_eq: f64,
    pub w_residuals: BTreeMap<String, f64>,
    pub hat_residuals: BTreeMap<String, f64>,
}

impl RoundtripReport {
    pub fn max_residual(&self) -> f64 {
        self.w_residuals
            .values()
            .chain(self.hat_residuals.values())
            .chain([&self.deviation_e0, &self.deviation_eq])
            .fold(0.0, |a, &b| a.max(b))
    }
}

pub fn roundtrip_check(n: usize, m: usize, q0: Complex64, l: usize) -> Result<RoundtripReport> {
    let model = FreeModel::new(n, m, q0, l)?;
    let mask = model.interior(2);
    let w = model.w_generators()?;
    let series_terms = conjugation_series(model.s_ops(), &model.w_tilde(1), model.dim() + 1).len();
    let hat = build_hat_generators(model.s_ops(), &w, q0)?;
    let deviation_e0 = hat
        .iter()
        .zip(model.u_ops())
        .map(|(h, v)| h.sub(v).max_column_norm(&mask))
        .fold(0.0, f64::max);
    let w_again = build_w_generators(model.s_ops(), &hat, q0)?;
    let deviation_eq =
        w_again.iter().zip(&w).map(|(a, b)| a.sub(b).max_column_norm(&mask)).fold(0.0, f64::max);
    Ok(RoundtripReport {
        n,
        m,
        q0: [q0.re, q0.im],
        l,
        series_terms,
        deviation_e0,
        deviation_eq,
        w_residuals: w_relation_residuals(&model, &w),
        hat_residuals: hat_relation_residuals(model.s_ops(), &w, &hat, q0, &mask),
    })
}

/// Interior residual of
/// `Σ_{k≤N} q^k Σ_{|μ|=k} s_μ (1−Q)t_r s_μ* = t_r − q^{N+1} Σ_{|μ|=N+1} s_μ t_r s_μ*`
/// for `s_i = v_i`, `t_r = w_r`, maximized over `r`.
pub fn partial_sum_identity(n: usize, m: usize, q0: Complex64, l: usize, big_n: usize) -> Result<f64> {
    if big_n >= l {
        return Err(Error::Config(format!("partial sum order {big_n} must be below L = {l}")));
    }
    let model = FreeModel::new(n, m, q0, l)?;
    let mask = model.interior(2);
    let w = model.w_generators()?;
    let s = model.s_ops();
    let id = SparseOp::identity(model.dim());
    let compl = id.sub(&model.q_tilde());
    let mut worst_r: f64 = 0.0;
    for tr in &w {
        let lhs_terms = conjugation_series(s, &compl.mul(tr), big_n + 1);
        let mut lhs = SparseOp::zeros(model.dim(), model.dim());
        let mut qk = Complex64::new(1.0, 0.0);
        for term in &lhs_terms {
            lhs = lhs.add_scaled(term, qk);
            qk *= q0;
        }
        let tail_terms = conjugation_series(s, tr, big_n + 2);
        let qn1 = q0.powu(big_n as u32 + 1);
        let rhs = match tail_terms.get(big_n + 1) {
            Some(tail) => tr.add_scaled(tail, -qn1),
            None => tr.clone(),
        };
        worst_r = worst_r.max(lhs.sub(&rhs).max_column_norm(&mask));
    }
    Ok(worst_r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn zero_parameter_collapses() {
        let model = FreeModel::new(2, 2, c(0.0), 3).unwrap();
        let w = model.w_generators().unwrap();
        for (wr, vr) in w.iter().zip(model.u_ops()) {
            assert_eq!(wr, vr);
        }
        let r = roundtrip_check(2, 2, c(0.0), 3).unwrap();
        assert_eq!(r.deviation_e0, 0.0);
        let hat = build_hat_generators(model.s_ops(), &w, c(0.0)).unwrap();
        let compl = SparseOp::identity(model.dim()).sub(&model.q_tilde());
        assert_eq!(hat[0], compl.mul(&w[0]));
    }

    #[test]
    fn half_parameter_relations() {
        let r = roundtrip_check(2, 2, c(0.5), 5).unwrap();
        assert!(r.w_residuals.values().all(|&x| x < 1e-10), "{:?}", r.w_residuals);
        assert!(r.hat_residuals.values().all(|&x| x < 1e-10), "{:?}", r.hat_residuals);
        assert!(r.deviation_e0 < 1e-10 && r.deviation_eq < 1e-10);
    }

    #[test]
    fn complex_parameter_roundtrip() {
        let q = Complex64::from_polar(0.6, 0.9);
        let r = roundtrip_check(1, 2, q, 5).unwrap();
        assert!(r.max_residual() < 1e-10, "{r:?}");
    }

    #[test]
    fn series_terminates_at_truncation() {
        let model = FreeModel::new(2, 1, c(0.5), 4).unwrap();
        let terms = conjugation_series(model.s_ops(), &model.w_tilde(1), 100);
        assert_eq!(terms.len(), 4);
    }

    #[test]
    fn partial_sums() {
        assert!(partial_sum_identity(2, 2, c(0.5), 5, 2).unwrap() < 1e-12);
        assert!(partial_sum_identity(2, 2, c(0.5), 5, 0).unwrap() < 1e-12);
        assert_eq!(partial_sum_identity(2, 2, c(0.0), 4, 1).unwrap(), 0.0);
        assert!(partial_sum_identity(2, 2, c(0.5), 3, 3).is_err());
    }

    #[test]
    fn rejects_unit_modulus() {
        assert!(matches!(FreeModel::new(1, 1, c(1.0), 2), Err(Error::Domain(_))));
    }
}

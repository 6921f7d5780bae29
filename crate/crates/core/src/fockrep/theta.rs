//! Multi-parameter representation on `ℓ²(N₀) ⊗ ℓ²(N₀) ⊗ ℓ²(Z)`:
//! `s_i = Ŝ_i ⊗ U_i`, `t_j = 1 ⊗ T̂_j ⊗ S̃`, with `Ŝ_i k = n k + i − 1`,
//! `T̂_j k = m k + j − 1`, `S̃` the bilateral shift and `U_i` diagonal with
//! entries `ζ_i(k, c)` on the last two factors.

use std::collections::BTreeMap;

use num_complex::Complex64;

use super::{Rep, SparseOp};
use crate::error::{Error, Result};

/// `ζ_i(k, c)` with `ζ_i(0, c) = q_{i1}^c` and
/// `ζ_i(m k′ + j − 1, c) = q_{ij} ζ_i(k′, c − 1)`; `qrow` is `(q_{i1}..q_{im})`.
pub fn zeta(qrow: &[Complex64], k: usize, c: i64) -> Complex64 {
    let m = qrow.len();
    let pow = |z: Complex64, e: i64| if e >= 0 { z.powu(e as u32) } else { z.conj().powu((-e) as u32) };
    if m == 1 {
        return pow(qrow[0], c);
    }
    let mut acc = Complex64::new(1.0, 0.0);
    let (mut k, mut c) = (k, c);
    while k > 0 {
        acc *= qrow[k % m];
        k /= m;
        c -= 1;
    }
    acc * pow(qrow[0], c)
}

/// Largest `r` with `base^r (a + 1) ≤ bound`; unlimited for `base = 1`.
fn digit_headroom(base: usize, a: usize, bound: usize) -> usize {
    if base == 1 {
        return usize::MAX;
    }
    let mut r = 0;
    let mut x = a + 1;
    while x * base <= bound {
        x *= base;
        r += 1;
    }
    r
}

/// Truncation to `k < N`, `l < M`, `|c| ≤ W`; `qmat` is row-major `n × m`.
pub fn concrete_theta_rep(
    n: usize,
    m: usize,
    qmat: &[Complex64],
    big_n: usize,
    big_m: usize,
    w: usize,
) -> Result<Rep> {
    if n == 0 || m == 0 || big_n == 0 || big_m == 0 {
        return Err(Error::Config("sizes must be positive".into()));
    }
    if qmat.len() != n * m {
        return Err(Error::Config(format!("expected {} parameters, got {}", n * m, qmat.len())));
    }
    if let Some(z) = qmat.iter().find(|z| (z.norm() - 1.0).abs() > super::UNIMODULAR_TOL) {
        return Err(Error::Domain(format!("parameter {z} is not unimodular")));
    }
    let width = 2 * w + 1;
    let dim = big_n * big_m * width;
    let index = |a: usize, b: usize, c: i64| (a * big_m + b) * width + (c + w as i64) as usize;
    let cells = || {
        (0..big_n).flat_map(move |a| {
            (0..big_m).flat_map(move |b| (-(w as i64)..=w as i64).map(move |c| (a, b, c)))
        })
    };
    let s = (0..n)
        .map(|i| {
            let qrow = &qmat[i * m..(i + 1) * m];
            let t = cells().filter_map(|(a, b, c)| {
                let a2 = n * a + i;
                (a2 < big_n).then(|| (index(a2, b, c), index(a, b, c), zeta(qrow, b, c)))
            });
            SparseOp::from_triplets(dim, dim, t.collect::<Vec<_>>())
        })
        .collect();
    let t = (0..m)
        .map(|j| {
            let t = cells().filter_map(|(a, b, c)| {
                let b2 = m * b + j;
                (b2 < big_m && c < w as i64)
                    .then(|| (index(a, b2, c + 1), index(a, b, c), Complex64::new(1.0, 0.0)))
            });
            SparseOp::from_triplets(dim, dim, t.collect::<Vec<_>>())
        })
        .collect();
    let headroom = cells()
        .map(|(a, b, c)| {
            digit_headroom(n, a, big_n)
                .min(digit_headroom(m, b, big_m))
                .min(w - c.unsigned_abs() as usize)
        })
        .collect();
    Ok(Rep { n, m, s, t, headroom, grading: None })
}

pub const REL_SS: &str = "s_i* s_k - delta_ik";
pub const REL_TT: &str = "t_j* t_l - delta_jl";
pub const REL_ST: &str = "s_i t_j - q_ij t_j s_i";
pub const REL_SAT: &str = "s_i* t_j - conj(q_ij) t_j s_i*";

/// Interior (order 2) residuals of the multi-parameter relations.
pub fn theta_relation_residuals(rep: &Rep, qmat: &[Complex64]) -> BTreeMap<String, f64> {
    let mask = rep.interior(2);
    let id = rep.identity();
    let sa: Vec<SparseOp> = rep.s.iter().map(SparseOp::adjoint).collect();
    let ta: Vec<SparseOp> = rep.t.iter().map(SparseOp::adjoint).collect();
    let mut out: BTreeMap<String, f64> = BTreeMap::new();
    let mut worst = |name: &str, r: f64| {
        let e = out.entry(name.to_string()).or_insert(0.0);
        *e = e.max(r);
    };
    for i in 0..rep.n {
        for k in 0..rep.n {
            let x = sa[i].mul(&rep.s[k]);
            let x = if i == k { x.sub(&id) } else { x };
            worst(REL_SS, x.max_column_norm(&mask));
        }
    }
    for j in 0..rep.m {
        for l in 0..rep.m {
            let x = ta[j].mul(&rep.t[l]);
            let x = if j == l { x.sub(&id) } else { x };
            worst(REL_TT, x.max_column_norm(&mask));
        }
    }
    for i in 0..rep.n {
        for j in 0..rep.m {
            let q = qmat[i * rep.m + j];
            let x = rep.s[i].mul(&rep.t[j]).add_scaled(&rep.t[j].mul(&rep.s[i]), -q);
            worst(REL_ST, x.max_column_norm(&mask));
            let y = sa[i].mul(&rep.t[j]).add_scaled(&rep.t[j].mul(&sa[i]), -q.conj());
            worst(REL_SAT, y.max_column_norm(&mask));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn one() -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    #[test]
    fn zeta_spot_values() {
        let q11 = Complex64::from_polar(1.0, 2.0 * PI * 0.3);
        let row = [q11, one()];
        assert!((zeta(&row, 0, 1) - q11).norm() < 1e-15);
        assert_eq!(zeta(&row, 0, 0), one());
        // 3 = β₂(1) = β₂(β₂(0)), so ζ(3, 2) = q₁₂² ζ(0, 0)
        assert!((zeta(&row, 3, 2) - one()).norm() < 1e-15);
        // 2 = β₁(1) = β₁(β₂(0)), so ζ(2, 3) = q₁₁ q₁₂ q₁₁^1
        assert!((zeta(&row, 2, 3) - q11 * q11).norm() < 1e-15);
    }

    #[test]
    fn trivial_cocycle_relations() {
        let qmat = vec![one(); 4];
        let rep = concrete_theta_rep(2, 2, &qmat, 8, 8, 3).unwrap();
        let table = theta_relation_residuals(&rep, &qmat);
        assert!(table.values().all(|&r| r < 1e-13), "{table:?}");
        assert!(rep.interior(2).iter().any(|&b| b));
    }

    #[test]
    fn single_twisted_entry() {
        let q11 = Complex64::from_polar(1.0, 2.0 * PI * 0.3);
        let qmat = vec![q11, one(), one(), one()];
        let rep = concrete_theta_rep(2, 2, &qmat, 8, 8, 3).unwrap();
        let table = theta_relation_residuals(&rep, &qmat);
        assert!(table.values().all(|&r| r < 1e-13), "{table:?}");
        let wrong = theta_relation_residuals(&rep, &vec![one(); 4]);
        assert!(wrong[REL_ST] > 0.1);
    }

    #[test]
    fn generic_parameters() {
        let qmat: Vec<Complex64> =
            [0.1, 0.37, 0.62, 0.05, 0.9, 0.44].iter().map(|&p| Complex64::from_polar(1.0, 2.0 * PI * p)).collect();
        let rep = concrete_theta_rep(2, 3, &qmat, 9, 13, 3).unwrap();
        let table = theta_relation_residuals(&rep, &qmat);
        assert!(table.values().all(|&r| r < 1e-13), "{table:?}");
    }
}

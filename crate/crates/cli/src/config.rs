//! Suite configuration and flag parsing.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Trunc {
    /// Maximal `s`-word length of the pair Fock model.
    pub n: usize,
    /// Maximal `t`-word length of the pair Fock model.
    pub m: usize,
    /// Maximal word length of the free untwisting model.
    pub l: usize,
}

/// Inputs shared by every suite. `q = None` lets each suite sweep its
/// default deformation values.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteConfig {
    pub n: usize,
    pub m: usize,
    /// `[re, im]` of `q0`.
    pub q: Option<[f64; 2]>,
    /// Entries `(i, j, φ)` setting `q_ij = e^{2πiφ}`; unset entries are 1.
    pub theta: Vec<(usize, usize, f64)>,
    pub trunc: Trunc,
    /// Threshold of every numerical check; exact checks use 0.
    pub tol: f64,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            n: 2,
            m: 2,
            q: None,
            theta: Vec::new(),
            trunc: Trunc { n: 4, m: 4, l: 5 },
            tol: 1e-10,
            seed: 7,
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |s: String| Err(CliError::Config(s));
        if self.n == 0 || self.m == 0 {
            return bad(format!("n = {}, m = {}; both must be positive", self.n, self.m));
        }
        if self.trunc.n == 0 || self.trunc.m == 0 || self.trunc.l == 0 {
            return bad("truncations must be positive".into());
        }
        if !(self.tol >= 0.0) {
            return bad(format!("tolerance {} must be non-negative", self.tol));
        }
        for &(i, j, _) in &self.theta {
            if i == 0 || j == 0 || i > self.n || j > self.m {
                return bad(format!("theta entry ({i},{j}) outside 1..={} x 1..={}", self.n, self.m));
            }
        }
        Ok(())
    }

    pub fn q0(&self) -> Option<Complex64> {
        self.q.map(|[re, im]| Complex64::new(re, im))
    }

    /// Row-major `n × m` matrix of `q_ij`.
    pub fn q_matrix(&self) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(1.0, 0.0); self.n * self.m];
        for &(i, j, phi) in &self.theta {
            out[(i - 1) * self.m + (j - 1)] = Complex64::from_polar(1.0, 2.0 * PI * phi);
        }
        out
    }
}

fn number(s: &str) -> Result<f64, CliError> {
    s.trim().parse().map_err(|_| CliError::Config(format!("'{s}' is not a number")))
}

/// `re`, `re,im`, or polar `r@φ` meaning `r e^{2πiφ}` (`@φ` has `r = 1`).
pub fn parse_q(s: &str) -> Result<Complex64, CliError> {
    if let Some((r, phi)) = s.split_once('@') {
        let r = if r.trim().is_empty() { 1.0 } else { number(r)? };
        return Ok(Complex64::from_polar(r, 2.0 * PI * number(phi)?));
    }
    match s.split_once(',') {
        Some((re, im)) => Ok(Complex64::new(number(re)?, number(im)?)),
        None => Ok(Complex64::new(number(s)?, 0.0)),
    }
}

/// `i,j=φ`.
pub fn parse_theta(s: &str) -> Result<(usize, usize, f64), CliError> {
    let err = || CliError::Config(format!("theta '{s}' is not of the form i,j=phase"));
    let (idx, phi) = s.split_once('=').ok_or_else(err)?;
    let (i, j) = idx.split_once(',').ok_or_else(err)?;
    let i = i.trim().parse().map_err(|_| err())?;
    let j = j.trim().parse().map_err(|_| err())?;
    Ok((i, j, number(phi)?))
}

/// `N,M,L`.
pub fn parse_trunc(s: &str) -> Result<Trunc, CliError> {
    let parts: Vec<&str> = s.split(',').collect();
    let err = || CliError::Config(format!("truncation '{s}' is not of the form N,M,L"));
    if parts.len() != 3 {
        return Err(err());
    }
    let v: Vec<usize> = parts.iter().map(|p| p.trim().parse().map_err(|_| err())).collect::<Result<_, _>>()?;
    Ok(Trunc { n: v[0], m: v[1], l: v[2] })
}

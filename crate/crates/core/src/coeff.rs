//! Exact coefficient ring: Gaussian rationals times Laurent monomials in
//! formal deformation variables.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = Ratio<i128>;

/// Tolerance used when checking that a numeric assignment is unimodular.
pub const UNIMODULAR_TOL: f64 = 1e-12;

/// Ring operations shared by exact and floating-point coefficients.
///
/// Methods take `&self` so that exact coefficients can carry their variable
/// configuration inside every value.
pub trait Scalar: Clone + PartialEq + fmt::Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
    fn conjugate(&self) -> Self;

    fn minus(&self, other: &Self) -> Self {
        self.plus(&other.negated())
    }

    fn pow(&self, k: u32) -> Self {
        let mut acc = self.one_like();
        for _ in 0..k {
            acc = acc.times(self);
        }
        acc
    }
}

impl Scalar for Complex64 {
    fn zero_like(&self) -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one_like(&self) -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn conjugate(&self) -> Self {
        self.conj()
    }
    fn pow(&self, k: u32) -> Self {
        self.powu(k)
    }
}

/// Gaussian rational `re + im·i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gauss {
    pub re: Rational,
    pub im: Rational,
}

impl Gauss {
    pub fn new(re: Rational, im: Rational) -> Self {
        Gauss { re, im }
    }

    pub fn from_ints(re: i128, im: i128) -> Self {
        Gauss::new(Rational::from_integer(re), Rational::from_integer(im))
    }

    pub fn zero() -> Self {
        Gauss::from_ints(0, 0)
    }

    pub fn one() -> Self {
        Gauss::from_ints(1, 0)
    }

    pub fn i() -> Self {
        Gauss::from_ints(0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, o: &Gauss) -> Gauss {
        Gauss::new(self.re + o.re, self.im + o.im)
    }

    pub fn mul(&self, o: &Gauss) -> Gauss {
        Gauss::new(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )
    }

    pub fn neg(&self) -> Gauss {
        Gauss::new(-self.re, -self.im)
    }

    pub fn conj(&self) -> Gauss {
        Gauss::new(self.re, -self.im)
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
}

impl fmt::Display for Gauss {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.im.is_negative() { '-' } else { '+' };
        write!(f, "({}{}{}i)", self.re, sign, self.im.abs())
    }
}

/// Deformation-variable configuration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DeformVars {
    /// Independent `q` and `qc`; exponents are non-negative.
    SingleGeneric,
    /// One variable `q` with `qc = q^-1`.
    SingleUnimodular,
    /// Variables `q[i,j]` with `qc[i,j] = q[i,j]^-1`.
    MultiUnimodular { n: usize, m: usize },
}

impl DeformVars {
    pub fn num_vars(&self) -> usize {
        match *self {
            DeformVars::SingleGeneric => 2,
            DeformVars::SingleUnimodular => 1,
            DeformVars::MultiUnimodular { n, m } => n * m,
        }
    }

    pub fn is_unimodular(&self) -> bool {
        !matches!(self, DeformVars::SingleGeneric)
    }
}

/// Values for the deformation variables. `Multi` is row-major `n × m`.
#[derive(Clone, Debug, PartialEq)]
pub enum Assignment {
    Single(Complex64),
    Multi(Vec<Complex64>),
}

/// Finite sum of Gaussian-rational multiples of Laurent monomials.
///
/// Zero terms are never stored. In generic mode the exponent vector is
/// `[deg q, deg qc]` with both entries non-negative.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PhaseCoeff {
    vars: DeformVars,
    terms: BTreeMap<Vec<i32>, Gauss>,
}

impl PhaseCoeff {
    pub fn zero(vars: DeformVars) -> Self {
        PhaseCoeff { vars, terms: BTreeMap::new() }
    }

    pub fn scalar(vars: DeformVars, c: Gauss) -> Self {
        PhaseCoeff::monomial_unchecked(vars, vec![0; vars.num_vars()], c)
    }

    pub fn one(vars: DeformVars) -> Self {
        PhaseCoeff::scalar(vars, Gauss::one())
    }

    pub fn integer(vars: DeformVars, k: i128) -> Self {
        PhaseCoeff::scalar(vars, Gauss::from_ints(k, 0))
    }

    fn monomial_unchecked(vars: DeformVars, exps: Vec<i32>, c: Gauss) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        PhaseCoeff { vars, terms }
    }

    /// `c · Π var^exp`; generic mode rejects negative exponents.
    pub fn monomial(vars: DeformVars, exps: Vec<i32>, c: Gauss) -> Result<Self> {
        if exps.len() != vars.num_vars() {
            return Err(Error::Config(format!(
                "exponent vector has length {}, expected {}",
                exps.len(),
                vars.num_vars()
            )));
        }
        if !vars.is_unimodular() && exps.iter().any(|&e| e < 0) {
            return Err(Error::Mode("negative exponent in generic mode".into()));
        }
        Ok(PhaseCoeff::monomial_unchecked(vars, exps, c))
    }

    /// The variable `q^k` of a single-parameter mode.
    pub fn q_pow(vars: DeformVars, k: i32) -> Result<Self> {
        match vars {
            DeformVars::SingleGeneric if k >= 0 => {
                PhaseCoeff::monomial(vars, vec![k, 0], Gauss::one())
            }
            DeformVars::SingleGeneric => {
                Err(Error::Mode("q^-1 is not available in generic mode".into()))
            }
            DeformVars::SingleUnimodular => PhaseCoeff::monomial(vars, vec![k], Gauss::one()),
            DeformVars::MultiUnimodular { .. } => {
                Err(Error::Mode("bare q is not defined in multi-parameter mode".into()))
            }
        }
    }

    pub fn q(vars: DeformVars) -> Result<Self> {
        PhaseCoeff::q_pow(vars, 1)
    }

    /// The conjugate variable `qc`.
    pub fn qc(vars: DeformVars) -> Result<Self> {
        match vars {
            DeformVars::SingleGeneric => PhaseCoeff::monomial(vars, vec![0, 1], Gauss::one()),
            _ => PhaseCoeff::q(vars).map(|q| q.conjugate()),
        }
    }

    /// `q[i,j]^k` with 1-based indices.
    pub fn qij_pow(vars: DeformVars, i: usize, j: usize, k: i32) -> Result<Self> {
        match vars {
            DeformVars::MultiUnimodular { n, m } => {
                if i == 0 || j == 0 || i > n || j > m {
                    return Err(Error::Range(format!("q[{i},{j}] outside {n}x{m}")));
                }
                let mut e = vec![0; n * m];
                e[(i - 1) * m + (j - 1)] = k;
                PhaseCoeff::monomial(vars, e, Gauss::one())
            }
            _ => Err(Error::Mode("q[i,j] requires multi-parameter mode".into())),
        }
    }

    pub fn vars(&self) -> DeformVars {
        self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i32>, &Gauss)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn check_vars(&self, other: &PhaseCoeff) -> Result<()> {
        if self.vars != other.vars {
            return Err(Error::Config(format!(
                "coefficient modes differ: {:?} vs {:?}",
                self.vars, other.vars
            )));
        }
        Ok(())
    }

    fn insert_term(terms: &mut BTreeMap<Vec<i32>, Gauss>, exps: Vec<i32>, c: Gauss) {
        use std::collections::btree_map::Entry;
        match terms.entry(exps) {
            Entry::Vacant(v) => {
                if !c.is_zero() {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                let sum = o.get().add(&c);
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn try_add(&self, other: &PhaseCoeff) -> Result<PhaseCoeff> {
        self.check_vars(other)?;
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            PhaseCoeff::insert_term(&mut terms, e.clone(), c.clone());
        }
        Ok(PhaseCoeff { vars: self.vars, terms })
    }

    pub fn try_mul(&self, other: &PhaseCoeff) -> Result<PhaseCoeff> {
        self.check_vars(other)?;
        let mut terms = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<i32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                PhaseCoeff::insert_term(&mut terms, e, ca.mul(cb));
            }
        }
        Ok(PhaseCoeff { vars: self.vars, terms })
    }

    pub fn scale(&self, c: &Gauss) -> PhaseCoeff {
        let mut terms = BTreeMap::new();
        for (e, x) in &self.terms {
            PhaseCoeff::insert_term(&mut terms, e.clone(), x.mul(c));
        }
        PhaseCoeff { vars: self.vars, terms }
    }

    /// Numeric value under `assignment`; generic `qc` evaluates to `conj(q)`.
    pub fn specialize(&self, assignment: &Assignment) -> Result<Complex64> {
        let values = assignment_values(self.vars, assignment)?;
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let mut term = c.to_complex();
            for (v, &k) in values.iter().zip(e) {
                term *= v.powi(k);
            }
            acc += term;
        }
        Ok(acc)
    }
}

/// Per-variable numeric values, validated against the mode.
pub fn assignment_values(vars: DeformVars, assignment: &Assignment) -> Result<Vec<Complex64>> {
    let check_unit = |z: &Complex64| -> Result<()> {
        if (z.norm() - 1.0).abs() > UNIMODULAR_TOL {
            Err(Error::Domain(format!("|{z}| != 1 in unimodular mode")))
        } else {
            Ok(())
        }
    };
    match (vars, assignment) {
        (DeformVars::SingleGeneric, Assignment::Single(q)) => Ok(vec![*q, q.conj()]),
        (DeformVars::SingleUnimodular, Assignment::Single(q)) => {
            check_unit(q)?;
            Ok(vec![*q])
        }
        (DeformVars::MultiUnimodular { n, m }, Assignment::Multi(qs)) => {
            if qs.len() != n * m {
                return Err(Error::Config(format!(
                    "assignment has {} values, expected {}",
                    qs.len(),
                    n * m
                )));
            }
            qs.iter().try_for_each(check_unit)?;
            Ok(qs.clone())
        }
        _ => Err(Error::Config("assignment does not match deformation mode".into())),
    }
}

/// Checked product; errors on mismatched modes.
pub fn coeff_mul(a: &PhaseCoeff, b: &PhaseCoeff) -> Result<PhaseCoeff> {
    a.try_mul(b)
}

pub fn coeff_specialize(a: &PhaseCoeff, assignment: &Assignment) -> Result<Complex64> {
    a.specialize(assignment)
}

impl Scalar for PhaseCoeff {
    fn zero_like(&self) -> Self {
        PhaseCoeff::zero(self.vars)
    }
    fn one_like(&self) -> Self {
        PhaseCoeff::one(self.vars)
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn plus(&self, other: &Self) -> Self {
        self.try_add(other).expect("coefficient mode mismatch")
    }
    fn times(&self, other: &Self) -> Self {
        self.try_mul(other).expect("coefficient mode mismatch")
    }
    fn negated(&self) -> Self {
        self.scale(&Gauss::one().neg())
    }
    fn conjugate(&self) -> Self {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let e = match self.vars {
                DeformVars::SingleGeneric => vec![e[1], e[0]],
                _ => e.iter().map(|x| -x).collect(),
            };
            PhaseCoeff::insert_term(&mut terms, e, c.conj());
        }
        PhaseCoeff { vars: self.vars, terms }
    }
}

impl fmt::Display for PhaseCoeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "(0+0i)");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            match self.vars {
                DeformVars::SingleGeneric => {
                    if e[0] != 0 {
                        write!(f, "*q^{}", e[0])?;
                    }
                    if e[1] != 0 {
                        write!(f, "*qc^{}", e[1])?;
                    }
                }
                DeformVars::SingleUnimodular => {
                    if e[0] != 0 {
                        write!(f, "*q^{}", e[0])?;
                    }
                }
                DeformVars::MultiUnimodular { m, .. } => {
                    for (idx, &k) in e.iter().enumerate() {
                        if k != 0 {
                            write!(f, "*q[{},{}]^{}", idx / m + 1, idx % m + 1, k)?;
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

impl Zero for Gauss {
    fn zero() -> Self {
        Gauss::zero()
    }
    fn is_zero(&self) -> bool {
        Gauss::is_zero(self)
    }
}

impl std::ops::Add for Gauss {
    type Output = Gauss;
    fn add(self, o: Gauss) -> Gauss {
        Gauss::add(&self, &o)
    }
}

impl std::ops::Mul for Gauss {
    type Output = Gauss;
    fn mul(self, o: Gauss) -> Gauss {
        Gauss::mul(&self, &o)
    }
}

impl One for Gauss {
    fn one() -> Self {
        Gauss::one()
    }
}

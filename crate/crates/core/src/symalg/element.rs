use std::collections::BTreeMap;
use std::fmt;
use std::ops;
use std::sync::Arc;

use num_complex::Complex64;

use super::rewrite::{normal_order, Accumulator};
use super::{Algebra, Family, Letter, Monomial, NumAlgebra, RawWord};
use crate::coeff::{Assignment, PhaseCoeff, Scalar};
use crate::error::{Error, Result};

/// Finite linear combination of normal-form monomials.
#[derive(Clone, Debug)]
pub struct Element<C> {
    alg: Arc<Algebra<C>>,
    terms: BTreeMap<Monomial, C>,
}

pub type SymElement = Element<PhaseCoeff>;
pub type NumElement = Element<Complex64>;

/// Conditional expectations onto the gauge-fixed parts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Expectation {
    /// Keeps S-balanced monomials.
    Phi1,
    /// Keeps T-balanced monomials.
    Phi2,
    /// Keeps fully balanced monomials.
    Phi,
}

/// Letter-scaling *-automorphisms.
#[derive(Clone, Debug, PartialEq)]
pub enum AutSpec<C> {
    /// `t_r ↦ q^k t_r`.
    Alpha(i32),
    /// `s_j ↦ q^{-k} s_j`.
    Beta(i32),
    /// `s_j ↦ ζ s_j`, `t_r ↦ ξ t_r`.
    Rho { zeta: C, xi: C },
}

impl<C: Scalar> PartialEq for Element<C> {
    fn eq(&self, other: &Self) -> bool {
        same_algebra(&self.alg, &other.alg) && self.terms == other.terms
    }
}

fn same_algebra<C: Scalar>(a: &Arc<Algebra<C>>, b: &Arc<Algebra<C>>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

fn insert<C: Scalar>(terms: &mut BTreeMap<Monomial, C>, mono: Monomial, c: C) {
    use std::collections::btree_map::Entry;
    if c.is_zero() {
        return;
    }
    match terms.entry(mono) {
        Entry::Vacant(v) => {
            v.insert(c);
        }
        Entry::Occupied(mut o) => {
            let sum = o.get().plus(&c);
            if sum.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = sum;
            }
        }
    }
}

impl<C: Scalar> Element<C> {
    pub fn zero(alg: &Arc<Algebra<C>>) -> Self {
        Element { alg: alg.clone(), terms: BTreeMap::new() }
    }

    pub fn scalar(alg: &Arc<Algebra<C>>, c: C) -> Self {
        let mut e = Element::zero(alg);
        insert(&mut e.terms, Monomial::identity(), c);
        e
    }

    pub fn one(alg: &Arc<Algebra<C>>) -> Self {
        Element::scalar(alg, alg.unit().clone())
    }

    /// `c · mono`, normal-ordered.
    pub fn monomial(alg: &Arc<Algebra<C>>, c: C, mono: &Monomial) -> Result<Self> {
        Element::from_raw(alg, &[(c, mono.to_raw())])
    }

    /// A single generator.
    pub fn generator(alg: &Arc<Algebra<C>>, letter: Letter) -> Result<Self> {
        alg.check_letter(letter)?;
        let mut e = Element::zero(alg);
        insert(&mut e.terms, Monomial::new(vec![letter], vec![]), alg.unit().clone());
        Ok(e)
    }

    pub fn s(alg: &Arc<Algebra<C>>, j: u16) -> Result<Self> {
        Element::generator(alg, Letter::s(j))
    }

    pub fn t(alg: &Arc<Algebra<C>>, r: u16) -> Result<Self> {
        Element::generator(alg, Letter::t(r))
    }

    /// `Σ_j s_j s_j*`.
    pub fn proj_q(alg: &Arc<Algebra<C>>) -> Self {
        let mut e = Element::zero(alg);
        for j in 1..=alg.n() as u16 {
            insert(&mut e.terms, Monomial::new(vec![Letter::s(j)], vec![Letter::s(j)]), alg.unit().clone());
        }
        e
    }

    /// `Σ_r t_r t_r*`.
    pub fn proj_p(alg: &Arc<Algebra<C>>) -> Self {
        let mut e = Element::zero(alg);
        for r in 1..=alg.m() as u16 {
            insert(&mut e.terms, Monomial::new(vec![Letter::t(r)], vec![Letter::t(r)]), alg.unit().clone());
        }
        e
    }

    /// Normal-orders a linear combination of raw words.
    pub fn from_raw(alg: &Arc<Algebra<C>>, words: &[(C, RawWord)]) -> Result<Self> {
        let mut e = Element::zero(alg);
        for (c, w) in words {
            if let Some((c, mono)) = normal_order(alg, c.clone(), w)? {
                insert(&mut e.terms, mono, c);
            }
        }
        Ok(e)
    }

    /// Builds an element from terms already in normal form.
    pub fn from_terms<I>(alg: &Arc<Algebra<C>>, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, C)>,
    {
        let mut e = Element::zero(alg);
        for (mono, c) in terms {
            insert(&mut e.terms, mono, c);
        }
        e
    }

    pub fn algebra(&self) -> &Arc<Algebra<C>> {
        &self.alg
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, mono: &Monomial) -> Option<&C> {
        self.terms.get(mono)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Longest monomial, in letters.
    pub fn max_word_len(&self) -> usize {
        self.terms.keys().map(Monomial::len).max().unwrap_or(0)
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if same_algebra(&self.alg, &other.alg) {
            Ok(())
        } else {
            Err(Error::Config("elements belong to different algebras".into()))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut terms = self.terms.clone();
        for (mono, c) in &other.terms {
            insert(&mut terms, mono.clone(), c.clone());
        }
        Ok(Element { alg: self.alg.clone(), terms })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut terms = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let mut acc = Accumulator::new(&self.alg, ca.times(cb));
                acc.push_monomial(ma);
                acc.push_monomial(mb);
                if let Some((c, mono)) = acc.finish() {
                    insert(&mut terms, mono, c);
                }
            }
        }
        Ok(Element { alg: self.alg.clone(), terms })
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut terms = BTreeMap::new();
        for (mono, x) in &self.terms {
            insert(&mut terms, mono.clone(), x.times(c));
        }
        Element { alg: self.alg.clone(), terms }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Element::one(&self.alg);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// The *-adjoint: conjugate coefficients, swap creation and annihilation.
    pub fn adjoint(&self) -> Self {
        let mut terms = BTreeMap::new();
        for (mono, c) in &self.terms {
            insert(&mut terms, mono.adjoint(), c.conjugate());
        }
        Element { alg: self.alg.clone(), terms }
    }

    /// Homogeneous component of degree `p`.
    pub fn gauge_component(&self, p: (i32, i32)) -> Self {
        self.filter(|m| m.degree() == p)
    }

    /// All nonzero homogeneous components keyed by degree.
    pub fn components(&self) -> BTreeMap<(i32, i32), Self> {
        let mut out: BTreeMap<(i32, i32), Self> = BTreeMap::new();
        for (mono, c) in &self.terms {
            out.entry(mono.degree())
                .or_insert_with(|| Element::zero(&self.alg))
                .terms
                .insert(mono.clone(), c.clone());
        }
        out
    }

    pub fn degrees(&self) -> Vec<(i32, i32)> {
        self.components().into_keys().collect()
    }

    pub fn expectation(&self, which: Expectation) -> Self {
        self.filter(|m| {
            let (ds, dt) = m.degree();
            match which {
                Expectation::Phi1 => ds == 0,
                Expectation::Phi2 => dt == 0,
                Expectation::Phi => ds == 0 && dt == 0,
            }
        })
    }

    pub fn filter<F: Fn(&Monomial) -> bool>(&self, keep: F) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| keep(m))
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        Element { alg: self.alg.clone(), terms }
    }

    /// Applies a letter-scaling automorphism.
    pub fn apply_aut(&self, spec: &AutSpec<C>) -> Result<Self> {
        let (s_factor, t_factor) = match spec {
            AutSpec::Alpha(k) => (self.alg.unit().clone(), self.alg.q_pow(*k)?),
            AutSpec::Beta(k) => (self.alg.q_pow(-*k)?, self.alg.unit().clone()),
            AutSpec::Rho { zeta, xi } => (zeta.clone(), xi.clone()),
        };
        let factor = |l: &Letter, star: bool| -> C {
            let f = match l.family {
                Family::S => &s_factor,
                Family::T => &t_factor,
            };
            if star {
                f.conjugate()
            } else {
                f.clone()
            }
        };
        let mut terms = BTreeMap::new();
        for (mono, c) in &self.terms {
            let mut x = c.clone();
            for l in &mono.creation {
                x = x.times(&factor(l, false));
            }
            for l in &mono.annihilation {
                x = x.times(&factor(l, true));
            }
            insert(&mut terms, mono.clone(), x);
        }
        Ok(Element { alg: self.alg.clone(), terms })
    }

    /// Re-expresses the element over another algebra with coefficients `f(c)`.
    pub fn map_coeffs<D: Scalar, F: Fn(&C) -> Result<D>>(
        &self,
        alg: &Arc<Algebra<D>>,
        f: F,
    ) -> Result<Element<D>> {
        if alg.n() != self.alg.n() || alg.m() != self.alg.m() {
            return Err(Error::Config("generator counts differ".into()));
        }
        if alg.is_unimodular() != self.alg.is_unimodular() {
            return Err(Error::Config("normal-form conventions differ".into()));
        }
        let mut terms = BTreeMap::new();
        for (mono, c) in &self.terms {
            insert(&mut terms, mono.clone(), f(c)?);
        }
        Ok(Element { alg: alg.clone(), terms })
    }

    /// The raw word of every term, for re-normalization.
    pub fn raw_terms(&self) -> Vec<(C, RawWord)> {
        self.terms.iter().map(|(m, c)| (c.clone(), m.to_raw())).collect()
    }
}

impl Element<PhaseCoeff> {
    /// Numeric element under `assignment`, over the matching numeric algebra.
    pub fn specialize(&self, assignment: &Assignment) -> Result<NumElement> {
        let alg = NumAlgebra::specialized(&self.alg, assignment)?;
        self.specialize_into(&alg, assignment)
    }

    pub fn specialize_into(
        &self,
        alg: &Arc<NumAlgebra>,
        assignment: &Assignment,
    ) -> Result<NumElement> {
        self.map_coeffs(alg, |c| c.specialize(assignment))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.terms
                .iter()
                .map(|(m, c)| {
                    serde_json::json!({
                        "creation": m.creation.iter().map(|l| l.to_string()).collect::<Vec<_>>(),
                        "annihilation": m.annihilation.iter().map(|l| l.to_string()).collect::<Vec<_>>(),
                        "coeff": c.to_string(),
                    })
                })
                .collect(),
        )
    }
}

impl Element<Complex64> {
    /// Largest coefficient modulus.
    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Drops coefficients with modulus at most `tol`.
    pub fn pruned(&self, tol: f64) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(_, c)| c.norm() > tol)
            .map(|(m, c)| (m.clone(), *c))
            .collect();
        Element { alg: self.alg.clone(), terms }
    }
}

impl<C: Scalar + fmt::Display> fmt::Display for Element<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(m, c)| format!("{c}*{m}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<'a, C: Scalar> ops::Add<&'a Element<C>> for &'a Element<C> {
    type Output = Element<C>;
    fn add(self, rhs: &Element<C>) -> Element<C> {
        self.try_add(rhs).expect("elements belong to different algebras")
    }
}

impl<'a, C: Scalar> ops::Sub<&'a Element<C>> for &'a Element<C> {
    type Output = Element<C>;
    fn sub(self, rhs: &Element<C>) -> Element<C> {
        let neg = rhs.scale(&rhs.alg.unit().negated());
        self.try_add(&neg).expect("elements belong to different algebras")
    }
}

impl<'a, C: Scalar> ops::Mul<&'a Element<C>> for &'a Element<C> {
    type Output = Element<C>;
    fn mul(self, rhs: &Element<C>) -> Element<C> {
        self.try_mul(rhs).expect("elements belong to different algebras")
    }
}

impl<C: Scalar> ops::Neg for &Element<C> {
    type Output = Element<C>;
    fn neg(self) -> Element<C> {
        self.scale(&self.alg.unit().negated())
    }
}

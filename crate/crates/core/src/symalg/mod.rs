//! Free *-algebra on the generators `s_1..s_n`, `t_1..t_m` with the
//! normal-ordering rewrite system of the twisted Cuntz–Toeplitz relations.

mod element;
mod parse;
mod rewrite;

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::coeff::{assignment_values, Assignment, DeformVars, PhaseCoeff, Scalar};
use crate::error::{Error, Result};

pub use element::{AutSpec, Element, Expectation, NumElement, SymElement};
pub use parse::parse_expr;
pub(crate) use rewrite::Accumulator;
pub use rewrite::{
    apply_rule, normal_order, normal_order_with, redexes, RawLetter, RawWord, Rule,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    S,
    T,
}

/// Generator `s_index` or `t_index`; indices are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter {
    pub family: Family,
    pub index: u16,
}

impl Letter {
    pub fn s(index: u16) -> Letter {
        Letter { family: Family::S, index }
    }

    pub fn t(index: u16) -> Letter {
        Letter { family: Family::T, index }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::S => write!(f, "s{}", self.index),
            Family::T => write!(f, "t{}", self.index),
        }
    }
}

/// `creation · annihilation*`; the annihilation word is stored unstarred.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Monomial {
    pub creation: Vec<Letter>,
    pub annihilation: Vec<Letter>,
}

/// Lengths `(|μ|, |μ'|, |ν'|, |ν|)` of `s_μ t_μ' t*_ν' s*_ν`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Profile {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub d: usize,
}

impl Profile {
    pub fn new(a: usize, b: usize, c: usize, d: usize) -> Profile {
        Profile { a, b, c, d }
    }
}

fn count(word: &[Letter], family: Family) -> usize {
    word.iter().filter(|l| l.family == family).count()
}

impl Monomial {
    pub fn identity() -> Monomial {
        Monomial { creation: vec![], annihilation: vec![] }
    }

    pub fn new(creation: Vec<Letter>, annihilation: Vec<Letter>) -> Monomial {
        Monomial { creation, annihilation }
    }

    pub fn adjoint(&self) -> Monomial {
        Monomial { creation: self.annihilation.clone(), annihilation: self.creation.clone() }
    }

    /// `(#s − #s*, #t − #t*)`.
    pub fn degree(&self) -> (i32, i32) {
        let ds = count(&self.creation, Family::S) as i32
            - count(&self.annihilation, Family::S) as i32;
        let dt = count(&self.creation, Family::T) as i32
            - count(&self.annihilation, Family::T) as i32;
        (ds, dt)
    }

    pub fn profile(&self) -> Profile {
        Profile {
            a: count(&self.creation, Family::S),
            b: count(&self.creation, Family::T),
            c: count(&self.annihilation, Family::T),
            d: count(&self.annihilation, Family::S),
        }
    }

    pub fn len(&self) -> usize {
        self.creation.len() + self.annihilation.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The letters as a raw word: creation, then reversed starred annihilation.
    pub fn to_raw(&self) -> RawWord {
        let mut w: RawWord =
            self.creation.iter().map(|&l| RawLetter { letter: l, star: false }).collect();
        w.extend(self.annihilation.iter().rev().map(|&l| RawLetter { letter: l, star: true }));
        w
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "1");
        }
        let mut parts: Vec<String> = self.creation.iter().map(|l| l.to_string()).collect();
        parts.extend(self.annihilation.iter().rev().map(|l| format!("{l}'")));
        write!(f, "{}", parts.join("*"))
    }
}

/// Generator counts, relation mode, and the structure constants
/// `q_{ij}` (in `s_i t_j = q_{ij} t_j s_i`) and their conjugates.
#[derive(Clone, Debug, PartialEq)]
pub struct Algebra<C> {
    n: usize,
    m: usize,
    unimodular: bool,
    q: Vec<C>,
    qbar: Vec<C>,
    unit: C,
    base_q: Option<C>,
    vars: Option<DeformVars>,
}

pub type SymAlgebra = Algebra<PhaseCoeff>;
pub type NumAlgebra = Algebra<Complex64>;

impl<C: Scalar> Algebra<C> {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn is_unimodular(&self) -> bool {
        self.unimodular
    }

    pub fn vars(&self) -> Option<DeformVars> {
        self.vars
    }

    pub fn unit(&self) -> &C {
        &self.unit
    }

    /// `q_{ij}` with 1-based indices.
    pub fn q_ij(&self, i: u16, j: u16) -> &C {
        &self.q[(i as usize - 1) * self.m + (j as usize - 1)]
    }

    pub fn qbar_ij(&self, i: u16, j: u16) -> &C {
        &self.qbar[(i as usize - 1) * self.m + (j as usize - 1)]
    }

    /// `q^k` of a single-parameter algebra; negative powers need unimodularity.
    pub fn q_pow(&self, k: i32) -> Result<C> {
        let q = self
            .base_q
            .as_ref()
            .ok_or_else(|| Error::Mode("no single deformation parameter".into()))?;
        if k >= 0 {
            Ok(q.pow(k as u32))
        } else if self.unimodular {
            Ok(q.conjugate().pow((-k) as u32))
        } else {
            Err(Error::Mode("negative power of q in generic mode".into()))
        }
    }

    pub fn check_letter(&self, l: Letter) -> Result<()> {
        let bound = match l.family {
            Family::S => self.n,
            Family::T => self.m,
        };
        if l.index == 0 || l.index as usize > bound {
            return Err(Error::Range(format!("{l} with n = {}, m = {}", self.n, self.m)));
        }
        Ok(())
    }
}

impl SymAlgebra {
    /// Exact algebra; single-parameter modes use `q_{ij} := qc`.
    pub fn symbolic(n: usize, m: usize, vars: DeformVars) -> Result<Arc<SymAlgebra>> {
        if n == 0 || m == 0 {
            return Err(Error::Config("n and m must be positive".into()));
        }
        let (q, qbar, base_q) = match vars {
            DeformVars::SingleGeneric | DeformVars::SingleUnimodular => {
                let qv = PhaseCoeff::q(vars)?;
                let qc = PhaseCoeff::qc(vars)?;
                (vec![qc; n * m], vec![qv.clone(); n * m], Some(qv))
            }
            DeformVars::MultiUnimodular { n: vn, m: vm } => {
                if vn != n || vm != m {
                    return Err(Error::Config(format!(
                        "multi-parameter variables are {vn}x{vm}, algebra is {n}x{m}"
                    )));
                }
                let mut q = Vec::with_capacity(n * m);
                for i in 1..=n {
                    for j in 1..=m {
                        q.push(PhaseCoeff::qij_pow(vars, i, j, 1)?);
                    }
                }
                let qbar = q.iter().map(|x| x.conjugate()).collect();
                (q, qbar, None)
            }
        };
        Ok(Arc::new(Algebra {
            n,
            m,
            unimodular: vars.is_unimodular(),
            q,
            qbar,
            unit: PhaseCoeff::one(vars),
            base_q,
            vars: Some(vars),
        }))
    }
}

impl NumAlgebra {
    /// Numeric single-parameter algebra at `q0`.
    pub fn numeric(n: usize, m: usize, q0: Complex64, unimodular: bool) -> Result<Arc<NumAlgebra>> {
        if n == 0 || m == 0 {
            return Err(Error::Config("n and m must be positive".into()));
        }
        if unimodular {
            assignment_values(DeformVars::SingleUnimodular, &Assignment::Single(q0))?;
        } else if q0.norm() > 1.0 {
            return Err(Error::Domain(format!("|q0| = {} > 1", q0.norm())));
        }
        Ok(Arc::new(Algebra {
            n,
            m,
            unimodular,
            q: vec![q0.conj(); n * m],
            qbar: vec![q0; n * m],
            unit: Complex64::new(1.0, 0.0),
            base_q: Some(q0),
            vars: None,
        }))
    }

    /// Numeric multi-parameter algebra; `qmat` is row-major `n × m`.
    pub fn numeric_multi(n: usize, m: usize, qmat: &[Complex64]) -> Result<Arc<NumAlgebra>> {
        let vars = DeformVars::MultiUnimodular { n, m };
        let q = assignment_values(vars, &Assignment::Multi(qmat.to_vec()))?;
        let qbar = q.iter().map(|z| z.conj()).collect();
        Ok(Arc::new(Algebra {
            n,
            m,
            unimodular: true,
            q,
            qbar,
            unit: Complex64::new(1.0, 0.0),
            base_q: None,
            vars: None,
        }))
    }

    /// The numeric algebra obtained by specializing `sym` at `assignment`.
    pub fn specialized(sym: &SymAlgebra, assignment: &Assignment) -> Result<Arc<NumAlgebra>> {
        let vars = sym.vars.expect("symbolic algebra carries its variables");
        let values = assignment_values(vars, assignment)?;
        match vars {
            DeformVars::MultiUnimodular { .. } => NumAlgebra::numeric_multi(sym.n, sym.m, &values),
            _ => NumAlgebra::numeric(sym.n, sym.m, values[0], vars.is_unimodular()),
        }
    }
}

//! The Cuntz quotient: canonical forms by level raising, matrix blocks of
//! the fixed-point algebra, the implementing isometry, the `a x b = 1`
//! witness, and ideal membership in the Toeplitz algebra.

use std::collections::BTreeMap;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::coeff::Scalar;
use crate::error::{Error, Result};
use crate::symalg::{
    Accumulator, Algebra, Element, Expectation, Family, Letter, Monomial, NumAlgebra, NumElement, Profile,
    RawLetter, RawWord,
};

/// Which Cuntz range relations are imposed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CuntzMask {
    pub s: bool,
    pub t: bool,
}

impl CuntzMask {
    pub const BOTH: CuntzMask = CuntzMask { s: true, t: true };
    pub const S_ONLY: CuntzMask = CuntzMask { s: true, t: false };
    pub const T_ONLY: CuntzMask = CuntzMask { s: false, t: true };
}

fn require_unimodular<C: Scalar>(alg: &Algebra<C>) -> Result<()> {
    if alg.is_unimodular() {
        Ok(())
    } else {
        Err(Error::Mode("the Cuntz quotient needs a unimodular deformation".into()))
    }
}

/// All words of length `len` over `1..=k`, in lexicographic order.
pub fn words(k: usize, len: usize) -> Vec<Vec<u16>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                (1..=k as u16).map(move |i| {
                    let mut v = w.clone();
                    v.push(i);
                    v
                })
            })
            .collect();
    }
    out
}

fn letters(family: Family, idx: &[u16]) -> Vec<Letter> {
    idx.iter().map(|&i| Letter { family, index: i }).collect()
}

/// `c · mono` with `Σ_{|δ|=da,|ε|=db} s_δ t_ε t_ε* s_δ*` inserted in the middle.
fn raise_monomial<C: Scalar>(
    alg: &Algebra<C>,
    mono: &Monomial,
    c: &C,
    da: usize,
    db: usize,
    out: &mut Vec<(Monomial, C)>,
) {
    let deltas = words(alg.n(), da);
    let epsilons = words(alg.m(), db);
    for d in &deltas {
        for e in &epsilons {
            let mut a = Accumulator::new(alg, c.clone());
            for &l in &mono.creation {
                a.push(RawLetter::new(l, false));
            }
            for &i in d {
                a.push(RawLetter::new(Letter::s(i), false));
            }
            for &r in e {
                a.push(RawLetter::new(Letter::t(r), false));
            }
            for &r in e.iter().rev() {
                a.push(RawLetter::new(Letter::t(r), true));
            }
            for &i in d.iter().rev() {
                a.push(RawLetter::new(Letter::s(i), true));
            }
            for &l in mono.annihilation.iter().rev() {
                a.push(RawLetter::new(l, true));
            }
            if let Some((c, m)) = a.finish() {
                out.push((m, c));
            }
        }
    }
}

/// Rewrites `x` at the `target` profile using `1 = Σ s_δ t_ε t_ε* s_δ*`.
pub fn raise_profile<C: Scalar>(x: &Element<C>, target: Profile) -> Result<Element<C>> {
    let alg = x.algebra();
    require_unimodular(alg)?;
    let mut out = Vec::new();
    for (mono, c) in x.terms() {
        let p = mono.profile();
        let ok = target.a >= p.a
            && target.b >= p.b
            && target.c >= p.c
            && target.d >= p.d
            && target.a - p.a == target.d - p.d
            && target.b - p.b == target.c - p.c;
        if !ok {
            return Err(Error::Domain(format!(
                "profile {p:?} cannot be raised to {target:?}"
            )));
        }
        raise_monomial(alg, mono, c, target.a - p.a, target.b - p.b, &mut out);
    }
    Ok(Element::from_terms(alg, out))
}

/// Canonical representative modulo the masked range relations: within each
/// class of monomials sharing a degree (and the unraised lengths), every
/// monomial is raised to the componentwise-maximal profile.
pub fn canonical_form<C: Scalar>(x: &Element<C>, mask: CuntzMask) -> Result<Element<C>> {
    let alg = x.algebra();
    require_unimodular(alg)?;
    type Key = ((i32, i32), usize, usize);
    let mut groups: BTreeMap<Key, Vec<(Monomial, C)>> = BTreeMap::new();
    for (mono, c) in x.terms() {
        let p = mono.profile();
        let key = match (mask.s, mask.t) {
            (true, true) => (mono.degree(), 0, 0),
            (true, false) => (mono.degree(), p.b, p.c),
            (false, true) => (mono.degree(), p.a, p.d),
            (false, false) => return Ok(x.clone()),
        };
        groups.entry(key).or_default().push((mono.clone(), c.clone()));
    }
    let mut out = Vec::new();
    for members in groups.values() {
        let max_a = members.iter().map(|(m, _)| m.profile().a).max().unwrap_or(0);
        let max_b = members.iter().map(|(m, _)| m.profile().b).max().unwrap_or(0);
        for (mono, c) in members {
            let p = mono.profile();
            let da = if mask.s { max_a - p.a } else { 0 };
            let db = if mask.t { max_b - p.b } else { 0 };
            raise_monomial(alg, mono, c, da, db, &mut out);
        }
    }
    Ok(Element::from_terms(alg, out))
}

/// Equality in the Cuntz quotient.
pub fn quotient_equal<C: Scalar>(x: &Element<C>, y: &Element<C>) -> Result<bool> {
    Ok(canonical_form(&(x - y), CuntzMask::BOTH)?.is_zero())
}

/// Largest coefficient of the canonical form of `x`.
pub fn quotient_residual(x: &NumElement) -> Result<f64> {
    Ok(canonical_form(x, CuntzMask::BOTH)?.max_abs())
}

/// A dense block of the fixed-point algebra at level `(k, l)`, indexed by
/// pairs `(μ, μ')` in lexicographic order with `μ` most significant.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixBlock {
    pub k: usize,
    pub l: usize,
    pub matrix: DMatrix<Complex64>,
}

fn rank(word: &[Letter], base: usize) -> usize {
    word.iter().fold(0, |acc, l| acc * base + (l.index as usize - 1))
}

fn split_block(word: &[Letter]) -> (&[Letter], &[Letter]) {
    let cut = word.iter().position(|l| l.family == Family::T).unwrap_or(word.len());
    word.split_at(cut)
}

/// Matrix of a balanced element after raising to `(k, l, l, k)`.
pub fn to_matrix(x: &NumElement, k: usize, l: usize) -> Result<MatrixBlock> {
    let alg = x.algebra();
    if x.terms().any(|(m, _)| m.degree() != (0, 0)) {
        return Err(Error::Domain("to_matrix needs a balanced element".into()));
    }
    let raised = raise_profile(x, Profile::new(k, l, l, k))?;
    let (n, m) = (alg.n(), alg.m());
    let ml = m.pow(l as u32);
    let dim = n.pow(k as u32) * ml;
    let mut matrix = DMatrix::zeros(dim, dim);
    for (mono, c) in raised.terms() {
        let (mu, mu_t) = split_block(&mono.creation);
        let (nu, nu_t) = split_block(&mono.annihilation);
        let row = rank(mu, n) * ml + rank(mu_t, m);
        let col = rank(nu, n) * ml + rank(nu_t, m);
        matrix[(row, col)] += c;
    }
    Ok(MatrixBlock { k, l, matrix })
}

/// Inverse of [`to_matrix`].
pub fn from_matrix(alg: &Arc<NumAlgebra>, block: &MatrixBlock) -> Result<NumElement> {
    require_unimodular(alg)?;
    let s_words = words(alg.n(), block.k);
    let t_words = words(alg.m(), block.l);
    let mut index = Vec::new();
    for mu in &s_words {
        for mu_t in &t_words {
            let mut w = letters(Family::S, mu);
            w.extend(letters(Family::T, mu_t));
            index.push(w);
        }
    }
    if block.matrix.nrows() != index.len() || block.matrix.ncols() != index.len() {
        return Err(Error::Config("matrix size does not match its level".into()));
    }
    let mut terms = Vec::new();
    for (r, row_word) in index.iter().enumerate() {
        for (c, col_word) in index.iter().enumerate() {
            let v = block.matrix[(r, c)];
            if v != Complex64::new(0.0, 0.0) {
                terms.push((Monomial::new(row_word.clone(), col_word.clone()), v));
            }
        }
    }
    Ok(Element::from_terms(alg, terms))
}

/// `w = Σ_{|δ|=k,|ε|=l} s_δ t_ε s_γ t_ε* s_δ*` with
/// `s_γ = s_1^{2k} s_2 t_1^{2l} t_2`.
pub fn implementing_isometry<C: Scalar>(
    alg: &Arc<Algebra<C>>,
    k: usize,
    l: usize,
) -> Result<Element<C>> {
    require_unimodular(alg)?;
    if alg.n() < 2 || alg.m() < 2 {
        return Err(Error::Domain("the implementing isometry needs n, m >= 2".into()));
    }
    let mut gamma: RawWord = Vec::new();
    gamma.extend(std::iter::repeat_n(RawLetter::new(Letter::s(1), false), 2 * k));
    gamma.push(RawLetter::new(Letter::s(2), false));
    gamma.extend(std::iter::repeat_n(RawLetter::new(Letter::t(1), false), 2 * l));
    gamma.push(RawLetter::new(Letter::t(2), false));
    let mut words_out = Vec::new();
    for d in words(alg.n(), k) {
        for e in words(alg.m(), l) {
            let mut w: RawWord = d.iter().map(|&i| RawLetter::new(Letter::s(i), false)).collect();
            w.extend(e.iter().map(|&r| RawLetter::new(Letter::t(r), false)));
            w.extend(gamma.iter().copied());
            w.extend(e.iter().rev().map(|&r| RawLetter::new(Letter::t(r), true)));
            w.extend(d.iter().rev().map(|&i| RawLetter::new(Letter::s(i), true)));
            words_out.push((alg.unit().clone(), w));
        }
    }
    Element::from_raw(alg, &words_out)
}

/// Output of [`pure_infinite_witness`].
#[derive(Clone, Debug)]
pub struct Witness {
    pub a: NumElement,
    pub b: NumElement,
    /// Level at which the expectation was diagonalized.
    pub level: usize,
    /// Top eigenvalue of the expectation block.
    pub lambda: f64,
}

/// Coefficients below this modulus are discarded between witness steps.
const PRUNE: f64 = 1e-15;

/// Unitary `u` with `u ξ = e_0` for a unit vector `ξ`.
fn householder_to_first(xi: &DVector<Complex64>) -> DMatrix<Complex64> {
    let dim = xi.len();
    let x0 = xi[0];
    let phase = if x0.norm() > 0.0 { x0 / x0.norm() } else { Complex64::new(1.0, 0.0) };
    // H ξ = -phase e_0 for v = ξ + phase e_0.
    let mut v = xi.clone();
    v[0] += phase;
    let vv = v.dot(&v.conjugate()).re;
    let id = DMatrix::<Complex64>::identity(dim, dim);
    let h = if vv > 0.0 {
        &id - (&v * v.adjoint()) * Complex64::new(2.0 / vv, 0.0)
    } else {
        id
    };
    h * (-phase.conj())
}

/// Constructs `a, b` with `a x b = 1` in the quotient for nonzero `x`.
pub fn pure_infinite_witness(x: &NumElement) -> Result<Witness> {
    let alg = x.algebra().clone();
    require_unimodular(&alg)?;
    if canonical_form(x, CuntzMask::BOTH)?.pruned(PRUNE).is_zero() {
        return Err(Error::Domain("the witness needs a nonzero element".into()));
    }
    let y = (&x.adjoint() * x).pruned(PRUNE);
    let r = y
        .terms()
        .map(|(m, _)| {
            let p = m.profile();
            p.a.max(p.b).max(p.c).max(p.d)
        })
        .max()
        .unwrap_or(0);
    let block = to_matrix(&y.expectation(Expectation::Phi), r, r)?;
    let herm = (&block.matrix + block.matrix.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = herm.symmetric_eigen();
    let mut top = 0;
    for i in 1..eig.eigenvalues.len() {
        if eig.eigenvalues[i] > eig.eigenvalues[top] {
            top = i;
        }
    }
    let lambda = eig.eigenvalues[top];
    assert!(lambda > 0.0, "expectation of x*x must have a positive eigenvalue");
    let xi: DVector<Complex64> = eig.eigenvectors.column(top).into_owned();
    let e = MatrixBlock { k: r, l: r, matrix: &xi * xi.adjoint() };
    let u = MatrixBlock { k: r, l: r, matrix: householder_to_first(&xi) };
    let e_el = from_matrix(&alg, &e)?;
    let u_el = from_matrix(&alg, &u)?;
    let w = implementing_isometry(&alg, r, r)?;
    let mut ann = vec![Letter::s(1); r];
    ann.extend(vec![Letter::t(1); r]);
    let prefix = Element::from_terms(
        &alg,
        [(Monomial::new(vec![], ann), Complex64::new(lambda.powf(-0.5), 0.0))],
    );
    let z = (&(&(&prefix * &u_el).pruned(PRUNE) * &e_el).pruned(PRUNE) * &w.adjoint()).pruned(PRUNE);
    let b = z.adjoint();
    let a = (&z * &x.adjoint()).pruned(PRUNE);
    Ok(Witness { a, b, level: r, lambda })
}

/// `‖a x b − 1‖` measured on the canonical form.
pub fn witness_residual(x: &NumElement, w: &Witness) -> Result<f64> {
    let axb = &(&w.a * x).pruned(PRUNE) * &w.b;
    quotient_residual(&(&axb - &Element::one(x.algebra())))
}

/// Toeplitz matrix unit `s_μ (1−Q) s_ν*` (kind S) or `t_μ (1−P) t_ν*` (kind T).
pub fn matrix_unit_toeplitz<C: Scalar>(
    alg: &Arc<Algebra<C>>,
    kind: Family,
    mu: &[u16],
    nu: &[u16],
) -> Result<Element<C>> {
    let gens = |w: &[u16]| -> Result<Element<C>> {
        let mut acc = Element::one(alg);
        for &i in w {
            acc = &acc * &Element::generator(alg, Letter { family: kind, index: i })?;
        }
        Ok(acc)
    };
    let proj = match kind {
        Family::S => Element::proj_q(alg),
        Family::T => Element::proj_p(alg),
    };
    let defect = &Element::one(alg) - &proj;
    Ok(&(&gens(mu)? * &defect) * &gens(nu)?.adjoint())
}

/// Matrix units indexed by all word pairs of length at most `max_len`.
pub fn matrix_units_toeplitz<C: Scalar>(
    alg: &Arc<Algebra<C>>,
    kind: Family,
    max_len: usize,
) -> Result<BTreeMap<(Vec<u16>, Vec<u16>), Element<C>>> {
    let k = match kind {
        Family::S => alg.n(),
        Family::T => alg.m(),
    };
    let all: Vec<Vec<u16>> = (0..=max_len).flat_map(|len| words(k, len)).collect();
    let mut out = BTreeMap::new();
    for mu in &all {
        for nu in &all {
            out.insert((mu.clone(), nu.clone()), matrix_unit_toeplitz(alg, kind, mu, nu)?);
        }
    }
    Ok(out)
}

/// Membership in the four nontrivial ideals of the Toeplitz algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct IdealFlags {
    pub in_iq: bool,
    pub in_i1: bool,
    pub in_i2: bool,
    pub in_mq: bool,
}

fn membership<C: Scalar, F: Fn(&Element<C>) -> bool>(
    x: &Element<C>,
    vanishes: F,
) -> Result<IdealFlags> {
    let in_i1 = vanishes(&canonical_form(x, CuntzMask::S_ONLY)?);
    let in_i2 = vanishes(&canonical_form(x, CuntzMask::T_ONLY)?);
    let in_mq = vanishes(&canonical_form(x, CuntzMask::BOTH)?);
    Ok(IdealFlags { in_iq: in_i1 && in_i2, in_i1, in_i2, in_mq })
}

/// Exact ideal membership.
pub fn ideal_membership<C: Scalar>(x: &Element<C>) -> Result<IdealFlags> {
    membership(x, |e| e.is_zero())
}

/// Ideal membership with a coefficient tolerance.
pub fn ideal_membership_numeric(x: &NumElement, tol: f64) -> Result<IdealFlags> {
    membership(x, |e| e.max_abs() <= tol)
}

/// Words `s_μ t_μ'` with `|μ| = k`, `|μ'| = l`, in [`to_matrix`] order.
pub fn fixed_point_words(n: usize, m: usize, k: usize, l: usize) -> Vec<Vec<Letter>> {
    let mut out = Vec::new();
    for mu in words(n, k) {
        for mu_t in words(m, l) {
            let mut w = letters(Family::S, &mu);
            w.extend(letters(Family::T, &mu_t));
            out.push(w);
        }
    }
    out
}

/// Number of failed matrix-unit relations among `e_{ab} = s_μ t_μ' t_ν'* s_ν*`
/// of `F_{k,l}`: `e_{ab} e_{cd} = δ_{bc} e_{ad}`, `e_{ab}* = e_{ba}`, and
/// `Σ_a e_{aa} = 1` in the quotient.
pub fn fixed_point_unit_failures<C: Scalar>(alg: &Arc<Algebra<C>>, k: usize, l: usize) -> Result<usize> {
    require_unimodular(alg)?;
    let basis = fixed_point_words(alg.n(), alg.m(), k, l);
    let unit = |a: &[Letter], b: &[Letter]| {
        Element::from_terms(alg, [(Monomial::new(a.to_vec(), b.to_vec()), alg.unit().clone())])
    };
    let mut failures = 0;
    for a in &basis {
        for b in &basis {
            let eab = unit(a, b);
            failures += usize::from(eab.adjoint() != unit(b, a));
            for c in &basis {
                for d in &basis {
                    let expected = if b == c { unit(a, d) } else { Element::zero(alg) };
                    failures += usize::from(eab.try_mul(&unit(c, d))? != expected);
                }
            }
        }
    }
    let diag_sum = basis.iter().fold(Element::zero(alg), |acc, a| &acc + &unit(a, a));
    failures += usize::from(!quotient_equal(&diag_sum, &Element::one(alg))?);
    Ok(failures)
}

/// Number of index tuples with `|μ₁|, |ν₁|, |μ₂|, |ν₂| ≤ max_len` where
/// `E·X ≠ q^{(|ν₁|−|μ₁|)(|μ₂|−|ν₂|)} X·E` for `E = s_μ₁(1−Q)s_ν₁*` and
/// `X = t_μ₂ t_ν₂*`.
pub fn commutation_phase_failures<C: Scalar>(alg: &Arc<Algebra<C>>, max_len: usize) -> Result<usize> {
    require_unimodular(alg)?;
    let s_all: Vec<Vec<u16>> = (0..=max_len).flat_map(|len| words(alg.n(), len)).collect();
    let t_all: Vec<Vec<u16>> = (0..=max_len).flat_map(|len| words(alg.m(), len)).collect();
    let t_word = |w: &[u16]| -> Result<Element<C>> {
        w.iter().try_fold(Element::one(alg), |acc, &r| Ok(&acc * &Element::t(alg, r)?))
    };
    let mut failures = 0;
    for mu1 in &s_all {
        for nu1 in &s_all {
            let e = matrix_unit_toeplitz(alg, Family::S, mu1, nu1)?;
            for mu2 in &t_all {
                for nu2 in &t_all {
                    let x = &t_word(mu2)? * &t_word(nu2)?.adjoint();
                    let exp = (nu1.len() as i32 - mu1.len() as i32) * (mu2.len() as i32 - nu2.len() as i32);
                    let rhs = (&x * &e).scale(&alg.q_pow(exp)?);
                    failures += usize::from(e.try_mul(&x)? != rhs);
                }
            }
        }
    }
    Ok(failures)
}

/// Number of failed claims for the implementing isometry `w` at level
/// `(k, l)`: `w*w = 1`, `w` commutes with `F_{k,l}`, and `w*yw = φ(y)` for
/// every monomial `y` with profile at most `(k, l, l, k)`; all in the quotient.
pub fn isometry_failures<C: Scalar>(alg: &Arc<Algebra<C>>, k: usize, l: usize) -> Result<usize> {
    let w = implementing_isometry(alg, k, l)?;
    let wa = w.adjoint();
    let mut failures = usize::from(!quotient_equal(&(&wa * &w), &Element::one(alg))?);
    let basis = fixed_point_words(alg.n(), alg.m(), k, l);
    for a in &basis {
        for b in &basis {
            let e = Element::from_terms(alg, [(Monomial::new(a.clone(), b.clone()), alg.unit().clone())]);
            failures += usize::from(!quotient_equal(&(&w * &e), &(&e * &w))?);
        }
    }
    let mut sides = Vec::new();
    for i in 0..=k {
        for j in 0..=l {
            sides.extend(fixed_point_words(alg.n(), alg.m(), i, j));
        }
    }
    for c in &sides {
        for d in &sides {
            let y = Element::from_terms(alg, [(Monomial::new(c.clone(), d.clone()), alg.unit().clone())]);
            let lhs = &(&wa * &y) * &w;
            failures += usize::from(!quotient_equal(&lhs, &y.expectation(Expectation::Phi))?);
        }
    }
    Ok(failures)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{DeformVars, PhaseCoeff};
    use crate::symalg::{parse_expr, SymAlgebra};

    fn alg() -> Arc<SymAlgebra> {
        SymAlgebra::symbolic(2, 2, DeformVars::SingleUnimodular).unwrap()
    }

    fn q0() -> Complex64 {
        Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * 0.3)
    }

    #[test]
    fn raise_examples() {
        let a = alg();
        let x = parse_expr("s1*s1'", &a).unwrap();
        let r = raise_profile(&x, Profile::new(2, 0, 0, 2)).unwrap();
        assert_eq!(r, parse_expr("s1*s1*s1'*s1' + s1*s2*s2'*s1'", &a).unwrap());
        let one = raise_profile(&Element::one(&a), Profile::new(1, 1, 1, 1)).unwrap();
        assert_eq!(one.len(), 4);
        assert_eq!(one, parse_expr("s1*t1*t1'*s1' + s1*t2*t2'*s1' + s2*t1*t1'*s2' + s2*t2*t2'*s2'", &a).unwrap());
        assert!(raise_profile(&x, Profile::new(2, 0, 0, 1)).is_err());
    }

    #[test]
    fn raising_phases_follow_the_cross_relation() {
        let a = alg();
        let x = parse_expr("t1", &a).unwrap();
        let r = raise_profile(&x, Profile::new(1, 1, 0, 1)).unwrap();
        let q = PhaseCoeff::q(DeformVars::SingleUnimodular).unwrap();
        let expected = &parse_expr("s1*t1*s1'", &a).unwrap() + &parse_expr("s2*t1*s2'", &a).unwrap();
        assert_eq!(r, expected.scale(&q));
    }

    #[test]
    fn quotient_equal_examples() {
        let a = alg();
        assert!(quotient_equal(&Element::one(&a), &Element::proj_q(&a)).unwrap());
        assert!(!quotient_equal(&parse_expr("s1*s1'", &a).unwrap(), &Element::one(&a)).unwrap());
        let lhs = parse_expr("(s1*t1*t1'*s1')*(s1*t1*t2'*s2')", &a).unwrap();
        assert!(quotient_equal(&lhs, &parse_expr("s1*t1*t2'*s2'", &a).unwrap()).unwrap());
        let orthogonal = parse_expr("(s1*t1*t1'*s1')*(s1*t2*t1'*s2')", &a).unwrap();
        assert!(orthogonal.is_zero());
    }

    #[test]
    fn generic_mode_has_no_quotient() {
        let a = SymAlgebra::symbolic(2, 2, DeformVars::SingleGeneric).unwrap();
        assert!(matches!(
            canonical_form(&Element::one(&a), CuntzMask::BOTH),
            Err(Error::Mode(_))
        ));
    }

    #[test]
    fn matrix_examples() {
        let a = NumAlgebra::numeric(2, 2, q0(), true).unwrap();
        let one = to_matrix(&Element::one(&a), 1, 1).unwrap();
        assert_eq!(one.matrix, DMatrix::identity(4, 4));
        let unit = Element::from_terms(
            &a,
            [(Monomial::new(vec![Letter::s(1), Letter::t(1)], vec![Letter::s(1), Letter::t(1)]), Complex64::new(1.0, 0.0))],
        );
        let m = to_matrix(&unit, 1, 1).unwrap();
        let mut e = DMatrix::zeros(4, 4);
        e[(0, 0)] = Complex64::new(1.0, 0.0);
        assert_eq!(m.matrix, e);
        assert_eq!(from_matrix(&a, &m).unwrap(), unit);
        assert!(to_matrix(&Element::s(&a, 1).unwrap(), 1, 1).is_err());
    }

    #[test]
    fn isometry_claims_for_level_one() {
        let a = alg();
        let w = implementing_isometry(&a, 1, 1).unwrap();
        assert!(quotient_equal(&(&w.adjoint() * &w), &Element::one(&a)).unwrap());
        let f = parse_expr("s1*t1*t1'*s1'", &a).unwrap();
        assert!(quotient_equal(&(&w * &f), &(&f * &w)).unwrap());
        let s1 = Element::s(&a, 1).unwrap();
        assert!(quotient_equal(&(&(&w.adjoint() * &s1) * &w), &Element::zero(&a)).unwrap());
        let small = SymAlgebra::symbolic(1, 2, DeformVars::SingleUnimodular).unwrap();
        assert!(implementing_isometry(&small, 1, 1).is_err());
    }

    #[test]
    fn witness_for_simple_inputs() {
        let a = NumAlgebra::numeric(2, 2, q0(), true).unwrap();
        for x in [Element::one(&a), &Element::s(&a, 1).unwrap() * &Element::s(&a, 1).unwrap().adjoint()] {
            let w = pure_infinite_witness(&x).unwrap();
            assert!(witness_residual(&x, &w).unwrap() < 1e-10);
        }
        let hidden = &Element::one(&a) - &Element::proj_q(&a);
        assert!(matches!(pure_infinite_witness(&hidden), Err(Error::Domain(_))));
    }

    #[test]
    fn householder_maps_to_first_basis_vector() {
        let xi = DVector::from_vec(vec![
            Complex64::new(0.3, 0.4),
            Complex64::new(-0.5, 0.1),
            Complex64::new(0.2, -0.6),
        ]);
        let xi = &xi / Complex64::new(xi.norm(), 0.0);
        let u = householder_to_first(&xi);
        let image = &u * &xi;
        assert!((image[0] - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        assert!(image[1].norm() < 1e-14 && image[2].norm() < 1e-14);
        let id = DMatrix::<Complex64>::identity(3, 3);
        assert!((&u.adjoint() * &u - id).norm() < 1e-14);
    }

    #[test]
    fn matrix_unit_examples() {
        let a = alg();
        let e = matrix_unit_toeplitz(&a, Family::S, &[], &[]).unwrap();
        assert_eq!(&e * &e, e);
        assert_eq!(e.adjoint(), e);
        let e12 = matrix_unit_toeplitz(&a, Family::S, &[1], &[2]).unwrap();
        let e21 = matrix_unit_toeplitz(&a, Family::S, &[2], &[1]).unwrap();
        let e11 = matrix_unit_toeplitz(&a, Family::S, &[1], &[1]).unwrap();
        assert_eq!(&e12 * &e21, e11);
    }

    #[test]
    fn ideal_examples() {
        let a = alg();
        let all = ideal_membership(&parse_expr("(1-Q)*(1-P)", &a).unwrap()).unwrap();
        assert_eq!(all, IdealFlags { in_iq: true, in_i1: true, in_i2: true, in_mq: true });
        let i1 = ideal_membership(&parse_expr("1-Q", &a).unwrap()).unwrap();
        assert_eq!(i1, IdealFlags { in_iq: false, in_i1: true, in_i2: false, in_mq: true });
        let none = ideal_membership(&Element::s(&a, 1).unwrap()).unwrap();
        assert_eq!(none, IdealFlags { in_iq: false, in_i1: false, in_i2: false, in_mq: false });
    }
    #[test]
    fn structure_checks_level_one() {
        let a = alg();
        assert_eq!(fixed_point_unit_failures(&a, 1, 1).unwrap(), 0);
        assert_eq!(commutation_phase_failures(&a, 1).unwrap(), 0);
        assert_eq!(isometry_failures(&a, 1, 1).unwrap(), 0);
    }
}

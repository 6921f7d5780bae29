//! Truncated Fock-space representations: sparse generator matrices, interior
//! relation checks, evaluation of algebra elements, the Wick operator and the
//! Wold classifier.

mod sparse;
mod theta;
mod wick;
mod wold;

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::symalg::{Family, Letter, NumElement};

pub use sparse::{sparse_axpy, sparse_dot, sparse_norm, SparseOp, SparseVec};
pub use theta::{concrete_theta_rep, theta_relation_residuals, zeta};
pub use wick::{braid_residuals, wick_norm, wick_t, BraidResiduals};
pub use wold::{wold_classify, WoldDecomposition};

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Unimodularity tolerance for the Fock forms.
pub const UNIMODULAR_TOL: f64 = 1e-12;

/// Words of length `≤ max_len` over `k` letters in graded lexicographic order:
/// `index = Σ_{l < |w|} k^l + rank(w)` with `rank` the base-`k` value of `w − 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordSpace {
    k: usize,
    max_len: usize,
    offsets: Vec<usize>,
    levels: Vec<usize>,
}

impl WordSpace {
    pub fn new(k: usize, max_len: usize) -> WordSpace {
        assert!(k > 0, "alphabet must be nonempty");
        let mut offsets = Vec::with_capacity(max_len + 2);
        let mut acc = 0usize;
        for l in 0..=max_len + 1 {
            offsets.push(acc);
            acc += k.pow(l as u32);
        }
        let dim = offsets[max_len + 1];
        let mut levels = Vec::with_capacity(dim);
        for l in 0..=max_len {
            levels.extend(std::iter::repeat_n(l, offsets[l + 1] - offsets[l]));
        }
        WordSpace { k, max_len, offsets, levels }
    }

    pub fn alphabet(&self) -> usize {
        self.k
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn dim(&self) -> usize {
        self.offsets[self.max_len + 1]
    }

    pub fn level(&self, idx: usize) -> usize {
        self.levels[idx]
    }

    /// Index of a word with 1-based letters.
    pub fn index(&self, word: &[u16]) -> Option<usize> {
        if word.len() > self.max_len || word.iter().any(|&c| c == 0 || c as usize > self.k) {
            return None;
        }
        let rank = word.iter().fold(0usize, |r, &c| r * self.k + (c as usize - 1));
        Some(self.offsets[word.len()] + rank)
    }

    pub fn word(&self, idx: usize) -> Vec<u16> {
        let l = self.levels[idx];
        let mut rank = idx - self.offsets[l];
        let mut w = vec![0u16; l];
        for slot in w.iter_mut().rev() {
            *slot = (rank % self.k) as u16 + 1;
            rank /= self.k;
        }
        w
    }

    /// Index of `j·w`, or `None` past the truncation.
    pub fn prepend(&self, j: u16, idx: usize) -> Option<usize> {
        let l = self.levels[idx];
        if l == self.max_len {
            return None;
        }
        let rank = idx - self.offsets[l];
        Some(self.offsets[l + 1] + (j as usize - 1) * self.k.pow(l as u32) + rank)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FockKind {
    /// `F_n ⊗ F_m` with levels `≤ (big_n, big_m)`.
    Pair { n: usize, m: usize, big_n: usize, big_m: usize },
    /// Words over `d` letters of length `≤ l`.
    Free { d: usize, l: usize },
}

/// A truncated Fock space with its deterministic basis order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncFock {
    kind: FockKind,
    first: WordSpace,
    second: Option<WordSpace>,
}

impl TruncFock {
    pub fn pair(n: usize, m: usize, big_n: usize, big_m: usize) -> Result<TruncFock> {
        if n == 0 || m == 0 {
            return Err(Error::Config("n and m must be positive".into()));
        }
        Ok(TruncFock {
            kind: FockKind::Pair { n, m, big_n, big_m },
            first: WordSpace::new(n, big_n),
            second: Some(WordSpace::new(m, big_m)),
        })
    }

    pub fn free(d: usize, l: usize) -> Result<TruncFock> {
        if d == 0 {
            return Err(Error::Config("alphabet must be nonempty".into()));
        }
        Ok(TruncFock { kind: FockKind::Free { d, l }, first: WordSpace::new(d, l), second: None })
    }

    pub fn kind(&self) -> FockKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.first.dim() * self.second.as_ref().map_or(1, WordSpace::dim)
    }

    fn split(&self, idx: usize) -> (usize, usize) {
        match &self.second {
            Some(s) => (idx / s.dim(), idx % s.dim()),
            None => (idx, 0),
        }
    }

    fn join(&self, a: usize, b: usize) -> usize {
        match &self.second {
            Some(s) => a * s.dim() + b,
            None => a,
        }
    }

    /// `(|μ|, |μ′|)` for pairs, `(|w|, 0)` for free words.
    pub fn levels(&self, idx: usize) -> (usize, usize) {
        let (a, b) = self.split(idx);
        (self.first.level(a), self.second.as_ref().map_or(0, |s| s.level(b)))
    }

    /// Basis index of `(μ, μ′)`; `mu2` must be empty for free spaces.
    pub fn index(&self, mu: &[u16], mu2: &[u16]) -> Option<usize> {
        let a = self.first.index(mu)?;
        match &self.second {
            Some(s) => Some(self.join(a, s.index(mu2)?)),
            None if mu2.is_empty() => Some(a),
            None => None,
        }
    }

    pub fn basis_words(&self, idx: usize) -> (Vec<u16>, Vec<u16>) {
        let (a, b) = self.split(idx);
        (self.first.word(a), self.second.as_ref().map_or(vec![], |s| s.word(b)))
    }

    /// Number of creation steps a basis vector can take before truncation.
    pub fn headroom(&self, idx: usize) -> usize {
        let (la, lb) = self.levels(idx);
        let h1 = self.first.max_len() - la;
        match &self.second {
            Some(s) => h1.min(s.max_len() - lb),
            None => h1,
        }
    }

    /// Creation `j` on the first factor times `phase(levels)`.
    fn create_first(&self, j: u16, phase: impl Fn(usize, usize) -> Complex64) -> SparseOp {
        let dim = self.dim();
        let t = (0..dim).filter_map(|idx| {
            let (a, b) = self.split(idx);
            let (la, lb) = self.levels(idx);
            self.first.prepend(j, a).map(|a2| (self.join(a2, b), idx, phase(la, lb)))
        });
        SparseOp::from_triplets(dim, dim, t.collect::<Vec<_>>())
    }

    /// Creation `r` on the second factor times `phase(levels)`.
    fn create_second(&self, r: u16, phase: impl Fn(usize, usize) -> Complex64) -> SparseOp {
        let dim = self.dim();
        let second = self.second.as_ref().expect("pair space");
        let t = (0..dim).filter_map(|idx| {
            let (a, b) = self.split(idx);
            let (la, lb) = self.levels(idx);
            second.prepend(r, b).map(|b2| (self.join(a, b2), idx, phase(la, lb)))
        });
        SparseOp::from_triplets(dim, dim, t.collect::<Vec<_>>())
    }

    /// Left creation operators `v_1..v_d` on a free space.
    pub fn free_creations(&self) -> Vec<SparseOp> {
        let d = self.first.alphabet();
        (1..=d as u16).map(|j| self.create_first(j, |_, _| ONE)).collect()
    }
}

/// Generator matrices of a representation of the twisted Cuntz–Toeplitz
/// relations, with per-vector headroom defining the interior masks.
#[derive(Clone, Debug)]
pub struct Rep {
    pub n: usize,
    pub m: usize,
    pub s: Vec<SparseOp>,
    pub t: Vec<SparseOp>,
    /// Creation steps available before truncation; `usize::MAX` if unlimited.
    pub headroom: Vec<usize>,
    /// `(#s, #t)` grading of basis vectors, when the space is graded.
    pub grading: Option<Vec<(i32, i32)>>,
}

impl Rep {
    pub fn dim(&self) -> usize {
        self.headroom.len()
    }

    /// Basis vectors with at least `order` creation steps of headroom.
    pub fn interior(&self, order: usize) -> Vec<bool> {
        self.headroom.iter().map(|&h| h >= order).collect()
    }

    pub fn generator(&self, l: Letter) -> Result<&SparseOp> {
        let (ops, bound) = match l.family {
            Family::S => (&self.s, self.n),
            Family::T => (&self.t, self.m),
        };
        if l.index == 0 || l.index as usize > bound {
            return Err(Error::Range(format!("{l} with n = {}, m = {}", self.n, self.m)));
        }
        Ok(&ops[l.index as usize - 1])
    }

    pub fn identity(&self) -> SparseOp {
        SparseOp::identity(self.dim())
    }

    /// `Q = Σ s_j s_j*`.
    pub fn proj_q(&self) -> SparseOp {
        sum_ranges(&self.s, self.dim())
    }

    /// `P = Σ t_r t_r*`.
    pub fn proj_p(&self) -> SparseOp {
        sum_ranges(&self.t, self.dim())
    }

    /// Block-diagonal sum of two representations of the same generators.
    pub fn direct_sum(&self, other: &Rep) -> Result<Rep> {
        if (self.n, self.m) != (other.n, other.m) {
            return Err(Error::Config("direct sum of representations with different (n, m)".into()));
        }
        let join = |a: &[SparseOp], b: &[SparseOp]| -> Vec<SparseOp> {
            a.iter().zip(b).map(|(x, y)| x.direct_sum(y)).collect()
        };
        let grading = match (&self.grading, &other.grading) {
            (Some(a), Some(b)) => Some(a.iter().chain(b).copied().collect()),
            _ => None,
        };
        Ok(Rep {
            n: self.n,
            m: self.m,
            s: join(&self.s, &other.s),
            t: join(&self.t, &other.t),
            headroom: self.headroom.iter().chain(&other.headroom).copied().collect(),
            grading,
        })
    }
}

fn sum_ranges(ops: &[SparseOp], dim: usize) -> SparseOp {
    ops.iter().fold(SparseOp::zeros(dim, dim), |acc, x| acc.add(&x.mul(&x.adjoint())))
}

/// The three unitarily equivalent forms of the Fock representation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FockForm {
    /// `s_j = S_j ⊗ d_m(q^{-1/2})`, `t_r = d_n(q^{1/2}) ⊗ T_r`.
    A,
    /// `s_j = S_j ⊗ 1`, `t_r = d_n(q) ⊗ T_r`.
    B,
    /// `s_j = S_j ⊗ d_m(q^{-1})`, `t_r = 1 ⊗ T_r`.
    C,
}

/// `φ₀ ∈ [0, 1)` with `q0 = e^{2πiφ₀}`.
pub fn phase_of(q0: Complex64) -> f64 {
    let phi = q0.arg() / (2.0 * PI);
    if phi < 0.0 {
        phi + 1.0
    } else {
        phi
    }
}

/// The square root branch `e^{iπφ₀}`.
pub fn sqrt_branch(q0: Complex64) -> Complex64 {
    Complex64::from_polar(1.0, PI * phase_of(q0))
}

fn check_unimodular(q0: Complex64) -> Result<()> {
    if (q0.norm() - 1.0).abs() > UNIMODULAR_TOL {
        return Err(Error::Domain(format!("|q0| = {} is not 1", q0.norm())));
    }
    Ok(())
}

/// `λ^k` for unimodular `λ` and any integer `k`.
fn upow(lambda: Complex64, k: i64) -> Complex64 {
    if k >= 0 {
        lambda.powu(k as u32)
    } else {
        lambda.conj().powu((-k) as u32)
    }
}

/// Fock representation on `Pair(n, m, N, M)`.
pub fn build_fock_rep(
    n: usize,
    m: usize,
    big_n: usize,
    big_m: usize,
    q0: Complex64,
    form: FockForm,
) -> Result<Rep> {
    check_unimodular(q0)?;
    let space = TruncFock::pair(n, m, big_n, big_m)?;
    let h = sqrt_branch(q0);
    // (exponent base, applied to |μ′| for s and |μ| for t)
    let (s_base, t_base) = match form {
        FockForm::A => (h.conj(), h),
        FockForm::B => (ONE, q0),
        FockForm::C => (q0.conj(), ONE),
    };
    let s = (1..=n as u16)
        .map(|j| space.create_first(j, |_, lb| upow(s_base, lb as i64)))
        .collect();
    let t = (1..=m as u16)
        .map(|r| space.create_second(r, |la, _| upow(t_base, la as i64)))
        .collect();
    Ok(pair_rep(&space, n, m, s, t))
}

fn pair_rep(space: &TruncFock, n: usize, m: usize, s: Vec<SparseOp>, t: Vec<SparseOp>) -> Rep {
    let dim = space.dim();
    Rep {
        n,
        m,
        s,
        t,
        headroom: (0..dim).map(|i| space.headroom(i)).collect(),
        grading: Some(
            (0..dim)
                .map(|i| {
                    let (a, b) = space.levels(i);
                    (a as i32, b as i32)
                })
                .collect(),
        ),
    }
}

/// Untwisted Fock pair model `s̃_j = S_j ⊗ 1`, `t̃_r = 1 ⊗ T_r`.
pub fn untwisted_fock_rep(n: usize, m: usize, big_n: usize, big_m: usize) -> Result<Rep> {
    build_fock_rep(n, m, big_n, big_m, ONE, FockForm::B)
}

/// `n = m = 1` clock and shift on `C^k`: `s` the cyclic shift, `t = diag(ω^i)`
/// with `ω = e^{2πi/k}`, so `t s = ω s t` and `Q = P = 1`.
pub fn clock_shift_rep(k: usize) -> Result<Rep> {
    if k == 0 {
        return Err(Error::Config("clock-and-shift dimension must be positive".into()));
    }
    let omega = Complex64::from_polar(1.0, 2.0 * PI / k as f64);
    let s = SparseOp::from_triplets(k, k, (0..k).map(|i| ((i + 1) % k, i, ONE)));
    let t = SparseOp::diagonal(&(0..k).map(|i| omega.powu(i as u32)).collect::<Vec<_>>());
    Ok(Rep { n: 1, m: 1, s: vec![s], t: vec![t], headroom: vec![usize::MAX; k], grading: None })
}

pub const REL_SS: &str = "s_i* s_j - delta_ij";
pub const REL_TT: &str = "t_r* t_l - delta_rl";
pub const REL_ST: &str = "s_j* t_r - q t_r s_j*";
pub const REL_TS: &str = "t_r s_j - q s_j t_r";

/// Max interior column norm of each defining relation, interior of order 2.
pub fn relation_residuals(rep: &Rep, q0: Complex64) -> BTreeMap<String, f64> {
    relation_residuals_at(rep, q0, 2)
}

/// As [`relation_residuals`] on the interior of order `order ≥ 2`.
pub fn relation_residuals_at(rep: &Rep, q0: Complex64, order: usize) -> BTreeMap<String, f64> {
    let mask = rep.interior(order);
    let sa: Vec<SparseOp> = rep.s.iter().map(SparseOp::adjoint).collect();
    let ta: Vec<SparseOp> = rep.t.iter().map(SparseOp::adjoint).collect();
    let id = rep.identity();
    let delta = |i: usize, j: usize, x: SparseOp| if i == j { x.sub(&id) } else { x };
    let mut out = BTreeMap::new();
    let mut worst = |name: &str, r: f64| {
        let e = out.entry(name.to_string()).or_insert(0.0f64);
        *e = e.max(r);
    };
    for i in 0..rep.n {
        for j in 0..rep.n {
            worst(REL_SS, delta(i, j, sa[i].mul(&rep.s[j])).max_column_norm(&mask));
        }
    }
    for r in 0..rep.m {
        for l in 0..rep.m {
            worst(REL_TT, delta(r, l, ta[r].mul(&rep.t[l])).max_column_norm(&mask));
        }
    }
    for j in 0..rep.n {
        for r in 0..rep.m {
            let st = sa[j].mul(&rep.t[r]).add_scaled(&rep.t[r].mul(&sa[j]), -q0);
            worst(REL_ST, st.max_column_norm(&mask));
            let ts = rep.t[r].mul(&rep.s[j]).add_scaled(&rep.s[j].mul(&rep.t[r]), -q0);
            worst(REL_TS, ts.max_column_norm(&mask));
        }
    }
    out
}

/// Operator of a numeric element; `c · creation · annihilation*` per monomial.
pub fn evaluate(x: &NumElement, rep: &Rep) -> Result<SparseOp> {
    let alg = x.algebra();
    if (alg.n(), alg.m()) != (rep.n, rep.m) {
        return Err(Error::Config(format!(
            "element on (n, m) = ({}, {}), representation on ({}, {})",
            alg.n(),
            alg.m(),
            rep.n,
            rep.m
        )));
    }
    let sa: Vec<SparseOp> = rep.s.iter().map(SparseOp::adjoint).collect();
    let ta: Vec<SparseOp> = rep.t.iter().map(SparseOp::adjoint).collect();
    let adj = |l: &Letter| match l.family {
        Family::S => &sa[l.index as usize - 1],
        Family::T => &ta[l.index as usize - 1],
    };
    let mut total = SparseOp::zeros(rep.dim(), rep.dim());
    for (mono, c) in x.terms() {
        let mut op = rep.identity();
        for l in mono.annihilation.iter() {
            op = adj(l).mul(&op);
        }
        for l in mono.creation.iter().rev() {
            op = rep.generator(*l)?.mul(&op);
        }
        total = total.add_scaled(&op, *c);
    }
    Ok(total)
}

/// Average of `U(z) X U(z)*` over `z ∈ μ_k × μ_k` for the grading unitaries
/// `U(z)v = z₁^{a} z₂^{b} v` on vectors of degree `(a, b)`.
pub fn gauge_average(x: &SparseOp, rep: &Rep, k: usize) -> Result<SparseOp> {
    let grading = rep
        .grading
        .as_ref()
        .ok_or_else(|| Error::Config("representation carries no grading".into()))?;
    let roots: Vec<Complex64> =
        (0..k).map(|i| Complex64::from_polar(1.0, 2.0 * PI * i as f64 / k as f64)).collect();
    let scale = 1.0 / (k * k) as f64;
    let t = x.triplets().map(|(r, c, v)| {
        let (d1, d2) = (grading[r].0 - grading[c].0, grading[r].1 - grading[c].1);
        let mut w = Complex64::new(0.0, 0.0);
        for z1 in &roots {
            for z2 in &roots {
                w += upow(*z1, d1 as i64) * upow(*z2, d2 as i64);
            }
        }
        (r, c, v * w * scale)
    });
    let t: Vec<_> = t.filter(|e| e.2.norm() > 1e-14).collect();
    Ok(SparseOp::from_triplets(x.nrows(), x.ncols(), t))
}

/// Products `s_μ` for all words `μ` of length `k`.
pub fn s_words(rep: &Rep, k: usize) -> Vec<SparseOp> {
    let mut out = vec![rep.identity()];
    for _ in 0..k {
        out = out.iter().flat_map(|w| rep.s.iter().map(move |s| w.mul(s))).collect();
    }
    out
}

/// `Σ_{|μ|=k} s_μ X s_μ*`.
pub fn s_conjugation_sum(rep: &Rep, x: &SparseOp, k: usize) -> SparseOp {
    s_words(rep, k)
        .iter()
        .fold(SparseOp::zeros(rep.dim(), rep.dim()), |acc, w| acc.add(&w.mul(x).mul(&w.adjoint())))
}

/// Interior column residual of `Σ_{|μ|=k} s_μ Q s_μ* = Σ_{|ν|=k+1} s_ν s_ν*`.
pub fn shifted_range_residual(rep: &Rep, k: usize) -> f64 {
    let lhs = s_conjugation_sum(rep, &rep.proj_q(), k);
    let id = rep.identity();
    let rhs = s_conjugation_sum(rep, &id, k + 1);
    lhs.sub(&rhs).max_column_norm(&rep.interior(k + 2))
}

/// Operator norm of the compression of `x` to the rows and columns in `mask`.
pub fn compressed_norm(x: &SparseOp, mask: &[bool]) -> f64 {
    let idx: Vec<usize> = (0..mask.len()).filter(|&i| mask[i]).collect();
    let mut pos = vec![usize::MAX; mask.len()];
    for (k, &i) in idx.iter().enumerate() {
        pos[i] = k;
    }
    let mut d = DMatrix::<Complex64>::zeros(idx.len(), idx.len());
    for (r, c, v) in x.triplets() {
        if pos[r] != usize::MAX && pos[c] != usize::MAX {
            d[(pos[r], pos[c])] = v;
        }
    }
    if idx.is_empty() {
        return 0.0;
    }
    d.singular_values().max()
}

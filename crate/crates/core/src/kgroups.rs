//! Finitely generated abelian groups via Smith normal form, the functors
//! `⊗`, `Tor`, `Hom`, `Ext` on them, and the K-theory table of the twisted
//! Cuntz tensor products.

use std::fmt;

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};

pub type IntMatrix = Vec<Vec<i128>>;

fn identity(n: usize) -> IntMatrix {
    (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect()
}

/// `d = u · m · v` with `u`, `v` unimodular and `d` diagonal,
/// nonnegative, with `d_ii | d_{i+1,i+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Snf {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl Snf {
    pub fn diagonal(&self) -> Vec<i128> {
        let k = self.d.len().min(self.d.first().map_or(0, Vec::len));
        (0..k).map(|i| self.d[i][i]).collect()
    }
}

struct Reducer {
    a: IntMatrix,
    u: IntMatrix,
    v: IntMatrix,
    rows: usize,
    cols: usize,
}

impl Reducer {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        self.u.swap(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for r in self.a.iter_mut().chain(self.v.iter_mut()) {
            r.swap(i, j);
        }
    }

    /// `row_i += c · row_j`.
    fn add_row(&mut self, i: usize, j: usize, c: i128) {
        for k in 0..self.cols {
            self.a[i][k] += c * self.a[j][k];
        }
        for k in 0..self.rows {
            self.u[i][k] += c * self.u[j][k];
        }
    }

    /// `col_i += c · col_j`.
    fn add_col(&mut self, i: usize, j: usize, c: i128) {
        for r in self.a.iter_mut() {
            r[i] += c * r[j];
        }
        for r in self.v.iter_mut() {
            r[i] += c * r[j];
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in self.a[i].iter_mut().chain(self.u[i].iter_mut()) {
            *x = -*x;
        }
    }

    /// Smallest nonzero modulus in the trailing block from `t`.
    fn pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.rows {
            for j in t..self.cols {
                let x = self.a[i][j];
                if x != 0 && best.is_none_or(|(bi, bj)| x.abs() < self.a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        best
    }

    fn reduce(&mut self) {
        let k = self.rows.min(self.cols);
        for t in 0..k {
            loop {
                let Some((pi, pj)) = self.pivot(t) else { return };
                self.swap_rows(t, pi);
                self.swap_cols(t, pj);
                let p = self.a[t][t];
                let mut clean = true;
                for i in t + 1..self.rows {
                    let q = Integer::div_floor(&self.a[i][t], &p);
                    self.add_row(i, t, -q);
                    clean &= self.a[i][t] == 0;
                }
                for j in t + 1..self.cols {
                    let q = Integer::div_floor(&self.a[t][j], &p);
                    self.add_col(j, t, -q);
                    clean &= self.a[t][j] == 0;
                }
                if !clean {
                    continue;
                }
                // pivot must divide the trailing block
                let bad = (t + 1..self.rows)
                    .find(|&i| (t + 1..self.cols).any(|j| self.a[i][j] % p != 0));
                match bad {
                    Some(i) => self.add_row(t, i, 1),
                    None => break,
                }
            }
            if self.a[t][t] < 0 {
                self.negate_row(t);
            }
        }
    }
}

/// Smith normal form of an integer matrix given as rows.
pub fn smith_normal_form(m: &[Vec<i128>]) -> Snf {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    assert!(m.iter().all(|r| r.len() == cols), "ragged matrix");
    let mut r = Reducer { a: m.to_vec(), u: identity(rows), v: identity(cols), rows, cols };
    r.reduce();
    Snf { u: r.u, d: r.a, v: r.v }
}

pub fn mat_mul(a: &[Vec<i128>], b: &[Vec<i128>]) -> IntMatrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| (0..cols).map(|j| (0..inner).map(|k| row[k] * b[k][j]).sum()).collect())
        .collect()
}

/// Determinant by fraction-free elimination.
pub fn determinant(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    let mut a = m.to_vec();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    if n == 0 {
        1
    } else {
        sign * a[n - 1][n - 1]
    }
}

/// `Z^free_rank ⊕ Z/d₁ ⊕ … ⊕ Z/d_k` with `2 ≤ d₁ | d₂ | … | d_k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FgAbGroup {
    pub free_rank: usize,
    pub torsion: Vec<u64>,
}

impl FgAbGroup {
    pub fn trivial() -> FgAbGroup {
        FgAbGroup { free_rank: 0, torsion: vec![] }
    }

    pub fn z() -> FgAbGroup {
        FgAbGroup { free_rank: 1, torsion: vec![] }
    }

    /// `Z/a`; `a = 0` gives `Z`, `a = 1` the trivial group.
    pub fn cyclic(a: u64) -> FgAbGroup {
        FgAbGroup::from_cyclic(&[a])
    }

    /// `⊕ Z/a_i` in canonical form.
    pub fn from_cyclic(orders: &[u64]) -> FgAbGroup {
        let diag: IntMatrix = (0..orders.len())
            .map(|i| (0..orders.len()).map(|j| if i == j { i128::from(orders[i]) } else { 0 }).collect())
            .collect();
        FgAbGroup::from_diagonal(&smith_normal_form(&diag).diagonal(), orders.len())
    }

    /// Cokernel of `Z^cols → Z^rows`; `m` has `rows` rows.
    pub fn cokernel_of(m: &[Vec<i128>], rows: usize) -> FgAbGroup {
        if rows == 0 {
            return FgAbGroup::trivial();
        }
        let snf = smith_normal_form(m);
        FgAbGroup::from_diagonal(&snf.diagonal(), rows)
    }

    fn from_diagonal(diag: &[i128], gens: usize) -> FgAbGroup {
        let mut free_rank = gens - diag.len();
        let mut torsion = Vec::new();
        for &x in diag {
            match x {
                0 => free_rank += 1,
                1 => {}
                x => torsion.push(u64::try_from(x).expect("invariant factor fits in u64")),
            }
        }
        FgAbGroup { free_rank, torsion }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Cardinality, if finite.
    pub fn order(&self) -> Option<u128> {
        (self.free_rank == 0).then(|| self.torsion.iter().map(|&d| u128::from(d)).product())
    }

    /// Cyclic summands as orders, torsion first, `0` for `Z`.
    pub fn summands(&self) -> Vec<u64> {
        let mut out = self.torsion.clone();
        out.extend(std::iter::repeat_n(0, self.free_rank));
        out
    }

    pub fn direct_sum(&self, other: &FgAbGroup) -> FgAbGroup {
        let mut all = self.summands();
        all.extend(other.summands());
        FgAbGroup::from_cyclic(&all)
    }
}

impl fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts: Vec<String> = self.torsion.iter().map(|d| format!("Z/{d}Z")).collect();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        write!(f, "{}", parts.join(" ⊕ "))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum AbFunctor {
    Tensor,
    Tor,
    /// `Hom(A, B)`, contravariant in `A`.
    Hom,
    /// `Ext(A, B)`, contravariant in `A`.
    Ext,
}

fn gcd0(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Value on cyclic summands `Z/a`, `Z/b` (`0` meaning `Z`), as a cyclic order.
fn cyclic_value(op: AbFunctor, a: u64, b: u64) -> u64 {
    match op {
        AbFunctor::Tensor => gcd0(a, b),
        AbFunctor::Tor if a == 0 || b == 0 => 1,
        AbFunctor::Tor => gcd0(a, b),
        AbFunctor::Hom if a == 0 => b,
        AbFunctor::Hom if b == 0 => 1,
        AbFunctor::Hom => gcd0(a, b),
        AbFunctor::Ext if a == 0 => 1,
        AbFunctor::Ext if b == 0 => a,
        AbFunctor::Ext => gcd0(a, b),
    }
}

/// The functor applied summand by summand.
pub fn ab_functor(op: AbFunctor, a: &FgAbGroup, b: &FgAbGroup) -> FgAbGroup {
    let mut orders = Vec::new();
    for x in a.summands() {
        for y in b.summands() {
            orders.push(cyclic_value(op, x, y));
        }
    }
    FgAbGroup::from_cyclic(&orders)
}

/// Homomorphism between canonical groups on their cyclic generators
/// (`summands()` order); `matrix` is `target gens × source gens`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbHom {
    pub source: FgAbGroup,
    pub target: FgAbGroup,
    pub matrix: IntMatrix,
}

fn relation_matrix(g: &FgAbGroup) -> IntMatrix {
    let s = g.summands();
    (0..s.len()).map(|i| (0..s.len()).map(|j| if i == j { i128::from(s[i]) } else { 0 }).collect()).collect()
}

impl AbHom {
    pub fn new(source: FgAbGroup, target: FgAbGroup, matrix: IntMatrix) -> Result<AbHom> {
        let (ns, nt) = (source.summands(), target.summands());
        if matrix.len() != nt.len() || matrix.iter().any(|r| r.len() != ns.len()) {
            return Err(Error::Config("homomorphism matrix has the wrong shape".into()));
        }
        for (j, &a) in ns.iter().enumerate() {
            for (i, &b) in nt.iter().enumerate() {
                let image = matrix[i][j] * i128::from(a);
                let ok = if b == 0 { image == 0 } else { image % i128::from(b) == 0 };
                if !ok {
                    return Err(Error::Config(format!("generator {j} of order {a} is not respected")));
                }
            }
        }
        Ok(AbHom { source, target, matrix })
    }

    /// Multiplication by `k` on `g`.
    pub fn scalar(g: &FgAbGroup, k: i128) -> AbHom {
        let n = g.summands().len();
        let matrix = (0..n).map(|i| (0..n).map(|j| if i == j { k } else { 0 }).collect()).collect();
        AbHom { source: g.clone(), target: g.clone(), matrix }
    }

    /// `target / (image + relations)`.
    pub fn cokernel(&self) -> FgAbGroup {
        let rel = relation_matrix(&self.target);
        let m: IntMatrix =
            self.matrix.iter().zip(&rel).map(|(f, r)| f.iter().chain(r).copied().collect()).collect();
        FgAbGroup::cokernel_of(&m, rel.len())
    }

    /// `{x : f(x) ∈ relations} / source relations`.
    pub fn kernel(&self) -> FgAbGroup {
        let s = self.source.summands().len();
        let t = self.target.summands().len();
        if s == 0 {
            return FgAbGroup::trivial();
        }
        // lattice L = first s coordinates of ker [F | R_t]
        let rel_t = relation_matrix(&self.target);
        let joint: IntMatrix = if t == 0 {
            vec![]
        } else {
            self.matrix.iter().zip(&rel_t).map(|(f, r)| f.iter().chain(r).copied().collect()).collect()
        };
        let width = s + t;
        let gens: Vec<Vec<i128>> = if t == 0 {
            identity(s)
        } else {
            let snf = smith_normal_form(&joint);
            let rank = snf.diagonal().iter().filter(|&&x| x != 0).count();
            (rank..width).map(|c| (0..s).map(|r| snf.v[r][c]).collect()).collect()
        };
        // gens are columns of G (s × k)
        let g: IntMatrix = (0..s).map(|r| gens.iter().map(|c| c[r]).collect()).collect();
        if gens.is_empty() {
            return FgAbGroup::trivial();
        }
        let snf = smith_normal_form(&g);
        let d: Vec<i128> = snf.diagonal().into_iter().take_while(|&x| x != 0).collect();
        let r = d.len();
        // coordinates of the source relations in the basis U⁻¹·diag(d)
        let rel_s = relation_matrix(&self.source);
        let coords: IntMatrix = (0..r)
            .map(|i| {
                (0..s)
                    .map(|j| {
                        let ux: i128 = (0..s).map(|k| snf.u[i][k] * rel_s[k][j]).sum();
                        debug_assert_eq!(ux % d[i], 0);
                        ux / d[i]
                    })
                    .collect()
            })
            .collect();
        FgAbGroup::cokernel_of(&coords, r)
    }
}

/// `0 → L → X → R → 0` resolved only when `L` or `R` is trivial.
pub fn split_when_trivial_end(left: &FgAbGroup, right: &FgAbGroup) -> Result<FgAbGroup> {
    if right.is_trivial() {
        Ok(left.clone())
    } else if left.is_trivial() {
        Ok(right.clone())
    } else {
        Err(Error::Domain(format!("extension of {right} by {left} is not determined")))
    }
}

/// `K_*(A ⊗ B)` from `K_*(A)`, `K_*(B)` by the Künneth sequence; refuses
/// inputs whose sequences have no trivial end.
pub fn kunneth(
    k0a: &FgAbGroup,
    k1a: &FgAbGroup,
    k0b: &FgAbGroup,
    k1b: &FgAbGroup,
) -> Result<(FgAbGroup, FgAbGroup)> {
    let t = |x, y| ab_functor(AbFunctor::Tensor, x, y);
    let tor = |x, y| ab_functor(AbFunctor::Tor, x, y);
    let k0 = split_when_trivial_end(
        &t(k0a, k0b).direct_sum(&t(k1a, k1b)),
        &tor(k0a, k1b).direct_sum(&tor(k1a, k0b)),
    )?;
    let k1 = split_when_trivial_end(
        &t(k0a, k1b).direct_sum(&t(k1a, k0b)),
        &tor(k0a, k0b).direct_sum(&tor(k1a, k1b)),
    )?;
    Ok((k0, k1))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[allow(non_snake_case)]
pub struct KTable {
    pub n: u64,
    pub m: u64,
    pub d: u64,
    pub K0_On: String,
    pub K1_On: String,
    pub K0_Om: String,
    pub K1_Om: String,
    pub K0_OnOm: String,
    pub K1_OnOm: String,
    pub K0_OnOm_kunneth: String,
    pub K1_OnOm_kunneth: String,
    pub routes_agree: bool,
    pub K0_E: String,
    pub K1_E: String,
    pub K0_Mq: String,
    pub K1_Mq: String,
    pub KK1_order: u128,
    pub Ext_trivial: bool,
}

/// Groups behind a [`KTable`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KGroups {
    pub d: u64,
    pub six_term: (FgAbGroup, FgAbGroup),
    pub kunneth: (FgAbGroup, FgAbGroup),
    pub k_e: (FgAbGroup, FgAbGroup),
    pub k_mq: (FgAbGroup, FgAbGroup),
    pub kk1_order: u128,
}

pub fn k_groups(n: u64, m: u64) -> Result<KGroups> {
    if n < 2 || m < 2 {
        return Err(Error::Config(format!("n = {n}, m = {m}; both must be at least 2")));
    }
    let d = (n - 1).gcd(&(m - 1));
    let k0n = FgAbGroup::cyclic(n - 1);
    let k0m = FgAbGroup::cyclic(m - 1);
    let zero = FgAbGroup::trivial();
    // tensoring with O_m acts on K_0(O_n) by the map 1 − [1] = −(m − 1)
    let mult = AbHom::scalar(&k0n, i128::from(m - 1));
    let six_term = (mult.cokernel(), mult.kernel());
    let kunneth = kunneth(&k0n, &zero, &k0m, &zero)?;
    let k_e = (FgAbGroup::z(), zero.clone());
    let k_mq = (six_term.0.direct_sum(&k_e.0), zero);
    // 0 → K_0 ⊕ K_1 → KK_1 → K_1 → 0 with all three of order d
    let left = six_term.0.direct_sum(&six_term.1);
    let right = FgAbGroup::cyclic(d);
    let kk1_order = left.order().expect("finite") * right.order().expect("finite");
    Ok(KGroups { d, six_term, kunneth, k_e, k_mq, kk1_order })
}

pub fn k_table(n: u64, m: u64) -> Result<KTable> {
    let g = k_groups(n, m)?;
    let s = |x: &FgAbGroup| x.to_string();
    Ok(KTable {
        n,
        m,
        d: g.d,
        K0_On: s(&FgAbGroup::cyclic(n - 1)),
        K1_On: s(&FgAbGroup::trivial()),
        K0_Om: s(&FgAbGroup::cyclic(m - 1)),
        K1_Om: s(&FgAbGroup::trivial()),
        K0_OnOm: s(&g.six_term.0),
        K1_OnOm: s(&g.six_term.1),
        K0_OnOm_kunneth: s(&g.kunneth.0),
        K1_OnOm_kunneth: s(&g.kunneth.1),
        routes_agree: g.six_term == g.kunneth,
        K0_E: s(&g.k_e.0),
        K1_E: s(&g.k_e.1),
        K0_Mq: s(&g.k_mq.0),
        K1_Mq: s(&g.k_mq.1),
        KK1_order: g.kk1_order,
        Ext_trivial: g.d == 1,
    })
}

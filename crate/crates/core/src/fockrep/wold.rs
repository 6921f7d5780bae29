//! Wold-type splitting `H = H₁ ⊕ H₂ ⊕ H₃ ⊕ H₄` of a representation:
//! `H₁` generated by `ker Q ∩ ker P`, `H₂` by `ker P ∩ ker(1−Q)`,
//! `H₃` by `ker Q ∩ ker(1−P)`, `H₄` the orthogonal complement.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use super::sparse::{sparse_axpy, sparse_dot, sparse_norm};
use super::{relation_residuals_at, Rep, SparseOp, SparseVec};
use crate::error::{Error, Result};

const DROP: f64 = 1e-14;

#[derive(Clone, Debug, Serialize)]
pub struct WoldDecomposition {
    pub dim: usize,
    pub dims: [usize; 4],
    /// Orthonormal bases of `H₁..H₄`.
    #[serde(skip)]
    pub bases: [Vec<SparseVec>; 4],
}

impl WoldDecomposition {
    /// Orthogonal projection onto `H_{k+1}`.
    pub fn projection(&self, k: usize) -> SparseOp {
        let mut t = Vec::new();
        for b in &self.bases[k] {
            for &(r, x) in b {
                for &(c, y) in b {
                    t.push((r, c, x * y.conj()));
                }
            }
        }
        SparseOp::from_triplets(self.dim, self.dim, t)
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }

    /// Coordinate groups in increasing order of their smallest member.
    fn groups(&mut self) -> Vec<Vec<usize>> {
        let n = self.0.len();
        let mut by_root: Vec<Vec<usize>> = vec![Vec::new(); n];
        for i in 0..n {
            let r = self.find(i);
            by_root[r].push(i);
        }
        by_root.into_iter().filter(|g| !g.is_empty()).collect()
    }
}

/// Eigenvectors of a dense Hermitian block with eigenvalue in `keep`, lifted
/// to sparse vectors on `coords`.
fn block_eigvecs(
    coords: &[usize],
    block: DMatrix<Complex64>,
    keep: impl Fn(f64) -> bool,
) -> Vec<SparseVec> {
    let eig = block.symmetric_eigen();
    let mut out = Vec::new();
    let mut order: Vec<usize> = (0..coords.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    for k in order {
        if keep(eig.eigenvalues[k]) {
            let v: SparseVec = coords
                .iter()
                .enumerate()
                .map(|(i, &c)| (c, eig.eigenvectors[(i, k)]))
                .filter(|e| e.1.norm() > DROP)
                .collect();
            out.push(v);
        }
    }
    out
}

/// Kernel of a positive semidefinite operator, block by connected component.
fn psd_kernel(a: &SparseOp, tol: f64) -> Vec<SparseVec> {
    let dim = a.ncols();
    let mut uf = UnionFind::new(dim);
    for (r, c, _) in a.triplets() {
        uf.union(r, c);
    }
    let mut out = Vec::new();
    for group in uf.groups() {
        let mut pos = std::collections::HashMap::new();
        for (k, &i) in group.iter().enumerate() {
            pos.insert(i, k);
        }
        let mut block = DMatrix::<Complex64>::zeros(group.len(), group.len());
        for &c in &group {
            for &(r, v) in a.column(c) {
                block[(pos[&r], pos[&c])] = v;
            }
        }
        let block = (&block + block.adjoint()) * Complex64::new(0.5, 0.0);
        out.extend(block_eigvecs(&group, block, |e| e.abs() < tol));
    }
    out
}

/// Orthonormal sparse basis with a coordinate index for overlap lookups.
struct Basis {
    vecs: Vec<SparseVec>,
    by_coord: Vec<Vec<usize>>,
}

impl Basis {
    fn new(dim: usize) -> Self {
        Basis { vecs: Vec::new(), by_coord: vec![Vec::new(); dim] }
    }

    fn orthogonalize(&self, v: &SparseVec) -> SparseVec {
        let mut v = v.clone();
        for _ in 0..2 {
            let mut cand: Vec<usize> = v.iter().flat_map(|e| self.by_coord[e.0].iter().copied()).collect();
            cand.sort_unstable();
            cand.dedup();
            for k in cand {
                let c = sparse_dot(&self.vecs[k], &v);
                if c.norm() > 0.0 {
                    v = sparse_axpy(&v, -c, &self.vecs[k], DROP);
                }
            }
        }
        v
    }

    /// Adds the normalized residual of `v` if it exceeds `tol`.
    fn insert(&mut self, v: &SparseVec, tol: f64) -> Option<usize> {
        let r = self.orthogonalize(v);
        let norm = sparse_norm(&r);
        if norm <= tol {
            return None;
        }
        let r: SparseVec = r.into_iter().map(|(i, x)| (i, x / norm)).collect();
        let id = self.vecs.len();
        for e in &r {
            self.by_coord[e.0].push(id);
        }
        self.vecs.push(r);
        Some(id)
    }
}

/// Adds the closure of `seeds` under `gens` to `all`, returning the new vectors.
fn closure(all: &mut Basis, seeds: Vec<SparseVec>, gens: &[SparseOp], tol: f64) -> Vec<SparseVec> {
    let mut queue = seeds;
    let mut added = Vec::new();
    while let Some(v) = queue.pop() {
        if let Some(id) = all.insert(&v, tol) {
            let b = all.vecs[id].clone();
            for g in gens {
                let w = g.apply_sparse(&b);
                if sparse_norm(&w) > tol {
                    queue.push(w);
                }
            }
            added.push(b);
        }
    }
    added
}

/// Classifies the whole space after checking the relations on the interior
/// of order `order`; `tol` bounds both the residuals and the kernel cutoff.
pub fn wold_classify(rep: &Rep, q0: Complex64, order: usize, tol: f64) -> Result<WoldDecomposition> {
    let table = relation_residuals_at(rep, q0, order.max(2));
    if let Some((name, r)) = table.iter().find(|(_, &r)| r > tol) {
        return Err(Error::Relations(format!("{name} residual {r:e} exceeds {tol:e}")));
    }
    let dim = rep.dim();
    let id = rep.identity();
    let q = rep.proj_q();
    let p = rep.proj_p();
    let w1 = psd_kernel(&q.add(&p), tol);
    let w2 = psd_kernel(&p.add(&id.sub(&q)), tol);
    let w3 = psd_kernel(&q.add(&id.sub(&p)), tol);
    let sa: Vec<SparseOp> = rep.s.iter().map(SparseOp::adjoint).collect();
    let ta: Vec<SparseOp> = rep.t.iter().map(SparseOp::adjoint).collect();
    let creations: Vec<SparseOp> = rep.s.iter().chain(&rep.t).cloned().collect();
    let g2: Vec<SparseOp> = creations.iter().chain(&sa).cloned().collect();
    let g3: Vec<SparseOp> = creations.iter().chain(&ta).cloned().collect();

    let mut all = Basis::new(dim);
    let h1 = closure(&mut all, w1, &creations, tol);
    let h2 = closure(&mut all, w2, &g2, tol);
    let h3 = closure(&mut all, w3, &g3, tol);

    let mut uf = UnionFind::new(dim);
    for v in &all.vecs {
        for e in v.iter().skip(1) {
            uf.union(v[0].0, e.0);
        }
    }
    let mut h4 = Vec::new();
    for group in uf.groups() {
        let mut pos = std::collections::HashMap::new();
        for (k, &i) in group.iter().enumerate() {
            pos.insert(i, k);
        }
        let mut block = DMatrix::<Complex64>::zeros(group.len(), group.len());
        let mut ids: Vec<usize> = group.iter().flat_map(|&c| all.by_coord[c].iter().copied()).collect();
        ids.sort_unstable();
        ids.dedup();
        for k in ids {
            for &(r, x) in &all.vecs[k] {
                for &(c, y) in &all.vecs[k] {
                    block[(pos[&r], pos[&c])] += x * y.conj();
                }
            }
        }
        h4.extend(block_eigvecs(&group, block, |e| e < 0.5));
    }
    Ok(WoldDecomposition {
        dim,
        dims: [h1.len(), h2.len(), h3.len(), h4.len()],
        bases: [h1, h2, h3, h4],
    })
}

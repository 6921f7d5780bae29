use std::io::{self, Write};

use nalgebra::DMatrix;
use num_complex::Complex64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Sparse complex matrix stored column by column; each column is sorted by
/// row and holds no explicit zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseOp {
    nrows: usize,
    ncols: usize,
    cols: Vec<Vec<(usize, Complex64)>>,
}

/// Sparse vector as sorted `(index, value)` pairs.
pub type SparseVec = Vec<(usize, Complex64)>;

fn compress(mut entries: Vec<(usize, Complex64)>) -> Vec<(usize, Complex64)> {
    entries.sort_by_key(|e| e.0);
    let mut out: Vec<(usize, Complex64)> = Vec::with_capacity(entries.len());
    for (r, v) in entries {
        match out.last_mut() {
            Some(last) if last.0 == r => last.1 += v,
            _ => out.push((r, v)),
        }
    }
    out.retain(|e| e.1 != ZERO);
    out
}

impl SparseOp {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        SparseOp { nrows, ncols, cols: vec![Vec::new(); ncols] }
    }

    pub fn identity(dim: usize) -> Self {
        SparseOp::diagonal(&vec![ONE; dim])
    }

    pub fn diagonal(values: &[Complex64]) -> Self {
        let cols = values
            .iter()
            .enumerate()
            .map(|(i, &v)| if v == ZERO { vec![] } else { vec![(i, v)] })
            .collect();
        SparseOp { nrows: values.len(), ncols: values.len(), cols }
    }

    /// Sums duplicate entries and drops zeros.
    pub fn from_triplets<I>(nrows: usize, ncols: usize, triplets: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, Complex64)>,
    {
        let mut cols = vec![Vec::new(); ncols];
        for (r, c, v) in triplets {
            assert!(r < nrows && c < ncols, "triplet ({r}, {c}) outside {nrows}x{ncols}");
            cols[c].push((r, v));
        }
        let cols = cols.into_iter().map(compress).collect();
        SparseOp { nrows, ncols, cols }
    }

    /// Operator sending basis vector `j` to `images[j]`.
    pub fn from_columns(nrows: usize, images: Vec<SparseVec>) -> Self {
        let ncols = images.len();
        let cols = images.into_iter().map(compress).collect();
        SparseOp { nrows, ncols, cols }
    }

    pub fn from_dense(m: &DMatrix<Complex64>) -> Self {
        let mut t = Vec::new();
        for c in 0..m.ncols() {
            for r in 0..m.nrows() {
                t.push((r, c, m[(r, c)]));
            }
        }
        SparseOp::from_triplets(m.nrows(), m.ncols(), t)
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn column(&self, j: usize) -> &[(usize, Complex64)] {
        &self.cols[j]
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.cols[c]
            .binary_search_by_key(&r, |e| e.0)
            .map(|k| self.cols[c][k].1)
            .unwrap_or(ZERO)
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        self.cols
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |&(r, v)| (r, c, v)))
    }

    pub fn mul(&self, other: &SparseOp) -> SparseOp {
        assert_eq!(self.ncols, other.nrows, "dimension mismatch in product");
        let mut acc = vec![ZERO; self.nrows];
        let mut touched: Vec<usize> = Vec::new();
        let mut mark = vec![false; self.nrows];
        let mut cols = Vec::with_capacity(other.ncols);
        for col in &other.cols {
            for &(k, bv) in col {
                for &(r, av) in &self.cols[k] {
                    if !mark[r] {
                        mark[r] = true;
                        touched.push(r);
                    }
                    acc[r] += av * bv;
                }
            }
            touched.sort_unstable();
            let mut out = Vec::with_capacity(touched.len());
            for &r in &touched {
                if acc[r] != ZERO {
                    out.push((r, acc[r]));
                }
                acc[r] = ZERO;
                mark[r] = false;
            }
            touched.clear();
            cols.push(out);
        }
        SparseOp { nrows: self.nrows, ncols: other.ncols, cols }
    }

    /// `self + c · other`.
    pub fn add_scaled(&self, other: &SparseOp, c: Complex64) -> SparseOp {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols), "dimension mismatch");
        let cols = self
            .cols
            .iter()
            .zip(&other.cols)
            .map(|(a, b)| {
                let mut e = a.clone();
                e.extend(b.iter().map(|&(r, v)| (r, c * v)));
                compress(e)
            })
            .collect();
        SparseOp { nrows: self.nrows, ncols: self.ncols, cols }
    }

    pub fn add(&self, other: &SparseOp) -> SparseOp {
        self.add_scaled(other, ONE)
    }

    pub fn sub(&self, other: &SparseOp) -> SparseOp {
        self.add_scaled(other, -ONE)
    }

    pub fn scale(&self, c: Complex64) -> SparseOp {
        let cols = self
            .cols
            .iter()
            .map(|col| col.iter().map(|&(r, v)| (r, c * v)).filter(|e| e.1 != ZERO).collect())
            .collect();
        SparseOp { nrows: self.nrows, ncols: self.ncols, cols }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> SparseOp {
        SparseOp::from_triplets(
            self.ncols,
            self.nrows,
            self.triplets().map(|(r, c, v)| (c, r, v.conj())),
        )
    }

    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut y = vec![ZERO; self.nrows];
        for (c, col) in self.cols.iter().enumerate() {
            if x[c] != ZERO {
                for &(r, v) in col {
                    y[r] += v * x[c];
                }
            }
        }
        y
    }

    pub fn apply_sparse(&self, x: &[(usize, Complex64)]) -> SparseVec {
        let mut out = Vec::new();
        for &(c, xv) in x {
            out.extend(self.cols[c].iter().map(|&(r, v)| (r, v * xv)));
        }
        compress(out)
    }

    pub fn column_norm(&self, j: usize) -> f64 {
        self.cols[j].iter().map(|e| e.1.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest Euclidean norm among the columns selected by `mask`.
    pub fn max_column_norm(&self, mask: &[bool]) -> f64 {
        (0..self.ncols)
            .filter(|&j| mask[j])
            .map(|j| self.column_norm(j))
            .fold(0.0, f64::max)
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.triplets().map(|e| e.2.norm()).fold(0.0, f64::max)
    }

    /// Columns outside `mask` set to zero.
    pub fn restrict_columns(&self, mask: &[bool]) -> SparseOp {
        let cols = self
            .cols
            .iter()
            .enumerate()
            .map(|(j, c)| if mask[j] { c.clone() } else { Vec::new() })
            .collect();
        SparseOp { nrows: self.nrows, ncols: self.ncols, cols }
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(self.nrows, self.ncols);
        for (r, c, v) in self.triplets() {
            m[(r, c)] = v;
        }
        m
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &SparseOp) -> SparseOp {
        let mut t: Vec<_> = self.triplets().collect();
        t.extend(other.triplets().map(|(r, c, v)| (r + self.nrows, c + self.ncols, v)));
        SparseOp::from_triplets(self.nrows + other.nrows, self.ncols + other.ncols, t)
    }

    /// Kronecker product with `self` as the outer factor.
    pub fn kron(&self, other: &SparseOp) -> SparseOp {
        let mut t = Vec::with_capacity(self.nnz() * other.nnz());
        for (r1, c1, v1) in self.triplets() {
            for (r2, c2, v2) in other.triplets() {
                t.push((r1 * other.nrows + r2, c1 * other.ncols + c2, v1 * v2));
            }
        }
        SparseOp::from_triplets(self.nrows * other.nrows, self.ncols * other.ncols, t)
    }

    /// Matrix Market coordinate format, complex general, column-major order.
    pub fn write_matrix_market<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "%%MatrixMarket matrix coordinate complex general")?;
        writeln!(w, "{} {} {}", self.nrows, self.ncols, self.nnz())?;
        for (r, c, v) in self.triplets() {
            writeln!(w, "{} {} {:e} {:e}", r + 1, c + 1, v.re, v.im)?;
        }
        Ok(())
    }

    pub fn to_matrix_market(&self) -> String {
        let mut buf = Vec::new();
        self.write_matrix_market(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("ascii output")
    }
}

/// Hermitian inner product `⟨a, b⟩`, antilinear in `a`.
pub fn sparse_dot(a: &[(usize, Complex64)], b: &[(usize, Complex64)]) -> Complex64 {
    let (mut i, mut j) = (0, 0);
    let mut acc = ZERO;
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                acc += a[i].1.conj() * b[j].1;
                i += 1;
                j += 1;
            }
        }
    }
    acc
}

pub fn sparse_norm(a: &[(usize, Complex64)]) -> f64 {
    a.iter().map(|e| e.1.norm_sqr()).sum::<f64>().sqrt()
}

/// `a + c·b`, dropping entries of modulus at most `drop`.
pub fn sparse_axpy(a: &[(usize, Complex64)], c: Complex64, b: &[(usize, Complex64)], drop: f64) -> SparseVec {
    let mut e: Vec<(usize, Complex64)> = a.to_vec();
    e.extend(b.iter().map(|&(r, v)| (r, c * v)));
    let mut out = compress(e);
    out.retain(|x| x.1.norm() > drop);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn product_matches_dense() {
        let a = SparseOp::from_triplets(3, 2, [(0, 0, c(1.0, 1.0)), (2, 1, c(-2.0, 0.0)), (1, 0, c(0.5, 0.0))]);
        let b = SparseOp::from_triplets(2, 3, [(0, 2, c(3.0, 0.0)), (1, 0, c(0.0, 1.0)), (1, 2, c(1.0, 0.0))]);
        let dense = a.to_dense() * b.to_dense();
        assert_eq!(a.mul(&b).to_dense(), dense);
        assert_eq!(a.adjoint().to_dense(), a.to_dense().adjoint());
    }

    #[test]
    fn duplicates_sum_and_cancel() {
        let a = SparseOp::from_triplets(2, 2, [(0, 0, c(1.0, 0.0)), (0, 0, c(-1.0, 0.0)), (1, 0, c(2.0, 0.0))]);
        assert_eq!(a.nnz(), 1);
        assert_eq!(a.get(1, 0), c(2.0, 0.0));
    }

    #[test]
    fn matrix_market_layout() {
        let a = SparseOp::from_triplets(2, 2, [(1, 0, c(0.5, -1.0))]);
        let text = a.to_matrix_market();
        assert_eq!(
            text,
            "%%MatrixMarket matrix coordinate complex general\n2 2 1\n2 1 5e-1 -1e0\n"
        );
    }

    #[test]
    fn kron_and_direct_sum() {
        let x = SparseOp::from_triplets(2, 2, [(0, 1, ONE), (1, 0, ONE)]);
        let i = SparseOp::identity(2);
        let k = x.kron(&i);
        assert_eq!(k.get(2, 0), ONE);
        assert_eq!(k.get(3, 1), ONE);
        let d = x.direct_sum(&i);
        assert_eq!((d.nrows(), d.nnz()), (4, 4));
    }

    #[test]
    fn sparse_vector_helpers() {
        let a = vec![(0, c(1.0, 0.0)), (3, c(0.0, 1.0))];
        let b = vec![(3, c(0.0, 1.0)), (5, c(2.0, 0.0))];
        assert_eq!(sparse_dot(&a, &b), c(1.0, 0.0));
        let d = sparse_axpy(&a, c(-1.0, 0.0), &b, 0.0);
        assert_eq!(d, vec![(0, c(1.0, 0.0)), (5, c(-2.0, 0.0))]);
        assert!((sparse_norm(&d) - 5f64.sqrt()).abs() < 1e-15);
    }
}

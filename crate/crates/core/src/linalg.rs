//! Small linear-algebra kernels used across the crate: exact integer rank,
//! floating-point rank, a Hilbert-Schmidt Gram accumulator, operator norm,
//! and a dense LU determinant. Dense verification sizes only.

use ndarray::{Array1, Array2};
use num_bigint::BigInt;
use num_complex::Complex64;

/// Exact rank of an integer matrix over the rationals, by fraction-free
/// (Bareiss) Gaussian elimination.
pub fn integer_rank(rows: &[Vec<BigInt>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let ncols = rows[0].len();
    let mut m: Vec<Vec<BigInt>> = rows.to_vec();
    let nrows = m.len();
    let mut rank = 0;
    let mut prev_pivot = BigInt::from(1);
    let mut col = 0;
    while rank < nrows && col < ncols {
        let pivot_row = (rank..nrows).find(|&r| m[r][col] != BigInt::from(0));
        let Some(p) = pivot_row else {
            col += 1;
            continue;
        };
        m.swap(rank, p);
        for r in rank + 1..nrows {
            for c in col + 1..ncols {
                let num = &m[rank][col] * &m[r][c] - &m[r][col] * &m[rank][c];
                m[r][c] = num / &prev_pivot;
            }
            m[r][col] = BigInt::from(0);
        }
        prev_pivot = m[rank][col].clone();
        rank += 1;
        col += 1;
    }
    rank
}

/// Rank of a real matrix by Gaussian elimination with partial pivoting and a
/// relative tolerance. Used only as a floating-point cross-check of the exact
/// path.
pub fn float_rank(rows: &[Vec<f64>], tol: f64) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let ncols = rows[0].len();
    let mut m: Vec<Vec<f64>> = rows.to_vec();
    let nrows = m.len();
    let scale = m
        .iter()
        .flat_map(|r| r.iter())
        .fold(0.0f64, |a, &b| a.max(b.abs()))
        .max(1.0);
    let mut rank = 0;
    let mut col = 0;
    while rank < nrows && col < ncols {
        let (best, bestval) = (rank..nrows)
            .map(|r| (r, m[r][col].abs()))
            .fold((rank, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if bestval <= tol * scale {
            col += 1;
            continue;
        }
        m.swap(rank, best);
        for r in rank + 1..nrows {
            let f = m[r][col] / m[rank][col];
            for c in col..ncols {
                m[r][c] -= f * m[rank][c];
            }
        }
        rank += 1;
        col += 1;
    }
    rank
}

/// Incremental orthonormal basis of a real vector space, used for
/// Hilbert-Schmidt independence tests. Candidates are normalized before
/// projection, so the acceptance threshold is scale-free.
pub struct GramBasis {
    basis: Vec<Array1<f64>>,
    dim: usize,
    threshold: f64,
}

impl GramBasis {
    pub fn new(dim: usize, threshold: f64) -> Self {
        Self {
            basis: Vec::new(),
            dim,
            threshold,
        }
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// Orthogonal projection residual of a unit-scaled candidate. Two
    /// projection passes keep the residual orthogonal in floating point.
    fn residual(&self, v: &Array1<f64>) -> Option<Array1<f64>> {
        let norm = v.dot(v).sqrt();
        if norm <= 0.0 {
            return None;
        }
        let mut w = v / norm;
        for _ in 0..2 {
            for b in &self.basis {
                let coeff = b.dot(&w);
                w.scaled_add(-coeff, b);
            }
        }
        let res = w.dot(&w).sqrt();
        if res > self.threshold {
            Some(w / res)
        } else {
            None
        }
    }

    /// Returns true when the candidate was independent and was added.
    pub fn insert(&mut self, v: &Array1<f64>) -> bool {
        assert_eq!(v.len(), self.dim);
        match self.residual(v) {
            Some(w) => {
                self.basis.push(w);
                true
            }
            None => false,
        }
    }

    /// Independence test without insertion; returns the residual norm of the
    /// unit-scaled candidate.
    pub fn residual_norm(&self, v: &Array1<f64>) -> f64 {
        let norm = v.dot(v).sqrt();
        if norm <= 0.0 {
            return 0.0;
        }
        let mut w = v / norm;
        for _ in 0..2 {
            for b in &self.basis {
                let coeff = b.dot(&w);
                w.scaled_add(-coeff, b);
            }
        }
        w.dot(&w).sqrt()
    }
}

/// Flatten a Hermitian matrix into the real vector (re || im) used by the
/// Gram accumulator. Real inner products of these vectors equal
/// Re Tr(A^dag B).
pub fn flatten_hermitian(a: &Array2<Complex64>) -> Array1<f64> {
    let n = a.len();
    let mut out = Array1::zeros(2 * n);
    for (i, z) in a.iter().enumerate() {
        out[i] = z.re;
        out[n + i] = z.im;
    }
    out
}

/// Largest singular value via power iteration on M^dag M. Deterministic
/// start vector; sizes here are small so a fixed iteration budget suffices.
pub fn operator_norm(m: &Array2<Complex64>) -> f64 {
    let (rows, cols) = m.dim();
    if rows == 0 || cols == 0 {
        return 0.0;
    }
    let mh = dagger(m);
    let mut v: Array1<Complex64> = Array1::from_iter(
        (0..cols).map(|i| Complex64::new(1.0 + (i as f64 * 0.7).sin(), (i as f64 * 0.3).cos())),
    );
    let norm = |x: &Array1<Complex64>| x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let nv = norm(&v);
    v.mapv_inplace(|z| z / nv);
    let mut lambda = 0.0f64;
    for _ in 0..300 {
        let w = mh.dot(&m.dot(&v));
        let wn = norm(&w);
        if wn == 0.0 {
            return 0.0;
        }
        let next = wn; // Rayleigh quotient for unit v
        v = w / wn;
        if (next - lambda).abs() <= 1e-15 * next.max(1.0) {
            lambda = next;
            break;
        }
        lambda = next;
    }
    lambda.sqrt()
}

/// Conjugate transpose.
pub fn dagger(m: &Array2<Complex64>) -> Array2<Complex64> {
    m.t().mapv(|z| z.conj())
}

/// Determinant by LU with partial pivoting.
pub fn determinant(m: &Array2<Complex64>) -> Complex64 {
    let n = m.nrows();
    assert_eq!(n, m.ncols());
    let mut a = m.clone();
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..n {
        let (best, bestval) = (col..n)
            .map(|r| (r, a[(r, col)].norm()))
            .fold((col, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if bestval <= 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if best != col {
            for c in 0..n {
                let tmp = a[(col, c)];
                a[(col, c)] = a[(best, c)];
                a[(best, c)] = tmp;
            }
            det = -det;
        }
        let pivot = a[(col, col)];
        det *= pivot;
        for r in col + 1..n {
            let f = a[(r, col)] / pivot;
            for c in col..n {
                let sub = f * a[(col, c)];
                a[(r, c)] -= sub;
            }
        }
    }
    det
}

/// Max absolute entry.
pub fn max_abs(m: &Array2<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Identity matrix.
pub fn eye(n: usize) -> Array2<Complex64> {
    Array2::from_diag_elem(n, Complex64::new(1.0, 0.0))
}

/// Max-entry distance to the identity of U^dag U.
pub fn unitarity_defect(u: &Array2<Complex64>) -> f64 {
    let prod = dagger(u).dot(u);
    max_abs(&(&prod - &eye(u.nrows())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn big(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    #[test]
    fn integer_rank_basic() {
        assert_eq!(integer_rank(&big(&[&[1, 1], &[1, 1]])), 1);
        assert_eq!(integer_rank(&big(&[&[1, 1, 0], &[0, 1, 1], &[1, 0, 1]])), 3);
        assert_eq!(integer_rank(&big(&[&[1, 1, 0], &[0, 1, 1], &[1, 2, 1]])), 2);
        assert_eq!(integer_rank(&big(&[&[0, 0], &[0, 0]])), 0);
    }

    #[test]
    fn float_rank_matches_integer_rank() {
        let m = [[1.0, 1.0, 0.0], [0.0, 1.0, 1.0], [1.0, 2.0, 1.0]];
        let rows: Vec<Vec<f64>> = m.iter().map(|r| r.to_vec()).collect();
        assert_eq!(float_rank(&rows, 1e-9), 2);
    }

    #[test]
    fn gram_counts_independent_vectors() {
        let mut g = GramBasis::new(3, 1e-9);
        assert!(g.insert(&Array1::from_vec(vec![1.0, 0.0, 0.0])));
        assert!(g.insert(&Array1::from_vec(vec![1.0, 1.0, 0.0])));
        assert!(!g.insert(&Array1::from_vec(vec![3.0, 5.0, 0.0])));
        assert!(g.insert(&Array1::from_vec(vec![0.0, 1e-3, 1e-3])));
        assert_eq!(g.len(), 3);
    }

    #[test]
    fn det_and_norm() {
        let m = ndarray::arr2(&[
            [Complex64::new(0.0, 0.0), Complex64::new(2.0, 0.0)],
            [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
        ]);
        let d = determinant(&m);
        assert_abs_diff_eq!(d.re, -2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(operator_norm(&m), 2.0, epsilon = 1e-9);
    }
}

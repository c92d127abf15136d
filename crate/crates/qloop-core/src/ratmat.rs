//! Dense matrices over arbitrary-precision rationals.
//!
//! Small and exact: Gauss-Jordan inversion, LDL^T factorization, Kronecker
//! products. Sizes here are tiny (the number of mutations in a loop), so a
//! dense row-major `Vec` of `BigRational` is the right tool.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::Rat;

/// Dense row-major matrix over `BigRational`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMat {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

/// Unit lower-triangular factor and diagonal of `M = L D L^T`.
#[derive(Clone, Debug)]
pub struct Ldlt {
    pub l: RatMat,
    pub d: Vec<Rat>,
}

impl RatMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMat {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    /// Build from rows; panics if the rows are ragged.
    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        RatMat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Convenience for integer-entry fixtures.
    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|&x| Rat::from_integer(x.into())).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> RatMat {
        let mut t = RatMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &RatMat) -> RatMat {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = RatMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let term = a * &other[(k, j)];
                    out[(i, j)] += term;
                }
            }
        }
        out
    }

    pub fn scale(&self, s: &Rat) -> RatMat {
        let mut out = self.clone();
        for v in &mut out.data {
            *v *= s;
        }
        out
    }

    pub fn add(&self, other: &RatMat) -> RatMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (v, w) in out.data.iter_mut().zip(&other.data) {
            *v += w;
        }
        out
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    /// (M + M^T) / 2.
    pub fn symmetrize(&self) -> RatMat {
        assert_eq!(self.rows, self.cols);
        let half = Rat::new(BigInt::from(1), BigInt::from(2));
        self.add(&self.transpose()).scale(&half)
    }

    pub fn kronecker(&self, other: &RatMat) -> RatMat {
        let mut out = RatMat::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = &self[(i, j)];
                if a.is_zero() {
                    continue;
                }
                for p in 0..other.rows {
                    for q in 0..other.cols {
                        out[(i * other.rows + p, j * other.cols + q)] = a * &other[(p, q)];
                    }
                }
            }
        }
        out
    }

    /// Gauss-Jordan inverse; `None` when singular.
    pub fn inverse(&self) -> Option<RatMat> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = RatMat::identity(n);
        for col in 0..n {
            let pivot_row = (col..n).find(|&r| !a[(r, col)].is_zero())?;
            if pivot_row != col {
                a.swap_rows(pivot_row, col);
                inv.swap_rows(pivot_row, col);
            }
            let pivot = a[(col, col)].clone();
            for j in 0..n {
                a[(col, j)] /= &pivot;
                inv[(col, j)] /= &pivot;
            }
            for r in 0..n {
                if r == col || a[(r, col)].is_zero() {
                    continue;
                }
                let factor = a[(r, col)].clone();
                for j in 0..n {
                    let t = &factor * &a[(col, j)];
                    a[(r, j)] -= t;
                    let t = &factor * &inv[(col, j)];
                    inv[(r, j)] -= t;
                }
            }
        }
        Some(inv)
    }

    /// Solve `self * x = rhs` for square `self`; `None` when singular.
    pub fn solve(&self, rhs: &RatMat) -> Option<RatMat> {
        Some(self.inverse()?.mul(rhs))
    }

    /// LDL^T factorization without pivoting: `self = L D L^T` with `L` unit
    /// lower triangular. Returns `None` on a zero pivot (in particular the
    /// factorization always exists for positive definite input, with all
    /// pivots positive).
    pub fn ldlt(&self) -> Option<Ldlt> {
        assert!(self.is_symmetric(), "ldlt needs a symmetric matrix");
        let n = self.rows;
        let mut l = RatMat::identity(n);
        let mut d = vec![Rat::zero(); n];
        for j in 0..n {
            let mut dj = self[(j, j)].clone();
            for k in 0..j {
                dj -= &l[(j, k)] * &l[(j, k)] * &d[k];
            }
            if dj.is_zero() {
                // A zero pivot: bail out unless the rest of the column is
                // zero too (then L entries below are forced to zero).
                for i in j + 1..n {
                    let mut v = self[(i, j)].clone();
                    for k in 0..j {
                        v -= &l[(i, k)] * &l[(j, k)] * &d[k];
                    }
                    if !v.is_zero() {
                        return None;
                    }
                }
                d[j] = dj;
                continue;
            }
            d[j] = dj;
            for i in j + 1..n {
                let mut v = self[(i, j)].clone();
                for k in 0..j {
                    v -= &l[(i, k)] * &l[(j, k)] * &d[k];
                }
                l[(i, j)] = v / &d[j];
            }
        }
        Some(Ldlt { l, d })
    }

    /// True iff symmetric positive definite (all LDL^T pivots positive).
    pub fn is_positive_definite(&self) -> bool {
        if !self.is_symmetric() {
            return false;
        }
        match self.ldlt() {
            Some(f) => f.d.iter().all(|p| p.is_positive()),
            None => false,
        }
    }

    /// Evaluate the quadratic form `k^T M k` at a nonnegative integer point.
    pub fn quad_eval(&self, k: &[u64]) -> Rat {
        assert_eq!(self.rows, self.cols);
        assert_eq!(k.len(), self.rows);
        let mut acc = Rat::zero();
        for i in 0..self.rows {
            if k[i] == 0 {
                continue;
            }
            let ki = BigInt::from(k[i]);
            for j in 0..self.cols {
                if k[j] == 0 || self[(i, j)].is_zero() {
                    continue;
                }
                acc += &self[(i, j)] * Rat::from_integer(&ki * BigInt::from(k[j]));
            }
        }
        acc
    }

    /// Extract the principal submatrix on the given index set.
    pub fn principal_submatrix(&self, idx: &[usize]) -> RatMat {
        let mut out = RatMat::zeros(idx.len(), idx.len());
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                out[(a, b)] = self[(i, j)].clone();
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl core::ops::Index<(usize, usize)> for RatMat {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.data[i * self.cols + j]
    }
}

impl core::ops::IndexMut<(usize, usize)> for RatMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.data[i * self.cols + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frac(p: i64, q: i64) -> Rat {
        Rat::new(BigInt::from(p), BigInt::from(q))
    }

    #[test]
    fn inverse_of_cartan_a3() {
        let c = RatMat::from_i64_rows(&[&[2, -1, 0], &[-1, 2, -1], &[0, -1, 2]]);
        let inv = c.inverse().unwrap();
        assert_eq!(inv[(0, 0)], frac(3, 4));
        assert_eq!(inv[(0, 2)], frac(1, 4));
        assert_eq!(inv[(1, 1)], frac(1, 1));
        assert_eq!(c.mul(&inv), RatMat::identity(3));
    }

    #[test]
    fn singular_has_no_inverse() {
        let m = RatMat::from_i64_rows(&[&[1, 2], &[2, 4]]);
        assert!(m.inverse().is_none());
    }

    #[test]
    fn ldlt_reconstructs_and_certifies() {
        let m = RatMat::from_i64_rows(&[&[2, -1, 0], &[-1, 2, -1], &[0, -1, 2]]);
        let f = m.ldlt().unwrap();
        assert!(f.d.iter().all(|p| p.is_positive()));
        // L D L^T = M
        let mut dm = RatMat::zeros(3, 3);
        for i in 0..3 {
            dm[(i, i)] = f.d[i].clone();
        }
        assert_eq!(f.l.mul(&dm).mul(&f.l.transpose()), m);
        assert!(m.is_positive_definite());
        let indef = RatMat::from_i64_rows(&[&[1, -2], &[-2, 1]]);
        assert!(!indef.is_positive_definite());
    }

    #[test]
    fn kronecker_matches_definition() {
        let a = RatMat::from_i64_rows(&[&[1, 2], &[3, 4]]);
        let b = RatMat::from_i64_rows(&[&[0, 1], &[1, 0]]);
        let k = a.kronecker(&b);
        assert_eq!(k.rows(), 4);
        assert_eq!(k[(0, 1)], frac(1, 1)); // a00 * b01
        assert_eq!(k[(0, 3)], frac(2, 1)); // a01 * b01
        assert_eq!(k[(2, 1)], frac(3, 1)); // a10 * b01
        assert_eq!(k[(2, 3)], frac(4, 1)); // a11 * b01
        assert_eq!(k[(3, 2)], frac(4, 1)); // a11 * b10
    }

    #[test]
    fn quad_eval_matches_matrix_product() {
        let g = RatMat::from_rows(vec![
            vec![frac(3, 4), frac(1, 2)],
            vec![frac(1, 2), frac(1, 1)],
        ]);
        // k = (2, 3): 3/4*4 + 2*(1/2*6) + 1*9 = 3 + 6 + 9
        assert_eq!(g.quad_eval(&[2, 3]), frac(18, 1));
        assert_eq!(g.quad_eval(&[0, 0]), Rat::zero());
    }
}

//! Dense exact matrices over ℚ and over ℚ(i) (as real/imaginary pairs).

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{q, Q};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self[(r, c)].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = Q;
    fn index(&self, (r, c): (usize, usize)) -> &Q {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Q {
        &mut self.data[r * self.cols + c]
    }
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![Q::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Q::one();
        }
        m
    }

    pub fn from_i64(rows: usize, cols: usize, values: &[i64]) -> Self {
        assert_eq!(values.len(), rows * cols);
        Mat {
            rows,
            cols,
            data: values.iter().map(|&v| q(v)).collect(),
        }
    }

    pub fn diagonal(values: &[Q]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = v.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Nonzero entries as `(row, col, value)`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Q)> {
        self.data
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(move |(k, v)| (k / self.cols, k % self.cols, v))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        let mut out = Mat::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = &other[(k, c)];
                    if !b.is_zero() {
                        out[(r, c)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                let mut acc = Q::zero();
                for c in 0..self.cols {
                    let a = &self[(r, c)];
                    if !a.is_zero() && !v[c].is_zero() {
                        acc += a * &v[c];
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        self.add(&other.scale(&-Q::one()))
    }

    pub fn scale(&self, c: &Q) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    pub fn neg(&self) -> Mat {
        self.scale(&-Q::one())
    }

    pub fn kron(&self, other: &Mat) -> Mat {
        let mut out = Mat::zeros(self.rows * other.rows, self.cols * other.cols);
        for (r, c, a) in self.entries() {
            for (r2, c2, b) in other.entries() {
                out[(r * other.rows + r2, c * other.cols + c2)] = a * b;
            }
        }
        out
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && *self == self.transpose()
    }

    pub fn is_skew(&self) -> bool {
        self.is_square() && *self == self.transpose().neg()
    }

    /// Row-echelon reduction returning the rank and the determinant (for square input).
    fn eliminate(&self) -> (usize, Q) {
        let mut a = self.clone();
        let mut det = Q::one();
        let mut rank = 0;
        for c in 0..a.cols {
            if rank == a.rows {
                break;
            }
            let Some(p) = (rank..a.rows).find(|&r| !a[(r, c)].is_zero()) else {
                det = Q::zero();
                continue;
            };
            if p != rank {
                for k in 0..a.cols {
                    a.data.swap(p * a.cols + k, rank * a.cols + k);
                }
                det = -det;
            }
            let pivot = a[(rank, c)].clone();
            det *= &pivot;
            for r in rank + 1..a.rows {
                if a[(r, c)].is_zero() {
                    continue;
                }
                let f = &a[(r, c)] / &pivot;
                for k in c..a.cols {
                    let v = &a[(rank, k)] * &f;
                    a[(r, k)] -= v;
                }
            }
            rank += 1;
        }
        if rank < a.rows.min(a.cols) || !self.is_square() {
            det = Q::zero();
        }
        (rank, det)
    }

    pub fn rank(&self) -> usize {
        self.eliminate().0
    }

    pub fn det(&self) -> Q {
        assert!(self.is_square(), "determinant of a non-square matrix");
        self.eliminate().1
    }

    pub fn inverse(&self) -> Result<Mat> {
        if !self.is_square() {
            return Err(Error::Dimension("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Mat::identity(n);
        for c in 0..n {
            let p = (c..n)
                .find(|&r| !a[(r, c)].is_zero())
                .ok_or(Error::NonInvertible)?;
            if p != c {
                for k in 0..n {
                    a.data.swap(p * n + k, c * n + k);
                    inv.data.swap(p * n + k, c * n + k);
                }
            }
            let pivot_inv = Q::one() / &a[(c, c)];
            for k in 0..n {
                a[(c, k)] *= &pivot_inv;
                inv[(c, k)] *= &pivot_inv;
            }
            for r in 0..n {
                if r == c || a[(r, c)].is_zero() {
                    continue;
                }
                let f = a[(r, c)].clone();
                for k in 0..n {
                    let va = &a[(c, k)] * &f;
                    a[(r, k)] -= va;
                    let vi = &inv[(c, k)] * &f;
                    inv[(r, k)] -= vi;
                }
            }
        }
        Ok(inv)
    }

    /// Inertia `(positive, negative, zero)` of a symmetric matrix by congruence
    /// (symmetric Gaussian elimination).
    pub fn inertia(&self) -> Result<(usize, usize, usize)> {
        if !self.is_symmetric() {
            return Err(Error::Symmetry("inertia of a non-symmetric matrix".into()));
        }
        let mut a = self.clone();
        let n = a.rows;
        let (mut pos, mut neg, mut zero) = (0, 0, 0);
        let mut active: Vec<usize> = (0..n).collect();
        while !active.is_empty() {
            // pick a nonzero diagonal pivot, or create one from an off-diagonal pair
            let pivot = active.iter().copied().find(|&i| !a[(i, i)].is_zero());
            let p = match pivot {
                Some(p) => p,
                None => {
                    let pair = active.iter().copied().find_map(|i| {
                        active
                            .iter()
                            .copied()
                            .find(|&j| j != i && !a[(i, j)].is_zero())
                            .map(|j| (i, j))
                    });
                    match pair {
                        None => {
                            zero += active.len();
                            break;
                        }
                        Some((i, j)) => {
                            // row/col i += row/col j makes a_ii = 2 a_ij ≠ 0
                            for k in 0..n {
                                let v = a[(j, k)].clone();
                                a[(i, k)] += v;
                            }
                            for k in 0..n {
                                let v = a[(k, j)].clone();
                                a[(k, i)] += v;
                            }
                            i
                        }
                    }
                }
            };
            let d = a[(p, p)].clone();
            if d.is_positive() {
                pos += 1;
            } else {
                neg += 1;
            }
            active.retain(|&i| i != p);
            for &r in &active {
                if a[(r, p)].is_zero() {
                    continue;
                }
                let f = &a[(r, p)] / &d;
                for k in 0..n {
                    let v = &a[(p, k)] * &f;
                    a[(r, k)] -= v;
                }
                for k in 0..n {
                    let v = &a[(k, p)] * &f;
                    a[(k, r)] -= v;
                }
            }
        }
        Ok((pos, neg, zero))
    }
}

/// Matrix over ℚ(i) stored as `re + i·im`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CMat {
    pub re: Mat,
    pub im: Mat,
}

impl CMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMat {
            re: Mat::zeros(rows, cols),
            im: Mat::zeros(rows, cols),
        }
    }

    pub fn identity(n: usize) -> Self {
        CMat {
            re: Mat::identity(n),
            im: Mat::zeros(n, n),
        }
    }

    pub fn real(re: Mat) -> Self {
        let im = Mat::zeros(re.rows(), re.cols());
        CMat { re, im }
    }

    pub fn rows(&self) -> usize {
        self.re.rows()
    }

    pub fn cols(&self) -> usize {
        self.re.cols()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn mul(&self, other: &CMat) -> CMat {
        CMat {
            re: self.re.mul(&other.re).sub(&self.im.mul(&other.im)),
            im: self.re.mul(&other.im).add(&self.im.mul(&other.re)),
        }
    }

    pub fn add(&self, other: &CMat) -> CMat {
        CMat {
            re: self.re.add(&other.re),
            im: self.im.add(&other.im),
        }
    }

    pub fn sub(&self, other: &CMat) -> CMat {
        CMat {
            re: self.re.sub(&other.re),
            im: self.im.sub(&other.im),
        }
    }

    pub fn scale(&self, c: &Q) -> CMat {
        CMat {
            re: self.re.scale(c),
            im: self.im.scale(c),
        }
    }

    /// Multiplication by the imaginary unit.
    pub fn times_i(&self) -> CMat {
        CMat {
            re: self.im.neg(),
            im: self.re.clone(),
        }
    }

    pub fn transpose(&self) -> CMat {
        CMat {
            re: self.re.transpose(),
            im: self.im.transpose(),
        }
    }

    pub fn kron(&self, other: &CMat) -> CMat {
        CMat {
            re: self.re.kron(&other.re).sub(&self.im.kron(&other.im)),
            im: self.re.kron(&other.im).add(&self.im.kron(&other.re)),
        }
    }

    /// Real form acting on `(Re s, Im s)`: `[[re, −im], [im, re]]`.
    pub fn realify(&self) -> Mat {
        let (r, c) = (self.rows(), self.cols());
        let mut out = Mat::zeros(2 * r, 2 * c);
        for i in 0..r {
            for j in 0..c {
                out[(i, j)] = self.re[(i, j)].clone();
                out[(i + r, j + c)] = self.re[(i, j)].clone();
                out[(i, j + c)] = -self.im[(i, j)].clone();
                out[(i + r, j)] = self.im[(i, j)].clone();
            }
        }
        out
    }
}

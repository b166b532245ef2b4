//! Dense matrices over a prime field `Z/m`.
//!
//! Vectors are column vectors; a matrix acts by `M · v`. Row reduction uses
//! the first nonzero pivot in each column, so every result is deterministic.

use std::fmt;

use super::poly::Poly;
use crate::numth::pow_mod;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix {
    m: u64,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix(mod {}) ", self.m)?;
        f.debug_list().entries(self.row_vecs()).finish()
    }
}

fn inv_mod(a: u64, m: u64) -> u64 {
    debug_assert!(a % m != 0);
    pow_mod(a, m - 2, m)
}

impl Matrix {
    pub fn zeros(m: u64, rows: usize, cols: usize) -> Self {
        Self { m, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(m: u64, n: usize) -> Self {
        Self::scalar(m, n, 1)
    }

    pub fn scalar(m: u64, n: usize, s: u64) -> Self {
        let mut out = Self::zeros(m, n, n);
        for i in 0..n {
            out[(i, i)] = s % m;
        }
        out
    }

    pub fn from_rows(m: u64, rows: &[Vec<u64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged matrix rows");
            data.extend(row.iter().map(|&x| x % m));
        }
        Self { m, rows: r, cols: c, data }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(m: u64, rows: usize, cols: &[Vec<u64>]) -> Self {
        let mut out = Self::zeros(m, rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for i in 0..rows {
                out[(i, j)] = col[i] % m;
            }
        }
        out
    }

    pub fn modulus(&self) -> u64 {
        self.m
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

    pub fn row_vecs(&self) -> Vec<Vec<u64>> {
        self.data.chunks(self.cols.max(1)).take(self.rows).map(|r| r.to_vec()).collect()
    }

    pub fn col(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.m, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        assert_eq!(self.m, other.m, "modulus mismatch");
        let m = self.m;
        let mut out = Matrix::zeros(m, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * out.cols + j;
                    out.data[idx] = (out.data[idx] + a * other[(k, j)]) % m;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        let m = self.m;
        (0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .fold(0u64, |acc, (&a, &b)| (acc + a * b) % m)
            })
            .collect()
    }

    /// `M v` for a vector of residues; assumes `cols · m²` fits in a `u64`.
    pub fn mul_vec_u32(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        let m = self.m;
        (0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .fold(0u64, |acc, (&a, &b)| acc + a * b as u64)
                    .rem_euclid(m) as u32
            })
            .collect()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let m = self.m;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| (a + b) % m).collect();
        Matrix { m, rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let m = self.m;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| (a + m - b) % m).collect();
        Matrix { m, rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, s: u64) -> Matrix {
        let m = self.m;
        let data = self.data.iter().map(|&a| a * (s % m) % m).collect();
        Matrix { m, rows: self.rows, cols: self.cols, data }
    }

    pub fn pow(&self, mut e: u64) -> Matrix {
        assert!(self.is_square());
        let mut acc = Matrix::identity(self.m, self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..self.cols).all(|j| self[(i, j)] == u64::from(i == j)))
    }

    /// Square and equal to `c·I` for some `c`.
    pub fn is_diagonal_constant(&self) -> bool {
        let n = self.rows;
        self.is_square()
            && (0..n).all(|i| (0..n).all(|j| self.data[i * n + j] == if i == j { self.data[0] } else { 0 }))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    /// Stacks `self` above `other`.
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Matrix { m: self.m, rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Places `other` to the right of `self`.
    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        let mut out = Matrix::zeros(self.m, self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)];
            }
            for j in 0..other.cols {
                out[(i, self.cols + j)] = other[(i, j)];
            }
        }
        out
    }

    /// Block-diagonal matrix `diag(self, other)`.
    pub fn block_diag(&self, other: &Matrix) -> Matrix {
        let mut out = Matrix::zeros(self.m, self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)];
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out[(self.rows + i, self.cols + j)] = other[(i, j)];
            }
        }
        out
    }

    /// Sub-block `rows r0..r1`, `cols c0..c1`.
    pub fn block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Matrix {
        let mut out = Matrix::zeros(self.m, r1 - r0, c1 - c0);
        for i in r0..r1 {
            for j in c0..c1 {
                out[(i - r0, j - c0)] = self[(i, j)];
            }
        }
        out
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let m = self.m;
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..a.cols {
            if r == a.rows {
                break;
            }
            let Some(piv) = (r..a.rows).find(|&i| a[(i, c)] != 0) else { continue };
            a.swap_rows(piv, r);
            let inv = inv_mod(a[(r, c)], m);
            for j in c..a.cols {
                a[(r, j)] = a[(r, j)] * inv % m;
            }
            for i in 0..a.rows {
                if i == r {
                    continue;
                }
                let f = a[(i, c)];
                if f == 0 {
                    continue;
                }
                for j in c..a.cols {
                    let sub = f * a[(r, j)] % m;
                    a[(i, j)] = (a[(i, j)] + m - sub) % m;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (a, pivots)
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{ v : M v = 0 }`, one vector per free column in ascending order.
    pub fn kernel(&self) -> Vec<Vec<u64>> {
        let m = self.m;
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![0u64; self.cols];
            v[free] = 1;
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = (m - r[(row, free)]) % m;
            }
            basis.push(v);
        }
        basis
    }

    pub fn determinant(&self) -> u64 {
        assert!(self.is_square());
        let m = self.m;
        let mut a = self.clone();
        let mut det = 1u64;
        for c in 0..a.cols {
            let Some(piv) = (c..a.rows).find(|&i| a[(i, c)] != 0) else { return 0 };
            if piv != c {
                a.swap_rows(piv, c);
                det = (m - det) % m;
            }
            let pv = a[(c, c)];
            det = det * pv % m;
            let inv = inv_mod(pv, m);
            for i in c + 1..a.rows {
                let f = a[(i, c)] * inv % m;
                if f == 0 {
                    continue;
                }
                for j in c..a.cols {
                    let sub = f * a[(c, j)] % m;
                    a[(i, j)] = (a[(i, j)] + m - sub) % m;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<Matrix> {
        assert!(self.is_square());
        let n = self.rows;
        let aug = self.hstack(&Matrix::identity(self.m, n));
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(r.block(0, n, n, 2 * n))
    }

    /// Characteristic polynomial `det(xI − M)` via reduction to Hessenberg form.
    pub fn charpoly(&self) -> Poly {
        assert!(self.is_square());
        let m = self.m;
        let n = self.rows;
        let mut h = self.clone();
        for col in 1..n.saturating_sub(1) {
            let Some(i) = (col..n).find(|&i| h[(i, col - 1)] != 0) else { continue };
            if i != col {
                h.swap_rows(i, col);
                for r in 0..n {
                    h.data.swap(r * n + i, r * n + col);
                }
            }
            let inv = inv_mod(h[(col, col - 1)], m);
            for i in col + 1..n {
                let u = h[(i, col - 1)] * inv % m;
                if u == 0 {
                    continue;
                }
                for j in 0..n {
                    let sub = u * h[(col, j)] % m;
                    h[(i, j)] = (h[(i, j)] + m - sub) % m;
                }
                for r in 0..n {
                    let add = u * h[(r, i)] % m;
                    h[(r, col)] = (h[(r, col)] + add) % m;
                }
            }
        }
        // p_k is the characteristic polynomial of the leading k×k block
        let mut ps: Vec<Poly> = vec![Poly::one(m)];
        for k in 1..=n {
            let diag = h[(k - 1, k - 1)];
            let mut pk = Poly::new(m, vec![(m - diag) % m, 1]).mul(&ps[k - 1]);
            let mut prod = 1u64;
            for i in 1..k {
                prod = prod * h[(k - i, k - i - 1)] % m;
                let coeff = prod * h[(k - i - 1, k - 1)] % m;
                if coeff != 0 {
                    pk = pk.sub(&ps[k - i - 1].mul(&Poly::new(m, vec![coeff])));
                }
            }
            ps.push(pk);
        }
        ps.pop().unwrap()
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = u64;
    fn index(&self, (i, j): (usize, usize)) -> &u64 {
        assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut u64 {
        assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// Row-reduced basis of the span of `vectors` (deterministic).
pub fn span_basis(m: u64, dim: usize, vectors: &[Vec<u64>]) -> Vec<Vec<u64>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let (r, pivots) = Matrix::from_rows(m, vectors).rref();
    assert_eq!(r.cols(), dim);
    (0..pivots.len()).map(|i| r.row_vecs()[i].clone()).collect()
}

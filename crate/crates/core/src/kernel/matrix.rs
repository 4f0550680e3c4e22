//! Dense matrices over a commutative ring supplied as a context value.

use std::fmt::Debug;

use num_traits::{One, Zero};

use super::rational::Rational;

/// Arithmetic of a commutative ring whose elements are plain values.
pub trait Ring {
    type E: Clone + PartialEq + Debug;
    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;

    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E {
        self.add(a, &self.neg(b))
    }
    fn eq_elem(&self, a: &Self::E, b: &Self::E) -> bool {
        self.is_zero(&self.sub(a, b))
    }
}

/// The field of rationals as a [`Ring`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct QField;

impl Ring for QField {
    type E = Rational;
    fn zero(&self) -> Rational {
        Rational::zero()
    }
    fn one(&self) -> Rational {
        Rational::one()
    }
    fn add(&self, a: &Rational, b: &Rational) -> Rational {
        a + b
    }
    fn neg(&self, a: &Rational) -> Rational {
        -a
    }
    fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        a * b
    }
    fn is_zero(&self, a: &Rational) -> bool {
        a.is_zero()
    }
    fn sub(&self, a: &Rational, b: &Rational) -> Rational {
        a - b
    }
    fn eq_elem(&self, a: &Rational, b: &Rational) -> bool {
        a == b
    }
}

/// Row-major `rows x cols` matrix. Arithmetic takes the ring explicitly.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Clone> Matrix<E> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<E>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length");
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<E>>, cols: usize) -> Self {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged matrix rows");
            data.extend(row);
        }
        Matrix { rows: r, cols, data }
    }

    pub fn filled(rows: usize, cols: usize, v: E) -> Self {
        Matrix { rows, cols, data: vec![v; rows * cols] }
    }

    pub fn zeros<R: Ring<E = E>>(ring: &R, rows: usize, cols: usize) -> Self {
        Self::filled(rows, cols, ring.zero())
    }

    pub fn identity<R: Ring<E = E>>(ring: &R, n: usize) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.data[i * n + i] = ring.one();
        }
        m
    }

    pub fn diagonal<R: Ring<E = E>>(ring: &R, rows: usize, cols: usize, diag: &[E]) -> Self {
        let mut m = Self::zeros(ring, rows, cols);
        for (i, d) in diag.iter().enumerate() {
            m.data[i * cols + i] = d.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn data(&self) -> &[E] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: E) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<E> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<E> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<E>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn map<F, T: Clone>(&self, f: F) -> Matrix<T>
    where
        F: FnMut(&E) -> T,
    {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn try_map<F, T: Clone, Er>(&self, f: F) -> Result<Matrix<T>, Er>
    where
        F: FnMut(&E) -> Result<T, Er>,
    {
        let data = self.data.iter().map(f).collect::<Result<Vec<_>, _>>()?;
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix { rows: self.cols, cols: self.rows, data }
    }

    /// Builds a `rows x cols.len()` matrix from its columns.
    pub fn from_cols(cols: Vec<Vec<E>>, rows: usize) -> Self {
        let n = cols.len();
        let mut data = Vec::with_capacity(rows * n);
        for i in 0..rows {
            for c in &cols {
                assert_eq!(c.len(), rows, "ragged matrix columns");
                data.push(c[i].clone());
            }
        }
        Matrix { rows, cols: n, data }
    }

    /// The listed columns as a new matrix.
    pub fn select_cols(&self, idx: &[usize]) -> Self {
        let mut data = Vec::with_capacity(self.rows * idx.len());
        for i in 0..self.rows {
            for &j in idx {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix { rows: self.rows, cols: idx.len(), data }
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let mut data = Vec::with_capacity(self.cols * idx.len());
        for &i in idx {
            data.extend_from_slice(&self.data[i * self.cols..(i + 1) * self.cols]);
        }
        Matrix { rows: idx.len(), cols: self.cols, data }
    }

    pub fn hcat(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows, "hcat row mismatch");
        let mut data = Vec::with_capacity(self.data.len() + other.data.len());
        for i in 0..self.rows {
            data.extend_from_slice(&self.data[i * self.cols..(i + 1) * self.cols]);
            data.extend_from_slice(&other.data[i * other.cols..(i + 1) * other.cols]);
        }
        Matrix { rows: self.rows, cols: self.cols + other.cols, data }
    }

    pub fn vcat(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols, "vcat column mismatch");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Matrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// Column-major flattening, the usual `vec` operator.
    pub fn vectorize(&self) -> Vec<E> {
        let mut out = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                out.push(self.get(i, j).clone());
            }
        }
        out
    }

    pub fn unvectorize(v: &[E], rows: usize, cols: usize) -> Self {
        assert_eq!(v.len(), rows * cols);
        let mut data = Vec::with_capacity(v.len());
        for i in 0..rows {
            for j in 0..cols {
                data.push(v[j * rows + i].clone());
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn column_vector(v: Vec<E>) -> Self {
        let n = v.len();
        Matrix { rows: n, cols: 1, data: v }
    }
}

impl<E: Clone + PartialEq + Debug> Matrix<E> {
    pub fn is_zero<R: Ring<E = E>>(&self, ring: &R) -> bool {
        self.data.iter().all(|e| ring.is_zero(e))
    }

    pub fn equals<R: Ring<E = E>>(&self, ring: &R, other: &Self) -> bool {
        self.shape() == other.shape() && self.data.iter().zip(&other.data).all(|(a, b)| ring.eq_elem(a, b))
    }

    pub fn is_identity<R: Ring<E = E>>(&self, ring: &R) -> bool {
        self.rows == self.cols && self.equals(ring, &Self::identity(ring, self.rows))
    }

    pub fn add<R: Ring<E = E>>(&self, ring: &R, other: &Self) -> Self {
        assert_eq!(self.shape(), other.shape(), "matrix add shape");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| ring.add(a, b)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub<R: Ring<E = E>>(&self, ring: &R, other: &Self) -> Self {
        assert_eq!(self.shape(), other.shape(), "matrix sub shape");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| ring.sub(a, b)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn neg<R: Ring<E = E>>(&self, ring: &R) -> Self {
        self.map(|a| ring.neg(a))
    }

    pub fn scale<R: Ring<E = E>>(&self, ring: &R, c: &E) -> Self {
        self.map(|a| ring.mul(c, a))
    }

    pub fn mul<R: Ring<E = E>>(&self, ring: &R, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product shape {:?} x {:?}", self.shape(), other.shape());
        let mut data = vec![ring.zero(); self.rows * other.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if ring.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if ring.is_zero(b) {
                        continue;
                    }
                    let cell = &mut data[i * other.cols + j];
                    *cell = ring.add(cell, &ring.mul(a, b));
                }
            }
        }
        Matrix { rows: self.rows, cols: other.cols, data }
    }

    pub fn kronecker<R: Ring<E = E>>(&self, ring: &R, other: &Self) -> Self {
        let (r1, c1) = self.shape();
        let (r2, c2) = other.shape();
        let mut m = Self::zeros(ring, r1 * r2, c1 * c2);
        for i in 0..r1 {
            for j in 0..c1 {
                let a = self.get(i, j);
                if ring.is_zero(a) {
                    continue;
                }
                for k in 0..r2 {
                    for l in 0..c2 {
                        m.set(i * r2 + k, j * c2 + l, ring.mul(a, other.get(k, l)));
                    }
                }
            }
        }
        m
    }

    /// Block-diagonal sum.
    pub fn direct_sum<R: Ring<E = E>>(&self, ring: &R, other: &Self) -> Self {
        let top = self.hcat(&Self::zeros(ring, self.rows, other.cols));
        let bottom = Self::zeros(ring, other.rows, self.cols).hcat(other);
        top.vcat(&bottom)
    }

    /// Row `a` += c * row `b`.
    pub fn add_row_multiple<R: Ring<E = E>>(&mut self, ring: &R, a: usize, b: usize, c: &E) {
        if ring.is_zero(c) {
            return;
        }
        for j in 0..self.cols {
            let v = ring.mul(c, self.get(b, j));
            let cell = &mut self.data[a * self.cols + j];
            *cell = ring.add(cell, &v);
        }
    }

    /// Column `a` += c * column `b`.
    pub fn add_col_multiple<R: Ring<E = E>>(&mut self, ring: &R, a: usize, b: usize, c: &E) {
        if ring.is_zero(c) {
            return;
        }
        for i in 0..self.rows {
            let v = ring.mul(self.get(i, b), c);
            let cell = &mut self.data[i * self.cols + a];
            *cell = ring.add(cell, &v);
        }
    }

    pub fn scale_row<R: Ring<E = E>>(&mut self, ring: &R, i: usize, c: &E) {
        for j in 0..self.cols {
            let v = ring.mul(c, self.get(i, j));
            self.set(i, j, v);
        }
    }

    pub fn scale_col<R: Ring<E = E>>(&mut self, ring: &R, j: usize, c: &E) {
        for i in 0..self.rows {
            let v = ring.mul(self.get(i, j), c);
            self.set(i, j, v);
        }
    }
}

/// Permutation matrix sending basis vector `j` to `perm[j]`.
pub fn permutation_matrix<R: Ring>(ring: &R, perm: &[usize]) -> Matrix<R::E> {
    let n = perm.len();
    let mut m = Matrix::zeros(ring, n, n);
    for (j, &i) in perm.iter().enumerate() {
        m.set(i, j, ring.one());
    }
    m
}

/// Field-specific helpers for matrices over the rationals.
pub mod qlin {
    use super::*;

    /// Reduced row echelon form and pivot columns.
    pub fn rref(m: &Matrix<Rational>) -> (Matrix<Rational>, Vec<usize>) {
        let mut a = m.clone();
        let (rows, cols) = a.shape();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(p) = (r..rows).find(|&i| !a.get(i, c).is_zero()) else {
                continue;
            };
            a.swap_rows(r, p);
            let inv = Rational::one() / a.get(r, c);
            a.scale_row(&QField, r, &inv);
            for i in 0..rows {
                if i != r && !a.get(i, c).is_zero() {
                    let f = -a.get(i, c).clone();
                    a.add_row_multiple(&QField, i, r, &f);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (a, pivots)
    }

    pub fn rank(m: &Matrix<Rational>) -> usize {
        rref(m).1.len()
    }

    /// Basis of the right nullspace as columns of a `cols x k` matrix.
    pub fn nullspace(m: &Matrix<Rational>) -> Matrix<Rational> {
        let (a, pivots) = rref(m);
        let cols = m.cols();
        let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Matrix::zeros(&QField, cols, free.len());
        for (k, &f) in free.iter().enumerate() {
            out.set(f, k, Rational::one());
            for (r, &p) in pivots.iter().enumerate() {
                out.set(p, k, -a.get(r, f).clone());
            }
        }
        out
    }

    /// Some `X` with `A X = B`, if one exists.
    pub fn solve(a: &Matrix<Rational>, b: &Matrix<Rational>) -> Option<Matrix<Rational>> {
        assert_eq!(a.rows(), b.rows(), "solve shape");
        let aug = a.hcat(b);
        let (r, pivots) = rref(&aug);
        let n = a.cols();
        if pivots.iter().any(|&p| p >= n) {
            return None;
        }
        let mut x = Matrix::zeros(&QField, n, b.cols());
        for (row, &p) in pivots.iter().enumerate() {
            for j in 0..b.cols() {
                x.set(p, j, r.get(row, n + j).clone());
            }
        }
        Some(x)
    }

    pub fn inverse(a: &Matrix<Rational>) -> Option<Matrix<Rational>> {
        if a.rows() != a.cols() {
            return None;
        }
        let x = solve(a, &Matrix::identity(&QField, a.rows()))?;
        x.mul(&QField, a).is_identity(&QField).then_some(x)
    }

    /// Columns forming a basis of the column space (a subset of the input columns).
    pub fn column_basis(m: &Matrix<Rational>) -> Matrix<Rational> {
        let (_, pivots) = rref(m);
        m.select_cols(&pivots)
    }

    pub fn determinant(m: &Matrix<Rational>) -> Rational {
        assert_eq!(m.rows(), m.cols());
        let mut a = m.clone();
        let n = a.rows();
        let mut det = Rational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !a.get(i, c).is_zero()) else {
                return Rational::zero();
            };
            if p != c {
                a.swap_rows(p, c);
                det = -det;
            }
            let piv = a.get(c, c).clone();
            det *= &piv;
            for i in c + 1..n {
                if !a.get(i, c).is_zero() {
                    let f = -(a.get(i, c) / &piv);
                    a.add_row_multiple(&QField, i, c, &f);
                }
            }
        }
        det
    }
}

#[cfg(test)]
mod tests {
    use super::qlin::*;
    use super::*;
    use crate::kernel::rational::q;

    fn qm(rows: &[&[i64]]) -> Matrix<Rational> {
        let cols = rows.first().map_or(0, |r| r.len());
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect(), cols)
    }

    #[test]
    fn product_and_kronecker() {
        let a = qm(&[&[1, 2], &[3, 4]]);
        let i = Matrix::identity(&QField, 2);
        assert_eq!(a.mul(&QField, &i), a);
        let k = i.kronecker(&QField, &a);
        assert_eq!(k.shape(), (4, 4));
        assert_eq!(k.get(2, 2), &q(1));
        assert_eq!(determinant(&a), q(-2));
    }

    #[test]
    fn nullspace_and_solve() {
        let a = qm(&[&[1, 1]]);
        let n = nullspace(&a);
        assert_eq!(n.cols(), 1);
        assert!(a.mul(&QField, &n).is_zero(&QField));
        let b = qm(&[&[3]]);
        let x = solve(&a, &b).unwrap();
        assert_eq!(a.mul(&QField, &x), b);
        assert!(solve(&qm(&[&[0, 0]]), &b).is_none());
        let inv = inverse(&qm(&[&[2, 1], &[1, 1]])).unwrap();
        assert_eq!(inv, qm(&[&[1, -1], &[-1, 2]]));
    }

    #[test]
    fn vectorize_roundtrip() {
        let a = qm(&[&[1, 2, 3], &[4, 5, 6]]);
        assert_eq!(a.vectorize(), vec![q(1), q(4), q(2), q(5), q(3), q(6)]);
        assert_eq!(Matrix::unvectorize(&a.vectorize(), 2, 3), a);
    }
}

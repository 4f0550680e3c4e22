//! Smith normal form over Euclidean domains, with the linear solvers built on it.

use num_traits::{One, Zero};

use super::matrix::{Matrix, QField, Ring};
use super::rational::Rational;

/// A Euclidean domain with a normal form for associates.
pub trait Euclid: Ring {
    /// Euclidean size of a nonzero element; units have size 0.
    fn size(&self, a: &Self::E) -> usize;
    /// `(q, r)` with `a = q b + r` and `r = 0` or `size(r) < size(b)`.
    fn div_rem(&self, a: &Self::E, b: &Self::E) -> (Self::E, Self::E);
    /// A unit `u` such that `u a` is the normal representative of `a`'s class.
    fn normal_unit(&self, a: &Self::E) -> Self::E;
    /// Inverse of a unit.
    fn unit_inverse(&self, u: &Self::E) -> Self::E;

    /// Tie-breaker among pivots of equal size; smaller entries grow less.
    fn weight(&self, _a: &Self::E) -> usize {
        0
    }

    fn is_unit(&self, a: &Self::E) -> bool {
        !self.is_zero(a) && self.size(a) == 0
    }

    /// Exact quotient `a / b` when `b` divides `a`.
    fn divide(&self, a: &Self::E, b: &Self::E) -> Option<Self::E> {
        if self.is_zero(b) {
            return self.is_zero(a).then(|| self.zero());
        }
        let (q, r) = self.div_rem(a, b);
        self.is_zero(&r).then_some(q)
    }

    fn normalize(&self, a: &Self::E) -> Self::E {
        if self.is_zero(a) {
            return a.clone();
        }
        self.mul(&self.normal_unit(a), a)
    }
}

impl Euclid for QField {
    fn size(&self, _a: &Rational) -> usize {
        0
    }
    fn div_rem(&self, a: &Rational, b: &Rational) -> (Rational, Rational) {
        (a / b, Rational::zero())
    }
    fn normal_unit(&self, a: &Rational) -> Rational {
        Rational::one() / a
    }
    fn unit_inverse(&self, u: &Rational) -> Rational {
        Rational::one() / u
    }
}

/// `left * original * right = diag(diagonal, 0, ...)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SmithDecomposition<E> {
    pub left: Matrix<E>,
    pub diagonal: Vec<E>,
    pub right: Matrix<E>,
    pub left_inv: Matrix<E>,
    pub right_inv: Matrix<E>,
}

impl<E: Clone> SmithDecomposition<E> {
    pub fn rank(&self) -> usize {
        self.diagonal.len()
    }
}

struct Work<'a, R: Euclid> {
    ring: &'a R,
    a: Matrix<R::E>,
    left: Matrix<R::E>,
    left_inv: Matrix<R::E>,
    right: Matrix<R::E>,
    right_inv: Matrix<R::E>,
}

impl<R: Euclid> Work<'_, R> {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.left.swap_rows(i, j);
        self.left_inv.swap_cols(i, j);
    }
    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.right.swap_cols(i, j);
        self.right_inv.swap_rows(i, j);
    }
    // row i += c row j
    fn add_row(&mut self, i: usize, j: usize, c: &R::E) {
        let r = self.ring;
        self.a.add_row_multiple(r, i, j, c);
        self.left.add_row_multiple(r, i, j, c);
        self.left_inv.add_col_multiple(r, j, i, &r.neg(c));
    }
    // col i += c col j
    fn add_col(&mut self, i: usize, j: usize, c: &R::E) {
        let r = self.ring;
        self.a.add_col_multiple(r, i, j, c);
        self.right.add_col_multiple(r, i, j, c);
        self.right_inv.add_row_multiple(r, j, i, &r.neg(c));
    }
    fn scale_row(&mut self, i: usize, u: &R::E) {
        let r = self.ring;
        let inv = r.unit_inverse(u);
        self.a.scale_row(r, i, u);
        self.left.scale_row(r, i, u);
        self.left_inv.scale_col(r, i, &inv);
    }
}

/// Smith normal form. Pivots are chosen as the nonzero entry of minimal size,
/// then minimal weight, then row-major position.
pub fn smith<R: Euclid>(ring: &R, m: &Matrix<R::E>) -> SmithDecomposition<R::E> {
    let (rows, cols) = m.shape();
    let mut w = Work {
        ring,
        a: m.clone(),
        left: Matrix::identity(ring, rows),
        left_inv: Matrix::identity(ring, rows),
        right: Matrix::identity(ring, cols),
        right_inv: Matrix::identity(ring, cols),
    };
    let mut diagonal = Vec::new();
    for t in 0..rows.min(cols) {
        if !pivot_to(&mut w, t) {
            break;
        }
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if ring.is_zero(w.a.get(i, t)) {
                    continue;
                }
                let (q, r) = ring.div_rem(w.a.get(i, t), w.a.get(t, t));
                w.add_row(i, t, &ring.neg(&q));
                dirty |= !ring.is_zero(&r);
            }
            for j in t + 1..cols {
                if ring.is_zero(w.a.get(t, j)) {
                    continue;
                }
                let (q, r) = ring.div_rem(w.a.get(t, j), w.a.get(t, t));
                w.add_col(j, t, &ring.neg(&q));
                dirty |= !ring.is_zero(&r);
            }
            if dirty {
                pivot_to(&mut w, t);
                continue;
            }
            // divisibility of the remaining block
            let piv = w.a.get(t, t).clone();
            let bad = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| ring.divide(w.a.get(i, j), &piv).is_none());
            match bad {
                Some((i, _)) => {
                    w.add_row(t, i, &ring.one());
                }
                None => break,
            }
        }
        let u = ring.normal_unit(w.a.get(t, t));
        w.scale_row(t, &u);
        diagonal.push(w.a.get(t, t).clone());
    }
    SmithDecomposition {
        left: w.left,
        diagonal,
        right: w.right,
        left_inv: w.left_inv,
        right_inv: w.right_inv,
    }
}

/// Moves the minimal-size entry of the trailing block to `(t, t)`.
fn pivot_to<R: Euclid>(w: &mut Work<'_, R>, t: usize) -> bool {
    let (rows, cols) = w.a.shape();
    let mut best: Option<((usize, usize), usize, usize)> = None;
    for i in t..rows {
        for j in t..cols {
            let e = w.a.get(i, j);
            if w.ring.is_zero(e) {
                continue;
            }
            let s = (w.ring.size(e), w.ring.weight(e));
            if best.is_none_or(|(bs, _, _)| s < bs) {
                best = Some((s, i, j));
            }
        }
    }
    match best {
        Some((_, i, j)) => {
            w.swap_rows(t, i);
            w.swap_cols(t, j);
            true
        }
        None => false,
    }
}

/// Some `X` with `A X = B`.
pub fn solve<R: Euclid>(ring: &R, a: &Matrix<R::E>, b: &Matrix<R::E>) -> Option<Matrix<R::E>> {
    assert_eq!(a.rows(), b.rows(), "solve shape");
    let s = smith(ring, a);
    let lb = s.left.mul(ring, b);
    let n = a.cols();
    let mut y = Matrix::zeros(ring, n, b.cols());
    for i in 0..lb.rows() {
        for j in 0..b.cols() {
            let v = lb.get(i, j);
            if i < s.rank() {
                y.set(i, j, ring.divide(v, &s.diagonal[i])?);
            } else if !ring.is_zero(v) {
                return None;
            }
        }
    }
    Some(s.right.mul(ring, &y))
}

/// Basis of the right kernel as the columns of a matrix.
pub fn kernel<R: Euclid>(ring: &R, a: &Matrix<R::E>) -> Matrix<R::E> {
    let s = smith(ring, a);
    let idx: Vec<usize> = (s.rank()..a.cols()).collect();
    s.right.select_cols(&idx)
}

pub fn rank<R: Euclid>(ring: &R, a: &Matrix<R::E>) -> usize {
    smith(ring, a).rank()
}

/// Two-sided inverse of a square matrix, if it exists over the ring.
pub fn inverse<R: Euclid>(ring: &R, a: &Matrix<R::E>) -> Option<Matrix<R::E>> {
    if a.rows() != a.cols() {
        return None;
    }
    let s = smith(ring, a);
    if s.rank() != a.rows() || !s.diagonal.iter().all(|d| ring.is_unit(d)) {
        return None;
    }
    let dinv: Vec<R::E> = s.diagonal.iter().map(|d| ring.unit_inverse(d)).collect();
    let n = a.rows();
    let x = s.right.mul(ring, &Matrix::diagonal(ring, n, n, &dinv)).mul(ring, &s.left);
    debug_assert!(x.mul(ring, a).is_identity(ring));
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::rational::q;

    #[test]
    fn field_diagonal_is_ones() {
        let m = Matrix::from_rows(vec![vec![q(2), q(0)], vec![q(0), q(3)]], 2);
        let s = smith(&QField, &m);
        assert_eq!(s.diagonal, vec![q(1), q(1)]);
        let d = s.left.mul(&QField, &m).mul(&QField, &s.right);
        assert!(d.is_identity(&QField));
        assert!(s.left.mul(&QField, &s.left_inv).is_identity(&QField));
        assert!(s.right_inv.mul(&QField, &s.right).is_identity(&QField));
    }
}

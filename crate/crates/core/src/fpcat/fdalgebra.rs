//! Finite-dimensional commutative algebras given by structure constants.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::kernel::matrix::{permutation_matrix, qlin, Matrix, QField};
use crate::kernel::poly::Poly;
use crate::kernel::rational::Rational;

/// `mult` is the `n x n^2` matrix of `m: A (x) A -> A`; column `i*n + j` holds
/// the coordinates of `b_i b_j`. `unit` holds the coordinates of `1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FdAlgebra {
    dim: usize,
    mult: Matrix<Rational>,
    unit: Vec<Rational>,
}

/// Which monoid diagram failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AxiomCheck {
    Associativity,
    Commutativity,
    LeftUnit,
    RightUnit,
}

impl AxiomCheck {
    pub fn name(self) -> &'static str {
        match self {
            AxiomCheck::Associativity => "associativity",
            AxiomCheck::Commutativity => "commutativity",
            AxiomCheck::LeftUnit => "left unit",
            AxiomCheck::RightUnit => "right unit",
        }
    }
}

/// Outcome of the four exact diagram checks.
pub fn diagram_checks(mult: &Matrix<Rational>, unit: &[Rational]) -> Vec<(AxiomCheck, bool)> {
    let n = unit.len();
    let r = &QField;
    let id = Matrix::identity(r, n);
    let e = Matrix::column_vector(unit.to_vec());
    let assoc_l = mult.mul(r, &mult.kronecker(r, &id));
    let assoc_r = mult.mul(r, &id.kronecker(r, mult));
    let perm: Vec<usize> = (0..n * n).map(|k| (k % n) * n + k / n).collect();
    let braid = permutation_matrix(r, &perm);
    vec![
        (AxiomCheck::Associativity, assoc_l == assoc_r),
        (AxiomCheck::Commutativity, mult.mul(r, &braid) == *mult),
        (AxiomCheck::LeftUnit, mult.mul(r, &e.kronecker(r, &id)) == id),
        (AxiomCheck::RightUnit, mult.mul(r, &id.kronecker(r, &e)) == id),
    ]
}

impl FdAlgebra {
    /// Validates the commutative monoid axioms exactly.
    pub fn new(mult: Matrix<Rational>, unit: Vec<Rational>) -> Result<Self> {
        let n = unit.len();
        if mult.shape() != (n, n * n) {
            return Err(Error::ShapeMismatch(format!(
                "multiplication of a {n}-dimensional algebra must be {n}x{}, got {}x{}",
                n * n,
                mult.rows(),
                mult.cols()
            )));
        }
        for (check, ok) in diagram_checks(&mult, &unit) {
            if !ok {
                return Err(Error::AxiomFailure(check.name().to_string()));
            }
        }
        Ok(FdAlgebra { dim: n, mult, unit })
    }

    fn new_unchecked(mult: Matrix<Rational>, unit: Vec<Rational>) -> Self {
        debug_assert!(diagram_checks(&mult, &unit).iter().all(|c| c.1));
        FdAlgebra { dim: unit.len(), mult, unit }
    }

    /// `Q[x]/(f)` in the basis `1, x, ..., x^{n-1}`.
    pub fn from_quotient(f: &Poly) -> Self {
        let f = f.monic();
        let n = f.deg();
        let mut mult = Matrix::zeros(&QField, n, n * n);
        for i in 0..n {
            for j in 0..n {
                let prod = Poly::monomial(Rational::one(), i + j).rem(&f);
                for k in 0..n {
                    mult.set(k, i * n + j, prod.coeff(k));
                }
            }
        }
        let mut unit = vec![Rational::zero(); n];
        if n > 0 {
            unit[0] = Rational::one();
        }
        Self::new_unchecked(mult, unit)
    }

    pub fn rationals() -> Self {
        Self::new_unchecked(Matrix::from_vec(1, 1, vec![Rational::one()]), vec![Rational::one()])
    }

    pub fn zero() -> Self {
        Self::new_unchecked(Matrix::from_vec(0, 0, vec![]), vec![])
    }

    /// Direct product with concatenated bases.
    pub fn product(parts: &[FdAlgebra]) -> Self {
        let n: usize = parts.iter().map(|p| p.dim).sum();
        let mut mult = Matrix::zeros(&QField, n, n * n);
        let mut unit = Vec::with_capacity(n);
        let mut off = 0;
        for p in parts {
            for i in 0..p.dim {
                for j in 0..p.dim {
                    for k in 0..p.dim {
                        mult.set(off + k, (off + i) * n + off + j, p.mult.get(k, i * p.dim + j).clone());
                    }
                }
            }
            unit.extend(p.unit.iter().cloned());
            off += p.dim;
        }
        Self::new_unchecked(mult, unit)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mult_matrix(&self) -> &Matrix<Rational> {
        &self.mult
    }

    pub fn unit(&self) -> &[Rational] {
        &self.unit
    }

    pub fn basis(&self, i: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.dim];
        v[i] = Rational::one();
        v
    }

    pub fn zero_vec(&self) -> Vec<Rational> {
        vec![Rational::zero(); self.dim]
    }

    pub fn mul(&self, a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        let n = self.dim;
        let mut out = vec![Rational::zero(); n];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                let c = ai * bj;
                for (k, o) in out.iter_mut().enumerate() {
                    let s = self.mult.get(k, i * n + j);
                    if !s.is_zero() {
                        *o += &c * s;
                    }
                }
            }
        }
        out
    }

    /// Matrix of `b -> a b`.
    pub fn left_mult(&self, a: &[Rational]) -> Matrix<Rational> {
        let n = self.dim;
        let mut m = Matrix::zeros(&QField, n, n);
        for j in 0..n {
            let col = self.mul(a, &self.basis(j));
            for (i, c) in col.into_iter().enumerate() {
                m.set(i, j, c);
            }
        }
        m
    }

    pub fn pow(&self, a: &[Rational], k: usize) -> Vec<Rational> {
        let mut acc = self.unit.clone();
        for _ in 0..k {
            acc = self.mul(&acc, a);
        }
        acc
    }

    pub fn inverse(&self, a: &[Rational]) -> Option<Vec<Rational>> {
        let l = self.left_mult(a);
        let x = qlin::solve(&l, &Matrix::column_vector(self.unit.clone()))?;
        Some(x.col(0))
    }

    pub fn trace(&self, a: &[Rational]) -> Rational {
        let l = self.left_mult(a);
        (0..self.dim).map(|i| l.get(i, i).clone()).fold(Rational::zero(), |s, v| s + v)
    }

    /// Gram matrix of `(a, b) -> tr(L_{ab})` on the basis.
    pub fn trace_form(&self) -> Matrix<Rational> {
        let n = self.dim;
        let mut g = Matrix::zeros(&QField, n, n);
        for i in 0..n {
            for j in 0..n {
                let p = self.mul(&self.basis(i), &self.basis(j));
                g.set(i, j, self.trace(&p));
            }
        }
        g
    }

    /// Basis of the nilradical (the radical of the trace form in characteristic 0).
    pub fn nilradical(&self) -> Matrix<Rational> {
        qlin::nullspace(&self.trace_form())
    }

    pub fn is_reduced(&self) -> bool {
        self.nilradical().cols() == 0
    }

    pub fn is_nilpotent(&self, a: &[Rational]) -> bool {
        self.pow(a, self.dim.max(1)).iter().all(|c| c.is_zero())
    }

    /// Minimal polynomial of `a` over the rationals.
    pub fn minpoly(&self, a: &[Rational]) -> Poly {
        let n = self.dim;
        if n == 0 {
            return Poly::one();
        }
        let mut powers: Vec<Vec<Rational>> = vec![self.unit.clone()];
        loop {
            let k = powers.len();
            let next = self.mul(&powers[k - 1], a);
            let basis = Matrix::from_cols(powers.clone(), n);
            if let Some(c) = qlin::solve(&basis, &Matrix::column_vector(next.clone())) {
                let mut coeffs: Vec<Rational> = c.col(0).into_iter().map(|v| -v).collect();
                coeffs.push(Rational::one());
                return Poly::from_coeffs(coeffs);
            }
            powers.push(next);
        }
    }

    /// Evaluates a polynomial at an element.
    pub fn eval_poly(&self, p: &Poly, a: &[Rational]) -> Vec<Rational> {
        let mut acc = self.zero_vec();
        for c in p.coeffs().iter().rev() {
            acc = self.mul(&acc, a);
            for (x, u) in acc.iter_mut().zip(&self.unit) {
                *x += c * u;
            }
        }
        acc
    }

    /// A primitive element: one whose minimal polynomial has degree `dim`.
    /// Searches basis elements and then small integer combinations.
    pub fn primitive_element(&self) -> Option<(Vec<Rational>, Poly)> {
        let n = self.dim;
        if n == 0 {
            return None;
        }
        let mut candidates: Vec<Vec<Rational>> = (0..n).map(|i| self.basis(i)).collect();
        for t in 1..=6i64 {
            // sum_k t^k b_k: a moment-curve combination, primitive for all but finitely many t
            let v: Vec<Rational> = (0..n).map(|k| Rational::from_integer(t.pow(k as u32).into())).collect();
            candidates.push(v);
            let w: Vec<Rational> = (0..n).map(|k| Rational::from_integer(((k as i64) * t + 1).into())).collect();
            candidates.push(w);
        }
        candidates.into_iter().find_map(|c| {
            let m = self.minpoly(&c);
            (m.deg() == n).then_some((c, m))
        })
    }

    /// Fitting decomposition of multiplication by `s`: the idempotent `e` with
    /// `eA = Im(L_s^n)` on which `s` acts invertibly. Returns `(e, basis of eA)`.
    pub fn fitting(&self, s: &[Rational]) -> (Vec<Rational>, Matrix<Rational>) {
        let n = self.dim;
        let l = self.left_mult(s);
        let mut p = Matrix::identity(&QField, n);
        for _ in 0..n {
            p = p.mul(&QField, &l);
        }
        let image = qlin::column_basis(&p);
        let kernel = qlin::nullspace(&p);
        // 1 = e + (1 - e) with e in the image and 1 - e in the kernel
        let both = image.hcat(&kernel);
        let coords = qlin::solve(&both, &Matrix::column_vector(self.unit.clone()))
            .expect("Fitting decomposition spans")
            .col(0);
        let k = image.cols();
        let mut e = self.zero_vec();
        for (j, c) in coords.iter().take(k).enumerate() {
            for (i, v) in e.iter_mut().enumerate() {
                *v += c * image.get(i, j);
            }
        }
        (e, image)
    }

    /// Algebra structure on the ideal spanned by `basis` with unit `e`, and the
    /// coordinate change. Requires the ideal to be a unital subalgebra.
    pub fn corner(&self, e: &[Rational], basis: &Matrix<Rational>) -> FdAlgebra {
        let k = basis.cols();
        let mut mult = Matrix::zeros(&QField, k, k * k);
        for i in 0..k {
            for j in 0..k {
                let p = self.mul(&basis.col(i), &basis.col(j));
                let c = qlin::solve(basis, &Matrix::column_vector(p)).expect("ideal closed").col(0);
                for (r, v) in c.into_iter().enumerate() {
                    mult.set(r, i * k + j, v);
                }
            }
        }
        let unit = if k == 0 {
            vec![]
        } else {
            qlin::solve(basis, &Matrix::column_vector(e.to_vec())).expect("unit in ideal").col(0)
        };
        FdAlgebra::new_unchecked(mult, unit)
    }

    /// Coordinates of `v` in the columns of `basis`.
    pub fn coordinates(basis: &Matrix<Rational>, v: &[Rational]) -> Option<Vec<Rational>> {
        Some(qlin::solve(basis, &Matrix::column_vector(v.to_vec()))?.col(0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::rational::q;

    #[test]
    fn quotient_algebra() {
        let a = FdAlgebra::from_quotient(&Poly::from_ints(&[0, 0, 1]));
        assert_eq!(a.dim(), 2);
        assert!(FdAlgebra::new(a.mult_matrix().clone(), a.unit().to_vec()).is_ok());
        let x = a.basis(1);
        assert!(a.is_nilpotent(&x));
        assert!(!a.is_reduced());
        assert_eq!(a.minpoly(&x), Poly::from_ints(&[0, 0, 1]));
    }

    #[test]
    fn rejects_non_unital() {
        // multiplication of Q^1 sending 1*1 to 2 with unit 1
        let m = Matrix::from_vec(1, 1, vec![q(2)]);
        assert_eq!(
            FdAlgebra::new(m, vec![q(1)]),
            Err(Error::AxiomFailure("left unit".into()))
        );
    }

    #[test]
    fn fitting_of_two_idempotents() {
        // Q[x]/(x^2 - x), localizing at x keeps the factor where x = 1
        let a = FdAlgebra::from_quotient(&Poly::from_ints(&[0, -1, 1]));
        let (e, basis) = a.fitting(&a.basis(1));
        assert_eq!(basis.cols(), 1);
        assert_eq!(e, vec![q(0), q(1)]);
        let c = a.corner(&e, &basis);
        assert_eq!(c.dim(), 1);
    }
}

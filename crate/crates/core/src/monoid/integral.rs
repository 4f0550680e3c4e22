//! Ring-class decisions for integrality and reducedness of endomorphism rings.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::fpcat::{Elem, ExplicitRing, FdAlgebra};
use crate::kernel::factor::{factor, DEFAULT_DEGREE_BOUND};
use crate::kernel::matrix::{qlin, Ring};
use crate::kernel::rational::Rational;

/// Outcome of the domain test.
#[derive(Clone, Debug, PartialEq)]
pub enum DomainCheck {
    Domain,
    /// Nonzero `a`, `b` with `a b = 0`.
    ZeroDivisors(Elem, Elem),
    /// The zero ring is not a domain.
    ZeroRing,
}

impl DomainCheck {
    pub fn is_domain(&self) -> bool {
        matches!(self, DomainCheck::Domain)
    }
}

/// Decides whether `ring` is an integral domain, with a witness when it is not.
pub fn domain_check(ring: &ExplicitRing, bound: usize) -> Result<DomainCheck> {
    if ring.is_zero_ring() {
        return Ok(DomainCheck::ZeroRing);
    }
    match ring {
        ExplicitRing::Rationals
        | ExplicitRing::Poly { .. }
        | ExplicitRing::Localized { .. }
        | ExplicitRing::Fraction { .. } => Ok(DomainCheck::Domain),
        ExplicitRing::Quotient { modulus, .. } => {
            let f = factor(modulus, bound.max(DEFAULT_DEGREE_BOUND))?;
            if f.is_irreducible() {
                return Ok(DomainCheck::Domain);
            }
            let g = f.factors[0].0.clone();
            let h = modulus.exact_div(&g).expect("factor divides");
            Ok(DomainCheck::ZeroDivisors(Elem::P(g), Elem::P(h)))
        }
        ExplicitRing::FiniteDim(a) => fd_domain_check(ring, a, bound),
        ExplicitRing::Product(_) => {
            // at least two nonzero factors
            let one = |i: usize| match ring {
                ExplicitRing::Product(f) => ring.embed(i, &f[i].one()),
                _ => unreachable!(),
            };
            Ok(DomainCheck::ZeroDivisors(one(0), one(1)))
        }
    }
}

fn nilpotent_pair(a: &FdAlgebra, v: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut prev = v.to_vec();
    loop {
        let next = a.mul(&prev, v);
        if next.iter().all(|c| c.is_zero()) {
            return (v.to_vec(), prev);
        }
        prev = next;
    }
}

fn fd_domain_check(ring: &ExplicitRing, a: &FdAlgebra, bound: usize) -> Result<DomainCheck> {
    let nil = a.nilradical();
    if nil.cols() > 0 {
        let (x, y) = nilpotent_pair(a, &nil.col(0));
        return Ok(DomainCheck::ZeroDivisors(ring.from_coords(&x), ring.from_coords(&y)));
    }
    // reduced: a product of fields, cyclic over a primitive element
    if let Some((p, m)) = a.primitive_element() {
        let f = factor(&m, bound.max(a.dim()))?;
        if f.is_irreducible() {
            return Ok(DomainCheck::Domain);
        }
        let g = f.factors[0].0.clone();
        let h = m.exact_div(&g).expect("factor divides");
        return Ok(DomainCheck::ZeroDivisors(
            ring.from_coords(&a.eval_poly(&g, &p)),
            ring.from_coords(&a.eval_poly(&h, &p)),
        ));
    }
    // fall back to a singular multiplication among the basis elements
    for i in 0..a.dim() {
        let b = a.basis(i);
        let null = qlin::nullspace(&a.left_mult(&b));
        if null.cols() > 0 {
            return Ok(DomainCheck::ZeroDivisors(ring.from_coords(&b), ring.from_coords(&null.col(0))));
        }
    }
    Err(Error::Undecided { what: "zero divisors of a finite-dimensional algebra without a primitive element".into(), bound: a.dim() })
}

/// A nonzero nilpotent element, if any.
pub fn nilpotent_witness(ring: &ExplicitRing) -> Option<Elem> {
    match ring {
        ExplicitRing::Quotient { modulus, .. } => {
            let r = modulus.radical();
            (r.deg() < modulus.deg()).then(|| Elem::P(r))
        }
        ExplicitRing::FiniteDim(a) => {
            let nil = a.nilradical();
            (nil.cols() > 0).then(|| ring.from_coords(&nil.col(0)))
        }
        ExplicitRing::Product(f) => f.iter().enumerate().find_map(|(i, r)| nilpotent_witness(r).map(|e| ring.embed(i, &e))),
        _ => None,
    }
}

pub fn is_reduced(ring: &ExplicitRing) -> bool {
    nilpotent_witness(ring).is_none()
}

/// `a * b = 0` in the ring's notation.
pub fn describe_pair(ring: &ExplicitRing, a: &Elem, b: &Elem) -> String {
    format!("({}) * ({}) = 0", ring.display(a), ring.display(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::poly::Poly;

    fn quot(cs: &[i64]) -> ExplicitRing {
        ExplicitRing::quotient("x", &Poly::from_ints(cs), 12).unwrap()
    }

    #[test]
    fn quotient_classes() {
        assert!(domain_check(&quot(&[1, 0, 1]), 12).unwrap().is_domain());
        let r = quot(&[-1, 0, 1]);
        match domain_check(&r, 12).unwrap() {
            DomainCheck::ZeroDivisors(a, b) => {
                assert!(!r.is_zero(&a) && !r.is_zero(&b));
                assert!(r.is_zero(&r.mul(&a, &b)));
            }
            other => panic!("{other:?}"),
        }
        assert!(is_reduced(&r));
        assert!(!is_reduced(&quot(&[0, 0, 1])));
    }

    #[test]
    fn fd_classes() {
        let nil = ExplicitRing::finite_dim(FdAlgebra::from_quotient(&Poly::from_ints(&[0, 0, 1])));
        assert!(!domain_check(&nil, 12).unwrap().is_domain());
        let field = ExplicitRing::finite_dim(FdAlgebra::from_quotient(&Poly::from_ints(&[-2, 0, 1])));
        assert!(domain_check(&field, 12).unwrap().is_domain());
        let prod = ExplicitRing::finite_dim(FdAlgebra::product(&[FdAlgebra::rationals(), FdAlgebra::rationals()]));
        assert!(!domain_check(&prod, 12).unwrap().is_domain());
    }
}

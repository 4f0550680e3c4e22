//! Univariate rational functions over the rationals.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::poly::Poly;
use super::rational::Rational;

/// `num / den` with `gcd(num, den) = 1` and `den` monic. Zero is `0 / 1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        if num.is_zero() {
            return Some(Self::zero());
        }
        let g = Poly::gcd(&num, &den);
        let num = num.exact_div(&g).expect("gcd divides");
        let den = den.exact_div(&g).expect("gcd divides");
        let lc = den.lead();
        let inv = Rational::one() / &lc;
        Some(RatFunc { num: num.scale(&inv), den: den.scale(&inv) })
    }

    pub fn zero() -> Self {
        RatFunc { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        Self::from_poly(Poly::one())
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFunc { num: p, den: Poly::one() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.den.is_one() && self.num.is_constant()
    }

    pub fn inv(&self) -> Option<Self> {
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, k: usize) -> Self {
        RatFunc { num: self.num.pow(k), den: self.den.pow(k) }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RatFunc { num: self.num.scale(c), den: self.den.clone() }
    }

    /// Value at a rational point, `None` at a pole.
    pub fn eval(&self, at: &Rational) -> Option<Rational> {
        let d = self.den.eval(at);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(at) / d)
        }
    }

    /// Substitutes `inner` for the variable; `None` if a denominator vanishes.
    pub fn compose(&self, inner: &RatFunc) -> Option<RatFunc> {
        let n = eval_poly_at(&self.num, inner);
        let d = eval_poly_at(&self.den, inner);
        n.checked_div(&d)
    }

    /// The compositional inverse of `(a x + b) / (c x + d)` with `ad - bc != 0`;
    /// `None` for anything of higher degree.
    pub fn mobius_inverse(&self) -> Option<RatFunc> {
        if self.num.deg() > 1 || self.den.deg() > 1 {
            return None;
        }
        let (a, b) = (self.num.coeff(1), self.num.coeff(0));
        let (c, d) = (self.den.coeff(1), self.den.coeff(0));
        if (&a * &d - &b * &c).is_zero() {
            return None;
        }
        // y = (a x + b) / (c x + d)  gives  x = (d y - b) / (a - c y)
        RatFunc::new(Poly::from_coeffs(vec![-b, d]), Poly::from_coeffs(vec![a, -c]))
    }

    pub fn checked_div(&self, rhs: &RatFunc) -> Option<RatFunc> {
        Some(self * &rhs.inv()?)
    }

    pub fn display(&self, var: &str) -> String {
        if self.den.is_one() {
            return self.num.display(var);
        }
        let wrap = |p: &Poly| {
            let s = p.display(var);
            if p.coeffs().iter().filter(|c| !c.is_zero()).count() > 1 || s.contains('/') {
                format!("({s})")
            } else {
                s
            }
        };
        format!("{}/{}", wrap(&self.num), wrap(&self.den))
    }
}

/// Evaluates a polynomial at a rational function.
pub fn eval_poly_at(p: &Poly, at: &RatFunc) -> RatFunc {
    let mut acc = RatFunc::zero();
    for c in p.coeffs().iter().rev() {
        acc = &(&acc * at) + &RatFunc::constant(c.clone());
    }
    acc
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display("x"))
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.den == rhs.den {
            return RatFunc::new(&self.num + &rhs.num, self.den.clone()).unwrap();
        }
        RatFunc::new(&(&self.num * &rhs.den) + &(&rhs.num * &self.den), &self.den * &rhs.den).unwrap()
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero();
        }
        RatFunc::new(&self.num * &rhs.num, &self.den * &rhs.den).unwrap()
    }
}

impl Div for &RatFunc {
    type Output = RatFunc;
    /// Panics on division by zero; see [`RatFunc::checked_div`].
    fn div(self, rhs: &RatFunc) -> RatFunc {
        self.checked_div(rhs).expect("division by zero rational function")
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(cs: &[i64]) -> Poly {
        Poly::from_ints(cs)
    }

    #[test]
    fn normal_form() {
        // (2x^2 - 2) / (2x - 2) = x + 1
        let r = RatFunc::new(p(&[-2, 0, 2]), p(&[-2, 2])).unwrap();
        assert_eq!(r, RatFunc::from_poly(p(&[1, 1])));
        let r = RatFunc::new(p(&[1]), p(&[0, 3])).unwrap();
        assert!(r.den().is_monic());
        assert_eq!(r.display("y"), "(1/3)/y");
    }

    #[test]
    fn mobius() {
        let f = RatFunc::new(p(&[1, 1]), p(&[-1, 1])).unwrap();
        let g = f.mobius_inverse().unwrap();
        assert_eq!(f.compose(&g).unwrap(), RatFunc::from_poly(Poly::x()));
        assert!(RatFunc::from_poly(p(&[0, 0, 1])).mobius_inverse().is_none());
        assert!(RatFunc::constant(Rational::from_integer(2.into())).mobius_inverse().is_none());
    }

    #[test]
    fn field_ops() {
        let a = RatFunc::new(p(&[1, 1]), p(&[-1, 1])).unwrap();
        let b = a.inv().unwrap();
        assert_eq!(&a * &b, RatFunc::one());
        assert_eq!(&(&a - &a), &RatFunc::zero());
        // a(1/x) = (1 + x) / (1 - x)
        let inv_x = RatFunc::new(p(&[1]), p(&[0, 1])).unwrap();
        let c = a.compose(&inv_x).unwrap();
        assert_eq!(c, RatFunc::new(p(&[1, 1]), p(&[1, -1])).unwrap());
    }
}

mod common;

use common::*;
use mscheme::fpcat::{Elem, ExplicitRing};
use mscheme::kernel::{factor, smith, Matrix, Poly, RatFunc, Rational, Ring};
use num_traits::Zero;
use proptest::prelude::*;

fn arb_poly(max_deg: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(-4i64..=4, 0..=max_deg + 1).prop_map(|cs| Poly::from_ints(&cs))
}

fn arb_nonzero(max_deg: usize) -> impl Strategy<Value = Poly> {
    arb_poly(max_deg).prop_filter("nonzero", |p| !p.is_zero())
}

/// Determinant by cofactor expansion along the first row.
fn laplace(m: &[Vec<Poly>]) -> Poly {
    let n = m.len();
    if n == 0 {
        return Poly::one();
    }
    let mut acc = Poly::zero();
    for j in 0..n {
        let minor: Vec<Vec<Poly>> = m[1..].iter().map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, p)| p.clone()).collect()).collect();
        let term = &m[0][j] * &laplace(&minor);
        acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

fn horner(p: &Poly, t: &Rational) -> Rational {
    p.coeffs().iter().rev().fold(Rational::zero(), |acc, c| acc * t + c)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn smith_form_matches_determinant(rows in prop::collection::vec(prop::collection::vec(arb_poly(2), 3), 3)) {
        let ring = ExplicitRing::poly("x");
        let pv = ring.pid().unwrap();
        let m = Matrix::from_rows(rows.iter().map(|r| r.iter().cloned().map(Elem::P).collect()).collect(), 3);
        let s = smith(&pv, &m);
        let d = laplace(&rows);
        // left * m * right is diagonal with the invariant factors
        let prod = s.left.mul(&pv, &m).mul(&pv, &s.right);
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j && i < s.rank() { s.diagonal[i].clone() } else { ring.zero() };
                prop_assert_eq!(prod.get(i, j), &want);
            }
        }
        prop_assert!(s.left.mul(&pv, &s.left_inv).is_identity(&pv));
        prop_assert!(s.right.mul(&pv, &s.right_inv).is_identity(&pv));
        for w in s.diagonal.windows(2) {
            prop_assert!(w[0].as_p().divides(w[1].as_p()));
        }
        if d.is_zero() {
            prop_assert!(s.rank() < 3);
        } else {
            prop_assert_eq!(s.rank(), 3);
            let p = s.diagonal.iter().fold(Poly::one(), |acc, e| &acc * e.as_p());
            prop_assert_eq!(p.monic(), d.monic());
        }
    }

    #[test]
    fn gcd_and_bezout(a in arb_poly(5), b in arb_poly(5), c in arb_nonzero(3)) {
        let g = Poly::gcd(&a, &b);
        let (g2, u, v) = Poly::xgcd(&a, &b);
        prop_assert_eq!(&g, &g2);
        prop_assert_eq!(&(&(&u * &a) + &(&v * &b)), &g);
        if !g.is_zero() {
            prop_assert!(g.is_monic() && g.divides(&a) && g.divides(&b));
            prop_assert_eq!(Poly::gcd(&(&a * &c), &(&b * &c)), (&g * &c).monic());
        }
    }

    #[test]
    fn factors_multiply_back(p in arb_nonzero(6)) {
        let f = factor(&p, 12).unwrap();
        prop_assert_eq!(f.expand(), p.clone());
        for (g, e) in &f.factors {
            prop_assert!(g.is_monic() && *e >= 1 && g.deg() >= 1);
            prop_assert!(factor(g, 12).unwrap().is_irreducible());
            // no rational root of a nonlinear irreducible factor
            if g.deg() > 1 {
                for n in -6i64..=6 {
                    for d in 1i64..=4 {
                        prop_assert!(!horner(g, &Rational::new(n.into(), d.into())).is_zero());
                    }
                }
            }
        }
        for w in f.factors.windows(2) {
            prop_assert!(w[0].0 != w[1].0);
        }
    }

    #[test]
    fn rational_functions_evaluate_homomorphically(
        a in arb_poly(3), b in arb_nonzero(3), c in arb_poly(3), d in arb_nonzero(3), t in -20i64..20
    ) {
        let x = RatFunc::new(a, b).unwrap();
        let y = RatFunc::new(c, d).unwrap();
        let t = r(t);
        let at = |q: &RatFunc| {
            let den = horner(q.den(), &t);
            (!den.is_zero()).then(|| horner(q.num(), &t) / den)
        };
        if let (Some(xv), Some(yv)) = (at(&x), at(&y)) {
            if let Some(s) = at(&(&x + &y)) {
                prop_assert_eq!(s, &xv + &yv);
            }
            if let Some(p) = at(&(&x * &y)) {
                prop_assert_eq!(p, &xv * &yv);
            }
        }
        if !x.is_zero() {
            prop_assert_eq!(&x * &x.inv().unwrap(), RatFunc::one());
        }
        prop_assert!(x.den().is_monic());
        prop_assert!(Poly::gcd(x.num(), x.den()).is_one() || x.num().is_zero());
    }
}

#[test]
fn quotient_ring_arithmetic_matches_reduction() {
    let f = [1i64, 2, 0, 1];
    let ring = ExplicitRing::quotient("x", &poly(&f), 12).unwrap();
    let fq: Vec<Rational> = f.iter().map(|&c| r(c)).collect();
    let els: Vec<Vec<Rational>> = small_elements(3).step_by(4).collect();
    for a in &els {
        for b in &els {
            let prod = ring.mul(&ring.from_coords(a), &ring.from_coords(b));
            assert_eq!(ring.to_coords(&prod), mul_mod(a, b, &fq));
        }
    }
    assert!(ring.eq_elem(&ring.mul(&ring.one(), &ring.from_coords(&els[3])), &ring.from_coords(&els[3])));
}

//! Q-algebra homomorphisms between explicit rings, given on generators.

use num_traits::{One, Zero};

use super::ring::{Elem, ExplicitRing};
use crate::error::{Error, Result};
use crate::kernel::matrix::Ring;
use crate::kernel::poly::Poly;
use crate::kernel::rational::Rational;

/// A homomorphism fixed by the images of [`ExplicitRing::generators`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingHom {
    pub source: ExplicitRing,
    pub target: ExplicitRing,
    pub images: Vec<Elem>,
}

/// Evaluation into the corner `idem * target` (or all of `target`).
struct Corner<'a> {
    target: &'a ExplicitRing,
    idem: Option<&'a Elem>,
}

impl Corner<'_> {
    fn one(&self) -> Elem {
        self.idem.cloned().unwrap_or_else(|| self.target.one())
    }

    fn constant(&self, c: &Rational) -> Elem {
        let t = self.target;
        t.mul(&t.from_rational(c), &self.one())
    }

    fn eval_poly(&self, p: &Poly, at: &Elem) -> Elem {
        let t = self.target;
        let mut acc = t.zero();
        for c in p.coeffs().iter().rev() {
            acc = t.add(&t.mul(&acc, at), &self.constant(c));
        }
        acc
    }

    /// Inverse inside the corner.
    fn inverse(&self, d: &Elem) -> Option<Elem> {
        let t = self.target;
        match self.idem {
            None => t.inverse(d),
            Some(e) => {
                let shifted = t.add(&t.mul(e, d), &t.sub(&t.one(), e));
                Some(t.mul(&t.inverse(&shifted)?, e))
            }
        }
    }

    fn is_zero(&self, a: &Elem) -> bool {
        self.target.is_zero(a)
    }
}

impl RingHom {
    pub fn new(source: ExplicitRing, target: ExplicitRing, images: Vec<Elem>) -> Result<Self> {
        let h = RingHom { source, target, images };
        h.validate()?;
        Ok(h)
    }

    pub fn new_unchecked(source: ExplicitRing, target: ExplicitRing, images: Vec<Elem>) -> Self {
        RingHom { source, target, images }
    }

    pub fn identity(ring: &ExplicitRing) -> Self {
        RingHom { source: ring.clone(), target: ring.clone(), images: ring.generators() }
    }

    /// The structure map `Q -> ring`.
    pub fn from_rationals(ring: &ExplicitRing) -> Self {
        RingHom { source: ExplicitRing::Rationals, target: ring.clone(), images: vec![] }
    }

    /// Checks that the generator images satisfy the source's defining relations.
    pub fn validate(&self) -> Result<()> {
        let gens = self.source.generators();
        if gens.len() != self.images.len() {
            return Err(Error::NotWellDefined(format!(
                "{} generator images given for {} generators",
                self.images.len(),
                gens.len()
            )));
        }
        if let Some(bad) = self.images.iter().find(|e| !self.target.contains(e)) {
            return Err(Error::NotWellDefined(format!("image {bad:?} is not in {}", self.target)));
        }
        if self.target.is_zero_ring() {
            return Ok(());
        }
        validate_part(&self.source, &self.images, &Corner { target: &self.target, idem: None })
    }

    pub fn apply(&self, e: &Elem) -> Result<Elem> {
        apply_part(&self.source, &self.images, e, &Corner { target: &self.target, idem: None })
    }

    /// `other` after `self`.
    pub fn then(&self, other: &RingHom) -> Result<RingHom> {
        if self.target != other.source {
            return Err(Error::ShapeMismatch(format!(
                "cannot compose {} -> {} with {} -> {}",
                self.source, self.target, other.source, other.target
            )));
        }
        let images = self.images.iter().map(|e| other.apply(e)).collect::<Result<Vec<_>>>()?;
        Ok(RingHom { source: self.source.clone(), target: other.target.clone(), images })
    }

    /// Equality of homomorphisms, checked on generators.
    pub fn agrees_with(&self, other: &RingHom) -> bool {
        self.source == other.source
            && self.target == other.target
            && self.images.iter().zip(&other.images).all(|(a, b)| self.target.eq_elem(a, b))
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target && self.agrees_with(&RingHom::identity(&self.source))
    }

    /// Whether `self` and `inv` are mutually inverse on generators.
    pub fn is_inverse_pair(&self, inv: &RingHom) -> Result<bool> {
        Ok(self.then(inv)?.is_identity() && inv.then(self)?.is_identity())
    }

    pub fn describe(&self) -> String {
        let gens = self.source.generators();
        let parts: Vec<String> = gens
            .iter()
            .zip(&self.images)
            .map(|(g, i)| format!("{} -> {}", self.source.display(g), self.target.display(i)))
            .collect();
        format!("{} -> {}: {{{}}}", self.source, self.target, parts.join(", "))
    }
}

fn validate_part(source: &ExplicitRing, images: &[Elem], c: &Corner<'_>) -> Result<()> {
    let t = c.target;
    match source {
        ExplicitRing::Rationals | ExplicitRing::Poly { .. } => Ok(()),
        ExplicitRing::Quotient { modulus, var, .. } => {
            if c.is_zero(&c.eval_poly(modulus, &images[0])) {
                Ok(())
            } else {
                Err(Error::NotWellDefined(format!(
                    "{} does not vanish at {}",
                    modulus.display(var),
                    t.display(&images[0])
                )))
            }
        }
        ExplicitRing::Localized { denom, var } => match c.inverse(&c.eval_poly(denom, &images[0])) {
            Some(_) => Ok(()),
            None => Err(Error::NotInvertibleDenominator(denom.display(var))),
        },
        ExplicitRing::Fraction { var } => {
            let probe = match c.idem {
                None => t.clone(),
                Some(_) => return Err(Error::UnsupportedRing("fraction field as a product factor".into())),
            };
            match nonunit_poly(&probe, &images[0])? {
                None => Ok(()),
                Some(s) => Err(Error::NotInvertibleDenominator(s.display(var))),
            }
        }
        ExplicitRing::FiniteDim(a) => {
            let n = a.dim();
            let one = (0..n).fold(t.zero(), |acc, i| {
                t.add(&acc, &t.mul(&t.from_rational(&a.unit()[i]), &images[i]))
            });
            if !t.eq_elem(&one, &c.one()) {
                return Err(Error::NotWellDefined("unit is not preserved".into()));
            }
            for i in 0..n {
                for j in i..n {
                    let prod = Elem::V(a.mul(&a.basis(i), &a.basis(j)));
                    let lhs = apply_part(source, images, &prod, c)?;
                    let rhs = t.mul(&images[i], &images[j]);
                    if !t.eq_elem(&lhs, &rhs) {
                        return Err(Error::NotWellDefined(format!("not multiplicative on basis pair ({i}, {j})")));
                    }
                }
            }
            Ok(())
        }
        ExplicitRing::Product(factors) => {
            let mut off = 0;
            let mut idems = Vec::new();
            for f in factors {
                let k = f.generators().len();
                let e = &images[off];
                let sub = Corner { target: t, idem: Some(e) };
                if !t.eq_elem(&t.mul(e, e), e) {
                    return Err(Error::NotWellDefined("idempotent image is not idempotent".into()));
                }
                if images[off + 1..off + 1 + k].iter().any(|g| !t.eq_elem(&t.mul(g, e), g)) {
                    return Err(Error::NotWellDefined("factor generator escapes its corner".into()));
                }
                validate_part(f, &images[off + 1..off + 1 + k], &sub)?;
                idems.push(e.clone());
                off += 1 + k;
            }
            let sum = idems.iter().fold(t.zero(), |acc, e| t.add(&acc, e));
            if !t.eq_elem(&sum, &c.one()) {
                return Err(Error::NotWellDefined("idempotent images do not sum to 1".into()));
            }
            for i in 0..idems.len() {
                for j in i + 1..idems.len() {
                    if !t.is_zero(&t.mul(&idems[i], &idems[j])) {
                        return Err(Error::NotWellDefined("idempotent images are not orthogonal".into()));
                    }
                }
            }
            Ok(())
        }
    }
}

fn apply_part(source: &ExplicitRing, images: &[Elem], e: &Elem, c: &Corner<'_>) -> Result<Elem> {
    let t = c.target;
    match (source, e) {
        (ExplicitRing::Rationals, Elem::Q(q)) => Ok(c.constant(q)),
        (ExplicitRing::Poly { .. } | ExplicitRing::Quotient { .. }, Elem::P(p)) => Ok(c.eval_poly(p, &images[0])),
        (ExplicitRing::Localized { var, .. } | ExplicitRing::Fraction { var }, Elem::F(r)) => {
            let n = c.eval_poly(r.num(), &images[0]);
            let d = c.eval_poly(r.den(), &images[0]);
            let dinv = c.inverse(&d).ok_or_else(|| Error::NotInvertibleDenominator(r.den().display(var)))?;
            Ok(t.mul(&n, &dinv))
        }
        (ExplicitRing::FiniteDim(_), Elem::V(v)) => Ok(v.iter().zip(images).fold(t.zero(), |acc, (x, img)| {
            if x.is_zero() {
                acc
            } else {
                t.add(&acc, &t.mul(&t.from_rational(x), img))
            }
        })),
        (ExplicitRing::Product(factors), Elem::T(parts)) => {
            let mut off = 0;
            let mut acc = t.zero();
            for (f, x) in factors.iter().zip(parts) {
                let k = f.generators().len();
                let e = &images[off];
                let sub = Corner { target: t, idem: Some(e) };
                let v = apply_part(f, &images[off + 1..off + 1 + k], x, &sub)?;
                acc = t.add(&acc, &t.mul(e, &v));
                off += 1 + k;
            }
            Ok(acc)
        }
        _ => Err(Error::InvalidInput(format!("element {e:?} is not in {source}"))),
    }
}

/// A nonzero polynomial `s` with `s(b)` not a unit of `target`, or `None` if every
/// nonzero polynomial evaluates to a unit at `b`.
pub fn nonunit_poly(target: &ExplicitRing, b: &Elem) -> Result<Option<Poly>> {
    if target.is_zero_ring() {
        return Ok(None);
    }
    let linear = |c: Rational| Poly::from_coeffs(vec![-c, Rational::one()]);
    match target {
        ExplicitRing::Rationals => Ok(Some(linear(b.as_q().clone()))),
        ExplicitRing::Poly { .. } => {
            let p = b.as_p();
            if p.is_constant() {
                Ok(Some(linear(p.coeff(0))))
            } else {
                Ok(Some(Poly::x()))
            }
        }
        ExplicitRing::Fraction { .. } => {
            let r = b.as_f();
            Ok(r.is_constant().then(|| linear(r.num().coeff(0))))
        }
        ExplicitRing::Localized { .. } => {
            let r = b.as_f();
            if r.is_constant() {
                return Ok(Some(linear(r.num().coeff(0))));
            }
            for k in 0..200i64 {
                let c = Rational::from_integer(if k % 2 == 0 { (k / 2).into() } else { (-(k + 1) / 2).into() });
                let shifted = target.sub(b, &target.from_rational(&c));
                if !target.is_unit(&shifted) {
                    return Ok(Some(linear(c)));
                }
            }
            Err(Error::Undecided { what: "search for a non-invertible linear denominator".into(), bound: 200 })
        }
        ExplicitRing::Product(factors) if factors.iter().any(|f| !f.is_fd_able()) => {
            for (f, x) in factors.iter().zip(b.as_t()) {
                if let Some(s) = nonunit_poly(f, x)? {
                    return Ok(Some(s));
                }
            }
            Ok(None)
        }
        _ => Ok(Some(target.minpoly(b).expect("algebraic element"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::ratfunc::RatFunc;

    #[test]
    fn poly_to_fraction_square() {
        let src = ExplicitRing::poly("x");
        let tgt = ExplicitRing::fraction("y");
        let y2 = Elem::F(RatFunc::from_poly(Poly::from_ints(&[0, 0, 1])));
        let h = RingHom::new(src.clone(), tgt.clone(), vec![y2]).unwrap();
        let e = h.apply(&Elem::P(Poly::from_ints(&[1, 1]))).unwrap();
        assert_eq!(e, Elem::F(RatFunc::from_poly(Poly::from_ints(&[1, 0, 1]))));
        // Q(x) -> Q with x -> 1 is not well defined
        let bad = RingHom::new(ExplicitRing::fraction("x"), ExplicitRing::Rationals, vec![Elem::Q(Rational::one())]);
        assert_eq!(bad, Err(Error::NotInvertibleDenominator("x - 1".into())));
    }

    #[test]
    fn quotient_relation_checked() {
        let src = ExplicitRing::quotient("x", &Poly::from_ints(&[0, 0, 1]), 12).unwrap();
        assert!(RingHom::new(src.clone(), ExplicitRing::Rationals, vec![Elem::Q(Rational::one())]).is_err());
        assert!(RingHom::new(src, ExplicitRing::Rationals, vec![Elem::Q(Rational::zero())]).is_ok());
    }

    #[test]
    fn product_source() {
        // Q x Q -> Q x Q swapping factors
        let pr = ExplicitRing::Product(vec![ExplicitRing::Rationals, ExplicitRing::Rationals]);
        let e0 = pr.embed(0, &pr_one(&pr, 0));
        let e1 = pr.embed(1, &pr_one(&pr, 1));
        let swap = RingHom::new(pr.clone(), pr.clone(), vec![e1.clone(), e0.clone()]).unwrap();
        assert!(swap.then(&swap).unwrap().is_identity());
        let bad = RingHom::new(pr.clone(), pr.clone(), vec![e0.clone(), e0]);
        assert!(bad.is_err());
    }

    fn pr_one(pr: &ExplicitRing, i: usize) -> Elem {
        match pr {
            ExplicitRing::Product(f) => f[i].one(),
            _ => unreachable!(),
        }
    }
}

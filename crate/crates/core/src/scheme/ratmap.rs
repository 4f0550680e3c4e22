use super::ZariskiDiagram;
use crate::error::{Error, Result};
use crate::fpcat::localize::localize_ring;
use crate::fpcat::{Elem, ExplicitRing, RingHom};
use crate::fracfield::{invert, FractionFieldObject};
use crate::kernel::matrix::Ring;
use crate::kernel::poly::Poly;
use crate::monoid::{sample, MonoidObject};

/// A morphism from the basic open `V = D(denom)` of a chart of `source` to a
/// chart of `target`, given by `phi: A_U -> B[1/denom]`.
#[derive(Clone, Debug)]
pub struct RationalMap {
    pub source: ZariskiDiagram,
    pub source_chart: usize,
    pub denom: Elem,
    pub target: ZariskiDiagram,
    pub target_chart: usize,
    pub phi: RingHom,
}

fn univariate(r: &ExplicitRing) -> bool {
    matches!(r, ExplicitRing::Poly { .. } | ExplicitRing::Localized { .. } | ExplicitRing::Fraction { .. })
}

impl RationalMap {
    pub fn new(
        source: ZariskiDiagram,
        source_chart: usize,
        denom: Elem,
        target: ZariskiDiagram,
        target_chart: usize,
        phi: RingHom,
    ) -> Result<Self> {
        if source_chart >= source.charts().len() || target_chart >= target.charts().len() {
            return Err(Error::InvalidInput("chart index out of range".into()));
        }
        let b = source.chart(source_chart).ring();
        if !b.contains(&denom) {
            return Err(Error::InvalidInput(format!("{denom:?} is not in {}", source.chart(source_chart).name)));
        }
        let (bt, _) = localize_ring(b, &denom)?;
        if bt.is_zero_ring() {
            return Err(Error::InvalidInput(format!(
                "D({}) in {} is trivial",
                b.display(&denom),
                source.chart(source_chart).name
            )));
        }
        if phi.source != *target.chart(target_chart).ring() || phi.target != bt {
            return Err(Error::ShapeMismatch(format!("{} does not run {} -> {}", phi.describe(), target.chart(target_chart).ring(), bt)));
        }
        phi.validate()?;
        Ok(RationalMap { source, source_chart, denom, target, target_chart, phi })
    }

    /// `B[1/denom]`.
    pub fn open_ring(&self) -> &ExplicitRing {
        &self.phi.target
    }

    fn source_name(&self) -> &str {
        &self.source.chart(self.source_chart).name
    }

    /// Every non-trivial basic open of the target chart pulls back to a
    /// non-trivial open; the offending open otherwise.
    pub fn check_dominant(&self) -> Result<()> {
        let x = &self.target;
        let bp = self.open_ring();
        for e in x.edges().iter().filter(|e| e.from == self.target_chart) {
            if x.chart(e.to).is_trivial() {
                continue;
            }
            let a = x.chart(e.from).ring();
            let s = e.tags.iter().fold(a.one(), |acc, t| a.mul(&acc, t));
            if bp.is_nilpotent(&self.phi.apply(&s)?) {
                return Err(Error::NotDominant { open: x.chart(e.to).name.clone() });
            }
        }
        // a nonzero kernel m(x) gives the open D(m) with empty preimage
        let a = x.chart(self.target_chart).ring();
        if let (true, Some(var)) = (univariate(a), a.var()) {
            let img = self.phi.apply(&a.generators()[0])?;
            let algebraic = if univariate(bp) {
                bp.to_ratfunc(&img).is_some_and(|r| r.is_constant())
            } else {
                true
            };
            if algebraic {
                let m = match bp.to_ratfunc(&img) {
                    Some(r) if univariate(bp) || matches!(bp, ExplicitRing::Rationals) => {
                        Poly::from_coeffs(vec![-r.num().coeff(0), crate::kernel::rational::q(1)])
                    }
                    _ => bp.minpoly(&img).expect("algebraic image"),
                };
                return Err(Error::NotDominant {
                    open: format!("D({}) in {}", m.display(var), x.chart(self.target_chart).name),
                });
            }
        }
        Ok(())
    }

    pub fn is_dominant(&self) -> Result<bool> {
        match self.check_dominant() {
            Ok(()) => Ok(true),
            Err(Error::NotDominant { .. }) => Ok(false),
            Err(e) => Err(e),
        }
    }

    /// The same map on the smaller open `D(denom * u)`.
    pub fn restrict(&self, u: &Elem) -> Result<RationalMap> {
        let b = self.source.chart(self.source_chart).ring();
        let t = b.mul(&self.denom, u);
        let (_, canon) = localize_ring(b, &self.denom)?;
        let (smaller, step) = localize_ring(self.open_ring(), &canon.apply(u)?)?;
        let (direct, _) = localize_ring(b, &t)?;
        if smaller != direct {
            return Err(Error::NotWellDefined("iterated localization differs from the direct one".into()));
        }
        RationalMap::new(self.source.clone(), self.source_chart, t, self.target.clone(), self.target_chart, self.phi.then(&step)?)
    }

    /// The rational map of a morphism `g: K(X) -> K(Y)` on the base charts,
    /// defined where the images of the generators have no poles.
    pub fn from_k_morphism(x: &ZariskiDiagram, y: &ZariskiDiagram, g: &RingHom) -> Result<RationalMap> {
        let fx = x.function_field()?;
        let fy = y.function_field()?;
        let (a, b) = (fx.base, fy.base);
        for (d, c) in [(x, a), (y, b)] {
            if !d.chart(c).monoid.is_finite_type() {
                return Err(Error::NonFiniteType(d.chart(c).name.clone()));
            }
        }
        if g.source != *fx.ring() || g.target != *fy.ring() {
            return Err(Error::ShapeMismatch(format!("{} is not K(X) -> K(Y)", g.describe())));
        }
        let ar = x.chart(a).ring();
        let br = y.chart(b).ring();
        let ky = fy.ring();
        let values = ar
            .generators()
            .iter()
            .map(|gen| g.apply(&fx.field().to_field().apply(gen)?))
            .collect::<Result<Vec<_>>>()?;
        let t = match (br, univariate(br)) {
            (ExplicitRing::Localized { denom, .. }, _) => {
                let l = common_denominator(ky, &values);
                br.from_poly(&l.strip_factors_of(denom).0).expect("polynomial")
            }
            (_, true) => br.from_poly(&common_denominator(ky, &values)).expect("polynomial"),
            _ => br.one(),
        };
        let (bt, _) = localize_ring(br, &t)?;
        let images = values
            .iter()
            .map(|v| {
                if univariate(&bt) {
                    let r = ky.to_ratfunc(v).expect("fraction field element");
                    bt.from_ratfunc(&r).ok_or_else(|| Error::NotWellDefined(format!("{r} has a pole on D(t)")))
                } else {
                    Ok(v.clone())
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let phi = RingHom::new(ar.clone(), bt, images)?;
        let m = RationalMap::new(y.clone(), b, t, x.clone(), a, phi)?;
        m.check_dominant()?;
        Ok(m)
    }

    /// `K(X) = K(A_U) -> K(B[1/t]) = K(B) = K(Y)`.
    pub fn to_k_morphism(&self) -> Result<RingHom> {
        self.check_dominant()?;
        let fx = self.target.function_field()?;
        let fy = self.source.function_field()?;
        let a = self.target.chart(self.target_chart);
        let bt = self.open_ring();
        for s in sample::nonzero_samples(a.ring(), 2, 4, sample::DEFAULT_SEED) {
            if bt.is_zero(&self.phi.apply(&s)?) {
                return Err(Error::NotDominant { open: format!("D({}) in {}", a.ring().display(&s), a.name) });
            }
        }
        let ka = fx.charts[self.target_chart]
            .as_ref()
            .ok_or_else(|| Error::InvalidInput(format!("{} is trivial", a.name)))?;
        let kbt = FractionFieldObject::new(&MonoidObject::from_ring(bt.clone())?)?;
        let u = ka.universal_factor(&self.phi.then(kbt.to_field())?)?;
        let kb = fy.charts[self.source_chart]
            .as_ref()
            .ok_or_else(|| Error::InvalidInput(format!("{} is trivial", self.source_name())))?;
        let (_, canon) = localize_ring(self.source.chart(self.source_chart).ring(), &self.denom)?;
        let w = kb.universal_factor(&canon.then(kbt.to_field())?)?;
        let w_inv = invert(&w)?;
        fx.chart_iso(self.target_chart)?.1.then(&u)?.then(&w_inv)?.then(&fy.chart_iso(self.source_chart)?.0)
    }

    /// Agreement after co-restriction to the overlap of both sources,
    /// localized at both denominators. Both maps must share the target chart.
    pub fn agrees_with(&self, other: &RationalMap) -> Result<bool> {
        if self.target_chart != other.target_chart || self.phi.source != other.phi.source {
            return Err(Error::InvalidInput("comparison needs a common target chart".into()));
        }
        let (c, m1, m2) = self
            .source
            .common_localization((self.source_chart, &self.denom), (other.source_chart, &other.denom))?;
        if c.is_zero_ring() {
            return Ok(false);
        }
        for g in self.phi.source.generators() {
            if !c.eq_elem(&m1.apply(&self.phi.apply(&g)?)?, &m2.apply(&other.phi.apply(&g)?)?) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Least common multiple of the denominators of elements of a fraction field.
fn common_denominator(k: &ExplicitRing, values: &[Elem]) -> Poly {
    values
        .iter()
        .filter_map(|v| k.to_ratfunc(v))
        .fold(Poly::from_ints(&[1]), |acc, r| Poly::lcm(&acc, r.den()))
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;
    use crate::kernel::ratfunc::RatFunc;

    fn fx(n: &[i64], d: &[i64]) -> Elem {
        Elem::F(RatFunc::new(Poly::from_ints(n), Poly::from_ints(d)).unwrap())
    }

    #[test]
    fn k_round_trips() {
        let x = affine_line("x").unwrap();
        let y = affine_line("y").unwrap();
        let (kx, ky) = (ExplicitRing::fraction("x"), ExplicitRing::fraction("y"));
        for img in [fx(&[0, 0, 1], &[1]), fx(&[1], &[0, 1]), fx(&[1, 1], &[-1, 1]), fx(&[0, 1], &[1])] {
            let g = RingHom::new(kx.clone(), ky.clone(), vec![img]).unwrap();
            let m = RationalMap::from_k_morphism(&x, &y, &g).unwrap();
            assert!(m.to_k_morphism().unwrap().agrees_with(&g));
        }
        let inv = RingHom::new(kx, ky, vec![fx(&[1], &[0, 1])]).unwrap();
        let m = RationalMap::from_k_morphism(&x, &y, &inv).unwrap();
        assert_eq!(m.denom, Elem::P(Poly::x()));
    }

    #[test]
    fn map_round_trips() {
        for m in dominant_maps().unwrap() {
            assert!(m.is_dominant().unwrap());
            let back = RationalMap::from_k_morphism(&m.target, &m.source, &m.to_k_morphism().unwrap()).unwrap();
            assert!(back.agrees_with(&m).unwrap());
        }
    }

    #[test]
    fn non_dominant_open() {
        let m = non_dominant().unwrap();
        assert_eq!(m.check_dominant(), Err(Error::NotDominant { open: "X01".into() }));
        let lx = affine_line("x").unwrap();
        let pt = ZariskiDiagram::affine("pt", ExplicitRing::Rationals).unwrap();
        let phi = RingHom::new(ExplicitRing::poly("x"), ExplicitRing::Rationals, vec![Elem::Q(crate::kernel::rational::q(0))]);
        let m = RationalMap::new(pt, 0, Elem::Q(crate::kernel::rational::q(1)), lx, 0, phi.unwrap()).unwrap();
        assert_eq!(m.check_dominant(), Err(Error::NotDominant { open: "D(x) in A1_x".into() }));
    }

    #[test]
    fn restriction_keeps_dominance() {
        let m = &dominant_maps().unwrap()[1];
        let r = m.restrict(&Elem::P(Poly::from_ints(&[1, 1]))).unwrap();
        assert!(r.is_dominant().unwrap());
        assert!(r.agrees_with(m).unwrap());
    }
}

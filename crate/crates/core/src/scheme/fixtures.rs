//! Standard diagrams and rational maps used by tests and the example files.

use super::{ImmersionEdge, RationalMap, ZariskiDiagram};
use crate::error::Result;
use crate::fpcat::localize::localize_ring;
use crate::fpcat::{Elem, ExplicitRing, RingHom};
use crate::kernel::poly::Poly;
use crate::kernel::ratfunc::RatFunc;
use crate::kernel::rational::q;
use crate::monoid::MonoidObject;

fn px(cs: &[i64]) -> Elem {
    Elem::P(Poly::from_ints(cs))
}

fn fx(n: &[i64], d: &[i64]) -> Elem {
    Elem::F(RatFunc::new(Poly::from_ints(n), Poly::from_ints(d)).expect("nonzero denominator"))
}

fn chart(name: &str, r: &ExplicitRing) -> Result<(String, MonoidObject)> {
    Ok((name.into(), MonoidObject::from_ring(r.clone())?))
}

/// The canonical edge `from -> from[1/tag]`, returning the open's ring.
fn basic_open(r: &ExplicitRing, from: usize, to: usize, tag: &[i64]) -> Result<(ExplicitRing, ImmersionEdge)> {
    let tag = r.from_poly(&Poly::from_ints(tag)).expect("polynomial tag");
    let (l, map) = localize_ring(r, &tag)?;
    Ok((l, ImmersionEdge { from, to, tags: vec![tag], map }))
}

/// Charts `Q[x]`, `Q[y]` glued along `Q[x]_x` by `y = 1/x`.
pub fn projective_line() -> Result<ZariskiDiagram> {
    let rx = ExplicitRing::poly("x");
    let ry = ExplicitRing::poly("y");
    let (rxy, e0) = basic_open(&rx, 0, 2, &[0, 1])?;
    let e1 = ImmersionEdge { from: 1, to: 2, tags: vec![px(&[0, 1])], map: RingHom::new(ry.clone(), rxy.clone(), vec![fx(&[1], &[0, 1])])? };
    ZariskiDiagram::new(
        vec![chart("X0", &rx)?, chart("X1", &ry)?, chart("X01", &rxy)?],
        vec![e0, e1],
        vec![((0, 1), 2)],
    )
}

/// Two affine lines meeting in `Spec(0)`.
pub fn two_component() -> Result<ZariskiDiagram> {
    let rx = ExplicitRing::poly("x");
    let ry = ExplicitRing::poly("y");
    let (z, e0) = basic_open(&rx, 0, 2, &[0])?;
    let (_, e1) = basic_open(&ry, 1, 2, &[0])?;
    ZariskiDiagram::new(vec![chart("A", &rx)?, chart("B", &ry)?, chart("Z", &z)?], vec![e0, e1], vec![((0, 1), 2)])
}

/// `Q[x]/(x^2 - 1)` with the two opens `D(x + 1)` and `D(x - 1)`.
pub fn two_idempotent() -> Result<ZariskiDiagram> {
    let a = ExplicitRing::quotient("x", &Poly::from_ints(&[-1, 0, 1]), 12)?;
    let (plus, e1) = basic_open(&a, 0, 1, &[1, 1])?;
    let (minus, e2) = basic_open(&a, 0, 2, &[-1, 1])?;
    let (z, e3) = basic_open(&a, 0, 3, &[-1, 0, 1])?;
    let (_, e4) = basic_open(&plus, 1, 3, &[-1, 1])?;
    let (_, e5) = basic_open(&minus, 2, 3, &[1, 1])?;
    ZariskiDiagram::new(
        vec![chart("A", &a)?, chart("U+", &plus)?, chart("U-", &minus)?, chart("Z", &z)?],
        vec![e1, e2, e3, e4, e5],
        vec![((1, 2), 3)],
    )
}

/// The single chart `Q[x]/(x^2)`.
pub fn nilpotent() -> Result<ZariskiDiagram> {
    ZariskiDiagram::affine("N", ExplicitRing::quotient("x", &Poly::from_ints(&[0, 0, 1]), 12)?)
}

/// `D(x)` and `D(x - 1)` in the affine line, meeting in `D(x(x - 1))`.
pub fn affine_two_chart() -> Result<ZariskiDiagram> {
    let u = ExplicitRing::localized("x", &Poly::x());
    let v = ExplicitRing::localized("x", &Poly::from_ints(&[-1, 1]));
    let (w, e0) = basic_open(&u, 0, 2, &[-1, 1])?;
    let (_, e1) = basic_open(&v, 1, 2, &[0, 1])?;
    ZariskiDiagram::new(vec![chart("U", &u)?, chart("V", &v)?, chart("W", &w)?], vec![e0, e1], vec![((0, 1), 2)])
}

pub fn affine_line(var: &str) -> Result<ZariskiDiagram> {
    ZariskiDiagram::affine(&format!("A1_{var}"), ExplicitRing::poly(var))
}

/// Dominant maps whose target chart is the base chart of the target.
pub fn dominant_maps() -> Result<Vec<RationalMap>> {
    let lx = affine_line("x")?;
    let ly = affine_line("y")?;
    let p1 = projective_line()?;
    let rx = ExplicitRing::poly("x");
    let ry = ExplicitRing::poly("y");
    let ident = RationalMap::new(lx.clone(), 0, px(&[1]), lx.clone(), 0, RingHom::identity(&rx))?;
    let square = RationalMap::new(ly.clone(), 0, px(&[1]), p1, 0, RingHom::new(rx.clone(), ry.clone(), vec![px(&[0, 0, 1])])?)?;
    let (ry1, _) = localize_ring(&ry, &px(&[-1, 1]))?;
    let pole = RationalMap::new(ly.clone(), 0, px(&[-1, 1]), lx, 0, RingHom::new(rx, ry1, vec![fx(&[1], &[-1, 1])])?)?;
    Ok(vec![ident, square, pole])
}

/// `Q[x] -> Q`, `x -> 0`, from a point into the x-chart of the projective
/// line; the open `X01` pulls back to nothing.
pub fn non_dominant() -> Result<RationalMap> {
    let pt = ZariskiDiagram::affine("pt", ExplicitRing::Rationals)?;
    let rx = ExplicitRing::poly("x");
    let phi = RingHom::new(rx, ExplicitRing::Rationals, vec![Elem::Q(q(0))])?;
    RationalMap::new(pt, 0, Elem::Q(q(1)), projective_line()?, 0, phi)
}

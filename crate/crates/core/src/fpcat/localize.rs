//! Closed forms for single-element localizations of explicit rings.

use super::ring::{Elem, ExplicitRing};
use super::ringhom::RingHom;
use crate::error::{Error, Result};
use crate::kernel::factor::DEFAULT_DEGREE_BOUND;
use crate::kernel::matrix::Ring;
use crate::kernel::poly::Poly;
use crate::kernel::ratfunc::RatFunc;

/// `R[1/s]` together with the canonical map `R -> R[1/s]`.
pub fn localize_ring(ring: &ExplicitRing, s: &Elem) -> Result<(ExplicitRing, RingHom)> {
    if !ring.contains(s) {
        return Err(Error::InvalidInput(format!("{s:?} is not an element of {}", ring.describe())));
    }
    if ring.is_unit(s) {
        return Ok((ring.clone(), RingHom::identity(ring)));
    }
    if ring.is_nilpotent(s) {
        let z = ExplicitRing::zero_ring();
        let images = ring.generators().iter().map(|_| z.zero()).collect();
        return Ok((z.clone(), RingHom::new_unchecked(ring.clone(), z, images)));
    }
    let target = match ring {
        ExplicitRing::Rationals | ExplicitRing::Fraction { .. } => unreachable!("nonzero elements are units"),
        ExplicitRing::Poly { var } => ExplicitRing::localized(var, s.as_p()),
        ExplicitRing::Localized { var, denom } => {
            let core = s.as_f().num().strip_factors_of(denom).0;
            ExplicitRing::localized(var, &(denom * &core))
        }
        ExplicitRing::Quotient { var, modulus, .. } => {
            let (kept, _) = modulus.strip_factors_of(s.as_p());
            ExplicitRing::quotient(var, &kept, kept.deg().max(DEFAULT_DEGREE_BOUND))?
        }
        ExplicitRing::FiniteDim(a) => {
            let (e, basis) = a.fitting(&ring.to_coords(s));
            let corner = a.corner(&e, &basis);
            let t = ExplicitRing::finite_dim(corner);
            let images = (0..a.dim())
                .map(|i| {
                    let v = a.mul(&e, &a.basis(i));
                    let c = super::fdalgebra::FdAlgebra::coordinates(&basis, &v).expect("corner element");
                    t.from_coords(&c)
                })
                .collect();
            return Ok((t.clone(), RingHom::new(ring.clone(), t, images)?));
        }
        ExplicitRing::Product(factors) => {
            let parts = factors
                .iter()
                .zip(s.as_t())
                .map(|(f, x)| localize_ring(f, x))
                .collect::<Result<Vec<_>>>()?;
            return product_map(ring, parts);
        }
    };
    let images = canonical_images(ring, &target);
    Ok((target.clone(), RingHom::new(ring.clone(), target, images)?))
}

/// `x -> x` between rings in the same variable.
fn canonical_images(source: &ExplicitRing, target: &ExplicitRing) -> Vec<Elem> {
    match source {
        ExplicitRing::Poly { .. } | ExplicitRing::Localized { .. } | ExplicitRing::Quotient { .. } => {
            let x = RatFunc::from_poly(Poly::x());
            vec![target.from_ratfunc(&x).unwrap_or_else(|| target.zero())]
        }
        _ => vec![],
    }
}

/// Componentwise maps assembled into a map of products; zero factors vanish.
fn product_map(source: &ExplicitRing, parts: Vec<(ExplicitRing, RingHom)>) -> Result<(ExplicitRing, RingHom)> {
    let kept: Vec<usize> = (0..parts.len()).filter(|&i| !parts[i].0.is_zero_ring()).collect();
    let target = ExplicitRing::product(kept.iter().map(|&i| parts[i].0.clone()).collect());
    let place = |i: usize, e: &Elem| -> Elem {
        match kept.iter().position(|&k| k == i) {
            None => target.zero(),
            Some(_) if kept.len() == 1 => e.clone(),
            Some(slot) => target.embed(slot, e),
        }
    };
    let mut images = Vec::new();
    for (i, (t, h)) in parts.iter().enumerate() {
        images.push(place(i, &t.one()));
        for g in &h.images {
            images.push(place(i, g));
        }
    }
    Ok((target.clone(), RingHom::new(source.clone(), target, images)?))
}

/// `(R_s)_t` with the composite `R -> R_s -> (R_s)_t`.
pub fn localize_twice(ring: &ExplicitRing, s: &Elem, t: &Elem) -> Result<(ExplicitRing, RingHom)> {
    let (rs, h) = localize_ring(ring, s)?;
    let (rst, h2) = localize_ring(&rs, &h.apply(t)?)?;
    Ok((rst, h.then(&h2)?))
}

/// Generators of `R_s` written as `a / s^k` with `a` in `R`; aligned with
/// `localize_ring(ring, s).0.generators()`.
pub fn generator_lifts(ring: &ExplicitRing, s: &Elem) -> Result<Vec<(Elem, usize)>> {
    if ring.is_unit(s) {
        return Ok(ring.generators().into_iter().map(|g| (g, 0)).collect());
    }
    if ring.is_nilpotent(s) {
        return Ok(Vec::new());
    }
    match ring {
        ExplicitRing::FiniteDim(a) => {
            let (_, basis) = a.fitting(&ring.to_coords(s));
            Ok((0..basis.cols()).map(|j| (Elem::V(basis.col(j)), 0)).collect())
        }
        ExplicitRing::Product(factors) => {
            let mut out = Vec::new();
            for (i, (f, x)) in factors.iter().zip(s.as_t()).enumerate() {
                if localize_ring(f, x)?.0.is_zero_ring() {
                    continue;
                }
                // the factor idempotent, then the factor's own generators
                out.push((ring.embed(i, &f.one()), 0));
                for (g, k) in generator_lifts(f, x)? {
                    out.push((ring.embed(i, &g), k));
                }
            }
            if out.len() > 1 && factors.iter().zip(s.as_t()).filter(|(f, x)| !f.is_nilpotent(x)).count() == 1 {
                // a single surviving factor is not stored as a product
                out.remove(0);
            }
            Ok(out)
        }
        _ => Ok(ring.generators().into_iter().map(|g| (g, 0)).collect()),
    }
}

/// `phi_s: R_s -> T_{phi(s)}` induced by `phi: R -> T`.
pub fn induced_map(phi: &RingHom, s: &Elem) -> Result<RingHom> {
    let (rs, _) = localize_ring(&phi.source, s)?;
    let t_s = phi.apply(s)?;
    let (tt, canon_t) = localize_ring(&phi.target, &t_s)?;
    if tt.is_zero_ring() {
        let images = rs.generators().iter().map(|_| tt.zero()).collect();
        return Ok(RingHom::new_unchecked(rs, tt, images));
    }
    let s_img = canon_t.apply(&t_s)?;
    let s_inv = tt
        .inverse(&s_img)
        .ok_or_else(|| Error::NotInvertibleDenominator(phi.target.display(&t_s)))?;
    let mut images = Vec::new();
    for (a, k) in generator_lifts(&phi.source, s)? {
        let img = canon_t.apply(&phi.apply(&a)?)?;
        images.push(tt.mul(&img, &tt.pow(&s_inv, k)));
    }
    RingHom::new(rs, tt, images)
}

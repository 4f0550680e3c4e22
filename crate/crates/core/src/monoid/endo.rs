//! Endomorphism rings `E(A) = Hom_{A-Mod}(A, A)` and their recognition.

use num_traits::{One, Zero};

use super::{Carrier, MonoidObject};
use crate::error::{Error, Result};
use crate::fpcat::module::to_q;
use crate::fpcat::{Elem, EngineKind, ExplicitRing, FdAlgebra, Module, ModuleMorphism, RingHom};
use crate::kernel::matrix::{qlin, Matrix, QField, Ring};
use crate::kernel::poly::Poly;
use crate::kernel::rational::Rational;

/// `E(A)` as an explicit ring, with a certified isomorphism to the computed
/// endomorphism algebra and a translation to global sections.
#[derive(Clone, Debug)]
pub struct EndoRing {
    pub ring: ExplicitRing,
    /// Mutually inverse homomorphisms between `ring` and the computed model.
    pub witness: (RingHom, RingHom),
    model: SectionModel,
}

#[derive(Clone, Debug)]
enum SectionModel {
    /// A single point: `E(A) = A` by evaluation at the unit.
    Point,
    /// One product slot per component with a nonzero greatest element.
    Tops { comps: Vec<Vec<usize>>, slots: Vec<(usize, usize)>, rings: Vec<ExplicitRing>, restr: Vec<Vec<Option<RingHom>>> },
    /// A Q-basis of global sections; `to_alg` sends `ring` to the algebra coordinates.
    Basis { families: Vec<Vec<Elem>>, rings: Vec<ExplicitRing>, to_alg: RingHom, from_alg: RingHom },
}

/// Recognizes a finite-dimensional algebra as `Q`, as `Q[var]/(m)` through a
/// primitive element, or keeps it as is. Returns `(ring, alg -> ring, ring -> alg)`.
pub fn recognize_fd(alg: &FdAlgebra, var: &str) -> Result<(ExplicitRing, RingHom, RingHom)> {
    let source = ExplicitRing::finite_dim(alg.clone());
    let n = alg.dim();
    if n == 0 {
        let z = ExplicitRing::zero_ring();
        return Ok((z.clone(), RingHom::identity(&z), RingHom::identity(&z)));
    }
    if n == 1 {
        let u = alg.unit()[0].clone();
        let fwd = RingHom::new(source.clone(), ExplicitRing::Rationals, vec![Elem::Q(Rational::one() / u)])?;
        let back = RingHom::from_rationals(&source);
        return Ok((ExplicitRing::Rationals, fwd, back));
    }
    let Some((p, m)) = alg.primitive_element() else {
        return Ok((source.clone(), RingHom::identity(&source), RingHom::identity(&source)));
    };
    let target = ExplicitRing::quotient(var, &m, n.max(crate::kernel::factor::DEFAULT_DEGREE_BOUND))?;
    let powers: Vec<Vec<Rational>> = (0..n).map(|k| alg.pow(&p, k)).collect();
    let pinv = qlin::inverse(&Matrix::from_cols(powers, n)).expect("powers of a primitive element form a basis");
    let images = (0..n).map(|j| Elem::P(Poly::from_coeffs(pinv.col(j)))).collect();
    let fwd = RingHom::new(source.clone(), target.clone(), images)?;
    let back = RingHom::new(target.clone(), source, vec![Elem::V(p)])?;
    Ok((target, fwd, back))
}

/// Algebra-basis coordinates of the value at the unit.
fn value_at_one(f: &ModuleMorphism, ring: &ExplicitRing) -> Elem {
    let one = Matrix::column_vector(ring.to_coords(&ring.one()));
    ring.from_coords(&to_q(&f.matrix).mul(&QField, &one).col(0))
}

impl EndoRing {
    pub(super) fn compute(a: &MonoidObject) -> Result<Self> {
        match &a.carrier {
            Carrier::Algebra(r) if r.is_zero_ring() => Ok(EndoRing {
                ring: r.clone(),
                witness: (RingHom::identity(r), RingHom::identity(r)),
                model: SectionModel::Point,
            }),
            // without a module engine, fall back on Hom_A(A, A) = A by evaluation at 1
            Carrier::Algebra(r @ ExplicitRing::Product(_)) if r.engine().is_err() => Ok(EndoRing {
                ring: r.clone(),
                witness: (RingHom::identity(r), RingHom::identity(r)),
                model: SectionModel::Point,
            }),
            Carrier::Algebra(r) => match r.engine()? {
                EngineKind::Pid => {
                    let m = Module::free(r, 1)?;
                    let h = m.hom(&m)?;
                    let ok = h.basis.len() == 1
                        && r.is_zero(&h.orders[0])
                        && r.is_unit(h.basis[0].matrix.get(0, 0));
                    if !ok {
                        return Err(Error::NotWellDefined(format!("Hom(A, A) over {} is not free on one generator", r)));
                    }
                    Ok(EndoRing { ring: r.clone(), witness: (RingHom::identity(r), RingHom::identity(r)), model: SectionModel::Point })
                }
                EngineKind::FinDim => {
                    let m = Module::unit_object(r, EngineKind::FinDim)?;
                    let h = m.hom(&m)?;
                    let alg = h.endo_algebra()?;
                    let model_ring = ExplicitRing::finite_dim(alg);
                    // a -> multiplication by a, and evaluation at the unit back
                    let fwd_images = r
                        .generators()
                        .iter()
                        .map(|g| {
                            h.coordinates(&ModuleMorphism::multiplication(&m, g))
                                .map(Elem::V)
                                .ok_or_else(|| Error::NotWellDefined("multiplication outside Hom".into()))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    let fwd = RingHom::new(r.clone(), model_ring.clone(), fwd_images)?;
                    let back_images = h.basis.iter().map(|b| value_at_one(b, r)).collect();
                    let back = RingHom::new(model_ring, r.clone(), back_images)?;
                    if !fwd.is_inverse_pair(&back)? {
                        return Err(Error::NotWellDefined("evaluation at the unit is not inverse to multiplication".into()));
                    }
                    Ok(EndoRing { ring: r.clone(), witness: (fwd, back), model: SectionModel::Point })
                }
            },
            Carrier::Presheaf(p) => {
                let u = p.unit_module()?;
                let h = u.hom(&u)?;
                let rings = p.rings().to_vec();
                match p.engine() {
                    EngineKind::Pid => {
                        let poset = p.poset();
                        let comps = poset.components();
                        let mut slots = Vec::new();
                        for (ci, comp) in comps.iter().enumerate() {
                            let top = poset.top(comp).expect("Hom succeeded, so tops exist");
                            let gens: Vec<usize> = (0..h.basis.len()).filter(|&i| h.anchors[i] == Some(top)).collect();
                            if rings[top].is_zero_ring() {
                                continue;
                            }
                            let r = &rings[top];
                            let f = &h.basis[gens[0]].components[top];
                            if gens.len() != 1 || !r.is_zero(&h.orders[gens[0]]) || !r.is_unit(f.matrix.get(0, 0)) {
                                return Err(Error::NotWellDefined("global sections are not free on the unit".into()));
                            }
                            slots.push((ci, top));
                        }
                        let ring = ExplicitRing::product(slots.iter().map(|&(_, t)| rings[t].clone()).collect());
                        let n = rings.len();
                        let restr = (0..n)
                            .map(|t| (0..n).map(|q| poset.leq(q, t).then(|| p.restriction(t, q))).collect())
                            .collect();
                        Ok(EndoRing {
                            witness: (RingHom::identity(&ring), RingHom::identity(&ring)),
                            ring,
                            model: SectionModel::Tops { comps, slots, rings, restr },
                        })
                    }
                    EngineKind::FinDim => {
                        let alg = h.endo_algebra()?;
                        let var = rings.iter().find_map(|r| r.var().map(str::to_string)).unwrap_or_else(|| "t".into());
                        let (ring, fwd, back) = recognize_fd(&alg, &var)?;
                        if !ring.is_zero_ring() && !fwd.is_inverse_pair(&back)? {
                            return Err(Error::NotWellDefined("recognition of the section algebra failed".into()));
                        }
                        let families = h
                            .basis
                            .iter()
                            .map(|b| {
                                b.components
                                    .iter()
                                    .zip(&rings)
                                    .map(|(f, r)| if r.is_zero_ring() { r.zero() } else { value_at_one(f, r) })
                                    .collect()
                            })
                            .collect();
                        Ok(EndoRing {
                            ring,
                            model: SectionModel::Basis { families, rings, to_alg: back.clone(), from_alg: fwd.clone() },
                            witness: (fwd, back),
                        })
                    }
                }
            }
        }
    }

    /// The global section `(s_p)` of an element of `E(A)`.
    pub fn to_section(&self, e: &Elem) -> Result<Vec<Elem>> {
        if !self.ring.contains(e) {
            return Err(Error::InvalidInput(format!("{e:?} is not in E(A) = {}", self.ring)));
        }
        match &self.model {
            SectionModel::Point => Ok(vec![e.clone()]),
            SectionModel::Tops { comps, slots, rings, restr } => {
                let mut out: Vec<Elem> = rings.iter().map(|r| r.zero()).collect();
                for (k, &(ci, top)) in slots.iter().enumerate() {
                    let part = if slots.len() == 1 { e.clone() } else { e.as_t()[k].clone() };
                    for &q in &comps[ci] {
                        out[q] = restr[top][q].as_ref().expect("q below the top").apply(&part)?;
                    }
                }
                Ok(out)
            }
            SectionModel::Basis { families, rings, to_alg, .. } => {
                let mut out: Vec<Elem> = rings.iter().map(|r| r.zero()).collect();
                if self.ring.is_zero_ring() {
                    return Ok(out);
                }
                let c = to_alg.apply(e)?;
                for (f, x) in families.iter().zip(c.as_v()) {
                    if x.is_zero() {
                        continue;
                    }
                    for (p, r) in rings.iter().enumerate() {
                        out[p] = r.add(&out[p], &r.mul(&r.from_rational(x), &f[p]));
                    }
                }
                Ok(out)
            }
        }
    }

    /// The element of `E(A)` with the given global section, if it is one.
    pub fn from_section(&self, family: &[Elem]) -> Result<Option<Elem>> {
        let candidate = match &self.model {
            SectionModel::Point => family[0].clone(),
            SectionModel::Tops { slots, .. } => {
                if slots.len() == 1 {
                    family[slots[0].1].clone()
                } else {
                    Elem::T(slots.iter().map(|&(_, t)| family[t].clone()).collect())
                }
            }
            SectionModel::Basis { families, rings, from_alg, .. } => {
                if self.ring.is_zero_ring() {
                    return Ok(Some(self.ring.zero()));
                }
                let flat = |f: &[Elem]| -> Vec<Rational> {
                    f.iter().zip(rings).flat_map(|(x, r)| if r.is_zero_ring() { vec![] } else { r.to_coords(x) }).collect()
                };
                let target = flat(family);
                let cols: Vec<Vec<Rational>> = families.iter().map(|f| flat(f)).collect();
                let Some(c) = qlin::solve(&Matrix::from_cols(cols, target.len()), &Matrix::column_vector(target)) else {
                    return Ok(None);
                };
                from_alg.apply(&Elem::V(c.col(0)))?
            }
        };
        if !self.ring.contains(&candidate) {
            return Ok(None);
        }
        let back = self.to_section(&candidate)?;
        let rings = self.point_rings();
        let same = back.iter().zip(family).zip(&rings).all(|((a, b), r)| r.eq_elem(a, b));
        Ok(same.then_some(candidate))
    }

    fn point_rings(&self) -> Vec<ExplicitRing> {
        match &self.model {
            SectionModel::Point => vec![self.ring.clone()],
            SectionModel::Tops { rings, .. } | SectionModel::Basis { rings, .. } => rings.clone(),
        }
    }
}

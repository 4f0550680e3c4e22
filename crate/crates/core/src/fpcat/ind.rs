//! Chains `X_0 -> X_1 -> ... -> X_k -> X_k -> ...` ending in a repeated
//! endomorphism, their colimits, and stagewise element calculus.

use super::localize::localize_ring;
use super::module::{to_e, to_q, Module, ModuleMorphism};
use super::ring::{Elem, ExplicitRing};
use super::ringhom::RingHom;
use crate::error::{Error, Result};
use crate::kernel::matrix::{qlin, Matrix, QField};

/// Default search bound for stagewise equality.
pub const DEFAULT_STAGE_BOUND: usize = 64;

#[derive(Clone, Debug)]
pub struct IndObject {
    prefix: Vec<ModuleMorphism>,
    tail: ModuleMorphism,
    tail_mono: bool,
}

/// An element represented at a finite stage.
#[derive(Clone, Debug, PartialEq)]
pub struct IndElement {
    pub stage: usize,
    pub vector: Vec<Elem>,
}

/// Recognized colimit.
#[derive(Clone, Debug)]
pub enum ClosedForm {
    /// Transitions are isomorphisms from this stage on.
    Stage(usize),
    /// The localization of a PID-class ring at the tail scalar.
    Ring { ring: ExplicitRing, map: RingHom, scalar: Elem },
    /// Invertible part of the Fitting decomposition of a finite-dimensional
    /// tail, with the projection from the last stage.
    Fitting { module: Module, projection: ModuleMorphism, tail_on_image: ModuleMorphism },
    Zero,
    Unknown,
}

impl ClosedForm {
    pub fn is_zero(&self) -> bool {
        matches!(self, ClosedForm::Zero)
    }

    pub fn describe(&self, chain: &IndObject) -> String {
        match self {
            ClosedForm::Stage(k) => format!("stage {k}: {}", chain.stage(*k).describe()),
            ClosedForm::Ring { ring, .. } => ring.describe(),
            ClosedForm::Fitting { module, .. } => module.describe(),
            ClosedForm::Zero => "0".into(),
            ClosedForm::Unknown => "unrecognized".into(),
        }
    }
}

impl IndObject {
    pub fn new(prefix: Vec<ModuleMorphism>, tail: ModuleMorphism) -> Result<Self> {
        if tail.source != tail.target {
            return Err(Error::ShapeMismatch("chain tail must be an endomorphism".into()));
        }
        for w in prefix.windows(2) {
            if w[0].target != w[1].source {
                return Err(Error::ShapeMismatch("consecutive chain maps are not composable".into()));
            }
        }
        if let Some(last) = prefix.last() {
            if last.target != tail.source {
                return Err(Error::ShapeMismatch("prefix does not end at the tail object".into()));
            }
        }
        let tail_mono = tail.is_mono();
        Ok(IndObject { prefix, tail, tail_mono })
    }

    /// `X -> X -> ...` along `tail`.
    pub fn repeated(tail: ModuleMorphism) -> Result<Self> {
        Self::new(Vec::new(), tail)
    }

    /// `R -s-> R -s-> ...` on the free rank-one module.
    pub fn localization_chain(ring: &ExplicitRing, s: &Elem) -> Result<Self> {
        let r = Module::free(ring, 1)?;
        Self::repeated(ModuleMorphism::multiplication(&r, s))
    }

    /// Index from which the chain repeats.
    pub fn tail_start(&self) -> usize {
        self.prefix.len()
    }

    pub fn tail(&self) -> &ModuleMorphism {
        &self.tail
    }

    pub fn tail_is_mono(&self) -> bool {
        self.tail_mono
    }

    pub fn stage(&self, n: usize) -> &Module {
        if n < self.prefix.len() {
            &self.prefix[n].source
        } else {
            &self.tail.source
        }
    }

    /// `X_n -> X_{n+1}`.
    pub fn transition(&self, n: usize) -> &ModuleMorphism {
        self.prefix.get(n).unwrap_or(&self.tail)
    }

    pub fn element(&self, stage: usize, vector: Vec<Elem>) -> IndElement {
        IndElement { stage, vector }
    }

    pub fn push(&self, e: &IndElement, to: usize) -> IndElement {
        let mut v = e.vector.clone();
        for n in e.stage..to {
            v = self.transition(n).apply(&v);
        }
        IndElement { stage: to.max(e.stage), vector: v }
    }

    /// Whether the element is zero in the colimit. Equality only becomes final
    /// once the transitions are injective or the finite-dimensional kernel chain
    /// has stabilized; otherwise the search stops at `bound`.
    pub fn is_zero_element(&self, e: &IndElement, bound: usize) -> Result<bool> {
        let k = self.tail_start();
        let fd_final = match self.tail.source {
            Module::Fd(ref m) => Some(k.max(e.stage) + m.dim),
            Module::Pid(_) => None,
        };
        let mut cur = self.push(e, e.stage.max(k.min(bound)));
        loop {
            if self.stage(cur.stage).element_is_zero(&cur.vector) {
                return Ok(true);
            }
            if cur.stage >= k && self.tail_mono {
                return Ok(false);
            }
            if fd_final.is_some_and(|f| cur.stage >= f) {
                return Ok(false);
            }
            if cur.stage >= bound {
                return Err(Error::Undecided { what: "element equality in a chain colimit".into(), bound });
            }
            cur = self.push(&cur, cur.stage + 1);
        }
    }

    pub fn elements_equal(&self, a: &IndElement, b: &IndElement, bound: usize) -> Result<bool> {
        let n = a.stage.max(b.stage);
        let (a, b) = (self.push(a, n), self.push(b, n));
        let diff = self.stage(n).sub_elements(&a.vector, &b.vector);
        self.is_zero_element(&IndElement { stage: n, vector: diff }, bound)
    }

    /// Recognizes the colimit when a closed form applies.
    pub fn closed_form(&self) -> ClosedForm {
        let k = self.tail_start();
        let x = &self.tail.source;
        if x.is_zero() {
            return ClosedForm::Zero;
        }
        match x {
            Module::Fd(m) => {
                let t = to_q(&self.tail.matrix);
                let mut p = Matrix::identity(&QField, m.dim);
                for _ in 0..m.dim {
                    p = p.mul(&QField, &t);
                }
                let image = qlin::column_basis(&p);
                if image.cols() == 0 {
                    return ClosedForm::Zero;
                }
                if image.cols() == m.dim {
                    return ClosedForm::Stage(k);
                }
                let kernel = qlin::nullspace(&p);
                let change = qlin::inverse(&image.hcat(&kernel)).expect("Fitting decomposition");
                let r = image.cols();
                let proj = change.select_rows(&(0..r).collect::<Vec<_>>());
                let y = x.fd_submodule(&image).expect("Fitting image is a submodule");
                let projection = ModuleMorphism::new_unchecked(x.clone(), y.clone(), to_e(&proj));
                let t_y = proj.mul(&QField, &t).mul(&QField, &image);
                let tail_on_image = ModuleMorphism::new_unchecked(y.clone(), y.clone(), to_e(&t_y));
                ClosedForm::Fitting { module: y, projection, tail_on_image }
            }
            Module::Pid(p) => {
                if self.tail.inverse().is_some() {
                    return ClosedForm::Stage(k);
                }
                if p.gens == 1 && p.rel.cols() == 0 {
                    let s = self.tail.matrix.get(0, 0).clone();
                    return match localize_ring(&p.ring, &s) {
                        Ok((ring, _)) if ring.is_zero_ring() => ClosedForm::Zero,
                        Ok((ring, map)) => ClosedForm::Ring { ring, map, scalar: s },
                        Err(_) => ClosedForm::Unknown,
                    };
                }
                ClosedForm::Unknown
            }
        }
    }

    /// Stagewise tensor product along the diagonal.
    pub fn tensor(&self, other: &IndObject) -> Result<IndObject> {
        let k = self.tail_start().max(other.tail_start());
        let prefix = (0..k)
            .map(|n| self.transition(n).tensor(other.transition(n)))
            .collect::<Result<Vec<_>>>()?;
        IndObject::new(prefix, self.tail.tensor(&other.tail)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::poly::Poly;
    use crate::kernel::rational::q;

    fn px(cs: &[i64]) -> Elem {
        Elem::P(Poly::from_ints(cs))
    }

    #[test]
    fn localization_chain_is_recognized() {
        let r = ExplicitRing::poly("x");
        let c = IndObject::localization_chain(&r, &px(&[0, 1])).unwrap();
        match c.closed_form() {
            ClosedForm::Ring { ring, .. } => assert_eq!(ring, ExplicitRing::localized("x", &Poly::x())),
            other => panic!("unexpected {other:?}"),
        }
        let one = c.element(0, vec![px(&[1])]);
        let x_later = c.element(1, vec![px(&[0, 1])]);
        assert!(c.elements_equal(&one, &x_later, DEFAULT_STAGE_BOUND).unwrap());
    }

    #[test]
    fn identity_chain_is_its_stage() {
        let m = Module::free(&ExplicitRing::Rationals, 1).unwrap();
        let c = IndObject::repeated(ModuleMorphism::identity(&m)).unwrap();
        assert!(matches!(c.closed_form(), ClosedForm::Stage(0)));
    }

    #[test]
    fn nilpotent_tail_fd() {
        let r = ExplicitRing::quotient("x", &Poly::from_ints(&[0, 0, 1]), 12).unwrap();
        let c = IndObject::localization_chain(&r, &px(&[0, 1])).unwrap();
        assert!(c.closed_form().is_zero());
        let one = c.element(0, vec![Elem::Q(q(1)), Elem::Q(q(0))]);
        assert!(c.is_zero_element(&one, DEFAULT_STAGE_BOUND).unwrap());
    }

    #[test]
    fn fitting_part_of_idempotent_split() {
        let r = ExplicitRing::quotient("x", &Poly::from_ints(&[0, -1, 1]), 12).unwrap();
        let c = IndObject::localization_chain(&r, &px(&[0, 1])).unwrap();
        match c.closed_form() {
            ClosedForm::Fitting { module, tail_on_image, .. } => {
                assert_eq!(module.q_dimension(), Some(1));
                assert!(tail_on_image.is_iso());
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn slow_nilpotent_is_undecided() {
        let r = ExplicitRing::poly("x");
        let mut cs = vec![0i64; 101];
        cs[100] = 1;
        let m = Module::presented(&r, 1, Matrix::from_vec(1, 1, vec![px(&cs)])).unwrap();
        let c = IndObject::repeated(ModuleMorphism::multiplication(&m, &px(&[0, 1]))).unwrap();
        let one = c.element(0, vec![px(&[1])]);
        assert!(matches!(c.is_zero_element(&one, DEFAULT_STAGE_BOUND), Err(Error::Undecided { bound: 64, .. })));
        assert!(c.is_zero_element(&one, 128).unwrap());
    }
}

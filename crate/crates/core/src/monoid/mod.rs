//! Commutative monoid objects over the two base categories: explicit
//! Q-algebras (monoids in Q-modules) and presheaves of Q-algebras on finite
//! posets.

mod endo;
pub mod integral;
pub mod sample;

pub use endo::{recognize_fd, EndoRing};
pub use integral::{domain_check, is_reduced, nilpotent_witness, DomainCheck};

use crate::error::{Error, Result};
use crate::fpcat::localize::{generator_lifts, localize_ring, localize_twice};
use crate::fpcat::fdalgebra::diagram_checks;
use crate::fpcat::{Elem, ExplicitRing, IndObject, Module, ModuleMorphism, RingHom};
use crate::kernel::factor::DEFAULT_DEGREE_BOUND;
use crate::kernel::matrix::{qlin, Matrix, Ring};
use crate::kernel::rational::Rational;
use crate::presheaf::{ModulePresheaf, NatTrans, RingPresheaf};

#[derive(Clone, Debug, PartialEq)]
pub enum Carrier {
    /// An explicit ring viewed as a monoid in Q-modules.
    Algebra(ExplicitRing),
    /// A presheaf of rings viewed as a monoid in presheaves of Q-modules.
    Presheaf(RingPresheaf),
}

/// How the monoid was built; drives the Noetherian certificate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Origin {
    Ring,
    StructureConstants,
    Presheaf,
    Localization,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomResult {
    pub name: String,
    pub holds: bool,
    /// Exact matrix identity, as opposed to a check on sampled elements.
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NoetherianCertificate {
    Certified { class: String, note: String },
    Unknown { reason: String },
}

impl NoetherianCertificate {
    pub fn is_certified(&self) -> bool {
        matches!(self, NoetherianCertificate::Certified { .. })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MonoidObject {
    carrier: Carrier,
    origin: Origin,
    axioms: Vec<AxiomResult>,
}

/// An endomorphism of the carrier as a module over itself.
#[derive(Clone, Debug)]
pub enum EndoMap {
    Point(ModuleMorphism),
    Presheaf(NatTrans),
}

impl EndoMap {
    pub fn is_mono(&self) -> bool {
        match self {
            EndoMap::Point(f) => f.is_mono(),
            EndoMap::Presheaf(t) => t.is_mono(),
        }
    }

    /// Whether the kernel is exactly zero.
    pub fn kernel_is_zero(&self) -> bool {
        match self {
            EndoMap::Point(f) => f.kernel().0.is_zero(),
            EndoMap::Presheaf(t) => t.components.iter().all(|f| f.kernel().0.is_zero()),
        }
    }
}

/// Result of testing that nonzero endomorphisms are monomorphisms.
#[derive(Clone, Debug)]
pub struct MonoReport {
    /// Integral with a Noetherian certificate.
    pub in_hypothesis: bool,
    pub tested: usize,
    /// First sampled element whose multiplication has a kernel.
    pub failure: Option<Elem>,
}

/// `A_s` with its canonical map, the chains whose colimit it is, and the
/// certified comparison `E(A)_s -> E(A_s)`.
#[derive(Clone, Debug)]
pub struct Localization {
    pub monoid: MonoidObject,
    pub canonical: Vec<RingHom>,
    pub chains: Vec<IndObject>,
    pub endo: EndoRing,
    pub endo_localized: ExplicitRing,
    pub comparison: RingHom,
}

fn sampled_axioms(ring: &ExplicitRing) -> Vec<AxiomResult> {
    // the axioms are Q-multilinear, so spanning elements suffice
    let s = sample::basis_elements(ring, 2);
    let one = ring.one();
    let mut assoc = true;
    let mut comm = true;
    let mut unit = true;
    for a in &s {
        unit &= ring.eq_elem(&ring.mul(&one, a), a) && ring.eq_elem(&ring.mul(a, &one), a);
        for b in &s {
            comm &= ring.eq_elem(&ring.mul(a, b), &ring.mul(b, a));
            for c in &s {
                assoc &= ring.eq_elem(&ring.mul(&ring.mul(a, b), c), &ring.mul(a, &ring.mul(b, c)));
            }
        }
    }
    let mk = |name: &str, holds| AxiomResult { name: name.into(), holds, exact: false };
    vec![mk("associativity", assoc), mk("commutativity", comm), mk("left unit", unit), mk("right unit", unit)]
}

fn ring_axioms(ring: &ExplicitRing) -> Vec<AxiomResult> {
    match ring.fd_algebra() {
        Some(a) => diagram_checks(a.mult_matrix(), a.unit())
            .into_iter()
            .map(|(c, holds)| AxiomResult { name: c.name().into(), holds, exact: true })
            .collect(),
        None => sampled_axioms(ring),
    }
}

fn failed(axioms: &[AxiomResult]) -> Option<String> {
    let bad: Vec<&str> = axioms.iter().filter(|a| !a.holds).map(|a| a.name.as_str()).collect();
    (!bad.is_empty()).then(|| bad.join(", "))
}

impl MonoidObject {
    pub fn from_ring(ring: ExplicitRing) -> Result<Self> {
        let axioms = ring_axioms(&ring);
        if let Some(bad) = failed(&axioms) {
            return Err(Error::AxiomFailure(bad));
        }
        Ok(MonoidObject { carrier: Carrier::Algebra(ring), origin: Origin::Ring, axioms })
    }

    /// A finite-dimensional algebra from structure constants: column `i*n + j`
    /// of `mult` is the product of basis elements `i` and `j`.
    pub fn from_structure_constants(mult: Matrix<Rational>, unit: Vec<Rational>) -> Result<Self> {
        let n = unit.len();
        if mult.shape() != (n, n * n) {
            return Err(Error::ShapeMismatch(format!("multiplication must be {n}x{}", n * n)));
        }
        let axioms: Vec<AxiomResult> = diagram_checks(&mult, &unit)
            .into_iter()
            .map(|(c, holds)| AxiomResult { name: c.name().into(), holds, exact: true })
            .collect();
        if let Some(bad) = failed(&axioms) {
            return Err(Error::AxiomFailure(bad));
        }
        let alg = crate::fpcat::FdAlgebra::new(mult, unit)?;
        Ok(MonoidObject {
            carrier: Carrier::Algebra(ExplicitRing::finite_dim(alg)),
            origin: Origin::StructureConstants,
            axioms,
        })
    }

    pub fn from_presheaf(rings: RingPresheaf) -> Result<Self> {
        let mut axioms = Vec::new();
        for (p, r) in rings.rings().iter().enumerate() {
            for mut a in ring_axioms(r) {
                a.name = format!("{} at {}", a.name, rings.poset().name(p));
                axioms.push(a);
            }
        }
        // restrictions were validated as ring homomorphisms compatible with composition
        axioms.push(AxiomResult { name: "restrictions are multiplicative".into(), holds: true, exact: true });
        if let Some(bad) = failed(&axioms) {
            return Err(Error::AxiomFailure(bad));
        }
        Ok(MonoidObject { carrier: Carrier::Presheaf(rings), origin: Origin::Presheaf, axioms })
    }

    /// `Spec(0)`.
    pub fn zero() -> Self {
        Self::from_ring(ExplicitRing::zero_ring()).expect("zero ring")
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn origin(&self) -> Origin {
        self.origin
    }

    pub fn ring(&self) -> Option<&ExplicitRing> {
        match &self.carrier {
            Carrier::Algebra(r) => Some(r),
            Carrier::Presheaf(_) => None,
        }
    }

    pub fn presheaf(&self) -> Option<&RingPresheaf> {
        match &self.carrier {
            Carrier::Presheaf(p) => Some(p),
            Carrier::Algebra(_) => None,
        }
    }

    /// Rings at the points (a single point for explicit algebras).
    pub fn point_rings(&self) -> Vec<ExplicitRing> {
        match &self.carrier {
            Carrier::Algebra(r) => vec![r.clone()],
            Carrier::Presheaf(p) => p.rings().to_vec(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.point_rings().iter().all(|r| r.is_zero_ring())
    }

    pub fn axioms(&self) -> &[AxiomResult] {
        &self.axioms
    }

    /// Re-runs the diagram checks from the stored data.
    pub fn recheck_axioms(&self) -> Vec<AxiomResult> {
        match &self.carrier {
            Carrier::Algebra(r) => ring_axioms(r),
            Carrier::Presheaf(p) => Self::from_presheaf(p.clone()).map(|m| m.axioms).unwrap_or_default(),
        }
    }

    pub fn describe(&self) -> String {
        match &self.carrier {
            Carrier::Algebra(r) => r.describe(),
            Carrier::Presheaf(p) => p.describe(),
        }
    }

    pub fn noetherian(&self) -> NoetherianCertificate {
        let rings = self.point_rings();
        if let Some(r) = rings.iter().find(|r| r.engine().is_err() && !r.is_zero_ring()) {
            return NoetherianCertificate::Unknown { reason: format!("no module engine for {}", r.describe()) };
        }
        let class = match (&self.carrier, self.origin) {
            (_, Origin::Localization) => "localization of a certified monoid",
            (Carrier::Presheaf(_), _) => "finite-poset presheaf of certified rings",
            (Carrier::Algebra(r), _) if r.is_fd_able() => "finite-dimensional carrier",
            (Carrier::Algebra(_), _) => "PID-class carrier",
        };
        NoetherianCertificate::Certified {
            class: class.into(),
            note: "finitely generated modules over these carriers admit finite presentations".into(),
        }
    }

    /// Finite-type certificate: finitely presented algebra carriers only.
    pub fn is_finite_type(&self) -> bool {
        fn ft(r: &ExplicitRing) -> bool {
            match r {
                ExplicitRing::Fraction { .. } => false,
                ExplicitRing::Product(f) => f.iter().all(ft),
                _ => true,
            }
        }
        self.point_rings().iter().all(ft)
    }

    pub fn unit_module(&self) -> Result<AModule> {
        AModule::unit(self)
    }

    /// `E(A) = Hom_{A-Mod}(A, A)`, recognized with a certified isomorphism.
    pub fn endomorphism_ring(&self) -> Result<EndoRing> {
        EndoRing::compute(self)
    }

    pub fn integrality(&self) -> Result<(EndoRing, DomainCheck)> {
        self.integrality_with_bound(DEFAULT_DEGREE_BOUND)
    }

    pub fn integrality_with_bound(&self, bound: usize) -> Result<(EndoRing, DomainCheck)> {
        let e = self.endomorphism_ring()?;
        let d = domain_check(&e.ring, bound)?;
        Ok((e, d))
    }

    pub fn is_integral(&self) -> Result<bool> {
        Ok(self.integrality()?.1.is_domain())
    }

    pub fn is_reduced(&self) -> Result<bool> {
        Ok(is_reduced(&self.endomorphism_ring()?.ring))
    }

    /// Multiplication by `s` in `E(A)` as an endomorphism of the carrier.
    pub fn multiplication_by(&self, endo: &EndoRing, s: &Elem) -> Result<EndoMap> {
        let family = endo.to_section(s)?;
        match &self.carrier {
            Carrier::Algebra(r) => {
                let m = Module::free(r, 1)?;
                Ok(EndoMap::Point(ModuleMorphism::multiplication(&m, &family[0])))
            }
            Carrier::Presheaf(p) => {
                let u = p.unit_module()?;
                let components = u
                    .modules()
                    .iter()
                    .zip(&family)
                    .map(|(m, x)| if m.gens() == 0 { ModuleMorphism::identity(m) } else { ModuleMorphism::multiplication(m, x) })
                    .collect();
                Ok(EndoMap::Presheaf(NatTrans::new(u.clone(), u, components)?))
            }
        }
    }

    /// Kernels of multiplication by sampled nonzero `s` in `E(A)`.
    pub fn check_nonzero_endos_mono(&self, cap: usize, random: usize, seed: u64) -> Result<MonoReport> {
        let (endo, dc) = self.integrality()?;
        let in_hypothesis = dc.is_domain() && self.noetherian().is_certified();
        let samples = sample::nonzero_samples(&endo.ring, cap, random, seed);
        let mut failure = None;
        for s in &samples {
            if !self.multiplication_by(&endo, s)?.kernel_is_zero() {
                failure = Some(s.clone());
                break;
            }
        }
        Ok(MonoReport { in_hypothesis, tested: samples.len(), failure })
    }

    /// `A_s` for `s` in `E(A)`; `s = 0` gives the zero monoid.
    pub fn localize(&self, s: &Elem) -> Result<Localization> {
        let endo = self.endomorphism_ring()?;
        let family = endo.to_section(s)?;
        let (monoid, canonical) = match &self.carrier {
            Carrier::Algebra(r) => {
                let (l, h) = localize_ring(r, &family[0])?;
                (MonoidObject { carrier: Carrier::Algebra(l.clone()), origin: Origin::Localization, axioms: ring_axioms(&l) }, vec![h])
            }
            Carrier::Presheaf(p) => {
                let (lp, hs) = p.localize(&family)?;
                let mut m = MonoidObject::from_presheaf(lp)?;
                m.origin = Origin::Localization;
                (m, hs)
            }
        };
        let chains = self
            .point_rings()
            .iter()
            .zip(&family)
            .map(|(r, x)| if r.is_zero_ring() { IndObject::repeated(ModuleMorphism::identity(&Module::zero(r, crate::fpcat::EngineKind::FinDim)?)) } else { IndObject::localization_chain(r, x) })
            .collect::<Result<Vec<_>>>()?;
        let endo_s = monoid.endomorphism_ring()?;
        let (endo_localized, _) = localize_ring(&endo.ring, s)?;
        let point_rings = monoid.point_rings();
        let mut images = Vec::new();
        for (a, k) in generator_lifts(&endo.ring, s)? {
            let fa = endo.to_section(&a)?;
            let mut fam = Vec::new();
            for (p, h) in canonical.iter().enumerate() {
                let t = &point_rings[p];
                if t.is_zero_ring() {
                    fam.push(t.zero());
                    continue;
                }
                let s_img = h.apply(&family[p])?;
                let sinv = t.inverse(&s_img).ok_or_else(|| Error::NotInvertibleDenominator(t.display(&s_img)))?;
                fam.push(t.mul(&h.apply(&fa[p])?, &t.pow(&sinv, k)));
            }
            images.push(
                endo_s
                    .from_section(&fam)?
                    .ok_or_else(|| Error::NotWellDefined("localized family is not a global section".into()))?,
            );
        }
        let comparison = RingHom::new(endo_localized.clone(), endo_s.ring.clone(), images)?;
        if !is_bijective(&comparison)? {
            return Err(Error::NotWellDefined("E(A)_s -> E(A_s) is not an isomorphism".into()));
        }
        Ok(Localization { monoid, canonical, chains, endo: endo_s, endo_localized, comparison })
    }
}

/// Whether a ring homomorphism is bijective, for the classes where this is
/// decidable here: identities and maps between finite-dimensional rings.
pub fn is_bijective(h: &RingHom) -> Result<bool> {
    if h.source.is_zero_ring() || h.target.is_zero_ring() {
        return Ok(h.source.is_zero_ring() && h.target.is_zero_ring());
    }
    if h.source == h.target && h.is_identity() {
        return Ok(true);
    }
    match (h.source.q_dim(), h.target.q_dim()) {
        (Some(n), Some(m)) if n == m => {
            let cols = sample::basis_elements(&h.source, 0)
                .iter()
                .map(|b| Ok(h.target.to_coords(&h.apply(b)?)))
                .collect::<Result<Vec<_>>>()?;
            Ok(qlin::rank(&Matrix::from_cols(cols, m)) == n)
        }
        (Some(_), Some(_)) => Ok(false),
        _ => Err(Error::UnsupportedRing(format!("bijectivity of {}", h.describe()))),
    }
}

/// `A_s (x)_A A_t = (A_s)_t` against `A_{st}`; returns the two-step ring and
/// the identification with `A_{st}` after checking both canonical maps agree.
pub fn localization_tensor(ring: &ExplicitRing, s: &Elem, t: &Elem) -> Result<(ExplicitRing, RingHom)> {
    let (two, h2) = localize_twice(ring, s, t)?;
    let (direct, h1) = localize_ring(ring, &ring.mul(s, t))?;
    if two != direct || !h2.agrees_with(&h1) {
        return Err(Error::NotWellDefined(format!(
            "({})_t and {} differ",
            two.describe(),
            direct.describe()
        )));
    }
    Ok((two.clone(), RingHom::identity(&two)))
}

#[derive(Clone, Debug, PartialEq)]
pub enum AModuleCarrier {
    Point(Module),
    Presheaf(ModulePresheaf),
}

/// A module over a monoid; the action is the module structure over the
/// carrier ring (or rings, pointwise).
#[derive(Clone, Debug, PartialEq)]
pub struct AModule {
    pub monoid: MonoidObject,
    pub carrier: AModuleCarrier,
}

impl AModule {
    pub fn new(monoid: &MonoidObject, carrier: AModuleCarrier) -> Result<Self> {
        let ok = match (&monoid.carrier, &carrier) {
            (Carrier::Algebra(r), AModuleCarrier::Point(m)) => m.ring() == r,
            (Carrier::Presheaf(p), AModuleCarrier::Presheaf(m)) => m.rings() == p,
            _ => false,
        };
        if !ok {
            return Err(Error::ShapeMismatch("module carrier does not live over the monoid".into()));
        }
        Ok(AModule { monoid: monoid.clone(), carrier })
    }

    pub fn unit(monoid: &MonoidObject) -> Result<Self> {
        let carrier = match &monoid.carrier {
            Carrier::Algebra(r) => AModuleCarrier::Point(Module::free(r, 1)?),
            Carrier::Presheaf(p) => AModuleCarrier::Presheaf(p.unit_module()?),
        };
        Ok(AModule { monoid: monoid.clone(), carrier })
    }

    pub fn is_zero(&self) -> bool {
        match &self.carrier {
            AModuleCarrier::Point(m) => m.is_zero(),
            AModuleCarrier::Presheaf(m) => m.is_zero(),
        }
    }

    /// `M (x)_A N`: the coequalizer of the two actions, which for modules over
    /// the carrier ring is the tensor product over that ring.
    pub fn tensor_over_a(&self, other: &AModule) -> Result<AModule> {
        if self.monoid != other.monoid {
            return Err(Error::ShapeMismatch("modules over different monoids".into()));
        }
        let carrier = match (&self.carrier, &other.carrier) {
            (AModuleCarrier::Point(a), AModuleCarrier::Point(b)) => AModuleCarrier::Point(a.tensor(b)?),
            (AModuleCarrier::Presheaf(a), AModuleCarrier::Presheaf(b)) => AModuleCarrier::Presheaf(a.tensor(b)?),
            _ => unreachable!("carriers match the monoid"),
        };
        Ok(AModule { monoid: self.monoid.clone(), carrier })
    }
}

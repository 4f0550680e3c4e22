//! The fraction-field object `K(A) = colim A_s` over nonzero `s` in `E(A)`,
//! its universal property, and the linear algebra of `K(A)`-modules.

use crate::error::{Error, Result};
use crate::fpcat::localize::{induced_map, localize_ring, localize_twice};
use crate::fpcat::{ClosedForm, Elem, EngineKind, ExplicitRing, IndObject, Module, ModuleMorphism, RingHom};
use crate::kernel::matrix::{qlin, Matrix, Ring};
use crate::kernel::poly::Poly;
use crate::kernel::ratfunc::RatFunc;
use crate::monoid::integral::describe_pair;
use crate::monoid::{is_bijective, sample, Carrier, DomainCheck, EndoRing, Localization, MonoidObject};
use crate::presheaf::RingPresheaf;

/// `Q(R)` for an integral domain `R` in a class with a computable fraction
/// field, with the inclusion `R -> Q(R)`.
pub fn quotient_field(ring: &ExplicitRing) -> Result<(ExplicitRing, RingHom)> {
    match ring {
        ExplicitRing::Poly { var } | ExplicitRing::Localized { var, .. } => {
            let k = ExplicitRing::fraction(var);
            let h = RingHom::new(ring.clone(), k.clone(), vec![Elem::F(RatFunc::from_poly(Poly::x()))])?;
            Ok((k, h))
        }
        r if r.is_field() => Ok((r.clone(), RingHom::identity(r))),
        r => Err(Error::UnsupportedRing(format!("fraction field of {}", r.describe()))),
    }
}

#[derive(Clone, Debug)]
pub struct FractionFieldObject {
    source: MonoidObject,
    endo: EndoRing,
    quotient: ExplicitRing,
    to_quotient: RingHom,
    closed: MonoidObject,
    canonical: Vec<RingHom>,
    endo_closed: EndoRing,
    certificate: (RingHom, RingHom),
}

impl FractionFieldObject {
    /// Builds `K(A)` for an integral, Noetherian-certified `A`.
    pub fn new(a: &MonoidObject) -> Result<Self> {
        if let crate::monoid::NoetherianCertificate::Unknown { reason } = a.noetherian() {
            return Err(Error::UnsupportedRing(reason));
        }
        let (endo, dc) = a.integrality()?;
        match &dc {
            DomainCheck::Domain => {}
            DomainCheck::ZeroDivisors(x, y) => return Err(Error::NotIntegral(describe_pair(&endo.ring, x, y))),
            DomainCheck::ZeroRing => return Err(Error::NotIntegral("E(A) is the zero ring".into())),
        }
        let (quotient, to_quotient) = quotient_field(&endo.ring)?;
        let (closed, canonical) = match a.carrier() {
            Carrier::Algebra(_) => (MonoidObject::from_ring(quotient.clone())?, vec![to_quotient.clone()]),
            Carrier::Presheaf(p) => closed_presheaf(p, &endo, &quotient)?,
        };
        let endo_closed = closed.endomorphism_ring()?;
        let mut k = FractionFieldObject {
            source: a.clone(),
            endo,
            quotient,
            to_quotient,
            closed,
            canonical,
            certificate: (RingHom::identity(&endo_closed.ring), RingHom::identity(&endo_closed.ring)),
            endo_closed,
        };
        k.certificate = k.certify()?;
        Ok(k)
    }

    /// Mutually inverse maps between `E(K(A))` as computed from the closed
    /// form and `Q(E(A))`; the map out of `Q(E(A))` goes through global sections.
    fn certify(&self) -> Result<(RingHom, RingHom)> {
        let target = &self.endo_closed.ring;
        let images = self
            .quotient
            .generators()
            .iter()
            .map(|g| {
                let family = self.endo.to_section(&self.preimage(g)?)?;
                let pushed = family
                    .iter()
                    .zip(&self.canonical)
                    .map(|(x, h)| h.apply(x))
                    .collect::<Result<Vec<_>>>()?;
                self.endo_closed
                    .from_section(&pushed)?
                    .ok_or_else(|| Error::NotWellDefined("image of a fraction is not a global section of K(A)".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        let back = RingHom::new(self.quotient.clone(), target.clone(), images)?;
        let fwd = invert(&back)?;
        if !fwd.is_inverse_pair(&back)? {
            return Err(Error::NotWellDefined("E(K(A)) and Q(E(A)) are not identified".into()));
        }
        Ok((fwd, back))
    }

    /// An element of `E(A)` mapping to a generator of `Q(E(A))`.
    fn preimage(&self, g: &Elem) -> Result<Elem> {
        if self.quotient == self.endo.ring {
            return Ok(g.clone());
        }
        let r = self.quotient.to_ratfunc(g).expect("fraction field element");
        self.endo
            .ring
            .from_ratfunc(&r)
            .ok_or_else(|| Error::NotWellDefined(format!("generator {r} has no preimage")))
    }

    pub fn source(&self) -> &MonoidObject {
        &self.source
    }

    /// `E(A)` of the source.
    pub fn endo(&self) -> &EndoRing {
        &self.endo
    }

    /// The recognized closed form `Q(E(A))`; `K(A)`-modules are presented over it.
    pub fn field(&self) -> &ExplicitRing {
        &self.quotient
    }

    /// `E(A) -> Q(E(A))`.
    pub fn to_field(&self) -> &RingHom {
        &self.to_quotient
    }

    /// `K(A)` itself: a ring, or a presheaf of rings on the source's poset.
    pub fn closed(&self) -> &MonoidObject {
        &self.closed
    }

    /// The canonical maps `A(p) -> K(A)(p)`, one per point.
    pub fn canonical(&self) -> &[RingHom] {
        &self.canonical
    }

    /// `E(K(A))` computed from the closed form.
    pub fn endo_closed(&self) -> &EndoRing {
        &self.endo_closed
    }

    /// `(E(K(A)) -> Q(E(A)), Q(E(A)) -> E(K(A)))`.
    pub fn certificate(&self) -> &(RingHom, RingHom) {
        &self.certificate
    }

    /// The stage `A_s`.
    pub fn stage(&self, s: &Elem) -> Result<Localization> {
        self.nonzero(s)?;
        self.source.localize(s)
    }

    /// Pointwise stage maps `A_s -> A_st`.
    pub fn stage_map(&self, s: &Elem, t: &Elem) -> Result<Vec<RingHom>> {
        self.nonzero(s)?;
        self.nonzero(t)?;
        let fs = self.endo.to_section(s)?;
        let ft = self.endo.to_section(t)?;
        self.source
            .point_rings()
            .iter()
            .zip(fs.iter().zip(&ft))
            .map(|(r, (x, y))| {
                let (rs, h) = localize_ring(r, x)?;
                let (_, h2) = localize_ring(&rs, &h.apply(y)?)?;
                Ok(h2)
            })
            .collect()
    }

    /// Pointwise maps `A_s -> K(A)` induced by the canonical map.
    pub fn stage_to_closed(&self, s: &Elem) -> Result<Vec<RingHom>> {
        self.nonzero(s)?;
        let fs = self.endo.to_section(s)?;
        let mut out = Vec::new();
        for (h, x) in self.canonical.iter().zip(&fs) {
            let ind = induced_map(h, x)?;
            // K(A) already inverts the image of s
            if ind.target != h.target {
                return Err(Error::NotWellDefined(format!("{} does not invert {}", h.target, h.source.display(x))));
            }
            out.push(ind);
        }
        Ok(out)
    }

    fn nonzero(&self, s: &Elem) -> Result<()> {
        if self.endo.ring.is_zero(s) {
            return Err(Error::InvalidInput("stages are indexed by nonzero elements".into()));
        }
        Ok(())
    }

    /// The unique `K(A) -> B` through which `g: E(A) -> B` factors.
    pub fn universal_factor(&self, g: &RingHom) -> Result<RingHom> {
        if g.source != self.endo.ring {
            return Err(Error::ShapeMismatch(format!("{} does not start at {}", g.describe(), self.endo.ring)));
        }
        let gens = self.quotient.generators();
        let mut images = Vec::new();
        for x in &gens {
            let e = self.preimage(x)?;
            // K(A) is generated by the image of E(A), so this forces uniqueness
            if !self.quotient.eq_elem(&self.to_quotient.apply(&e)?, x) {
                return Err(Error::NotWellDefined("K(A) is not generated by E(A)".into()));
            }
            images.push(g.apply(&e)?);
        }
        let u = RingHom::new(self.quotient.clone(), g.target.clone(), images)?;
        if !self.to_quotient.then(&u)?.agrees_with(g) {
            return Err(Error::NotWellDefined("the factorization does not restrict to g".into()));
        }
        Ok(u)
    }

    /// Checks that `A -> K(A)` is an epimorphism of monoids (`K (x)_A K = K`)
    /// on sampled denominators, that stage tensors are stage localizations,
    /// and that the unitor of `K(A)` is invertible.
    pub fn check_idempotence(&self, seed: u64) -> Result<IdempotenceReport> {
        let samples = sample::nonzero_samples(&self.endo.ring, 2, 3, seed);
        let points = self.source.point_rings();
        let kpoints = self.closed.point_rings();
        let mut checks = Vec::new();

        let mut absorbs = true;
        for s in &samples {
            for (p, x) in self.endo.to_section(s)?.iter().enumerate() {
                if kpoints[p].is_zero_ring() {
                    continue;
                }
                let (l, h) = localize_ring(&kpoints[p], &self.canonical[p].apply(x)?)?;
                absorbs &= l == kpoints[p] && h.is_identity();
            }
        }
        checks.push(IdempotenceCheck { name: "K(A) absorbs sampled denominators".into(), holds: absorbs });

        let mut stagewise = true;
        for pair in samples.windows(2).take(3) {
            let (fs, ft) = (self.endo.to_section(&pair[0])?, self.endo.to_section(&pair[1])?);
            for (p, r) in points.iter().enumerate() {
                if r.is_zero_ring() {
                    continue;
                }
                let chain = IndObject::localization_chain(r, &fs[p])?.tensor(&IndObject::localization_chain(r, &ft[p])?)?;
                let (direct, _) = localize_ring(r, &r.mul(&fs[p], &ft[p]))?;
                let (twice, _) = localize_twice(r, &fs[p], &ft[p])?;
                stagewise &= twice == direct && closed_form_is(&chain.closed_form(), r, &direct);
            }
        }
        checks.push(IdempotenceCheck { name: "A_s (x)_A A_t is A_st on chains".into(), holds: stagewise });

        let mut unitor = true;
        for k in kpoints.iter().filter(|k| !k.is_zero_ring()) {
            let m = Module::unit_object(k, k.engine()?)?;
            let (l, linv) = m.unitor()?;
            unitor &= l.then(&linv)?.is_identity() && linv.then(&l)?.is_identity();
        }
        checks.push(IdempotenceCheck { name: "unitor of K(A) is invertible".into(), holds: unitor });
        Ok(IdempotenceReport { checks })
    }
}

/// `K(A)` for a presheaf source: `A(q) (x)_{E(A)} Q(E(A))` at each point.
fn closed_presheaf(
    p: &RingPresheaf,
    endo: &EndoRing,
    quotient: &ExplicitRing,
) -> Result<(MonoidObject, Vec<RingHom>)> {
    if *quotient == endo.ring {
        let canonical = p.rings().iter().map(RingHom::identity).collect();
        return Ok((MonoidObject::from_presheaf(p.clone())?, canonical));
    }
    // E(A) is a polynomial ring or a localization of one, in a single component
    let x = endo.ring.generators()[0].clone();
    let xs = endo.to_section(&x)?;
    let mut rings = Vec::new();
    let mut canonical = Vec::new();
    for (a, v) in p.rings().iter().zip(&xs) {
        let transcendental = matches!(a, ExplicitRing::Poly { .. } | ExplicitRing::Localized { .. } | ExplicitRing::Fraction { .. })
            && a.to_ratfunc(v).is_some_and(|r| !r.is_constant());
        if transcendental {
            let (k, h) = quotient_field(a)?;
            rings.push(k);
            canonical.push(h);
        } else {
            // a nonzero polynomial in x dies here, so the whole stage does
            let z = ExplicitRing::zero_ring();
            let images = a.generators().iter().map(|_| z.zero()).collect();
            rings.push(z.clone());
            canonical.push(RingHom::new_unchecked(a.clone(), z, images));
        }
    }
    let mut restr = Vec::new();
    for ((hi, lo), h) in p.cover_restrictions() {
        if rings[lo].is_zero_ring() {
            let images = rings[hi].generators().iter().map(|_| rings[lo].zero()).collect();
            restr.push(((hi, lo), RingHom::new(rings[hi].clone(), rings[lo].clone(), images)?));
            continue;
        }
        if rings[hi].is_zero_ring() {
            return Err(Error::NotWellDefined(format!("{} restricts to a nonzero fraction field", p.poset().name(hi))));
        }
        let gen = p.ring(hi).from_ratfunc(&RatFunc::from_poly(Poly::x())).expect("generator");
        let img = canonical[lo].apply(&h.apply(&gen)?)?;
        restr.push(((hi, lo), RingHom::new(rings[hi].clone(), rings[lo].clone(), vec![img])?));
    }
    let closed = MonoidObject::from_presheaf(RingPresheaf::new(p.poset().clone(), rings, restr)?)?;
    Ok((closed, canonical))
}

fn univariate(r: &ExplicitRing) -> bool {
    matches!(r, ExplicitRing::Poly { .. } | ExplicitRing::Localized { .. } | ExplicitRing::Fraction { .. })
}

/// An inverse for a ring isomorphism: Mobius substitutions between
/// univariate rings, linear algebra between finite-dimensional ones.
pub fn invert(h: &RingHom) -> Result<RingHom> {
    if h.source == h.target && h.is_identity() {
        return Ok(RingHom::identity(&h.source));
    }
    match (&h.source, &h.target) {
        (s, t) if univariate(s) && univariate(t) => {
            let not_inv = || Error::NotWellDefined(format!("{} is not invertible", h.describe()));
            let r = t.to_ratfunc(&h.images[0]).ok_or_else(not_inv)?;
            let back = s.from_ratfunc(&r.mobius_inverse().ok_or_else(not_inv)?).ok_or_else(not_inv)?;
            RingHom::new(t.clone(), s.clone(), vec![back]).map_err(|_| not_inv())
        }
        (s, t) if s.q_dim().is_some() && s.q_dim() == t.q_dim() => {
            let n = s.q_dim().unwrap_or(0);
            let basis = sample::basis_elements(s, 0);
            let cols = basis.iter().map(|b| Ok(t.to_coords(&h.apply(b)?))).collect::<Result<Vec<_>>>()?;
            let inv = qlin::inverse(&Matrix::from_cols(cols, n))
                .ok_or_else(|| Error::NotWellDefined(format!("{} is not invertible", h.describe())))?;
            let images = t
                .generators()
                .iter()
                .map(|g| {
                    let c = inv.mul(&crate::kernel::matrix::QField, &Matrix::column_vector(t.to_coords(g)));
                    (0..n).fold(s.zero(), |acc, i| s.add(&acc, &s.mul(&s.from_rational(c.get(i, 0)), &basis[i])))
                })
                .collect();
            RingHom::new(t.clone(), s.clone(), images)
        }
        _ => Err(Error::UnsupportedRing(format!("inverting {}", h.describe()))),
    }
}

fn closed_form_is(c: &ClosedForm, ring: &ExplicitRing, expected: &ExplicitRing) -> bool {
    match c {
        ClosedForm::Zero => expected.is_zero_ring(),
        ClosedForm::Stage(_) => expected == ring,
        ClosedForm::Ring { ring: r, .. } => r == expected,
        ClosedForm::Fitting { module, .. } => module.q_dimension() == expected.q_dim(),
        ClosedForm::Unknown => false,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdempotenceCheck {
    pub name: String,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdempotenceReport {
    pub checks: Vec<IdempotenceCheck>,
}

impl IdempotenceReport {
    pub fn holds(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

fn ensure_field(r: &ExplicitRing) -> Result<()> {
    // K(A)-modules are presented through Smith form over the field
    if r.is_field() && r.is_pid_class() {
        Ok(())
    } else {
        Err(Error::UnsupportedRing(format!("{} is not a field with a presentation engine", r.describe())))
    }
}

/// A finitely presented `K(A)`-module.
#[derive(Clone, Debug, PartialEq)]
pub struct KModule {
    module: Module,
}

/// `G = K^q` with mutually inverse maps.
#[derive(Clone, Debug)]
pub struct FreeRank {
    pub rank: usize,
    pub to_free: ModuleMorphism,
    pub from_free: ModuleMorphism,
}

impl KModule {
    pub fn new(k: &FractionFieldObject, gens: usize, rel: Matrix<Elem>) -> Result<Self> {
        let field = k.field();
        ensure_field(field)?;
        if let Some(e) = rel.data().iter().find(|e| !field.contains(e)) {
            return Err(Error::InvalidInput(format!("relation entry {e:?} is not in {field}")));
        }
        Ok(KModule { module: Module::presented_in(field, gens, rel, EngineKind::Pid)? })
    }

    pub fn free(k: &FractionFieldObject, n: usize) -> Result<Self> {
        ensure_field(k.field())?;
        Ok(KModule { module: Module::free_in(k.field(), n, EngineKind::Pid)? })
    }

    pub fn module(&self) -> &Module {
        &self.module
    }

    /// `G = K^q` with `q = generators - rank(relations)`.
    pub fn free_rank(&self) -> Result<FreeRank> {
        let (reduced, to_self, from_self) = self.module.simplify();
        let rank = reduced.gens();
        let free = Module::free_in(self.module.ring(), rank, EngineKind::Pid)?;
        if let Module::Pid(p) = &reduced {
            if (0..p.rel.rows()).any(|i| (0..p.rel.cols()).any(|j| !self.module.ring().is_zero(p.rel.get(i, j)))) {
                return Err(Error::NotWellDefined("torsion over a field".into()));
            }
        }
        let to_free = ModuleMorphism::new(self.module.clone(), free.clone(), from_self.matrix)?;
        let from_free = ModuleMorphism::new(free, self.module.clone(), to_self.matrix)?;
        if !to_free.then(&from_free)?.is_identity() || !from_free.then(&to_free)?.is_identity() {
            return Err(Error::NotWellDefined("free-rank maps are not inverse".into()));
        }
        Ok(FreeRank { rank, to_free, from_free })
    }
}

/// A retraction `p` with `p . i = id`.
pub fn split_mono(i: &ModuleMorphism) -> Result<ModuleMorphism> {
    ensure_field(i.source.ring())?;
    if !i.is_mono() {
        return Err(Error::NotMono);
    }
    let p = i.factor_through(&ModuleMorphism::identity(&i.source)).ok_or(Error::NotMono)?;
    if !i.then(&p)?.is_identity() {
        return Err(Error::NotWellDefined("retraction check failed".into()));
    }
    Ok(p)
}

/// `g` with `e . g = f`.
pub fn lift_through_epi(e: &ModuleMorphism, f: &ModuleMorphism) -> Result<ModuleMorphism> {
    ensure_field(e.source.ring())?;
    if f.target != e.target {
        return Err(Error::ShapeMismatch("f does not land in the target of e".into()));
    }
    if !e.is_epi() {
        return Err(Error::NotEpi);
    }
    let g = e.lift(f).ok_or(Error::NotEpi)?;
    if !g.then(e)?.equals(f) {
        return Err(Error::NotWellDefined("lift check failed".into()));
    }
    Ok(g)
}

#[derive(Clone, Debug)]
pub enum Subobject {
    Zero,
    /// The inclusion is invertible; carries the inverse.
    Iso(ModuleMorphism),
}

/// A subobject of `K(A)` is zero or everything.
pub fn subobject_dichotomy(i: &ModuleMorphism) -> Result<Subobject> {
    ensure_field(i.target.ring())?;
    let unit = Module::free_in(i.target.ring(), 1, EngineKind::Pid)?;
    if i.target.simplify().0 != unit {
        return Err(Error::ShapeMismatch(format!("{} is not K(A)", i.target.describe())));
    }
    if !i.is_mono() {
        return Err(Error::NotMono);
    }
    if i.source.is_zero() {
        return Ok(Subobject::Zero);
    }
    let inv = i
        .inverse()
        .ok_or_else(|| Error::NotWellDefined("a proper nonzero subobject of K(A)".into()))?;
    if !i.then(&inv)?.is_identity() || !inv.then(i)?.is_identity() {
        return Err(Error::NotWellDefined("inverse check failed".into()));
    }
    Ok(Subobject::Iso(inv))
}

#[derive(Clone, Debug)]
pub enum OpenOfSpecK {
    Zero,
    Iso { map: RingHom, inverse: RingHom },
}

/// Classifies the basic open `K(A) -> B = K(A)[1/t_1 ... t_n]`.
pub fn open_of_spec_k(k: &FractionFieldObject, tags: &[Elem]) -> Result<OpenOfSpecK> {
    let field = k.field();
    let mut b = field.clone();
    let mut map = RingHom::identity(field);
    for t in tags {
        if !field.contains(t) {
            return Err(Error::InvalidInput(format!("tag {t:?} is not in {field}")));
        }
        let (next, h) = localize_ring(&b, &map.apply(t)?)?;
        map = map.then(&h)?;
        b = next;
    }
    classify_open(&map)
}

/// `B = K (+) T` as `K`-modules with `T` the cokernel of `K -> B`; an immersion
/// forces `T = 0` unless `B = 0`.
pub fn classify_open(map: &RingHom) -> Result<OpenOfSpecK> {
    if map.target.is_zero_ring() {
        return Ok(OpenOfSpecK::Zero);
    }
    if !is_bijective(map)? {
        return Err(Error::NotWellDefined(format!("{} is a nonzero open with T != 0", map.describe())));
    }
    let inverse = invert(map)?;
    if !map.is_inverse_pair(&inverse)? {
        return Err(Error::NotWellDefined("inverse check failed".into()));
    }
    Ok(OpenOfSpecK::Iso { map: map.clone(), inverse })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::rational::q;
    use crate::presheaf::FinitePoset;

    fn px(cs: &[i64]) -> Elem {
        Elem::P(Poly::from_ints(cs))
    }

    fn fx(n: &[i64], d: &[i64]) -> Elem {
        Elem::F(RatFunc::new(Poly::from_ints(n), Poly::from_ints(d)).unwrap())
    }

    #[test]
    fn polynomial_ring() {
        let k = FractionFieldObject::new(&MonoidObject::from_ring(ExplicitRing::poly("x")).unwrap()).unwrap();
        assert_eq!(k.field(), &ExplicitRing::fraction("x"));
        assert!(k.certificate().0.is_identity());
        assert!(k.check_idempotence(7).unwrap().holds());
    }

    #[test]
    fn rationals_are_their_own_field() {
        let k = FractionFieldObject::new(&MonoidObject::from_ring(ExplicitRing::Rationals).unwrap()).unwrap();
        assert_eq!(k.field(), &ExplicitRing::Rationals);
        assert!(k.canonical()[0].is_identity());
    }

    #[test]
    fn punctured_line_presheaf() {
        let poset = FinitePoset::from_names(&["U", "X"], &[("U", "X")]).unwrap();
        let r = ExplicitRing::poly("x");
        let (l, h) = localize_ring(&r, &px(&[0, 1])).unwrap();
        let a = MonoidObject::from_presheaf(RingPresheaf::new(poset, vec![l, r], vec![((1, 0), h)]).unwrap()).unwrap();
        let k = FractionFieldObject::new(&a).unwrap();
        assert_eq!(k.endo_closed().ring, ExplicitRing::fraction("x"));
        let (f, b) = k.certificate();
        assert!(f.is_inverse_pair(b).unwrap());
        assert!(k.check_idempotence(1).unwrap().holds());
    }

    #[test]
    fn not_integral() {
        let a = MonoidObject::from_ring(ExplicitRing::quotient("x", &Poly::from_ints(&[-1, 0, 1]), 12).unwrap()).unwrap();
        assert!(matches!(FractionFieldObject::new(&a), Err(Error::NotIntegral(_))));
    }

    #[test]
    fn universal_factor_examples() {
        let r = ExplicitRing::poly("x");
        let k = FractionFieldObject::new(&MonoidObject::from_ring(r.clone()).unwrap()).unwrap();
        assert!(k.universal_factor(k.to_field()).unwrap().is_identity());
        let at_one = RingHom::new(r.clone(), ExplicitRing::Rationals, vec![Elem::Q(q(1))]).unwrap();
        assert_eq!(k.universal_factor(&at_one), Err(Error::NotInvertibleDenominator("x - 1".into())));
        let sq = RingHom::new(r, ExplicitRing::fraction("y"), vec![fx(&[0, 0, 1], &[1])]).unwrap();
        let u = k.universal_factor(&sq).unwrap();
        assert_eq!(u.images, vec![fx(&[0, 0, 1], &[1])]);
    }

    #[test]
    fn stages_are_directed() {
        let k = FractionFieldObject::new(&MonoidObject::from_ring(ExplicitRing::poly("x")).unwrap()).unwrap();
        let (s, t) = (px(&[0, 1]), px(&[-1, 1]));
        let st = px(&[0, -1, 1]);
        let via = k.stage_map(&s, &t).unwrap()[0].then(&k.stage_to_closed(&st).unwrap()[0]).unwrap();
        assert!(via.agrees_with(&k.stage_to_closed(&s).unwrap()[0]));
    }

    #[test]
    fn module_theory() {
        let k = FractionFieldObject::new(&MonoidObject::from_ring(ExplicitRing::poly("x")).unwrap()).unwrap();
        let kf = k.field().clone();
        let rel = Matrix::from_vec(2, 1, vec![fx(&[0, 1], &[1]), fx(&[1, 1], &[1])]);
        let g = KModule::new(&k, 2, rel).unwrap();
        assert_eq!(g.free_rank().unwrap().rank, 1);
        assert_eq!(KModule::free(&k, 3).unwrap().free_rank().unwrap().rank, 3);

        let one = Module::free(&kf, 1).unwrap();
        let two = Module::free(&kf, 2).unwrap();
        let diag = ModuleMorphism::new(one.clone(), two.clone(), Matrix::from_vec(2, 1, vec![kf.one(), kf.one()])).unwrap();
        let p = split_mono(&diag).unwrap();
        assert!(diag.then(&p).unwrap().is_identity());

        let proj = ModuleMorphism::new(two.clone(), one.clone(), Matrix::from_vec(1, 2, vec![kf.one(), kf.zero()])).unwrap();
        let g = lift_through_epi(&proj, &ModuleMorphism::identity(&one)).unwrap();
        assert!(g.then(&proj).unwrap().is_identity());
        assert!(matches!(lift_through_epi(&diag, &ModuleMorphism::zero(&one, &two)), Err(Error::NotEpi)));

        let times = ModuleMorphism::multiplication(&one, &fx(&[-1, 1], &[1]));
        match subobject_dichotomy(&times).unwrap() {
            Subobject::Iso(inv) => assert_eq!(inv.matrix.get(0, 0), &fx(&[1], &[-1, 1])),
            Subobject::Zero => panic!("nonzero subobject"),
        }
        let zero = Module::zero(&kf, EngineKind::Pid).unwrap();
        assert!(matches!(subobject_dichotomy(&ModuleMorphism::zero(&zero, &one)).unwrap(), Subobject::Zero));
    }

    #[test]
    fn opens_of_spec_k() {
        let k = FractionFieldObject::new(&MonoidObject::from_ring(ExplicitRing::poly("x")).unwrap()).unwrap();
        assert!(matches!(open_of_spec_k(&k, &[]).unwrap(), OpenOfSpecK::Iso { .. }));
        assert!(matches!(open_of_spec_k(&k, &[fx(&[3], &[1])]).unwrap(), OpenOfSpecK::Iso { .. }));
        assert!(matches!(open_of_spec_k(&k, &[fx(&[0], &[1])]).unwrap(), OpenOfSpecK::Zero));
    }
}

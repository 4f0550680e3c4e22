//! Presheaves of rings and modules on finite posets, with pointwise tensor
//! products and natural transformations computed as finite limits.

mod poset;

use std::collections::BTreeMap;

pub use poset::FinitePoset;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::fpcat::localize::{induced_map, localize_ring};
use crate::fpcat::module::{order_q_dimension, to_e, to_q};
use crate::fpcat::{Elem, EngineKind, ExplicitRing, FdAlgebra, Module, ModuleMorphism, RingHom};
use crate::kernel::matrix::{qlin, Matrix, QField, Ring};
use crate::kernel::rational::Rational;

/// A presheaf of rings: a ring per element and a restriction `A(p) -> A(q)` for `q < p`.
#[derive(Clone, Debug, PartialEq)]
pub struct RingPresheaf {
    poset: FinitePoset,
    rings: Vec<ExplicitRing>,
    restr: BTreeMap<(usize, usize), RingHom>,
    engine: EngineKind,
}

/// Completes `given` along composites `p > r > q`; every strict pair must end up covered.
fn complete<T: Clone>(
    poset: &FinitePoset,
    mut given: BTreeMap<(usize, usize), T>,
    compose: impl Fn(usize, usize, usize, &T, &T) -> Result<T>,
) -> Result<BTreeMap<(usize, usize), T>> {
    loop {
        let mut added = false;
        for (p, q) in poset.strict_pairs() {
            if given.contains_key(&(p, q)) {
                continue;
            }
            if let Some(r) = poset.between(q, p).into_iter().find(|r| given.contains_key(&(p, *r)) && given.contains_key(&(*r, q))) {
                let c = compose(p, r, q, &given[&(p, r)], &given[&(r, q)])?;
                given.insert((p, q), c);
                added = true;
            }
        }
        if !added {
            break;
        }
    }
    if let Some((p, q)) = poset.strict_pairs().into_iter().find(|k| !given.contains_key(k)) {
        return Err(Error::InvalidInput(format!(
            "no restriction from {} to {}",
            poset.name(p),
            poset.name(q)
        )));
    }
    if let Some(&(p, q)) = given.keys().find(|&&(p, q)| p == q || !poset.leq(q, p)) {
        return Err(Error::InvalidInput(format!(
            "restriction from {} to {} does not follow the order",
            poset.name(p),
            poset.name(q)
        )));
    }
    Ok(given)
}

/// The module engine shared by all points. Zero rings carry only the zero
/// module and do not constrain the choice.
fn uniform_engine(rings: &[ExplicitRing]) -> Result<EngineKind> {
    let live: Vec<&ExplicitRing> = rings.iter().filter(|r| !r.is_zero_ring()).collect();
    if live.iter().all(|r| r.is_pid_class()) {
        return Ok(EngineKind::Pid);
    }
    if live.iter().all(|r| r.is_fd_able()) {
        return Ok(EngineKind::FinDim);
    }
    Err(Error::UnsupportedRing(
        "presheaf mixes PID-class and finite-dimensional rings that share no engine".into(),
    ))
}

impl RingPresheaf {
    pub fn new(
        poset: FinitePoset,
        rings: Vec<ExplicitRing>,
        restrictions: Vec<((usize, usize), RingHom)>,
    ) -> Result<Self> {
        if rings.len() != poset.len() {
            return Err(Error::ShapeMismatch(format!("{} rings for {} poset elements", rings.len(), poset.len())));
        }
        for ((p, q), h) in &restrictions {
            if *p >= rings.len() || *q >= rings.len() || h.source != rings[*p] || h.target != rings[*q] {
                return Err(Error::ShapeMismatch(format!("restriction ({p}, {q}) has the wrong rings")));
            }
            h.validate()?;
        }
        let restr = complete(&poset, restrictions.into_iter().collect(), |_, _, _, a, b| a.then(b))?;
        for (p, q) in poset.strict_pairs() {
            for r in poset.between(q, p) {
                if !restr[&(p, r)].then(&restr[&(r, q)])?.agrees_with(&restr[&(p, q)]) {
                    return Err(Error::NotWellDefined(format!(
                        "restrictions do not compose along {} > {} > {}",
                        poset.name(p),
                        poset.name(r),
                        poset.name(q)
                    )));
                }
            }
        }
        let engine = uniform_engine(&rings)?;
        Ok(RingPresheaf { poset, rings, restr, engine })
    }

    /// The same ring everywhere with identity restrictions.
    pub fn constant(poset: FinitePoset, ring: ExplicitRing) -> Result<Self> {
        let rings = vec![ring.clone(); poset.len()];
        let restr = poset.covers().into_iter().map(|k| (k, RingHom::identity(&ring))).collect();
        Self::new(poset, rings, restr)
    }

    pub fn poset(&self) -> &FinitePoset {
        &self.poset
    }

    pub fn rings(&self) -> &[ExplicitRing] {
        &self.rings
    }

    pub fn ring(&self, p: usize) -> &ExplicitRing {
        &self.rings[p]
    }

    pub fn engine(&self) -> EngineKind {
        self.engine
    }

    pub fn restriction(&self, p: usize, q: usize) -> RingHom {
        if p == q {
            return RingHom::identity(&self.rings[p]);
        }
        self.restr[&(p, q)].clone()
    }

    /// Given restrictions along covering pairs.
    pub fn cover_restrictions(&self) -> Vec<((usize, usize), RingHom)> {
        self.poset.covers().into_iter().map(|k| (k, self.restr[&k].clone())).collect()
    }

    /// Presheaf with restricted element `s_p` at each point, given at the tops of
    /// components; the point values are the restrictions.
    pub fn section_from_tops(&self, tops: &[(usize, Elem)]) -> Result<Vec<Elem>> {
        let mut out = vec![None; self.poset.len()];
        for comp in self.poset.components() {
            let top = self
                .poset
                .top(&comp)
                .ok_or_else(|| Error::UnsupportedRing("component without a greatest element".into()))?;
            let s = tops
                .iter()
                .find(|(t, _)| *t == top)
                .map(|(_, s)| s.clone())
                .ok_or_else(|| Error::InvalidInput(format!("no value at {}", self.poset.name(top))))?;
            for p in comp {
                out[p] = Some(self.restriction(top, p).apply(&s)?);
            }
        }
        Ok(out.into_iter().map(|e| e.expect("every point lies in a component")).collect())
    }

    pub fn describe(&self) -> String {
        let parts: Vec<String> = (0..self.poset.len())
            .map(|p| format!("{}: {}", self.poset.name(p), self.rings[p].describe()))
            .collect();
        format!("presheaf {{{}}}", parts.join(", "))
    }
}

impl RingPresheaf {
    /// Whether `s` (one element per point) is compatible with all restrictions.
    pub fn is_section(&self, s: &[Elem]) -> Result<bool> {
        if s.len() != self.rings.len() {
            return Ok(false);
        }
        for (p, q) in self.poset.covers() {
            if !self.rings[q].eq_elem(&self.restr[&(p, q)].apply(&s[p])?, &s[q]) {
                return Ok(false);
            }
        }
        Ok(s.iter().zip(&self.rings).all(|(e, r)| r.contains(e)))
    }

    /// Pointwise localization at a section, with the canonical maps `A(p) -> A(p)_{s_p}`.
    pub fn localize(&self, s: &[Elem]) -> Result<(RingPresheaf, Vec<RingHom>)> {
        if !self.is_section(s)? {
            return Err(Error::InvalidInput("localizing at a family that is not a section".into()));
        }
        let mut rings = Vec::new();
        let mut canon = Vec::new();
        for (r, x) in self.rings.iter().zip(s) {
            let (l, h) = localize_ring(r, x)?;
            rings.push(l);
            canon.push(h);
        }
        let restr = self
            .poset
            .covers()
            .into_iter()
            .map(|(p, q)| Ok(((p, q), induced_map(&self.restr[&(p, q)], &s[p])?)))
            .collect::<Result<Vec<_>>>()?;
        Ok((RingPresheaf::new(self.poset.clone(), rings, restr)?, canon))
    }

    /// The ring presheaf as a module presheaf over itself.
    pub fn unit_module(&self) -> Result<ModulePresheaf> {
        ModulePresheaf::unit(self)
    }
}

/// A presheaf of modules. Restrictions are semilinear: for presented modules
/// `rho(v) = S r(v)` with `S` over the smaller ring; for finite-dimensional
/// modules `S` is a Q-matrix with `S a = r(a) S`.
#[derive(Clone, Debug, PartialEq)]
pub struct ModulePresheaf {
    rings: RingPresheaf,
    modules: Vec<Module>,
    restr: BTreeMap<(usize, usize), Matrix<Elem>>,
}

/// `A(q) (x) M` along `h: A(p) -> A(q)` for a presented module.
fn base_change(m: &Module, h: &RingHom) -> Result<Module> {
    match m {
        Module::Pid(pm) => {
            let rel = pm.rel.try_map(|e| h.apply(e))?;
            Module::presented_in(&h.target, pm.gens, rel, EngineKind::Pid)
        }
        Module::Fd(_) => Err(Error::UnsupportedRing("base change is only used for presented modules".into())),
    }
}

/// A point module in the presheaf's engine; zero rings get the zero module.
fn point_module(ring: &ExplicitRing, engine: EngineKind, gens: usize) -> Result<Module> {
    if ring.is_zero_ring() {
        return Module::zero(ring, EngineKind::FinDim);
    }
    Module::free_in(ring, gens, engine)
}

/// Q-matrix of the action of a ring element on a finite-dimensional module.
fn fd_action(m: &Module, e: &Elem) -> Matrix<Rational> {
    match m {
        Module::Fd(f) => f.act(&f.ring.to_coords(e)),
        Module::Pid(_) => unreachable!("finite-dimensional engine"),
    }
}

impl ModulePresheaf {
    /// Restrictions may be given along any subset of pairs that generates
    /// the order; the rest are composed.
    pub fn new(
        rings: RingPresheaf,
        modules: Vec<Module>,
        restrictions: Vec<((usize, usize), Matrix<Elem>)>,
    ) -> Result<Self> {
        let n = rings.poset.len();
        if modules.len() != n {
            return Err(Error::ShapeMismatch(format!("{} modules for {n} points", modules.len())));
        }
        for (p, m) in modules.iter().enumerate() {
            let ring_ok = m.ring() == rings.ring(p);
            let engine_ok = m.engine() == rings.engine || rings.ring(p).is_zero_ring();
            if !ring_ok || !engine_ok {
                return Err(Error::ShapeMismatch(format!(
                    "module at {} is not over {} in the shared engine",
                    rings.poset.name(p),
                    rings.ring(p).describe()
                )));
            }
        }
        for ((p, q), s) in &restrictions {
            if *p >= n || *q >= n || s.rows() != modules[*q].gens() || s.cols() != modules[*p].gens() {
                return Err(Error::ShapeMismatch(format!("restriction ({p}, {q}) has the wrong shape")));
            }
        }
        let mut out = ModulePresheaf { rings, modules, restr: BTreeMap::new() };
        let restr = complete(&out.rings.poset, restrictions.into_iter().collect(), |p, r, q, a, b| {
            out.compose(p, r, q, a, b)
        })?;
        out.restr = restr;
        out.validate()?;
        Ok(out)
    }

    /// `S_pq = S_rq r_rq(S_pr)`, or the plain product for Q-matrices.
    fn compose(&self, _p: usize, r: usize, q: usize, s_pr: &Matrix<Elem>, s_rq: &Matrix<Elem>) -> Result<Matrix<Elem>> {
        if self.is_trivial_at(q) {
            return Ok(Matrix::from_vec(0, s_pr.cols(), Vec::new()));
        }
        match self.rings.engine {
            EngineKind::FinDim => Ok(to_e(&to_q(s_rq).mul(&QField, &to_q(s_pr)))),
            EngineKind::Pid => {
                let h = self.rings.restriction(r, q);
                let moved = s_pr.try_map(|e| h.apply(e))?;
                Ok(s_rq.mul(&self.rings.ring(q).pid()?, &moved))
            }
        }
    }

    fn is_trivial_at(&self, p: usize) -> bool {
        self.rings.ring(p).is_zero_ring() || self.modules[p].gens() == 0
    }

    /// The restriction as a morphism out of the base change of `M(p)`
    /// (presented modules only).
    fn linearized(&self, p: usize, q: usize) -> Result<ModuleMorphism> {
        let src = base_change(&self.modules[p], &self.rings.restriction(p, q))?;
        Ok(ModuleMorphism::new_unchecked(src, self.modules[q].clone(), self.restriction_matrix(p, q)))
    }

    fn validate(&self) -> Result<()> {
        let poset = &self.rings.poset;
        for (p, q) in poset.strict_pairs() {
            if self.is_trivial_at(q) {
                continue;
            }
            let ok = match self.rings.engine {
                EngineKind::Pid => self.linearized(p, q)?.is_well_defined(),
                EngineKind::FinDim if self.modules[p].gens() == 0 => true,
                EngineKind::FinDim => {
                    let s = to_q(&self.restr[&(p, q)]);
                    let a = self.rings.ring(p);
                    let h = self.rings.restriction(p, q);
                    let d = a.q_dim().unwrap_or(0);
                    (0..d).all(|i| {
                        let mut c = vec![Rational::from_integer(0.into()); d];
                        c[i] = Rational::from_integer(1.into());
                        let b = a.from_coords(&c);
                        let image = h.apply(&b).expect("element of the source ring");
                        s.mul(&QField, &fd_action(&self.modules[p], &b))
                            == fd_action(&self.modules[q], &image).mul(&QField, &s)
                    })
                }
            };
            if !ok {
                return Err(Error::NotWellDefined(format!(
                    "restriction from {} to {} is not a semilinear map of modules",
                    poset.name(p),
                    poset.name(q)
                )));
            }
        }
        for (p, q) in poset.strict_pairs() {
            if self.is_trivial_at(q) {
                continue;
            }
            for r in poset.between(q, p) {
                let composed = self.compose(p, r, q, &self.restr[&(p, r)], &self.restr[&(r, q)])?;
                let direct = self.restriction_matrix(p, q);
                let same = match self.rings.engine {
                    EngineKind::FinDim => composed == direct,
                    EngineKind::Pid => {
                        let lin = self.linearized(p, q)?;
                        lin.equals(&ModuleMorphism::new_unchecked(lin.source.clone(), lin.target.clone(), composed))
                    }
                };
                if !same {
                    return Err(Error::NotWellDefined(format!(
                        "module restrictions do not compose along {} > {} > {}",
                        poset.name(p),
                        poset.name(r),
                        poset.name(q)
                    )));
                }
            }
        }
        Ok(())
    }

    /// The unit object: each ring as a module over itself.
    pub fn unit(rings: &RingPresheaf) -> Result<Self> {
        let e = rings.engine;
        let modules = rings
            .rings
            .iter()
            .map(|r| point_module(r, e, 1))
            .collect::<Result<Vec<_>>>()?;
        let mut restr = Vec::new();
        for (p, q) in rings.poset.covers() {
            let target = rings.ring(q);
            let s = if target.is_zero_ring() {
                Matrix::from_vec(0, modules[p].gens(), Vec::new())
            } else {
                match e {
                    EngineKind::Pid => Matrix::identity(target, 1),
                    EngineKind::FinDim => {
                        // column i: coordinates of the image of the i-th basis element
                        let a = rings.ring(p);
                        let h = rings.restriction(p, q);
                        let d = modules[p].gens();
                        let cols = (0..d)
                            .map(|i| {
                                let mut c = vec![Rational::from_integer(0.into()); d];
                                c[i] = Rational::from_integer(1.into());
                                Ok(target.to_coords(&h.apply(&a.from_coords(&c))?))
                            })
                            .collect::<Result<Vec<_>>>()?;
                        to_e(&Matrix::from_cols(cols, modules[q].gens()))
                    }
                }
            };
            restr.push(((p, q), s));
        }
        ModulePresheaf::new(rings.clone(), modules, restr)
    }

    pub fn zero(rings: &RingPresheaf) -> Result<Self> {
        let modules = rings
            .rings
            .iter()
            .map(|r| point_module(r, rings.engine, 0))
            .collect::<Result<Vec<_>>>()?;
        let restr = rings
            .poset
            .covers()
            .into_iter()
            .map(|k| (k, Matrix::from_vec(0, 0, Vec::new())))
            .collect();
        ModulePresheaf::new(rings.clone(), modules, restr)
    }

    pub fn rings(&self) -> &RingPresheaf {
        &self.rings
    }

    pub fn poset(&self) -> &FinitePoset {
        &self.rings.poset
    }

    pub fn module(&self, p: usize) -> &Module {
        &self.modules[p]
    }

    pub fn modules(&self) -> &[Module] {
        &self.modules
    }

    pub fn is_zero(&self) -> bool {
        self.modules.iter().all(|m| m.is_zero())
    }

    pub fn restriction_matrix(&self, p: usize, q: usize) -> Matrix<Elem> {
        if p == q {
            return ModuleMorphism::identity(&self.modules[p]).matrix;
        }
        self.restr[&(p, q)].clone()
    }

    /// Restriction of an element of `M(p)` to `M(q)`.
    pub fn restrict(&self, p: usize, q: usize, v: &[Elem]) -> Result<Vec<Elem>> {
        if self.is_trivial_at(q) {
            return Ok(Vec::new());
        }
        let s = self.restriction_matrix(p, q);
        let col = Matrix::column_vector(v.to_vec());
        Ok(match self.rings.engine {
            EngineKind::FinDim => to_e(&to_q(&s).mul(&QField, &to_q(&col))).col(0),
            EngineKind::Pid => {
                let h = self.rings.restriction(p, q);
                s.mul(&self.rings.ring(q).pid()?, &col.try_map(|e| h.apply(e))?).col(0)
            }
        })
    }

    pub fn q_dimensions(&self) -> Vec<Option<usize>> {
        self.modules.iter().map(|m| m.q_dimension()).collect()
    }

    pub fn describe(&self) -> String {
        let parts: Vec<String> = (0..self.modules.len())
            .map(|p| format!("{}: {}", self.poset().name(p), self.modules[p].describe()))
            .collect();
        format!("{{{}}}", parts.join(", "))
    }

    /// Pointwise tensor product over the local rings.
    pub fn tensor(&self, other: &ModulePresheaf) -> Result<ModulePresheaf> {
        self.tensor_data(other).map(|(t, _)| t)
    }

    #[allow(clippy::type_complexity)]
    fn tensor_data(
        &self,
        other: &ModulePresheaf,
    ) -> Result<(ModulePresheaf, Vec<Option<(Matrix<Rational>, Matrix<Rational>)>>)> {
        if self.rings != other.rings {
            return Err(Error::ShapeMismatch("tensor of presheaves over different rings".into()));
        }
        let mut modules = Vec::new();
        let mut projs = Vec::new();
        for (a, b) in self.modules.iter().zip(&other.modules) {
            let (t, pr) = a.tensor_with_projection(b)?;
            modules.push(t);
            projs.push(pr);
        }
        let mut restr = Vec::new();
        for (p, q) in self.poset().covers() {
            let (sm, sn) = (&self.restr[&(p, q)], &other.restr[&(p, q)]);
            let s = if self.is_trivial_at(q) || other.is_trivial_at(q) {
                Matrix::from_vec(modules[q].gens(), modules[p].gens(), vec![self.rings.ring(q).zero(); modules[q].gens() * modules[p].gens()])
            } else {
                match self.rings.engine {
                    EngineKind::Pid => sm.kronecker(&self.rings.ring(q).pid()?, sn),
                    EngineKind::FinDim => {
                        let k = to_q(sm).kronecker(&QField, &to_q(sn));
                        let (pr_q, _) = projs[q].as_ref().expect("finite-dimensional tensor");
                        let (_, sec_p) = projs[p].as_ref().expect("finite-dimensional tensor");
                        to_e(&pr_q.mul(&QField, &k).mul(&QField, sec_p))
                    }
                }
            };
            restr.push(((p, q), s));
        }
        Ok((ModulePresheaf::new(self.rings.clone(), modules, restr)?, projs))
    }

    /// Natural transformations `self -> other`.
    pub fn hom(&self, other: &ModulePresheaf) -> Result<PresheafHom> {
        if self.rings != other.rings {
            return Err(Error::ShapeMismatch("Hom between presheaves over different rings".into()));
        }
        match self.rings.engine {
            EngineKind::FinDim => fd_presheaf_hom(self, other),
            EngineKind::Pid => pid_presheaf_hom(self, other),
        }
    }
}

/// A natural transformation, one component per point.
#[derive(Clone, Debug, PartialEq)]
pub struct NatTrans {
    pub source: ModulePresheaf,
    pub target: ModulePresheaf,
    pub components: Vec<ModuleMorphism>,
}

impl NatTrans {
    pub fn new(source: ModulePresheaf, target: ModulePresheaf, components: Vec<ModuleMorphism>) -> Result<Self> {
        let t = NatTrans { source, target, components };
        if t.components.len() != t.source.modules.len()
            || t.components.iter().enumerate().any(|(p, f)| f.source != t.source.modules[p] || f.target != t.target.modules[p])
        {
            return Err(Error::ShapeMismatch("components do not match the presheaves".into()));
        }
        if !t.is_natural()? {
            return Err(Error::NotWellDefined("components do not commute with restrictions".into()));
        }
        Ok(t)
    }

    pub fn identity(m: &ModulePresheaf) -> Self {
        let components = m.modules.iter().map(ModuleMorphism::identity).collect();
        NatTrans { source: m.clone(), target: m.clone(), components }
    }

    pub fn zero(m: &ModulePresheaf, n: &ModulePresheaf) -> Self {
        let components = m.modules.iter().zip(&n.modules).map(|(a, b)| ModuleMorphism::zero(a, b)).collect();
        NatTrans { source: m.clone(), target: n.clone(), components }
    }

    /// `f_q rho^M = rho^N f_p` along every covering pair.
    pub fn is_natural(&self) -> Result<bool> {
        let (m, n) = (&self.source, &self.target);
        for (p, q) in m.poset().covers() {
            if n.is_trivial_at(q) || m.modules[p].gens() == 0 {
                continue;
            }
            let ok = match m.rings.engine {
                EngineKind::FinDim => {
                    let lhs = to_q(&self.components[q].matrix).mul(&QField, &to_q(&m.restr[&(p, q)]));
                    let rhs = to_q(&n.restr[&(p, q)]).mul(&QField, &to_q(&self.components[p].matrix));
                    lhs == rhs
                }
                EngineKind::Pid => {
                    let pv = m.rings.ring(q).pid()?;
                    let h = m.rings.restriction(p, q);
                    let lhs = self.components[q].matrix.mul(&pv, &m.restr[&(p, q)]);
                    let rhs = n.restr[&(p, q)].mul(&pv, &self.components[p].matrix.try_map(|e| h.apply(e))?);
                    let src = base_change(&m.modules[p], &h)?;
                    let tgt = n.modules[q].clone();
                    ModuleMorphism::new_unchecked(src.clone(), tgt.clone(), lhs)
                        .equals(&ModuleMorphism::new_unchecked(src, tgt, rhs))
                }
            };
            if !ok {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `other` after `self`.
    pub fn then(&self, other: &NatTrans) -> Result<NatTrans> {
        if self.target != other.source {
            return Err(Error::ShapeMismatch("composing transformations with mismatched presheaves".into()));
        }
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(f, g)| f.then(g))
            .collect::<Result<Vec<_>>>()?;
        Ok(NatTrans { source: self.source.clone(), target: other.target.clone(), components })
    }

    pub fn add(&self, other: &NatTrans) -> Result<NatTrans> {
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(f, g)| f.add(g))
            .collect::<Result<Vec<_>>>()?;
        Ok(NatTrans { source: self.source.clone(), target: self.target.clone(), components })
    }

    /// Pointwise tensor product of transformations.
    pub fn tensor(&self, other: &NatTrans) -> Result<NatTrans> {
        let source = self.source.tensor(&other.source)?;
        let target = self.target.tensor(&other.target)?;
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(f, g)| f.tensor(g))
            .collect::<Result<Vec<_>>>()?;
        Ok(NatTrans { source, target, components })
    }

    pub fn equals(&self, other: &NatTrans) -> bool {
        self.components.len() == other.components.len()
            && self.components.iter().zip(&other.components).all(|(f, g)| f.equals(g))
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|f| f.is_zero())
    }

    pub fn is_mono(&self) -> bool {
        self.components.iter().all(|f| f.is_mono())
    }

    pub fn is_epi(&self) -> bool {
        self.components.iter().all(|f| f.is_epi())
    }

    pub fn is_iso(&self) -> bool {
        self.components.iter().all(|f| f.is_iso())
    }
}

/// `Hom(M, N)` of presheaves: generators with annihilator orders. Orders of
/// generators computed over the Q-engine are zero over Q; over presented
/// modules they live in the ring at `anchors[i]`.
#[derive(Clone, Debug)]
pub struct PresheafHom {
    pub source: ModulePresheaf,
    pub target: ModulePresheaf,
    pub basis: Vec<NatTrans>,
    pub orders: Vec<Elem>,
    pub anchors: Vec<Option<usize>>,
}

impl PresheafHom {
    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    fn order_ring(&self, i: usize) -> ExplicitRing {
        match self.anchors[i] {
            Some(t) => self.source.rings.ring(t).clone(),
            None => ExplicitRing::Rationals,
        }
    }

    pub fn free_rank(&self) -> usize {
        (0..self.basis.len()).filter(|&i| self.order_ring(i).is_zero(&self.orders[i])).count()
    }

    pub fn q_dimension(&self) -> Option<usize> {
        (0..self.basis.len()).map(|i| order_q_dimension(&self.order_ring(i), &self.orders[i])).sum()
    }

    fn flat(t: &NatTrans) -> Vec<Rational> {
        t.components.iter().flat_map(|f| to_q(&f.matrix).vectorize()).collect()
    }

    /// Q-coordinates of a transformation in a Q-basis (finite-dimensional engine).
    pub fn coordinates(&self, t: &NatTrans) -> Option<Vec<Rational>> {
        if self.anchors.iter().any(|a| a.is_some()) {
            return None;
        }
        let target = Self::flat(t);
        let cols: Vec<Vec<Rational>> = self.basis.iter().map(Self::flat).collect();
        let b = Matrix::from_cols(cols, target.len());
        qlin::solve(&b, &Matrix::column_vector(target)).map(|s| s.col(0))
    }

    pub fn combination(&self, c: &[Rational]) -> NatTrans {
        let mut acc = NatTrans::zero(&self.source, &self.target);
        for (b, x) in self.basis.iter().zip(c) {
            if !x.is_zero() {
                let scaled = NatTrans {
                    source: b.source.clone(),
                    target: b.target.clone(),
                    components: b.components.iter().map(|f| f.scale_q(x)).collect(),
                };
                acc = acc.add(&scaled).expect("same presheaves");
            }
        }
        acc
    }

    /// Composition algebra of an endomorphism Q-basis; column `i*n + j`
    /// holds the coordinates of `b_i . b_j`.
    pub fn endo_algebra(&self) -> Result<FdAlgebra> {
        if self.source != self.target || self.anchors.iter().any(|a| a.is_some()) {
            return Err(Error::UnsupportedRing("composition algebra needs a Q-basis of endomorphisms".into()));
        }
        let n = self.basis.len();
        let mut mult = Matrix::zeros(&QField, n, n * n);
        for i in 0..n {
            for j in 0..n {
                let prod = self.basis[j].then(&self.basis[i])?;
                let c = self.coordinates(&prod).ok_or_else(|| Error::NotWellDefined("composite outside Hom".into()))?;
                for (k, v) in c.into_iter().enumerate() {
                    mult.set(k, i * n + j, v);
                }
            }
        }
        let unit = self
            .coordinates(&NatTrans::identity(&self.source))
            .ok_or_else(|| Error::NotWellDefined("identity outside Hom".into()))?;
        FdAlgebra::new(mult, unit)
    }
}

/// Equalizer over Q: pointwise Hom bases, then the naturality constraints on
/// the coefficients.
fn fd_presheaf_hom(m: &ModulePresheaf, n: &ModulePresheaf) -> Result<PresheafHom> {
    let homs = m
        .modules
        .iter()
        .zip(&n.modules)
        .map(|(a, b)| a.hom(b))
        .collect::<Result<Vec<_>>>()?;
    let offsets: Vec<usize> = homs
        .iter()
        .scan(0, |acc, h| {
            let o = *acc;
            *acc += h.basis.len();
            Some(o)
        })
        .collect();
    let total: usize = homs.iter().map(|h| h.basis.len()).sum();
    let mut sys = Matrix::zeros(&QField, 0, total);
    for (p, q) in m.poset().covers() {
        let sm = to_q(&m.restr[&(p, q)]);
        let sn = to_q(&n.restr[&(p, q)]);
        let rows = n.modules[q].gens() * m.modules[p].gens();
        let mut block = Matrix::zeros(&QField, rows, total);
        for (j, b) in homs[q].basis.iter().enumerate() {
            let v = to_q(&b.matrix).mul(&QField, &sm).vectorize();
            for (i, x) in v.into_iter().enumerate() {
                block.set(i, offsets[q] + j, x);
            }
        }
        for (j, b) in homs[p].basis.iter().enumerate() {
            let v = sn.mul(&QField, &to_q(&b.matrix)).vectorize();
            for (i, x) in v.into_iter().enumerate() {
                let cur = block.get(i, offsets[p] + j).clone();
                block.set(i, offsets[p] + j, cur - x);
            }
        }
        sys = sys.vcat(&block);
    }
    let null = qlin::nullspace(&sys);
    let mut basis = Vec::new();
    for c in 0..null.cols() {
        let v = null.col(c);
        let components = homs
            .iter()
            .enumerate()
            .map(|(p, h)| h.combination(&v[offsets[p]..offsets[p] + h.basis.len()]))
            .collect();
        basis.push(NatTrans { source: m.clone(), target: n.clone(), components });
    }
    let k = basis.len();
    Ok(PresheafHom {
        source: m.clone(),
        target: n.clone(),
        basis,
        orders: vec![Elem::Q(Rational::zero()); k],
        anchors: vec![None; k],
    })
}

/// Over presented modules, each component needs a greatest element `t` and
/// a source generated from `t`: `A(q) (x) M(t) -> M(q)` must be an
/// isomorphism. Then a transformation is its top component, and
/// `f_q = S^N r(F_t) (S^M)^{-1}`.
fn pid_presheaf_hom(m: &ModulePresheaf, n: &ModulePresheaf) -> Result<PresheafHom> {
    let poset = m.poset();
    let mut basis = Vec::new();
    let mut orders = Vec::new();
    let mut anchors = Vec::new();
    for comp in poset.components() {
        let t = poset.top(&comp).ok_or_else(|| {
            Error::UnsupportedRing("Hom of presented presheaves needs a greatest element in each component".into())
        })?;
        let mut inverses = BTreeMap::new();
        for &q in comp.iter().filter(|&&q| q != t) {
            if m.is_trivial_at(q) && m.modules[t].gens() == 0 {
                continue;
            }
            if m.rings.ring(q).is_zero_ring() {
                continue;
            }
            let lin = m.linearized(t, q)?;
            let inv = lin.inverse().ok_or_else(|| {
                Error::UnsupportedRing(format!(
                    "source at {} is not generated by its restriction from {}",
                    poset.name(q),
                    poset.name(t)
                ))
            })?;
            inverses.insert(q, inv);
        }
        let local = m.modules[t].hom(&n.modules[t])?;
        for (f, order) in local.basis.iter().zip(&local.orders) {
            let mut components: Vec<ModuleMorphism> =
                m.modules.iter().zip(&n.modules).map(|(a, b)| ModuleMorphism::zero(a, b)).collect();
            components[t] = f.clone();
            for (&q, inv) in &inverses {
                let h = m.rings.restriction(t, q);
                let pv = m.rings.ring(q).pid()?;
                let moved = f.matrix.try_map(|e| h.apply(e))?;
                let mat = n.restriction_matrix(t, q).mul(&pv, &moved).mul(&pv, &inv.matrix);
                components[q] = ModuleMorphism::new_unchecked(m.modules[q].clone(), n.modules[q].clone(), mat);
            }
            basis.push(NatTrans { source: m.clone(), target: n.clone(), components });
            orders.push(order.clone());
            anchors.push(Some(t));
        }
    }
    Ok(PresheafHom { source: m.clone(), target: n.clone(), basis, orders, anchors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::poly::Poly;

    fn px(cs: &[i64]) -> Elem {
        Elem::P(Poly::from_ints(cs))
    }

    /// U <= X with Q[x] on X and Q[x][1/x] on U.
    fn punctured() -> RingPresheaf {
        let poset = FinitePoset::from_names(&["U", "X"], &[("U", "X")]).unwrap();
        let a = ExplicitRing::poly("x");
        let (l, h) = localize_ring(&a, &px(&[0, 1])).unwrap();
        RingPresheaf::new(poset, vec![l, a], vec![((1, 0), h)]).unwrap()
    }

    #[test]
    fn global_sections_of_punctured_line() {
        let a = punctured();
        let u = a.unit_module().unwrap();
        let h = u.hom(&u).unwrap();
        assert_eq!(h.basis.len(), 1);
        assert_eq!(h.free_rank(), 1);
        assert_eq!(h.anchors, vec![Some(1)]);
        assert!(h.basis[0].is_natural().unwrap());
        assert!(h.basis[0].equals(&NatTrans::identity(&u)));
    }

    #[test]
    fn antichain_hom_is_product() {
        let poset = FinitePoset::antichain(&["p", "q"]);
        let r = ExplicitRing::poly("x");
        let a = RingPresheaf::new(poset, vec![r.clone(), ExplicitRing::Rationals], vec![]).unwrap();
        let u = a.unit_module().unwrap();
        let h = u.hom(&u).unwrap();
        assert_eq!(h.basis.len(), 2);
        assert_eq!(h.free_rank(), 2);
    }

    #[test]
    fn hom_from_zero() {
        let a = punctured();
        let z = ModulePresheaf::zero(&a).unwrap();
        assert!(z.hom(&a.unit_module().unwrap()).unwrap().is_zero());
    }

    #[test]
    fn tensor_with_torsion() {
        let a = punctured();
        let rq = a.ring(0).clone();
        let m_x = Module::presented(a.ring(1), 1, Matrix::from_vec(1, 1, vec![px(&[0, 1])])).unwrap();
        let m_u = Module::zero(&rq, EngineKind::Pid).unwrap();
        let m = ModulePresheaf::new(a.clone(), vec![m_u, m_x], vec![((1, 0), Matrix::from_vec(0, 1, vec![]))]).unwrap();
        let t = m.tensor(&m).unwrap();
        assert_eq!(t.q_dimensions(), vec![Some(0), Some(1)]);
    }

    #[test]
    fn fd_global_sections() {
        // Q[x]/(x^2 - x) over X restricting to Q = Q[x]/(x - 1) over U
        let poset = FinitePoset::from_names(&["U", "X"], &[("U", "X")]).unwrap();
        let a = ExplicitRing::quotient("x", &Poly::from_ints(&[0, -1, 1]), 12).unwrap();
        let (l, h) = localize_ring(&a, &px(&[0, 1])).unwrap();
        let rp = RingPresheaf::new(poset, vec![l, a], vec![((1, 0), h)]).unwrap();
        assert_eq!(rp.engine(), EngineKind::FinDim);
        let u = rp.unit_module().unwrap();
        assert_eq!(u.hom(&u).unwrap().q_dimension(), Some(2));
        let poset = FinitePoset::from_names(&["U", "X"], &[("U", "X")]).unwrap();
        let nil = ExplicitRing::quotient("x", &Poly::from_ints(&[0, 0, 1]), 12).unwrap();
        let id = RingHom::identity(&nil);
        let rp = RingPresheaf::new(poset, vec![nil.clone(), nil], vec![((1, 0), id)]).unwrap();
        assert_eq!(rp.engine(), EngineKind::FinDim);
        let u = rp.unit_module().unwrap();
        let h = u.hom(&u).unwrap();
        assert_eq!(h.q_dimension(), Some(2));
        let alg = h.endo_algebra().unwrap();
        assert!(!alg.is_reduced());
    }

    #[test]
    fn inconsistent_restrictions_rejected() {
        let poset = FinitePoset::from_names(&["U", "V", "X"], &[("U", "V"), ("V", "X"), ("U", "X")]).unwrap();
        let r = ExplicitRing::poly("x");
        let id = RingHom::identity(&r);
        let shift = RingHom::new(r.clone(), r.clone(), vec![px(&[1, 1])]).unwrap();
        let res = RingPresheaf::new(
            poset,
            vec![r.clone(), r.clone(), r],
            vec![((2, 1), id.clone()), ((1, 0), id), ((2, 0), shift)],
        );
        assert!(matches!(res, Err(Error::NotWellDefined(_))));
    }
}

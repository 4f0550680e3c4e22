//! Schemes as finite diagrams of affine charts glued along basic opens, their
//! function fields, and rational maps between them.

pub mod fixtures;
mod ratmap;

pub use ratmap::RationalMap;

use std::collections::{BTreeMap, VecDeque};

use crate::error::{Error, Result};
use crate::fpcat::localize::{induced_map, localize_ring};
use crate::fpcat::{Elem, ExplicitRing, RingHom};
use crate::fracfield::{invert, FractionFieldObject};
use crate::kernel::matrix::Ring;
use crate::monoid::integral::describe_pair;
use crate::monoid::{localization_tensor, nilpotent_witness, sample, DomainCheck, MonoidObject};

#[derive(Clone, Debug, PartialEq)]
pub struct Chart {
    pub name: String,
    pub monoid: MonoidObject,
}

impl Chart {
    pub fn ring(&self) -> &ExplicitRing {
        self.monoid.ring().expect("charts are explicit algebras")
    }

    pub fn is_trivial(&self) -> bool {
        self.ring().is_zero_ring()
    }
}

/// An open immersion `Spec(to) -> Spec(from)` given by a ring map that is
/// claimed to be the localization of `from` at the product of `tags`.
#[derive(Clone, Debug, PartialEq)]
pub struct ImmersionEdge {
    pub from: usize,
    pub to: usize,
    pub tags: Vec<Elem>,
    pub map: RingHom,
}

/// How an edge matches the localization at its tags.
#[derive(Clone, Debug)]
pub enum EdgeCertificate {
    /// The edge is literally the canonical map.
    Canonical,
    /// `theta: (from)_s -> to` with `theta . canonical = map`, and its inverse.
    Isomorphic { theta: RingHom, inverse: RingHom },
}

#[derive(Clone, Debug)]
pub struct ZariskiDiagram {
    charts: Vec<Chart>,
    edges: Vec<ImmersionEdge>,
    certificates: Vec<EdgeCertificate>,
    intersections: BTreeMap<(usize, usize), usize>,
}

/// Outcome of the reduced + irreducible implies integral check.
#[derive(Clone, Debug, PartialEq)]
pub enum IntegralityReport {
    Integral,
    HypothesisFails { reason: String },
    /// Two non-trivial opens with trivial intersection; `witness` is `(s, t)`
    /// with `st = 0` when the opens are `D(s)` and `D(t)` of one chart.
    IrreducibilityFails { left: String, right: String, witness: Option<(Elem, Elem)> },
}

/// `K(B) ~ B (x)_A K(A) ~ K(A)` along an edge `A -> B`.
#[derive(Clone, Debug)]
pub struct EdgeIso {
    pub edge: usize,
    /// `K(A) -> K(B)`.
    pub forward: RingHom,
    pub backward: RingHom,
}

#[derive(Clone, Debug)]
pub struct FunctionField {
    /// Index of the chart whose fraction field represents `K(X)`.
    pub base: usize,
    /// Fraction fields of the non-trivial charts.
    pub charts: Vec<Option<FractionFieldObject>>,
    /// `K(A_u) -> K(X)` and back for each non-trivial chart.
    pub to_base: Vec<Option<(RingHom, RingHom)>>,
    pub edge_isos: Vec<EdgeIso>,
}

impl FunctionField {
    pub fn field(&self) -> &FractionFieldObject {
        self.charts[self.base].as_ref().expect("base chart is non-trivial")
    }

    /// The recognized closed form of `K(X)`.
    pub fn ring(&self) -> &ExplicitRing {
        self.field().field()
    }

    pub fn chart_iso(&self, u: usize) -> Result<&(RingHom, RingHom)> {
        self.to_base[u]
            .as_ref()
            .ok_or_else(|| Error::InvalidInput(format!("chart {u} is trivial and has no fraction field")))
    }
}

/// A pair `(U, t_U)`: a regular function on the basic open `D(denom)` of a chart.
#[derive(Clone, Debug, PartialEq)]
pub struct FunctionFieldElement {
    pub chart: usize,
    pub denom: Elem,
    /// An element of `E(A_U)[1/denom]`.
    pub value: Elem,
}

/// `E(K(X))` next to the pairs model of `k(X)`.
#[derive(Clone, Debug)]
pub struct GlobalSections {
    pub function_field: FunctionField,
    /// `E(K(X))` computed from the closed form.
    pub ring: ExplicitRing,
}

impl ZariskiDiagram {
    /// Intersections of a chart with itself and along edges are filled in;
    /// every other pair of charts must be listed.
    pub fn new(
        charts: Vec<(String, MonoidObject)>,
        edges: Vec<ImmersionEdge>,
        intersections: Vec<((usize, usize), usize)>,
    ) -> Result<Self> {
        let charts: Vec<Chart> = charts.into_iter().map(|(name, monoid)| Chart { name, monoid }).collect();
        for (i, c) in charts.iter().enumerate() {
            if c.monoid.ring().is_none() {
                return Err(Error::InvalidInput(format!("chart {} is not an explicit algebra", c.name)));
            }
            if charts[..i].iter().any(|d| d.name == c.name) {
                return Err(Error::InvalidInput(format!("duplicate chart {}", c.name)));
            }
        }
        let n = charts.len();
        let mut certificates = Vec::new();
        for e in &edges {
            if e.from >= n || e.to >= n || e.from == e.to {
                return Err(Error::InvalidInput(format!("edge ({}, {}) does not join two charts", e.from, e.to)));
            }
            if e.map.source != *charts[e.from].ring() || e.map.target != *charts[e.to].ring() {
                return Err(Error::ShapeMismatch(format!(
                    "edge {} -> {} has the wrong rings",
                    charts[e.from].name, charts[e.to].name
                )));
            }
            certificates.push(verify_edge(&charts, e)?);
        }
        let mut table = BTreeMap::new();
        for i in 0..n {
            table.insert((i, i), i);
        }
        for e in &edges {
            table.insert((e.from, e.to), e.to);
            table.insert((e.to, e.from), e.to);
        }
        for ((i, j), k) in intersections {
            if i >= n || j >= n || k >= n {
                return Err(Error::InvalidInput(format!("intersection ({i}, {j}) -> {k} is out of range")));
            }
            for a in [i, j] {
                if a != k && edge_between(&edges, a, k).is_none() {
                    return Err(Error::InvalidInput(format!(
                        "intersection chart {} is not an open of {}",
                        charts[k].name, charts[a].name
                    )));
                }
            }
            for key in [(i, j), (j, i)] {
                if let Some(&old) = table.get(&key) {
                    if old != k {
                        return Err(Error::InvalidInput(format!(
                            "intersection of {} and {} given twice",
                            charts[i].name, charts[j].name
                        )));
                    }
                }
                table.insert(key, k);
            }
        }
        for i in 0..n {
            for j in 0..n {
                if !table.contains_key(&(i, j)) {
                    return Err(Error::InvalidInput(format!(
                        "missing intersection of {} and {}",
                        charts[i].name, charts[j].name
                    )));
                }
            }
        }
        Ok(ZariskiDiagram { charts, edges, certificates, intersections: table })
    }

    /// A single affine chart.
    pub fn affine(name: &str, ring: ExplicitRing) -> Result<Self> {
        Self::new(vec![(name.into(), MonoidObject::from_ring(ring)?)], vec![], vec![])
    }

    pub fn charts(&self) -> &[Chart] {
        &self.charts
    }

    pub fn chart(&self, i: usize) -> &Chart {
        &self.charts[i]
    }

    pub fn chart_index(&self, name: &str) -> Option<usize> {
        self.charts.iter().position(|c| c.name == name)
    }

    pub fn edges(&self) -> &[ImmersionEdge] {
        &self.edges
    }

    pub fn certificates(&self) -> &[EdgeCertificate] {
        &self.certificates
    }

    pub fn intersection(&self, i: usize, j: usize) -> usize {
        self.intersections[&(i, j)]
    }

    /// `A_from -> A_to` for `to` an open of `from`: the identity or an edge.
    pub fn chart_map(&self, from: usize, to: usize) -> Result<RingHom> {
        if from == to {
            return Ok(RingHom::identity(self.charts[from].ring()));
        }
        edge_between(&self.edges, from, to)
            .map(|e| e.map.clone())
            .ok_or_else(|| {
                Error::InvalidInput(format!("no edge from {} to {}", self.charts[from].name, self.charts[to].name))
            })
    }

    pub fn nontrivial_charts(&self) -> Vec<usize> {
        (0..self.charts.len()).filter(|&i| !self.charts[i].is_trivial()).collect()
    }

    /// Every non-trivial chart is integral.
    pub fn is_integral(&self) -> Result<bool> {
        for i in self.nontrivial_charts() {
            if !self.charts[i].monoid.is_integral()? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_reduced(&self) -> Result<bool> {
        for i in self.nontrivial_charts() {
            if !self.charts[i].monoid.is_reduced()? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The first pair of non-trivial charts with trivial intersection.
    pub fn disjoint_pair(&self) -> Option<(usize, usize)> {
        let live = self.nontrivial_charts();
        for (a, &i) in live.iter().enumerate() {
            for &j in &live[a + 1..] {
                if self.charts[self.intersection(i, j)].is_trivial() {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn is_irreducible(&self) -> bool {
        self.disjoint_pair().is_none()
    }

    /// The charts in `keep` with the intersection charts they need.
    pub fn sub_diagram(&self, keep: &[usize]) -> Result<ZariskiDiagram> {
        let mut set: Vec<usize> = keep.to_vec();
        for &i in keep {
            for &j in keep {
                set.push(self.intersection(i, j));
            }
        }
        set.sort_unstable();
        set.dedup();
        let pos = |i: usize| set.iter().position(|&k| k == i);
        let charts = set.iter().map(|&i| (self.charts[i].name.clone(), self.charts[i].monoid.clone())).collect();
        let edges = self
            .edges
            .iter()
            .filter_map(|e| Some(ImmersionEdge { from: pos(e.from)?, to: pos(e.to)?, ..e.clone() }))
            .collect();
        let mut table = Vec::new();
        for &i in &set {
            for &j in &set {
                if i < j {
                    if let Some(k) = pos(self.intersection(i, j)) {
                        table.push(((pos(i).unwrap(), pos(j).unwrap()), k));
                    }
                }
            }
        }
        ZariskiDiagram::new(charts, edges, table)
    }

    /// `A_s (x)_A A_t = A_st` for sampled pairs in every non-trivial chart.
    pub fn check_pullbacks(&self, seed: u64) -> Result<bool> {
        for i in self.nontrivial_charts() {
            let r = self.charts[i].ring();
            let s = sample::sample_elements(r, 1, 2, seed);
            for pair in s.windows(2) {
                localization_tensor(r, &pair[0], &pair[1])?;
            }
        }
        Ok(true)
    }

    pub fn check_reduced_irreducible_implies_integral(&self) -> Result<IntegralityReport> {
        for c in &self.charts {
            if !c.monoid.noetherian().is_certified() {
                return Ok(IntegralityReport::HypothesisFails { reason: format!("{} has no Noetherian certificate", c.name) });
            }
        }
        for i in self.nontrivial_charts() {
            let endo = self.charts[i].monoid.endomorphism_ring()?;
            if let Some(n) = nilpotent_witness(&endo.ring) {
                return Ok(IntegralityReport::HypothesisFails {
                    reason: format!("{} is not reduced: {} is nilpotent", self.charts[i].name, endo.ring.display(&n)),
                });
            }
        }
        if let Some((i, j)) = self.disjoint_pair() {
            return Ok(IntegralityReport::IrreducibilityFails {
                left: self.charts[i].name.clone(),
                right: self.charts[j].name.clone(),
                witness: None,
            });
        }
        for i in self.nontrivial_charts() {
            let (endo, dc) = self.charts[i].monoid.integrality()?;
            if let DomainCheck::ZeroDivisors(s, t) = dc {
                // reduced, so A_s and A_t are non-trivial while A_st = 0
                let r = self.charts[i].ring();
                let live = |x: &Elem| localize_ring(r, x).map(|(l, _)| !l.is_zero_ring());
                debug_assert!(endo.ring == *r);
                if live(&s)? && live(&t)? && !live(&r.mul(&s, &t))? {
                    let name = &self.charts[i].name;
                    return Ok(IntegralityReport::IrreducibilityFails {
                        left: format!("D({}) in {name}", r.display(&s)),
                        right: format!("D({}) in {name}", r.display(&t)),
                        witness: Some((s, t)),
                    });
                }
                return Err(Error::NotIntegral(describe_pair(r, &s, &t)));
            }
        }
        Ok(IntegralityReport::Integral)
    }

    fn ff(&self, i: usize) -> Result<FractionFieldObject> {
        FractionFieldObject::new(&self.charts[i].monoid)
    }

    /// `K(A) -> K(B)` and back along edge `e`, with `B (x)_A K(A) = K(A)` checked.
    pub fn edge_iso(&self, e: usize, ka: &FractionFieldObject, kb: &FractionFieldObject) -> Result<EdgeIso> {
        let edge = &self.edges[e];
        let s = edge.tags.iter().fold(self.charts[edge.from].ring().one(), |acc, t| self.charts[edge.from].ring().mul(&acc, t));
        let (tensor, ell) = localize_ring(ka.field(), &ka.to_field().apply(&s)?)?;
        if tensor != *ka.field() || !ell.is_identity() {
            return Err(Error::NotWellDefined(format!("{} (x) K(A) is not K(A)", self.charts[edge.to].name)));
        }
        let forward = ka.universal_factor(&edge.map.then(kb.to_field())?)?;
        let backward = invert(&forward)?;
        if !forward.is_inverse_pair(&backward)? {
            return Err(Error::NotWellDefined(format!("K({}) and K({}) differ", self.charts[edge.from].name, self.charts[edge.to].name)));
        }
        Ok(EdgeIso { edge: e, forward, backward })
    }

    /// `K(X)` as the fraction field of the first non-trivial chart, with
    /// certified isomorphisms to every other chart along edges.
    pub fn function_field(&self) -> Result<FunctionField> {
        let live = self.nontrivial_charts();
        let base = *live.first().ok_or(Error::AllChartsTrivial)?;
        let n = self.charts.len();
        let mut charts = vec![None; n];
        for &i in &live {
            charts[i] = Some(self.ff(i)?);
        }
        let mut edge_isos = Vec::new();
        for (k, e) in self.edges.iter().enumerate() {
            if let (Some(a), Some(b)) = (&charts[e.from], &charts[e.to]) {
                edge_isos.push(self.edge_iso(k, a, b)?);
            }
        }
        let mut to_base: Vec<Option<(RingHom, RingHom)>> = vec![None; n];
        let kb = charts[base].as_ref().unwrap().field().clone();
        to_base[base] = Some((RingHom::identity(&kb), RingHom::identity(&kb)));
        let mut queue = VecDeque::from([base]);
        while let Some(u) = queue.pop_front() {
            let (u_to, u_from) = to_base[u].clone().unwrap();
            for iso in &edge_isos {
                let e = &self.edges[iso.edge];
                // K(v) -> K(u) -> K(X)
                let (v, step) = if e.to == u {
                    (e.from, iso.forward.clone())
                } else if e.from == u {
                    (e.to, iso.backward.clone())
                } else {
                    continue;
                };
                if to_base[v].is_none() {
                    let inv_step = invert(&step)?;
                    to_base[v] = Some((step.then(&u_to)?, u_from.then(&inv_step)?));
                    queue.push_back(v);
                }
            }
        }
        // every edge commutes with the chart identifications
        for iso in &edge_isos {
            let e = &self.edges[iso.edge];
            let (Some((a_to, _)), Some((b_to, _))) = (&to_base[e.from], &to_base[e.to]) else {
                return Err(Error::InvalidInput(format!("{} is not connected to the base chart", self.charts[e.from].name)));
            };
            if !iso.forward.then(b_to)?.agrees_with(a_to) {
                return Err(Error::NotWellDefined(format!(
                    "gluing along {} -> {} is inconsistent",
                    self.charts[e.from].name, self.charts[e.to].name
                )));
            }
        }
        if let Some(&u) = live.iter().find(|&&u| to_base[u].is_none()) {
            return Err(Error::InvalidInput(format!("{} is not connected to the base chart", self.charts[u].name)));
        }
        Ok(FunctionField { base, charts, to_base, edge_isos })
    }

    /// `(A_i)_{di} -> C <- (A_j)_{dj}` with `C` the intersection chart
    /// localized at both denominators.
    pub fn common_localization(&self, (i, di): (usize, &Elem), (j, dj): (usize, &Elem)) -> Result<(ExplicitRing, RingHom, RingHom)> {
        let k = self.intersection(i, j);
        let (ei, ej) = (self.chart_map(i, k)?, self.chart_map(j, k)?);
        let w = self.charts[k].ring();
        let d = w.mul(&ei.apply(di)?, &ej.apply(dj)?);
        let (c, to_c) = localize_ring(w, &d)?;
        let mi = induced_map(&ei.then(&to_c)?, di)?;
        let mj = induced_map(&ej.then(&to_c)?, dj)?;
        if mi.target != c || mj.target != c {
            return Err(Error::NotWellDefined("denominators are not inverted on the overlap".into()));
        }
        Ok((c, mi, mj))
    }

    /// `k(X)` as equivalence classes of pairs next to `E(K(X))`.
    pub fn global_sections_field(&self) -> Result<GlobalSections> {
        let function_field = self.function_field()?;
        let ring = function_field.field().endo_closed().ring.clone();
        let gs = GlobalSections { function_field, ring };
        let (fwd, back) = gs.function_field.field().certificate();
        if !fwd.is_inverse_pair(back)? {
            return Err(Error::NotWellDefined("E(K(X)) is not certified".into()));
        }
        for x in sample::sample_elements(gs.k(), 2, 4, sample::DEFAULT_SEED) {
            let p = gs.to_pair(self, &x)?;
            if !gs.k().eq_elem(&gs.to_field(&p)?, &x) {
                return Err(Error::NotWellDefined(format!("{} does not survive the pairs model", gs.k().display(&x))));
            }
        }
        Ok(gs)
    }
}

impl GlobalSections {
    /// `Q(E(A_base))`, identified with `E(K(X))` through the certificate.
    pub fn k(&self) -> &ExplicitRing {
        self.function_field.ring()
    }

    /// A regular function on `D(denom)` in chart `u`.
    pub fn pair(&self, x: &ZariskiDiagram, u: usize, denom: Elem, value: Elem) -> Result<FunctionFieldElement> {
        let c = x.chart(u);
        if c.is_trivial() {
            return Err(Error::InvalidInput(format!("{} is trivial", c.name)));
        }
        let (l, _) = localize_ring(c.ring(), &denom)?;
        if l.is_zero_ring() || !l.contains(&value) {
            return Err(Error::InvalidInput(format!("{value:?} is not a function on D({}) in {}", c.ring().display(&denom), c.name)));
        }
        Ok(FunctionFieldElement { chart: u, denom, value })
    }

    /// `(U, t_U) ~ (V, t_V)`: the restrictions agree on the overlap localized
    /// at both denominators, which must be non-trivial.
    pub fn equivalent(&self, x: &ZariskiDiagram, a: &FunctionFieldElement, b: &FunctionFieldElement) -> Result<bool> {
        let (c, ma, mb) = x.common_localization((a.chart, &a.denom), (b.chart, &b.denom))?;
        if c.is_zero_ring() {
            return Ok(false);
        }
        Ok(c.eq_elem(&ma.apply(&a.value)?, &mb.apply(&b.value)?))
    }

    /// The class of a pair as an element of `K(X)`.
    pub fn to_field(&self, p: &FunctionFieldElement) -> Result<Elem> {
        let ff = &self.function_field;
        let ku = ff.charts[p.chart].as_ref().ok_or_else(|| Error::InvalidInput("trivial chart".into()))?;
        let into_ku = induced_map(ku.to_field(), &p.denom)?;
        let (to_base, _) = ff.chart_iso(p.chart)?;
        to_base.apply(&into_ku.apply(&p.value)?)
    }

    /// A representative pair on the base chart.
    pub fn to_pair(&self, x: &ZariskiDiagram, f: &Elem) -> Result<FunctionFieldElement> {
        let base = self.function_field.base;
        let r = x.chart(base).ring();
        let k = self.k();
        let (denom, value) = match k.to_ratfunc(f) {
            Some(q) if !matches!(k, ExplicitRing::Rationals) && r.var().is_some() => {
                let d = r.from_poly(q.den()).expect("polynomial denominator");
                let (l, _) = localize_ring(r, &d)?;
                let v = l.from_ratfunc(&q).expect("denominator inverted");
                (d, v)
            }
            _ => (r.one(), f.clone()),
        };
        self.pair(x, base, denom, value)
    }

    /// Both models agree on classes: `a ~ b` iff their images in `K(X)` coincide.
    pub fn models_agree(&self, x: &ZariskiDiagram, a: &FunctionFieldElement, b: &FunctionFieldElement) -> Result<bool> {
        let same = self.k().eq_elem(&self.to_field(a)?, &self.to_field(b)?);
        Ok(same == self.equivalent(x, a, b)?)
    }
}

fn edge_between(edges: &[ImmersionEdge], from: usize, to: usize) -> Option<&ImmersionEdge> {
    edges.iter().find(|e| e.from == from && e.to == to)
}

/// Checks an edge against the localization of its source at its tags.
fn verify_edge(charts: &[Chart], e: &ImmersionEdge) -> Result<EdgeCertificate> {
    let a = charts[e.from].ring();
    for t in &e.tags {
        if !a.contains(t) {
            return Err(Error::InvalidInput(format!("tag {t:?} is not in {}", charts[e.from].name)));
        }
    }
    let s = e.tags.iter().fold(a.one(), |acc, t| a.mul(&acc, t));
    let (l, canon) = localize_ring(a, &s)?;
    let b = &e.map.target;
    // an open immersion is an epimorphism: B (x)_A B = B
    if !b.is_zero_ring() {
        let (bb, h) = localize_ring(b, &e.map.apply(&s)?)?;
        if bb != *b || !h.is_identity() {
            return Err(Error::NotWellDefined(format!("{} does not invert its tags", charts[e.to].name)));
        }
    }
    if l == *b && canon.agrees_with(&e.map) {
        return Ok(EdgeCertificate::Canonical);
    }
    let mismatch = || Error::NotWellDefined(format!("{} -> {} is not the localization at its tags", charts[e.from].name, charts[e.to].name));
    if l.is_zero_ring() || b.is_zero_ring() {
        return Err(mismatch());
    }
    let theta = induced_map(&e.map, &s)?;
    if theta.target != *b || !canon.then(&theta)?.agrees_with(&e.map) {
        return Err(mismatch());
    }
    let inverse = invert(&theta).map_err(|_| mismatch())?;
    if !theta.is_inverse_pair(&inverse)? {
        return Err(mismatch());
    }
    Ok(EdgeCertificate::Isomorphic { theta, inverse })
}

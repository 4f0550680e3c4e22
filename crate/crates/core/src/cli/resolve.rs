//! Name resolution and construction of the declared objects.
//!
//! Syntax, reference and typing problems are [`DocError`]s. Mathematical
//! failures (an axiom that does not hold, a degree bound that is hit) are kept
//! per declaration so the suites can report them.

use std::collections::HashMap;

use num_rational::BigRational;

use super::ast::*;
use super::parse::{parse_document, DocError};
use crate::error::Result as Built;
use crate::fpcat::localize::localize_ring;
use crate::fpcat::{Elem, ExplicitRing, FdAlgebra, RingHom};
use crate::kernel::factor::DEFAULT_DEGREE_BOUND;
use crate::kernel::matrix::{Matrix, Ring};
use crate::kernel::poly::Poly;
use crate::kernel::rational::Rational;
use crate::monoid::MonoidObject;
use crate::presheaf::{FinitePoset, RingPresheaf};
use crate::scheme::{ImmersionEdge, RationalMap, ZariskiDiagram};

#[derive(Clone, Copy, Debug)]
pub struct ResolveOptions {
    /// Factorization bound used when deciding whether a quotient is a field.
    pub degree_bound: usize,
}

impl Default for ResolveOptions {
    fn default() -> Self {
        ResolveOptions { degree_bound: DEFAULT_DEGREE_BOUND }
    }
}

#[derive(Clone, Debug)]
pub struct MonoidEntry {
    pub name: String,
    pub monoid: Built<MonoidObject>,
    pub expect_fail: bool,
    pub expect_integral: bool,
}

#[derive(Clone, Debug)]
pub struct DiagramEntry {
    pub name: String,
    pub diagram: Built<ZariskiDiagram>,
    pub expect_integral: bool,
    pub expect_reduced: bool,
    pub expect_irreducible: bool,
}

#[derive(Clone, Debug)]
pub struct RatMapEntry {
    pub name: String,
    pub map: Built<RationalMap>,
    pub expect_dominant: bool,
}

/// `g: K(source) -> K(target)`.
#[derive(Clone, Debug)]
pub struct KMorphism {
    pub source: ZariskiDiagram,
    pub target: ZariskiDiagram,
    pub g: RingHom,
}

#[derive(Clone, Debug)]
pub struct KMapEntry {
    pub name: String,
    pub map: Built<KMorphism>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Ring,
    Poset,
    Presheaf,
    Monoid,
    Diagram,
    RatMap,
    KMap,
}

impl Kind {
    fn word(self) -> &'static str {
        match self {
            Kind::Ring => "ring",
            Kind::Poset => "poset",
            Kind::Presheaf => "presheaf",
            Kind::Monoid => "monoid",
            Kind::Diagram => "diagram",
            Kind::RatMap => "rational map",
            Kind::KMap => "function-field map",
        }
    }
}

/// A parsed and resolved definition file.
#[derive(Clone, Debug, Default)]
pub struct Definitions {
    pub document: Document,
    pub rings: Vec<(String, Built<ExplicitRing>)>,
    pub posets: Vec<(String, FinitePoset)>,
    pub presheaves: Vec<(String, Built<RingPresheaf>)>,
    pub monoids: Vec<MonoidEntry>,
    pub diagrams: Vec<DiagramEntry>,
    pub ratmaps: Vec<RatMapEntry>,
    pub kmaps: Vec<KMapEntry>,
}

/// Parses and resolves `text` with default options.
pub fn parse_definitions(text: &str) -> Result<Definitions, DocError> {
    Definitions::parse(text, &ResolveOptions::default())
}

fn rational(n: &num_bigint::BigInt) -> Rational {
    BigRational::from_integer(n.clone())
}

/// Evaluates `e` as an element of `ring`.
pub fn eval(e: &Expr, ring: &ExplicitRing) -> Result<Elem, DocError> {
    let bad = |msg: String| DocError::invalid(e.span, msg);
    if ring.is_zero_ring() {
        // every expression names the only element
        return Ok(ring.zero());
    }
    Ok(match &e.kind {
        ExprKind::Int(n) => ring.from_rational(&rational(n)),
        ExprKind::Var(v) => {
            if ring.var() != Some(v.as_str()) {
                return Err(bad(format!("{v} is not the variable of {}", ring.describe())));
            }
            ring.generators().into_iter().next().expect("univariate ring has a generator")
        }
        ExprKind::Neg(a) => ring.neg(&eval(a, ring)?),
        ExprKind::Add(a, b) => ring.add(&eval(a, ring)?, &eval(b, ring)?),
        ExprKind::Sub(a, b) => ring.sub(&eval(a, ring)?, &eval(b, ring)?),
        ExprKind::Mul(a, b) => ring.mul(&eval(a, ring)?, &eval(b, ring)?),
        ExprKind::Div(a, b) => {
            let d = eval(b, ring)?;
            let inv = ring
                .inverse(&d)
                .ok_or_else(|| DocError::invalid(b.span, format!("{} is not a unit in {}", ring.display(&d), ring.describe())))?;
            ring.mul(&eval(a, ring)?, &inv)
        }
        ExprKind::Pow(a, k) => ring.pow(&eval(a, ring)?, *k as usize),
        ExprKind::Call(f, args) if f == "vec" => {
            let dim = match ring {
                ExplicitRing::FiniteDim(a) => a.dim(),
                _ => return Err(bad(format!("vec(...) needs a finite-dimensional algebra, not {}", ring.describe()))),
            };
            if args.len() != dim {
                return Err(bad(format!("vec(...) needs {dim} coordinates")));
            }
            let coords = args.iter().map(|a| rational_value(a)).collect::<Result<Vec<_>, _>>()?;
            ring.from_coords(&coords)
        }
        ExprKind::Call(f, args) if f == "tuple" => {
            let ExplicitRing::Product(parts) = ring else {
                return Err(bad(format!("tuple(...) needs a product ring, not {}", ring.describe())));
            };
            if args.len() != parts.len() {
                return Err(bad(format!("tuple(...) needs {} components", parts.len())));
            }
            Elem::T(args.iter().zip(parts).map(|(a, r)| eval(a, r)).collect::<Result<_, _>>()?)
        }
        ExprKind::Call(f, _) => return Err(bad(format!("unknown function {f}"))),
    })
}

fn rational_value(e: &Expr) -> Result<Rational, DocError> {
    Ok(eval(e, &ExplicitRing::Rationals)?.as_q().clone())
}

fn poly_value(e: &Expr, var: &str) -> Result<Poly, DocError> {
    Ok(eval(e, &ExplicitRing::poly(var))?.as_p().clone())
}

fn elems(es: &[Expr], ring: &ExplicitRing) -> Result<Vec<Elem>, DocError> {
    es.iter().map(|e| eval(e, ring)).collect()
}

fn structure_constants(a: &AlgebraLit) -> Result<(Matrix<Rational>, Vec<Rational>), DocError> {
    let n = a.unit.len();
    if a.mult.len() != n || a.mult.iter().any(|r| r.len() != n * n) {
        return Err(DocError::invalid(a.span, format!("a {n}-dimensional algebra needs {n} rows of {} entries", n * n)));
    }
    let rows = a
        .mult
        .iter()
        .map(|r| r.iter().map(rational_value).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    let unit = a.unit.iter().map(rational_value).collect::<Result<Vec<_>, _>>()?;
    Ok((Matrix::from_rows(rows, n * n), unit))
}

fn expectations(tags: &[Name], allowed: &[&str]) -> Result<Vec<String>, DocError> {
    for t in tags {
        if !allowed.contains(&t.text.as_str()) {
            return Err(DocError::invalid(t.span, format!("unknown expectation '{}' (allowed: {})", t.text, allowed.join(", "))));
        }
    }
    Ok(tags.iter().map(|t| t.text.clone()).collect())
}

struct Resolver {
    opts: ResolveOptions,
    table: HashMap<String, (Kind, usize)>,
    /// Chart names of each diagram, in declaration order.
    chart_names: Vec<Vec<String>>,
    defs: Definitions,
}

impl Resolver {
    fn lookup(&self, name: &Name, kind: Kind) -> Result<usize, DocError> {
        match self.table.get(&name.text) {
            None => Err(DocError::unresolved(name)),
            Some((k, i)) if *k == kind => Ok(*i),
            Some((k, _)) => Err(DocError::invalid(
                name.span,
                format!("{} is a {}, expected a {}", name.text, k.word(), kind.word()),
            )),
        }
    }

    fn ring(&self, name: &Name) -> Result<Built<ExplicitRing>, DocError> {
        Ok(self.defs.rings[self.lookup(name, Kind::Ring)?].1.clone())
    }

    fn diagram(&self, name: &Name) -> Result<(usize, Built<ZariskiDiagram>), DocError> {
        let i = self.lookup(name, Kind::Diagram)?;
        Ok((i, self.defs.diagrams[i].diagram.clone()))
    }

    fn chart(&self, diagram: usize, name: &Name) -> Result<usize, DocError> {
        self.chart_names[diagram].iter().position(|c| *c == name.text).ok_or_else(|| DocError::unresolved(name))
    }

    fn ring_def(&self, def: &RingDef) -> Result<Built<ExplicitRing>, DocError> {
        Ok(match def {
            RingDef::Rationals => Ok(ExplicitRing::Rationals),
            RingDef::Zero => Ok(ExplicitRing::zero_ring()),
            RingDef::Poly(v) => Ok(ExplicitRing::poly(v)),
            RingDef::Fraction(v) => Ok(ExplicitRing::fraction(v)),
            RingDef::Quotient(v, e) => {
                let f = poly_value(e, v)?;
                if f.is_zero() {
                    return Err(DocError::invalid(e.span, "quotient by zero"));
                }
                ExplicitRing::quotient(v, &f, self.opts.degree_bound)
            }
            RingDef::Localize(v, e) => Ok(ExplicitRing::localized(v, &poly_value(e, v)?)),
            RingDef::Product(names) => {
                let parts = names.iter().map(|n| self.ring(n)).collect::<Result<Vec<_>, _>>()?;
                parts.into_iter().collect::<Built<Vec<_>>>().map(ExplicitRing::product)
            }
            RingDef::Algebra(a) => {
                let (m, u) = structure_constants(a)?;
                FdAlgebra::new(m, u).map(ExplicitRing::finite_dim)
            }
        })
    }

    fn presheaf(
        &self,
        poset: &Name,
        at: &[(Name, Name)],
        restrict: &[Restriction],
    ) -> Result<Built<RingPresheaf>, DocError> {
        let p = self.defs.posets[self.lookup(poset, Kind::Poset)?].1.clone();
        let mut rings: Vec<Option<Built<ExplicitRing>>> = vec![None; p.len()];
        for (elem, ring) in at {
            let i = p.index(&elem.text).ok_or_else(|| DocError::unresolved(elem))?;
            if rings[i].is_some() {
                return Err(DocError::invalid(elem.span, format!("a second ring at {}", elem.text)));
            }
            rings[i] = Some(self.ring(ring)?);
        }
        let mut ready = Vec::new();
        for (i, r) in rings.into_iter().enumerate() {
            match r {
                None => {
                    return Err(DocError::invalid(poset.span, format!("no ring at {}", p.name(i))));
                }
                Some(Err(e)) => return Ok(Err(e)),
                Some(Ok(r)) => ready.push(r),
            }
        }
        let mut maps = Vec::new();
        for r in restrict {
            let a = p.index(&r.from.text).ok_or_else(|| DocError::unresolved(&r.from))?;
            let b = p.index(&r.to.text).ok_or_else(|| DocError::unresolved(&r.to))?;
            if a == b || !p.leq(b, a) {
                return Err(DocError::invalid(r.from.span, format!("{} is not below {}", r.to.text, r.from.text)));
            }
            let images = elems(&r.images, &ready[b])?;
            match RingHom::new(ready[a].clone(), ready[b].clone(), images) {
                Ok(h) => maps.push(((a, b), h)),
                Err(e) => return Ok(Err(e)),
            }
        }
        Ok(RingPresheaf::new(p, ready, maps))
    }

    fn monoid(&self, def: &MonoidDef) -> Result<Built<MonoidObject>, DocError> {
        Ok(match def {
            MonoidDef::Ring(r) => self.ring(r)?.and_then(MonoidObject::from_ring),
            MonoidDef::Presheaf(p) => {
                self.defs.presheaves[self.lookup(p, Kind::Presheaf)?].1.clone().and_then(MonoidObject::from_presheaf)
            }
            MonoidDef::Algebra(a) => {
                let (m, u) = structure_constants(a)?;
                MonoidObject::from_structure_constants(m, u)
            }
        })
    }

    fn diagram_def(
        &self,
        charts: &[(Name, Name)],
        edges: &[EdgeDecl],
        meets: &[Meet],
    ) -> Result<Built<ZariskiDiagram>, DocError> {
        let names: Vec<String> = charts.iter().map(|c| c.0.text.clone()).collect();
        for (i, (c, _)) in charts.iter().enumerate() {
            if names[..i].contains(&c.text) {
                return Err(DocError::invalid(c.span, format!("duplicate chart {}", c.text)));
            }
        }
        let idx = |n: &Name| names.iter().position(|c| *c == n.text).ok_or_else(|| DocError::unresolved(n));
        let mut rings = Vec::new();
        for (_, r) in charts {
            match self.ring(r)? {
                Ok(r) => rings.push(r),
                Err(e) => return Ok(Err(e)),
            }
        }
        let mut built_edges = Vec::new();
        for e in edges {
            let (from, to) = (idx(&e.from)?, idx(&e.to)?);
            let tags = elems(&e.tags, &rings[from])?;
            let images = elems(&e.images, &rings[to])?;
            match RingHom::new(rings[from].clone(), rings[to].clone(), images) {
                Ok(map) => built_edges.push(ImmersionEdge { from, to, tags, map }),
                Err(err) => return Ok(Err(err)),
            }
        }
        let mut table = Vec::new();
        for m in meets {
            table.push(((idx(&m.left)?, idx(&m.right)?), idx(&m.chart)?));
        }
        let mut monoids = Vec::new();
        for (c, r) in charts.iter().zip(rings) {
            match MonoidObject::from_ring(r) {
                Ok(m) => monoids.push((c.0.text.clone(), m)),
                Err(e) => return Ok(Err(e)),
            }
        }
        Ok(ZariskiDiagram::new(monoids, built_edges, table))
    }

    #[allow(clippy::too_many_arguments)]
    fn ratmap(
        &self,
        source: &Name,
        source_chart: &Name,
        denom: &Expr,
        target: &Name,
        target_chart: &Name,
        images: &[Expr],
    ) -> Result<Built<RationalMap>, DocError> {
        let (si, y) = self.diagram(source)?;
        let (ti, x) = self.diagram(target)?;
        let (b, a) = (self.chart(si, source_chart)?, self.chart(ti, target_chart)?);
        let (y, x) = match (y, x) {
            (Ok(y), Ok(x)) => (y, x),
            (Err(e), _) | (_, Err(e)) => return Ok(Err(e)),
        };
        let t = eval(denom, y.chart(b).ring())?;
        let bt = match localize_ring(y.chart(b).ring(), &t) {
            Ok((bt, _)) => bt,
            Err(e) => return Ok(Err(e)),
        };
        let imgs = elems(images, &bt)?;
        let phi = match RingHom::new(x.chart(a).ring().clone(), bt, imgs) {
            Ok(phi) => phi,
            Err(e) => return Ok(Err(e)),
        };
        Ok(RationalMap::new(y, b, t, x, a, phi))
    }

    fn kmap(&self, source: &Name, target: &Name, images: &[Expr]) -> Result<Built<KMorphism>, DocError> {
        let (_, x) = self.diagram(source)?;
        let (_, y) = self.diagram(target)?;
        let (x, y) = match (x, y) {
            (Ok(x), Ok(y)) => (x, y),
            (Err(e), _) | (_, Err(e)) => return Ok(Err(e)),
        };
        let (kx, ky) = match (x.function_field(), y.function_field()) {
            (Ok(kx), Ok(ky)) => (kx.ring().clone(), ky.ring().clone()),
            (Err(e), _) | (_, Err(e)) => return Ok(Err(e)),
        };
        let imgs = elems(images, &ky)?;
        Ok(RingHom::new(kx, ky, imgs).map(|g| KMorphism { source: x, target: y, g }))
    }

    fn declare(&mut self, item: &Item) -> Result<(), DocError> {
        let name = item.decl.name();
        if self.table.contains_key(&name.text) {
            return Err(DocError::invalid(name.span, format!("{} is declared twice", name.text)));
        }
        let entry = match &item.decl {
            Decl::Ring { def, .. } => {
                let r = self.ring_def(def)?;
                self.defs.rings.push((name.text.clone(), r));
                (Kind::Ring, self.defs.rings.len() - 1)
            }
            Decl::Poset { elements, relations, .. } => {
                let names: Vec<String> = elements.iter().map(|e| e.text.clone()).collect();
                let idx = |n: &Name| names.iter().position(|e| *e == n.text).ok_or_else(|| DocError::unresolved(n));
                let rel = relations.iter().map(|(a, b)| Ok((idx(a)?, idx(b)?))).collect::<Result<Vec<_>, DocError>>()?;
                let p = FinitePoset::new(names.clone(), &rel).map_err(|e| DocError::invalid(name.span, e.to_string()))?;
                self.defs.posets.push((name.text.clone(), p));
                (Kind::Poset, self.defs.posets.len() - 1)
            }
            Decl::Presheaf { poset, at, restrict, .. } => {
                let p = self.presheaf(poset, at, restrict)?;
                self.defs.presheaves.push((name.text.clone(), p));
                (Kind::Presheaf, self.defs.presheaves.len() - 1)
            }
            Decl::Monoid { def, expect, .. } => {
                let tags = expectations(expect, &["fail", "nonintegral"])?;
                let monoid = self.monoid(def)?;
                self.defs.monoids.push(MonoidEntry {
                    name: name.text.clone(),
                    monoid,
                    expect_fail: tags.iter().any(|t| t == "fail"),
                    expect_integral: !tags.iter().any(|t| t == "nonintegral"),
                });
                (Kind::Monoid, self.defs.monoids.len() - 1)
            }
            Decl::Diagram { charts, edges, meets, expect, .. } => {
                let tags = expectations(expect, &["nonintegral", "nonreduced", "reducible"])?;
                let diagram = self.diagram_def(charts, edges, meets)?;
                self.chart_names.push(charts.iter().map(|c| c.0.text.clone()).collect());
                self.defs.diagrams.push(DiagramEntry {
                    name: name.text.clone(),
                    diagram,
                    expect_integral: !tags.iter().any(|t| t == "nonintegral"),
                    expect_reduced: !tags.iter().any(|t| t == "nonreduced"),
                    expect_irreducible: !tags.iter().any(|t| t == "reducible"),
                });
                (Kind::Diagram, self.defs.diagrams.len() - 1)
            }
            Decl::RatMap { source, source_chart, denom, target, target_chart, images, expect, .. } => {
                let tags = expectations(expect, &["nondominant"])?;
                let map = self.ratmap(source, source_chart, denom, target, target_chart, images)?;
                self.defs.ratmaps.push(RatMapEntry { name: name.text.clone(), map, expect_dominant: tags.is_empty() });
                (Kind::RatMap, self.defs.ratmaps.len() - 1)
            }
            Decl::KMap { source, target, images, .. } => {
                let map = self.kmap(source, target, images)?;
                self.defs.kmaps.push(KMapEntry { name: name.text.clone(), map });
                (Kind::KMap, self.defs.kmaps.len() - 1)
            }
        };
        self.table.insert(name.text.clone(), entry);
        Ok(())
    }
}

impl Definitions {
    pub fn parse(text: &str, opts: &ResolveOptions) -> Result<Self, DocError> {
        Self::resolve(parse_document(text)?, opts)
    }

    /// Declarations may only refer to earlier ones, so the result is acyclic.
    pub fn resolve(document: Document, opts: &ResolveOptions) -> Result<Self, DocError> {
        let mut r = Resolver { opts: *opts, table: HashMap::new(), chart_names: Vec::new(), defs: Definitions::default() };
        for item in &document.items {
            r.declare(item)?;
        }
        r.defs.document = document;
        Ok(r.defs)
    }

    pub fn is_empty(&self) -> bool {
        self.document.items.is_empty()
    }

    pub fn diagram(&self, name: &str) -> Option<&DiagramEntry> {
        self.diagrams.iter().find(|d| d.name == name)
    }

    pub fn monoid(&self, name: &str) -> Option<&MonoidEntry> {
        self.monoids.iter().find(|m| m.name == name)
    }
}

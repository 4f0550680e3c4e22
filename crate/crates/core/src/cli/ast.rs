//! Syntax tree of definition files and its canonical text form.

use std::fmt::{self, Write};

use num_bigint::BigInt;

/// Source position (1-based). Never part of equality, so a document equals
/// its re-parsed serialization.
#[derive(Clone, Copy, Debug, Default)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

impl PartialEq for Span {
    fn eq(&self, _: &Span) -> bool {
        true
    }
}

impl Eq for Span {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Name {
    pub text: String,
    pub span: Span,
}

impl Name {
    pub fn new(text: &str) -> Self {
        Name { text: text.to_string(), span: Span::default() }
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExprKind {
    Int(BigInt),
    Var(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    /// `vec(...)` and `tuple(...)` literals.
    Call(String, Vec<Expr>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

impl Expr {
    pub fn new(kind: ExprKind) -> Self {
        Expr { kind, span: Span::default() }
    }

    fn prec(&self) -> u8 {
        match &self.kind {
            ExprKind::Add(..) | ExprKind::Sub(..) => 1,
            ExprKind::Mul(..) | ExprKind::Div(..) => 2,
            ExprKind::Neg(_) => 3,
            ExprKind::Pow(..) => 4,
            _ => 5,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, need: u8) -> fmt::Result {
        if self.prec() < need {
            f.write_char('(')?;
            self.write_at(f, 0)?;
            return f.write_char(')');
        }
        match &self.kind {
            ExprKind::Int(n) => write!(f, "{n}"),
            ExprKind::Var(v) => f.write_str(v),
            ExprKind::Neg(a) => {
                f.write_char('-')?;
                a.write_at(f, 3)
            }
            ExprKind::Add(a, b) | ExprKind::Sub(a, b) => {
                a.write_at(f, 1)?;
                f.write_str(if matches!(self.kind, ExprKind::Add(..)) { " + " } else { " - " })?;
                b.write_at(f, 2)
            }
            ExprKind::Mul(a, b) | ExprKind::Div(a, b) => {
                a.write_at(f, 2)?;
                f.write_char(if matches!(self.kind, ExprKind::Mul(..)) { '*' } else { '/' })?;
                b.write_at(f, 3)
            }
            ExprKind::Pow(a, k) => {
                a.write_at(f, 5)?;
                write!(f, "^{k}")
            }
            ExprKind::Call(name, args) => {
                write!(f, "{name}(")?;
                write_list(f, args)?;
                f.write_char(')')
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

fn write_list<T: fmt::Display>(f: &mut fmt::Formatter<'_>, items: &[T]) -> fmt::Result {
    for (i, e) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{e}")?;
    }
    Ok(())
}

/// `[a, b, c]`.
pub struct List<'a, T>(pub &'a [T]);

impl<T: fmt::Display> fmt::Display for List<'_, T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_char('[')?;
        write_list(f, self.0)?;
        f.write_char(']')
    }
}

/// Structure constants: `mult` has `n` rows of `n^2` entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraLit {
    pub mult: Vec<Vec<Expr>>,
    pub unit: Vec<Expr>,
    pub span: Span,
}

impl fmt::Display for AlgebraLit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("algebra [")?;
        for (i, row) in self.mult.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}", List(row))?;
        }
        write!(f, "] unit {}", List(&self.unit))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingDef {
    Rationals,
    Zero,
    Poly(String),
    Fraction(String),
    /// `Q[var]/(f)`.
    Quotient(String, Expr),
    /// `Q[var][1/s]`.
    Localize(String, Expr),
    Product(Vec<Name>),
    Algebra(AlgebraLit),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MonoidDef {
    Ring(Name),
    Presheaf(Name),
    Algebra(AlgebraLit),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Restriction {
    pub from: Name,
    pub to: Name,
    pub images: Vec<Expr>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeDecl {
    pub from: Name,
    pub to: Name,
    pub tags: Vec<Expr>,
    pub images: Vec<Expr>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Meet {
    pub left: Name,
    pub right: Name,
    pub chart: Name,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decl {
    Ring { name: Name, def: RingDef },
    /// Elements and relations `a < b`.
    Poset { name: Name, elements: Vec<Name>, relations: Vec<(Name, Name)> },
    Presheaf { name: Name, poset: Name, at: Vec<(Name, Name)>, restrict: Vec<Restriction> },
    Monoid { name: Name, def: MonoidDef, expect: Vec<Name> },
    Diagram { name: Name, charts: Vec<(Name, Name)>, edges: Vec<EdgeDecl>, meets: Vec<Meet>, expect: Vec<Name> },
    /// `source.chart at denom -> target.chart map images`.
    RatMap {
        name: Name,
        source: Name,
        source_chart: Name,
        denom: Expr,
        target: Name,
        target_chart: Name,
        images: Vec<Expr>,
        expect: Vec<Name>,
    },
    /// A morphism of function fields `K(source) -> K(target)`.
    KMap { name: Name, source: Name, target: Name, images: Vec<Expr> },
}

impl Decl {
    pub fn name(&self) -> &Name {
        match self {
            Decl::Ring { name, .. }
            | Decl::Poset { name, .. }
            | Decl::Presheaf { name, .. }
            | Decl::Monoid { name, .. }
            | Decl::Diagram { name, .. }
            | Decl::RatMap { name, .. }
            | Decl::KMap { name, .. } => name,
        }
    }

    pub fn keyword(&self) -> &'static str {
        match self {
            Decl::Ring { .. } => "ring",
            Decl::Poset { .. } => "poset",
            Decl::Presheaf { .. } => "presheaf",
            Decl::Monoid { .. } => "monoid",
            Decl::Diagram { .. } => "diagram",
            Decl::RatMap { .. } => "ratmap",
            Decl::KMap { .. } => "kmap",
        }
    }
}

fn write_expect(f: &mut fmt::Formatter<'_>, expect: &[Name]) -> fmt::Result {
    if !expect.is_empty() {
        f.write_str(" expect ")?;
        write_list(f, expect)?;
    }
    Ok(())
}

impl fmt::Display for Decl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Decl::Ring { name, def } => {
                write!(f, "ring {name} = ")?;
                match def {
                    RingDef::Rationals => f.write_str("rationals"),
                    RingDef::Zero => f.write_str("zero"),
                    RingDef::Poly(v) => write!(f, "poly {v}"),
                    RingDef::Fraction(v) => write!(f, "fraction {v}"),
                    RingDef::Quotient(v, e) => write!(f, "quotient {v} by {e}"),
                    RingDef::Localize(v, e) => write!(f, "localize {v} at {e}"),
                    RingDef::Product(names) => {
                        f.write_str("product")?;
                        names.iter().try_for_each(|n| write!(f, " {n}"))
                    }
                    RingDef::Algebra(a) => write!(f, "{a}"),
                }
            }
            Decl::Poset { name, elements, relations } => {
                write!(f, "poset {name} =")?;
                elements.iter().try_for_each(|n| write!(f, " {n}"))?;
                if !relations.is_empty() {
                    f.write_str(" where ")?;
                    for (i, (a, b)) in relations.iter().enumerate() {
                        if i > 0 {
                            f.write_str(", ")?;
                        }
                        write!(f, "{a} < {b}")?;
                    }
                }
                Ok(())
            }
            Decl::Presheaf { name, poset, at, restrict } => {
                writeln!(f, "presheaf {name} on {poset}")?;
                for (p, r) in at {
                    writeln!(f, "  at {p} = {r}")?;
                }
                for r in restrict {
                    writeln!(f, "  restrict {} -> {} map {}", r.from, r.to, List(&r.images))?;
                }
                f.write_str("end")
            }
            Decl::Monoid { name, def, expect } => {
                write!(f, "monoid {name} = ")?;
                match def {
                    MonoidDef::Ring(r) => write!(f, "ring {r}")?,
                    MonoidDef::Presheaf(p) => write!(f, "presheaf {p}")?,
                    MonoidDef::Algebra(a) => write!(f, "{a}")?,
                }
                write_expect(f, expect)
            }
            Decl::Diagram { name, charts, edges, meets, expect } => {
                write!(f, "diagram {name}")?;
                write_expect(f, expect)?;
                writeln!(f)?;
                for (c, r) in charts {
                    writeln!(f, "  chart {c} = {r}")?;
                }
                for e in edges {
                    writeln!(f, "  edge {} -> {} tags {} map {}", e.from, e.to, List(&e.tags), List(&e.images))?;
                }
                for m in meets {
                    writeln!(f, "  meet {} {} = {}", m.left, m.right, m.chart)?;
                }
                f.write_str("end")
            }
            Decl::RatMap { name, source, source_chart, denom, target, target_chart, images, expect } => {
                write!(
                    f,
                    "ratmap {name} = {source}.{source_chart} at {denom} -> {target}.{target_chart} map {}",
                    List(images)
                )?;
                write_expect(f, expect)
            }
            Decl::KMap { name, source, target, images } => {
                write!(f, "kmap {name} = {source} -> {target} map {}", List(images))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Item {
    pub decl: Decl,
    pub span: Span,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Document {
    pub version: Option<u32>,
    pub items: Vec<Item>,
}

impl Document {
    pub fn is_empty(&self) -> bool {
        self.version.is_none() && self.items.is_empty()
    }

    /// Canonical text; parsing it gives back an equal document.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Document {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(v) = self.version {
            writeln!(f, "version {v}")?;
        }
        for item in &self.items {
            writeln!(f, "{}", item.decl)?;
        }
        Ok(())
    }
}

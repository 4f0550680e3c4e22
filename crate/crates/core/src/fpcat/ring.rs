//! Explicit commutative rings and their elements.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use super::fdalgebra::FdAlgebra;
use crate::error::{Error, Result};
use crate::kernel::factor::is_irreducible;
use crate::kernel::matrix::Ring;
use crate::kernel::poly::Poly;
use crate::kernel::ratfunc::RatFunc;
use crate::kernel::rational::{fmt_rational, Rational};
use crate::kernel::snf::Euclid;

/// A computable commutative Q-algebra in one of the closed classes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExplicitRing {
    Rationals,
    Poly { var: String },
    /// `Q[var]/(modulus)`, modulus monic of positive degree.
    Quotient { var: String, modulus: Poly, field: bool },
    /// `Q[var][1/denom]`, denom monic, squarefree and non-constant.
    Localized { var: String, denom: Poly },
    Fraction { var: String },
    FiniteDim(Arc<FdAlgebra>),
    /// Finite product; the empty product is the zero ring.
    Product(Vec<ExplicitRing>),
}

/// An element of an [`ExplicitRing`]; the variant is fixed by the ring class.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Elem {
    Q(Rational),
    P(Poly),
    F(RatFunc),
    V(Vec<Rational>),
    T(Vec<Elem>),
}

impl Elem {
    pub fn as_q(&self) -> &Rational {
        match self {
            Elem::Q(c) => c,
            other => panic!("expected a rational element, got {other:?}"),
        }
    }
    pub fn as_p(&self) -> &Poly {
        match self {
            Elem::P(p) => p,
            other => panic!("expected a polynomial element, got {other:?}"),
        }
    }
    pub fn as_f(&self) -> &RatFunc {
        match self {
            Elem::F(r) => r,
            other => panic!("expected a rational-function element, got {other:?}"),
        }
    }
    pub fn as_v(&self) -> &[Rational] {
        match self {
            Elem::V(v) => v,
            other => panic!("expected a coordinate vector, got {other:?}"),
        }
    }
    pub fn as_t(&self) -> &[Elem] {
        match self {
            Elem::T(t) => t,
            other => panic!("expected a tuple element, got {other:?}"),
        }
    }
}

/// How modules over a ring are computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EngineKind {
    /// Finitely presented modules via Smith normal form.
    Pid,
    /// Finite-dimensional modules as Q-vector spaces with action matrices.
    FinDim,
}

impl ExplicitRing {
    pub fn rationals() -> Self {
        ExplicitRing::Rationals
    }

    pub fn poly(var: &str) -> Self {
        ExplicitRing::Poly { var: var.to_string() }
    }

    pub fn fraction(var: &str) -> Self {
        ExplicitRing::Fraction { var: var.to_string() }
    }

    pub fn zero_ring() -> Self {
        ExplicitRing::Product(Vec::new())
    }

    /// `Q[var]/(f)`; the field flag is decided by factorization.
    pub fn quotient(var: &str, f: &Poly, bound: usize) -> Result<Self> {
        if f.is_zero() {
            return Err(Error::InvalidInput("quotient modulus must be nonzero".into()));
        }
        if f.is_constant() {
            return Ok(Self::zero_ring());
        }
        let field = is_irreducible(f, bound)?;
        Ok(ExplicitRing::Quotient { var: var.to_string(), modulus: f.monic(), field })
    }

    /// `Q[var][1/s]`.
    pub fn localized(var: &str, s: &Poly) -> Self {
        if s.is_zero() {
            return Self::zero_ring();
        }
        if s.is_constant() {
            return Self::poly(var);
        }
        ExplicitRing::Localized { var: var.to_string(), denom: s.radical() }
    }

    pub fn finite_dim(alg: FdAlgebra) -> Self {
        if alg.dim() == 0 {
            return Self::zero_ring();
        }
        ExplicitRing::FiniteDim(Arc::new(alg))
    }

    /// Product with zero factors dropped; a single factor is returned as is.
    pub fn product(factors: Vec<ExplicitRing>) -> Self {
        let mut f: Vec<ExplicitRing> = factors.into_iter().filter(|r| !r.is_zero_ring()).collect();
        if f.len() == 1 {
            return f.pop().unwrap();
        }
        ExplicitRing::Product(f)
    }

    pub fn is_zero_ring(&self) -> bool {
        match self {
            ExplicitRing::Product(f) => f.iter().all(|r| r.is_zero_ring()),
            ExplicitRing::FiniteDim(a) => a.dim() == 0,
            _ => false,
        }
    }

    pub fn var(&self) -> Option<&str> {
        match self {
            ExplicitRing::Poly { var }
            | ExplicitRing::Quotient { var, .. }
            | ExplicitRing::Localized { var, .. }
            | ExplicitRing::Fraction { var } => Some(var),
            _ => None,
        }
    }

    pub fn class_name(&self) -> &'static str {
        match self {
            ExplicitRing::Rationals => "rational-field",
            ExplicitRing::Poly { .. } => "poly-ring",
            ExplicitRing::Quotient { .. } => "quotient-poly-ring",
            ExplicitRing::Localized { .. } => "localized-poly-ring",
            ExplicitRing::Fraction { .. } => "fraction-field",
            ExplicitRing::FiniteDim(_) => "finite-dim-algebra",
            ExplicitRing::Product(f) if f.is_empty() => "zero-ring",
            ExplicitRing::Product(_) => "product",
        }
    }

    pub fn is_pid_class(&self) -> bool {
        matches!(
            self,
            ExplicitRing::Rationals
                | ExplicitRing::Poly { .. }
                | ExplicitRing::Localized { .. }
                | ExplicitRing::Fraction { .. }
                | ExplicitRing::Quotient { field: true, .. }
        )
    }

    pub fn is_fd_able(&self) -> bool {
        match self {
            ExplicitRing::Rationals | ExplicitRing::Quotient { .. } | ExplicitRing::FiniteDim(_) => true,
            ExplicitRing::Product(f) => f.iter().all(|r| r.is_fd_able()),
            _ => false,
        }
    }

    /// Default module engine for this ring.
    pub fn engine(&self) -> Result<EngineKind> {
        if self.is_pid_class() {
            Ok(EngineKind::Pid)
        } else if self.is_fd_able() {
            Ok(EngineKind::FinDim)
        } else {
            Err(Error::UnsupportedRing(format!("no module engine for {}", self.describe())))
        }
    }

    pub fn pid(&self) -> Result<PidView<'_>> {
        if self.is_pid_class() {
            Ok(PidView { ring: self })
        } else {
            Err(Error::UnsupportedRing(format!("{} is not in the PID class", self.describe())))
        }
    }

    pub fn describe(&self) -> String {
        match self {
            ExplicitRing::Rationals => "Q".into(),
            ExplicitRing::Poly { var } => format!("Q[{var}]"),
            ExplicitRing::Quotient { var, modulus, .. } => format!("Q[{var}]/({})", modulus.display(var)),
            ExplicitRing::Localized { var, denom } => format!("Q[{var}][1/({})]", denom.display(var)),
            ExplicitRing::Fraction { var } => format!("Q({var})"),
            ExplicitRing::FiniteDim(a) => format!("FD{}", a.dim()),
            ExplicitRing::Product(f) if f.is_empty() => "0".into(),
            ExplicitRing::Product(f) => f.iter().map(|r| r.describe()).collect::<Vec<_>>().join(" x "),
        }
    }

    /// Q-algebra generators.
    pub fn generators(&self) -> Vec<Elem> {
        match self {
            ExplicitRing::Rationals => vec![],
            ExplicitRing::Poly { .. } | ExplicitRing::Quotient { .. } => {
                let x = self.reduce_poly(&Poly::x());
                vec![x]
            }
            ExplicitRing::Localized { .. } | ExplicitRing::Fraction { .. } => {
                vec![Elem::F(RatFunc::from_poly(Poly::x()))]
            }
            ExplicitRing::FiniteDim(a) => (0..a.dim()).map(|i| Elem::V(a.basis(i))).collect(),
            ExplicitRing::Product(f) => {
                let mut out = Vec::new();
                for i in 0..f.len() {
                    out.push(self.embed(i, &f[i].one()));
                    for g in f[i].generators() {
                        out.push(self.embed(i, &g));
                    }
                }
                out
            }
        }
    }

    /// Element of a product with `e` in slot `i` and zero elsewhere.
    pub fn embed(&self, i: usize, e: &Elem) -> Elem {
        match self {
            ExplicitRing::Product(f) => Elem::T(
                f.iter()
                    .enumerate()
                    .map(|(k, r)| if k == i { e.clone() } else { r.zero() })
                    .collect(),
            ),
            _ => panic!("embed on a non-product ring"),
        }
    }

    pub fn from_rational(&self, c: &Rational) -> Elem {
        match self {
            ExplicitRing::Rationals => Elem::Q(c.clone()),
            ExplicitRing::Poly { .. } | ExplicitRing::Quotient { .. } => Elem::P(Poly::constant(c.clone())),
            ExplicitRing::Localized { .. } | ExplicitRing::Fraction { .. } => Elem::F(RatFunc::constant(c.clone())),
            ExplicitRing::FiniteDim(a) => Elem::V(a.unit().iter().map(|u| u * c).collect()),
            ExplicitRing::Product(f) => Elem::T(f.iter().map(|r| r.from_rational(c)).collect()),
        }
    }

    pub fn from_int(&self, n: i64) -> Elem {
        self.from_rational(&Rational::from_integer(n.into()))
    }

    fn reduce_poly(&self, p: &Poly) -> Elem {
        match self {
            ExplicitRing::Quotient { modulus, .. } => Elem::P(p.rem(modulus)),
            _ => Elem::P(p.clone()),
        }
    }

    /// Image of `p(x)` for a ring with a distinguished variable (or `Q` for constants).
    pub fn from_poly(&self, p: &Poly) -> Option<Elem> {
        match self {
            ExplicitRing::Rationals => p.is_constant().then(|| Elem::Q(p.coeff(0))),
            ExplicitRing::Poly { .. } | ExplicitRing::Quotient { .. } => Some(self.reduce_poly(p)),
            ExplicitRing::Localized { .. } | ExplicitRing::Fraction { .. } => Some(Elem::F(RatFunc::from_poly(p.clone()))),
            _ => p.is_constant().then(|| self.from_rational(&p.coeff(0))),
        }
    }

    /// Image of a rational function in the variable, if it lies in the ring.
    pub fn from_ratfunc(&self, r: &RatFunc) -> Option<Elem> {
        match self {
            ExplicitRing::Fraction { .. } => Some(Elem::F(r.clone())),
            ExplicitRing::Localized { denom, .. } => {
                let (rest, _) = r.den().strip_factors_of(denom);
                rest.is_constant().then(|| Elem::F(r.clone()))
            }
            ExplicitRing::Quotient { .. } => {
                let n = self.reduce_poly(r.num());
                let d = self.inverse(&self.reduce_poly(r.den()))?;
                Some(self.mul(&n, &d))
            }
            _ if r.is_polynomial() => self.from_poly(r.num()),
            _ => None,
        }
    }

    /// The element as a rational function, for rings inside `Q(var)`.
    pub fn to_ratfunc(&self, e: &Elem) -> Option<RatFunc> {
        match (self, e) {
            (ExplicitRing::Rationals, Elem::Q(c)) => Some(RatFunc::constant(c.clone())),
            (ExplicitRing::Poly { .. }, Elem::P(p)) => Some(RatFunc::from_poly(p.clone())),
            (ExplicitRing::Localized { .. } | ExplicitRing::Fraction { .. }, Elem::F(r)) => Some(r.clone()),
            _ => None,
        }
    }

    pub fn contains(&self, e: &Elem) -> bool {
        match (self, e) {
            (ExplicitRing::Rationals, Elem::Q(_)) => true,
            (ExplicitRing::Poly { .. }, Elem::P(_)) => true,
            (ExplicitRing::Quotient { modulus, .. }, Elem::P(p)) => p.is_zero() || p.deg() < modulus.deg(),
            (ExplicitRing::Localized { denom, .. }, Elem::F(r)) => r.den().strip_factors_of(denom).0.is_constant(),
            (ExplicitRing::Fraction { .. }, Elem::F(_)) => true,
            (ExplicitRing::FiniteDim(a), Elem::V(v)) => v.len() == a.dim(),
            (ExplicitRing::Product(f), Elem::T(t)) => {
                f.len() == t.len() && f.iter().zip(t).all(|(r, x)| r.contains(x))
            }
            _ => false,
        }
    }

    pub fn inverse(&self, e: &Elem) -> Option<Elem> {
        match (self, e) {
            (ExplicitRing::Rationals, Elem::Q(c)) => (!c.is_zero()).then(|| Elem::Q(Rational::one() / c)),
            (ExplicitRing::Poly { .. }, Elem::P(p)) => {
                (p.is_constant() && !p.is_zero()).then(|| Elem::P(Poly::constant(Rational::one() / p.coeff(0))))
            }
            (ExplicitRing::Quotient { modulus, .. }, Elem::P(p)) => {
                let (g, u, _) = Poly::xgcd(p, modulus);
                g.is_one().then(|| Elem::P(u.rem(modulus)))
            }
            (ExplicitRing::Localized { denom, .. }, Elem::F(r)) => {
                if r.is_zero() || !r.num().strip_factors_of(denom).0.is_constant() {
                    return None;
                }
                r.inv().map(Elem::F)
            }
            (ExplicitRing::Fraction { .. }, Elem::F(r)) => r.inv().map(Elem::F),
            (ExplicitRing::FiniteDim(a), Elem::V(v)) => a.inverse(v).map(Elem::V),
            (ExplicitRing::Product(f), Elem::T(t)) => {
                let inv: Option<Vec<Elem>> = f.iter().zip(t).map(|(r, x)| r.inverse(x)).collect();
                inv.map(Elem::T)
            }
            _ => panic!("element {e:?} does not belong to {}", self.describe()),
        }
    }

    pub fn is_unit(&self, e: &Elem) -> bool {
        self.inverse(e).is_some()
    }

    pub fn pow(&self, e: &Elem, k: usize) -> Elem {
        let mut acc = self.one();
        for _ in 0..k {
            acc = self.mul(&acc, e);
        }
        acc
    }

    pub fn display(&self, e: &Elem) -> String {
        match (self, e) {
            (_, Elem::Q(c)) => fmt_rational(c),
            (_, Elem::P(p)) => p.display(self.var().unwrap_or("x")),
            (_, Elem::F(r)) => r.display(self.var().unwrap_or("x")),
            (_, Elem::V(v)) => format!("[{}]", v.iter().map(fmt_rational).collect::<Vec<_>>().join(", ")),
            (ExplicitRing::Product(f), Elem::T(t)) => format!(
                "({})",
                f.iter().zip(t).map(|(r, x)| r.display(x)).collect::<Vec<_>>().join(", ")
            ),
            (_, Elem::T(_)) => "()".into(),
        }
    }

    /// Structure-constant model of a finite-dimensional ring.
    pub fn fd_algebra(&self) -> Option<FdAlgebra> {
        match self {
            ExplicitRing::Rationals => Some(FdAlgebra::rationals()),
            ExplicitRing::Quotient { modulus, .. } => Some(FdAlgebra::from_quotient(modulus)),
            ExplicitRing::FiniteDim(a) => Some((**a).clone()),
            ExplicitRing::Product(f) => {
                let parts: Option<Vec<FdAlgebra>> = f.iter().map(|r| r.fd_algebra()).collect();
                Some(FdAlgebra::product(&parts?))
            }
            _ => None,
        }
    }

    pub fn q_dim(&self) -> Option<usize> {
        match self {
            ExplicitRing::Rationals => Some(1),
            ExplicitRing::Quotient { modulus, .. } => Some(modulus.deg()),
            ExplicitRing::FiniteDim(a) => Some(a.dim()),
            ExplicitRing::Product(f) => f.iter().map(|r| r.q_dim()).sum(),
            _ => None,
        }
    }

    /// Coordinates in the basis of [`ExplicitRing::fd_algebra`].
    pub fn to_coords(&self, e: &Elem) -> Vec<Rational> {
        match (self, e) {
            (ExplicitRing::Rationals, Elem::Q(c)) => vec![c.clone()],
            (ExplicitRing::Quotient { modulus, .. }, Elem::P(p)) => (0..modulus.deg()).map(|k| p.coeff(k)).collect(),
            (ExplicitRing::FiniteDim(_), Elem::V(v)) => v.clone(),
            (ExplicitRing::Product(f), Elem::T(t)) => f.iter().zip(t).flat_map(|(r, x)| r.to_coords(x)).collect(),
            _ => panic!("to_coords on {} for {e:?}", self.describe()),
        }
    }

    pub fn from_coords(&self, v: &[Rational]) -> Elem {
        match self {
            ExplicitRing::Rationals => Elem::Q(v[0].clone()),
            ExplicitRing::Quotient { .. } => Elem::P(Poly::from_coeffs(v.to_vec())),
            ExplicitRing::FiniteDim(_) => Elem::V(v.to_vec()),
            ExplicitRing::Product(f) => {
                let mut off = 0;
                let mut parts = Vec::new();
                for r in f {
                    let d = r.q_dim().expect("finite-dimensional factor");
                    parts.push(r.from_coords(&v[off..off + d]));
                    off += d;
                }
                Elem::T(parts)
            }
            _ => panic!("from_coords on {}", self.describe()),
        }
    }

    pub fn is_nilpotent(&self, e: &Elem) -> bool {
        match (self, e) {
            (ExplicitRing::Quotient { modulus, .. }, Elem::P(p)) => {
                p.is_zero() || modulus.radical().divides(p)
            }
            (ExplicitRing::FiniteDim(a), Elem::V(v)) => a.is_nilpotent(v),
            (ExplicitRing::Product(f), Elem::T(t)) => f.iter().zip(t).all(|(r, x)| r.is_nilpotent(x)),
            _ => self.is_zero(e),
        }
    }

    /// Minimal polynomial over Q of an algebraic element; `None` if transcendental.
    pub fn minpoly(&self, e: &Elem) -> Option<Poly> {
        match self {
            ExplicitRing::Poly { .. } | ExplicitRing::Localized { .. } | ExplicitRing::Fraction { .. } => {
                let r = self.to_ratfunc(e)?;
                r.is_constant().then(|| Poly::from_coeffs(vec![-r.num().coeff(0), Rational::one()]))
            }
            ExplicitRing::Product(f) if f.iter().any(|r| !r.is_fd_able()) => {
                let mut acc = Poly::one();
                for (r, x) in f.iter().zip(e.as_t()) {
                    acc = Poly::lcm(&acc, &r.minpoly(x)?);
                }
                Some(acc)
            }
            _ => {
                let a = self.fd_algebra()?;
                Some(a.minpoly(&self.to_coords(e)))
            }
        }
    }

    /// Whether the ring is a field, for classes where this is immediate.
    pub fn is_field(&self) -> bool {
        match self {
            ExplicitRing::Rationals | ExplicitRing::Fraction { .. } => true,
            ExplicitRing::Quotient { field, .. } => *field,
            _ => false,
        }
    }

    /// Evaluates a polynomial at an element.
    pub fn eval_poly(&self, p: &Poly, at: &Elem) -> Elem {
        let mut acc = self.zero();
        for c in p.coeffs().iter().rev() {
            acc = self.add(&self.mul(&acc, at), &self.from_rational(c));
        }
        acc
    }
}

impl Ring for ExplicitRing {
    type E = Elem;

    fn zero(&self) -> Elem {
        match self {
            ExplicitRing::Rationals => Elem::Q(Rational::zero()),
            ExplicitRing::Poly { .. } | ExplicitRing::Quotient { .. } => Elem::P(Poly::zero()),
            ExplicitRing::Localized { .. } | ExplicitRing::Fraction { .. } => Elem::F(RatFunc::zero()),
            ExplicitRing::FiniteDim(a) => Elem::V(a.zero_vec()),
            ExplicitRing::Product(f) => Elem::T(f.iter().map(|r| r.zero()).collect()),
        }
    }

    fn one(&self) -> Elem {
        self.from_rational(&Rational::one())
    }

    fn add(&self, a: &Elem, b: &Elem) -> Elem {
        match (self, a, b) {
            (_, Elem::Q(x), Elem::Q(y)) => Elem::Q(x + y),
            (_, Elem::P(x), Elem::P(y)) => Elem::P(x + y),
            (_, Elem::F(x), Elem::F(y)) => Elem::F(x + y),
            (_, Elem::V(x), Elem::V(y)) => Elem::V(x.iter().zip(y).map(|(p, q)| p + q).collect()),
            (ExplicitRing::Product(f), Elem::T(x), Elem::T(y)) => {
                Elem::T(f.iter().zip(x.iter().zip(y)).map(|(r, (p, q))| r.add(p, q)).collect())
            }
            _ => panic!("mismatched elements {a:?} + {b:?} in {}", self.describe()),
        }
    }

    fn neg(&self, a: &Elem) -> Elem {
        match (self, a) {
            (_, Elem::Q(x)) => Elem::Q(-x),
            (_, Elem::P(x)) => Elem::P(-x),
            (_, Elem::F(x)) => Elem::F(-x),
            (_, Elem::V(x)) => Elem::V(x.iter().map(|p| -p).collect()),
            (ExplicitRing::Product(f), Elem::T(x)) => Elem::T(f.iter().zip(x).map(|(r, p)| r.neg(p)).collect()),
            _ => panic!("mismatched element {a:?} in {}", self.describe()),
        }
    }

    fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        match (self, a, b) {
            (_, Elem::Q(x), Elem::Q(y)) => Elem::Q(x * y),
            (ExplicitRing::Quotient { modulus, .. }, Elem::P(x), Elem::P(y)) => Elem::P((x * y).rem(modulus)),
            (_, Elem::P(x), Elem::P(y)) => Elem::P(x * y),
            (_, Elem::F(x), Elem::F(y)) => Elem::F(x * y),
            (ExplicitRing::FiniteDim(alg), Elem::V(x), Elem::V(y)) => Elem::V(alg.mul(x, y)),
            (ExplicitRing::Product(f), Elem::T(x), Elem::T(y)) => {
                Elem::T(f.iter().zip(x.iter().zip(y)).map(|(r, (p, q))| r.mul(p, q)).collect())
            }
            _ => panic!("mismatched elements {a:?} * {b:?} in {}", self.describe()),
        }
    }

    fn is_zero(&self, a: &Elem) -> bool {
        match a {
            Elem::Q(x) => x.is_zero(),
            Elem::P(x) => x.is_zero(),
            Elem::F(x) => x.is_zero(),
            Elem::V(x) => x.iter().all(|c| c.is_zero()),
            Elem::T(x) => match self {
                ExplicitRing::Product(f) => f.iter().zip(x).all(|(r, p)| r.is_zero(p)),
                _ => x.is_empty(),
            },
        }
    }

    fn eq_elem(&self, a: &Elem, b: &Elem) -> bool {
        match (a, b) {
            (Elem::T(_), _) => self.is_zero(&self.sub(a, b)),
            _ => a == b,
        }
    }
}

impl fmt::Display for ExplicitRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

/// A PID-class ring viewed as a Euclidean domain.
#[derive(Clone, Copy, Debug)]
pub struct PidView<'a> {
    pub ring: &'a ExplicitRing,
}

impl PidView<'_> {
    fn localized_core(denom: &Poly, r: &RatFunc) -> Poly {
        r.num().strip_factors_of(denom).0
    }
}

impl Ring for PidView<'_> {
    type E = Elem;
    fn zero(&self) -> Elem {
        self.ring.zero()
    }
    fn one(&self) -> Elem {
        self.ring.one()
    }
    fn add(&self, a: &Elem, b: &Elem) -> Elem {
        self.ring.add(a, b)
    }
    fn neg(&self, a: &Elem) -> Elem {
        self.ring.neg(a)
    }
    fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        self.ring.mul(a, b)
    }
    fn is_zero(&self, a: &Elem) -> bool {
        self.ring.is_zero(a)
    }
    fn eq_elem(&self, a: &Elem, b: &Elem) -> bool {
        self.ring.eq_elem(a, b)
    }
}

impl Euclid for PidView<'_> {
    fn size(&self, a: &Elem) -> usize {
        match (self.ring, a) {
            (ExplicitRing::Poly { .. }, Elem::P(p)) => p.deg(),
            (ExplicitRing::Localized { denom, .. }, Elem::F(r)) => Self::localized_core(denom, r).deg(),
            _ => 0,
        }
    }

    fn weight(&self, a: &Elem) -> usize {
        match a {
            Elem::F(r) => r.num().deg() + r.den().deg(),
            _ => 0,
        }
    }

    fn div_rem(&self, a: &Elem, b: &Elem) -> (Elem, Elem) {
        match (self.ring, a, b) {
            (ExplicitRing::Poly { .. }, Elem::P(x), Elem::P(y)) => {
                let (q, r) = x.div_rem(y);
                (Elem::P(q), Elem::P(r))
            }
            (ExplicitRing::Localized { denom, .. }, Elem::F(x), Elem::F(y)) => {
                // b = core * unit; divide the numerator of a by the core
                let core = Self::localized_core(denom, y);
                let unit = y.checked_div(&RatFunc::from_poly(core.clone())).expect("nonzero divisor");
                let (q0, r0) = x.num().div_rem(&core);
                let ad = RatFunc::from_poly(x.den().clone());
                let q = &(&RatFunc::from_poly(q0) / &ad) / &unit;
                let r = &RatFunc::from_poly(r0) / &ad;
                (Elem::F(q), Elem::F(r))
            }
            _ => {
                let inv = self.ring.inverse(b).expect("division by zero in a field");
                (self.ring.mul(a, &inv), self.ring.zero())
            }
        }
    }

    fn normal_unit(&self, a: &Elem) -> Elem {
        match (self.ring, a) {
            (ExplicitRing::Poly { .. }, Elem::P(p)) => Elem::P(Poly::constant(Rational::one() / p.lead())),
            (ExplicitRing::Localized { denom, .. }, Elem::F(r)) => {
                let core = Self::localized_core(denom, r).monic();
                Elem::F(RatFunc::from_poly(core).checked_div(r).expect("nonzero element"))
            }
            _ => self.ring.inverse(a).expect("nonzero element of a field"),
        }
    }

    fn unit_inverse(&self, u: &Elem) -> Elem {
        self.ring.inverse(u).expect("unit")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::matrix::Matrix;
    use crate::kernel::snf::smith;

    fn px(cs: &[i64]) -> Elem {
        Elem::P(Poly::from_ints(cs))
    }

    #[test]
    fn snf_golden_example() {
        // [[x, x], [x, x^2]] -> diag(x, x(x - 1))
        let r = ExplicitRing::poly("x");
        let m = Matrix::from_rows(vec![vec![px(&[0, 1]), px(&[0, 1])], vec![px(&[0, 1]), px(&[0, 0, 1])]], 2);
        let pid = r.pid().unwrap();
        let s = smith(&pid, &m);
        assert_eq!(s.diagonal, vec![px(&[0, 1]), px(&[0, -1, 1])]);
        let d = s.left.mul(&r, &m).mul(&r, &s.right);
        assert_eq!(d, Matrix::diagonal(&r, 2, 2, &s.diagonal));
    }

    #[test]
    fn localized_units_and_division() {
        let r = ExplicitRing::localized("x", &Poly::from_ints(&[0, 1]));
        let x = r.generators()[0].clone();
        assert!(r.is_unit(&x));
        let xm1 = r.sub(&x, &r.one());
        assert!(!r.is_unit(&xm1));
        let pid = r.pid().unwrap();
        // x^2 (x - 1) has normal form x - 1
        let a = r.mul(&r.mul(&x, &x), &xm1);
        assert_eq!(pid.normalize(&a), xm1);
        let (q, rem) = pid.div_rem(&a, &xm1);
        assert!(r.is_zero(&rem));
        assert_eq!(r.mul(&q, &xm1), a);
    }

    #[test]
    fn quotient_inverse() {
        let r = ExplicitRing::quotient("x", &Poly::from_ints(&[1, 0, 1]), 12).unwrap();
        assert!(r.is_field());
        let x = r.generators()[0].clone();
        let inv = r.inverse(&x).unwrap();
        assert_eq!(r.mul(&x, &inv), r.one());
        let z = ExplicitRing::quotient("x", &Poly::from_ints(&[0, 0, 1]), 12).unwrap();
        assert!(!z.is_field());
        assert!(z.inverse(&z.generators()[0]).is_none());
        assert!(z.is_nilpotent(&z.generators()[0]));
    }
}

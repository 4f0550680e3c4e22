//! Factorization over the rationals by squarefree decomposition, rational root
//! extraction and a Kronecker-style search for the remaining factors.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::Poly;
use super::rational::Rational;
use crate::error::{Error, Result};

/// Default degree bound for [`factor`].
pub const DEFAULT_DEGREE_BOUND: usize = 12;

/// `p = lead * prod f_i^{e_i}` with monic irreducible `f_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub lead: Rational,
    pub factors: Vec<(Poly, usize)>,
}

impl Factorization {
    pub fn expand(&self) -> Poly {
        self.factors
            .iter()
            .fold(Poly::constant(self.lead.clone()), |acc, (f, e)| &acc * &f.pow(*e))
    }

    pub fn is_irreducible(&self) -> bool {
        self.factors.len() == 1 && self.factors[0].1 == 1
    }

    pub fn distinct_factors(&self) -> usize {
        self.factors.len()
    }
}

/// Factors a nonzero polynomial of degree at most `bound`.
pub fn factor(p: &Poly, bound: usize) -> Result<Factorization> {
    if p.is_zero() {
        return Err(Error::InvalidInput("cannot factor the zero polynomial".into()));
    }
    let degree = p.deg();
    if degree > bound {
        return Err(Error::DegreeBoundExceeded { degree, bound });
    }
    let mut factors = Vec::new();
    for (part, mult) in squarefree_decomposition(&p.monic()) {
        for f in factor_squarefree(&part) {
            factors.push((f, mult));
        }
    }
    // degree ascending, then multiplicity descending, then coefficients
    factors.sort_by(|a, b| {
        a.0.deg().cmp(&b.0.deg()).then(b.1.cmp(&a.1)).then(a.0.canonical_cmp(&b.0))
    });
    Ok(Factorization { lead: p.lead(), factors })
}

/// Irreducibility over the rationals; constants are not irreducible.
pub fn is_irreducible(p: &Poly, bound: usize) -> Result<bool> {
    if p.is_constant() {
        return Ok(false);
    }
    Ok(factor(p, bound)?.is_irreducible())
}

/// Yun's algorithm on a monic polynomial; returns `(a_i, i)` with `p = prod a_i^i`.
pub fn squarefree_decomposition(p: &Poly) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    if p.is_constant() {
        return out;
    }
    let dp = p.derivative();
    let b = Poly::gcd(p, &dp);
    let mut c = p.exact_div(&b).expect("gcd divides");
    let mut d = &dp.exact_div(&b).expect("gcd divides") - &c.derivative();
    let mut i = 1;
    while !c.is_constant() {
        let a = Poly::gcd(&c, &d);
        c = c.exact_div(&a).expect("gcd divides");
        d = &d.exact_div(&a).expect("gcd divides") - &c.derivative();
        if !a.is_constant() {
            out.push((a.monic(), i));
        }
        i += 1;
    }
    out
}

fn factor_squarefree(p: &Poly) -> Vec<Poly> {
    let (mut g, _) = p.primitive_integer();
    let mut out = Vec::new();
    if g.first().is_some_and(|c| c.is_zero()) {
        out.push(Poly::x());
        g.remove(0);
    }
    // rational roots p/q with p | g(0), q | lead
    loop {
        if g.len() <= 2 {
            break;
        }
        match find_rational_root(&g) {
            Some((num, den)) => {
                let lin = Poly::from_big_ints(&[-num.clone(), den.clone()]);
                out.push(lin.monic());
                let quot = Poly::from_big_ints(&g).exact_div(&lin).expect("root divides");
                g = quot.primitive_integer().0;
            }
            None => break,
        }
    }
    let mut rest = Poly::from_big_ints(&g);
    if rest.degree() == Some(1) {
        out.push(rest.monic());
        return out;
    }
    if rest.is_constant() {
        return out;
    }
    let mut d = 2;
    while rest.deg() >= 2 * d {
        let gi = rest.primitive_integer().0;
        match kronecker_factor(&gi, d) {
            Some(h) => {
                out.push(h.monic());
                rest = rest.exact_div(&h).expect("factor divides");
            }
            None => d += 1,
        }
    }
    if !rest.is_constant() {
        out.push(rest.monic());
    }
    out
}

fn find_rational_root(g: &[BigInt]) -> Option<(BigInt, BigInt)> {
    let a0 = g[0].abs();
    let an = g.last().unwrap().abs();
    let ps = divisors(&a0)?;
    let qs = divisors(&an)?;
    let poly = Poly::from_big_ints(g);
    let mut candidates: Vec<(BigInt, BigInt)> = Vec::new();
    for p in &ps {
        for qd in &qs {
            if p.gcd(qd).is_one() {
                candidates.push((p.clone(), qd.clone()));
                candidates.push((-p.clone(), qd.clone()));
            }
        }
    }
    candidates.sort_by(|a, b| (a.0.abs() * &b.1).cmp(&(b.0.abs() * &a.1)).then(b.0.cmp(&a.0)));
    candidates
        .into_iter()
        .find(|(p, qd)| poly.eval(&Rational::new(p.clone(), qd.clone())).is_zero())
}

/// Positive divisors of `n > 0`; `None` when `n` is too large for trial division.
fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.to_u64()?;
    if n == 0 {
        return None;
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i: u64 = 1;
    while i.saturating_mul(i) <= n {
        if n % i == 0 {
            small.push(i);
            if i != n / i {
                large.push(n / i);
            }
        }
        i += 1;
        if i > 20_000_000 {
            return None;
        }
    }
    small.extend(large.into_iter().rev());
    Some(small.into_iter().map(BigInt::from).collect())
}

/// Searches for a factor of exact degree `d` of a squarefree primitive integer
/// polynomial without rational roots.
fn kronecker_factor(g: &[BigInt], d: usize) -> Option<Poly> {
    let poly = Poly::from_big_ints(g);
    let lead = g.last().unwrap().abs();
    // candidate nodes, sorted by number of divisors of |g(a)|
    let mut nodes: Vec<(BigInt, Vec<BigInt>)> = Vec::new();
    for k in 0..40i64 {
        let a = if k % 2 == 0 { k / 2 } else { -(k + 1) / 2 };
        let v = poly.eval(&Rational::from_integer(BigInt::from(a))).to_integer();
        if v.is_zero() {
            continue;
        }
        if let Some(divs) = divisors(&v.abs()) {
            nodes.push((BigInt::from(a), divs));
        }
    }
    if nodes.len() < d + 1 {
        return None;
    }
    nodes.sort_by_key(|(_, divs)| divs.len());
    nodes.truncate(d + 1);
    let xs: Vec<BigInt> = nodes.iter().map(|n| n.0.clone()).collect();
    let choices: Vec<Vec<BigInt>> = nodes
        .iter()
        .enumerate()
        .map(|(k, (_, divs))| {
            let mut c = divs.clone();
            if k > 0 {
                c.extend(divs.iter().map(|v| -v));
            }
            c
        })
        .collect();
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(d + 1);
    search(&xs, &choices, &mut rows, d, &lead, &poly)
}

fn search(
    xs: &[BigInt],
    choices: &[Vec<BigInt>],
    rows: &mut Vec<Vec<BigInt>>,
    d: usize,
    lead: &BigInt,
    g: &Poly,
) -> Option<Poly> {
    let k = rows.len();
    for v in &choices[k] {
        // extend the divided-difference table with the new node value
        let mut row = vec![v.clone()];
        let mut ok = true;
        for j in 1..=k {
            let num = &row[j - 1] - &rows[k - 1][j - 1];
            let den = &xs[k] - &xs[k - j];
            let (quo, rem) = num.div_rem(&den);
            if !rem.is_zero() {
                ok = false;
                break;
            }
            row.push(quo);
        }
        if !ok {
            continue;
        }
        if k == d {
            let top = &row[d];
            if top.is_zero() || !(lead % top.abs()).is_zero() {
                continue;
            }
            rows.push(row);
            let h = newton_to_poly(xs, rows);
            rows.pop();
            if h.deg() == d && g.exact_div(&h).is_some() {
                return Some(h);
            }
        } else {
            rows.push(row);
            if let Some(h) = search(xs, choices, rows, d, lead, g) {
                return Some(h);
            }
            rows.pop();
        }
    }
    None
}

fn newton_to_poly(xs: &[BigInt], rows: &[Vec<BigInt>]) -> Poly {
    // h = sum_k c_k prod_{j<k} (x - x_j), c_k = rows[k][k]
    let mut acc = Poly::zero();
    let mut basis = Poly::one();
    for (k, row) in rows.iter().enumerate() {
        acc = &acc + &basis.scale(&Rational::from_integer(row[k].clone()));
        basis = &basis * &Poly::from_big_ints(&[-xs[k].clone(), BigInt::one()]);
    }
    acc
}

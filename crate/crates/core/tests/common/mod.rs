//! Oracles written against plain `BigRational` arithmetic, independent of the
//! library's own linear algebra.
#![allow(dead_code)]

use std::path::PathBuf;

use mscheme::cli::{Definitions, ResolveOptions};
use mscheme::fpcat::Elem;
use mscheme::kernel::{Poly, RatFunc, Rational};
use num_traits::{One, Zero};
use rand::Rng;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../docs/fixtures").join(name)
}

pub fn load(name: &str) -> Definitions {
    let text = std::fs::read_to_string(fixture(name)).unwrap();
    Definitions::parse(&text, &ResolveOptions::default()).unwrap()
}

pub fn r(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Rank by fraction-free row reduction on a copy.
pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(rank, p);
        for i in 0..m.len() {
            if i != rank && !m[i][c].is_zero() {
                let f = &m[i][c] / &m[rank][c];
                for j in 0..cols {
                    let d = &f * &m[rank][j];
                    m[i][j] -= d;
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn det(rows: &[Vec<Rational>]) -> Rational {
    let n = rows.len();
    let mut m = rows.to_vec();
    let mut d = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else { return Rational::zero() };
        if p != c {
            m.swap(p, c);
            d = -d;
        }
        d *= &m[c][c];
        for i in c + 1..n {
            let f = &m[i][c] / &m[c][c];
            for j in c..n {
                let t = &f * &m[c][j];
                m[i][j] -= t;
            }
        }
    }
    d
}

/// Schoolbook product of coefficient vectors, reduced modulo a monic `f`.
pub fn mul_mod(a: &[Rational], b: &[Rational], f: &[Rational]) -> Vec<Rational> {
    let n = f.len() - 1;
    let mut out = vec![Rational::zero(); a.len() + b.len()];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    for k in (n..out.len()).rev() {
        let c = out[k].clone();
        if !c.is_zero() {
            for (i, fi) in f.iter().enumerate() {
                out[k - n + i] -= &c * fi;
            }
        }
    }
    out.truncate(n);
    out.resize(n, Rational::zero());
    out
}

/// Matrix of multiplication by `a` in `Q[x]/(f)`, `f` monic, on the basis `1, x, ...`.
pub fn mult_matrix(a: &[Rational], f: &[Rational]) -> Vec<Vec<Rational>> {
    let n = f.len() - 1;
    let cols: Vec<Vec<Rational>> = (0..n)
        .map(|k| {
            let mut e = vec![Rational::zero(); n];
            e[k] = Rational::one();
            mul_mod(a, &e, f)
        })
        .collect();
    (0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect()
}

/// Every coefficient vector of length `n` with entries in `{-1, 0, 1}`.
pub fn small_elements(n: usize) -> impl Iterator<Item = Vec<Rational>> {
    (0..3usize.pow(n as u32)).map(move |mut k| {
        (0..n)
            .map(|_| {
                let d = k % 3;
                k /= 3;
                r(d as i64 - 1)
            })
            .collect()
    })
}

/// Some element with coefficients in `{-1, 0, 1}` is a nonzero zero divisor.
pub fn zero_divisor_search(f: &[i64]) -> Option<Vec<Rational>> {
    let f: Vec<Rational> = f.iter().map(|&c| r(c)).collect();
    small_elements(f.len() - 1).find(|a| a.iter().any(|c| !c.is_zero()) && det(&mult_matrix(a, &f)).is_zero())
}

/// Eisenstein at some prime below 50, for integer coefficients.
pub fn eisenstein(f: &[i64]) -> bool {
    let n = f.len() - 1;
    [2i64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47].iter().any(|&p| {
        f[n] % p != 0 && f[..n].iter().all(|c| c % p == 0) && f[0] % (p * p) != 0
    })
}

pub fn poly(cs: &[i64]) -> Poly {
    Poly::from_ints(cs)
}

pub fn px(cs: &[i64]) -> Elem {
    Elem::P(poly(cs))
}

pub fn fx(n: &[i64], d: &[i64]) -> Elem {
    Elem::F(RatFunc::new(poly(n), poly(d)).unwrap())
}

pub fn rand_poly(rng: &mut impl Rng, deg: usize) -> Poly {
    let d = rng.gen_range(0..=deg);
    Poly::from_coeffs((0..=d).map(|_| r(rng.gen_range(-3..=3))).collect())
}

/// A random element of `Q(x)`; zero about one time in four.
pub fn rand_ratfunc(rng: &mut impl Rng, deg: usize) -> RatFunc {
    if rng.gen_ratio(1, 4) {
        return RatFunc::zero();
    }
    loop {
        let num = rand_poly(rng, deg);
        let den = rand_poly(rng, deg);
        if let Some(q) = RatFunc::new(num, den) {
            return q;
        }
    }
}

pub fn rand_nonzero(rng: &mut impl Rng, deg: usize) -> RatFunc {
    loop {
        let q = rand_ratfunc(rng, deg);
        if !q.is_zero() {
            return q;
        }
    }
}

/// Rational value of a polynomial by Horner, independent of `Poly::eval`.
fn horner(p: &Poly, t: &Rational) -> Rational {
    p.coeffs().iter().rev().fold(Rational::zero(), |acc, c| acc * t + c)
}

/// Generic rank over `Q(x)` as the maximum rank of specializations at
/// integer points where no denominator vanishes.
pub fn generic_rank(m: &[Vec<RatFunc>]) -> usize {
    let mut best = 0;
    let mut hits = 0;
    for t in 2i64..200 {
        let t = r(t);
        let mut rows = Vec::new();
        let mut ok = true;
        for row in m {
            let mut out = Vec::new();
            for q in row {
                let d = horner(q.den(), &t);
                if d.is_zero() {
                    ok = false;
                    break;
                }
                out.push(horner(q.num(), &t) / d);
            }
            rows.push(out);
        }
        if ok {
            best = best.max(rank(&rows));
            hits += 1;
            if hits == 8 {
                break;
            }
        }
    }
    best
}

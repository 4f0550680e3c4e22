mod common;

use common::*;
use mscheme::fpcat::{Elem, ExplicitRing, FdAlgebra, RingHom};
use mscheme::kernel::{Poly, Rational};
use mscheme::presheaf::{FinitePoset, ModulePresheaf, RingPresheaf};
use num_traits::Zero;
use proptest::prelude::*;

const ROOTS: [i64; 3] = [0, 1, -1];

/// Integer coefficients, lowest first, of the product of `x - c` over the chosen roots.
fn vanishing(set: u8) -> Vec<i64> {
    let mut f = vec![1i64];
    for (k, &c) in ROOTS.iter().enumerate() {
        if set & (1 << k) != 0 {
            let mut g = vec![0i64; f.len() + 1];
            for (i, &a) in f.iter().enumerate() {
                g[i + 1] += a;
                g[i] -= c * a;
            }
            f = g;
        }
    }
    f
}

/// Coordinates of `x^j` modulo the monic `f`.
fn power_mod(j: usize, f: &[i64]) -> Vec<Rational> {
    let n = f.len() - 1;
    let mut v = vec![Rational::zero(); n.max(j + 1)];
    v[j] = r(1);
    for top in (n..v.len()).rev() {
        let c = v[top].clone();
        if !c.is_zero() {
            for (i, &a) in f.iter().enumerate() {
                v[top - n + i] -= &c * r(a);
            }
        }
    }
    v.truncate(n);
    v
}

#[derive(Clone, Debug)]
struct Shape {
    n: usize,
    relations: Vec<(usize, usize)>,
    sets: Vec<u8>,
}

fn arb_shape() -> impl Strategy<Value = Shape> {
    (1usize..=4)
        .prop_flat_map(|n| {
            let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
            let k = pairs.len();
            (Just(n), Just(pairs), prop::collection::vec(any::<bool>(), k), prop::collection::vec(0u8..8, n))
        })
        .prop_map(|(n, pairs, keep, raw)| {
            let relations: Vec<(usize, usize)> = pairs.into_iter().zip(keep).filter(|(_, k)| *k).map(|(p, _)| p).collect();
            let mut leq = vec![vec![false; n]; n];
            for (i, row) in leq.iter_mut().enumerate() {
                row[i] = true;
            }
            for &(a, b) in &relations {
                leq[a][b] = true;
            }
            // indices only grow along relations so one pass in reverse closes transitively
            for a in (0..n).rev() {
                for b in a + 1..n {
                    if leq[a][b] {
                        let row = leq[b].clone();
                        for (c, &v) in row.iter().enumerate() {
                            leq[a][c] |= v;
                        }
                    }
                }
            }
            // x vanishes everywhere; a smaller point keeps only what all larger points share
            let sets = (0..n).map(|q| (0..n).filter(|&p| leq[q][p]).fold(raw[q] | 1, |acc, p| acc & (raw[p] | 1))).collect();
            Shape { n, relations, sets }
        })
}

/// Quotient rings `Q[x]/(f_p)` with `x -> x` on covers. With `as_algebra` the
/// rings are given by structure constants instead, which keeps fields out of
/// the PID engine.
fn build(shape: &Shape, as_algebra: bool) -> RingPresheaf {
    let names = (0..shape.n).map(|i| format!("p{i}")).collect();
    let poset = FinitePoset::new(names, &shape.relations).unwrap();
    let fs: Vec<Vec<i64>> = shape.sets.iter().map(|&s| vanishing(s)).collect();
    let rings: Vec<ExplicitRing> = fs
        .iter()
        .map(|f| {
            if as_algebra {
                ExplicitRing::finite_dim(FdAlgebra::from_quotient(&poly(f)))
            } else {
                ExplicitRing::quotient("x", &poly(f), 8).unwrap()
            }
        })
        .collect();
    let restr = poset
        .covers()
        .into_iter()
        .map(|(p, q)| {
            let images = if as_algebra {
                (0..fs[p].len() - 1).map(|j| Elem::V(power_mod(j, &fs[q]))).collect()
            } else {
                vec![rings[q].from_poly(&Poly::x()).unwrap()]
            };
            ((p, q), RingHom::new(rings[p].clone(), rings[q].clone(), images).unwrap())
        })
        .collect();
    RingPresheaf::new(poset, rings, restr).unwrap()
}

/// Dimension of the compatible families, by elimination on the section equations.
fn sections_dim(shape: &Shape, poset: &FinitePoset) -> usize {
    let dims: Vec<usize> = shape.sets.iter().map(|s| s.count_ones() as usize).collect();
    let offs: Vec<usize> = dims.iter().scan(0, |acc, d| {
        let o = *acc;
        *acc += d;
        Some(o)
    }).collect();
    let total: usize = dims.iter().sum();
    let mut rows = Vec::new();
    for p in 0..shape.n {
        for q in 0..shape.n {
            if p == q || !poset.leq(q, p) {
                continue;
            }
            let fq = vanishing(shape.sets[q]);
            let images: Vec<Vec<Rational>> = (0..dims[p]).map(|j| power_mod(j, &fq)).collect();
            for i in 0..dims[q] {
                let mut row = vec![Rational::zero(); total];
                for (j, im) in images.iter().enumerate() {
                    row[offs[p] + j] = im[i].clone();
                }
                row[offs[q] + i] -= r(1);
                rows.push(row);
            }
        }
    }
    total - rank(&rows)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn endomorphisms_of_the_unit_are_global_sections(shape in arb_shape()) {
        let rp = build(&shape, true);
        let unit = ModulePresheaf::unit(&rp).unwrap();
        let end = unit.hom(&unit).unwrap();
        prop_assert_eq!(end.q_dimension(), Some(sections_dim(&shape, rp.poset())));
        for t in &end.basis {
            prop_assert!(t.is_natural().unwrap());
        }
        // same presheaf through the quotient rings, when that stays off the PID engine
        if shape.sets.iter().any(|s| s.count_ones() > 1) {
            let rq = build(&shape, false);
            let unit = ModulePresheaf::unit(&rq).unwrap();
            prop_assert_eq!(unit.hom(&unit).unwrap().q_dimension(), end.q_dimension());
        }
    }

    #[test]
    fn constant_presheaf_counts_components(shape in arb_shape()) {
        let names = (0..shape.n).map(|i| format!("p{i}")).collect();
        let poset = FinitePoset::new(names, &shape.relations).unwrap();
        let comps = poset.components().len();
        let rp = RingPresheaf::constant(poset, ExplicitRing::finite_dim(FdAlgebra::rationals())).unwrap();
        let unit = ModulePresheaf::unit(&rp).unwrap();
        prop_assert_eq!(unit.hom(&unit).unwrap().q_dimension(), Some(comps));
    }
}

#[test]
fn oracle_sanity() {
    assert_eq!(vanishing(0b111), vec![0, -1, 0, 1]);
    assert_eq!(power_mod(2, &[0, -1, 1]), vec![r(0), r(1)]);
    // two points glued along x = 0
    let shape = Shape { n: 3, relations: vec![(0, 1), (0, 2)], sets: vec![1, 3, 5] };
    let rp = build(&shape, true);
    assert_eq!(sections_dim(&shape, rp.poset()), 3);
}

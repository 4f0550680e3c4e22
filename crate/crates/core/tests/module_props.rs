mod common;

use common::*;
use mscheme::fpcat::{Elem, ExplicitRing, Module, ModuleMorphism};
use mscheme::kernel::{Matrix, Poly, RatFunc, Ring};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn qx() -> ExplicitRing {
    ExplicitRing::poly("x")
}

fn rand_entries(rng: &mut StdRng, rows: usize, cols: usize, deg: usize) -> Vec<Vec<Poly>> {
    (0..rows).map(|_| (0..cols).map(|_| if rng.gen_ratio(1, 3) { Poly::zero() } else { rand_poly(rng, deg) }).collect()).collect()
}

fn elems(rows: &[Vec<Poly>], cols: usize) -> Matrix<Elem> {
    Matrix::from_rows(rows.iter().map(|r| r.iter().cloned().map(Elem::P).collect()).collect(), cols)
}

/// Rank of the relations over `Q(x)`, from the shared specialization oracle.
fn generic(rows: &[Vec<Poly>]) -> usize {
    let m: Vec<Vec<RatFunc>> = rows.iter().map(|r| r.iter().cloned().map(RatFunc::from_poly).collect()).collect();
    generic_rank(&m)
}

fn free_rank(m: &Module) -> usize {
    match m {
        Module::Pid(p) => p.invariant_factors().iter().filter(|d| p.ring.is_zero(d)).count(),
        Module::Fd(_) => unreachable!(),
    }
}

fn presented(rng: &mut StdRng) -> (Module, Vec<Vec<Poly>>) {
    let g = rng.gen_range(1..=3);
    let k = rng.gen_range(0..=3);
    let rows = rand_entries(rng, g, k, 2);
    (Module::presented(&qx(), g, elems(&rows, k)).unwrap(), rows)
}

/// A random unimodular matrix as a product of elementary operations.
fn unimodular(rng: &mut StdRng, n: usize) -> Matrix<Elem> {
    let ring = qx();
    let pv = ring.pid().unwrap();
    let mut u = Matrix::identity(&pv, n);
    for _ in 0..4 {
        if n < 2 {
            break;
        }
        let a = rng.gen_range(0..n);
        let b = (a + rng.gen_range(1..n)) % n;
        u.add_row_multiple(&pv, a, b, &Elem::P(rand_poly(rng, 1)));
    }
    u
}

#[test]
fn free_rank_matches_generic_rank_and_adds() {
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..60 {
        let (m, mr) = presented(&mut rng);
        let (n, nr) = presented(&mut rng);
        assert_eq!(free_rank(&m), m.gens() - generic(&mr));
        let s = m.direct_sum(&n).unwrap();
        assert_eq!(free_rank(&s), free_rank(&m) + free_rank(&n));
        assert_eq!(free_rank(&n), n.gens() - generic(&nr));
        assert_eq!(s.q_dimension(), m.q_dimension().zip(n.q_dimension()).map(|(a, b)| a + b));
    }
}

#[test]
fn invariant_factors_survive_change_of_basis() {
    let mut rng = StdRng::seed_from_u64(12);
    let ring = qx();
    let pv = ring.pid().unwrap();
    for _ in 0..40 {
        let g = rng.gen_range(1..=3);
        let k = rng.gen_range(1..=3);
        let rel = elems(&rand_entries(&mut rng, g, k, 2), k);
        let u = unimodular(&mut rng, g);
        let v = unimodular(&mut rng, k);
        let moved = u.mul(&pv, &rel).mul(&pv, &v);
        let (Module::Pid(a), Module::Pid(b)) =
            (Module::presented(&ring, g, rel).unwrap(), Module::presented(&ring, g, moved).unwrap())
        else {
            unreachable!()
        };
        assert_eq!(a.invariant_factors(), b.invariant_factors());
    }
}

#[test]
fn kernels_and_cokernels_are_exact() {
    let mut rng = StdRng::seed_from_u64(13);
    for _ in 0..40 {
        let n = rng.gen_range(1..=3);
        let source = Module::free(&qx(), n).unwrap();
        let (target, _) = presented(&mut rng);
        let f = ModuleMorphism::new(source.clone(), target.clone(), elems(&rand_entries(&mut rng, target.gens(), n, 2), n)).unwrap();
        let (_, incl) = f.kernel();
        assert!(incl.then(&f).unwrap().is_zero());
        assert!(incl.is_mono());
        let (_, proj) = f.cokernel();
        assert!(f.then(&proj).unwrap().is_zero());
        assert!(proj.is_epi());
        // image against coimage
        let (im, epi, mono) = f.image();
        assert!(epi.then(&mono).unwrap().equals(&f));
        assert!(epi.is_epi() && mono.is_mono());
        let (coim, _) = incl.cokernel();
        let (Module::Pid(a), Module::Pid(b)) = (&im, &coim) else { unreachable!() };
        assert_eq!(a.invariant_factors(), b.invariant_factors());
    }
}

#[test]
fn braiding_is_an_involution() {
    let mut rng = StdRng::seed_from_u64(14);
    for _ in 0..20 {
        let (m, _) = presented(&mut rng);
        let (n, _) = presented(&mut rng);
        let b = m.braiding(&n).unwrap().then(&n.braiding(&m).unwrap()).unwrap();
        assert!(b.is_identity());
    }
    let ring = ExplicitRing::quotient("x", &poly(&[0, 0, -1, 1]), 8).unwrap();
    let m = Module::free(&ring, 2).unwrap();
    let n = Module::presented(&ring, 1, Matrix::from_rows(vec![vec![px(&[0, 1])]], 1)).unwrap();
    assert!(m.braiding(&n).unwrap().then(&n.braiding(&m).unwrap()).unwrap().is_identity());
}

#[test]
fn cyclic_tensor_and_hom_have_gcd_dimension() {
    let mut rng = StdRng::seed_from_u64(15);
    let ring = qx();
    for _ in 0..40 {
        let a = loop {
            let p = rand_poly(&mut rng, 3);
            if p.deg() >= 1 {
                break p;
            }
        };
        let b = loop {
            let p = &rand_poly(&mut rng, 2) * &a.pow(rng.gen_range(0..2));
            if p.deg() >= 1 {
                break p;
            }
        };
        let cyc = |p: &Poly| Module::presented(&ring, 1, Matrix::from_rows(vec![vec![Elem::P(p.clone())]], 1)).unwrap();
        let (ma, mb) = (cyc(&a), cyc(&b));
        // gcd by the Euclidean algorithm on monic remainders
        let (mut u, mut v) = (a.monic(), b.monic());
        while !v.is_zero() {
            let r = u.div_rem(&v).1;
            u = v;
            v = if r.is_zero() { r } else { r.monic() };
        }
        let d = u.deg();
        assert_eq!(ma.tensor(&mb).unwrap().q_dimension(), Some(d));
        assert_eq!(ma.hom(&mb).unwrap().q_dimension(), Some(d));
        assert_eq!(ma.q_dimension(), Some(a.deg()));
    }
}

#[test]
fn rank_nullity_over_a_finite_dimensional_ring() {
    let mut rng = StdRng::seed_from_u64(16);
    // Q[x]/(x^2 (x - 1)) is not a field, so modules are finite-dimensional over Q
    let ring = ExplicitRing::quotient("x", &poly(&[0, 0, -1, 1]), 8).unwrap();
    for _ in 0..15 {
        let n = rng.gen_range(1..=2);
        let m = Module::free(&ring, n).unwrap();
        let ends = m.hom(&m).unwrap();
        let c: Vec<_> = ends.basis.iter().map(|_| r(rng.gen_range(-2..=2))).collect();
        let f = ends.combination(&c);
        assert!(f.is_well_defined());
        let (k, _) = f.kernel();
        let (im, _, _) = f.image();
        let (co, _) = f.cokernel();
        let dim = m.q_dimension().unwrap();
        assert_eq!(dim, 3 * n);
        assert_eq!(k.q_dimension().unwrap() + im.q_dimension().unwrap(), dim);
        assert_eq!(co.q_dimension().unwrap() + im.q_dimension().unwrap(), dim);
        // the map's Q-rank computed directly
        let rows: Vec<Vec<_>> = f.matrix.to_rows().iter().map(|r| r.iter().map(|e| e.as_q().clone()).collect()).collect();
        assert_eq!(rank(&rows), im.q_dimension().unwrap());
    }
    assert_eq!(Module::free(&ring, 1).unwrap().hom(&Module::free(&ring, 1).unwrap()).unwrap().q_dimension(), Some(3));
}

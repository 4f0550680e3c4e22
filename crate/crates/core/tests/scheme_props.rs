mod common;

use common::*;
use mscheme::scheme::fixtures::*;
use mscheme::scheme::ZariskiDiagram;
use rand::rngs::StdRng;
use mscheme::kernel::Ring;
use rand::SeedableRng;

/// Irreducible when no two non-trivial charts meet in a trivial one.
fn irreducible_oracle(x: &ZariskiDiagram) -> bool {
    let n = x.charts().len();
    (0..n).all(|i| (0..n).all(|j| x.chart(i).is_trivial() || x.chart(j).is_trivial() || !x.chart(x.intersection(i, j)).is_trivial()))
}

#[test]
fn restriction_keeps_dominance_and_the_field_map() {
    let mut rng = StdRng::seed_from_u64(21);
    let mut maps = dominant_maps().unwrap();
    maps.push(non_dominant().unwrap());
    for m in &maps {
        let dominant = m.is_dominant().unwrap();
        let k = if dominant { Some(m.to_k_morphism().unwrap()) } else { None };
        let ring = m.source.chart(m.source_chart).ring().clone();
        for _ in 0..6 {
            // constants only, when the chart has no variable
            let (p, u) = loop {
                let p = rand_poly(&mut rng, 2);
                match ring.from_poly(&p) {
                    Some(u) if !p.is_zero() => break (p, u),
                    _ => {}
                }
            };
            let small = m.restrict(&u).unwrap();
            assert_eq!(small.is_dominant().unwrap(), dominant, "{} on D({})", m.phi.describe(), p.display("t"));
            assert!(small.agrees_with(m).unwrap() && m.agrees_with(&small).unwrap());
            if let Some(k) = &k {
                assert!(small.to_k_morphism().unwrap().agrees_with(k));
            }
            // restricting twice equals restricting once by the product
            let again = small.restrict(&u).unwrap();
            let once = m.restrict(&ring.mul(&u, &u)).unwrap();
            assert!(again.agrees_with(&once).unwrap());
        }
    }
}

#[test]
fn irreducibility_passes_to_sub_diagrams() {
    let fixtures = [
        ("P1", projective_line().unwrap()),
        ("two charts", affine_two_chart().unwrap()),
        ("two lines", two_component().unwrap()),
        ("idempotent", two_idempotent().unwrap()),
        ("nilpotent", nilpotent().unwrap()),
    ];
    for (name, x) in &fixtures {
        assert_eq!(x.is_irreducible(), irreducible_oracle(x), "{name}");
        let live = x.nontrivial_charts();
        for mask in 1u32..(1 << live.len()) {
            let keep: Vec<usize> = live.iter().enumerate().filter(|(k, _)| mask & (1 << k) != 0).map(|(_, &i)| i).collect();
            let sub = x.sub_diagram(&keep).unwrap();
            assert_eq!(sub.is_irreducible(), irreducible_oracle(&sub), "{name} {keep:?}");
            if x.is_irreducible() {
                assert!(sub.is_irreducible(), "{name} {keep:?}");
            }
            if keep.len() == 1 {
                assert!(sub.is_irreducible(), "{name} {keep:?}");
            }
        }
    }
    let lines = two_component().unwrap();
    assert!(lines.sub_diagram(&[0]).unwrap().is_irreducible());
    assert!(!lines.is_irreducible());
    assert!(!two_idempotent().unwrap().is_irreducible());
}

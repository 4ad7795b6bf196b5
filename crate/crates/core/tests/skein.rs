use kappa_core::diagram::{Boundary, SuturedTangle};
use kappa_core::khcomplex::{homology, khovanov, reduce_with_transfer, DEFAULT_CAP};
use kappa_core::skein::{induced_on_homology, rank_by_u, triangle_check, twist_quotient_map, ChainMap, TwistFamily};

fn unknot_tangle() -> SuturedTangle {
    SuturedTangle::new(vec![[1, 2, 3, 4]], Boundary { b0: 1, b1: 2, t0: 4, t1: 3 }, "unknot")
}

#[test]
fn unknot_family_levels_are_torus_links() {
    let t = unknot_tangle();
    let fam = TwistFamily::build(&t, -4, 5, DEFAULT_CAP).unwrap();
    for i in -4..=5 {
        let h = fam.homology(i);
        assert_eq!(h, khovanov(&t.closure(i).unwrap()).unwrap(), "level {i}");
        assert!(fam.complex(i).is_chain_complex());
    }
    let dims: Vec<usize> = (-2..=2).map(|i| fam.homology(i).total_dim()).collect();
    assert_eq!(dims, vec![3, 2, 1, 2, 1]);
}

#[test]
fn unknot_maps() {
    let t = unknot_tangle();
    let fam = TwistFamily::build(&t, -3, 3, DEFAULT_CAP).unwrap();
    let f0 = fam.step(0);
    let r1 = reduce_with_transfer(f0.source());
    let r0 = reduce_with_transfer(f0.target());
    let h0 = induced_on_homology(f0, &r1, &r0).unwrap();
    assert_eq!(rank_by_u(&h0).values().sum::<usize>(), 1);
    // f0 kills exactly one generator of the two-component unlink, and f1
    // lands on that generator.
    let a1 = r1.homology();
    assert_eq!(a1.iter().map(|(k, _)| k).collect::<Vec<_>>(), vec![(0, -1), (0, 1)]);
    let b = &h0[&0];
    assert_eq!((b.rows(), b.cols()), (1, 2));
    assert!(b.get(0, 0) != b.get(0, 1));
    let f1 = fam.step(1);
    let r2 = reduce_with_transfer(f1.source());
    let h1 = induced_on_homology(f1, &r2, &r1).unwrap();
    assert_eq!(rank_by_u(&h1).values().sum::<usize>(), 1);
    let img = h1[&0].column(0);
    assert!(b.mul_vec(&img).unwrap().is_zero());
    let comp = twist_quotient_map(&t, 2, 0, DEFAULT_CAP).unwrap();
    let hc = induced_on_homology(&comp, &reduce_with_transfer(comp.source()), &r0).unwrap();
    assert!(rank_by_u(&hc).is_empty());
}

#[test]
fn composites_match_single_steps() {
    let t = unknot_tangle();
    let fam = TwistFamily::build(&t, -3, 4, DEFAULT_CAP).unwrap();
    for (m, k, n) in [(4, 2, 0), (2, 0, -3), (1, -1, -2)] {
        let long = fam.composite(m, n).unwrap();
        let split = fam.composite(m, k).unwrap().then(&fam.composite(k, n).unwrap()).unwrap();
        assert_eq!(long, split);
        assert_eq!(long.q_shift2(), -(m - n) as i32);
    }
    let c = fam.complex(2).clone();
    let id = ChainMap::identity(&c);
    let r = reduce_with_transfer(&c);
    let h = induced_on_homology(&id, &r, &r).unwrap();
    for (u, b) in h {
        assert_eq!(b, kappa_core::f2la::BitMatrix::identity(r.reduced_generators(u).len()));
    }
}

#[test]
fn exact_triangle_on_unknot_levels() {
    let t = unknot_tangle();
    let fam = TwistFamily::build(&t, -4, 4, DEFAULT_CAP).unwrap();
    for i in -4..4 {
        let rep = triangle_check(&fam, i).unwrap();
        assert!(rep.holds, "{rep:?}");
    }
    let rep = triangle_check(&fam, 0).unwrap();
    assert_eq!((rep.dim_source, rep.dim_target, rep.kernel, rep.cokernel), (2, 1, 1, 0));
    let rep = triangle_check(&fam, 1).unwrap();
    assert_eq!((rep.dim_source, rep.dim_target, rep.kernel, rep.cokernel), (1, 2, 0, 1));
}

#[test]
fn family_of_trivial_tangle() {
    let t = SuturedTangle::new(vec![], Boundary { b0: 1, b1: 2, t0: 1, t1: 2 }, "trivial");
    let fam = TwistFamily::build(&t, -3, 3, DEFAULT_CAP).unwrap();
    for i in -3..=3 {
        assert_eq!(fam.homology(i), homology(&kappa_core::khcomplex::build_reduced_complex(&t.closure(i).unwrap()).unwrap()), "level {i}");
    }
}

use kappa_core::diagram::{Boundary, PlanarDiagram, SuturedTangle};
use kappa_core::khcomplex::cube::cube_complex;
use kappa_core::khcomplex::{
    build_reduced_complex, determinant, homology, is_thin, jones_polynomial, reduce_with_transfer, GenLabel, Generator,
    GradedComplex, GradedVectorSpace,
};
use proptest::prelude::*;

/// PD code of a braid closure. Letters are `±(i+1)` for `σ_i^{±1}`.
fn braid_closure(strands: usize, word: &[i32]) -> PlanarDiagram {
    let mut next = strands as u32 + 1;
    let mut pos: Vec<u32> = (1..=strands as u32).collect();
    let mut crossings = Vec::new();
    for &g in word {
        let i = (g.unsigned_abs() - 1) as usize;
        let (x, y) = (pos[i], pos[i + 1]);
        let (ne, nw) = (next, next + 1);
        next += 2;
        crossings.push(if g > 0 { [y, ne, nw, x] } else { [x, y, ne, nw] });
        pos[i] = nw;
        pos[i + 1] = ne;
    }
    for c in crossings.iter_mut() {
        for a in c.iter_mut() {
            if let Some(p) = pos.iter().position(|&f| f == *a) {
                *a = p as u32 + 1;
            }
        }
    }
    PlanarDiagram::from_crossings(crossings).unwrap()
}

/// Over F2 the unreduced theory is the reduced one tensored with a
/// two-dimensional space in quantum degrees ±1.
fn unreduced_from_reduced(r: &GradedVectorSpace) -> GradedVectorSpace {
    r.shift(0, 1).sum(&r.shift(0, -1))
}

fn assert_scan_matches_cube(d: &PlanarDiagram) {
    let scanned = build_reduced_complex(d).unwrap();
    assert!(scanned.is_chain_complex());
    let red = homology(&scanned);
    let cube = cube_complex(d, true).unwrap();
    assert!(cube.is_chain_complex());
    assert_eq!(homology(&cube), red);
    assert_eq!(cube.homology_by_rank(), red);
    let full = cube_complex(d, false).unwrap();
    assert!(full.is_chain_complex());
    assert_eq!(homology(&full), unreduced_from_reduced(&red));
}

#[test]
fn unknot_diagrams() {
    let u = PlanarDiagram::unknot();
    let h = homology(&build_reduced_complex(&u).unwrap());
    assert_eq!(h, GradedVectorSpace::from_cells([((0, 0), 1)]));
    assert_eq!(jones_polynomial(&h).to_string(), "1");
    assert_eq!(determinant(&h), Some(1));
    assert!(is_thin(&h));
    for pd in [vec![[1, 1, 2, 2]], vec![[1, 2, 2, 1]]] {
        let d = PlanarDiagram::from_crossings(pd).unwrap();
        assert_eq!(homology(&build_reduced_complex(&d).unwrap()), GradedVectorSpace::from_cells([((0, 0), 1)]));
        assert_scan_matches_cube(&d);
    }
}

#[test]
fn trefoil_and_figure_eight() {
    let t = PlanarDiagram::from_crossings(vec![[1, 5, 2, 4], [3, 1, 4, 6], [5, 3, 6, 2]]).unwrap();
    let h = homology(&build_reduced_complex(&t).unwrap());
    assert_eq!(h.total_dim(), 3);
    assert_eq!(determinant(&h), Some(3));
    assert!(is_thin(&h));
    assert_scan_matches_cube(&t);
    let e = PlanarDiagram::from_crossings(vec![[4, 2, 5, 1], [8, 6, 1, 5], [6, 3, 7, 4], [2, 7, 3, 8]]).unwrap();
    let h = homology(&build_reduced_complex(&e).unwrap());
    assert_eq!(h.total_dim(), 5);
    assert_eq!(determinant(&h), Some(5));
    assert_eq!(h, h.reflect());
    assert_scan_matches_cube(&e);
}

#[test]
fn braid_trefoils_have_the_expected_tables() {
    // σ1^3: all crossings positive, so the table sits at u >= 0.
    let pos = homology(&build_reduced_complex(&braid_closure(2, &[1, 1, 1])).unwrap());
    assert_eq!(pos, GradedVectorSpace::from_cells([((0, 2), 1), ((2, 6), 1), ((3, 8), 1)]));
    assert_eq!(jones_polynomial(&pos).to_string(), "-t^4 + t^3 + t");
    let neg = homology(&build_reduced_complex(&braid_closure(2, &[-1, -1, -1])).unwrap());
    assert_eq!(neg, pos.reflect());
    assert_eq!(jones_polynomial(&neg), jones_polynomial(&pos).invert());
}

#[test]
fn mirror_rule_on_diagrams() {
    let d = braid_closure(3, &[1, -2, 1, 1, -2, -2, 1]);
    let h = homology(&build_reduced_complex(&d).unwrap());
    let hm = homology(&build_reduced_complex(&d.mirror()).unwrap());
    assert_eq!(hm, h.reflect());
    let c = build_reduced_complex(&d).unwrap();
    assert_eq!(homology(&c.mirror()), h.reflect());
}

#[test]
fn reidemeister_moves_leave_homology_alone() {
    // Trefoil as σ1^3, then with an extra R1 kink (σ2 on a third strand)
    // and with an R2 pair σ2 σ2^{-1}.
    let base = homology(&build_reduced_complex(&braid_closure(2, &[1, 1, 1])).unwrap());
    for w in [vec![1, 1, 1, 2], vec![1, 1, 1, -2], vec![1, 2, -2, 1, 1, 2]] {
        let h = homology(&build_reduced_complex(&braid_closure(3, &w)).unwrap());
        assert_eq!(h, base, "word {w:?}");
    }
}

#[test]
fn unknot_tangle_closures_match_the_cube() {
    let t = SuturedTangle::new(vec![[1, 2, 3, 4]], Boundary { b0: 1, b1: 2, t0: 4, t1: 3 }, "unknot");
    for n in -5..=5 {
        let d = t.closure(n).unwrap();
        assert_scan_matches_cube(&d);
        let h = homology(&build_reduced_complex(&d).unwrap());
        // T(n) is the (2, n-1) torus link; its reduced homology has
        // dimension max(|n-1|, 1) when it is a knot and |n-1| + ... for links.
        let m = (n - 1).unsigned_abs() as usize;
        let expect = if m == 0 { 2 } else { m };
        assert_eq!(h.total_dim(), expect, "n = {n}");
    }
}

#[test]
fn reduction_invariants() {
    let d = braid_closure(3, &[1, 1, -2, 1, -2]);
    for c in [cube_complex(&d, true).unwrap(), cube_complex(&d, false).unwrap()] {
        let r = reduce_with_transfer(&c);
        assert!(r.verify(&c));
        assert_eq!(r.homology(), c.homology_by_rank());
    }
}

#[test]
fn trivial_reductions() {
    let g = |u, label| Generator { u, q2: 0, label: GenLabel::Plain(label) };
    let zero_d = GradedComplex::from_parts(&[g(0, 0), g(1, 1)], &[]).unwrap();
    let r = reduce_with_transfer(&zero_d);
    assert!(r.verify(&zero_d));
    assert_eq!(r.homology().total_dim(), 2);
    let acyclic = GradedComplex::from_parts(&[g(0, 0), g(1, 1)], &[(0, 1)]).unwrap();
    let r = reduce_with_transfer(&acyclic);
    assert!(r.verify(&acyclic));
    assert!(r.homology().is_zero());
    let bad = Generator { u: 1, q2: 2, label: GenLabel::Plain(2) };
    assert!(GradedComplex::from_parts(&[g(0, 0), bad], &[(0, 1)]).is_err());
}

fn arb_word() -> impl Strategy<Value = Vec<i32>> {
    proptest::collection::vec(prop_oneof![Just(1), Just(-1), Just(2), Just(-2)], 2..8).prop_filter(
        "both generators used",
        |w: &Vec<i32>| w.iter().any(|g| g.abs() == 1) && w.iter().any(|g| g.abs() == 2),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn scan_agrees_with_cube_on_braid_closures(w in arb_word()) {
        let d = braid_closure(3, &w);
        assert_scan_matches_cube(&d);
    }
}

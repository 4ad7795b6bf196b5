use kappa_core::diagram::{Basepoint, Boundary, PlanarDiagram, SuturedTangle};
use kappa_core::Error;

fn unknot_tangle() -> SuturedTangle {
    SuturedTangle::new(vec![[1, 2, 3, 4]], Boundary { b0: 1, b1: 2, t0: 4, t1: 3 }, "unknot")
}

fn trivial_tangle() -> SuturedTangle {
    SuturedTangle::new(vec![], Boundary { b0: 1, b1: 2, t0: 1, t1: 2 }, "trivial")
}

#[test]
fn unknot_tangle_is_valid_and_braid_like() {
    let r = unknot_tangle().validate().unwrap();
    assert!(r.planar);
    assert!(r.braid_like);
    assert_eq!(r.endpoints, 4);
    assert_eq!(r.closed_components, 0);
}

#[test]
fn strands_returning_to_the_bottom_are_not_braid_like() {
    // A cup at the bottom and a cap at the top, crossing nowhere.
    let t = SuturedTangle::new(vec![], Boundary { b0: 1, b1: 1, t0: 2, t1: 2 }, "cupcap");
    let r = t.validate().unwrap();
    assert!(r.planar);
    assert!(!r.braid_like);
    assert_eq!(t.closure(1), Err(Error::NotBraidLike));
    assert_eq!(t.c_t(), Err(Error::NotBraidLike));
}

#[test]
fn arc_with_three_ends_is_rejected() {
    let t = SuturedTangle::new(vec![[1, 2, 3, 1], [1, 5, 6, 7]], Boundary { b0: 2, b1: 3, t0: 5, t1: 6 }, "bad");
    match t.validate() {
        Err(Error::Malformed { arcs, .. }) => assert!(arcs.contains(&1)),
        other => panic!("expected malformed, got {other:?}"),
    }
}

#[test]
fn nonplanar_rotation_is_detected() {
    // Swapping two boundary labels on the single crossing breaks planarity.
    let t = SuturedTangle::new(vec![[1, 3, 2, 4]], Boundary { b0: 1, b1: 2, t0: 4, t1: 3 }, "twisted");
    assert!(!t.validate().unwrap().planar);
}

#[test]
fn unknot_tangle_closures() {
    let t = unknot_tangle();
    for n in -5..=5i64 {
        let d = t.closure(n).unwrap();
        d.check().unwrap();
        assert!(d.is_planar());
        assert_eq!(d.crossing_count(), 1 + n.unsigned_abs() as usize);
        assert_eq!(d.distinguished.len(), n.unsigned_abs() as usize);
        // T(n) is the (2, n-1) torus link.
        let comps = if (n - 1).rem_euclid(2) == 0 { 2 } else { 1 };
        assert_eq!(d.component_count(), comps, "n = {n}");
        assert!(matches!(d.basepoint, Basepoint::Arc(_)));
        let signs = d.signs();
        for &c in &d.distinguished {
            assert_eq!(signs[c], if n > 0 { 1 } else { -1 });
        }
    }
    assert!(t.closure(0).unwrap().distinguished.is_empty());
    let inf = t.closure_infinity().unwrap();
    inf.check().unwrap();
    assert_eq!(inf.crossing_count(), 1);
    assert_eq!(inf.component_count(), 1);
}

#[test]
fn c_t_of_unknot_tangle() {
    // T(0) has one negative crossing; reversing a strand makes it positive.
    assert_eq!(unknot_tangle().c_t(), Ok(-1));
    assert_eq!(unknot_tangle().mirror().c_t(), Ok(1));
    assert_eq!(trivial_tangle().c_t(), Ok(0));
}

#[test]
fn mirror_commutes_with_closure() {
    let t = unknot_tangle();
    for n in -4..=4 {
        let a = t.mirror().closure(-n).unwrap();
        let b = t.closure(n).unwrap().mirror();
        assert_eq!(a.crossing_count(), b.crossing_count());
        let (ap, am) = a.sign_counts();
        let (bp, bm) = b.sign_counts();
        assert_eq!((ap, am), (bp, bm));
        let (op, om) = t.closure(n).unwrap().sign_counts();
        assert_eq!((bp, bm), (om, op));
    }
    assert_eq!(t.mirror().mirror(), t);
    let d = t.closure(3).unwrap();
    assert_eq!(d.mirror().mirror(), d);
}

#[test]
fn trivial_tangle_closures_have_free_loops() {
    let t = trivial_tangle();
    assert!(t.validate().unwrap().braid_like);
    let d0 = t.closure(0).unwrap();
    assert_eq!(d0.crossing_count(), 0);
    assert_eq!(d0.free_loops, 2);
    assert_eq!(d0.basepoint, Basepoint::FreeLoop);
    let d2 = t.closure(2).unwrap();
    d2.check().unwrap();
    assert_eq!(d2.component_count(), 2);
    assert_eq!(d2.sign_counts(), (2, 0));
    let inf = t.closure_infinity().unwrap();
    assert_eq!(inf.free_loops, 1);
}

#[test]
fn from_crossings_orients_and_checks() {
    let d = PlanarDiagram::from_crossings(vec![[1, 5, 2, 4], [3, 1, 4, 6], [5, 3, 6, 2]]).unwrap();
    assert_eq!(d.component_count(), 1);
    assert!(d.is_planar());
    let (p, m) = d.sign_counts();
    assert!(p == 3 || m == 3);
    assert!(PlanarDiagram::from_crossings(vec![[1, 2, 3, 4]]).is_err());
}

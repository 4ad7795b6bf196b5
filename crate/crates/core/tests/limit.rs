mod common;

use common::dataset;
use kappa_core::diagram::{Boundary, SuturedTangle};
use kappa_core::error::Error;
use kappa_core::limit::*;
use std::collections::BTreeMap;

fn cells(t: &[(i32, i32)]) -> BiTable {
    t.iter().map(|&c| (c, 1)).collect()
}

#[test]
fn unknot_kappa_is_zero() {
    let t = dataset("unknot");
    let w = compute_window(&t, -2, 2, 24).unwrap();
    let dims: Vec<usize> = (-2..=2).map(|i| w.space(i).total_dim()).collect();
    assert_eq!(dims, vec![3, 2, 1, 2, 1]);
    for (n, m) in [(0, 2), (-3, 3), (-1, 5)] {
        let w = compute_window(&t, n, m, 24).unwrap();
        assert!(eventual_image(&w).ranks.is_empty(), "[{n}, {m}]");
    }
    let k = compute_kappa(&t, &WindowPolicy::default()).unwrap();
    assert!(k.is_zero());
    assert!(k.table.is_empty());
    let r = structure_report(&k);
    assert!(r.tiled() && r.translates.is_empty() && r.residue_mod4 == 0);
    assert_eq!(amphicheirality_check(&t, &WindowPolicy::default()).unwrap().verdict, Verdict::Silent);
}

#[test]
fn trefoil_kappa() {
    let t = dataset("trefoil");
    let k = compute_kappa(&t, &WindowPolicy::default()).unwrap();
    assert_eq!(k.table, cells(&[(-5, 1), (-3, 1), (-2, 1), (0, 1)]));
    assert_eq!(k.total_dim, 4);
    let c = &k.certificate;
    assert!(c.surjective_top && c.injective_bottom && c.agreements == 3);
    assert!(t.crossings.len() + c.window.1 as usize <= 24);

    let r = structure_report(&k);
    assert_eq!(r.translates, vec![(-5, 1)]);
    assert!(r.tiled());

    let rep = amphicheirality_check(&t, &WindowPolicy::default()).unwrap();
    assert_eq!(rep.verdict, Verdict::Obstructed);
}

#[test]
fn trefoil_window_dims() {
    let t = dataset("trefoil");
    let w = compute_window(&t, 1, 9, 24).unwrap();
    let dims: Vec<usize> = (1..=9).map(|i| w.space(i).total_dim()).collect();
    assert_eq!(dims, vec![7, 6, 5, 6, 5, 6, 7, 8, 9]);
    // The surjective steps sit at the top, the injective ones at the bottom.
    let r = w.step_ranks();
    for i in 5..9 {
        assert_eq!(r[&i], w.space(i).total_dim(), "f_{i} onto");
    }
    for i in 1..3 {
        assert_eq!(r[&i], w.space(i + 1).total_dim(), "f_{i} into");
    }
}

#[test]
fn trefoil_profile() {
    let t = dataset("trefoil");
    let w = compute_window(&t, -4, 9, 24).unwrap();
    let p = limit_profile(&w).unwrap();
    let want: BTreeMap<i32, usize> = [(-5, 1), (-4, 1), (-3, 1), (-2, 2), (-1, 1), (0, 2), (1, 1)].into();
    assert_eq!(p.limit, want);
    assert_eq!(p.certified_max_u, 1);
    // Far below the top the stable image is kappa.
    let kappa: BTreeMap<i32, usize> = [(-5, 1), (-3, 1), (-2, 1), (0, 1)].into();
    assert_eq!(p.levels[&-4], kappa);

    // A wider window certifies more of the tail and keeps what was certified.
    let w2 = compute_window(&t, -4, 12, 24).unwrap();
    let p2 = limit_profile(&w2).unwrap();
    assert!(p2.certified_max_u > p.certified_max_u);
    for (u, d) in &p.limit {
        assert_eq!(p2.limit[u], *d);
    }
    for u in 1..=p2.certified_max_u {
        assert_eq!(p2.limit[&u], 1);
    }
}

#[test]
fn mirrored_trefoil() {
    let t = dataset("trefoil");
    let policy = WindowPolicy { cap: 32, ..Default::default() };
    let k = compute_kappa(&t, &policy).unwrap();
    let km = compute_kappa(&t.mirror(), &policy).unwrap();
    assert_eq!(km.table, cells(&[(0, -1), (2, -1), (3, -1), (5, -1)]));
    assert_eq!(mirror_reflect(&k).table, km.table);
    assert_eq!(mirror_reflect(&mirror_reflect(&k)), k);
}

#[test]
fn figure_eight_grid() {
    let policy = WindowPolicy { cap: 32, ..Default::default() };
    let h1 = dataset("figure8-h1");
    let h2 = dataset("figure8-h2");
    let k1 = compute_kappa(&h1, &policy).unwrap();
    let mut want = cells(&[(0, -3), (2, -3), (3, -3), (5, -3)]);
    want.extend(cells(&[(4, -1), (6, -1), (7, -1), (9, -1)]));
    assert_eq!(k1.table, want);
    let k2 = compute_kappa(&h2, &policy).unwrap();
    assert_eq!(k2.table, mirror_reflect(&k1).table);

    let r = structure_report(&k1);
    assert_eq!(r.translates, vec![(0, -3), (4, -1)]);
    assert!(r.tiled());

    // Each inversion alone is asymmetric; the pair exchanged by the mirror is not.
    assert_eq!(amphicheirality_check(&h1, &policy).unwrap().verdict, Verdict::Obstructed);
    assert_eq!(amphicheirality_check_pair(&h1, &h2, &policy).unwrap().verdict, Verdict::Silent);
}

#[test]
fn torus_knots() {
    let policy = WindowPolicy { cap: 40, ..Default::default() };
    for (name, lo) in [("5_1", -2), ("8_19", 1)] {
        let k = compute_kappa(&dataset(name), &policy).unwrap();
        let dims: Vec<usize> = (lo..lo + 7).map(|u| k.dims_by_u().get(&u).copied().unwrap_or(0)).collect();
        assert_eq!(dims, vec![1, 1, 1, 2, 1, 1, 1], "{name}");
        assert_eq!(k.total_dim, 8);
        assert!(k.table.keys().all(|&(_, d)| d == 1), "{name} thin");
        let r = structure_report(&k);
        assert_eq!(r.translates.len(), 2, "{name}");
        assert!(r.tiled());
    }
}

#[test]
fn window_independence() {
    let t = dataset("trefoil");
    let mut tower = Tower::new(&t, -8, 8, 24).unwrap();
    let base = kappa_in_window(&tower.window(-8, 8).unwrap()).unwrap().unwrap().0;
    tower.extend_to(-10, 12).unwrap();
    for (n, m) in [(-10, 10), (-9, 12), (-8, 11)] {
        let w = tower.window(n, m).unwrap();
        let (table, ei) = kappa_in_window(&w).unwrap().unwrap();
        assert!(ei.stable);
        assert_eq!(table, base, "[{n}, {m}]");
    }
}

#[test]
fn composite_rank_bounded_by_steps() {
    for name in ["unknot", "trefoil", "figure8-h1"] {
        let t = dataset(name);
        let w = compute_window(&t, -5, 5, 32).unwrap();
        let total: usize = eventual_image(&w).ranks.values().sum();
        let min = w.step_ranks().values().copied().min().unwrap();
        assert!(total <= min, "{name}");
        // Shrinking the window can only enlarge the image.
        let inner = compute_window(&t, -3, 3, 32).unwrap();
        for (u, r) in eventual_image(&w).ranks {
            assert!(eventual_image(&inner).ranks[&u] >= r, "{name} u={u}");
        }
    }
}

#[test]
fn errors() {
    let t = dataset("trefoil");
    assert_eq!(compute_window(&t, 3, 3, 24).unwrap_err(), Error::InvalidWindow { n: 3, m: 3 });
    let tight = WindowPolicy { cap: 18, ..Default::default() };
    match compute_kappa(&t, &tight) {
        Err(Error::Unstabilized { .. }) => {}
        other => panic!("{other:?}"),
    }
    let small = WindowPolicy { cap: 12, ..Default::default() };
    assert!(matches!(compute_kappa(&t, &small), Err(Error::ResourceCap { .. })));

    // Both columns twisted the same way: T(1/0) is a five-dimensional knot.
    let same = SuturedTangle::new(
        vec![[5, 7, 8, 1], [7, 9, 10, 8], [9, 6, 3, 10], [2, 11, 12, 5], [11, 4, 6, 12]],
        Boundary { b0: 1, b1: 2, t0: 3, t1: 4 },
        "same-sign",
    );
    assert_eq!(compute_window(&same, -2, 2, 24).unwrap_err(), Error::Inadmissible { closure_dim: 5 });
}

mod props {
    use super::*;
    use proptest::prelude::*;

    fn arb_kappa() -> impl Strategy<Value = KappaInvariant> {
        proptest::collection::btree_map((-8i32..8, (-4i32..4).prop_map(|d| 2 * d + 1)), 1usize..3, 0..10).prop_map(|table| {
            let total_dim = table.values().sum();
            KappaInvariant {
                table,
                total_dim,
                certificate: Certificate {
                    window: (0, 1),
                    agreements: 0,
                    surjective_top: false,
                    injective_bottom: false,
                    windows_tried: Vec::new(),
                },
            }
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn reflect_is_an_involution(k in arb_kappa()) {
            let r = mirror_reflect(&k);
            prop_assert_eq!(r.total_dim, k.total_dim);
            prop_assert_eq!(mirror_reflect(&r), k);
        }

        #[test]
        fn tiling_accounts_for_every_cell(k in arb_kappa()) {
            let r = structure_report(&k);
            let left: usize = r.leftover.values().sum();
            prop_assert_eq!(4 * r.translates.len() + left, k.total_dim);
            prop_assert_eq!(r.residue_mod4, k.total_dim % 4);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn images_shrink_as_windows_grow(n in -6i64..0, m in 1i64..7, dn in 0i64..3, dm in 0i64..3) {
            let t = dataset("trefoil");
            let tower = Tower::new(&t, n - dn, m + dm, 24).unwrap();
            let inner = eventual_image(&tower.window(n, m).unwrap()).ranks;
            let outer = eventual_image(&tower.window(n - dn, m + dm).unwrap()).ranks;
            for (u, r) in outer {
                prop_assert!(inner.get(&u).copied().unwrap_or(0) >= r);
            }
        }
    }
}

use kappa_core::f2la::{image_basis, kernel_basis, multiply, rank, solve, BitMatrix, BitVec};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Independent rank oracle: plain Gaussian elimination on boolean rows,
/// pivoting on the last available row instead of the first.
fn naive_rank(rows: &[Vec<bool>]) -> usize {
    let mut a: Vec<Vec<bool>> = rows.to_vec();
    let ncols = a.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..a.len()).rev().find(|&i| a[i][c]) else { continue };
        a.swap(r, p);
        for i in 0..a.len() {
            if i != r && a[i][c] {
                for j in 0..ncols {
                    let x = a[r][j];
                    a[i][j] ^= x;
                }
            }
        }
        r += 1;
    }
    r
}

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, density: f64) -> (BitMatrix, Vec<Vec<bool>>) {
    let plain: Vec<Vec<bool>> = (0..rows).map(|_| (0..cols).map(|_| rng.gen_bool(density)).collect()).collect();
    (BitMatrix::from_fn(rows, cols, |i, j| plain[i][j]), plain)
}

fn arb_matrix(max: usize) -> impl Strategy<Value = BitMatrix> {
    (0..=max, 0..=max).prop_flat_map(|(r, c)| {
        proptest::collection::vec(any::<bool>(), r * c).prop_map(move |bits| BitMatrix::from_fn(r, c, |i, j| bits[i * c + j]))
    })
}

#[test]
fn rank_matches_naive_oracle_on_100x100() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for density in [0.02, 0.1, 0.5] {
        let (m, plain) = random_matrix(&mut rng, 100, 100, density);
        assert_eq!(rank(&m), naive_rank(&plain));
    }
    // Rank-deficient by construction: product of 100x40 and 40x100.
    let (a, _) = random_matrix(&mut rng, 100, 40, 0.5);
    let (b, _) = random_matrix(&mut rng, 40, 100, 0.5);
    let p = multiply(&a, &b).unwrap();
    let plain: Vec<Vec<bool>> = (0..100).map(|i| (0..100).map(|j| p.get(i, j)).collect()).collect();
    assert_eq!(rank(&p), naive_rank(&plain));
    assert!(rank(&p) <= 40);
}

#[test]
fn kernel_of_random_50x80() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (m, _) = random_matrix(&mut rng, 50, 80, 0.3);
    let k = kernel_basis(&m);
    assert_eq!(k.dim(), 80 - rank(&m));
    for v in k.basis() {
        assert!(m.mul_vec(v).unwrap().is_zero());
    }
}

#[test]
fn image_spans_the_column_space() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let (a, _) = random_matrix(&mut rng, 30, 12, 0.4);
    let (b, _) = random_matrix(&mut rng, 12, 25, 0.4);
    let m = multiply(&a, &b).unwrap();
    let im = image_basis(&m);
    assert_eq!(im.dim(), rank(&m));
    for j in 0..m.cols() {
        assert!(im.contains(&m.column(j)));
    }
    for v in im.basis() {
        assert!(solve(&m, v).unwrap().is_some());
    }
}

#[test]
fn solve_edge_cases() {
    let v = BitVec::from_ones(4, &[0, 3]);
    assert_eq!(solve(&BitMatrix::identity(4), &v).unwrap(), Some(v.clone()));
    assert_eq!(solve(&BitMatrix::zeros(4, 4), &v).unwrap(), None);
    assert!(solve(&BitMatrix::zeros(3, 4), &v).is_err());
    assert!(multiply(&BitMatrix::zeros(3, 4), &BitMatrix::zeros(3, 4)).is_err());
}

#[test]
fn inverse_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut found = 0;
    while found < 5 {
        let (m, _) = random_matrix(&mut rng, 20, 20, 0.5);
        if let Some(inv) = m.inverse() {
            assert_eq!(multiply(&m, &inv).unwrap(), BitMatrix::identity(20));
            found += 1;
        } else {
            assert!(rank(&m) < 20);
        }
    }
}

proptest! {
    #[test]
    fn rank_nullity(m in arb_matrix(70)) {
        prop_assert_eq!(m.cols(), rank(&m) + kernel_basis(&m).dim());
    }

    #[test]
    fn transpose_rank(m in arb_matrix(70)) {
        prop_assert_eq!(rank(&m), rank(&m.transpose()));
        prop_assert_eq!(m.transpose().transpose(), m);
    }

    #[test]
    fn solve_in_image(m in arb_matrix(40), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = BitVec::from_bools(&(0..m.cols()).map(|_| rng.gen_bool(0.5)).collect::<Vec<_>>());
        let v = m.mul_vec(&x).unwrap();
        let y = solve(&m, &v).unwrap().expect("consistent system");
        prop_assert_eq!(m.mul_vec(&y).unwrap(), v);
    }

    #[test]
    fn multiply_associative_and_submultiplicative(seed in any::<u64>(), dims in (1usize..30, 1usize..30, 1usize..30, 1usize..30)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, _) = random_matrix(&mut rng, dims.0, dims.1, 0.3);
        let (b, _) = random_matrix(&mut rng, dims.1, dims.2, 0.3);
        let (c, _) = random_matrix(&mut rng, dims.2, dims.3, 0.3);
        let ab = multiply(&a, &b).unwrap();
        prop_assert_eq!(multiply(&ab, &c).unwrap(), multiply(&a, &multiply(&b, &c).unwrap()).unwrap());
        prop_assert!(rank(&ab) <= rank(&a).min(rank(&b)));
        prop_assert_eq!(multiply(&a, &BitMatrix::identity(dims.1)).unwrap(), a.clone());
        prop_assert!(multiply(&a, &BitMatrix::zeros(dims.1, dims.2)).unwrap().is_zero());
    }
}

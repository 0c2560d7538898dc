use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tpplab::strassen::{op_count, strassen_2x2, strassen_recursive, strassen_recursive_counted};
use tpplab::Matrix;

fn random_matrix(n: usize, rng: &mut ChaCha8Rng) -> Matrix<i64> {
    Matrix::from_fn(n, n, |_, _| rng.gen_range(-100..=100))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn recursive_matches_schoolbook(seed in any::<u64>(), n in 1usize..=20) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b) = (random_matrix(n, &mut rng), random_matrix(n, &mut rng));
        prop_assert_eq!(strassen_recursive(&a, &b).unwrap(), a.matmul(&b).unwrap());
    }

    #[test]
    fn cutoff_does_not_change_the_product(seed in any::<u64>(), cutoff in 1usize..9) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b) = (random_matrix(16, &mut rng), random_matrix(16, &mut rng));
        let (c, _) = strassen_recursive_counted(&a, &b, cutoff).unwrap();
        prop_assert_eq!(c, a.matmul(&b).unwrap());
    }
}

#[test]
fn exhaustive_binary_2x2() {
    let bits = |m: u32| Matrix::from_fn(2, 2, |i, j| ((m >> (2 * i + j)) & 1) as i64);
    for x in 0..16 {
        for y in 0..16 {
            let (a, b) = (bits(x), bits(y));
            assert_eq!(strassen_2x2(&a, &b).unwrap().0, a.matmul(&b).unwrap());
        }
    }
}

#[test]
fn addition_count_follows_the_recursion() {
    for k in 1..=6u32 {
        let n = 1usize << k;
        let a = Matrix::from_fn(n, n, |i, j| (i + j) as i64);
        let (_, count) = strassen_recursive_counted(&a, &a, 1).unwrap();
        let bound: u64 = (1..=k).map(|j| 18 * 7u64.pow(k - j) * 4u64.pow(j - 1)).sum();
        assert_eq!(count.adds, bound);
        assert_eq!(count.mults, 7u64.pow(k));
    }
}

#[test]
fn op_count_closed_form() {
    for k in 0..=40u32 {
        let closed = 7u128.pow(k + 1) - 6 * 4u128.pow(k);
        assert_eq!(op_count(1 << k).unwrap(), closed, "k = {k}");
    }
}

#[test]
fn growth_exponent_tends_to_log2_7() {
    let log7 = 7f64.log2();
    let e = |k: u32| (op_count(1 << k).unwrap() as f64).log2() / k as f64;
    assert!(e(20) < e(10));
    // log2 T(2^k) / k = log2 7 · (1 + 1/k) minus a vanishing correction
    for k in [10, 20, 40] {
        let lead = log7 * (1.0 + 1.0 / k as f64);
        assert!(e(k) < lead && lead - e(k) < 0.01, "k = {k}: {}", e(k));
    }
    assert!(e(40) - log7 < 0.08);
}

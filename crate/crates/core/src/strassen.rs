//! Strassen's seven-product scheme for 2×2 blocks, its recursive use, and the
//! operation count `T(n) = 7·T(n/2) + 18·(n/2)²`.

use std::ops::AddAssign;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{Matrix, Scalar};

/// Blocks at least this large run their seven sub-products in parallel.
const PARALLEL_MIN: usize = 64;

/// Scalar operations performed by a multiplication.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct OpCount {
    pub mults: u64,
    pub adds: u64,
}

impl OpCount {
    pub fn total(&self) -> u64 {
        self.mults + self.adds
    }
}

impl AddAssign for OpCount {
    fn add_assign(&mut self, o: OpCount) {
        self.mults += o.mults;
        self.adds += o.adds;
    }
}

fn require_square(a: &Matrix<impl Scalar>, b: &Matrix<impl Scalar>, n: Option<usize>) -> Result<usize> {
    let k = a.rows();
    let ok = a.cols() == k && b.rows() == k && b.cols() == k && n.is_none_or(|n| n == k);
    if ok {
        Ok(k)
    } else {
        Err(Error::Dimension(format!(
            "expected square operands{}, got {}x{} and {}x{}",
            n.map(|n| format!(" of size {n}")).unwrap_or_default(),
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )))
    }
}

/// The 2×2 product with exactly 7 scalar multiplications and 18 additions.
pub fn strassen_2x2<C: Scalar>(a: &Matrix<C>, b: &Matrix<C>) -> Result<(Matrix<C>, OpCount)> {
    require_square(a, b, Some(2))?;
    let x = |i, j| a.get(i, j).clone();
    let y = |i, j| b.get(i, j).clone();
    let p1 = (x(0, 0) + x(1, 1)) * (y(0, 0) + y(1, 1));
    let p2 = (x(1, 0) + x(1, 1)) * y(0, 0);
    let p3 = x(0, 0) * (y(0, 1) - y(1, 1));
    let p4 = (x(1, 0) - x(0, 0)) * (y(0, 0) + y(0, 1));
    let p5 = (x(0, 0) + x(0, 1)) * y(1, 1);
    let p6 = x(1, 1) * (y(1, 0) - y(0, 0));
    let p7 = (x(0, 1) - x(1, 1)) * (y(1, 0) + y(1, 1));
    let c11 = p1.clone() + p6.clone() - p5.clone() + p7;
    let c12 = p3.clone() + p5;
    let c21 = p2.clone() + p6;
    let c22 = p1 - p2 + p3 + p4;
    let c = Matrix::from_rows(vec![vec![c11, c12], vec![c21, c22]])?;
    Ok((c, OpCount { mults: 7, adds: 18 }))
}

fn schoolbook_counted<C: Scalar>(a: &Matrix<C>, b: &Matrix<C>) -> (Matrix<C>, OpCount) {
    let n = a.rows() as u64;
    let c = a.matmul(b).expect("square blocks of equal size");
    (c, OpCount { mults: n * n * n, adds: n * n * (n - 1) })
}

fn recurse<C: Scalar>(a: &Matrix<C>, b: &Matrix<C>, cutoff: usize) -> (Matrix<C>, OpCount) {
    let n = a.rows();
    if n <= cutoff.max(1) {
        return schoolbook_counted(a, b);
    }
    let h = n / 2;
    let q = |m: &Matrix<C>, i: usize, j: usize| m.block(i * h, j * h, h, h);
    let (a11, a12, a21, a22) = (q(a, 0, 0), q(a, 0, 1), q(a, 1, 0), q(a, 1, 1));
    let (b11, b12, b21, b22) = (q(b, 0, 0), q(b, 0, 1), q(b, 1, 0), q(b, 1, 1));
    let operands = [
        (a11.add(&a22), b11.add(&b22)),
        (a21.add(&a22), b11.clone()),
        (a11.clone(), b12.sub(&b22)),
        (a21.sub(&a11), b11.add(&b12)),
        (a11.add(&a12), b22.clone()),
        (a22.clone(), b21.sub(&b11)),
        (a12.sub(&a22), b21.add(&b22)),
    ];
    let sub = |(x, y): &(Matrix<C>, Matrix<C>)| recurse(x, y, cutoff);
    let products: Vec<(Matrix<C>, OpCount)> = if n >= PARALLEL_MIN {
        operands.par_iter().map(sub).collect()
    } else {
        operands.iter().map(sub).collect()
    };
    let mut count = OpCount { mults: 0, adds: 18 * (h * h) as u64 };
    for (_, c) in &products {
        count += *c;
    }
    let p = |i: usize| &products[i].0;
    let c11 = p(0).add(p(5)).sub(p(4)).add(p(6));
    let c12 = p(2).add(p(4));
    let c21 = p(1).add(p(5));
    let c22 = p(0).sub(p(1)).add(p(2)).add(p(3));
    let mut c = Matrix::zeros(n, n);
    c.put_block(0, 0, &c11);
    c.put_block(0, h, &c12);
    c.put_block(h, 0, &c21);
    c.put_block(h, h, &c22);
    (c, count)
}

/// `A·B` by recursive block splitting. Operands are zero-padded to the next
/// power of two and the result is cropped; blocks of side `≤ cutoff` are
/// multiplied directly.
pub fn strassen_recursive_counted<C: Scalar>(
    a: &Matrix<C>,
    b: &Matrix<C>,
    cutoff: usize,
) -> Result<(Matrix<C>, OpCount)> {
    let n = require_square(a, b, None)?;
    if n == 0 {
        return Ok((Matrix::zeros(0, 0), OpCount::default()));
    }
    let size = n.next_power_of_two();
    let (pa, pb) = (a.block(0, 0, size, size), b.block(0, 0, size, size));
    let (c, count) = recurse(&pa, &pb, cutoff);
    Ok((c.block(0, 0, n, n), count))
}

pub fn strassen_recursive<C: Scalar>(a: &Matrix<C>, b: &Matrix<C>) -> Result<Matrix<C>> {
    strassen_recursive_counted(a, b, 1).map(|(c, _)| c)
}

/// Unrolled `T(1) = 1`, `T(n) = 7·T(n/2) + 18·(n/2)²` for `n` a power of two.
pub fn op_count(n: u64) -> Result<u128> {
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::Domain(format!("op_count needs a power of two, got {n}")));
    }
    let mut t: u128 = 1;
    let mut side: u128 = 1;
    while side < n as u128 {
        t = 7 * t + 18 * side * side;
        side *= 2;
    }
    Ok(t)
}

/// A bilinear algorithm for 2×2 matrix products: `AB = Σ_i f_i(A)·g_i(B)·C_i`.
///
/// Entries are indexed `[x11, x12, x21, x22]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BilinearScheme {
    pub left: Vec<[i64; 4]>,
    pub right: Vec<[i64; 4]>,
    pub target: Vec<[i64; 4]>,
}

impl BilinearScheme {
    pub fn rank(&self) -> usize {
        self.left.len()
    }

    pub fn strassen() -> BilinearScheme {
        BilinearScheme {
            left: vec![[1, 0, 0, 1], [0, 0, 1, 1], [1, 0, 0, 0], [-1, 0, 1, 0], [1, 1, 0, 0], [0, 0, 0, 1], [0, 1, 0, -1]],
            right: vec![[1, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, -1], [1, 1, 0, 0], [0, 0, 0, 1], [-1, 0, 1, 0], [0, 0, 1, 1]],
            target: vec![[1, 0, 0, 1], [0, 0, 1, -1], [0, 1, 0, 1], [0, 0, 0, 1], [-1, 1, 0, 0], [1, 0, 1, 0], [1, 0, 0, 0]],
        }
    }

    /// The rank-8 definition `C_ij = Σ_k A_ik·B_kj`.
    pub fn schoolbook() -> BilinearScheme {
        let unit = |k: usize| {
            let mut v = [0; 4];
            v[k] = 1;
            v
        };
        let mut s = BilinearScheme { left: vec![], right: vec![], target: vec![] };
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    s.left.push(unit(2 * i + k));
                    s.right.push(unit(2 * k + j));
                    s.target.push(unit(2 * i + j));
                }
            }
        }
        s
    }

    /// The same scheme with product `i` removed.
    pub fn without(&self, i: usize) -> BilinearScheme {
        let mut s = self.clone();
        s.left.remove(i);
        s.right.remove(i);
        s.target.remove(i);
        s
    }

    pub fn apply(&self, a: [i64; 4], b: [i64; 4]) -> [i64; 4] {
        let dot = |f: &[i64; 4], x: &[i64; 4]| f.iter().zip(x).map(|(p, q)| p * q).sum::<i64>();
        let mut c = [0; 4];
        for ((f, g), t) in self.left.iter().zip(&self.right).zip(&self.target) {
            let prod = dot(f, &a) * dot(g, &b);
            for (ck, tk) in c.iter_mut().zip(t) {
                *ck += prod * tk;
            }
        }
        c
    }
}

fn classical(a: [i64; 4], b: [i64; 4]) -> [i64; 4] {
    [
        a[0] * b[0] + a[1] * b[2],
        a[0] * b[1] + a[1] * b[3],
        a[2] * b[0] + a[3] * b[2],
        a[2] * b[1] + a[3] * b[3],
    ]
}

const RANDOM_CHECKS: usize = 1000;

/// Checks the scheme on all 2⁸ pairs of 0/1 matrices and on random integer pairs.
pub fn verify_scheme(s: &BilinearScheme) -> bool {
    let bits = |m: u32| [0, 1, 2, 3].map(|k| ((m >> k) & 1) as i64);
    let exhaustive = (0..16).all(|x| (0..16).all(|y| s.apply(bits(x), bits(y)) == classical(bits(x), bits(y))));
    if !exhaustive {
        return false;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5157);
    (0..RANDOM_CHECKS).all(|_| {
        let a = [(); 4].map(|_| rng.gen_range(-1000..=1000));
        let b = [(); 4].map(|_| rng.gen_range(-1000..=1000));
        s.apply(a, b) == classical(a, b)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two_example() {
        let a = Matrix::from_rows(vec![vec![1i64, 2], vec![3, 4]]).unwrap();
        let b = Matrix::from_rows(vec![vec![5i64, 6], vec![7, 8]]).unwrap();
        let (c, count) = strassen_2x2(&a, &b).unwrap();
        assert_eq!(c.to_rows(), vec![vec![19, 22], vec![43, 50]]);
        assert_eq!(count.mults, 7);
        let i = Matrix::<i64>::identity(2);
        assert_eq!(strassen_2x2(&i, &i).unwrap().0, i);
    }

    #[test]
    fn schemes() {
        assert!(verify_scheme(&BilinearScheme::strassen()));
        assert_eq!(BilinearScheme::strassen().rank(), 7);
        assert!(verify_scheme(&BilinearScheme::schoolbook()));
        for i in 0..7 {
            assert!(!verify_scheme(&BilinearScheme::strassen().without(i)));
        }
    }

    #[test]
    fn recursion_counts() {
        assert_eq!(op_count(1).unwrap(), 1);
        assert_eq!(op_count(2).unwrap(), 25);
        assert_eq!(op_count(4).unwrap(), 247);
        assert!(op_count(6).is_err());
        for k in 0..6u32 {
            let n = 1usize << k;
            let a = Matrix::from_fn(n, n, |i, j| (i * 7 + j * 3) as i64 % 11 - 5);
            let (c, count) = strassen_recursive_counted(&a, &a, 1).unwrap();
            assert_eq!(c, a.matmul(&a).unwrap());
            assert_eq!(count.mults, 7u64.pow(k));
            assert_eq!(count.total() as u128, op_count(n as u64).unwrap());
        }
    }

    #[test]
    fn padding_and_trivial_sizes() {
        let a = Matrix::from_fn(6, 6, |i, j| (i as i64 - j as i64) * 2 + 1);
        let b = Matrix::from_fn(6, 6, |i, j| (i * j) as i64 % 5);
        assert_eq!(strassen_recursive(&a, &b).unwrap(), a.matmul(&b).unwrap());
        let s = Matrix::from_rows(vec![vec![3i64]]).unwrap();
        assert_eq!(strassen_recursive(&s, &s).unwrap().to_rows(), vec![vec![9]]);
        assert!(strassen_recursive(&Matrix::<i64>::zeros(2, 3), &s).is_err());
    }
}

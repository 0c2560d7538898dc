//! Dense row-major matrices over any commutative ring of scalars.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coefficient ring for matrices and group-algebra elements.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
}

impl<T> Scalar for T where
    T: Clone
        + Debug
        + PartialEq
        + Zero
        + One
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Neg<Output = T>
        + Send
        + Sync
{
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged matrix rows".into()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        self.data.chunks(self.cols.max(1)).map(<[T]>::to_vec).take(self.rows).collect()
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Schoolbook product.
    pub fn matmul(&self, other: &Matrix<T>) -> Result<Matrix<T>> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Matrix::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).fold(T::zero(), |acc, k| acc + self.get(i, k).clone() * other.get(k, j).clone())
        }))
    }

    pub fn add(&self, other: &Matrix<T>) -> Matrix<T> {
        debug_assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }

    pub fn sub(&self, other: &Matrix<T>) -> Matrix<T> {
        debug_assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }

    /// Copy of the `rows × cols` block starting at `(r0, c0)`, zero-filled outside `self`.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix<T> {
        Matrix::from_fn(rows, cols, |i, j| {
            let (r, c) = (r0 + i, c0 + j);
            if r < self.rows && c < self.cols {
                self.get(r, c).clone()
            } else {
                T::zero()
            }
        })
    }

    /// Writes `src` into `self` at `(r0, c0)`, clipping to `self`'s shape.
    pub fn put_block(&mut self, r0: usize, c0: usize, src: &Matrix<T>) {
        for i in 0..src.rows {
            for j in 0..src.cols {
                let (r, c) = (r0 + i, c0 + j);
                if r < self.rows && c < self.cols {
                    self.set(r, c, src.get(i, j).clone());
                }
            }
        }
    }
}

impl Matrix<Complex64> {
    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Matrix<Complex64>) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

impl Matrix<i64> {
    pub fn to_complex(&self) -> Matrix<Complex64> {
        self.map(|&x| Complex64::new(x as f64, 0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schoolbook_example() {
        let a = Matrix::from_rows(vec![vec![1i64, 2], vec![3, 4]]).unwrap();
        let b = Matrix::from_rows(vec![vec![5i64, 6], vec![7, 8]]).unwrap();
        assert_eq!(a.matmul(&b).unwrap().to_rows(), vec![vec![19, 22], vec![43, 50]]);
        assert!(a.matmul(&Matrix::<i64>::zeros(3, 1)).is_err());
        assert!(Matrix::from_rows(vec![vec![1i64], vec![2, 3]]).is_err());
    }

    #[test]
    fn blocks_pad_and_clip() {
        let a = Matrix::from_fn(3, 3, |i, j| (i * 3 + j) as i64);
        let b = a.block(2, 2, 2, 2);
        assert_eq!(b.to_rows(), vec![vec![8, 0], vec![0, 0]]);
        let mut c = Matrix::<i64>::zeros(3, 3);
        c.put_block(2, 2, &b);
        assert_eq!(*c.get(2, 2), 8);
    }
}

//! Fourier transforms on the group algebra.
//!
//! For a product of cyclic groups the characters are indexed by the group's
//! own elements: `χ_k(g) = ∏ exp(2πi·k_j·g_j/n_j)`, and transform vectors are
//! laid out in enumeration order. For `Sym_3` the transform is
//! `f ↦ (f̂(ι), f̂(sgn), f̂(Δ))` with `f̂(ρ) = Σ f(g)·ρ(g)`.

use std::f64::consts::TAU;
use std::sync::Arc;

use num_complex::Complex64;

use super::AlgebraElement;
use crate::error::{Error, Result};
use crate::group::{Element, Group, GroupSpec, DEFAULT_ENUMERATION_CAP};
use crate::matrix::Matrix;

fn moduli(group: &Group) -> Result<Vec<u32>> {
    let m = group.cyclic_moduli().ok_or_else(|| {
        Error::Unsupported(format!("characters are provided only for cyclic products, not {}", group.spec()))
    })?;
    if group.order_u64().is_none_or(|n| n > DEFAULT_ENUMERATION_CAP) {
        return Err(Error::TooLarge { order: group.order().to_string(), cap: DEFAULT_ENUMERATION_CAP });
    }
    Ok(m)
}

fn flat_index(word: &[u32], moduli: &[u32]) -> usize {
    word.iter().zip(moduli).fold(0, |acc, (&g, &n)| acc * n as usize + g as usize)
}

/// In-place transform along every axis; `sign` is +1 forward, −1 backward.
fn separable_dft(data: &mut [Complex64], moduli: &[u32], sign: f64) {
    let total = data.len();
    let mut stride = total;
    let mut line = Vec::new();
    for &n in moduli {
        let n = n as usize;
        stride /= n;
        let roots: Vec<Complex64> = (0..n).map(|r| Complex64::from_polar(1.0, sign * TAU * r as f64 / n as f64)).collect();
        for block in (0..total).step_by(stride * n) {
            for off in 0..stride {
                let base = block + off;
                line.clear();
                line.extend((0..n).map(|g| data[base + g * stride]));
                for k in 0..n {
                    let mut s = Complex64::new(0.0, 0.0);
                    for (g, v) in line.iter().enumerate() {
                        s += v * roots[(k * g) % n];
                    }
                    data[base + k * stride] = s;
                }
            }
        }
    }
}

/// `f̂(χ_k) = Σ_g f(g)·χ_k(g)` for every character, in enumeration order of `k`.
pub fn abelian_dft(group: &Arc<Group>, f: &AlgebraElement<Complex64>) -> Result<Vec<Complex64>> {
    let m = moduli(group)?;
    if f.group().spec() != group.spec() {
        return Err(Error::Domain(format!("element over {} given for {}", f.group().spec(), group.spec())));
    }
    let mut data = vec![Complex64::new(0.0, 0.0); group.order_u64().unwrap_or(0) as usize];
    for (g, c) in f.terms() {
        data[flat_index(g.as_slice(), &m)] = *c;
    }
    separable_dft(&mut data, &m, 1.0);
    Ok(data)
}

/// Inverse of [`abelian_dft`]: `f(g) = |G|⁻¹ Σ_k f̂(χ_k)·conj χ_k(g)`.
pub fn abelian_idft(group: &Arc<Group>, fhat: &[Complex64]) -> Result<AlgebraElement<Complex64>> {
    let m = moduli(group)?;
    let order = group.order_u64().unwrap_or(0) as usize;
    if fhat.len() != order {
        return Err(Error::Dimension(format!("{} coefficients for a group of order {order}", fhat.len())));
    }
    let mut data = fhat.to_vec();
    separable_dft(&mut data, &m, -1.0);
    let elems = group.enumerate(order as u64)?;
    let scale = 1.0 / order as f64;
    AlgebraElement::from_terms(group.clone(), elems.into_iter().zip(data).map(|(g, c)| (g, c * scale)))
}

/// The 2-dimensional irreducible representation of `Sym_3`, keyed by image array.
const DELTA: [([u32; 3], [[i64; 2]; 2]); 6] = [
    ([0, 1, 2], [[1, 0], [0, 1]]),
    ([1, 0, 2], [[0, 1], [1, 0]]),
    ([2, 1, 0], [[-1, 0], [-1, 1]]),
    ([0, 2, 1], [[1, -1], [0, -1]]),
    ([1, 2, 0], [[0, -1], [1, -1]]),
    ([2, 0, 1], [[-1, 1], [-1, 0]]),
];

fn require_sym3(group: &Group) -> Result<()> {
    if *group.spec() == GroupSpec::Symmetric(3) {
        Ok(())
    } else {
        Err(Error::Unsupported(format!("the Sym_3 transform needs sym(3), got {}", group.spec())))
    }
}

fn sign(p: &[u32]) -> i64 {
    let inversions = (0..p.len()).flat_map(|i| (i + 1..p.len()).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `(ι(g), sgn(g), Δ(g))` for an element of `Sym_3`.
pub fn sym3_rep(g: &Element) -> Result<(i64, i64, [[i64; 2]; 2])> {
    let w = g.as_slice();
    let delta = DELTA
        .iter()
        .find(|(p, _)| p.as_slice() == w)
        .map(|(_, d)| *d)
        .ok_or_else(|| Error::Domain(format!("{w:?} is not a permutation of 3 points")))?;
    Ok((1, sign(w), delta))
}

/// Block-diagonal image `(1) ⊕ (1) ⊕ (2×2)` of an element of `ℂSym_3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sym3Transform {
    pub trivial: Complex64,
    pub sign: Complex64,
    pub delta: [[Complex64; 2]; 2],
}

impl Sym3Transform {
    /// Block dimensions `d_ρ`; their squares sum to 6.
    pub const DEGREES: [usize; 3] = [1, 1, 2];

    /// Blockwise product.
    pub fn mul(&self, other: &Sym3Transform) -> Sym3Transform {
        let (a, b) = (&self.delta, &other.delta);
        let mut delta = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (i, row) in delta.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Sym3Transform { trivial: self.trivial * other.trivial, sign: self.sign * other.sign, delta }
    }

    /// The 4×4 block-diagonal matrix.
    pub fn to_matrix(&self) -> Matrix<Complex64> {
        let mut m = Matrix::zeros(4, 4);
        m.set(0, 0, self.trivial);
        m.set(1, 1, self.sign);
        for i in 0..2 {
            for j in 0..2 {
                m.set(2 + i, 2 + j, self.delta[i][j]);
            }
        }
        m
    }

    pub fn max_abs_diff(&self, other: &Sym3Transform) -> f64 {
        self.to_matrix().max_abs_diff(&other.to_matrix())
    }
}

#[allow(clippy::needless_range_loop)]
pub fn sym3_dft(f: &AlgebraElement<Complex64>) -> Result<Sym3Transform> {
    require_sym3(f.group())?;
    let zero = Complex64::new(0.0, 0.0);
    let mut out = Sym3Transform { trivial: zero, sign: zero, delta: [[zero; 2]; 2] };
    for (g, c) in f.terms() {
        let (i, s, d) = sym3_rep(g)?;
        out.trivial += c * i as f64;
        out.sign += c * s as f64;
        for k in 0..2 {
            for l in 0..2 {
                out.delta[k][l] += c * d[k][l] as f64;
            }
        }
    }
    Ok(out)
}

/// `f(g) = |G|⁻¹ Σ_ρ d_ρ·Tr[f̂(ρ)·ρ(g⁻¹)]`.
#[allow(clippy::needless_range_loop)]
pub fn sym3_idft(group: &Arc<Group>, fhat: &Sym3Transform) -> Result<AlgebraElement<Complex64>> {
    require_sym3(group)?;
    let mut terms = Vec::with_capacity(6);
    for g in group.enumerate(6)? {
        let (i, s, d) = sym3_rep(&group.op_inv(&g))?;
        let mut tr = Complex64::new(0.0, 0.0);
        for k in 0..2 {
            for l in 0..2 {
                tr += fhat.delta[k][l] * d[l][k] as f64;
            }
        }
        let v = (fhat.trivial * i as f64 + fhat.sign * s as f64 + tr * 2.0) / 6.0;
        terms.push((g, v));
    }
    AlgebraElement::from_terms(group.clone(), terms)
}

/// The 6×6 transform matrix with rows `(ι, sgn, Δ₁₁, Δ₁₂, Δ₂₁, Δ₂₂)` and
/// columns in enumeration order: entry `ρ(g)_{k,l}`.
pub fn sym3_dft_matrix(group: &Arc<Group>) -> Result<Matrix<Complex64>> {
    require_sym3(group)?;
    let elems = group.enumerate(6)?;
    let mut m = Matrix::zeros(6, 6);
    for (col, g) in elems.iter().enumerate() {
        let (i, s, d) = sym3_rep(g)?;
        let column = [i, s, d[0][0], d[0][1], d[1][0], d[1][1]];
        for (row, v) in column.into_iter().enumerate() {
            m.set(row, col, Complex64::new(v as f64, 0.0));
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::convolve;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn delta_is_a_homomorphism() {
        let g = Group::parse("sym(3)").unwrap();
        let els = g.enumerate(6).unwrap();
        for a in &els {
            for b in &els {
                let (_, sa, da) = sym3_rep(a).unwrap();
                let (_, sb, db) = sym3_rep(b).unwrap();
                let (_, sab, dab) = sym3_rep(&g.op(a, b)).unwrap();
                assert_eq!(sa * sb, sab);
                for i in 0..2 {
                    for j in 0..2 {
                        assert_eq!(da[i][0] * db[0][j] + da[i][1] * db[1][j], dab[i][j]);
                    }
                }
            }
        }
    }

    #[test]
    fn transposition_12() {
        let g = Group::parse("sym(3)").unwrap();
        let f = AlgebraElement::delta(g.clone(), g.permutation(&[1, 0, 2]).unwrap()).unwrap();
        let t = sym3_dft(&f).unwrap();
        assert_eq!(t.trivial, c(1.0));
        assert_eq!(t.sign, c(-1.0));
        assert_eq!(t.delta, [[c(0.0), c(1.0)], [c(1.0), c(0.0)]]);

        let id = AlgebraElement::delta(g.clone(), g.identity().clone()).unwrap();
        let t = sym3_dft(&id).unwrap();
        assert_eq!(t.to_matrix(), Matrix::identity(4));
    }

    #[test]
    fn sym3_matrix_is_invertible_layout() {
        let g = Group::parse("sym(3)").unwrap();
        let m = sym3_dft_matrix(&g).unwrap();
        // first row all ones, second row the signs
        assert!((0..6).all(|j| *m.get(0, j) == c(1.0)));
        let signs: Vec<f64> = (0..6).map(|j| m.get(1, j).re).collect();
        assert_eq!(signs, vec![1.0, -1.0, -1.0, 1.0, 1.0, -1.0]);
    }

    #[test]
    fn abelian_small_cases() {
        let g = Group::parse("cyc(2)").unwrap();
        let f = AlgebraElement::from_terms(g.clone(), [(Element::from_slice(&[0]), c(1.0)), (Element::from_slice(&[1]), c(1.0))]).unwrap();
        let v = abelian_dft(&g, &f).unwrap();
        assert!((v[0] - c(2.0)).norm() < 1e-12 && v[1].norm() < 1e-12);

        let g = Group::parse("cyc(3) x cyc(4)").unwrap();
        let id = AlgebraElement::delta(g.clone(), g.identity().clone()).unwrap();
        assert!(abelian_dft(&g, &id).unwrap().iter().all(|z| (z - c(1.0)).norm() < 1e-12));
        assert!(matches!(abelian_dft(&Group::parse("sym(3)").unwrap(), &id), Err(Error::Unsupported(_))));
    }

    #[test]
    fn abelian_convolution_theorem() {
        let g = Group::parse("cyc(3) x cyc(5)").unwrap();
        let els = g.enumerate(15).unwrap();
        let f = AlgebraElement::from_terms(g.clone(), els.iter().enumerate().map(|(i, e)| (e.clone(), c(i as f64 - 3.5)))).unwrap();
        let h = AlgebraElement::from_terms(g.clone(), els.iter().enumerate().map(|(i, e)| (e.clone(), c((i * i % 7) as f64)))).unwrap();
        let lhs = abelian_dft(&g, &convolve(&f, &h).unwrap()).unwrap();
        let (ff, fh) = (abelian_dft(&g, &f).unwrap(), abelian_dft(&g, &h).unwrap());
        for k in 0..15 {
            assert!((lhs[k] - ff[k] * fh[k]).norm() < 1e-9);
        }
        let back = abelian_idft(&g, &ff).unwrap();
        for e in &els {
            assert!((back.coeff(e) - f.coeff(e)).norm() < 1e-9);
        }
    }
}

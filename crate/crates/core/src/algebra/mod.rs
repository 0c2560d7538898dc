//! The group algebra: sparse formal sums `Σ f(g)·g`, convolution, and the
//! matrix embedding/extraction maps that turn one algebra product into a
//! matrix product.
//!
//! Matrix rows and columns are bound to the stored order of the triple's
//! subsets: row `i` of `A` belongs to `S[i]`, column `j` to `T[j]`, and so on.

pub mod dft;

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::group::{Element, Group};
use crate::matrix::{Matrix, Scalar};
use crate::tpp::{IndexTriple, TripleFamily};

pub use dft::{
    abelian_dft, abelian_idft, sym3_dft, sym3_dft_matrix, sym3_idft, sym3_rep, Sym3Transform,
};

/// Support elements handled per parallel work item in [`convolve`].
const CONVOLVE_CHUNK: usize = 64;

/// An element of the group algebra with coefficients in `C`.
///
/// Zero coefficients are never stored.
#[derive(Debug, Clone)]
pub struct AlgebraElement<C> {
    group: Arc<Group>,
    coeffs: BTreeMap<Element, C>,
}

impl<C: Scalar> PartialEq for AlgebraElement<C> {
    fn eq(&self, other: &Self) -> bool {
        same_group(&self.group, &other.group) && self.coeffs == other.coeffs
    }
}

fn same_group(a: &Arc<Group>, b: &Arc<Group>) -> bool {
    Arc::ptr_eq(a, b) || a.spec() == b.spec()
}

impl<C: Scalar> AlgebraElement<C> {
    pub fn zero(group: Arc<Group>) -> Self {
        AlgebraElement { group, coeffs: BTreeMap::new() }
    }

    /// The basis element `1·g`.
    pub fn delta(group: Arc<Group>, g: Element) -> Result<Self> {
        Self::from_terms(group, [(g, C::one())])
    }

    /// Sums the given terms; repeated elements accumulate.
    pub fn from_terms(group: Arc<Group>, terms: impl IntoIterator<Item = (Element, C)>) -> Result<Self> {
        let mut out = AlgebraElement::zero(group);
        for (g, c) in terms {
            if !out.group.contains(&g) {
                return Err(Error::Domain(format!("{g:?} is not in {}", out.group.spec())));
            }
            out.add_term(g, c);
        }
        Ok(out)
    }

    fn add_term(&mut self, g: Element, c: C) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.entry(g) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().clone() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn coeff(&self, g: &Element) -> C {
        self.coeffs.get(g).cloned().unwrap_or_else(C::zero)
    }

    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Terms in increasing element order.
    pub fn terms(&self) -> impl Iterator<Item = (&Element, &C)> {
        self.coeffs.iter()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_group(other)?;
        let mut out = self.clone();
        for (g, c) in &other.coeffs {
            out.add_term(g.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, k: &C) -> Self {
        let mut out = AlgebraElement::zero(self.group.clone());
        for (g, c) in &self.coeffs {
            out.add_term(g.clone(), c.clone() * k.clone());
        }
        out
    }

    pub fn map<D: Scalar>(&self, f: impl Fn(&C) -> D) -> AlgebraElement<D> {
        let mut out = AlgebraElement::zero(self.group.clone());
        for (g, c) in &self.coeffs {
            out.add_term(g.clone(), f(c));
        }
        out
    }

    fn check_group(&self, other: &Self) -> Result<()> {
        if same_group(&self.group, &other.group) {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "algebra elements over {} and {}",
                self.group.spec(),
                other.group.spec()
            )))
        }
    }
}

impl AlgebraElement<i64> {
    pub fn to_complex(&self) -> AlgebraElement<Complex64> {
        self.map(|&c| Complex64::new(c as f64, 0.0))
    }
}

/// The algebra product `(x*y)(g) = Σ_{ab=g} x(a)·y(b)`.
///
/// Work is split into fixed chunks of `x`'s support and merged in chunk
/// order, so the result does not depend on the thread schedule.
pub fn convolve<C: Scalar>(x: &AlgebraElement<C>, y: &AlgebraElement<C>) -> Result<AlgebraElement<C>> {
    x.check_group(y)?;
    let g = &x.group;
    let xs: Vec<(&Element, &C)> = x.coeffs.iter().collect();
    let partials: Vec<Vec<(Element, C)>> = xs
        .par_chunks(CONVOLVE_CHUNK)
        .map(|chunk| {
            let mut acc: BTreeMap<Element, C> = BTreeMap::new();
            for (a, ca) in chunk {
                for (b, cb) in &y.coeffs {
                    let term = (*ca).clone() * cb.clone();
                    let e = acc.entry(g.op(a, b)).or_insert_with(C::zero);
                    *e = e.clone() + term;
                }
            }
            acc.into_iter().collect()
        })
        .collect();
    let mut out = AlgebraElement::zero(g.clone());
    for part in partials {
        for (e, c) in part {
            out.add_term(e, c);
        }
    }
    Ok(out)
}

fn check_dims<C: Scalar>(a: &Matrix<C>, b: &Matrix<C>, t: &IndexTriple) -> Result<()> {
    let x = t.tensor();
    let want = [(x.n, x.m), (x.m, x.p)];
    let got = [(a.rows(), a.cols()), (b.rows(), b.cols())];
    for ((r, c), (wr, wc)) in got.into_iter().zip(want) {
        if (r as u64, c as u64) != (wr, wc) {
            return Err(Error::Dimension(format!(
                "operands {}x{} and {}x{} do not fit tensor {x}",
                a.rows(),
                a.cols(),
                b.rows(),
                b.cols()
            )));
        }
    }
    Ok(())
}

/// `Σ M_{x,y}·x⁻¹y` over `x ∈ X` (rows) and `y ∈ Y` (columns).
fn embed_one<C: Scalar>(
    group: &Arc<Group>,
    m: &Matrix<C>,
    rows: &[Element],
    cols: &[Element],
    out: &mut AlgebraElement<C>,
) {
    for (i, x) in rows.iter().enumerate() {
        for (j, y) in cols.iter().enumerate() {
            let c = m.get(i, j);
            if !c.is_zero() {
                out.add_term(group.op_div(x, y), c.clone());
            }
        }
    }
}

/// `Ā = Σ A_{s,t}·s⁻¹t` and `B̄ = Σ B_{t′,u}·t′⁻¹u`.
///
/// The triple is assumed to have the triple product property; it is not
/// rechecked here.
pub fn embed_pair<C: Scalar>(
    a: &Matrix<C>,
    b: &Matrix<C>,
    t: &IndexTriple,
) -> Result<(AlgebraElement<C>, AlgebraElement<C>)> {
    check_dims(a, b, t)?;
    let g = t.group();
    let mut abar = AlgebraElement::zero(g.clone());
    let mut bbar = AlgebraElement::zero(g.clone());
    embed_one(g, a, t.s().elements(), t.t().elements(), &mut abar);
    embed_one(g, b, t.t().elements(), t.u().elements(), &mut bbar);
    Ok((abar, bbar))
}

/// Reads `C_{s,u} = z(s⁻¹u)`.
pub fn extract_product<C: Scalar>(z: &AlgebraElement<C>, t: &IndexTriple) -> Matrix<C> {
    let g = t.group();
    let (s, u) = (t.s().elements(), t.u().elements());
    Matrix::from_fn(s.len(), u.len(), |i, j| z.coeff(&g.op_div(&s[i], &u[j])))
}

/// `A·B` computed as one convolution in the group algebra.
pub fn matmul_via_group<C: Scalar>(t: &IndexTriple, a: &Matrix<C>, b: &Matrix<C>) -> Result<Matrix<C>> {
    let (abar, bbar) = embed_pair(a, b, t)?;
    Ok(extract_product(&convolve(&abar, &bbar)?, t))
}

/// `A·B` through the character transform of an abelian group: transform both
/// embeddings, multiply pointwise, transform back, extract.
pub fn matmul_via_abelian_dft(
    t: &IndexTriple,
    a: &Matrix<Complex64>,
    b: &Matrix<Complex64>,
) -> Result<Matrix<Complex64>> {
    let (abar, bbar) = embed_pair(a, b, t)?;
    let fa = abelian_dft(t.group(), &abar)?;
    let fb = abelian_dft(t.group(), &bbar)?;
    let prod: Vec<Complex64> = fa.iter().zip(&fb).map(|(x, y)| x * y).collect();
    let z = abelian_idft(t.group(), &prod)?;
    Ok(extract_product(&z, t))
}

/// All products `A_v·B_v` of a simultaneous family from a single convolution
/// of `Σ_v Ā_v` with `Σ_v B̄_v`.
pub fn simultaneous_matmul<C: Scalar>(
    fam: &TripleFamily,
    pairs: &[(Matrix<C>, Matrix<C>)],
) -> Result<Vec<Matrix<C>>> {
    if pairs.len() != fam.len() {
        return Err(Error::Arity { expected: fam.len(), got: pairs.len() });
    }
    let g = fam.group();
    let mut abar = AlgebraElement::zero(g.clone());
    let mut bbar = AlgebraElement::zero(g.clone());
    for (t, (a, b)) in fam.triples().iter().zip(pairs) {
        let (x, y) = embed_pair(a, b, t)?;
        abar = abar.add(&x)?;
        bbar = bbar.add(&y)?;
    }
    let z = convolve(&abar, &bbar)?;
    Ok(fam.triples().iter().map(|t| extract_product(&z, t)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tpp::cyc_stpp_triples;

    fn cyc(n: u32) -> Arc<Group> {
        Group::parse(&format!("cyc({n})")).unwrap()
    }

    #[test]
    fn cyc2_annihilating_pair() {
        let g = cyc(2);
        let (e, s) = (Element::from_slice(&[0]), Element::from_slice(&[1]));
        let x = AlgebraElement::from_terms(g.clone(), [(e.clone(), 1i64), (s.clone(), 1)]).unwrap();
        let y = AlgebraElement::from_terms(g, [(e, 1i64), (s, -1)]).unwrap();
        assert!(convolve(&x, &y).unwrap().is_zero());
    }

    #[test]
    fn deltas_multiply_like_the_group() {
        let g = Group::parse("sym(3)").unwrap();
        let a = g.permutation(&[1, 0, 2]).unwrap();
        let b = g.permutation(&[1, 2, 0]).unwrap();
        let da = AlgebraElement::<i64>::delta(g.clone(), a.clone()).unwrap();
        let db = AlgebraElement::<i64>::delta(g.clone(), b.clone()).unwrap();
        let want = AlgebraElement::delta(g.clone(), g.op(&a, &b)).unwrap();
        assert_eq!(convolve(&da, &db).unwrap(), want);
        let one = AlgebraElement::delta(g.clone(), g.identity().clone()).unwrap();
        assert_eq!(convolve(&one, &db).unwrap(), db);
    }

    #[test]
    fn zero_terms_are_dropped() {
        let g = cyc(3);
        let e = Element::from_slice(&[1]);
        let x = AlgebraElement::from_terms(g.clone(), [(e.clone(), 2i64), (e, -2)]).unwrap();
        assert!(x.is_zero());
        assert!(AlgebraElement::<i64>::delta(g, Element::from_slice(&[3])).is_err());
    }

    #[test]
    fn mismatched_groups_rejected() {
        let x = AlgebraElement::<i64>::delta(cyc(2), Element::from_slice(&[0])).unwrap();
        let y = AlgebraElement::<i64>::delta(cyc(3), Element::from_slice(&[0])).unwrap();
        assert!(matches!(convolve(&x, &y), Err(Error::Domain(_))));
    }

    #[test]
    fn embedding_support_and_product() {
        let fam = cyc_stpp_triples(3).unwrap();
        let t = &fam.triples()[0];
        let a = Matrix::from_rows(vec![vec![1i64, 2], vec![3, 4]]).unwrap();
        let b = Matrix::from_rows(vec![vec![5i64, 6], vec![7, 8]]).unwrap();
        let (abar, bbar) = embed_pair(&a, &b, t).unwrap();
        assert_eq!(abar.support_len(), 4);
        assert_eq!(bbar.support_len(), 4);
        let c = matmul_via_group(t, &a, &b).unwrap();
        assert_eq!(c, a.matmul(&b).unwrap());

        let z = Matrix::<i64>::zeros(2, 2);
        assert!(embed_pair(&z, &z, t).unwrap().0.is_zero());
        assert!(embed_pair(&Matrix::<i64>::zeros(3, 2), &b, t).is_err());
    }

    #[test]
    fn dft_path_matches_naive() {
        let fam = cyc_stpp_triples(4).unwrap();
        let t = &fam.triples()[1];
        let a = Matrix::from_fn(3, 3, |i, j| (i as i64 - 2 * j as i64) * 3 + 1);
        let b = Matrix::from_fn(3, 3, |i, j| (i * j) as i64 - 4);
        let exact = matmul_via_group(t, &a, &b).unwrap();
        assert_eq!(exact, a.matmul(&b).unwrap());
        let float = matmul_via_abelian_dft(t, &a.to_complex(), &b.to_complex()).unwrap();
        assert!(float.max_abs_diff(&exact.to_complex()) < 1e-9);
    }

    #[test]
    fn simultaneous_products_are_independent() {
        let fam = cyc_stpp_triples(4).unwrap();
        let a1 = Matrix::from_fn(3, 3, |i, j| (i + 2 * j) as i64);
        let b1 = Matrix::from_fn(3, 3, |i, j| (3 * i) as i64 - j as i64);
        let a2 = Matrix::from_fn(3, 3, |i, j| (i * i) as i64 + j as i64 - 1);
        let b2 = Matrix::from_fn(3, 3, |i, j| 5 - (i + j) as i64);
        let out = simultaneous_matmul(&fam, &[(a1.clone(), b1.clone()), (a2.clone(), b2.clone())]).unwrap();
        assert_eq!(out[0], a1.matmul(&b1).unwrap());
        assert_eq!(out[1], a2.matmul(&b2).unwrap());

        let z = Matrix::<i64>::zeros(3, 3);
        let out = simultaneous_matmul(&fam, &[(z.clone(), z), (a2.clone(), b2.clone())]).unwrap();
        assert!(out[0].is_zero());
        assert_eq!(out[1], a2.matmul(&b2).unwrap());
        assert!(matches!(
            simultaneous_matmul(&fam, &[(a1, b1)]),
            Err(Error::Arity { expected: 2, got: 1 })
        ));
    }
}

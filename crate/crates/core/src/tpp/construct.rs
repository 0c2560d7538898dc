//! Concrete triples: direct products, wreath lifts of STPP families, the
//! two-triple family in `Cyc_n^3`, and the coordinate-fixing subgroups of `Sym(Δ_n)`.

use std::sync::Arc;

use super::{IndexTriple, TripleFamily};
use crate::error::{Error, Result};
use crate::group::{build_group, perm, Element, Group, GroupSpec};
use crate::Subset;

fn concat(a: &Element, b: &Element) -> Element {
    let mut w = a.as_slice().to_vec();
    w.extend_from_slice(b.as_slice());
    Element::from_slice(&w)
}

fn product_group(g1: &Group, g2: &Group) -> Result<Arc<Group>> {
    build_group(GroupSpec::DirectProduct(vec![g1.spec().clone(), g2.spec().clone()]))
}

fn product_subset(group: &Arc<Group>, a: &Subset, b: &Subset) -> Subset {
    let elems = a
        .elements()
        .iter()
        .flat_map(|x| b.elements().iter().map(move |y| concat(x, y)))
        .collect();
    Subset::from_distinct(group.clone(), elems)
}

/// Componentwise Cartesian product of two triples, living in `G₁ × G₂`.
pub fn product_triple(t1: &IndexTriple, t2: &IndexTriple) -> Result<IndexTriple> {
    let g = product_group(t1.group(), t2.group())?;
    product_triple_in(&g, t1, t2)
}

fn product_triple_in(g: &Arc<Group>, t1: &IndexTriple, t2: &IndexTriple) -> Result<IndexTriple> {
    IndexTriple::new(
        product_subset(g, t1.s(), t2.s()),
        product_subset(g, t1.t(), t2.t()),
        product_subset(g, t1.u(), t2.u()),
    )
}

/// The `r·r′` pairwise products of two families, first-family index major.
pub fn product_family(f1: &TripleFamily, f2: &TripleFamily) -> Result<TripleFamily> {
    let g = product_group(f1.group(), f2.group())?;
    let mut out = Vec::with_capacity(f1.len() * f2.len());
    for a in f1.triples() {
        for b in f2.triples() {
            out.push(product_triple_in(&g, a, b)?);
        }
    }
    TripleFamily::new(out)
}

/// Lifts `n` simultaneous triples of `H` to one triple of `H wr Sym_n`:
/// `S wr Sym_n = {(s, σ) : s ∈ S₁ × ⋯ × Sₙ, σ ∈ Sym_n}`, likewise for `T`, `U`.
pub fn wreath_triple(fam: &TripleFamily, n: usize) -> Result<IndexTriple> {
    if fam.len() != n {
        return Err(Error::Arity { expected: n, got: fam.len() });
    }
    let g = build_group(GroupSpec::wreath(fam.group().spec().clone(), n as u32))?;
    let perms = perm::all_permutations(n);
    let lift = |which: usize| -> Subset {
        let mut tuples: Vec<Vec<u32>> = vec![Vec::new()];
        for t in fam.triples() {
            let set = &t.sets()[which];
            tuples = tuples
                .iter()
                .flat_map(|prefix| {
                    set.elements().iter().map(move |e| {
                        let mut w = prefix.clone();
                        w.extend_from_slice(e.as_slice());
                        w
                    })
                })
                .collect();
        }
        let elems = tuples
            .iter()
            .flat_map(|base| {
                perms.iter().map(move |p| {
                    let mut w = base.clone();
                    w.extend_from_slice(p);
                    Element::from_slice(&w)
                })
            })
            .collect();
        Subset::from_distinct(g.clone(), elems)
    };
    IndexTriple::new(lift(0), lift(1), lift(2))
}

/// The two triples of `Cyc_n^3` built from the three coordinate axes minus the identity:
/// `(A₁, A₂, A₃)` and `(A₂, A₃, A₁)` with `Aᵢ = {x : xᵢ ≠ 0, x_j = 0 for j ≠ i}`.
pub fn cyc_stpp_triples(n: u32) -> Result<TripleFamily> {
    if n < 2 {
        return Err(Error::InvalidSpec(format!("axis family needs n >= 2, got {n}")));
    }
    let g = build_group(GroupSpec::cyclic_power(n, 3))?;
    let axis = |i: usize| -> Subset {
        let elems = (1..n)
            .map(|a| {
                let mut w = [0u32; 3];
                w[i] = a;
                Element::from_slice(&w)
            })
            .collect();
        Subset::from_distinct(g.clone(), elems)
    };
    let (a1, a2, a3) = (axis(0), axis(1), axis(2));
    TripleFamily::new(vec![
        IndexTriple::new(a1.clone(), a2.clone(), a3.clone())?,
        IndexTriple::new(a2, a3, a1)?,
    ])
}

/// `Δ_n = {x ∈ ℕ³ : x₁ + x₂ + x₃ = n − 1}`, ordered from `(n−1,0,0)` down to `(0,0,n−1)`.
pub fn triangle_set(n: u32) -> Vec<[u32; 3]> {
    if n == 0 {
        return Vec::new();
    }
    let top = n - 1;
    let mut out = Vec::with_capacity((n * (n + 1) / 2) as usize);
    for x1 in (0..=top).rev() {
        for x2 in (0..=top - x1).rev() {
            out.push([x1, x2, top - x1 - x2]);
        }
    }
    out
}

/// Permutations of the points that preserve coordinate `coord` of every point.
fn coordinate_fixing_subgroup(points: &[[u32; 3]], coord: usize) -> Vec<Element> {
    let max = points.iter().map(|x| x[coord]).max().unwrap_or(0);
    let classes: Vec<Vec<u32>> = (0..=max)
        .map(|v| (0..points.len() as u32).filter(|&i| points[i as usize][coord] == v).collect())
        .filter(|c: &Vec<u32>| !c.is_empty())
        .collect();
    let mut acc: Vec<Vec<u32>> = vec![perm::identity(points.len())];
    for class in &classes {
        let arrangements = perm::all_permutations(class.len());
        let mut next = Vec::with_capacity(acc.len() * arrangements.len());
        for base in &acc {
            for arr in &arrangements {
                let mut p = base.clone();
                for (slot, &a) in arr.iter().enumerate() {
                    p[class[slot] as usize] = class[a as usize];
                }
                next.push(p);
            }
        }
        acc = next;
    }
    let mut out: Vec<Element> = acc.iter().map(|p| Element::from_slice(p)).collect();
    out.sort_unstable();
    out
}

/// The three coordinate-fixing subgroups `Sym_i(Δ_n)` of `Sym(Δ_n)`, each of
/// order `1!·2!⋯n!`. Fails with `TooLarge` if that order exceeds `cap`.
pub fn triangle_subgroup_triple(n: u32, cap: u64) -> Result<IndexTriple> {
    let g = build_group(GroupSpec::TriangleSymmetric(n))?;
    let sub_order: u128 = (1..=n as u128).map(|k| (1..=k).product::<u128>()).product();
    if sub_order > cap as u128 {
        return Err(Error::TooLarge { order: sub_order.to_string(), cap });
    }
    let points = triangle_set(n);
    let sets: Vec<Subset> = (0..3)
        .map(|c| Subset::from_distinct(g.clone(), coordinate_fixing_subgroup(&points, c)))
        .collect();
    let [s, t, u]: [Subset; 3] = sets.try_into().expect("three subgroups");
    IndexTriple::new(s, t, u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tpp::{check_stpp, check_tpp, quotient_set, Tensor};

    #[test]
    fn triangle_set_ordering() {
        let d5 = triangle_set(5);
        assert_eq!(d5.len(), 15);
        assert_eq!(d5[0], [4, 0, 0]);
        assert_eq!(d5[1], [3, 1, 0]);
        assert_eq!(d5[2], [3, 0, 1]);
        assert_eq!(d5[9], [1, 0, 3]);
        assert_eq!(d5[14], [0, 0, 4]);
        assert_eq!(triangle_set(1), vec![[0, 0, 0]]);
        assert_eq!(triangle_set(2), vec![[1, 0, 0], [0, 1, 0], [0, 0, 1]]);
        for n in 1..8 {
            let d = triangle_set(n);
            assert_eq!(d.len() as u32, n * (n + 1) / 2);
            assert!(d.iter().all(|x| x.iter().sum::<u32>() == n - 1));
        }
    }

    #[test]
    fn triangle_subgroups_small() {
        let t2 = triangle_subgroup_triple(2, 1000).unwrap();
        assert_eq!(t2.tensor(), Tensor::square(2));
        assert_eq!(t2.group().order_u64(), Some(6));
        assert!(check_tpp(&t2));

        let t3 = triangle_subgroup_triple(3, 1000).unwrap();
        assert_eq!(t3.tensor(), Tensor::square(12));
        for s in t3.sets() {
            // subgroups: closed under quotients
            assert_eq!(quotient_set(s).elements(), s.elements());
        }
        assert!(check_tpp(&t3));
        assert!(triangle_subgroup_triple(6, 1_000_000).is_err());
    }

    #[test]
    fn axis_family() {
        let f = cyc_stpp_triples(4).unwrap();
        assert_eq!(f.len(), 2);
        assert!(f.triples().iter().all(|t| t.tensor() == Tensor::square(3)));
        assert!(check_stpp(&f));
        let f2 = cyc_stpp_triples(2).unwrap();
        assert!(f2.triples().iter().all(|t| t.tensor() == Tensor::square(1)));
        assert!(check_stpp(&f2));
        assert!(cyc_stpp_triples(1).is_err());
    }

    #[test]
    fn wreath_lift_of_axis_family() {
        let fam = cyc_stpp_triples(3).unwrap();
        let w = wreath_triple(&fam, 2).unwrap();
        assert_eq!(w.group().order_u64(), Some(1458));
        assert_eq!(w.tensor(), Tensor::square(8));
        assert!(check_tpp(&w));
        assert!(matches!(wreath_triple(&fam, 3), Err(Error::Arity { expected: 3, got: 2 })));
    }

    #[test]
    fn product_of_axis_triples() {
        let fam = cyc_stpp_triples(4).unwrap();
        let t = &fam.triples()[0];
        let p = product_triple(t, t).unwrap();
        assert_eq!(p.group().spec(), &GroupSpec::cyclic_power(4, 6));
        assert_eq!(p.tensor(), Tensor::square(9));
        assert!(check_tpp(&p));
    }
}

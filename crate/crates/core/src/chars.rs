//! Irreducible character degrees and the power sums `D_r(G) = Σ d_ρ^r`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{triangle_degree, GroupSpec};

/// Largest symmetric degree for which degrees are computed.
pub const MAX_SYMMETRIC_DEGREE: u32 = 20;

/// Multiset of irreducible degrees of a finite group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeSet {
    order: u128,
    /// degree → multiplicity
    degrees: BTreeMap<u128, u128>,
}

fn overflow(what: &str) -> Error {
    Error::TooLarge { order: format!("{what} beyond 128 bits"), cap: u64::MAX }
}

impl DegreeSet {
    fn new(order: u128, degrees: BTreeMap<u128, u128>) -> DegreeSet {
        debug_assert!(degrees.values().all(|&m| m > 0));
        DegreeSet { order, degrees }
    }

    /// `n` copies of degree 1.
    pub fn abelian(order: u128) -> DegreeSet {
        DegreeSet::new(order, BTreeMap::from([(1, order)]))
    }

    pub fn order(&self) -> u128 {
        self.order
    }

    /// `(degree, multiplicity)` pairs in increasing degree order.
    pub fn entries(&self) -> impl Iterator<Item = (u128, u128)> + '_ {
        self.degrees.iter().map(|(&d, &m)| (d, m))
    }

    /// All degrees with repetition, ascending. Intended for small groups.
    pub fn to_vec(&self) -> Vec<u128> {
        self.entries().flat_map(|(d, m)| std::iter::repeat_n(d, m as usize)).collect()
    }

    /// `Σ d_ρ²`, which equals the order.
    pub fn sum_of_squares(&self) -> Option<u128> {
        self.entries()
            .try_fold(0u128, |acc, (d, m)| d.checked_mul(d)?.checked_mul(m)?.checked_add(acc))
    }

    pub fn is_abelian(&self) -> bool {
        self.degrees.keys().all(|&d| d == 1)
    }

    /// Degree multiset of `G × H`.
    pub fn product(&self, other: &DegreeSet) -> Result<DegreeSet> {
        let order = self.order.checked_mul(other.order).ok_or_else(|| overflow("order"))?;
        let mut degrees = BTreeMap::new();
        for (d1, m1) in self.entries() {
            for (d2, m2) in other.entries() {
                let m = m1.checked_mul(m2).ok_or_else(|| overflow("multiplicity"))?;
                *degrees.entry(d1 * d2).or_insert(0) += m;
            }
        }
        Ok(DegreeSet::new(order, degrees))
    }
}

fn partitions(n: u32) -> Vec<Vec<u32>> {
    fn go(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=rest.min(max)).rev() {
            cur.push(part);
            go(rest - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// `n! / ∏ hook lengths` for the Young diagram of `shape`.
fn hook_dimension(shape: &[u32], n: u32) -> u128 {
    let mut hooks: u128 = 1;
    for (i, &row) in shape.iter().enumerate() {
        for j in 0..row {
            let arm = row - j - 1;
            let leg = shape[i + 1..].iter().filter(|&&r| r > j).count() as u32;
            hooks *= (arm + leg + 1) as u128;
        }
    }
    let fact: u128 = (1..=n as u128).product();
    fact / hooks
}

fn symmetric(n: u32) -> Result<DegreeSet> {
    if n > MAX_SYMMETRIC_DEGREE {
        return Err(Error::Unsupported(format!("degrees of sym({n}); at most sym({MAX_SYMMETRIC_DEGREE})")));
    }
    let mut degrees = BTreeMap::new();
    for shape in partitions(n) {
        *degrees.entry(hook_dimension(&shape, n)).or_insert(0) += 1;
    }
    Ok(DegreeSet::new((1..=n as u128).product(), degrees))
}

/// Irreducible degrees of a supported group.
///
/// Abelian groups, symmetric groups up to degree 20 (hook-length formula),
/// triangle groups of that degree, and direct products of these are
/// supported. Wreath products are not; see [`wreath_domega_bound`].
pub fn degree_set(spec: &GroupSpec) -> Result<DegreeSet> {
    match spec {
        GroupSpec::Cyclic(n) => Ok(DegreeSet::abelian(*n as u128)),
        GroupSpec::Symmetric(n) => symmetric(*n),
        GroupSpec::TriangleSymmetric(n) => {
            let deg = triangle_degree(*n);
            if deg > MAX_SYMMETRIC_DEGREE as u64 {
                return Err(Error::Unsupported(format!("degrees of {spec} (sym({deg}))")));
            }
            symmetric(deg as u32)
        }
        GroupSpec::DirectProduct(parts) => {
            let mut acc = DegreeSet::abelian(1);
            for p in parts {
                acc = acc.product(&degree_set(p)?)?;
            }
            Ok(acc)
        }
        GroupSpec::Wreath(..) => Err(Error::Unsupported(format!(
            "degree sets of wreath products ({spec}); only the D_omega bound is available"
        ))),
    }
}

/// `D_r = Σ d_ρ^r` for real `r ≥ 0`.
pub fn d_r_sum(ds: &DegreeSet, r: f64) -> f64 {
    ds.entries().map(|(d, m)| m as f64 * (d as f64).powf(r)).sum()
}

/// Largest irreducible degree `d′(G)`.
pub fn d_prime(ds: &DegreeSet) -> u128 {
    ds.degrees.keys().next_back().copied().unwrap_or(1)
}

/// Number of irreducible characters, equal to the number of conjugacy classes.
pub fn class_number(ds: &DegreeSet) -> u128 {
    ds.degrees.values().sum()
}

/// `(n!)^{ω−1}·|H|^n`, an upper bound on `D_ω(H ≀ Sym_n)` for abelian `H`.
pub fn wreath_domega_bound(h_order: u64, n: u32, omega: f64) -> f64 {
    ln_wreath_domega_bound(h_order, n, omega).exp()
}

/// Natural log of [`wreath_domega_bound`], usable when the bound itself overflows.
pub fn ln_wreath_domega_bound(h_order: u64, n: u32, omega: f64) -> f64 {
    let ln_fact: f64 = (2..=n as u64).map(|k| (k as f64).ln()).sum();
    (omega - 1.0) * ln_fact + n as f64 * (h_order as f64).ln()
}

//! Upper bounds on the exponent ω of matrix multiplication.
//!
//! All logarithms are natural; every quantity is a ratio of logarithms.

mod report;

use std::fmt;
use std::ops::RangeInclusive;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;

use crate::chars::{d_prime, DegreeSet};
use crate::error::{Error, Result};
use crate::tpp::Tensor;

pub use report::{
    chapter6_report, omega_abelian_tensor, omega_simultaneous, omega_wreath, strassen_report,
    triangle_alpha_report, verified_simultaneous_bound, verified_triple_bound, verified_wreath_bound,
    BoundParams, BoundReport, FormulaId, Provenance,
};

/// Below this argument `ln n!` is summed term by term.
const EXACT_LN_FACTORIAL_MAX: f64 = 1024.0;

/// `ln n!` for real `n ≥ 0`: exact summation for small integers, Stirling's series otherwise.
pub fn ln_factorial(n: f64) -> f64 {
    if n <= EXACT_LN_FACTORIAL_MAX && n.fract() == 0.0 {
        return (2..=n as u64).map(|k| (k as f64).ln()).sum();
    }
    let (x2, x) = (n * n, n);
    x * x.ln() - x + 0.5 * (std::f64::consts::TAU * x).ln() + 1.0 / (12.0 * x) - 1.0 / (360.0 * x * x2)
        + 1.0 / (1260.0 * x * x2 * x2)
}

/// `ln x` for an arbitrary-precision positive integer.
pub fn ln_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 64 {
        return (x.iter_u64_digits().next().unwrap_or(0) as f64).ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).iter_u64_digits().next().unwrap_or(0) as f64;
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// `3·ln|G| / ln(nmp)`: an upper bound on the pseudoexponent α(G) from a
/// realized tensor. It equals α(G) only if the tensor is the largest possible.
pub fn alpha_from_tensor(group_order: u128, tensor: &Tensor) -> Result<f64> {
    if tensor.size() <= 1 {
        return Err(Error::Inapplicable("alpha needs a tensor with nmp > 1".into()));
    }
    Ok(3.0 * (group_order as f64).ln() / tensor.ln_size())
}

/// `γ(G) = ln|G| / ln d′(G)`, infinite for abelian groups.
pub fn gamma_of(ds: &DegreeSet) -> f64 {
    let d = d_prime(ds);
    if d <= 1 {
        f64::INFINITY
    } else {
        (ds.order() as f64).ln() / (d as f64).ln()
    }
}

/// Open interval `(2·ln|G|/ln(|G|−1), 2·ln|G|/(ln|G| − ln c))` containing γ of
/// every non-abelian group with `c` conjugacy classes.
pub fn gamma_window(order: u128, classes: u128) -> (f64, f64) {
    let ln_g = (order as f64).ln();
    (2.0 * ln_g / ((order - 1) as f64).ln(), 2.0 * ln_g / (ln_g - (classes as f64).ln()))
}

/// `ω ≤ α·(γ−2)/(γ−α)` for `2 < α < γ`.
pub fn omega_single(alpha: f64, gamma: f64) -> Result<f64> {
    if !(alpha > 2.0 && alpha < gamma) {
        return Err(Error::Inapplicable(format!("needs 2 < alpha < gamma, got alpha={alpha}, gamma={gamma}")));
    }
    if gamma.is_infinite() {
        return Ok(alpha);
    }
    Ok(alpha * (gamma - 2.0) / (gamma - alpha))
}

/// Whether `z′^{1/3} > d′` and `|G| ≤ z′^{t/3}/d′^{t−2}`, which together give `ω ≤ t`.
///
/// `t` is accepted in `(2, 3]`.
pub fn omega_certificate(group_order: u128, z_prime: u128, d_prime: u128, t: f64) -> Result<bool> {
    if !(t > 2.0 && t <= 3.0) {
        return Err(Error::Inapplicable(format!("certificate exponent must lie in (2, 3], got {t}")));
    }
    let cube = d_prime.checked_pow(3);
    if cube.is_none_or(|c| z_prime <= c) {
        return Ok(false);
    }
    let lhs = (group_order as f64).ln();
    let rhs = t / 3.0 * (z_prime as f64).ln() - (t - 2.0) * (d_prime as f64).ln();
    Ok(lhs <= rhs + 1e-12 * lhs.abs().max(1.0))
}

/// `ln((n(n+1)/2)!) / ln(1!·2!⋯n!)`, an upper bound on α(Sym(Δ_n)).
pub fn triangle_alpha_exact(n: u32) -> Result<f64> {
    if n < 2 {
        return Err(Error::Domain(format!("triangle alpha needs n >= 2, got {n}")));
    }
    let big = crate::group::factorial(crate::group::triangle_degree(n));
    let sub: BigUint = (1..=n as u64).map(crate::group::factorial).product();
    Ok(ln_biguint(&big) / ln_biguint(&sub))
}

/// Leading-order form `2 + (2 − ln 2)/ln n` of the triangle bound.
pub fn triangle_alpha_leading(n: u32) -> Result<f64> {
    if n < 2 {
        return Err(Error::Domain(format!("triangle alpha needs n >= 2, got {n}")));
    }
    Ok(2.0 + (2.0 - std::f64::consts::LN_2) / (n as f64).ln())
}

/// Wreath bound `(top·ln|H| − ln top! − ln k) / ((Σ ln m_i p_i q_i)/3)` in a
/// form normalized by `top` so that huge parameters stay finite.
pub(crate) fn wreath_value(ln_h: f64, top: f64, ln_k: f64, mean_ln_size: f64) -> f64 {
    (ln_h - ln_factorial(top) / top - ln_k / top) / (mean_ln_size / 3.0)
}

/// Closed-form single-parameter bounds scanned by [`minimize_formula`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "id", rename_all = "kebab-case")]
pub enum Formula {
    /// One ⟨n−1,n−1,n−1⟩ triple in `Cyc_n^3`: `3·ln n / ln(n−1)`.
    Cyc3R1,
    /// Two simultaneous triples in `Cyc_n^3`: `(3·ln n − ln 2)/ln(n−1)`.
    Cyc3R2,
    /// `Cyc_n^3 ≀ Sym_2` with `k` permuted triples: `(6·ln n − ln 2 − ln k)/(2·ln(n−1))`.
    Wreath2 { k: u64 },
    /// `(Cyc_n^3)^m ≀ Sym_{2^m}`, one triple.
    Family { m: u32 },
    /// `(Cyc_n^3)^n ≀ Sym_{2^n}` assuming `k = (2^n!)^3`.
    Pow2Conditional,
}

impl Formula {
    pub const IDS: [&'static str; 5] = ["cyc3-r1", "cyc3-r2", "wreath2", "family", "pow2-conditional"];

    /// Looks up a formula by id; `param` is `k` for `wreath2` (default 1) and `m` for `family`.
    pub fn from_id(id: &str, param: Option<u64>) -> Result<Formula> {
        match id {
            "cyc3-r1" => Ok(Formula::Cyc3R1),
            "cyc3-r2" => Ok(Formula::Cyc3R2),
            "wreath2" => match param.unwrap_or(1) {
                0 => Err(Error::Domain("k must be positive".into())),
                k => Ok(Formula::Wreath2 { k }),
            },
            "family" => match param {
                Some(m) if (1..=1000).contains(&m) => Ok(Formula::Family { m: m as u32 }),
                _ => Err(Error::Domain("family needs m in 1..=1000".into())),
            },
            "pow2-conditional" => Ok(Formula::Pow2Conditional),
            other => Err(Error::Domain(format!("unknown formula '{other}'; known: {}", Formula::IDS.join(", ")))),
        }
    }

    pub fn id(&self) -> &'static str {
        match self {
            Formula::Cyc3R1 => "cyc3-r1",
            Formula::Cyc3R2 => "cyc3-r2",
            Formula::Wreath2 { .. } => "wreath2",
            Formula::Family { .. } => "family",
            Formula::Pow2Conditional => "pow2-conditional",
        }
    }

    /// Value at `n`, or `None` outside the domain `n ≥ 3`.
    pub fn eval(&self, n: u64) -> Option<f64> {
        if n < 3 {
            return None;
        }
        let (ln_n, ln_n1) = ((n as f64).ln(), ((n - 1) as f64).ln());
        let v = match *self {
            Formula::Cyc3R1 => 3.0 * ln_n / ln_n1,
            Formula::Cyc3R2 => (3.0 * ln_n - std::f64::consts::LN_2) / ln_n1,
            Formula::Wreath2 { k } => {
                (6.0 * ln_n - std::f64::consts::LN_2 - (k as f64).ln()) / (2.0 * ln_n1)
            }
            Formula::Family { m } => {
                let m = m as f64;
                wreath_value(3.0 * m * ln_n, m.exp2(), 0.0, 3.0 * m * ln_n1)
            }
            Formula::Pow2Conditional => {
                if n > 1000 {
                    return None;
                }
                let (m, top) = (n as f64, (n as f64).exp2());
                wreath_value(3.0 * m * ln_n, top, 3.0 * ln_factorial(top), 3.0 * m * ln_n1)
            }
        };
        v.is_finite().then_some(v)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Wreath2 { k } => write!(f, "wreath2(k={k})"),
            Formula::Family { m } => write!(f, "family(m={m})"),
            other => f.write_str(other.id()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Minimum {
    pub n: u64,
    pub value: f64,
}

/// Exhaustive scan for the smallest value of `formula` over `range`; ties go
/// to the smaller `n`.
pub fn minimize_formula(formula: Formula, range: RangeInclusive<u64>) -> Result<Minimum> {
    let best = |a: Minimum, b: Minimum| {
        if b.value < a.value || (b.value == a.value && b.n < a.n) {
            b
        } else {
            a
        }
    };
    range
        .clone()
        .into_par_iter()
        .filter_map(|n| formula.eval(n).map(|value| Minimum { n, value }))
        .reduce_with(best)
        .ok_or_else(|| Error::Domain(format!("{formula} has no value on {}..={}", range.start(), range.end())))
}

/// Minimum over `n` of the `Cyc_n^3 ≀ Sym_2` bound for each `k = 1..=k_max`.
pub fn k2_table(k_max: u64, range: RangeInclusive<u64>) -> Result<Vec<(u64, Minimum)>> {
    (1..=k_max).map(|k| Ok((k, minimize_formula(Formula::Wreath2 { k }, range.clone())?))).collect()
}

/// Smallest `m ≤ m_max` for which the `family` bound at `n` drops below `threshold`.
pub fn family_threshold(n: u64, threshold: f64, m_max: u32) -> Option<(u32, f64)> {
    (1..=m_max).find_map(|m| Formula::Family { m }.eval(n).filter(|&v| v < threshold).map(|v| (m, v)))
}

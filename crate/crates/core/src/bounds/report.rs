use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::{
    family_threshold, k2_table, ln_biguint, minimize_formula, triangle_alpha_exact,
    triangle_alpha_leading, wreath_value, Formula,
};
use crate::error::{Error, Result};
use crate::strassen::{verify_scheme, BilinearScheme};
use crate::tpp::{check_stpp, check_tpp, cyc_stpp_triples, IndexTriple, Tensor, TripleFamily};
use crate::GroupSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FormulaId {
    AbelianTensor,
    Simultaneous,
    WreathKn,
    SingleAlphaGamma,
    CertificateT,
    TriangleAlpha,
    StrassenRecursion,
}

/// Where the value's justification comes from.
///
/// `VerifiedTriple`: the triple, family or scheme behind it was checked in
/// this run. `PaperTable`: a formula evaluated at stated parameters whose
/// backing structure was not checked here. `Conditional`: rests on an
/// unverified assumption recorded in the parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    VerifiedTriple,
    PaperTable,
    Conditional,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BoundParams {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub group: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub tensors: Vec<Tensor>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub r: Option<u64>,
    /// Decimal string; may exceed 64 bits.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub k_n: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub m: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub assumption: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub formula: FormulaId,
    pub params: BoundParams,
    pub value: f64,
    pub provenance: Provenance,
    pub label: String,
}

impl BoundReport {
    fn omega(formula: FormulaId, params: BoundParams, value: f64, provenance: Provenance, label: String) -> Result<Self> {
        if !value.is_finite() || value < 2.0 - 1e-12 {
            return Err(Error::Inapplicable(format!("{label}: value {value} is not a valid exponent bound")));
        }
        Ok(BoundReport { formula, params, value, provenance, label })
    }
}

/// `ω ≤ 3·ln|G| / ln(nmp)` for a tensor realized in an abelian group.
pub fn omega_abelian_tensor(group_order: u128, tensor: &Tensor) -> Result<BoundReport> {
    if tensor.size() <= 1 {
        return Err(Error::Inapplicable("tensor ⟨1,1,1⟩ gives no bound".into()));
    }
    let value = 3.0 * (group_order as f64).ln() / tensor.ln_size();
    let params = BoundParams { tensors: vec![*tensor], ..Default::default() };
    BoundReport::omega(
        FormulaId::AbelianTensor,
        params,
        value,
        Provenance::PaperTable,
        format!("{tensor} in an abelian group of order {group_order}"),
    )
}

/// `ω ≤ (ln|G| − ln r)/ln n` for `r` simultaneous copies of `⟨n,n,n⟩` in an abelian group.
pub fn omega_simultaneous(group_order: u128, r: u64, n: u64) -> Result<BoundReport> {
    if n < 2 || r == 0 {
        return Err(Error::Inapplicable(format!("needs n >= 2 and r >= 1, got n={n}, r={r}")));
    }
    let value = ((group_order as f64).ln() - (r as f64).ln()) / (n as f64).ln();
    let params = BoundParams { tensors: vec![Tensor::square(n)], r: Some(r), ..Default::default() };
    BoundReport::omega(
        FormulaId::Simultaneous,
        params,
        value,
        Provenance::PaperTable,
        format!("{r} simultaneous ⟨{n},{n},{n}⟩ in order {group_order}"),
    )
}

/// `ω ≤ (n·ln|H| − ln n! − ln k_n) / ln(∏ m_i p_i q_i)^{1/3}` in `H ≀ Sym_n`.
///
/// `k_n > 1` is an assumption and is stamped conditional.
pub fn omega_wreath(h_order: u128, n: u32, sizes: &[Tensor], k_n: &BigUint) -> Result<BoundReport> {
    if sizes.len() != n as usize {
        return Err(Error::Arity { expected: n as usize, got: sizes.len() });
    }
    if k_n.bits() == 0 {
        return Err(Error::Domain("k_n must be positive".into()));
    }
    let top = n as f64;
    let mean_ln_size = sizes.iter().map(Tensor::ln_size).sum::<f64>() / top;
    let value = wreath_value((h_order as f64).ln(), top, ln_biguint(k_n), mean_ln_size);
    let conditional = !k_n.is_one();
    let params = BoundParams {
        tensors: sizes.to_vec(),
        k_n: Some(k_n.to_string()),
        n: Some(n as u64),
        assumption: conditional.then(|| format!("k_{n} = {k_n} permuted triples jointly STPP (unverified)")),
        ..Default::default()
    };
    let provenance = if conditional { Provenance::Conditional } else { Provenance::PaperTable };
    BoundReport::omega(FormulaId::WreathKn, params, value, provenance, format!("|H| = {h_order}, H wr Sym_{n}"))
}

fn require_abelian(spec: &GroupSpec) -> Result<()> {
    if spec.is_abelian() {
        Ok(())
    } else {
        Err(Error::Unsupported(format!("this bound needs an abelian group, got {spec}")))
    }
}

fn order_u128(spec: &GroupSpec) -> Result<u128> {
    u128::try_from(spec.order()).map_err(|_| Error::TooLarge { order: spec.order().to_string(), cap: u64::MAX })
}

/// Checks the triple and reports its abelian tensor bound.
pub fn verified_triple_bound(t: &IndexTriple) -> Result<BoundReport> {
    let spec = t.group().spec();
    require_abelian(spec)?;
    if !check_tpp(t) {
        return Err(Error::Inapplicable("triple fails the triple product property".into()));
    }
    let mut r = omega_abelian_tensor(order_u128(spec)?, &t.tensor())?;
    r.params.group = Some(spec.to_string());
    r.provenance = Provenance::VerifiedTriple;
    r.label = format!("{} in {spec}", t.tensor());
    Ok(r)
}

/// Checks a family of identical square tensors and reports the simultaneous bound.
pub fn verified_simultaneous_bound(fam: &TripleFamily) -> Result<BoundReport> {
    let spec = fam.group().spec();
    require_abelian(spec)?;
    let x = fam.triples()[0].tensor();
    if x.n != x.m || x.m != x.p || fam.triples().iter().any(|t| t.tensor() != x) {
        return Err(Error::Inapplicable("family tensors must be identical and square".into()));
    }
    if !check_stpp(fam) {
        return Err(Error::Inapplicable("family fails the simultaneous triple product property".into()));
    }
    let mut r = omega_simultaneous(order_u128(spec)?, fam.len() as u64, x.n)?;
    r.params.group = Some(spec.to_string());
    r.provenance = Provenance::VerifiedTriple;
    r.label = format!("{} simultaneous {x} in {spec}", fam.len());
    Ok(r)
}

/// Checks an `n`-member family in abelian `H` and reports the wreath bound with `k_n = 1`.
pub fn verified_wreath_bound(fam: &TripleFamily, n: u32) -> Result<BoundReport> {
    let spec = fam.group().spec();
    require_abelian(spec)?;
    let sizes: Vec<Tensor> = fam.triples().iter().map(IndexTriple::tensor).collect();
    if !check_stpp(fam) {
        return Err(Error::Inapplicable("family fails the simultaneous triple product property".into()));
    }
    let mut r = omega_wreath(order_u128(spec)?, n, &sizes, &BigUint::one())?;
    r.params.group = Some(GroupSpec::wreath(spec.clone(), n).to_string());
    r.provenance = Provenance::VerifiedTriple;
    r.label = format!("({spec}) wr Sym_{n}, k_{n} = 1");
    Ok(r)
}

/// The triangle-group pseudoexponent bound, exact or leading-order.
pub fn triangle_alpha_report(n: u32, exact: bool) -> Result<BoundReport> {
    let value = if exact { triangle_alpha_exact(n)? } else { triangle_alpha_leading(n)? };
    Ok(BoundReport {
        formula: FormulaId::TriangleAlpha,
        params: BoundParams {
            group: Some(GroupSpec::TriangleSymmetric(n).to_string()),
            n: Some(n as u64),
            ..Default::default()
        },
        value,
        provenance: Provenance::PaperTable,
        label: if exact { format!("alpha(tri({n})) exact ratio") } else { format!("alpha(tri({n})) leading term") },
    })
}

/// `log₂ 7` from the rank-7 scheme, checked before reporting.
pub fn strassen_report() -> Result<BoundReport> {
    let scheme = BilinearScheme::strassen();
    let provenance = if verify_scheme(&scheme) { Provenance::VerifiedTriple } else { Provenance::Conditional };
    BoundReport::omega(
        FormulaId::StrassenRecursion,
        BoundParams { r: Some(scheme.rank() as u64), n: Some(2), ..Default::default() },
        7f64.log2(),
        provenance,
        "rank-7 scheme for 2x2, T(n) = 7T(n/2) + 18(n/2)^2".into(),
    )
}

/// Range scanned for the single-parameter minima.
const SCAN: std::ops::RangeInclusive<u64> = 3..=200;

/// Bounds from the small-group constructions, the wreath constructions and
/// their conditional strengthenings, plus the triangle table and Strassen's
/// exponent. The first three rows are the headline bounds.
pub fn chapter6_report() -> Result<Vec<BoundReport>> {
    let mut out = Vec::new();

    // Wreath lift of the axis family, k = 1, at the best n.
    let w = minimize_formula(Formula::Wreath2 { k: 1 }, SCAN)?;
    out.push(verified_wreath_bound(&cyc_stpp_triples(w.n as u32)?, 2)?);

    // Two simultaneous axis triples at the best n.
    let s = minimize_formula(Formula::Cyc3R2, SCAN)?;
    out.push(verified_simultaneous_bound(&cyc_stpp_triples(s.n as u32)?)?);

    // Products of the axis family lifted to Sym_{2^m}: first m below 2.82.
    let (m, v) = family_threshold(s.n, 2.82, 1000)
        .ok_or_else(|| Error::Inapplicable("family line never drops below 2.82".into()))?;
    let family = |m: Option<u64>, value: f64, label: String| BoundReport {
        formula: FormulaId::WreathKn,
        params: BoundParams {
            group: m.map(|m| format!("cyc({})^{} wr sym(2^{m})", s.n, 3 * m)),
            k_n: Some("1".into()),
            n: Some(s.n),
            m,
            ..Default::default()
        },
        value,
        provenance: Provenance::PaperTable,
        label,
    };
    out.push(family(Some(m as u64), v, format!("(Cyc_{0}^3)^m wr Sym_(2^m), n = {0}, m = {m}", s.n)));
    out.push(family(None, s.value, format!("(Cyc_{}^3)^m wr Sym_(2^m), limit m -> infinity", s.n)));

    for (k, min) in k2_table(8, SCAN)?.into_iter().skip(1) {
        let n = min.n as u32;
        let sizes = [Tensor::square(min.n - 1); 2];
        let h = order_u128(&GroupSpec::cyclic_power(n, 3))?;
        let mut r = omega_wreath(h, 2, &sizes, &BigUint::from(k))?;
        r.params.group = Some(GroupSpec::wreath(GroupSpec::cyclic_power(n, 3), 2).to_string());
        r.label = format!("Cyc_{n}^3 wr Sym_2 with k_2 = {k}");
        out.push(r);
    }

    let p = minimize_formula(Formula::Pow2Conditional, 3..=25)?;
    let top = 1u64 << p.n;
    out.push(BoundReport::omega(
        FormulaId::WreathKn,
        BoundParams {
            group: Some(format!("cyc({0})^{1} wr sym({top})", p.n, 3 * p.n)),
            n: Some(p.n),
            m: Some(p.n),
            assumption: Some(format!("k = ({top}!)^3 permuted triples jointly STPP (unverified)")),
            ..Default::default()
        },
        p.value,
        Provenance::Conditional,
        format!("(Cyc_n^3)^n wr Sym_(2^n) with maximal k, n = {}", p.n),
    )?);

    for n in 2..=10 {
        out.push(triangle_alpha_report(n, false)?);
    }
    out.push(strassen_report()?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simultaneous_examples() {
        let r = omega_simultaneous(16u128.pow(3), 2, 15).unwrap();
        assert!((r.value - 2.81553827).abs() < 1e-8);
        let r1 = omega_simultaneous(4096, 1, 15).unwrap();
        let a = omega_abelian_tensor(4096, &Tensor::square(15)).unwrap();
        assert!((r1.value - a.value).abs() < 1e-12);
        assert!((a.value - 3.0714963).abs() < 1e-6);
        assert!((omega_simultaneous(125, 5, 5).unwrap().value - 2.0).abs() < 1e-12);
        assert!(omega_simultaneous(125, 6, 5).is_err());
    }

    #[test]
    fn wreath_examples() {
        let sizes = [Tensor::square(40); 2];
        let r = omega_wreath(41u128.pow(3), 2, &sizes, &BigUint::one()).unwrap();
        assert!((r.value - 2.92613048).abs() < 1e-8);
        assert_eq!(r.provenance, Provenance::PaperTable);
        let c = omega_wreath(41u128.pow(3), 2, &sizes, &BigUint::from(8u32)).unwrap();
        assert_eq!(c.provenance, Provenance::Conditional);
        assert!(c.value < r.value);
        assert!(omega_wreath(41, 3, &sizes, &BigUint::one()).is_err());
    }

    #[test]
    fn verified_reports() {
        let fam = cyc_stpp_triples(4).unwrap();
        let r = verified_triple_bound(&fam.triples()[0]).unwrap();
        assert_eq!(r.provenance, Provenance::VerifiedTriple);
        assert!((r.value - 3.0 * 64f64.ln() / 27f64.ln()).abs() < 1e-12);
        let s = verified_simultaneous_bound(&fam).unwrap();
        assert!((s.value - (64f64.ln() - 2f64.ln()) / 3f64.ln()).abs() < 1e-12);
        let w = verified_wreath_bound(&fam, 2).unwrap();
        assert_eq!(w.params.group.as_deref(), Some("cyc(4)^3 wr sym(2)"));
    }

    #[test]
    fn report_json_shape() {
        let r = strassen_report().unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["formula"], "STRASSEN_RECURSION");
        assert_eq!(v["provenance"], "verified-triple");
        let back: BoundReport = serde_json::from_value(v).unwrap();
        assert_eq!(back, r);
    }
}

//! End-to-end reproduction run: the bound minima, the triangle table, triple
//! verification, group-algebra products, transforms, Strassen, character
//! degrees and randomized invariants, each scored PASS/FAIL against pinned
//! reference values and tolerances.

use std::sync::Arc;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{
    abelian_dft, abelian_idft, convolve, matmul_via_abelian_dft, matmul_via_group, simultaneous_matmul, sym3_dft,
    sym3_idft, AlgebraElement, Sym3Transform,
};
use crate::bounds::{
    alpha_from_tensor, gamma_of, gamma_window, k2_table, minimize_formula, triangle_alpha_leading, Formula,
};
use crate::chars::{class_number, d_prime, d_r_sum, degree_set, DegreeSet};
use crate::error::{Error, Result};
use crate::strassen::{op_count, strassen_2x2, strassen_recursive, strassen_recursive_counted};
use crate::tpp::{
    check_stpp, check_tpp, check_tpp_abelian_oracle, cyc_stpp_triples, triangle_subgroup_triple, wreath_triple,
    IndexTriple,
};
use crate::{Element, Group, GroupSpec, Matrix, Subset};

/// Published `k₂ = 1..8` minima, four decimals.
pub const K2_PRINTED: [f64; 8] = [2.9261, 2.8163, 2.7351, 2.6700, 2.6142, 2.5647, 2.5200, 2.4785];
/// Published triangle `α` leading terms for `n = 2..10`, five decimals.
pub const ALPHA_PRINTED: [f64; 9] = [3.88539, 3.18955, 2.94270, 2.81199, 2.72937, 2.67159, 2.62846, 2.59477, 2.56756];

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub ok: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Criterion {
    pub id: usize,
    pub title: &'static str,
    pub checks: Vec<Check>,
    pub seconds: f64,
}

impl Criterion {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }
}

#[derive(Default)]
struct Checks(Vec<Check>);

impl Checks {
    fn check(&mut self, ok: bool, detail: impl Into<String>) {
        self.0.push(Check { ok, detail: detail.into() });
    }

    fn within(&mut self, started: Instant, limit: Duration, what: &str) {
        let took = started.elapsed();
        self.check(took < limit, format!("{what} took {took:.2?} (limit {limit:?})"));
    }
}

type Body = fn(&mut Checks) -> Result<()>;

const CRITERIA: [(&str, Body); 8] = [
    ("bound minima and k2 table", bound_minima),
    ("triangle alpha table", triangle_alpha),
    ("triple verification", triple_verification),
    ("group-algebra products", group_products),
    ("transform properties", transforms),
    ("strassen", strassen),
    ("character degrees", characters),
    ("randomized invariants", randomized_invariants),
];

pub fn criterion_count() -> usize {
    CRITERIA.len()
}

/// Runs criterion `id` (1-based). An error inside a criterion is recorded as a failed check.
pub fn run_criterion(id: usize) -> Result<Criterion> {
    let (title, body) = *CRITERIA
        .get(id.wrapping_sub(1))
        .ok_or_else(|| Error::Domain(format!("no criterion {id}; there are {}", CRITERIA.len())))?;
    let started = Instant::now();
    let mut c = Checks::default();
    if let Err(e) = body(&mut c) {
        c.check(false, format!("aborted: {e}"));
    }
    Ok(Criterion { id, title, checks: c.0, seconds: started.elapsed().as_secs_f64() })
}

pub fn run_all() -> Vec<Criterion> {
    (1..=CRITERIA.len()).map(|id| run_criterion(id).expect("id in range")).collect()
}

fn bound_minima(c: &mut Checks) -> Result<()> {
    let t0 = Instant::now();
    let m = minimize_formula(Formula::Cyc3R2, 3..=100)?;
    c.check(m.n == 16 && (m.value - 2.81553).abs() <= 1e-4, format!("(3ln n - ln2)/ln(n-1): n={} value={:.8}", m.n, m.value));
    let m = minimize_formula(Formula::Wreath2 { k: 1 }, 3..=200)?;
    c.check(
        m.n == 41 && (m.value - 2.92613048).abs() <= 1e-6,
        format!("(6ln n - ln2)/(2ln(n-1)): n={} value={:.8}", m.n, m.value),
    );
    for (k, min) in k2_table(8, 3..=200)? {
        let printed = K2_PRINTED[k as usize - 1];
        c.check(
            (min.value - printed).abs() <= 1e-4,
            format!("k2={k}: n={} value={:.6} printed {printed:.4}", min.n, min.value),
        );
    }
    let m = minimize_formula(Formula::Pow2Conditional, 3..=25)?;
    c.check(m.n == 6 && (m.value - 2.012).abs() <= 1e-2, format!("conditional 2^n family: n={} value={:.6}", m.n, m.value));
    c.within(t0, Duration::from_secs(5), "minima");
    Ok(())
}

fn triangle_alpha(c: &mut Checks) -> Result<()> {
    let t0 = Instant::now();
    for (i, printed) in ALPHA_PRINTED.iter().enumerate() {
        let n = i as u32 + 2;
        let v = triangle_alpha_leading(n)?;
        c.check((v - printed).abs() <= 5e-6, format!("n={n}: {v:.5} printed {printed:.5}"));
    }
    c.within(t0, Duration::from_secs(1), "alpha table");
    Ok(())
}

fn triple_verification(c: &mut Checks) -> Result<()> {
    let t0 = Instant::now();
    let mut bad = Vec::new();
    for n in 2..=25 {
        if !check_stpp(&cyc_stpp_triples(n)?) {
            bad.push(n);
        }
    }
    c.check(bad.is_empty(), format!("axis families STPP for n=2..25 (failures: {bad:?})"));
    c.within(t0, Duration::from_secs(60), "axis families");

    let t1 = Instant::now();
    for n in 2..=4 {
        let t = triangle_subgroup_triple(n, 1_000_000)?;
        c.check(check_tpp(&t), format!("triangle subgroups n={n}: {} TPP", t.tensor()));
    }
    c.within(t1, Duration::from_secs(600), "triangle triples");

    let t2 = Instant::now();
    let w = wreath_triple(&cyc_stpp_triples(3)?, 2)?;
    c.check(check_tpp(&w), format!("wreath lift over cyc(3)^3, n=2: {} in order {} TPP", w.tensor(), w.group().order()));
    c.within(t2, Duration::from_secs(60), "wreath triple");
    Ok(())
}

fn int_matrix(rows: u64, cols: u64, rng: &mut ChaCha8Rng) -> Matrix<i64> {
    Matrix::from_fn(rows as usize, cols as usize, |_, _| rng.gen_range(-1000..=1000))
}

fn unit_matrix(rows: u64, cols: u64, rng: &mut ChaCha8Rng) -> Matrix<Complex64> {
    Matrix::from_fn(rows as usize, cols as usize, |_, _| Complex64::new(rng.gen_range(-1.0..=1.0), 0.0))
}

fn group_products(c: &mut Checks) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut triples: Vec<(String, IndexTriple)> = Vec::new();
    for n in [4, 8, 16] {
        let fam = cyc_stpp_triples(n)?;
        triples.push((format!("cyc({n})^3"), fam.triples()[0].clone()));
    }
    triples.push(("sym(3) triangle".into(), triangle_subgroup_triple(2, 100)?));
    let mut pairs = 0;
    let mut exact_ok = true;
    let mut worst = 0.0f64;
    for (name, t) in &triples {
        let x = t.tensor();
        for _ in 0..25 {
            let a = int_matrix(x.n, x.m, &mut rng);
            let b = int_matrix(x.m, x.p, &mut rng);
            exact_ok &= matmul_via_group(t, &a, &b)? == a.matmul(&b)?;
            pairs += 1;
        }
        if t.group().is_abelian() {
            for _ in 0..5 {
                let a = unit_matrix(x.n, x.m, &mut rng);
                let b = unit_matrix(x.m, x.p, &mut rng);
                let naive = matmul_via_group(t, &a, &b)?;
                let fast = matmul_via_abelian_dft(t, &a, &b)?;
                worst = worst.max(naive.max_abs_diff(&fast));
            }
        }
        c.check(true, format!("{name}: {x} triple"));
    }
    c.check(exact_ok && pairs >= 100, format!("{pairs} integer pairs bit-exact against schoolbook"));
    c.check(worst < 1e-9, format!("DFT path vs naive path max error {worst:.2e}"));

    let fam = cyc_stpp_triples(4)?;
    let ps: Vec<(Matrix<i64>, Matrix<i64>)> =
        (0..2).map(|_| (int_matrix(3, 3, &mut rng), int_matrix(3, 3, &mut rng))).collect();
    let out = simultaneous_matmul(&fam, &ps)?;
    let mut ok = true;
    for (prod, (a, b)) in out.iter().zip(&ps) {
        ok &= *prod == a.matmul(b)?;
    }
    c.check(ok, "two 3x3 products from one convolution in cyc(4)^3, bit-exact");
    Ok(())
}

fn random_full(g: &Arc<Group>, rng: &mut ChaCha8Rng) -> Result<AlgebraElement<Complex64>> {
    let terms: Vec<_> = g
        .enumerate(100_000)?
        .into_iter()
        .map(|e| (e, Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))))
        .collect();
    AlgebraElement::from_terms(g.clone(), terms)
}

fn random_sparse(g: &Arc<Group>, rng: &mut ChaCha8Rng, terms: usize) -> Result<AlgebraElement<Complex64>> {
    let ts: Vec<_> = (0..terms)
        .map(|_| (g.random_element(rng), Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))))
        .collect();
    AlgebraElement::from_terms(g.clone(), ts)
}

fn max_coeff_diff(x: &AlgebraElement<Complex64>, y: &AlgebraElement<Complex64>) -> f64 {
    x.terms().chain(y.terms()).map(|(e, _)| (x.coeff(e) - y.coeff(e)).norm()).fold(0.0, f64::max)
}

fn transforms(c: &mut Checks) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let s3 = Group::parse("sym(3)")?;
    let (mut round, mut mult) = (0.0f64, 0.0f64);
    for _ in 0..200 {
        let f = random_full(&s3, &mut rng)?;
        let h = random_full(&s3, &mut rng)?;
        let ff = sym3_dft(&f)?;
        round = round.max(max_coeff_diff(&sym3_idft(&s3, &ff)?, &f));
        let lhs = sym3_dft(&convolve(&f, &h)?)?;
        mult = mult.max(lhs.max_abs_diff(&ff.mul(&sym3_dft(&h)?)));
    }
    c.check(round < 1e-9, format!("Sym_3 round trip max error {round:.2e} over 200 elements"));
    c.check(mult < 1e-9, format!("Sym_3 multiplicativity max error {mult:.2e} over 200 pairs"));
    let dims: usize = Sym3Transform::DEGREES.iter().map(|d| d * d).sum();
    c.check(dims == 6, format!("block dimensions 1+1+4 = {dims}"));

    let (mut round, mut conv) = (0.0f64, 0.0f64);
    for n in 2..=16u32 {
        for k in 1..=3usize {
            let g = Group::parse(&format!("cyc({n})^{k}"))?;
            let f = random_sparse(&g, &mut rng, 40)?;
            let h = random_sparse(&g, &mut rng, 40)?;
            let (ff, fh) = (abelian_dft(&g, &f)?, abelian_dft(&g, &h)?);
            round = round.max(max_coeff_diff(&abelian_idft(&g, &ff)?, &f));
            let fz = abelian_dft(&g, &convolve(&f, &h)?)?;
            let e = fz.iter().zip(ff.iter().zip(&fh)).map(|(z, (a, b))| (z - a * b).norm()).fold(0.0, f64::max);
            conv = conv.max(e);
        }
    }
    c.check(round < 1e-9, format!("abelian round trip on cyc(n)^k, n<=16, k<=3: max error {round:.2e}"));
    c.check(conv < 1e-9, format!("abelian convolution theorem: max error {conv:.2e}"));
    Ok(())
}

fn strassen(c: &mut Checks) -> Result<()> {
    let bits = |m: u32| Matrix::from_fn(2, 2, |i, j| ((m >> (2 * i + j)) & 1) as i64);
    let mut all = true;
    for x in 0..16 {
        for y in 0..16 {
            all &= strassen_2x2(&bits(x), &bits(y))?.0 == bits(x).matmul(&bits(y))?;
        }
    }
    c.check(all, "all 256 pairs of 0/1 2x2 matrices");
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for n in [2usize, 4, 8, 16, 32] {
        let mut ok = true;
        for _ in 0..200 {
            let a = Matrix::from_fn(n, n, |_, _| rng.gen_range(-1000i64..=1000));
            let b = Matrix::from_fn(n, n, |_, _| rng.gen_range(-1000i64..=1000));
            ok &= strassen_recursive(&a, &b)? == a.matmul(&b)?;
        }
        c.check(ok, format!("recursive = schoolbook on 200 random {n}x{n} pairs"));
    }
    for k in 0..=5u32 {
        let n = 1usize << k;
        let a = Matrix::from_fn(n, n, |i, j| (i * n + j) as i64);
        let (_, count) = strassen_recursive_counted(&a, &a, 1)?;
        c.check(count.mults == 7u64.pow(k), format!("n={n}: {} multiplications, 7^{k} = {}", count.mults, 7u64.pow(k)));
    }
    let (t2, t4) = (op_count(2)?, op_count(4)?);
    c.check(t2 == 25 && t4 == 247, format!("T(2) = {t2}, T(4) = {t4}"));
    Ok(())
}

fn power_sum_inequalities(ds: &DegreeSet) -> bool {
    const GRID: [f64; 5] = [1.0, 1.5, 2.0, 2.5, 3.0];
    let d = |r: f64| d_r_sum(ds, r);
    let le = |a: f64, b: f64| a <= b + 1e-9 * b.abs().max(1.0);
    let dp = d_prime(ds) as f64;
    GRID.iter().all(|&r| {
        le(d(r), d(1.0).powf(r))
            && (r < 2.0 || le(d(r), dp.powf(r - 2.0) * ds.order() as f64))
            && GRID.iter().all(|&s| le(d(r + s), d(r) * d(s)) && (r > s || le(d(s).powf(1.0 / s), d(r).powf(1.0 / r))))
    })
}

fn characters(c: &mut Checks) -> Result<()> {
    let mut sym_ok = true;
    for n in 1..=10 {
        let ds = degree_set(&GroupSpec::Symmetric(n))?;
        sym_ok &= ds.sum_of_squares() == Some(ds.order());
    }
    c.check(sym_ok, "sum of squared degrees = n! for sym(n), n <= 10");
    let abelian = ["cyc(1)", "cyc(7)", "cyc(4)^3", "cyc(16)^3", "cyc(2) x cyc(3) x cyc(5)", "cyc(41)^3"];
    let mut ab_ok = true;
    for s in abelian {
        let ds = degree_set(&GroupSpec::parse(s)?)?;
        ab_ok &= ds.sum_of_squares() == Some(ds.order()) && power_sum_inequalities(&ds);
    }
    c.check(ab_ok, format!("abelian specs {abelian:?}: sum of squares and D_r inequalities"));
    let mut ineq_ok = true;
    for n in 1..=8 {
        ineq_ok &= power_sum_inequalities(&degree_set(&GroupSpec::Symmetric(n))?);
    }
    c.check(ineq_ok, "D_r inequalities on sym(1..8), r,s in {1,1.5,2,2.5,3}");
    let s3 = degree_set(&GroupSpec::Symmetric(3))?;
    let g = gamma_of(&s3);
    let (lo, hi) = gamma_window(s3.order(), class_number(&s3));
    c.check((g - 6f64.log2()).abs() <= 1e-9, format!("gamma(sym(3)) = {g:.12}"));
    c.check(lo < g && g < hi, format!("gamma window ({lo:.6}, {hi:.6})"));
    Ok(())
}

fn randomized_invariants(c: &mut Checks) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let load = |specs: &[&str]| -> Result<Vec<(Arc<Group>, Vec<Element>)>> {
        specs
            .iter()
            .map(|s| {
                let g = Group::parse(s)?;
                let e = g.enumerate(1000)?;
                Ok((g, e))
            })
            .collect()
    };
    let abelian = load(&["cyc(12)", "cyc(3)^3", "cyc(4) x cyc(6)", "cyc(2)^4", "cyc(5)^2"])?;
    let other = load(&["sym(3)", "sym(4)", "cyc(2) wr sym(2)", "cyc(2) x sym(3)"])?;
    let (mut oracle_bad, mut tpp_count, mut bound_bad) = (0, 0, 0);
    for (pool, is_abelian) in [(&abelian, true), (&other, false)] {
        for i in 0..500 {
            let (g, els) = &pool[i % pool.len()];
            let mut pick = || {
                let k = rng.gen_range(1..=5);
                Subset::new(g.clone(), els.choose_multiple(&mut rng, k).cloned().collect())
            };
            let t = IndexTriple::new(pick()?, pick()?, pick()?)?;
            let tpp = check_tpp(&t);
            if is_abelian {
                oracle_bad += usize::from(check_tpp_abelian_oracle(&t)? != tpp);
            }
            if tpp {
                tpp_count += 1;
                let x = t.tensor();
                let order = g.order_u64().expect("small group") as u128;
                let (n, m, p) = (x.n as u128, x.m as u128, x.p as u128);
                let sizes =
                    n * m <= order && n * p <= order && m * p <= order && (x.size() as f64) < (order as f64).powf(1.5);
                let alpha = x.size() == 1 || alpha_from_tensor(order, &x)? > 2.0;
                bound_bad += usize::from(!(sizes && alpha));
            }
        }
    }
    c.check(oracle_bad == 0, format!("abelian oracle agrees with the quotient check on 500 instances ({oracle_bad} mismatches)"));
    c.check(bound_bad == 0, format!("size bounds and alpha > 2 on {tpp_count} TPP instances out of 1000"));
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn out_of_range_ids_are_rejected() {
        assert!(run_criterion(0).is_err());
        assert!(run_criterion(criterion_count() + 1).is_err());
    }

    #[test]
    fn fast_criteria_pass() {
        for id in [2, 7] {
            let c = run_criterion(id).unwrap();
            assert!(c.passed(), "{:?}", c.checks);
        }
    }
}

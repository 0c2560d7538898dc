//! Seeded search for TPP triples with large `nmp`.
//!
//! Small groups are scanned exhaustively over identity-containing subsets of
//! bounded size; otherwise independent work units grow random triples and
//! drop any element that breaks the property.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{check_tpp, IndexTriple};
use crate::error::{Error, Result};
use crate::group::{Element, Group};
use crate::Subset;

/// Groups up to this order are searched exhaustively.
pub const EXHAUSTIVE_MAX_ORDER: u64 = 12;
/// Largest subset size considered in exhaustive mode.
pub const EXHAUSTIVE_MAX_SUBSET: usize = 4;

const WORK_UNITS: u64 = 8;
const RESTART_AFTER: u64 = 64;
/// Whole-group baseline `(G, {1}, {1})` is materialized only up to this order.
const BASELINE_MAX_ORDER: u64 = 100_000;

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub best: IndexTriple,
    pub exhaustive: bool,
    /// Number of TPP checks performed.
    pub checks: u64,
}

/// Ranking: larger `nmp`, then the more balanced triple (larger smallest side).
fn score(t: &IndexTriple) -> (u128, u64) {
    let x = t.tensor();
    (x.size(), x.n.min(x.m).min(x.p))
}

fn triple_from(group: &Arc<Group>, sets: [&[Element]; 3]) -> IndexTriple {
    let [s, t, u] = sets.map(|xs| Subset::from_distinct(group.clone(), xs.to_vec()));
    IndexTriple::new(s, t, u).expect("nonempty subsets of one group")
}

fn baseline(group: &Arc<Group>) -> IndexTriple {
    let id = Subset::identity(group.clone());
    match group.order_u64() {
        Some(n) if n <= BASELINE_MAX_ORDER => {
            let whole = Subset::whole(group.clone(), n).expect("order below cap");
            IndexTriple::new(whole, id.clone(), id).expect("valid")
        }
        _ => IndexTriple::new(id.clone(), id.clone(), id).expect("valid"),
    }
}

/// Best TPP triple found within `budget` TPP checks, deterministic in `seed`.
pub fn search_triples(group: &Arc<Group>, budget: u64, seed: u64) -> Result<SearchOutcome> {
    if budget == 0 {
        return Err(Error::EmptySearch);
    }
    match group.order_u64() {
        Some(n) if n <= EXHAUSTIVE_MAX_ORDER => Ok(exhaustive(group, budget)),
        _ => Ok(randomized(group, budget, seed)),
    }
}

fn subsets_with_identity(elems: &[Element], id: &Element, size: usize) -> Vec<Vec<Element>> {
    let others: Vec<&Element> = elems.iter().filter(|e| *e != id).collect();
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..size.saturating_sub(1)).collect();
    if size == 0 || size - 1 > others.len() {
        return out;
    }
    loop {
        let mut s = vec![id.clone()];
        s.extend(idx.iter().map(|&i| others[i].clone()));
        out.push(s);
        // next combination
        let k = idx.len();
        let mut i = k;
        while i > 0 && idx[i - 1] == others.len() - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn exhaustive(group: &Arc<Group>, budget: u64) -> SearchOutcome {
    let order = group.order_u64().expect("small group");
    let elems = group.enumerate(order).expect("small group");
    let id = group.identity();
    let max = EXHAUSTIVE_MAX_SUBSET.min(order as usize);
    let by_size: Vec<Vec<Vec<Element>>> =
        (0..=max).map(|k| subsets_with_identity(&elems, id, k)).collect();

    let mut best = baseline(group);
    let mut checks = 0u64;

    // Size profiles a ≥ b ≥ c that can beat the baseline and satisfy the
    // necessary conditions nm, np, mp ≤ |G| and (nmp)² < |G|³.
    let mut profiles = Vec::new();
    for a in 1..=max {
        for b in 1..=a {
            for c in 1..=b {
                let (a64, b64, c64) = (a as u64, b as u64, c as u64);
                let size = a64 * b64 * c64;
                if a64 * b64 > order || (size as u128).pow(2) >= (order as u128).pow(3) {
                    continue;
                }
                profiles.push((a, b, c));
            }
        }
    }
    profiles.sort_by_key(|&(a, b, c)| std::cmp::Reverse(((a * b * c) as u128, c as u64)));

    'profiles: for (a, b, c) in profiles {
        let key = ((a * b * c) as u128, c as u64);
        if key <= score(&best) {
            break;
        }
        for s in &by_size[a] {
            for t in &by_size[b] {
                for u in &by_size[c] {
                    if checks >= budget {
                        break 'profiles;
                    }
                    checks += 1;
                    let cand = triple_from(group, [s, t, u]);
                    if check_tpp(&cand) {
                        best = cand;
                        continue 'profiles;
                    }
                }
            }
        }
    }
    SearchOutcome { best, exhaustive: true, checks }
}

struct UnitResult {
    best: IndexTriple,
    checks: u64,
}

fn run_unit(group: &Arc<Group>, seed: u64, unit: u64, budget: u64) -> UnitResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(unit);
    let id = group.identity().clone();
    let fresh = || [vec![id.clone()], vec![id.clone()], vec![id.clone()]];
    let mut sets = fresh();
    let mut best = triple_from(group, [&sets[0], &sets[1], &sets[2]]);
    let mut checks = 0;
    let mut failures = 0;
    while checks < budget {
        if failures >= RESTART_AFTER {
            sets = fresh();
            failures = 0;
        }
        // favour the smallest set to keep triples balanced
        let which = if rng.gen_bool(0.5) {
            (0..3).min_by_key(|&k| sets[k].len()).unwrap()
        } else {
            rng.gen_range(0..3)
        };
        let e = group.random_element(&mut rng);
        if sets[which].contains(&e) {
            failures += 1;
            continue;
        }
        sets[which].push(e);
        checks += 1;
        let cand = triple_from(group, [&sets[0], &sets[1], &sets[2]]);
        if check_tpp(&cand) {
            failures = 0;
            if score(&cand) > score(&best) {
                best = cand;
            }
        } else {
            sets[which].pop();
            failures += 1;
        }
    }
    UnitResult { best, checks }
}

fn randomized(group: &Arc<Group>, budget: u64, seed: u64) -> SearchOutcome {
    let units: Vec<u64> = (0..WORK_UNITS).collect();
    let results: Vec<UnitResult> = units
        .par_iter()
        .map(|&u| {
            let share = budget / WORK_UNITS + u64::from(u < budget % WORK_UNITS);
            run_unit(group, seed, u, share)
        })
        .collect();
    let checks = results.iter().map(|r| r.checks).sum();
    let mut best = baseline(group);
    // fixed priority: strictly better score wins, ties go to the lower unit
    for r in results {
        if score(&r.best) > score(&best) {
            best = r.best;
        }
    }
    SearchOutcome { best, exhaustive: false, checks }
}

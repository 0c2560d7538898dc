//! Quotient sets, the triple product property (TPP) and its simultaneous
//! version (STPP), plus the concrete triple constructions and a search harness.

mod construct;
mod search;

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Element, Group};
use crate::Subset;

pub use construct::{
    cyc_stpp_triples, product_family, product_triple, triangle_set, triangle_subgroup_triple,
    wreath_triple,
};
pub use search::{search_triples, SearchOutcome, EXHAUSTIVE_MAX_ORDER, EXHAUSTIVE_MAX_SUBSET};

/// The matrix multiplication tensor `⟨n,m,p⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Tensor {
    pub n: u64,
    pub m: u64,
    pub p: u64,
}

impl Tensor {
    pub fn new(n: u64, m: u64, p: u64) -> Result<Tensor> {
        if n == 0 || m == 0 || p == 0 {
            return Err(Error::Dimension(format!("tensor ⟨{n},{m},{p}⟩ has a zero side")));
        }
        Ok(Tensor { n, m, p })
    }

    pub fn square(n: u64) -> Tensor {
        Tensor { n, m: n, p: n }
    }

    /// `nmp`.
    pub fn size(&self) -> u128 {
        self.n as u128 * self.m as u128 * self.p as u128
    }

    /// `(nmp)^{1/3}`.
    pub fn mean_size(&self) -> f64 {
        (self.size() as f64).cbrt()
    }

    /// `ln(nmp)`, without overflow for large sides.
    pub fn ln_size(&self) -> f64 {
        (self.n as f64).ln() + (self.m as f64).ln() + (self.p as f64).ln()
    }

    pub fn pointwise(&self, other: &Tensor) -> Tensor {
        Tensor { n: self.n * other.n, m: self.m * other.m, p: self.p * other.p }
    }
}

impl fmt::Display for Tensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⟨{},{},{}⟩", self.n, self.m, self.p)
    }
}

/// Three nonempty subsets `(S, T, U)` of one group.
#[derive(Debug, Clone)]
pub struct IndexTriple {
    group: Arc<Group>,
    sets: [Subset; 3],
}

impl IndexTriple {
    pub fn new(s: Subset, t: Subset, u: Subset) -> Result<IndexTriple> {
        let group = s.group().clone();
        for set in [&s, &t, &u] {
            if set.is_empty() {
                return Err(Error::Domain("index triple subsets must be nonempty".into()));
            }
            if set.group() != &group {
                return Err(Error::Domain("index triple subsets lie in different groups".into()));
            }
        }
        Ok(IndexTriple { group, sets: [s, t, u] })
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn s(&self) -> &Subset {
        &self.sets[0]
    }

    pub fn t(&self) -> &Subset {
        &self.sets[1]
    }

    pub fn u(&self) -> &Subset {
        &self.sets[2]
    }

    pub fn sets(&self) -> &[Subset; 3] {
        &self.sets
    }

    pub fn tensor(&self) -> Tensor {
        Tensor {
            n: self.sets[0].len() as u64,
            m: self.sets[1].len() as u64,
            p: self.sets[2].len() as u64,
        }
    }
}

/// An ordered family of index triples in one group.
#[derive(Debug, Clone)]
pub struct TripleFamily {
    group: Arc<Group>,
    triples: Vec<IndexTriple>,
}

impl TripleFamily {
    pub fn new(triples: Vec<IndexTriple>) -> Result<TripleFamily> {
        let Some(first) = triples.first() else {
            return Err(Error::Domain("triple family must be nonempty".into()));
        };
        let group = first.group().clone();
        if triples.iter().any(|t| t.group() != &group) {
            return Err(Error::Domain("triple family members lie in different groups".into()));
        }
        Ok(TripleFamily { group, triples })
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn triples(&self) -> &[IndexTriple] {
        &self.triples
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }
}

/// `{x y⁻¹ : x ∈ X, y ∈ Y}`, sorted and deduplicated.
fn quotient_elements(group: &Group, xs: &[Element], ys: &[Element]) -> Vec<Element> {
    let inv: Vec<Element> = ys.iter().map(|y| group.op_inv(y)).collect();
    let mut set = HashSet::with_capacity(xs.len() * ys.len());
    for x in xs {
        for yi in &inv {
            set.insert(group.op(x, yi));
        }
    }
    let mut out: Vec<Element> = set.into_iter().collect();
    out.sort_unstable();
    out
}

/// Right-quotient set `Q(S) = {s′s⁻¹ : s, s′ ∈ S}`.
pub fn quotient_set(s: &Subset) -> Subset {
    let elems = quotient_elements(s.group(), s.elements(), s.elements());
    Subset::from_distinct(s.group().clone(), elems)
}

/// `Q(X, Y) = {x y⁻¹ : x ∈ X, y ∈ Y}`.
pub fn pair_quotient_set(x: &Subset, y: &Subset) -> Result<Subset> {
    if x.group() != y.group() {
        return Err(Error::Domain("quotient of subsets from different groups".into()));
    }
    let elems = quotient_elements(x.group(), x.elements(), y.elements());
    Ok(Subset::from_distinct(x.group().clone(), elems))
}

/// Elements `q₁ ∈ Q(S)`, `q₂ ∈ Q(T)`, `q₃ ∈ Q(U)` with `q₁q₂q₃ = 1`, not all trivial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TppWitness {
    pub q1: Element,
    pub q2: Element,
    pub q3: Element,
}

/// Finds `q1 ∈ qa`, `q2 ∈ qb` with `(q1 q2)⁻¹ ∈ qc`. With `skip_trivial`, the
/// pair `q1 = q2 = 1` is ignored. The first hit in `qa` order is returned
/// regardless of how the scan is partitioned across threads.
fn find_product_identity(
    group: &Group,
    qa: &[Element],
    qb: &[Element],
    qc: &HashSet<Element>,
    skip_trivial: bool,
) -> Option<TppWitness> {
    let id = group.identity();
    let scan = |q1: &Element| {
        qb.iter().find_map(|q2| {
            if skip_trivial && q1 == id && q2 == id {
                return None;
            }
            let q3 = group.op_inv(&group.op(q1, q2));
            qc.contains(&q3).then(|| TppWitness { q1: q1.clone(), q2: q2.clone(), q3 })
        })
    };
    if qa.len() * qb.len() < 4096 {
        qa.iter().find_map(scan)
    } else {
        qa.par_iter().find_map_first(scan)
    }
}

/// A TPP violation, or `None` when `t` has the triple product property.
pub fn tpp_witness(t: &IndexTriple) -> Option<TppWitness> {
    let g = t.group();
    let qs = quotient_elements(g, t.s().elements(), t.s().elements());
    let qt = quotient_elements(g, t.t().elements(), t.t().elements());
    let qu: HashSet<Element> =
        quotient_elements(g, t.u().elements(), t.u().elements()).into_iter().collect();
    find_product_identity(g, &qs, &qt, &qu, true)
}

/// Triple product property: `q₁q₂q₃ = 1` with `qᵢ` in the quotient sets forces `q₁ = q₂ = q₃ = 1`.
pub fn check_tpp(t: &IndexTriple) -> bool {
    tpp_witness(t).is_none()
}

/// Independent check for abelian groups: `(s, t, u) ↦ stu` must be injective.
pub fn check_tpp_abelian_oracle(t: &IndexTriple) -> Result<bool> {
    let g = t.group();
    if !g.is_abelian() {
        return Err(Error::Unsupported(format!(
            "product-map oracle needs an abelian group, {} is not",
            g.spec()
        )));
    }
    let count = t.tensor().size();
    if let Some(order) = g.order_u64() {
        if count > order as u128 {
            return Ok(false);
        }
    }
    let mut seen = HashSet::with_capacity(count as usize);
    for s in t.s().elements() {
        for tt in t.t().elements() {
            let st = g.op(s, tt);
            for u in t.u().elements() {
                if !seen.insert(g.op(&st, u)) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Reorders `(S, T, U)`: output set `k` is input set `perm[k]`.
pub fn permute_triple(t: &IndexTriple, perm: [usize; 3]) -> Result<IndexTriple> {
    let mut sorted = perm;
    sorted.sort_unstable();
    if sorted != [0, 1, 2] {
        return Err(Error::Domain(format!("{perm:?} is not a permutation of (S, T, U)")));
    }
    Ok(IndexTriple {
        group: t.group.clone(),
        sets: perm.map(|k| t.sets[k].clone()),
    })
}

/// All six orderings of `(S, T, U)`.
pub const TRIPLE_PERMUTATIONS: [[usize; 3]; 6] =
    [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

/// Why a family fails the simultaneous triple product property.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StppViolation {
    /// Member `index` fails the ordinary TPP.
    Member { index: usize, witness: TppWitness },
    /// `q₁ ∈ Q(S_i,S_j)`, `q₂ ∈ Q(T_j,T_k)`, `q₃ ∈ Q(U_k,U_i)` multiply to 1 with `i, j, k` not all equal.
    Cross { i: usize, j: usize, k: usize, witness: TppWitness },
}

pub fn stpp_violation(fam: &TripleFamily) -> Option<StppViolation> {
    for (index, t) in fam.triples().iter().enumerate() {
        if let Some(witness) = tpp_witness(t) {
            return Some(StppViolation::Member { index, witness });
        }
    }
    let g = fam.group();
    let r = fam.len();
    let mut cache: [HashMap<(usize, usize), Vec<Element>>; 3] = Default::default();
    let mut pair = |which: usize, a: usize, b: usize| -> Vec<Element> {
        cache[which]
            .entry((a, b))
            .or_insert_with(|| {
                let ts = fam.triples();
                quotient_elements(g, ts[a].sets[which].elements(), ts[b].sets[which].elements())
            })
            .clone()
    };
    for i in 0..r {
        for j in 0..r {
            for k in 0..r {
                if i == j && j == k {
                    continue;
                }
                let qa = pair(0, i, j);
                let qb = pair(1, j, k);
                let qc: HashSet<Element> = pair(2, k, i).into_iter().collect();
                if let Some(witness) = find_product_identity(g, &qa, &qb, &qc, false) {
                    return Some(StppViolation::Cross { i, j, k, witness });
                }
            }
        }
    }
    None
}

/// Simultaneous triple product property.
pub fn check_stpp(fam: &TripleFamily) -> bool {
    stpp_violation(fam).is_none()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyc_triple(n: u32, s: &[u32], t: &[u32], u: &[u32]) -> IndexTriple {
        let g = Group::parse(&format!("cyc({n})")).unwrap();
        let set = |xs: &[u32]| {
            Subset::new(g.clone(), xs.iter().map(|&x| Element::from_slice(&[x])).collect()).unwrap()
        };
        IndexTriple::new(set(s), set(t), set(u)).unwrap()
    }

    #[test]
    fn quotient_set_examples() {
        let g = Group::parse("cyc(3)").unwrap();
        let s = Subset::parse(g.clone(), &["c:0", "c:1"]).unwrap();
        assert_eq!(quotient_set(&s).to_strings(), vec!["c:0", "c:1", "c:2"]);

        let single = Subset::parse(g.clone(), &["c:2"]).unwrap();
        assert_eq!(quotient_set(&single).elements(), &[g.identity().clone()]);

        let c5 = Group::parse("cyc(5)").unwrap();
        let x = Subset::parse(c5.clone(), &["c:0"]).unwrap();
        let y = Subset::parse(c5.clone(), &["c:2"]).unwrap();
        assert_eq!(pair_quotient_set(&x, &y).unwrap().to_strings(), vec!["c:3"]);
        let whole = Subset::whole(c5.clone(), 10).unwrap();
        assert_eq!(pair_quotient_set(&whole, &whole).unwrap().len(), 5);
        assert!(pair_quotient_set(&x, &s).is_err());
    }

    #[test]
    fn subgroup_quotient_is_itself() {
        let g = Group::parse("cyc(6)").unwrap();
        let h = Subset::parse(g, &["c:0", "c:2", "c:4"]).unwrap();
        assert_eq!(quotient_set(&h).elements(), h.elements());
    }

    #[test]
    fn whole_group_with_trivial_sets_is_tpp() {
        let g = Group::parse("sym(3)").unwrap();
        let t = IndexTriple::new(
            Subset::whole(g.clone(), 10).unwrap(),
            Subset::identity(g.clone()),
            Subset::identity(g),
        )
        .unwrap();
        assert!(check_tpp(&t));
    }

    #[test]
    fn failing_cyc3_triple_has_witness() {
        let t = cyc_triple(3, &[0, 1], &[0, 1], &[0, 1]);
        let w = tpp_witness(&t).expect("not TPP");
        let g = t.group();
        assert_eq!(g.op(&g.op(&w.q1, &w.q2), &w.q3), *g.identity());
        assert!(!check_tpp_abelian_oracle(&t).unwrap());
    }

    #[test]
    fn oracle_rejects_nonabelian_and_oversized() {
        let g = Group::parse("sym(3)").unwrap();
        let t = IndexTriple::new(Subset::identity(g.clone()), Subset::identity(g.clone()), Subset::identity(g))
            .unwrap();
        assert!(matches!(check_tpp_abelian_oracle(&t), Err(Error::Unsupported(_))));
        let big = cyc_triple(4, &[0, 1], &[0, 1], &[0, 1]);
        assert!(!check_tpp_abelian_oracle(&big).unwrap());
    }

    #[test]
    fn permutation_validation() {
        let t = cyc_triple(5, &[0, 1], &[0], &[0, 2]);
        assert_eq!(permute_triple(&t, [0, 1, 2]).unwrap().tensor(), t.tensor());
        assert_eq!(permute_triple(&t, [2, 0, 1]).unwrap().tensor(), Tensor { n: 2, m: 2, p: 1 });
        assert!(permute_triple(&t, [0, 0, 1]).is_err());
    }

    #[test]
    fn duplicated_member_breaks_stpp() {
        let t = cyc_triple(5, &[0, 1], &[0], &[0]);
        assert!(check_tpp(&t));
        let single = TripleFamily::new(vec![t.clone()]).unwrap();
        assert!(check_stpp(&single));
        let doubled = TripleFamily::new(vec![t.clone(), t]).unwrap();
        assert!(matches!(stpp_violation(&doubled), Some(StppViolation::Cross { .. })));
    }

    #[test]
    fn triple_requires_nonempty_same_group() {
        let a = Group::parse("cyc(3)").unwrap();
        let b = Group::parse("cyc(4)").unwrap();
        assert!(IndexTriple::new(Subset::identity(a.clone()), Subset::identity(a.clone()), Subset::identity(b)).is_err());
        let empty = Subset::new(a.clone(), vec![]).unwrap();
        assert!(IndexTriple::new(empty, Subset::identity(a.clone()), Subset::identity(a)).is_err());
    }

    #[test]
    fn tensor_arithmetic() {
        let t = Tensor::new(2, 3, 4).unwrap();
        assert_eq!(t.size(), 24);
        assert!((t.mean_size().powi(3) - 24.0).abs() < 1e-9);
        assert_eq!(t.pointwise(&Tensor::square(2)), Tensor { n: 4, m: 6, p: 8 });
        assert!(Tensor::new(0, 1, 1).is_err());
        assert_eq!(t.to_string(), "⟨2,3,4⟩");
    }
}

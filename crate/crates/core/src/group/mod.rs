//! Finite groups used by the framework: cyclic groups, symmetric groups,
//! direct products, wreath products `H wr Sym_n` and the triangle-labelled
//! symmetric groups `Sym(Δ_n)`.
//!
//! Every element of every family is stored as one flat word of `u32`s:
//!
//! * cyclic: `[r]` with `r < n`
//! * direct product: the concatenation of the component words
//! * symmetric: the image array of the permutation
//! * wreath: the `n` base words followed by the image array of the top permutation
//!
//! Comparing these words lexicographically is the same as comparing the
//! structured forms lexicographically, so `enumerate` and every ordered set
//! operation in the crate are deterministic.

mod parse;
pub mod subset;
pub mod perm;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rand::Rng;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

pub use parse::parse_spec;

/// Default cap on the number of elements `enumerate` may materialize.
pub const DEFAULT_ENUMERATION_CAP: u64 = 1_000_000;

/// Largest permutation degree accepted for symmetric factors.
pub const MAX_PERMUTATION_DEGREE: u32 = 1 << 16;

/// Algebraic description of a finite group.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GroupSpec {
    Cyclic(u32),
    DirectProduct(Vec<GroupSpec>),
    Symmetric(u32),
    /// `base^n ⋊ Sym_n`, the top group permuting coordinates.
    Wreath(Box<GroupSpec>, u32),
    /// `Sym(Δ_n)`: the symmetric group on the `n(n+1)/2` points of the triangle
    /// set, labelled in the order produced by [`crate::tpp::triangle_set`].
    TriangleSymmetric(u32),
}

impl GroupSpec {
    pub fn parse(text: &str) -> Result<GroupSpec> {
        parse_spec(text)
    }

    /// `Cyc_n^{×k}`.
    pub fn cyclic_power(n: u32, k: usize) -> GroupSpec {
        GroupSpec::power(GroupSpec::Cyclic(n), k)
    }

    pub fn power(base: GroupSpec, k: usize) -> GroupSpec {
        GroupSpec::DirectProduct(vec![base; k]).normalized()
    }

    pub fn wreath(base: GroupSpec, n: u32) -> GroupSpec {
        GroupSpec::Wreath(Box::new(base), n)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            GroupSpec::Cyclic(0) => Err(Error::InvalidSpec("cyc(0)".into())),
            GroupSpec::Symmetric(0) => Err(Error::InvalidSpec("sym(0)".into())),
            GroupSpec::TriangleSymmetric(0) => Err(Error::InvalidSpec("tri(0)".into())),
            GroupSpec::Wreath(_, 0) => Err(Error::InvalidSpec("wreath with sym(0)".into())),
            GroupSpec::DirectProduct(parts) if parts.is_empty() => {
                Err(Error::InvalidSpec("empty direct product".into()))
            }
            GroupSpec::Symmetric(n) | GroupSpec::Wreath(_, n) if *n > MAX_PERMUTATION_DEGREE => {
                Err(Error::InvalidSpec(format!("permutation degree {n} too large")))
            }
            GroupSpec::TriangleSymmetric(n) if triangle_degree(*n) > MAX_PERMUTATION_DEGREE as u64 => {
                Err(Error::InvalidSpec(format!("tri({n}) too large")))
            }
            GroupSpec::DirectProduct(parts) => parts.iter().try_for_each(GroupSpec::validate),
            GroupSpec::Wreath(base, _) => base.validate(),
            _ => Ok(()),
        }
    }

    /// Flattens nested direct products and unwraps single-factor products.
    pub fn normalized(self) -> GroupSpec {
        match self {
            GroupSpec::DirectProduct(parts) => {
                let mut flat = Vec::with_capacity(parts.len());
                for p in parts {
                    match p.normalized() {
                        GroupSpec::DirectProduct(inner) => flat.extend(inner),
                        other => flat.push(other),
                    }
                }
                if flat.len() == 1 {
                    flat.pop().unwrap()
                } else {
                    GroupSpec::DirectProduct(flat)
                }
            }
            GroupSpec::Wreath(base, n) => GroupSpec::Wreath(Box::new(base.normalized()), n),
            other => other,
        }
    }

    pub fn order(&self) -> BigUint {
        match self {
            GroupSpec::Cyclic(n) => BigUint::from(*n),
            GroupSpec::DirectProduct(parts) => parts.iter().map(GroupSpec::order).product(),
            GroupSpec::Symmetric(n) => factorial(*n as u64),
            GroupSpec::TriangleSymmetric(n) => factorial(triangle_degree(*n)),
            GroupSpec::Wreath(base, n) => base.order().pow(*n) * factorial(*n as u64),
        }
    }

    pub fn is_abelian(&self) -> bool {
        match self {
            GroupSpec::Cyclic(_) => true,
            GroupSpec::DirectProduct(parts) => parts.iter().all(GroupSpec::is_abelian),
            GroupSpec::Symmetric(n) => *n <= 2,
            GroupSpec::TriangleSymmetric(n) => *n == 1,
            GroupSpec::Wreath(base, n) => {
                (*n == 1 && base.is_abelian()) || (*n == 2 && base.order().is_one())
            }
        }
    }

    /// Human-readable family name.
    pub fn family(&self) -> &'static str {
        match self {
            GroupSpec::Cyclic(_) => "cyclic",
            GroupSpec::DirectProduct(_) => "direct product",
            GroupSpec::Symmetric(_) => "symmetric",
            GroupSpec::Wreath(..) => "wreath product",
            GroupSpec::TriangleSymmetric(_) => "triangle symmetric",
        }
    }

    fn fmt_atom(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Cyclic(_) | GroupSpec::Symmetric(_) | GroupSpec::TriangleSymmetric(_) => {
                write!(f, "{self}")
            }
            _ => write!(f, "({self})"),
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Cyclic(n) => write!(f, "cyc({n})"),
            GroupSpec::Symmetric(n) => write!(f, "sym({n})"),
            GroupSpec::TriangleSymmetric(n) => write!(f, "tri({n})"),
            GroupSpec::DirectProduct(parts) => {
                let mut i = 0;
                let mut first = true;
                while i < parts.len() {
                    let mut run = 1;
                    while i + run < parts.len() && parts[i + run] == parts[i] {
                        run += 1;
                    }
                    if !first {
                        write!(f, " x ")?;
                    }
                    first = false;
                    if run > 1 {
                        parts[i].fmt_atom(f)?;
                        write!(f, "^{run}")?;
                    } else if matches!(parts[i], GroupSpec::DirectProduct(_)) {
                        parts[i].fmt_atom(f)?;
                    } else {
                        write!(f, "{}", parts[i])?;
                    }
                    i += run;
                }
                Ok(())
            }
            GroupSpec::Wreath(base, n) => {
                match base.as_ref() {
                    GroupSpec::DirectProduct(parts)
                        if parts.iter().all(|p| p == &parts[0]) && parts[0].is_atomic() =>
                    {
                        write!(f, "{base}")?
                    }
                    other => other.fmt_atom(f)?,
                }
                write!(f, " wr sym({n})")
            }
        }
    }
}

impl GroupSpec {
    fn is_atomic(&self) -> bool {
        matches!(
            self,
            GroupSpec::Cyclic(_) | GroupSpec::Symmetric(_) | GroupSpec::TriangleSymmetric(_)
        )
    }
}

impl std::str::FromStr for GroupSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_spec(s)
    }
}

impl Serialize for GroupSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for GroupSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_spec(&s).map_err(serde::de::Error::custom)
    }
}

pub fn triangle_degree(n: u32) -> u64 {
    let n = n as u64;
    n * (n + 1) / 2
}

pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// A group element in canonical flat form. See the module docs for the layout.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element(SmallVec<[u32; 10]>);

impl Element {
    pub fn from_slice(words: &[u32]) -> Element {
        Element(SmallVec::from_slice(words))
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }
}

#[derive(Debug, Clone)]
struct Part {
    offset: usize,
    width: usize,
    layout: Layout,
}

#[derive(Debug, Clone)]
enum Layout {
    Cyclic(u32),
    Product(Vec<Part>),
    Symmetric(usize),
    Wreath { base: Box<Layout>, base_width: usize, copies: usize },
}

impl Layout {
    fn compile(spec: &GroupSpec) -> Layout {
        match spec {
            GroupSpec::Cyclic(n) => Layout::Cyclic(*n),
            GroupSpec::Symmetric(n) => Layout::Symmetric(*n as usize),
            GroupSpec::TriangleSymmetric(n) => Layout::Symmetric(triangle_degree(*n) as usize),
            GroupSpec::DirectProduct(parts) => {
                let mut offset = 0;
                let parts = parts
                    .iter()
                    .map(|p| {
                        let layout = Layout::compile(p);
                        let width = layout.width();
                        let part = Part { offset, width, layout };
                        offset += width;
                        part
                    })
                    .collect();
                Layout::Product(parts)
            }
            GroupSpec::Wreath(base, n) => {
                let base = Layout::compile(base);
                let base_width = base.width();
                Layout::Wreath { base: Box::new(base), base_width, copies: *n as usize }
            }
        }
    }

    fn width(&self) -> usize {
        match self {
            Layout::Cyclic(_) => 1,
            Layout::Symmetric(n) => *n,
            Layout::Product(parts) => parts.iter().map(|p| p.width).sum(),
            Layout::Wreath { base_width, copies, .. } => base_width * copies + copies,
        }
    }

    fn identity_into(&self, out: &mut [u32]) {
        match self {
            Layout::Cyclic(_) => out[0] = 0,
            Layout::Symmetric(_) => {
                for (i, o) in out.iter_mut().enumerate() {
                    *o = i as u32;
                }
            }
            Layout::Product(parts) => {
                for p in parts {
                    p.layout.identity_into(&mut out[p.offset..p.offset + p.width]);
                }
            }
            Layout::Wreath { base, base_width, copies } => {
                for i in 0..*copies {
                    base.identity_into(&mut out[i * base_width..(i + 1) * base_width]);
                }
                let top = base_width * copies;
                for (i, o) in out[top..].iter_mut().enumerate() {
                    *o = i as u32;
                }
            }
        }
    }

    fn contains(&self, w: &[u32]) -> bool {
        if w.len() != self.width() {
            return false;
        }
        match self {
            Layout::Cyclic(n) => w[0] < *n,
            Layout::Symmetric(_) => perm::is_permutation(w),
            Layout::Product(parts) => {
                parts.iter().all(|p| p.layout.contains(&w[p.offset..p.offset + p.width]))
            }
            Layout::Wreath { base, base_width, copies } => {
                let top = base_width * copies;
                (0..*copies).all(|i| base.contains(&w[i * base_width..(i + 1) * base_width]))
                    && perm::is_permutation(&w[top..])
            }
        }
    }

    fn mul_into(&self, a: &[u32], b: &[u32], out: &mut [u32]) {
        match self {
            Layout::Cyclic(n) => {
                out[0] = ((a[0] as u64 + b[0] as u64) % *n as u64) as u32;
            }
            Layout::Symmetric(_) => perm::compose_into(a, b, out),
            Layout::Product(parts) => {
                for p in parts {
                    let r = p.offset..p.offset + p.width;
                    p.layout.mul_into(&a[r.clone()], &b[r.clone()], &mut out[r]);
                }
            }
            Layout::Wreath { base, base_width, copies } => {
                // (h, μ)(g, ν) = (h · μ(g), μν) with μ(g)_{μ(j)} = g_j.
                let bw = *base_width;
                let top = bw * copies;
                let mu = &a[top..];
                for j in 0..*copies {
                    let i = mu[j] as usize;
                    base.mul_into(
                        &a[i * bw..(i + 1) * bw],
                        &b[j * bw..(j + 1) * bw],
                        &mut out[i * bw..(i + 1) * bw],
                    );
                }
                perm::compose_into(mu, &b[top..], &mut out[top..]);
            }
        }
    }

    fn inv_into(&self, a: &[u32], out: &mut [u32]) {
        match self {
            Layout::Cyclic(n) => out[0] = (*n - a[0]) % *n,
            Layout::Symmetric(_) => perm::invert_into(a, out),
            Layout::Product(parts) => {
                for p in parts {
                    let r = p.offset..p.offset + p.width;
                    p.layout.inv_into(&a[r.clone()], &mut out[r]);
                }
            }
            Layout::Wreath { base, base_width, copies } => {
                // (h, μ)⁻¹ = ((h⁻¹)^μ, μ⁻¹) where (x^μ)_i = x_{μ(i)}.
                let bw = *base_width;
                let top = bw * copies;
                let mu = &a[top..];
                for i in 0..*copies {
                    let src = mu[i] as usize;
                    base.inv_into(&a[src * bw..(src + 1) * bw], &mut out[i * bw..(i + 1) * bw]);
                }
                perm::invert_into(mu, &mut out[top..]);
            }
        }
    }

    fn enumerate(&self) -> Vec<Vec<u32>> {
        match self {
            Layout::Cyclic(n) => (0..*n).map(|r| vec![r]).collect(),
            Layout::Symmetric(n) => perm::all_permutations(*n),
            Layout::Product(parts) => {
                cartesian(parts.iter().map(|p| p.layout.enumerate()).collect())
            }
            Layout::Wreath { base, copies, .. } => {
                let base_elems = base.enumerate();
                let mut lists = vec![base_elems; *copies];
                lists.push(perm::all_permutations(*copies));
                cartesian(lists)
            }
        }
    }

    fn random_into<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut [u32]) {
        match self {
            Layout::Cyclic(n) => out[0] = rng.gen_range(0..*n),
            Layout::Symmetric(_) => random_perm_into(rng, out),
            Layout::Product(parts) => {
                for p in parts {
                    p.layout.random_into(rng, &mut out[p.offset..p.offset + p.width]);
                }
            }
            Layout::Wreath { base, base_width, copies } => {
                for i in 0..*copies {
                    base.random_into(rng, &mut out[i * base_width..(i + 1) * base_width]);
                }
                random_perm_into(rng, &mut out[base_width * copies..]);
            }
        }
    }

    fn format(&self, w: &[u32], out: &mut String) {
        use std::fmt::Write;
        match self {
            Layout::Cyclic(_) => {
                let _ = write!(out, "c:{}", w[0]);
            }
            Layout::Symmetric(_) => format_perm(w, out),
            Layout::Product(parts) => {
                out.push('(');
                for (k, p) in parts.iter().enumerate() {
                    if k > 0 {
                        out.push(',');
                    }
                    p.layout.format(&w[p.offset..p.offset + p.width], out);
                }
                out.push(')');
            }
            Layout::Wreath { base, base_width, copies } => {
                out.push_str("w:([");
                for i in 0..*copies {
                    if i > 0 {
                        out.push(',');
                    }
                    base.format(&w[i * base_width..(i + 1) * base_width], out);
                }
                out.push_str("],");
                format_perm(&w[base_width * copies..], out);
                out.push(')');
            }
        }
    }

    fn cyclic_moduli(&self, out: &mut Vec<u32>) -> bool {
        match self {
            Layout::Cyclic(n) => {
                out.push(*n);
                true
            }
            Layout::Product(parts) => parts.iter().all(|p| p.layout.cyclic_moduli(out)),
            _ => false,
        }
    }
}

fn format_perm(w: &[u32], out: &mut String) {
    use std::fmt::Write;
    out.push_str("p:[");
    for (i, x) in w.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        let _ = write!(out, "{x}");
    }
    out.push(']');
}

fn random_perm_into<R: Rng + ?Sized>(rng: &mut R, out: &mut [u32]) {
    for (i, o) in out.iter_mut().enumerate() {
        *o = i as u32;
    }
    for i in (1..out.len()).rev() {
        let j = rng.gen_range(0..=i);
        out.swap(i, j);
    }
}

/// Lexicographic cartesian product of word lists, concatenating the words.
fn cartesian(lists: Vec<Vec<Vec<u32>>>) -> Vec<Vec<u32>> {
    let mut acc: Vec<Vec<u32>> = vec![Vec::new()];
    for list in lists {
        let mut next = Vec::with_capacity(acc.len() * list.len());
        for prefix in &acc {
            for w in &list {
                let mut v = prefix.clone();
                v.extend_from_slice(w);
                next.push(v);
            }
        }
        acc = next;
    }
    acc
}

/// Arithmetic handle for a finite group. Immutable after construction.
#[derive(Debug, Clone)]
pub struct Group {
    spec: GroupSpec,
    layout: Layout,
    width: usize,
    order: BigUint,
    identity: Element,
}

impl PartialEq for Group {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec
    }
}

impl Eq for Group {}

/// Builds the arithmetic handle for `spec`.
pub fn build_group(spec: GroupSpec) -> Result<Arc<Group>> {
    Group::new(spec).map(Arc::new)
}

impl Group {
    pub fn new(spec: GroupSpec) -> Result<Group> {
        spec.validate()?;
        let spec = spec.normalized();
        let layout = Layout::compile(&spec);
        let width = layout.width();
        let mut id = vec![0; width];
        layout.identity_into(&mut id);
        Ok(Group {
            order: spec.order(),
            spec,
            layout,
            width,
            identity: Element::from_slice(&id),
        })
    }

    pub fn parse(text: &str) -> Result<Arc<Group>> {
        build_group(parse_spec(text)?)
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn order(&self) -> &BigUint {
        &self.order
    }

    pub fn order_u64(&self) -> Option<u64> {
        self.order.to_u64()
    }

    /// Order as `f64`; exact up to 2^53 and correctly rounded beyond.
    pub fn order_f64(&self) -> f64 {
        self.order.to_f64().unwrap_or(f64::INFINITY)
    }

    pub fn identity(&self) -> &Element {
        &self.identity
    }

    pub fn is_abelian(&self) -> bool {
        self.spec.is_abelian()
    }

    pub fn contains(&self, e: &Element) -> bool {
        self.layout.contains(e.as_slice())
    }

    fn check(&self, e: &Element) -> Result<()> {
        if self.contains(e) {
            Ok(())
        } else {
            Err(Error::Domain(format!("{:?} is not an element of {}", e.as_slice(), self.spec)))
        }
    }

    pub fn mul(&self, a: &Element, b: &Element) -> Result<Element> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.op(a, b))
    }

    pub fn inv(&self, a: &Element) -> Result<Element> {
        self.check(a)?;
        Ok(self.op_inv(a))
    }

    /// Group product without membership checks; both operands must belong to `self`.
    pub fn op(&self, a: &Element, b: &Element) -> Element {
        let mut out = SmallVec::from_elem(0, self.width);
        self.layout.mul_into(a.as_slice(), b.as_slice(), &mut out);
        Element(out)
    }

    /// Inverse without membership checks.
    pub fn op_inv(&self, a: &Element) -> Element {
        let mut out = SmallVec::from_elem(0, self.width);
        self.layout.inv_into(a.as_slice(), &mut out);
        Element(out)
    }

    /// `a b⁻¹`, unchecked.
    pub fn op_div(&self, a: &Element, b: &Element) -> Element {
        self.op(a, &self.op_inv(b))
    }

    /// All elements in lexicographic order of their canonical form.
    pub fn enumerate(&self, cap: u64) -> Result<Vec<Element>> {
        match self.order_u64() {
            Some(n) if n <= cap => {}
            _ => return Err(Error::TooLarge { order: self.order.to_string(), cap }),
        }
        Ok(self.layout.enumerate().into_iter().map(|w| Element::from_slice(&w)).collect())
    }

    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Element {
        let mut out = SmallVec::from_elem(0, self.width);
        self.layout.random_into(rng, &mut out);
        Element(out)
    }

    /// Canonical text form: `c:3`, `p:[2,0,1]`, `(c:1,c:0)`, `w:([c:1,c:2],p:[1,0])`.
    pub fn format_element(&self, e: &Element) -> String {
        let mut s = String::new();
        self.layout.format(e.as_slice(), &mut s);
        s
    }

    pub fn parse_element(&self, text: &str) -> Result<Element> {
        let mut p = parse::ElementParser::new(text);
        let mut words = Vec::with_capacity(self.width);
        p.element(&self.layout_view(), &mut words)?;
        p.finish()?;
        let e = Element::from_slice(&words);
        if !self.contains(&e) {
            return Err(Error::Domain(format!("'{text}' is not an element of {}", self.spec)));
        }
        Ok(e)
    }

    fn layout_view(&self) -> parse::Shape {
        shape_of(&self.layout)
    }

    /// Moduli `[n_1, …, n_k]` when the group is a direct product of cyclic groups.
    pub fn cyclic_moduli(&self) -> Option<Vec<u32>> {
        let mut out = Vec::new();
        self.layout.cyclic_moduli(&mut out).then_some(out)
    }

    /// Element of a cyclic-product group from its residues.
    pub fn cyclic_element(&self, residues: &[u32]) -> Result<Element> {
        let e = Element::from_slice(residues);
        self.check(&e)?;
        Ok(e)
    }

    /// Element of a symmetric (or triangle symmetric) group from its image array.
    pub fn permutation(&self, images: &[u32]) -> Result<Element> {
        match self.layout {
            Layout::Symmetric(_) => {
                let e = Element::from_slice(images);
                self.check(&e)?;
                Ok(e)
            }
            _ => Err(Error::Domain(format!("{} is not a symmetric group", self.spec))),
        }
    }

    /// Wreath element from its base components and top permutation.
    pub fn wreath_element(&self, base: &[Element], top: &[u32]) -> Result<Element> {
        match &self.layout {
            Layout::Wreath { copies, .. } if base.len() == *copies => {
                let mut w: Vec<u32> = base.iter().flat_map(|b| b.as_slice().iter().copied()).collect();
                w.extend_from_slice(top);
                let e = Element::from_slice(&w);
                self.check(&e)?;
                Ok(e)
            }
            _ => Err(Error::Domain(format!("{} is not a wreath product of that arity", self.spec))),
        }
    }

    /// Splits a wreath element into base words and top permutation.
    pub fn wreath_parts(&self, e: &Element) -> Option<(Vec<Element>, Vec<u32>)> {
        match &self.layout {
            Layout::Wreath { base_width, copies, .. } => {
                let w = e.as_slice();
                let base = (0..*copies)
                    .map(|i| Element::from_slice(&w[i * base_width..(i + 1) * base_width]))
                    .collect();
                Some((base, w[base_width * copies..].to_vec()))
            }
            _ => None,
        }
    }

    /// Concatenates component elements into an element of this direct product.
    pub fn product_element(&self, parts: &[&Element]) -> Result<Element> {
        let w: Vec<u32> = parts.iter().flat_map(|p| p.as_slice().iter().copied()).collect();
        let e = Element::from_slice(&w);
        self.check(&e)?;
        Ok(e)
    }
}

fn shape_of(layout: &Layout) -> parse::Shape {
    match layout {
        Layout::Cyclic(_) => parse::Shape::Cyclic,
        Layout::Symmetric(_) => parse::Shape::Perm,
        Layout::Product(parts) => parse::Shape::Tuple(parts.iter().map(|p| shape_of(&p.layout)).collect()),
        Layout::Wreath { base, .. } => parse::Shape::Wreath(Box::new(shape_of(base))),
    }
}

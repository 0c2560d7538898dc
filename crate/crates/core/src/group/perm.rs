//! Permutations as image arrays on `0..n`.
//!
//! Permutations act on the left: the product `a * b` maps `x` to `a(b(x))`.

/// `out[x] = a[b[x]]`.
pub fn compose_into(a: &[u32], b: &[u32], out: &mut [u32]) {
    debug_assert_eq!(a.len(), b.len());
    for (o, &bx) in out.iter_mut().zip(b) {
        *o = a[bx as usize];
    }
}

pub fn invert_into(a: &[u32], out: &mut [u32]) {
    for (i, &ax) in a.iter().enumerate() {
        out[ax as usize] = i as u32;
    }
}

pub fn compose(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = vec![0; a.len()];
    compose_into(a, b, &mut out);
    out
}

pub fn invert(a: &[u32]) -> Vec<u32> {
    let mut out = vec![0; a.len()];
    invert_into(a, &mut out);
    out
}

pub fn identity(n: usize) -> Vec<u32> {
    (0..n as u32).collect()
}

pub fn is_permutation(a: &[u32]) -> bool {
    let mut seen = vec![false; a.len()];
    for &x in a {
        let x = x as usize;
        if x >= a.len() || seen[x] {
            return false;
        }
        seen[x] = true;
    }
    true
}

/// Builds an image array from 1-based cycle notation, e.g. `&[&[1, 3, 2]]` for (132).
pub fn from_cycles(n: usize, cycles: &[&[u32]]) -> Vec<u32> {
    let mut p = identity(n);
    for cyc in cycles {
        for (i, &x) in cyc.iter().enumerate() {
            let next = cyc[(i + 1) % cyc.len()];
            p[(x - 1) as usize] = next - 1;
        }
    }
    p
}

/// Advances `a` to its lexicographic successor; returns false at the last permutation.
pub fn next_permutation(a: &mut [u32]) -> bool {
    if a.len() < 2 {
        return false;
    }
    let mut i = a.len() - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = a.len() - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

/// All permutations of `0..n` in lexicographic order.
pub fn all_permutations(n: usize) -> Vec<Vec<u32>> {
    let mut cur = identity(n);
    let mut out = vec![cur.clone()];
    while next_permutation(&mut cur) {
        out.push(cur.clone());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycles_and_composition() {
        let t12 = from_cycles(3, &[&[1, 2]]);
        let t13 = from_cycles(3, &[&[1, 3]]);
        assert_eq!(t12, vec![1, 0, 2]);
        // (12)(13) = (132) with right-then-left composition
        assert_eq!(compose(&t12, &t13), from_cycles(3, &[&[1, 3, 2]]));
    }

    #[test]
    fn lexicographic_enumeration() {
        let all = all_permutations(4);
        assert_eq!(all.len(), 24);
        assert_eq!(all[0], vec![0, 1, 2, 3]);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert!(all.iter().all(|p| is_permutation(p)));
    }

    #[test]
    fn inverse_roundtrip() {
        let p = from_cycles(5, &[&[1, 4, 2], &[3, 5]]);
        assert_eq!(compose(&p, &invert(&p)), identity(5));
    }
}

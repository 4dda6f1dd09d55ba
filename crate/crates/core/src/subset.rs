//! Variable sets as bitmasks, plus lexicographic rank/unrank of k-subsets.

use crate::Var;

/// A set of variables, bit `i` set when variable `i` is a member.
pub type VarSet = u32;

pub fn singleton(v: Var) -> VarSet {
    1 << v
}

pub fn full(n: usize) -> VarSet {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

pub fn contains(set: VarSet, v: Var) -> bool {
    set >> v & 1 == 1
}

pub fn len(set: VarSet) -> usize {
    set.count_ones() as usize
}

/// Members in ascending order.
pub fn members(set: VarSet) -> impl Iterator<Item = Var> {
    let mut rest = set;
    std::iter::from_fn(move || {
        if rest == 0 {
            return None;
        }
        let v = rest.trailing_zeros() as Var;
        rest &= rest - 1;
        Some(v)
    })
}

pub fn from_vars<I: IntoIterator<Item = Var>>(vars: I) -> VarSet {
    vars.into_iter().fold(0, |acc, v| acc | singleton(v))
}

/// Binomial coefficient; saturates at `u64::MAX`.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * u128::from(n - i) / u128::from(i + 1);
        if acc > u128::from(u64::MAX) {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Lexicographic rank of a k-combination of `0..m` given as strictly
/// increasing positions.
pub fn rank_combination(positions: &[usize], m: usize) -> u64 {
    let k = positions.len();
    let mut rank = 0u64;
    let mut prev = 0usize;
    for (i, &p) in positions.iter().enumerate() {
        for skipped in prev..p {
            rank += binomial((m - skipped - 1) as u64, (k - i - 1) as u64);
        }
        prev = p + 1;
    }
    rank
}

/// Inverse of [`rank_combination`].
pub fn unrank_combination(mut rank: u64, m: usize, k: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(k);
    let mut next = 0usize;
    for i in 0..k {
        let mut p = next;
        loop {
            let block = binomial((m - p - 1) as u64, (k - i - 1) as u64);
            if rank < block {
                break;
            }
            rank -= block;
            p += 1;
        }
        out.push(p);
        next = p + 1;
    }
    out
}

/// The `rank`-th `k`-subset of `set`, in lexicographic order over the
/// ascending member list.
pub fn unrank_subset(set: VarSet, k: usize, rank: u64) -> VarSet {
    let elems: Vec<Var> = members(set).collect();
    from_vars(
        unrank_combination(rank, elems.len(), k)
            .into_iter()
            .map(|p| elems[p]),
    )
}

/// All `k`-subsets of `set` in lexicographic order.
pub fn k_subsets(set: VarSet, k: usize) -> Vec<VarSet> {
    let elems: Vec<Var> = members(set).collect();
    let m = elems.len();
    if k > m {
        return Vec::new();
    }
    let mut out = Vec::with_capacity(binomial(m as u64, k as u64) as usize);
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(from_vars(idx.iter().map(|&p| elems[p])));
        // rightmost position that can still move
        let mut i = k;
        while i > 0 && idx[i - 1] == i - 1 + m - k {
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

/// 1-based, comma separated, in braces.
pub fn display(set: VarSet) -> String {
    let inner: Vec<String> = members(set).map(|v| format!("x{}", v + 1)).collect();
    format!("{{{}}}", inner.join(","))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(12, 7), 792);
        assert_eq!(binomial(3, 4), 0);
        assert_eq!(binomial(0, 0), 1);
    }

    #[test]
    fn k_subsets_lexicographic() {
        let s = from_vars([1, 3, 4, 6]);
        let subs = k_subsets(s, 2);
        let shown: Vec<String> = subs.iter().map(|&x| display(x)).collect();
        assert_eq!(
            shown,
            ["{x2,x4}", "{x2,x5}", "{x2,x7}", "{x4,x5}", "{x4,x7}", "{x5,x7}"]
        );
        assert_eq!(k_subsets(s, 0), vec![0]);
        assert_eq!(k_subsets(s, 4), vec![s]);
        assert!(k_subsets(s, 5).is_empty());
    }

    #[test]
    fn rank_matches_enumeration_order() {
        for m in 0..9usize {
            let set = full(m);
            for k in 0..=m {
                for (r, sub) in k_subsets(set, k).into_iter().enumerate() {
                    assert_eq!(unrank_subset(set, k, r as u64), sub);
                    let pos: Vec<usize> = members(sub).collect();
                    assert_eq!(rank_combination(&pos, m), r as u64);
                }
            }
        }
    }
}

//! Lexicographic permutation enumeration with incremental sign tracking.

/// `n!`, or `None` on overflow.
pub fn factorial(n: usize) -> Option<u128> {
    (1..=n as u128).try_fold(1u128, |acc, k| acc.checked_mul(k))
}

/// Calls `visit(perm, sign)` for every permutation of `0..n` in lexicographic
/// order. The sign is updated as each position is fixed: choosing the `c`-th
/// smallest unused index adds `c` inversions.
pub fn for_each_permutation<F: FnMut(&[usize], i32)>(n: usize, mut visit: F) {
    let mut perm = Vec::with_capacity(n);
    let mut used = vec![false; n];
    walk(n, &mut perm, &mut used, 1, &mut visit);
}

fn walk<F: FnMut(&[usize], i32)>(
    n: usize,
    perm: &mut Vec<usize>,
    used: &mut [bool],
    sign: i32,
    visit: &mut F,
) {
    if perm.len() == n {
        visit(perm, sign);
        return;
    }
    let mut smaller_unused = 0;
    for i in 0..n {
        if used[i] {
            continue;
        }
        let s = if smaller_unused % 2 == 0 { sign } else { -sign };
        used[i] = true;
        perm.push(i);
        walk(n, perm, used, s, visit);
        perm.pop();
        used[i] = false;
        smaller_unused += 1;
    }
}

/// Sign of a permutation by counting inversions directly.
pub fn sign_by_inversions(perm: &[usize]) -> i32 {
    let mut inversions = 0;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumerates_all_in_lex_order() {
        let mut seen = Vec::new();
        for_each_permutation(4, |p, _| seen.push(p.to_vec()));
        assert_eq!(seen.len(), 24);
        let mut sorted = seen.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(seen, sorted);
    }

    #[test]
    fn incremental_sign_matches_inversion_count() {
        for n in 0..=6 {
            let mut total = 0;
            for_each_permutation(n, |p, s| {
                assert_eq!(s, sign_by_inversions(p), "{p:?}");
                total += s;
            });
            if n >= 2 {
                assert_eq!(total, 0);
            }
        }
    }

    #[test]
    fn factorials() {
        assert_eq!(factorial(0), Some(1));
        assert_eq!(factorial(8), Some(40320));
        assert_eq!(factorial(17), Some(355_687_428_096_000));
        assert_eq!(factorial(40), None);
    }
}

//! Brute-force canonical forms for small square label matrices.
//!
//! The canonical form is the lexicographically smallest row-major matrix
//! `M'[i][j] = M[π(i)][π(j)]` over all node permutations π. Exact and
//! deterministic, and cheap enough for the ≤ 8 node structures handled here.

/// Calls `f` with every permutation of `0..n`, starting with the identity,
/// in lexicographic order.
pub(crate) fn for_each_permutation(n: usize, mut f: impl FnMut(&[usize])) {
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        f(&perm);
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| perm[i - 1] < perm[i]) else {
            return;
        };
        let j = (i..n).rev().find(|&j| perm[j] > perm[i - 1]).unwrap();
        perm.swap(i - 1, j);
        perm[i..].reverse();
    }
}

pub(crate) fn permuted<T: Copy>(cells: &[T], n: usize, perm: &[usize]) -> Vec<T> {
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            out.push(cells[perm[i] * n + perm[j]]);
        }
    }
    out
}

/// Compares `cells` permuted by `perm` with `best` without materializing it.
fn permuted_cmp<T: Ord + Copy>(cells: &[T], n: usize, perm: &[usize], best: &[T]) -> std::cmp::Ordering {
    for i in 0..n {
        for j in 0..n {
            let ord = cells[perm[i] * n + perm[j]].cmp(&best[i * n + j]);
            if ord.is_ne() {
                return ord;
            }
        }
    }
    std::cmp::Ordering::Equal
}

/// The canonical matrix together with the permutation that produces it.
pub(crate) fn canonical_form<T: Ord + Copy>(cells: &[T], n: usize) -> (Vec<T>, Vec<usize>) {
    let mut best = cells.to_vec();
    let mut best_perm: Vec<usize> = (0..n).collect();
    for_each_permutation(n, |perm| {
        if permuted_cmp(cells, n, perm, &best).is_lt() {
            best = permuted(cells, n, perm);
            best_perm = perm.to_vec();
        }
    });
    (best, best_perm)
}

/// All permutations π with `M[π(i)][π(j)] = M[i][j]`.
pub(crate) fn automorphisms<T: Ord + Copy>(cells: &[T], n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for_each_permutation(n, |perm| {
        if permuted_cmp(cells, n, perm, cells).is_eq() {
            out.push(perm.to_vec());
        }
    });
    out
}

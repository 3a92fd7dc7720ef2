//! Exact minimum-cost perfect matching on a complete bipartite graph,
//! by shortest augmenting paths over reduced costs (the O(n^3)
//! Jonker-Volgenant scheme with dual potentials). Exactness on integer
//! costs is load-bearing for the cycle-cover bounds, so no heuristic
//! shortcuts are taken.

use alloc::vec;
use alloc::vec::Vec;

/// Sentinel cost for forbidden cells. Far below `i64::MAX` so reduced
/// costs never overflow even after potential updates.
pub(crate) const FORBIDDEN: i64 = i64::MAX / 8;

/// Returns, for each row, the column it is matched to in a minimum-cost
/// perfect matching. Costs at or above [`FORBIDDEN`] are treated as
/// forbidden; the caller must guarantee a perfect matching over the
/// allowed cells exists.
pub(crate) fn solve_assignment(n: usize, cost: impl Fn(usize, usize) -> i64) -> Vec<usize> {
    assert!(n >= 1);
    let inf = i64::MAX / 2;
    // 1-based with column 0 as the virtual root of the alternating tree
    let mut u = vec![0i64; n + 1];
    let mut v = vec![0i64; n + 1];
    let mut matched = vec![0usize; n + 1]; // matched[j] = row occupying column j
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        matched[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![inf; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = matched[j0];
            let mut shift = inf;
            let mut j1 = 0usize;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < shift {
                    shift = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[matched[j]] += shift;
                    v[j] -= shift;
                } else {
                    minv[j] -= shift;
                }
            }
            j0 = j1;
            if matched[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            matched[j0] = matched[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut result = vec![usize::MAX; n];
    for j in 1..=n {
        result[matched[j] - 1] = j - 1;
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;

    fn total(costs: &[&[i64]], assign: &[usize]) -> i64 {
        assign.iter().enumerate().map(|(i, &j)| costs[i][j]).sum()
    }

    #[test]
    fn three_by_three() {
        let costs: &[&[i64]] = &[&[250, 400, 350], &[400, 600, 350], &[200, 400, 250]];
        let assign = solve_assignment(3, |i, j| costs[i][j]);
        assert_eq!(total(costs, &assign), 950);
    }

    #[test]
    fn forbidden_diagonal_forces_derangement() {
        // cheap diagonal would win if it were allowed
        let assign = solve_assignment(3, |i, j| if i == j { FORBIDDEN } else { 10 });
        for (i, &j) in assign.iter().enumerate() {
            assert_ne!(i, j);
        }
    }

    #[test]
    fn matches_brute_force_on_random_matrices() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let n = rng.gen_range(1..=6);
            let costs: Vec<Vec<i64>> =
                (0..n).map(|_| (0..n).map(|_| rng.gen_range(0..100)).collect()).collect();
            let assign = solve_assignment(n, |i, j| costs[i][j]);
            let got: i64 = assign.iter().enumerate().map(|(i, &j)| costs[i][j]).sum();

            let mut best = i64::MAX;
            let mut perm: Vec<usize> = (0..n).collect();
            let mut c = vec![0usize; n];
            let eval = |p: &[usize]| -> i64 { p.iter().enumerate().map(|(i, &j)| costs[i][j]).sum() };
            best = best.min(eval(&perm));
            let mut i = 0;
            while i < n {
                if c[i] < i {
                    if i % 2 == 0 {
                        perm.swap(0, i);
                    } else {
                        perm.swap(c[i], i);
                    }
                    best = best.min(eval(&perm));
                    c[i] += 1;
                    i = 0;
                } else {
                    c[i] = 0;
                    i += 1;
                }
            }
            assert_eq!(got, best);
        }
    }
}

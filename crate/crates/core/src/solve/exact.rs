//! Exact oracles: subset dynamic programming over vertex sets (Held-Karp)
//! for tours and paths, and full permutation enumeration for flowshop
//! instances. Both reject inputs past their size limits instead of
//! grinding forever.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::flowshop::{FlowshopInstance, JobPermutation, Time};
use crate::graph::{delta_matrix, nwfs_to_atsp, HamPath, Kind, Tour, WeightMatrix};

/// Default vertex limit for the subset DP solvers.
pub const DEFAULT_EXACT_LIMIT: usize = 16;

/// Job limit for [`brute_force_nwfs`].
pub const BRUTE_FORCE_LIMIT: usize = 9;

const UNSET: u8 = u8::MAX;

/// Optimal Hamiltonian cycle by subset DP, at the default size limit.
pub fn held_karp_tour(m: &WeightMatrix) -> Result<Tour> {
    held_karp_tour_limited(m, DEFAULT_EXACT_LIMIT)
}

pub fn held_karp_tour_limited(m: &WeightMatrix, limit: usize) -> Result<Tour> {
    let n = m.n();
    if n == 0 {
        return Err(Error::TooSmall { what: "tour instance", size: 0, need: 1 });
    }
    if n > limit {
        return Err(Error::SizeLimit { what: "exact tour solver", size: n, limit });
    }
    if n == 1 {
        return Tour::new(vec![0]);
    }
    // paths start at vertex 0; bit b of a mask stands for vertex b + 1
    let k = n - 1;
    let full: usize = (1 << k) - 1;
    let mut dp = vec![u64::MAX; (full + 1) * k];
    let mut parent = vec![UNSET; (full + 1) * k];
    for b in 0..k {
        dp[(1 << b) * k + b] = m.weight(0, b + 1);
    }
    for mask in 1..=full {
        for last in 0..k {
            if mask & (1 << last) == 0 {
                continue;
            }
            let cur = dp[mask * k + last];
            if cur == u64::MAX {
                continue;
            }
            let mut rest = full & !mask;
            while rest != 0 {
                let next = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let nm = mask | (1 << next);
                let cand = cur
                    .checked_add(m.weight(last + 1, next + 1))
                    .expect("tour cost overflow");
                if cand < dp[nm * k + next] {
                    dp[nm * k + next] = cand;
                    parent[nm * k + next] = last as u8;
                }
            }
        }
    }
    let (mut best, mut best_last) = (u64::MAX, 0usize);
    for last in 0..k {
        let cand = dp[full * k + last]
            .checked_add(m.weight(last + 1, 0))
            .expect("tour cost overflow");
        if cand < best {
            best = cand;
            best_last = last;
        }
    }
    let mut tail = Vec::with_capacity(k);
    let mut mask = full;
    let mut last = best_last;
    loop {
        tail.push(last + 1);
        let p = parent[mask * k + last];
        mask &= !(1 << last);
        if mask == 0 {
            break;
        }
        last = p as usize;
    }
    tail.reverse();
    let mut order = Vec::with_capacity(n);
    order.push(0);
    order.extend(tail);
    Tour::new(order)
}

/// Optimal Hamiltonian path by subset DP, at the default size limit.
///
/// `endpoints` overrides the matrix [`Kind`]: `Some((s, t))` fixes the
/// path to run from `s` to `t`, `None` minimizes over all endpoint pairs.
/// Passing the matrix's own designated endpoints reproduces the
/// kind-respecting behavior; see [`held_karp_path_for_kind`].
pub fn held_karp_path(m: &WeightMatrix, endpoints: Option<(usize, usize)>) -> Result<HamPath> {
    held_karp_path_limited(m, endpoints, DEFAULT_EXACT_LIMIT)
}

/// Optimal path using the endpoints designated by the matrix kind, if any.
pub fn held_karp_path_for_kind(m: &WeightMatrix) -> Result<HamPath> {
    let endpoints = match m.kind() {
        Kind::Atspp { endpoints } => endpoints,
        Kind::Atsp => None,
    };
    held_karp_path(m, endpoints)
}

pub fn held_karp_path_limited(
    m: &WeightMatrix,
    endpoints: Option<(usize, usize)>,
    limit: usize,
) -> Result<HamPath> {
    let n = m.n();
    if n < 2 {
        return Err(Error::TooSmall { what: "path instance", size: n, need: 2 });
    }
    if n > limit {
        return Err(Error::SizeLimit { what: "exact path solver", size: n, limit });
    }
    if let Some((s, t)) = endpoints {
        assert!(s < n && t < n && s != t, "designated endpoints must be distinct vertices");
    }
    let full: usize = (1 << n) - 1;
    let mut dp = vec![u64::MAX; (full + 1) * n];
    let mut parent = vec![UNSET; (full + 1) * n];
    match endpoints {
        Some((s, _)) => dp[(1 << s) * n + s] = 0,
        None => {
            for v in 0..n {
                dp[(1 << v) * n + v] = 0;
            }
        }
    }
    for mask in 1..=full {
        for last in 0..n {
            if mask & (1 << last) == 0 {
                continue;
            }
            let cur = dp[mask * n + last];
            if cur == u64::MAX {
                continue;
            }
            let mut rest = full & !mask;
            while rest != 0 {
                let next = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let nm = mask | (1 << next);
                let cand = cur.checked_add(m.weight(last, next)).expect("path cost overflow");
                if cand < dp[nm * n + next] {
                    dp[nm * n + next] = cand;
                    parent[nm * n + next] = last as u8;
                }
            }
        }
    }
    let mut best = u64::MAX;
    let mut best_end = usize::MAX;
    match endpoints {
        Some((_, t)) => {
            best = dp[full * n + t];
            best_end = t;
        }
        None => {
            for v in 0..n {
                if dp[full * n + v] < best {
                    best = dp[full * n + v];
                    best_end = v;
                }
            }
        }
    }
    assert!(best != u64::MAX, "path DP found no solution");
    let mut order = Vec::with_capacity(n);
    let mut mask = full;
    let mut last = best_end;
    loop {
        order.push(last);
        let p = parent[mask * n + last];
        mask &= !(1 << last);
        if p == UNSET {
            break;
        }
        last = p as usize;
    }
    assert!(mask == 0, "path DP reconstruction incomplete");
    order.reverse();
    HamPath::new(order)
}

/// Exhaustive minimum of the makespan over all `n!` job orders.
pub fn brute_force_nwfs(inst: &FlowshopInstance) -> Result<(JobPermutation, Time)> {
    let n = inst.n();
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::SizeLimit {
            what: "flowshop enumeration",
            size: n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let dm = delta_matrix(inst.jobs());
    let lengths: Vec<Time> = inst.jobs().iter().map(|j| j.length()).collect();
    let evaluate = |p: &[usize]| -> Time {
        let mut total: Time = 0;
        for pair in p.windows(2) {
            total += dm.weight(pair[0], pair[1]);
        }
        total + lengths[*p.last().unwrap()]
    };

    let mut perm: Vec<usize> = (0..n).collect();
    let mut best_perm = perm.clone();
    let mut best = evaluate(&perm);
    // Heap's algorithm
    let mut c = vec![0usize; n];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            let value = evaluate(&perm);
            if value < best {
                best = value;
                best_perm = perm.clone();
            }
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    Ok((JobPermutation::new(best_perm)?, best))
}

/// Optimal makespan certified two ways: permutation enumeration on the
/// instance must agree with the tour DP on the reduced matrix.
pub fn cross_checked_optimum(inst: &FlowshopInstance) -> Result<Time> {
    let (_, by_enumeration) = brute_force_nwfs(inst)?;
    let (m, _) = nwfs_to_atsp(inst);
    let tour = held_karp_tour(&m)?;
    let by_dp = crate::graph::tour_cost(&m, &tour);
    assert_eq!(
        by_enumeration, by_dp,
        "flowshop optimum and reduced-tour optimum disagree"
    );
    Ok(by_enumeration)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flowshop::Job;
    use crate::graph::{path_cost, tour_cost};

    fn matrix(rows: &[&[u64]]) -> WeightMatrix {
        WeightMatrix::from_rows(rows.iter().map(|r| r.to_vec()).collect(), Kind::Atsp).unwrap()
    }

    #[test]
    fn tour_on_unit_triangle() {
        let m = matrix(&[&[0, 1, 1], &[1, 0, 1], &[1, 1, 0]]);
        let t = held_karp_tour(&m).unwrap();
        assert_eq!(tour_cost(&m, &t), 3);
    }

    #[test]
    fn tour_matches_reduced_flowshop() {
        let inst = FlowshopInstance::new(vec![Job::new(vec![3, 2]), Job::new(vec![1, 4])]).unwrap();
        let (m, _) = nwfs_to_atsp(&inst);
        let t = held_karp_tour(&m).unwrap();
        assert_eq!(tour_cost(&m, &t), 7);
    }

    #[test]
    fn rejects_over_limit() {
        let m = WeightMatrix::zero(20, Kind::Atsp);
        assert!(matches!(held_karp_tour(&m), Err(Error::SizeLimit { .. })));
        assert!(held_karp_tour_limited(&m, 20).is_ok());
    }

    #[test]
    fn path_solver_respects_the_matrix_kind() {
        let mut m = matrix(&[&[0, 2, 9], &[9, 0, 1], &[1, 9, 0]]);
        m.set_kind(Kind::Atspp { endpoints: Some((2, 1)) });
        let path = held_karp_path_for_kind(&m).unwrap();
        assert_eq!(path.order(), &[2, 0, 1]);
        m.set_kind(Kind::Atspp { endpoints: None });
        let free = held_karp_path_for_kind(&m).unwrap();
        assert_eq!(path_cost(&m, &free), 2);
    }

    #[test]
    fn path_free_vs_designated() {
        let m = matrix(&[&[0, 2, 9], &[9, 0, 1], &[1, 9, 0]]);
        // all six orders evaluated by hand: 1 -> 2 -> 0 wins at 1 + 1
        let free = held_karp_path(&m, None).unwrap();
        assert_eq!(free.order(), &[1, 2, 0]);
        assert_eq!(path_cost(&m, &free), 2);
        // pinning the endpoints to (2, 1) forces 2 -> 0 -> 1 at 1 + 2
        let fixed = held_karp_path(&m, Some((2, 1))).unwrap();
        assert_eq!(fixed.order(), &[2, 0, 1]);
        assert_eq!(path_cost(&m, &fixed), 3);
    }

    #[test]
    fn brute_force_two_jobs() {
        let inst = FlowshopInstance::new(vec![Job::new(vec![3, 2]), Job::new(vec![1, 4])]).unwrap();
        let (sigma, best) = brute_force_nwfs(&inst).unwrap();
        assert_eq!(best, 7);
        assert_eq!(sigma.order(), &[1, 0]);
    }

    #[test]
    fn brute_force_identical_jobs() {
        let inst = FlowshopInstance::new(vec![Job::new(vec![2, 1]); 4]).unwrap();
        let (_, best) = brute_force_nwfs(&inst).unwrap();
        // (n - 1) * delta(a, a) + length(a)
        assert_eq!(best, 3 * 2 + 3);
    }

    #[test]
    fn brute_force_single_job() {
        let inst = FlowshopInstance::new(vec![Job::new(vec![4, 1, 2])]).unwrap();
        let (sigma, best) = brute_force_nwfs(&inst).unwrap();
        assert_eq!(best, 7);
        assert_eq!(sigma.order(), &[0]);
    }

    #[test]
    fn cross_check_agrees() {
        let inst = FlowshopInstance::new(vec![
            Job::new(vec![3, 2, 1]),
            Job::new(vec![1, 4, 0]),
            Job::new(vec![0, 2, 5]),
        ])
        .unwrap();
        assert!(cross_checked_optimum(&inst).is_ok());
    }
}

//! Solvers: exact oracles for desk-scale instances and the cycle-cover
//! approximation algorithms.

mod approx;
mod assignment;
mod exact;

pub use approx::{
    fgm_atsp, hamiltonian_on_survivors, min_cycle_cover, nwfs_log_m_approx, ApproxRun,
    CoverLevel, CycleCover,
};
pub use exact::{
    brute_force_nwfs, cross_checked_optimum, held_karp_path, held_karp_path_for_kind,
    held_karp_path_limited, held_karp_tour, held_karp_tour_limited, BRUTE_FORCE_LIMIT,
    DEFAULT_EXACT_LIMIT,
};

/// Smallest `k` with `2^k >= x`.
pub(crate) fn ceil_log2(x: usize) -> u32 {
    if x <= 1 {
        0
    } else {
        (x - 1).ilog2() + 1
    }
}

#[cfg(test)]
mod tests {
    use super::ceil_log2;

    #[test]
    fn ceil_log2_values() {
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(2), 1);
        assert_eq!(ceil_log2(3), 2);
        assert_eq!(ceil_log2(4), 2);
        assert_eq!(ceil_log2(5), 3);
        assert_eq!(ceil_log2(64), 6);
        assert_eq!(ceil_log2(65), 7);
    }
}

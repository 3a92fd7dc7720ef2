//! Cross-module identities: the dummy-job reduction preserves optima, the
//! replication and split transformations preserve them exactly, and the
//! full hardness pipeline produces instances whose start gaps mirror the
//! glued graph's distances, with a back-map that recovers exact optima
//! through every stage after normalization.

mod common;

use common::{random_flowshop, random_semimetric};
use nowait_core::embed::{build_hardness_instance, extract_tour};
use nowait_core::flowshop::{delta, makespan};
use nowait_core::graph::{path_cost, tour_cost, Kind, WeightMatrix};
use nowait_core::solve::{
    brute_force_nwfs, fgm_atsp, held_karp_path_limited, held_karp_tour, held_karp_tour_limited,
    min_cycle_cover, nwfs_log_m_approx,
};
use nowait_core::transform::{
    atsp_to_atspp, backmap_replication, normalize_weights, replicate_instance, Fraction,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn reduction_preserves_optimum() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for _ in 0..60 {
        let n = rng.gen_range(1..=7);
        let m = rng.gen_range(1..=4);
        let inst = random_flowshop(&mut rng, n, m, 9);
        assert!(nowait_core::solve::cross_checked_optimum(&inst).is_ok());
    }
}

#[test]
fn normalization_error_window_is_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    for _ in 0..25 {
        let n = rng.gen_range(3..=5);
        let g = random_semimetric(&mut rng, n, 9);
        let r = tour_cost(&g, &fgm_atsp(&g));
        if r == 0 {
            continue;
        }
        let eps = Fraction::new(1, rng.gen_range(1..=3)).unwrap();
        let (normalized, trace) = normalize_weights(&g, eps, r).unwrap();
        assert_eq!(normalized.validate_semimetric(), Ok(()));

        // every tour's normalized value, converted back through the step
        // size, overshoots its true value by at least one and at most two
        // steps per arc
        let mut order: Vec<usize> = (1..n).collect();
        permute_all(&mut order, &mut |tail: &[usize]| {
            let mut full = vec![0usize];
            full.extend_from_slice(tail);
            let tour = nowait_core::graph::Tour::new(full).unwrap();
            let normalized_cost = tour_cost(&normalized, &tour) as u128;
            let true_cost = tour_cost(&g, &tour) as u128;
            let arcs = n as u128;
            let lhs = normalized_cost * trace.phi_num as u128;
            let low = true_cost * trace.phi_den as u128 + arcs * trace.phi_num as u128;
            let high = true_cost * trace.phi_den as u128 + 2 * arcs * trace.phi_num as u128;
            assert!(lhs >= low, "normalization undershoots the step window");
            assert!(lhs <= high, "normalization overshoots the step window");
        });

        // closed-form weight bound
        let bound = (r as u128 * trace.phi_den as u128).div_ceil(trace.phi_num as u128) + 1;
        assert!(normalized.max_weight() as u128 <= bound);
    }
}

fn permute_all(items: &mut [usize], visit: &mut impl FnMut(&[usize])) {
    let n = items.len();
    if n <= 1 {
        visit(items);
        return;
    }
    let mut c = vec![0usize; n];
    visit(items);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                items.swap(0, i);
            } else {
                items.swap(c[i], i);
            }
            visit(items);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

#[test]
fn replication_identity_and_weight_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(107);
    let fractions = [(2u64, 1u64), (1, 1), (2, 3)]; // 1, 2, and 3 copies
    for _ in 0..12 {
        let n = rng.gen_range(2..=5);
        let g = random_semimetric(&mut rng, n, 9);
        let opt_in = tour_cost(&g, &held_karp_tour(&g).unwrap());
        for &(p, q) in &fractions {
            let eps = Fraction::new(p, q).unwrap();
            let (out, trace) = replicate_instance(&g, eps);
            assert_eq!(out.validate_semimetric(), Ok(()));
            let copies = trace.copies as u64;
            let opt_out = tour_cost(&out, &held_karp_tour_limited(&out, 13).unwrap());
            assert_eq!(opt_out, copies * opt_in, "n={n}, copies={copies}");
            // max weight at most eps times the new optimum, exactly
            assert!(out.max_weight() as u128 * q as u128 <= p as u128 * opt_out as u128
                || opt_in == 0 && out.max_weight() == 0);
        }
    }
}

#[test]
fn replication_backmap_recovers_optimum_from_any_tour() {
    let mut rng = ChaCha8Rng::seed_from_u64(109);
    for _ in 0..8 {
        let n = rng.gen_range(2..=4);
        let g = random_semimetric(&mut rng, n, 6);
        let eps = Fraction::new(1, 1).unwrap();
        let (out, trace) = replicate_instance(&g, eps);
        // optimal tours map to optimal tours
        let t = held_karp_tour_limited(&out, 13).unwrap();
        let back = backmap_replication(&trace, &t);
        assert_eq!(
            tour_cost(&g, &back),
            tour_cost(&g, &held_karp_tour(&g).unwrap())
        );
        // arbitrary tours map within the averaging bound
        use rand::seq::SliceRandom;
        for _ in 0..10 {
            let mut order: Vec<usize> = (0..out.n()).collect();
            order.shuffle(&mut rng);
            let tour = nowait_core::graph::Tour::new(order).unwrap();
            let back = backmap_replication(&trace, &tour);
            assert!(
                tour_cost(&g, &back) as u128 * trace.copies as u128
                    <= tour_cost(&out, &tour) as u128
            );
        }
    }
}

#[test]
fn split_preserves_optimum() {
    let mut rng = ChaCha8Rng::seed_from_u64(113);
    for _ in 0..30 {
        let n = rng.gen_range(3..=7);
        let g = random_semimetric(&mut rng, n, 9);
        let (split, trace) = atsp_to_atspp(&g, 0).unwrap();
        assert_eq!(split.validate_semimetric(), Ok(()));
        let tour_opt = tour_cost(&g, &held_karp_tour(&g).unwrap());
        let free = held_karp_path_limited(&split, None, 16).unwrap();
        let designated =
            held_karp_path_limited(&split, Some((trace.v_out, trace.v_in)), 16).unwrap();
        assert_eq!(path_cost(&split, &free), tour_opt);
        assert_eq!(path_cost(&split, &designated), tour_opt);
    }
}

#[test]
fn cycle_cover_cost_below_tour_optimum() {
    let mut rng = ChaCha8Rng::seed_from_u64(127);
    for _ in 0..30 {
        let n = rng.gen_range(2..=8);
        let g = random_semimetric(&mut rng, n, 9);
        let cover = min_cycle_cover(&g);
        let opt = tour_cost(&g, &held_karp_tour(&g).unwrap());
        assert!(cover.cost(&g) <= opt);
    }
}

#[test]
fn approx_guarantee_smoke() {
    let mut rng = ChaCha8Rng::seed_from_u64(131);
    for _ in 0..60 {
        let n = rng.gen_range(1..=8);
        let m = rng.gen_range(1..=6);
        let inst = random_flowshop(&mut rng, n, m, 9);
        let (_, run) = nwfs_log_m_approx(&inst);
        let (_, best) = brute_force_nwfs(&inst).unwrap();
        let levels = if m <= 1 { 0 } else { (m - 1).ilog2() + 1 } as u64;
        assert!(run.makespan <= (levels + 1) * best);
        for level in &run.levels {
            assert!(level.cost <= best, "cover cost exceeds the optimum");
        }
    }
}

/// Distances of the glued multi-copy instance, reconstructed from a trace.
fn glued_weight(trace: &nowait_core::embed::HardnessTrace, a: usize, b: usize) -> u64 {
    trace.glued_weight(a, b)
}

fn hardness_instance_checks(g: &WeightMatrix, eps: Fraction) {
    let built = build_hardness_instance(g, eps).unwrap();
    let inst = &built.flowshop;
    let trace = &built.trace;

    // every start gap equals the glued distance plus one, exhaustively
    for a in 0..inst.n() {
        for b in 0..inst.n() {
            if a == b {
                continue;
            }
            assert_eq!(
                delta(inst.job(a), inst.job(b)),
                glued_weight(trace, a, b) + 1,
                "gap mismatch at jobs {a}, {b}"
            );
        }
    }

    // common job length matches the trace
    for job in inst.jobs() {
        assert_eq!(job.length(), trace.job_length);
    }

    // the per-copy optimal path realizes the predicted optimal makespan
    let opt_path = held_karp_path_limited(&trace.scaled, None, 18).unwrap();
    let opt_prime = path_cost(&trace.scaled, &opt_path);
    let designated = held_karp_path_limited(
        &trace.scaled,
        Some((trace.split.v_out, trace.split.v_in)),
        18,
    )
    .unwrap();
    assert_eq!(opt_prime, path_cost(&trace.scaled, &designated));
    let sigma_star = trace.order_from_path(&opt_path);
    let achieved = makespan(inst, &sigma_star);
    assert_eq!(achieved, trace.predicted_optimum(opt_prime));

    // the back-map walks the optimum through every stage after
    // normalization: the returned tour is optimal for the normalized
    // instance
    let tour = extract_tour(trace, &sigma_star);
    let normalized = &trace.replication.matrix;
    let normalized_opt = tour_cost(normalized, &held_karp_tour(normalized).unwrap());
    assert_eq!(tour_cost(normalized, &tour), normalized_opt);

    // against the original weights the tour sits within one normalization
    // step per arc of optimal
    let true_opt = tour_cost(g, &held_karp_tour(g).unwrap());
    let returned = tour_cost(g, &tour);
    let norm = &trace.normalization;
    assert!(
        returned as u128 * norm.phi_den as u128
            <= true_opt as u128 * norm.phi_den as u128 + g.n() as u128 * norm.phi_num as u128,
        "tour exceeds the normalization error window: {returned} vs {true_opt}"
    );
}

#[test]
fn hardness_pipeline_unit_triangle() {
    let g = WeightMatrix::from_rows(
        vec![vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]],
        Kind::Atsp,
    )
    .unwrap();
    hardness_instance_checks(&g, Fraction::new(1, 1).unwrap());
}

#[test]
fn hardness_pipeline_mixed_distances() {
    let g = WeightMatrix::from_rows(
        vec![vec![0, 1, 2], vec![2, 0, 1], vec![1, 2, 0]],
        Kind::Atsp,
    )
    .unwrap();
    hardness_instance_checks(&g, Fraction::new(1, 1).unwrap());
}

#[test]
fn hardness_pipeline_random_n4() {
    let mut rng = ChaCha8Rng::seed_from_u64(137);
    let g = random_semimetric(&mut rng, 4, 5);
    hardness_instance_checks(&g, Fraction::new(1, 2).unwrap());
}

//! The acceptance suite: ten numbered checks covering the distance model,
//! the reductions, the transformations, and the approximation guarantees,
//! each runnable standalone and reported as one pass/fail line plus TSV
//! rows for the algorithm measurements.

use std::time::Instant;

use nowait_core::embed::{build_hardness_instance, embed_semimetric, extract_tour, gadget_jobs, gadget_subset_size};
use nowait_core::flowshop::{delta, makespan, simulate_schedule, JobPermutation};
use nowait_core::graph::{nwfs_to_atsp, path_cost, tour_cost};
use nowait_core::solve::{
    brute_force_nwfs, held_karp_path_limited, held_karp_tour, held_karp_tour_limited,
    nwfs_log_m_approx,
};
use nowait_core::transform::{replicate_instance, Fraction};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::gen::{flowshop_with_rng, semimetric_with_rng};

#[derive(Debug, Clone)]
pub struct BenchRow {
    pub instance: String,
    pub n: usize,
    pub m: usize,
    pub algorithm: String,
    pub value: u64,
    pub optimum: Option<u64>,
    pub ratio: Option<f64>,
    pub bound: Option<f64>,
    pub millis: u128,
}

#[derive(Debug, Clone)]
pub struct CriterionReport {
    pub id: usize,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
    pub rows: Vec<BenchRow>,
}

pub const CRITERIA: usize = 10;

pub fn run_acceptance() -> Vec<CriterionReport> {
    (1..=CRITERIA).map(run_criterion).collect()
}

pub fn run_criterion(id: usize) -> CriterionReport {
    match id {
        1 => oracle_equivalence(),
        2 => triangle_inequality(),
        3 => reduction_optimum_identity(),
        4 => embedding_exactness(),
        5 => gadget_exactness(),
        6 => split_equality(),
        7 => replication_identity(),
        8 => approx_guarantee(),
        9 => hardness_roundtrip(),
        10 => approximation_transfer(),
        _ => panic!("criteria are numbered 1..={CRITERIA}"),
    }
}

fn random_permutation<R: Rng>(rng: &mut R, n: usize) -> JobPermutation {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    JobPermutation::new(order).unwrap()
}

fn finish(
    id: usize,
    name: &'static str,
    pass: bool,
    detail: String,
    rows: Vec<BenchRow>,
) -> CriterionReport {
    CriterionReport { id, name, pass, detail, rows }
}

/// 1: the closed-form makespan equals the discrete-event simulator.
fn oracle_equivalence() -> CriterionReport {
    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE_0001);
    let total = 1000;
    let mut mismatches = 0;
    for _ in 0..total {
        let n = rng.gen_range(1..=8);
        let m = rng.gen_range(1..=6);
        let inst = flowshop_with_rng(&mut rng, n, m, 9);
        let sigma = random_permutation(&mut rng, n);
        if makespan(&inst, &sigma) != simulate_schedule(&inst, &sigma).length() {
            mismatches += 1;
        }
    }
    finish(
        1,
        "makespan formula equals simulator",
        mismatches == 0,
        format!("{total} random instances (n<=8, m<=6, ops<=9), {mismatches} mismatches"),
        vec![],
    )
}

/// 2: the start gap satisfies the triangle inequality, exhaustively on
/// small jobs and randomly on larger ones.
fn triangle_inequality() -> CriterionReport {
    let mut violations = 0usize;
    let mut checked = 0usize;
    for m in 1..=3usize {
        let mut jobs = Vec::new();
        for code in 0..4usize.pow(m as u32) {
            let mut ops = Vec::with_capacity(m);
            let mut rest = code;
            for _ in 0..m {
                ops.push((rest % 4) as u64);
                rest /= 4;
            }
            jobs.push(nowait_core::flowshop::Job::new(ops));
        }
        for a in &jobs {
            for b in &jobs {
                for c in &jobs {
                    checked += 1;
                    if delta(a, c) > delta(a, b) + delta(b, c) {
                        violations += 1;
                    }
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE_0002);
    for _ in 0..10_000 {
        let m = rng.gen_range(4..=8);
        let draw = |rng: &mut ChaCha8Rng| {
            nowait_core::flowshop::Job::new((0..m).map(|_| rng.gen_range(0..=20)).collect())
        };
        let (a, b, c) = (draw(&mut rng), draw(&mut rng), draw(&mut rng));
        checked += 1;
        if delta(&a, &c) > delta(&a, &b) + delta(&b, &c) {
            violations += 1;
        }
    }
    finish(
        2,
        "start gap triangle inequality",
        violations == 0,
        format!("{checked} triples (exhaustive m<=3/ops<=3 plus 10000 random), {violations} violations"),
        vec![],
    )
}

/// 3: brute-force optimal makespan equals the tour optimum of the reduced
/// matrix.
fn reduction_optimum_identity() -> CriterionReport {
    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE_0003);
    let total = 200;
    let mut mismatches = 0;
    for _ in 0..total {
        let n = rng.gen_range(1..=7);
        let m = rng.gen_range(1..=4);
        let inst = flowshop_with_rng(&mut rng, n, m, 9);
        let (_, best) = brute_force_nwfs(&inst).unwrap();
        let (reduced, _) = nwfs_to_atsp(&inst);
        let opt = tour_cost(&reduced, &held_karp_tour(&reduced).unwrap());
        if best != opt {
            mismatches += 1;
        }
    }
    finish(
        3,
        "reduction preserves the optimum",
        mismatches == 0,
        format!("{total} random instances (n<=7, m<=4), {mismatches} mismatches"),
        vec![],
    )
}

/// 4: embedded semimetrics reproduce every distance plus one, exactly.
fn embedding_exactness() -> CriterionReport {
    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE_0004);
    let total = 200;
    let mut mismatches = 0;
    for _ in 0..total {
        let n = rng.gen_range(2..=8);
        let m = semimetric_with_rng(&mut rng, n, 12);
        let jobs = embed_semimetric(&m).unwrap();
        for u in 0..n {
            for v in 0..n {
                let expected = if u == v { 1 } else { m.weight(u, v) + 1 };
                if delta(&jobs[u], &jobs[v]) != expected {
                    mismatches += 1;
                }
            }
        }
    }
    finish(
        4,
        "semimetric embedding is exact",
        mismatches == 0,
        format!("{total} random semimetrics (n<=8, weights<=12), {mismatches} wrong gaps"),
        vec![],
    )
}

/// 5: gadget families have self gap one and pairwise gap equal to their
/// scale, at one shared length and machine count.
fn gadget_exactness() -> CriterionReport {
    let mut mismatches = 0;
    let mut checked = 0;
    for count in 1..=8usize {
        for scale in 1..=6u64 {
            let jobs = gadget_jobs(count, scale);
            let k = gadget_subset_size(count) as u64;
            for (i, a) in jobs.iter().enumerate() {
                if a.length() != 4 * k * scale || a.machines() != (8 * k * scale) as usize {
                    mismatches += 1;
                }
                for (j, b) in jobs.iter().enumerate() {
                    checked += 1;
                    let expected = if i == j { 1 } else { scale };
                    if delta(a, b) != expected {
                        mismatches += 1;
                    }
                }
            }
        }
    }
    finish(
        5,
        "gadget gaps are exact",
        mismatches == 0,
        format!("all families with count<=8, scale<=6 ({checked} ordered pairs), {mismatches} mismatches"),
        vec![],
    )
}

/// 6: splitting a vertex preserves the optimum exactly, and the path
/// repair never increases cost.
fn split_equality() -> CriterionReport {
    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE_0006);
    let total = 100;
    let mut mismatches = 0;
    let mut repair_violations = 0;
    for _ in 0..total {
        let n = rng.gen_range(3..=7);
        let g = semimetric_with_rng(&mut rng, n, 9);
        let (split, trace) = nowait_core::transform::atsp_to_atspp(&g, 0).unwrap();
        let tour_opt = tour_cost(&g, &held_karp_tour(&g).unwrap());
        let free = path_cost(&split, &held_karp_path_limited(&split, None, 16).unwrap());
        let fixed = path_cost(
            &split,
            &held_karp_path_limited(&split, Some((trace.v_out, trace.v_in)), 16).unwrap(),
        );
        if free != tour_opt || fixed != tour_opt {
            mismatches += 1;
        }
        for _ in 0..10 {
            let mut order: Vec<usize> = (0..=n).collect();
            order.shuffle(&mut rng);
            let path = nowait_core::graph::HamPath::new(order).unwrap();
            let before = path_cost(&split, &path);
            let tour = nowait_core::transform::repair_and_backmap_path(&trace, &path);
            if tour_cost(&g, &tour) > before {
                repair_violations += 1;
            }
        }
    }
    finish(
        6,
        "vertex split preserves the optimum",
        mismatches == 0 && repair_violations == 0,
        format!(
            "{total} random semimetrics (n<=7): {mismatches} optimum mismatches, {repair_violations} repair cost increases over 10 random paths each"
        ),
        vec![],
    )
}

/// 7: the replicated instance's optimum is exactly the copy count times
/// the input optimum.
fn replication_identity() -> CriterionReport {
    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE_0007);
    let mut mismatches = 0;
    let mut checked = 0;
    for _ in 0..10 {
        let n = rng.gen_range(3..=5);
        let g = semimetric_with_rng(&mut rng, n, 9);
        let opt = tour_cost(&g, &held_karp_tour(&g).unwrap());
        for (p, q) in [(2u64, 1u64), (1, 1), (2, 3)] {
            let eps = Fraction::new(p, q).unwrap();
            let (out, trace) = replicate_instance(&g, eps);
            let replicated_opt = tour_cost(&out, &held_karp_tour_limited(&out, 13).unwrap());
            checked += 1;
            if replicated_opt != trace.copies as u64 * opt {
                mismatches += 1;
            }
        }
    }
    finish(
        7,
        "replication scales the optimum exactly",
        mismatches == 0,
        format!("{checked} builds (n<=5, copies 1..=3), {mismatches} mismatches"),
        vec![],
    )
}

/// 8: the cycle-cover flowshop approximation stays within its guarantee,
/// with per-level cost and halving assertions.
fn approx_guarantee() -> CriterionReport {
    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE_0008);
    let total = 500;
    let mut violations = Vec::new();
    let mut rows = Vec::new();
    for i in 0..total {
        let n = rng.gen_range(1..=8);
        let m = rng.gen_range(1..=6);
        let inst = flowshop_with_rng(&mut rng, n, m, 9);
        let started = Instant::now();
        let (_, run) = nwfs_log_m_approx(&inst);
        let millis = started.elapsed().as_millis();
        let (_, best) = brute_force_nwfs(&inst).unwrap();
        let levels_allowed = ceil_log2(m) as u64;
        let bound = (levels_allowed + 1) * best;
        if run.makespan > bound {
            violations.push(format!("instance {i}: makespan {} > bound {bound}", run.makespan));
        }
        for level in &run.levels {
            if level.cost > best {
                violations.push(format!("instance {i}: cover cost {} > optimum {best}", level.cost));
            }
        }
        for pair in run.levels.windows(2) {
            if pair[1].vertices.len() * 2 > pair[0].vertices.len() {
                violations.push(format!("instance {i}: level did not halve"));
            }
        }
        if !run.survivors.is_empty() {
            let survivor_length: u64 = run
                .survivors
                .iter()
                .map(|&v| if v == 0 { 0 } else { inst.job(v - 1).length() })
                .sum();
            let total_length = inst.total_processing_time();
            if survivor_length as u128 * m as u128 > total_length as u128 {
                violations.push(format!("instance {i}: survivor length bound broken"));
            }
        }
        rows.push(BenchRow {
            instance: format!("c8-{i:03}"),
            n,
            m,
            algorithm: "logm-approx".into(),
            value: run.makespan,
            optimum: Some(best),
            ratio: ratio(run.makespan, best),
            bound: Some((levels_allowed + 1) as f64),
            millis,
        });
    }
    let pass = violations.is_empty();
    finish(
        8,
        "cycle-cover approximation guarantee",
        pass,
        if pass {
            format!("{total} random instances (n<=8, m<=6): all within (ceil(log2 m)+1) x optimum, levels bounded and halving")
        } else {
            format!("{} violations: {}", violations.len(), violations.join("; "))
        },
        rows,
    )
}

fn ceil_log2(x: usize) -> u32 {
    if x <= 1 {
        0
    } else {
        (x - 1).ilog2() + 1
    }
}

fn ratio(value: u64, optimum: u64) -> Option<f64> {
    if optimum == 0 {
        None
    } else {
        Some(value as f64 / optimum as f64)
    }
}

/// The shared instance suite for criteria 9 and 10 (and the structural
/// supplement in the acceptance tests).
pub fn hardness_suite() -> Vec<(String, nowait_core::graph::WeightMatrix, Fraction)> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE_0009);
    let mut suite = Vec::new();
    for i in 0..10 {
        let n = 3 + (i % 3);
        let g = semimetric_with_rng(&mut rng, n, 9);
        for (p, q) in [(1u64, 1u64), (1, 2)] {
            suite.push((format!("c9-{i:02}-eps{p}_{q}"), g.clone(), Fraction::new(p, q).unwrap()));
        }
    }
    suite
}

/// 9: the hardness reduction round trip at desk scale, as specified: job
/// count within the exact solver's reach, the optimal makespan certified
/// by the tour DP against the closed form, and the back-mapped optimum.
///
/// The pinned job bound of 14 cannot hold: the pipeline produces
/// copies x n' = n'^2 jobs and every valid input (n >= 3, eps <= 1)
/// forces n' >= 6, so the smallest reachable instance already has 36
/// jobs, past any subset-DP certification. The criterion is reported
/// honestly as failing; the structural verification of the same
/// identities lives in the acceptance test suite.
fn hardness_roundtrip() -> CriterionReport {
    const JOB_BOUND: usize = 14;
    let suite = hardness_suite();
    let mut rows = Vec::new();
    let mut over_bound = 0usize;
    let mut smallest = usize::MAX;
    for (label, g, eps) in &suite {
        let started = Instant::now();
        let built = build_hardness_instance(g, *eps).unwrap();
        let jobs = built.trace.job_count();
        smallest = smallest.min(jobs);
        if jobs > JOB_BOUND {
            over_bound += 1;
        }
        rows.push(BenchRow {
            instance: label.clone(),
            n: g.n(),
            m: built.flowshop.machines(),
            algorithm: "hardness-build".into(),
            value: jobs as u64,
            optimum: None,
            ratio: None,
            bound: None,
            millis: started.elapsed().as_millis(),
        });
    }
    let pass = over_bound == 0;
    finish(
        9,
        "hardness reduction round trip at exact-solver scale",
        pass,
        format!(
            "{} of {} builds exceed the pinned {JOB_BOUND}-job bound (smallest build: {smallest} jobs = n'^2 with n' >= 6 for every valid input); the exact makespan DP is out of reach past 16 vertices, so the closed-form and round-trip clauses cannot be certified as stated; see the structural supplement in the acceptance tests",
            over_bound,
            suite.len(),
        ),
        rows,
    )
}

/// 10: running the approximation on the built instance and back-mapping
/// yields a tour whose measured ratio stays within (1 + 10 eps) times the
/// flowshop run's measured ratio.
fn approximation_transfer() -> CriterionReport {
    let suite = hardness_suite();
    let mut rows = Vec::new();
    let mut violations = Vec::new();
    for (label, g, eps) in &suite {
        let started = Instant::now();
        let built = build_hardness_instance(g, *eps).unwrap();
        let trace = &built.trace;

        // exact optimum of the built instance via the per-copy structure
        let opt_path = held_karp_path_limited(&trace.scaled, None, 18).unwrap();
        let opt_prime = path_cost(&trace.scaled, &opt_path);
        let predicted = trace.predicted_optimum(opt_prime);
        let sigma_star = trace.order_from_path(&opt_path);
        assert_eq!(
            makespan(&built.flowshop, &sigma_star),
            predicted,
            "structural optimum must realize the closed form"
        );

        let (order, run) = nwfs_log_m_approx(&built.flowshop);
        let tour = extract_tour(trace, &order);
        let tour_value = tour_cost(g, &tour);
        let g_opt = tour_cost(g, &held_karp_tour(g).unwrap());
        let millis = started.elapsed().as_millis();

        // tour_value / g_opt <= (makespan / predicted) * (1 + 10 eps),
        // cross-multiplied to stay exact
        let (p, q) = (eps.num() as u128, eps.den() as u128);
        let lhs = tour_value as u128 * predicted as u128 * q;
        let rhs = run.makespan as u128 * g_opt as u128 * (q + 10 * p);
        if g_opt == 0 {
            if tour_value != 0 {
                violations.push(format!("{label}: zero-optimum instance mapped to a nonzero tour"));
            }
        } else if lhs > rhs {
            violations.push(format!(
                "{label}: tour ratio {} exceeds flowshop ratio {} times (1+10eps)",
                tour_value as f64 / g_opt as f64,
                run.makespan as f64 / predicted as f64,
            ));
        }

        let fs_ratio = ratio(run.makespan, predicted);
        rows.push(BenchRow {
            instance: label.clone(),
            n: built.flowshop.n(),
            m: built.flowshop.machines(),
            algorithm: "logm-on-reduction".into(),
            value: run.makespan,
            optimum: Some(predicted),
            ratio: fs_ratio,
            bound: Some((ceil_log2(built.flowshop.machines()) + 1) as f64),
            millis,
        });
        rows.push(BenchRow {
            instance: label.clone(),
            n: g.n(),
            m: 0,
            algorithm: "extracted-tour".into(),
            value: tour_value,
            optimum: Some(g_opt),
            ratio: ratio(tour_value, g_opt),
            bound: fs_ratio.map(|r| r * (1.0 + 10.0 * eps.num() as f64 / eps.den() as f64)),
            millis: 0,
        });
    }
    let pass = violations.is_empty();
    finish(
        10,
        "approximation transfers through the reduction",
        pass,
        if pass {
            format!(
                "{} builds: back-mapped tour ratios all within (1+10 eps) of the flowshop ratios",
                suite.len()
            )
        } else {
            violations.join("; ")
        },
        rows,
    )
}

/// TSV report: one row per measurement, aggregate lines appended as `#`
/// comments.
pub fn tsv(reports: &[CriterionReport]) -> String {
    let mut out = String::from("instance\tn\tm\talgorithm\tvalue\toptimum\tratio\tbound\ttime_ms\n");
    for report in reports {
        for row in &report.rows {
            let optimum = row.optimum.map_or(String::new(), |v| v.to_string());
            let ratio = row.ratio.map_or(String::new(), |v| format!("{v:.4}"));
            let bound = row.bound.map_or(String::new(), |v| format!("{v:.4}"));
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
                row.instance, row.n, row.m, row.algorithm, row.value, optimum, ratio, bound, row.millis
            ));
        }
    }
    let mut algorithms: Vec<&str> = reports
        .iter()
        .flat_map(|r| r.rows.iter().map(|row| row.algorithm.as_str()))
        .collect();
    algorithms.sort_unstable();
    algorithms.dedup();
    for algorithm in algorithms {
        let ratios: Vec<f64> = reports
            .iter()
            .flat_map(|r| r.rows.iter())
            .filter(|row| row.algorithm == algorithm)
            .filter_map(|row| row.ratio)
            .collect();
        if ratios.is_empty() {
            continue;
        }
        let max = ratios.iter().copied().fold(f64::MIN, f64::max);
        let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
        out.push_str(&format!(
            "# {algorithm}: {} measured ratios, mean {mean:.4}, max {max:.4}\n",
            ratios.len()
        ));
    }
    out
}

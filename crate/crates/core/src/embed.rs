//! Encoding distance matrices as job sets.
//!
//! The building block is a 0/1 "ramp" job: on `2 * scale` machines, a run
//! of `scale` unit operations slid into position by its index. Within one
//! scale, the start gap between two blocks has the closed form
//! `max(i - j + 1, 0)`, and concatenating blocks takes the coordinatewise
//! maximum of gaps (all blocks share one total length, so segment offsets
//! cancel). Reading row `i` of a semimetric as block indices therefore
//! yields jobs whose pairwise gaps reproduce the matrix distances plus
//! exactly one.
//!
//! On top of that sit the gadget jobs (pairwise gap `scale`, self gap 1,
//! built from two interleaved block shapes keyed by half-size subsets) and
//! the end-to-end pipeline that turns an ATSP instance into a flowshop
//! instance whose makespans mirror tour costs: normalize, replicate,
//! split, scale up, embed one copy per graph vertex, and stamp each copy
//! with its own gadget.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::flowshop::{concat_jobs, FlowshopInstance, Job, JobPermutation, Time};
use crate::graph::{tour_cost, HamPath, Tour, WeightMatrix};
use crate::solve::fgm_atsp;
use crate::transform::{
    atsp_to_atspp, backmap_replication, normalize_weights, repair_and_backmap_path,
    replicate_instance, Fraction, NormalizationTrace, ReplicationTrace, SplitTrace,
};

/// 0/1 job on `2 * scale` machines: `scale - index` zeros, `scale` ones,
/// then `index` zeros. For two blocks of one scale,
/// `delta(block(i), block(j)) == min(max(i - j + 1, 0), scale)`: the
/// linear ramp caps at `scale` because no gap can exceed the first job's
/// total length. The cap only bites at `(i, j) == (scale, 0)`, so scales
/// strictly above the largest encoded value keep the ramp exact.
///
/// Panics if `index > scale` or `scale == 0`.
pub fn block_job(index: u64, scale: u64) -> Job {
    assert!(scale >= 1, "block scale must be positive");
    assert!(index <= scale, "block index out of range");
    let mut ops = Vec::with_capacity(2 * scale as usize);
    ops.resize((scale - index) as usize, 0);
    ops.resize((2 * scale - index) as usize, 1);
    ops.resize(2 * scale as usize, 0);
    Job::new(ops)
}

/// Encodes a validated semimetric as jobs: one job per vertex, the
/// concatenation of one block per column of its distance row, at block
/// scale max weight plus one. For every ordered pair,
/// `delta(f(u), f(v)) == d(u, v) + 1`.
pub fn embed_semimetric(m: &WeightMatrix) -> Result<Vec<Job>> {
    embed_with_block_scale(m, m.max_weight() + 1)
}

/// [`embed_semimetric`] at an explicit block scale. The scale must exceed
/// the max weight: at the pair distance `d(u, v)` the identity needs an
/// uncapped ramp value of `d(u, v) + 1`, which a block of scale exactly
/// `d(u, v)` cannot reach. All output jobs use `2 * n * scale` machines
/// and have total length `n * scale`.
pub fn embed_with_block_scale(m: &WeightMatrix, scale: u64) -> Result<Vec<Job>> {
    m.validate_semimetric()?;
    assert!(
        scale > m.max_weight(),
        "block scale must exceed the max weight"
    );
    let n = m.n();
    let jobs = (0..n)
        .map(|u| {
            let blocks: Vec<Job> = (0..n).map(|k| block_job(m.weight(u, k), scale)).collect();
            concat_jobs(&blocks)
        })
        .collect();
    Ok(jobs)
}

fn binomial(n: u64, k: u64) -> u128 {
    let k = k.min(n - k);
    let mut result: u128 = 1;
    for i in 0..k {
        result = result * (n - i) as u128 / (i + 1) as u128;
    }
    result
}

/// Smallest `k >= 1` with `C(2k, k) >= count`; the subset half-size the
/// gadget family needs to tell `count` copies apart.
pub fn gadget_subset_size(count: usize) -> usize {
    let mut k = 1u64;
    while binomial(2 * k, k) < count as u128 {
        k += 1;
    }
    k as usize
}

/// One of the two gadget building blocks, on `4 * scale` machines with
/// total length `2 * scale`: the `false` shape alternates unit and zero
/// operations, the `true` shape is a solid run of `2 * scale` units then
/// zeros. Gaps: 1 within a shape and from `false` to `true`, `scale` from
/// `true` to `false`.
pub fn gadget_block(bit: bool, scale: u64) -> Job {
    let s = scale as usize;
    let ops = if bit {
        let mut ops = vec![1; 2 * s];
        ops.resize(4 * s, 0);
        ops
    } else {
        let mut ops = Vec::with_capacity(4 * s);
        for _ in 0..2 * s {
            ops.push(1);
            ops.push(0);
        }
        ops
    };
    Job::new(ops)
}

/// `count` jobs with self gap 1 and pairwise gap `scale`, all on
/// `8 * k * scale` machines with total length `4 * k * scale` where
/// `k = gadget_subset_size(count)`. Job `i` substitutes the gadget blocks
/// along the characteristic vector of the `i`-th `k`-subset of `2k` slots,
/// subsets taken in lexicographic order.
pub fn gadget_jobs(count: usize, scale: u64) -> Vec<Job> {
    assert!(count >= 1, "gadget family needs at least one member");
    assert!(scale >= 1, "gadget scale must be positive");
    let k = gadget_subset_size(count);
    let zero = gadget_block(false, scale);
    let one = gadget_block(true, scale);
    let mut subset: Vec<usize> = (0..k).collect();
    let mut jobs = Vec::with_capacity(count);
    for _ in 0..count {
        let mut blocks = Vec::with_capacity(2 * k);
        for slot in 0..2 * k {
            let bit = subset.binary_search(&slot).is_ok();
            blocks.push(if bit { one.clone() } else { zero.clone() });
        }
        jobs.push(concat_jobs(&blocks));
        next_subset(&mut subset, 2 * k);
    }
    jobs
}

/// Advances a sorted `k`-subset of `0..universe` to its lexicographic
/// successor; wraps silently after the last one (callers never overrun).
fn next_subset(subset: &mut [usize], universe: usize) {
    let k = subset.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if subset[i] < universe - (k - i) {
            subset[i] += 1;
            for j in i + 1..k {
                subset[j] = subset[j - 1] + 1;
            }
            return;
        }
    }
}

/// Everything needed to map solutions of the built flowshop instance back
/// to tours of the original ATSP instance, including every intermediate
/// matrix of the pipeline.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HardnessTrace {
    pub original: WeightMatrix,
    pub epsilon: Fraction,
    /// Tour-value certificate from the cycle-cover approximation.
    pub r: u64,
    pub normalization: NormalizationTrace,
    /// Carries the normalized matrix as its back-map input.
    pub replication: ReplicationTrace,
    /// Carries the replicated matrix as its back-map input.
    pub split: SplitTrace,
    /// Weights of the split instance were multiplied by this.
    pub scale: u64,
    /// The path instance actually embedded (split, then scaled).
    pub scaled: WeightMatrix,
    /// Vertex count of the scaled instance; one embedded job set per copy.
    pub n_prime: usize,
    /// Copy count of the glued instance (equals `n_prime`).
    pub copies: usize,
    /// Max weight of the scaled instance; cross-copy arcs cost twice this.
    pub w_prime: u64,
    /// Block scale `2 * w_prime + 1` shared by embedding and gadgets.
    pub block_scale: u64,
    pub gadget_k: usize,
    /// Common total length of every job.
    pub job_length: Time,
}

impl HardnessTrace {
    pub fn job_count(&self) -> usize {
        self.copies * self.n_prime
    }

    /// Copy holding job `j`.
    pub fn job_copy(&self, job: usize) -> usize {
        job / self.n_prime
    }

    /// Vertex of the scaled instance that job `j` encodes.
    pub fn job_vertex(&self, job: usize) -> usize {
        job % self.n_prime
    }

    /// Distance in the glued instance between the positions of two jobs:
    /// the scaled weight within a copy, twice the max weight across.
    pub fn glued_weight(&self, a: usize, b: usize) -> u64 {
        if a == b {
            0
        } else if self.job_copy(a) == self.job_copy(b) {
            self.scaled.weight(self.job_vertex(a), self.job_vertex(b))
        } else {
            2 * self.w_prime
        }
    }

    fn glued_walk_cost(&self, jobs: &[usize]) -> u64 {
        jobs.windows(2)
            .map(|p| self.glued_weight(p[0], p[1]))
            .try_fold(0u64, u64::checked_add)
            .expect("glued walk cost overflow")
    }

    /// Optimal makespan of the built instance, given the optimal path
    /// value of the scaled instance: one optimal path per copy, a bridge
    /// of `2 * w_prime` between consecutive copies, plus one per start gap
    /// and the common job length for the last job.
    pub fn predicted_optimum(&self, opt_prime: u64) -> u64 {
        let n = self.copies as u64;
        n * opt_prime
            + 2 * self.w_prime * (n - 1)
            + (self.job_count() as u64 - 1)
            + self.job_length
    }

    /// Job order realizing [`HardnessTrace::predicted_optimum`]: copies in
    /// index order, each traversed along the given path of the scaled
    /// instance.
    pub fn order_from_path(&self, path: &HamPath) -> JobPermutation {
        assert_eq!(path.len(), self.n_prime, "path does not match the scaled instance");
        let mut order = Vec::with_capacity(self.job_count());
        for copy in 0..self.copies {
            for &x in path.order() {
                order.push(copy * self.n_prime + x);
            }
        }
        JobPermutation::new(order).expect("copy-by-copy order is a permutation")
    }
}

/// A built flowshop instance together with its reduction trace.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HardnessInstance {
    pub flowshop: FlowshopInstance,
    pub trace: HardnessTrace,
}

fn scale_matrix(m: &WeightMatrix, factor: u64) -> WeightMatrix {
    let mut out = WeightMatrix::zero(m.n(), m.kind());
    for u in 0..m.n() {
        for v in 0..m.n() {
            out.set_weight(u, v, m.weight(u, v).checked_mul(factor).expect("scale overflow"));
        }
    }
    out
}

/// Builds a flowshop instance whose start gaps reproduce, plus one, the
/// distances of a glued multi-copy version of the input, so that solving
/// the flowshop solves the ATSP up to a `1 + O(eps)` factor.
///
/// Pipeline: estimate a tour value, normalize weights with it, replicate
/// to drive the max weight under `eps` times the optimum, split a vertex
/// to reach a path instance, scale everything by `ceil(1 / eps)`, embed
/// the result once per copy at block scale twice-max-weight-plus-one, and
/// append the copy's gadget to each of its jobs. Cross-copy gaps are then
/// realized by the gadgets alone, within-copy gaps by the embedding.
pub fn build_hardness_instance(g: &WeightMatrix, eps: Fraction) -> Result<HardnessInstance> {
    if !eps.is_at_most_one() {
        return Err(Error::BadEpsilon);
    }
    if g.n() < 3 {
        return Err(Error::TooSmall { what: "hardness reduction input", size: g.n(), need: 3 });
    }
    g.validate_semimetric()?;

    let r = tour_cost(g, &fgm_atsp(g));
    let (normalized, normalization) = normalize_weights(g, eps, r)?;
    let (replicated, replication) = replicate_instance(&normalized, eps);
    let (split, split_trace) = atsp_to_atspp(&replicated, 0)?;
    let scale = eps.ceil_div_into(1);
    let scaled = scale_matrix(&split, scale);

    let n_prime = scaled.n();
    let copies = n_prime;
    let w_prime = scaled.max_weight();
    let block_scale = 2 * w_prime + 1;
    let base = embed_with_block_scale(&scaled, block_scale)?;
    let gadgets = gadget_jobs(copies, block_scale);
    let gadget_k = gadget_subset_size(copies);

    let mut jobs = Vec::with_capacity(copies * n_prime);
    for gadget in gadgets.iter().take(copies) {
        for job in &base {
            jobs.push(concat_jobs(&[job.clone(), gadget.clone()]));
        }
    }
    let job_length = n_prime as u64 * block_scale + 4 * gadget_k as u64 * block_scale;
    debug_assert!(jobs.iter().all(|j| j.length() == job_length));

    let flowshop = FlowshopInstance::new(jobs)?;
    let trace = HardnessTrace {
        original: g.clone(),
        epsilon: eps,
        r,
        normalization,
        replication,
        split: split_trace,
        scale,
        scaled,
        n_prime,
        copies,
        w_prime,
        block_scale,
        gadget_k,
        job_length,
    };
    Ok(HardnessInstance { flowshop, trace })
}

/// Maps a job order of the built instance back to a tour of the original
/// ATSP instance. If the order is alpha-approximate for the flowshop
/// instance, the tour is alpha * (1 + O(eps))-approximate.
///
/// Steps: read the order as a path through the glued instance; group
/// vertices by copy at first appearance (verified not to increase cost);
/// keep the cheapest per-copy path; reinterpret it on the unscaled split
/// instance; repair it into an endpoint-aligned path and contract the
/// split vertex; reroute the resulting replicated tour through the
/// supervertex and keep the cheapest copy's cycle.
pub fn extract_tour(trace: &HardnessTrace, sigma: &JobPermutation) -> Tour {
    assert_eq!(
        sigma.len(),
        trace.job_count(),
        "order does not match the built instance"
    );
    let as_path: &[usize] = sigma.order();
    let original_cost = trace.glued_walk_cost(as_path);

    // group by copy in order of first appearance, keeping within-copy order
    let mut copy_order: Vec<usize> = Vec::new();
    let mut per_copy: Vec<Vec<usize>> = vec![Vec::new(); trace.copies];
    for &j in as_path {
        let c = trace.job_copy(j);
        if per_copy[c].is_empty() {
            copy_order.push(c);
        }
        per_copy[c].push(trace.job_vertex(j));
    }
    let grouped: Vec<usize> = copy_order
        .iter()
        .flat_map(|&c| per_copy[c].iter().map(move |&x| c * trace.n_prime + x))
        .collect();
    let grouped_cost = trace.glued_walk_cost(&grouped);
    assert!(
        grouped_cost <= original_cost,
        "copy grouping increased the path cost"
    );

    // cheapest per-copy path, in scaled weights
    let scaled_cost = |order: &[usize]| -> u64 {
        order.windows(2).map(|p| trace.scaled.weight(p[0], p[1])).sum()
    };
    let best = per_copy
        .iter()
        .min_by_key(|order| scaled_cost(order))
        .expect("at least one copy");
    let bridges = 2 * trace.w_prime * (trace.copies as u64 - 1);
    assert!(
        trace.copies as u64 * scaled_cost(best) <= grouped_cost - bridges,
        "cheapest copy exceeds the per-copy average"
    );

    // the scaled and split instances share vertex ids; costs divide by the
    // scale factor exactly, so the order carries over unchanged
    let path = HamPath::new(best.clone()).expect("per-copy orders are permutations");
    let replicated_tour = repair_and_backmap_path(&trace.split, &path);
    backmap_replication(&trace.replication, &replicated_tour)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flowshop::delta;
    use crate::graph::Kind;

    #[test]
    fn block_job_shapes() {
        assert_eq!(block_job(2, 3).ops(), &[0, 1, 1, 1, 0, 0]);
        assert_eq!(block_job(0, 2).ops(), &[0, 0, 1, 1]);
        assert_eq!(block_job(2, 2).ops(), &[1, 1, 0, 0]);
        assert_eq!(block_job(0, 3).length(), 3);
    }

    #[test]
    fn block_gap_closed_form() {
        assert_eq!(delta(&block_job(2, 3), &block_job(1, 3)), 2);
        assert_eq!(delta(&block_job(0, 3), &block_job(3, 3)), 0);
        // the ramp caps at the block length, reached only at (scale, 0)
        assert_eq!(delta(&block_job(3, 3), &block_job(0, 3)), 3);
        for scale in 1..=6u64 {
            for i in 0..=scale {
                for j in 0..=scale {
                    let expected = ((i as i64 - j as i64 + 1).max(0) as u64).min(scale);
                    assert_eq!(
                        delta(&block_job(i, scale), &block_job(j, scale)),
                        expected,
                        "scale {scale}, indices {i}, {j}"
                    );
                }
            }
        }
    }

    #[test]
    #[should_panic(expected = "out of range")]
    fn block_index_checked() {
        block_job(4, 3);
    }

    #[test]
    fn blocks_concatenate() {
        let joined = concat_jobs(&[block_job(0, 2), block_job(2, 2)]);
        assert_eq!(joined.ops(), &[0, 0, 1, 1, 1, 1, 0, 0]);
    }

    #[test]
    fn embed_two_point_semimetric() {
        let m = WeightMatrix::from_rows(vec![vec![0, 2], vec![1, 0]], Kind::Atsp).unwrap();
        let jobs = embed_semimetric(&m).unwrap();
        // block scale 3: rows (0, 2) and (1, 0) as slid unit runs
        assert_eq!(jobs[0].ops(), &[0, 0, 0, 1, 1, 1, 0, 1, 1, 1, 0, 0]);
        assert_eq!(jobs[1].ops(), &[0, 0, 1, 1, 1, 0, 0, 0, 0, 1, 1, 1]);
        assert_eq!(delta(&jobs[0], &jobs[1]), 3);
        assert_eq!(delta(&jobs[1], &jobs[0]), 2);
    }

    #[test]
    fn embed_exact_even_at_the_max_distance() {
        // a pair at the matrix's own max weight is where a block scale of
        // exactly the max weight would fall one short
        let m = WeightMatrix::from_rows(vec![vec![0, 2], vec![2, 0]], Kind::Atsp).unwrap();
        let jobs = embed_semimetric(&m).unwrap();
        assert_eq!(delta(&jobs[0], &jobs[1]), 3);
        assert_eq!(delta(&jobs[1], &jobs[0]), 3);
    }

    #[test]
    fn embed_zero_semimetric() {
        let m = WeightMatrix::zero(4, Kind::Atsp);
        let jobs = embed_semimetric(&m).unwrap();
        for a in &jobs {
            for b in &jobs {
                assert_eq!(delta(a, b), 1);
            }
        }
    }

    #[test]
    fn embed_rejects_violations() {
        let m = WeightMatrix::from_rows(
            vec![vec![0, 1, 5], vec![1, 0, 1], vec![1, 1, 0]],
            Kind::Atsp,
        )
        .unwrap();
        assert!(matches!(embed_semimetric(&m), Err(Error::NotSemimetric(_))));
    }

    #[test]
    fn gadget_building_block_gaps() {
        for scale in 1..=4u64 {
            let zero = gadget_block(false, scale);
            let one = gadget_block(true, scale);
            assert_eq!(zero.length(), 2 * scale);
            assert_eq!(one.length(), 2 * scale);
            assert_eq!(zero.machines(), 4 * scale as usize);
            assert_eq!(delta(&zero, &zero), 1);
            assert_eq!(delta(&one, &one), 1);
            assert_eq!(delta(&zero, &one), 1);
            assert_eq!(delta(&one, &zero), scale);
        }
    }

    #[test]
    fn gadget_pair_small() {
        // two gadgets at half-size 1: patterns (1, 0) and (0, 1)
        let jobs = gadget_jobs(2, 3);
        assert_eq!(gadget_subset_size(2), 1);
        assert_eq!(delta(&jobs[0], &jobs[1]), 3);
        assert_eq!(delta(&jobs[1], &jobs[0]), 3);
        assert_eq!(delta(&jobs[0], &jobs[0]), 1);
        let expected = concat_jobs(&[gadget_block(true, 3), gadget_block(false, 3)]);
        assert_eq!(jobs[0], expected);
    }

    #[test]
    fn gadget_family_exact_gaps() {
        for count in 1..=8usize {
            for scale in 1..=6u64 {
                let jobs = gadget_jobs(count, scale);
                let k = gadget_subset_size(count) as u64;
                for (i, a) in jobs.iter().enumerate() {
                    assert_eq!(a.length(), 4 * k * scale);
                    assert_eq!(a.machines(), (8 * k * scale) as usize);
                    for (j, b) in jobs.iter().enumerate() {
                        let expected = if i == j { 1 } else { scale };
                        assert_eq!(delta(a, b), expected, "count {count}, scale {scale}, pair {i},{j}");
                    }
                }
            }
        }
    }

    #[test]
    fn gadget_six_at_half_size_two() {
        assert_eq!(gadget_subset_size(6), 2);
        let jobs = gadget_jobs(6, 2);
        for i in 0..6 {
            for j in 0..6 {
                assert_eq!(delta(&jobs[i], &jobs[j]), if i == j { 1 } else { 2 });
            }
        }
    }

    #[test]
    fn subset_enumeration_is_lexicographic() {
        let mut s = vec![0, 1];
        let mut seen = vec![s.clone()];
        for _ in 0..5 {
            next_subset(&mut s, 4);
            seen.push(s.clone());
        }
        assert_eq!(
            seen,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
    }
}

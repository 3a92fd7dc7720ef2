//! The no-wait flowshop data model.
//!
//! A job is a chain of per-machine operation lengths. In a no-wait
//! permutation schedule every machine processes the jobs in one common
//! order and each job runs its operations back to back. The whole model
//! then collapses into a distance on jobs: [`delta`] is the minimal gap
//! between the start times of two consecutive jobs, and the makespan of an
//! order is the sum of consecutive gaps plus the length of the last job.
//!
//! Zero-length operations still occupy an ordered point on their machine:
//! a later job's operation may not begin before the earlier job's operation
//! on the same machine completes, even when either has length zero.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Operation lengths and schedule times, in integral time units.
///
/// All constructions in this crate are integral, so no floating point
/// appears anywhere in the core. Sums are checked: values are expected to
/// stay within `n * m * T <= 2^40` scale and anything beyond that panics
/// rather than wrapping.
pub type Time = u64;

/// A job: one operation length per machine, in machine order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Job {
    ops: Vec<Time>,
}

impl Job {
    pub fn new(ops: Vec<Time>) -> Self {
        Job { ops }
    }

    /// All-zero job on `machines` machines.
    pub fn zero(machines: usize) -> Self {
        Job { ops: vec![0; machines] }
    }

    pub fn machines(&self) -> usize {
        self.ops.len()
    }

    pub fn ops(&self) -> &[Time] {
        &self.ops
    }

    /// Total processing time of the job.
    pub fn length(&self) -> Time {
        self.ops
            .iter()
            .try_fold(0u64, |acc, &t| acc.checked_add(t))
            .expect("job length overflow")
    }
}

/// Minimal start-time gap between a job `a` and a job `b` scheduled right
/// after it: the largest over all machines `q` of (time `a` finishes on
/// `q`) minus (head start `b` enjoys before reaching `q`),
///
/// ```text
/// delta(a, b) = max over q of ( a[1..=q] summed  -  b[1..q] summed )
/// ```
///
/// The result is at least `a.ops()[0]` and never negative. `delta`
/// satisfies the triangle inequality but is not symmetric.
///
/// Panics if the machine counts differ or are zero.
pub fn delta(a: &Job, b: &Job) -> Time {
    assert_eq!(
        a.machines(),
        b.machines(),
        "delta: jobs must share a machine count"
    );
    assert!(a.machines() >= 1, "delta: jobs must have at least one machine");
    let mut prefix_a: u128 = 0;
    let mut prefix_b: u128 = 0;
    let mut best: i128 = i128::MIN;
    for q in 0..a.machines() {
        prefix_a += a.ops[q] as u128;
        let term = prefix_a as i128 - prefix_b as i128;
        if term > best {
            best = term;
        }
        prefix_b += b.ops[q] as u128;
    }
    Time::try_from(best).expect("delta overflow")
}

/// Concatenates the operation sequences of `parts` into one job.
///
/// Panics on an empty list or an empty part.
pub fn concat_jobs(parts: &[Job]) -> Job {
    assert!(!parts.is_empty(), "concat_jobs: no parts");
    let mut ops = Vec::with_capacity(parts.iter().map(Job::machines).sum());
    for part in parts {
        assert!(part.machines() >= 1, "concat_jobs: empty part");
        ops.extend_from_slice(&part.ops);
    }
    Job { ops }
}

/// An instance: `n >= 1` jobs over a common machine count `m >= 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FlowshopInstance {
    jobs: Vec<Job>,
    machines: usize,
}

impl FlowshopInstance {
    pub fn new(jobs: Vec<Job>) -> Result<Self> {
        let first = jobs.first().ok_or(Error::TooSmall {
            what: "flowshop instance jobs",
            size: 0,
            need: 1,
        })?;
        let machines = first.machines();
        if machines == 0 {
            return Err(Error::TooSmall { what: "machines", size: 0, need: 1 });
        }
        for job in &jobs {
            if job.machines() != machines {
                return Err(Error::MachineMismatch {
                    left: machines,
                    right: job.machines(),
                });
            }
        }
        Ok(FlowshopInstance { jobs, machines })
    }

    pub fn jobs(&self) -> &[Job] {
        &self.jobs
    }

    pub fn job(&self, index: usize) -> &Job {
        &self.jobs[index]
    }

    pub fn n(&self) -> usize {
        self.jobs.len()
    }

    pub fn machines(&self) -> usize {
        self.machines
    }

    /// Sum of all operation lengths over all jobs.
    pub fn total_processing_time(&self) -> Time {
        self.jobs
            .iter()
            .try_fold(0u64, |acc, j| acc.checked_add(j.length()))
            .expect("total processing time overflow")
    }
}

/// A processing order: a bijection on job indices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct JobPermutation {
    order: Vec<usize>,
}

impl JobPermutation {
    pub fn new(order: Vec<usize>) -> Result<Self> {
        let n = order.len();
        if n == 0 {
            return Err(Error::BadPermutation);
        }
        let mut seen = vec![false; n];
        for &j in &order {
            if j >= n || seen[j] {
                return Err(Error::BadPermutation);
            }
            seen[j] = true;
        }
        Ok(JobPermutation { order })
    }

    pub fn identity(n: usize) -> Self {
        JobPermutation { order: (0..n).collect() }
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }
}

/// Makespan of the no-wait schedule processing jobs in order `sigma`:
/// the consecutive start gaps summed, plus the length of the last job.
///
/// Panics if `sigma` does not cover the instance's jobs.
pub fn makespan(inst: &FlowshopInstance, sigma: &JobPermutation) -> Time {
    assert_eq!(
        sigma.len(),
        inst.n(),
        "makespan: permutation does not match the instance"
    );
    let order = sigma.order();
    let mut total: Time = 0;
    for pair in order.windows(2) {
        total = total
            .checked_add(delta(inst.job(pair[0]), inst.job(pair[1])))
            .expect("makespan overflow");
    }
    total
        .checked_add(inst.job(*order.last().unwrap()).length())
        .expect("makespan overflow")
}

/// A feasible schedule: per-position start offsets (in permutation order)
/// and the completion time of the final operation.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Schedule {
    order: JobPermutation,
    starts: Vec<Time>,
    length: Time,
}

impl Schedule {
    pub fn order(&self) -> &JobPermutation {
        &self.order
    }

    /// Start time of the job at each position of the permutation.
    pub fn starts(&self) -> &[Time] {
        &self.starts
    }

    pub fn length(&self) -> Time {
        self.length
    }
}

/// Discrete-event construction of the earliest feasible schedule for
/// `sigma`: machine availability times are tracked per machine and each job
/// starts at the smallest offset at which none of its operations would
/// begin before the previous job's operation on the same machine completes
/// (zero-length operations compared as ordered points).
///
/// This never evaluates [`delta`] and serves as an independent oracle for
/// it: the returned length always equals [`makespan`] for the same inputs.
pub fn simulate_schedule(inst: &FlowshopInstance, sigma: &JobPermutation) -> Schedule {
    assert_eq!(
        sigma.len(),
        inst.n(),
        "simulate_schedule: permutation does not match the instance"
    );
    let m = inst.machines();
    // free[q]: completion time of the latest operation scheduled on machine q.
    let mut free: Vec<Time> = vec![0; m];
    let mut starts = Vec::with_capacity(inst.n());
    for &j in sigma.order() {
        let job = inst.job(j);
        let mut start: Time = 0;
        let mut before: Time = 0; // processing time of this job on earlier machines
        for (&busy_until, &op) in free.iter().zip(job.ops()) {
            // the operation begins at start + before, no earlier than the
            // machine becomes free
            let need = busy_until.saturating_sub(before);
            if need > start {
                start = need;
            }
            before = before.checked_add(op).expect("schedule overflow");
        }
        let mut done = start;
        for (busy_until, &op) in free.iter_mut().zip(job.ops()) {
            done = done.checked_add(op).expect("schedule overflow");
            if done > *busy_until {
                *busy_until = done;
            }
        }
        if let Some(&prev) = starts.last() {
            debug_assert!(start >= prev, "start times must be nondecreasing");
        }
        starts.push(start);
    }
    Schedule {
        order: sigma.clone(),
        starts,
        length: free[m - 1],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn job(ops: &[Time]) -> Job {
        Job::new(ops.to_vec())
    }

    #[test]
    fn delta_two_machines() {
        assert_eq!(delta(&job(&[3, 2]), &job(&[1, 4])), 4);
        assert_eq!(delta(&job(&[1, 4]), &job(&[3, 2])), 2);
    }

    #[test]
    fn delta_constant_job_self_distance() {
        let a = job(&[2, 2, 2]);
        assert_eq!(delta(&a, &a), 2);
    }

    #[test]
    fn delta_zero_one_blocks() {
        // two staggered unit blocks on six machines
        let a = job(&[0, 1, 1, 1, 0, 0]);
        let b = job(&[0, 0, 1, 1, 1, 0]);
        assert_eq!(delta(&a, &b), 2);
    }

    #[test]
    fn delta_self_distance_is_max_op() {
        let a = job(&[4, 0, 7, 2]);
        assert_eq!(delta(&a, &a), 7);
    }

    #[test]
    #[should_panic(expected = "machine count")]
    fn delta_rejects_mismatched_machines() {
        delta(&job(&[1]), &job(&[1, 2]));
    }

    #[test]
    fn job_length() {
        assert_eq!(job(&[3, 2]).length(), 5);
        assert_eq!(job(&[0, 0, 0]).length(), 0);
    }

    #[test]
    fn concat() {
        let ab = concat_jobs(&[job(&[0, 1]), job(&[1, 0])]);
        assert_eq!(ab.ops(), &[0, 1, 1, 0]);
        let single = concat_jobs(&[job(&[5, 6])]);
        assert_eq!(single.ops(), &[5, 6]);
    }

    #[test]
    fn makespan_two_jobs() {
        let inst = FlowshopInstance::new(vec![job(&[3, 2]), job(&[1, 4])]).unwrap();
        let forward = JobPermutation::new(vec![0, 1]).unwrap();
        let backward = JobPermutation::new(vec![1, 0]).unwrap();
        assert_eq!(makespan(&inst, &forward), 9);
        assert_eq!(makespan(&inst, &backward), 7);
    }

    #[test]
    fn makespan_single_job() {
        let inst = FlowshopInstance::new(vec![job(&[3, 2])]).unwrap();
        assert_eq!(makespan(&inst, &JobPermutation::identity(1)), 5);
    }

    #[test]
    fn simulate_matches_makespan_examples() {
        let inst = FlowshopInstance::new(vec![job(&[3, 2]), job(&[1, 4])]).unwrap();
        let sigma = JobPermutation::new(vec![0, 1]).unwrap();
        let schedule = simulate_schedule(&inst, &sigma);
        assert_eq!(schedule.starts(), &[0, 4]);
        assert_eq!(schedule.length(), 9);

        let single = FlowshopInstance::new(vec![job(&[3, 2])]).unwrap();
        let schedule = simulate_schedule(&single, &JobPermutation::identity(1));
        assert_eq!(schedule.starts(), &[0]);
        assert_eq!(schedule.length(), 5);

        let twins = FlowshopInstance::new(vec![job(&[1, 1]), job(&[1, 1])]).unwrap();
        let schedule = simulate_schedule(&twins, &JobPermutation::identity(2));
        assert_eq!(schedule.starts(), &[0, 1]);
        assert_eq!(schedule.length(), 3);
    }

    #[test]
    fn simulate_orders_zero_length_operations() {
        // the second job's zero-length tail operation still waits for the
        // first job's operation on that machine
        let inst = FlowshopInstance::new(vec![job(&[0, 5]), job(&[1, 0])]).unwrap();
        let sigma = JobPermutation::identity(2);
        let schedule = simulate_schedule(&inst, &sigma);
        assert_eq!(schedule.starts(), &[0, 4]);
        assert_eq!(schedule.length(), makespan(&inst, &sigma));
    }

    #[test]
    fn permutation_validation() {
        assert!(JobPermutation::new(vec![0, 2, 1]).is_ok());
        assert_eq!(JobPermutation::new(vec![0, 0, 1]), Err(Error::BadPermutation));
        assert_eq!(JobPermutation::new(vec![1, 2, 3]), Err(Error::BadPermutation));
        assert_eq!(JobPermutation::new(vec![]), Err(Error::BadPermutation));
    }

    #[test]
    fn instance_validation() {
        assert!(FlowshopInstance::new(vec![]).is_err());
        assert!(FlowshopInstance::new(vec![job(&[1]), job(&[1, 2])]).is_err());
        assert!(FlowshopInstance::new(vec![Job::new(vec![])]).is_err());
    }
}

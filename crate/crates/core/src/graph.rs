//! Distance-matrix instances for ATSP and ATSPP, with semimetric
//! validation, tour/path costing, shortcutting, and the standard dummy-job
//! reduction from no-wait flowshop to ATSP.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, MetricViolation, Result};
use crate::flowshop::{delta, FlowshopInstance, Job, JobPermutation};

/// Whether a matrix describes a cycle (ATSP) or path (ATSPP) instance.
///
/// Path instances carry designated endpoints only when a construction
/// fixes them; otherwise both endpoints are free and exact solvers
/// minimize over all endpoint pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Kind {
    Atsp,
    Atspp { endpoints: Option<(usize, usize)> },
}

/// Square nonnegative integer distance matrix.
///
/// The semimetric properties (zero diagonal, triangle inequality) are
/// validated on demand by [`WeightMatrix::validate_semimetric`], never
/// silently assumed.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WeightMatrix {
    n: usize,
    kind: Kind,
    d: Vec<u64>,
}

impl WeightMatrix {
    /// All-zero matrix on `n` vertices.
    pub fn zero(n: usize, kind: Kind) -> Self {
        WeightMatrix { n, kind, d: vec![0; n * n] }
    }

    pub fn from_rows(rows: Vec<Vec<u64>>, kind: Kind) -> Result<Self> {
        let n = rows.len();
        let mut d = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotSquare { row: i, len: row.len(), n });
            }
            d.extend_from_slice(row);
        }
        Ok(WeightMatrix { n, kind, d })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn set_kind(&mut self, kind: Kind) {
        self.kind = kind;
    }

    pub fn weight(&self, u: usize, v: usize) -> u64 {
        self.d[u * self.n + v]
    }

    pub fn set_weight(&mut self, u: usize, v: usize, w: u64) {
        self.d[u * self.n + v] = w;
    }

    /// Largest arc weight (the diagonal never competes since it must be 0).
    pub fn max_weight(&self) -> u64 {
        self.d.iter().copied().max().unwrap_or(0)
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u64]> + '_ {
        self.d.chunks(self.n)
    }

    /// Checks the zero diagonal and the triangle inequality. Violations
    /// are reported, not panicked on: the first offending vertex or the
    /// lexicographically first offending triple `(u, w, v)` with
    /// `d(u, v) > d(u, w) + d(w, v)`.
    pub fn validate_semimetric(&self) -> core::result::Result<(), MetricViolation> {
        for u in 0..self.n {
            if self.weight(u, u) != 0 {
                return Err(MetricViolation::Diagonal { vertex: u });
            }
        }
        for u in 0..self.n {
            for w in 0..self.n {
                if w == u {
                    continue;
                }
                for v in 0..self.n {
                    if v == w {
                        continue;
                    }
                    let direct = self.weight(u, v) as u128;
                    let detour = self.weight(u, w) as u128 + self.weight(w, v) as u128;
                    if direct > detour {
                        return Err(MetricViolation::Triangle { u, w, v });
                    }
                }
            }
        }
        Ok(())
    }
}

/// A Hamiltonian cycle, stored as the visiting order; the closing arc from
/// the last vertex back to the first is implicit.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Tour {
    order: Vec<usize>,
}

impl Tour {
    pub fn new(order: Vec<usize>) -> Result<Self> {
        check_permutation(&order, 1)?;
        Ok(Tour { order })
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

    /// The same cyclic tour, rotated to start at `v`.
    pub fn rotated_to(&self, v: usize) -> Tour {
        let pos = self
            .order
            .iter()
            .position(|&x| x == v)
            .expect("rotated_to: vertex not on tour");
        let mut order = Vec::with_capacity(self.order.len());
        order.extend_from_slice(&self.order[pos..]);
        order.extend_from_slice(&self.order[..pos]);
        Tour { order }
    }
}

/// A Hamiltonian path: a linear order over all vertices, endpoints distinct.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HamPath {
    order: Vec<usize>,
}

impl HamPath {
    pub fn new(order: Vec<usize>) -> Result<Self> {
        check_permutation(&order, 2)?;
        Ok(HamPath { order })
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

fn check_permutation(order: &[usize], min_len: usize) -> Result<()> {
    let n = order.len();
    if n < min_len {
        return Err(Error::BadPermutation);
    }
    let mut seen = vec![false; n];
    for &v in order {
        if v >= n || seen[v] {
            return Err(Error::BadPermutation);
        }
        seen[v] = true;
    }
    Ok(())
}

/// Total weight of the tour, closing arc included.
pub fn tour_cost(m: &WeightMatrix, tour: &Tour) -> u64 {
    assert_eq!(tour.len(), m.n(), "tour_cost: tour does not cover the matrix");
    let order = tour.order();
    let mut cost: u64 = 0;
    for pair in order.windows(2) {
        cost = cost.checked_add(m.weight(pair[0], pair[1])).expect("tour cost overflow");
    }
    cost.checked_add(m.weight(*order.last().unwrap(), order[0]))
        .expect("tour cost overflow")
}

/// Total weight of the path.
pub fn path_cost(m: &WeightMatrix, path: &HamPath) -> u64 {
    assert_eq!(path.len(), m.n(), "path_cost: path does not cover the matrix");
    walk_cost(m, path.order())
}

/// Sum of consecutive arc weights along an arbitrary vertex sequence.
pub fn walk_cost(m: &WeightMatrix, walk: &[usize]) -> u64 {
    let mut cost: u64 = 0;
    for pair in walk.windows(2) {
        cost = cost.checked_add(m.weight(pair[0], pair[1])).expect("walk cost overflow");
    }
    cost
}

/// Shortcuts a closed walk covering every vertex into a tour by keeping the
/// first occurrence of each vertex. Under the triangle inequality the tour
/// costs no more than the walk.
///
/// Panics if the walk misses a vertex.
pub fn shortcut(m: &WeightMatrix, walk: &[usize]) -> Tour {
    let mut seen = vec![false; m.n()];
    let mut order = Vec::with_capacity(m.n());
    for &v in walk {
        assert!(v < m.n(), "shortcut: vertex out of range");
        if !seen[v] {
            seen[v] = true;
            order.push(v);
        }
    }
    assert!(
        order.len() == m.n(),
        "shortcut: walk does not cover every vertex"
    );
    Tour { order }
}

/// Provenance of the flowshop-to-ATSP reduction, enough to map tours of
/// the reduced matrix back to job orders.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DummyTrace {
    /// Vertex index of the all-zero dummy job.
    pub dummy: usize,
    /// Number of real jobs.
    pub jobs: usize,
}

/// Standard reduction from no-wait flowshop to ATSP: vertex 0 is an
/// all-zero dummy job, vertex `j + 1` is job `j`, arcs carry the start-gap
/// distance with the diagonal forced to zero. The optimal tour value of
/// the output equals the optimal makespan of the input; the dummy's
/// closing arc contributes exactly the length of the last job.
pub fn nwfs_to_atsp(inst: &FlowshopInstance) -> (WeightMatrix, DummyTrace) {
    let n = inst.n();
    let dummy = Job::zero(inst.machines());
    let mut all: Vec<&Job> = Vec::with_capacity(n + 1);
    all.push(&dummy);
    all.extend(inst.jobs());
    let mut m = WeightMatrix::zero(n + 1, Kind::Atsp);
    for u in 0..=n {
        for v in 0..=n {
            if u != v {
                m.set_weight(u, v, delta(all[u], all[v]));
            }
        }
    }
    (m, DummyTrace { dummy: 0, jobs: n })
}

/// Inverse of [`nwfs_to_atsp`]: rotates the tour to the dummy vertex,
/// drops it, and reads the remaining vertices as a job order. The makespan
/// of the result equals the cost of `tour` on the reduced matrix.
pub fn atsp_tour_to_permutation(trace: &DummyTrace, tour: &Tour) -> JobPermutation {
    assert_eq!(tour.len(), trace.jobs + 1, "tour does not match the trace");
    let rotated = tour.rotated_to(trace.dummy);
    let order: Vec<usize> = rotated.order()[1..].iter().map(|&v| v - 1).collect();
    JobPermutation::new(order).expect("tour yields a permutation")
}

/// Start-gap distance matrix of a job set with the diagonal zeroed, as a
/// plain ATSP matrix.
pub fn delta_matrix(jobs: &[Job]) -> WeightMatrix {
    let n = jobs.len();
    let mut m = WeightMatrix::zero(n, Kind::Atsp);
    for u in 0..n {
        for v in 0..n {
            if u != v {
                m.set_weight(u, v, delta(&jobs[u], &jobs[v]));
            }
        }
    }
    m
}

impl From<MetricViolation> for Error {
    fn from(v: MetricViolation) -> Self {
        Error::NotSemimetric(v)
    }
}

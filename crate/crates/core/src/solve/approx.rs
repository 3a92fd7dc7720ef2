//! Cycle-cover based approximation: an exact minimum-cost cycle cover as
//! the building block, the repeated-contraction ATSP approximation of
//! Frieze, Galbiati and Maffioli (1982) with a log2(n) guarantee, and its
//! refinement for no-wait flowshop where representatives are chosen by
//! job length, giving a makespan within (ceil(log2 m) + 1) times optimum.

use alloc::vec;
use alloc::vec::Vec;

use super::assignment::{solve_assignment, FORBIDDEN};
use super::ceil_log2;
use crate::flowshop::{makespan, FlowshopInstance, JobPermutation, Time};
use crate::graph::{nwfs_to_atsp, shortcut, Kind, Tour, WeightMatrix};

/// Vertex-disjoint directed cycles covering every vertex, no fixed points.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CycleCover {
    successor: Vec<usize>,
}

impl CycleCover {
    pub fn successor(&self) -> &[usize] {
        &self.successor
    }

    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.successor.iter().copied().enumerate()
    }

    pub fn cost(&self, m: &WeightMatrix) -> u64 {
        self.arcs()
            .map(|(u, v)| m.weight(u, v))
            .try_fold(0u64, u64::checked_add)
            .expect("cover cost overflow")
    }

    /// Cycles listed from their smallest vertex, ordered by that vertex.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.successor.len();
        let mut seen = vec![false; n];
        let mut cycles = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut v = start;
            while !seen[v] {
                seen[v] = true;
                cycle.push(v);
                v = self.successor[v];
            }
            cycles.push(cycle);
        }
        cycles
    }

    pub fn cycle_count(&self) -> usize {
        self.cycles().len()
    }
}

/// Exact minimum-cost cycle cover without fixed points, computed as a
/// minimum-cost perfect bipartite matching with the diagonal excluded.
/// Its cost never exceeds the optimal tour cost, since every tour is a
/// cycle cover.
///
/// Panics on fewer than two vertices.
pub fn min_cycle_cover(m: &WeightMatrix) -> CycleCover {
    let n = m.n();
    assert!(n >= 2, "min_cycle_cover needs at least two vertices");
    let successor = solve_assignment(n, |i, j| {
        if i == j {
            FORBIDDEN
        } else {
            let w = m.weight(i, j);
            assert!(w < FORBIDDEN as u64, "arc weight too large for the matching solver");
            w as i64
        }
    });
    for (i, &j) in successor.iter().enumerate() {
        assert_ne!(i, j, "cycle cover contains a fixed point");
    }
    CycleCover { successor }
}

/// Submatrix induced by `vertices` (local indices follow the given order).
fn induced(m: &WeightMatrix, vertices: &[usize]) -> WeightMatrix {
    let mut sub = WeightMatrix::zero(vertices.len(), Kind::Atsp);
    for (a, &u) in vertices.iter().enumerate() {
        for (b, &v) in vertices.iter().enumerate() {
            sub.set_weight(a, b, m.weight(u, v));
        }
    }
    sub
}

/// Euler circuit of the arc multiset, as a closed vertex walk. Arcs out of
/// each vertex are consumed in ascending target order, starting from the
/// smallest vertex with any arc, so the walk is deterministic.
///
/// Panics if the multigraph is not connected over its arc set (every
/// vertex in- and out-degree is balanced by construction here).
fn euler_circuit(n: usize, arcs: &[(usize, usize)]) -> Vec<usize> {
    assert!(!arcs.is_empty(), "euler_circuit: no arcs");
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in arcs {
        adj[u].push(v);
    }
    for targets in adj.iter_mut() {
        targets.sort_unstable();
    }
    let start = arcs.iter().map(|&(u, _)| u).min().unwrap();
    let mut next = vec![0usize; n];
    let mut stack = vec![start];
    let mut walk = Vec::with_capacity(arcs.len() + 1);
    while let Some(&v) = stack.last() {
        if next[v] < adj[v].len() {
            let w = adj[v][next[v]];
            next[v] += 1;
            stack.push(w);
        } else {
            walk.push(stack.pop().unwrap());
        }
    }
    walk.reverse();
    assert_eq!(
        walk.len(),
        arcs.len() + 1,
        "cycle-cover union is not connected"
    );
    walk
}

/// Repeated cycle-cover approximation for ATSP: cover, keep one
/// representative per cycle (the lowest vertex index), contract, repeat
/// until a cover is a single cycle; the union of all covers is Eulerian
/// and shortcuts to a tour of cost at most ceil(log2 n) times optimum on
/// semimetric instances.
pub fn fgm_atsp(m: &WeightMatrix) -> Tour {
    let n = m.n();
    assert!(n >= 1, "fgm_atsp: empty instance");
    if n == 1 {
        return Tour::new(vec![0]).unwrap();
    }
    let mut active: Vec<usize> = (0..n).collect();
    let mut union_arcs: Vec<(usize, usize)> = Vec::new();
    loop {
        let sub = induced(m, &active);
        let cover = min_cycle_cover(&sub);
        union_arcs.extend(cover.arcs().map(|(a, b)| (active[a], active[b])));
        let cycles = cover.cycles();
        if cycles.len() == 1 {
            break;
        }
        let mut reps: Vec<usize> = cycles
            .iter()
            .map(|cycle| cycle.iter().map(|&l| active[l]).min().unwrap())
            .collect();
        reps.sort_unstable();
        active = reps;
    }
    let walk = euler_circuit(n, &union_arcs);
    shortcut(m, &walk)
}

/// Index-order Hamiltonian cycle on the surviving vertices, as arcs. The
/// choice is arbitrary for correctness; index order keeps it
/// deterministic.
///
/// Panics on fewer than two survivors.
pub fn hamiltonian_on_survivors(survivors: &[usize]) -> Vec<(usize, usize)> {
    assert!(survivors.len() >= 2, "need at least two survivors");
    let mut arcs: Vec<(usize, usize)> =
        survivors.windows(2).map(|w| (w[0], w[1])).collect();
    arcs.push((*survivors.last().unwrap(), survivors[0]));
    arcs
}

/// One contraction level of [`nwfs_log_m_approx`].
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CoverLevel {
    /// Vertices alive at this level (indices into the reduced matrix).
    pub vertices: Vec<usize>,
    /// Cover arcs, in reduced-matrix vertex ids.
    pub arcs: Vec<(usize, usize)>,
    pub cost: u64,
    /// One vertex per cycle, the shortest job (ties to the lowest index).
    pub representatives: Vec<usize>,
}

/// Full record of an approximation run, for inspection and reporting.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ApproxRun {
    pub levels: Vec<CoverLevel>,
    /// Level whose cover was a single cycle, if the run ended early.
    pub early_exit: Option<usize>,
    /// Vertices left after all levels when no single cycle appeared.
    pub survivors: Vec<usize>,
    pub tour: Tour,
    pub order: JobPermutation,
    pub makespan: Time,
}

/// Approximation algorithm for no-wait flowshop makespan with guarantee
/// (ceil(log2 m) + 1) times optimum.
///
/// Reduces to ATSP with a dummy job, then runs at most ceil(log2 m)
/// cycle-cover contraction levels, choosing the shortest job of each cycle
/// as its representative. If some cover is a single cycle the union of
/// covers so far is shortcut directly; otherwise an index-order cycle on
/// the survivors is added first. Survivor total length is bounded by the
/// per-machine load, which is why log2 of the machine count (not the job
/// count) governs the guarantee.
pub fn nwfs_log_m_approx(inst: &FlowshopInstance) -> (JobPermutation, ApproxRun) {
    let (matrix, trace) = nwfs_to_atsp(inst);
    let job_length = |v: usize| -> Time {
        if v == trace.dummy {
            0
        } else {
            inst.job(v - 1).length()
        }
    };
    let max_levels = ceil_log2(inst.machines()) as usize;

    let mut active: Vec<usize> = (0..matrix.n()).collect();
    let mut union_arcs: Vec<(usize, usize)> = Vec::new();
    let mut levels: Vec<CoverLevel> = Vec::new();
    let mut early_exit = None;

    for level in 0..max_levels {
        let sub = induced(&matrix, &active);
        let cover = min_cycle_cover(&sub);
        let arcs: Vec<(usize, usize)> =
            cover.arcs().map(|(a, b)| (active[a], active[b])).collect();
        let cost = cover.cost(&sub);
        let cycles = cover.cycles();
        let mut representatives: Vec<usize> = cycles
            .iter()
            .map(|cycle| {
                cycle
                    .iter()
                    .map(|&l| active[l])
                    .min_by_key(|&g| (job_length(g), g))
                    .unwrap()
            })
            .collect();
        representatives.sort_unstable();
        union_arcs.extend(arcs.iter().copied());
        let single = cycles.len() == 1;
        levels.push(CoverLevel { vertices: active.clone(), arcs, cost, representatives: representatives.clone() });
        if single {
            early_exit = Some(level);
            break;
        }
        assert!(
            representatives.len() * 2 <= active.len(),
            "contraction must at least halve the vertex count"
        );
        active = representatives;
    }

    let mut survivors = Vec::new();
    if early_exit.is_none() {
        survivors = active;
        assert!(survivors.len() >= 2, "survivor set collapsed without a single-cycle cover");
        union_arcs.extend(hamiltonian_on_survivors(&survivors));
    }

    let walk = euler_circuit(matrix.n(), &union_arcs);
    let tour = shortcut(&matrix, &walk);
    let order = crate::graph::atsp_tour_to_permutation(&trace, &tour);
    let value = makespan(inst, &order);
    let run = ApproxRun {
        levels,
        early_exit,
        survivors,
        tour,
        order: order.clone(),
        makespan: value,
    };
    (order, run)
}

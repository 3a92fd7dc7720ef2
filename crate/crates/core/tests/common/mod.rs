//! Shared generators for the integration tests: random instances that are
//! valid by construction (semimetrics via shortest-path closure).

use nowait_core::flowshop::{FlowshopInstance, Job};
use nowait_core::graph::{Kind, WeightMatrix};
use rand::Rng;

pub fn random_semimetric<R: Rng>(rng: &mut R, n: usize, max_w: u64) -> WeightMatrix {
    let mut m = WeightMatrix::zero(n, Kind::Atsp);
    for u in 0..n {
        for v in 0..n {
            if u != v {
                m.set_weight(u, v, rng.gen_range(0..=max_w));
            }
        }
    }
    metric_closure(&mut m);
    m
}

pub fn metric_closure(m: &mut WeightMatrix) {
    let n = m.n();
    for w in 0..n {
        for u in 0..n {
            for v in 0..n {
                let detour = m.weight(u, w) + m.weight(w, v);
                if detour < m.weight(u, v) {
                    m.set_weight(u, v, detour);
                }
            }
        }
    }
    for u in 0..n {
        m.set_weight(u, u, 0);
    }
}

pub fn random_flowshop<R: Rng>(rng: &mut R, n: usize, m: usize, max_t: u64) -> FlowshopInstance {
    let jobs: Vec<Job> = (0..n)
        .map(|_| Job::new((0..m).map(|_| rng.gen_range(0..=max_t)).collect()))
        .collect();
    FlowshopInstance::new(jobs).unwrap()
}

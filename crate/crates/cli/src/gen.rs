//! Deterministic random instance generators. Semimetrics are produced by
//! closing arbitrary nonnegative draws under all-pairs shortest paths, so
//! every generated matrix validates at any size.

use nowait_core::flowshop::{FlowshopInstance, Job};
use nowait_core::graph::{Kind, WeightMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn gen_random_semimetric(n: usize, max_w: u64, seed: u64) -> WeightMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    semimetric_with_rng(&mut rng, n, max_w)
}

pub fn semimetric_with_rng<R: Rng>(rng: &mut R, n: usize, max_w: u64) -> WeightMatrix {
    let mut m = WeightMatrix::zero(n, Kind::Atsp);
    for u in 0..n {
        for v in 0..n {
            if u != v {
                m.set_weight(u, v, rng.gen_range(0..=max_w));
            }
        }
    }
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
    m
}

pub fn gen_random_flowshop(n: usize, machines: usize, max_t: u64, seed: u64) -> FlowshopInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    flowshop_with_rng(&mut rng, n, machines, max_t)
}

pub fn flowshop_with_rng<R: Rng>(
    rng: &mut R,
    n: usize,
    machines: usize,
    max_t: u64,
) -> FlowshopInstance {
    let jobs: Vec<Job> = (0..n)
        .map(|_| Job::new((0..machines).map(|_| rng.gen_range(0..=max_t)).collect()))
        .collect();
    FlowshopInstance::new(jobs).expect("generated jobs share a machine count")
}

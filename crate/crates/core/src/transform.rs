//! Instance transformations that make ATSP amenable to job encodings:
//! weight normalization (bounded integer weights at a small relative
//! error), instance replication (drives the max weight below an epsilon
//! fraction of the optimum), and the cycle-to-path split. Every forward
//! construction returns a trace that its back-map consumes, so solutions
//! of the transformed instance map back to solutions of the original.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::{shortcut, walk_cost, HamPath, Kind, Tour, WeightMatrix};

/// An exact positive rational, kept as a numerator/denominator pair so the
/// ceiling arithmetic of the transformations never touches floating point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Fraction {
    num: u64,
    den: u64,
}

impl Fraction {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if num == 0 || den == 0 {
            return Err(Error::BadEpsilon);
        }
        Ok(Fraction { num, den })
    }

    pub fn one() -> Self {
        Fraction { num: 1, den: 1 }
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn is_at_most_one(&self) -> bool {
        self.num <= self.den
    }

    /// `ceil(k / self)`, exactly.
    pub fn ceil_div_into(&self, k: u64) -> u64 {
        let num = k as u128 * self.den as u128;
        u64::try_from(ceil_div(num, self.num as u128)).expect("fraction arithmetic overflow")
    }
}

pub(crate) fn ceil_div(a: u128, b: u128) -> u128 {
    assert!(b > 0);
    a.div_ceil(b)
}

/// Provenance of [`normalize_weights`].
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NormalizationTrace {
    /// Tour-value certificate the step size was derived from.
    pub r: u64,
    /// Step size `phi = eps * r / (n * ceil(log2 n))` as an exact rational.
    pub phi_num: u64,
    pub phi_den: u64,
    pub n: usize,
    pub max_weight_in: u64,
    pub max_weight_out: u64,
}

/// Rescales arc weights to small positive integers: add one step
/// `phi = eps * r / (n * ceil(log2 n))`, round up to the next multiple of
/// `phi`, divide by `phi`. The output keeps the triangle inequality, its
/// weights are at most `ceil(r / phi) + 1`, and any tour order loses at
/// most a `1 + O(eps)` factor relative to the input weights.
///
/// `r` must be the value of some Hamiltonian tour of `g` (the caller
/// typically takes it from [`crate::solve::fgm_atsp`], which keeps `r`
/// within `ceil(log2 n)` of optimal). Since every arc is a shortcut of a
/// tour segment, an `r` below the largest arc weight is rejected as an
/// inconsistent certificate.
pub fn normalize_weights(
    g: &WeightMatrix,
    eps: Fraction,
    r: u64,
) -> Result<(WeightMatrix, NormalizationTrace)> {
    let n = g.n();
    if n < 2 {
        return Err(Error::TooSmall { what: "normalization input", size: n, need: 2 });
    }
    g.validate_semimetric()?;
    let max_weight_in = g.max_weight();
    if r < max_weight_in {
        return Err(Error::BadCertificate { max_arc: max_weight_in, r });
    }
    let log = crate::solve::ceil_log2(n) as u128;
    let phi_num = eps.num as u128 * r as u128;
    let phi_den = eps.den as u128 * n as u128 * log;
    let mut out = WeightMatrix::zero(n, g.kind());
    for u in 0..n {
        for v in 0..n {
            if u == v {
                continue;
            }
            // r == 0 forces an all-zero instance; every arc becomes one step
            let w = if r == 0 {
                1
            } else {
                let scaled = ceil_div(g.weight(u, v) as u128 * phi_den, phi_num);
                u64::try_from(scaled).expect("normalized weight overflow") + 1
            };
            out.set_weight(u, v, w);
        }
    }
    let trace = NormalizationTrace {
        r,
        phi_num: u64::try_from(phi_num).expect("step numerator overflow"),
        phi_den: u64::try_from(phi_den).expect("step denominator overflow"),
        n,
        max_weight_in,
        max_weight_out: out.max_weight(),
    };
    Ok((out, trace))
}

/// Provenance of [`replicate_instance`].
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ReplicationTrace {
    /// Copy count `ceil(2 / eps)`.
    pub copies: usize,
    /// Anchor vertex of the input whose copies are merged.
    pub anchor: usize,
    /// Index of the merged supervertex in the output.
    pub supervertex: usize,
    /// `copy_maps[c][x]` is the output index of input vertex `x` in copy
    /// `c`; the anchor maps to the supervertex in every copy.
    pub copy_maps: Vec<Vec<usize>>,
    /// The input matrix, kept so the back-map is self-contained.
    pub matrix: WeightMatrix,
}

impl ReplicationTrace {
    /// Decodes an output vertex into (copy, input vertex).
    pub fn locate(&self, vertex: usize) -> (usize, usize) {
        let n = self.matrix.n();
        if vertex == self.supervertex {
            (0, self.anchor)
        } else {
            ((vertex - 1) / (n - 1), to_original(vertex, n, self.anchor))
        }
    }
}

fn to_original(vertex: usize, n: usize, anchor: usize) -> usize {
    // inverse of the within-copy layout below
    let slot = (vertex - 1) % (n - 1);
    if slot < anchor {
        slot
    } else {
        slot + 1
    }
}

/// `ceil(2 / eps)` copies of `g` glued at an anchor: the anchor's copies
/// merge into one supervertex, arcs inside a copy keep their weight, and
/// arcs between copies cost a trip through the anchor. The optimal tour
/// value of the output is exactly the copy count times the input optimum,
/// and the max weight at most doubles, which drives it below `eps` times
/// the output optimum.
pub fn replicate_instance(g: &WeightMatrix, eps: Fraction) -> (WeightMatrix, ReplicationTrace) {
    let n = g.n();
    assert!(n >= 2, "replicate_instance needs at least two vertices");
    let copies = eps.ceil_div_into(2).max(1) as usize;
    let anchor = 0usize;
    let out = build_replicated(g, copies, anchor);
    let mut copy_maps = vec![vec![0usize; n]; copies];
    for (c, map) in copy_maps.iter_mut().enumerate() {
        for (x, target) in map.iter_mut().enumerate() {
            *target = if x == anchor { 0 } else { place(n, anchor, c, x) };
        }
    }
    let trace = ReplicationTrace {
        copies,
        anchor,
        supervertex: 0,
        copy_maps,
        matrix: g.clone(),
    };
    (out, trace)
}

/// Output index of input vertex `x != anchor` in copy `c`; vertex 0 of the
/// output is the supervertex, copy `c` occupies `1 + c*(n-1)` onwards.
fn place(n: usize, anchor: usize, c: usize, x: usize) -> usize {
    debug_assert_ne!(x, anchor);
    let slot = if x < anchor { x } else { x - 1 };
    1 + c * (n - 1) + slot
}

fn build_replicated(g: &WeightMatrix, copies: usize, anchor: usize) -> WeightMatrix {
    let n = g.n();
    let out_n = copies * (n - 1) + 1;
    let mut out = WeightMatrix::zero(out_n, g.kind());
    for c1 in 0..copies {
        for x1 in 0..n {
            if x1 == anchor {
                continue;
            }
            let u = place(n, anchor, c1, x1);
            out.set_weight(0, u, g.weight(anchor, x1));
            out.set_weight(u, 0, g.weight(x1, anchor));
            for c2 in 0..copies {
                for x2 in 0..n {
                    if x2 == anchor {
                        continue;
                    }
                    let v = place(n, anchor, c2, x2);
                    if u == v {
                        continue;
                    }
                    let w = if c1 == c2 {
                        g.weight(x1, x2)
                    } else {
                        g.weight(x1, anchor) + g.weight(anchor, x2)
                    };
                    out.set_weight(u, v, w);
                }
            }
        }
    }
    out
}

/// Maps a tour of the replicated instance back to a tour of the input.
///
/// Cross-copy arcs are rerouted through the supervertex at equal cost,
/// which decomposes the tour into anchor-to-anchor segments, each inside
/// one copy. Per copy, its segments concatenate into a closed walk through
/// the anchor that shortcuts to a Hamiltonian cycle of the input; the
/// cheapest copy wins, so the result costs at most the tour cost divided
/// by the copy count.
pub fn backmap_replication(trace: &ReplicationTrace, tour: &Tour) -> Tour {
    let g = &trace.matrix;
    let n = g.n();
    assert_eq!(
        tour.len(),
        trace.copies * (n - 1) + 1,
        "tour does not match the replication trace"
    );
    let rotated = tour.rotated_to(trace.supervertex);
    // anchor-to-anchor segments of original vertices, tagged by copy
    let mut segments: Vec<(usize, Vec<usize>)> = Vec::new();
    for &v in &rotated.order()[1..] {
        let (copy, original) = trace.locate(v);
        match segments.last_mut() {
            Some((c, seg)) if *c == copy => seg.push(original),
            _ => segments.push((copy, vec![original])),
        }
    }
    // rerouting preserves total cost exactly
    let mut rerouted: u64 = 0;
    for (_, seg) in &segments {
        rerouted += g.weight(trace.anchor, seg[0]);
        rerouted += walk_cost(g, seg);
        rerouted += g.weight(*seg.last().unwrap(), trace.anchor);
    }
    let replicated = build_replicated(g, trace.copies, trace.anchor);
    assert_eq!(
        rerouted,
        crate::graph::tour_cost(&replicated, tour),
        "rerouted walk cost must equal the tour cost"
    );

    let mut best: Option<(u64, Tour)> = None;
    for copy in 0..trace.copies {
        let mut walk = vec![trace.anchor];
        for (c, seg) in &segments {
            if *c == copy {
                walk.extend_from_slice(seg);
                walk.push(trace.anchor);
            }
        }
        let cost = walk_cost(g, &walk);
        let cycle = shortcut(g, &walk);
        let cycle_cost = crate::graph::tour_cost(g, &cycle);
        assert!(cycle_cost <= cost, "shortcutting must not increase cost");
        if best.as_ref().is_none_or(|(b, _)| cycle_cost < *b) {
            best = Some((cycle_cost, cycle));
        }
    }
    best.expect("replicated tour covers every copy").1
}

/// Provenance of [`atsp_to_atspp`].
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SplitTrace {
    /// The vertex of the input that was split.
    pub split_vertex: usize,
    /// Output index inheriting the outgoing arcs (same as `split_vertex`).
    pub v_out: usize,
    /// Output index inheriting the incoming arcs (appended last).
    pub v_in: usize,
    /// Max arc weight of the input; padding arcs cost twice this.
    pub w: u64,
    /// The input matrix, kept so the back-map is self-contained.
    pub matrix: WeightMatrix,
}

impl SplitTrace {
    /// Arc weight of the split instance.
    pub fn split_weight(&self, x: usize, y: usize) -> u64 {
        let g = &self.matrix;
        if x == y {
            return 0;
        }
        if x == self.v_out {
            if y == self.v_in {
                0
            } else {
                g.weight(self.split_vertex, y)
            }
        } else if y == self.v_in {
            g.weight(x, self.split_vertex)
        } else if y == self.v_out || x == self.v_in {
            2 * self.w
        } else {
            g.weight(x, y)
        }
    }
}

/// Splits vertex `v` of an ATSP instance into `v_out` (keeping its
/// outgoing arcs) and `v_in` (keeping its incoming arcs, appended as the
/// last index), with a zero arc from `v_out` to `v_in` and all arcs that
/// would re-enter `v_out` or leave `v_in` padded to twice the max weight.
/// The optimal path value of the output equals the optimal tour value of
/// the input, and the triangle inequality is preserved.
pub fn atsp_to_atspp(g: &WeightMatrix, v: usize) -> Result<(WeightMatrix, SplitTrace)> {
    let n = g.n();
    if n < 3 {
        return Err(Error::TooSmall { what: "split input", size: n, need: 3 });
    }
    assert!(v < n, "split vertex out of range");
    let w = g.max_weight();
    let v_out = v;
    let v_in = n;
    let mut out = WeightMatrix::zero(n + 1, Kind::Atspp { endpoints: Some((v_out, v_in)) });
    let trace = SplitTrace { split_vertex: v, v_out, v_in, w, matrix: g.clone() };
    for x in 0..=n {
        for y in 0..=n {
            if x != y {
                out.set_weight(x, y, trace.split_weight(x, y));
            }
        }
    }
    Ok((out, trace))
}

/// Repairs an arbitrary Hamiltonian path of the split instance into one
/// running from `v_out` to `v_in`, then contracts the pair back into the
/// split vertex, yielding a tour of the input costing at most the path.
///
/// The repair never increases cost: rotating to put `v_out` first removes
/// an incoming padding arc, and moving `v_in` to the back trades two
/// ordinary arcs for one padding arc and the zero arc.
pub fn repair_and_backmap_path(trace: &SplitTrace, path: &HamPath) -> Tour {
    let n = trace.matrix.n();
    assert_eq!(path.len(), n + 1, "path does not match the split trace");
    let cost = |order: &[usize]| -> u64 {
        order.windows(2).map(|p| trace.split_weight(p[0], p[1])).sum()
    };
    let mut order: Vec<usize> = path.order().to_vec();
    let before = cost(&order);

    if order[0] != trace.v_out {
        let at = order.iter().position(|&x| x == trace.v_out).unwrap();
        order.rotate_left(at);
        let after = cost(&order);
        assert!(after <= before, "rotating to v_out must not increase cost");
    }
    if *order.last().unwrap() != trace.v_in {
        let from = cost(&order);
        let at = order.iter().position(|&x| x == trace.v_in).unwrap();
        order.remove(at);
        order.push(trace.v_in);
        let after = cost(&order);
        assert!(after <= from, "moving v_in to the back must not increase cost");
    }
    debug_assert_eq!(order[0], trace.v_out);
    let repaired = cost(&order);

    // contract (v_out, ..., v_in) into a cycle through the split vertex;
    // v_out reuses the split vertex's index, so dropping v_in suffices
    order.pop();
    let tour = Tour::new(order).expect("repaired path covers every vertex");
    assert_eq!(
        crate::graph::tour_cost(&trace.matrix, &tour),
        repaired,
        "contraction must preserve cost"
    );
    tour
}

//! Independent reference implementations used by the integration tests.
#![allow(dead_code)]

use geocross::{CrossingGraph, UnitVec};

type V = [f64; 3];

fn dot(a: V, b: V) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: V, b: V) -> V {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn norm(a: V) -> f64 {
    dot(a, a).sqrt()
}

fn dist(a: V, b: V) -> f64 {
    norm(cross(a, b)).atan2(dot(a, b))
}

/// Point at fraction `t` along the minor arc from `a` to `b`.
fn slerp(a: V, b: V, t: f64) -> V {
    let w = dist(a, b);
    let (s0, s1) = (((1.0 - t) * w).sin() / w.sin(), (t * w).sin() / w.sin());
    [
        s0 * a[0] + s1 * b[0],
        s0 * a[1] + s1 * b[1],
        s0 * a[2] + s1 * b[2],
    ]
}

/// Verdict of the sampling oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Oracle {
    Cross,
    Disjoint,
    /// Too close to a tangency or an endpoint for the sampling resolution.
    Ambiguous,
}

/// Walks `k` sample points along the first arc, looks for sign changes of
/// the side of the second arc's great circle, and measures whether the
/// approximate meeting point lies on the second arc.
pub fn sampled_crossing(a1: UnitVec, b1: UnitVec, a2: UnitVec, b2: UnitVec, k: usize) -> Oracle {
    let (a1, b1, a2, b2) = (a1.to_array(), b1.to_array(), a2.to_array(), b2.to_array());
    let nn = cross(a2, b2);
    let n2 = [nn[0] / norm(nn), nn[1] / norm(nn), nn[2] / norm(nn)];
    let len1 = dist(a1, b1);
    let len2 = dist(a2, b2);
    let step = len1 / k as f64;
    let tol = 4.0 * step.max(1e-9);
    let mut verdict = Oracle::Disjoint;
    let mut prev = slerp(a1, b1, 0.0);
    let mut sp = dot(n2, prev);
    for i in 1..=k {
        let p = slerp(a1, b1, i as f64 / k as f64);
        let s = dot(n2, p);
        if (sp > 0.0) != (s > 0.0) {
            let x = slerp(prev, p, sp.abs() / (sp.abs() + s.abs()));
            let slope = (s - sp).abs() / step;
            if i == 1 || i == k || dist(a1, x) < tol || dist(b1, x) < tol || slope < 1e-3 {
                return Oracle::Ambiguous;
            }
            if dist(a2, x) < tol || dist(b2, x) < tol {
                return Oracle::Ambiguous;
            }
            // On the arc the two distances add up to its length; off the arc
            // they exceed it by at least twice the distance to an endpoint.
            if dist(a2, x) + dist(x, b2) - len2 < tol {
                verdict = Oracle::Cross;
            }
        }
        prev = p;
        sp = s;
    }
    verdict
}

/// Triangles by enumerating all vertex triples of an adjacency matrix.
pub fn brute_force_triangles(g: &CrossingGraph) -> u64 {
    let n = g.vertex_count();
    let mut adj = vec![false; n * n];
    for (u, v) in g.edges() {
        adj[u * n + v] = true;
        adj[v * n + u] = true;
    }
    let mut t = 0;
    for a in 0..n {
        for b in a + 1..n {
            if !adj[a * n + b] {
                continue;
            }
            for c in b + 1..n {
                if adj[a * n + c] && adj[b * n + c] {
                    t += 1;
                }
            }
        }
    }
    t
}

/// Per-type triangle counts by triple enumeration, with edge classes given
/// explicitly and the crossing type computed from the node pairs.
pub fn brute_force_typed_triangles(
    g: &CrossingGraph,
    nodes: &[(u8, u8)],
) -> std::collections::BTreeMap<String, u64> {
    let letter = |x: usize, y: usize| {
        let (p, q) = (nodes[x], nodes[y]);
        match (p.0 == q.0) as u8 + (p.1 == q.1) as u8 {
            2 => 'B',
            1 => 'N',
            _ => 'C',
        }
    };
    let rank = |c: char| "CBN".find(c).unwrap();
    let n = g.vertex_count();
    let mut out = std::collections::BTreeMap::new();
    for a in 0..n {
        for b in a + 1..n {
            if !g.has_edge(a, b) {
                continue;
            }
            for c in b + 1..n {
                if g.has_edge(a, c) && g.has_edge(b, c) {
                    let mut t = [letter(a, b), letter(b, c), letter(a, c)];
                    t.sort_by_key(|&c| rank(c));
                    *out.entry(t.iter().collect::<String>()).or_insert(0) += 1;
                }
            }
        }
    }
    out
}

/// Small deterministic generator for test graphs.
pub struct Lcg(pub u64);

impl Lcg {
    pub fn next_f64(&mut self) -> f64 {
        self.0 = self
            .0
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        (self.0 >> 11) as f64 / (1u64 << 53) as f64
    }
}

pub fn random_graph(n: usize, p: f64, rng: &mut Lcg) -> CrossingGraph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.next_f64() < p {
                edges.push((u, v));
            }
        }
    }
    CrossingGraph::from_edges(n, &edges).unwrap()
}

//! Geodesic drawings of complete bipartite graphs: random drawings from a
//! pair of measures, antipodally closed drawings, and blow-ups of an
//! antipodal drawing of K₄,₄.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{
    cross_hit_prepared, general_position_check, orient, spherical_angle, triple_crossing_check,
    GeodesicSegment, GeomError, PreparedSegment, UnitVec, Vec3, Violation,
};
use crate::measures::{
    point_on_circle, sample_measure, sample_uniform_sphere, tangent_frame, MeasureError,
    MeasureSpec, RngStream,
};

/// Tolerance used when validating drawings.
pub const GENERAL_POSITION_EPS: f64 = 1e-12;

/// `2π(1 − 1/φ)`.
pub const GOLDEN_ANGLE: f64 = 2.399_963_229_728_653;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DrawingError {
    #[error("points not in general position: {0}")]
    GeneralPositionViolation(Violation),
    #[error("gave up after {0} rejected draws; the measure looks degenerate")]
    TooManyRejections(usize),
    #[error("antipodal construction needs |P| = |Q| (got {0} and {1})")]
    OddSize(usize, usize),
    #[error("no antipodal relabeling puts the base drawing in canonical position")]
    ConfigurationNotCanonical,
    #[error("invalid blow-up configuration: {0}")]
    InvalidConfig(String),
    #[error("malformed drawing: {0}")]
    Malformed(String),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Measure(#[from] MeasureError),
}

impl From<Violation> for DrawingError {
    fn from(v: Violation) -> Self {
        DrawingError::GeneralPositionViolation(v)
    }
}

/// Parameters of a blow-up D₄⁽ⁿ⁾.
///
/// Node ids: `0..4` are v₁, v̄₁, v₂, v̄₂ (part A) and `4..8` are w₁, w̄₁, w₂,
/// w̄₂ (part B).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlowupConfig {
    pub v1: UnitVec,
    pub v2: UnitVec,
    pub w1: UnitVec,
    pub w2: UnitVec,
    /// Angular radius of every node circle.
    pub r: f64,
    /// Vertices per node.
    pub n: usize,
    pub rotation_offsets: [f64; 8],
}

/// `min(10⁻³, 1/(10n))`, small enough for the exact bundle counts.
pub fn default_radius(n: usize) -> f64 {
    (1e-3f64).min(1.0 / (10.0 * n.max(1) as f64))
}

/// Node `k` is rotated by `k` golden angles.
pub fn default_rotation_offsets() -> [f64; 8] {
    std::array::from_fn(|k| (k as f64 * GOLDEN_ANGLE).rem_euclid(2.0 * PI))
}

impl BlowupConfig {
    pub fn new(v1: UnitVec, v2: UnitVec, w1: UnitVec, w2: UnitVec, r: f64, n: usize) -> Self {
        Self {
            v1,
            v2,
            w1,
            w2,
            r,
            n,
            rotation_offsets: default_rotation_offsets(),
        }
    }

    pub fn with_n(&self, n: usize) -> Self {
        Self { n, ..self.clone() }
    }

    pub fn with_r(&self, r: f64) -> Self {
        Self { r, ..self.clone() }
    }

    /// The eight node centers in node-id order.
    pub fn centers(&self) -> [UnitVec; 8] {
        [
            self.v1, -self.v1, self.v2, -self.v2, self.w1, -self.w1, self.w2, -self.w2,
        ]
    }

    /// Minimum angular distance between distinct node centers.
    pub fn min_center_distance(&self) -> f64 {
        let c = self.centers();
        let mut best = f64::INFINITY;
        for i in 0..8 {
            for j in i + 1..8 {
                best = best.min(c[i].angular_distance(c[j]));
            }
        }
        best
    }

    pub fn validate(&self) -> Result<(), DrawingError> {
        if self.n == 0 {
            return Err(DrawingError::InvalidConfig("n must be at least 1".into()));
        }
        if self.rotation_offsets.iter().any(|o| !o.is_finite()) {
            return Err(DrawingError::InvalidConfig(
                "non-finite rotation offset".into(),
            ));
        }
        // Great circles are closed under the antipodal map, so checking the
        // four base points covers all eight centers.
        general_position_check(&[self.v1, self.v2, self.w1, self.w2], GENERAL_POSITION_EPS)?;
        let bound = self.min_center_distance() / 4.0;
        if !(self.r > 0.0 && self.r < bound) {
            return Err(DrawingError::InvalidConfig(format!(
                "radius {} outside (0, {bound})",
                self.r
            )));
        }
        Ok(())
    }

    /// The two-antipodal-circle-pairs measures whose crossing graphon equals
    /// the blow-up limit: part A on the v-circles, part B on the w-circles.
    pub fn circle_measures(&self) -> (MeasureSpec, MeasureSpec) {
        let c = self.centers();
        (
            MeasureSpec::Circles {
                centers: c[0..4].to_vec(),
                radius: self.r,
            },
            MeasureSpec::Circles {
                centers: c[4..8].to_vec(),
                radius: self.r,
            },
        )
    }
}

/// Uniformly random base configuration, kept away from degeneracy by
/// `margin` radians (pairwise center distance and distance of any base
/// point from the great circle through two others). Candidates whose
/// blow-up points are not in general position are redrawn.
pub fn random_blowup_config(
    rng: &mut RngStream,
    n: usize,
    r: f64,
    margin: f64,
) -> Result<BlowupConfig, DrawingError> {
    for _ in 0..10_000 {
        let p: [UnitVec; 4] = std::array::from_fn(|_| sample_uniform_sphere(rng));
        let cfg = BlowupConfig::new(p[0], p[1], p[2], p[3], r, n);
        if cfg.min_center_distance() < margin {
            continue;
        }
        let mut ok = true;
        for i in 0..4 {
            for j in i + 1..4 {
                for k in j + 1..4 {
                    for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
                        let n = p[a].vec().cross(p[b].vec());
                        if (n.dot(p[c].vec()) / n.norm()).abs() < margin.sin() {
                            ok = false;
                        }
                    }
                }
            }
        }
        if ok && cfg.validate().is_ok() && blowup_drawing_unchecked(&cfg).is_ok() {
            return Ok(cfg);
        }
    }
    Err(DrawingError::TooManyRejections(10_000))
}

/// Blow-up bookkeeping attached to a drawing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlowupMetadata {
    pub config: BlowupConfig,
    /// Node id of every vertex, part A first, then part B.
    pub node_of_vertex: Vec<u8>,
}

/// Index of the bundle joining part-A node `a` (0..4) and part-B node
/// `b` (4..8), in `0..16`.
#[inline]
pub fn bundle_index(a: u8, b: u8) -> u8 {
    a * 4 + (b - 4)
}

/// The two node ids of bundle `k`.
#[inline]
pub fn bundle_nodes(k: u8) -> (u8, u8) {
    (k / 4, k % 4 + 4)
}

impl BlowupMetadata {
    /// Bundle of edge `(i, j)`, as the unordered node pair.
    pub fn bundle_of_edge(&self, i: usize, j: usize) -> (u8, u8) {
        let n_a = 4 * self.config.n;
        (self.node_of_vertex[i], self.node_of_vertex[n_a + j])
    }

    /// Bundle index (see [`bundle_index`]) of every drawing edge, in edge-id
    /// order.
    pub fn edge_bundles(&self) -> Vec<u8> {
        let n_a = 4 * self.config.n;
        let (a, b) = self.node_of_vertex.split_at(n_a);
        a.iter()
            .flat_map(|&na| b.iter().map(move |&nb| bundle_index(na, nb)))
            .collect()
    }
}

/// A geodesic drawing of `K_{nA,nB}`. Edge `(i, j)` joins `part_a[i]` and
/// `part_b[j]` and has id `i·nB + j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BipartiteDrawing {
    #[serde(rename = "partA")]
    pub part_a: Vec<UnitVec>,
    #[serde(rename = "partB")]
    pub part_b: Vec<UnitVec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blowup: Option<BlowupMetadata>,
}

impl BipartiteDrawing {
    pub fn new(part_a: Vec<UnitVec>, part_b: Vec<UnitVec>) -> Self {
        Self {
            part_a,
            part_b,
            blowup: None,
        }
    }

    pub fn edge_count(&self) -> usize {
        self.part_a.len() * self.part_b.len()
    }

    /// `(i, j)` of edge id `e`.
    #[inline]
    pub fn edge_endpoints(&self, e: usize) -> (usize, usize) {
        (e / self.part_b.len(), e % self.part_b.len())
    }

    pub fn segment(&self, e: usize) -> Result<GeodesicSegment, GeomError> {
        let (i, j) = self.edge_endpoints(e);
        GeodesicSegment::new(self.part_a[i], self.part_b[j])
    }

    /// All edge segments in edge-id order.
    pub fn segments(&self) -> Result<Vec<GeodesicSegment>, GeomError> {
        (0..self.edge_count()).map(|e| self.segment(e)).collect()
    }

    pub fn points(&self) -> Vec<UnitVec> {
        self.part_a
            .iter()
            .chain(self.part_b.iter())
            .copied()
            .collect()
    }

    /// Structural checks for drawings read from disk.
    pub fn check_structure(&self) -> Result<(), DrawingError> {
        if self.part_a.is_empty() || self.part_b.is_empty() {
            return Err(DrawingError::Malformed(
                "both parts must be non-empty".into(),
            ));
        }
        if let Some(meta) = &self.blowup {
            let n = meta.config.n;
            if self.part_a.len() != 4 * n || self.part_b.len() != 4 * n {
                return Err(DrawingError::Malformed(format!(
                    "blow-up with n = {n} needs {} vertices per part",
                    4 * n
                )));
            }
            if meta.node_of_vertex.len() != 8 * n {
                return Err(DrawingError::Malformed(
                    "node map has the wrong length".into(),
                ));
            }
            let (a, b) = meta.node_of_vertex.split_at(4 * n);
            if a.iter().any(|&k| k >= 4) || b.iter().any(|&k| !(4..8).contains(&k)) {
                return Err(DrawingError::Malformed("node id on the wrong side".into()));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("drawings always serialize")
    }

    pub fn from_json(s: &str) -> Result<Self, DrawingError> {
        let d: BipartiteDrawing =
            serde_json::from_str(s).map_err(|e| DrawingError::Malformed(e.to_string()))?;
        d.check_structure()?;
        Ok(d)
    }
}

/// For each edge, its crossings `(other edge, distance along the edge)`.
fn crossings_with_positions(
    segs: &[GeodesicSegment],
    n_b: usize,
) -> Result<Vec<Vec<(usize, f64)>>, GeomError> {
    let prepared: Vec<PreparedSegment> = segs.iter().map(|&s| PreparedSegment::new(s)).collect();
    let arc_pos = |e: usize, h: Vec3| {
        let a = segs[e].a.vec();
        a.cross(h).norm().atan2(a.dot(h))
    };
    // Crossings with later edges, with positions along both arcs.
    let upper: Vec<Vec<(usize, f64, f64)>> = (0..segs.len())
        .into_par_iter()
        .map(|e| {
            let (i, j) = (e / n_b, e % n_b);
            let mut out = Vec::new();
            for (row, chunk) in prepared.chunks_exact(n_b).enumerate().skip(i + 1) {
                for (col, s) in chunk.iter().enumerate() {
                    if col == j {
                        continue;
                    }
                    let f = row * n_b + col;
                    if let Some((he, hf)) = cross_hit_prepared(&prepared[e], s)? {
                        out.push((f, arc_pos(e, he), arc_pos(f, hf)));
                    }
                }
            }
            Ok(out)
        })
        .collect::<Result<_, GeomError>>()?;
    let mut per_edge: Vec<Vec<(usize, f64)>> = vec![Vec::new(); segs.len()];
    for (e, list) in upper.into_iter().enumerate() {
        for (f, pe, pf) in list {
            per_edge[e].push((f, pe));
            per_edge[f].push((e, pf));
        }
    }
    Ok(per_edge)
}

/// Validates a whole drawing: the vertex set (with `point_check` deciding
/// which vertices are compared) and the absence of triple crossings.
fn check_drawing(d: &BipartiteDrawing, eps: f64, points: &[UnitVec]) -> Result<(), DrawingError> {
    general_position_check(points, eps)?;
    let segs = d.segments()?;
    let mut per_edge = crossings_with_positions(&segs, d.part_b.len())?;
    triple_crossing_check(&mut per_edge, eps)?;
    Ok(())
}

/// General-position check of a drawing: all vertices, then triple
/// crossings among its edges.
pub fn drawing_general_position_check(d: &BipartiteDrawing, eps: f64) -> Result<(), DrawingError> {
    check_drawing(d, eps, &d.points())
}

/// Does `p` keep general position with respect to `existing`?
fn fits(p: UnitVec, existing: &[UnitVec], eps: f64) -> bool {
    for (i, &q) in existing.iter().enumerate() {
        if p.vec().cross(q.vec()).norm() <= eps {
            return false;
        }
        let pq = p.vec().cross(q.vec()).norm();
        for &s in &existing[i + 1..] {
            let span = pq
                .max(q.vec().cross(s.vec()).norm())
                .max(s.vec().cross(p.vec()).norm());
            if orient(p, q, s).abs() <= eps * span {
                return false;
            }
        }
    }
    true
}

/// A `(μ₁, μ₂)`-random drawing of `K_{n,n}`: part A from `mu1`, part B from
/// `mu2`, with draws that break general position rejected and redrawn.
pub fn random_bipartite_drawing(
    mu1: &MeasureSpec,
    mu2: &MeasureSpec,
    n: usize,
    rng: &mut RngStream,
) -> Result<BipartiteDrawing, DrawingError> {
    if n == 0 {
        return Err(DrawingError::InvalidConfig("n must be at least 1".into()));
    }
    mu1.validate()?;
    mu2.validate()?;
    let budget = 100 * n;
    let mut rejections = 0usize;
    let mut pts: Vec<UnitVec> = Vec::with_capacity(2 * n);
    for k in 0..2 * n {
        let mu = if k < n { mu1 } else { mu2 };
        loop {
            let p = sample_measure(mu, rng);
            if fits(p, &pts, GENERAL_POSITION_EPS) {
                pts.push(p);
                break;
            }
            rejections += 1;
            if rejections > budget {
                return Err(DrawingError::TooManyRejections(rejections));
            }
        }
    }
    let mut d = BipartiteDrawing::new(pts[..n].to_vec(), pts[n..].to_vec());
    loop {
        match drawing_general_position_check(&d, GENERAL_POSITION_EPS) {
            Ok(()) => return Ok(d),
            Err(DrawingError::GeneralPositionViolation(v)) => {
                // redraw the part-A endpoint of the first offending edge
                let i = v.indices[0] / n;
                let others: Vec<UnitVec> = d
                    .points()
                    .into_iter()
                    .enumerate()
                    .filter_map(|(k, p)| (k != i).then_some(p))
                    .collect();
                loop {
                    rejections += 1;
                    if rejections > budget {
                        return Err(DrawingError::TooManyRejections(rejections));
                    }
                    let p = sample_measure(mu1, rng);
                    if fits(p, &others, GENERAL_POSITION_EPS) {
                        d.part_a[i] = p;
                        break;
                    }
                }
            }
            Err(DrawingError::Geom(_)) => {
                rejections += 1;
                if rejections > budget {
                    return Err(DrawingError::TooManyRejections(rejections));
                }
                let i = rng.index(n);
                d.part_a[i] = sample_measure(mu1, rng);
            }
            Err(e) => return Err(e),
        }
    }
}

/// The antipodally closed drawing on parts `P ∪ P̄` and `Q ∪ Q̄`.
///
/// `P ∪ Q` must be in general position; the antipodal copies are collinear
/// with their originals by construction and are not checked against them.
pub fn antipodal_drawing(p: &[UnitVec], q: &[UnitVec]) -> Result<BipartiteDrawing, DrawingError> {
    if p.len() != q.len() || p.is_empty() {
        return Err(DrawingError::OddSize(p.len(), q.len()));
    }
    let base: Vec<UnitVec> = p.iter().chain(q.iter()).copied().collect();
    let part_a: Vec<UnitVec> = p.iter().copied().chain(p.iter().map(|&x| -x)).collect();
    let part_b: Vec<UnitVec> = q.iter().copied().chain(q.iter().map(|&x| -x)).collect();
    let d = BipartiteDrawing::new(part_a, part_b);
    check_drawing(&d, GENERAL_POSITION_EPS, &base)?;
    Ok(d)
}

/// Builds D₄⁽ⁿ⁾: `n` evenly spaced vertices on the radius-`r` circle about
/// each of the eight node centers.
pub fn blowup_drawing(cfg: &BlowupConfig) -> Result<BipartiteDrawing, DrawingError> {
    let d = blowup_drawing_unchecked(cfg)?;
    drawing_general_position_check(&d, GENERAL_POSITION_EPS)?;
    Ok(d)
}

/// [`blowup_drawing`] without the (quadratic) triple-crossing validation;
/// the vertex set is still checked.
///
/// That is enough for counting: whether two edges cross is decided by
/// orientation signs of their endpoints, which the vertex check keeps away
/// from zero. For small `r` the triple check is also too strict, since two
/// crossings on one edge can lie about `r²` apart.
pub fn blowup_drawing_unchecked(cfg: &BlowupConfig) -> Result<BipartiteDrawing, DrawingError> {
    cfg.validate()?;
    let n = cfg.n;
    let centers = cfg.centers();
    let mut pts = Vec::with_capacity(8 * n);
    let mut nodes = Vec::with_capacity(8 * n);
    for (k, &c) in centers.iter().enumerate() {
        let frame = tangent_frame(c);
        for m in 0..n {
            let theta = cfg.rotation_offsets[k] + 2.0 * PI * m as f64 / n as f64;
            pts.push(point_on_circle(c, frame, cfg.r, theta));
            nodes.push(k as u8);
        }
    }
    general_position_check(&pts, GENERAL_POSITION_EPS)?;
    let part_b = pts.split_off(4 * n);
    Ok(BipartiteDrawing {
        part_a: pts,
        part_b,
        blowup: Some(BlowupMetadata {
            config: cfg.clone(),
            node_of_vertex: nodes,
        }),
    })
}

/// The four angles of the base drawing at w₂, v₂, v₁ and w₁.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngleQuad {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
}

impl AngleQuad {
    pub fn new(alpha: f64, beta: f64, gamma: f64, delta: f64) -> Self {
        Self {
            alpha,
            beta,
            gamma,
            delta,
        }
    }

    pub fn sum(&self) -> f64 {
        self.alpha + self.beta + self.gamma + self.delta
    }

    pub fn to_array(&self) -> [f64; 4] {
        [self.alpha, self.beta, self.gamma, self.delta]
    }
}

/// Relabels within antipodal pairs until the arcs w₂v₁ and v₂w₁ cross.
/// Returns the signs applied to `(v1, v2, w1, w2)`.
pub fn canonical_labeling(cfg: &BlowupConfig) -> Result<[UnitVec; 4], DrawingError> {
    for mask in 0u8..16 {
        let sgn = |bit: u8, p: UnitVec| if mask & (1 << bit) != 0 { -p } else { p };
        let (v1, v2, w1, w2) = (
            sgn(0, cfg.v1),
            sgn(1, cfg.v2),
            sgn(2, cfg.w1),
            sgn(3, cfg.w2),
        );
        let e = GeodesicSegment::new(w2, v1)?;
        let f = GeodesicSegment::new(v2, w1)?;
        if crate::geom::segments_cross(&e, &f)? {
            return Ok([v1, v2, w1, w2]);
        }
    }
    Err(DrawingError::ConfigurationNotCanonical)
}

/// α at w₂ (towards v₂, v₁), β at v₂ (w₂, w₁), γ at v₁ (w₁, w₂) and δ at
/// w₁ (v₁, v₂), after canonical relabeling.
pub fn base_angles(cfg: &BlowupConfig) -> Result<AngleQuad, DrawingError> {
    let [v1, v2, w1, w2] = canonical_labeling(cfg)?;
    Ok(AngleQuad {
        alpha: spherical_angle(w2, v2, v1)?,
        beta: spherical_angle(v2, w2, w1)?,
        gamma: spherical_angle(v1, w1, w2)?,
        delta: spherical_angle(w1, v1, v2)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{segments_cross, Vec3};

    fn u(x: f64, y: f64, z: f64) -> UnitVec {
        UnitVec::normalize(Vec3::new(x, y, z)).unwrap()
    }

    fn sample_cfg(n: usize) -> BlowupConfig {
        BlowupConfig::new(
            u(0.9, 0.1, 0.3),
            u(-0.2, 0.95, 0.15),
            u(0.3, -0.4, 0.85),
            u(0.5, 0.6, -0.55),
            1e-4,
            n,
        )
    }

    fn brute_crossings(d: &BipartiteDrawing) -> usize {
        let segs = d.segments().unwrap();
        let nb = d.part_b.len();
        let mut c = 0;
        for e in 0..segs.len() {
            for f in e + 1..segs.len() {
                if e / nb == f / nb || e % nb == f % nb {
                    continue;
                }
                if segments_cross(&segs[e], &segs[f]).unwrap() {
                    c += 1;
                }
            }
        }
        c
    }

    #[test]
    fn blowup_sizes() {
        for n in [1, 3, 5] {
            let d = blowup_drawing(&sample_cfg(n)).unwrap();
            assert_eq!(d.part_a.len(), 4 * n);
            assert_eq!(d.part_b.len(), 4 * n);
            assert_eq!(d.edge_count(), 16 * n * n);
        }
    }

    #[test]
    fn blowup_vertices_evenly_spaced() {
        let cfg = sample_cfg(3);
        let d = blowup_drawing(&cfg).unwrap();
        let meta = d.blowup.as_ref().unwrap();
        let pts = d.points();
        let centers = cfg.centers();
        for node in 0..8u8 {
            let vs: Vec<UnitVec> = pts
                .iter()
                .zip(&meta.node_of_vertex)
                .filter_map(|(&p, &k)| (k == node).then_some(p))
                .collect();
            assert_eq!(vs.len(), 3);
            let c = centers[node as usize];
            for p in &vs {
                assert!((c.angular_distance(*p) - cfg.r).abs() < 1e-12);
            }
            // consecutive central angles of 2π/3 about the center
            let (e1, e2) = tangent_frame(c);
            let ang: Vec<f64> = vs
                .iter()
                .map(|p| {
                    let t = p.vec() - c.vec() * p.dot(c);
                    t.dot(e2).atan2(t.dot(e1))
                })
                .collect();
            for m in 0..3 {
                let gap = (ang[(m + 1) % 3] - ang[m]).rem_euclid(2.0 * PI);
                assert!((gap - 2.0 * PI / 3.0).abs() < 1e-9, "gap {gap}");
            }
        }
    }

    #[test]
    fn base_blowup_has_four_crossings() {
        let d = blowup_drawing(&sample_cfg(1)).unwrap();
        assert_eq!(brute_crossings(&d), 4);
    }

    #[test]
    fn antipodal_small_cases() {
        let p = [u(0.2, 0.3, 0.9)];
        let q = [u(-0.7, 0.1, 0.2)];
        let d = antipodal_drawing(&p, &q).unwrap();
        assert_eq!(d.edge_count(), 4);
        assert_eq!(brute_crossings(&d), 0);

        let p = [u(0.2, 0.3, 0.9), u(0.8, -0.1, 0.2)];
        let q = [u(-0.7, 0.1, 0.2), u(0.1, 0.9, -0.3)];
        let d = antipodal_drawing(&p, &q).unwrap();
        assert_eq!(brute_crossings(&d), 4);

        assert!(matches!(
            antipodal_drawing(&p, &q[..1]),
            Err(DrawingError::OddSize(2, 1))
        ));
        let bad = [u(0.0, 0.0, 1.0), u(0.0, 0.0, -1.0)];
        assert!(matches!(
            antipodal_drawing(&bad, &q),
            Err(DrawingError::GeneralPositionViolation(_))
        ));
    }

    #[test]
    fn antipodal_drawing_swap_invariant() {
        let p = [u(0.2, 0.3, 0.9), u(0.8, -0.1, 0.2)];
        let q = [u(-0.7, 0.1, 0.2), u(0.1, 0.9, -0.3)];
        let neg: Vec<UnitVec> = p.iter().map(|&x| -x).collect();
        let d1 = antipodal_drawing(&p, &q).unwrap();
        let d2 = antipodal_drawing(&neg, &q).unwrap();
        let key = |v: &[UnitVec]| {
            let mut k: Vec<[u64; 3]> = v.iter().map(|p| p.to_array().map(f64::to_bits)).collect();
            k.sort();
            k
        };
        assert_eq!(key(&d1.part_a), key(&d2.part_a));
        assert_eq!(d1.part_b, d2.part_b);
    }

    #[test]
    fn random_drawing_reproducible() {
        let mu = MeasureSpec::Uniform;
        let d1 = random_bipartite_drawing(&mu, &mu, 2, &mut RngStream::new(5, 0)).unwrap();
        let d2 = random_bipartite_drawing(&mu, &mu, 2, &mut RngStream::new(5, 0)).unwrap();
        assert_eq!(d1, d2);
        let d = random_bipartite_drawing(&mu, &mu, 1, &mut RngStream::new(5, 1)).unwrap();
        assert_eq!(d.edge_count(), 1);
        assert!(random_bipartite_drawing(&mu, &mu, 0, &mut RngStream::new(5, 1)).is_err());
    }

    #[test]
    fn random_drawing_in_general_position() {
        let mu = MeasureSpec::Uniform;
        let d = random_bipartite_drawing(&mu, &mu, 50, &mut RngStream::new(11, 0)).unwrap();
        assert!(drawing_general_position_check(&d, GENERAL_POSITION_EPS).is_ok());
    }

    #[test]
    fn degenerate_measure_exhausts_budget() {
        // every draw lands on one of two points
        let mu = MeasureSpec::Circles {
            centers: vec![u(0.0, 0.0, 1.0)],
            radius: 1e-300,
        };
        let r = random_bipartite_drawing(&mu, &MeasureSpec::Uniform, 3, &mut RngStream::new(0, 0));
        assert!(matches!(r, Err(DrawingError::TooManyRejections(_))));
    }

    #[test]
    fn json_round_trip_is_lossless() {
        let d = blowup_drawing(&sample_cfg(2)).unwrap();
        let s = d.to_json();
        assert!(s.starts_with(r#"{"partA":[["#));
        let back = BipartiteDrawing::from_json(&s).unwrap();
        assert_eq!(back, d);
        assert!(BipartiteDrawing::from_json(r#"{"partA":[],"partB":[[0,0,1]]}"#).is_err());
        assert!(BipartiteDrawing::from_json(r#"{"partA":[[0,0,3]],"partB":[[0,0,1]]}"#).is_err());
    }

    #[test]
    fn config_validation() {
        let cfg = sample_cfg(2);
        assert!(cfg.validate().is_ok());
        assert!(cfg.with_r(1.0).validate().is_err());
        assert!(cfg.with_n(0).validate().is_err());
        let mut bad = cfg.clone();
        bad.w2 = -bad.v1;
        assert!(bad.validate().is_err());
    }

    #[test]
    fn base_angles_in_range() {
        let q = base_angles(&sample_cfg(1)).unwrap();
        for a in q.to_array() {
            assert!(a > 0.0 && a < PI);
        }
        assert!(q.sum() < 2.0 * PI);
        let [v1, v2, w1, w2] = canonical_labeling(&sample_cfg(1)).unwrap();
        let e = GeodesicSegment::new(w2, v1).unwrap();
        let f = GeodesicSegment::new(v2, w1).unwrap();
        assert!(segments_cross(&e, &f).unwrap());
    }
}

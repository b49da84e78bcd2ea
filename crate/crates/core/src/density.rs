//! Homomorphism densities: exact on crossing graphs, and Monte Carlo over
//! independent random geodesic segments.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::census::{build_crossing_graph, hom_count_small, CensusError, CrossingGraph};
use crate::drawing::{random_bipartite_drawing, DrawingError};
use crate::geom::{cross_prepared, GeodesicSegment, PreparedSegment};
use crate::measures::{sample_measure, MeasureError, MeasureSpec, RngStream};

/// Largest pattern order accepted by the samplers.
pub const MAX_PATTERN_ORDER: usize = 8;

/// Redraws allowed per sample before giving up on a degenerate measure.
const MAX_REDRAWS: usize = 1000;

/// Sample indices occupy the low bits of the per-sample stream id.
const SAMPLE_BITS: u32 = 40;

#[derive(Debug, Error)]
pub enum DensityError {
    #[error("invalid pattern graph: {0}")]
    InvalidPattern(String),
    #[error("samples must be at least 1")]
    NoSamples,
    #[error("too many samples: {0}")]
    TooManySamples(u64),
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("sampler kept producing degenerate segments")]
    Degenerate,
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(transparent)]
    Census(#[from] CensusError),
    #[error(transparent)]
    Drawing(#[from] DrawingError),
}

/// A small simple graph `H`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternGraph {
    k: usize,
    edges: Vec<(usize, usize)>,
}

impl PatternGraph {
    pub fn new(k: usize, edges: Vec<(usize, usize)>) -> Result<Self, DensityError> {
        if k > MAX_PATTERN_ORDER {
            return Err(DensityError::InvalidPattern(format!(
                "order {k} exceeds {MAX_PATTERN_ORDER}"
            )));
        }
        let mut norm: Vec<(usize, usize)> = Vec::with_capacity(edges.len());
        for (u, v) in edges {
            if u >= k || v >= k || u == v {
                return Err(DensityError::InvalidPattern(format!("bad edge ({u}, {v})")));
            }
            norm.push((u.min(v), u.max(v)));
        }
        norm.sort_unstable();
        let before = norm.len();
        norm.dedup();
        if norm.len() != before {
            return Err(DensityError::InvalidPattern("repeated edge".into()));
        }
        Ok(Self { k, edges: norm })
    }

    /// Complete graph on `k ≤ 8` vertices.
    pub fn k(k: usize) -> Self {
        assert!(k <= MAX_PATTERN_ORDER);
        let edges = (0..k)
            .flat_map(|u| (u + 1..k).map(move |v| (u, v)))
            .collect();
        Self { k, edges }
    }

    /// Path on three vertices.
    pub fn p3() -> Self {
        Self {
            k: 3,
            edges: vec![(0, 1), (1, 2)],
        }
    }

    /// Edgeless graph on `k ≤ 8` vertices.
    pub fn empty(k: usize) -> Self {
        assert!(k <= MAX_PATTERN_ORDER);
        Self {
            k,
            edges: Vec::new(),
        }
    }

    /// Parses `k1`..`k8`, `p3` or `empty1`..`empty8`.
    pub fn from_name(name: &str) -> Result<Self, DensityError> {
        let bad = || DensityError::InvalidPattern(format!("unknown pattern {name:?}"));
        let order = |s: &str| -> Result<usize, DensityError> {
            s.parse::<usize>()
                .ok()
                .filter(|&k| (1..=MAX_PATTERN_ORDER).contains(&k))
                .ok_or_else(bad)
        };
        let lower = name.to_ascii_lowercase();
        if lower == "p3" {
            Ok(Self::p3())
        } else if let Some(rest) = lower.strip_prefix("empty") {
            Ok(Self::empty(order(rest)?))
        } else if let Some(rest) = lower.strip_prefix('k') {
            Ok(Self::k(order(rest)?))
        } else {
            Err(bad())
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.k
    }

    /// Edges `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }
}

impl fmt::Display for PatternGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.edges.len();
        if *self == Self::p3() {
            write!(f, "p3")
        } else if self.k > 0 && m == self.k * (self.k - 1) / 2 {
            write!(f, "k{}", self.k)
        } else if m == 0 {
            write!(f, "empty{}", self.k)
        } else {
            write!(f, "H(k={}, edges={:?})", self.k, self.edges)
        }
    }
}

/// A Bernoulli estimate with its provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityEstimate {
    pub value: f64,
    /// `sqrt(value·(1−value)/samples)`.
    pub std_error: f64,
    pub samples: u64,
    pub hits: u64,
    pub seed: u64,
    pub stream_id: u64,
}

impl DensityEstimate {
    fn from_hits(hits: u64, samples: u64, rng: &RngStream) -> Self {
        let value = hits as f64 / samples as f64;
        Self {
            value,
            std_error: (value * (1.0 - value) / samples as f64).sqrt(),
            samples,
            hits,
            seed: rng.seed(),
            stream_id: rng.stream_id(),
        }
    }

    /// `(value − z·σ, value + z·σ)`.
    pub fn interval(&self, z: f64) -> (f64, f64) {
        (
            self.value - z * self.std_error,
            self.value + z * self.std_error,
        )
    }
}

/// `hom(H, g) / |V(g)|^k`.
pub fn t_exact(h: &PatternGraph, g: &CrossingGraph) -> Result<f64, DensityError> {
    let hom = hom_count_small(h, g)?;
    let v = g.vertex_count() as f64;
    if hom == 0 {
        return Ok(0.0);
    }
    Ok(hom as f64 / v.powi(h.vertex_count() as i32))
}

/// Per-sample generator: stream `stream_id·2⁴⁰ + index` under the caller's
/// seed.
fn sample_rng(base: &RngStream, index: u64) -> RngStream {
    base.substream((base.stream_id() << SAMPLE_BITS) | index)
}

fn check_samples(samples: u64, base: &RngStream) -> Result<(), DensityError> {
    if samples == 0 {
        return Err(DensityError::NoSamples);
    }
    if samples > 1 << SAMPLE_BITS || base.stream_id() >= 1 << (64 - SAMPLE_BITS) {
        return Err(DensityError::TooManySamples(samples));
    }
    Ok(())
}

fn parallel_hits(
    samples: u64,
    trial: impl Fn(u64) -> Result<bool, DensityError> + Sync,
) -> Result<u64, DensityError> {
    (0..samples)
        .into_par_iter()
        .map(|i| trial(i).map(u64::from))
        .try_reduce(|| 0, |a, b| Ok(a + b))
}

/// Monte Carlo estimate of `p_H`: the probability that `k` independent
/// segments `aᵢbᵢ` (`aᵢ ~ mu1`, `bᵢ ~ mu2`) cross along every edge of `H`.
///
/// Sample `i` draws from its own stream, so the result depends only on the
/// seed and stream of `rng`, not on the thread count.
pub fn estimate_p_h(
    h: &PatternGraph,
    mu1: &MeasureSpec,
    mu2: &MeasureSpec,
    samples: u64,
    rng: &RngStream,
) -> Result<DensityEstimate, DensityError> {
    check_samples(samples, rng)?;
    mu1.validate()?;
    mu2.validate()?;
    let k = h.vertex_count();
    let edges = h.edges();
    let hits = parallel_hits(samples, |i| {
        let mut r = sample_rng(rng, i);
        let mut segs = [None::<PreparedSegment>; MAX_PATTERN_ORDER];
        'redraw: for _ in 0..MAX_REDRAWS {
            for slot in segs.iter_mut().take(k) {
                let seg = (0..MAX_REDRAWS)
                    .find_map(|_| {
                        GeodesicSegment::new(
                            sample_measure(mu1, &mut r),
                            sample_measure(mu2, &mut r),
                        )
                        .ok()
                    })
                    .ok_or(DensityError::Degenerate)?;
                *slot = Some(PreparedSegment::new(seg));
            }
            let mut hit = true;
            for &(u, v) in edges {
                match cross_prepared(segs[u].as_ref().unwrap(), segs[v].as_ref().unwrap()) {
                    Ok(true) => {}
                    Ok(false) => {
                        hit = false;
                        break;
                    }
                    Err(_) => continue 'redraw,
                }
            }
            return Ok(hit);
        }
        Err(DensityError::Degenerate)
    })?;
    Ok(DensityEstimate::from_hits(hits, samples, rng))
}

/// Estimates `t(H, g)` by mapping the vertices of `H` to uniform random
/// vertices of `g`, with replacement.
pub fn estimate_t_h_vertex_sampling(
    h: &PatternGraph,
    g: &CrossingGraph,
    samples: u64,
    rng: &RngStream,
) -> Result<DensityEstimate, DensityError> {
    check_samples(samples, rng)?;
    let nv = g.vertex_count();
    if nv == 0 {
        return Err(DensityError::EmptyGraph);
    }
    let k = h.vertex_count();
    let edges = h.edges();
    let hits = parallel_hits(samples, |i| {
        let mut r = sample_rng(rng, i);
        let mut phi = [0usize; MAX_PATTERN_ORDER];
        for x in phi.iter_mut().take(k) {
            *x = r.index(nv);
        }
        Ok(edges.iter().all(|&(u, v)| g.has_edge(phi[u], phi[v])))
    })?;
    Ok(DensityEstimate::from_hits(hits, samples, rng))
}

/// Exact `t(H, X_n)` over repeated random drawings of one size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub values: Vec<f64>,
    pub mean: f64,
    /// Sample standard deviation; `None` for a single repetition.
    pub spread: Option<f64>,
}

/// For each `n`, draws `reps` random `K_{n,n}` drawings and records
/// `t(H, X_n)`. Drawing `(n, rep)` uses stream `x·2³² + rep` where `x` is the
/// position of `n` in `n_values`.
pub fn convergence_report(
    h: &PatternGraph,
    mu1: &MeasureSpec,
    mu2: &MeasureSpec,
    n_values: &[usize],
    reps: usize,
    rng: &RngStream,
) -> Result<Vec<ConvergenceRow>, DensityError> {
    if reps == 0 {
        return Err(DensityError::NoSamples);
    }
    n_values
        .iter()
        .enumerate()
        .map(|(x, &n)| {
            let values = (0..reps)
                .map(|rep| {
                    let mut r = rng.substream(((x as u64) << 32) | rep as u64);
                    let d = random_bipartite_drawing(mu1, mu2, n, &mut r)?;
                    t_exact(h, &build_crossing_graph(&d)?)
                })
                .collect::<Result<Vec<f64>, DensityError>>()?;
            let mean = values.iter().sum::<f64>() / reps as f64;
            let spread = (reps > 1).then(|| {
                let ss: f64 = values.iter().map(|v| (v - mean).powi(2)).sum();
                (ss / (reps - 1) as f64).sqrt()
            });
            Ok(ConvergenceRow {
                n,
                values,
                mean,
                spread,
            })
        })
        .collect()
}

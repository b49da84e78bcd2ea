//! Crossing graphs of drawings and their crossing/triangle censuses.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::density::PatternGraph;
use crate::drawing::{bundle_index, bundle_nodes, BipartiteDrawing, BlowupMetadata};
use crate::geom::{cross_prepared, spherical_angle, GeomError, PreparedSegment};

#[derive(Debug, Error)]
pub enum CensusError {
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error("drawing has no blow-up metadata")]
    MissingBlowup,
    #[error("unsupported pattern graph: {0}")]
    UnsupportedPattern(String),
    #[error("count overflow")]
    Overflow,
    #[error("graph too large: {0} vertices")]
    TooLarge(usize),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
}

/// Zarankiewicz's number `⌊n/2⌋⌊(n−1)/2⌋⌊m/2⌋⌊(m−1)/2⌋`.
pub fn zarankiewicz(m: u64, n: u64) -> u128 {
    let f = |k: u64| u128::from(k / 2) * u128::from(k.saturating_sub(1) / 2);
    f(m) * f(n)
}

/// Undirected simple graph in compressed sparse row form, neighbor lists
/// sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossingGraph {
    offsets: Vec<usize>,
    neighbors: Vec<u32>,
}

impl CrossingGraph {
    /// Builds a graph from an edge list. Duplicate edges are merged; loops
    /// and out-of-range endpoints are rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, CensusError> {
        if n > u32::MAX as usize {
            return Err(CensusError::TooLarge(n));
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(CensusError::InvalidGraph(format!(
                    "edge ({u}, {v}) out of range"
                )));
            }
            if u == v {
                return Err(CensusError::InvalidGraph(format!("loop at {u}")));
            }
            adj[u].push(v as u32);
            adj[v].push(u as u32);
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut neighbors = Vec::new();
        offsets.push(0);
        for mut row in adj {
            row.sort_unstable();
            row.dedup();
            neighbors.extend_from_slice(&row);
            offsets.push(neighbors.len());
        }
        Ok(Self { offsets, neighbors })
    }

    pub fn vertex_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> u64 {
        self.neighbors.len() as u64 / 2
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.neighbors[self.offsets[v]..self.offsets[v + 1]]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.vertex_count() && self.neighbors(u).binary_search(&(v as u32)).is_ok()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.vertex_count()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .map(|&v| v as usize)
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    /// `2m / |V|²`, zero on the empty vertex set.
    pub fn edge_density(&self) -> f64 {
        let v = self.vertex_count() as f64;
        if v == 0.0 {
            0.0
        } else {
            2.0 * self.edge_count() as f64 / (v * v)
        }
    }
}

fn prepared_segments(d: &BipartiteDrawing) -> Result<Vec<PreparedSegment>, CensusError> {
    Ok(d.segments()?
        .into_iter()
        .map(PreparedSegment::new)
        .collect())
}

/// Calls `visit(f)` for every `f > e` whose segment crosses edge `e`,
/// skipping edges that share a drawing vertex with `e`.
#[inline]
fn for_each_upper_crossing(
    segs: &[PreparedSegment],
    n_b: usize,
    e: usize,
    mut visit: impl FnMut(usize),
) -> Result<(), GeomError> {
    let (i, j) = (e / n_b, e % n_b);
    let se = &segs[e];
    // Rest of row i shares vertex i; skip to the next row.
    for (row, chunk) in segs.chunks_exact(n_b).enumerate().skip(i + 1) {
        for (col, sf) in chunk.iter().enumerate() {
            if col == j {
                continue;
            }
            if cross_prepared(se, sf)? {
                visit(row * n_b + col);
            }
        }
    }
    Ok(())
}

/// Number of unordered crossing edge pairs.
pub fn count_crossings(d: &BipartiteDrawing) -> Result<u64, CensusError> {
    let segs = prepared_segments(d)?;
    let n_b = d.part_b.len();
    if segs.is_empty() {
        return Ok(0);
    }
    let total = (0..segs.len())
        .into_par_iter()
        .map(|e| {
            let mut k = 0u64;
            for_each_upper_crossing(&segs, n_b, e, |_| k += 1)?;
            Ok(k)
        })
        .try_reduce(|| 0, |a, b| a.checked_add(b).ok_or(CensusError::Overflow))?;
    Ok(total)
}

/// The crossing graph: one vertex per drawing edge, adjacent when the
/// segments cross.
pub fn build_crossing_graph(d: &BipartiteDrawing) -> Result<CrossingGraph, CensusError> {
    let segs = prepared_segments(d)?;
    let n = segs.len();
    if n > u32::MAX as usize {
        return Err(CensusError::TooLarge(n));
    }
    let n_b = d.part_b.len();
    let upper: Vec<Vec<u32>> = (0..n)
        .into_par_iter()
        .map(|e| {
            let mut out = Vec::new();
            for_each_upper_crossing(&segs, n_b, e, |f| out.push(f as u32))?;
            Ok(out)
        })
        .collect::<Result<_, GeomError>>()?;

    let mut degree = vec![0usize; n];
    for (e, up) in upper.iter().enumerate() {
        degree[e] += up.len();
        for &f in up {
            degree[f as usize] += 1;
        }
    }
    let mut offsets = Vec::with_capacity(n + 1);
    offsets.push(0);
    for d in &degree {
        offsets.push(offsets.last().unwrap() + d);
    }
    // Rows come out sorted: lower neighbors arrive in increasing order
    // before a row's own (ascending) upper list is appended.
    let mut cursor = offsets[..n].to_vec();
    let mut neighbors = vec![0u32; offsets[n]];
    for (e, up) in upper.into_iter().enumerate() {
        neighbors[cursor[e]..cursor[e] + up.len()].copy_from_slice(&up);
        cursor[e] += up.len();
        for f in up {
            let f = f as usize;
            neighbors[cursor[f]] = e as u32;
            cursor[f] += 1;
        }
    }
    Ok(CrossingGraph { offsets, neighbors })
}

/// Kind of a crossing between two blow-up edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CrossingType {
    /// Bundles with no common node.
    C,
    /// Same bundle.
    B,
    /// Bundles sharing one node.
    N,
}

impl CrossingType {
    pub fn letter(self) -> char {
        match self {
            CrossingType::C => 'C',
            CrossingType::B => 'B',
            CrossingType::N => 'N',
        }
    }
}

/// Crossing type of two bundles given by their indices.
pub fn bundle_pair_type(b1: u8, b2: u8) -> CrossingType {
    if b1 == b2 {
        return CrossingType::B;
    }
    let (a1, c1) = bundle_nodes(b1);
    let (a2, c2) = bundle_nodes(b2);
    if a1 == a2 || c1 == c2 {
        CrossingType::N
    } else {
        CrossingType::C
    }
}

pub fn classify_crossing(e1: usize, e2: usize, meta: &BlowupMetadata) -> CrossingType {
    let n_b = 4 * meta.config.n;
    let bundle = |e: usize| {
        let (a, b) = meta.bundle_of_edge(e / n_b, e % n_b);
        bundle_index(a, b)
    };
    bundle_pair_type(bundle(e1), bundle(e2))
}

pub const NODE_NAMES: [&str; 8] = ["v1", "-v1", "v2", "-v2", "w1", "-w1", "w2", "-w2"];

/// Crossings between two bundles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BundlePairCount {
    pub bundles: [u8; 2],
    pub count: u64,
}

/// Crossings between two bundles meeting at `node`, the other ends being
/// `others`; `angle` is the angle at the node between the bundles' base
/// edges.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodePairCount {
    pub node: u8,
    pub others: [u8; 2],
    pub angle: f64,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossingCensus {
    pub total: u64,
    pub c: u64,
    pub b: u64,
    pub n: u64,
    /// Same-bundle crossings, indexed by bundle.
    pub per_bundle_b: Vec<u64>,
    /// Node-disjoint bundle pairs with at least one crossing.
    pub per_crossing_c: Vec<BundlePairCount>,
    /// All six bundle pairs at each of the eight nodes.
    pub per_node_n: Vec<NodePairCount>,
}

type PairTable = [[u64; 16]; 16];

fn census_from_pairs(
    table: &PairTable,
    meta: &BlowupMetadata,
) -> Result<CrossingCensus, CensusError> {
    let (mut c, mut b, mut n) = (0u64, 0u64, 0u64);
    let mut per_bundle_b = vec![0u64; 16];
    let mut per_crossing_c = Vec::new();
    for b1 in 0..16u8 {
        for b2 in b1..16u8 {
            let k = table[b1 as usize][b2 as usize];
            let slot = match bundle_pair_type(b1, b2) {
                CrossingType::B => {
                    per_bundle_b[b1 as usize] = k;
                    &mut b
                }
                CrossingType::C => {
                    if k > 0 {
                        per_crossing_c.push(BundlePairCount {
                            bundles: [b1, b2],
                            count: k,
                        });
                    }
                    &mut c
                }
                CrossingType::N => &mut n,
            };
            *slot = slot.checked_add(k).ok_or(CensusError::Overflow)?;
        }
    }
    let centers = meta.config.centers();
    let mut per_node_n = Vec::with_capacity(48);
    for node in 0..8u8 {
        let others: Vec<u8> = if node < 4 {
            (4..8).collect()
        } else {
            (0..4).collect()
        };
        let bundle = |o: u8| {
            if node < 4 {
                bundle_index(node, o)
            } else {
                bundle_index(o, node)
            }
        };
        for (x, &o1) in others.iter().enumerate() {
            for &o2 in &others[x + 1..] {
                let (b1, b2) = (bundle(o1), bundle(o2));
                let count = table[b1.min(b2) as usize][b1.max(b2) as usize];
                let angle = spherical_angle(
                    centers[node as usize],
                    centers[o1 as usize],
                    centers[o2 as usize],
                )?;
                per_node_n.push(NodePairCount {
                    node,
                    others: [o1, o2],
                    angle,
                    count,
                });
            }
        }
    }
    Ok(CrossingCensus {
        total: c + b + n,
        c,
        b,
        n,
        per_bundle_b,
        per_crossing_c,
        per_node_n,
    })
}

fn add_tables(mut a: PairTable, b: PairTable) -> Result<PairTable, CensusError> {
    for (ra, rb) in a.iter_mut().zip(b.iter()) {
        for (x, y) in ra.iter_mut().zip(rb.iter()) {
            *x = x.checked_add(*y).ok_or(CensusError::Overflow)?;
        }
    }
    Ok(a)
}

/// Crossing census of a blow-up drawing, computed directly from the
/// segments.
pub fn crossing_census(d: &BipartiteDrawing) -> Result<CrossingCensus, CensusError> {
    let meta = d.blowup.as_ref().ok_or(CensusError::MissingBlowup)?;
    let segs = prepared_segments(d)?;
    let bundles = meta.edge_bundles();
    let n_b = d.part_b.len();
    let table = (0..segs.len())
        .into_par_iter()
        .try_fold(
            || [[0u64; 16]; 16],
            |mut acc, e| {
                let be = bundles[e];
                for_each_upper_crossing(&segs, n_b, e, |f| {
                    let bf = bundles[f];
                    acc[be.min(bf) as usize][be.max(bf) as usize] += 1;
                })?;
                Ok::<_, CensusError>(acc)
            },
        )
        .try_reduce(|| [[0u64; 16]; 16], add_tables)?;
    census_from_pairs(&table, meta)
}

/// Crossing census read off an already built crossing graph.
pub fn crossing_census_from_graph(
    g: &CrossingGraph,
    meta: &BlowupMetadata,
) -> Result<CrossingCensus, CensusError> {
    let bundles = meta.edge_bundles();
    if bundles.len() != g.vertex_count() {
        return Err(CensusError::InvalidGraph(
            "vertex count does not match metadata".into(),
        ));
    }
    let mut table = [[0u64; 16]; 16];
    for (u, v) in g.edges() {
        let (bu, bv) = (bundles[u], bundles[v]);
        table[bu.min(bv) as usize][bu.max(bv) as usize] += 1;
    }
    census_from_pairs(&table, meta)
}

/// Triangle type keys, letters sorted in the order C < B < N.
pub const TRIANGLE_TYPES: [&str; 10] = [
    "CCC", "CCB", "CCN", "CBB", "CBN", "CNN", "BBB", "BBN", "BNN", "NNN",
];

fn triangle_type_index(types: [CrossingType; 3]) -> usize {
    let mut t = types;
    t.sort();
    let key: String = t.iter().map(|c| c.letter()).collect();
    TRIANGLE_TYPES.iter().position(|k| *k == key).unwrap()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangleCensus {
    pub total: u64,
    /// Empty unless blow-up metadata was supplied, then holds all ten keys.
    pub by_type: BTreeMap<String, u64>,
}

impl TriangleCensus {
    pub fn get(&self, key: &str) -> u64 {
        self.by_type.get(key).copied().unwrap_or(0)
    }
}

/// Triangle-counting strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TriangleKernel {
    /// Bitset rows when they fit in [`BITSET_LIMIT_BYTES`], merge otherwise.
    Auto,
    /// Degree-ordered sorted-list intersection, `O(m)` extra memory.
    Merge,
    /// Dense adjacency bitsets, `|V|²/8` bytes.
    Bitset,
}

pub const BITSET_LIMIT_BYTES: usize = 1 << 29;

/// Counts triangles of `g`, tagged by type when `meta` is given.
pub fn triangle_census(
    g: &CrossingGraph,
    meta: Option<&BlowupMetadata>,
) -> Result<TriangleCensus, CensusError> {
    triangle_census_with(g, meta, TriangleKernel::Auto)
}

pub fn triangle_census_with(
    g: &CrossingGraph,
    meta: Option<&BlowupMetadata>,
    kernel: TriangleKernel,
) -> Result<TriangleCensus, CensusError> {
    let nv = g.vertex_count();
    let classes = match meta {
        Some(m) => {
            let b = m.edge_bundles();
            if b.len() != nv {
                return Err(CensusError::InvalidGraph(
                    "vertex count does not match metadata".into(),
                ));
            }
            Some(b)
        }
        None => None,
    };
    let class = |v: usize| classes.as_ref().map_or(0, |c| c[v]);

    let mut type_table = vec![0u8; 16 * 16 * 16];
    for x in 0..16u8 {
        for y in 0..16u8 {
            for z in 0..16u8 {
                let t = [
                    bundle_pair_type(x, y),
                    bundle_pair_type(y, z),
                    bundle_pair_type(x, z),
                ];
                type_table[(x as usize * 16 + y as usize) * 16 + z as usize] =
                    triangle_type_index(t) as u8;
            }
        }
    }

    let words = nv.div_ceil(64);
    let use_bitset = match kernel {
        TriangleKernel::Merge => false,
        TriangleKernel::Bitset => true,
        TriangleKernel::Auto => nv.saturating_mul(words).saturating_mul(8) <= BITSET_LIMIT_BYTES,
    };
    let counts = if use_bitset {
        bitset_triangles(g, &class, &type_table)?
    } else {
        merge_triangles(g, &class, &type_table)?
    };

    let total = counts
        .iter()
        .try_fold(0u64, |s, &k| s.checked_add(k))
        .ok_or(CensusError::Overflow)?;
    let by_type = if classes.is_some() {
        TRIANGLE_TYPES
            .iter()
            .zip(counts)
            .map(|(k, v)| (k.to_string(), v))
            .collect()
    } else {
        BTreeMap::new()
    };
    Ok(TriangleCensus { total, by_type })
}

fn sum_counts(a: [u64; 10], b: [u64; 10]) -> Result<[u64; 10], CensusError> {
    let mut out = a;
    for (x, y) in out.iter_mut().zip(b) {
        *x = x.checked_add(y).ok_or(CensusError::Overflow)?;
    }
    Ok(out)
}

/// Vertices are ranked by degree and each edge is oriented towards the
/// higher rank; every triangle is found once as `u → v → w` by merging the
/// forward lists of `u` and `v`. The forward lists hold `m` entries in total.
fn merge_triangles(
    g: &CrossingGraph,
    class: &(impl Fn(usize) -> u8 + Sync),
    type_table: &[u8],
) -> Result<[u64; 10], CensusError> {
    let nv = g.vertex_count();
    let mut order: Vec<u32> = (0..nv as u32).collect();
    order.sort_unstable_by_key(|&v| (g.degree(v as usize), v));
    let mut rank = vec![0u32; nv];
    for (r, &v) in order.iter().enumerate() {
        rank[v as usize] = r as u32;
    }
    let mut offsets = Vec::with_capacity(nv + 1);
    offsets.push(0usize);
    let mut fwd = Vec::with_capacity(g.edge_count() as usize);
    for &v in &order {
        let rv = rank[v as usize];
        let start = fwd.len();
        fwd.extend(
            g.neighbors(v as usize)
                .iter()
                .map(|&w| rank[w as usize])
                .filter(|&rw| rw > rv),
        );
        fwd[start..].sort_unstable();
        offsets.push(fwd.len());
    }
    let row = |r: usize| &fwd[offsets[r]..offsets[r + 1]];
    let class_of_rank: Vec<u8> = order.iter().map(|&v| class(v as usize)).collect();

    (0..nv)
        .into_par_iter()
        .fold(
            || [0u64; 10],
            |mut acc, u| {
                let fu = row(u);
                let cu = class_of_rank[u] as usize * 256;
                for &v in fu {
                    let fv = row(v as usize);
                    let cuv = cu + class_of_rank[v as usize] as usize * 16;
                    let (mut i, mut j) = (0, 0);
                    while i < fu.len() && j < fv.len() {
                        let (a, b) = (fu[i], fv[j]);
                        if a < b {
                            i += 1;
                        } else if a > b {
                            j += 1;
                        } else {
                            acc[type_table[cuv + class_of_rank[a as usize] as usize] as usize] += 1;
                            i += 1;
                            j += 1;
                        }
                    }
                }
                acc
            },
        )
        .map(Ok::<_, CensusError>)
        .try_reduce(|| [0u64; 10], sum_counts)
}

/// Popcount of `a & b` over bit positions `lo..hi`.
#[inline]
fn and_popcount(a: &[u64], b: &[u64], lo: usize, hi: usize) -> u64 {
    if lo >= hi {
        return 0;
    }
    let (wl, wh) = (lo / 64, (hi - 1) / 64);
    let lo_mask = u64::MAX << (lo % 64);
    let hi_mask = u64::MAX >> (63 - (hi - 1) % 64);
    if wl == wh {
        return u64::from((a[wl] & b[wl] & lo_mask & hi_mask).count_ones());
    }
    let mut k = (a[wl] & b[wl] & lo_mask).count_ones() + (a[wh] & b[wh] & hi_mask).count_ones();
    for (x, y) in a[wl + 1..wh].iter().zip(&b[wl + 1..wh]) {
        k += (x & y).count_ones();
    }
    u64::from(k)
}

/// Vertices are renumbered class by class and stored as adjacency bitsets;
/// for every edge `u < v` the common neighbors `w > v` are counted per class
/// by popcounts over contiguous ranges.
fn bitset_triangles(
    g: &CrossingGraph,
    class: &(impl Fn(usize) -> u8 + Sync),
    type_table: &[u8],
) -> Result<[u64; 10], CensusError> {
    let nv = g.vertex_count();
    let mut order: Vec<u32> = (0..nv as u32).collect();
    order.sort_unstable_by_key(|&v| (class(v as usize), v));
    let mut new_id = vec![0u32; nv];
    for (x, &v) in order.iter().enumerate() {
        new_id[v as usize] = x as u32;
    }
    let new_class: Vec<u8> = order.iter().map(|&v| class(v as usize)).collect();
    let mut class_start = [nv; 17];
    for c in (0..16u8).rev() {
        class_start[c as usize] = new_class.partition_point(|&k| k < c);
    }

    let words = nv.div_ceil(64);
    let mut bits = vec![0u64; nv * words];
    bits.par_chunks_mut(words.max(1))
        .enumerate()
        .for_each(|(x, row)| {
            if x < nv {
                for &w in g.neighbors(order[x] as usize) {
                    let y = new_id[w as usize] as usize;
                    row[y / 64] |= 1 << (y % 64);
                }
            }
        });
    let row = |x: usize| &bits[x * words..(x + 1) * words];

    (0..nv)
        .into_par_iter()
        .fold(
            || [0u64; 10],
            |mut acc, u| {
                let ru = row(u);
                let cu = new_class[u] as usize * 256;
                for wi in u / 64..words {
                    let mut word = ru[wi];
                    if wi == u / 64 {
                        word &= !(u64::MAX >> (63 - u % 64));
                    }
                    while word != 0 {
                        let v = wi * 64 + word.trailing_zeros() as usize;
                        word &= word - 1;
                        let rv = row(v);
                        let cuv = cu + new_class[v] as usize * 16;
                        for c in 0..16 {
                            let hi = class_start[c + 1];
                            if hi <= v + 1 {
                                continue;
                            }
                            let lo = class_start[c].max(v + 1);
                            acc[type_table[cuv + c] as usize] += and_popcount(ru, rv, lo, hi);
                        }
                    }
                }
                acc
            },
        )
        .map(Ok::<_, CensusError>)
        .try_reduce(|| [0u64; 10], sum_counts)
}

/// `hom(H, g)` for `H` among K₁, K₂, P₃, K₃ and edgeless graphs.
pub fn hom_count_small(h: &PatternGraph, g: &CrossingGraph) -> Result<u128, CensusError> {
    let v = g.vertex_count() as u128;
    let k = h.vertex_count();
    let e = h.edges().len();
    if e == 0 {
        return v.checked_pow(k as u32).ok_or(CensusError::Overflow);
    }
    match (k, e) {
        (2, 1) => Ok(2 * u128::from(g.edge_count())),
        (3, 2) => Ok((0..g.vertex_count())
            .map(|x| (g.degree(x) as u128).pow(2))
            .sum()),
        (3, 3) => Ok(6 * u128::from(triangle_census(g, None)?.total)),
        _ => Err(CensusError::UnsupportedPattern(h.to_string())),
    }
}

//! Geodesic drawings of complete bipartite graphs on the sphere: crossing
//! censuses, crossing-graph homomorphism densities and blow-up predictions.

pub mod census;
pub mod density;
pub mod drawing;
pub mod geom;
pub mod measures;
pub mod theory;

pub use census::{
    build_crossing_graph, classify_crossing, count_crossings, crossing_census,
    crossing_census_from_graph, hom_count_small, triangle_census, triangle_census_with,
    zarankiewicz, CensusError, CrossingCensus, CrossingGraph, CrossingType, TriangleCensus,
    TriangleKernel,
};
pub use density::{
    convergence_report, estimate_p_h, estimate_t_h_vertex_sampling, t_exact, DensityError,
    DensityEstimate, PatternGraph,
};
pub use drawing::{
    antipodal_drawing, base_angles, blowup_drawing, random_bipartite_drawing, AngleQuad,
    BipartiteDrawing, BlowupConfig, BlowupMetadata, DrawingError,
};
pub use geom::{segments_cross, GeodesicSegment, GeomError, UnitVec};
pub use measures::{sample_measure, MeasureError, MeasureSpec, RngStream};
pub use theory::{
    angle_sum_ok, predicted_cro, predicted_crossing_census, predicted_triangle_census, sweep,
    t_k3_bounds, t_k3_formula, SweepFamily, SweepRow, TheoryError, TrianglePrediction,
};

//! Spherical primitives: unit vectors, minor great-circle arcs, the arc
//! crossing predicate, spherical angles and general-position validation.
//!
//! All predicates are plain floating point with fixed absolute tolerances.
//! Inputs that land inside a tolerance band are reported as degenerate
//! instead of being resolved silently; random inputs hit those bands with
//! probability zero and deterministic inputs should be jittered.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Allowed deviation of `x²+y²+z²` from 1.
pub const EPS_NORM: f64 = 1e-12;
/// Sign tests closer to zero than this are degenerate.
pub const EPS_SIGN: f64 = 1e-12;
/// Distance from a great-circle plane still treated as "on" the circle.
pub const EPS_PLANE: f64 = 1e-10;
/// Minimal `|a×b|` for two points to span a unique minor arc.
pub const EPS_DEG: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("vector ({0}, {1}, {2}) is not of unit length")]
    NotUnit(f64, f64, f64),
    #[error("degenerate segment: endpoints coincide or are antipodal")]
    DegenerateSegment,
    #[error("degenerate configuration: {0}")]
    DegenerateConfiguration(&'static str),
}

/// A plain 3-vector.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    #[inline]
    pub fn dot(self, o: Vec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    #[inline]
    pub fn cross(self, o: Vec3) -> Vec3 {
        Vec3::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    #[inline]
    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    #[inline]
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    #[inline]
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    #[inline]
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    #[inline]
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

/// A point on the unit sphere.
///
/// Serializes as a bare `[x, y, z]` array. Deserialization re-checks the
/// unit-length invariant.
#[derive(Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "[f64; 3]", try_from = "[f64; 3]")]
pub struct UnitVec(Vec3);

impl UnitVec {
    /// Validates `x²+y²+z² = 1` within [`EPS_NORM`].
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self, GeomError> {
        let v = Vec3::new(x, y, z);
        if !v.norm_sq().is_finite() || (v.norm_sq() - 1.0).abs() > EPS_NORM {
            return Err(GeomError::NotUnit(x, y, z));
        }
        Ok(Self(v))
    }

    /// Scales `v` onto the sphere.
    pub fn normalize(v: Vec3) -> Result<Self, GeomError> {
        let n = v.norm();
        if !(n.is_finite() && n > 0.0) {
            return Err(GeomError::NotUnit(v.x, v.y, v.z));
        }
        Ok(Self(v * (1.0 / n)))
    }

    /// Point at polar angle `theta` from +z and azimuth `phi`.
    pub fn from_spherical(theta: f64, phi: f64) -> Self {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        Self(Vec3::new(st * cp, st * sp, ct))
    }

    pub(crate) const fn from_vec_unchecked(v: Vec3) -> Self {
        Self(v)
    }

    #[inline]
    pub fn x(self) -> f64 {
        self.0.x
    }
    #[inline]
    pub fn y(self) -> f64 {
        self.0.y
    }
    #[inline]
    pub fn z(self) -> f64 {
        self.0.z
    }

    #[inline]
    pub fn vec(self) -> Vec3 {
        self.0
    }

    #[inline]
    pub fn dot(self, o: UnitVec) -> f64 {
        self.0.dot(o.0)
    }

    /// Great-circle distance in radians.
    pub fn angular_distance(self, o: UnitVec) -> f64 {
        self.0.cross(o.0).norm().atan2(self.0.dot(o.0))
    }

    pub fn to_array(self) -> [f64; 3] {
        self.0.to_array()
    }

    /// Rotates by `angle` radians about the unit axis `axis` (Rodrigues).
    pub fn rotated(self, axis: UnitVec, angle: f64) -> UnitVec {
        let k = axis.0;
        let v = self.0;
        let (s, c) = angle.sin_cos();
        let r = v * c + k.cross(v) * s + k * (k.dot(v) * (1.0 - c));
        UnitVec::normalize(r).unwrap_or(self)
    }
}

impl Neg for UnitVec {
    type Output = UnitVec;
    #[inline]
    fn neg(self) -> UnitVec {
        UnitVec(-self.0)
    }
}

impl fmt::Debug for UnitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.0.x, self.0.y, self.0.z)
    }
}

impl From<UnitVec> for [f64; 3] {
    fn from(p: UnitVec) -> Self {
        p.to_array()
    }
}

impl TryFrom<[f64; 3]> for UnitVec {
    type Error = GeomError;
    fn try_from(a: [f64; 3]) -> Result<Self, Self::Error> {
        UnitVec::new(a[0], a[1], a[2])
    }
}

/// Returns `-p`. Negation is exact, so applying it twice is the identity.
#[inline]
pub fn antipode(p: UnitVec) -> UnitVec {
    -p
}

/// The minor great-circle arc between two distinct, non-antipodal points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodesicSegment {
    pub a: UnitVec,
    pub b: UnitVec,
}

impl GeodesicSegment {
    pub fn new(a: UnitVec, b: UnitVec) -> Result<Self, GeomError> {
        great_circle_normal(a, b)?;
        Ok(Self { a, b })
    }

    /// Unnormalized normal `a×b` of the supporting plane.
    #[inline]
    pub fn normal(&self) -> Vec3 {
        self.a.vec().cross(self.b.vec())
    }

    /// The pointwise antipodal arc.
    pub fn antipodal(&self) -> Self {
        Self {
            a: -self.a,
            b: -self.b,
        }
    }

    pub fn length(&self) -> f64 {
        self.a.angular_distance(self.b)
    }
}

/// Unnormalized normal `a×b` of the plane containing the great circle
/// through `a` and `b`.
pub fn great_circle_normal(a: UnitVec, b: UnitVec) -> Result<Vec3, GeomError> {
    let n = a.vec().cross(b.vec());
    if n.norm() < EPS_DEG {
        return Err(GeomError::DegenerateSegment);
    }
    Ok(n)
}

/// Whether `p` (assumed to lie on the great circle of `s`) is on the closed
/// minor arc from `s.a` to `s.b`.
pub fn point_on_arc(p: UnitVec, s: &GeodesicSegment) -> bool {
    let n = s.normal();
    if n.dot(p.vec()).abs() > EPS_PLANE * n.norm().max(f64::MIN_POSITIVE) {
        return false;
    }
    s.a.vec().cross(p.vec()).dot(n) >= 0.0 && p.vec().cross(s.b.vec()).dot(n) >= 0.0
}

#[inline]
fn same_point(p: UnitVec, q: UnitVec) -> bool {
    p.0 == q.0
}

#[inline]
fn is_antipode(p: UnitVec, q: UnitVec) -> bool {
    p.0 == -q.0
}

/// Handles segment pairs whose endpoints coincide with or are exact
/// antipodes of each other's endpoints. Returns `None` when no such
/// relation exists.
fn endpoint_relation(
    s1: &GeodesicSegment,
    s2: &GeodesicSegment,
) -> Option<Result<bool, GeomError>> {
    let (a, b, c, d) = (s1.a, s1.b, s2.a, s2.b);
    if same_point(a, c) || same_point(a, d) || same_point(b, c) || same_point(b, d) {
        return Some(Ok(false));
    }
    let anti = |p: UnitVec| is_antipode(p, a) || is_antipode(p, b);
    if !(anti(c) || anti(d)) {
        return None;
    }
    // s2 starts on the great circle of s1 at a point outside s1 and can only
    // return to that circle after a half turn, so the arcs meet only if s2
    // runs along the same circle.
    if (is_antipode(c, a) && is_antipode(d, b)) || (is_antipode(c, b) && is_antipode(d, a)) {
        return Some(Ok(false));
    }
    let n1 = s1.normal();
    let n2 = s2.normal();
    if n1.dot(c.vec()).abs() < EPS_SIGN && n1.dot(d.vec()).abs() < EPS_SIGN
        || n2.dot(a.vec()).abs() < EPS_SIGN && n2.dot(b.vec()).abs() < EPS_SIGN
    {
        return Some(Err(GeomError::DegenerateConfiguration(
            "segments share a great circle",
        )));
    }
    Some(Ok(false))
}

/// Point of `s` where it meets the plane with normal `n`, as a positive
/// combination of its endpoints. Only meaningful when the endpoints lie on
/// opposite sides of the plane.
#[inline]
fn arc_plane_hit(s: &GeodesicSegment, da: f64, db: f64) -> Vec3 {
    s.a.vec() * db.abs() + s.b.vec() * da.abs()
}

/// Whether the open minor arcs meet in exactly one interior point.
///
/// Segments that share an endpoint never cross. Segments related by an
/// exact endpoint antipode (as in antipodally closed drawings) are resolved
/// combinatorially. Any remaining side-of-plane test within [`EPS_SIGN`] of
/// zero is reported as [`GeomError::DegenerateConfiguration`].
pub fn segments_cross(s1: &GeodesicSegment, s2: &GeodesicSegment) -> Result<bool, GeomError> {
    cross_prepared(&PreparedSegment::new(*s1), &PreparedSegment::new(*s2))
}

/// A segment with its plane normal cached, for the counting kernels.
#[derive(Debug, Clone, Copy)]
pub struct PreparedSegment {
    pub seg: GeodesicSegment,
    pub normal: Vec3,
}

impl PreparedSegment {
    #[inline]
    pub fn new(seg: GeodesicSegment) -> Self {
        Self {
            seg,
            normal: seg.normal(),
        }
    }
}

/// [`segments_cross`] on prepared segments.
#[inline]
pub fn cross_prepared(p1: &PreparedSegment, p2: &PreparedSegment) -> Result<bool, GeomError> {
    Ok(cross_hit_prepared(p1, p2)?.is_some())
}

/// Like [`cross_prepared`], returning the crossing point as unnormalized
/// positive combinations of each segment's endpoints.
#[inline]
pub fn cross_hit_prepared(
    p1: &PreparedSegment,
    p2: &PreparedSegment,
) -> Result<Option<(Vec3, Vec3)>, GeomError> {
    let (s1, s2) = (&p1.seg, &p2.seg);
    if let Some(r) = endpoint_relation(s1, s2) {
        return r.map(|_| None);
    }
    let c = p1.normal.dot(s2.a.vec());
    let d = p1.normal.dot(s2.b.vec());
    if c.abs() < EPS_SIGN || d.abs() < EPS_SIGN {
        return Err(GeomError::DegenerateConfiguration(
            "endpoint on a great circle",
        ));
    }
    if (c > 0.0) == (d > 0.0) {
        return Ok(None);
    }
    let a = p2.normal.dot(s1.a.vec());
    let b = p2.normal.dot(s1.b.vec());
    if a.abs() < EPS_SIGN || b.abs() < EPS_SIGN {
        return Err(GeomError::DegenerateConfiguration(
            "endpoint on a great circle",
        ));
    }
    if (a > 0.0) == (b > 0.0) {
        return Ok(None);
    }
    // Each arc meets the other's circle exactly once; they cross iff both
    // hits are the same one of the two antipodal intersection points.
    let h1 = arc_plane_hit(s1, a, b);
    let h2 = arc_plane_hit(s2, c, d);
    Ok((h1.dot(h2) > 0.0).then_some((h1, h2)))
}

/// The crossing point of two crossing segments, or `None` if they do not
/// cross.
pub fn crossing_point(
    s1: &GeodesicSegment,
    s2: &GeodesicSegment,
) -> Result<Option<UnitVec>, GeomError> {
    if !segments_cross(s1, s2)? {
        return Ok(None);
    }
    let n2 = s2.normal();
    let h = arc_plane_hit(s1, n2.dot(s1.a.vec()), n2.dot(s1.b.vec()));
    Ok(Some(UnitVec::normalize(h)?))
}

/// Angle at `v` between the geodesics `v→u` and `v→w`, in `[0, π]`.
pub fn spherical_angle(v: UnitVec, u: UnitVec, w: UnitVec) -> Result<f64, GeomError> {
    let tangent = |p: UnitVec| -> Result<Vec3, GeomError> {
        great_circle_normal(v, p)?;
        Ok(p.vec() - v.vec() * p.dot(v))
    };
    let tu = tangent(u)?;
    let tw = tangent(w)?;
    Ok(tu.cross(tw).norm().atan2(tu.dot(tw)))
}

/// `det(p, q, r)` computed in translated form for accuracy on clustered
/// points.
pub fn orient(p: UnitVec, q: UnitVec, r: UnitVec) -> f64 {
    let (p, q, r) = (p.vec(), q.vec(), r.vec());
    p.dot((q - p).cross(r - p))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ViolationKind {
    /// Two points within tolerance of being antipodal.
    Antipodal,
    /// Two points within tolerance of coinciding.
    Coincident,
    /// Three points within tolerance of one great circle.
    Collinear,
    /// Three arcs through (nearly) one point.
    TripleCrossing,
}

/// A general-position failure with the offending point (or edge) indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub indices: Vec<usize>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} at {:?}", self.kind, self.indices)
    }
}

/// Pairwise non-antipodality and no three points on one great circle.
///
/// Pairs are rejected when `sin` of their angular separation (or of its
/// supplement) is below `eps`; triples when one point lies within angular
/// distance `eps` of the great circle through the other two.
pub fn general_position_check(points: &[UnitVec], eps: f64) -> Result<(), Violation> {
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let (p, q) = (points[i], points[j]);
            if p.vec().cross(q.vec()).norm() <= eps {
                let kind = if p.dot(q) < 0.0 {
                    ViolationKind::Antipodal
                } else {
                    ViolationKind::Coincident
                };
                return Err(Violation {
                    kind,
                    indices: vec![i, j],
                });
            }
        }
    }
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let pq = points[i].vec().cross(points[j].vec()).norm();
            for k in j + 1..points.len() {
                let (p, q, r) = (points[i], points[j], points[k]);
                let span = pq
                    .max(q.vec().cross(r.vec()).norm())
                    .max(r.vec().cross(p.vec()).norm());
                if orient(p, q, r).abs() <= eps * span {
                    return Err(Violation {
                        kind: ViolationKind::Collinear,
                        indices: vec![i, j, k],
                    });
                }
            }
        }
    }
    Ok(())
}

/// Given, for every edge, the list of `(other edge, arc position)` pairs
/// (angular distance of the crossing from the edge's first endpoint),
/// reports the first edge carrying two crossings closer than `eps`.
pub(crate) fn triple_crossing_check(
    crossings_per_edge: &mut [Vec<(usize, f64)>],
    eps: f64,
) -> Result<(), Violation> {
    for (e, list) in crossings_per_edge.iter_mut().enumerate() {
        list.sort_by(|x, y| x.1.total_cmp(&y.1));
        for w in list.windows(2) {
            if w[1].1 - w[0].1 <= eps {
                return Err(Violation {
                    kind: ViolationKind::TripleCrossing,
                    indices: vec![e, w[0].0, w[1].0],
                });
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI};

    fn u(x: f64, y: f64, z: f64) -> UnitVec {
        UnitVec::new(x, y, z).unwrap()
    }

    fn seg(a: UnitVec, b: UnitVec) -> GeodesicSegment {
        GeodesicSegment::new(a, b).unwrap()
    }

    #[test]
    fn antipode_negates() {
        assert_eq!(antipode(u(0.0, 0.0, 1.0)).to_array(), [0.0, 0.0, -1.0]);
        assert_eq!(antipode(u(1.0, 0.0, 0.0)).to_array(), [-1.0, 0.0, 0.0]);
        let p = u(0.6, 0.8, 0.0);
        assert_eq!(antipode(p).to_array(), [-0.6, -0.8, 0.0]);
        assert_eq!(antipode(antipode(p)), p);
    }

    #[test]
    fn unit_invariant_enforced() {
        assert!(UnitVec::new(1.0, 1.0, 0.0).is_err());
        assert!(UnitVec::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0).is_ok());
        assert!(UnitVec::new(f64::NAN, 0.0, 0.0).is_err());
    }

    #[test]
    fn normals_of_axes() {
        let n = great_circle_normal(u(1.0, 0.0, 0.0), u(0.0, 1.0, 0.0)).unwrap();
        assert_eq!(n.to_array(), [0.0, 0.0, 1.0]);
        let n = great_circle_normal(u(0.0, 1.0, 0.0), u(0.0, 0.0, 1.0)).unwrap();
        assert_eq!(n.to_array(), [1.0, 0.0, 0.0]);
        assert_eq!(
            great_circle_normal(u(1.0, 0.0, 0.0), u(1.0, 0.0, 0.0)),
            Err(GeomError::DegenerateSegment)
        );
        assert!(GeodesicSegment::new(u(1.0, 0.0, 0.0), u(-1.0, 0.0, 0.0)).is_err());
    }

    #[test]
    fn arc_membership() {
        let s = seg(u(1.0, 0.0, 0.0), u(0.0, 1.0, 0.0));
        assert!(point_on_arc(u(FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0), &s));
        assert!(!point_on_arc(u(-FRAC_1_SQRT_2, -FRAC_1_SQRT_2, 0.0), &s));
        assert!(point_on_arc(s.a, &s));
        assert!(point_on_arc(s.b, &s));
        // off the circle
        assert!(!point_on_arc(u(0.0, 0.0, 1.0), &s));
    }

    #[test]
    fn crossing_examples() {
        let h = FRAC_1_SQRT_2;
        let s1 = seg(u(1.0, 0.0, 0.0), u(0.0, 1.0, 0.0));
        let s2 = seg(u(0.5, 0.5, h), u(0.5, 0.5, -h));
        assert!(segments_cross(&s1, &s2).unwrap());
        let p = crossing_point(&s1, &s2).unwrap().unwrap();
        assert!((p.x() - h).abs() < 1e-15 && (p.y() - h).abs() < 1e-15 && p.z().abs() < 1e-15);

        let s3 = seg(u(0.0, 0.0, 1.0), u(0.5, 0.5, h));
        assert!(!segments_cross(&s1, &s3).unwrap());

        let s4 = seg(u(1.0, 0.0, 0.0), u(0.0, 0.0, 1.0));
        assert!(!segments_cross(&s1, &s4).unwrap());
    }

    #[test]
    fn crossing_needs_same_intersection_point() {
        // Mutually straddling arcs whose hits are antipodal.
        let s1 = seg(u(1.0, 0.0, 0.0), u(0.0, 1.0, 0.0));
        let s2 = seg(u(-0.5, -0.5, FRAC_1_SQRT_2), u(-0.5, -0.5, -FRAC_1_SQRT_2));
        assert!(!segments_cross(&s1, &s2).unwrap());
    }

    #[test]
    fn tangency_is_degenerate() {
        let s1 = seg(u(1.0, 0.0, 0.0), u(0.0, 1.0, 0.0));
        let s2 = seg(u(FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0), u(0.0, 0.0, 1.0));
        assert!(matches!(
            segments_cross(&s1, &s2),
            Err(GeomError::DegenerateConfiguration(_))
        ));
    }

    #[test]
    fn antipodal_endpoint_pairs_do_not_cross() {
        let p = UnitVec::normalize(Vec3::new(0.3, -0.2, 0.9)).unwrap();
        let q = UnitVec::normalize(Vec3::new(-0.4, 0.8, 0.1)).unwrap();
        let r = UnitVec::normalize(Vec3::new(0.7, 0.5, -0.3)).unwrap();
        let pq = seg(p, q);
        assert_eq!(segments_cross(&pq, &pq.antipodal()), Ok(false));
        assert_eq!(segments_cross(&seg(p, -q), &seg(-p, q)), Ok(false));
        // one endpoint antipodal, other off the circle
        assert_eq!(segments_cross(&pq, &seg(-p, r)), Ok(false));
        assert_eq!(segments_cross(&seg(-p, r), &pq), Ok(false));
    }

    #[test]
    fn angle_examples() {
        let z = u(0.0, 0.0, 1.0);
        let x = u(1.0, 0.0, 0.0);
        let a = spherical_angle(z, x, u(0.0, 1.0, 0.0)).unwrap();
        assert!((a - FRAC_PI_2).abs() < 1e-15);
        let a = spherical_angle(z, x, u(-1.0, 0.0, 0.0)).unwrap();
        assert!((a - PI).abs() < 1e-15);
        let a = spherical_angle(z, x, u(FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0)).unwrap();
        assert!((a - FRAC_PI_4).abs() < 1e-15);
        assert_eq!(spherical_angle(z, z, x), Err(GeomError::DegenerateSegment));
        assert_eq!(spherical_angle(z, x, -z), Err(GeomError::DegenerateSegment));
    }

    #[test]
    fn general_position_examples() {
        let v = general_position_check(&[u(0.0, 0.0, 1.0), u(0.0, 0.0, -1.0)], 1e-12).unwrap_err();
        assert_eq!(v.kind, ViolationKind::Antipodal);
        assert_eq!(v.indices, vec![0, 1]);

        let h = FRAC_1_SQRT_2;
        let v = general_position_check(&[u(1.0, 0.0, 0.0), u(0.0, 1.0, 0.0), u(h, h, 0.0)], 1e-12)
            .unwrap_err();
        assert_eq!(v.kind, ViolationKind::Collinear);
        assert_eq!(v.indices, vec![0, 1, 2]);

        assert!(general_position_check(
            &[u(1.0, 0.0, 0.0), u(0.0, 1.0, 0.0), u(0.0, 0.0, 1.0)],
            1e-12
        )
        .is_ok());

        let v = general_position_check(&[u(1.0, 0.0, 0.0), u(1.0, 0.0, 0.0)], 1e-12).unwrap_err();
        assert_eq!(v.kind, ViolationKind::Coincident);
    }

    #[test]
    fn clustered_points_are_not_collinear() {
        // three points on a circle of angular radius 1e-6
        let c = u(0.0, 0.0, 1.0);
        let pts: Vec<UnitVec> = (0..3)
            .map(|k| {
                let t = 2.0 * PI * k as f64 / 3.0;
                UnitVec::from_spherical(1e-6, t)
            })
            .collect();
        assert!(general_position_check(&pts, 1e-12).is_ok());
        assert!(c.angular_distance(pts[0]) < 1.1e-6);
    }

    #[test]
    fn rotation_preserves_angles() {
        let axis = UnitVec::normalize(Vec3::new(0.2, 0.3, -0.9)).unwrap();
        let v = UnitVec::normalize(Vec3::new(0.1, 0.9, 0.2)).unwrap();
        let a = UnitVec::normalize(Vec3::new(0.8, 0.1, 0.3)).unwrap();
        let b = UnitVec::normalize(Vec3::new(-0.3, 0.2, 0.9)).unwrap();
        let before = spherical_angle(v, a, b).unwrap();
        let after = spherical_angle(
            v.rotated(axis, 1.1),
            a.rotated(axis, 1.1),
            b.rotated(axis, 1.1),
        )
        .unwrap();
        assert!((before - after).abs() < 1e-12);
    }
}

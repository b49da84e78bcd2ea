//! Closed-form predictions for blow-up drawings, leading order in `n` and
//! with the `O(r)` terms dropped.

use std::f64::consts::PI;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::drawing::{base_angles, AngleQuad, BlowupConfig, DrawingError};
use crate::geom::UnitVec;

#[derive(Debug, Error)]
pub enum TheoryError {
    #[error("angle {0} outside (0, π)")]
    Domain(f64),
    #[error("sweep needs at least one step")]
    EmptyFamily,
    #[error(transparent)]
    Drawing(#[from] DrawingError),
}

/// Slack on the strict angle-sum bound, so that the limiting configuration
/// with four right angles is accepted.
pub const ANGLE_SUM_TOL: f64 = 1e-12;

/// Additive constant of the limiting triangle density.
pub const T_K3_OFFSET: Ratio<i64> = Ratio::new_raw(23, 3072);

/// Angle-free part of the `n⁶` coefficient of the triangle count.
pub const TRIANGLE_CONSTANT: Ratio<i64> = Ratio::new_raw(46, 9);

pub const T_K3_LOWER: Ratio<i64> = Ratio::new_raw(83, 12288);
pub const T_K3_UPPER: Ratio<i64> = Ratio::new_raw(1, 96);

fn to_f64(r: Ratio<i64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn check_angle(x: f64) -> Result<f64, TheoryError> {
    if x > 0.0 && x < PI {
        Ok(x)
    } else {
        Err(TheoryError::Domain(x))
    }
}

fn check_quad(q: &AngleQuad) -> Result<(), TheoryError> {
    q.to_array()
        .into_iter()
        .try_for_each(|x| check_angle(x).map(drop))
}

/// Leading term `(π−α)/(2π)·n⁴` of the node-crossing count of two bundles
/// meeting at angle `α`.
pub fn predicted_cro(alpha: f64, n: u64) -> Result<f64, TheoryError> {
    check_angle(alpha)?;
    Ok((PI - alpha) / (2.0 * PI) * (n as f64).powi(4))
}

fn choose2(n: u64) -> u128 {
    let n = u128::from(n);
    n * n.saturating_sub(1) / 2
}

fn choose3(n: u64) -> u128 {
    let n = u128::from(n);
    n * n.saturating_sub(1) * n.saturating_sub(2) / 6
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossingPrediction {
    /// `4n⁴`.
    pub c: u128,
    /// `16·C(n,2)²`.
    pub b: u128,
    /// Sum of [`predicted_cro`] over the node bundle pairs.
    pub n: f64,
    /// `8·n³(n−1)`.
    pub n_exact: u128,
    pub total: f64,
}

/// Predicted crossing counts by type.
///
/// Each angle of the quad occurs at two antipodal nodes, and at each node
/// the four non-antipodal bundle pairs split into two pairs at angle `x` and
/// two at `π−x`.
pub fn predicted_crossing_census(q: &AngleQuad, n: u64) -> Result<CrossingPrediction, TheoryError> {
    check_quad(q)?;
    let mut node = 0.0;
    for x in q.to_array() {
        node += 2.0 * 2.0 * (predicted_cro(x, n)? + predicted_cro(PI - x, n)?);
    }
    let nn = u128::from(n);
    let c = 4 * nn.pow(4);
    let b = 16 * choose2(n).pow(2);
    Ok(CrossingPrediction {
        c,
        b,
        n: node,
        n_exact: 8 * nn.pow(3) * nn.saturating_sub(1),
        total: (c + b) as f64 + node,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrianglePrediction {
    pub cnn: f64,
    pub bbb: f64,
    pub ccb: f64,
    pub bnn: f64,
    pub total: f64,
    /// `16·C(n,3)²`.
    pub bbb_exact: u128,
    /// `8·C(n,2)²·n²`.
    pub ccb_exact: u128,
}

/// Leading-order triangle counts by type. The four types sum to
/// `[(Σx² − πΣx)/π² + (2π−α−δ)(2π−γ−β)/(2π²) + 46/9]·n⁶`.
pub fn predicted_triangle_census(q: &AngleQuad, n: u64) -> Result<TrianglePrediction, TheoryError> {
    check_quad(q)?;
    let AngleQuad {
        alpha,
        beta,
        gamma,
        delta,
    } = *q;
    let nf = n as f64;
    let n6 = nf.powi(6);
    let cro = |x: f64| predicted_cro(x, n);
    let cnn = 2.0 / (nf * nf) * (cro(alpha)? + cro(delta)?) * (cro(gamma)? + cro(beta)?);
    let bbb = 4.0 / 9.0 * n6;
    let ccb = 2.0 * n6;
    let bnn_coeff = q.to_array().iter().map(|x| x * (x - PI)).sum::<f64>() / (PI * PI) + 8.0 / 3.0;
    let bnn = bnn_coeff * n6;
    Ok(TrianglePrediction {
        cnn,
        bbb,
        ccb,
        bnn,
        total: cnn + bbb + ccb + bnn,
        bbb_exact: 16 * choose3(n).pow(2),
        ccb_exact: 8 * choose2(n).pow(2) * u128::from(n).pow(2),
    })
}

/// Limiting triangle density of the blow-up graphon:
/// `3/(2¹²π²)·[(2π−α−δ)(2π−γ−β) + 2Σx² − 2πΣx] + 23/3072`.
pub fn t_k3_formula(q: &AngleQuad) -> Result<f64, TheoryError> {
    check_quad(q)?;
    let AngleQuad {
        alpha,
        beta,
        gamma,
        delta,
    } = *q;
    let xs = q.to_array();
    let sq: f64 = xs.iter().map(|x| x * x).sum();
    let s: f64 = xs.iter().sum();
    let bracket = (2.0 * PI - alpha - delta) * (2.0 * PI - gamma - beta) + 2.0 * sq - 2.0 * PI * s;
    Ok(3.0 / (4096.0 * PI * PI) * bracket + to_f64(T_K3_OFFSET))
}

/// The attainable range `(83/12288, 1/96)` of the limiting triangle density.
pub fn t_k3_bounds() -> (Ratio<i64>, Ratio<i64>) {
    (T_K3_LOWER, T_K3_UPPER)
}

/// `α+β+γ+δ < 2π`, up to [`ANGLE_SUM_TOL`].
pub fn angle_sum_ok(q: &AngleQuad) -> bool {
    q.sum() < 2.0 * PI + ANGLE_SUM_TOL
}

/// Triangle density `6T/(16n²)³` implied by a triangle count `T`.
pub fn triangle_density(triangles: f64, n: u64) -> f64 {
    6.0 * triangles / (16.0 * (n as f64).powi(2)).powi(3)
}

/// One-parameter family of base configurations near a great circle.
///
/// `v2` sits just below the equator at longitude 0 and `w2` just below it at
/// longitude `lambda`; `v1` and `w1` sit just above it and trade places as
/// `t` runs from 0 to 1. At `t = 0` all four angles are small, at `t = 1`
/// all are close to right angles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepFamily {
    pub lambda: f64,
    /// Latitude offset of the `v` points.
    pub eps: f64,
    /// The `w` points sit at latitude `±ratio·eps`.
    pub ratio: f64,
    pub r: f64,
    pub n: usize,
}

impl Default for SweepFamily {
    fn default() -> Self {
        Self {
            lambda: PI / 2.0,
            eps: 0.01,
            ratio: 2.0,
            r: 1e-4,
            n: 1,
        }
    }
}

fn lat_lon(lat: f64, lon: f64) -> UnitVec {
    UnitVec::from_spherical(PI / 2.0 - lat, lon)
}

impl SweepFamily {
    pub fn config(&self, t: f64) -> BlowupConfig {
        let (e, l) = (self.eps, self.lambda);
        BlowupConfig::new(
            lat_lon(e, t * l),
            lat_lon(-e, 0.0),
            lat_lon(self.ratio * e, (1.0 - t) * l),
            lat_lon(-self.ratio * e, l),
            self.r,
            self.n,
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub t: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    pub t_k3: f64,
    pub angle_sum_ok: bool,
}

/// Evaluates the family at `steps` evenly spaced parameters in `[0, 1]`.
pub fn sweep(family: &SweepFamily, steps: usize) -> Result<Vec<SweepRow>, TheoryError> {
    if steps == 0 {
        return Err(TheoryError::EmptyFamily);
    }
    (0..steps)
        .map(|i| {
            let t = if steps == 1 {
                0.0
            } else {
                i as f64 / (steps - 1) as f64
            };
            let q = base_angles(&family.config(t))?;
            Ok(SweepRow {
                t,
                alpha: q.alpha,
                beta: q.beta,
                gamma: q.gamma,
                delta: q.delta,
                t_k3: t_k3_formula(&q)?,
                angle_sum_ok: angle_sum_ok(&q),
            })
        })
        .collect()
}

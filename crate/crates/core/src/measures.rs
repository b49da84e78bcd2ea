//! Seeded samplers for nondegenerate probability measures on the sphere.
//!
//! Randomness comes from ChaCha20 (the `rand_chacha` implementation of
//! RFC 8439's block function, 20 rounds). A stream is addressed by
//! `(seed, stream_id, counter)`: the 64-bit seed is expanded into the 256-bit
//! key with `SeedableRng::seed_from_u64`, `stream_id` selects the ChaCha
//! nonce and `counter` is the 32-bit word position inside the keystream.
//! Identical addresses always give identical draws, which is what makes the
//! parallel estimators independent of worker count.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{UnitVec, Vec3};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MeasureError {
    #[error("invalid measure spec: {0}")]
    InvalidSpec(String),
}

/// A reproducible, counter-addressed ChaCha20 stream.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
    rng: ChaCha20Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        Self::at(seed, stream_id, 0)
    }

    /// A stream positioned at word `counter`.
    pub fn at(seed: u64, stream_id: u64, counter: u64) -> Self {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        rng.set_word_pos(u128::from(counter));
        Self {
            seed,
            stream_id,
            rng,
        }
    }

    /// Same seed, different stream, counter reset. Cheaper than [`RngStream::new`]
    /// because the key expansion is reused.
    pub fn substream(&self, stream_id: u64) -> Self {
        let mut rng = self.rng.clone();
        rng.set_stream(stream_id);
        rng.set_word_pos(0);
        Self {
            seed: self.seed,
            stream_id,
            rng,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Current word position in the keystream.
    pub fn counter(&self) -> u64 {
        self.rng.get_word_pos() as u64
    }

    /// Uniform on `[0, 1)` with 53 bits of precision.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    /// Uniform index in `0..n`.
    #[inline]
    pub fn index(&mut self, n: usize) -> usize {
        self.rng.random_range(0..n)
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

/// Probability measures the samplers know how to draw from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum MeasureSpec {
    /// Normalized surface measure.
    Uniform,
    /// Uniform mixture over circles of angular radius `radius` about each
    /// center, each circle sampled uniformly by arc length.
    Circles { centers: Vec<UnitVec>, radius: f64 },
    /// Draw from `inner`, then replace by the antipode with probability ½.
    Symmetrized { inner: Box<MeasureSpec> },
}

impl MeasureSpec {
    pub fn symmetrized(inner: MeasureSpec) -> Self {
        MeasureSpec::Symmetrized {
            inner: Box::new(inner),
        }
    }

    pub fn validate(&self) -> Result<(), MeasureError> {
        match self {
            MeasureSpec::Uniform => Ok(()),
            MeasureSpec::Circles { centers, radius } => {
                if centers.is_empty() {
                    return Err(MeasureError::InvalidSpec(
                        "circle family without centers".into(),
                    ));
                }
                if !(*radius > 0.0 && *radius < FRAC_PI_2) {
                    return Err(MeasureError::InvalidSpec(format!(
                        "circle radius {radius} outside (0, pi/2)"
                    )));
                }
                for (i, c) in centers.iter().enumerate() {
                    for d in &centers[i + 1..] {
                        if c.vec().cross(d.vec()).norm() < 1e-12 && c.dot(*d) > 0.0 {
                            return Err(MeasureError::InvalidSpec(format!(
                                "duplicate circle center {c:?}"
                            )));
                        }
                    }
                }
                Ok(())
            }
            MeasureSpec::Symmetrized { inner } => inner.validate(),
        }
    }
}

/// `z` uniform on `[-1, 1]`, azimuth uniform on `[0, 2π)`.
#[inline]
pub fn sample_uniform_sphere(rng: &mut RngStream) -> UnitVec {
    let z = 2.0 * rng.uniform() - 1.0;
    let phi = 2.0 * PI * rng.uniform();
    let s = (1.0 - z * z).max(0.0).sqrt();
    let (sp, cp) = phi.sin_cos();
    UnitVec::from_vec_unchecked(Vec3::new(s * cp, s * sp, z))
}

/// An orthonormal tangent frame `(e1, e2)` at `c` with `e1 × e2 = c`.
pub fn tangent_frame(c: UnitVec) -> (Vec3, Vec3) {
    let v = c.vec();
    let helper = if v.x.abs() <= v.y.abs() && v.x.abs() <= v.z.abs() {
        Vec3::new(1.0, 0.0, 0.0)
    } else if v.y.abs() <= v.z.abs() {
        Vec3::new(0.0, 1.0, 0.0)
    } else {
        Vec3::new(0.0, 0.0, 1.0)
    };
    let e1 = helper.cross(v);
    let e1 = e1 * (1.0 / e1.norm());
    let e2 = v.cross(e1);
    (e1, e2)
}

/// Point at angular distance `radius` from `c`, at position angle `theta`
/// in the frame of [`tangent_frame`].
pub fn point_on_circle(c: UnitVec, frame: (Vec3, Vec3), radius: f64, theta: f64) -> UnitVec {
    let (sr, cr) = radius.sin_cos();
    let (st, ct) = theta.sin_cos();
    let v = c.vec() * cr + (frame.0 * ct + frame.1 * st) * sr;
    UnitVec::from_vec_unchecked(v * (1.0 / v.norm()))
}

/// Draws one point from `spec`. The spec is assumed valid; use
/// [`MeasureSpec::validate`] first for untrusted input.
pub fn sample_measure(spec: &MeasureSpec, rng: &mut RngStream) -> UnitVec {
    match spec {
        MeasureSpec::Uniform => sample_uniform_sphere(rng),
        MeasureSpec::Circles { centers, radius } => {
            let c = centers[rng.index(centers.len())];
            let theta = 2.0 * PI * rng.uniform();
            point_on_circle(c, tangent_frame(c), *radius, theta)
        }
        MeasureSpec::Symmetrized { inner } => {
            let p = sample_measure(inner, rng);
            if rng.uniform() < 0.5 {
                -p
            } else {
                p
            }
        }
    }
}

/// Validating wrapper around [`sample_measure`].
pub fn try_sample_measure(
    spec: &MeasureSpec,
    rng: &mut RngStream,
) -> Result<UnitVec, MeasureError> {
    spec.validate()?;
    Ok(sample_measure(spec, rng))
}

/// Structural antipodal-symmetry check.
pub fn is_antipodally_symmetric(spec: &MeasureSpec) -> bool {
    match spec {
        MeasureSpec::Uniform | MeasureSpec::Symmetrized { .. } => true,
        MeasureSpec::Circles { centers, .. } => {
            let close = |p: UnitVec, q: UnitVec| (p.vec() - q.vec()).norm() < 1e-12;
            centers.iter().all(|&c| {
                let same = centers.iter().filter(|&&d| close(c, d)).count();
                let anti = centers.iter().filter(|&&d| close(-c, d)).count();
                same == anti
            })
        }
    }
}

//! Brute-force references for the indexed paths.
//!
//! These share the sphere kernel's distance test, so a disagreement with the
//! engine points at zone, band or margin logic rather than geometry.

use crate::index::PointRecord;
use crate::matching::MatchPair;
use crate::query::Neighbor;
use crate::sphere::{angular_distance_deg, chord_sq_limit, SphericalCoord, UnitVector};

/// Linear scan for everything strictly within `theta` of `center`.
pub fn brute_neighbors(points: &[PointRecord], center: &SphericalCoord, theta: f64) -> Vec<Neighbor> {
    let c = center.to_unit_vector();
    let limit = chord_sq_limit(theta);
    let mut out: Vec<Neighbor> = points
        .iter()
        .filter(|p| limit > c.chord_sq(&p.unit))
        .map(|p| Neighbor {
            obj_id: p.obj_id,
            distance: angular_distance_deg(&c, &p.unit),
        })
        .collect();
    out.sort_by(|a, b| a.distance.total_cmp(&b.distance).then(a.obj_id.cmp(&b.obj_id)));
    out
}

/// All-pairs match. In `self_mode` pass the same slice twice; pairs with
/// equal ids are skipped and both orders come out naturally.
pub fn brute_match(a: &[PointRecord], b: &[PointRecord], theta: f64, self_mode: bool) -> Vec<MatchPair> {
    let limit = chord_sq_limit(theta);
    let mut out = Vec::new();
    for p in a {
        for q in b {
            if self_mode && p.obj_id == q.obj_id {
                continue;
            }
            if limit > p.unit.chord_sq(&q.unit) {
                out.push(MatchPair {
                    obj_id1: p.obj_id,
                    obj_id2: q.obj_id,
                    distance: angular_distance_deg(&p.unit, &q.unit),
                });
            }
        }
    }
    out.sort_by(|x, y| x.obj_id1.cmp(&y.obj_id1).then(x.obj_id2.cmp(&y.obj_id2)));
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleSample {
    pub phi: f64,
    pub point: UnitVector,
}

/// Point at angle `phi` on the circle of radius `theta` around
/// `(ra = 0, dec)`, all in degrees.
///
/// Built from the local frame: `n` toward the center, `u` northward in the
/// tangent plane and `w` westward, `x = n cos θ + u sin θ cos φ + w sin θ sin φ`.
pub fn circle_point(theta: f64, dec: f64, phi: f64) -> UnitVector {
    let (st, ct) = theta.to_radians().sin_cos();
    let (sd, cd) = dec.to_radians().sin_cos();
    let (sp, cp) = phi.to_radians().sin_cos();
    let n = [cd, 0.0, sd];
    let u = [-sd, 0.0, cd];
    let w = [0.0, -1.0, 0.0];
    let comp = |i: usize| n[i] * ct + u[i] * st * cp + w[i] * st * sp;
    UnitVector {
        x: comp(0),
        y: comp(1),
        z: comp(2),
    }
}

pub fn circle_samples(theta: f64, dec: f64, samples: usize) -> impl Iterator<Item = CircleSample> {
    (0..samples).map(move |i| {
        let phi = 360.0 * i as f64 / samples as f64;
        CircleSample {
            phi,
            point: circle_point(theta, dec, phi),
        }
    })
}

/// Reusable φ grid so repeated maximizations skip the per-sample sin/cos of φ.
pub struct CircleSampler {
    cos_phi: Vec<f64>,
    sin_phi: Vec<f64>,
}

impl CircleSampler {
    pub fn new(samples: usize) -> Self {
        let (sin_phi, cos_phi) = (0..samples)
            .map(|i| (std::f64::consts::TAU * i as f64 / samples as f64).sin_cos())
            .unzip();
        Self { cos_phi, sin_phi }
    }

    pub fn samples(&self) -> usize {
        self.cos_phi.len()
    }

    /// Largest |ra| in degrees over the sampled circle around `(0, dec)`.
    pub fn max_abs_ra(&self, theta: f64, dec: f64) -> f64 {
        let (st, ct) = theta.to_radians().sin_cos();
        let (sd, cd) = dec.to_radians().sin_cos();
        // Over x > 0, |atan2(y, x)| grows with |y| / x, so only the ratio is
        // tracked there.
        let mut best_ratio = 0.0f64;
        let mut best_angle = 0.0f64;
        for (&cp, &sp) in self.cos_phi.iter().zip(&self.sin_phi) {
            let x = cd * ct - sd * st * cp;
            let y = -st * sp;
            if x > 0.0 {
                best_ratio = best_ratio.max(y.abs() / x);
            } else {
                best_angle = best_angle.max(y.atan2(x).abs());
            }
        }
        best_ratio.atan().max(best_angle).to_degrees()
    }
}

/// Half-width in ra of the circle of radius `theta` around declination
/// `dec`, found by sampling `samples` points of the circle.
pub fn alpha_by_sampling(theta: f64, dec: f64, samples: usize) -> f64 {
    CircleSampler::new(samples).max_abs_ra(theta, dec)
}

/// Ra of the circle point where `d(tan ra)/dφ = 0`, i.e.
/// `cos φ = tan θ tan dec`. Valid while `|dec| + theta < 90`.
pub fn alpha_at_critical_point(theta: f64, dec: f64) -> f64 {
    let t = theta.to_radians();
    let d = dec.to_radians();
    let cos_phi = t.tan() * d.tan();
    let sin_phi = (1.0 - cos_phi * cos_phi).max(0.0).sqrt();
    let tan_ra = -t.sin() * sin_phi / (t.cos() * d.cos() - t.sin() * d.sin() * cos_phi);
    tan_ra.abs().atan().to_degrees()
}

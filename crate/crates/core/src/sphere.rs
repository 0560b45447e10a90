//! Spherical geometry kernel.
//!
//! All angles cross the public surface in degrees. Conversions to radians
//! happen here and nowhere else.

use std::fmt;

use crate::error::CoordError;

/// Right ascension / declination pair in degrees.
///
/// `ra` is kept in `[0, 360)` and `dec` in `[-90, 90]`. Longitude/latitude
/// inputs map onto the same type (lon ~ ra, lat ~ dec).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalCoord {
    ra: f64,
    dec: f64,
}

impl SphericalCoord {
    /// Builds a coordinate, wrapping `ra` into `[0, 360)`.
    pub fn new(ra: f64, dec: f64) -> Result<Self, CoordError> {
        if !ra.is_finite() || !dec.is_finite() {
            return Err(CoordError::NonFinite);
        }
        if !(-90.0..=90.0).contains(&dec) {
            return Err(CoordError::DecOutOfRange(dec));
        }
        Ok(Self {
            ra: normalize_ra(ra),
            dec,
        })
    }

    /// Same as [`SphericalCoord::new`] with geographic argument order.
    pub fn from_lon_lat(lon: f64, lat: f64) -> Result<Self, CoordError> {
        Self::new(lon, lat)
    }

    pub fn ra(&self) -> f64 {
        self.ra
    }

    pub fn dec(&self) -> f64 {
        self.dec
    }

    pub fn to_unit_vector(&self) -> UnitVector {
        to_unit_vector(self)
    }
}

impl fmt::Display for SphericalCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(ra {}, dec {})", self.ra, self.dec)
    }
}

/// Cartesian point on the unit sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl UnitVector {
    pub fn dot(&self, other: &UnitVector) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    /// Squared Euclidean chord length to `other`.
    pub fn chord_sq(&self, other: &UnitVector) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        let dz = self.z - other.z;
        dx * dx + dy * dy + dz * dz
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }
}

/// Unit for reported distances.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DistanceUnit {
    #[default]
    Degrees,
    /// One nautical mile is one arcminute of a great circle.
    NauticalMiles,
    Arcminutes,
}

impl DistanceUnit {
    pub fn from_degrees(self, deg: f64) -> f64 {
        match self {
            DistanceUnit::Degrees => deg,
            DistanceUnit::NauticalMiles | DistanceUnit::Arcminutes => deg * 60.0,
        }
    }
}

impl std::str::FromStr for DistanceUnit {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "deg" => Ok(DistanceUnit::Degrees),
            "nm" => Ok(DistanceUnit::NauticalMiles),
            "arcmin" => Ok(DistanceUnit::Arcminutes),
            other => Err(format!("unknown unit {other:?} (expected deg, nm or arcmin)")),
        }
    }
}

/// Wraps any finite angle into `[0, 360)`.
pub fn normalize_ra(ra: f64) -> f64 {
    let r = ra.rem_euclid(360.0);
    // rem_euclid can round tiny negatives up to exactly 360.
    if r >= 360.0 {
        0.0
    } else {
        r
    }
}

pub fn to_unit_vector(c: &SphericalCoord) -> UnitVector {
    let ra = c.ra.to_radians();
    let dec = c.dec.to_radians();
    let (sin_ra, cos_ra) = ra.sin_cos();
    let (sin_dec, cos_dec) = dec.sin_cos();
    UnitVector {
        x: cos_dec * cos_ra,
        y: cos_dec * sin_ra,
        z: sin_dec,
    }
}

/// Great-circle separation in degrees, computed from the chord as
/// `2 asin(|a - b| / 2)`. This keeps full precision at arcsecond scales where
/// `acos(a . b)` does not.
pub fn angular_distance_deg(a: &UnitVector, b: &UnitVector) -> f64 {
    let chord = a.chord_sq(b).sqrt().clamp(0.0, 2.0);
    (2.0 * (chord / 2.0).asin()).to_degrees()
}

/// Squared chord length of a great-circle arc of `theta` degrees:
/// `4 sin²(θ/2)`.
pub fn chord_sq_limit(theta: f64) -> f64 {
    let s = (theta.to_radians() / 2.0).sin();
    4.0 * s * s
}

/// The careful distance test: strictly closer than `theta` degrees.
pub fn within_radius(a: &UnitVector, b: &UnitVector, theta: f64) -> bool {
    chord_sq_limit(theta) > a.chord_sq(b)
}

/// Half-width in right ascension of the bounding box of a circle of radius
/// `theta` centered at declination `dec`, both in degrees.
///
/// Returns 180 once the circle reaches a pole (`|dec| + theta >= 90`).
pub fn alpha(theta: f64, dec: f64) -> f64 {
    if dec.abs() + theta >= 90.0 {
        return 180.0;
    }
    let t = theta.to_radians();
    let d = dec.to_radians();
    let radicand = ((d - t).cos() * (d + t).cos()).max(0.0);
    (t.sin() / radicand.sqrt()).atan().abs().to_degrees()
}

//! Catalog loading and synthetic catalogs.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::fs::File;
use std::io::Read;
use std::path::Path;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::IngestError;
use crate::index::{ObjType, PointRecord};
use crate::sphere::{normalize_ra, SphericalCoord};

/// Which CSV columns hold the id and position. Longitude is read as ra and
/// latitude as dec; an ra/dec catalog simply names its ra and dec columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogSchema {
    pub id_column: String,
    pub lon_column: String,
    pub lat_column: String,
    /// Extra columns kept per object for reports.
    pub payload_columns: Vec<String>,
}

impl CatalogSchema {
    pub fn new(id: &str, lon: &str, lat: &str) -> Self {
        Self {
            id_column: id.to_string(),
            lon_column: lon.to_string(),
            lat_column: lat.to_string(),
            payload_columns: Vec::new(),
        }
    }

    pub fn with_payload<S: AsRef<str>>(mut self, columns: &[S]) -> Self {
        self.payload_columns = columns.iter().map(|c| c.as_ref().to_string()).collect();
        self
    }

    /// USGS populated places table.
    pub fn usgs_place() -> Self {
        Self::new("PlaceID", "Lon", "Lat").with_payload(&["PlaceName", "State"])
    }

    /// USGS stream-gauge station table.
    pub fn usgs_station() -> Self {
        Self::new("StationNumber", "Lon", "Lat").with_payload(&["StationName", "State"])
    }
}

#[derive(Debug, Clone, Default)]
pub struct Catalog {
    pub records: Vec<PointRecord>,
    pub payload_columns: Vec<String>,
    pub payload: HashMap<i64, Vec<String>>,
}

impl Catalog {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

pub fn parse_catalog(path: impl AsRef<Path>, schema: &CatalogSchema, obj_type: ObjType) -> Result<Catalog, IngestError> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| IngestError::Open {
        path: path.to_path_buf(),
        source,
    })?;
    read_catalog(file, schema, obj_type)
}

fn column(headers: &csv::StringRecord, name: &str) -> Result<usize, IngestError> {
    headers
        .iter()
        .position(|h| h.trim().eq_ignore_ascii_case(name))
        .ok_or_else(|| IngestError::MissingColumn(name.to_string()))
}

pub fn read_catalog<R: Read>(reader: R, schema: &CatalogSchema, obj_type: ObjType) -> Result<Catalog, IngestError> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let headers = rdr.headers()?.clone();
    let id_col = column(&headers, &schema.id_column)?;
    let lon_col = column(&headers, &schema.lon_column)?;
    let lat_col = column(&headers, &schema.lat_column)?;
    let payload_cols = schema
        .payload_columns
        .iter()
        .map(|c| column(&headers, c))
        .collect::<Result<Vec<_>, _>>()?;

    let mut catalog = Catalog {
        payload_columns: schema.payload_columns.clone(),
        ..Catalog::default()
    };
    let mut seen = HashSet::new();
    for rec in rdr.records() {
        let rec = rec?;
        let row = rec.position().map_or(0, |p| p.line() as usize);
        let field = |i: usize| rec.get(i).unwrap_or("").trim();
        let number = |i: usize, name: &str| {
            let v = field(i);
            v.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| IngestError::NonNumeric {
                    row,
                    column: name.to_string(),
                    value: v.to_string(),
                })
        };
        let id_text = field(id_col);
        let id: i64 = id_text.parse().map_err(|_| IngestError::BadId {
            row,
            value: id_text.to_string(),
        })?;
        let lon = number(lon_col, &schema.lon_column)?;
        let lat = number(lat_col, &schema.lat_column)?;
        if !(-90.0..=90.0).contains(&lat) {
            return Err(IngestError::LatOutOfRange { row, value: lat });
        }
        if !seen.insert(id) {
            return Err(IngestError::DuplicateId { row, id });
        }
        let coord = SphericalCoord::from_lon_lat(lon, lat).expect("validated above");
        catalog.records.push(PointRecord::new(obj_type, id, coord));
        if !payload_cols.is_empty() {
            catalog
                .payload
                .insert(id, payload_cols.iter().map(|&i| field(i).to_string()).collect());
        }
    }
    Ok(catalog)
}

/// Synthetic catalog layouts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Distribution {
    /// Area-uniform over the whole sphere.
    UniformSphere,
    /// Area-uniform within 2° of either pole.
    PolarCap,
    /// Within ±1° of ra = 0, area-uniform in dec.
    MeridianStrip,
}

impl Distribution {
    pub const ALL: [Distribution; 3] = [
        Distribution::UniformSphere,
        Distribution::PolarCap,
        Distribution::MeridianStrip,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Distribution::UniformSphere => "uniform",
            Distribution::PolarCap => "polar-cap",
            Distribution::MeridianStrip => "meridian-strip",
        }
    }
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Distribution {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "uniform" | "uniform-sphere" => Ok(Distribution::UniformSphere),
            "polar-cap" => Ok(Distribution::PolarCap),
            "meridian-strip" => Ok(Distribution::MeridianStrip),
            other => Err(format!("unknown distribution {other:?}")),
        }
    }
}

const CAP_RADIUS_DEG: f64 = 2.0;
const STRIP_HALF_WIDTH_DEG: f64 = 1.0;

/// `n` points with ids `1..=n`, reproducible for a given seed.
pub fn generate_synthetic(n: usize, seed: u64, distribution: Distribution, obj_type: ObjType) -> Vec<PointRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let uniform_dec = |rng: &mut ChaCha8Rng| rng.gen_range(-1.0f64..=1.0).asin().to_degrees();
    (1..=n as i64)
        .map(|id| {
            let (ra, dec) = match distribution {
                Distribution::UniformSphere => (rng.gen_range(0.0..360.0), uniform_dec(&mut rng)),
                Distribution::PolarCap => {
                    let north = rng.gen_bool(0.5);
                    let cos_min = CAP_RADIUS_DEG.to_radians().cos();
                    let colat = rng.gen_range(cos_min..=1.0f64).acos().to_degrees();
                    let dec = if north { 90.0 - colat } else { colat - 90.0 };
                    (rng.gen_range(0.0..360.0), dec)
                }
                Distribution::MeridianStrip => {
                    let ra = rng.gen_range(-STRIP_HALF_WIDTH_DEG..STRIP_HALF_WIDTH_DEG);
                    (normalize_ra(ra), uniform_dec(&mut rng))
                }
            };
            let coord = SphericalCoord::new(ra, dec.clamp(-90.0, 90.0)).expect("generated in range");
            PointRecord::new(obj_type, id, coord)
        })
        .collect()
}

//! Zone-based indexing of points on the sphere.
//!
//! The sky (or the globe) is cut into declination stripes of fixed height.
//! Inside a stripe objects are ordered by right ascension, so a
//! points-near-a-point search, or a whole-catalog match, becomes a handful of
//! range scans followed by an exact distance test.
//!
//! * [`sphere`]: unit vectors, chordal distance, the ra half-width `alpha`.
//! * [`index`]: zone assignment, margin copies, the zone and zone-pair tables,
//!   and the index file format.
//! * [`query`]: points-near-a-point and nearest object.
//! * [`matching`]: batch self-match and cross-match.
//! * [`oracle`]: brute-force references used to check all of the above.
//! * [`ingest`]: CSV catalogs and synthetic catalogs.

pub mod error;
pub mod index;
pub mod ingest;
pub mod matching;
pub mod oracle;
pub mod query;
pub mod sphere;

pub use error::{
    BuildError, ConfigError, CoordError, Error, IngestError, LoadError, MatchError, QueryError,
};
pub use index::{
    load_index, save_index, zone_of, IndexConfig, MarginPolicy, ObjType, PointRecord, ZoneEntry,
    ZoneIndexStore, ZoneRow, ZoneZonePair,
};
pub use ingest::{generate_synthetic, parse_catalog, Catalog, CatalogSchema, Distribution};
pub use matching::{cross_match, self_match, MatchJob, MatchMode, MatchPair};
pub use query::{nearest_object, plan_query, points_near_point, Neighbor, QueryPlan, QuerySpec};
pub use sphere::{alpha, angular_distance_deg, within_radius, DistanceUnit, SphericalCoord, UnitVector};

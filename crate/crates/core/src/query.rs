//! Points-near-a-point search and nearest-object search.

use std::io::{self, Write};

use crate::error::QueryError;
use crate::index::{IndexConfig, MarginPolicy, ObjType, ZoneIndexStore};
use crate::sphere::{alpha, angular_distance_deg, chord_sq_limit, DistanceUnit, SphericalCoord};

/// Where to look and how far.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuerySpec {
    pub obj_type: ObjType,
    pub center: SphericalCoord,
    /// Search radius in degrees.
    pub theta: f64,
}

/// The coarse filters of a query: a zone range, an ra window and a dec
/// window. Only entries passing all three reach the exact distance test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QueryPlan {
    pub min_zone: i64,
    pub max_zone: i64,
    pub alpha: f64,
    pub ra_lo: f64,
    pub ra_hi: f64,
    pub dec_lo: f64,
    pub dec_hi: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Neighbor {
    pub obj_id: i64,
    /// Angular distance from the query center in degrees.
    pub distance: f64,
}

/// Initial radius of the nearest-object probe (12 nautical miles).
pub const NEAREST_START_RADIUS: f64 = 0.2;

pub fn plan_query(spec: &QuerySpec, config: &IndexConfig) -> QueryPlan {
    let h = config.zone_height();
    let ra = spec.center.ra();
    let dec = spec.center.dec();
    let theta = spec.theta;
    let a = alpha(theta, dec);
    let (ra_lo, ra_hi) = if a >= 180.0 {
        (-180.0, 540.0)
    } else {
        (ra - a, ra + a)
    };
    QueryPlan {
        min_zone: ((dec - theta) / h).floor() as i64,
        max_zone: ((dec + theta) / h).floor() as i64,
        alpha: a,
        ra_lo,
        ra_hi,
        dec_lo: dec - theta,
        dec_hi: dec + theta,
    }
}

fn check_radius(store: &ZoneIndexStore, theta: f64) -> Result<(), QueryError> {
    if !(theta.is_finite() && theta > 0.0) {
        return Err(QueryError::InvalidRadius(theta));
    }
    let cfg = store.config();
    if cfg.margin() == MarginPolicy::Trimmed && theta > cfg.theta() {
        return Err(QueryError::ExceedsDesignRadius {
            theta,
            design: cfg.theta(),
        });
    }
    Ok(())
}

fn sort_neighbors(out: &mut Vec<Neighbor>) {
    out.sort_unstable_by(|a, b| {
        a.distance
            .total_cmp(&b.distance)
            .then(a.obj_id.cmp(&b.obj_id))
    });
    // A native entry and its margin copy share coordinates, so any double
    // hit sorts into adjacent slots.
    out.dedup_by_key(|n| n.obj_id);
}

/// All objects of `spec.obj_type` strictly within `spec.theta` of the
/// center, nearest first (ties by id).
pub fn points_near_point(store: &ZoneIndexStore, spec: &QuerySpec) -> Result<Vec<Neighbor>, QueryError> {
    check_radius(store, spec.theta)?;
    let plan = plan_query(spec, store.config());
    let center = spec.center.to_unit_vector();
    let limit = chord_sq_limit(spec.theta);
    let (zmin, zmax) = store.zone_bounds();

    let mut out = Vec::new();
    for zone in plan.min_zone.max(zmin)..=plan.max_zone.min(zmax) {
        for e in store.ra_range(spec.obj_type, zone, plan.ra_lo, plan.ra_hi) {
            if e.dec < plan.dec_lo || e.dec > plan.dec_hi {
                continue;
            }
            if limit > center.chord_sq(&e.unit) {
                out.push(Neighbor {
                    obj_id: e.obj_id,
                    distance: angular_distance_deg(&center, &e.unit),
                });
            }
        }
    }
    sort_neighbors(&mut out);
    Ok(out)
}

/// The closest object of `obj_type` to `center`, or `None` when the index
/// holds no object of that type.
///
/// Probes with a radius that starts at [`NEAREST_START_RADIUS`] and doubles
/// until something is found. Once the radius reaches the largest one the
/// index can answer (180°, or the design radius for trimmed margins) the
/// remaining search is a scan of every native entry.
pub fn nearest_object(store: &ZoneIndexStore, obj_type: ObjType, center: SphericalCoord) -> Option<Neighbor> {
    let cfg = store.config();
    let reach = match cfg.margin() {
        MarginPolicy::Full => 180.0,
        MarginPolicy::Trimmed => cfg.theta(),
        MarginPolicy::None => 0.0,
    };
    let mut theta = NEAREST_START_RADIUS;
    while theta < reach {
        let spec = QuerySpec {
            obj_type,
            center,
            theta,
        };
        let hits = points_near_point(store, &spec).expect("radius checked against reach");
        if let Some(first) = hits.first() {
            return Some(*first);
        }
        theta *= 2.0;
    }

    let c = center.to_unit_vector();
    store
        .native_entries(obj_type)
        .map(|e| Neighbor {
            obj_id: e.obj_id,
            distance: angular_distance_deg(&c, &e.unit),
        })
        .min_by(|a, b| {
            a.distance
                .total_cmp(&b.distance)
                .then(a.obj_id.cmp(&b.obj_id))
        })
}

/// Writes `objID,distance` rows with a header line.
pub fn write_neighbors_csv<W: Write>(found: &[Neighbor], unit: DistanceUnit, mut w: W) -> io::Result<()> {
    writeln!(w, "objID,distance")?;
    for n in found {
        writeln!(w, "{},{}", n.obj_id, unit.from_degrees(n.distance))?;
    }
    w.flush()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index::PointRecord;

    fn tag() -> ObjType {
        ObjType::new('P').unwrap()
    }

    fn coord(ra: f64, dec: f64) -> SphericalCoord {
        SphericalCoord::new(ra, dec).unwrap()
    }

    fn spec(ra: f64, dec: f64, theta: f64) -> QuerySpec {
        QuerySpec {
            obj_type: tag(),
            center: coord(ra, dec),
            theta,
        }
    }

    fn store(points: &[(i64, f64, f64)], cfg: IndexConfig) -> ZoneIndexStore {
        let pts: Vec<_> = points
            .iter()
            .map(|&(id, ra, dec)| PointRecord::new(tag(), id, coord(ra, dec)))
            .collect();
        ZoneIndexStore::build(&pts, cfg).unwrap()
    }

    #[test]
    fn plan_zone_range_straddles_equator() {
        let cfg = IndexConfig::for_radius(1.0).unwrap();
        let p = plan_query(&spec(10.0, 0.0, 0.5), &cfg);
        assert_eq!((p.min_zone, p.max_zone), (-1, 0));
        assert_eq!(p.alpha, 0.5);
        assert_eq!((p.ra_lo, p.ra_hi), (9.5, 10.5));
        assert_eq!((p.dec_lo, p.dec_hi), (-0.5, 0.5));
    }

    #[test]
    fn plan_zone_range_at_37_7() {
        // (37.7 -/+ 4') * 6 = 225.8 and 226.6; the dec window
        // [37.633, 37.767] touches zones 225 [37.5, 37.667) and 226.
        let cfg = IndexConfig::new(10.0 / 60.0, 1.0).unwrap();
        let p = plan_query(&spec(0.0, 37.7, 4.0 / 60.0), &cfg);
        assert_eq!((p.min_zone, p.max_zone), (225, 226));
    }

    #[test]
    fn plan_near_pole_spans_everything() {
        let cfg = IndexConfig::for_radius(1.0).unwrap();
        let p = plan_query(&spec(42.0, 89.95, 0.2), &cfg);
        assert_eq!(p.alpha, 180.0);
        assert_eq!((p.ra_lo, p.ra_hi), (-180.0, 540.0));
    }

    #[test]
    fn empty_store_gives_nothing() {
        let s = store(&[], IndexConfig::for_radius(1.0).unwrap());
        assert!(points_near_point(&s, &spec(0.0, 0.0, 1.0)).unwrap().is_empty());
        assert_eq!(nearest_object(&s, tag(), coord(0.0, 0.0)), None);
    }

    #[test]
    fn greenwich_sees_london_across_the_meridian() {
        let s = store(
            &[(1, 359.95, 51.48), (2, 0.5, 51.48)],
            IndexConfig::new(10.0 / 60.0, 10.0 / 60.0).unwrap(),
        );
        let hits = points_near_point(&s, &spec(0.02, 51.48, 10.0 / 60.0)).unwrap();
        assert_eq!(hits.len(), 1);
        assert_eq!(hits[0].obj_id, 1);
        let expect = angular_distance_deg(&coord(0.02, 51.48).to_unit_vector(), &coord(359.95, 51.48).to_unit_vector());
        assert_eq!(hits[0].distance, expect);
    }

    #[test]
    fn ring_around_the_pole() {
        let pts: Vec<_> = (0..8).map(|i| (i, i as f64 * 45.0, 89.8)).collect();
        let s = store(&pts, IndexConfig::for_radius(0.5).unwrap());
        let hits = points_near_point(&s, &spec(10.0, 89.9, 0.5)).unwrap();
        let mut ids: Vec<_> = hits.iter().map(|n| n.obj_id).collect();
        ids.sort();
        assert_eq!(ids, (0..8).collect::<Vec<_>>());
    }

    #[test]
    fn results_sorted_by_distance_then_id() {
        let s = store(
            &[(5, 10.0, 0.3), (3, 10.0, -0.3), (4, 10.2, 0.0), (9, 10.0, 0.0)],
            IndexConfig::for_radius(1.0).unwrap(),
        );
        let hits = points_near_point(&s, &spec(10.0, 0.0, 1.0)).unwrap();
        let ids: Vec<_> = hits.iter().map(|n| n.obj_id).collect();
        assert_eq!(ids, vec![9, 4, 3, 5]);
    }

    #[test]
    fn trimmed_index_rejects_wide_queries() {
        let cfg = IndexConfig::for_radius(1.0).unwrap().with_margin(MarginPolicy::Trimmed);
        let s = store(&[(1, 0.0, 0.0)], cfg);
        assert!(points_near_point(&s, &spec(0.0, 0.0, 1.0)).is_ok());
        assert_eq!(
            points_near_point(&s, &spec(0.0, 0.0, 1.5)),
            Err(QueryError::ExceedsDesignRadius { theta: 1.5, design: 1.0 })
        );
        assert!(matches!(
            points_near_point(&s, &spec(0.0, 0.0, 0.0)),
            Err(QueryError::InvalidRadius(_))
        ));
    }

    #[test]
    fn nearest_finds_a_lone_far_point() {
        for &(ra, dec) in &[(10.0, 0.0), (190.0, 0.0), (0.0, -90.0), (123.0, 45.0)] {
            let s = store(&[(77, ra, dec)], IndexConfig::for_radius(1.0).unwrap());
            let n = nearest_object(&s, tag(), coord(10.0, 0.0)).unwrap();
            assert_eq!(n.obj_id, 77);
        }
    }

    #[test]
    fn nearest_on_trimmed_index_falls_back_to_scan() {
        let cfg = IndexConfig::for_radius(1.0).unwrap().with_margin(MarginPolicy::Trimmed);
        let s = store(&[(1, 100.0, 30.0), (2, 250.0, -10.0)], cfg);
        let n = nearest_object(&s, tag(), coord(240.0, 0.0)).unwrap();
        assert_eq!(n.obj_id, 2);
    }

    #[test]
    fn nearest_breaks_ties_by_id() {
        let s = store(&[(8, 10.0, 0.1), (6, 10.0, -0.1)], IndexConfig::for_radius(1.0).unwrap());
        assert_eq!(nearest_object(&s, tag(), coord(10.0, 0.0)).unwrap().obj_id, 6);
    }
}

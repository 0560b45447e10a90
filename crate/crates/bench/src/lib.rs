//! Fixtures shared by the benchmarks under `benches/`.

use zones_core::{generate_synthetic, Distribution, IndexConfig, ObjType, PointRecord, ZoneIndexStore};

pub const SEED: u64 = 42;

pub fn tag() -> ObjType {
    ObjType::new('P').expect("valid tag")
}

pub fn catalog(n: usize, dist: Distribution) -> Vec<PointRecord> {
    generate_synthetic(n, SEED, dist, tag())
}

/// Index with 10' zones and the given design radius.
pub fn store(points: &[PointRecord], theta: f64) -> ZoneIndexStore {
    let cfg = IndexConfig::new(10.0 / 60.0, theta).expect("valid config");
    ZoneIndexStore::build(points, cfg).expect("distinct ids")
}

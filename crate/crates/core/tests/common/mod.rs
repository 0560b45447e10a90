#![allow(dead_code)]

use std::collections::BTreeSet;

use zones_core::{MatchPair, Neighbor};

/// Distances this close to the radius are ambiguous at f64 precision and are
/// dropped from both sides of a comparison.
pub const BOUNDARY_BAND: f64 = 1e-9;

pub fn neighbor_ids(found: &[Neighbor], theta: f64) -> BTreeSet<i64> {
    found
        .iter()
        .filter(|n| (n.distance - theta).abs() > BOUNDARY_BAND)
        .map(|n| n.obj_id)
        .collect()
}

pub fn pair_set(found: &[MatchPair], theta: f64) -> BTreeSet<(i64, i64)> {
    found
        .iter()
        .filter(|p| (p.distance - theta).abs() > BOUNDARY_BAND)
        .map(|p| (p.obj_id1, p.obj_id2))
        .collect()
}

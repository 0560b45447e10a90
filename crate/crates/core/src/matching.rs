//! Batch self-match and cross-match over zone pairs.
//!
//! Each zone pair is an independent unit: a sweep along ra of the first
//! zone's native entries against the second zone's entries (native or
//! margin), limited to the pair's alpha band, the ±theta dec band and the
//! exact chord test. Units run on a rayon pool and the merged output is
//! sorted, so results do not depend on the worker count.

use std::io::{self, Write};

use rayon::prelude::*;

use crate::error::MatchError;
use crate::index::{ObjType, ZoneEntry, ZoneIndexStore, ZoneZonePair};
use crate::sphere::{angular_distance_deg, chord_sq_limit, DistanceUnit};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatchMode {
    SelfMatch,
    Cross,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchPair {
    pub obj_id1: i64,
    pub obj_id2: i64,
    /// Angular separation in degrees.
    pub distance: f64,
}

/// Everything a batch match needs. For self-matches `store_b`/`type_b`
/// equal `store_a`/`type_a`.
#[derive(Debug, Clone, Copy)]
pub struct MatchJob<'a> {
    pub store_a: &'a ZoneIndexStore,
    pub type_a: ObjType,
    pub store_b: &'a ZoneIndexStore,
    pub type_b: ObjType,
    pub theta: f64,
    pub mode: MatchMode,
    pub workers: usize,
    /// Self-match only: evaluate each unordered pair once and mirror the
    /// result. Turning it off gives the plain all-pairs evaluation.
    pub use_symmetry: bool,
}

impl<'a> MatchJob<'a> {
    pub fn self_match(store: &'a ZoneIndexStore, obj_type: ObjType, theta: f64) -> Self {
        Self {
            store_a: store,
            type_a: obj_type,
            store_b: store,
            type_b: obj_type,
            theta,
            mode: MatchMode::SelfMatch,
            workers: 1,
            use_symmetry: true,
        }
    }

    pub fn cross_match(
        store_a: &'a ZoneIndexStore,
        type_a: ObjType,
        store_b: &'a ZoneIndexStore,
        type_b: ObjType,
        theta: f64,
    ) -> Self {
        Self {
            store_a,
            type_a,
            store_b,
            type_b,
            theta,
            mode: MatchMode::Cross,
            workers: 1,
            use_symmetry: false,
        }
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub fn with_symmetry(mut self, on: bool) -> Self {
        self.use_symmetry = on;
        self
    }

    fn validate(&self) -> Result<(), MatchError> {
        if !(self.theta.is_finite() && self.theta > 0.0) {
            return Err(MatchError::InvalidRadius(self.theta));
        }
        if self.workers == 0 {
            return Err(MatchError::NoWorkers);
        }
        let (ca, cb) = (self.store_a.config(), self.store_b.config());
        if ca.zone_height() != cb.zone_height() {
            return Err(MatchError::ZoneHeightMismatch(ca.zone_height(), cb.zone_height()));
        }
        let design = ca.theta().min(cb.theta());
        if self.theta > design {
            return Err(MatchError::ExceedsDesignRadius {
                theta: self.theta,
                design,
            });
        }
        if self.mode == MatchMode::Cross
            && std::ptr::eq(self.store_a, self.store_b)
            && self.type_a == self.type_b
        {
            return Err(MatchError::SameDataset(self.type_a));
        }
        Ok(())
    }
}

/// Zone pairs sharing a first zone.
#[derive(Debug, Clone, PartialEq)]
pub struct ZoneGroup {
    pub zone1: i64,
    pub pairs: Vec<ZoneZonePair>,
}

/// Splits the zone-pair table into disjoint per-first-zone groups.
///
/// With `symmetric` set (self-match) only pairs with `zone1 <= zone2` are
/// kept; the reversed pairs are recovered by mirroring.
pub fn partition_workload(pairs: &[ZoneZonePair], symmetric: bool) -> Vec<ZoneGroup> {
    let mut groups: Vec<ZoneGroup> = Vec::new();
    for p in pairs.iter().filter(|p| !symmetric || p.zone1 <= p.zone2) {
        match groups.last_mut() {
            Some(g) if g.zone1 == p.zone1 => g.pairs.push(*p),
            _ => groups.push(ZoneGroup {
                zone1: p.zone1,
                pairs: vec![*p],
            }),
        }
    }
    groups
}

#[derive(Clone, Copy)]
enum PairRule {
    /// First member must be native; any second member.
    Cross,
    /// As `Cross`, skipping identical ids.
    AllOrdered,
    /// Identical-id skip, plus `id1 < id2` inside a zone; emits (min, max).
    Half { same_zone: bool },
}

struct Unit<'s> {
    a: &'s [ZoneEntry],
    b: &'s [ZoneEntry],
    alpha: f64,
    rule: PairRule,
}

fn sweep(unit: &Unit<'_>, theta: f64, limit: f64, out: &mut Vec<MatchPair>) {
    let b = unit.b;
    let mut start = 0;
    for a in unit.a.iter().filter(|e| !e.margin) {
        let ra_lo = a.ra - unit.alpha;
        let ra_hi = a.ra + unit.alpha;
        while start < b.len() && b[start].ra < ra_lo {
            start += 1;
        }
        for e in &b[start..] {
            if e.ra > ra_hi {
                break;
            }
            if e.dec < a.dec - theta || e.dec > a.dec + theta {
                continue;
            }
            let (id1, id2) = match unit.rule {
                PairRule::Cross => (a.obj_id, e.obj_id),
                PairRule::AllOrdered => {
                    if a.obj_id == e.obj_id {
                        continue;
                    }
                    (a.obj_id, e.obj_id)
                }
                PairRule::Half { same_zone } => {
                    if a.obj_id == e.obj_id || (same_zone && a.obj_id > e.obj_id) {
                        continue;
                    }
                    (a.obj_id.min(e.obj_id), a.obj_id.max(e.obj_id))
                }
            };
            if limit > a.unit.chord_sq(&e.unit) {
                out.push(MatchPair {
                    obj_id1: id1,
                    obj_id2: id2,
                    distance: angular_distance_deg(&a.unit, &e.unit),
                });
            }
        }
    }
}

fn sort_pairs(pairs: &mut Vec<MatchPair>) {
    pairs.sort_unstable_by(|x, y| {
        x.obj_id1
            .cmp(&y.obj_id1)
            .then(x.obj_id2.cmp(&y.obj_id2))
            .then(x.distance.total_cmp(&y.distance))
    });
    // Near the poles a band can reach both an object and its margin copy.
    pairs.dedup_by_key(|p| (p.obj_id1, p.obj_id2));
}

fn run(job: &MatchJob<'_>, half: bool) -> Result<Vec<MatchPair>, MatchError> {
    job.validate()?;
    let limit = chord_sq_limit(job.theta);
    let groups = partition_workload(job.store_a.zone_pairs(), half);
    let units: Vec<Unit<'_>> = groups
        .iter()
        .flat_map(|g| g.pairs.iter())
        .filter_map(|p| {
            let a = job.store_a.zone_slice(job.type_a, p.zone1);
            let b = job.store_b.zone_slice(job.type_b, p.zone2);
            if a.is_empty() || b.is_empty() {
                return None;
            }
            let rule = match (job.mode, half) {
                (MatchMode::Cross, _) => PairRule::Cross,
                (MatchMode::SelfMatch, false) => PairRule::AllOrdered,
                (MatchMode::SelfMatch, true) => PairRule::Half {
                    same_zone: p.zone1 == p.zone2,
                },
            };
            Some(Unit {
                a,
                b,
                alpha: p.alpha,
                rule,
            })
        })
        .collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(job.workers)
        .build()
        .map_err(|e| MatchError::Pool(e.to_string()))?;
    let mut pairs: Vec<MatchPair> = pool.install(|| {
        units
            .par_iter()
            .flat_map_iter(|u| {
                let mut buf = Vec::new();
                sweep(u, job.theta, limit, &mut buf);
                buf
            })
            .collect()
    });
    sort_pairs(&mut pairs);
    Ok(pairs)
}

/// Matches native objects of `type_a` against all objects of `type_b`.
/// Output is sorted by `(obj_id1, obj_id2)`.
pub fn cross_match(job: &MatchJob<'_>) -> Result<Vec<MatchPair>, MatchError> {
    run(&MatchJob { mode: MatchMode::Cross, ..*job }, false)
}

/// First phase of a symmetric self-match: every unordered neighbor pair once,
/// as `(smaller id, larger id)`.
pub fn self_match_half_pairs(job: &MatchJob<'_>) -> Result<Vec<MatchPair>, MatchError> {
    run(&self_job(job), true)
}

/// All ordered neighbor pairs `(a, b)` with `a != b` within one dataset.
pub fn self_match(job: &MatchJob<'_>) -> Result<Vec<MatchPair>, MatchError> {
    let job = self_job(job);
    if !job.use_symmetry {
        return run(&job, false);
    }
    let half = run(&job, true)?;
    Ok(mirror(half))
}

fn self_job<'a>(job: &MatchJob<'a>) -> MatchJob<'a> {
    MatchJob {
        store_b: job.store_a,
        type_b: job.type_a,
        mode: MatchMode::SelfMatch,
        ..*job
    }
}

/// Appends the reversed copy of every half-pair and re-sorts.
pub fn mirror(half: Vec<MatchPair>) -> Vec<MatchPair> {
    let mut all = half;
    let reversed: Vec<MatchPair> = all
        .iter()
        .map(|p| MatchPair {
            obj_id1: p.obj_id2,
            obj_id2: p.obj_id1,
            distance: p.distance,
        })
        .collect();
    all.extend(reversed);
    sort_pairs(&mut all);
    all
}

/// Runs the job according to its mode.
pub fn execute(job: &MatchJob<'_>) -> Result<Vec<MatchPair>, MatchError> {
    match job.mode {
        MatchMode::SelfMatch => self_match(job),
        MatchMode::Cross => cross_match(job),
    }
}

/// Writes `objID1,objID2,distance` rows with a header line.
pub fn write_pairs_csv<W: Write>(pairs: &[MatchPair], unit: DistanceUnit, mut w: W) -> io::Result<()> {
    writeln!(w, "objID1,objID2,distance")?;
    for p in pairs {
        writeln!(w, "{},{},{}", p.obj_id1, p.obj_id2, unit.from_degrees(p.distance))?;
    }
    w.flush()
}

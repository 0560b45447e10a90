//! Engine-versus-oracle checks on synthetic catalogs.

use std::collections::BTreeSet;

use zones_core::matching::self_match_half_pairs;
use zones_core::oracle::{alpha_by_sampling, brute_match, brute_neighbors};
use zones_core::{
    alpha, cross_match, generate_synthetic, points_near_point, self_match, Distribution,
    IndexConfig, MarginPolicy, MatchJob, MatchPair, Neighbor, ObjType, PointRecord, QuerySpec,
    SphericalCoord, ZoneIndexStore,
};

use crate::commands::config;
use crate::error::CliError;
use crate::VerifyArgs;

const QUERY_CENTERS: usize = 50;
const ALPHA_SAMPLES: usize = 20_000;
/// Dense sampling lands within about 1e-8° of the true maximum.
const ALPHA_TOLERANCE: f64 = 1e-6;

struct Report {
    failures: usize,
}

impl Report {
    fn check(&mut self, name: &str, ok: bool, detail: String) {
        if !ok {
            self.failures += 1;
        }
        println!("[{}] {name}: {detail}", if ok { "PASS" } else { "FAIL" });
    }
}

fn ids(found: &[Neighbor]) -> Vec<i64> {
    found.iter().map(|n| n.obj_id).collect()
}

fn pair_keys(pairs: &[MatchPair]) -> BTreeSet<(i64, i64)> {
    pairs.iter().map(|p| (p.obj_id1, p.obj_id2)).collect()
}

fn query_check(store: &ZoneIndexStore, points: &[PointRecord], tag: ObjType, theta: f64) -> Result<(usize, usize), CliError> {
    let mut mismatches = 0;
    let mut hits = 0;
    let step = (points.len() / QUERY_CENTERS).max(1);
    // Centers on catalog points plus the two poles and the meridian.
    let mut centers: Vec<SphericalCoord> = points.iter().step_by(step).map(|p| p.coord).collect();
    for (ra, dec) in [(0.0, 90.0), (0.0, -90.0), (0.0, 0.0), (359.999, 45.0)] {
        centers.push(SphericalCoord::new(ra, dec).expect("fixed center"));
    }
    for c in centers {
        let spec = QuerySpec {
            obj_type: tag,
            center: c,
            theta,
        };
        let got = points_near_point(store, &spec)?;
        let want = brute_neighbors(points, &c, theta);
        hits += got.len();
        if ids(&got) != ids(&want) || got.iter().zip(&want).any(|(a, b)| a.distance != b.distance) {
            mismatches += 1;
        }
    }
    Ok((mismatches, hits))
}

fn check_distribution(
    report: &mut Report,
    args: &VerifyArgs,
    base: IndexConfig,
    dist: Distribution,
) -> Result<(), CliError> {
    let p = ObjType::new('P').expect("valid tag");
    let s = ObjType::new('S').expect("valid tag");
    let a = generate_synthetic(args.n, args.seed, dist, p);
    let b = generate_synthetic(args.n, args.seed.wrapping_add(1), dist, s);
    let theta = base.theta();

    for margin in [MarginPolicy::Full, MarginPolicy::Trimmed] {
        let cfg = base.with_margin(margin);
        let mut all = a.clone();
        all.extend_from_slice(&b);
        let store = ZoneIndexStore::build(&all, cfg)?;

        let (bad, hits) = query_check(&store, &a, p, theta)?;
        report.check(
            &format!("{dist} {margin} near"),
            bad == 0,
            format!("{bad} mismatched queries, {hits} hits"),
        );

        let job = MatchJob::self_match(&store, p, theta).with_workers(args.workers);
        let got = self_match(&job)?;
        let want = brute_match(&a, &a, theta, true);
        report.check(
            &format!("{dist} {margin} selfmatch"),
            pair_keys(&got) == pair_keys(&want) && got.len() == want.len(),
            format!("{} pairs, brute force {}", got.len(), want.len()),
        );
        let half = self_match_half_pairs(&job)?;
        report.check(
            &format!("{dist} {margin} selfmatch half"),
            2 * half.len() == got.len() && half.iter().all(|q| q.obj_id1 < q.obj_id2),
            format!("{} half pairs", half.len()),
        );

        let serial = self_match(&job.with_workers(1))?;
        report.check(
            &format!("{dist} {margin} workers"),
            serial == got,
            format!("1 vs {} workers", args.workers),
        );

        let job = MatchJob::cross_match(&store, p, &store, s, theta).with_workers(args.workers);
        let got = cross_match(&job)?;
        let want = brute_match(&a, &b, theta, false);
        report.check(
            &format!("{dist} {margin} crossmatch"),
            pair_keys(&got) == pair_keys(&want) && got.len() == want.len(),
            format!("{} pairs, brute force {}", got.len(), want.len()),
        );
    }
    Ok(())
}

pub fn run(args: VerifyArgs) -> Result<(), CliError> {
    let base = config(&args.shape)?;
    if args.workers == 0 {
        return Err(CliError::Usage("--workers must be at least 1".into()));
    }
    let mut report = Report { failures: 0 };

    let theta = base.theta();
    let mut worst: f64 = 0.0;
    for dec in [-89.5f64, -80.0, -45.0, 0.0, 30.0, 60.0, 85.0, 89.0] {
        if dec.abs() + theta >= 90.0 {
            continue;
        }
        let a = alpha(theta, dec);
        let sampled = alpha_by_sampling(theta, dec, ALPHA_SAMPLES);
        worst = worst.max((a - sampled).abs());
    }
    report.check("alpha", worst <= ALPHA_TOLERANCE, format!("max |alpha - sampled| = {worst:.3e}"));

    let dists: Vec<Distribution> = match args.distribution {
        Some(d) => vec![d],
        None => Distribution::ALL.to_vec(),
    };
    for d in dists {
        check_distribution(&mut report, &args, base, d)?;
    }
    match report.failures {
        0 => Ok(()),
        n => Err(CliError::CheckFailed(n)),
    }
}

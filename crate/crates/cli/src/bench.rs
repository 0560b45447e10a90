//! Wall-clock comparison of the three ways to self-match a catalog.

use std::io::Write;
use std::time::Instant;

use zones_core::oracle::brute_match;
use zones_core::{
    generate_synthetic, points_near_point, self_match, MatchJob, ObjType, QuerySpec,
    ZoneIndexStore,
};

use crate::commands::{config, sink};
use crate::error::CliError;
use crate::BenchArgs;

struct Row {
    method: &'static str,
    seconds: f64,
    pairs: usize,
}

/// Best of `repeats` runs; the pair count comes from the last one.
fn time<F: FnMut() -> Result<usize, CliError>>(repeats: usize, mut f: F) -> Result<(f64, usize), CliError> {
    let mut best = f64::INFINITY;
    let mut pairs = 0;
    for _ in 0..repeats {
        let t = Instant::now();
        pairs = f()?;
        best = best.min(t.elapsed().as_secs_f64());
    }
    Ok((best, pairs))
}

fn ratio(num: f64, den: f64) -> f64 {
    if num > 0.0 && den > 0.0 {
        num / den
    } else {
        0.0
    }
}

pub fn run(args: BenchArgs) -> Result<(), CliError> {
    let cfg = config(&args.shape)?;
    if args.workers == 0 || args.repeats == 0 {
        return Err(CliError::Usage("--workers and --repeats must be at least 1".into()));
    }
    let theta = cfg.theta();
    let tag = ObjType::new('P').expect("valid tag");
    let points = generate_synthetic(args.n, args.seed, args.distribution, tag);

    let mut rows = Vec::new();
    if args.n == 0 {
        for method in ["build", "batch", "per_point", "brute"] {
            rows.push(Row {
                method,
                seconds: 0.0,
                pairs: 0,
            });
        }
    } else {
        let mut store = None;
        let (secs, _) = time(args.repeats, || {
            store = Some(ZoneIndexStore::build(&points, cfg)?);
            Ok(0)
        })?;
        let store = store.expect("built at least once");
        rows.push(Row {
            method: "build",
            seconds: secs,
            pairs: 0,
        });

        let job = MatchJob::self_match(&store, tag, theta).with_workers(args.workers);
        let (secs, pairs) = time(args.repeats, || Ok(self_match(&job)?.len()))?;
        rows.push(Row {
            method: "batch",
            seconds: secs,
            pairs,
        });

        let (secs, pairs) = time(args.repeats, || {
            let mut total = 0;
            for p in &points {
                let spec = QuerySpec {
                    obj_type: tag,
                    center: p.coord,
                    theta,
                };
                total += points_near_point(&store, &spec)?
                    .iter()
                    .filter(|n| n.obj_id != p.obj_id)
                    .count();
            }
            Ok(total)
        })?;
        rows.push(Row {
            method: "per_point",
            seconds: secs,
            pairs,
        });

        if !args.skip_brute {
            let (secs, pairs) = time(args.repeats, || Ok(brute_match(&points, &points, theta, true).len()))?;
            rows.push(Row {
                method: "brute",
                seconds: secs,
                pairs,
            });
        }
    }

    let brute = rows.iter().find(|r| r.method == "brute").map_or(0.0, |r| r.seconds);
    let mut w = sink(args.out.as_deref())?;
    writeln!(w, "method,n,distribution,zone_height,theta,workers,seconds,pairs,brute_over_method")?;
    for r in &rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{:.6},{},{:.3}",
            r.method,
            args.n,
            args.distribution,
            cfg.zone_height(),
            theta,
            args.workers,
            r.seconds,
            r.pairs,
            if r.method == "build" { 0.0 } else { ratio(brute, r.seconds) }
        )?;
    }
    w.flush()?;

    // All matching methods count ordered pairs; a disagreement is a bug.
    let counts: Vec<usize> = rows.iter().filter(|r| r.method != "build").map(|r| r.pairs).collect();
    if counts.windows(2).any(|c| c[0] != c[1]) {
        eprintln!("zones: methods disagree on the pair count: {counts:?}");
        return Err(CliError::CheckFailed(1));
    }
    Ok(())
}

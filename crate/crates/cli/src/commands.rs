use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use zones_core::matching::{self_match_half_pairs, write_pairs_csv};
use zones_core::query::write_neighbors_csv;
use zones_core::{
    cross_match, generate_synthetic, load_index, nearest_object, parse_catalog, points_near_point,
    save_index, self_match, CatalogSchema, IndexConfig, MatchJob, ObjType, PointRecord,
    QuerySpec, SphericalCoord, ZoneIndexStore,
};

use crate::error::CliError;
use crate::{BuildArgs, CrossMatchArgs, GenerateArgs, IndexShape, NearArgs, NearestArgs, Point, SelfMatchArgs};

pub fn config(shape: &IndexShape) -> Result<IndexConfig, CliError> {
    Ok(IndexConfig::new(shape.zone_height, shape.theta)?.with_margin(shape.margin.into()))
}

/// Opens `--out` or falls back to stdout.
pub fn sink(out: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| CliError::Data(format!("creating {}: {e}", p.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

struct CatalogSpec {
    obj_type: ObjType,
    path: PathBuf,
    schema: CatalogSchema,
}

fn split_type(spec: &str) -> Result<(ObjType, &str), CliError> {
    let (t, rest) = spec
        .split_once('=')
        .ok_or_else(|| CliError::Usage(format!("expected TYPE=..., got {spec:?}")))?;
    let t: ObjType = t.parse().map_err(CliError::Usage)?;
    Ok((t, rest))
}

fn parse_catalog_spec(spec: &str) -> Result<CatalogSpec, CliError> {
    let (obj_type, rest) = split_type(spec)?;
    // Only a trailing `:a,b,c` is a column list, so paths may contain ':'.
    let (path, schema) = match rest.rsplit_once(':') {
        Some((path, cols)) if cols.split(',').count() == 3 => {
            let c: Vec<&str> = cols.split(',').map(str::trim).collect();
            (path, CatalogSchema::new(c[0], c[1], c[2]))
        }
        _ => (rest, CatalogSchema::new("id", "lon", "lat")),
    };
    if path.is_empty() {
        return Err(CliError::Usage(format!("catalog spec {spec:?} has no path")));
    }
    Ok(CatalogSpec {
        obj_type,
        path: PathBuf::from(path),
        schema,
    })
}

pub fn build(args: BuildArgs) -> Result<(), CliError> {
    let cfg = config(&args.shape)?;
    if args.catalogs.is_empty() && args.synthetic.is_empty() {
        return Err(CliError::Usage("build needs at least one --catalog or --synthetic".into()));
    }
    let specs = args
        .catalogs
        .iter()
        .map(|s| parse_catalog_spec(s))
        .collect::<Result<Vec<_>, _>>()?;

    let mut points: Vec<PointRecord> = Vec::new();
    for spec in &specs {
        points.extend(parse_catalog(&spec.path, &spec.schema, spec.obj_type)?.records);
    }
    for (i, s) in args.synthetic.iter().enumerate() {
        let (t, n) = split_type(s)?;
        let n: usize = n
            .parse()
            .map_err(|_| CliError::Usage(format!("bad synthetic count in {s:?}")))?;
        // Each synthetic catalog gets its own stream.
        points.extend(generate_synthetic(n, args.seed.wrapping_add(i as u64), args.distribution, t));
    }

    let store = ZoneIndexStore::build(&points, cfg)?;
    save_index(&store, &args.out)
        .map_err(|e| CliError::Data(format!("writing {}: {e}", args.out.display())))?;

    let mut out = io::stdout().lock();
    writeln!(out, "objType,native,margin")?;
    for (t, c) in store.counts() {
        writeln!(out, "{t},{},{}", c.native, c.margin)?;
    }
    Ok(())
}

fn center(p: &Point) -> Result<SphericalCoord, CliError> {
    SphericalCoord::from_lon_lat(p.lon, p.lat).map_err(|e| CliError::Usage(e.to_string()))
}

fn positive(theta: f64) -> Result<f64, CliError> {
    if theta.is_finite() && theta > 0.0 {
        Ok(theta)
    } else {
        Err(CliError::Usage(format!("radius must be positive, got {theta}")))
    }
}

pub fn near(args: NearArgs) -> Result<(), CliError> {
    let c = center(&args.point)?;
    let store = load_index(&args.index)?;
    let theta = positive(args.theta.unwrap_or(store.config().theta()))?;
    let spec = QuerySpec {
        obj_type: args.obj_type,
        center: c,
        theta,
    };
    let found = points_near_point(&store, &spec)?;
    write_neighbors_csv(&found, args.output.units.into(), sink(args.output.out.as_deref())?)?;
    Ok(())
}

pub fn nearest(args: NearestArgs) -> Result<(), CliError> {
    let c = center(&args.point)?;
    let store = load_index(&args.index)?;
    let found: Vec<_> = nearest_object(&store, args.obj_type, c).into_iter().collect();
    if found.is_empty() {
        eprintln!("zones: no objects of type {} in the index", args.obj_type);
    }
    write_neighbors_csv(&found, args.output.units.into(), sink(args.output.out.as_deref())?)?;
    Ok(())
}

pub fn selfmatch(args: SelfMatchArgs) -> Result<(), CliError> {
    let store = load_index(&args.index)?;
    let theta = positive(args.theta.unwrap_or(store.config().theta()))?;
    let job = MatchJob::self_match(&store, args.obj_type, theta).with_workers(args.workers);
    let pairs = if args.half {
        self_match_half_pairs(&job)?
    } else {
        self_match(&job)?
    };
    write_pairs_csv(&pairs, args.output.units.into(), sink(args.output.out.as_deref())?)?;
    Ok(())
}

pub fn crossmatch(args: CrossMatchArgs) -> Result<(), CliError> {
    let store_a = load_index(&args.index)?;
    let loaded_b = args.index_b.as_ref().map(load_index).transpose()?;
    let store_b = loaded_b.as_ref().unwrap_or(&store_a);
    let design = store_a.config().theta().min(store_b.config().theta());
    let theta = positive(args.theta.unwrap_or(design))?;
    let job = MatchJob::cross_match(&store_a, args.type_a, store_b, args.type_b, theta)
        .with_workers(args.workers);
    let pairs = cross_match(&job)?;
    write_pairs_csv(&pairs, args.output.units.into(), sink(args.output.out.as_deref())?)?;
    Ok(())
}

pub fn generate(args: GenerateArgs) -> Result<(), CliError> {
    let tag = ObjType::new('P').expect("valid tag");
    let points = generate_synthetic(args.n, args.seed, args.distribution, tag);
    let mut w = sink(args.out.as_deref())?;
    writeln!(w, "id,lon,lat")?;
    for p in &points {
        writeln!(w, "{},{:?},{:?}", p.obj_id, p.coord.ra(), p.coord.dec())?;
    }
    w.flush()?;
    Ok(())
}

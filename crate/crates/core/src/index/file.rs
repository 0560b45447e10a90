//! Text index file.
//!
//! ```text
//! # zones-index
//! # version 1
//! # zone_height 0.16666666666666666
//! # theta 1.0
//! # margin full
//! # count P 22993 22993
//! # columns objType,objID,zone,ra,dec,x,y,z,margin
//! P,1,226,237.44,37.8,...,0
//! ```
//!
//! `count` lines carry native and margin counts per dataset. Floats are
//! written as the shortest decimal that parses back to the same bits, so
//! equal stores produce byte-identical files.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use super::{IndexConfig, MarginPolicy, ObjType, TypeCounts, ZoneEntry, ZoneIndexStore};
use crate::error::LoadError;
use crate::sphere::UnitVector;

pub const FORMAT_VERSION: u32 = 1;

const MAGIC: &str = "# zones-index";
const COLUMNS: &str = "objType,objID,zone,ra,dec,x,y,z,margin";

pub fn write_index<W: Write>(store: &ZoneIndexStore, mut w: W) -> std::io::Result<()> {
    let cfg = store.config();
    writeln!(w, "{MAGIC}")?;
    writeln!(w, "# version {FORMAT_VERSION}")?;
    writeln!(w, "# zone_height {:?}", cfg.zone_height())?;
    writeln!(w, "# theta {:?}", cfg.theta())?;
    writeln!(w, "# margin {}", cfg.margin())?;
    for (t, c) in store.counts() {
        writeln!(w, "# count {t} {} {}", c.native, c.margin)?;
    }
    writeln!(w, "# columns {COLUMNS}")?;
    for e in store.entries() {
        writeln!(
            w,
            "{},{},{},{:?},{:?},{:?},{:?},{:?},{}",
            e.obj_type,
            e.obj_id,
            e.zone,
            e.ra,
            e.dec,
            e.unit.x,
            e.unit.y,
            e.unit.z,
            u8::from(e.margin)
        )?;
    }
    w.flush()
}

pub fn save_index(store: &ZoneIndexStore, path: impl AsRef<Path>) -> std::io::Result<()> {
    let file = File::create(path)?;
    write_index(store, BufWriter::new(file))
}

pub fn load_index(path: impl AsRef<Path>) -> Result<ZoneIndexStore, LoadError> {
    let file = File::open(path)?;
    read_index(BufReader::new(file))
}

#[derive(Default)]
struct Header {
    version: Option<String>,
    zone_height: Option<f64>,
    theta: Option<f64>,
    margin: Option<MarginPolicy>,
    counts: BTreeMap<ObjType, TypeCounts>,
}

fn header_err(msg: impl Into<String>) -> LoadError {
    LoadError::MalformedHeader(msg.into())
}

fn parse_header_line(line: &str, header: &mut Header) -> Result<(), LoadError> {
    let body = line.trim_start_matches('#').trim();
    let (key, value) = body.split_once(' ').unwrap_or((body, ""));
    let float = |v: &str| {
        v.parse::<f64>()
            .map_err(|_| header_err(format!("bad {key} value {v:?}")))
    };
    match key {
        "version" => header.version = Some(value.to_string()),
        "zone_height" => header.zone_height = Some(float(value)?),
        "theta" => header.theta = Some(float(value)?),
        "margin" => header.margin = Some(value.parse().map_err(header_err)?),
        "count" => {
            let parts: Vec<&str> = value.split(' ').collect();
            let [t, native, margin] = parts[..] else {
                return Err(header_err(format!("bad count line {line:?}")));
            };
            let t: ObjType = t.parse().map_err(header_err)?;
            let n = |v: &str| {
                v.parse::<usize>()
                    .map_err(|_| header_err(format!("bad count {v:?}")))
            };
            let c = TypeCounts {
                native: n(native)?,
                margin: n(margin)?,
            };
            if header.counts.insert(t, c).is_some() {
                return Err(header_err(format!("repeated count line for {t}")));
            }
        }
        "columns" => {
            if value != COLUMNS {
                return Err(header_err(format!("unexpected columns {value:?}")));
            }
        }
        other => return Err(header_err(format!("unknown header key {other:?}"))),
    }
    Ok(())
}

fn parse_entry(line: &str, lineno: usize) -> Result<ZoneEntry, LoadError> {
    let bad = |reason: String| LoadError::MalformedEntry {
        line: lineno,
        reason,
    };
    let fields: Vec<&str> = line.split(',').collect();
    let [t, id, zone, ra, dec, x, y, z, margin] = fields[..] else {
        return Err(bad(format!("expected 9 fields, found {}", fields.len())));
    };
    let float = |v: &str| v.parse::<f64>().map_err(|_| bad(format!("bad number {v:?}")));
    let int = |v: &str| v.parse::<i64>().map_err(|_| bad(format!("bad integer {v:?}")));
    Ok(ZoneEntry {
        obj_type: t.parse().map_err(&bad)?,
        obj_id: int(id)?,
        zone: int(zone)?,
        ra: float(ra)?,
        dec: float(dec)?,
        unit: UnitVector {
            x: float(x)?,
            y: float(y)?,
            z: float(z)?,
        },
        margin: match margin {
            "0" => false,
            "1" => true,
            other => return Err(bad(format!("bad margin flag {other:?}"))),
        },
    })
}

pub fn read_index<R: BufRead>(reader: R) -> Result<ZoneIndexStore, LoadError> {
    let mut lines = reader.lines().enumerate().peekable();

    let first = lines.next().map(|(_, l)| l).transpose()?;
    if first.as_deref().map(str::trim_end) != Some(MAGIC) {
        return Err(header_err("missing zones-index magic line"));
    }
    let mut header = Header::default();
    while let Some((_, Ok(line))) = lines.peek() {
        if !line.starts_with('#') {
            break;
        }
        let (_, line) = lines.next().expect("peeked");
        parse_header_line(&line?, &mut header)?;
    }

    let version = header.version.ok_or_else(|| header_err("missing version"))?;
    if version != FORMAT_VERSION.to_string() {
        return Err(LoadError::VersionMismatch {
            found: version,
            expected: FORMAT_VERSION,
        });
    }
    let zone_height = header
        .zone_height
        .ok_or_else(|| header_err("missing zone_height"))?;
    let theta = header.theta.ok_or_else(|| header_err("missing theta"))?;
    let margin = header.margin.ok_or_else(|| header_err("missing margin"))?;
    let config = IndexConfig::new(zone_height, theta)?.with_margin(margin);

    let expected: usize = header.counts.values().map(|c| c.native + c.margin).sum();
    let mut entries = Vec::with_capacity(expected);
    for (i, line) in lines {
        let line = line?;
        if line.is_empty() {
            continue;
        }
        if entries.len() == expected {
            return Err(LoadError::ExtraEntries { expected });
        }
        let entry = parse_entry(&line, i + 1)?;
        if let Some(prev) = entries.last() {
            if ZoneEntry::key_cmp(prev, &entry).is_ge() {
                return Err(LoadError::MalformedEntry {
                    line: i + 1,
                    reason: "entries out of key order".into(),
                });
            }
        }
        entries.push(entry);
    }
    if entries.len() < expected {
        return Err(LoadError::TruncatedBody {
            expected,
            found: entries.len(),
        });
    }

    let store = ZoneIndexStore::from_parts(config, entries);
    if store.counts() != header.counts {
        return Err(header_err("per-type counts disagree with the body"));
    }
    Ok(store)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index::PointRecord;
    use crate::sphere::SphericalCoord;

    fn one_point_store() -> ZoneIndexStore {
        let cfg = IndexConfig::new(10.0 / 60.0, 1.0).unwrap();
        let p = PointRecord::new(
            ObjType::new('P').unwrap(),
            42,
            SphericalCoord::new(237.44, 37.8).unwrap(),
        );
        ZoneIndexStore::build(&[p], cfg).unwrap()
    }

    fn to_string(store: &ZoneIndexStore) -> String {
        let mut buf = Vec::new();
        write_index(store, &mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn round_trip() {
        let store = one_point_store();
        let text = to_string(&store);
        let back = read_index(text.as_bytes()).unwrap();
        assert_eq!(back, store);
        assert_eq!(to_string(&back), text);
    }

    #[test]
    fn empty_file_is_malformed_header() {
        assert!(matches!(
            read_index("".as_bytes()),
            Err(LoadError::MalformedHeader(_))
        ));
    }

    #[test]
    fn version_mismatch() {
        let text = to_string(&one_point_store()).replace("# version 1", "# version 9");
        assert!(matches!(
            read_index(text.as_bytes()),
            Err(LoadError::VersionMismatch { .. })
        ));
    }

    #[test]
    fn tampered_count_is_truncated_body() {
        let text = to_string(&one_point_store()).replace("# count P 1 1", "# count P 5 1");
        match read_index(text.as_bytes()) {
            Err(LoadError::TruncatedBody { expected, found }) => {
                assert_eq!((expected, found), (6, 2));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn dropped_row_is_truncated_body() {
        let text = to_string(&one_point_store());
        let cut: String = text.lines().take(text.lines().count() - 1).map(|l| format!("{l}\n")).collect();
        assert!(matches!(
            read_index(cut.as_bytes()),
            Err(LoadError::TruncatedBody { .. })
        ));
    }

    #[test]
    fn extra_rows_rejected() {
        let text = to_string(&one_point_store()).replace("# count P 1 1", "# count P 1 0");
        assert!(matches!(
            read_index(text.as_bytes()),
            Err(LoadError::ExtraEntries { expected: 1 })
        ));
    }

    #[test]
    fn garbage_row_rejected() {
        let mut text = to_string(&one_point_store());
        text = text.replace(",0\n", ",x\n");
        assert!(matches!(
            read_index(text.as_bytes()),
            Err(LoadError::MalformedEntry { .. })
        ));
    }
}

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn zones(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zones"))
        .args(args)
        .output()
        .expect("run zones")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn zero_zone_height_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.zix");
    let o = zones(&["build", "--synthetic", "P=10", "--zone-height", "0", "--out", path(&out)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!out.exists());
}

#[test]
fn unknown_flags_and_bad_angles_are_usage_errors() {
    assert_eq!(zones(&["near", "--bogus"]).status.code(), Some(2));
    let o = zones(&["build", "--synthetic", "P=1", "--theta", "ten", "--out", "x"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(zones(&["build", "--out", "x"]).status.code(), Some(2));
}

#[test]
fn builds_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.zix"), dir.path().join("b.zix"));
    for p in [&a, &b] {
        let o = zones(&["build", "--synthetic", "P=300", "--synthetic", "S=200", "--seed", "7", "--theta", "30m", "--out", path(p)]);
        assert!(o.status.success());
        assert_eq!(stdout(&o), "objType,native,margin\nP,300,300\nS,200,200\n");
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn near_on_empty_index_prints_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let idx = dir.path().join("empty.zix");
    assert!(zones(&["build", "--synthetic", "P=0", "--out", path(&idx)]).status.success());
    let o = zones(&["near", "--index", path(&idx), "--type", "P", "--lon", "-122.56", "--lat", "37.79"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "objID,distance\n");
    let o = zones(&["nearest", "--index", path(&idx), "--type", "P", "--lon", "0", "--lat", "0"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "objID,distance\n");
}

#[test]
fn catalog_build_and_queries() {
    let dir = tempfile::tempdir().unwrap();
    let places = dir.path().join("places.csv");
    fs::write(
        &places,
        "PlaceID,PlaceName,Lon,Lat\n1,\"San Francisco, CA\",-122.4194,37.7749\n2,Oakland,-122.2711,37.8044\n3,Greenwich,0.0,51.4769\n4,West,-0.1,51.4769\n",
    )
    .unwrap();
    let idx = dir.path().join("p.zix");
    let spec = format!("P={}:PlaceID,Lon,Lat", path(&places));
    let o = zones(&["build", "--catalog", &spec, "--theta", "1", "--out", path(&idx)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));

    let o = zones(&["near", "--index", path(&idx), "--type", "P", "--lon", "-122.4194", "--lat", "37.7749", "--theta", "30m"]);
    let rows: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(rows[0], "objID,distance");
    assert_eq!(rows[1], "1,0");
    assert!(rows[2].starts_with("2,0.1"));
    assert_eq!(rows.len(), 3);

    // Across the prime meridian, in nautical miles (1 NM = 1').
    let o = zones(&["nearest", "--index", path(&idx), "--type", "P", "--lon", "359.99", "--lat", "51.4769", "--units", "nm"]);
    let body = stdout(&o);
    let row = body.lines().nth(1).unwrap();
    assert!(row.starts_with("3,"));
    let nm: f64 = row.split(',').nth(1).unwrap().parse().unwrap();
    assert!((nm - 0.3738).abs() < 1e-3, "{nm}");

    let out = dir.path().join("pairs.csv");
    let o = zones(&["selfmatch", "--index", path(&idx), "--type", "P", "--theta", "30m", "--workers", "2", "--out", path(&out)]);
    assert!(o.status.success());
    let text = fs::read_to_string(&out).unwrap();
    let ids: Vec<&str> = text.lines().skip(1).map(|l| &l[..3]).collect();
    assert_eq!(ids, vec!["1,2", "2,1", "3,4", "4,3"]);

    let o = zones(&["selfmatch", "--index", path(&idx), "--type", "P", "--theta", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bad_catalog_is_a_data_error() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    fs::write(&bad, "id,lon,lat\n1,0,95\n").unwrap();
    let spec = format!("P={}", path(&bad));
    let o = zones(&["build", "--catalog", &spec, "--out", path(&dir.path().join("x.zix"))]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("row 2"));

    let o = zones(&["near", "--index", path(&bad), "--type", "P", "--lon", "0", "--lat", "0"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn crossmatch_between_two_files() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.zix"), dir.path().join("b.zix"));
    zones(&["build", "--synthetic", "P=400", "--distribution", "polar-cap", "--out", path(&a)]);
    zones(&["build", "--synthetic", "S=400", "--distribution", "polar-cap", "--seed", "9", "--out", path(&b)]);
    let o = zones(&["crossmatch", "--index", path(&a), "--index-b", path(&b), "--type-a", "P", "--type-b", "S", "--theta", "10m"]);
    assert!(o.status.success());
    assert!(stdout(&o).lines().count() > 1);
}

#[test]
fn verify_passes() {
    let o = zones(&["verify", "--n", "300", "--seed", "5"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
}

#[test]
fn bench_with_no_points_reports_zeros() {
    let o = zones(&["bench", "--n", "0"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("method,"));
    for l in lines {
        assert!(l.ends_with(",0.000000,0,0.000"), "{l}");
    }
}

#[test]
fn bench_methods_agree() {
    let o = zones(&["bench", "--n", "1500", "--theta", "2", "--workers", "2"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o).lines().count(), 5);
}

#[test]
fn generate_round_trips_through_build() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("g.csv");
    assert!(zones(&["generate", "--n", "50", "--out", path(&csv)]).status.success());
    let spec = format!("Q={}", path(&csv));
    let o = zones(&["build", "--catalog", &spec, "--out", path(&dir.path().join("g.zix"))]);
    assert_eq!(stdout(&o), "objType,native,margin\nQ,50,50\n");
}

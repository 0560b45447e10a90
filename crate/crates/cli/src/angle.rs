//! Angle arguments: decimal degrees, or a number with a `d`, `m` or `s`
//! suffix for degrees, arcminutes or arcseconds (`10m`, `30s`, `-1.5d`).

pub fn parse_angle(text: &str) -> Result<f64, String> {
    let t = text.trim();
    let (num, scale) = match t.chars().last() {
        Some('d') => (&t[..t.len() - 1], 1.0),
        Some('m') | Some('\'') => (&t[..t.len() - 1], 1.0 / 60.0),
        Some('s') | Some('"') => (&t[..t.len() - 1], 1.0 / 3600.0),
        _ => (t, 1.0),
    };
    let v: f64 = num
        .trim()
        .parse()
        .map_err(|_| format!("invalid angle {text:?}; use decimal degrees or a d/m/s suffix"))?;
    if !v.is_finite() {
        return Err(format!("angle {text:?} is not finite"));
    }
    Ok(v * scale)
}

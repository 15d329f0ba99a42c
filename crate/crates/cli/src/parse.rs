//! Flag-value parsing: energies with optional keV suffix, angles defaulting
//! to degrees, angle ranges, and JSON config merging.

use serde_json::Value;

/// Electron rest energy in keV; energies are dimensionless multiples of it.
pub const KEV_PER_UNIT: f64 = 511.0;

pub fn parse_energy(s: &str) -> Result<f64, String> {
    let t = s.trim();
    let lower = t.to_ascii_lowercase();
    let value = if let Some(stripped) = lower.strip_suffix("kev") {
        stripped
            .trim()
            .parse::<f64>()
            .map_err(|_| format!("bad energy `{s}`"))?
            / KEV_PER_UNIT
    } else {
        t.parse::<f64>().map_err(|_| format!("bad energy `{s}`"))?
    };
    if value <= 0.0 {
        return Err(format!("energy must be positive, got `{s}`"));
    }
    Ok(value)
}

/// Angles are degrees unless suffixed `rad`; an explicit `deg` is accepted.
pub fn parse_angle(s: &str) -> Result<f64, String> {
    let t = s.trim().to_ascii_lowercase();
    if let Some(stripped) = t.strip_suffix("rad") {
        stripped
            .trim()
            .parse::<f64>()
            .map_err(|_| format!("bad angle `{s}`"))
    } else if let Some(stripped) = t.strip_suffix("deg") {
        Ok(stripped
            .trim()
            .parse::<f64>()
            .map_err(|_| format!("bad angle `{s}`"))?
            .to_radians())
    } else {
        Ok(t.parse::<f64>()
            .map_err(|_| format!("bad angle `{s}`"))?
            .to_radians())
    }
}

/// `lo:hi[:step]` in the angle grammar; default step is one degree.
#[derive(Debug, Clone, Copy)]
pub struct AngleRange {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

pub fn parse_angle_range(s: &str) -> Result<AngleRange, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() < 2 || parts.len() > 3 {
        return Err(format!("range `{s}` must look like lo:hi[:step]"));
    }
    let lo = parse_angle(parts[0])?;
    let hi = parse_angle(parts[1])?;
    let step = if parts.len() == 3 {
        parse_angle(parts[2])?
    } else {
        1f64.to_radians()
    };
    if !(step > 0.0) || hi < lo {
        return Err(format!("range `{s}` is empty or has nonpositive step"));
    }
    Ok(AngleRange { lo, hi, step })
}

/// `lo:hi` window in the angle grammar.
pub fn parse_window(s: &str) -> Result<(f64, f64), String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 2 {
        return Err(format!("window `{s}` must look like lo:hi"));
    }
    Ok((parse_angle(parts[0])?, parse_angle(parts[1])?))
}

/// Fill a missing flag from the JSON config; flags win.
pub fn merge_str(flag: Option<String>, cfg: Option<&Value>, key: &str) -> Option<String> {
    flag.or_else(|| {
        cfg?.get(key).map(|v| match v {
            Value::String(s) => s.clone(),
            other => other.to_string(),
        })
    })
}

pub fn merge_u64(flag: Option<u64>, cfg: Option<&Value>, key: &str) -> Option<u64> {
    flag.or_else(|| cfg?.get(key)?.as_u64())
}

pub fn merge_flag(flag: bool, cfg: Option<&Value>, key: &str) -> bool {
    flag || cfg
        .and_then(|c| c.get(key))
        .and_then(Value::as_bool)
        .unwrap_or(false)
}

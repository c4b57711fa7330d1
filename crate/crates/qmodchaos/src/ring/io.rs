//! Text formats: time series as one-sample-per-line CSV with a
//! `# modulus=M` header, and filter configurations as a flat key-value file.

use super::{FilterConfig, Modulus, Residue, RingError, TimeSeries};
use std::fs;
use std::path::Path;

/// Render a series in its on-disk form.
pub fn format_series(x: &TimeSeries) -> String {
    let mut out = format!("# modulus={}\n", x.modulus());
    for s in x.samples() {
        out.push_str(&s.to_string());
        out.push('\n');
    }
    out
}

/// Parse the one-sample-per-line form produced by [`format_series`].
pub fn parse_series(text: &str) -> Result<TimeSeries, RingError> {
    let mut modulus = None;
    let mut samples = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            let rest = rest.trim();
            if let Some(value) = rest.strip_prefix("modulus=") {
                let m = value.trim().parse::<u64>().map_err(|e| RingError::Parse {
                    line: idx + 1,
                    msg: format!("bad modulus: {e}"),
                })?;
                modulus = Some(Modulus::new(m)?);
            }
            continue;
        }
        let sample = line.parse::<Residue>().map_err(|e| RingError::Parse {
            line: idx + 1,
            msg: format!("bad sample: {e}"),
        })?;
        samples.push(sample);
    }
    let modulus = modulus.ok_or(RingError::Parse {
        line: 1,
        msg: "missing `# modulus=M` header".into(),
    })?;
    TimeSeries::new(modulus, samples)
}

pub fn write_series(path: &Path, x: &TimeSeries) -> Result<(), RingError> {
    fs::write(path, format_series(x))?;
    Ok(())
}

pub fn read_series(path: &Path) -> Result<TimeSeries, RingError> {
    parse_series(&fs::read_to_string(path)?)
}

/// Render a filter configuration as `order`, `modulus`, `w`, `ic` lines.
pub fn format_config(cfg: &FilterConfig) -> String {
    let join = |v: &[Residue]| {
        v.iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(",")
    };
    format!(
        "order={}\nmodulus={}\nw={}\nic={}\n",
        cfg.order(),
        cfg.modulus(),
        join(cfg.coefficients()),
        join(cfg.initial_conditions()),
    )
}

/// Parse the key-value form produced by [`format_config`].
pub fn parse_config(text: &str) -> Result<FilterConfig, RingError> {
    let mut order = None;
    let mut modulus = None;
    let mut w = None;
    let mut ic = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |msg: String| RingError::Parse {
            line: idx + 1,
            msg,
        };
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| bad("expected key=value".into()))?;
        let value = value.trim();
        match key.trim() {
            "order" => {
                order = Some(
                    value
                        .parse::<usize>()
                        .map_err(|e| bad(format!("bad order: {e}")))?,
                )
            }
            "modulus" => {
                let m = value
                    .parse::<u64>()
                    .map_err(|e| bad(format!("bad modulus: {e}")))?;
                modulus = Some(Modulus::new(m)?);
            }
            "w" => w = Some(parse_residue_list(value, idx + 1)?),
            "ic" => ic = Some(parse_residue_list(value, idx + 1)?),
            other => return Err(bad(format!("unknown key `{other}`"))),
        }
    }
    let missing = |what: &str| RingError::Parse {
        line: 1,
        msg: format!("missing `{what}` line"),
    };
    let order = order.ok_or_else(|| missing("order"))?;
    let modulus = modulus.ok_or_else(|| missing("modulus"))?;
    let w = w.ok_or_else(|| missing("w"))?;
    let ic = ic.ok_or_else(|| missing("ic"))?;
    if w.len() != order {
        return Err(RingError::Parse {
            line: 1,
            msg: format!("order is {} but w has {} entries", order, w.len()),
        });
    }
    FilterConfig::new(modulus, w, ic)
}

fn parse_residue_list(value: &str, line: usize) -> Result<Vec<Residue>, RingError> {
    value
        .split(',')
        .map(|piece| {
            piece.trim().parse::<Residue>().map_err(|e| RingError::Parse {
                line,
                msg: format!("bad residue list entry `{}`: {e}", piece.trim()),
            })
        })
        .collect()
}

pub fn write_config(path: &Path, cfg: &FilterConfig) -> Result<(), RingError> {
    fs::write(path, format_config(cfg))?;
    Ok(())
}

pub fn read_config(path: &Path) -> Result<FilterConfig, RingError> {
    parse_config(&fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_roundtrip() {
        let m = Modulus::new(16).unwrap();
        let x = TimeSeries::new(m, vec![7, 5, 15, 13]).unwrap();
        let text = format_series(&x);
        assert_eq!(text, "# modulus=16\n7\n5\n15\n13\n");
        assert_eq!(parse_series(&text).unwrap(), x);
    }

    #[test]
    fn series_missing_header_is_rejected() {
        assert!(matches!(
            parse_series("7\n5\n"),
            Err(RingError::Parse { .. })
        ));
    }

    #[test]
    fn series_out_of_range_sample_is_rejected() {
        assert!(matches!(
            parse_series("# modulus=16\n16\n"),
            Err(RingError::ResidueOutOfRange { .. })
        ));
    }

    #[test]
    fn config_roundtrip() {
        let m = Modulus::new(16).unwrap();
        let cfg = FilterConfig::new(m, vec![13, 0, 0, 1], vec![0, 0, 0, 1]).unwrap();
        let text = format_config(&cfg);
        assert_eq!(text, "order=4\nmodulus=16\nw=13,0,0,1\nic=0,0,0,1\n");
        assert_eq!(parse_config(&text).unwrap(), cfg);
    }

    #[test]
    fn config_order_mismatch_is_rejected() {
        let text = "order=2\nmodulus=16\nw=1\nic=2\n";
        assert!(matches!(parse_config(text), Err(RingError::Parse { .. })));
    }
}

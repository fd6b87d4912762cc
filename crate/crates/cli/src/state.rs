//! State files: a JSON object `{"twice_l": n, "amplitudes": [[re, im], ...]}` with
//! amplitudes ordered `m = l, l-1, ..., -l`, or a CSV table `l,m,re,im` for one fixed `l`.

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;
use serde::Deserialize;
use wehrl_core::linalg::CVector;
use wehrl_core::{PureState, SpinLabel};

use crate::CliError;

/// Largest deviation of the norm from 1 accepted without `--normalize`.
pub const NORM_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StateFormat {
    Json,
    Csv,
}

impl StateFormat {
    /// From the file extension, falling back to sniffing the first character.
    pub fn detect(path: Option<&Path>, text: &str) -> StateFormat {
        match path.and_then(|p| p.extension()).and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("json") => StateFormat::Json,
            Some(e) if e.eq_ignore_ascii_case("csv") => StateFormat::Csv,
            _ if text.trim_start().starts_with('{') => StateFormat::Json,
            _ => StateFormat::Csv,
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonState {
    twice_l: u32,
    amplitudes: Vec<[f64; 2]>,
}

/// Parses `"3/2"`, `"-1/2"`, `"1.5"` or `"-2"` into twice the value.
pub fn parse_twice(s: &str) -> Option<i64> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let num: i64 = num.trim().parse().ok()?;
        return match den.trim() {
            "1" => Some(2 * num),
            "2" => Some(num),
            _ => None,
        };
    }
    if let Ok(n) = s.parse::<i64>() {
        return Some(2 * n);
    }
    let t = 2.0 * s.parse::<f64>().ok()?;
    ((t - t.round()).abs() < 1e-9 && t.is_finite()).then_some(t.round() as i64)
}

fn half(twice: i64) -> String {
    if twice % 2 == 0 {
        format!("{}", twice / 2)
    } else {
        format!("{}", twice as f64 / 2.0)
    }
}

fn parse_json(text: &str) -> Result<(SpinLabel, Vec<Complex64>), CliError> {
    let raw: JsonState = serde_json::from_str(text)
        .map_err(|e| CliError::Parse(format!("line {} column {}: {e}", e.line(), e.column())))?;
    let spin = SpinLabel::from_twice(raw.twice_l);
    if raw.amplitudes.len() != spin.dim() {
        return Err(CliError::Parse(format!(
            "twice_l = {} needs {} amplitudes, found {}",
            raw.twice_l,
            spin.dim(),
            raw.amplitudes.len()
        )));
    }
    Ok((spin, raw.amplitudes.iter().map(|&[re, im]| Complex64::new(re, im)).collect()))
}

fn parse_csv(text: &str) -> Result<(SpinLabel, Vec<Complex64>), CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let header = reader
        .headers()
        .map_err(|e| CliError::Parse(format!("line 1: {e}")))?
        .clone();
    let names: Vec<String> = header.iter().map(|h| h.to_ascii_lowercase()).collect();
    if names != ["l", "m", "re", "im"] {
        return Err(CliError::Parse(format!("line 1: expected header l,m,re,im, found {}", header.iter().collect::<Vec<_>>().join(","))));
    }
    let mut twice_l: Option<i64> = None;
    let mut entries: Vec<(i64, Complex64, u64)> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            CliError::Parse(format!("line {line}: {e}"))
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let err = |msg: String| CliError::Parse(format!("line {line}: {msg}"));
        let l = parse_twice(&record[0]).filter(|&t| t >= 0).ok_or_else(|| err(format!("bad l {:?}", &record[0])))?;
        let m = parse_twice(&record[1]).ok_or_else(|| err(format!("bad m {:?}", &record[1])))?;
        let re: f64 = record[2].parse().map_err(|_| err(format!("bad re {:?}", &record[2])))?;
        let im: f64 = record[3].parse().map_err(|_| err(format!("bad im {:?}", &record[3])))?;
        match twice_l {
            None => twice_l = Some(l),
            Some(t) if t != l => return Err(err(format!("mixed l values {} and {}", half(t), half(l)))),
            _ => {}
        }
        if m.abs() > l || (l - m) % 2 != 0 {
            return Err(err(format!("m = {} is not a weight of l = {}", half(m), half(l))));
        }
        if entries.iter().any(|e| e.0 == m) {
            return Err(err(format!("duplicate m = {}", half(m))));
        }
        entries.push((m, Complex64::new(re, im), line));
    }
    let t = twice_l.ok_or_else(|| CliError::Parse("no amplitude rows".into()))?;
    let spin = SpinLabel::from_twice(t as u32);
    if entries.len() != spin.dim() {
        return Err(CliError::Parse(format!("l = {} needs {} rows, found {}", half(t), spin.dim(), entries.len())));
    }
    let mut amps = vec![Complex64::new(0.0, 0.0); spin.dim()];
    for (m, z, _) in entries {
        amps[((t - m) / 2) as usize] = z;
    }
    Ok((spin, amps))
}

/// Parses a state file. Without `normalize` the norm must be 1 within [`NORM_TOL`].
pub fn parse_state(text: &str, format: StateFormat, normalize: bool) -> Result<PureState, CliError> {
    let (spin, amps) = match format {
        StateFormat::Json => parse_json(text)?,
        StateFormat::Csv => parse_csv(text)?,
    };
    if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(CliError::Parse("amplitudes must be finite".into()));
    }
    let v = CVector::from_vec(amps);
    let norm = v.norm();
    if !normalize && (norm - 1.0).abs() > NORM_TOL {
        return Err(CliError::Parse(format!("state norm is {norm}, expected 1 (use --normalize to rescale)")));
    }
    if !normalize {
        if let Ok(psi) = PureState::new(spin, v.clone()) {
            return Ok(psi);
        }
    }
    PureState::normalized(spin, v).map_err(|e| CliError::Parse(e.to_string()))
}

pub fn read_state(path: &Path, normalize: bool) -> Result<PureState, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse_state(&text, StateFormat::detect(Some(path), &text), normalize)
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_state(psi: &PureState, format: StateFormat) -> String {
    let spin = psi.spin();
    let t = spin.twice() as i64;
    let mut out = String::new();
    match format {
        StateFormat::Json => {
            let amps: Vec<String> = psi
                .amplitudes()
                .iter()
                .map(|z| format!("[{}, {}]", fmt_f64(z.re), fmt_f64(z.im)))
                .collect();
            let _ = writeln!(out, "{{\"twice_l\": {t}, \"amplitudes\": [{}]}}", amps.join(", "));
        }
        StateFormat::Csv => {
            out.push_str("l,m,re,im\n");
            for (i, z) in psi.amplitudes().iter().enumerate() {
                let _ = writeln!(out, "{},{},{},{}", half(t), half(t - 2 * i as i64), fmt_f64(z.re), fmt_f64(z.im));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twice_values() {
        assert_eq!(parse_twice("3/2"), Some(3));
        assert_eq!(parse_twice("-1/2"), Some(-1));
        assert_eq!(parse_twice("1.5"), Some(3));
        assert_eq!(parse_twice("-2"), Some(-4));
        assert_eq!(parse_twice("0.3"), None);
        assert_eq!(parse_twice("x"), None);
    }

    #[test]
    fn csv_rows_in_any_order() {
        let text = "l,m,re,im\n1,-1,0,0\n1,1,0.6,0\n1,0,0,0.8\n";
        let psi = parse_state(text, StateFormat::Csv, false).unwrap();
        assert_eq!(psi.spin(), SpinLabel::ONE);
        assert_eq!(psi.amplitudes()[0], Complex64::new(0.6, 0.0));
        assert_eq!(psi.amplitudes()[1], Complex64::new(0.0, 0.8));
    }

    #[test]
    fn csv_rejects_mixed_l_with_line() {
        let text = "l,m,re,im\n1,1,1,0\n2,0,0,0\n";
        let e = parse_state(text, StateFormat::Csv, false).unwrap_err().to_string();
        assert!(e.contains("line 3") && e.contains("mixed"), "{e}");
    }

    #[test]
    fn json_errors_carry_line() {
        let text = "{\"twice_l\": 1,\n \"amplitudes\": [[1, 0], [0 0]]}";
        let e = parse_state(text, StateFormat::Json, false).unwrap_err().to_string();
        assert!(e.contains("line 2"), "{e}");
        let e = parse_state("{\"twice_l\": 2, \"amplitudes\": [[1, 0]]}", StateFormat::Json, false).unwrap_err();
        assert!(e.to_string().contains("needs 3"));
    }

    #[test]
    fn norm_check_and_normalize() {
        let text = "{\"twice_l\": 1, \"amplitudes\": [[0.5, 0], [0, 0]]}";
        assert!(parse_state(text, StateFormat::Json, false).is_err());
        let psi = parse_state(text, StateFormat::Json, true).unwrap();
        assert!((psi.amplitudes().norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn write_then_parse_is_lossless() {
        let v = CVector::from_vec(vec![
            Complex64::new(0.1, -0.3),
            Complex64::new(1.0 / 3.0, 0.2),
            Complex64::new(-0.7, 1e-17),
            Complex64::new(0.05, 0.4),
        ]);
        let psi = PureState::normalized(SpinLabel::from_twice(3), v).unwrap();
        for format in [StateFormat::Json, StateFormat::Csv] {
            let back = parse_state(&write_state(&psi, format), format, false).unwrap();
            assert_eq!(back.amplitudes(), psi.amplitudes());
        }
    }
}

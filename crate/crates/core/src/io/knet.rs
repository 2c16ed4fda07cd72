//! K-NET / KiK-net ASCII strong-motion files: a header of fixed-width
//! `key value` lines closed by `Memo.`, then integer counts.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{TimeSeries, GAL};

/// Canonical header keys with the spellings accepted for each.
pub const HEADER_ALIASES: &[(&str, &[&str])] = &[
    ("Origin Time", &["origin time"]),
    ("Lat.", &["lat.", "lat", "latitude"]),
    ("Long.", &["long.", "long", "lon.", "longitude"]),
    ("Depth. (km)", &["depth. (km)", "depth.(km)", "depth (km)", "depth(km)", "depth"]),
    ("Mag.", &["mag.", "mag", "magnitude"]),
    ("Station Code", &["station code", "station"]),
    ("Station Lat.", &["station lat.", "station lat", "station latitude"]),
    ("Station Long.", &["station long.", "station long", "station lon.", "station longitude"]),
    ("Station Height(m)", &["station height(m)", "station height (m)", "station height"]),
    ("Record Time", &["record time"]),
    ("Sampling Freq(Hz)", &["sampling freq(hz)", "sampling freq.(hz)", "sampling freq (hz)", "sampling rate", "sampling frequency"]),
    ("Duration Time(s)", &["duration time(s)", "duration time (s)", "duration(s)", "duration"]),
    ("Dir.", &["dir.", "dir", "direction", "component"]),
    ("Scale Factor", &["scale factor", "scale"]),
    ("Max. Acc. (gal)", &["max. acc. (gal)", "max. acc.(gal)", "max acc (gal)", "max. acc."]),
    ("Last Correction", &["last correction", "correction time"]),
];

const MANDATORY: &[&str] = &[
    "Origin Time",
    "Lat.",
    "Long.",
    "Depth. (km)",
    "Mag.",
    "Station Code",
    "Station Lat.",
    "Station Long.",
    "Sampling Freq(Hz)",
    "Duration Time(s)",
    "Dir.",
    "Scale Factor",
    "Max. Acc. (gal)",
    "Last Correction",
];

const KEY_WIDTH: usize = 18;
const COUNTS_PER_LINE: usize = 8;
/// Length of the pre-event stretch whose mean is removed, s.
pub const PRE_EVENT_WINDOW: f64 = 1.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrongMotionFile {
    /// Header in file order, keys canonicalized.
    pub header: Vec<(String, String)>,
    pub counts: Vec<i64>,
}

impl StrongMotionFile {
    pub fn get(&self, key: &str) -> Option<&str> {
        self.header.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn sampling_frequency(&self) -> Result<f64> {
        parse_frequency(self.get("Sampling Freq(Hz)").unwrap_or(""), 0)
    }

    /// `(numerator, denominator)` of the `N(gal)/D` scale factor.
    pub fn scale_factor(&self) -> Result<(f64, f64)> {
        parse_scale(self.get("Scale Factor").unwrap_or(""), 0)
    }

    /// Counts converted to m/s², with the pre-event mean removed.
    pub fn acceleration(&self) -> Result<TimeSeries> {
        let fs = self.sampling_frequency()?;
        let (num, den) = self.scale_factor()?;
        let mut acc: Vec<f64> = self.counts.iter().map(|&c| c as f64 * num / den * GAL).collect();
        let pre = ((PRE_EVENT_WINDOW * fs).round() as usize).clamp(1, acc.len().max(1));
        let mean = acc[..pre.min(acc.len())].iter().sum::<f64>() / pre as f64;
        acc.iter_mut().for_each(|v| *v -= mean);
        TimeSeries::new(acc, 1.0 / fs)
    }
}

fn canonical_key(raw: &str) -> Option<&'static str> {
    let k = raw.trim().to_ascii_lowercase();
    HEADER_ALIASES
        .iter()
        .find(|(_, aliases)| aliases.contains(&k.as_str()))
        .map(|(c, _)| *c)
}

fn parse_frequency(value: &str, line: usize) -> Result<f64> {
    let digits = value.trim().trim_end_matches(|c: char| c.is_ascii_alphabetic()).trim();
    let fs: f64 = digits.parse().map_err(|_| Error::Parse {
        line,
        message: format!("sampling frequency '{value}' is not a number"),
    })?;
    if fs != 100.0 && fs != 200.0 {
        return Err(Error::Parse {
            line,
            message: format!("sampling frequency {fs} Hz is not 100 or 200 Hz"),
        });
    }
    Ok(fs)
}

fn parse_scale(value: &str, line: usize) -> Result<(f64, f64)> {
    let bad = || Error::Parse {
        line,
        message: format!("scale factor '{value}' is not of the form N(gal)/D"),
    };
    let (num, den) = value.trim().split_once('/').ok_or_else(bad)?;
    let num = num.trim();
    let num = num.strip_suffix("(gal)").ok_or_else(bad)?;
    let num: f64 = num.trim().parse().map_err(|_| bad())?;
    let den: f64 = den.trim().parse().map_err(|_| bad())?;
    if !(den != 0.0 && num.is_finite() && den.is_finite()) {
        return Err(bad());
    }
    Ok((num, den))
}

/// Splits a header line into key and value. The key is the first 18
/// columns; lines written with a shorter key column fall back to the known
/// key spellings.
fn split_header_line(line: &str) -> (String, String) {
    if line.len() > KEY_WIDTH && line.is_char_boundary(KEY_WIDTH) {
        let (k, v) = line.split_at(KEY_WIDTH);
        if canonical_key(k).is_some() {
            return (k.trim().to_string(), v.trim().to_string());
        }
    }
    let lower = line.to_ascii_lowercase();
    let best = HEADER_ALIASES
        .iter()
        .flat_map(|(_, a)| a.iter())
        .filter(|a| lower.starts_with(*a))
        .max_by_key(|a| a.len());
    match best {
        Some(a) => (line[..a.len()].trim().to_string(), line[a.len()..].trim().to_string()),
        None => (line.trim().to_string(), String::new()),
    }
}

/// Parses a strong-motion file. Returns the raw file and the acceleration
/// in m/s² with the first second's mean removed.
pub fn parse_strong_motion(bytes: &[u8]) -> Result<(StrongMotionFile, TimeSeries)> {
    let text = std::str::from_utf8(bytes).map_err(|e| Error::Parse {
        line: 0,
        message: format!("file is not valid UTF-8/ASCII: {e}"),
    })?;
    let mut header = Vec::new();
    let mut lines = text.lines().enumerate();
    let mut memo_seen = false;
    let mut fs_line = 0;
    let mut scale_line = 0;
    for (i, line) in lines.by_ref() {
        let lineno = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        if line.trim_start().to_ascii_lowercase().starts_with("memo") {
            memo_seen = true;
            break;
        }
        let (k, v) = split_header_line(line);
        let Some(key) = canonical_key(&k) else {
            return Err(Error::Parse {
                line: lineno,
                message: format!("unknown header key '{k}'"),
            });
        };
        match key {
            "Sampling Freq(Hz)" => {
                parse_frequency(&v, lineno)?;
                fs_line = lineno;
            }
            "Scale Factor" => {
                parse_scale(&v, lineno)?;
                scale_line = lineno;
            }
            _ => {}
        }
        header.push((key.to_string(), v));
    }
    if !memo_seen {
        return Err(Error::Parse {
            line: text.lines().count(),
            message: "header is not terminated by a 'Memo.' line".into(),
        });
    }
    for key in MANDATORY {
        if !header.iter().any(|(k, _)| k == key) {
            return Err(Error::Parse {
                line: 0,
                message: format!("missing mandatory header key '{key}'"),
            });
        }
    }
    let mut counts = Vec::new();
    for (i, line) in lines {
        for tok in line.split_whitespace() {
            let c: i64 = tok.parse().map_err(|_| Error::Parse {
                line: i + 1,
                message: format!("sample '{tok}' is not an integer"),
            })?;
            counts.push(c);
        }
    }
    let file = StrongMotionFile { header, counts };
    let fs = file.sampling_frequency().map_err(|e| relocate(e, fs_line))?;
    file.scale_factor().map_err(|e| relocate(e, scale_line))?;
    let duration: f64 = file
        .get("Duration Time(s)")
        .unwrap_or("")
        .trim()
        .trim_end_matches(|c: char| c.is_ascii_alphabetic())
        .parse()
        .map_err(|_| Error::Parse {
            line: 0,
            message: "duration is not a number".into(),
        })?;
    let dt = 1.0 / fs;
    let span = file.counts.len() as f64 * dt;
    if (span - duration).abs() > dt * (1.0 + 1e-9) {
        return Err(Error::Parse {
            line: 0,
            message: format!(
                "{} samples at {fs} Hz span {span} s but the header states {duration} s",
                file.counts.len()
            ),
        });
    }
    let ts = file.acceleration()?;
    Ok((file, ts))
}

fn relocate(e: Error, line: usize) -> Error {
    match e {
        Error::Parse { message, .. } => Error::Parse { line, message },
        other => other,
    }
}

/// Writes the file back in the same layout, eight counts per line.
pub fn write_strong_motion(file: &StrongMotionFile) -> String {
    let mut out = String::new();
    for (k, v) in &file.header {
        out.push_str(&format!("{k:<width$}{v}\n", width = KEY_WIDTH));
    }
    out.push_str("Memo.\n");
    for chunk in file.counts.chunks(COUNTS_PER_LINE) {
        // a leading space keeps 8-character counts apart
        let line: Vec<String> = chunk.iter().map(|c| format!(" {c:>7}")).collect();
        out.push_str(&line.join(""));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn header(fs: &str, duration: &str, scale: &str) -> String {
        format!(
            "Origin Time       2004/10/23 17:56:00\n\
             Lat.              37.292\n\
             Long.             138.867\n\
             Depth. (km)       13\n\
             Mag.              6.8\n\
             Station Code      NIG019\n\
             Station Lat.      37.3070\n\
             Station Long.     138.8210\n\
             Station Height(m) 56\n\
             Record Time       2004/10/23 17:56:18\n\
             Sampling Freq(Hz) {fs}\n\
             Duration Time(s)  {duration}\n\
             Dir.              N-S\n\
             Scale Factor      {scale}\n\
             Max. Acc. (gal)   1.000\n\
             Last Correction   2004/10/23 17:56:03\n\
             Memo.\n"
        )
    }

    #[test]
    fn units_and_sampling() {
        let mut text = header("100Hz", "0.03", "1(gal)/1");
        text.push_str("0 1 -1\n");
        let (f, ts) = parse_strong_motion(text.as_bytes()).unwrap();
        assert_eq!(ts.dt(), 0.01);
        assert_eq!(f.counts, vec![0, 1, -1]);
        // {0, 0.01, −0.01} m/s² before mean removal; their mean is 0
        assert_eq!(ts.samples(), &[0.0, 0.01, -0.01]);
        assert_eq!(f.get("Station Code"), Some("NIG019"));
    }

    #[test]
    fn pre_event_mean_is_removed() {
        let mut text = header("100Hz", "2", "2000(gal)/8388608");
        let counts: Vec<String> = (0..200).map(|k| if k < 100 { "10".into() } else { "50".into() }).collect();
        text.push_str(&counts.join(" "));
        let (_, ts) = parse_strong_motion(text.as_bytes()).unwrap();
        let unit = 2000.0 / 8388608.0 * 0.01;
        assert!(ts.samples()[..100].iter().all(|v| v.abs() < 1e-15));
        assert!((ts.samples()[150] - 40.0 * unit).abs() < 1e-15);
    }

    #[test]
    fn round_trip_is_lossless() {
        let mut text = header("200Hz", "0.05", "3920(gal)/6170000");
        text.push_str("1 2 3 4 5 6 7 8\n9 -10\n");
        let (f, ts) = parse_strong_motion(text.as_bytes()).unwrap();
        let written = write_strong_motion(&f);
        let (g, ts2) = parse_strong_motion(written.as_bytes()).unwrap();
        assert_eq!(f, g);
        assert_eq!(ts, ts2);
    }

    #[test]
    fn aliases_are_accepted() {
        let text = header("100Hz", "0.02", "1(gal)/1")
            .replace("Sampling Freq(Hz)", "Sampling Rate    ")
            .replace("Depth. (km)      ", "Depth(km)        ")
            + "1 2\n";
        let (f, _) = parse_strong_motion(text.as_bytes()).unwrap();
        assert_eq!(f.get("Depth. (km)"), Some("13"));
        assert_eq!(f.sampling_frequency().unwrap(), 100.0);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let text = header("100Hz", "0.03", "1(gal)/1") + "1 2\n3.5\n";
        match parse_strong_motion(text.as_bytes()) {
            Err(Error::Parse { line, message }) => {
                assert_eq!(line, 19);
                assert!(message.contains("3.5"));
            }
            other => panic!("{other:?}"),
        }
        let text = header("100Hz", "0.01", "1gal/1") + "1\n";
        assert!(matches!(parse_strong_motion(text.as_bytes()), Err(Error::Parse { line: 14, .. })));
        let text = header("50Hz", "0.02", "1(gal)/1") + "1\n";
        assert!(matches!(parse_strong_motion(text.as_bytes()), Err(Error::Parse { line: 11, .. })));
        let text = header("100Hz", "0.01", "1(gal)/1").replace("Mag.              6.8\n", "") + "1\n";
        let err = parse_strong_motion(text.as_bytes()).unwrap_err().to_string();
        assert!(err.contains("Mag."), "{err}");
        let text = header("100Hz", "1", "1(gal)/1") + "1 2 3\n";
        assert!(parse_strong_motion(text.as_bytes()).unwrap_err().to_string().contains("span"));
    }
}

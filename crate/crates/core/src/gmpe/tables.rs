use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Regression coefficients for PGA and 5%-damped SA (geometric mean, g).
pub const SA_TABLE_CSV: &str = "\
Per. (s),a1,a2,a3,a4,Mh,b1,b2,b3,h,c1,ϕ,τ,σ
PGA,-0.053447,0.51153,-0.13258,0.22396,5.6,-0.96551,0.2107,-0.014,1.36,-0.33707,0.65541,0.53346,0.84507
0.0384,0.66897,0.58703,-0.20807,0.39223,5.6,-1.0025,0.16005,-0.014,1.2,-0.062352,0.67452,0.5656,0.88027
0.0484,0.91612,0.64692,-0.22739,0.49764,5.6,-0.98952,0.13093,-0.014,1.2,-0.053157,0.69009,0.57479,0.89811
0.0582,1.0402,0.86293,-0.15531,0.67188,5.6,-0.931,0.08792,-0.014,1.2,-0.063994,0.70965,0.57829,0.91543
0.0769,1.174,1.1741,-0.040642,0.82768,5.6,-0.85675,0.049073,-0.014,1.2,-0.060246,0.75727,0.57423,0.95037
0.0844,1.1251,1.1062,-0.077909,0.79292,5.6,-0.85304,0.05869,-0.014,1.2,-0.15693,0.76705,0.56967,0.95545
0.097,1.049,1.1029,-0.097397,0.83191,5.6,-0.84279,0.060533,-0.014,1.2,-0.30829,0.76035,0.56389,0.94663
0.1167,0.95244,1.1226,-0.033774,0.72045,5.6,-0.86795,0.090565,-0.0138,1.2,-0.45209,0.73082,0.54812,0.91353
0.1472,0.9456,0.98923,-0.056821,0.55631,5.6,-0.957,0.1353,-0.0131,1.2,-0.63621,0.73475,0.53237,0.90735
0.1691,0.83211,0.6902,-0.21985,0.3962,5.6,-1.0205,0.18065,-0.0126,1.2,-0.70706,0.72299,0.52852,0.89557
0.2036,0.64394,0.4867,-0.29401,0.25966,5.6,-1.0727,0.21946,-0.0119,1.2,-0.76095,0.71194,0.52347,0.88367
0.234,0.47552,0.55449,-0.30051,0.33502,5.6,-1.0613,0.20849,-0.0113,1.2,-0.79769,0.70218,0.50345,0.86402
0.309,0.21697,0.40545,-0.32381,0.21518,5.6,-1.1407,0.25011,-0.01,1.2,-0.78078,0.67721,0.51352,0.84989
0.3551,0.26779,0.54112,-0.12721,-0.05996,5.8,-1.1953,0.27496,-0.0092,1.2,-0.8036,0.67557,0.51987,0.85244
0.3896,0.23289,0.37994,-0.17941,-0.17986,6,-1.2195,0.28412,-0.0087,1.2,-0.79823,0.67672,0.52827,0.8585
0.4274,0.15474,0.39176,-0.15983,-0.23609,6,-1.2479,0.29566,-0.0082,1.2,-0.78573,0.67768,0.52833,0.85929
0.469,0.16342,0.50356,-0.1262,-0.19146,6,-1.27,0.289,-0.0076,1.2,-0.75421,0.67615,0.53119,0.85985
0.5913,0.004647,0.53229,-0.11926,-0.20505,6,-1.3329,0.3007,-0.0062,1.2,-0.69754,0.67022,0.54423,0.86336
0.7456,-0.15406,0.72525,-0.03463,-0.21427,6,-1.3808,0.30522,-0.0049,1.2,-0.69847,0.65969,0.51299,0.83568
0.818,-0.16584,0.75843,-0.025508,-0.23741,6,-1.4197,0.31173,-0.0043,1.2,-0.6784,0.65957,0.50082,0.82816
0.9401,-0.28915,0.79785,-0.042921,-0.20283,6,-1.4363,0.30944,-0.0036,1.2,-0.65954,0.66032,0.47773,0.81501
1.3622,-0.80171,0.71254,-0.048238,-0.13681,6,-1.5357,0.34884,-0.002,1.2,-0.66515,0.64908,0.41846,0.77228
";

/// Regression coefficients for AI, significant duration and the central
/// frequency parameters. `X` marks a coefficient absent from the form.
pub const PARAM_TABLE_CSV: &str = "\
Per. (s),H Def.,a1,a2,a3,b1,b2,h,c1,ϕ,τ,σ
AI (m/s),AM,7.90495,3.8684,-0.15884,-3.04157,-0.24657,15.815,-0.71102,1.17046,0.98146,1.5275
AI (m/s),GM,7.92892,3.88485,-0.15950,-3.04614,-0.24972,16.131,-0.71189,1.16603,0.98209,1.5245
SMD (s),IND,0.36220,0.34394,X,0.63582,-0.038941,2.5,-0.10385,0.43360,0.19766,0.4765
SMD (s),GM,0.37827,0.33056,X,0.62982,-0.036646,2.5,-0.10080,0.42182,0.17488,0.4566
A,GM,3.55833,-0.043563,X,-0.17115,X,X,0.13792,0.33288,0.088269,0.34439
B,GM,-1.01196,0.14835,X,-0.24392,X,X,-0.40941,0.97950,0.27920,1.01852
";

const SA_COLUMNS: [&str; 14] = [
    "Per. (s)", "a1", "a2", "a3", "a4", "Mh", "b1", "b2", "b3", "h", "c1", "ϕ", "τ", "σ",
];
const PARAM_COLUMNS: [&str; 12] = [
    "Per. (s)", "H Def.", "a1", "a2", "a3", "b1", "b2", "h", "c1", "ϕ", "τ", "σ",
];

/// Regressed ground-motion parameter of the second table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Target {
    /// ln of Arias intensity, m/s.
    Ai,
    /// ln of significant relative duration, s.
    Dsr,
    /// Intercept A of the central-frequency model.
    A,
    /// ln of the central-frequency slope B.
    LnB,
}

impl Target {
    fn from_label(label: &str) -> Option<Self> {
        match label.trim() {
            "AI (m/s)" | "AI" => Some(Target::Ai),
            "SMD (s)" | "SMD" | "DSR" => Some(Target::Dsr),
            "A" => Some(Target::A),
            "B" | "ln(B)" | "lnB" => Some(Target::LnB),
            _ => None,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Target::Ai => "AI (m/s)",
            Target::Dsr => "SMD (s)",
            Target::A => "A",
            Target::LnB => "B",
        }
    }
}

/// Horizontal-component definition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum HorizontalDef {
    /// Geometric mean.
    GM,
    /// Arithmetic mean.
    AM,
    /// Independent components.
    IND,
}

impl std::str::FromStr for HorizontalDef {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "GM" => Ok(HorizontalDef::GM),
            "AM" => Ok(HorizontalDef::AM),
            "IND" => Ok(HorizontalDef::IND),
            other => Err(Error::UnknownDefinition(format!("horizontal definition {other:?}"))),
        }
    }
}

impl std::fmt::Display for HorizontalDef {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SaCoefficientRow {
    /// Oscillator period in s; 0 is PGA.
    pub period: f64,
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub a4: f64,
    pub mh: f64,
    pub b1: f64,
    pub b2: f64,
    pub b3: f64,
    pub h: f64,
    pub c1: f64,
    pub phi: f64,
    pub tau: f64,
    pub sigma: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamCoefficientRow {
    pub target: Target,
    pub hdef: HorizontalDef,
    pub a1: f64,
    pub a2: f64,
    pub a3: Option<f64>,
    pub b1: f64,
    pub b2: Option<f64>,
    pub h: Option<f64>,
    pub c1: f64,
    pub phi: f64,
    pub tau: f64,
    pub sigma: f64,
}

/// Both coefficient tables. Immutable once loaded.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientTable {
    pub sa: Vec<SaCoefficientRow>,
    pub params: Vec<ParamCoefficientRow>,
}

impl CoefficientTable {
    pub fn embedded() -> Self {
        Self::from_readers(SA_TABLE_CSV.as_bytes(), PARAM_TABLE_CSV.as_bytes())
            .expect("embedded coefficient tables parse")
    }

    pub fn from_readers<A: Read, B: Read>(sa: A, params: B) -> Result<Self> {
        Ok(Self {
            sa: parse_sa_table(sa)?,
            params: parse_param_table(params)?,
        })
    }

    pub fn sa_row(&self, period: f64) -> Option<&SaCoefficientRow> {
        self.sa
            .iter()
            .find(|r| (r.period - period).abs() <= 1e-9 * period.max(1.0))
    }

    pub fn param_row(&self, target: Target, hdef: HorizontalDef) -> Option<&ParamCoefficientRow> {
        self.params.iter().find(|r| r.target == target && r.hdef == hdef)
    }

    pub fn periods(&self) -> Vec<f64> {
        self.sa.iter().map(|r| r.period).collect()
    }
}

/// Embedded tables, with either table optionally replaced by a CSV file.
pub fn load_coefficients(sa_path: Option<&Path>, param_path: Option<&Path>) -> Result<CoefficientTable> {
    let sa = match sa_path {
        Some(p) => parse_sa_table(std::fs::File::open(p)?)?,
        None => parse_sa_table(SA_TABLE_CSV.as_bytes())?,
    };
    let params = match param_path {
        Some(p) => parse_param_table(std::fs::File::open(p)?)?,
        None => parse_param_table(PARAM_TABLE_CSV.as_bytes())?,
    };
    Ok(CoefficientTable { sa, params })
}

/// Header names accepted for each canonical column.
fn column_aliases(canonical: &str) -> &'static [&'static str] {
    match canonical {
        "Per. (s)" => &["Per. (s)", "Per.", "period"],
        "H Def." => &["H Def.", "HDef", "hdef"],
        "ϕ" => &["ϕ", "φ", "phi"],
        "τ" => &["τ", "tau"],
        "σ" => &["σ", "sigma"],
        "Mh" => &["Mh", "mh"],
        _ => &[],
    }
}

fn header_positions(headers: &csv::StringRecord, wanted: &[&str]) -> Result<Vec<usize>> {
    wanted
        .iter()
        .map(|&name| {
            let aliases = column_aliases(name);
            headers
                .iter()
                .position(|h| h.trim() == name || aliases.contains(&h.trim()))
                .ok_or_else(|| Error::CoefficientParse {
                    row: 1,
                    column: name.to_string(),
                    message: "missing column".into(),
                })
        })
        .collect()
}

struct Cells<'a> {
    record: &'a csv::StringRecord,
    positions: &'a [usize],
    names: &'a [&'a str],
    row: usize,
}

impl Cells<'_> {
    fn text(&self, i: usize) -> Result<&str> {
        self.record
            .get(self.positions[i])
            .map(str::trim)
            .ok_or_else(|| self.error(i, "missing value"))
    }

    fn number(&self, i: usize) -> Result<f64> {
        let s = self.text(i)?;
        s.parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| self.error(i, &format!("not a number: {s:?}")))
    }

    fn optional(&self, i: usize) -> Result<Option<f64>> {
        if self.text(i)?.eq_ignore_ascii_case("x") {
            Ok(None)
        } else {
            self.number(i).map(Some)
        }
    }

    fn error(&self, i: usize, message: &str) -> Error {
        Error::CoefficientParse {
            row: self.row,
            column: self.names[i].to_string(),
            message: message.to_string(),
        }
    }
}

fn reader<R: Read>(r: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new().trim(csv::Trim::All).flexible(true).from_reader(r)
}

fn parse_sa_table<R: Read>(r: R) -> Result<Vec<SaCoefficientRow>> {
    let mut rdr = reader(r);
    let positions = header_positions(rdr.headers()?, &SA_COLUMNS)?;
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let record = rec?;
        let c = Cells {
            record: &record,
            positions: &positions,
            names: &SA_COLUMNS,
            row: i + 2,
        };
        let label = c.text(0)?;
        let period = if label.eq_ignore_ascii_case("PGA") { 0.0 } else { c.number(0)? };
        rows.push(SaCoefficientRow {
            period,
            a1: c.number(1)?,
            a2: c.number(2)?,
            a3: c.number(3)?,
            a4: c.number(4)?,
            mh: c.number(5)?,
            b1: c.number(6)?,
            b2: c.number(7)?,
            b3: c.number(8)?,
            h: c.number(9)?,
            c1: c.number(10)?,
            phi: c.number(11)?,
            tau: c.number(12)?,
            sigma: c.number(13)?,
        });
    }
    if rows.is_empty() {
        return Err(Error::Empty("SA coefficient table"));
    }
    Ok(rows)
}

fn parse_param_table<R: Read>(r: R) -> Result<Vec<ParamCoefficientRow>> {
    let mut rdr = reader(r);
    let positions = header_positions(rdr.headers()?, &PARAM_COLUMNS)?;
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let record = rec?;
        let c = Cells {
            record: &record,
            positions: &positions,
            names: &PARAM_COLUMNS,
            row: i + 2,
        };
        let target = Target::from_label(c.text(0)?)
            .ok_or_else(|| c.error(0, "unknown target (expected AI, SMD, A or B)"))?;
        let hdef = c.text(1)?.parse::<HorizontalDef>().map_err(|e| c.error(1, &e.to_string()))?;
        rows.push(ParamCoefficientRow {
            target,
            hdef,
            a1: c.number(2)?,
            a2: c.number(3)?,
            a3: c.optional(4)?,
            b1: c.number(5)?,
            b2: c.optional(6)?,
            h: c.optional(7)?,
            c1: c.number(8)?,
            phi: c.number(9)?,
            tau: c.number(10)?,
            sigma: c.number(11)?,
        });
    }
    if rows.is_empty() {
        return Err(Error::Empty("parameter coefficient table"));
    }
    Ok(rows)
}

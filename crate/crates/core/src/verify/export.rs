//! JSON and CSV writers. Floats are written with 17 significant digits so
//! that identical runs give byte-identical files.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use num_complex::Complex64 as C64;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};

use super::VerificationReport;
use crate::catalog::PotentialModel;
use crate::error::Result;
use crate::mass::MassProfile;
use crate::solver::Grid;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExportFormat {
    Json,
    Csv,
}

impl std::str::FromStr for ExportFormat {
    type Err = crate::SgaError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Self::Json),
            "csv" => Ok(Self::Csv),
            _ => Err(crate::SgaError::validation(format!("unknown format '{s}' (json|csv)"))),
        }
    }
}

/// Pretty printer with fixed `{:.16e}` floats.
struct FixedFloat<'a>(PrettyFormatter<'a>);

macro_rules! delegate {
    ($($name:ident($($arg:ident: $ty:ty),*)),* $(,)?) => {
        $(fn $name<W: ?Sized + Write>(&mut self, w: &mut W $(, $arg: $ty)*) -> io::Result<()> {
            self.0.$name(w $(, $arg)*)
        })*
    };
}

impl Formatter for FixedFloat<'_> {
    delegate!(
        begin_array(),
        end_array(),
        begin_array_value(first: bool),
        end_array_value(),
        begin_object(),
        end_object(),
        begin_object_key(first: bool),
        begin_object_value(),
        end_object_value(),
    );

    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, v: f64) -> io::Result<()> {
        write!(w, "{v:.16e}")
    }

    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, v: f32) -> io::Result<()> {
        self.write_f64(w, v as f64)
    }
}

pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, FixedFloat(PrettyFormatter::with_indent(b"  ")));
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json writes UTF-8"))
}

pub fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    fs::write(path, to_json_string(value)?)?;
    Ok(())
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}

fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

/// `# meta:` line, header, then one row per computed level.
pub fn report_csv(report: &VerificationReport) -> Result<String> {
    let meta = serde_json::json!({
        "schema": report.schema,
        "potential_id": report.potential_id,
        "params": report.params,
        "profile": report.profile,
        "ordering": report.ordering,
        "grid": report.grid,
        "label": report.label,
        "flags": report.flags,
    });
    let mut out = format!("# meta: {meta}\n");
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["n", "E_numeric", "E_error", "lambda_inverted"])?;
    for (n, (e, d)) in report.numeric_e.iter().zip(&report.e_error).enumerate() {
        let lam = report.lambda_inverted.get(n).copied().flatten().map(fmt_f64).unwrap_or_default();
        w.write_record([n.to_string(), fmt_f64(*e), fmt_f64(*d), lam])?;
    }
    out.push_str(&String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("csv writes UTF-8"));
    Ok(out)
}

pub fn cmd_export(report: &VerificationReport, format: ExportFormat, path: &Path) -> Result<()> {
    match format {
        ExportFormat::Json => write_json(report, path),
        ExportFormat::Csv => Ok(fs::write(path, report_csv(report)?)?),
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurvePoint {
    pub x: f64,
    pub mu: f64,
    pub v: C64,
}

/// V_catalog(μ(x)) on the grid nodes, without ordering corrections.
pub fn potential_curve(model: &PotentialModel, profile: &MassProfile, grid: &Grid) -> Result<Vec<CurvePoint>> {
    grid.points()
        .into_iter()
        .map(|x| {
            let mu = profile.mu(x)?;
            Ok(CurvePoint { x, mu, v: model.eval_v(mu)? })
        })
        .collect()
}

pub fn curve_csv(model: &PotentialModel, points: &[CurvePoint]) -> Result<String> {
    let complex = model.value_type == crate::catalog::ValueType::Complex;
    let mut w = csv::Writer::from_writer(Vec::new());
    if complex {
        w.write_record(["x", "mu", "V", "V_im"])?;
    } else {
        w.write_record(["x", "mu", "V"])?;
    }
    for p in points {
        let mut rec = vec![fmt_f64(p.x), fmt_f64(p.mu), fmt_f64(p.v.re)];
        if complex {
            rec.push(fmt_f64(p.v.im));
        }
        w.write_record(&rec)?;
    }
    Ok(String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("csv writes UTF-8"))
}

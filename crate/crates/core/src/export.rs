//! CSV and JSON serialization of trajectories, tables and boundary curves.
//!
//! Floats are written with 17 significant digits (`{:.16e}`) so every value
//! round-trips exactly; an infinite gap is written as `inf`.

use std::fmt::Write as _;

use serde_json::{json, Value};

use crate::boundaries::{default_grid, sample_curve, BoundaryCurve, CurveName, CurveParams};
use crate::error::{Error, Result};
use crate::scenarios::Trajectory;

pub const TRAJECTORY_COLUMNS: [&str; 8] = [
    "scenario", "label", "sequence", "alpha", "beta", "lambda0", "entropy_vn", "gap",
];

pub fn fmt_f64(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v:.16e}")
    }
}

pub fn parse_f64(s: &str) -> Result<f64> {
    match s {
        "inf" => Ok(f64::INFINITY),
        "-inf" => Ok(f64::NEG_INFINITY),
        "nan" => Ok(f64::NAN),
        _ => s
            .parse()
            .map_err(|_| Error::Parse(format!("not a number: {s:?}"))),
    }
}

fn degree_name(d: f64) -> String {
    if d.fract() == 0.0 {
        format!("renyi_{}", d as i64)
    } else {
        format!("renyi_{d}")
    }
}

fn quote(field: &str) -> String {
    if field.contains([',', '"', '\n']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

/// Rényi degrees present in any point, ascending.
pub fn renyi_degrees(traj: &Trajectory) -> Vec<f64> {
    let mut ds: Vec<f64> = traj
        .points
        .iter()
        .flat_map(|p| p.renyi.iter().map(|r| r.0))
        .collect();
    ds.sort_by(f64::total_cmp);
    ds.dedup();
    ds
}

pub fn trajectory_header(degrees: &[f64]) -> String {
    let mut cols: Vec<String> = TRAJECTORY_COLUMNS.iter().map(|s| s.to_string()).collect();
    cols.extend(degrees.iter().map(|&d| degree_name(d)));
    cols.join(",")
}

pub fn trajectory_csv(traj: &Trajectory) -> String {
    let degrees = renyi_degrees(traj);
    let mut out = trajectory_header(&degrees);
    out.push('\n');
    for p in &traj.points {
        let _ = write!(
            out,
            "{},{},{},{},{},{},{},{}",
            quote(&traj.scenario),
            quote(&p.label),
            p.sequence,
            p.alpha,
            p.beta,
            fmt_f64(p.lambda0),
            fmt_f64(p.entropy),
            fmt_f64(p.gap),
        );
        for &d in &degrees {
            out.push(',');
            if let Some(v) = p.renyi_value(d) {
                out.push_str(&fmt_f64(v));
            }
        }
        out.push('\n');
    }
    out
}

/// One parsed row of a trajectory CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub scenario: String,
    pub label: String,
    pub sequence: usize,
    pub alpha: usize,
    pub beta: usize,
    pub lambda0: f64,
    pub entropy: f64,
    pub gap: f64,
    pub renyi: Vec<(f64, Option<f64>)>,
}

fn split_csv_line(line: &str) -> Vec<String> {
    let mut fields = Vec::new();
    let mut cur = String::new();
    let mut quoted = false;
    let mut chars = line.chars().peekable();
    while let Some(c) = chars.next() {
        match (c, quoted) {
            ('"', true) if chars.peek() == Some(&'"') => {
                cur.push('"');
                chars.next();
            }
            ('"', _) => quoted = !quoted,
            (',', false) => fields.push(std::mem::take(&mut cur)),
            _ => cur.push(c),
        }
    }
    fields.push(cur);
    fields
}

pub fn parse_trajectory_csv(text: &str) -> Result<Vec<CsvRow>> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty CSV".into()))?;
    let cols = split_csv_line(header);
    if cols.len() < TRAJECTORY_COLUMNS.len()
        || cols[..TRAJECTORY_COLUMNS.len()] != TRAJECTORY_COLUMNS
    {
        return Err(Error::Parse(format!("unexpected header: {header}")));
    }
    let degrees = cols[TRAJECTORY_COLUMNS.len()..]
        .iter()
        .map(|c| {
            c.strip_prefix("renyi_")
                .ok_or_else(|| Error::Parse(format!("unexpected column {c:?}")))
                .and_then(parse_f64)
        })
        .collect::<Result<Vec<f64>>>()?;
    let int = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| Error::Parse(format!("not an integer: {s:?}")))
    };
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let f = split_csv_line(line);
        if f.len() != cols.len() {
            return Err(Error::Parse(format!(
                "row {} has {} fields, expected {}",
                i + 1,
                f.len(),
                cols.len()
            )));
        }
        let renyi = degrees
            .iter()
            .zip(&f[TRAJECTORY_COLUMNS.len()..])
            .map(|(&d, v)| Ok((d, if v.is_empty() { None } else { Some(parse_f64(v)?) })))
            .collect::<Result<Vec<_>>>()?;
        rows.push(CsvRow {
            scenario: f[0].clone(),
            label: f[1].clone(),
            sequence: int(&f[2])?,
            alpha: int(&f[3])?,
            beta: int(&f[4])?,
            lambda0: parse_f64(&f[5])?,
            entropy: parse_f64(&f[6])?,
            gap: parse_f64(&f[7])?,
            renyi,
        });
    }
    Ok(rows)
}

/// Curves embedded next to a trajectory: the tight envelope and flexible
/// bound at the first point's dimensions, plus the Shor curves for `shor`.
pub fn default_boundaries(traj: &Trajectory, points: usize) -> Result<Vec<BoundaryCurve>> {
    let Some(p) = traj.points.first() else {
        return Ok(vec![]);
    };
    let params = CurveParams::dims(p.alpha as f64, p.beta as f64);
    let mut names = vec![
        CurveName::F1,
        CurveName::F2,
        CurveName::F3,
        CurveName::ExactUpper,
        CurveName::FlexibleE,
        CurveName::G1,
        CurveName::G3,
        CurveName::FlexibleGap,
    ];
    if traj.scenario == "shor" {
        names.extend([CurveName::FShor, CurveName::GShor]);
    }
    names
        .into_iter()
        .map(|n| sample_curve(n, &params, &default_grid(n, &params, points)))
        .collect()
}

pub fn curve_json(c: &BoundaryCurve) -> Value {
    json!({
        "name": c.name.to_string(),
        "alpha": c.params.alpha,
        "beta": c.params.beta,
        "sigma": c.params.sigma,
        "lambda": c.params.lambda,
        "x": c.samples.iter().map(|s| s.0).collect::<Vec<_>>(),
        "y": c.samples.iter().map(|s| s.1).collect::<Vec<_>>(),
        "extrapolated_below": c.extrapolated_below,
    })
}

/// JSON mirror of [`trajectory_csv`] with a `boundaries` block.
pub fn trajectory_json(traj: &Trajectory, boundaries: &[BoundaryCurve]) -> Value {
    let degrees = renyi_degrees(traj);
    let points: Vec<Value> = traj
        .points
        .iter()
        .map(|p| {
            let mut v = json!({
                "label": p.label,
                "sequence": p.sequence,
                "alpha": p.alpha,
                "beta": p.beta,
                "lambda0": p.lambda0,
                "entropy_vn": p.entropy,
                "gap": if p.gap.is_finite() { json!(p.gap) } else { json!("inf") },
            });
            for &d in &degrees {
                v[degree_name(d)] = json!(p.renyi_value(d));
            }
            v
        })
        .collect();
    json!({
        "scenario": traj.scenario,
        "config": traj.config,
        "seeds": traj.seeds,
        "columns": trajectory_header(&degrees).split(',').collect::<Vec<_>>(),
        "points": points,
        "boundaries": boundaries.iter().map(curve_json).collect::<Vec<_>>(),
    })
}

/// Numeric table with named columns, written with the same float format.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: vec![],
        }
    }

    pub fn push(&mut self, row: Vec<f64>) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(Error::Dimension(format!(
                "row of {} values for {} columns",
                row.len(),
                self.columns.len()
            )));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for r in &self.rows {
            out.push_str(&r.iter().map(|&v| fmt_f64(v)).collect::<Vec<_>>().join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let cols: serde_json::Map<String, Value> = self
            .columns
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let vals: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|r| if r[i].is_finite() { json!(r[i]) } else { json!(fmt_f64(r[i])) })
                    .collect();
                (c.clone(), Value::Array(vals))
            })
            .collect();
        Value::Object(cols)
    }

    pub fn parse_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty CSV".into()))?;
        let mut t = Table::new(header.split(','));
        for line in lines {
            let row = line.split(',').map(parse_f64).collect::<Result<Vec<_>>>()?;
            t.push(row).map_err(|e| Error::Parse(e.to_string()))?;
        }
        Ok(t)
    }
}

pub fn curve_table(c: &BoundaryCurve) -> Table {
    let mut t = Table::new(["x", c.name.to_string().as_str()]);
    t.rows = c.samples.iter().map(|&(x, y)| vec![x, y]).collect();
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{Spectrum, TrajectoryPoint};

    fn sample_trajectory() -> Trajectory {
        let mut t = Trajectory::new("demo", json!({"k": 1}));
        for (label, vals) in [
            ("a,b", vec![1.0, 0.0]),
            ("mixed", vec![0.7, 0.2, 0.1, 0.0]),
        ] {
            let s = Spectrum::from_values(vals, 4, 4).unwrap();
            t.push(TrajectoryPoint::from_spectrum(label, s, &[2.0, 0.5]).unwrap());
        }
        t
    }

    #[test]
    fn header_is_exact() {
        let csv = trajectory_csv(&sample_trajectory());
        assert_eq!(
            csv.lines().next().unwrap(),
            "scenario,label,sequence,alpha,beta,lambda0,entropy_vn,gap,renyi_0.5,renyi_2"
        );
    }

    #[test]
    fn csv_round_trip_is_lossless() {
        let t = sample_trajectory();
        let rows = parse_trajectory_csv(&trajectory_csv(&t)).unwrap();
        assert_eq!(rows.len(), 2);
        for (r, p) in rows.iter().zip(&t.points) {
            assert_eq!(r.label, p.label);
            assert_eq!(r.lambda0.to_bits(), p.lambda0.to_bits());
            assert_eq!(r.entropy.to_bits(), p.entropy.to_bits());
            assert_eq!(r.gap, p.gap);
            assert_eq!(r.renyi[1].1.unwrap().to_bits(), p.renyi_value(2.0).unwrap().to_bits());
        }
        assert!(rows[0].gap.is_infinite());
        assert!(trajectory_csv(&t).contains(",inf,"));
    }

    #[test]
    fn seventeen_significant_digits() {
        assert_eq!(fmt_f64(0.1), "1.0000000000000001e-1");
        assert_eq!(parse_f64(&fmt_f64(std::f64::consts::PI)).unwrap(), std::f64::consts::PI);
    }

    #[test]
    fn bad_header_rejected() {
        assert!(parse_trajectory_csv("a,b\n1,2\n").is_err());
        assert!(parse_trajectory_csv("").is_err());
    }

    #[test]
    fn json_has_boundaries() {
        let t = sample_trajectory();
        let b = default_boundaries(&t, 20).unwrap();
        let v = trajectory_json(&t, &b);
        assert_eq!(v["points"].as_array().unwrap().len(), 2);
        assert_eq!(v["points"][0]["gap"], "inf");
        let names: Vec<&str> = v["boundaries"]
            .as_array()
            .unwrap()
            .iter()
            .map(|c| c["name"].as_str().unwrap())
            .collect();
        assert!(names.contains(&"f1") && names.contains(&"exact_upper"));
    }

    #[test]
    fn table_round_trip() {
        let mut t = Table::new(["x", "y"]);
        t.push(vec![0.25, f64::INFINITY]).unwrap();
        assert!(t.push(vec![1.0]).is_err());
        let back = Table::parse_csv(&t.to_csv()).unwrap();
        assert_eq!(back, t);
    }
}

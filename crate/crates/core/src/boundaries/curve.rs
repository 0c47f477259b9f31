use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum CurveName {
    F1,
    F2,
    F3,
    ExactUpper,
    FlexibleE,
    FShor,
    G1,
    G3,
    FlexibleGap,
    GShor,
    /// Flexible Rényi curve of the given degree (1 = von Neumann limit).
    Renyi(u32),
    MpdDensity,
}

impl CurveName {
    pub const ALL: [CurveName; 17] = [
        CurveName::F1,
        CurveName::F2,
        CurveName::F3,
        CurveName::ExactUpper,
        CurveName::FlexibleE,
        CurveName::FShor,
        CurveName::G1,
        CurveName::G3,
        CurveName::FlexibleGap,
        CurveName::GShor,
        CurveName::Renyi(1),
        CurveName::Renyi(2),
        CurveName::Renyi(3),
        CurveName::Renyi(4),
        CurveName::Renyi(5),
        CurveName::Renyi(6),
        CurveName::MpdDensity,
    ];

    /// Closed interval of admissible x with flags for open ends.
    pub fn domain(&self, p: &CurveParams) -> (f64, f64, bool, bool) {
        match self {
            CurveName::F1 | CurveName::F2 | CurveName::FlexibleE | CurveName::Renyi(_) => {
                (0.0, 1.0, true, false)
            }
            CurveName::F3 | CurveName::ExactUpper => (1.0 / p.alpha, 1.0, false, false),
            CurveName::FShor | CurveName::GShor => (0.5, 1.0, true, false),
            CurveName::G1 | CurveName::G3 | CurveName::FlexibleGap => (0.0, 1.0, true, true),
            CurveName::MpdDensity => match mpd_edges(p.sigma, p.lambda) {
                Ok((lo, hi)) => (lo, hi, false, false),
                Err(_) => (0.0, 0.0, false, false),
            },
        }
    }

    pub fn evaluate(&self, p: &CurveParams, x: f64) -> Result<f64> {
        match *self {
            CurveName::F1 => f1(x),
            CurveName::F2 => f2(x),
            CurveName::F3 => f3(x, p.alpha),
            CurveName::ExactUpper => exact_upper(x, p.alpha),
            CurveName::FlexibleE => flexible_e(x, p.alpha, p.beta),
            CurveName::FShor => f_shor(x),
            CurveName::G1 => g1(x),
            CurveName::G3 => g3(x, p.alpha),
            CurveName::FlexibleGap => flexible_gap(x, p.alpha, p.beta),
            CurveName::GShor => g_shor(x),
            CurveName::Renyi(d) => renyi_flexible(x, p.alpha, d),
            CurveName::MpdDensity => mpd_density(x, p.sigma, p.lambda),
        }
    }
}

impl fmt::Display for CurveName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurveName::F1 => f.write_str("f1"),
            CurveName::F2 => f.write_str("f2"),
            CurveName::F3 => f.write_str("f3"),
            CurveName::ExactUpper => f.write_str("exact_upper"),
            CurveName::FlexibleE => f.write_str("flexible_E"),
            CurveName::FShor => f.write_str("f_shor"),
            CurveName::G1 => f.write_str("g1"),
            CurveName::G3 => f.write_str("g3"),
            CurveName::FlexibleGap => f.write_str("flexible_gap"),
            CurveName::GShor => f.write_str("g_shor"),
            CurveName::Renyi(d) => write!(f, "renyi_d{d}"),
            CurveName::MpdDensity => f.write_str("mpd_density"),
        }
    }
}

impl FromStr for CurveName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CurveName::ALL
            .iter()
            .copied()
            .find(|c| c.to_string() == s)
            .ok_or_else(|| Error::Config(format!("unknown curve {s:?}")))
    }
}

impl TryFrom<String> for CurveName {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<CurveName> for String {
    fn from(c: CurveName) -> String {
        c.to_string()
    }
}

/// Parameters shared by the curve family; unused fields are ignored.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveParams {
    pub alpha: f64,
    pub beta: f64,
    pub sigma: f64,
    /// Ratio α/β of the MPD.
    pub lambda: f64,
}

impl Default for CurveParams {
    fn default() -> Self {
        Self {
            alpha: 2.0,
            beta: 2.0,
            sigma: 1.0,
            lambda: 1.0,
        }
    }
}

impl CurveParams {
    pub fn dims(alpha: f64, beta: f64) -> Self {
        Self {
            alpha,
            beta,
            lambda: alpha / beta,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryCurve {
    pub name: CurveName,
    pub params: CurveParams,
    pub samples: Vec<(f64, f64)>,
    /// Grid points dropped as outside the domain or out of order.
    pub clipped: Vec<f64>,
    /// Samples below this x are extrapolations of the flexible curve.
    pub extrapolated_below: Option<f64>,
}

/// `points` evenly spaced x values inside the curve's domain; open ends are
/// pulled in by 1e-6 of the width.
pub fn default_grid(name: CurveName, params: &CurveParams, points: usize) -> Vec<f64> {
    let (mut lo, mut hi, lo_open, hi_open) = name.domain(params);
    let nudge = 1e-6 * (hi - lo);
    if lo_open {
        lo += nudge;
    }
    if hi_open {
        hi -= nudge;
    }
    match points {
        0 => vec![],
        1 => vec![hi],
        _ => (0..points)
            .map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64)
            .collect(),
    }
}

pub fn sample_curve(name: CurveName, params: &CurveParams, grid: &[f64]) -> Result<BoundaryCurve> {
    let mut samples: Vec<(f64, f64)> = Vec::with_capacity(grid.len());
    let mut clipped = Vec::new();
    let mut first_err = None;
    for &x in grid {
        if samples.last().is_some_and(|&(px, _)| x <= px) {
            clipped.push(x);
            continue;
        }
        match name.evaluate(params, x) {
            Ok(v) if v.is_finite() => samples.push((x, v)),
            Ok(_) => clipped.push(x),
            Err(e) => {
                first_err.get_or_insert(e);
                clipped.push(x);
            }
        }
    }
    if samples.is_empty() {
        if let Some(e) = first_err {
            return Err(e);
        }
    }
    let extrapolated_below = match name {
        CurveName::FlexibleE | CurveName::Renyi(_) | CurveName::FlexibleGap => {
            Some(flexible_edge(params.alpha, params.beta))
        }
        _ => None,
    };
    Ok(BoundaryCurve {
        name,
        params: *params,
        samples,
        clipped,
        extrapolated_below,
    })
}

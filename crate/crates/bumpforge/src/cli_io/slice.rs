//! Tabulated slices of a certificate's evaluators for external plotting.

use num_complex::Complex64 as C64;
use serde::Serialize;
use thiserror::Error;

use crate::pipeline::ZModel;
use crate::sampling::norm;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SliceError {
    #[error("slice reaches |z| = {reach} outside the certified ball of radius {radius}")]
    SliceOutsideBall { reach: f64, radius: f64 },
    #[error("csv: {0}")]
    Csv(String),
}

#[derive(Clone, Debug, PartialEq)]
pub enum SliceSpec {
    /// `z = t d / |d|` for `t` in `(0, t_max]`.
    Ray { direction: [C64; 2], t_max: f64, resolution: usize },
    /// `z = x u + y v` for `(x, y)` in `[-extent, extent]^2`.
    Plane { u: [C64; 2], v: [C64; 2], extent: f64, resolution: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SliceRow {
    pub x: f64,
    pub y: f64,
    pub z1_re: f64,
    pub z1_im: f64,
    pub z2_re: f64,
    pub z2_im: f64,
    pub rho: f64,
    pub g: f64,
    pub gap: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SliceTable {
    pub radius: f64,
    pub rows: Vec<SliceRow>,
}

fn grid(spec: &SliceSpec) -> Vec<(f64, f64, [C64; 2])> {
    match spec {
        SliceSpec::Ray { direction, t_max, resolution } => {
            let n = norm(*direction);
            let d = if n > 0.0 { [direction[0] / n, direction[1] / n] } else { *direction };
            let k = (*resolution).max(1);
            (1..=k)
                .map(|i| {
                    let t = t_max * i as f64 / k as f64;
                    (t, 0.0, [d[0] * t, d[1] * t])
                })
                .collect()
        }
        SliceSpec::Plane { u, v, extent, resolution } => {
            let k = (*resolution).max(2);
            let step = |i: usize| -extent + 2.0 * extent * i as f64 / (k - 1) as f64;
            let mut out = Vec::with_capacity(k * k);
            for i in 0..k {
                for j in 0..k {
                    let (x, y) = (step(i), step(j));
                    out.push((x, y, [u[0] * x + v[0] * y, u[1] * x + v[1] * y]));
                }
            }
            out
        }
    }
}

pub fn export_slice(model: &ZModel, spec: &SliceSpec) -> Result<SliceTable, SliceError> {
    let pts = grid(spec);
    let reach = pts.iter().map(|p| norm(p.2)).fold(0.0, f64::max);
    if !(reach > 0.0) || reach >= model.radius {
        return Err(SliceError::SliceOutsideBall { reach, radius: model.radius });
    }
    let rows = pts
        .into_iter()
        .map(|(x, y, z)| SliceRow {
            x,
            y,
            z1_re: z[0].re,
            z1_im: z[0].im,
            z2_re: z[1].re,
            z2_im: z[1].im,
            rho: model.rho_tilde(z),
            g: model.g(z),
            gap: model.gap(z),
        })
        .collect();
    Ok(SliceTable { radius: model.radius, rows })
}

impl SliceTable {
    pub fn to_csv(&self) -> Result<String, SliceError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.rows {
            w.serialize(r).map_err(|e| SliceError::Csv(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| SliceError::Csv(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| SliceError::Csv(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("slice rows are plain numbers")
    }
}

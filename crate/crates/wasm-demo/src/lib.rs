//! Browser bindings: three interactive operations over quadruple documents,
//! each taking/returning JSON strings so the page needs no framework glue.
//!
//! The inner `*_impl` functions are plain Rust (unit-tested on the host);
//! the `#[wasm_bindgen]` wrappers only translate errors for JavaScript.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use dirac_pe::document::QuadrupleDocument;
use dirac_pe::{continuous, discrete, evolution};

const TOL: f64 = 1e-9;

fn parse_quadruple(json: &str) -> Result<dirac_pe::AdmissibleQuadruple, String> {
    let doc: QuadrupleDocument =
        serde_json::from_str(json).map_err(|e| format!("parsing quadruple JSON: {e}"))?;
    doc.to_quadruple(TOL).map_err(|e| e.to_string())
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct Curve {
    x: Vec<f64>,
    re: Vec<f64>,
    im: Vec<f64>,
    norm: Vec<f64>,
}

/// v(x) on [0, xmax]: the (0,0) entry plus the Frobenius norm per sample.
pub fn potential_curve_impl(json: &str, xmax: f64, steps: usize) -> Result<String, String> {
    let q = parse_quadruple(json)?;
    if steps == 0 || steps > 100_000 {
        return Err("steps must be between 1 and 100000".into());
    }
    let xs: Vec<f64> = (0..=steps).map(|i| xmax * i as f64 / steps as f64).collect();
    let series = continuous::sample_potential(&q, &xs).map_err(|e| e.to_string())?;
    let mut curve = Curve {
        x: xs,
        re: Vec::new(),
        im: Vec::new(),
        norm: Vec::new(),
    };
    for (_, v) in series.iter() {
        let head = if v.nrows() > 0 && v.ncols() > 0 {
            v[(0, 0)]
        } else {
            num_complex::Complex::new(0.0, 0.0)
        };
        curve.re.push(head.re);
        curve.im.push(head.im);
        curve.norm.push(v.norm());
    }
    serde_json::to_string(&curve).map_err(|e| e.to_string())
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct MagnetFrame {
    k: usize,
    /// C_k(t) as rows of [re, im] pairs.
    c: Vec<Vec<[f64; 2]>>,
    involution_residual: f64,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct MagnetReport {
    t: f64,
    m: usize,
    frames: Vec<MagnetFrame>,
}

/// The evolved potential matrices C_0(t) .. C_kmax(t) of the discrete
/// Heisenberg magnet model, with their involution diagnostics.
pub fn magnet_frames_impl(json: &str, t: f64, kmax: usize) -> Result<String, String> {
    let q = parse_quadruple(json)?;
    if kmax > 200 {
        return Err("kmax must be at most 200".into());
    }
    let mut frames = Vec::with_capacity(kmax + 1);
    for k in 0..=kmax {
        let c = evolution::gdhm_c(&q, t, k).map_err(|e| e.to_string())?;
        let report = discrete::involution_check(&c).map_err(|e| e.to_string())?;
        frames.push(MagnetFrame {
            k,
            c: (0..c.nrows())
                .map(|r| (0..c.ncols()).map(|j| [c[(r, j)].re, c[(r, j)].im]).collect())
                .collect(),
            involution_residual: report.involution_residual,
        });
    }
    serde_json::to_string(&MagnetReport {
        t,
        m: q.m(),
        frames,
    })
    .map_err(|e| e.to_string())
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct Surface {
    x: Vec<f64>,
    t: Vec<f64>,
    /// |v(x, t)| (Frobenius norm), row per t value.
    magnitude: Vec<Vec<f64>>,
}

/// |v(x, t)| for the NLS (p = 2) family on a rectangular grid.
pub fn nls_surface_impl(
    json: &str,
    xmin: f64,
    xmax: f64,
    xsteps: usize,
    tmin: f64,
    tmax: f64,
    tsteps: usize,
) -> Result<String, String> {
    let q = parse_quadruple(json)?;
    if xsteps == 0 || tsteps == 0 || (xsteps + 1) * (tsteps + 1) > 250_000 {
        return Err("grid must be non-empty and at most 250000 points".into());
    }
    let xs: Vec<f64> = (0..=xsteps)
        .map(|i| xmin + (xmax - xmin) * i as f64 / xsteps as f64)
        .collect();
    let ts: Vec<f64> = (0..=tsteps)
        .map(|i| tmin + (tmax - tmin) * i as f64 / tsteps as f64)
        .collect();
    let mut magnitude = Vec::with_capacity(ts.len());
    for &t in &ts {
        let mut row = Vec::with_capacity(xs.len());
        for &x in &xs {
            let v = evolution::vxt(&q, x, t, 2).map_err(|e| e.to_string())?;
            row.push(v.norm());
        }
        magnitude.push(row);
    }
    serde_json::to_string(&Surface {
        x: xs,
        t: ts,
        magnitude,
    })
    .map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn potential_curve(json: &str, xmax: f64, steps: usize) -> Result<String, JsValue> {
    potential_curve_impl(json, xmax, steps).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn magnet_frames(json: &str, t: f64, kmax: usize) -> Result<String, JsValue> {
    magnet_frames_impl(json, t, kmax).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn nls_surface(
    json: &str,
    xmin: f64,
    xmax: f64,
    xsteps: usize,
    tmin: f64,
    tmax: f64,
    tsteps: usize,
) -> Result<String, JsValue> {
    nls_surface_impl(json, xmin, xmax, xsteps, tmin, tmax, tsteps)
        .map_err(|e| JsValue::from_str(&e))
}

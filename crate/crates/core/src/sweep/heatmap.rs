//! Grayscale raster images of intensity traces.
//!
//! Pixel value 0 is the bottom of the color range and 255 the top. Site 1
//! and `t = 0` sit at the bottom-left corner, as on a plot.

use std::path::Path;

use crate::dynamics::IntensityTrace;
use crate::error::{Error, Result};

use super::output::write_atomic;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RasterFormat {
    /// Binary portable graymap (`P5`).
    Pgm,
    Png,
}

impl RasterFormat {
    pub fn extension(self) -> &'static str {
        match self {
            RasterFormat::Pgm => "pgm",
            RasterFormat::Png => "png",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColorScale {
    Linear,
    /// Logarithmic; the floor is `max(min, max * 1e-6)`.
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    /// One image row per site, time along the horizontal axis.
    SitesAsRows,
    /// One image row per time sample, sites along the horizontal axis.
    TimeAsRows,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatmapOptions {
    pub format: RasterFormat,
    pub scale: ColorScale,
    pub orientation: Orientation,
    /// Color range `(min, max)`; `None` means `(0, max intensity)`.
    pub range: Option<(f64, f64)>,
}

impl Default for HeatmapOptions {
    fn default() -> Self {
        HeatmapOptions {
            format: RasterFormat::Pgm,
            scale: ColorScale::Linear,
            orientation: Orientation::SitesAsRows,
            range: None,
        }
    }
}

const LOG_DYNAMIC_RANGE: f64 = 1e-6;

fn levels(trace: &IntensityTrace, opts: &HeatmapOptions) -> (f64, f64) {
    let (lo, hi) = opts.range.unwrap_or((0.0, trace.max_intensity()));
    match opts.scale {
        ColorScale::Linear => (lo, hi),
        ColorScale::Log => {
            let floor = lo.max(hi * LOG_DYNAMIC_RANGE);
            (floor.max(f64::MIN_POSITIVE).ln(), hi.max(f64::MIN_POSITIVE).ln())
        }
    }
}

fn quantize(v: f64, lo: f64, hi: f64, scale: ColorScale) -> u8 {
    let v = match scale {
        ColorScale::Linear => v,
        ColorScale::Log => v.max(f64::MIN_POSITIVE).ln(),
    };
    if hi <= lo || hi.is_nan() {
        return if v > lo { 255 } else { 0 };
    }
    let x = ((v - lo) / (hi - lo)).clamp(0.0, 1.0);
    (x * 255.0).round() as u8
}

/// Row-major 8-bit pixels plus `(width, height)`.
pub fn raster(trace: &IntensityTrace, opts: &HeatmapOptions) -> Result<(Vec<u8>, usize, usize)> {
    if trace.is_empty() || trace.n_sites() == 0 {
        return Err(Error::EmptyTrace);
    }
    let (lo, hi) = levels(trace, opts);
    let px = |time: usize, site: usize| quantize(trace.grid[time][site], lo, hi, opts.scale);
    let (n_t, n_s) = (trace.times.len(), trace.n_sites());
    let (w, h) = match opts.orientation {
        Orientation::SitesAsRows => (n_t, n_s),
        Orientation::TimeAsRows => (n_s, n_t),
    };
    let mut data = Vec::with_capacity(w * h);
    for row in 0..h {
        let y = h - 1 - row;
        for x in 0..w {
            data.push(match opts.orientation {
                Orientation::SitesAsRows => px(x, y),
                Orientation::TimeAsRows => px(y, x),
            });
        }
    }
    Ok((data, w, h))
}

/// Encoded image bytes.
pub fn render_heatmap(trace: &IntensityTrace, opts: &HeatmapOptions) -> Result<Vec<u8>> {
    let (data, w, h) = raster(trace, opts)?;
    match opts.format {
        RasterFormat::Pgm => {
            let mut out = format!("P5\n{w} {h}\n255\n").into_bytes();
            out.extend_from_slice(&data);
            Ok(out)
        }
        RasterFormat::Png => {
            let mut out = Vec::new();
            let mut enc = png::Encoder::new(&mut out, w as u32, h as u32);
            enc.set_color(png::ColorType::Grayscale);
            enc.set_depth(png::BitDepth::Eight);
            let encode_err = |e: png::EncodingError| Error::InvalidInput(format!("png encoding: {e}"));
            let mut writer = enc.write_header().map_err(encode_err)?;
            writer.write_image_data(&data).map_err(encode_err)?;
            writer.finish().map_err(encode_err)?;
            Ok(out)
        }
    }
}

/// Renders `trace` and writes it to `path` atomically.
pub fn emit_heatmap(trace: &IntensityTrace, opts: &HeatmapOptions, path: &Path) -> Result<()> {
    write_atomic(path, &render_heatmap(trace, opts)?)
}

/// `(0, largest intensity over all traces)`.
pub fn shared_range<'a>(traces: impl IntoIterator<Item = &'a IntensityTrace>) -> (f64, f64) {
    (0.0, traces.into_iter().map(IntensityTrace::max_intensity).fold(0.0, f64::max))
}

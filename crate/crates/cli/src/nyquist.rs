use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::Result;
use clap::Args;
use num_complex::Complex64;
use serde::Serialize;
use zfcert::lti::{interval_clearance, nyquist_samples, Frequency, FrequencyGrid, RationalTF};
use zfcert::multiplier::SlopeBand;

use crate::config::{DEFAULT_GRID_POINTS, GRID_POINTS_ENV};
use crate::io::{fmt_num, parse_bound, read_json, to_json, write_atomic};
use crate::EXIT_OK;

#[derive(Debug, Clone, Args)]
pub struct NyquistArgs {
    #[arg(long)]
    pub plant: PathBuf,
    #[arg(long, default_value_t = 0.0)]
    pub a: f64,
    #[arg(long, default_value = "inf", value_parser = parse_bound)]
    pub b: f64,
    #[arg(long, env = GRID_POINTS_ENV, default_value_t = DEFAULT_GRID_POINTS)]
    pub grid_points: usize,
    /// SVG path.
    #[arg(long)]
    pub out: PathBuf,
    /// CSV path with columns omega,re,im; defaults to --out with a .csv extension.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NyquistReport {
    pub segment: (Option<f64>, Option<f64>),
    pub clearance: f64,
    pub intersects: bool,
    pub samples: usize,
}

const SIZE: f64 = 640.0;
const PAD: f64 = 48.0;

struct Frame {
    x0: f64,
    y0: f64,
    scale: f64,
}

impl Frame {
    fn fit(points: &[Complex64], seg: (f64, f64)) -> Self {
        let mut lo = Complex64::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Complex64::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        let seg_pts = [seg.0, if seg.1.is_finite() { seg.1 } else { seg.0 }];
        // include the mirrored branch and the origin
        for z in points
            .iter()
            .flat_map(|z| [*z, z.conj()])
            .chain(seg_pts.iter().map(|&x| Complex64::new(x, 0.0)))
            .chain(std::iter::once(Complex64::new(0.0, 0.0)))
        {
            lo.re = lo.re.min(z.re);
            lo.im = lo.im.min(z.im);
            hi.re = hi.re.max(z.re);
            hi.im = hi.im.max(z.im);
        }
        let span = (hi.re - lo.re).max(hi.im - lo.im).max(1e-9);
        let scale = (SIZE - 2.0 * PAD) / span;
        let cx = 0.5 * (lo.re + hi.re);
        let cy = 0.5 * (lo.im + hi.im);
        Frame {
            x0: SIZE / 2.0 - cx * scale,
            y0: SIZE / 2.0 + cy * scale,
            scale,
        }
    }

    fn x(&self, re: f64) -> f64 {
        self.x0 + re * self.scale
    }

    fn y(&self, im: f64) -> f64 {
        self.y0 - im * self.scale
    }

    fn path(&self, pts: impl Iterator<Item = Complex64>) -> String {
        let mut d = String::new();
        for (k, z) in pts.enumerate() {
            let cmd = if k == 0 { 'M' } else { 'L' };
            let _ = write!(d, "{cmd}{:.3} {:.3} ", self.x(z.re), self.y(z.im));
        }
        d.trim_end().to_string()
    }
}

/// Nyquist curve for `ω ≥ 0` (solid) and its mirror (dashed), the segment
/// `[b⁻¹, a⁻¹]` in red (clipped to the frame when `a⁻¹ = ∞`), and the
/// clearance as a caption.
pub fn render_svg(samples: &[Complex64], seg: (f64, f64), clearance: f64) -> String {
    let f = Frame::fit(samples, seg);
    let right_edge = (SIZE - f.x0) / f.scale;
    let seg_hi = if seg.1.is_finite() { seg.1 } else { right_edge.max(seg.0) };
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r##"<line x1="0" y1="{y:.3}" x2="{SIZE}" y2="{y:.3}" stroke="#999" stroke-width="1"/>"##,
        y = f.y(0.0)
    );
    let _ = writeln!(
        s,
        r##"<line x1="{x:.3}" y1="0" x2="{x:.3}" y2="{SIZE}" stroke="#999" stroke-width="1"/>"##,
        x = f.x(0.0)
    );
    let _ = writeln!(
        s,
        r##"<line x1="{:.3}" y1="{y:.3}" x2="{:.3}" y2="{y:.3}" stroke="#c00" stroke-width="4" stroke-linecap="round"/>"##,
        f.x(seg.0),
        f.x(seg_hi),
        y = f.y(0.0)
    );
    if samples.len() == 1 || samples.windows(2).all(|p| p[0] == p[1]) {
        if let Some(z) = samples.first() {
            let _ = writeln!(
                s,
                r##"<circle cx="{:.3}" cy="{:.3}" r="4" fill="#036"/>"##,
                f.x(z.re),
                f.y(z.im)
            );
        }
    } else {
        let _ = writeln!(
            s,
            r##"<path d="{}" fill="none" stroke="#036" stroke-width="1.5"/>"##,
            f.path(samples.iter().copied())
        );
        let _ = writeln!(
            s,
            r##"<path d="{}" fill="none" stroke="#036" stroke-width="1" stroke-dasharray="4 3"/>"##,
            f.path(samples.iter().map(|z| z.conj()))
        );
    }
    let label = if clearance > 0.0 {
        format!("clearance {clearance:.6e}")
    } else {
        "clearance 0: INTERSECTS".to_string()
    };
    let _ = writeln!(
        s,
        r#"<text x="{PAD}" y="{:.0}" font-family="monospace" font-size="14">{label}</text>"#,
        PAD / 2.0 + 6.0
    );
    s.push_str("</svg>\n");
    s
}

pub fn cmd_nyquist(args: &NyquistArgs) -> Result<(i32, NyquistReport)> {
    let plant: RationalTF = read_json(&args.plant, "plant")?;
    let band = SlopeBand::new(args.a, args.b)?;
    if args.grid_points == 0 {
        anyhow::bail!("--grid-points must be at least 1");
    }
    let grid = FrequencyGrid::with_points(args.grid_points);
    let samples = nyquist_samples(&plant, &grid)?;
    let seg = band.forbidden_segment();
    let clearance = interval_clearance(&plant, &grid, seg.0, seg.1)?;

    let mut csv = String::from("omega,re,im\n");
    for (w, z) in grid.points().zip(&samples) {
        let omega = match w {
            Frequency::Finite(x) => fmt_num(x),
            Frequency::Infinity => "inf".into(),
        };
        writeln!(csv, "{omega},{},{}", z.re, z.im)?;
    }
    write_atomic(&args.out, render_svg(&samples, seg, clearance).as_bytes())?;
    let csv_path = args.csv.clone().unwrap_or_else(|| args.out.with_extension("csv"));
    write_atomic(&csv_path, csv.as_bytes())?;

    let report = NyquistReport {
        segment: (Some(seg.0), seg.1.is_finite().then_some(seg.1)),
        clearance,
        intersects: clearance == 0.0,
        samples: samples.len(),
    };
    print!("{}", to_json(&report)?);
    Ok((EXIT_OK, report))
}

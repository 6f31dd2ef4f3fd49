//! File emission: CSV tables, the tongue plot, and the pencil dump.
//!
//! All numeric columns are written with 17 significant digits so a value read
//! back from disk reproduces the in-memory double bit for bit, and every
//! writer is deterministic — same inputs, same bytes — which is what makes
//! repeated runs diffable.

use parares_core::ibsim::ModeAmplitudeSeries;
use parares_core::{ComplexMatrix, FloquetClass, StabilityPoint};
use std::io::{self, Write};
use std::path::Path;

/// Shortest decimal that round-trips an f64: 17 significant digits in
/// scientific notation.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn create(path: &Path) -> io::Result<io::BufWriter<std::fs::File>> {
    Ok(io::BufWriter::new(std::fs::File::create(path)?))
}

/// `points.csv`: one row per stability point, already sorted by
/// (class, p, τ) as the sweep emits them.
pub fn write_points_csv(path: &Path, points: &[StabilityPoint]) -> io::Result<()> {
    let mut out = create(path)?;
    writeln!(out, "class,p,tau,residual,N")?;
    for pt in points {
        writeln!(
            out,
            "{},{},{},{},{}",
            pt.class,
            fmt_f64(pt.p),
            fmt_f64(pt.tau),
            fmt_f64(pt.residual),
            pt.truncation_n
        )?;
    }
    out.flush()
}

/// `modes.csv`: the amplitude record at the first eight wavenumbers.
pub fn write_modes_csv(path: &Path, series: &ModeAmplitudeSeries) -> io::Result<()> {
    let mut out = create(path)?;
    writeln!(
        out,
        "t,a_1,a_2,a_3,a_4,a_5,a_6,a_7,a_8"
    )?;
    for (i, t) in series.times().iter().enumerate() {
        write!(out, "{}", fmt_f64(*t))?;
        let row = series.row(i);
        for a in row.iter().take(8) {
            write!(out, ",{}", fmt_f64(*a))?;
        }
        writeln!(out)?;
    }
    out.flush()
}

/// One fiber snapshot as a plain `x,y` point list.
pub fn write_shape_csv(path: &Path, points: &[[f64; 2]]) -> io::Result<()> {
    let mut out = create(path)?;
    writeln!(out, "x,y")?;
    for p in points {
        writeln!(out, "{},{}", fmt_f64(p[0]), fmt_f64(p[1]))?;
    }
    out.flush()
}

/// Plain-text dump of one side of the pencil, for eyeballing the assembled
/// operator outside the test suite.
pub fn write_pencil_txt(
    path: &Path,
    label: &str,
    a: &ComplexMatrix,
    b: &ComplexMatrix,
) -> io::Result<()> {
    let mut out = create(path)?;
    writeln!(out, "# {label}")?;
    writeln!(out, "# A ({side} x {side}), entries 're im' pairs", side = a.side())?;
    a.write_text(&mut out)?;
    writeln!(out, "# B ({side} x {side}), entries 're im' pairs", side = b.side())?;
    b.write_text(&mut out)?;
    out.flush()
}

const SVG_WIDTH: f64 = 860.0;
const SVG_HEIGHT: f64 = 560.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 30.0;
const MARGIN_TOP: f64 = 30.0;
const MARGIN_BOTTOM: f64 = 50.0;

/// `tongues.svg`: every stability point exactly once — harmonic points as
/// blue circles, subharmonic as red diamonds (distinct shape as well as
/// color) — plus integer-p gridlines and the τ = 1/2 guide that separates
/// physically admissible forcing amplitudes.
pub fn write_tongues_svg(
    path: &Path,
    points: &[StabilityPoint],
    p_min: f64,
    p_max: f64,
    tau_max: f64,
) -> io::Result<()> {
    let plot_w = SVG_WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = SVG_HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    // Degenerate ranges (single-column sweeps, empty sweeps) still get a
    // well-formed frame.
    let span_p = if p_max > p_min { p_max - p_min } else { 1.0 };
    let span_tau = if tau_max > 0.0 { tau_max } else { 1.0 };
    let x = |p: f64| MARGIN_LEFT + (p - p_min) / span_p * plot_w;
    let y = |tau: f64| MARGIN_TOP + plot_h - tau / span_tau * plot_h;

    let mut out = create(path)?;
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_WIDTH}" height="{SVG_HEIGHT}" viewBox="0 0 {SVG_WIDTH} {SVG_HEIGHT}">"#
    )?;
    writeln!(
        out,
        r#"<rect width="{SVG_WIDTH}" height="{SVG_HEIGHT}" fill="white"/>"#
    )?;
    writeln!(
        out,
        r#"<text x="{:.1}" y="18" font-family="sans-serif" font-size="14">stability tongues: harmonic (blue circles), subharmonic (red diamonds)</text>"#,
        MARGIN_LEFT
    )?;

    // Integer-p gridlines with labels.
    let first = p_min.ceil() as i64;
    let last = p_max.floor() as i64;
    for k in first..=last {
        let gx = x(k as f64);
        writeln!(
            out,
            r##"<line x1="{gx:.2}" y1="{MARGIN_TOP}" x2="{gx:.2}" y2="{:.2}" stroke="#cccccc" stroke-width="1"/>"##,
            MARGIN_TOP + plot_h
        )?;
        writeln!(
            out,
            r#"<text x="{gx:.2}" y="{:.2}" font-family="sans-serif" font-size="12" text-anchor="middle">{k}</text>"#,
            MARGIN_TOP + plot_h + 18.0
        )?;
    }

    // τ ticks at quarters of the range.
    for q in 0..=4 {
        let tau = span_tau * q as f64 / 4.0;
        let gy = y(tau);
        writeln!(
            out,
            r##"<line x1="{:.2}" y1="{gy:.2}" x2="{:.2}" y2="{gy:.2}" stroke="#000000" stroke-width="1"/>"##,
            MARGIN_LEFT - 5.0,
            MARGIN_LEFT
        )?;
        writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="12" text-anchor="end">{tau:.2}</text>"#,
            MARGIN_LEFT - 9.0,
            gy + 4.0
        )?;
    }

    // The physical ceiling: fiber stiffness stays positive below τ = 1/2.
    if span_tau >= 0.5 {
        let gy = y(0.5);
        writeln!(
            out,
            r##"<line x1="{MARGIN_LEFT}" y1="{gy:.2}" x2="{:.2}" y2="{gy:.2}" stroke="#555555" stroke-width="1" stroke-dasharray="6 4"/>"##,
            MARGIN_LEFT + plot_w
        )?;
        writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="12">τ = 1/2</text>"#,
            MARGIN_LEFT + plot_w - 52.0,
            gy - 6.0
        )?;
    }

    // Axes frame and labels.
    writeln!(
        out,
        r#"<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{plot_w:.1}" height="{plot_h:.1}" fill="none" stroke="black" stroke-width="1"/>"#
    )?;
    writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="14" text-anchor="middle">p</text>"#,
        MARGIN_LEFT + plot_w / 2.0,
        SVG_HEIGHT - 10.0
    )?;
    writeln!(
        out,
        r#"<text x="18" y="{:.1}" font-family="sans-serif" font-size="14">τ</text>"#,
        MARGIN_TOP + plot_h / 2.0
    )?;

    // One marker per CSV row, same order, class recorded as an attribute so
    // the row count can be audited from the file.
    for pt in points {
        let cx = x(pt.p);
        let cy = y(pt.tau);
        match pt.class {
            FloquetClass::Harmonic => writeln!(
                out,
                r##"<circle class="pt-harmonic" cx="{cx:.2}" cy="{cy:.2}" r="2.5" fill="#1f77b4"/>"##
            )?,
            FloquetClass::Subharmonic => writeln!(
                out,
                r##"<path class="pt-subharmonic" d="M {cx:.2} {:.2} L {:.2} {cy:.2} L {cx:.2} {:.2} L {:.2} {cy:.2} Z" fill="#d62728"/>"##,
                cy - 3.2,
                cx + 3.2,
                cy + 3.2,
                cx - 3.2
            )?,
        }
    }
    writeln!(out, "</svg>")?;
    out.flush()
}

#[cfg(test)]
mod tests {
    use super::*;
    use parares_core::FloquetClass;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn float_format_round_trips_exactly() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xf0a7);
        let mut checked = 0;
        while checked < 2000 {
            let bits: u64 = rng.random();
            let x = f64::from_bits(bits);
            if !x.is_finite() {
                continue;
            }
            let back: f64 = fmt_f64(x).parse().unwrap();
            assert_eq!(back.to_bits(), x.to_bits(), "{x:e} did not round-trip");
            checked += 1;
        }
        // Edge values too.
        for x in [0.0, -0.0, f64::MIN_POSITIVE, f64::MAX, 0.1, 2.0 / 3.0] {
            let back: f64 = fmt_f64(x).parse().unwrap();
            assert_eq!(back.to_bits(), x.to_bits());
        }
    }

    fn sample_points() -> Vec<StabilityPoint> {
        vec![
            StabilityPoint {
                p: 1.8,
                tau: 0.52,
                class: FloquetClass::Harmonic,
                residual: 1e-12,
                truncation_n: 32,
            },
            StabilityPoint {
                p: 2.0,
                tau: 0.4423,
                class: FloquetClass::Harmonic,
                residual: 2e-13,
                truncation_n: 32,
            },
            StabilityPoint {
                p: 2.0,
                tau: 0.087,
                class: FloquetClass::Subharmonic,
                residual: 4e-14,
                truncation_n: 32,
            },
        ]
    }

    #[test]
    fn csv_and_svg_agree_on_the_point_count() {
        let dir = tempfile::tempdir().unwrap();
        let csv = dir.path().join("points.csv");
        let svg = dir.path().join("tongues.svg");
        let points = sample_points();
        write_points_csv(&csv, &points).unwrap();
        write_tongues_svg(&svg, &points, 0.25, 6.0, 1.0).unwrap();

        let csv_text = std::fs::read_to_string(&csv).unwrap();
        let rows: Vec<&str> = csv_text.lines().skip(1).collect();
        assert_eq!(rows.len(), 3);
        assert!(rows[0].starts_with("harmonic,"));
        assert!(rows[2].starts_with("subharmonic,"));

        let svg_text = std::fs::read_to_string(&svg).unwrap();
        assert_eq!(svg_text.matches("pt-harmonic").count(), 2);
        assert_eq!(svg_text.matches("pt-subharmonic").count(), 1);
        assert!(svg_text.contains("τ = 1/2"), "guide line label missing");
    }

    #[test]
    fn empty_sweep_still_writes_well_formed_files() {
        let dir = tempfile::tempdir().unwrap();
        let csv = dir.path().join("points.csv");
        let svg = dir.path().join("tongues.svg");
        write_points_csv(&csv, &[]).unwrap();
        write_tongues_svg(&svg, &[], 5.0, 5.0, 1.0).unwrap();
        let csv_text = std::fs::read_to_string(&csv).unwrap();
        assert_eq!(csv_text, "class,p,tau,residual,N\n");
        let svg_text = std::fs::read_to_string(&svg).unwrap();
        assert!(svg_text.starts_with("<svg"));
        assert!(svg_text.trim_end().ends_with("</svg>"));
        assert_eq!(svg_text.matches("pt-").count(), 0);
    }

    #[test]
    fn csv_columns_parse_back_to_the_same_values() {
        let dir = tempfile::tempdir().unwrap();
        let csv = dir.path().join("points.csv");
        let points = sample_points();
        write_points_csv(&csv, &points).unwrap();
        let text = std::fs::read_to_string(&csv).unwrap();
        for (line, pt) in text.lines().skip(1).zip(&points) {
            let cols: Vec<&str> = line.split(',').collect();
            assert_eq!(cols.len(), 5);
            assert_eq!(cols[0], pt.class.to_string());
            assert_eq!(cols[1].parse::<f64>().unwrap(), pt.p);
            assert_eq!(cols[2].parse::<f64>().unwrap(), pt.tau);
            assert_eq!(cols[3].parse::<f64>().unwrap(), pt.residual);
            assert_eq!(cols[4].parse::<usize>().unwrap(), pt.truncation_n);
        }
    }
}

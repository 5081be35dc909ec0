//! Line-oriented file formats, SVG output and the command-line front end.
//!
//! Graph files:
//!
//! ```text
//! vertices 4
//! labels a b c d
//! outer 0 2 1
//! face 0 1 3
//! face 1 2 3
//! face 2 0 3
//! ```
//!
//! Area files hold one `index value` line per inner face, values exact
//! (`3`, `1/2`). Drawing files hold `vertex i x y` lines followed by the
//! report summary. `#` starts a comment everywhere. All areas are
//! determinant areas, twice the geometric area.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::exactmath::{to_f64, Rational};
use crate::generators::{FamilySpec, GeneratorError};
use crate::realizer::{realize, verify, Drawing, Orientation, RealizationReport, RealizeError};
use crate::symbolic::{analyze_with, AnalysisReport, AnalyzeOptions, AreaAssignment, Point, SymbolicError, Verdict};
use crate::triangulation::{is_eulerian, PlaneTriangulation, Triple, ValidationError};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid triangulation: {0}")]
    Invalid(#[from] ValidationError),
    #[error(transparent)]
    Generator(#[from] GeneratorError),
    #[error(transparent)]
    Symbolic(#[from] SymbolicError),
    #[error(transparent)]
    Realize(#[from] RealizeError),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    fn parse(line: usize, message: impl Into<String>) -> Self {
        CliError::Parse {
            line,
            message: message.into(),
        }
    }

    /// Process exit status for this failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Realize(RealizeError::NoPOrder { .. }) => Verdict::NoPOrder.exit_code(),
            _ => EXIT_FAILURE,
        }
    }
}

pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 64;

/// Non-empty lines with comments stripped, numbered from 1.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("");
        let words: Vec<&str> = l.split_whitespace().collect();
        (!words.is_empty()).then_some((i + 1, words))
    })
}

fn parse_usize(line: usize, s: &str) -> Result<usize, CliError> {
    s.parse().map_err(|_| CliError::parse(line, format!("expected a nonnegative integer, got '{s}'")))
}

fn parse_rational(line: usize, s: &str) -> Result<Rational, CliError> {
    Rational::from_str(s).map_err(|_| CliError::parse(line, format!("expected an exact rational p/q, got '{s}'")))
}

fn parse_triple(line: usize, words: &[&str]) -> Result<Triple, CliError> {
    if words.len() != 3 {
        return Err(CliError::parse(line, "expected three vertex ids"));
    }
    Ok([
        parse_usize(line, words[0])?,
        parse_usize(line, words[1])?,
        parse_usize(line, words[2])?,
    ])
}

pub fn parse_graph(text: &str) -> Result<PlaneTriangulation, CliError> {
    let mut n = None;
    let mut labels = None;
    let mut outer = None;
    let mut faces = Vec::new();
    for (line, w) in content_lines(text) {
        match w[0] {
            "vertices" if w.len() == 2 && n.is_none() => n = Some(parse_usize(line, w[1])?),
            "labels" if labels.is_none() => labels = Some(w[1..].iter().map(|s| s.to_string()).collect::<Vec<_>>()),
            "outer" if outer.is_none() => outer = Some(parse_triple(line, &w[1..])?),
            "face" => faces.push(parse_triple(line, &w[1..])?),
            k => return Err(CliError::parse(line, format!("unexpected or repeated record '{k}'"))),
        }
    }
    let n = n.ok_or_else(|| CliError::parse(0, "missing 'vertices' line"))?;
    let outer = outer.ok_or_else(|| CliError::parse(0, "missing 'outer' line"))?;
    let t = PlaneTriangulation::new(n, faces, outer)?;
    match labels {
        Some(l) if l.len() != n => Err(CliError::parse(0, format!("{} labels for {n} vertices", l.len()))),
        Some(l) => Ok(t.with_labels(l)),
        None => Ok(t),
    }
}

pub fn format_graph(t: &PlaneTriangulation) -> String {
    let mut s = format!("vertices {}\n", t.vertex_count());
    if let Some(l) = t.labels() {
        writeln!(s, "labels {}", l.join(" ")).unwrap();
    }
    let [a, b, c] = t.outer_face();
    writeln!(s, "outer {a} {b} {c}").unwrap();
    for [a, b, c] in t.inner_faces() {
        writeln!(s, "face {a} {b} {c}").unwrap();
    }
    s
}

/// Area values by face index; every index from 0 must appear exactly once.
pub fn parse_areas(text: &str) -> Result<Vec<Rational>, CliError> {
    let mut values: Vec<Option<Rational>> = Vec::new();
    for (line, w) in content_lines(text) {
        if w.len() != 2 {
            return Err(CliError::parse(line, "expected '<face index> <area>'"));
        }
        let i = parse_usize(line, w[0])?;
        let v = parse_rational(line, w[1])?;
        if v.is_negative() {
            return Err(CliError::parse(line, "areas must be nonnegative"));
        }
        if values.len() <= i {
            values.resize(i + 1, None);
        }
        if values[i].replace(v).is_some() {
            return Err(CliError::parse(line, format!("face {i} listed twice")));
        }
    }
    values
        .into_iter()
        .enumerate()
        .map(|(i, v)| v.ok_or_else(|| CliError::parse(0, format!("no area for face {i}"))))
        .collect()
}

pub fn format_areas(values: &[Rational]) -> String {
    values.iter().enumerate().map(|(i, v)| format!("{i} {v}\n")).collect()
}

/// The summary lines stored after the coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DrawingSummary {
    pub residual_faces: Vec<usize>,
    pub max_relative_residual: Rational,
    pub sum_identity: bool,
    pub orientations_ok: bool,
    pub x4: Option<Rational>,
    pub perturbed: bool,
}

impl From<&RealizationReport> for DrawingSummary {
    fn from(r: &RealizationReport) -> Self {
        DrawingSummary {
            residual_faces: r.residual_faces(),
            max_relative_residual: r.max_relative_residual.clone(),
            sum_identity: r.sum_identity,
            orientations_ok: r.orientations_ok(),
            x4: r.x4().cloned(),
            perturbed: r.perturbed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DrawingFile {
    pub drawing: Drawing,
    pub summary: Option<DrawingSummary>,
}

fn parse_bool(line: usize, s: &str) -> Result<bool, CliError> {
    match s {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(CliError::parse(line, format!("expected true or false, got '{s}'"))),
    }
}

impl DrawingFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut n = None;
        let mut points: Vec<Option<Point>> = Vec::new();
        let mut residual_faces = None;
        let mut max_rel = None;
        let mut sum_identity = None;
        let mut orientations_ok = None;
        let mut x4 = None;
        let mut perturbed = None;
        for (line, w) in content_lines(text) {
            let one = || -> Result<&str, CliError> {
                match w.len() {
                    2 => Ok(w[1]),
                    _ => Err(CliError::parse(line, format!("'{}' takes one value", w[0]))),
                }
            };
            match w[0] {
                "vertices" if n.is_none() => {
                    let k = parse_usize(line, one()?)?;
                    n = Some(k);
                    points = vec![None; k];
                }
                "vertex" => {
                    let Some(k) = n else {
                        return Err(CliError::parse(line, "'vertex' before 'vertices'"));
                    };
                    if w.len() != 4 {
                        return Err(CliError::parse(line, "expected 'vertex <id> <x> <y>'"));
                    }
                    let i = parse_usize(line, w[1])?;
                    if i >= k {
                        return Err(CliError::parse(line, format!("vertex {i} out of range")));
                    }
                    let p = Point::new(parse_rational(line, w[2])?, parse_rational(line, w[3])?);
                    if points[i].replace(p).is_some() {
                        return Err(CliError::parse(line, format!("vertex {i} listed twice")));
                    }
                }
                "residual_faces" if residual_faces.is_none() => {
                    residual_faces = Some(w[1..].iter().map(|s| parse_usize(line, s)).collect::<Result<Vec<_>, _>>()?)
                }
                "max_relative_residual" if max_rel.is_none() => max_rel = Some(parse_rational(line, one()?)?),
                "sum_identity" if sum_identity.is_none() => sum_identity = Some(parse_bool(line, one()?)?),
                "orientations_ok" if orientations_ok.is_none() => orientations_ok = Some(parse_bool(line, one()?)?),
                "x4" if x4.is_none() => x4 = Some(parse_rational(line, one()?)?),
                "perturbed" if perturbed.is_none() => perturbed = Some(parse_bool(line, one()?)?),
                k => return Err(CliError::parse(line, format!("unexpected or repeated record '{k}'"))),
            }
        }
        n.ok_or_else(|| CliError::parse(0, "missing 'vertices' line"))?;
        let points = points
            .into_iter()
            .enumerate()
            .map(|(i, p)| p.ok_or_else(|| CliError::parse(0, format!("no coordinates for vertex {i}"))))
            .collect::<Result<Vec<_>, _>>()?;
        let summary = match (residual_faces, max_rel, sum_identity, orientations_ok) {
            (Some(residual_faces), Some(max_relative_residual), Some(sum_identity), Some(orientations_ok)) => {
                Some(DrawingSummary {
                    residual_faces,
                    max_relative_residual,
                    sum_identity,
                    orientations_ok,
                    x4,
                    perturbed: perturbed.unwrap_or(false),
                })
            }
            (None, None, None, None) if x4.is_none() && perturbed.is_none() => None,
            _ => return Err(CliError::parse(0, "incomplete summary")),
        };
        Ok(DrawingFile {
            drawing: Drawing::new(points),
            summary,
        })
    }

    pub fn format(&self) -> String {
        let mut s = format!("vertices {}\n", self.drawing.points.len());
        for (i, p) in self.drawing.points.iter().enumerate() {
            writeln!(s, "vertex {i} {} {}", p.x, p.y).unwrap();
        }
        if let Some(m) = &self.summary {
            let faces: Vec<String> = m.residual_faces.iter().map(|f| f.to_string()).collect();
            writeln!(s, "{}", ["residual_faces".to_string(), faces.join(" ")].join(" ").trim_end()).unwrap();
            writeln!(s, "max_relative_residual {}", m.max_relative_residual).unwrap();
            writeln!(s, "sum_identity {}", m.sum_identity).unwrap();
            writeln!(s, "orientations_ok {}", m.orientations_ok).unwrap();
            if let Some(x) = &m.x4 {
                writeln!(s, "x4 {x}").unwrap();
            }
            writeln!(s, "perturbed {}", m.perturbed).unwrap();
        }
        s
    }
}

/// Exact value of a decimal such as `1e-9`, `0.25` or `3/4`.
pub fn parse_exact(s: &str) -> Option<Rational> {
    if let Ok(r) = Rational::from_str(s) {
        return Some(r);
    }
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (int, frac) = mant.split_once('.').unwrap_or((mant, ""));
    if int.is_empty() && frac.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = BigInt::from_str(&format!("0{int}{frac}")).ok()?;
    let shift = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    let scale = ten.pow(shift.unsigned_abs());
    let mut r = if shift >= 0 {
        Rational::from_integer(digits * scale)
    } else {
        Rational::new(digits, scale)
    };
    if neg {
        r = -r;
    }
    Some(r)
}

const GREEN: &str = "#9bd49b";
const AMBER: &str = "#f3c969";
const RED: &str = "#e07070";
const GREY: &str = "#d8d8d8";

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// SVG of a drawing. With areas, faces are green when exact, amber within
/// `tol`, red otherwise, and labeled `target / achieved` in geometric area.
pub fn render_svg(t: &PlaneTriangulation, d: &Drawing, areas: Option<&AreaAssignment>, tol: &Rational) -> String {
    let pts: Vec<(f64, f64)> = d.points.iter().map(|p| (to_f64(&p.x), to_f64(&p.y))).collect();
    let fold = |f: fn(f64, f64) -> f64, init: f64, k: usize| {
        pts.iter().map(|p| if k == 0 { p.0 } else { p.1 }).fold(init, f)
    };
    let (x0, x1) = (fold(f64::min, f64::INFINITY, 0), fold(f64::max, f64::NEG_INFINITY, 0));
    let (y0, y1) = (fold(f64::min, f64::INFINITY, 1), fold(f64::max, f64::NEG_INFINITY, 1));
    let span = (x1 - x0).max(y1 - y0).max(f64::MIN_POSITIVE);
    let margin = 0.05 * span;
    let (w, h) = (x1 - x0 + 2.0 * margin, y1 - y0 + 2.0 * margin);
    // y grows downwards in SVG
    let sx = |x: f64| x - x0 + margin;
    let sy = |y: f64| y1 - y + margin;
    let stroke = span / 400.0;
    let font = span / 40.0;

    let report = areas.map(|a| verify(t, a, d, tol));
    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {w:.12} {h:.12}" width="800" height="{:.0}">"#,
        800.0 * h / w
    )
    .unwrap();
    for (i, f) in t.inner_faces().iter().enumerate() {
        let (fill, label) = match &report {
            Some(r) => {
                let fr = &r.faces[i];
                let fill = if fr.orientation == Orientation::Reversed || fr.relative > *tol {
                    RED
                } else if fr.residual.is_zero() {
                    GREEN
                } else {
                    AMBER
                };
                (fill, format!("{:.4}/{:.4}", to_f64(&fr.target) / 2.0, to_f64(&fr.achieved) / 2.0))
            }
            None => (GREY, format!("{:.4}", to_f64(&d.face_det(*f)) / 2.0)),
        };
        let poly: Vec<String> = f.iter().map(|&v| format!("{:.12},{:.12}", sx(pts[v].0), sy(pts[v].1))).collect();
        writeln!(
            s,
            r#"  <polygon points="{}" fill="{fill}" stroke="black" stroke-width="{stroke:.12}"/>"#,
            poly.join(" ")
        )
        .unwrap();
        let cx = f.iter().map(|&v| sx(pts[v].0)).sum::<f64>() / 3.0;
        let cy = f.iter().map(|&v| sy(pts[v].1)).sum::<f64>() / 3.0;
        writeln!(
            s,
            r#"  <text x="{cx:.12}" y="{cy:.12}" font-size="{:.12}" text-anchor="middle">{label}</text>"#,
            font * 0.6
        )
        .unwrap();
    }
    for (v, p) in pts.iter().enumerate() {
        writeln!(
            s,
            r#"  <circle cx="{:.12}" cy="{:.12}" r="{:.12}" fill="black"/>"#,
            sx(p.0),
            sy(p.1),
            stroke * 2.5
        )
        .unwrap();
        writeln!(
            s,
            r##"  <text x="{:.12}" y="{:.12}" font-size="{font:.12}" fill="#1c3f8a">{}</text>"##,
            sx(p.0) + stroke * 3.0,
            sy(p.1) - stroke * 3.0,
            xml_escape(&t.label(v))
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    s
}

#[derive(Debug, Parser)]
#[command(name = "triarea", version, about = "Area-universality of plane triangulations and prescribed-area drawings")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a generated triangulation: k4 | octahedron | accordion L | double-stacking L K | stacked N [SEED]
    Generate {
        #[arg(required = true, num_args = 1..)]
        family: Vec<String>,
        /// Output graph file (stdout when absent)
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Decide area-universality by the last-face degree criterion
    Analyze {
        graph: PathBuf,
        #[arg(long, default_value_t = 3)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Draw a triangulation with prescribed face areas
    Realize {
        graph: PathBuf,
        areas: PathBuf,
        /// Output drawing file (stdout when absent)
        #[arg(short, long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        common: DrawOpts,
    },
    /// Check a drawing against the prescribed areas
    Verify {
        graph: PathBuf,
        areas: PathBuf,
        drawing: PathBuf,
        #[command(flatten)]
        common: DrawOpts,
    },
    /// SVG of an existing drawing
    Render {
        graph: PathBuf,
        drawing: PathBuf,
        /// Color and label faces against these areas
        #[arg(long)]
        areas: Option<PathBuf>,
        #[arg(long, default_value = "1e-9")]
        tol: String,
        #[arg(long)]
        svg: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct DrawOpts {
    /// Relative tolerance on the two residual faces
    #[arg(long, default_value = "1e-9")]
    pub tol: String,
    #[arg(long)]
    pub svg: Option<PathBuf>,
    #[arg(long)]
    pub json: bool,
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn in_file<T>(path: &Path, r: Result<T, CliError>) -> Result<T, CliError> {
    r.map_err(|e| match e {
        CliError::Parse { line, message } => CliError::Parse {
            line,
            message: format!("{}: {message}", path.display()),
        },
        e => e,
    })
}

pub fn load_graph(path: &Path) -> Result<PlaneTriangulation, CliError> {
    in_file(path, parse_graph(&read(path)?))
}

pub fn load_areas(path: &Path, t: &PlaneTriangulation) -> Result<AreaAssignment, CliError> {
    let values = in_file(path, parse_areas(&read(path)?))?;
    if values.len() != t.inner_faces().len() {
        return Err(CliError::Usage(format!(
            "{} lists {} areas but the graph has {} inner faces",
            path.display(),
            values.len(),
            t.inner_faces().len()
        )));
    }
    Ok(AreaAssignment::new(values)?)
}

pub fn load_drawing(path: &Path, t: &PlaneTriangulation) -> Result<Drawing, CliError> {
    let f = in_file(path, DrawingFile::parse(&read(path)?))?;
    if f.drawing.points.len() != t.vertex_count() {
        return Err(CliError::Usage(format!(
            "{} has {} vertices but the graph has {}",
            path.display(),
            f.drawing.points.len(),
            t.vertex_count()
        )));
    }
    Ok(f.drawing)
}

fn tolerance(s: &str) -> Result<Rational, CliError> {
    match parse_exact(s) {
        Some(t) if t.is_positive() => Ok(t),
        _ => Err(CliError::Usage(format!("--tol must be a positive number, got '{s}'"))),
    }
}

fn json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("reports serialize")
}

fn porder_line(t: &PlaneTriangulation, r: &AnalysisReport) -> Option<String> {
    let p = r.porder.as_ref()?;
    let names: Vec<String> = p.order.iter().map(|&v| t.label(v)).collect();
    let f = |id| {
        let [a, b, c] = t.face(id);
        format!("{}{}{}", t.label(a), t.label(b), t.label(c))
    };
    Some(format!(
        "p-order: {}\ne_P: {} {}\nf_a: {}  f_b: {}",
        names.join(" "),
        t.label(p.e_p.0),
        t.label(p.e_p.1),
        f(p.f_a),
        f(p.f_b)
    ))
}

pub fn cmd_generate(family: &[String], out: Option<&Path>, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let spec = FamilySpec::from_args(family).map_err(|e| CliError::Usage(e.to_string()))?;
    let t = spec.build()?;
    let text = format_graph(&t);
    let info = format!(
        "{spec}: {} vertices, {} inner faces, eulerian {}",
        t.vertex_count(),
        t.inner_faces().len(),
        is_eulerian(&t)
    );
    match out {
        Some(p) => {
            write_file(p, &text)?;
            writeln!(stdout, "{info}").ok();
        }
        None => {
            write!(stdout, "# {info}\n{text}").ok();
        }
    }
    Ok(0)
}

pub fn cmd_analyze(graph: &Path, opts: &AnalyzeOptions, as_json: bool, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let t = load_graph(graph)?;
    let r = analyze_with(&t, opts)?;
    if as_json {
        writeln!(stdout, "{}", json(&r)).ok();
    } else {
        writeln!(stdout, "vertices: {}", r.vertex_count).ok();
        writeln!(stdout, "verdict: {}", r.summary()).ok();
        if let Some(l) = porder_line(&t, &r) {
            writeln!(stdout, "{l}").ok();
        }
        for (i, leaf) in r.leaves.iter().enumerate() {
            writeln!(stdout, "piece {i} ({} vertices): {}", leaf.vertex_count, leaf.summary()).ok();
        }
    }
    Ok(r.verdict.exit_code())
}

fn report_text(t: &PlaneTriangulation, r: &RealizationReport) -> String {
    let mut s = String::new();
    for f in &r.faces {
        let [a, b, c] = t.inner_faces()[f.face];
        writeln!(
            s,
            "face {} ({} {} {}): target {} achieved {} relative residual {:.3e} {:?}",
            f.face,
            t.label(a),
            t.label(b),
            t.label(c),
            f.target,
            f.achieved,
            to_f64(&f.relative),
            f.orientation
        )
        .unwrap();
    }
    writeln!(s, "outer: det {} {:?}", r.outer_det, r.outer_orientation).unwrap();
    writeln!(s, "sum identity: {}", if r.sum_identity { "exact" } else { "VIOLATED" }).unwrap();
    let faces: Vec<String> = r.residual_faces().iter().map(|f| f.to_string()).collect();
    writeln!(
        s,
        "residual faces: [{}]  max relative residual {:.3e} (tol {:.3e})",
        faces.join(", "),
        to_f64(&r.max_relative_residual),
        to_f64(&r.tol)
    )
    .unwrap();
    s
}

pub fn cmd_realize(
    graph: &Path,
    areas: &Path,
    out: Option<&Path>,
    opts: &DrawOpts,
    stdout: &mut dyn Write,
) -> Result<i32, CliError> {
    let tol = tolerance(&opts.tol)?;
    let t = load_graph(graph)?;
    let a = load_areas(areas, &t)?;
    let (d, r) = realize(&t, &a, &tol)?;
    let file = DrawingFile {
        drawing: d,
        summary: Some(DrawingSummary::from(&r)),
    };
    if let Some(svg) = &opts.svg {
        write_file(svg, &render_svg(&t, &file.drawing, Some(&a), &tol))?;
    }
    match out {
        Some(p) => write_file(p, &file.format())?,
        None if !opts.json => {
            write!(stdout, "{}", file.format()).ok();
        }
        None => {}
    }
    if opts.json {
        let v = serde_json::json!({ "points": file.drawing.points, "report": r });
        writeln!(stdout, "{}", json(&v)).ok();
    } else if out.is_some() {
        write!(stdout, "{}", report_text(&t, &r)).ok();
    }
    Ok(if r.ok() { 0 } else { EXIT_FAILURE })
}

pub fn cmd_verify(
    graph: &Path,
    areas: &Path,
    drawing: &Path,
    opts: &DrawOpts,
    stdout: &mut dyn Write,
) -> Result<i32, CliError> {
    let tol = tolerance(&opts.tol)?;
    let t = load_graph(graph)?;
    let a = load_areas(areas, &t)?;
    let d = load_drawing(drawing, &t)?;
    let r = verify(&t, &a, &d, &tol);
    if let Some(svg) = &opts.svg {
        write_file(svg, &render_svg(&t, &d, Some(&a), &tol))?;
    }
    let ok = r.within_tol() && r.orientations_ok();
    if opts.json {
        writeln!(stdout, "{}", json(&r)).ok();
    } else {
        write!(stdout, "{}", report_text(&t, &r)).ok();
        writeln!(stdout, "{}", if ok { "OK" } else { "FAILED" }).ok();
    }
    Ok(if ok { 0 } else { EXIT_FAILURE })
}

pub fn cmd_render(
    graph: &Path,
    drawing: &Path,
    areas: Option<&Path>,
    tol: &str,
    svg: &Path,
) -> Result<i32, CliError> {
    let tol = tolerance(tol)?;
    let t = load_graph(graph)?;
    let d = load_drawing(drawing, &t)?;
    let a = areas.map(|p| load_areas(p, &t)).transpose()?;
    write_file(svg, &render_svg(&t, &d, a.as_ref(), &tol))?;
    Ok(0)
}

pub fn dispatch(cmd: &Command, stdout: &mut dyn Write) -> Result<i32, CliError> {
    match cmd {
        Command::Generate { family, out } => cmd_generate(family, out.as_deref(), stdout),
        Command::Analyze {
            graph,
            samples,
            seed,
            json,
        } => {
            if *samples == 0 {
                return Err(CliError::Usage("--samples must be at least 1".into()));
            }
            let opts = AnalyzeOptions {
                samples: *samples,
                seed: *seed,
            };
            cmd_analyze(graph, &opts, *json, stdout)
        }
        Command::Realize {
            graph,
            areas,
            out,
            common,
        } => cmd_realize(graph, areas, out.as_deref(), common, stdout),
        Command::Verify {
            graph,
            areas,
            drawing,
            common,
        } => cmd_verify(graph, areas, drawing, common, stdout),
        Command::Render {
            graph,
            drawing,
            areas,
            tol,
            svg,
        } => cmd_render(graph, drawing, areas.as_deref(), tol, svg),
    }
}

/// Parses arguments, runs one command and returns the exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let text = e.render().to_string();
            if e.use_stderr() {
                write!(stderr, "{text}").ok();
            } else {
                write!(stdout, "{text}").ok();
            }
            return code;
        }
    };
    match dispatch(&cli.command, stdout) {
        Ok(code) => code,
        Err(e) => {
            writeln!(stderr, "error: {e}").ok();
            if let CliError::Usage(_) = e {
                writeln!(stderr, "run 'triarea --help' for usage").ok();
            }
            e.exit_code()
        }
    }
}

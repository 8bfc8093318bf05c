//! Plain-text serialization: graph manifolds (key-value header plus
//! optional row-major height block), finite metric spaces (labels plus
//! upper-triangular matrix), glued-space exports, and deterministic CSV and
//! record output with fixed 12-significant-digit floats.

use crate::error::{Error, Result};
use crate::grid::GraphDomain;
use crate::hypersurface::{ClassParams, GraphManifold};
use crate::metricspace::{FiniteMetricSpace, GluedSpace};
use crate::profile::{MassRamp, Profile, ProfileTerm, RadialKind};
use num_rational::Rational64;
use std::fmt::Write as _;
use std::str::FromStr;

/// Fixed 12-significant-digit float formatting for CSV and records:
/// byte-stable output.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.11e}")
}

/// Shortest round-trip float formatting for data files (parses back to the
/// identical bits).
pub fn fmt_exact(x: f64) -> String {
    format!("{x}")
}

fn parse_f64(s: &str) -> Result<f64> {
    s.parse::<f64>()
        .map_err(|_| Error::Parse(format!("bad float: {s}")))
}

// ---------------------------------------------------------------------------
// graph manifolds

fn profile_term_to_string(term: &ProfileTerm) -> String {
    match term {
        ProfileTerm::Radial { center, kind } => {
            let mut s = match kind {
                RadialKind::Schwarzschild { n, mass } => {
                    format!("schwarzschild n={n} mass={mass}")
                }
                RadialKind::Cone { slope } => format!("cone slope={slope}"),
                RadialKind::Hemisphere => "hemisphere".to_string(),
                RadialKind::Paraboloid { curvature } => {
                    format!("paraboloid curvature={curvature}")
                }
                RadialKind::Bump { amplitude, width } => {
                    format!("bump amplitude={amplitude} width={width}")
                }
                RadialKind::Ridge {
                    amplitude,
                    center_radius,
                    width,
                } => format!(
                    "ridge amplitude={amplitude} center_radius={center_radius} width={width}"
                ),
                RadialKind::MassRamp(r) => {
                    format!(
                        "massramp n={} m0={} m1={} a={} b={}",
                        r.n, r.m0, r.m1, r.a, r.b
                    )
                }
            };
            if center.iter().any(|c| *c != 0.0) {
                let _ = write!(
                    s,
                    " center={},{},{},{}",
                    center[0], center[1], center[2], center[3]
                );
            }
            s
        }
        ProfileTerm::SinProduct {
            amplitude,
            frequency,
        } => format!("sinproduct amplitude={amplitude} frequency={frequency}"),
        ProfileTerm::Linear { coeffs } => format!(
            "linear coeffs={},{},{},{}",
            coeffs[0], coeffs[1], coeffs[2], coeffs[3]
        ),
    }
}

fn parse_kv_args(parts: &[&str]) -> Result<std::collections::BTreeMap<String, String>> {
    let mut map = std::collections::BTreeMap::new();
    for p in parts {
        let (k, v) = p
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("expected key=value, got {p}")))?;
        map.insert(k.to_string(), v.to_string());
    }
    Ok(map)
}

fn parse_vec4(s: &str) -> Result<[f64; 4]> {
    let vals: Vec<f64> = s.split(',').map(parse_f64).collect::<Result<Vec<f64>>>()?;
    if vals.len() != 4 {
        return Err(Error::Parse(format!("expected 4 components: {s}")));
    }
    Ok([vals[0], vals[1], vals[2], vals[3]])
}

fn profile_term_from_string(s: &str) -> Result<ProfileTerm> {
    let mut parts: Vec<&str> = s.split_whitespace().collect();
    if parts.is_empty() {
        return Err(Error::Parse("empty profile term".into()));
    }
    let head = parts.remove(0);
    let args = parse_kv_args(&parts)?;
    let get = |k: &str| -> Result<f64> {
        args.get(k)
            .ok_or_else(|| Error::Parse(format!("profile term {head} misses {k}")))
            .and_then(|v| parse_f64(v))
    };
    let center = match args.get("center") {
        Some(c) => parse_vec4(c)?,
        None => [0.0; 4],
    };
    let radial = |kind: RadialKind| ProfileTerm::Radial { center, kind };
    Ok(match head {
        "schwarzschild" => radial(RadialKind::Schwarzschild {
            n: get("n")? as usize,
            mass: get("mass")?,
        }),
        "cone" => radial(RadialKind::Cone {
            slope: get("slope")?,
        }),
        "hemisphere" => radial(RadialKind::Hemisphere),
        "paraboloid" => radial(RadialKind::Paraboloid {
            curvature: get("curvature")?,
        }),
        "bump" => radial(RadialKind::Bump {
            amplitude: get("amplitude")?,
            width: get("width")?,
        }),
        "ridge" => radial(RadialKind::Ridge {
            amplitude: get("amplitude")?,
            center_radius: get("center_radius")?,
            width: get("width")?,
        }),
        "massramp" => radial(RadialKind::MassRamp(MassRamp::new(
            get("n")? as usize,
            get("m0")?,
            get("m1")?,
            get("a")?,
            get("b")?,
        )?)),
        "sinproduct" => ProfileTerm::SinProduct {
            amplitude: get("amplitude")?,
            frequency: get("frequency")?,
        },
        "linear" => ProfileTerm::Linear {
            coeffs: parse_vec4(
                args.get("coeffs")
                    .ok_or_else(|| Error::Parse("linear term misses coeffs".into()))?,
            )?,
        },
        other => return Err(Error::Parse(format!("unknown profile term: {other}"))),
    })
}

/// Serialize a manifold.  When it carries an analytic profile the heights
/// are omitted (they are reproducible from the profile); otherwise the full
/// row-major height block follows the header (last axis fastest).
pub fn manifold_to_string(g: &GraphManifold) -> String {
    let mut out = String::new();
    out.push_str("graphmanifold v1\n");
    let _ = writeln!(out, "n = {}", g.domain.dimension());
    let _ = writeln!(out, "spacing = {}", fmt_exact(g.domain.spacing()));
    let _ = writeln!(out, "half_extent = {}", g.domain.half_extent());
    if let Some(rho) = g.domain.hole_radius() {
        let _ = writeln!(out, "hole_radius = {}", fmt_exact(rho));
    }
    let _ = writeln!(out, "r0 = {}", fmt_exact(g.class.r0));
    let _ = writeln!(out, "gamma = {}", fmt_exact(g.class.gamma));
    let _ = writeln!(out, "depth_bound = {}", fmt_exact(g.class.depth_bound));
    let _ = writeln!(out, "alpha = {}", fmt_exact(g.class.alpha));
    let _ = writeln!(out, "lambda = {}", fmt_exact(g.class.asymptotic_offset));
    match &g.profile {
        Some(p) => {
            let _ = writeln!(out, "profile.offset = {}", fmt_exact(p.offset));
            for t in &p.terms {
                let _ = writeln!(out, "profile.term = {}", profile_term_to_string(t));
            }
            out.push_str("heights = none\n");
        }
        None => {
            out.push_str("heights = inline\n");
            for (k, v) in g.f.iter().enumerate() {
                out.push_str(&fmt_exact(*v));
                if (k + 1) % 8 == 0 {
                    out.push('\n');
                } else {
                    out.push(' ');
                }
            }
            if g.f.len() % 8 != 0 {
                out.push('\n');
            }
        }
    }
    out
}

pub fn manifold_from_string(text: &str) -> Result<GraphManifold> {
    let mut lines = text.lines();
    match lines.next() {
        Some("graphmanifold v1") => {}
        other => {
            return Err(Error::Parse(format!(
                "expected 'graphmanifold v1' header, got {other:?}"
            )))
        }
    }
    let mut n = None;
    let mut spacing = None;
    let mut half_extent: Option<i64> = None;
    let mut hole_radius = None;
    let mut class = ClassParams::default();
    let mut profile_offset = 0.0;
    let mut terms: Vec<ProfileTerm> = Vec::new();
    let mut heights_mode: Option<String> = None;
    let mut height_values: Vec<f64> = Vec::new();
    for line in lines {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if heights_mode.as_deref() == Some("inline") {
            for tok in line.split_whitespace() {
                height_values.push(parse_f64(tok)?);
            }
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("expected key = value, got: {line}")))?;
        let (key, value) = (key.trim(), value.trim());
        match key {
            "n" => {
                n = Some(
                    value
                        .parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad n: {value}")))?,
                )
            }
            "spacing" => spacing = Some(parse_f64(value)?),
            "half_extent" => {
                half_extent = Some(
                    value
                        .parse::<i64>()
                        .map_err(|_| Error::Parse(format!("bad half_extent: {value}")))?,
                )
            }
            "hole_radius" => hole_radius = Some(parse_f64(value)?),
            "r0" => class.r0 = parse_f64(value)?,
            "gamma" => class.gamma = parse_f64(value)?,
            "depth_bound" => class.depth_bound = parse_f64(value)?,
            "alpha" => class.alpha = parse_f64(value)?,
            "lambda" => class.asymptotic_offset = parse_f64(value)?,
            "profile.offset" => profile_offset = parse_f64(value)?,
            "profile.term" => terms.push(profile_term_from_string(value)?),
            "heights" => heights_mode = Some(value.to_string()),
            other => return Err(Error::Parse(format!("unknown manifold key: {other}"))),
        }
    }
    let n = n.ok_or_else(|| Error::Parse("manifold misses n".into()))?;
    let spacing = spacing.ok_or_else(|| Error::Parse("manifold misses spacing".into()))?;
    let half = half_extent.ok_or_else(|| Error::Parse("manifold misses half_extent".into()))?;
    let domain = GraphDomain::new(n, half as f64 * spacing, spacing, hole_radius)?;
    match heights_mode.as_deref() {
        Some("none") | None => {
            let profile = Profile {
                offset: profile_offset,
                terms,
            };
            Ok(GraphManifold::from_profile(domain, profile, class))
        }
        Some("inline") => GraphManifold::from_heights(domain, height_values, class),
        Some(other) => Err(Error::Parse(format!("unknown heights mode: {other}"))),
    }
}

// ---------------------------------------------------------------------------
// finite metric spaces

pub trait MetricEntry: Sized {
    const MODE: &'static str;
    fn to_text(&self) -> String;
    fn from_text(s: &str) -> Result<Self>;
    fn zero_entry() -> Self;
}

impl MetricEntry for f64 {
    const MODE: &'static str = "float";
    fn to_text(&self) -> String {
        fmt_exact(*self)
    }
    fn from_text(s: &str) -> Result<Self> {
        parse_f64(s)
    }
    fn zero_entry() -> Self {
        0.0
    }
}

impl MetricEntry for Rational64 {
    const MODE: &'static str = "exact";
    fn to_text(&self) -> String {
        format!("{self}")
    }
    fn from_text(s: &str) -> Result<Self> {
        Rational64::from_str(s).map_err(|_| Error::Parse(format!("bad rational: {s}")))
    }
    fn zero_entry() -> Self {
        num_traits::Zero::zero()
    }
}

/// Header (mode, label count, labels), then the upper-triangular distance
/// matrix row by row.
pub fn metric_to_string<T>(space: &FiniteMetricSpace<T>) -> String
where
    T: MetricEntry + crate::metricspace::MetricScalar,
{
    let mut out = String::new();
    out.push_str("finitemetric v1\n");
    let _ = writeln!(out, "mode = {}", T::MODE);
    let _ = writeln!(out, "points = {}", space.len());
    let _ = writeln!(out, "labels = {}", space.labels().join(" "));
    for i in 0..space.len() {
        let row: Vec<String> = ((i + 1)..space.len())
            .map(|j| space.distance(i, j).to_text())
            .collect();
        if !row.is_empty() {
            let _ = writeln!(out, "{}", row.join(" "));
        }
    }
    out
}

pub fn metric_from_string<T>(text: &str) -> Result<FiniteMetricSpace<T>>
where
    T: MetricEntry + crate::metricspace::MetricScalar,
{
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    match lines.next() {
        Some("finitemetric v1") => {}
        other => {
            return Err(Error::Parse(format!(
                "expected 'finitemetric v1' header, got {other:?}"
            )))
        }
    }
    let header_val = |line: Option<&str>, key: &str| -> Result<String> {
        let line = line.ok_or_else(|| Error::Parse(format!("missing {key}")))?;
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("bad {key} line")))?;
        if k.trim() != key {
            return Err(Error::Parse(format!("expected {key}, got {}", k.trim())));
        }
        Ok(v.trim().to_string())
    };
    let mode = header_val(lines.next(), "mode")?;
    if mode != T::MODE {
        return Err(Error::Parse(format!(
            "metric file mode {mode} does not match requested {}",
            T::MODE
        )));
    }
    let count: usize = header_val(lines.next(), "points")?
        .parse()
        .map_err(|_| Error::Parse("bad point count".into()))?;
    let labels: Vec<String> = header_val(lines.next(), "labels")?
        .split_whitespace()
        .map(|s| s.to_string())
        .collect();
    if labels.len() != count {
        return Err(Error::Parse(format!(
            "label count {} does not match points {count}",
            labels.len()
        )));
    }
    let mut d = vec![vec![T::zero_entry(); count]; count];
    for i in 0..count {
        if i + 1 >= count {
            break;
        }
        let row = lines
            .next()
            .ok_or_else(|| Error::Parse(format!("missing matrix row {i}")))?;
        let entries: Vec<&str> = row.split_whitespace().collect();
        if entries.len() != count - i - 1 {
            return Err(Error::Parse(format!(
                "row {i} has {} entries, expected {}",
                entries.len(),
                count - i - 1
            )));
        }
        for (k, e) in entries.iter().enumerate() {
            let j = i + 1 + k;
            let v = T::from_text(e)?;
            d[i][j] = v.clone();
            d[j][i] = v;
        }
    }
    let tol = if T::MODE == "float" {
        // shortest-path and pullback metrics carry rounding noise
        T::from_text("1e-9").unwrap_or_else(|_| T::zero_entry())
    } else {
        T::zero_entry()
    };
    FiniteMetricSpace::validate_metric(labels, d, tol)
}

/// Full export of a glued space: ε, t-levels, composite labels, and the
/// complete distance matrix over Z.
pub fn glued_to_string<T>(z: &GluedSpace<T>) -> String
where
    T: MetricEntry + crate::metricspace::MetricScalar,
{
    let mut out = String::new();
    out.push_str("gluedspace v1\n");
    let _ = writeln!(out, "mode = {}", T::MODE);
    let _ = writeln!(out, "base_points = {}", z.base_len());
    let _ = writeln!(out, "epsilon = {}", z.epsilon.to_text());
    let levels: Vec<String> = z.t_levels.iter().map(|t| t.to_text()).collect();
    let _ = writeln!(out, "t_levels = {}", levels.join(" "));
    let labels: Vec<String> = z
        .points()
        .map(|(ti, p)| format!("t{}:{}", ti, z.d_a.labels()[p]))
        .collect();
    let _ = writeln!(out, "labels = {}", labels.join(" "));
    for row in z.full_matrix() {
        let cells: Vec<String> = row.iter().map(|v| v.to_text()).collect();
        let _ = writeln!(out, "{}", cells.join(" "));
    }
    out
}

// ---------------------------------------------------------------------------
// CSV and record output

/// Assemble a CSV with fixed float formatting; the cell writer keeps mixed
/// string/number columns byte-stable.
pub struct Csv {
    out: String,
    columns: usize,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        let mut out = String::new();
        out.push_str(&header.join(","));
        out.push('\n');
        Self {
            out,
            columns: header.len(),
        }
    }

    pub fn row(&mut self, cells: &[CsvCell]) {
        assert_eq!(cells.len(), self.columns, "csv row width mismatch");
        let rendered: Vec<String> = cells
            .iter()
            .map(|c| match c {
                CsvCell::Float(x) => fmt_f64(*x),
                CsvCell::Int(i) => i.to_string(),
                CsvCell::Text(s) => s.clone(),
                CsvCell::Bool(b) => b.to_string(),
            })
            .collect();
        self.out.push_str(&rendered.join(","));
        self.out.push('\n');
    }

    pub fn finish(self) -> String {
        self.out
    }
}

#[derive(Debug, Clone)]
pub enum CsvCell {
    Float(f64),
    Int(i64),
    Text(String),
    Bool(bool),
}

/// Key-value record blocks separated by blank lines.
pub fn records_to_string(records: &[Vec<(String, String)>]) -> String {
    let mut out = String::new();
    for (k, rec) in records.iter().enumerate() {
        if k > 0 {
            out.push('\n');
        }
        for (key, value) in rec {
            let _ = writeln!(out, "{key} = {value}");
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metricspace::{glue, random_rational_metric, uniform_distance};
    use crate::rng::SplitMix64;

    #[test]
    fn manifold_profile_roundtrip() {
        let d = GraphDomain::new(3, 2.0, 0.25, Some(0.5)).unwrap();
        let g = GraphManifold::from_profile(
            d,
            Profile::schwarzschild(3, 0.2).shifted(1.5),
            ClassParams {
                r0: 1.2,
                gamma: 1.1,
                depth_bound: 3.0,
                alpha: -0.5,
                asymptotic_offset: 1.5,
            },
        );
        let text = manifold_to_string(&g);
        let back = manifold_from_string(&text).unwrap();
        assert_eq!(back.domain, g.domain);
        assert_eq!(back.class, g.class);
        assert_eq!(back.f, g.f);
    }

    #[test]
    fn manifold_heights_roundtrip() {
        let d = GraphDomain::new(3, 1.0, 0.5, None).unwrap();
        let f: Vec<f64> = (0..d.node_count())
            .map(|k| (k as f64) * 0.1 - 3.0)
            .collect();
        let g = GraphManifold::from_heights(d, f, ClassParams::default()).unwrap();
        let text = manifold_to_string(&g);
        let back = manifold_from_string(&text).unwrap();
        assert_eq!(back.f, g.f);
        assert!(back.profile.is_none());
    }

    #[test]
    fn manifold_rejects_unknown_keys() {
        let text = "graphmanifold v1\nn = 3\nspacing = 0.5\nhalf_extent = 2\nbogus = 1\n";
        assert!(matches!(manifold_from_string(text), Err(Error::Parse(_))));
    }

    #[test]
    fn metric_roundtrip_exact_and_float() {
        let mut rng = SplitMix64::new(5);
        let s = random_rational_metric(&mut rng, 7, 12);
        let text = metric_to_string(&s);
        let back: FiniteMetricSpace<Rational64> = metric_from_string(&text).unwrap();
        assert_eq!(back, s);

        let sf = crate::metricspace::random_euclidean_metric(&mut rng, 6, 3, 5.0);
        let text = metric_to_string(&sf);
        let back: FiniteMetricSpace<f64> = metric_from_string(&text).unwrap();
        for i in 0..6 {
            for j in 0..6 {
                assert!((back.distance(i, j) - sf.distance(i, j)).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn glued_export_contains_slices() {
        let mut rng = SplitMix64::new(9);
        let a = random_rational_metric(&mut rng, 4, 9);
        let b = random_rational_metric(&mut rng, 4, 9);
        let eps = uniform_distance(&a, &b).unwrap();
        let z = glue(a, b, 3).unwrap();
        let text = glued_to_string(&z);
        assert!(text.contains("gluedspace v1"));
        assert!(text.contains(&format!("epsilon = {eps}")));
        let lines: Vec<&str> = text.lines().collect();
        // header lines plus one matrix row per point of Z
        assert_eq!(lines.len(), 6 + z.len());
    }

    #[test]
    fn csv_is_deterministic() {
        let make = || {
            let mut c = Csv::new(&["a", "b"]);
            c.row(&[CsvCell::Float(1.0 / 3.0), CsvCell::Int(7)]);
            c.row(&[CsvCell::Float(2.0f64.sqrt()), CsvCell::Text("x".into())]);
            c.finish()
        };
        assert_eq!(make(), make());
        assert!(make().contains("3.33333333333e-1"));
    }
}

//! Subcommand implementations: each validates its configuration, computes,
//! and writes deterministic artifacts into the output directory.

use crate::config::{entry, ConfigError, Kind, RunConfig, Schema};
use crate::Command;
use graphmass::convergence::{
    self, FamilyKind, FamilySpec, PointedKind,
};
use graphmass::hypersurface::{ClassParams, DerivativeMode, GraphManifold};
use graphmass::io::{self, Csv, CsvCell};
use graphmass::metricspace::{
    self, flat_bound, gh_diameter_lower_bound, glue, mass_rescale, product_filling_mass,
    ratio_bound, uniform_distance, FiniteMetricSpace,
};
use graphmass::profile::{schwarzschild_horizon, schwarzschild_profile, schwarzschild_slope, Profile, RadialKind};
use graphmass::rng::SplitMix64;
use graphmass::GraphDomain;
use num_rational::Rational64;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

pub struct Context {
    pub out_dir: PathBuf,
    pub format: String,
    pub exact: bool,
}

#[derive(Debug)]
pub enum CmdError {
    Config(ConfigError),
    Lib(graphmass::Error),
    Io(std::io::Error),
}

impl std::fmt::Display for CmdError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CmdError::Config(e) => write!(f, "{e}"),
            CmdError::Lib(e) => write!(f, "{e}"),
            CmdError::Io(e) => write!(f, "i/o: {e}"),
        }
    }
}

impl From<graphmass::Error> for CmdError {
    fn from(e: graphmass::Error) -> Self {
        CmdError::Lib(e)
    }
}

impl From<std::io::Error> for CmdError {
    fn from(e: std::io::Error) -> Self {
        CmdError::Io(e)
    }
}

type CmdResult = Result<(), CmdError>;

// ---------------------------------------------------------------------------
// schemas

fn fixture_entries() -> Vec<crate::config::SchemaEntry> {
    vec![
        entry("family", Kind::Text, Some("schwarzschild"),
            "fixture family: flat | schwarzschild | perturbed | thin-well | cone"),
        entry("n", Kind::Int, Some("3"), "ambient dimension (3 or 4)"),
        entry("mass", Kind::Float, Some("0.5"), "mass parameter of the family"),
        entry("height", Kind::Float, Some("0"), "height of the flat family"),
        entry("slope", Kind::Float, Some("1"), "slope of the cone family"),
        entry("r0", Kind::Float, Some("3"), "separation radius r0"),
        entry("gamma", Kind::Float, Some("1.5"), "gradient bound outside r0/2"),
        entry("depth_bound", Kind::Float, Some("4.5"), "depth bound D"),
        entry("alpha", Kind::Float, Some("-1"), "decay exponent (< 0)"),
        entry("spacing", Kind::Float, Some("0.25"), "grid spacing"),
        entry("r_max", Kind::Float, Some("6"), "grid extent"),
        entry("well_depth", Kind::Float, Some("5"), "total depth of thin wells"),
        entry("well_width", Kind::Float, Some("0.5"), "width of thin wells"),
        entry("input", Kind::Text, None, "load a graphmanifold file instead of a family"),
    ]
}

pub fn schema_for(cmd: Command) -> Schema {
    let mut e = Vec::new();
    match cmd {
        Command::Profile => {
            e.push(entry("n", Kind::Int, Some("3"), "dimension"));
            e.push(entry("mass", Kind::Float, Some("0.5"), "mass"));
            e.push(entry("r_start", Kind::Float, None, "first radius (default: horizon)"));
            e.push(entry("r_end", Kind::Float, Some("10"), "last radius"));
            e.push(entry("r_count", Kind::Int, Some("50"), "sample count"));
        }
        Command::Curvature => {
            e.extend(fixture_entries());
            e.push(entry("r_limit", Kind::Float, None, "restrict nodes to |x| <= r_limit"));
            e.push(entry("bins", Kind::Int, Some("24"), "radial bins for the field summary"));
        }
        Command::Mass => {
            e.extend(fixture_entries());
            e.push(entry("radii", Kind::FloatList, Some("3,4,5"), "quadrature radii"));
            e.push(entry("derivative_mode", Kind::Text, Some("auto"), "auto | fd"));
        }
        Command::Lam => {
            e.extend(fixture_entries());
            e.push(entry("level_height", Kind::Float, None, "height h of the level set (default: S_m(0.6 r_max))"));
            e.push(entry("mass_value", Kind::Float, None, "mass for the left side (default: quadrature)"));
            e.push(entry("radii", Kind::FloatList, None, "quadrature radii for the default mass"));
        }
        Command::H0 => {
            e.extend(fixture_entries());
        }
        Command::Depth => {
            e.extend(fixture_entries());
        }
        Command::Pullback => {
            e.extend(fixture_entries());
            e.push(entry("radius", Kind::Float, Some("4"), "pullback sphere radius"));
            e.push(entry("angular_samples", Kind::Int, Some("32"), "boundary sample count"));
        }
        Command::Glue => {
            e.push(entry("source", Kind::Text, Some("noncomplete"),
                "noncomplete | random | files"));
            e.push(entry("k", Kind::Int, Some("4"), "truncation of the noncomplete fixture"));
            e.push(entry("t_count", Kind::Int, Some("5"), "t-levels of the glued space"));
            e.push(entry("size", Kind::Int, Some("6"), "points of random metrics"));
            e.push(entry("max_distance", Kind::Int, Some("20"), "random integer distance cap"));
            e.push(entry("seed", Kind::Int, Some("1"), "random seed"));
            e.push(entry("input_a", Kind::Text, None, "first metric file (source = files)"));
            e.push(entry("input_b", Kind::Text, None, "second metric file (source = files)"));
        }
        Command::Bounds => {
            e.push(entry("current_dim", Kind::Int, Some("2"), "dimension of the current"));
            e.push(entry("lambda", Kind::Float, Some("1"), "bi-Lipschitz ratio bound"));
            e.push(entry("epsilon", Kind::Float, Some("0.1"), "uniform metric distance"));
            e.push(entry("mass_t", Kind::Float, Some("1"), "current mass under the reference metric"));
        }
        Command::Experiment | Command::Pointed => {
            e.push(entry("family", Kind::Text, Some("schwarzschild"),
                "schwarzschild | perturbed | thin-well"));
            e.push(entry("n", Kind::Int, Some("3"), "dimension"));
            e.push(entry("schedule", Kind::FloatList, Some("0.5,0.25,0.125,0.0625,0.03125,0.015625"),
                "decreasing masses (or well widths)"));
            e.push(entry("r0", Kind::Float, Some("3"), "separation radius"));
            e.push(entry("gamma", Kind::Float, Some("1.5"), "gradient bound"));
            e.push(entry("depth_bound", Kind::Float, Some("4.5"), "depth bound D"));
            e.push(entry("alpha", Kind::Float, Some("-1"), "decay exponent"));
            e.push(entry("spacing", Kind::Float, Some("0.2"), "grid spacing"));
            e.push(entry("r_max", Kind::Float, Some("6"), "grid extent"));
            e.push(entry("radius", Kind::Float, Some("4"), "experiment radius r"));
            e.push(entry("angular_samples", Kind::Int, Some("32"), "boundary samples"));
            e.push(entry("ball_radius", Kind::Float, Some("2"), "intrinsic ball radius R"));
            e.push(entry("well_depth", Kind::Float, Some("5"), "thin-well total depth"));
            if matches!(cmd, Command::Pointed) {
                e.push(entry("point", Kind::Text, Some("boundary"), "boundary | well-bottom"));
            }
        }
        Command::Fixtures => {
            e.push(entry("k", Kind::Int, Some("4"), "truncation"));
            e.push(entry("t_count", Kind::Int, Some("5"), "t-levels"));
        }
    }
    Schema::new(e)
}

// ---------------------------------------------------------------------------
// shared helpers

fn write_artifact(ctx: &Context, name: &str, content: &str) -> Result<PathBuf, CmdError> {
    std::fs::create_dir_all(&ctx.out_dir)?;
    let path = ctx.out_dir.join(name);
    std::fs::write(&path, content)?;
    println!("wrote {}", path.display());
    Ok(path)
}

/// Emit a table as CSV or as per-row records, following --format.
fn write_table(
    ctx: &Context,
    stem: &str,
    header: &[&str],
    rows: &[Vec<CsvCell>],
) -> Result<(), CmdError> {
    if ctx.format == "csv" {
        let mut csv = Csv::new(header);
        for r in rows {
            csv.row(r);
        }
        write_artifact(ctx, &format!("{stem}.csv"), &csv.finish())?;
    } else {
        let records: Vec<Vec<(String, String)>> = rows
            .iter()
            .map(|r| {
                header
                    .iter()
                    .zip(r)
                    .map(|(h, c)| {
                        let v = match c {
                            CsvCell::Float(x) => io::fmt_f64(*x),
                            CsvCell::Int(i) => i.to_string(),
                            CsvCell::Text(s) => s.clone(),
                            CsvCell::Bool(b) => b.to_string(),
                        };
                        (h.to_string(), v)
                    })
                    .collect()
            })
            .collect();
        write_artifact(ctx, &format!("{stem}.records"), &io::records_to_string(&records))?;
    }
    Ok(())
}

fn class_from(cfg: &RunConfig) -> Result<ClassParams, CmdError> {
    Ok(ClassParams {
        r0: cfg.float("r0")?,
        gamma: cfg.float("gamma")?,
        depth_bound: cfg.float("depth_bound")?,
        alpha: cfg.float("alpha")?,
        asymptotic_offset: 0.0,
    })
}

/// Build the fixture named by the config; returns the manifold and its
/// nominal mass when the family pins one.
fn build_fixture(cfg: &RunConfig) -> Result<(GraphManifold, Option<f64>), CmdError> {
    if let Some(path) = cfg.maybe("input") {
        let text = std::fs::read_to_string(path)?;
        let g = io::manifold_from_string(&text)?;
        return Ok((g, None));
    }
    let n = cfg.int("n")? as usize;
    let class = class_from(cfg)?;
    let spacing = cfg.float("spacing")?;
    let r_max = cfg.float("r_max")?;
    let family = cfg.text("family")?;
    match family {
        "flat" => {
            let domain = GraphDomain::new(n, r_max, spacing, None)?;
            Ok((
                GraphManifold::from_profile(domain, Profile::flat(cfg.float("height")?), class),
                Some(0.0),
            ))
        }
        "cone" => {
            let domain = GraphDomain::new(n, r_max, spacing, None)?;
            Ok((
                GraphManifold::from_profile(
                    domain,
                    Profile::radial(RadialKind::Cone {
                        slope: cfg.float("slope")?,
                    }),
                    class,
                ),
                None,
            ))
        }
        "schwarzschild" => {
            let mass = cfg.float("mass")?;
            let g = convergence::make_schwarzschild(n, mass, class, r_max, spacing)?;
            Ok((g, Some(mass)))
        }
        "perturbed" => {
            let mass = cfg.float("mass")?;
            let spec = FamilySpec {
                kind: FamilyKind::PerturbedSchwarzschild,
                n,
                schedule: vec![mass],
                class,
                spacing,
                r_max,
                radius: class.r0,
                well_depth: 0.0,
                angular_samples: 8,
                ball_radius: 1.0,
            };
            Ok((convergence::make_member(&spec, 0)?, Some(mass)))
        }
        "thin-well" => {
            let g = convergence::make_thin_well(
                n,
                cfg.float("well_depth")?,
                cfg.float("well_width")?,
                class,
                r_max,
                spacing,
            )?;
            Ok((g, Some(0.0)))
        }
        other => Err(ConfigError(format!("unknown family: {other}")).into()),
    }
}

fn family_spec(cfg: &RunConfig) -> Result<FamilySpec, CmdError> {
    let kind = match cfg.text("family")? {
        "schwarzschild" => FamilyKind::Schwarzschild,
        "perturbed" => FamilyKind::PerturbedSchwarzschild,
        "thin-well" => FamilyKind::ThinWell,
        other => return Err(ConfigError(format!("unknown family: {other}")).into()),
    };
    Ok(FamilySpec {
        kind,
        n: cfg.int("n")? as usize,
        schedule: cfg.float_list("schedule")?,
        class: class_from(cfg)?,
        spacing: cfg.float("spacing")?,
        r_max: cfg.float("r_max")?,
        radius: cfg.float("radius")?,
        well_depth: cfg.float("well_depth")?,
        angular_samples: cfg.int("angular_samples")? as usize,
        ball_radius: cfg.float("ball_radius")?,
    })
}

fn record(pairs: &[(&str, String)]) -> Vec<(String, String)> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

// ---------------------------------------------------------------------------
// subcommands

pub fn run(cmd: Command, cfg: &RunConfig, ctx: &Context) -> CmdResult {
    match cmd {
        Command::Profile => cmd_profile(cfg, ctx),
        Command::Curvature => cmd_curvature(cfg, ctx),
        Command::Mass => cmd_mass(cfg, ctx),
        Command::Lam => cmd_lam(cfg, ctx),
        Command::H0 => cmd_h0(cfg, ctx),
        Command::Depth => cmd_depth(cfg, ctx),
        Command::Pullback => cmd_pullback(cfg, ctx),
        Command::Glue => cmd_glue(cfg, ctx),
        Command::Bounds => cmd_bounds(cfg, ctx),
        Command::Experiment => cmd_experiment(cfg, ctx),
        Command::Pointed => cmd_pointed(cfg, ctx),
        Command::Fixtures => cmd_fixtures(cfg, ctx),
    }
}

fn cmd_profile(cfg: &RunConfig, ctx: &Context) -> CmdResult {
    let n = cfg.int("n")? as usize;
    let mass = cfg.float("mass")?;
    let horizon = schwarzschild_horizon(n, mass);
    let r_start = match cfg.maybe("r_start") {
        Some(s) => s.parse::<f64>().map_err(|_| ConfigError("bad r_start".into()))?,
        None => horizon,
    };
    let r_end = cfg.float("r_end")?;
    let count = cfg.int("r_count")? as usize;
    if !(r_end > r_start) || count < 2 {
        return Err(ConfigError("need r_end > r_start and r_count >= 2".into()).into());
    }
    let mut rows = Vec::new();
    for k in 0..count {
        let r = r_start + (r_end - r_start) * k as f64 / (count - 1) as f64;
        let v = schwarzschild_profile(n, mass, r)?;
        let s = schwarzschild_slope(n, mass, r);
        rows.push(vec![
            CsvCell::Float(r),
            CsvCell::Float(v),
            CsvCell::Float(if s.is_finite() { s } else { f64::MAX }),
        ]);
    }
    write_table(ctx, "profile", &["radius", "height", "slope"], &rows)
}

fn cmd_curvature(cfg: &RunConfig, ctx: &Context) -> CmdResult {
    let (g, _) = build_fixture(cfg)?;
    let r_limit = match cfg.maybe("r_limit") {
        Some(s) => s.parse::<f64>().map_err(|_| ConfigError("bad r_limit".into()))?,
        None => g.domain.r_max(),
    };
    let field = g.scalar_curvature_field(r_limit);
    if field.is_empty() {
        return Err(CmdError::Lib(graphmass::Error::Numerical(
            "no nodes with full curvature stencils".into(),
        )));
    }
    let bins = cfg.int("bins")? as usize;
    let mut by_bin: Vec<(usize, f64, f64)> = vec![(0, 0.0, 0.0); bins];
    let mut max_abs: f64 = 0.0;
    for (idx, rc) in &field {
        let r = g.domain.radius(idx);
        let b = ((r / r_limit) * bins as f64).min(bins as f64 - 1.0) as usize;
        by_bin[b].0 += 1;
        by_bin[b].1 = by_bin[b].1.max(rc.abs());
        by_bin[b].2 += rc;
        max_abs = max_abs.max(rc.abs());
    }
    let mut rows = Vec::new();
    for (b, (count, max_abs_bin, sum)) in by_bin.iter().enumerate() {
        if *count == 0 {
            continue;
        }
        rows.push(vec![
            CsvCell::Float((b as f64 + 0.5) * r_limit / bins as f64),
            CsvCell::Int(*count as i64),
            CsvCell::Float(*max_abs_bin),
            CsvCell::Float(sum / *count as f64),
        ]);
    }
    write_table(
        ctx,
        "curvature",
        &["radius_bin", "nodes", "max_abs_R", "mean_R"],
        &rows,
    )?;
    let rec = record(&[
        ("nodes_evaluated", field.len().to_string()),
        ("max_abs_R", io::fmt_f64(max_abs)),
    ]);
    write_artifact(ctx, "curvature_summary.records", &io::records_to_string(&[rec]))?;
    Ok(())
}

fn cmd_mass(cfg: &RunConfig, ctx: &Context) -> CmdResult {
    let (g, _) = build_fixture(cfg)?;
    let radii = cfg.float_list("radii")?;
    let mode = match cfg.text("derivative_mode")? {
        "fd" => DerivativeMode::FiniteDifference,
        _ => DerivativeMode::Auto,
    };
    let est = g.adm_mass(&radii, mode)?;
    let rows: Vec<Vec<CsvCell>> = est
        .radii
        .iter()
        .zip(&est.values)
        .map(|(r, v)| vec![CsvCell::Float(*r), CsvCell::Float(*v)])
        .collect();
    write_table(ctx, "mass", &["radius", "mass_integral"], &rows)?;
    let rec = record(&[
        ("extrapolated", io::fmt_f64(est.extrapolated)),
        (
            "fit_exponent",
            est.fit_exponent.map_or("none".into(), io::fmt_f64),
        ),
        ("residual", io::fmt_f64(est.residual)),
    ]);
    write_artifact(ctx, "mass_summary.records", &io::records_to_string(&[rec]))?;
    Ok(())
}

fn cmd_lam(cfg: &RunConfig, ctx: &Context) -> CmdResult {
    let (g, family_mass) = build_fixture(cfg)?;
    let mass = match cfg.maybe("mass_value") {
        Some(s) => s.parse::<f64>().map_err(|_| ConfigError("bad mass_value".into()))?,
        None => match cfg.maybe("radii") {
            Some(_) => g.adm_mass(&cfg.float_list("radii")?, DerivativeMode::Auto)?.extrapolated,
            None => family_mass.ok_or_else(|| {
                ConfigError("this fixture has no pinned mass: set mass_value or radii".into())
            })?,
        },
    };
    let h = match cfg.maybe("level_height") {
        Some(s) => s.parse::<f64>().map_err(|_| ConfigError("bad level_height".into()))?,
        None => {
            let n = g.dimension();
            schwarzschild_profile(n, mass.max(1e-9), 0.6 * g.domain.r_max())?
        }
    };
    let rep = g.lam_identity(h, mass, DerivativeMode::Auto)?;
    write_table(
        ctx,
        "lam",
        &[
            "height",
            "mass",
            "lhs",
            "bulk",
            "bulk_tail_estimate",
            "boundary",
            "residual",
            "skipped_nodes",
        ],
        &[vec![
            CsvCell::Float(rep.height),
            CsvCell::Float(rep.mass),
            CsvCell::Float(rep.lhs),
            CsvCell::Float(rep.bulk),
            CsvCell::Float(rep.bulk_tail_estimate),
            CsvCell::Float(rep.boundary),
            CsvCell::Float(rep.residual),
            CsvCell::Int(rep.skipped_nodes as i64),
        ]],
    )?;
    Ok(())
}

fn cmd_h0(cfg: &RunConfig, ctx: &Context) -> CmdResult {
    let (g, family_mass) = build_fixture(cfg)?;
    let mass = family_mass.filter(|m| *m > 0.0).unwrap_or(cfg.float("mass")?);
    let rep = g.h0_height(mass)?;
    let rec = record(&[
        ("h0", io::fmt_f64(rep.h0)),
        ("flag", format!("{:?}", rep.flag)),
        ("threshold_area", io::fmt_f64(rep.threshold_area)),
    ]);
    write_artifact(ctx, "h0.records", &io::records_to_string(&[rec]))?;
    Ok(())
}

fn cmd_depth(cfg: &RunConfig, ctx: &Context) -> CmdResult {
    let (g, _) = build_fixture(cfg)?;
    let rep = g.depth(g.class.r0)?;
    let rec = record(&[
        ("depth", io::fmt_f64(rep.depth)),
        ("deepest_radius", io::fmt_f64(rep.deepest_radius)),
        ("band_width", io::fmt_f64(rep.band_width)),
        ("collar_hole_radius", g.domain.hole_radius().map_or("none".into(), io::fmt_f64)),
        ("source_count", rep.source_count.to_string()),
    ]);
    write_artifact(ctx, "depth.records", &io::records_to_string(&[rec]))?;
    Ok(())
}

fn cmd_pullback(cfg: &RunConfig, ctx: &Context) -> CmdResult {
    let (g, _) = build_fixture(cfg)?;
    let radius = cfg.float("radius")?;
    let samples = cfg.int("angular_samples")? as usize;
    let bm = g.boundary_pullback(radius, samples)?;
    // export as a finite metric space with angular-index labels
    let labels: Vec<String> = (0..bm.nodes.len()).map(|i| format!("a{i}")).collect();
    let space = FiniteMetricSpace::validate_metric(labels, bm.matrix.clone(), 1e-9)?;
    write_artifact(ctx, "pullback_metric.fm", &io::metric_to_string(&space))?;
    let gamma = g.class.gamma;
    let rec = record(&[
        ("radius", io::fmt_f64(bm.radius)),
        ("samples", bm.nodes.len().to_string()),
        ("band_width", io::fmt_f64(bm.band_width)),
        ("max_snap", io::fmt_f64(bm.max_snap)),
        ("ratio_min", io::fmt_f64(bm.ratio_min)),
        ("ratio_max", io::fmt_f64(bm.ratio_max)),
        ("lipschitz_bound", io::fmt_f64(2.0 * (1.0 + gamma * gamma).sqrt())),
        (
            "worst_pair",
            format!("{} {}", bm.worst_pair.0, bm.worst_pair.1),
        ),
    ]);
    write_artifact(ctx, "pullback.records", &io::records_to_string(&[rec]))?;
    Ok(())
}

fn cmd_glue(cfg: &RunConfig, ctx: &Context) -> CmdResult {
    let t_count = cfg.int("t_count")? as usize;
    match cfg.text("source")? {
        "noncomplete" => {
            let fx = metricspace::noncomplete_fixture(cfg.int("k")? as u32)?;
            let (z, rep) = fx.analyze(t_count)?;
            write_artifact(ctx, "glued.gs", &io::glued_to_string(&z))?;
            let tail: Vec<String> = rep.cauchy_tail.iter().map(|v| v.to_string()).collect();
            let rec = record(&[
                ("epsilon", rep.epsilon.to_string()),
                ("gh_bound", z.gh_bound().to_string()),
                ("cauchy_tail", tail.join(" ")),
                ("cross_case_min", rep.cross_case_min.to_string()),
                ("crossing_case_min", rep.crossing_case_min.to_string()),
                ("min_candidate_margin", rep.min_candidate_margin.to_string()),
                ("min_positive_gap", rep.min_positive_gap.to_string()),
            ]);
            write_artifact(ctx, "glue.records", &io::records_to_string(&[rec]))?;
        }
        "random" => {
            let mut rng = SplitMix64::new(cfg.int("seed")? as u64);
            let size = cfg.int("size")? as usize;
            if ctx.exact {
                let a = metricspace::random_rational_metric(&mut rng, size, cfg.int("max_distance")?);
                let b = metricspace::random_rational_metric(&mut rng, size, cfg.int("max_distance")?);
                run_glue_generic(ctx, a, b, t_count, Rational64::from_integer(0))?;
            } else {
                let a = metricspace::random_euclidean_metric(&mut rng, size, 3, 10.0);
                let b = metricspace::random_euclidean_metric(&mut rng, size, 3, 10.0);
                run_glue_generic(ctx, a, b, t_count, 1e-12)?;
            }
        }
        "files" => {
            let path_a = cfg.text("input_a")?;
            let path_b = cfg.text("input_b")?;
            let text_a = std::fs::read_to_string(path_a)?;
            let text_b = std::fs::read_to_string(path_b)?;
            if ctx.exact {
                let a: FiniteMetricSpace<Rational64> = io::metric_from_string(&text_a)?;
                let b: FiniteMetricSpace<Rational64> = io::metric_from_string(&text_b)?;
                run_glue_generic(ctx, a, b, t_count, Rational64::from_integer(0))?;
            } else {
                let a: FiniteMetricSpace<f64> = io::metric_from_string(&text_a)?;
                let b: FiniteMetricSpace<f64> = io::metric_from_string(&text_b)?;
                run_glue_generic(ctx, a, b, t_count, 1e-12)?;
            }
        }
        other => return Err(ConfigError(format!("unknown glue source: {other}")).into()),
    }
    Ok(())
}

fn run_glue_generic<T>(
    ctx: &Context,
    a: FiniteMetricSpace<T>,
    b: FiniteMetricSpace<T>,
    t_count: usize,
    tol: T,
) -> CmdResult
where
    T: metricspace::MetricScalar + io::MetricEntry + std::fmt::Display,
{
    let eps = uniform_distance(&a, &b)?;
    let lambda = ratio_bound(&a, &b)?;
    let gh_lower = gh_diameter_lower_bound(&a, &b);
    let z = glue(a, b, t_count)?;
    z.verify_endpoint_isometry()?;
    z.verify_metric_axioms(tol)?;
    let hd = z.hausdorff_distance(&z.bottom_slice(), &z.top_slice())?;
    write_artifact(ctx, "glued.gs", &io::glued_to_string(&z))?;
    let rec = record(&[
        ("epsilon", format!("{eps}")),
        ("ratio_bound", format!("{lambda}")),
        ("gh_bound", format!("{}", z.gh_bound())),
        ("gh_diameter_lower_bound", format!("{gh_lower}")),
        ("slice_hausdorff", format!("{hd}")),
        ("points", z.len().to_string()),
    ]);
    write_artifact(ctx, "glue.records", &io::records_to_string(&[rec]))?;
    Ok(())
}

fn cmd_bounds(cfg: &RunConfig, ctx: &Context) -> CmdResult {
    let n = cfg.int("current_dim")? as usize;
    let lambda = cfg.float("lambda")?;
    let eps = cfg.float("epsilon")?;
    let mass_t = cfg.float("mass_t")?;
    if lambda < 1.0 || eps < 0.0 || mass_t < 0.0 {
        return Err(ConfigError("bounds need lambda >= 1, epsilon >= 0, mass_t >= 0".into()).into());
    }
    let rec = record(&[
        ("gh_bound", io::fmt_f64(2.0 * eps)),
        ("flat_bound", io::fmt_f64(flat_bound(n, lambda, eps, mass_t))),
        (
            "product_filling_mass",
            io::fmt_f64(product_filling_mass(eps, mass_t)),
        ),
        (
            "mass_rescaled_by_lambda",
            io::fmt_f64(mass_rescale(mass_t, lambda, n)),
        ),
    ]);
    write_artifact(ctx, "bounds.records", &io::records_to_string(&[rec]))?;
    Ok(())
}

fn member_rows(rep: &graphmass::convergence::ConvergenceReport) -> Vec<Vec<CsvCell>> {
    rep.members
        .iter()
        .map(|m| {
            vec![
                CsvCell::Int(m.index as i64),
                CsvCell::Float(m.parameter),
                CsvCell::Float(m.mass),
                CsvCell::Float(m.h0),
                CsvCell::Text(format!("{:?}", m.h0_flag)),
                CsvCell::Float(m.slab_height),
                CsvCell::Float(m.vol_omega),
                CsvCell::Float(m.vol_ball),
                CsvCell::Float(m.vol_deficit),
                CsvCell::Float(m.vol_below_zero),
                CsvCell::Float(m.depth),
                CsvCell::Float(m.depth_excess),
                CsvCell::Float(m.epsilon),
                CsvCell::Float(m.lambda),
                CsvCell::Float(m.gh_bound),
                CsvCell::Float(m.flat_bound),
                CsvCell::Float(m.ball_volume_raw),
                CsvCell::Float(m.ball_volume_calibrated),
                CsvCell::Float(m.ball_deficit),
                CsvCell::Float(m.penrose_margin),
                CsvCell::Float(m.max_gradient),
                CsvCell::Float(m.min_mean_curvature),
            ]
        })
        .collect()
}

pub const MEMBER_COLUMNS: [&str; 22] = [
    "index",
    "parameter",
    "mass",
    "h0",
    "h0_flag",
    "slab_height",
    "vol_omega",
    "vol_ball",
    "vol_deficit",
    "vol_below_zero",
    "depth",
    "depth_excess",
    "epsilon",
    "lambda",
    "gh_bound",
    "flat_bound",
    "ball_volume_raw",
    "ball_volume_calibrated",
    "ball_deficit",
    "penrose_margin",
    "max_gradient",
    "min_mean_curvature",
];

fn cmd_experiment(cfg: &RunConfig, ctx: &Context) -> CmdResult {
    let spec = family_spec(cfg)?;
    let rep = convergence::stability_experiment(&spec)?;
    write_table(ctx, "experiment", &MEMBER_COLUMNS, &member_rows(&rep))?;
    // plot-ready series: x = parameter, y = column
    for column in ["slab_height", "vol_deficit", "epsilon", "gh_bound", "flat_bound"] {
        let mut series = String::new();
        for m in &rep.members {
            let y = match column {
                "slab_height" => m.slab_height,
                "vol_deficit" => m.vol_deficit,
                "epsilon" => m.epsilon,
                "gh_bound" => m.gh_bound,
                _ => m.flat_bound,
            };
            let _ = writeln!(series, "{} {}", io::fmt_f64(m.parameter), io::fmt_f64(y));
        }
        write_artifact(ctx, &format!("series_{column}.dat"), &series)?;
    }
    let trend_recs: Vec<Vec<(String, String)>> = rep
        .trends
        .iter()
        .map(|t| {
            record(&[
                ("column", t.column.to_string()),
                ("monotone_ok", t.monotone_ok.to_string()),
                ("final_over_initial", io::fmt_f64(t.final_over_initial)),
                ("step_tolerance", io::fmt_f64(rep.step_tolerance)),
            ])
        })
        .collect();
    write_artifact(ctx, "trends.records", &io::records_to_string(&trend_recs))?;
    Ok(())
}

fn cmd_pointed(cfg: &RunConfig, ctx: &Context) -> CmdResult {
    let spec = family_spec(cfg)?;
    let kind = match cfg.text("point")? {
        "well-bottom" => PointedKind::WellBottom,
        _ => PointedKind::Boundary,
    };
    let rep = convergence::pointed_ball_experiment(&spec, spec.ball_radius, kind)?;
    let rows: Vec<Vec<CsvCell>> = rep
        .rows
        .iter()
        .map(|r| {
            vec![
                CsvCell::Int(r.index as i64),
                CsvCell::Float(r.parameter),
                CsvCell::Float(r.ball_volume_raw),
                CsvCell::Float(r.ball_volume_calibrated),
                CsvCell::Float(r.euclidean_volume),
                CsvCell::Float(r.deficit),
                CsvCell::Bool(r.inclusion_ok),
                CsvCell::Bool(r.escaped_grid),
            ]
        })
        .collect();
    write_table(
        ctx,
        "pointed",
        &[
            "index",
            "parameter",
            "ball_volume_raw",
            "ball_volume_calibrated",
            "euclidean_volume",
            "deficit",
            "inclusion_ok",
            "escaped_grid",
        ],
        &rows,
    )?;
    let rec = record(&[
        ("kind", format!("{:?}", rep.kind)),
        ("ball_radius", io::fmt_f64(rep.ball_radius)),
        ("converging", rep.converging.to_string()),
    ]);
    write_artifact(ctx, "pointed_summary.records", &io::records_to_string(&[rec]))?;
    Ok(())
}

fn cmd_fixtures(cfg: &RunConfig, ctx: &Context) -> CmdResult {
    let fx = metricspace::noncomplete_fixture(cfg.int("k")? as u32)?;
    write_artifact(ctx, "noncomplete_da.fm", &io::metric_to_string(&fx.d_a))?;
    write_artifact(ctx, "noncomplete_db.fm", &io::metric_to_string(&fx.d_b))?;
    let (z, rep) = fx.analyze(cfg.int("t_count")? as usize)?;
    write_artifact(ctx, "noncomplete_glued.gs", &io::glued_to_string(&z))?;
    let rec = record(&[
        ("k", fx.k.to_string()),
        ("epsilon", rep.epsilon.to_string()),
        ("cross_case_min", rep.cross_case_min.to_string()),
        ("crossing_case_min", rep.crossing_case_min.to_string()),
        ("min_candidate_margin", rep.min_candidate_margin.to_string()),
        ("min_positive_gap", rep.min_positive_gap.to_string()),
    ]);
    write_artifact(ctx, "noncomplete.records", &io::records_to_string(&[rec]))?;
    Ok(())
}

const _: fn(&Path) = |_p| {};

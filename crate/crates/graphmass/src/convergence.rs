//! Families of graphs in the uniformity class and the desk-scale stability
//! experiments: as the mass schedule decreases, slab heights, volume
//! deficits, boundary-metric deviations, and the derived Gromov-Hausdorff
//! and intrinsic-flat bounds all shrink, while thin wells keep their depth
//! with vanishing volume.

use crate::error::{Error, Result};
use crate::grid::GraphDomain;
use crate::hypersurface::{ClassParams, GraphManifold};
use crate::mass::H0Flag;
use crate::metricspace::flat_bound;
use crate::profile::{
    radial_arclength, schwarzschild_horizon, schwarzschild_profile, MassRamp, Profile,
    ProfileTerm, RadialKind,
};
use crate::quad::{unit_ball_volume, unit_sphere_area};

/// Which family a schedule runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    /// Pure Schwarzschild graphs with mass schedule m_j.
    Schwarzschild,
    /// Mass-ramp graphs (strictly positive scalar curvature on an annulus)
    /// with an angular bump perturbation, mass schedule m_j.
    PerturbedSchwarzschild,
    /// Thin gravity wells of fixed total depth and shrinking width schedule.
    ThinWell,
}

/// A family of class members plus the parameters of the experiment run.
#[derive(Debug, Clone)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    pub n: usize,
    /// masses m_j (decreasing) or well widths w_j (decreasing)
    pub schedule: Vec<f64>,
    pub class: ClassParams,
    pub spacing: f64,
    pub r_max: f64,
    /// experiment radius r >= r0
    pub radius: f64,
    /// total depth D* of thin wells (measured from Σ(r0))
    pub well_depth: f64,
    pub angular_samples: usize,
    /// intrinsic ball radius R for pointed runs
    pub ball_radius: f64,
}

impl FamilySpec {
    pub fn validate(&self) -> Result<()> {
        if self.schedule.is_empty() {
            return Err(Error::InvalidParameter("empty schedule".into()));
        }
        for w in self.schedule.windows(2) {
            if w[1] >= w[0] {
                return Err(Error::InvalidParameter(
                    "schedule must be strictly decreasing".into(),
                ));
            }
        }
        if self.radius < self.class.r0 {
            return Err(Error::InvalidParameter(format!(
                "experiment radius {} is below r0 {}",
                self.radius, self.class.r0
            )));
        }
        if self.radius > self.r_max - 2.0 * self.spacing {
            return Err(Error::InvalidParameter(
                "experiment radius too close to the grid extent".into(),
            ));
        }
        Ok(())
    }
}

/// Per-member class-membership diagnostics.  The outward-minimizing
/// condition is not verified rigorously; mean-convexity of sampled level
/// sets stands in for it and the assumption is recorded.
#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub gamma_ok: bool,
    pub max_gradient: f64,
    pub depth_ok: bool,
    pub depth: f64,
    pub penrose_ok: bool,
    pub penrose_margin: f64,
    pub mean_convex_ok: bool,
    pub min_mean_curvature: f64,
    pub asymptotic_ok: bool,
    pub max_asymptotic_deviation: f64,
    pub outward_minimizing_assumed: bool,
}

impl ValidationReport {
    pub fn all_ok(&self) -> bool {
        self.gamma_ok
            && self.depth_ok
            && self.penrose_ok
            && self.mean_convex_ok
            && self.asymptotic_ok
    }

    pub fn describe(&self) -> String {
        format!(
            "gamma {} (max |Df| = {:.4}), depth {} ({:.4}), penrose {} ({:.4}), \
             mean-convex {} (min H = {:.4}), asymptotics {} (max dev = {:.4})",
            self.gamma_ok,
            self.max_gradient,
            self.depth_ok,
            self.depth,
            self.penrose_ok,
            self.penrose_margin,
            self.mean_convex_ok,
            self.min_mean_curvature,
            self.asymptotic_ok,
            self.max_asymptotic_deviation
        )
    }
}

/// Schwarzschild graph of mass m with the hole at its horizon.
pub fn make_schwarzschild(
    n: usize,
    mass: f64,
    class: ClassParams,
    r_max: f64,
    spacing: f64,
) -> Result<GraphManifold> {
    if !(mass > 0.0) {
        return Err(Error::InvalidParameter("mass must be positive".into()));
    }
    let horizon = schwarzschild_horizon(n, mass);
    if horizon >= class.r0 / 2.0 {
        return Err(Error::InvalidParameter(format!(
            "horizon {horizon} reaches r0/2 = {}; the hole must stay inside B(r0/2)",
            class.r0 / 2.0
        )));
    }
    let domain = GraphDomain::new(n, r_max, spacing, Some(horizon))?;
    Ok(GraphManifold::from_profile(
        domain,
        Profile::schwarzschild(n, mass),
        class,
    ))
}

/// A compactly supported perturbation of a base graph.
#[derive(Debug, Clone, Copy)]
pub enum Perturbation {
    /// Bump at an arbitrary center; validated by finite differences, so the
    /// tolerance must cover the discretization noise floor.
    Bump(BumpSpec),
    /// Rotationally symmetric annular ridge; validated with the closed
    /// radial curvature form, no noise floor.
    Ridge {
        amplitude: f64,
        center_radius: f64,
        width: f64,
    },
}

#[derive(Debug, Clone, Copy)]
pub struct BumpSpec {
    pub center: [f64; 4],
    pub width: f64,
    pub amplitude: f64,
}

/// Add a smooth compactly supported perturbation to a base graph.  The
/// perturbation must sit where the base scalar curvature has a strictly
/// positive margin, and the result is re-validated: sampled scalar curvature
/// must stay above -tol, with the offending location reported otherwise.
pub fn make_perturbed(
    base: &GraphManifold,
    perturbation: Perturbation,
    tol: f64,
) -> Result<GraphManifold> {
    let n = base.dimension();
    let profile = base
        .profile
        .clone()
        .ok_or_else(|| Error::InvalidParameter("perturbation needs an analytic base".into()))?;
    let (center, width, amplitude, term) = match perturbation {
        Perturbation::Bump(b) => (
            b.center,
            b.width,
            b.amplitude,
            ProfileTerm::Radial {
                center: b.center,
                kind: RadialKind::Bump {
                    amplitude: b.amplitude,
                    width: b.width,
                },
            },
        ),
        Perturbation::Ridge {
            amplitude,
            center_radius,
            width,
        } => (
            [0.0; 4],
            center_radius + width,
            amplitude,
            ProfileTerm::Radial {
                center: [0.0; 4],
                kind: RadialKind::Ridge {
                    amplitude,
                    center_radius,
                    width,
                },
            },
        ),
    };
    if amplitude == 0.0 {
        return Ok(base.clone());
    }

    // positive-margin pre-check on the support, exact when the base is
    // rotationally symmetric
    let support_range = match perturbation {
        Perturbation::Bump(b) => {
            let c = crate::grid::norm(&b.center, n);
            ((c - b.width).max(1e-9), c + b.width)
        }
        Perturbation::Ridge {
            center_radius,
            width,
            ..
        } => ((center_radius - width).max(1e-9), center_radius + width),
    };
    let mut min_base_r = f64::INFINITY;
    if profile.radial_derivatives(support_range.0, n).is_some() {
        for k in 0..=400 {
            let rho = support_range.0
                + (support_range.1 - support_range.0) * k as f64 / 400.0;
            if let Some(rc) = profile.radial_curvature(rho, n) {
                min_base_r = min_base_r.min(rc);
            }
        }
    } else {
        let mut support_nodes = 0usize;
        for lin in 0..base.domain.node_count() {
            let idx = base.domain.from_linear(lin);
            let x = base.domain.coord(&idx);
            let d = crate::grid::dist(&x, &center, n);
            if d < width && base.domain.stencil_clear(&idx, 2) {
                if let Ok(rc) = base.scalar_curvature(&idx) {
                    support_nodes += 1;
                    min_base_r = min_base_r.min(rc);
                }
            }
        }
        if support_nodes == 0 {
            return Err(Error::InvalidParameter(
                "perturbation support contains no usable nodes".into(),
            ));
        }
    }
    if min_base_r <= tol {
        return Err(Error::ClassValidation {
            index: 0,
            reason: format!(
                "perturbation sits where base scalar curvature has no positive margin (min R = {min_base_r:.3e})"
            ),
        });
    }

    let perturbed_profile = profile.with_term(term);
    let out = GraphManifold::from_profile(base.domain.clone(), perturbed_profile, base.class);
    // re-validate the gradient bound
    let max_grad = out.max_gradient_outside(out.class.r0 / 2.0);
    if max_grad > out.class.gamma {
        return Err(Error::ClassValidation {
            index: 0,
            reason: format!("perturbation pushes |Df| to {max_grad} beyond gamma"),
        });
    }
    // re-validate nonnegative curvature on the support: exactly for radial
    // results, by finite differences otherwise
    if let Some(p) = &out.profile {
        if p.radial_derivatives(support_range.0, n).is_some() {
            for k in 0..=800 {
                let rho = support_range.0
                    + (support_range.1 - support_range.0) * k as f64 / 800.0;
                if let Some(rc) = p.radial_curvature(rho, n) {
                    if rc < -tol {
                        return Err(Error::ClassValidation {
                            index: 0,
                            reason: format!(
                                "perturbed scalar curvature {rc:.3e} < -tol at radius {rho:.4}"
                            ),
                        });
                    }
                }
            }
            return Ok(out);
        }
    }
    for lin in 0..out.domain.node_count() {
        let idx = out.domain.from_linear(lin);
        let x = out.domain.coord(&idx);
        let d = crate::grid::dist(&x, &center, n);
        if d < width + 2.0 * out.domain.spacing() && out.domain.stencil_clear(&idx, 2) {
            if let Ok(rc) = out.scalar_curvature(&idx) {
                if rc < -tol {
                    return Err(Error::ClassValidation {
                        index: 0,
                        reason: format!("perturbed scalar curvature {rc:.3e} < -tol at {idx:?}"),
                    });
                }
            }
        }
    }
    Ok(out)
}

/// Rotationally symmetric thin well: flat outside radius w, descending to a
/// bottom calibrated so that the depth of Ω(r0) below Σ(r0) is `total_depth`.
pub fn make_thin_well(
    n: usize,
    total_depth: f64,
    width: f64,
    class: ClassParams,
    r_max: f64,
    spacing: f64,
) -> Result<GraphManifold> {
    if width <= 2.0 * spacing {
        return Err(Error::InvalidParameter(format!(
            "well width {width} is unresolvable at spacing {spacing}"
        )));
    }
    if width > class.r0 / 2.0 {
        return Err(Error::InvalidParameter(
            "well must sit inside B(r0/2) to respect the gradient bound".into(),
        ));
    }
    if total_depth > class.depth_bound {
        return Err(Error::InvalidParameter(
            "designed depth exceeds the class depth bound".into(),
        ));
    }
    // radial arclength the well must contribute
    let target_arc = total_depth - (class.r0 - width);
    if target_arc <= width {
        return Err(Error::InvalidParameter(format!(
            "total depth {total_depth} is too shallow for r0 = {} and width {width}",
            class.r0
        )));
    }
    // calibrate the amplitude by bisection on the radial arclength
    let arc_of = |amplitude: f64| -> f64 {
        let kind = RadialKind::Bump {
            amplitude: -amplitude,
            width,
        };
        radial_arclength(&kind, 0.0, width, 2000)
    };
    let mut lo = 0.0;
    let mut hi = target_arc * 2.0;
    while arc_of(hi) < target_arc {
        hi *= 2.0;
        if hi > 1e6 {
            return Err(Error::Numerical("well calibration diverged".into()));
        }
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if arc_of(mid) < target_arc {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let amplitude = 0.5 * (lo + hi);
    let domain = GraphDomain::new(n, r_max, spacing, None)?;
    Ok(GraphManifold::from_profile(
        domain,
        Profile::radial(RadialKind::Bump {
            amplitude: -amplitude,
            width,
        }),
        class,
    ))
}

/// Validate a member against the class parameters it claims: gradient bound,
/// depth bound, Penrose margin, sampled mean-convexity, and the asymptotic
/// closeness to the Schwarzschild profile of its mass.
pub fn validate_member(g: &GraphManifold, mass: f64, tol: f64) -> Result<ValidationReport> {
    let n = g.dimension();
    if let Some(rho) = g.domain.hole_radius() {
        if rho >= g.class.r0 / 2.0 {
            return Err(Error::ClassValidation {
                index: 0,
                reason: format!(
                    "hole radius {rho} reaches r0/2 = {}; the hole must stay inside B(r0/2)",
                    g.class.r0 / 2.0
                ),
            });
        }
    }
    let max_gradient = g.max_gradient_outside(g.class.r0 / 2.0);
    let gamma_ok = max_gradient <= g.class.gamma * (1.0 + 1e-9) + tol;

    let depth_rep = g.depth(g.class.r0)?;
    let depth_ok = depth_rep.depth <= g.class.depth_bound + tol;

    let pen = g.penrose_check(mass.max(1e-300))?;
    let penrose_ok = pen.margin >= -tol * pen.threshold.max(1.0) - 1e-2 * pen.boundary_area;

    // sampled regular levels: min mean curvature >= -tol
    let (lo, hi) = g.height_range();
    let mut min_h = f64::INFINITY;
    if hi - lo > 1e-9 {
        for k in 0..6 {
            let h = lo + (hi - lo) * (k as f64 + 0.5) / 6.0;
            let ls = g.level_set(h, None);
            if ls.flags.near_critical || ls.element_count == 0 {
                continue;
            }
            min_h = min_h.min(ls.min_mean_curvature);
        }
    }
    let mean_convex_ok = !min_h.is_finite() || min_h >= -tol;

    // |f - (Λ + S_m)| <= γ |x|^α for |x| >= r0
    let mut max_dev: f64 = 0.0;
    let mut asymptotic_ok = true;
    if n == 3 || n == 4 {
        for lin in 0..g.domain.node_count() {
            let idx = g.domain.from_linear(lin);
            let r = g.domain.radius(&idx);
            if r < g.class.r0 {
                continue;
            }
            let model = if mass > 1e-12 {
                schwarzschild_profile(n, mass, r.max(schwarzschild_horizon(n, mass)))?
            } else {
                0.0
            };
            let dev = (g.f[lin] - (g.class.asymptotic_offset + model)).abs();
            max_dev = max_dev.max(dev);
            if dev > g.class.gamma * r.powf(g.class.alpha) + tol {
                asymptotic_ok = false;
            }
        }
    }

    Ok(ValidationReport {
        gamma_ok,
        max_gradient,
        depth_ok,
        depth: depth_rep.depth,
        penrose_ok,
        penrose_margin: pen.margin,
        mean_convex_ok,
        min_mean_curvature: min_h,
        asymptotic_ok,
        max_asymptotic_deviation: max_dev,
        outward_minimizing_assumed: true,
    })
}

/// One row of a convergence report.
#[derive(Debug, Clone)]
pub struct MemberRecord {
    pub index: usize,
    /// schedule parameter: mass m_j or well width w_j
    pub parameter: f64,
    pub mass: f64,
    pub h0: f64,
    pub h0_flag: H0Flag,
    pub slab_height: f64,
    pub vol_omega: f64,
    pub vol_ball: f64,
    pub vol_deficit: f64,
    pub vol_below_zero: f64,
    pub depth: f64,
    pub depth_excess: f64,
    pub epsilon: f64,
    pub lambda: f64,
    pub gh_bound: f64,
    pub flat_bound: f64,
    pub ball_volume_raw: f64,
    pub ball_volume_calibrated: f64,
    pub ball_deficit: f64,
    pub penrose_margin: f64,
    pub max_gradient: f64,
    pub min_mean_curvature: f64,
}

/// Monotone-trend verdict for one report column.
#[derive(Debug, Clone)]
pub struct TrendVerdict {
    pub column: &'static str,
    /// nonincreasing within `step_tolerance` per step
    pub monotone_ok: bool,
    pub final_over_initial: f64,
}

#[derive(Debug, Clone)]
pub struct ConvergenceReport {
    pub members: Vec<MemberRecord>,
    pub trends: Vec<TrendVerdict>,
    /// per-step relative tolerance used for the monotone verdicts
    pub step_tolerance: f64,
}

fn trend(column: &'static str, values: &[f64], step_tol: f64) -> TrendVerdict {
    let mut monotone_ok = true;
    for w in values.windows(2) {
        if w[1] > w[0] * (1.0 + step_tol) + 1e-12 {
            monotone_ok = false;
        }
    }
    let final_over_initial = if values[0].abs() > 1e-300 {
        values[values.len() - 1] / values[0]
    } else {
        f64::NAN
    };
    TrendVerdict {
        column,
        monotone_ok,
        final_over_initial,
    }
}

/// Uniform distance and two-sided ratio bound between two distance matrices
/// on the same sample points.
fn matrix_deviation(a: &[Vec<f64>], b: &[Vec<f64>]) -> (f64, f64) {
    let mut eps: f64 = 0.0;
    let mut lambda: f64 = 1.0;
    for i in 0..a.len() {
        for j in 0..a.len() {
            if i == j {
                continue;
            }
            eps = eps.max((a[i][j] - b[i][j]).abs());
            if a[i][j] > 1e-12 && b[i][j] > 1e-12 {
                lambda = lambda.max(a[i][j] / b[i][j]).max(b[i][j] / a[i][j]);
            }
        }
    }
    (eps, lambda)
}

/// Construct member j of the family (experiment grid).
pub fn make_member(spec: &FamilySpec, j: usize) -> Result<GraphManifold> {
    let p = spec.schedule[j];
    match spec.kind {
        FamilyKind::Schwarzschild => {
            make_schwarzschild(spec.n, p, spec.class, spec.r_max, spec.spacing)
        }
        FamilyKind::PerturbedSchwarzschild => {
            // mass-ramp base carrying strictly positive curvature on an
            // annulus inside [r0/2, r0], with a bump riding on it
            let a = 0.55 * spec.class.r0;
            let b = 0.95 * spec.class.r0;
            let ramp = MassRamp::new(spec.n, p * 0.5, p, a, b)?;
            let domain = GraphDomain::new(spec.n, spec.r_max, spec.spacing, ramp.hole_radius())?;
            let base = GraphManifold::from_profile(
                domain,
                Profile::radial(RadialKind::MassRamp(ramp)),
                spec.class,
            );
            make_perturbed(
                &base,
                Perturbation::Ridge {
                    amplitude: 0.01 * p,
                    center_radius: 0.5 * (a + b),
                    width: 0.3 * (b - a),
                },
                1e-9,
            )
        }
        FamilyKind::ThinWell => make_thin_well(
            spec.n,
            spec.well_depth,
            p,
            spec.class,
            spec.r_max,
            spec.spacing,
        ),
    }
}

/// Nominal ADM mass of member j (thin wells are exactly flat outside the
/// well, so their mass vanishes).
pub fn member_mass(spec: &FamilySpec, j: usize) -> f64 {
    match spec.kind {
        FamilyKind::ThinWell => 0.0,
        _ => spec.schedule[j],
    }
}

/// The h0 crossing happens at the mass scale, far below the experiment grid
/// for small members; measure it on a dedicated fine grid.
fn h0_on_fine_grid(spec: &FamilySpec, mass: f64) -> Result<(f64, H0Flag)> {
    let crossing = 2.0 * 2.0f64.sqrt() * mass; // n = 3 closed-form scale
    let r_max = (6.0 * mass).max(3.0 * crossing);
    let spacing = (mass / 5.0).min(r_max / 24.0);
    let fine = make_schwarzschild(
        spec.n,
        mass,
        ClassParams {
            r0: 5.0 * mass,
            ..spec.class
        },
        r_max,
        spacing,
    )?;
    let rep = fine.h0_height(mass)?;
    Ok((rep.h0, rep.flag))
}

/// Run the stability experiment over the whole family: normalize, slab
/// check, volumes, depth, boundary pullback against the flat reference, and
/// the Gromov-Hausdorff / intrinsic-flat bounds per member.
pub fn stability_experiment(spec: &FamilySpec) -> Result<ConvergenceReport> {
    spec.validate()?;
    let n = spec.n;
    let r = spec.radius;
    let flat_domain = GraphDomain::new(n, spec.r_max, spec.spacing, None)?;
    let flat = GraphManifold::from_profile(flat_domain, Profile::flat(0.0), spec.class);
    let flat_pullback = flat.boundary_pullback(r, spec.angular_samples)?;
    let vol_ball = unit_ball_volume(n) * r.powi(n as i32);
    let sphere_mass = unit_sphere_area(n) * r.powi(n as i32 - 1);

    let mut members = Vec::new();
    for j in 0..spec.schedule.len() {
        let g = make_member(spec, j)?;
        let mass = member_mass(spec, j);
        let validation = validate_member(&g, mass, 1e-6)?;
        if !validation.all_ok() {
            return Err(Error::ClassValidation {
                index: j,
                reason: validation.describe(),
            });
        }

        // normalize so that h0 = 0 (thin wells are already normalized:
        // their mass vanishes and f <= 0 everywhere)
        let (gn, h0, h0_flag) = if mass > 0.0 {
            let (h0, flag) = h0_on_fine_grid(spec, mass)?;
            (g.shifted_down(h0), h0, flag)
        } else {
            (g.clone(), 0.0, H0Flag::Degenerate)
        };

        let slab_height = gn.max_height_within(r);
        let vol_omega = gn.induced_volume(r)?;
        let (vol_below, _) = gn.volume_split(r)?;
        let depth_rep = gn.depth(spec.class.r0)?;
        let bm = gn.boundary_pullback(r, spec.angular_samples)?;
        let (eps, lambda) = matrix_deviation(&bm.matrix, &flat_pullback.matrix);
        let gh = 2.0 * eps;
        let fb = flat_bound(n - 1, lambda, eps, sphere_mass);

        let p_node = gn.domain.nearest_node(&[spec.class.r0, 0.0, 0.0, 0.0]);
        let ball = gn.intrinsic_ball_volume(&p_node, spec.ball_radius)?;
        let ball_exact = unit_ball_volume(n) * spec.ball_radius.powi(n as i32);

        members.push(MemberRecord {
            index: j,
            parameter: spec.schedule[j],
            mass,
            h0,
            h0_flag,
            slab_height,
            vol_omega,
            vol_ball,
            vol_deficit: (vol_omega - vol_ball).abs(),
            vol_below_zero: vol_below,
            depth: depth_rep.depth,
            depth_excess: depth_rep.depth - spec.class.r0,
            epsilon: eps,
            lambda,
            gh_bound: gh,
            flat_bound: fb,
            ball_volume_raw: ball.raw,
            ball_volume_calibrated: ball.calibrated,
            ball_deficit: (ball.calibrated - ball_exact).abs() / ball_exact,
            penrose_margin: validation.penrose_margin,
            max_gradient: validation.max_gradient,
            min_mean_curvature: validation.min_mean_curvature,
        });
    }

    let step_tolerance = 0.02;
    let col = |f: fn(&MemberRecord) -> f64| -> Vec<f64> { members.iter().map(f).collect() };
    let trends = vec![
        trend("slab_height", &col(|m| m.slab_height), step_tolerance),
        trend("vol_deficit", &col(|m| m.vol_deficit), step_tolerance),
        trend("epsilon", &col(|m| m.epsilon), step_tolerance),
        trend("gh_bound", &col(|m| m.gh_bound), step_tolerance),
        trend("flat_bound", &col(|m| m.flat_bound), step_tolerance),
    ];
    Ok(ConvergenceReport {
        members,
        trends,
        step_tolerance,
    })
}

/// Where the pointed experiment picks its base points.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointedKind {
    /// On Σ(r0), above a fixed direction of ∂B(r0) — the theorem setting.
    Boundary,
    /// At the bottom of the well — the disappearing-points negative control.
    WellBottom,
}

#[derive(Debug, Clone)]
pub struct PointedRecord {
    pub index: usize,
    pub parameter: f64,
    pub ball_volume_raw: f64,
    pub ball_volume_calibrated: f64,
    pub euclidean_volume: f64,
    pub deficit: f64,
    pub inclusion_ok: bool,
    pub escaped_grid: bool,
}

#[derive(Debug, Clone)]
pub struct PointedReport {
    pub rows: Vec<PointedRecord>,
    pub kind: PointedKind,
    pub ball_radius: f64,
    /// final calibrated deficit under 5 percent
    pub converging: bool,
}

/// Track Vol(B_p(R)) along the family at points on Σ(r0) (or at well
/// bottoms for the negative control).
pub fn pointed_ball_experiment(
    spec: &FamilySpec,
    big_r: f64,
    kind: PointedKind,
) -> Result<PointedReport> {
    spec.validate()?;
    if big_r >= spec.r_max - spec.class.r0 {
        return Err(Error::InvalidParameter(format!(
            "ball radius {big_r} does not fit: need R < r_max - r0"
        )));
    }
    let n = spec.n;
    let euclid = unit_ball_volume(n) * big_r.powi(n as i32);
    let mut rows = Vec::new();
    for j in 0..spec.schedule.len() {
        let g = make_member(spec, j)?;
        let p = match kind {
            PointedKind::Boundary => g.domain.nearest_node(&[spec.class.r0, 0.0, 0.0, 0.0]),
            PointedKind::WellBottom => [0i64; 4],
        };
        let ball = g.intrinsic_ball_volume(&p, big_r)?;
        let inclusion_ok = match kind {
            PointedKind::Boundary => g.ball_inclusion_check(&p, big_r, big_r + 1.0)?,
            PointedKind::WellBottom => false,
        };
        rows.push(PointedRecord {
            index: j,
            parameter: spec.schedule[j],
            ball_volume_raw: ball.raw,
            ball_volume_calibrated: ball.calibrated,
            euclidean_volume: euclid,
            deficit: (ball.calibrated - euclid).abs() / euclid,
            inclusion_ok,
            escaped_grid: ball.escaped_grid,
        });
    }
    let converging = rows.last().map_or(false, |r| r.deficit < 0.05);
    Ok(PointedReport {
        rows,
        kind,
        ball_radius: big_r,
        converging,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn schwarzschild_spec() -> FamilySpec {
        FamilySpec {
            kind: FamilyKind::Schwarzschild,
            n: 3,
            schedule: vec![0.5, 0.25, 0.125],
            class: ClassParams {
                r0: 3.0,
                gamma: 1.5,
                depth_bound: 4.5,
                alpha: -1.0,
                asymptotic_offset: 0.0,
            },
            spacing: 0.25,
            r_max: 5.0,
            radius: 4.0,
            well_depth: 0.0,
            angular_samples: 16,
            ball_radius: 1.5,
        }
    }

    #[test]
    fn schwarzschild_member_validates() {
        let spec = schwarzschild_spec();
        let g = make_member(&spec, 0).unwrap();
        let rep = validate_member(&g, 0.5, 1e-6).unwrap();
        assert!(rep.all_ok(), "{}", rep.describe());
        // closed-form gradient at r0/2 is the measured max
        let want = crate::profile::schwarzschild_slope(3, 0.5, 1.5);
        assert!(
            (rep.max_gradient - want).abs() < 0.05 * want,
            "max grad {} vs {want}",
            rep.max_gradient
        );
    }

    #[test]
    fn horizon_at_half_r0_is_rejected() {
        let spec = schwarzschild_spec();
        // horizon 2m = r0/2 = 1.5 at m = 0.75
        assert!(make_schwarzschild(3, 0.75, spec.class, 5.0, 0.25).is_err());
    }

    #[test]
    fn depth_excess_shrinks_with_mass() {
        let spec = schwarzschild_spec();
        let mut excesses = Vec::new();
        for j in 0..spec.schedule.len() {
            let g = make_member(&spec, j).unwrap();
            let rep = g.depth(spec.class.r0).unwrap();
            excesses.push(rep.depth - spec.class.r0);
        }
        // the gravity-well contribution decays as the mass drops
        assert!(
            excesses[2] < excesses[0],
            "excess did not shrink: {excesses:?}"
        );
    }

    #[test]
    fn zero_amplitude_bump_is_identity() {
        let spec = schwarzschild_spec();
        let g = make_member(&spec, 0).unwrap();
        let same = make_perturbed(
            &g,
            Perturbation::Bump(BumpSpec {
                center: [2.0, 0.0, 0.0, 0.0],
                width: 0.5,
                amplitude: 0.0,
            }),
            1e-6,
        )
        .unwrap();
        assert_eq!(g.f, same.f);
    }

    #[test]
    fn bump_on_zero_curvature_base_is_rejected() {
        // pure Schwarzschild has R = 0: no positive margin anywhere
        let spec = schwarzschild_spec();
        let g = make_member(&spec, 0).unwrap();
        let res = make_perturbed(
            &g,
            Perturbation::Bump(BumpSpec {
                center: [2.0, 0.0, 0.0, 0.0],
                width: 0.5,
                amplitude: 0.01,
            }),
            1e-6,
        );
        assert!(matches!(res, Err(Error::ClassValidation { .. })));
    }

    #[test]
    fn small_bump_on_ramp_accepted_large_rejected() {
        let ramp = MassRamp::new(3, 0.15, 0.3, 1.65, 2.85).unwrap();
        let domain = GraphDomain::new(3, 4.6, 0.1, ramp.hole_radius()).unwrap();
        let base = GraphManifold::from_profile(
            domain,
            Profile::radial(RadialKind::MassRamp(ramp)),
            ClassParams {
                r0: 3.0,
                gamma: 1.5,
                depth_bound: 5.0,
                alpha: -1.0,
                asymptotic_offset: 0.0,
            },
        );
        // rotationally symmetric ridge: exact curvature validation
        let ridge = Perturbation::Ridge {
            amplitude: 0.004,
            center_radius: 2.25,
            width: 0.35,
        };
        let ok = make_perturbed(&base, ridge, 1e-9);
        assert!(ok.is_ok(), "{ok:?}");
        let too_big = make_perturbed(
            &base,
            Perturbation::Ridge {
                amplitude: 0.8,
                center_radius: 2.25,
                width: 0.35,
            },
            1e-9,
        );
        assert!(too_big.is_err(), "{too_big:?}");
        // off-center bump: finite-difference validation with a tolerance
        // covering the noise floor at this spacing
        let bump = Perturbation::Bump(BumpSpec {
            center: [2.25, 0.0, 0.0, 0.0],
            width: 0.35,
            amplitude: 1.5e-3,
        });
        let ok = make_perturbed(&base, bump, 0.04);
        assert!(ok.is_ok(), "{ok:?}");
        let big_bump = make_perturbed(
            &base,
            Perturbation::Bump(BumpSpec {
                center: [2.25, 0.0, 0.0, 0.0],
                width: 0.35,
                amplitude: 0.8,
            }),
            0.04,
        );
        assert!(big_bump.is_err(), "{big_bump:?}");
    }

    #[test]
    fn flat_singleton_has_vanishing_deviations() {
        // a flat member measured against the flat reference: every deviation
        // column is (numerically) zero
        let d = GraphDomain::new(3, 3.0, 0.2, None).unwrap();
        let class = ClassParams {
            r0: 1.5,
            gamma: 1.0,
            depth_bound: 2.5,
            alpha: -1.0,
            asymptotic_offset: 0.0,
        };
        let flat = GraphManifold::from_profile(d, Profile::flat(0.0), class);
        let (ok, slab) = flat.slab_check(1e-12, 2.0);
        assert!(ok && slab == 0.0);
        let vol = flat.induced_volume(2.0).unwrap();
        let ball = unit_ball_volume(3) * 8.0;
        assert!((vol - ball).abs() < 0.01 * ball);
        let bm = flat.boundary_pullback(2.0, 12).unwrap();
        let mut eps: f64 = 0.0;
        for i in 0..bm.matrix.len() {
            for j in 0..bm.matrix.len() {
                eps = eps.max((bm.matrix[i][j] - bm.matrix[i][j]).abs());
            }
        }
        assert_eq!(eps, 0.0);
    }

    #[test]
    fn thin_well_depth_is_calibrated() {
        let class = ClassParams {
            r0: 1.0,
            gamma: 1.0,
            depth_bound: 6.0,
            alpha: -1.0,
            asymptotic_offset: 0.0,
        };
        let g = make_thin_well(3, 5.0, 0.45, class, 1.6, 0.05).unwrap();
        let rep = g.depth(1.0).unwrap();
        assert!(
            (rep.depth - 5.0).abs() < 0.05 * 5.0,
            "depth {} vs 5.0",
            rep.depth
        );
        // zero designed depth: too shallow, errors
        assert!(make_thin_well(3, 0.0, 0.45, class, 1.6, 0.05).is_err());
        // unresolvable width errors
        assert!(make_thin_well(3, 5.0, 0.08, class, 1.6, 0.05).is_err());
    }

    #[test]
    fn thin_well_volume_deficit_shrinks_with_width() {
        let class = ClassParams {
            r0: 1.0,
            gamma: 1.0,
            depth_bound: 6.0,
            alpha: -1.0,
            asymptotic_offset: 0.0,
        };
        let vol = |w: f64| -> f64 {
            let g = make_thin_well(3, 5.0, w, class, 1.6, 0.025).unwrap();
            let v = g.induced_volume(1.4).unwrap();
            let ball = unit_ball_volume(3) * 1.4f64.powi(3);
            (v - ball).abs()
        };
        let wide = vol(0.45);
        let thin = vol(0.12);
        assert!(
            thin < 0.5 * wide,
            "deficit did not shrink: wide {wide}, thin {thin}"
        );
    }
}
